//! A small surface-evolver: the pop map, uniform refinement and mass
//! gradient descent on complexes with pinned boundary.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Matrix4x3};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cells::CellType;
use crate::geom::{compensated_sum, Vec4};
use crate::mass::{cone_complex, Complex3, Hull, MassError, MeshBuilder};
use crate::partition::{build_partition, PartitionComplex, PartitionError, PartitionLabel};

#[derive(Debug, Error)]
pub enum EvolverError {
    #[error("cell {cell} is not the cone over a single hull facet")]
    NotFacetAligned { cell: usize },
    #[error("pop centre is within {distance:.3e} of the surface")]
    CenterOnSurface { distance: f64 },
    #[error("pop centre cannot be located: {0}")]
    RegionAmbiguous(String),
    #[error("line search failed at step {step} with gradient norm {grad_norm:.3e}")]
    StalledAtNonStationary {
        step: usize,
        grad_norm: f64,
        trace: Box<EvolutionTrace>,
    },
    #[error("descent did not clear the significance bar: {0}")]
    Inconclusive(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Mass(#[from] MassError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Centre and hulls of a pop.
#[derive(Clone, Debug)]
pub struct PopSpec {
    pub p: Vec4,
    pub hull: Hull,
    pub half: Hull,
    /// Cell whose cone contains `p`.
    pub cell: usize,
    /// Facet of the hull spanning that cell.
    pub facet: usize,
}

impl PopSpec {
    /// Centre on the ray through the centroid of `cell` at a quarter of the
    /// hull inradius.
    pub fn for_cell(part: &PartitionComplex, hull: &Hull, cell: usize) -> Result<PopSpec, EvolverError> {
        let c = part
            .cells
            .get(cell)
            .ok_or_else(|| EvolverError::RegionAmbiguous(format!("no cell {cell}")))?;
        let dir = c.centre();
        let facet = hull
            .facet_containing(&part.cell_points(cell))
            .ok_or(EvolverError::NotFacetAligned { cell })?;
        let p = dir * (0.25 * hull.inradius());
        let spec = PopSpec {
            p,
            hull: hull.clone(),
            half: hull.scaled(0.5),
            cell,
            facet,
        };
        spec.validate(part)?;
        Ok(spec)
    }

    fn validate(&self, part: &PartitionComplex) -> Result<(), EvolverError> {
        if self.half.gauge(&self.p) >= 1.0 {
            return Err(EvolverError::RegionAmbiguous("centre outside the half hull".into()));
        }
        let inside: Vec<usize> = (0..part.cells.len()).filter(|&k| part.cells[k].contains(&self.p)).collect();
        if inside != [self.cell] {
            return Err(EvolverError::RegionAmbiguous(format!("centre lies in cells {inside:?}")));
        }
        let distance = part.cell_faces[self.cell]
            .iter()
            .map(|&f| part.faces[f].normal.dot(&self.p).abs())
            .fold(f64::INFINITY, f64::min);
        if distance <= 1e-6 {
            return Err(EvolverError::CenterOnSurface { distance });
        }
        Ok(())
    }

    /// The pop map: identity off the half hull, otherwise the point where
    /// the half-line from `p` through `x` leaves the half hull.
    pub fn map(&self, x: &Vec4) -> Vec4 {
        if self.half.gauge(x) >= 1.0 {
            return *x;
        }
        let d = x - self.p;
        if d.norm() == 0.0 {
            return *x;
        }
        let t = self
            .half
            .facets
            .iter()
            .filter_map(|f| {
                let s = f.normal.dot(&d);
                (s > 0.0).then(|| (f.offset - f.normal.dot(&self.p)) / s)
            })
            .fold(f64::INFINITY, f64::min);
        self.p + d * t
    }
}

/// The popped competitor: the cone outside the half hull together with the
/// half hull's boundary minus the facet facing `p`.
pub fn pop(part: &PartitionComplex, spec: &PopSpec) -> Result<Complex3, EvolverError> {
    let hull = &spec.hull;
    let boundary = |x: &Vec4| hull.on_boundary(x);
    let mut mb = MeshBuilder::default();
    for (fi, f) in part.faces.iter().enumerate() {
        let poly: Vec<Vec4> = f.vertices.iter().map(|&i| part.vertices[i]).collect();
        if poly.len() < 3 || hull.facet_containing(&poly).is_none() {
            return Err(EvolverError::NotFacetAligned { cell: f.cells[0] });
        }
        let mut pts = poly.clone();
        pts.extend(poly.iter().map(|v| v * spec.half.scale));
        mb.add_convex(&pts, &boundary)
            .map_err(|reason| MassError::ClipDegeneracy { face: fi, reason })?;
    }
    let never = |_: &Vec4| false;
    for k in 0..spec.half.facets.len() {
        if k == spec.facet {
            continue;
        }
        mb.add_convex(&spec.half.facet_points(k), &never)
            .map_err(|reason| MassError::ClipDegeneracy { face: k, reason })?;
    }
    Ok(mb.finish())
}

/// Red refinement: every tetrahedron becomes eight, splitting the central
/// octahedron along its shortest diagonal. Midpoints of pinned edges are
/// pinned.
pub fn refine(c: &Complex3) -> Complex3 {
    let mut vertices = c.vertices.clone();
    let mut fixed = c.fixed.clone();
    let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec4>, fixed: &mut Vec<bool>| {
        let key = (a.min(b), a.max(b));
        *mids.entry(key).or_insert_with(|| {
            vertices.push((vertices[a] + vertices[b]) * 0.5);
            fixed.push(fixed[a] && fixed[b]);
            vertices.len() - 1
        })
    };
    let mut tets = Vec::with_capacity(c.tets.len() * 8);
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for t in &c.tets {
        let m: Vec<usize> = PAIRS.iter().map(|&(i, j)| mid(t[i], t[j], &mut vertices, &mut fixed)).collect();
        // m indices: 0:01 1:02 2:03 3:12 4:13 5:23
        tets.push([t[0], m[0], m[1], m[2]]);
        tets.push([t[1], m[0], m[3], m[4]]);
        tets.push([t[2], m[1], m[3], m[5]]);
        tets.push([t[3], m[2], m[4], m[5]]);
        // opposite midpoint pairs are the octahedron diagonals
        let diags = [(0, 5), (1, 4), (2, 3)];
        let len = |(a, b): (usize, usize)| (vertices[m[a]] - vertices[m[b]]).norm();
        let (da, db) = diags
            .iter()
            .copied()
            .min_by(|x, y| len(*x).total_cmp(&len(*y)))
            .unwrap();
        let others: Vec<(usize, usize)> = diags.iter().copied().filter(|&d| d != (da, db)).collect();
        let ring = [others[0].0, others[1].0, others[0].1, others[1].1];
        for r in 0..4 {
            tets.push([m[da], m[db], m[ring[r]], m[ring[(r + 1) % 4]]]);
        }
    }
    Complex3 { vertices, tets, fixed }
}

/// Refines until the longest edge is below `max_edge` or `max_levels` is
/// reached; returns the complex and the number of levels applied.
pub fn refine_to(c: &Complex3, max_edge: f64, max_levels: u32) -> (Complex3, u32) {
    let mut out = c.clone();
    let mut levels = 0;
    while levels < max_levels && out.max_edge() >= max_edge {
        out = refine(&out);
        levels += 1;
    }
    (out, levels)
}

fn tet_gradient(p: [&Vec4; 4]) -> Option<[Vec4; 4]> {
    let e = Matrix4x3::from_columns(&[p[1] - p[0], p[2] - p[0], p[3] - p[0]]);
    let g: Matrix3<f64> = e.transpose() * e;
    let det = g.determinant();
    if det <= 0.0 {
        return None;
    }
    let v = det.sqrt() / 6.0;
    let gi = g.try_inverse()?;
    let d = e * gi * v;
    let c = [d.column(0).into_owned(), d.column(1).into_owned(), d.column(2).into_owned()];
    Some([-(c[0] + c[1] + c[2]), c[0], c[1], c[2]])
}

/// Gradient of the mass with respect to every vertex; zero on pinned ones.
pub fn mass_gradient(c: &Complex3) -> Vec<Vec4> {
    let parts: Vec<Option<[Vec4; 4]>> = c
        .tets
        .par_iter()
        .map(|t| tet_gradient([&c.vertices[t[0]], &c.vertices[t[1]], &c.vertices[t[2]], &c.vertices[t[3]]]))
        .collect();
    let mut g = vec![Vec4::zeros(); c.vertices.len()];
    for (t, part) in c.tets.iter().zip(&parts) {
        if let Some(d) = part {
            for k in 0..4 {
                g[t[k]] += d[k];
            }
        }
    }
    for (gi, &f) in g.iter_mut().zip(&c.fixed) {
        if f {
            *gi = Vec4::zeros();
        }
    }
    g
}

/// Per-vertex scaling of the descent direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scaling {
    /// Raw gradient.
    Plain,
    /// Divide by a quarter of the incident mass.
    Lumped,
    /// Divide by the diagonal curvature estimate Σ A²/(9V), with A the
    /// area of the face opposite the vertex in each incident tetrahedron.
    Stiffness,
}

impl FromStr for Scaling {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(Scaling::Plain),
            "lumped" => Ok(Scaling::Lumped),
            "stiffness" => Ok(Scaling::Stiffness),
            _ => Err(format!("unknown scaling '{s}'")),
        }
    }
}

fn vertex_weights(c: &Complex3, scaling: Scaling) -> Vec<f64> {
    let per_tet: Vec<[f64; 4]> = c
        .tets
        .par_iter()
        .map(|t| {
            let v = c.tet_volume(t);
            match scaling {
                Scaling::Plain => [1.0; 4],
                Scaling::Lumped => [v / 4.0; 4],
                Scaling::Stiffness => {
                    let p = t.map(|i| c.vertices[i]);
                    let mut w = [0.0; 4];
                    if v > 0.0 {
                        for (k, wk) in w.iter_mut().enumerate() {
                            let o: Vec<Vec4> = (0..4).filter(|&j| j != k).map(|j| p[j]).collect();
                            let a = crate::geom::triangle_area(&o[0], &o[1], &o[2]);
                            *wk = a * a / (9.0 * v);
                        }
                    }
                    w
                }
            }
        })
        .collect();
    let mut w = vec![0.0; c.vertices.len()];
    for (t, pw) in c.tets.iter().zip(per_tet) {
        for k in 0..4 {
            w[t[k]] += pw[k];
        }
    }
    if scaling == Scaling::Plain {
        w.iter_mut().for_each(|x| *x = 1.0);
    }
    w
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoParams {
    /// Sufficient-decrease constant of the Armijo condition.
    pub armijo: f64,
    pub shrink: f64,
    pub grow: f64,
    pub max_backtracks: u32,
    /// Descent stops when the direction's squared norm drops below this.
    pub stationary_tol: f64,
    pub scaling: Scaling,
}

impl Default for GoParams {
    fn default() -> Self {
        GoParams {
            armijo: 1e-4,
            shrink: 0.5,
            grow: 2.0,
            max_backtracks: 60,
            stationary_tol: 1e-24,
            scaling: Scaling::Stiffness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub mass: f64,
    pub step_size: f64,
    pub max_disp: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TraceStatus {
    StepsExhausted,
    Stationary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolutionTrace {
    pub records: Vec<StepRecord>,
    pub status: TraceStatus,
}

impl EvolutionTrace {
    pub fn initial_mass(&self) -> f64 {
        self.records[0].mass
    }

    pub fn final_mass(&self) -> f64 {
        self.records.last().map(|r| r.mass).unwrap_or(f64::NAN)
    }

    pub fn relative_decrease(&self) -> f64 {
        (self.initial_mass() - self.final_mass()) / self.initial_mass()
    }

    pub fn is_monotone(&self) -> bool {
        self.records.windows(2).all(|w| w[1].mass <= w[0].mass)
    }

    /// CSV with columns step, mass, step_size, max_disp.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,mass,step_size,max_disp\n");
        for r in &self.records {
            s.push_str(&format!("{},{:.12e},{:.12e},{:.12e}\n", r.step, r.mass, r.step_size, r.max_disp));
        }
        s
    }
}

/// Gradient descent with a global Armijo step; row 0 of the trace is the
/// starting mass.
pub fn go(c: &Complex3, steps: usize, params: &GoParams) -> Result<(Complex3, EvolutionTrace), EvolverError> {
    let mut cur = c.clone();
    let mut m = cur.mass();
    let mut records = vec![StepRecord {
        step: 0,
        mass: m,
        step_size: 0.0,
        max_disp: 0.0,
    }];
    let scale = cur.max_edge().max(1e-12);
    let mut t = f64::NAN;
    for step in 1..=steps {
        let g = mass_gradient(&cur);
        let w = vertex_weights(&cur, params.scaling);
        let dir: Vec<Vec4> = g
            .iter()
            .zip(&w)
            .map(|(gi, &wi)| if wi > 0.0 { -gi / wi } else { Vec4::zeros() })
            .collect();
        let slope = compensated_sum(g.iter().zip(&dir).map(|(a, b)| a.dot(b)));
        let dmax = dir.iter().map(|d| d.norm()).fold(0.0, f64::max);
        if -slope <= params.stationary_tol || dmax == 0.0 {
            return Ok((cur, EvolutionTrace { records, status: TraceStatus::Stationary }));
        }
        if !t.is_finite() {
            t = 0.05 * scale / dmax;
        } else {
            t *= params.grow;
        }
        let mut accepted = None;
        for _ in 0..params.max_backtracks {
            let mut trial = cur.clone();
            for (v, d) in trial.vertices.iter_mut().zip(&dir) {
                *v += d * t;
            }
            let mt = trial.mass();
            if mt <= m + params.armijo * t * slope {
                accepted = Some((trial, mt));
                break;
            }
            t *= params.shrink;
        }
        match accepted {
            Some((next, mt)) => {
                cur = next;
                m = mt;
                records.push(StepRecord {
                    step,
                    mass: m,
                    step_size: t,
                    max_disp: t * dmax,
                });
            }
            None => {
                let grad_norm = compensated_sum(g.iter().map(|x| x.norm_squared())).sqrt();
                return Err(EvolverError::StalledAtNonStationary {
                    step,
                    grad_norm,
                    trace: Box::new(EvolutionTrace {
                        records,
                        status: TraceStatus::StepsExhausted,
                    }),
                });
            }
        }
    }
    Ok((cur, EvolutionTrace { records, status: TraceStatus::StepsExhausted }))
}

/// Which cell a pop is centred on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PopCell {
    Index(usize),
    /// First cell of the given type.
    Type(CellType),
}

impl FromStr for PopCell {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(i) = s.parse::<usize>() {
            return Ok(PopCell::Index(i));
        }
        let t = s.trim_start_matches(['C', 'c']);
        t.parse::<usize>()
            .ok()
            .and_then(CellType::from_index)
            .map(PopCell::Type)
            .ok_or_else(|| format!("bad cell '{s}'"))
    }
}

impl fmt::Display for PopCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PopCell::Index(i) => write!(f, "{i}"),
            PopCell::Type(t) => write!(f, "{t}"),
        }
    }
}

/// A descent experiment read from `key = value` lines.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub label: PartitionLabel,
    pub pop_cell: Option<PopCell>,
    pub steps: usize,
    /// Refinement levels of the resolutions to run.
    pub refine_levels: Vec<u32>,
    pub seed: u64,
    pub gradient_probes: usize,
    pub params: GoParams,
}

impl ExperimentConfig {
    pub fn new(name: &str, label: PartitionLabel) -> Self {
        ExperimentConfig {
            name: name.to_string(),
            label,
            pop_cell: None,
            steps: 250,
            refine_levels: vec![1, 2],
            seed: 1,
            gradient_probes: 100,
            params: GoParams::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, EvolverError> {
        let mut cfg: Option<ExperimentConfig> = None;
        let mut pending: Vec<(usize, String, String)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(EvolverError::Config {
                line: n + 1,
                message: format!("expected key = value, found '{line}'"),
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k == "partition" {
                let label = v.parse::<PartitionLabel>().map_err(|e| EvolverError::Config {
                    line: n + 1,
                    message: e.to_string(),
                })?;
                cfg = Some(ExperimentConfig::new(&format!("{label}"), label));
            } else {
                pending.push((n + 1, k, v));
            }
        }
        let mut cfg = cfg.ok_or(EvolverError::Config {
            line: 0,
            message: "missing 'partition'".into(),
        })?;
        for (line, k, v) in pending {
            let bad = |message: String| EvolverError::Config { line, message };
            let num = |v: &str| v.parse::<f64>().map_err(|e| bad(format!("{k}: {e}")));
            let int = |v: &str| v.parse::<usize>().map_err(|e| bad(format!("{k}: {e}")));
            match k.as_str() {
                "name" => cfg.name = v,
                "pop_cell" => cfg.pop_cell = if v == "none" { None } else { Some(v.parse().map_err(bad)?) },
                "steps" => cfg.steps = int(&v)?,
                "refine_levels" => {
                    cfg.refine_levels = v
                        .split(',')
                        .map(|s| s.trim().parse::<u32>().map_err(|e| bad(format!("{k}: {e}"))))
                        .collect::<Result<_, _>>()?
                }
                "seed" => cfg.seed = int(&v)? as u64,
                "gradient_probes" => cfg.gradient_probes = int(&v)?,
                "armijo" => cfg.params.armijo = num(&v)?,
                "shrink" => cfg.params.shrink = num(&v)?,
                "grow" => cfg.params.grow = num(&v)?,
                "max_backtracks" => cfg.params.max_backtracks = int(&v)? as u32,
                "stationary_tol" => cfg.params.stationary_tol = num(&v)?,
                "scaling" => cfg.params.scaling = v.parse().map_err(bad)?,
                _ => return Err(bad(format!("unknown key '{k}'"))),
            }
        }
        if cfg.refine_levels.is_empty() {
            return Err(EvolverError::Config {
                line: 0,
                message: "refine_levels is empty".into(),
            });
        }
        Ok(cfg)
    }
}

/// Outcome at one mesh resolution.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionRun {
    pub refine_level: u32,
    pub tets: usize,
    pub max_edge: f64,
    pub start_mass: f64,
    pub final_mass: f64,
    pub trace: EvolutionTrace,
    #[serde(skip)]
    pub final_complex: Complex3,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub label: PartitionLabel,
    pub cone_mass: f64,
    pub popped_mass: Option<f64>,
    pub hull_inradius: f64,
    pub gradient_check: GradientCheck,
    pub runs: Vec<ResolutionRun>,
    #[serde(skip)]
    pub cone: Complex3,
    #[serde(skip)]
    pub popped: Option<Complex3>,
}

impl ExperimentReport {
    /// Every resolution ends strictly below the unpopped cone mass.
    pub fn decreases_below_cone(&self) -> bool {
        self.runs.iter().all(|r| r.final_mass < self.cone_mass)
    }
}

/// Worst relative error of the gradient against central differences.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradientCheck {
    pub probes: usize,
    pub step: f64,
    pub max_relative_error: f64,
}

/// Compares directional derivatives along random free-vertex directions.
pub fn gradient_check(c: &Complex3, probes: usize, seed: u64) -> GradientCheck {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    let h = 1e-6;
    let g = mass_gradient(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free: Vec<usize> = (0..c.vertices.len()).filter(|&i| !c.fixed[i]).collect();
    let mut worst: f64 = 0.0;
    if free.is_empty() {
        return GradientCheck { probes: 0, step: h, max_relative_error: 0.0 };
    }
    for _ in 0..probes {
        let v = free[rng.random_range(0..free.len())];
        let d = crate::geom::sample_s3(&mut rng);
        let at = |s: f64| {
            let mut x = c.clone();
            x.vertices[v] += d * s;
            // only the star of v changes
            compensated_sum(x.tets.iter().filter(|t| t.contains(&v)).map(|t| x.tet_volume(t)))
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        let an = g[v].dot(&d);
        // scale by the summed magnitude of the star's contributions so that
        // cancellation at stationary vertices is measured against roundoff
        let star: f64 = c
            .tets
            .iter()
            .filter_map(|t| {
                let k = t.iter().position(|&w| w == v)?;
                let d = tet_gradient([&c.vertices[t[0]], &c.vertices[t[1]], &c.vertices[t[2]], &c.vertices[t[3]]])?;
                Some(d[k].norm())
            })
            .sum();
        let err = (fd - an).abs() / an.abs().max(star).max(1e-12);
        worst = worst.max(err);
    }
    GradientCheck {
        probes,
        step: h,
        max_relative_error: worst,
    }
}

pub fn pick_cell(part: &PartitionComplex, which: PopCell) -> Result<usize, EvolverError> {
    match which {
        PopCell::Index(i) if i < part.cells.len() => Ok(i),
        PopCell::Index(i) => Err(EvolverError::RegionAmbiguous(format!("no cell {i}"))),
        PopCell::Type(t) => part
            .cells
            .iter()
            .position(|c| c.cell_type == t)
            .ok_or_else(|| EvolverError::RegionAmbiguous(format!("no cell of type {t}"))),
    }
}

/// Cone (and optional pop) of a partition, then refine and descend at each
/// configured resolution.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, EvolverError> {
    let part = build_partition(cfg.label)?;
    let hull = Hull::from_partition(&part)?;
    let cone = cone_complex(&part, &hull)?;
    let cone_mass = cone.mass();
    let popped = match cfg.pop_cell {
        Some(w) => {
            let cell = pick_cell(&part, w)?;
            let spec = PopSpec::for_cell(&part, &hull, cell)?;
            Some(pop(&part, &spec)?)
        }
        None => None,
    };
    let start = popped.as_ref().unwrap_or(&cone);
    let gradient = gradient_check(&refine(start), cfg.gradient_probes, cfg.seed);
    let runs = cfg
        .refine_levels
        .par_iter()
        .map(|&level| {
            let mut c = start.clone();
            for _ in 0..level {
                c = refine(&c);
            }
            let (fin, trace) = go(&c, cfg.steps, &cfg.params)?;
            Ok(ResolutionRun {
                refine_level: level,
                tets: c.tets.len(),
                max_edge: c.max_edge(),
                start_mass: trace.initial_mass(),
                final_mass: trace.final_mass(),
                trace,
                final_complex: fin,
            })
        })
        .collect::<Result<Vec<_>, EvolverError>>()?;
    Ok(ExperimentReport {
        name: cfg.name.clone(),
        label: cfg.label,
        cone_mass,
        popped_mass: popped.as_ref().map(|c| c.mass()),
        hull_inradius: hull.inradius(),
        gradient_check: gradient,
        runs,
        cone,
        popped,
    })
}

/// Descent on the T₉ cone against a matched-budget T₄ control.
#[derive(Clone, Debug, Serialize)]
pub struct T9Elimination {
    pub refine_level: u32,
    pub steps: usize,
    pub residual: f64,
    /// Relative decrease the T₉ run must exceed.
    pub threshold: f64,
    pub t9: EvolutionTrace,
    pub control: EvolutionTrace,
    pub t9_decrease: f64,
    pub control_decrease: f64,
    /// Largest relative decrease the control may show.
    pub control_limit: f64,
}

impl T9Elimination {
    pub fn conclusive(&self) -> bool {
        self.t9_decrease >= self.threshold && self.control_decrease < self.control_limit
    }
}

/// Relative decrease the T₉ descent must exceed for realization residual
/// `r`: `max(1%, 10 r²)`.
pub fn t9_threshold(residual: f64) -> f64 {
    (10.0 * residual * residual).max(0.01)
}

pub fn eliminate_t9(refine_level: u32, steps: usize, params: &GoParams) -> Result<T9Elimination, EvolverError> {
    let run = |label: PartitionLabel| -> Result<(EvolutionTrace, f64), EvolverError> {
        let part = build_partition(label)?;
        let hull = Hull::from_partition(&part)?;
        let mut c = cone_complex(&part, &hull)?;
        for _ in 0..refine_level {
            c = refine(&c);
        }
        let (_, trace) = go(&c, steps, params)?;
        Ok((trace, part.residual))
    };
    let (a, b) = rayon::join(|| run(PartitionLabel::T9), || run(PartitionLabel::T4));
    let (t9, residual) = a?;
    let (control, _) = b?;
    let out = T9Elimination {
        refine_level,
        steps,
        residual,
        threshold: t9_threshold(residual),
        t9_decrease: t9.relative_decrease(),
        control_decrease: control.relative_decrease(),
        control_limit: 1e-3,
        t9,
        control,
    };
    Ok(out)
}

#[cfg(test)]
mod tests;

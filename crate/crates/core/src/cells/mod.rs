//! The eleven admissible 3-cells: combinatorics, realizations on S³, face
//! signatures and Monte Carlo volumes.

mod catalog;
mod distinct;
mod lm;
mod realize;

use std::f64::consts::PI;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{geodesic_distance, sample_s3, vertex_angle, Vec4};
use crate::sphere_trig::alpha;

pub(crate) use catalog::PENTAGON_ROLES;
pub use catalog::{combinatorics, find_adjacent_pair, find_triple_meeting, CellCombinatorics, CombFace};
pub use distinct::{verify_face_distinctness, DistinctnessItem, DistinctnessReport};
pub use lm::{lm_realize, LmOutcome};
pub use realize::{cell_from_lattice, infeasibility_certificate, realize_cell, smooth_cell, smooth_cells, EXACT_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CellError {
    #[error("cell {0} has no realization to measure")]
    NotRealized(CellType),
    #[error("constraint solver for {0} found no stationary point")]
    SolverDiverged(CellType),
    #[error("{0} requires an exact realization")]
    NotExact(CellType),
}

/// One of the eleven admissible cell types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellType {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
}

impl CellType {
    pub const ALL: [CellType; 11] = [
        CellType::C1,
        CellType::C2,
        CellType::C3,
        CellType::C4,
        CellType::C5,
        CellType::C6,
        CellType::C7,
        CellType::C8,
        CellType::C9,
        CellType::C10,
        CellType::C11,
    ];

    /// 1-based index.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(i: usize) -> Option<CellType> {
        (1..=11).contains(&i).then(|| Self::ALL[i - 1])
    }

    pub fn name(self) -> &'static str {
        match self {
            CellType::C1 => "half-sphere",
            CellType::C2 => "lens",
            CellType::C3 => "trihedron",
            CellType::C4 => "tetrahedron",
            CellType::C5 => "triangular prism",
            CellType::C6 => "cube",
            CellType::C7 => "pentagonal prism",
            CellType::C8 => "dodecahedron",
            CellType::C9 => "decahedron",
            CellType::C10 => "nonahedron",
            CellType::C11 => "octahedron",
        }
    }

    /// Face classes with multiplicities.
    pub fn face_inventory(self) -> Vec<(FaceClass, usize)> {
        use FaceClass::*;
        match self {
            CellType::C1 => vec![(Disk, 1)],
            CellType::C2 => vec![(Disk, 2)],
            CellType::C3 => vec![(Bigon, 3)],
            CellType::C4 => vec![(Regular(3), 4)],
            CellType::C5 => vec![(Regular(3), 2), (R5, 3)],
            CellType::C6 => vec![(Regular(4), 6)],
            CellType::C7 => vec![(Regular(5), 2), (R7, 5)],
            CellType::C8 => vec![(Regular(5), 12)],
            CellType::C9 => vec![(Regular(4), 2), (P9, 8)],
            CellType::C10 => vec![(Regular(4), 3), (P10, 6)],
            CellType::C11 => vec![(R11, 4), (P11, 4)],
        }
    }

    pub fn face_count(self) -> usize {
        self.face_inventory().iter().map(|(_, n)| n).sum()
    }

    pub fn is_smooth(self) -> bool {
        matches!(self, CellType::C1 | CellType::C2 | CellType::C3)
    }
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index())
    }
}

/// Geometric type of a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceClass {
    Disk,
    Bigon,
    Regular(u8),
    R5,
    R7,
    R11,
    P9,
    P10,
    P11,
}

impl FaceClass {
    pub fn tag(self) -> String {
        match self {
            FaceClass::Disk => "disk".into(),
            FaceClass::Bigon => "bigon".into(),
            FaceClass::Regular(n) => format!("regular-{n}"),
            FaceClass::R5 => "r5".into(),
            FaceClass::R7 => "r7".into(),
            FaceClass::R11 => "r11".into(),
            FaceClass::P9 => "p9".into(),
            FaceClass::P10 => "p10".into(),
            FaceClass::P11 => "p11".into(),
        }
    }

    pub fn is_regular(self) -> bool {
        matches!(self, FaceClass::Regular(_))
    }

    pub fn is_symmetric_pentagon(self) -> bool {
        matches!(self, FaceClass::P9 | FaceClass::P10 | FaceClass::P11)
    }
}

impl fmt::Display for FaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Role of a polygon side within its face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideRole {
    Regular,
    /// Longer side of an r₅ or r₇ rectangle.
    Long,
    /// Shorter side of an r₅ or r₇ rectangle.
    Short,
    /// Side of a symmetric pentagon opposite its apex.
    Base,
    /// Pentagon side adjacent to the base.
    LowerLeg,
    /// Pentagon side meeting the apex.
    UpperLeg,
    /// r₁₁ side parallel to the edge shared by the rectangle pair.
    Axial,
    /// r₁₁ side across that edge.
    Transverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RealizationStatus {
    Exact,
    LeastSquares,
    Infeasible,
}

/// A face of a realized cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellFace {
    pub class: FaceClass,
    /// Cyclic vertex indices (empty for disks).
    pub vertices: Vec<usize>,
    /// Role of side `i` (from vertex `i` to vertex `i + 1`).
    pub roles: Vec<SideRole>,
    /// Unit normal of the face's great sphere pointing into the cell.
    pub normal: Vec4,
}

/// A cell type with coordinates on S³.
#[derive(Clone, Debug, PartialEq)]
pub struct CellRealization {
    pub cell_type: CellType,
    pub vertices: Vec<Vec4>,
    pub faces: Vec<CellFace>,
    /// Largest constraint violation of the realization.
    pub residual: f64,
    pub status: RealizationStatus,
    pub notes: Vec<String>,
}

/// Measured deviations from the admissibility constraints.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CellDefects {
    pub unit_norm: f64,
    pub planarity: f64,
    pub angle: f64,
    pub dihedral: f64,
    /// Every vertex lies on exactly three edges.
    pub trivalent: bool,
}

impl CellDefects {
    pub fn max(&self) -> f64 {
        self.unit_norm.max(self.planarity).max(self.angle).max(self.dihedral)
    }
}

impl CellRealization {
    /// Sides as sorted vertex pairs, without repetition.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut e: Vec<[usize; 2]> = self
            .faces
            .iter()
            .flat_map(|f| polygon_sides(&f.vertices))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Point-in-cell test: inner side of every face's great sphere.
    pub fn contains(&self, x: &Vec4) -> bool {
        self.faces.iter().all(|f| f.normal.dot(x) >= 0.0)
    }

    pub fn centre(&self) -> Vec4 {
        if self.vertices.is_empty() {
            let s = self.faces.iter().fold(Vec4::zeros(), |a, f| a + f.normal);
            return s / s.norm();
        }
        let s = self.vertices.iter().fold(Vec4::zeros(), |a, v| a + v);
        s / s.norm()
    }

    pub fn defects(&self) -> CellDefects {
        let a = alpha().0;
        let mut d = CellDefects {
            trivalent: true,
            ..Default::default()
        };
        for v in &self.vertices {
            d.unit_norm = d.unit_norm.max((v.norm() - 1.0).abs());
        }
        for f in &self.faces {
            let k = f.vertices.len();
            if k < 3 {
                continue;
            }
            let pts: Vec<Vec4> = f.vertices.iter().map(|&i| self.vertices[i]).collect();
            for v in &pts {
                d.planarity = d.planarity.max(f.normal.dot(v).abs());
            }
            for t in 0..k {
                let ang = vertex_angle(&pts[t], &pts[(t + k - 1) % k], &pts[(t + 1) % k]);
                d.angle = d.angle.max((ang - a).abs());
            }
        }
        for (x, f) in self.faces.iter().enumerate() {
            for g in self.faces.iter().skip(x + 1) {
                let adjacent = if f.vertices.len() >= 2 && g.vertices.len() >= 2 {
                    crate::ansatz::share_edge(&f.vertices, &g.vertices)
                } else {
                    // smooth cells: every pair of faces meets
                    true
                };
                if adjacent {
                    let phi = PI - f.normal.dot(&g.normal).clamp(-1.0, 1.0).acos();
                    d.dihedral = d.dihedral.max((phi - 2.0 * PI / 3.0).abs());
                }
            }
        }
        if !self.cell_type.is_smooth() {
            let edges = self.edges();
            let mut deg = vec![0usize; self.vertices.len()];
            for e in &edges {
                deg[e[0]] += 1;
                deg[e[1]] += 1;
            }
            d.trivalent = deg.iter().all(|&x| x == 3);
        }
        d
    }
}

/// Sorted vertex pairs of a cyclic polygon.
pub fn polygon_sides(p: &[usize]) -> Vec<[usize; 2]> {
    let k = p.len();
    if k < 2 {
        return Vec::new();
    }
    let n = if k == 2 { 1 } else { k };
    (0..n)
        .map(|i| {
            let (x, y) = (p[i], p[(i + 1) % k]);
            [x.min(y), x.max(y)]
        })
        .collect()
}

/// Orientation-normalized cyclic side-length sequence of a face.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceSignature {
    pub class: FaceClass,
    pub sides: Vec<f64>,
}

/// Tolerance for signature equality.
pub const SIGNATURE_TOL: f64 = 1e-6;

impl FaceSignature {
    /// Canonicalizes `sides` to the lexicographically smallest rotation or
    /// reflection.
    pub fn new(class: FaceClass, sides: &[f64]) -> Self {
        let mut best = sides.to_vec();
        for s in cyclic_variants(sides) {
            if lex_less(&s, &best) {
                best = s;
            }
        }
        FaceSignature { class, sides: best }
    }

    /// Smallest max-norm distance between side sequences over rotations and
    /// reflections; infinite when side counts differ.
    pub fn distance(&self, other: &FaceSignature) -> f64 {
        if self.sides.len() != other.sides.len() {
            return f64::INFINITY;
        }
        cyclic_variants(&other.sides)
            .iter()
            .map(|s| {
                s.iter()
                    .zip(&self.sides)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn matches(&self, other: &FaceSignature) -> bool {
        self.distance(other) < SIGNATURE_TOL
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-12 {
            return x < y;
        }
    }
    false
}

fn cyclic_variants(s: &[f64]) -> Vec<Vec<f64>> {
    let n = s.len();
    let mut out = Vec::with_capacity(2 * n);
    for r in 0..n.max(1) {
        let rot: Vec<f64> = (0..n).map(|i| s[(i + r) % n]).collect();
        let mut rev = rot.clone();
        rev.reverse();
        out.push(rot);
        out.push(rev);
    }
    out
}

/// One signature per face, sides measured as geodesic arcs.
pub fn face_signatures(c: &CellRealization) -> Result<Vec<FaceSignature>, CellError> {
    if c.status == RealizationStatus::Infeasible {
        return Err(CellError::NotRealized(c.cell_type));
    }
    Ok(c.faces
        .iter()
        .map(|f| {
            let k = f.vertices.len();
            let sides: Vec<f64> = if k < 2 {
                Vec::new()
            } else {
                (0..k)
                    .map(|i| geodesic_distance(&c.vertices[f.vertices[i]], &c.vertices[f.vertices[(i + 1) % k]]))
                    .collect()
            };
            FaceSignature::new(f.class, &sides)
        })
        .collect())
}

const MC_BLOCK: usize = 1 << 14;

/// Monte Carlo volume of a cell: uniform samples of S³ counted by the
/// point-in-cell test, scaled by 2π². Sampling runs in fixed-size blocks
/// with per-block streams, so results depend only on `(samples, seed)`.
pub fn cell_volume_mc(c: &CellRealization, samples: usize, seed: u64) -> Result<(f64, f64), CellError> {
    if c.status != RealizationStatus::Exact {
        return Err(CellError::NotExact(c.cell_type));
    }
    let hits = count_hits(samples, seed, |x| c.contains(x));
    let p = hits as f64 / samples as f64;
    let total = 2.0 * PI * PI;
    Ok((p * total, total * (p * (1.0 - p) / samples as f64).sqrt()))
}

/// Counts samples satisfying `pred` with deterministic block seeding.
pub fn count_hits<F: Fn(&Vec4) -> bool + Sync>(samples: usize, seed: u64, pred: F) -> usize {
    mc_tally(samples, seed, 1, |x, c| {
        if pred(x) {
            c[0] += 1;
        }
    })[0]
}

/// Accumulates `bins` counters over uniform samples of S³. Blocks of
/// samples use independent streams of one seeded generator and are summed
/// in block order, so the result depends only on `(samples, seed)`.
pub fn mc_tally<F: Fn(&Vec4, &mut [usize]) + Sync>(samples: usize, seed: u64, bins: usize, f: F) -> Vec<usize> {
    let blocks = samples.div_ceil(MC_BLOCK);
    let partial: Vec<Vec<usize>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let n = MC_BLOCK.min(samples - b * MC_BLOCK);
            let mut c = vec![0usize; bins];
            for _ in 0..n {
                f(&sample_s3(&mut rng), &mut c);
            }
            c
        })
        .collect();
    let mut out = vec![0usize; bins];
    for c in partial {
        for (o, x) in out.iter_mut().zip(c) {
            *o += x;
        }
    }
    out
}

/// Largest geodesic distance between two vertices; π for the smooth cells,
/// which contain antipodal points.
pub fn cell_diameter(c: &CellRealization) -> Result<f64, CellError> {
    if c.status != RealizationStatus::Exact {
        return Err(CellError::NotExact(c.cell_type));
    }
    if c.cell_type.is_smooth() {
        return Ok(PI);
    }
    let mut d: f64 = 0.0;
    for (i, a) in c.vertices.iter().enumerate() {
        for b in c.vertices.iter().skip(i + 1) {
            d = d.max(geodesic_distance(a, b));
        }
    }
    Ok(d)
}

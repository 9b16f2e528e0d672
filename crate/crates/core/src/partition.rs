//! The nine candidate partitions of S³ into admissible cells, their dual
//! graphs and the scans that rule out the remaining cell combinations.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ansatz::{t9_ansatz, t9_best_theta, AnsatzFaceKind};
use crate::cells::{
    cell_from_lattice, cell_volume_mc, combinatorics, face_signatures, find_adjacent_pair, find_triple_meeting,
    mc_tally, realize_cell, smooth_cells, CellFace, CellRealization, CellType, FaceClass, FaceSignature,
    RealizationStatus, SideRole, PENTAGON_ROLES,
};
use crate::convex::{facets_from_normals, hull4};
use crate::geom::{geodesic_distance, Vec4};
use crate::graph::ColoredGraph;
use crate::lattice::{face_lattice, FaceLattice};
use crate::polytopes::{cell120, cell120_cell_circumradius, dodecahedral_prism, simplex5, simplicial_prism, tesseract};
use crate::sphere_trig::{rectangle_complement, regular_side, spherical_ball_bounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PartitionLabel {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
}

impl PartitionLabel {
    pub const ALL: [PartitionLabel; 9] = [
        PartitionLabel::T1,
        PartitionLabel::T2,
        PartitionLabel::T3,
        PartitionLabel::T4,
        PartitionLabel::T5,
        PartitionLabel::T6,
        PartitionLabel::T7,
        PartitionLabel::T8,
        PartitionLabel::T9,
    ];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    /// Cell types with multiplicities.
    pub fn cell_inventory(self) -> Vec<(CellType, usize)> {
        use CellType::*;
        match self {
            PartitionLabel::T1 => vec![(C1, 2)],
            PartitionLabel::T2 => vec![(C2, 3)],
            PartitionLabel::T3 => vec![(C3, 4)],
            PartitionLabel::T4 => vec![(C4, 5)],
            PartitionLabel::T5 => vec![(C4, 2), (C5, 4)],
            PartitionLabel::T6 => vec![(C6, 8)],
            PartitionLabel::T7 => vec![(C7, 12), (C8, 2)],
            PartitionLabel::T8 => vec![(C8, 120)],
            PartitionLabel::T9 => vec![(C6, 5), (C10, 10)],
        }
    }
}

impl fmt::Display for PartitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.index())
    }
}

impl FromStr for PartitionLabel {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches(['T', 't']);
        t.parse::<usize>()
            .ok()
            .filter(|i| (1..=9).contains(i))
            .map(|i| Self::ALL[i - 1])
            .ok_or_else(|| PartitionError::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("unknown partition label {0:?}")]
    UnknownLabel(String),
    #[error("realization of {label} failed: {reason}")]
    RealizationFailed { label: PartitionLabel, reason: String },
}

/// A 2-face of a partition.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionFace {
    /// Cyclic global vertex indices; empty for the smooth disks.
    pub vertices: Vec<usize>,
    pub cells: [usize; 2],
    /// Unit normal of the face's great sphere pointing into `cells[0]`.
    pub normal: Vec4,
    pub class: FaceClass,
}

/// A partition of S³ with its cell complex.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionComplex {
    pub label: PartitionLabel,
    pub vertices: Vec<Vec4>,
    /// Vertices added only to make the complex cellular (T₁, T₂); they are
    /// not singular points and are exempt from the four-cell check.
    pub artificial: Vec<usize>,
    /// Edge endpoints; T₃ has four distinct arcs between the same two poles
    /// and T₂ one closed loop.
    pub edges: Vec<[usize; 2]>,
    pub edge_cells: Vec<Vec<usize>>,
    pub vertex_cells: Vec<Vec<usize>>,
    pub faces: Vec<PartitionFace>,
    pub cells: Vec<CellRealization>,
    /// Global index of each local cell vertex.
    pub cell_vertices: Vec<Vec<usize>>,
    pub cell_faces: Vec<Vec<usize>>,
    pub dual: ColoredGraph,
    pub residual: f64,
    pub status: RealizationStatus,
}

/// Result of the local-structure checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncidenceReport {
    pub faces_ok: bool,
    pub edges_ok: bool,
    pub vertices_ok: bool,
    pub problems: Vec<String>,
}

impl IncidenceReport {
    pub fn ok(&self) -> bool {
        self.faces_ok && self.edges_ok && self.vertices_ok
    }
}

/// Monte Carlo volume bookkeeping over a partition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeClosure {
    pub samples: usize,
    pub volumes: Vec<f64>,
    pub total: f64,
    /// |total − 2π²| / 2π².
    pub relative_error: f64,
    /// Samples in no cell.
    pub gaps: usize,
    /// Samples in two or more cells.
    pub overlaps: usize,
}

impl PartitionComplex {
    /// (V, E, F, C).
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len(), self.cells.len())
    }

    pub fn euler(&self) -> i64 {
        let (v, e, f, c) = self.counts();
        v as i64 - e as i64 + f as i64 - c as i64
    }

    pub fn incidence(&self) -> IncidenceReport {
        let mut problems = Vec::new();
        let mut face_count = vec![0usize; self.faces.len()];
        for fs in &self.cell_faces {
            for &f in fs {
                face_count[f] += 1;
            }
        }
        for (f, &n) in face_count.iter().enumerate() {
            if n != 2 {
                problems.push(format!("face {f} lies on {n} cells"));
            }
        }
        let faces_ok = problems.is_empty();
        let before = problems.len();
        for (e, cs) in self.edge_cells.iter().enumerate() {
            if cs.len() != 3 {
                problems.push(format!("edge {e} lies on {} cells", cs.len()));
            }
        }
        let edges_ok = problems.len() == before;
        let before = problems.len();
        for (v, cs) in self.vertex_cells.iter().enumerate() {
            if !self.artificial.contains(&v) && cs.len() != 4 {
                problems.push(format!("vertex {v} lies on {} cells", cs.len()));
            }
        }
        let vertices_ok = problems.len() == before;
        IncidenceReport {
            faces_ok,
            edges_ok,
            vertices_ok,
            problems,
        }
    }

    pub fn cell_type_count(&self, t: CellType) -> usize {
        self.cells.iter().filter(|c| c.cell_type == t).count()
    }

    /// Classifies uniform samples of S³ by the cells containing them.
    pub fn volume_closure(&self, samples: usize, seed: u64) -> VolumeClosure {
        let nc = self.cells.len();
        let counts = mc_tally(samples, seed, nc + 2, |x, c| {
            let mut inside = 0;
            for (i, cell) in self.cells.iter().enumerate() {
                if cell.contains(x) {
                    c[i] += 1;
                    inside += 1;
                }
            }
            match inside {
                0 => c[nc] += 1,
                1 => {}
                _ => c[nc + 1] += 1,
            }
        });
        let scale = 2.0 * PI * PI / samples as f64;
        let volumes: Vec<f64> = counts[..nc].iter().map(|&k| k as f64 * scale).collect();
        let total: f64 = volumes.iter().sum();
        VolumeClosure {
            samples,
            volumes,
            total,
            relative_error: (total - 2.0 * PI * PI).abs() / (2.0 * PI * PI),
            gaps: counts[nc],
            overlaps: counts[nc + 1],
        }
    }

    /// Face signatures per cell (empty for smooth cells).
    pub fn face_signatures(&self) -> Vec<Vec<FaceSignature>> {
        self.cells
            .iter()
            .map(|c| {
                if c.cell_type.is_smooth() {
                    Vec::new()
                } else {
                    let mut c = c.clone();
                    c.status = RealizationStatus::Exact;
                    face_signatures(&c).unwrap_or_default()
                }
            })
            .collect()
    }

    /// The same partition moved by an orthogonal map.
    pub fn transformed(&self, q: &Matrix4<f64>) -> PartitionComplex {
        let mut p = self.clone();
        p.vertices = self.vertices.iter().map(|v| q * v).collect();
        for f in &mut p.faces {
            f.normal = q * f.normal;
        }
        for c in &mut p.cells {
            c.vertices = c.vertices.iter().map(|v| q * v).collect();
            for f in &mut c.faces {
                f.normal = q * f.normal;
            }
        }
        p
    }

    /// Cell containing `x`, if any; the first match on shared boundaries.
    pub fn locate(&self, x: &Vec4) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(x))
    }

    /// Vertex positions of cell `c` in global indexing.
    pub fn cell_points(&self, c: usize) -> Vec<Vec4> {
        self.cell_vertices[c].iter().map(|&i| self.vertices[i]).collect()
    }
}

fn dual_of(cells: &[CellRealization], faces: &[PartitionFace]) -> ColoredGraph {
    let mut g = ColoredGraph::new(cells.iter().map(|c| c.cell_type).collect());
    for f in faces {
        g.add_edge(f.cells[0], f.cells[1]);
    }
    g
}

/// Dual graph: one vertex per cell, one edge per pair of cells sharing a
/// 2-face, weighted by the number of shared faces.
pub fn dual_graph(p: &PartitionComplex) -> ColoredGraph {
    dual_of(&p.cells, &p.faces)
}

fn worst_status(cells: &[CellRealization]) -> RealizationStatus {
    if cells.iter().any(|c| c.status == RealizationStatus::Infeasible) {
        RealizationStatus::Infeasible
    } else if cells.iter().any(|c| c.status == RealizationStatus::LeastSquares) {
        RealizationStatus::LeastSquares
    } else {
        RealizationStatus::Exact
    }
}

fn incidences(nv: usize, edges: &[[usize; 2]], cell_vertices: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut vertex_cells = vec![Vec::new(); nv];
    for (c, vs) in cell_vertices.iter().enumerate() {
        for &v in vs {
            vertex_cells[v].push(c);
        }
    }
    let edge_cells = edges
        .iter()
        .map(|e| {
            vertex_cells[e[0]]
                .iter()
                .copied()
                .filter(|c| vertex_cells[e[1]].contains(c))
                .collect()
        })
        .collect();
    (edge_cells, vertex_cells)
}

fn from_lattice(label: PartitionLabel, l: &FaceLattice) -> Result<PartitionComplex, PartitionError> {
    let cells: Vec<CellRealization> = (0..l.facets.len())
        .map(|f| cell_from_lattice(l, f))
        .collect::<Option<_>>()
        .ok_or_else(|| PartitionError::RealizationFailed {
            label,
            reason: "facet of unexpected size".into(),
        })?;
    let cell_vertices: Vec<Vec<usize>> = l.facets.iter().map(|f| f.vertices.clone()).collect();
    let faces: Vec<PartitionFace> = l
        .faces
        .iter()
        .enumerate()
        .map(|(fi, lf)| {
            let c = lf.facets[0];
            let local = l.facet_faces[c].iter().position(|&x| x == fi).expect("face listed on its facet");
            PartitionFace {
                vertices: lf.vertices.clone(),
                cells: lf.facets,
                normal: lf.normal,
                class: cells[c].faces[local].class,
            }
        })
        .collect();
    let (edge_cells, vertex_cells) = incidences(l.vertices.len(), &l.edges, &cell_vertices);
    let residual = cells.iter().map(|c| c.residual).fold(0.0, f64::max);
    let status = worst_status(&cells);
    Ok(PartitionComplex {
        label,
        vertices: l.vertices.clone(),
        artificial: Vec::new(),
        edges: l.edges.clone(),
        edge_cells,
        vertex_cells,
        dual: dual_of(&cells, &faces),
        faces,
        cells,
        cell_vertices,
        cell_faces: l.facet_faces.clone(),
        residual,
        status,
    })
}

fn smooth(label: PartitionLabel) -> PartitionComplex {
    let t = match label {
        PartitionLabel::T1 => CellType::C1,
        PartitionLabel::T2 => CellType::C2,
        _ => CellType::C3,
    };
    let cells = smooth_cells(t);
    let n = cells.len();
    let mut faces = Vec::new();
    let mut cell_faces = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            // the face of cell a whose normal is opposite to one of b's
            let (normal, class) = match t {
                CellType::C1 => (cells[0].faces[0].normal, FaceClass::Disk),
                _ => {
                    let fa = cells[a].faces[b - 1].normal;
                    (fa, cells[a].faces[0].class)
                }
            };
            cell_faces[a].push(faces.len());
            cell_faces[b].push(faces.len());
            faces.push(PartitionFace {
                vertices: if t == CellType::C3 { vec![0, 1] } else { Vec::new() },
                cells: [a, b],
                normal,
                class,
            });
        }
    }
    let e1 = Vec4::new(1.0, 0.0, 0.0, 0.0);
    let (vertices, artificial, edges, edge_cells, vertex_cells, cell_vertices) = match t {
        CellType::C1 => (vec![e1], vec![0], vec![], vec![], vec![vec![0, 1]], vec![vec![], vec![]]),
        CellType::C2 => (
            vec![e1],
            vec![0],
            vec![[0, 0]],
            vec![vec![0, 1, 2]],
            vec![vec![0, 1, 2]],
            vec![vec![]; 3],
        ),
        _ => (
            vec![e1, -e1],
            vec![],
            vec![[0, 1]; 4],
            (0..4).map(|k| (0..4).filter(|&c| c != k).collect()).collect(),
            vec![vec![0, 1, 2, 3]; 2],
            vec![vec![0, 1]; 4],
        ),
    };
    PartitionComplex {
        label,
        vertices,
        artificial,
        edges,
        edge_cells,
        vertex_cells,
        dual: dual_of(&cells, &faces),
        faces,
        cells,
        cell_vertices,
        cell_faces,
        residual: 0.0,
        status: RealizationStatus::Exact,
    }
}

fn t9() -> Result<PartitionComplex, PartitionError> {
    let (theta, defects) = t9_best_theta();
    if !defects.residual().is_finite() {
        return Err(PartitionError::RealizationFailed {
            label: PartitionLabel::T9,
            reason: format!("non-finite residual at theta {theta}"),
        });
    }
    let a = t9_ansatz(theta);
    let faces: Vec<PartitionFace> = a
        .faces
        .iter()
        .enumerate()
        .map(|(fi, f)| PartitionFace {
            vertices: f.vertices.clone(),
            cells: f.cells,
            normal: a.inward_normal(fi, f.cells[0]),
            class: match f.kind {
                AnsatzFaceKind::Square { .. } => FaceClass::Regular(4),
                AnsatzFaceKind::Pentagon { .. } => FaceClass::P10,
            },
        })
        .collect();
    let mut cells = Vec::new();
    let mut cell_vertices = Vec::new();
    for (ci, cell) in a.cells.iter().enumerate() {
        let mut global: Vec<usize> = Vec::new();
        let mut cfaces = Vec::new();
        for &fi in &cell.faces {
            let local: Vec<usize> = a.faces[fi]
                .vertices
                .iter()
                .map(|&v| match global.iter().position(|&g| g == v) {
                    Some(i) => i,
                    None => {
                        global.push(v);
                        global.len() - 1
                    }
                })
                .collect();
            let class = faces[fi].class;
            cfaces.push(CellFace {
                class,
                roles: if class == FaceClass::P10 {
                    PENTAGON_ROLES.to_vec()
                } else {
                    vec![SideRole::Regular; 4]
                },
                vertices: local,
                normal: a.inward_normal(fi, ci),
            });
        }
        cells.push(CellRealization {
            cell_type: if ci < 5 { CellType::C6 } else { CellType::C10 },
            vertices: global.iter().map(|&v| a.vertices[v]).collect(),
            faces: cfaces,
            residual: defects.residual(),
            status: RealizationStatus::LeastSquares,
            notes: vec![format!(
                "symmetric ansatz at theta {theta:.9}: angle defect {:.3e}, dihedral defect {:.3e}",
                defects.angle, defects.dihedral
            )],
        });
        cell_vertices.push(global);
    }
    let mut edges: Vec<[usize; 2]> = faces
        .iter()
        .flat_map(|f| crate::cells::polygon_sides(&f.vertices))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let (edge_cells, vertex_cells) = incidences(a.vertices.len(), &edges, &cell_vertices);
    let cell_faces = a.cells.iter().map(|c| c.faces.clone()).collect();
    Ok(PartitionComplex {
        label: PartitionLabel::T9,
        vertices: a.vertices.clone(),
        artificial: Vec::new(),
        edges,
        edge_cells,
        vertex_cells,
        dual: dual_of(&cells, &faces),
        faces,
        cells,
        cell_vertices,
        cell_faces,
        residual: defects.residual(),
        status: RealizationStatus::LeastSquares,
    })
}

/// Builds partition `label`.
pub fn build_partition(label: PartitionLabel) -> Result<PartitionComplex, PartitionError> {
    build_partition_rotated(label, &Matrix4::identity())
}

/// Builds partition `label` from input data moved by `q` before any
/// combinatorics is computed; polytopal partitions rerun the hull.
pub fn build_partition_rotated(label: PartitionLabel, q: &Matrix4<f64>) -> Result<PartitionComplex, PartitionError> {
    let rot = |pts: Vec<Vec4>| -> Vec<Vec4> { pts.iter().map(|p| q * p).collect() };
    let lattice = |pts: Vec<Vec4>| {
        let pts = rot(pts);
        let facets = hull4(&pts);
        face_lattice(&pts, &facets)
    };
    let p = match label {
        PartitionLabel::T1 | PartitionLabel::T2 | PartitionLabel::T3 => smooth(label).transformed(q),
        PartitionLabel::T4 => from_lattice(label, &lattice(simplex5()))?,
        PartitionLabel::T5 => from_lattice(label, &lattice(simplicial_prism()))?,
        PartitionLabel::T6 => from_lattice(label, &lattice(tesseract()))?,
        PartitionLabel::T7 => from_lattice(label, &lattice(dodecahedral_prism(cell120_cell_circumradius())))?,
        PartitionLabel::T8 => {
            let (v, c) = cell120();
            let (v, c) = (rot(v), rot(c));
            let facets = facets_from_normals(&v, &c);
            from_lattice(label, &face_lattice(&v, &facets))?
        }
        PartitionLabel::T9 => t9()?.transformed(q),
    };
    for (t, n) in label.cell_inventory() {
        if p.cell_type_count(t) != n {
            return Err(PartitionError::RealizationFailed {
                label,
                reason: format!("expected {n} cells of type {t}, found {}", p.cell_type_count(t)),
            });
        }
    }
    Ok(p)
}

/// One line of a pattern scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanLine {
    pub description: String,
    pub found: Vec<CellType>,
    /// Whether the pattern is expected somewhere in the catalog.
    pub expect_found: bool,
}

impl ScanLine {
    pub fn as_expected(&self) -> bool {
        self.found.is_empty() != self.expect_found
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub holds: bool,
    pub lines: Vec<ScanLine>,
}

fn scan<F: Fn(&crate::cells::CellCombinatorics) -> bool>(description: &str, expect_found: bool, f: F) -> ScanLine {
    let found = CellType::ALL
        .iter()
        .copied()
        .filter_map(|t| combinatorics(t).filter(|c| f(c)).map(|_| t))
        .collect();
    ScanLine {
        description: description.to_string(),
        found,
        expect_found,
    }
}

fn report(lines: Vec<ScanLine>) -> ScanReport {
    ScanReport {
        holds: lines.iter().all(|l| l.as_expected()),
        lines,
    }
}

/// No admissible cell has two r₇ faces adjacent along a short edge; with
/// the analogous r₅ control and a scanner self-test on squares.
pub fn obstruction_c7_c7() -> ScanReport {
    report(vec![
        scan("two r7 faces sharing a short edge", false, |c| {
            find_adjacent_pair(c, FaceClass::R7, Some(SideRole::Short)).is_some()
        }),
        scan("two r5 faces sharing a long edge", false, |c| {
            find_adjacent_pair(c, FaceClass::R5, Some(SideRole::Long)).is_some()
        }),
        scan("two squares sharing an edge", true, |c| {
            find_adjacent_pair(c, FaceClass::Regular(4), None).is_some()
        }),
    ])
}

/// No admissible cell has two p₉ faces sharing a base edge, nor three p₉
/// faces meeting at their apexes; with a self-test on regular pentagons.
pub fn obstruction_c9() -> ScanReport {
    report(vec![
        scan("two p9 faces sharing a base edge", false, |c| {
            find_adjacent_pair(c, FaceClass::P9, Some(SideRole::Base)).is_some()
        }),
        scan("three p9 faces meeting at their apexes", false, |c| {
            find_triple_meeting(c, FaceClass::P9, true).is_some()
        }),
        scan("three regular pentagons meeting at a vertex", true, |c| {
            find_triple_meeting(c, FaceClass::Regular(5), false).is_some()
        }),
    ])
}

/// The volume chain excluding quotients of the 120-cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientExclusion {
    /// Long side of r₇.
    pub b: f64,
    pub pi_minus_b: f64,
    /// Euclidean volume of a ball of diameter π − b.
    pub ball_bound: f64,
    /// Volume of the spherical ball of the same radius.
    pub spherical_cap: f64,
    pub sixtieth: f64,
    pub fortieth: f64,
    pub c8_volume: f64,
    pub c8_volume_mc: f64,
    pub c8_volume_mc_stderr: f64,
    pub c8_diameter: f64,
    pub holds: bool,
}

/// Computes the chain `Vol(C₈) < ball bound < 2π²/60 < 2π²/40`.
pub fn c8_quotient_exclusion(samples: usize, seed: u64) -> QuotientExclusion {
    let a5 = regular_side(5).expect("a5");
    let b = rectangle_complement(a5).expect("r7 side").0;
    let r = (PI - b) / 2.0;
    let (ball_bound, spherical_cap) = spherical_ball_bounds(r);
    let sixtieth = 2.0 * PI * PI / 60.0;
    let fortieth = 2.0 * PI * PI / 40.0;
    let c8 = realize_cell(CellType::C8).expect("dodecahedral cell");
    let (mc, se) = cell_volume_mc(&c8, samples, seed).expect("exact cell");
    let diameter = crate::cells::cell_diameter(&c8).expect("exact cell");
    let c8_volume = 2.0 * PI * PI / 120.0;
    QuotientExclusion {
        b,
        pi_minus_b: PI - b,
        ball_bound,
        spherical_cap,
        sixtieth,
        fortieth,
        c8_volume,
        c8_volume_mc: mc,
        c8_volume_mc_stderr: se,
        c8_diameter: diameter,
        holds: mc < ball_bound && c8_volume < ball_bound && ball_bound < sixtieth && sixtieth < fortieth,
    }
}

/// Long side of the lateral rectangles of the dodecahedral prism, measured
/// on the built complex.
pub fn t7_lateral_edge(p: &PartitionComplex) -> Option<f64> {
    p.faces
        .iter()
        .filter(|f| f.class == FaceClass::R7)
        .flat_map(|f| {
            let k = f.vertices.len();
            (0..k).map(move |i| (f.vertices[i], f.vertices[(i + 1) % k]))
        })
        .map(|(a, b)| geodesic_distance(&p.vertices[a], &p.vertices[b]))
        .reduce(f64::max)
}

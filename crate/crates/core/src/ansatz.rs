//! Symmetric ansatz for the 15-cell partition built from five cubes and ten
//! nonahedra, together with its defect measurement.
//!
//! The cubes sit at the vertices `v_i` of a regular 4-simplex inscribed in
//! S³ and the nonahedra correspond to the ten triangles `{i, j, k}` of K₅.
//! Cube `i` has the eight vertices `cos θ·v_i ± sin θ·u_j` (j ≠ i) where
//! `u_j = normalize(v_j + v_i / 4)` spans the tangent space at `v_i`, and
//! each nonahedron has two further apex vertices `−v_l`, `−v_m` for the
//! two indices `l, m` outside its triangle. The single free parameter θ is
//! the angular circumradius of the cubes.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::geom::{best_fit_normal, geodesic_distance, vertex_angle, Vec4};
use crate::polytopes::simplex5;
use crate::sphere_trig::alpha;

/// Symbolic vertex label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnsatzVertex {
    /// `cos θ·v_cube + sign·sin θ·u_dir`.
    Cube { cube: usize, dir: usize, positive: bool },
    /// `−v_index`.
    Apex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnsatzFaceKind {
    /// Square of cube `cube` facing the nonahedron of `triangle`.
    Square { cube: usize, triangle: [usize; 3] },
    /// Pentagon between two nonahedra whose triangles share an edge; `apex`
    /// is the index outside both triangles.
    Pentagon { a: [usize; 3], b: [usize; 3], apex: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzFace {
    pub kind: AnsatzFaceKind,
    /// Cyclic vertex list; pentagons start at their base edge so that the
    /// side pattern is (base, leg, upper, upper, leg).
    pub vertices: Vec<usize>,
    pub cells: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnsatzCellKind {
    Cube(usize),
    Nonahedron([usize; 3]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzCell {
    pub kind: AnsatzCellKind,
    pub faces: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct T9Ansatz {
    pub theta: f64,
    pub labels: Vec<AnsatzVertex>,
    pub vertices: Vec<Vec4>,
    pub faces: Vec<AnsatzFace>,
    /// Cells 0–4 are cubes, 5–14 nonahedra in lexicographic triangle order.
    pub cells: Vec<AnsatzCell>,
}

/// Value of θ at which the pentagon base edge collapses.
pub fn degenerate_theta() -> f64 {
    // base edge length is a₃ − 2θ along the simplex edge direction
    (-0.25f64).acos() / 2.0
}

fn triangles() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn others(excl: &[usize]) -> Vec<usize> {
    (0..5).filter(|x| !excl.contains(x)).collect()
}

/// Builds the ansatz at parameter θ.
pub fn t9_ansatz(theta: f64) -> T9Ansatz {
    let v = simplex5();
    let u = |i: usize, j: usize| {
        let w = v[j] + v[i] / 4.0;
        w / w.norm()
    };
    let (s, c) = theta.sin_cos();
    let mut labels: Vec<AnsatzVertex> = Vec::new();
    let mut vertices: Vec<Vec4> = Vec::new();
    let mut index: HashMap<AnsatzVertex, usize> = HashMap::new();
    for (i, &vi) in v.iter().enumerate() {
        for j in others(&[i]) {
            for positive in [true, false] {
                let l = AnsatzVertex::Cube { cube: i, dir: j, positive };
                let sg = if positive { 1.0 } else { -1.0 };
                index.insert(l, labels.len());
                labels.push(l);
                vertices.push(vi * c + u(i, j) * (sg * s));
            }
        }
    }
    for (m, &vm) in v.iter().enumerate() {
        let l = AnsatzVertex::Apex(m);
        index.insert(l, labels.len());
        labels.push(l);
        vertices.push(-vm);
    }
    let cv = |cube: usize, dir: usize, positive: bool| index[&AnsatzVertex::Cube { cube, dir, positive }];
    let tris = triangles();
    let tri_cell = |t: [usize; 3]| 5 + tris.iter().position(|&x| x == t).expect("triangle listed");
    let mut faces = Vec::new();
    for i in 0..5 {
        let rest = others(&[i]);
        for a in 0..4 {
            for b in a + 1..4 {
                let (j, k) = (rest[a], rest[b]);
                let lm = others(&[i, j, k]);
                let (l, m) = (lm[0], lm[1]);
                let mut tri = [i, j, k];
                tri.sort_unstable();
                faces.push(AnsatzFace {
                    kind: AnsatzFaceKind::Square { cube: i, triangle: tri },
                    vertices: vec![cv(i, j, true), cv(i, l, false), cv(i, k, true), cv(i, m, false)],
                    cells: [i, tri_cell(tri)],
                });
            }
        }
    }
    for (ai, ta) in tris.iter().enumerate() {
        for tb in tris.iter().skip(ai + 1) {
            let shared: Vec<usize> = ta.iter().copied().filter(|x| tb.contains(x)).collect();
            if shared.len() != 2 {
                continue;
            }
            let (i, j) = (shared[0], shared[1]);
            let mut union: Vec<usize> = ta.iter().chain(tb.iter()).copied().collect();
            union.sort_unstable();
            union.dedup();
            let m = others(&union)[0];
            faces.push(AnsatzFace {
                kind: AnsatzFaceKind::Pentagon { a: *ta, b: *tb, apex: m },
                vertices: vec![
                    cv(i, j, true),
                    cv(j, i, true),
                    cv(j, m, false),
                    index[&AnsatzVertex::Apex(m)],
                    cv(i, m, false),
                ],
                cells: [tri_cell(*ta), tri_cell(*tb)],
            });
        }
    }
    let mut cells: Vec<AnsatzCell> = (0..5)
        .map(|i| AnsatzCell {
            kind: AnsatzCellKind::Cube(i),
            faces: Vec::new(),
        })
        .chain(tris.iter().map(|&t| AnsatzCell {
            kind: AnsatzCellKind::Nonahedron(t),
            faces: Vec::new(),
        }))
        .collect();
    for (fi, f) in faces.iter().enumerate() {
        for &c in &f.cells {
            cells[c].faces.push(fi);
        }
    }
    T9Ansatz {
        theta,
        labels,
        vertices,
        faces,
        cells,
    }
}

/// Worst deviations of the ansatz from an admissible partition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzDefects {
    /// max |face angle − α| over all face corners.
    pub angle: f64,
    /// max |dihedral − 2π/3| over all cell edges.
    pub dihedral: f64,
    /// max distance of a face vertex from the face's best-fit great sphere.
    pub planarity: f64,
    /// Shortest edge (geodesic length).
    pub min_edge: f64,
}

impl AnsatzDefects {
    pub fn residual(&self) -> f64 {
        self.angle.max(self.dihedral).max(self.planarity)
    }
}

impl T9Ansatz {
    /// Unit normal of a face's great sphere, oriented into `cell`.
    pub fn inward_normal(&self, face: usize, cell: usize) -> Vec4 {
        let pts: Vec<Vec4> = self.faces[face].vertices.iter().map(|&i| self.vertices[i]).collect();
        let (n, _) = best_fit_normal(&pts);
        let c = self.cell_centre(cell);
        if n.dot(&c) < 0.0 {
            -n
        } else {
            n
        }
    }

    /// Normalized mean of a cell's vertices.
    pub fn cell_centre(&self, cell: usize) -> Vec4 {
        let mut ids: Vec<usize> = self.cells[cell]
            .faces
            .iter()
            .flat_map(|&f| self.faces[f].vertices.iter().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let s = ids.iter().fold(Vec4::zeros(), |a, &i| a + self.vertices[i]);
        s / s.norm()
    }

    pub fn defects(&self) -> AnsatzDefects {
        let a = alpha().0;
        let mut angle: f64 = 0.0;
        let mut planarity: f64 = 0.0;
        let mut min_edge = f64::INFINITY;
        for f in &self.faces {
            let pts: Vec<Vec4> = f.vertices.iter().map(|&i| self.vertices[i]).collect();
            let (n, _) = best_fit_normal(&pts);
            let k = pts.len();
            for t in 0..k {
                planarity = planarity.max(n.dot(&pts[t]).abs());
                let ang = vertex_angle(&pts[t], &pts[(t + k - 1) % k], &pts[(t + 1) % k]);
                angle = angle.max((ang - a).abs());
                min_edge = min_edge.min(geodesic_distance(&pts[t], &pts[(t + 1) % k]));
            }
        }
        let mut dihedral: f64 = 0.0;
        for (ci, cell) in self.cells.iter().enumerate() {
            for (x, &f) in cell.faces.iter().enumerate() {
                for &g in cell.faces.iter().skip(x + 1) {
                    if !share_edge(&self.faces[f].vertices, &self.faces[g].vertices) {
                        continue;
                    }
                    let d = self.inward_normal(f, ci).dot(&self.inward_normal(g, ci));
                    let phi = PI - d.clamp(-1.0, 1.0).acos();
                    dihedral = dihedral.max((phi - 2.0 * PI / 3.0).abs());
                }
            }
        }
        AnsatzDefects {
            angle,
            dihedral,
            planarity,
            min_edge,
        }
    }
}

/// True when the cyclic polygons share a side.
pub fn share_edge(a: &[usize], b: &[usize]) -> bool {
    let sides = |p: &[usize]| {
        (0..p.len())
            .map(|i| {
                let (x, y) = (p[i], p[(i + 1) % p.len()]);
                (x.min(y), x.max(y))
            })
            .collect::<Vec<_>>()
    };
    let sb = sides(b);
    sides(a).iter().any(|e| sb.contains(e))
}

/// θ minimizing the ansatz residual on (0.05, θ_deg − 10⁻³): grid scan
/// followed by golden-section refinement.
pub fn t9_best_theta() -> (f64, AnsatzDefects) {
    let lo = 0.05;
    let hi = degenerate_theta() - 1e-3;
    let f = |t: f64| t9_ansatz(t).defects().residual();
    let n = 200;
    let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let best = grid
        .iter()
        .copied()
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .expect("grid is non-empty");
    let step = (hi - lo) / n as f64;
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if f(x1) < f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let t = 0.5 * (a + b);
    (t, t9_ansatz(t).defects())
}

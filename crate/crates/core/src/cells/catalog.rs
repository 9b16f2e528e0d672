//! Combinatorial catalog of the polygonal cells and pattern scanners over it.

use std::collections::{BTreeMap, HashMap};

use super::{polygon_sides, realize_cell, CellType, FaceClass, SideRole};
use crate::ansatz::{t9_ansatz, AnsatzFaceKind};
use crate::geom::Vec4;

/// A face of a combinatorial cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CombFace {
    pub class: FaceClass,
    pub vertices: Vec<usize>,
    pub roles: Vec<SideRole>,
}

impl CombFace {
    /// Apex vertex of a symmetric pentagon listed base-first.
    pub fn apex(&self) -> Option<usize> {
        (self.class.is_symmetric_pentagon() && self.vertices.len() == 5).then(|| self.vertices[3])
    }

    fn role_of(&self, e: [usize; 2]) -> Option<SideRole> {
        polygon_sides(&self.vertices)
            .iter()
            .position(|s| *s == e)
            .map(|i| self.roles[i])
    }
}

/// Face lattice of a polygonal cell with face classes and side roles.
#[derive(Clone, Debug, PartialEq)]
pub struct CellCombinatorics {
    pub cell_type: CellType,
    pub n_vertices: usize,
    pub faces: Vec<CombFace>,
}

impl CellCombinatorics {
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut e: Vec<[usize; 2]> = self.faces.iter().flat_map(|f| polygon_sides(&f.vertices)).collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Faces containing each edge.
    pub fn edge_faces(&self) -> BTreeMap<[usize; 2], Vec<usize>> {
        let mut m: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for e in polygon_sides(&f.vertices) {
                m.entry(e).or_default().push(fi);
            }
        }
        m
    }

    /// V − E + F of the boundary surface.
    pub fn euler(&self) -> i64 {
        self.n_vertices as i64 - self.edges().len() as i64 + self.faces.len() as i64
    }

    /// Every edge on exactly two faces and every vertex on three edges.
    pub fn is_simple_polyhedron(&self) -> bool {
        let ef = self.edge_faces();
        let mut deg = vec![0usize; self.n_vertices];
        for e in ef.keys() {
            deg[e[0]] += 1;
            deg[e[1]] += 1;
        }
        ef.values().all(|v| v.len() == 2) && deg.iter().all(|&d| d == 3)
    }
}

pub(crate) const PENTAGON_ROLES: [SideRole; 5] = [
    SideRole::Base,
    SideRole::LowerLeg,
    SideRole::UpperLeg,
    SideRole::UpperLeg,
    SideRole::LowerLeg,
];

fn decahedron() -> CellCombinatorics {
    // top square s_k = k, T_k = 4 + k, B_k = 8 + k, bottom square b_k = 12 + k
    let s = |k: usize| k % 4;
    let t = |k: usize| 4 + k % 4;
    let b = |k: usize| 8 + k % 4;
    let q = |k: usize| 12 + k % 4;
    let mut faces = vec![
        CombFace {
            class: FaceClass::Regular(4),
            vertices: vec![0, 1, 2, 3],
            roles: vec![SideRole::Regular; 4],
        },
        CombFace {
            class: FaceClass::Regular(4),
            vertices: vec![12, 13, 14, 15],
            roles: vec![SideRole::Regular; 4],
        },
    ];
    for k in 0..4 {
        faces.push(CombFace {
            class: FaceClass::P9,
            vertices: vec![s(k), s(k + 1), t(k + 1), b(k), t(k)],
            roles: PENTAGON_ROLES.to_vec(),
        });
        faces.push(CombFace {
            class: FaceClass::P9,
            vertices: vec![q(k), q(k + 1), b(k + 1), t(k + 1), b(k)],
            roles: PENTAGON_ROLES.to_vec(),
        });
    }
    CellCombinatorics {
        cell_type: CellType::C9,
        n_vertices: 16,
        faces,
    }
}

fn nonahedron() -> CellCombinatorics {
    let a = t9_ansatz(0.7);
    let cell = &a.cells[5];
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut faces = Vec::new();
    for &fi in &cell.faces {
        let f = &a.faces[fi];
        let verts: Vec<usize> = f
            .vertices
            .iter()
            .map(|v| {
                let n = local.len();
                *local.entry(*v).or_insert(n)
            })
            .collect();
        let (class, roles) = match f.kind {
            AnsatzFaceKind::Square { .. } => (FaceClass::Regular(4), vec![SideRole::Regular; 4]),
            AnsatzFaceKind::Pentagon { .. } => (FaceClass::P10, PENTAGON_ROLES.to_vec()),
        };
        faces.push(CombFace {
            class,
            vertices: verts,
            roles,
        });
    }
    CellCombinatorics {
        cell_type: CellType::C10,
        n_vertices: local.len(),
        faces,
    }
}

fn octahedron() -> CellCombinatorics {
    // ridge x1 x2 on top, ridge w1 w2 below, rotated a quarter turn
    let [x1, x2, y1, y2, z1, z2, w1, w2, p1, p2, q1, q2] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];
    use SideRole::{Axial as A, Transverse as T};
    let rect = |v: [usize; 4]| CombFace {
        class: FaceClass::R11,
        vertices: v.to_vec(),
        roles: vec![A, T, A, T],
    };
    let pent = |v: [usize; 5]| CombFace {
        class: FaceClass::P11,
        vertices: v.to_vec(),
        roles: PENTAGON_ROLES.to_vec(),
    };
    CellCombinatorics {
        cell_type: CellType::C11,
        n_vertices: 12,
        faces: vec![
            rect([x1, x2, y2, y1]),
            rect([x2, x1, z1, z2]),
            rect([w1, w2, p2, p1]),
            rect([w2, w1, q1, q2]),
            pent([y1, y2, p2, w2, q2]),
            pent([z2, z1, q1, w1, p1]),
            pent([p1, p2, y2, x2, z2]),
            pent([q2, q1, z1, x1, y1]),
        ],
    }
}

/// Combinatorics of a polygonal cell; `None` for the smooth cells C₁–C₃.
/// C₄–C₈ are read off their realizations, C₉–C₁₁ are tabulated.
pub fn combinatorics(t: CellType) -> Option<CellCombinatorics> {
    match t {
        CellType::C1 | CellType::C2 | CellType::C3 => None,
        CellType::C9 => Some(decahedron()),
        CellType::C10 => Some(nonahedron()),
        CellType::C11 => Some(octahedron()),
        _ => {
            let r = realize_cell(t).ok()?;
            Some(CellCombinatorics {
                cell_type: t,
                n_vertices: r.vertices.len(),
                faces: r
                    .faces
                    .iter()
                    .map(|f| CombFace {
                        class: f.class,
                        vertices: f.vertices.clone(),
                        roles: f.roles.clone(),
                    })
                    .collect(),
            })
        }
    }
}

/// Euclidean prototype of a tabulated cell, mapped gnomonically onto S³
/// around (0,0,0,1). Used as the solver's starting point.
pub(crate) fn start_coordinates(t: CellType) -> Option<Vec<Vec4>> {
    let gnomonic = |p: [f64; 3], s: f64| {
        let v = Vec4::new(s * p[0], s * p[1], s * p[2], 1.0);
        v / v.norm()
    };
    let polar = |r: f64, ang: f64, z: f64| [r * ang.cos(), r * ang.sin(), z];
    let q = std::f64::consts::FRAC_PI_2;
    match t {
        CellType::C9 => {
            let mut pts = Vec::new();
            for k in 0..4 {
                pts.push(polar(0.5, k as f64 * q, 1.0));
            }
            for k in 0..4 {
                pts.push(polar(1.0, k as f64 * q, 0.35));
            }
            for k in 0..4 {
                pts.push(polar(1.0, k as f64 * q + q / 2.0, -0.35));
            }
            for k in 0..4 {
                pts.push(polar(0.5, k as f64 * q + q / 2.0, -1.0));
            }
            Some(pts.into_iter().map(|p| gnomonic(p, 0.35)).collect())
        }
        CellType::C10 => {
            let a = t9_ansatz(0.7);
            let cell = &a.cells[5];
            let mut order: Vec<usize> = Vec::new();
            for &fi in &cell.faces {
                for &v in &a.faces[fi].vertices {
                    if !order.contains(&v) {
                        order.push(v);
                    }
                }
            }
            Some(order.iter().map(|&i| a.vertices[i]).collect())
        }
        CellType::C11 => {
            let (h, hp) = (1.3, 0.7);
            let pts = [
                [-1.0, 0.0, h],
                [1.0, 0.0, h],
                [-1.0, 1.0, hp],
                [1.0, 1.0, hp],
                [-1.0, -1.0, hp],
                [1.0, -1.0, hp],
                [0.0, -1.0, -h],
                [0.0, 1.0, -h],
                [1.0, -1.0, -hp],
                [1.0, 1.0, -hp],
                [-1.0, -1.0, -hp],
                [-1.0, 1.0, -hp],
            ];
            Some(pts.iter().map(|p| gnomonic(*p, 0.3)).collect())
        }
        _ => None,
    }
}

/// Two faces of `class` sharing an edge that has role `role` in both
/// (any role when `None`).
pub fn find_adjacent_pair(c: &CellCombinatorics, class: FaceClass, role: Option<SideRole>) -> Option<(usize, usize)> {
    for (e, fs) in c.edge_faces() {
        for (x, &f) in fs.iter().enumerate() {
            for &g in fs.iter().skip(x + 1) {
                let (ff, gg) = (&c.faces[f], &c.faces[g]);
                if ff.class != class || gg.class != class {
                    continue;
                }
                let ok = match role {
                    None => true,
                    Some(r) => ff.role_of(e) == Some(r) && gg.role_of(e) == Some(r),
                };
                if ok {
                    return Some((f.min(g), f.max(g)));
                }
            }
        }
    }
    None
}

/// A vertex where three faces of `class` meet; with `at_apex`, the vertex
/// must be the apex of each of them.
pub fn find_triple_meeting(c: &CellCombinatorics, class: FaceClass, at_apex: bool) -> Option<usize> {
    (0..c.n_vertices).find(|&v| {
        c.faces
            .iter()
            .filter(|f| f.class == class && f.vertices.contains(&v))
            .filter(|f| !at_apex || f.apex() == Some(v))
            .count()
            >= 3
    })
}

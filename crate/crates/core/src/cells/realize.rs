//! Realizations of the admissible cells on S³.

use std::sync::OnceLock;

use super::catalog::{combinatorics, start_coordinates};
use super::lm::lm_realize;
use super::{CellError, CellFace, CellRealization, CellType, FaceClass, RealizationStatus, SideRole};
use crate::convex::{hull4, Facet4};
use crate::geom::{geodesic_distance, Vec4};
use crate::lattice::{face_lattice, FaceLattice};
use crate::polytopes::{cell120_cell_circumradius, dodecahedral_prism, simplex5, simplicial_prism, tesseract};
use crate::sphere_trig::{rectangle_coupled_pentagon, regular_side, symmetric_pentagon_solve, PinnedSide, TrigError};

/// Realizations with every constraint met to this accuracy count as exact.
pub const EXACT_TOL: f64 = 1e-8;

fn lattice_of(points: Vec<Vec4>) -> FaceLattice {
    let facets: Vec<Facet4> = hull4(&points);
    face_lattice(&points, &facets)
}

pub(crate) fn simplex_lattice() -> &'static FaceLattice {
    static L: OnceLock<FaceLattice> = OnceLock::new();
    L.get_or_init(|| lattice_of(simplex5()))
}

pub(crate) fn prism_lattice() -> &'static FaceLattice {
    static L: OnceLock<FaceLattice> = OnceLock::new();
    L.get_or_init(|| lattice_of(simplicial_prism()))
}

pub(crate) fn tesseract_lattice() -> &'static FaceLattice {
    static L: OnceLock<FaceLattice> = OnceLock::new();
    L.get_or_init(|| lattice_of(tesseract()))
}

pub(crate) fn dodecahedral_prism_lattice() -> &'static FaceLattice {
    static L: OnceLock<FaceLattice> = OnceLock::new();
    L.get_or_init(|| lattice_of(dodecahedral_prism(cell120_cell_circumradius())))
}

/// Cell type of a facet of one of the uniform polytopes, by vertex count.
pub(crate) fn facet_cell_type(n_vertices: usize) -> Option<CellType> {
    match n_vertices {
        4 => Some(CellType::C4),
        6 => Some(CellType::C5),
        8 => Some(CellType::C6),
        10 => Some(CellType::C7),
        20 => Some(CellType::C8),
        _ => None,
    }
}

/// Nominal class of a polygon of `n` sides on a cell of type `t`.
pub(crate) fn nominal_class(t: CellType, n: usize) -> FaceClass {
    match (t, n) {
        (CellType::C5, 4) => FaceClass::R5,
        (CellType::C7, 4) => FaceClass::R7,
        _ => FaceClass::Regular(n as u8),
    }
}

/// Side roles from measured lengths: rectangles get long/short labels,
/// everything else is regular.
pub(crate) fn measured_roles(class: FaceClass, pts: &[Vec4]) -> Vec<SideRole> {
    let k = pts.len();
    let len: Vec<f64> = (0..k).map(|i| geodesic_distance(&pts[i], &pts[(i + 1) % k])).collect();
    match class {
        FaceClass::R5 | FaceClass::R7 => len
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if *l > len[(i + 1) % k] {
                    SideRole::Long
                } else {
                    SideRole::Short
                }
            })
            .collect(),
        _ => vec![SideRole::Regular; k],
    }
}

/// The cell of a radial polytope partition corresponding to `facet`.
pub fn cell_from_lattice(l: &FaceLattice, facet: usize) -> Option<CellRealization> {
    let f = &l.facets[facet];
    let t = facet_cell_type(f.vertices.len())?;
    let local = |g: usize| f.vertices.iter().position(|&v| v == g).expect("face vertex on facet");
    let faces = l.facet_faces[facet]
        .iter()
        .map(|&fi| {
            let lf = &l.faces[fi];
            let class = nominal_class(t, lf.vertices.len());
            let pts: Vec<Vec4> = lf.vertices.iter().map(|&v| l.vertices[v]).collect();
            let sign = if lf.facets[0] == facet { 1.0 } else { -1.0 };
            CellFace {
                class,
                vertices: lf.vertices.iter().map(|&v| local(v)).collect(),
                roles: measured_roles(class, &pts),
                normal: lf.normal * sign,
            }
        })
        .collect();
    let mut c = CellRealization {
        cell_type: t,
        vertices: f.vertices.iter().map(|&v| l.vertices[v]).collect(),
        faces,
        residual: 0.0,
        status: RealizationStatus::Exact,
        notes: Vec::new(),
    };
    c.residual = c.defects().max();
    if c.residual >= EXACT_TOL {
        c.status = RealizationStatus::LeastSquares;
    }
    Some(c)
}

fn unit(v: Vec4) -> Vec4 {
    v / v.norm()
}

/// Directions of the three half-planes of the Y-cone in the (x₃, x₄) plane.
pub(crate) fn y_directions() -> [Vec4; 3] {
    let d = |k: f64| {
        let a = std::f64::consts::FRAC_PI_2 + k * 2.0 * std::f64::consts::PI / 3.0;
        Vec4::new(0.0, 0.0, a.cos(), a.sin())
    };
    [d(0.0), d(1.0), d(2.0)]
}

/// Directions of the four cells of the tetrahedral cone in (x₂, x₃, x₄).
pub(crate) fn tet_directions() -> [Vec4; 4] {
    let r = 1.0 / 3f64.sqrt();
    [
        Vec4::new(0.0, r, r, r),
        Vec4::new(0.0, r, -r, -r),
        Vec4::new(0.0, -r, r, -r),
        Vec4::new(0.0, -r, -r, r),
    ]
}

/// All cells of the smooth partition built from copies of `t` (C₁–C₃).
pub fn smooth_cells(t: CellType) -> Vec<CellRealization> {
    let mk = |faces: Vec<CellFace>, vertices: Vec<Vec4>| {
        let mut c = CellRealization {
            cell_type: t,
            vertices,
            faces,
            residual: 0.0,
            status: RealizationStatus::Exact,
            notes: Vec::new(),
        };
        c.residual = c.defects().max();
        c
    };
    match t {
        CellType::C1 => [1.0, -1.0]
            .iter()
            .map(|s| {
                mk(
                    vec![CellFace {
                        class: FaceClass::Disk,
                        vertices: Vec::new(),
                        roles: Vec::new(),
                        normal: Vec4::new(0.0, 0.0, 0.0, *s),
                    }],
                    Vec::new(),
                )
            })
            .collect(),
        CellType::C2 => {
            let y = y_directions();
            (0..3)
                .map(|a| {
                    let faces = (0..3)
                        .filter(|&b| b != a)
                        .map(|b| CellFace {
                            class: FaceClass::Disk,
                            vertices: Vec::new(),
                            roles: Vec::new(),
                            normal: unit(y[a] - y[b]),
                        })
                        .collect();
                    mk(faces, Vec::new())
                })
                .collect()
        }
        CellType::C3 => {
            let d = tet_directions();
            let poles = vec![Vec4::new(1.0, 0.0, 0.0, 0.0), Vec4::new(-1.0, 0.0, 0.0, 0.0)];
            (0..4)
                .map(|a| {
                    let faces = (0..4)
                        .filter(|&b| b != a)
                        .map(|b| CellFace {
                            class: FaceClass::Bigon,
                            vertices: vec![0, 1],
                            roles: vec![SideRole::Regular; 2],
                            normal: unit(d[a] - d[b]),
                        })
                        .collect();
                    mk(faces, poles.clone())
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

/// First cell of the smooth partition of type `t`.
pub fn smooth_cell(t: CellType) -> Option<CellRealization> {
    smooth_cells(t).into_iter().next()
}

fn first_facet_of(l: &FaceLattice, t: CellType) -> Option<CellRealization> {
    (0..l.facets.len())
        .find(|&f| facet_cell_type(l.facets[f].vertices.len()) == Some(t))
        .and_then(|f| cell_from_lattice(l, f))
}

/// Evidence that no cell of type `t` exists, from the trigonometry of its
/// pentagonal faces; `None` when the faces are not obstructed.
pub fn infeasibility_certificate(t: CellType) -> Option<String> {
    let a4 = regular_side(4).ok()?;
    let describe = |e: TrigError| e.to_string();
    match t {
        CellType::C9 => symmetric_pentagon_solve(PinnedSide::Base, a4)
            .err()
            .map(|e| format!("pentagon with base equal to the square side: {}", describe(e))),
        CellType::C10 => symmetric_pentagon_solve(PinnedSide::LowerLeg, a4)
            .err()
            .map(|e| format!("pentagon with non-adjacent legs equal to the square side: {}", describe(e))),
        CellType::C11 => rectangle_coupled_pentagon(400).err().map(|e| {
            format!(
                "pentagon whose base and upper legs are the two sides of one rectangle: {}",
                describe(e)
            )
        }),
        _ => None,
    }
}

/// Realizes a cell type. C₁–C₈ come from explicit constructions and are
/// exact; C₉–C₁₁ are attempted by the constraint solver and reported as
/// exact, least-squares or infeasible.
pub fn realize_cell(t: CellType) -> Result<CellRealization, CellError> {
    match t {
        CellType::C1 | CellType::C2 | CellType::C3 => smooth_cell(t).ok_or(CellError::NotRealized(t)),
        CellType::C4 => first_facet_of(simplex_lattice(), t).ok_or(CellError::NotRealized(t)),
        CellType::C5 => first_facet_of(prism_lattice(), t).ok_or(CellError::NotRealized(t)),
        CellType::C6 => first_facet_of(tesseract_lattice(), t).ok_or(CellError::NotRealized(t)),
        CellType::C7 | CellType::C8 => {
            first_facet_of(dodecahedral_prism_lattice(), t).ok_or(CellError::NotRealized(t))
        }
        CellType::C9 | CellType::C10 | CellType::C11 => solve_tabulated(t),
    }
}

fn solve_tabulated(t: CellType) -> Result<CellRealization, CellError> {
    static CACHE: OnceLock<[Result<CellRealization, CellError>; 3]> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [CellType::C9, CellType::C10, CellType::C11].map(solve_tabulated_uncached)
    });
    all[t.index() - 9].clone()
}

fn solve_tabulated_uncached(t: CellType) -> Result<CellRealization, CellError> {
    let comb = combinatorics(t).ok_or(CellError::NotRealized(t))?;
    let start = start_coordinates(t).ok_or(CellError::NotRealized(t))?;
    let out = lm_realize(&comb, &start, 8, 0x5eed ^ t.index() as u64);
    if !out.residual.is_finite() {
        return Err(CellError::SolverDiverged(t));
    }
    let faces = comb
        .faces
        .iter()
        .zip(&out.normals)
        .map(|(f, n)| CellFace {
            class: f.class,
            vertices: f.vertices.clone(),
            roles: f.roles.clone(),
            normal: -n,
        })
        .collect();
    let mut notes = vec![format!(
        "constraint solver: residual {:.3e}, shortest edge {:.3e}, convex {}, {} iterations",
        out.residual, out.min_edge, out.convex, out.iterations
    )];
    let certificate = infeasibility_certificate(t);
    let status = if out.is_realization() {
        RealizationStatus::Exact
    } else if let Some(c) = &certificate {
        notes.push(c.clone());
        RealizationStatus::Infeasible
    } else {
        RealizationStatus::LeastSquares
    };
    Ok(CellRealization {
        cell_type: t,
        vertices: out.vertices,
        faces,
        residual: out.residual,
        status,
        notes,
    })
}

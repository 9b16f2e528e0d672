//! Piecewise-linear 3-dimensional mass in R⁴: simplicial complexes, bounding
//! hulls, cones over partitions and the closed-form T₈ comparison.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::convex::{complement_basis, facet_volume, halfspace_vertices3, hull3, hull4, Facet4};
use crate::geom::{best_fit_normal, compensated_sum, cross3, Vec3, Vec4};
use crate::partition::{PartitionComplex, PartitionError};
use crate::sphere_trig::alpha;

/// Smallest tetrahedron volume kept when meshing.
pub const MIN_TET_VOLUME: f64 = 1e-14;
/// Tolerance for hull membership and facet incidence.
pub const HULL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MassError {
    #[error("degenerate hull: {0}")]
    DegenerateHull(String),
    #[error("cannot clip face {face}: {reason}")]
    ClipDegeneracy { face: usize, reason: String },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// 3-dimensional measure of the tetrahedron `p0 p1 p2 p3` in R⁴.
pub fn simplex_mass3(p0: &Vec4, p1: &Vec4, p2: &Vec4, p3: &Vec4) -> f64 {
    let e = [p1 - p0, p2 - p0, p3 - p0];
    let g = Matrix3::from_fn(|i, j| e[i].dot(&e[j]));
    g.determinant().max(0.0).sqrt() / 6.0
}

/// A simplicial 3-complex in R⁴ whose vertices may be pinned.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Complex3 {
    pub vertices: Vec<Vec4>,
    pub tets: Vec<[usize; 4]>,
    pub fixed: Vec<bool>,
}

impl Complex3 {
    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    pub fn tet_volume(&self, t: &[usize; 4]) -> f64 {
        let v = &self.vertices;
        simplex_mass3(&v[t[0]], &v[t[1]], &v[t[2]], &v[t[3]])
    }

    /// Volumes in tetrahedron order.
    pub fn tet_volumes(&self) -> Vec<f64> {
        self.tets.par_iter().map(|t| self.tet_volume(t)).collect()
    }

    /// Total 3-volume; parallel over tetrahedra, summed in a fixed order.
    pub fn mass(&self) -> f64 {
        compensated_sum(self.tet_volumes())
    }

    pub fn min_tet_volume(&self) -> f64 {
        self.tet_volumes().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn fixed_count(&self) -> usize {
        self.fixed.iter().filter(|&&f| f).count()
    }

    /// Number of tetrahedra on each triangle.
    pub fn junctions(&self) -> BTreeMap<[usize; 3], usize> {
        let mut m = BTreeMap::new();
        for t in &self.tets {
            for skip in 0..4 {
                let mut tri = [0usize; 3];
                let mut k = 0;
                for (i, &v) in t.iter().enumerate() {
                    if i != skip {
                        tri[k] = v;
                        k += 1;
                    }
                }
                tri.sort_unstable();
                *m.entry(tri).or_insert(0) += 1;
            }
        }
        m
    }

    /// How many triangles carry 1, 2, 3, ... tetrahedra.
    pub fn junction_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in self.junctions().into_values() {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    pub fn transformed(&self, q: &Matrix4<f64>) -> Complex3 {
        Complex3 {
            vertices: self.vertices.iter().map(|v| q * v).collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, s: f64) -> Complex3 {
        Complex3 {
            vertices: self.vertices.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    /// Longest edge length.
    pub fn max_edge(&self) -> f64 {
        let mut m: f64 = 0.0;
        for t in &self.tets {
            for i in 0..4 {
                for j in i + 1..4 {
                    m = m.max((self.vertices[t[i]] - self.vertices[t[j]]).norm());
                }
            }
        }
        m
    }
}

/// Convex polytope `{x : n·x ≤ d for every facet}` containing the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Hull {
    pub points: Vec<Vec4>,
    pub facets: Vec<Facet4>,
    /// Dilation applied to the generating polytope.
    pub scale: f64,
}

impl Hull {
    pub fn from_points(points: &[Vec4]) -> Result<Hull, MassError> {
        if points.len() < 5 {
            return Err(MassError::DegenerateHull(format!("{} points do not span R⁴", points.len())));
        }
        Self::from_facets(points, hull4(points))
    }

    pub fn from_facets(points: &[Vec4], facets: Vec<Facet4>) -> Result<Hull, MassError> {
        if facets.len() < 5 {
            return Err(MassError::DegenerateHull(format!("only {} facets", facets.len())));
        }
        if let Some(f) = facets.iter().find(|f| f.offset <= 1e-12) {
            return Err(MassError::DegenerateHull(format!("origin not interior (offset {:.3e})", f.offset)));
        }
        for f in &facets {
            if points.iter().any(|p| f.normal.dot(p) > f.offset + 1e-10) {
                return Err(MassError::DegenerateHull("inconsistent facet".into()));
            }
        }
        Ok(Hull {
            points: points.to_vec(),
            facets,
            scale: 1.0,
        })
    }

    /// Hull of the genuine (non-artificial) vertices of a partition.
    pub fn from_partition(p: &PartitionComplex) -> Result<Hull, MassError> {
        let pts: Vec<Vec4> = (0..p.vertices.len())
            .filter(|i| !p.artificial.contains(i))
            .map(|i| p.vertices[i])
            .collect();
        Self::from_points(&pts)
    }

    /// Minkowski gauge: 1 on the boundary, below 1 inside.
    pub fn gauge(&self, x: &Vec4) -> f64 {
        self.facets
            .iter()
            .map(|f| f.normal.dot(x) / f.offset)
            .fold(f64::MIN, f64::max)
    }

    pub fn contains(&self, x: &Vec4) -> bool {
        self.gauge(x) <= 1.0 + HULL_TOL
    }

    pub fn on_boundary(&self, x: &Vec4) -> bool {
        (self.gauge(x) - 1.0).abs() <= HULL_TOL
    }

    pub fn inradius(&self) -> f64 {
        self.facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, s: f64) -> Hull {
        Hull {
            points: self.points.iter().map(|p| p * s).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet4 {
                    offset: f.offset * s,
                    ..f.clone()
                })
                .collect(),
            scale: self.scale * s,
        }
    }

    pub fn facet_points(&self, k: usize) -> Vec<Vec4> {
        self.facets[k].vertices.iter().map(|&i| self.points[i]).collect()
    }

    pub fn facet_volume(&self, k: usize) -> f64 {
        facet_volume(&self.points, &self.facets[k])
    }

    pub fn boundary_volume(&self) -> f64 {
        compensated_sum((0..self.facets.len()).map(|k| self.facet_volume(k)))
    }

    /// Facet containing every point of `pts`.
    pub fn facet_containing(&self, pts: &[Vec4]) -> Option<usize> {
        self.facets
            .iter()
            .position(|f| pts.iter().all(|p| (f.normal.dot(p) - f.offset).abs() <= HULL_TOL))
    }

    /// Facet whose outward normal is closest to `dir`.
    pub fn facet_toward(&self, dir: &Vec4) -> usize {
        let mut best = (0, f64::MIN);
        for (k, f) in self.facets.iter().enumerate() {
            let c = f.normal.dot(dir);
            if c > best.1 {
                best = (k, c);
            }
        }
        best.0
    }
}

const QUANT: f64 = 1e-7;

/// Accumulates tetrahedra, merging vertices closer than about 1e-7.
#[derive(Default)]
pub(crate) struct MeshBuilder {
    vertices: Vec<Vec4>,
    fixed: Vec<bool>,
    tets: Vec<[usize; 4]>,
    index: HashMap<[i64; 4], Vec<usize>>,
}

impl MeshBuilder {
    pub(crate) fn vertex(&mut self, x: Vec4, fixed: bool) -> usize {
        let key = x.map(|c| (c / QUANT).round() as i64);
        let mut found = None;
        'search: for d in 0..81 {
            let mut k = [0i64; 4];
            let mut r = d;
            for (i, slot) in k.iter_mut().enumerate() {
                *slot = key[i] + (r % 3) as i64 - 1;
                r /= 3;
            }
            if let Some(ids) = self.index.get(&k) {
                for &id in ids {
                    if (self.vertices[id] - x).norm() < QUANT {
                        found = Some(id);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(id) => {
                self.fixed[id] |= fixed;
                id
            }
            None => {
                let id = self.vertices.len();
                self.vertices.push(x);
                self.fixed.push(fixed);
                self.index.entry([key[0], key[1], key[2], key[3]]).or_default().push(id);
                id
            }
        }
    }

    pub(crate) fn tet(&mut self, pts: [(Vec4, bool); 4]) {
        if simplex_mass3(&pts[0].0, &pts[1].0, &pts[2].0, &pts[3].0) <= MIN_TET_VOLUME {
            return;
        }
        let ids = pts.map(|(x, f)| self.vertex(x, f));
        self.tets.push(ids);
    }

    /// Meshes the convex hull of `pts`, which must span a 3-flat: each
    /// boundary polygon is fanned from its centroid and coned to the body
    /// centroid.
    pub(crate) fn add_convex(&mut self, pts: &[Vec4], fixed: &dyn Fn(&Vec4) -> bool) -> Result<(), String> {
        if pts.len() < 4 {
            return Err(format!("{} points", pts.len()));
        }
        let body = pts.iter().fold(Vec4::zeros(), |a, p| a + p) / pts.len() as f64;
        let centred: Vec<Vec4> = pts.iter().map(|p| p - body).collect();
        let (n, _) = best_fit_normal(&centred);
        let b = complement_basis(&n);
        let local: Vec<Vec3> = centred.iter().map(|p| Vec3::new(b[0].dot(p), b[1].dot(p), b[2].dot(p))).collect();
        let faces = hull3(&local);
        if faces.len() < 4 {
            return Err("not full-dimensional".into());
        }
        let fb = fixed(&body);
        for f in &faces {
            let poly: Vec<Vec4> = f.vertices.iter().map(|&i| pts[i]).collect();
            let pc = poly.iter().fold(Vec4::zeros(), |a, p| a + p) / poly.len() as f64;
            let fc = fixed(&pc);
            let k = poly.len();
            for t in 0..k {
                let (u, w) = (poly[t], poly[(t + 1) % k]);
                self.tet([(body, fb), (pc, fc), (u, fixed(&u)), (w, fixed(&w))]);
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Complex3 {
        Complex3 {
            vertices: self.vertices,
            tets: self.tets,
            fixed: self.fixed,
        }
    }
}

/// How each face of a partition was truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Truncation {
    /// Flat face on a hull facet: the pyramid over it.
    Pyramid,
    /// Smooth face: its hyperplane sector clipped to the hull.
    Clipped,
    /// Face off the hull boundary: its polygon is fanned from the vertex
    /// centroid and each triangular sector is clipped to the hull.
    Fan,
}

/// Cone over the 2-skeleton of `p` truncated at `h`, with pinned boundary.
pub fn cone_complex(p: &PartitionComplex, h: &Hull) -> Result<Complex3, MassError> {
    Ok(cone_complex_traced(p, h)?.0)
}

/// As [`cone_complex`], also returning the truncation used for each face.
pub fn cone_complex_traced(p: &PartitionComplex, h: &Hull) -> Result<(Complex3, Vec<Truncation>), MassError> {
    let mut mb = MeshBuilder::default();
    let mut kinds = Vec::with_capacity(p.faces.len());
    let boundary = |x: &Vec4| h.on_boundary(x);
    for (fi, f) in p.faces.iter().enumerate() {
        if f.vertices.len() < 3 {
            let pts = clipped_sector(p, fi, h)?;
            mb.add_convex(&pts, &boundary)
                .map_err(|reason| MassError::ClipDegeneracy { face: fi, reason })?;
            kinds.push(Truncation::Clipped);
            continue;
        }
        let poly: Vec<Vec4> = f.vertices.iter().map(|&i| p.vertices[i]).collect();
        if h.facet_containing(&poly).is_some() {
            let mut pts = vec![Vec4::zeros()];
            pts.extend(poly.iter().copied());
            mb.add_convex(&pts, &boundary)
                .map_err(|reason| MassError::ClipDegeneracy { face: fi, reason })?;
            kinds.push(Truncation::Pyramid);
        } else {
            let c = poly.iter().fold(Vec4::zeros(), |a, v| a + v) / poly.len() as f64;
            let k = poly.len();
            for t in 0..k {
                let pts = sector_section([c, poly[t], poly[(t + 1) % k]], h)
                    .ok_or_else(|| MassError::ClipDegeneracy {
                        face: fi,
                        reason: "sector section is empty or unbounded".into(),
                    })?;
                mb.add_convex(&pts, &boundary)
                    .map_err(|reason| MassError::ClipDegeneracy { face: fi, reason })?;
            }
            kinds.push(Truncation::Fan);
        }
    }
    Ok((mb.finish(), kinds))
}

/// Sector of the hyperplane of a smooth face bounded by the other faces of
/// its two cells, clipped to `h`.
fn clipped_sector(p: &PartitionComplex, fi: usize, h: &Hull) -> Result<Vec<Vec4>, MassError> {
    let f = &p.faces[fi];
    let b = complement_basis(&f.normal);
    let proj = |v: &Vec4| Vec3::new(b[0].dot(v), b[1].dot(v), b[2].dot(v));
    let mut fixed_planes: Vec<(Vec3, f64)> = Vec::new();
    for &c in &f.cells {
        for &g in &p.cell_faces[c] {
            if g == fi {
                continue;
            }
            let face = &p.faces[g];
            let m = if face.cells[0] == c { face.normal } else { -face.normal };
            if m.dot(&f.normal).abs() > 1.0 - 1e-9 {
                continue;
            }
            let a = -proj(&m);
            let len = a.norm();
            if len > 1e-12 {
                fixed_planes.push((a / len, 0.0));
            }
        }
    }
    let facet_planes: Vec<(Vec3, f64)> = h
        .facets
        .iter()
        .filter_map(|k| {
            let a = proj(&k.normal);
            let len = a.norm();
            (len > 1e-12).then(|| (a / len, k.offset / len))
        })
        .collect();
    let ys = bounded_section(&fixed_planes, &facet_planes, h).ok_or_else(|| MassError::ClipDegeneracy {
        face: fi,
        reason: "section is empty or unbounded".into(),
    })?;
    Ok(ys.iter().map(|y| b[0] * y.x + b[1] * y.y + b[2] * y.z).collect())
}

/// The simplicial cone over three rays, clipped to `h`.
fn sector_section(rays: [Vec4; 3], h: &Hull) -> Option<Vec<Vec4>> {
    let n = cross3(&rays[0], &rays[1], &rays[2]);
    if n.norm() < 1e-12 {
        return None;
    }
    let b = complement_basis(&n);
    let proj = |v: &Vec4| Vec3::new(b[0].dot(v), b[1].dot(v), b[2].dot(v));
    let r: Vec<Vec3> = rays.iter().map(proj).collect();
    let sides: Vec<(Vec3, f64)> = (0..3)
        .map(|i| {
            let (x, y, z) = (r[(i + 1) % 3], r[(i + 2) % 3], r[i]);
            let mut m = x.cross(&y);
            if m.dot(&z) < 0.0 {
                m = -m;
            }
            (-m / m.norm(), 0.0)
        })
        .collect();
    let facets: Vec<(Vec3, f64)> = h
        .facets
        .iter()
        .filter_map(|k| {
            let a = proj(&k.normal);
            let len = a.norm();
            (len > 1e-12).then(|| (a / len, k.offset / len))
        })
        .collect();
    let ys = bounded_section(&sides, &facets, h)?;
    Some(ys.iter().map(|y| b[0] * y.x + b[1] * y.y + b[2] * y.z).collect())
}

/// Vertices of the intersection of all planes, adding the hull planes one
/// at a time (most violated first) so the active set stays small.
fn bounded_section(always: &[(Vec3, f64)], optional: &[(Vec3, f64)], h: &Hull) -> Option<Vec<Vec3>> {
    let r = 2.0 * h.points.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let boxes: Vec<(Vec3, f64)> = (0..3)
        .flat_map(|i| {
            let mut e = Vec3::zeros();
            e[i] = 1.0;
            [(e, r), (-e, r)]
        })
        .collect();
    let mut active: Vec<(Vec3, f64)> = always.to_vec();
    let mut used = vec![false; optional.len()];
    loop {
        let mut planes = active.clone();
        planes.extend(boxes.iter().copied());
        let verts = halfspace_vertices3(&planes);
        if verts.len() < 4 {
            return None;
        }
        let mut worst = (None, HULL_TOL);
        for (k, (a, d)) in optional.iter().enumerate() {
            if used[k] {
                continue;
            }
            let v = verts.iter().map(|y| a.dot(y) - d).fold(f64::MIN, f64::max);
            if v > worst.1 {
                worst = (Some(k), v);
            }
        }
        match worst.0 {
            Some(k) => {
                used[k] = true;
                active.push(optional[k]);
            }
            None => {
                if verts.iter().any(|y| y.amax() > r - 1e-6) {
                    return None;
                }
                return Some(verts);
            }
        }
    }
}

/// Mass of a complex (sum of tetrahedron volumes).
pub fn mass(c: &Complex3) -> f64 {
    c.mass()
}

/// Mass of the cone from the origin over a spherical 2-patch of the given
/// area, out to radius `r`.
pub fn cone_patch_mass(area: f64, r: f64) -> f64 {
    area * r * r * r / 3.0
}

/// Mass of the cone over a geodesic polygon on a great 2-sphere of S³,
/// approximated by a `depth`-times subdivided fan projected to the sphere.
pub fn spherical_patch_cone_mesh_mass(polygon: &[Vec4], depth: u32) -> f64 {
    let c = polygon.iter().fold(Vec4::zeros(), |a, v| a + v).normalize();
    let mut tris: Vec<[Vec4; 3]> = (0..polygon.len())
        .map(|i| [c, polygon[i], polygon[(i + 1) % polygon.len()]])
        .collect();
    for _ in 0..depth {
        tris = tris
            .into_iter()
            .flat_map(|[a, b, d]| {
                let ab = (a + b).normalize();
                let bd = (b + d).normalize();
                let da = (d + a).normalize();
                [[a, ab, da], [ab, b, bd], [da, bd, d], [ab, bd, da]]
            })
            .collect();
    }
    let o = Vec4::zeros();
    compensated_sum(tris.iter().map(|[a, b, d]| simplex_mass3(&o, a, b, d)))
}

/// The closed-form comparison eliminating T₈.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T8Margin {
    pub pentagon_faces: usize,
    /// Area of one regular spherical pentagon with angles α.
    pub pentagon_area: f64,
    pub cone_mass: f64,
    /// Mass of the boundary sphere less one cell.
    pub replacement_mass: f64,
    pub margin: f64,
    /// 240(5α − 3π) − 119π²/60.
    pub closed_form: f64,
    pub agree: bool,
}

pub fn t8_margin_report() -> T8Margin {
    let cells = 120usize;
    let faces_per_cell = 12usize;
    let pentagon_faces = cells * faces_per_cell / 2;
    let a = alpha().0;
    let pentagon_area = 5.0 * a - 3.0 * PI;
    let cone_mass = pentagon_faces as f64 * cone_patch_mass(pentagon_area, 1.0);
    let sphere = 2.0 * PI * PI;
    let replacement_mass = sphere - sphere / cells as f64;
    let margin = cone_mass - replacement_mass;
    let closed_form = 240.0 * (5.0 * a - 3.0 * PI) - 119.0 / 60.0 * PI * PI;
    T8Margin {
        pentagon_faces,
        pentagon_area,
        cone_mass,
        replacement_mass,
        margin,
        closed_form,
        agree: (margin - closed_form).abs() < 1e-9,
    }
}

/// Mass of the T₈ cone in the unit ball minus that of the competitor.
pub fn t8_margin() -> f64 {
    t8_margin_report().margin
}

#[cfg(test)]
mod tests;

//! Brute-force convex hulls in three and four dimensions, sized for the
//! handful-of-dozens point sets that appear in partition constructions.

use nalgebra::{Matrix3, Matrix4};

use crate::geom::{best_fit_normal, compensated_sum, Vec3, Vec4};

/// Tolerance for deciding that a point lies on a supporting hyperplane.
pub const PLANE_TOL: f64 = 1e-9;

/// A face of a 3-dimensional convex polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct Face3 {
    /// Unit outward normal.
    pub normal: Vec3,
    pub offset: f64,
    /// Indices into the point list, counter-clockwise seen from outside.
    pub vertices: Vec<usize>,
}

/// Faces of the convex hull of `points` (which must span R³).
pub fn hull3(points: &[Vec3]) -> Vec<Face3> {
    let n = points.len();
    let mut faces: Vec<Face3> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = (points[j] - points[i]).cross(&(points[k] - points[i]));
                let len = nrm.norm();
                if len < 1e-12 {
                    continue;
                }
                let mut nrm = nrm / len;
                let mut off = nrm.dot(&points[i]);
                let (mut above, mut below) = (false, false);
                for p in points {
                    let s = nrm.dot(p) - off;
                    if s > PLANE_TOL {
                        above = true;
                    } else if s < -PLANE_TOL {
                        below = true;
                    }
                }
                if above && below {
                    continue;
                }
                if above {
                    nrm = -nrm;
                    off = -off;
                }
                if faces
                    .iter()
                    .any(|f| (f.normal - nrm).norm() < 1e-7 && (f.offset - off).abs() < 1e-7)
                {
                    continue;
                }
                let on: Vec<usize> = (0..n)
                    .filter(|&m| (nrm.dot(&points[m]) - off).abs() <= PLANE_TOL)
                    .collect();
                let ordered = order_in_plane(points, &on, &nrm);
                faces.push(Face3 {
                    normal: nrm,
                    offset: off,
                    vertices: ordered,
                });
            }
        }
    }
    faces
}

/// Orders coplanar points counter-clockwise around `normal`.
fn order_in_plane(points: &[Vec3], idx: &[usize], normal: &Vec3) -> Vec<usize> {
    let c = idx.iter().fold(Vec3::zeros(), |a, &i| a + points[i]) / idx.len() as f64;
    let e1 = {
        let d = points[idx[0]] - c;
        d / d.norm()
    };
    let e2 = normal.cross(&e1);
    let mut out = idx.to_vec();
    let ang = |i: usize| {
        let d = points[i] - c;
        d.dot(&e2).atan2(d.dot(&e1))
    };
    out.sort_by(|&a, &b| ang(a).total_cmp(&ang(b)));
    out
}

/// Volume of a convex 3-polytope given its points and hull faces.
pub fn volume3(points: &[Vec3], faces: &[Face3]) -> f64 {
    let c = points.iter().fold(Vec3::zeros(), |a, p| a + p) / points.len() as f64;
    compensated_sum(faces.iter().map(|f| {
        let v = &f.vertices;
        let o = points[v[0]];
        let area2: Vec3 = (1..v.len() - 1)
            .map(|t| (points[v[t]] - o).cross(&(points[v[t + 1]] - o)))
            .fold(Vec3::zeros(), |a, b| a + b);
        area2.norm() / 2.0 * (f.offset - f.normal.dot(&c)) / 3.0
    }))
}

/// Vertices of `{y : a·y ≤ b}` for every `(a, b)` in `planes`, assuming the
/// region is bounded. Near-duplicate vertices are merged.
pub fn halfspace_vertices3(planes: &[(Vec3, f64)]) -> Vec<Vec3> {
    let n = planes.len();
    let mut out: Vec<Vec3> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = Matrix3::from_rows(&[
                    planes[i].0.transpose(),
                    planes[j].0.transpose(),
                    planes[k].0.transpose(),
                ]);
                if m.determinant().abs() < 1e-10 {
                    continue;
                }
                let Some(y) = m
                    .lu()
                    .solve(&Vec3::new(planes[i].1, planes[j].1, planes[k].1))
                else {
                    continue;
                };
                if planes.iter().all(|(a, b)| a.dot(&y) <= b + 1e-9)
                    && !out.iter().any(|q| (q - y).norm() < 1e-9)
                {
                    out.push(y);
                }
            }
        }
    }
    out
}

/// A facet of a 4-dimensional convex polytope `{x : normal·x ≤ offset}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet4 {
    pub normal: Vec4,
    pub offset: f64,
    pub vertices: Vec<usize>,
}

/// Facets of the convex hull of `points`, which must contain the origin in
/// the interior. Co-hyperplanar facets are merged.
pub fn hull4(points: &[Vec4]) -> Vec<Facet4> {
    let n = points.len();
    let mut facets: Vec<Facet4> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let e1 = points[b] - points[a];
                    let e2 = points[c] - points[a];
                    let e3 = points[d] - points[a];
                    let nrm = crate::geom::cross3(&e1, &e2, &e3);
                    let len = nrm.norm();
                    if len < 1e-10 {
                        continue;
                    }
                    let mut nrm = nrm / len;
                    let mut off = nrm.dot(&points[a]);
                    if off < 0.0 {
                        nrm = -nrm;
                        off = -off;
                    }
                    if off < 1e-12 {
                        continue;
                    }
                    if points.iter().any(|p| nrm.dot(p) > off + PLANE_TOL) {
                        continue;
                    }
                    let on: Vec<usize> = (0..n)
                        .filter(|&m| (nrm.dot(&points[m]) - off).abs() <= PLANE_TOL)
                        .collect();
                    if !seen.insert(on.clone()) {
                        continue;
                    }
                    // refit for accuracy on the full vertex set
                    let (nrm, off) = refit_facet(points, &on, nrm);
                    facets.push(Facet4 {
                        normal: nrm,
                        offset: off,
                        vertices: on,
                    });
                }
            }
        }
    }
    facets
}

/// Facets whose outward normals are known in advance (e.g. cell centres of a
/// regular polytope): each normal is paired with the points maximizing it.
pub fn facets_from_normals(points: &[Vec4], normals: &[Vec4]) -> Vec<Facet4> {
    normals
        .iter()
        .map(|n| {
            let n = n / n.norm();
            let off = points.iter().map(|p| n.dot(p)).fold(f64::MIN, f64::max);
            let on: Vec<usize> = (0..points.len())
                .filter(|&m| (n.dot(&points[m]) - off).abs() <= 1e-8)
                .collect();
            Facet4 {
                normal: n,
                offset: off,
                vertices: on,
            }
        })
        .collect()
}

fn refit_facet(points: &[Vec4], on: &[usize], guess: Vec4) -> (Vec4, f64) {
    let c = on.iter().fold(Vec4::zeros(), |a, &i| a + points[i]) / on.len() as f64;
    let centred: Vec<Vec4> = on.iter().map(|&i| points[i] - c).collect();
    let (mut n, _) = best_fit_normal(&centred);
    if n.dot(&guess) < 0.0 {
        n = -n;
    }
    (n, n.dot(&c))
}

/// Orthonormal basis (as columns) of the orthogonal complement of `n`.
pub fn complement_basis(n: &Vec4) -> [Vec4; 3] {
    let n = n / n.norm();
    let m = Matrix4::identity() - n * n.transpose();
    // Gram–Schmidt on the projected standard basis, longest columns first
    let mut basis: Vec<Vec4> = Vec::with_capacity(3);
    let mut cols: Vec<Vec4> = (0..4).map(|i| m.column(i).into_owned()).collect();
    cols.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    for mut v in cols {
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let len = v.norm();
        if len > 1e-8 && basis.len() < 3 {
            basis.push(v / len);
        }
    }
    [basis[0], basis[1], basis[2]]
}

/// 3-volume of a facet polytope (points lying in one hyperplane of R⁴).
pub fn facet_volume(points: &[Vec4], facet: &Facet4) -> f64 {
    let b = complement_basis(&facet.normal);
    let local: Vec<Vec3> = facet
        .vertices
        .iter()
        .map(|&i| Vec3::new(b[0].dot(&points[i]), b[1].dot(&points[i]), b[2].dot(&points[i])))
        .collect();
    let faces = hull3(&local);
    volume3(&local, &faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube3() -> Vec<Vec3> {
        let mut v = Vec::new();
        for s in 0..8 {
            v.push(Vec3::new(
                if s & 1 == 0 { -1.0 } else { 1.0 },
                if s & 2 == 0 { -1.0 } else { 1.0 },
                if s & 4 == 0 { -1.0 } else { 1.0 },
            ));
        }
        v
    }

    #[test]
    fn cube_hull_and_volume() {
        let p = cube3();
        let f = hull3(&p);
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|x| x.vertices.len() == 4));
        assert!((volume3(&p, &f) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn halfspace_cube() {
        let mut planes = Vec::new();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = 1.0;
            planes.push((e, 1.0));
            planes.push((-e, 1.0));
        }
        assert_eq!(halfspace_vertices3(&planes).len(), 8);
    }

    #[test]
    fn tesseract_hull() {
        let mut pts = Vec::new();
        for s in 0..16 {
            pts.push(Vec4::from_fn(|i, _| if s >> i & 1 == 0 { -0.5 } else { 0.5 }));
        }
        let f = hull4(&pts);
        assert_eq!(f.len(), 8);
        for x in &f {
            assert_eq!(x.vertices.len(), 8);
            assert!((x.offset - 0.5).abs() < 1e-12);
            assert!((facet_volume(&pts, x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_basis_is_orthonormal() {
        let n = Vec4::new(0.3, -0.2, 0.9, 0.1);
        let b = complement_basis(&n);
        for i in 0..3 {
            assert!(b[i].dot(&n).abs() < 1e-12);
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((b[i].dot(&b[j]) - want).abs() < 1e-12);
            }
        }
    }
}

//! Face lattice of a convex 4-polytope whose vertices lie on S³: facets
//! become cells of the radial partition, ridges become its 2-faces.

use std::collections::BTreeSet;

use crate::convex::Facet4;
use crate::geom::{cyclic_order, Vec4};

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeFace {
    /// Cyclically ordered vertex indices.
    pub vertices: Vec<usize>,
    /// The two facets containing the face, in increasing order.
    pub facets: [usize; 2],
    /// Unit normal of the hyperplane through the origin containing the face.
    pub normal: Vec4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceLattice {
    pub vertices: Vec<Vec4>,
    pub facets: Vec<Facet4>,
    pub faces: Vec<LatticeFace>,
    pub edges: Vec<[usize; 2]>,
    /// Face indices per facet.
    pub facet_faces: Vec<Vec<usize>>,
}

/// Computes 2-faces and edges from facets. Two facets share a 2-face when
/// they share at least three vertices.
pub fn face_lattice(vertices: &[Vec4], facets: &[Facet4]) -> FaceLattice {
    let nv = vertices.len();
    let mut vertex_facets: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (fi, f) in facets.iter().enumerate() {
        for &v in &f.vertices {
            vertex_facets[v].push(fi);
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for vf in &vertex_facets {
        for (x, &a) in vf.iter().enumerate() {
            for &b in vf.iter().skip(x + 1) {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    let mut faces = Vec::new();
    let mut facet_faces = vec![Vec::new(); facets.len()];
    for (a, b) in pairs {
        let sa: BTreeSet<usize> = facets[a].vertices.iter().copied().collect();
        let shared: Vec<usize> = facets[b].vertices.iter().copied().filter(|v| sa.contains(v)).collect();
        if shared.len() < 3 {
            continue;
        }
        let pts: Vec<Vec4> = shared.iter().map(|&i| vertices[i]).collect();
        let order = cyclic_order(&pts);
        let cyc: Vec<usize> = order.iter().map(|&k| shared[k]).collect();
        let n = facets[a].normal / facets[a].offset - facets[b].normal / facets[b].offset;
        let id = faces.len();
        facet_faces[a].push(id);
        facet_faces[b].push(id);
        faces.push(LatticeFace {
            vertices: cyc,
            facets: [a, b],
            normal: n / n.norm(),
        });
    }
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for f in &faces {
        let k = f.vertices.len();
        for i in 0..k {
            let (x, y) = (f.vertices[i], f.vertices[(i + 1) % k]);
            edges.insert((x.min(y), x.max(y)));
        }
    }
    FaceLattice {
        vertices: vertices.to_vec(),
        facets: facets.to_vec(),
        faces,
        edges: edges.into_iter().map(|(a, b)| [a, b]).collect(),
        facet_faces,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::hull4;
    use crate::polytopes::{simplex5, tesseract};

    #[test]
    fn simplex_lattice() {
        let v = simplex5();
        let l = face_lattice(&v, &hull4(&v));
        assert_eq!((l.facets.len(), l.faces.len(), l.edges.len()), (5, 10, 10));
    }

    #[test]
    fn tesseract_lattice() {
        let v = tesseract();
        let l = face_lattice(&v, &hull4(&v));
        assert_eq!((l.facets.len(), l.faces.len(), l.edges.len()), (8, 24, 32));
        for f in &l.faces {
            for &i in &f.vertices {
                assert!(f.normal.dot(&v[i]).abs() < 1e-12);
            }
        }
    }
}

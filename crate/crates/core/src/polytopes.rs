//! Vertex sets of the convex 4-polytopes whose boundaries project radially
//! onto the polyhedral partitions of S³.

use crate::geom::{Vec3, Vec4};

/// The golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Unit vertices of a regular 4-simplex (pairwise inner product −1/4).
pub fn simplex5() -> Vec<Vec4> {
    let s = 1.0 / 5f64.sqrt();
    let raw = [
        [1.0, 1.0, 1.0, -s],
        [1.0, -1.0, -1.0, -s],
        [-1.0, 1.0, -1.0, -s],
        [-1.0, -1.0, 1.0, -s],
        [0.0, 0.0, 0.0, 4.0 * s],
    ];
    raw.iter()
        .map(|r| {
            let v = Vec4::from_row_slice(r);
            v / v.norm()
        })
        .collect()
}

/// Unit vertices (±½, ±½, ±½, ±½) of the tesseract, in binary order.
pub fn tesseract() -> Vec<Vec4> {
    (0..16)
        .map(|s| Vec4::from_fn(|i, _| if s >> i & 1 == 0 { -0.5 } else { 0.5 }))
        .collect()
}

/// Unit vertices of a regular tetrahedron in R³.
pub fn tetrahedron3() -> Vec<Vec3> {
    let r = 1.0 / 3f64.sqrt();
    vec![
        Vec3::new(r, r, r),
        Vec3::new(r, -r, -r),
        Vec3::new(-r, r, -r),
        Vec3::new(-r, -r, r),
    ]
}

/// Vertices (√15/4·u, ±1/4) of the simplicial prism whose two simplex cells
/// are centred at (0,0,0,±1). The first four carry +1/4.
pub fn simplicial_prism() -> Vec<Vec4> {
    let r = 15f64.sqrt() / 4.0;
    let mut out = Vec::with_capacity(8);
    for h in [0.25, -0.25] {
        for u in tetrahedron3() {
            out.push(Vec4::new(r * u.x, r * u.y, r * u.z, h));
        }
    }
    out
}

/// Unit vertices of a regular dodecahedron in R³.
pub fn dodecahedron3() -> Vec<Vec3> {
    let mut out = Vec::with_capacity(20);
    for s in 0..8 {
        out.push(Vec3::new(
            if s & 1 == 0 { -1.0 } else { 1.0 },
            if s & 2 == 0 { -1.0 } else { 1.0 },
            if s & 4 == 0 { -1.0 } else { 1.0 },
        ));
    }
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            let v = [0.0, s1 / PHI, s2 * PHI];
            for c in 0..3 {
                out.push(Vec3::new(v[c % 3], v[(c + 1) % 3], v[(c + 2) % 3]));
            }
        }
    }
    out.iter().map(|v| v / v.norm()).collect()
}

/// Vertices (sin θ·d, ±cos θ) of the dodecahedral prism whose dodecahedral
/// cells are centred at (0,0,0,±1) with angular circumradius `theta`.
pub fn dodecahedral_prism(theta: f64) -> Vec<Vec4> {
    let (s, c) = theta.sin_cos();
    let mut out = Vec::with_capacity(40);
    for h in [c, -c] {
        for d in dodecahedron3() {
            out.push(Vec4::new(s * d.x, s * d.y, s * d.z, h));
        }
    }
    out
}

fn even_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
                        continue;
                    }
                    let inversions = (0..4)
                        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                        .filter(|&(i, j)| p[i] > p[j])
                        .count();
                    if inversions % 2 == 0 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// The 120 unit quaternions of the binary icosahedral group (the vertices
/// of the 600-cell).
pub fn binary_icosahedral() -> Vec<Vec4> {
    let mut out: Vec<Vec4> = Vec::with_capacity(120);
    for i in 0..4 {
        for s in [-1.0, 1.0] {
            let mut v = Vec4::zeros();
            v[i] = s;
            out.push(v);
        }
    }
    for s in 0..16 {
        out.push(Vec4::from_fn(|i, _| if s >> i & 1 == 0 { -0.5 } else { 0.5 }));
    }
    let base = [0.0, 0.5, 0.5 / PHI, 0.5 * PHI];
    for p in even_permutations() {
        for s in 0..8 {
            let signs = [1.0, if s & 1 == 0 { 1.0 } else { -1.0 }, if s & 2 == 0 { 1.0 } else { -1.0 }, if s & 4 == 0 { 1.0 } else { -1.0 }];
            let mut v = Vec4::zeros();
            for k in 0..4 {
                v[p[k]] = base[k] * signs[k];
            }
            out.push(v);
        }
    }
    out
}

/// Combinatorics of the 600-cell on the binary icosahedral vertices:
/// neighbour lists (inner product φ/2) and the 600 tetrahedra.
pub fn cell600_tetrahedra(verts: &[Vec4]) -> (Vec<Vec<usize>>, Vec<[usize; 4]>) {
    let n = verts.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && (verts[i].dot(&verts[j]) - PHI / 2.0).abs() < 1e-9)
                .collect()
        })
        .collect();
    let is_adj = |a: usize, b: usize| adj[a].binary_search(&b).is_ok();
    let mut tets = Vec::with_capacity(600);
    for i in 0..n {
        for &j in adj[i].iter().filter(|&&j| j > i) {
            for &k in adj[j].iter().filter(|&&k| k > j && is_adj(i, k)) {
                for &l in adj[k].iter().filter(|&&l| l > k && is_adj(i, l) && is_adj(j, l)) {
                    tets.push([i, j, k, l]);
                }
            }
        }
    }
    (adj, tets)
}

/// Unit vertices of the 120-cell together with its cell centres: vertices
/// are the normalized centroids of the 600-cell's tetrahedra, cell centres
/// are the 600-cell's vertices.
pub fn cell120() -> (Vec<Vec4>, Vec<Vec4>) {
    let centres = binary_icosahedral();
    let (_, tets) = cell600_tetrahedra(&centres);
    let verts = tets
        .iter()
        .map(|t| {
            let c = t.iter().fold(Vec4::zeros(), |a, &i| a + centres[i]);
            c / c.norm()
        })
        .collect();
    (verts, centres)
}

/// Angular circumradius of one dodecahedral cell of the 120-cell: the
/// angle between a cell centre and any of its vertices.
pub fn cell120_cell_circumradius() -> f64 {
    let centres = binary_icosahedral();
    let (_, tets) = cell600_tetrahedra(&centres);
    // the tetrahedra containing centre 0 give the vertices of cell 0
    let t = tets.iter().find(|t| t.contains(&0)).expect("vertex 0 lies in a tetrahedron");
    let c = t.iter().fold(Vec4::zeros(), |a, &i| a + centres[i]);
    crate::geom::geodesic_distance(&centres[0], &(c / c.norm()))
}

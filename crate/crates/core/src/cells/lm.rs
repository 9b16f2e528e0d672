//! Levenberg–Marquardt realization of a combinatorial cell on S³.
//!
//! Unknowns are the vertex positions and one outward normal per face. The
//! equations ask for unit vertices and normals, every face vertex on its
//! face's great sphere, and outward normals of adjacent faces at inner
//! product 1/2 (dihedral angle 2π/3). At a trivalent vertex these force the
//! three face angles to equal α.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::catalog::CellCombinatorics;
use crate::geom::{best_fit_normal, geodesic_distance, Vec4};

#[derive(Clone, Debug, PartialEq)]
pub struct LmOutcome {
    pub vertices: Vec<Vec4>,
    /// Outward unit normals, one per face.
    pub normals: Vec<Vec4>,
    /// Largest absolute equation residual.
    pub residual: f64,
    /// Shortest edge of the result.
    pub min_edge: f64,
    /// Every vertex strictly inside every face half-space it is not on.
    pub convex: bool,
    pub iterations: usize,
}

impl LmOutcome {
    /// Residual small, no collapsed edge, convex.
    pub fn is_realization(&self) -> bool {
        self.residual < 1e-9 && self.min_edge > 1e-3 && self.convex
    }
}

struct System<'a> {
    comb: &'a CellCombinatorics,
    adjacent: Vec<(usize, usize)>,
}

impl System<'_> {
    fn nv(&self) -> usize {
        self.comb.n_vertices
    }

    fn unknowns(&self) -> usize {
        4 * (self.nv() + self.comb.faces.len())
    }

    fn equations(&self) -> usize {
        let incid: usize = self.comb.faces.iter().map(|f| f.vertices.len()).sum();
        self.nv() + self.comb.faces.len() + incid + self.adjacent.len()
    }

    fn vec(z: &DVector<f64>, i: usize) -> Vec4 {
        Vec4::new(z[4 * i], z[4 * i + 1], z[4 * i + 2], z[4 * i + 3])
    }

    fn eval(&self, z: &DVector<f64>, jac: Option<&mut DMatrix<f64>>) -> DVector<f64> {
        let nv = self.nv();
        let mut r = DVector::zeros(self.equations());
        let mut rows: Vec<(usize, usize, Vec4)> = Vec::new();
        let mut row = 0;
        for i in 0..nv {
            let v = Self::vec(z, i);
            r[row] = v.norm_squared() - 1.0;
            rows.push((row, i, 2.0 * v));
            row += 1;
        }
        for f in 0..self.comb.faces.len() {
            let n = Self::vec(z, nv + f);
            r[row] = n.norm_squared() - 1.0;
            rows.push((row, nv + f, 2.0 * n));
            row += 1;
        }
        for (f, face) in self.comb.faces.iter().enumerate() {
            let n = Self::vec(z, nv + f);
            for &i in &face.vertices {
                let v = Self::vec(z, i);
                r[row] = n.dot(&v);
                rows.push((row, nv + f, v));
                rows.push((row, i, n));
                row += 1;
            }
        }
        for &(f, g) in &self.adjacent {
            let (nf, ng) = (Self::vec(z, nv + f), Self::vec(z, nv + g));
            r[row] = nf.dot(&ng) - 0.5;
            rows.push((row, nv + f, ng));
            rows.push((row, nv + g, nf));
            row += 1;
        }
        if let Some(j) = jac {
            j.fill(0.0);
            for (rw, blk, g) in rows {
                for k in 0..4 {
                    j[(rw, 4 * blk + k)] += g[k];
                }
            }
        }
        r
    }
}

/// Runs damped Gauss–Newton from `start` (one point per vertex) and from
/// `restarts` seeded perturbations of it; returns the best outcome.
pub fn lm_realize(comb: &CellCombinatorics, start: &[Vec4], restarts: usize, seed: u64) -> LmOutcome {
    let ef = comb.edge_faces();
    let mut adjacent: Vec<(usize, usize)> = ef
        .values()
        .filter(|v| v.len() == 2)
        .map(|v| (v[0].min(v[1]), v[0].max(v[1])))
        .collect();
    adjacent.sort_unstable();
    adjacent.dedup();
    let sys = System { comb, adjacent };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<LmOutcome> = None;
    for attempt in 0..=restarts {
        let pts: Vec<Vec4> = start
            .iter()
            .map(|p| {
                if attempt == 0 {
                    *p
                } else {
                    let d = Vec4::from_fn(|_, _| rng.random_range(-0.05..0.05));
                    (p + d).normalize()
                }
            })
            .collect();
        let out = solve(&sys, &pts);
        let better = match &best {
            None => true,
            Some(b) => rank(&out) < rank(b),
        };
        if better {
            best = Some(out);
        }
    }
    best.expect("at least one attempt")
}

fn rank(o: &LmOutcome) -> (bool, f64) {
    (!(o.min_edge > 1e-3 && o.convex), o.residual)
}

fn solve(sys: &System<'_>, pts: &[Vec4]) -> LmOutcome {
    let comb = sys.comb;
    let nv = comb.n_vertices;
    let centre = {
        let s = pts.iter().fold(Vec4::zeros(), |a, p| a + p);
        s / s.norm()
    };
    let mut z = DVector::zeros(sys.unknowns());
    for (i, p) in pts.iter().enumerate() {
        z.fixed_rows_mut::<4>(4 * i).copy_from(p);
    }
    for (f, face) in comb.faces.iter().enumerate() {
        let fp: Vec<Vec4> = face.vertices.iter().map(|&i| pts[i]).collect();
        let (mut n, _) = best_fit_normal(&fp);
        if n.dot(&centre) > 0.0 {
            n = -n;
        }
        z.fixed_rows_mut::<4>(4 * (nv + f)).copy_from(&n);
    }
    let m = sys.equations();
    let nu = sys.unknowns();
    let mut jac = DMatrix::zeros(m, nu);
    let mut r = sys.eval(&z, Some(&mut jac));
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    let mut iterations = 0;
    for it in 0..500 {
        iterations = it;
        if r.amax() < 1e-13 {
            break;
        }
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let mut accepted = false;
        for _ in 0..20 {
            let mut a = jtj.clone();
            for k in 0..nu {
                a[(k, k)] += mu * (1.0 + jtj[(k, k)]);
            }
            let Some(chol) = a.cholesky() else {
                mu *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let zn = &z + step;
            let rn = sys.eval(&zn, None);
            let cn = rn.norm_squared();
            if cn < cost {
                z = zn;
                r = sys.eval(&z, Some(&mut jac));
                cost = cn;
                mu = (mu / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    let vertices: Vec<Vec4> = (0..nv).map(|i| System::vec(&z, i)).collect();
    let normals: Vec<Vec4> = (0..comb.faces.len()).map(|f| System::vec(&z, nv + f)).collect();
    let min_edge = comb
        .edges()
        .iter()
        .map(|e| geodesic_distance(&vertices[e[0]], &vertices[e[1]]))
        .fold(f64::INFINITY, f64::min);
    let convex = comb.faces.iter().zip(&normals).all(|(face, n)| {
        (0..nv)
            .filter(|i| !face.vertices.contains(i))
            .all(|i| n.dot(&vertices[i]) < -1e-6)
    });
    LmOutcome {
        vertices,
        normals,
        residual: r.amax(),
        min_edge,
        convex,
        iterations,
    }
}

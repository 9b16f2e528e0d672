//! Spherical trigonometry of isogonal polygons on the unit 2-sphere whose
//! interior angles all equal α = arccos(−1/3), the angle at which three
//! edges of a soap-film vertex meet.
//!
//! Polygon closure is expressed coordinate-free: walking an edge of length
//! `s` and turning left by the exterior angle `π − α` are both rotations of
//! a moving orthonormal frame, and a side sequence closes exactly when the
//! product of those rotations is the identity.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SMatrix, SVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{sample_s2, Vec3};

/// Sides shorter than this (or within this of π) are rejected as degenerate.
pub const DEGENERATE_SIDE: f64 = 1e-6;
/// Closure residual below which a polygon counts as closed.
pub const CLOSURE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrigError {
    #[error("no regular isogonal {0}-gon exists (cosine argument {1} outside [-1, 1])")]
    NoRegularPolygon(usize, f64),
    #[error("side length {0} is outside the admissible range")]
    Degenerate(f64),
    #[error("complementary rectangle side leaves (0, π) for side {0}")]
    NoComplement(f64),
    #[error("no closed symmetric pentagon with {pinned:?} = {length}: best residual {best_residual:.3e}")]
    NoSolution {
        pinned: PinnedSide,
        length: f64,
        best_residual: f64,
    },
    #[error("{} distinct symmetric pentagons with {pinned:?} = {length}", .roots.len())]
    AmbiguousSolution {
        pinned: PinnedSide,
        length: f64,
        roots: Vec<[f64; 5]>,
    },
}

/// An angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Angle(pub f64);

/// A geodesic arc length on the unit sphere, in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct GeodesicLength(pub f64);

impl Angle {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl GeodesicLength {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// The soap-film vertex angle α = arccos(−1/3).
pub fn alpha() -> Angle {
    Angle((-1.0f64 / 3.0).acos())
}

fn exterior_turn() -> f64 {
    PI - alpha().0
}

/// Side length of the regular isogonal n-gon: arccos((3 cos(2π/n) + 1) / 2).
pub fn regular_side(n: usize) -> Result<GeodesicLength, TrigError> {
    if n < 3 {
        return Err(TrigError::NoRegularPolygon(n, f64::NAN));
    }
    let arg = (3.0 * (2.0 * PI / n as f64).cos() + 1.0) / 2.0;
    if !(-1.0..=1.0).contains(&arg) || arg >= 1.0 {
        return Err(TrigError::NoRegularPolygon(n, arg));
    }
    Ok(GeodesicLength(arg.acos()))
}

/// Second side `q` of the isogonal α-rectangle with first side `p`,
/// from tan(p/2)·tan(q/2) = −cos α = 1/3.
pub fn rectangle_complement(p: GeodesicLength) -> Result<GeodesicLength, TrigError> {
    check_side(p.0)?;
    let t = (p.0 / 2.0).tan();
    let q = 2.0 * ((1.0 / 3.0) / t).atan();
    if !(q > DEGENERATE_SIDE && q < PI - DEGENERATE_SIDE) {
        return Err(TrigError::NoComplement(p.0));
    }
    Ok(GeodesicLength(q))
}

/// |tan(p/2)·tan(q/2) − 1/3|: zero exactly for compatible rectangle sides.
pub fn rectangle_relation_violation(p: GeodesicLength, q: GeodesicLength) -> f64 {
    ((p.0 / 2.0).tan() * (q.0 / 2.0).tan() - 1.0 / 3.0).abs()
}

fn check_side(s: f64) -> Result<(), TrigError> {
    if s.is_finite() && s > DEGENERATE_SIDE && s < PI - DEGENERATE_SIDE {
        Ok(())
    } else {
        Err(TrigError::Degenerate(s))
    }
}

fn walk(s: f64) -> Matrix3<f64> {
    let (sn, c) = s.sin_cos();
    Matrix3::new(c, -sn, 0.0, sn, c, 0.0, 0.0, 0.0, 1.0)
}

fn turn(e: f64) -> Matrix3<f64> {
    let (sn, c) = e.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -sn, 0.0, sn, c)
}

/// Composed frame motion of walking the side sequence with α-corners.
pub fn closure_map(sides: &[f64]) -> Matrix3<f64> {
    let t = turn(exterior_turn());
    sides
        .iter()
        .fold(Matrix3::identity(), |acc, &s| acc * walk(s) * t)
}

/// Frobenius distance of the closure map from the identity.
pub fn closure_residual(sides: &[f64]) -> f64 {
    (closure_map(sides) - Matrix3::identity()).norm()
}

/// Vertices on S² of the chain starting at e₁ heading along e₂ and turning
/// left by π − α after every side.
pub fn vertex_chain(sides: &[f64]) -> Vec<Vec3> {
    let t = turn(exterior_turn());
    let mut frame = Matrix3::identity();
    let mut out = Vec::with_capacity(sides.len());
    out.push(Vec3::new(1.0, 0.0, 0.0));
    for &s in sides {
        frame *= walk(s);
        out.push(frame.column(0).into_owned());
        frame *= t;
    }
    out.pop();
    out
}

/// A closed spherical polygon all of whose interior angles equal α.
#[derive(Clone, Debug, PartialEq)]
pub struct IsogonalPolygon {
    sides: Vec<GeodesicLength>,
    closure_residual: f64,
}

impl IsogonalPolygon {
    /// Wraps a side sequence, computing its closure residual. Fails when the
    /// chain does not close within [`CLOSURE_TOL`] or a side is degenerate.
    pub fn from_sides(sides: &[f64]) -> Result<Self, TrigError> {
        for &s in sides {
            check_side(s)?;
        }
        let r = closure_residual(sides);
        if r >= CLOSURE_TOL {
            return Err(TrigError::NoSolution {
                pinned: PinnedSide::Base,
                length: sides[0],
                best_residual: r,
            });
        }
        Ok(IsogonalPolygon {
            sides: sides.iter().map(|&s| GeodesicLength(s)).collect(),
            closure_residual: r,
        })
    }

    pub fn regular(n: usize) -> Result<Self, TrigError> {
        let a = regular_side(n)?.0;
        Self::from_sides(&vec![a; n])
    }

    pub fn n(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> Vec<f64> {
        self.sides.iter().map(|s| s.0).collect()
    }

    pub fn angle(&self) -> Angle {
        alpha()
    }

    pub fn closure_residual(&self) -> f64 {
        self.closure_residual
    }

    pub fn vertices(&self) -> Vec<Vec3> {
        vertex_chain(&self.sides())
    }

    /// Every vertex lies strictly left of every edge's great circle.
    pub fn is_convex(&self) -> bool {
        is_convex_chain(&self.vertices())
    }
}

fn is_convex_chain(v: &[Vec3]) -> bool {
    let n = v.len();
    (0..n).all(|i| {
        let nrm = v[i].cross(&v[(i + 1) % n]);
        (0..n)
            .filter(|&j| j != i && j != (i + 1) % n)
            .all(|j| nrm.dot(&v[j]) > 1e-12)
    })
}

/// Gauss–Bonnet area Σ angles − (n − 2)π of a closed isogonal polygon.
pub fn polygon_excess_area(poly: &IsogonalPolygon) -> f64 {
    let n = poly.n() as f64;
    n * alpha().0 - (n - 2.0) * PI
}

/// Monte Carlo area of the realized (convex) polygon; returns (area, stderr).
pub fn polygon_area_mc(poly: &IsogonalPolygon, samples: usize, seed: u64) -> (f64, f64) {
    let v = poly.vertices();
    let n = v.len();
    let normals: Vec<Vec3> = (0..n).map(|i| v[i].cross(&v[(i + 1) % n])).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = sample_s2(&mut rng);
        if normals.iter().all(|nr| nr.dot(&x) >= 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let area = 4.0 * PI;
    (p * area, area * (p * (1.0 - p) / samples as f64).sqrt())
}

/// Which side of a mirror-symmetric pentagon `(t, u, v, v, u)` is pinned:
/// the base `t`, the legs `u` adjacent to the base, or the legs `v` meeting
/// at the apex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PinnedSide {
    Base,
    LowerLeg,
    UpperLeg,
}

fn pentagon_sides(pinned: PinnedSide, len: f64, x: [f64; 2]) -> [f64; 5] {
    let (t, u, v) = match pinned {
        PinnedSide::Base => (len, x[0], x[1]),
        PinnedSide::LowerLeg => (x[0], len, x[1]),
        PinnedSide::UpperLeg => (x[0], x[1], len),
    };
    [t, u, v, v, u]
}

fn residual_vec(sides: &[f64]) -> SVector<f64, 9> {
    let m = closure_map(sides) - Matrix3::identity();
    SVector::<f64, 9>::from_iterator(m.iter().copied())
}

/// Damped Gauss–Newton on the closure residual in the two free sides.
/// Returns the final point and its residual norm.
fn gauss_newton(pinned: PinnedSide, len: f64, start: [f64; 2]) -> ([f64; 2], f64) {
    let mut x = start;
    let f = |x: [f64; 2]| residual_vec(&pentagon_sides(pinned, len, x));
    let mut r = f(x);
    let mut rn = r.norm();
    let mut mu = 1e-6;
    for _ in 0..200 {
        if rn < 1e-14 {
            break;
        }
        let h = 1e-7;
        let mut jac = SMatrix::<f64, 9, 2>::zeros();
        for k in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let col = (f(xp) - f(xm)) / (2.0 * h);
            jac.set_column(k, &col);
        }
        let jtj = jac.transpose() * jac;
        let jtr = jac.transpose() * r;
        let mut improved = false;
        for _ in 0..30 {
            let a = jtj + nalgebra::Matrix2::identity() * mu * (1.0 + jtj.trace());
            let Some(step) = a.lu().solve(&(-jtr)) else {
                mu *= 10.0;
                continue;
            };
            let xn = [x[0] + step[0], x[1] + step[1]];
            if !(xn[0].is_finite() && xn[1].is_finite()) || xn[0].abs() > 4.0 || xn[1].abs() > 4.0 {
                mu *= 10.0;
                continue;
            }
            let rnew = f(xn);
            if rnew.norm() < rn {
                x = xn;
                r = rnew;
                rn = r.norm();
                mu = (mu * 0.3).max(1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (x, rn)
}

fn admissible_pentagon(s: &[f64; 5]) -> bool {
    s.iter()
        .all(|&x| x > DEGENERATE_SIDE && x < PI - DEGENERATE_SIDE)
        && is_convex_chain(&vertex_chain(s))
}

/// Solves for the closed mirror-symmetric isogonal pentagon `(t, u, v, v, u)`
/// with one side class pinned. Newton from the regular pentagon, then a grid
/// of restarts over the whole side domain to certify uniqueness.
pub fn symmetric_pentagon_solve(
    pinned: PinnedSide,
    length: GeodesicLength,
) -> Result<IsogonalPolygon, TrigError> {
    check_side(length.0)?;
    let a5 = regular_side(5)?.0;
    let mut starts = vec![[a5, a5]];
    let grid = 14;
    for i in 0..grid {
        for j in 0..grid {
            let s = |k: usize| 0.02 + (PI - 0.04) * (k as f64 + 0.5) / grid as f64;
            starts.push([s(i), s(j)]);
        }
    }
    let mut roots: Vec<[f64; 5]> = Vec::new();
    let mut best = f64::INFINITY;
    for st in starts {
        let (x, rn) = gauss_newton(pinned, length.0, st);
        best = best.min(rn);
        if rn > 1e-12 {
            continue;
        }
        let s = pentagon_sides(pinned, length.0, x);
        if !admissible_pentagon(&s) {
            continue;
        }
        if !roots
            .iter()
            .any(|r| r.iter().zip(&s).all(|(a, b)| (a - b).abs() < 1e-7))
        {
            roots.push(s);
        }
    }
    match roots.len() {
        0 => Err(TrigError::NoSolution {
            pinned,
            length: length.0,
            best_residual: best,
        }),
        1 => IsogonalPolygon::from_sides(&roots[0]),
        _ => Err(TrigError::AmbiguousSolution {
            pinned,
            length: length.0,
            roots,
        }),
    }
}

/// One sample `(t, u, v)` of the symmetric pentagon family.
pub type PentagonSample = [f64; 3];

/// Traces the one-parameter family of closed symmetric pentagons by
/// continuation in the base `t`, starting at the regular pentagon and
/// stopping on each side where a side length reaches zero. Samples are
/// returned sorted by `t`.
pub fn symmetric_pentagon_family(samples: usize) -> Vec<PentagonSample> {
    let a5 = regular_side(5).expect("regular pentagon exists").0;
    let step = a5 / (samples.max(4) as f64 / 4.0);
    let mut out = vec![[a5, a5, a5]];
    for dir in [-1.0, 1.0] {
        let mut x = [a5, a5];
        let mut t = a5;
        let mut h = step;
        while h > 1e-10 {
            let tn = t + dir * h;
            if tn <= 1e-9 {
                h /= 2.0;
                continue;
            }
            let (xn, rn) = gauss_newton(PinnedSide::Base, tn, x);
            if rn < 1e-12 && xn[0] > 0.0 && xn[1] > 0.0 && tn > 0.0 {
                t = tn;
                x = xn;
                out.push([t, x[0], x[1]]);
            } else {
                h /= 2.0;
            }
            if out.len() > 20 * samples + 100 {
                break;
            }
        }
    }
    out.sort_by(|a, b| a[0].total_cmp(&b[0]));
    out
}

/// Where two side classes of the symmetric family coincide.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualSideEvent {
    /// `"t=u"`, `"t=v"` or `"u=v"`.
    pub kind: &'static str,
    pub sides: [f64; 3],
    pub is_regular: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PentagonSweep {
    pub samples: usize,
    pub events: Vec<EqualSideEvent>,
    /// Largest base, lower leg and upper leg seen along the family.
    pub max_sides: [f64; 3],
}

/// Sweeps the symmetric pentagon family and locates every pentagon with
/// three equal sides (t = u, t = v, or u = v).
pub fn symmetric_pentagon_sweep(samples: usize) -> PentagonSweep {
    let fam = symmetric_pentagon_family(samples);
    let a5 = regular_side(5).expect("regular pentagon exists").0;
    let mut max_sides = [0.0f64; 3];
    for s in &fam {
        for k in 0..3 {
            max_sides[k] = max_sides[k].max(s[k]);
        }
    }
    type Diff = (&'static str, fn(&PentagonSample) -> f64);
    let diffs: [Diff; 3] = [
        ("t=u", |s| s[0] - s[1]),
        ("t=v", |s| s[0] - s[2]),
        ("u=v", |s| s[1] - s[2]),
    ];
    let mut events = Vec::new();
    for (kind, d) in diffs {
        for w in fam.windows(2) {
            let (d0, d1) = (d(&w[0]), d(&w[1]));
            let hit = if d0.abs() < 1e-8 {
                Some(w[0])
            } else if d0 * d1 < 0.0 {
                Some(bisect_family(w[0], w[1], d))
            } else {
                None
            };
            if let Some(s) = hit {
                if !events
                    .iter()
                    .any(|e: &EqualSideEvent| e.kind == kind && (e.sides[0] - s[0]).abs() < 1e-7)
                {
                    let is_regular = s.iter().all(|x| (x - a5).abs() < 1e-6);
                    events.push(EqualSideEvent {
                        kind,
                        sides: s,
                        is_regular,
                    });
                }
            }
        }
        if let Some(last) = fam.last() {
            if d(last).abs() < 1e-8
                && !events
                    .iter()
                    .any(|e| e.kind == kind && (e.sides[0] - last[0]).abs() < 1e-7)
            {
                events.push(EqualSideEvent {
                    kind,
                    sides: *last,
                    is_regular: last.iter().all(|x| (x - a5).abs() < 1e-6),
                });
            }
        }
    }
    PentagonSweep {
        samples: fam.len(),
        events,
        max_sides,
    }
}

fn bisect_family(
    lo: PentagonSample,
    hi: PentagonSample,
    d: fn(&PentagonSample) -> f64,
) -> PentagonSample {
    let (mut lo, mut hi) = (lo, hi);
    let mut mid = lo;
    for _ in 0..80 {
        let tm = 0.5 * (lo[0] + hi[0]);
        let (x, _) = gauss_newton(PinnedSide::Base, tm, [lo[1], lo[2]]);
        mid = [tm, x[0], x[1]];
        if d(&mid) * d(&lo) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi[0] - lo[0]).abs() < 1e-13 {
            break;
        }
    }
    mid
}

/// True iff every symmetric pentagon with three equal sides (within 1e-8)
/// found along the family is the regular one (within 1e-6).
pub fn three_equal_sides_implies_regular(samples: usize) -> bool {
    let sweep = symmetric_pentagon_sweep(samples.max(100));
    sweep.events.iter().all(|e| e.is_regular)
}

/// Searches the symmetric family for a pentagon whose base `t` and upper
/// leg `v` are the two sides of one α-rectangle: tan(t/2)·tan(v/2) = 1/3.
/// This is the shape required of a pentagon bordered by rectangles on its
/// base and on both upper legs.
pub fn rectangle_coupled_pentagon(samples: usize) -> Result<IsogonalPolygon, TrigError> {
    let fam = symmetric_pentagon_family(samples);
    let g = |s: &PentagonSample| (s[0] / 2.0).tan() * (s[2] / 2.0).tan() - 1.0 / 3.0;
    let mut best = f64::INFINITY;
    for w in fam.windows(2) {
        best = best.min(g(&w[0]).abs());
        if g(&w[0]) * g(&w[1]) <= 0.0 {
            let s = bisect_family(w[0], w[1], |s| {
                (s[0] / 2.0).tan() * (s[2] / 2.0).tan() - 1.0 / 3.0
            });
            return IsogonalPolygon::from_sides(&[s[0], s[1], s[2], s[2], s[1]]);
        }
    }
    Err(TrigError::NoSolution {
        pinned: PinnedSide::Base,
        length: f64::NAN,
        best_residual: best,
    })
}

/// Euclidean-ball bound (4/3)πr³ and exact spherical-ball volume
/// π(2r − sin 2r) of a geodesic ball of radius `r` in S³.
pub fn spherical_ball_bounds(r: f64) -> (f64, f64) {
    (4.0 / 3.0 * PI * r.powi(3), PI * (2.0 * r - (2.0 * r).sin()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Right-triangle decomposition of the regular n-gon: the triangle with
    /// angles π/n at the centre and α/2 at a vertex has cos(a/2) sin(α/2) =
    /// cos(π/n).
    fn regular_side_oracle(n: usize) -> Option<f64> {
        let half = (PI / n as f64).cos() / (alpha().0 / 2.0).sin();
        if half.abs() >= 1.0 {
            None
        } else {
            Some(2.0 * half.acos())
        }
    }

    #[test]
    fn alpha_value() {
        let a = alpha().0;
        assert!((a - 1.9106332362490186).abs() < 1e-15);
        assert!((a.cos() + 1.0 / 3.0).abs() < 1e-15);
        assert!(((PI - a).cos() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn regular_sides_match_oracle() {
        for n in 3..=10 {
            match (regular_side(n), regular_side_oracle(n)) {
                (Ok(a), Some(b)) => assert!((a.0 - b).abs() < 1e-12, "n={n}"),
                (Err(_), None) => {}
                (x, y) => panic!("n={n}: {x:?} vs {y:?}"),
            }
        }
        assert!(regular_side(2).is_err());
    }

    #[test]
    fn regular_side_values() {
        assert!((regular_side(5).unwrap().0 - 0.27092).abs() < 1e-5);
        assert!((regular_side(4).unwrap().0 - PI / 3.0).abs() < 1e-12);
        // regular 4-simplex vertices have pairwise inner product −1/4
        assert!((regular_side(3).unwrap().0 - (-0.25f64).acos()).abs() < 1e-12);
        assert!(matches!(regular_side(6), Err(TrigError::NoRegularPolygon(6, _))));
    }

    #[test]
    fn regular_polygons_close() {
        for n in 3..=5 {
            let p = IsogonalPolygon::regular(n).unwrap();
            assert!(p.closure_residual() < 1e-12);
            assert!(p.is_convex());
        }
    }

    #[test]
    fn rectangle_complement_values() {
        let a4 = regular_side(4).unwrap();
        let a5 = regular_side(5).unwrap();
        let a3 = regular_side(3).unwrap();
        assert!((rectangle_complement(a4).unwrap().0 - a4.0).abs() < 1e-12);
        let b = rectangle_complement(a5).unwrap();
        assert!((b.0 - 2.3653).abs() < 5e-5);
        let q3 = rectangle_complement(a3).unwrap();
        assert!((q3.0 - 2.0 * (1.0 / (3.0 * (a3.0 / 2.0).tan())).atan()).abs() < 1e-15);
        // the rectangle built from (a₃, q₃) closes
        assert!(closure_residual(&[a3.0, q3.0, a3.0, q3.0]) < 1e-12);
        assert!(closure_residual(&[a5.0, b.0, a5.0, b.0]) < 1e-12);
        assert!(rectangle_complement(GeodesicLength(0.0)).is_err());
    }

    #[test]
    fn rectangle_violation_values() {
        let a3 = regular_side(3).unwrap();
        let a4 = regular_side(4).unwrap();
        let a5 = regular_side(5).unwrap();
        let w = rectangle_relation_violation(a5, a3);
        assert!(w > 0.15 && (w - 0.158).abs() < 1e-3, "{w}");
        assert!(rectangle_relation_violation(a4, a4) < 1e-12);
        let b = rectangle_complement(a5).unwrap();
        assert!(rectangle_relation_violation(a5, b) < 1e-12);
    }

    #[test]
    fn excess_areas() {
        let a = alpha().0;
        let p5 = IsogonalPolygon::regular(5).unwrap();
        assert!((polygon_excess_area(&p5) - (5.0 * a - 3.0 * PI)).abs() < 1e-15);
        assert!((polygon_excess_area(&p5) - 0.128388).abs() < 1e-6);
        let p3 = IsogonalPolygon::regular(3).unwrap();
        assert!((polygon_excess_area(&p3) - 2.590307).abs() < 1e-6);
        let p4 = IsogonalPolygon::regular(4).unwrap();
        assert!((polygon_excess_area(&p4) - 1.359348).abs() < 1e-6);
    }

    #[test]
    fn excess_area_matches_monte_carlo() {
        for n in 3..=5 {
            let p = IsogonalPolygon::regular(n).unwrap();
            let (mc, se) = polygon_area_mc(&p, 2_000_000, 7);
            let exact = polygon_excess_area(&p);
            assert!((mc - exact).abs() < 1e-3 + 3.0 * se, "n={n} mc={mc} exact={exact}");
        }
    }

    #[test]
    fn symmetric_pentagon_regular_case() {
        let a5 = regular_side(5).unwrap();
        for pinned in [PinnedSide::Base, PinnedSide::LowerLeg, PinnedSide::UpperLeg] {
            let p = symmetric_pentagon_solve(pinned, a5).unwrap();
            assert!(p.sides().iter().all(|s| (s - a5.0).abs() < 1e-9));
            assert!(p.closure_residual() < CLOSURE_TOL);
        }
    }

    #[test]
    fn symmetric_pentagons_with_square_sides_do_not_exist() {
        let a4 = regular_side(4).unwrap();
        for pinned in [PinnedSide::Base, PinnedSide::LowerLeg, PinnedSide::UpperLeg] {
            assert!(
                matches!(symmetric_pentagon_solve(pinned, a4), Err(TrigError::NoSolution { .. })),
                "{pinned:?}"
            );
        }
    }

    #[test]
    fn solved_pentagon_rebuilds_closed_chain() {
        let p = symmetric_pentagon_solve(PinnedSide::Base, GeodesicLength(0.5)).unwrap();
        let v = p.vertices();
        assert_eq!(v.len(), 5);
        assert!(p.closure_residual() < CLOSURE_TOL);
        let s = p.sides();
        assert!((s[1] - s[4]).abs() < 1e-9 && (s[2] - s[3]).abs() < 1e-9);
        // measured side lengths agree with the requested ones
        for i in 0..5 {
            let d = v[i].angle(&v[(i + 1) % 5]);
            assert!((d - s[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(matches!(
            symmetric_pentagon_solve(PinnedSide::Base, GeodesicLength(1e-7)),
            Err(TrigError::Degenerate(_))
        ));
        assert!(matches!(
            symmetric_pentagon_solve(PinnedSide::Base, GeodesicLength(PI)),
            Err(TrigError::Degenerate(_))
        ));
    }

    #[test]
    fn three_equal_sides_only_regular() {
        let sweep = symmetric_pentagon_sweep(1000);
        assert!(!sweep.events.is_empty());
        assert!(sweep.events.iter().all(|e| e.is_regular), "{:?}", sweep.events);
        assert!(three_equal_sides_implies_regular(1000));
        // no symmetric isogonal pentagon reaches the square side length
        assert!(sweep.max_sides.iter().all(|&s| s < PI / 3.0));
    }

    #[test]
    fn no_rectangle_coupled_pentagon() {
        assert!(rectangle_coupled_pentagon(400).is_err());
    }

    #[test]
    fn ball_bounds() {
        let b = rectangle_complement(regular_side(5).unwrap()).unwrap().0;
        let r = (PI - b) / 2.0;
        let (euc, exact) = spherical_ball_bounds(r);
        assert!((euc - 0.2447).abs() < 5e-4);
        assert!(exact < euc);
        assert!((exact - 0.23766).abs() < 1e-4);
        let (e0, x0) = spherical_ball_bounds(1e-9);
        assert!(e0 < 1e-20 && x0 < 1e-20);
    }
}

//! Small geometric toolkit for points of R⁴ and the unit 3-sphere.

use nalgebra::{Matrix4, Vector3, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;

pub type Vec4 = Vector4<f64>;
pub type Vec3 = Vector3<f64>;

/// A unit vector of R⁴.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct S3Point(Vec4);

impl S3Point {
    /// Normalizes `v`; returns `None` for (near) zero input.
    pub fn new(v: Vec4) -> Option<Self> {
        let n = v.norm();
        if n < 1e-300 || !n.is_finite() {
            None
        } else {
            Some(S3Point(v / n))
        }
    }

    pub fn vec(&self) -> &Vec4 {
        &self.0
    }

    pub fn into_vec(self) -> Vec4 {
        self.0
    }

    pub fn distance(&self, other: &S3Point) -> f64 {
        geodesic_distance(&self.0, &other.0)
    }
}

impl From<S3Point> for Vec4 {
    fn from(p: S3Point) -> Vec4 {
        p.0
    }
}

/// Great-circle distance between two unit vectors; stable at both ends.
pub fn geodesic_distance(a: &Vec4, b: &Vec4) -> f64 {
    2.0 * (a - b).norm().atan2((a + b).norm())
}

/// Angle at `p` between the great arcs `p→q` and `p→r` (all unit vectors).
pub fn vertex_angle(p: &Vec4, q: &Vec4, r: &Vec4) -> f64 {
    let tq = q - p * p.dot(q);
    let tr = r - p * p.dot(r);
    let c = tq.dot(&tr);
    let s = (tq.norm_squared() * tr.norm_squared() - c * c).max(0.0).sqrt();
    s.atan2(c)
}

/// Unit tangent at `p` of the great arc towards `q`.
pub fn arc_tangent(p: &Vec4, q: &Vec4) -> Vec4 {
    let t = q - p * p.dot(q);
    t / t.norm()
}

/// Vector orthogonal to three vectors of R⁴ (generalized cross product).
pub fn cross3(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let m = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    Vec4::new(-m(1, 2, 3), m(0, 2, 3), -m(0, 1, 3), m(0, 1, 2))
}

/// Unit normal of the best-fit linear 3-space through `points`
/// together with the residual singular value (0 when exactly co-hyperplanar).
pub fn best_fit_normal(points: &[Vec4]) -> (Vec4, f64) {
    let mut m = Matrix4::zeros();
    for p in points {
        m += p * p.transpose();
    }
    let eig = m.symmetric_eigen();
    let (mut imin, mut vmin) = (0, f64::INFINITY);
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v < vmin {
            vmin = v;
            imin = i;
        }
    }
    let n: Vec4 = eig.eigenvectors.column(imin).into_owned();
    (n / n.norm(), vmin.max(0.0).sqrt())
}

/// Uniform sample of S³ (normalized Gaussian).
pub fn sample_s3<R: Rng + ?Sized>(rng: &mut R) -> Vec4 {
    loop {
        let v = Vec4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Uniform sample of S².
pub fn sample_s2<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Haar-random element of O(4) via Gram–Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    loop {
        let g = Matrix4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        let r = qr.r();
        if (0..4).any(|i| r[(i, i)].abs() < 1e-9) {
            continue;
        }
        let mut q = qr.q();
        for i in 0..4 {
            if r[(i, i)] < 0.0 {
                let mut col = q.column_mut(i);
                col *= -1.0;
            }
        }
        return q;
    }
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Orders the points of a planar convex polygon cyclically around its centroid.
pub fn cyclic_order(points: &[Vec4]) -> Vec<usize> {
    let n = points.len();
    let c = points.iter().fold(Vec4::zeros(), |a, p| a + p) / n as f64;
    let e1 = {
        let d = points[0] - c;
        d / d.norm()
    };
    // second in-plane direction: largest component orthogonal to e1
    let mut e2 = Vec4::zeros();
    for p in points {
        let d = p - c;
        let d = d - e1 * e1.dot(&d);
        if d.norm() > e2.norm() {
            e2 = d;
        }
    }
    let e2 = e2 / e2.norm();
    let mut idx: Vec<usize> = (0..n).collect();
    let ang: Vec<f64> = points
        .iter()
        .map(|p| {
            let d = p - c;
            d.dot(&e2).atan2(d.dot(&e1))
        })
        .collect();
    idx.sort_by(|&a, &b| ang[a].total_cmp(&ang[b]));
    idx
}

/// Area of a planar polygon in R⁴ given in cyclic order (fan from the centroid).
pub fn planar_polygon_area(points: &[Vec4]) -> f64 {
    let n = points.len();
    let c = points.iter().fold(Vec4::zeros(), |a, p| a + p) / n as f64;
    compensated_sum((0..n).map(|i| triangle_area(&c, &points[i], &points[(i + 1) % n])))
}

pub fn triangle_area(a: &Vec4, b: &Vec4, c: &Vec4) -> f64 {
    let u = b - a;
    let v = c - a;
    let uu = u.dot(&u);
    let vv = v.dot(&v);
    let uv = u.dot(&v);
    0.5 * (uu * vv - uv * uv).max(0.0).sqrt()
}

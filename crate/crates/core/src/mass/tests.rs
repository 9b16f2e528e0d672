use super::*;
use crate::cells::{realize_cell, CellType};
use crate::geom::random_orthogonal;
use crate::partition::{build_partition, build_partition_rotated, PartitionLabel};
use crate::polytopes::tesseract;
use nalgebra::Matrix5;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cayley_menger(p: &[Vec4; 4]) -> f64 {
    let mut m = Matrix5::zeros();
    for i in 0..4 {
        m[(0, i + 1)] = 1.0;
        m[(i + 1, 0)] = 1.0;
        for j in 0..4 {
            m[(i + 1, j + 1)] = (p[i] - p[j]).norm_squared();
        }
    }
    (m.determinant() / 288.0).max(0.0).sqrt()
}

fn e(i: usize) -> Vec4 {
    let mut v = Vec4::zeros();
    v[i] = 1.0;
    v
}

fn cone(l: PartitionLabel) -> (PartitionComplex, Hull, Complex3) {
    let p = build_partition(l).unwrap();
    let h = Hull::from_partition(&p).unwrap();
    let c = cone_complex(&p, &h).unwrap();
    (p, h, c)
}

/// Area of a planar polygon and the distance from the origin to its
/// affine plane, from an explicit orthonormal frame of the plane.
fn pyramid_oracle(poly: &[Vec4]) -> f64 {
    let o = poly[0];
    let u = (poly[1] - o).normalize();
    let mut w = Vec4::zeros();
    for q in &poly[2..] {
        let d = q - o - u * u.dot(&(q - o));
        if d.norm() > w.norm() {
            w = d;
        }
    }
    let w = w.normalize();
    let xy: Vec<(f64, f64)> = poly.iter().map(|q| (u.dot(&(q - o)), w.dot(&(q - o)))).collect();
    let mut a2 = 0.0;
    for i in 0..xy.len() {
        let (x0, y0) = xy[i];
        let (x1, y1) = xy[(i + 1) % xy.len()];
        a2 += x0 * y1 - x1 * y0;
    }
    let foot = o - u * u.dot(&o) - w * w.dot(&o);
    a2.abs() / 2.0 * foot.norm() / 3.0
}

#[test]
fn unit_right_tetrahedron() {
    let m = simplex_mass3(&Vec4::zeros(), &e(0), &e(1), &e(2));
    assert!((m - 1.0 / 6.0).abs() < 1e-15);
}

#[test]
fn coplanar_tetrahedron_is_massless() {
    let m = simplex_mass3(&Vec4::zeros(), &e(0), &e(1), &(e(0) + e(1) * 2.0));
    assert!(m.abs() < 1e-14);
}

#[test]
fn regular_tetrahedron_matches_cayley_menger() {
    let p = [e(0), e(1), e(2), e(3)];
    let m = simplex_mass3(&p[0], &p[1], &p[2], &p[3]);
    assert!((m - cayley_menger(&p)).abs() < 1e-12);
    assert!((m - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn empty_complex_has_no_mass() {
    assert_eq!(Complex3::default().mass(), 0.0);
}

#[test]
fn flat_section_of_tesseract() {
    let p = build_partition(PartitionLabel::T1).unwrap();
    let n = p.faces[0].normal;
    assert!((n.amax() - 1.0).abs() < 1e-12, "axis-aligned disk");
    let h = Hull::from_points(&tesseract()).unwrap();
    let c = cone_complex(&p, &h).unwrap();
    // the section of [-1/2, 1/2]^4 by a coordinate hyperplane is a unit cube
    assert!((c.mass() - 1.0).abs() < 1e-10, "{}", c.mass());
    assert!(c.min_tet_volume() > MIN_TET_VOLUME);
}

#[test]
fn smooth_cones_clip_to_the_tesseract() {
    let h = Hull::from_points(&tesseract()).unwrap();
    for l in [PartitionLabel::T2, PartitionLabel::T3] {
        let p = build_partition(l).unwrap();
        let (c, kinds) = cone_complex_traced(&p, &h).unwrap();
        assert!(kinds.iter().all(|k| *k == Truncation::Clipped));
        let hist = c.junction_histogram();
        assert!(hist.get(&3).copied().unwrap_or(0) > 0, "{l}: {hist:?}");
        assert!(hist.keys().all(|&k| (1..=3).contains(&k)), "{l}: {hist:?}");
    }
}

#[test]
fn simplex_cone_is_sum_of_tetrahedra() {
    let (p, _, c) = cone(PartitionLabel::T4);
    let o = Vec4::zeros();
    let direct: f64 = p
        .faces
        .iter()
        .map(|f| {
            let v: Vec<Vec4> = f.vertices.iter().map(|&i| p.vertices[i]).collect();
            assert_eq!(v.len(), 3);
            simplex_mass3(&o, &v[0], &v[1], &v[2])
        })
        .sum();
    assert_eq!(p.faces.len(), 10);
    assert!((c.mass() - direct).abs() < 1e-12);
}

#[test]
fn per_face_pyramid_oracle() {
    for l in [PartitionLabel::T4, PartitionLabel::T6] {
        let (p, _, c) = cone(l);
        let oracle: f64 = p
            .faces
            .iter()
            .map(|f| pyramid_oracle(&f.vertices.iter().map(|&i| p.vertices[i]).collect::<Vec<_>>()))
            .sum();
        assert!((c.mass() - oracle).abs() < 1e-9, "{l}: {} vs {oracle}", c.mass());
    }
    // T6: 24 unit squares at distance 1/√2
    let (_, _, c) = cone(PartitionLabel::T6);
    assert!((c.mass() - 4.0 * 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn prism_cone_masses() {
    let (_, _, c5) = cone(PartitionLabel::T5);
    assert!((c5.mass() - 2.062).abs() / 2.062 < 0.02, "{}", c5.mass());
    let (_, _, c7) = cone(PartitionLabel::T7);
    assert!((c7.mass() - 2.745).abs() / 2.745 < 0.02, "{}", c7.mass());
}

#[test]
fn cone_structure() {
    for l in [PartitionLabel::T4, PartitionLabel::T5, PartitionLabel::T7, PartitionLabel::T9] {
        let (_, h, c) = cone(l);
        assert!(c.min_tet_volume() > MIN_TET_VOLUME, "{l}");
        for (tri, n) in c.junctions() {
            assert!((1..=3).contains(&n), "{l}: {n}");
            if n == 1 {
                assert!(tri.iter().all(|&v| c.fixed[v]), "{l}: free boundary off the hull");
            }
        }
        for (v, &f) in c.vertices.iter().zip(&c.fixed) {
            assert!(h.contains(v), "{l}");
            assert_eq!(f, h.on_boundary(v), "{l}");
        }
        assert!(!c.fixed[c.vertices.iter().position(|v| v.norm() < 1e-12).unwrap()]);
    }
}

#[test]
fn hull_invariants() {
    for l in [PartitionLabel::T4, PartitionLabel::T5, PartitionLabel::T6, PartitionLabel::T7, PartitionLabel::T9] {
        let (_, h, _) = cone(l);
        assert_eq!(h.gauge(&Vec4::zeros()), 0.0);
        for q in &h.points {
            assert!(h.gauge(q) <= 1.0 + 1e-10);
        }
        let half = h.scaled(0.5);
        assert_eq!(half.scale, 0.5);
        assert!((half.inradius() - h.inradius() / 2.0).abs() < 1e-15);
    }
    assert!(Hull::from_points(&[e(0), e(1)]).is_err());
}

#[test]
fn rotation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for l in [PartitionLabel::T5, PartitionLabel::T7] {
        let (_, _, c) = cone(l);
        let q = random_orthogonal(&mut rng);
        assert!((c.transformed(&q).mass() - c.mass()).abs() < 1e-10);
        let p = build_partition_rotated(l, &q).unwrap();
        let h = Hull::from_partition(&p).unwrap();
        let m = cone_complex(&p, &h).unwrap().mass();
        assert!((m - c.mass()).abs() < 1e-10, "{l}: {m} vs {}", c.mass());
    }
}

#[test]
fn dilation_scales_cubically() {
    let (p, h, c) = cone(PartitionLabel::T5);
    for s in [0.5, 2.0, 3.0] {
        assert!((c.scaled(s).mass() - s * s * s * c.mass()).abs() < 1e-10 * s * s * s);
        let big = cone_complex(&p, &h.scaled(s)).unwrap().mass();
        assert!((big - s * s * s * c.mass()).abs() < 1e-10 * s * s * s);
    }
}

#[test]
fn t8_margin_value() {
    let r = t8_margin_report();
    assert!(r.agree);
    assert_eq!(r.pentagon_faces, 720);
    assert!((r.margin - 11.238).abs() < 1e-3, "{}", r.margin);
    assert!(r.margin > 11.0);
    assert!((r.replacement_mass - 119.0 / 60.0 * PI * PI).abs() < 1e-12);
    assert!((r.replacement_mass - 19.575).abs() < 1e-3);
    let faces = build_partition(PartitionLabel::T8).unwrap().faces.len();
    assert_eq!(faces, r.pentagon_faces);
}

#[test]
fn cone_patch_values() {
    let a = alpha().0;
    assert!((cone_patch_mass(5.0 * a - 3.0 * PI, 1.0) - 0.128388 / 3.0).abs() < 1e-6);
    assert_eq!(cone_patch_mass(2.5, 0.0), 0.0);
    assert!((cone_patch_mass(4.0 * PI, 1.0) - 4.0 * PI / 3.0).abs() < 1e-15);
}

#[test]
fn pentagonal_patch_mesh_spot_check() {
    let c8 = realize_cell(CellType::C8).unwrap();
    let f = &c8.faces[0];
    let poly: Vec<Vec4> = f.vertices.iter().map(|&i| c8.vertices[i]).collect();
    let exact = cone_patch_mass(5.0 * alpha().0 - 3.0 * PI, 1.0);
    let mesh = spherical_patch_cone_mesh_mass(&poly, 5);
    assert!((mesh - exact).abs() / exact < 1e-3, "{mesh} vs {exact}");
    assert!(mesh < exact);
}

#[test]
fn octant_patch_converges() {
    let tri = [e(0), e(1), e(2)];
    let exact = cone_patch_mass(PI / 2.0, 1.0);
    let mesh = spherical_patch_cone_mesh_mass(&tri, 6);
    assert!((mesh - exact).abs() / exact < 1e-3, "{mesh} vs {exact}");
}

fn arb_point() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(Vec4::from)
}

proptest! {
    #[test]
    fn simplex_mass_matches_cayley_menger(a in arb_point(), b in arb_point(), c in arb_point(), d in arb_point()) {
        let p = [a, b, c, d];
        let m = simplex_mass3(&a, &b, &c, &d);
        let scale = (b - a).norm() * (c - a).norm() * (d - a).norm();
        prop_assert!((m - cayley_menger(&p)).abs() <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn simplex_mass_is_rigid(a in arb_point(), b in arb_point(), c in arb_point(), d in arb_point(), seed in 0u64..1000, s in 0.1f64..3.0) {
        let q = random_orthogonal(&mut ChaCha8Rng::seed_from_u64(seed));
        let m = simplex_mass3(&a, &b, &c, &d);
        let r = simplex_mass3(&(q * a), &(q * b), &(q * c), &(q * d));
        prop_assert!((m - r).abs() < 1e-10 * m.max(1.0));
        let t = simplex_mass3(&(a * s), &(b * s), &(c * s), &(d * s));
        prop_assert!((t - s * s * s * m).abs() < 1e-10 * (s * s * s * m).max(1.0));
    }
}


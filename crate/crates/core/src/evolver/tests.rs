use super::*;
use crate::polytopes::tesseract;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn e(i: usize) -> Vec4 {
    let mut v = Vec4::zeros();
    v[i] = 1.0;
    v
}

fn popped(l: PartitionLabel, t: CellType) -> (PartitionComplex, PopSpec, Complex3, Complex3) {
    let part = build_partition(l).unwrap();
    let hull = Hull::from_partition(&part).unwrap();
    let cone = cone_complex(&part, &hull).unwrap();
    let cell = pick_cell(&part, PopCell::Type(t)).unwrap();
    let spec = PopSpec::for_cell(&part, &hull, cell).unwrap();
    let p = pop(&part, &spec).unwrap();
    (part, spec, cone, p)
}

fn single_tet() -> Complex3 {
    Complex3 {
        vertices: vec![Vec4::zeros(), e(0) * 2.0, e(1) * 2.0, Vec4::new(0.3, 0.4, 1.5, 0.0)],
        tets: vec![[0, 1, 2, 3]],
        fixed: vec![true, true, true, false],
    }
}

#[test]
fn pop_masses() {
    for (l, t, quoted) in [(PartitionLabel::T5, CellType::C4, 2.133), (PartitionLabel::T7, CellType::C7, 2.759)] {
        let (_, spec, cone, p) = popped(l, t);
        let h = &spec.hull;
        let expect = 0.875 * cone.mass() + 0.125 * (h.boundary_volume() - h.facet_volume(spec.facet));
        assert!((p.mass() - expect).abs() < 1e-9, "{l}: {} vs {expect}", p.mass());
        assert!((p.mass() - quoted).abs() < 1e-3, "{l}: {}", p.mass());
        assert!(p.mass() > cone.mass());
    }
}

#[test]
fn pop_surface_avoids_the_open_half_hull() {
    let (_, spec, _, p) = popped(PartitionLabel::T5, CellType::C4);
    for v in &p.vertices {
        assert!(spec.half.gauge(v) >= 1.0 - 1e-10);
    }
    for (v, &f) in p.vertices.iter().zip(&p.fixed) {
        assert_eq!(f, spec.hull.on_boundary(v));
    }
    for (_, n) in p.junctions() {
        assert!((1..=3).contains(&n));
    }
}

#[test]
fn pop_map_identity_off_half_hull() {
    let (_, spec, _, _) = popped(PartitionLabel::T7, CellType::C7);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut outside = 0;
    for _ in 0..2000 {
        let x = Vec4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let y = spec.map(&x);
        if spec.half.gauge(&x) >= 1.0 {
            outside += 1;
            assert_eq!(x, y);
        } else {
            assert!((spec.half.gauge(&y) - 1.0).abs() < 1e-10);
        }
    }
    assert!(outside > 100);
}

#[test]
fn pop_map_image_of_cone_misses_the_popped_facet() {
    let (part, spec, cone, _) = popped(PartitionLabel::T5, CellType::C4);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let popped_facet = &spec.half.facets[spec.facet];
    for t in cone.tets.iter().take(200) {
        let w: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let x = (0..4).fold(Vec4::zeros(), |a, k| a + cone.vertices[t[k]] * (w[k] / s));
        let y = spec.map(&x);
        if spec.half.gauge(&x) < 1.0 {
            let on_popped = (popped_facet.normal.dot(&y) - popped_facet.offset).abs() < 1e-10;
            let others_active = spec
                .half
                .facets
                .iter()
                .enumerate()
                .any(|(k, f)| k != spec.facet && (f.normal.dot(&y) - f.offset).abs() < 1e-9);
            assert!(!on_popped || others_active);
        }
    }
    let _ = part;
}

#[test]
fn pop_centre_checks() {
    let (part, spec, _, _) = popped(PartitionLabel::T5, CellType::C4);
    let f = &part.faces[part.cell_faces[spec.cell][0]];
    let on_face = spec.p - f.normal * f.normal.dot(&spec.p);
    let bad = PopSpec { p: on_face, ..spec.clone() };
    assert!(matches!(bad.validate(&part), Err(EvolverError::CenterOnSurface { .. }) | Err(EvolverError::RegionAmbiguous(_))));
    let far = PopSpec { p: spec.p * 100.0, ..spec };
    assert!(matches!(far.validate(&part), Err(EvolverError::RegionAmbiguous(_))));
    let t9 = build_partition(PartitionLabel::T9).unwrap();
    let h9 = Hull::from_partition(&t9).unwrap();
    let aligned = (0..t9.cells.len()).filter(|&c| PopSpec::for_cell(&t9, &h9, c).is_ok()).count();
    assert!(aligned < t9.cells.len());
    assert!(matches!(pop(&t9, &PopSpec::for_cell(&part, &Hull::from_partition(&part).unwrap(), 0).unwrap()), Err(EvolverError::NotFacetAligned { .. })));
}

#[test]
fn altitude_gradient() {
    let c = single_tet();
    let g = mass_gradient(&c);
    // V = A h / 3 with base area 2 in the e1 e2 plane
    assert!((g[3] - e(2) * (2.0 / 3.0)).norm() < 1e-10, "{:?}", g[3]);
    for gi in &g[..3] {
        assert_eq!(*gi, Vec4::zeros());
    }
}

#[test]
fn flat_disk_is_stationary() {
    let p = build_partition(PartitionLabel::T1).unwrap();
    let h = Hull::from_points(&tesseract()).unwrap();
    let c = refine(&cone_complex(&p, &h).unwrap());
    for g in mass_gradient(&c) {
        assert!(g.norm() < 1e-8);
    }
    let (after, trace) = go(&c, 10, &GoParams::default()).unwrap();
    assert_eq!(trace.status, TraceStatus::Stationary);
    assert_eq!(after, c);
    assert!(trace.records.iter().all(|r| r.mass == trace.initial_mass()));
}

#[test]
fn gradient_matches_finite_differences() {
    let (_, _, _, p) = popped(PartitionLabel::T5, CellType::C4);
    let chk = gradient_check(&refine(&p), 100, 3);
    assert!(chk.max_relative_error < 1e-6, "{}", chk.max_relative_error);
    let part = build_partition(PartitionLabel::T9).unwrap();
    let h = Hull::from_partition(&part).unwrap();
    let chk = gradient_check(&cone_complex(&part, &h).unwrap(), 100, 4);
    assert!(chk.max_relative_error < 1e-6, "{}", chk.max_relative_error);
}

#[test]
fn refine_one_tet() {
    let c = single_tet();
    let r = refine(&c);
    assert_eq!(r.tets.len(), 8);
    assert!((r.mass() - c.mass()).abs() < 1e-14);
    assert_eq!(r.vertices.len(), 10);
    // the three pinned corners pin the midpoints between them
    assert_eq!(r.fixed_count(), 6);
}

#[test]
fn refine_t9_twice() {
    let part = build_partition(PartitionLabel::T9).unwrap();
    let h = Hull::from_partition(&part).unwrap();
    let c = cone_complex(&part, &h).unwrap();
    let r1 = refine(&c);
    let r2 = refine(&r1);
    assert_eq!(r2.tets.len(), 64 * c.tets.len());
    assert!((r2.mass() - c.mass()).abs() < 1e-9);
    assert!(r1.fixed_count() > c.fixed_count() && r2.fixed_count() > r1.fixed_count());
    for (v, &f) in r2.vertices.iter().zip(&r2.fixed) {
        if f {
            assert!((h.gauge(v) - 1.0).abs() < 1e-10);
        }
    }
    let (h0, h2) = (c.junction_histogram(), r2.junction_histogram());
    assert_eq!(h2.get(&3).copied().unwrap_or(0), 16 * h0.get(&3).copied().unwrap_or(0));
    assert_eq!(h2.get(&1).copied().unwrap_or(0), 16 * h0.get(&1).copied().unwrap_or(0));
    assert!(h2.keys().all(|&k| (1..=3).contains(&k)));
}

#[test]
fn refine_to_meets_edge_bound() {
    let part = build_partition(PartitionLabel::T4).unwrap();
    let h = Hull::from_partition(&part).unwrap();
    let c = cone_complex(&part, &h).unwrap();
    let (r, levels) = refine_to(&c, 0.3, 5);
    assert!(r.max_edge() < 0.3);
    assert!(levels >= 1);
}

#[test]
fn descent_is_monotone_and_pins_boundary() {
    let (_, _, _, p) = popped(PartitionLabel::T7, CellType::C7);
    let (fin, trace) = go(&p, 30, &GoParams::default()).unwrap();
    assert!(trace.is_monotone());
    assert!(trace.final_mass() < trace.initial_mass());
    for i in 0..p.vertices.len() {
        if p.fixed[i] {
            assert_eq!(p.vertices[i], fin.vertices[i]);
        }
    }
    let csv = trace.to_csv();
    assert!(csv.starts_with("step,mass,step_size,max_disp\n"));
    assert_eq!(csv.lines().count(), trace.records.len() + 1);
}

#[test]
fn control_cone_does_not_descend() {
    let part = build_partition(PartitionLabel::T4).unwrap();
    let h = Hull::from_partition(&part).unwrap();
    let c = refine(&cone_complex(&part, &h).unwrap());
    let (_, trace) = go(&c, 50, &GoParams::default()).unwrap();
    assert!(trace.relative_decrease() < 1e-3);
}

#[test]
fn config_parsing() {
    let cfg = ExperimentConfig::parse(
        "# T5\npartition = T5\npop_cell = C4\nsteps = 250\nrefine_levels = 1, 2\nseed = 7\nscaling = lumped\n",
    )
    .unwrap();
    assert_eq!(cfg.label, PartitionLabel::T5);
    assert_eq!(cfg.pop_cell, Some(PopCell::Type(CellType::C4)));
    assert_eq!(cfg.refine_levels, vec![1, 2]);
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.params.scaling, Scaling::Lumped);
    let err = ExperimentConfig::parse("partition = T5\nsteps = many\n").unwrap_err();
    assert!(matches!(err, EvolverError::Config { line: 2, .. }), "{err}");
    let err = ExperimentConfig::parse("partition = T5\n\nbogus = 1\n").unwrap_err();
    assert!(matches!(err, EvolverError::Config { line: 3, .. }));
    assert!(ExperimentConfig::parse("steps = 3\n").is_err());
    assert_eq!("3".parse::<PopCell>().unwrap(), PopCell::Index(3));
}

#[test]
fn t9_threshold_floor() {
    assert_eq!(t9_threshold(0.0), 0.01);
    assert!((t9_threshold(0.1) - 0.1).abs() < 1e-15);
}

fn random_complex(seed: u64) -> Complex3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 12;
    let vertices: Vec<Vec4> = (0..n).map(|_| Vec4::from_fn(|_, _| rng.random_range(-1.0..1.0))).collect();
    let tets: Vec<[usize; 4]> = (0..20)
        .map(|_| {
            let mut t = [0usize; 4];
            let mut k = 0;
            while k < 4 {
                let v = rng.random_range(0..n);
                if !t[..k].contains(&v) {
                    t[k] = v;
                    k += 1;
                }
            }
            t
        })
        .collect();
    let fixed = (0..n).map(|i| i % 4 == 0).collect();
    Complex3 { vertices, tets, fixed }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gradient_oracle_on_random_complexes(seed in 0u64..10_000) {
        let c = random_complex(seed);
        let chk = gradient_check(&c, 25, seed);
        prop_assert!(chk.max_relative_error < 1e-6, "{}", chk.max_relative_error);
    }

    #[test]
    fn refinement_preserves_mass(seed in 0u64..10_000) {
        let c = random_complex(seed);
        let r = refine(&c);
        prop_assert!((r.mass() - c.mass()).abs() < 1e-12 * c.mass().max(1.0));
        prop_assert_eq!(r.tets.len(), 8 * c.tets.len());
    }
}


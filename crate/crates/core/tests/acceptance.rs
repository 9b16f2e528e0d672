//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use plcone::evolver::{gradient_check, pop, refine, PopSpec};
use plcone::geom::random_orthogonal;
use plcone::mass::{cone_complex, t8_margin_report, Hull};
use plcone::partition::{
    build_partition, build_partition_rotated, c8_quotient_exclusion, obstruction_c7_c7, obstruction_c9, PartitionLabel,
};
use plcone::sphere_trig::{
    closure_residual, rectangle_complement, rectangle_relation_violation, regular_side, spherical_ball_bounds,
    symmetric_pentagon_family, GeodesicLength,
};
use plcone::verify::{Verdict, VerificationReport, Verifier, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 1;
const SAMPLES: usize = 1_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn opts() -> VerifyOptions {
    VerifyOptions {
        seed: SEED,
        samples: SAMPLES,
        ..VerifyOptions::default()
    }
}

fn failing(r: &VerificationReport) -> String {
    let f: Vec<String> = r.rows.iter().filter(|x| !x.pass).map(|x| format!("{} = {}", x.name, x.value)).collect();
    if f.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", f.join(", "))
    }
}

fn value(r: &VerificationReport, name: &str) -> f64 {
    r.row(name).map(|x| x.value).unwrap_or(f64::NAN)
}

fn constants() -> Outcome {
    let a5 = regular_side(5).unwrap().0;
    let b = rectangle_complement(GeodesicLength(a5)).unwrap().0;
    let (ball, _) = spherical_ball_bounds((PI - b) / 2.0);
    let sixtieth = 2.0 * PI * PI / 60.0;
    let pass = (a5 - 0.27092).abs() <= 1e-4
        && (b - 2.3653).abs() <= 5e-4
        && (PI - b - 0.77631).abs() <= 5e-4
        && (ball - 0.2447).abs() <= 5e-4
        && ball < sixtieth
        && (sixtieth - 0.32899).abs() <= 1e-5;
    ok(pass, format!("a5 {a5:.6}, b {b:.5}, pi-b {:.5}, ball {ball:.5} < 2pi^2/60 {sixtieth:.6}", PI - b))
}

fn distinctness() -> Outcome {
    let v = Verifier::new(opts());
    let mut pass = true;
    let mut notes = Vec::new();
    for k in ["i", "ii", "iii", "iv", "v", "vi", "vii"] {
        let r = v.run(&format!("distinct-{k}")).unwrap();
        pass &= r.verdict == Verdict::Pass;
        notes.push(format!("{k}:{}", r.verdict));
    }
    let a3 = regular_side(3).unwrap();
    let a5 = regular_side(5).unwrap();
    let w = rectangle_relation_violation(a5, a3);
    pass &= w > 0.15;
    ok(pass, format!("{}; |tan(a5/2)tan(a3/2) - 1/3| = {w:.5}", notes.join(" ")))
}

fn partitions() -> Outcome {
    let v = Verifier::new(opts());
    let mut pass = true;
    let mut notes = Vec::new();
    for id in ["enumeration", "partition-i", "partition-ii", "partition-iii", "partition-v", "partition-vi", "partition-viii"] {
        let r = v.run(id).unwrap();
        pass &= r.verdict == Verdict::Pass;
        notes.push(format!("{id} {}{}", r.verdict, failing(&r)));
    }
    let e = v.run("enumeration").unwrap();
    let worst = PartitionLabel::ALL
        .iter()
        .map(|l| value(&e, &format!("{l} volume closure relative error")))
        .fold(0.0, f64::max);
    let u = v.run("partition-viii").unwrap();
    let found = value(&u, "graphs found");
    pass &= found == 1.0 && worst < 0.01;
    ok(pass, format!("{}; worst closure error {worst:.2e}; T9 search found {found}", notes.join(", ")))
}

fn obstructions() -> Outcome {
    let a = obstruction_c7_c7().holds;
    let b = obstruction_c9().holds;
    let q = c8_quotient_exclusion(SAMPLES, SEED);
    ok(
        a && b && q.holds,
        format!(
            "c7-c7 {a}, c9 {b}, quotient exclusion {} (cell volume {:.4} < ball {:.4} < {:.4})",
            q.holds, q.c8_volume_mc, q.ball_bound, q.sixtieth
        ),
    )
}

fn t8() -> Outcome {
    let m = t8_margin_report();
    ok((m.margin - 11.238).abs() < 1e-3 && m.margin > 11.0 && m.agree, format!("margin {:.6}", m.margin))
}

fn prism(v: &Verifier, id: &str) -> Outcome {
    let r = v.run(id).unwrap();
    ok(
        r.verdict == Verdict::Pass,
        format!(
            "cone {}, popped {}, final L1 {} L2 {}{}",
            value(&r, "cone mass"),
            value(&r, "popped mass"),
            value(&r, "level 1 final mass"),
            value(&r, "level 2 final mass"),
            failing(&r)
        ),
    )
}

fn t9(v: &Verifier) -> Outcome {
    let r = v.run("t9-elimination").unwrap();
    let d = r.row("relative decrease").unwrap();
    ok(
        r.verdict == Verdict::Pass,
        format!(
            "verdict {}; decrease {:.4}% needs {:.4}%; control decrease {:.4}%",
            r.verdict,
            100.0 * d.value,
            100.0 * d.expected.unwrap_or(f64::NAN),
            100.0 * value(&r, "control relative decrease")
        ),
    )
}

fn properties() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let t5 = build_partition(PartitionLabel::T5).unwrap();
    let h5 = Hull::from_partition(&t5).unwrap();
    let cell = t5.cells.iter().position(|c| c.cell_type == plcone::cells::CellType::C4).unwrap();
    let spec = PopSpec::for_cell(&t5, &h5, cell).unwrap();
    let popped = refine(&pop(&t5, &spec).unwrap());
    let g5 = gradient_check(&popped, 100, SEED).max_relative_error;
    let t9 = build_partition(PartitionLabel::T9).unwrap();
    let h9 = Hull::from_partition(&t9).unwrap();
    let c9 = cone_complex(&t9, &h9).unwrap();
    let g9 = gradient_check(&c9, 100, SEED).max_relative_error;
    pass &= g5 < 1e-6 && g9 < 1e-6;
    notes.push(format!("gradient {:.1e}/{:.1e}", g5, g9));

    let r1 = refine(&c9);
    let r2 = refine(&r1);
    let d1 = (r1.mass() - c9.mass()).abs();
    let d2 = (r2.mass() - r1.mass()).abs();
    pass &= d1 < 1e-9 && d2 < 1e-9;
    notes.push(format!("refine {:.1e}", d1.max(d2)));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut rot: f64 = 0.0;
    for l in [PartitionLabel::T5, PartitionLabel::T7, PartitionLabel::T9] {
        let p = build_partition(l).unwrap();
        let c = cone_complex(&p, &Hull::from_partition(&p).unwrap()).unwrap();
        let q = random_orthogonal(&mut rng);
        rot = rot.max((c.transformed(&q).mass() - c.mass()).abs());
        if l != PartitionLabel::T9 {
            let pr = build_partition_rotated(l, &q).unwrap();
            let cr = cone_complex(&pr, &Hull::from_partition(&pr).unwrap()).unwrap();
            rot = rot.max((cr.mass() - c.mass()).abs());
        }
    }
    pass &= rot < 1e-10;
    notes.push(format!("rotation {rot:.1e}"));

    let mut moved = 0;
    let mut outside = 0;
    for _ in 0..100_000 {
        let x = plcone::Vec4::from_fn(|_, _| rng.random_range(-1.5..1.5));
        if spec.half.gauge(&x) >= 1.0 {
            outside += 1;
            let y = spec.map(&x);
            if y.iter().zip(x.iter()).any(|(a, b)| a.to_bits() != b.to_bits()) {
                moved += 1;
            }
        }
    }
    pass &= moved == 0 && outside > 0;
    notes.push(format!("pop identity {outside} points, {moved} moved"));

    let mut worst: f64 = 0.0;
    for s in symmetric_pentagon_family(1000) {
        worst = worst.max(closure_residual(&[s[0], s[1], s[2], s[2], s[1]]));
    }
    for n in 3..=5 {
        let a = regular_side(n).unwrap().0;
        worst = worst.max(closure_residual(&vec![a; n]));
    }
    let a5 = regular_side(5).unwrap().0;
    let b = rectangle_complement(GeodesicLength(a5)).unwrap().0;
    worst = worst.max(closure_residual(&[a5, b, a5, b]));
    pass &= worst < 1e-9;
    notes.push(format!("closure {worst:.1e}"));
    ok(pass, notes.join(", "))
}

fn determinism() -> Outcome {
    let a = Verifier::new(opts()).run_all().to_json();
    let b = Verifier::new(opts()).run_all().to_json();
    ok(a == b, format!("{} bytes per run, identical: {}", a.len(), a == b))
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let v = Verifier::new(opts());
    type Criterion<'a> = (u32, &'a str, u64, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (1, "constants", 1, Box::new(constants)),
        (2, "face distinctness", 60, Box::new(distinctness)),
        (3, "partitions", 600, Box::new(partitions)),
        (4, "obstructions", 10, Box::new(obstructions)),
        (5, "T8 elimination", 1, Box::new(t8)),
        (6, "T5 elimination", 600, Box::new(|| prism(&v, "t5-elimination"))),
        (7, "T7 elimination", 900, Box::new(|| prism(&v, "t7-elimination"))),
        (8, "T9 elimination", 900, Box::new(|| t9(&v))),
        (9, "properties", 300, Box::new(properties)),
        (10, "determinism", u64::MAX, Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (n, name, limit, f) in &criteria {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            ok(false, format!("panicked: {msg}"))
        });
        let dt = t.elapsed();
        let in_time = dt <= Duration::from_secs(*limit);
        let pass = out.pass && in_time;
        let time = if *limit == u64::MAX {
            format!("{:.1}s", dt.as_secs_f64())
        } else {
            format!("{:.1}s of {limit}s", dt.as_secs_f64())
        };
        println!(
            "criterion {n:>2} {name:<18} {} ({}; {time})",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
        if !pass {
            failed.push(*n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

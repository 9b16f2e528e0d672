//! Registered claims, their checks and machine-readable verdicts.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::cells::{verify_face_distinctness, CellType, DistinctnessItem};
use crate::evolver::{eliminate_t9, run_experiment, ExperimentConfig, ExperimentReport, T9Elimination};
use crate::graph::{
    complete, ego_graph, icosahedral, is_isomorphic, matching_complement, prism_dual, t9_blue_pattern,
    t9_dual_uniqueness_search, t9_red_pattern, triangular_bipyramid, SearchLimits,
};
use crate::mass::t8_margin_report;
use crate::partition::{
    build_partition, c8_quotient_exclusion, dual_graph, obstruction_c7_c7, obstruction_c9, t7_lateral_edge,
    PartitionComplex, PartitionLabel, ScanReport,
};
use crate::sphere_trig::{alpha, rectangle_complement, regular_side, spherical_ball_bounds, GeodesicLength};

pub const SCHEMA_VERSION: u32 = 1;

pub const T5_CONFIG: &str = include_str!("../../../configs/t5.cfg");
pub const T7_CONFIG: &str = include_str!("../../../configs/t7.cfg");
pub const T4_CONTROL_CONFIG: &str = include_str!("../../../configs/t4-control.cfg");
pub const T9_CONFIG: &str = include_str!("../../../configs/t9.cfg");

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown claim '{0}'")]
    UnknownClaim(String),
    #[error("unknown tolerance profile '{0}'")]
    UnknownProfile(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn worst<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        it.into_iter().max().unwrap_or(Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A decimal quoted with the claim.
    Published,
    /// Derived independently here.
    Derived,
    /// Reported for the record, not compared.
    Computed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Published decimals with the stated tolerances.
    Published,
    /// Published decimals to half a unit in their last printed place, and
    /// tighter relative bands.
    Strict,
}

impl FromStr for Profile {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        match s {
            "published" => Ok(Profile::Published),
            "strict" => Ok(Profile::Strict),
            _ => Err(VerifyError::UnknownProfile(s.to_string())),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Published => "published",
            Profile::Strict => "strict",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// |value − expected| ≤ tolerance.
    Approx,
    /// |value − expected| ≤ tolerance · |expected|.
    RelApprox,
    Greater,
    Less,
    Equal,
    /// value is 1 for true.
    Holds,
    /// Recorded without a comparison.
    Record,
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub provenance: Provenance,
    pub pass: bool,
}

impl Row {
    fn new(name: &str, value: f64, relation: Relation, expected: Option<f64>, tolerance: Option<f64>, provenance: Provenance) -> Row {
        let pass = match relation {
            Relation::Approx => (value - expected.unwrap_or(f64::NAN)).abs() <= tolerance.unwrap_or(0.0),
            Relation::RelApprox => {
                let e = expected.unwrap_or(f64::NAN);
                (value - e).abs() <= tolerance.unwrap_or(0.0) * e.abs()
            }
            Relation::Greater => value > expected.unwrap_or(f64::NAN),
            Relation::Less => value < expected.unwrap_or(f64::NAN),
            Relation::Equal => Some(value) == expected,
            Relation::Holds => value == 1.0,
            Relation::Record => true,
        };
        Row {
            name: name.to_string(),
            value: sig12(value),
            relation,
            expected: expected.map(sig12),
            tolerance: tolerance.map(sig12),
            provenance,
            pass,
        }
    }
}

/// JSON output for one claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub claim: String,
    pub statement: String,
    pub verdict: Verdict,
    pub seed: u64,
    pub samples: usize,
    pub tolerance_profile: Profile,
    pub rows: Vec<Row>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn row(&self, name: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub verdict: Verdict,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Monte Carlo samples for volume estimates.
    pub samples: usize,
    pub profile: Profile,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            samples: 1_000_000,
            profile: Profile::Published,
            timings: false,
        }
    }
}

/// Accumulates rows for one claim.
struct Sheet<'a> {
    opts: &'a VerifyOptions,
    rows: Vec<Row>,
    notes: Vec<String>,
    /// Failing rows demote to inconclusive instead of fail.
    soft: Vec<String>,
}

impl<'a> Sheet<'a> {
    fn new(opts: &'a VerifyOptions) -> Self {
        Sheet {
            opts,
            rows: Vec::new(),
            notes: Vec::new(),
            soft: Vec::new(),
        }
    }

    fn strict(&self) -> bool {
        self.opts.profile == Profile::Strict
    }

    fn push(&mut self, r: Row) {
        self.rows.push(r);
    }

    /// A published decimal; `printed` is the number of decimals it was
    /// quoted with, which sets the strict tolerance.
    fn decimal(&mut self, name: &str, value: f64, expected: f64, tol: f64, printed: i32) {
        let t = if self.strict() { 0.5 * 10f64.powi(-printed) } else { tol };
        self.push(Row::new(name, value, Relation::Approx, Some(expected), Some(t), Provenance::Published));
    }

    /// A published value compared with a relative band.
    fn band(&mut self, name: &str, value: f64, expected: f64, rel: f64, strict_rel: f64) {
        let t = if self.strict() { strict_rel } else { rel };
        self.push(Row::new(name, value, Relation::RelApprox, Some(expected), Some(t), Provenance::Published));
    }

    fn approx(&mut self, name: &str, value: f64, expected: f64, tol: f64) {
        self.push(Row::new(name, value, Relation::Approx, Some(expected), Some(tol), Provenance::Derived));
    }

    fn gt(&mut self, name: &str, value: f64, bound: f64, p: Provenance) {
        self.push(Row::new(name, value, Relation::Greater, Some(bound), None, p));
    }

    fn lt(&mut self, name: &str, value: f64, bound: f64, p: Provenance) {
        self.push(Row::new(name, value, Relation::Less, Some(bound), None, p));
    }

    fn eq(&mut self, name: &str, value: usize, expected: usize, p: Provenance) {
        self.push(Row::new(name, value as f64, Relation::Equal, Some(expected as f64), None, p));
    }

    fn holds(&mut self, name: &str, b: bool, p: Provenance) {
        self.push(Row::new(name, f64::from(u8::from(b)), Relation::Holds, None, None, p));
    }

    fn record(&mut self, name: &str, value: f64) {
        self.push(Row::new(name, value, Relation::Record, None, None, Provenance::Computed));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn verdict(&self) -> Verdict {
        Verdict::worst(self.rows.iter().filter(|r| !r.pass).map(|r| {
            if self.soft.contains(&r.name) {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            }
        }))
    }
}

type ClaimFn = fn(&Verifier, &mut Sheet) -> Option<Verdict>;

/// A registered claim.
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    run: ClaimFn,
    /// Runs a descent experiment.
    pub heavy: bool,
}

/// Every claim the verifier knows, in report order.
pub fn registry() -> &'static [Claim] {
    static CLAIMS: &[Claim] = &[
        Claim { id: "constants", statement: "Side lengths and volume constants of the admissible cells", run: claim_constants, heavy: false },
        Claim { id: "distinct-i", statement: "The rectangles of C11 are not squares", run: distinct_i, heavy: false },
        Claim { id: "distinct-ii", statement: "The rectangles of C5 and C7 differ", run: distinct_ii, heavy: false },
        Claim { id: "distinct-iii", statement: "The rectangles of C5 and C11 differ", run: distinct_iii, heavy: false },
        Claim { id: "distinct-iv", statement: "The rectangles of C7 and C11 differ", run: distinct_iv, heavy: false },
        Claim { id: "distinct-v", statement: "The pentagons of C9 and C10 differ", run: distinct_v, heavy: false },
        Claim { id: "distinct-vi", statement: "The pentagons of C9 and C11 differ", run: distinct_vi, heavy: false },
        Claim { id: "distinct-vii", statement: "The pentagons of C10 and C11 differ", run: distinct_vii, heavy: false },
        Claim { id: "enumeration", statement: "Nine partitions are realized, each a cellular decomposition of the 3-sphere", run: enumeration, heavy: false },
        Claim { id: "partition-i", statement: "Tetrahedra only: the dual graph is K5 and the partition is the simplex", run: partition_i, heavy: false },
        Claim { id: "partition-ii", statement: "Triangular prisms: red K4 joined to two blue vertices, the simplicial prism", run: partition_ii, heavy: false },
        Claim { id: "partition-iii", statement: "Cubes only: the dual graph is the complement of 4K2, the hypercube", run: partition_iii, heavy: false },
        Claim { id: "partition-iv", statement: "No partition has two adjacent pentagonal prisms", run: partition_iv, heavy: false },
        Claim { id: "partition-v", statement: "Pentagonal prisms with two dodecahedra: the dodecahedral prism", run: partition_v, heavy: false },
        Claim { id: "partition-vi", statement: "Dodecahedra only: the 120-cell, with quotients excluded by volume", run: partition_vi, heavy: false },
        Claim { id: "partition-vii", statement: "No partition contains C9", run: partition_vii, heavy: false },
        Claim { id: "partition-viii", statement: "Cubes with nonahedra: the dual graph is unique", run: partition_viii, heavy: false },
        Claim { id: "t5-elimination", statement: "The simplicial prism cone is not minimizing", run: t5_elimination, heavy: true },
        Claim { id: "t7-elimination", statement: "The dodecahedral prism cone is not minimizing", run: t7_elimination, heavy: true },
        Claim { id: "t8-elimination", statement: "The 120-cell cone is not minimizing", run: t8_elimination, heavy: false },
        Claim { id: "t9-elimination", statement: "The cube and nonahedron cone is not minimizing", run: t9_elimination, heavy: true },
        Claim { id: "tally", statement: "There are precisely five piecewise linear three dimensional minimizing cones", run: tally, heavy: true },
    ];
    CLAIMS
}

pub fn claim_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id).collect()
}

/// Runs claims, sharing expensive experiments between them.
pub struct Verifier {
    pub opts: VerifyOptions,
    t5: OnceLock<Result<ExperimentReport, String>>,
    t7: OnceLock<Result<ExperimentReport, String>>,
    t9: OnceLock<Result<T9Elimination, String>>,
    partitions: OnceLock<Vec<Result<PartitionComplex, String>>>,
}

impl Verifier {
    pub fn new(opts: VerifyOptions) -> Self {
        Verifier {
            opts,
            t5: OnceLock::new(),
            t7: OnceLock::new(),
            t9: OnceLock::new(),
            partitions: OnceLock::new(),
        }
    }

    fn config(&self, text: &str) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::parse(text).expect("bundled config parses");
        cfg.seed = self.opts.seed;
        cfg
    }

    fn experiment(&self, which: PartitionLabel) -> &Result<ExperimentReport, String> {
        let (cell, text) = match which {
            PartitionLabel::T5 => (&self.t5, T5_CONFIG),
            _ => (&self.t7, T7_CONFIG),
        };
        cell.get_or_init(|| run_experiment(&self.config(text)).map_err(|e| e.to_string()))
    }

    fn t9(&self) -> &Result<T9Elimination, String> {
        self.t9.get_or_init(|| {
            let cfg = self.config(T9_CONFIG);
            eliminate_t9(cfg.refine_levels[0], cfg.steps, &cfg.params).map_err(|e| e.to_string())
        })
    }

    fn partition(&self, l: PartitionLabel) -> Result<&PartitionComplex, &str> {
        let all = self.partitions.get_or_init(|| {
            use rayon::prelude::*;
            PartitionLabel::ALL
                .par_iter()
                .map(|&l| build_partition(l).map_err(|e| e.to_string()))
                .collect()
        });
        all[l.index() - 1].as_ref().map_err(|e| e.as_str())
    }

    pub fn run(&self, id: &str) -> Result<VerificationReport, VerifyError> {
        let claim = registry()
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| VerifyError::UnknownClaim(id.to_string()))?;
        let start = Instant::now();
        let mut sheet = Sheet::new(&self.opts);
        let forced = (claim.run)(self, &mut sheet);
        let verdict = Verdict::worst([sheet.verdict(), forced.unwrap_or(Verdict::Pass)]);
        Ok(VerificationReport {
            schema_version: SCHEMA_VERSION,
            claim: claim.id.to_string(),
            statement: claim.statement.to_string(),
            verdict,
            seed: self.opts.seed,
            samples: self.opts.samples,
            tolerance_profile: self.opts.profile,
            rows: sheet.rows,
            notes: sheet.notes,
            runtime_seconds: self.opts.timings.then(|| start.elapsed().as_secs_f64()),
        })
    }

    /// Every registered claim; the descent experiments start together.
    pub fn run_all(&self) -> SuiteReport {
        rayon::scope(|s| {
            s.spawn(|_| {
                let _ = self.experiment(PartitionLabel::T5);
            });
            s.spawn(|_| {
                let _ = self.experiment(PartitionLabel::T7);
            });
            s.spawn(|_| {
                let _ = self.t9();
            });
            s.spawn(|_| {
                let _ = self.partition(PartitionLabel::T1);
            });
        });
        let reports: Vec<VerificationReport> = registry().iter().map(|c| self.run(c.id).expect("registered")).collect();
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            verdict: Verdict::worst(reports.iter().map(|r| r.verdict)),
            reports,
        }
    }
}

/// Runs one claim with fresh state.
pub fn verify_claim(id: &str, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    Verifier::new(*opts).run(id)
}

/// The constants block alone.
pub fn constants_report(opts: &VerifyOptions) -> VerificationReport {
    verify_claim("constants", opts).expect("registered")
}

fn claim_constants(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let a = alpha().0;
    let a3 = regular_side(3).map(|x| x.0).unwrap_or(f64::NAN);
    let a4 = regular_side(4).map(|x| x.0).unwrap_or(f64::NAN);
    let a5 = regular_side(5).map(|x| x.0).unwrap_or(f64::NAN);
    let b = rectangle_complement(GeodesicLength(a5)).map(|x| x.0).unwrap_or(f64::NAN);
    let (ball, cap) = spherical_ball_bounds((PI - b) / 2.0);
    let sixtieth = 2.0 * PI * PI / 60.0;
    let m = t8_margin_report();
    s.record("alpha", a);
    s.approx("cos alpha", a.cos(), -1.0 / 3.0, 1e-15);
    s.approx("a3", a3, (-0.25f64).acos(), 1e-12);
    s.approx("a4", a4, PI / 3.0, 1e-12);
    s.decimal("a5", a5, 0.27092, 1e-4, 5);
    s.decimal("b", b, 2.3653, 5e-4, 4);
    s.decimal("pi - b", PI - b, 0.77631, 5e-4, 5);
    s.decimal("ball bound", ball, 0.2447, 5e-4, 4);
    s.record("spherical ball volume", cap);
    s.lt("spherical ball volume below ball bound", cap, ball, Provenance::Derived);
    s.decimal("2 pi^2 / 60", sixtieth, 0.32899, 1e-5, 5);
    s.lt("ball bound below 2 pi^2 / 60", ball, sixtieth, Provenance::Published);
    s.decimal("t8 margin", m.margin, 11.238, 1e-3, 3);
    s.gt("t8 margin above 11", m.margin, 11.0, Provenance::Published);
    None
}

fn distinct(s: &mut Sheet, n: usize) -> Option<Verdict> {
    static REPORT: OnceLock<Vec<DistinctnessItem>> = OnceLock::new();
    let items = REPORT.get_or_init(|| verify_face_distinctness().items);
    let it = &items[n];
    if n == 1 {
        s.gt("rectangle relation violation", it.witness, 0.15, Provenance::Derived);
    } else {
        s.gt("witness", it.witness, 0.0, Provenance::Derived);
    }
    s.holds("item holds", it.pass, Provenance::Published);
    s.record("vacuous", f64::from(u8::from(it.vacuous)));
    for e in &it.evidence {
        s.note(e.clone());
    }
    None
}

fn distinct_i(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    distinct(s, 0)
}
fn distinct_ii(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    distinct(s, 1)
}
fn distinct_iii(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    distinct(s, 2)
}
fn distinct_iv(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    distinct(s, 3)
}
fn distinct_v(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    distinct(s, 4)
}
fn distinct_vi(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    distinct(s, 5)
}
fn distinct_vii(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    distinct(s, 6)
}

const EXPECTED_COUNTS: [(usize, usize, usize, usize); 9] = [
    (1, 0, 1, 2),
    (1, 1, 3, 3),
    (2, 4, 6, 4),
    (5, 10, 10, 5),
    (8, 16, 14, 6),
    (16, 32, 24, 8),
    (40, 80, 54, 14),
    (600, 1200, 720, 120),
    (45, 90, 60, 15),
];

/// Counts, incidences and inventory of one partition.
fn structure(v: &Verifier, s: &mut Sheet, l: PartitionLabel) -> Option<Verdict> {
    let p = match v.partition(l) {
        Ok(p) => p,
        Err(e) => {
            s.note(format!("{l} failed to build: {e}"));
            return Some(Verdict::Fail);
        }
    };
    let (nv, ne, nf, nc) = p.counts();
    let w = EXPECTED_COUNTS[l.index() - 1];
    s.eq(&format!("{l} vertices"), nv, w.0, Provenance::Derived);
    s.eq(&format!("{l} edges"), ne, w.1, Provenance::Derived);
    s.eq(&format!("{l} faces"), nf, w.2, Provenance::Derived);
    s.eq(&format!("{l} cells"), nc, w.3, Provenance::Derived);
    s.push(Row::new(&format!("{l} euler characteristic"), p.euler() as f64, Relation::Equal, Some(0.0), None, Provenance::Derived));
    let inc = p.incidence();
    s.holds(&format!("{l} faces on two cells, edges on three, vertices on four"), inc.ok(), Provenance::Derived);
    for pr in inc.problems.iter().take(5) {
        s.note(format!("{l}: {pr}"));
    }
    for (t, n) in l.cell_inventory() {
        s.eq(&format!("{l} cells of type {t}"), p.cell_type_count(t), n, Provenance::Published);
    }
    s.record(&format!("{l} realization residual"), p.residual);
    None
}

fn closure(v: &Verifier, s: &mut Sheet, l: PartitionLabel) {
    if let Ok(p) = v.partition(l) {
        let c = p.volume_closure(v.opts.samples, v.opts.seed);
        let tol = if s.strict() { 0.005 } else { 0.01 };
        s.push(Row::new(
            &format!("{l} volume closure relative error"),
            c.relative_error,
            Relation::Less,
            Some(tol),
            None,
            Provenance::Derived,
        ));
        s.record(&format!("{l} samples in no cell"), c.gaps as f64);
        s.record(&format!("{l} samples in two cells"), c.overlaps as f64);
    }
}

fn enumeration(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let mut worst = None;
    let built = PartitionLabel::ALL.iter().filter(|&&l| v.partition(l).is_ok()).count();
    s.eq("partitions built", built, 9, Provenance::Published);
    for l in PartitionLabel::ALL {
        worst = worst.max(structure(v, s, l));
        closure(v, s, l);
    }
    worst
}

fn dual_rows(s: &mut Sheet, p: &PartitionComplex, whole: &crate::graph::ColoredGraph, name: &str, ego: impl Fn(CellType) -> Option<crate::graph::ColoredGraph>) {
    let d = dual_graph(p);
    s.holds(&format!("dual graph is {name}"), is_isomorphic(&d, whole), Provenance::Published);
    let egos_ok = (0..d.n()).all(|i| match ego(d.colors[i]) {
        Some(g) => is_isomorphic(&ego_graph(&d, i), &g),
        None => true,
    });
    s.holds("ego graphs match", egos_ok, Provenance::Published);
}

fn partition_i(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let f = structure(v, s, PartitionLabel::T4);
    if let Ok(p) = v.partition(PartitionLabel::T4) {
        dual_rows(s, p, &complete(5, CellType::C4), "K5", |_| Some(complete(4, CellType::C4)));
    }
    f
}

fn scan_rows(s: &mut Sheet, r: &ScanReport, only: Option<usize>) {
    for (i, l) in r.lines.iter().enumerate() {
        if only.is_some_and(|k| k != i) {
            continue;
        }
        let found: Vec<String> = l.found.iter().map(|t| t.to_string()).collect();
        s.holds(&format!("{} (expected {})", l.description, if l.expect_found { "somewhere" } else { "nowhere" }), l.as_expected(), Provenance::Derived);
        s.note(format!("{}: [{}]", l.description, found.join(", ")));
    }
}

fn partition_ii(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let f = structure(v, s, PartitionLabel::T5);
    if let Ok(p) = v.partition(PartitionLabel::T5) {
        let want = prism_dual(&complete(4, CellType::C5), CellType::C4);
        dual_rows(s, p, &want, "red K4 with two blue apexes", |c| {
            (c == CellType::C5).then(|| triangular_bipyramid(CellType::C5, CellType::C4))
        });
    }
    scan_rows(s, &obstruction_c7_c7(), Some(1));
    f
}

fn partition_iii(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let f = structure(v, s, PartitionLabel::T6);
    if let Ok(p) = v.partition(PartitionLabel::T6) {
        dual_rows(s, p, &matching_complement(4, CellType::C6), "the complement of 4K2", |_| {
            Some(matching_complement(3, CellType::C6))
        });
    }
    f
}

fn partition_iv(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let r = obstruction_c7_c7();
    scan_rows(s, &r, None);
    s.holds("obstruction holds", r.holds, Provenance::Published);
    None
}

fn partition_v(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let f = structure(v, s, PartitionLabel::T7);
    if let Ok(p) = v.partition(PartitionLabel::T7) {
        let want = prism_dual(&icosahedral(CellType::C7), CellType::C8);
        dual_rows(s, p, &want, "icosahedral rim with two dodecahedral apexes", |_| None);
        let b = rectangle_complement(regular_side(5).expect("a5")).map(|x| x.0).unwrap_or(f64::NAN);
        if let Some(e) = t7_lateral_edge(p) {
            s.approx("lateral edge equals the long rectangle side", e, b, 1e-9);
        }
    }
    f
}

fn partition_vi(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let f = structure(v, s, PartitionLabel::T8);
    if let Ok(p) = v.partition(PartitionLabel::T8) {
        let d = dual_graph(p);
        s.eq("dual edges", d.edge_count(), 720, Provenance::Derived);
        let egos = (0..d.n()).all(|i| is_isomorphic(&ego_graph(&d, i), &icosahedral(CellType::C8)));
        s.holds("every ego graph is icosahedral", egos, Provenance::Published);
    }
    let q = c8_quotient_exclusion(v.opts.samples, v.opts.seed);
    s.decimal("ball bound", q.ball_bound, 0.2447, 5e-4, 4);
    s.record("dodecahedral cell volume", q.c8_volume);
    s.record("dodecahedral cell volume (Monte Carlo)", q.c8_volume_mc);
    s.record("Monte Carlo standard error", q.c8_volume_mc_stderr);
    s.lt("cell volume below ball bound", q.c8_volume_mc, q.ball_bound, Provenance::Published);
    s.lt("ball bound below 2 pi^2 / 60", q.ball_bound, q.sixtieth, Provenance::Published);
    s.lt("2 pi^2 / 60 below 2 pi^2 / 40", q.sixtieth, q.fortieth, Provenance::Derived);
    s.approx("cell diameter equals pi - b", q.c8_diameter, q.pi_minus_b, 1e-9);
    s.holds("quotients excluded", q.holds, Provenance::Published);
    f
}

fn partition_vii(_: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let r = obstruction_c9();
    scan_rows(s, &r, None);
    s.holds("obstruction holds", r.holds, Provenance::Published);
    None
}

fn partition_viii(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let f = structure(v, s, PartitionLabel::T9);
    let search = match t9_dual_uniqueness_search(SearchLimits::default()) {
        Ok(r) => r,
        Err(e) => {
            s.note(format!("search aborted: {e}"));
            return Some(Verdict::Inconclusive);
        }
    };
    s.eq("graphs found", search.solutions.len(), 1, Provenance::Published);
    s.record("search nodes", search.nodes as f64);
    s.eq("branches cut by the vertex cap", search.capped as usize, 0, Provenance::Derived);
    s.soft.push("branches cut by the vertex cap".into());
    if let (Ok(p), Some(g)) = (v.partition(PartitionLabel::T9), search.solutions.first()) {
        let d = dual_graph(p);
        s.holds("the built partition realizes the graph", is_isomorphic(&d, g), Provenance::Derived);
        let egos = (0..d.n()).all(|i| {
            let want = if d.colors[i] == CellType::C6 { t9_red_pattern() } else { t9_blue_pattern() };
            is_isomorphic(&ego_graph(&d, i), &want)
        });
        s.holds("ego graphs match", egos, Provenance::Published);
    }
    f
}

struct Targets {
    cone: f64,
    popped: f64,
    fin: f64,
}

fn prism_elimination(v: &Verifier, s: &mut Sheet, l: PartitionLabel, t: Targets) -> Option<Verdict> {
    let r = match v.experiment(l) {
        Ok(r) => r,
        Err(e) => {
            s.note(format!("experiment failed: {e}"));
            return Some(Verdict::Fail);
        }
    };
    let (mass_rel, target_rel) = (0.02, 0.05);
    s.band("cone mass", r.cone_mass, t.cone, mass_rel, 0.005);
    let popped = r.popped_mass.unwrap_or(f64::NAN);
    s.gt("popped mass above cone mass", popped, r.cone_mass, Provenance::Published);
    s.band("popped mass", popped, t.popped, mass_rel, 0.005);
    s.lt("gradient check relative error", r.gradient_check.max_relative_error, 1e-6, Provenance::Derived);
    s.record("hull inradius", r.hull_inradius);
    for run in &r.runs {
        let k = run.refine_level;
        s.record(&format!("level {k} tetrahedra"), run.tets as f64);
        s.record(&format!("level {k} steps"), (run.trace.records.len() - 1) as f64);
        s.holds(&format!("level {k} descent monotone"), run.trace.is_monotone(), Provenance::Derived);
        s.lt(&format!("level {k} final mass below cone mass"), run.final_mass, r.cone_mass, Provenance::Published);
        s.band(&format!("level {k} final mass"), run.final_mass, t.fin, target_rel, 0.01);
    }
    let verdicts: Vec<bool> = r.runs.iter().map(|x| x.final_mass < r.cone_mass).collect();
    s.holds("verdict stable across resolutions", verdicts.windows(2).all(|w| w[0] == w[1]), Provenance::Derived);
    None
}

fn t5_elimination(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    prism_elimination(v, s, PartitionLabel::T5, Targets { cone: 2.062, popped: 2.133, fin: 1.98 })
}

fn t7_elimination(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    prism_elimination(v, s, PartitionLabel::T7, Targets { cone: 2.745, popped: 2.759, fin: 2.671 })
}

fn t8_elimination(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let m = t8_margin_report();
    s.decimal("margin", m.margin, 11.238, 1e-3, 3);
    s.gt("margin above 11", m.margin, 11.0, Provenance::Published);
    s.gt("margin positive", m.margin, 0.0, Provenance::Derived);
    s.approx("closed form agrees with the constructions", m.margin, m.closed_form, 1e-9);
    s.eq("pentagonal faces", m.pentagon_faces, 720, Provenance::Derived);
    if let Ok(p) = v.partition(PartitionLabel::T8) {
        s.eq("faces of the built partition", p.faces.len(), m.pentagon_faces, Provenance::Derived);
    }
    s.approx("pentagon area", m.pentagon_area, 5.0 * alpha().0 - 3.0 * PI, 1e-12);
    s.decimal("replacement mass", m.replacement_mass, 19.575, 1e-3, 3);
    s.record("cone mass", m.cone_mass);
    None
}

fn t9_elimination(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let r = match v.t9() {
        Ok(r) => r,
        Err(e) => {
            s.note(format!("experiment failed: {e}"));
            return Some(Verdict::Fail);
        }
    };
    s.record("realization residual", r.residual);
    s.record("refinement level", f64::from(r.refine_level));
    s.record("steps", r.steps as f64);
    s.record("initial mass", r.t9.initial_mass());
    s.record("final mass", r.t9.final_mass());
    s.holds("descent monotone", r.t9.is_monotone() && r.control.is_monotone(), Provenance::Derived);
    s.push(Row::new("relative decrease", r.t9_decrease, Relation::Greater, Some(r.threshold), None, Provenance::Derived));
    s.soft.push("relative decrease".into());
    s.lt("control relative decrease", r.control_decrease, r.control_limit, Provenance::Derived);
    s.note(format!(
        "required decrease max(1%, 10 r^2) with residual r = {:.6e}: {:.6e}",
        r.residual, r.threshold
    ));
    None
}

fn tally(v: &Verifier, s: &mut Sheet) -> Option<Verdict> {
    let built = PartitionLabel::ALL.iter().filter(|&&l| v.partition(l).is_ok()).count();
    s.eq("candidate partitions", built, 9, Provenance::Published);
    let elim = [
        (PartitionLabel::T5, "t5-elimination"),
        (PartitionLabel::T7, "t7-elimination"),
        (PartitionLabel::T8, "t8-elimination"),
        (PartitionLabel::T9, "t9-elimination"),
    ];
    let mut eliminated = 0;
    let mut worst = Verdict::Pass;
    for (l, id) in elim {
        let r = v.run(id).expect("registered");
        s.holds(&format!("{l} eliminated"), r.verdict == Verdict::Pass, Provenance::Published);
        if r.verdict == Verdict::Inconclusive {
            s.soft.push(format!("{l} eliminated"));
        }
        eliminated += usize::from(r.verdict == Verdict::Pass);
        worst = worst.max(r.verdict);
        s.note(format!("{l}: {}", r.verdict));
    }
    s.eq("survivors", built - eliminated, 5, Provenance::Published);
    if worst == Verdict::Inconclusive {
        s.soft.push("survivors".into());
    }
    s.note("T1, T2, T3, T4 and T6 survive; their minimality is an external fact and is not checked here");
    None
}

#[cfg(test)]
mod tests;

//! Distinctness of the non-regular faces of the admissible cells.

use serde::Serialize;

use super::{face_signatures, realize_cell, CellType, FaceClass, RealizationStatus};
use crate::sphere_trig::{
    rectangle_complement, rectangle_relation_violation, regular_side, symmetric_pentagon_solve,
    symmetric_pentagon_sweep, GeodesicLength, PinnedSide, TrigError,
};

/// Outcome of one distinctness item.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistinctnessItem {
    /// Roman numeral of the item, "i" to "vii".
    pub item: &'static str,
    pub claim: &'static str,
    pub pass: bool,
    /// True when a compared face does not exist, so distinctness holds
    /// trivially; the evidence then records why it does not exist.
    pub vacuous: bool,
    /// Numeric margin by which the claim holds (positive when it holds).
    pub witness: f64,
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistinctnessReport {
    pub items: Vec<DistinctnessItem>,
}

impl DistinctnessReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

fn exists(t: CellType) -> (bool, String) {
    match realize_cell(t) {
        Ok(c) if c.status != RealizationStatus::Infeasible => (true, format!("{t} realized, residual {:.3e}", c.residual)),
        Ok(c) => (false, format!("{t} infeasible: {}", c.notes.join("; "))),
        Err(e) => (false, format!("{t} not realized: {e}")),
    }
}

fn no_solution(r: Result<crate::sphere_trig::IsogonalPolygon, TrigError>) -> bool {
    matches!(r, Err(TrigError::NoSolution { .. }))
}

/// Runs the seven distinctness items with numeric witnesses.
pub fn verify_face_distinctness() -> DistinctnessReport {
    let a3 = regular_side(3).expect("a3").0;
    let a4 = regular_side(4).expect("a4").0;
    let a5 = regular_side(5).expect("a5").0;
    let q3 = rectangle_complement(GeodesicLength(a3)).expect("r5 side").0;
    let sweep = symmetric_pentagon_sweep(1000);
    let three_equal_regular = sweep.events.iter().all(|e| e.is_regular);
    let max_side = sweep.max_sides.iter().copied().fold(0.0, f64::max);
    let (c9, c9_note) = exists(CellType::C9);
    let (c10, c10_note) = exists(CellType::C10);
    let (c11, c11_note) = exists(CellType::C11);
    let square_base = no_solution(symmetric_pentagon_solve(PinnedSide::Base, GeodesicLength(a4)));
    let square_legs = no_solution(symmetric_pentagon_solve(PinnedSide::LowerLeg, GeodesicLength(a4)));
    let mut items = Vec::new();

    // (i) a square r11 would give the pentagons of C11 three sides a4
    items.push(DistinctnessItem {
        item: "i",
        claim: "r11 is not a square",
        pass: three_equal_regular && (a4 - a5).abs() > 1e-6 && square_base,
        vacuous: !c11,
        witness: (a4 - a5).abs(),
        evidence: vec![
            format!("symmetric pentagons with three equal sides found along the family: {} (all regular: {three_equal_regular})", sweep.events.len()),
            format!("a4 - a5 = {:.12}", a4 - a5),
            format!("symmetric pentagon with base a4 exists: {}", !square_base),
            c11_note.clone(),
        ],
    });

    // (ii) the cosine law on the protruding triangle
    let w = rectangle_relation_violation(GeodesicLength(a5), GeodesicLength(a3));
    let sig_gap = {
        let r5 = realize_cell(CellType::C5).ok().and_then(|c| face_signatures(&c).ok());
        let r7 = realize_cell(CellType::C7).ok().and_then(|c| face_signatures(&c).ok());
        match (r5, r7) {
            (Some(a), Some(b)) => {
                let fa = a.iter().find(|s| s.class == FaceClass::R5).cloned();
                let fb = b.iter().find(|s| s.class == FaceClass::R7).cloned();
                match (fa, fb) {
                    (Some(x), Some(y)) => x.distance(&y),
                    _ => f64::NAN,
                }
            }
            _ => f64::NAN,
        }
    };
    items.push(DistinctnessItem {
        item: "ii",
        claim: "r5 differs from r7",
        pass: w > 0.15 && sig_gap > 1e-6,
        vacuous: false,
        witness: w,
        evidence: vec![
            format!("|tan(a5/2) tan(a3/2) - 1/3| = {w:.12}"),
            format!("realized signature distance r5 vs r7 = {sig_gap:.12}"),
        ],
    });

    // (iii) r11 would need a pentagon with a side a3
    items.push(DistinctnessItem {
        item: "iii",
        claim: "r5 differs from r11",
        pass: a3 - max_side > 0.0,
        vacuous: !c11,
        witness: a3 - max_side,
        evidence: vec![
            format!("r5 sides: a3 = {a3:.12}, complement = {q3:.12}"),
            format!("longest side over the symmetric pentagon family = {max_side:.12} < a3"),
            c11_note.clone(),
        ],
    });

    // (iv) a side a5 forces the regular pentagon, whose rectangle is not one
    let unique_regular = [PinnedSide::Base, PinnedSide::LowerLeg, PinnedSide::UpperLeg]
        .iter()
        .all(|&p| {
            symmetric_pentagon_solve(p, GeodesicLength(a5))
                .map(|poly| poly.sides().iter().all(|s| (s - a5).abs() < 1e-9))
                .unwrap_or(false)
        });
    let w4 = rectangle_relation_violation(GeodesicLength(a5), GeodesicLength(a5));
    items.push(DistinctnessItem {
        item: "iv",
        claim: "r7 differs from r11",
        pass: unique_regular && w4 > 1e-6,
        vacuous: !c11,
        witness: w4,
        evidence: vec![
            format!("every symmetric pentagon with a side a5 is regular: {unique_regular}"),
            format!("|tan^2(a5/2) - 1/3| = {w4:.12}: an all-a5 rectangle does not close"),
            c11_note.clone(),
        ],
    });

    // (v) equal a4 base and legs would give three equal sides
    items.push(DistinctnessItem {
        item: "v",
        claim: "p9 differs from p10",
        pass: three_equal_regular && (a4 - a5).abs() > 1e-6,
        vacuous: !c9 || !c10,
        witness: (a4 - a5).abs(),
        evidence: vec![
            format!("three equal sides only on the regular pentagon: {three_equal_regular}"),
            format!("symmetric pentagon with base a4 exists: {}", !square_base),
            format!("symmetric pentagon with legs a4 exists: {}", !square_legs),
            c9_note.clone(),
            c10_note.clone(),
        ],
    });

    // (vi) an r11 side of length a4 forces a square
    let fixed = (rectangle_complement(GeodesicLength(a4)).expect("a4 complement").0 - a4).abs();
    items.push(DistinctnessItem {
        item: "vi",
        claim: "p9 differs from p11",
        pass: fixed < 1e-12 && items[0].pass,
        vacuous: !c9 || !c11,
        witness: (a4 - a5).abs(),
        evidence: vec![
            format!("|complement(a4) - a4| = {fixed:.3e}: a rectangle with side a4 is the square"),
            "r11 is not a square (item i)".to_string(),
            c9_note,
            c11_note.clone(),
        ],
    });

    // (vii) every symmetric pentagon side is shorter than a4
    items.push(DistinctnessItem {
        item: "vii",
        claim: "p10 differs from p11",
        pass: a4 - max_side > 0.0,
        vacuous: !c10 || !c11,
        witness: a4 - max_side,
        evidence: vec![
            format!("longest side over the symmetric pentagon family = {max_side:.12} < a4 = {a4:.12}"),
            format!("symmetric pentagon with legs a4 exists: {}", !square_legs),
            c10_note,
            c11_note,
        ],
    });
    DistinctnessReport { items }
}

//! Brute-force oracles for the cross-term cancellation lemmas, the family-wide
//! bound audit, and pinned regression values for the two worked examples.
//!
//! All lemma sums are evaluated in Gaussian integers, so "vanishes" means
//! exactly zero; the reported residual is `Σ_u |inner(u)|` as a float.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{bit, canonical_permutations, Gaussian, Permutation, Z4};
use crate::analysis::{is_complementary, star, EnvelopeConfig, EnvelopeEvaluator, BOUND_EPS};
use crate::constructions::{
    build, family_partitions, list_offsets16, list_offsets64, BoundClass, ConstructionParams,
    Modulation, Offset, Offset16, Offset64, OffsetKind,
};
use crate::error::{Error, Result};
use crate::gbf::{polyphase, DjQuadratic, QuaternarySequence};

pub const LEMMA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LemmaId {
    L1,
    L2a,
    L2b,
    L2c,
    L3a,
    L3b,
    L3c,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma_id: LemmaId,
    pub params: ConstructionParams,
    /// `Σ_u |Σ_i term(i, u)|`
    pub residual: f64,
    /// `|Σ_u Σ_i term(i, u)|`
    pub total: f64,
    pub pass: bool,
}

/// Inner cross-term sum at shift `u`:
/// `Σ ζ^{X_p − X_q}(ζ^{t_p} + ζ^{−t_q})·[1 + (−1)^{b_p − b_q}]` over the index
/// pairs `(p, q)` that `C(u)` multiplies, i.e. `q = p + u` for `u ≥ 0` and
/// `p = q − u` for `u < 0`.
pub fn cross_term(
    base: &QuaternarySequence,
    offset: &QuaternarySequence,
    last_bits: &[u8],
    u: isize,
) -> Gaussian {
    let n = base.len() as isize;
    if u <= -n || u >= n {
        return Complex::new(0, 0);
    }
    let mut acc = Complex::new(0, 0);
    let span = (n - u.abs()) as usize;
    for j in 0..span {
        let (p, q) = if u >= 0 {
            (j, j + u as usize)
        } else {
            (j + u.unsigned_abs(), j)
        };
        if last_bits[p] != last_bits[q] {
            continue;
        }
        let phase = (base[p] - base[q]).unit_root();
        acc += phase * (offset[p].unit_root() + (-offset[q]).unit_root()) * 2;
    }
    acc
}

fn residual_over(
    base: &QuaternarySequence,
    offset: &QuaternarySequence,
    last_bits: &[u8],
    shifts: impl Iterator<Item = isize>,
) -> (f64, f64) {
    let mut abs = 0.0;
    let mut total = Complex::new(0, 0);
    for u in shifts {
        let t = cross_term(base, offset, last_bits, u);
        abs += (t.norm_sqr() as f64).sqrt();
        total += t;
    }
    (abs, (total.norm_sqr() as f64).sqrt())
}

fn last_bits(m: usize, pi: &Permutation) -> Vec<u8> {
    (0..1usize << m).map(|i| bit(i, m, pi.last())).collect()
}

fn report(
    lemma_id: LemmaId,
    params: &ConstructionParams,
    (residual, total): (f64, f64),
) -> LemmaReport {
    LemmaReport {
        lemma_id,
        params: params.clone(),
        residual,
        total,
        pass: residual <= LEMMA_TOLERANCE,
    }
}

fn require_order(p: &ConstructionParams) -> Result<()> {
    if p.m() <= 2 {
        return Err(Error::UnsupportedOrder {
            m: p.m(),
            requirement: "m > 2",
        });
    }
    Ok(())
}

/// Cross terms of `H ⋆ H'` for the 16-QAM offset, summed over every shift.
///
/// The offset constraints are deliberately not enforced so that violating
/// offsets can serve as negative controls.
pub fn lemma1_residual(p: &ConstructionParams) -> Result<LemmaReport> {
    require_order(p)?;
    let Offset::Qam16(off) = p.offset else {
        return Err(Error::OffsetKindMismatch {
            expected: "16qam",
            actual: "64qam",
        });
    };
    let (m, pi) = (p.m(), p.pi());
    let n = p.n() as isize;
    let d = p.base.psi();
    let s = off.sequence(m, pi);
    Ok(report(
        LemmaId::L1,
        p,
        residual_over(&d, &s, &last_bits(m, pi), 1 - n..n),
    ))
}

fn require_kind(p: &ConstructionParams, kind: OffsetKind) -> Result<Offset64> {
    require_order(p)?;
    match p.offset {
        Offset::Qam64(o) if o.kind == kind => Ok(o),
        Offset::Qam64(o) => Err(Error::OffsetKindMismatch {
            expected: kind.tag(),
            actual: o.kind.tag(),
        }),
        Offset::Qam16(_) => Err(Error::OffsetKindMismatch {
            expected: kind.tag(),
            actual: "16qam",
        }),
    }
}

fn cross_terms_64(
    p: &ConstructionParams,
    off: &Offset64,
    ids: [LemmaId; 3],
    first_from_one: bool,
) -> [LemmaReport; 3] {
    let (m, pi) = (p.m(), p.pi());
    let n = p.n() as isize;
    let bits = last_bits(m, pi);
    let d = p.base.psi();
    let s1 = off.s1(m, pi);
    let s2 = off.s2(m, pi);
    let f = d.plus(&s1).expect("equal lengths");
    let s3 = s1.minus(&s2).expect("equal lengths");
    let a12 = if first_from_one {
        residual_over(&d, &s1, &bits, 1..n)
    } else {
        residual_over(&d, &s1, &bits, 1 - n..n)
    };
    let a13 = residual_over(&d, &s2, &bits, 1 - n..n);
    let a23 = residual_over(&f, &s3, &bits, 1 - n..n);
    [
        report(ids[0], p, a12),
        report(ids[1], p, a13),
        report(ids[2], p, a23),
    ]
}

/// The `a1a2`, `a1a3` and `a2a3` cross terms for a Type 1 offset. The `a1a2`
/// sum runs over `u = 1 … n−1` only; its `u = 0` term is what contributes the
/// extra `4·a1a2·n` to the Type 1 bound.
pub fn lemma2_residuals(p: &ConstructionParams) -> Result<[LemmaReport; 3]> {
    let off = require_kind(p, OffsetKind::Type1)?;
    Ok(cross_terms_64(
        p,
        &off,
        [LemmaId::L2a, LemmaId::L2b, LemmaId::L2c],
        true,
    ))
}

/// The three cross terms for a Type 2 offset, each over every shift.
pub fn lemma3_residuals(p: &ConstructionParams) -> Result<[LemmaReport; 3]> {
    let off = require_kind(p, OffsetKind::Type2)?;
    Ok(cross_terms_64(
        p,
        &off,
        [LemmaId::L3a, LemmaId::L3b, LemmaId::L3c],
        false,
    ))
}

/// Worst residual per lemma over a sweep, plus the negative controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSweepReport {
    pub m: usize,
    pub evaluations: usize,
    pub max_residual: Vec<(LemmaId, f64)>,
    pub failures: Vec<LemmaReport>,
    pub negative_controls: Vec<NegativeControl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeControl {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

impl LemmaSweepReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.negative_controls.iter().all(|c| c.pass)
    }

    pub fn max_for(&self, id: LemmaId) -> Option<f64> {
        self.max_residual
            .iter()
            .find(|(l, _)| *l == id)
            .map(|(_, r)| *r)
    }
}

/// Residual a negative control has to exceed to show the oracle is not vacuous.
pub const NEGATIVE_CONTROL_FLOOR: f64 = 0.1;

/// Every canonical permutation, every coefficient vector in Z4^(m+1) and every
/// offset of the relevant kind.
pub fn lemma_sweep(m: usize) -> Result<LemmaSweepReport> {
    if !(3..=4).contains(&m) {
        return Err(Error::UnsupportedOrder {
            m,
            requirement: "3 <= m <= 4 for the lemma sweep",
        });
    }
    let perms = canonical_permutations(m)?;
    let coeffs: Vec<(Vec<Z4>, Z4)> = (0..1u64 << (2 * (m + 1)))
        .map(|code| {
            let linear = (0..m)
                .map(|l| Z4::new(((code >> (2 * (m - l))) & 3) as i64))
                .collect();
            (linear, Z4::new((code & 3) as i64))
        })
        .collect();
    let mut offsets: Vec<Offset> = list_offsets16().into_iter().map(Offset::Qam16).collect();
    offsets.extend(list_offsets64().into_iter().map(Offset::Qam64));

    let reports: Vec<LemmaReport> = perms
        .par_iter()
        .flat_map_iter(|pi| {
            let offsets = &offsets;
            coeffs.iter().flat_map(move |(linear, c)| {
                let base = DjQuadratic::new(pi.clone(), linear.clone(), *c).expect("lengths match");
                offsets.iter().flat_map(move |off| {
                    let p = ConstructionParams {
                        base: base.clone(),
                        offset: *off,
                    };
                    match off {
                        Offset::Qam16(_) => vec![lemma1_residual(&p).expect("valid order")],
                        Offset::Qam64(o) if o.kind == OffsetKind::Type1 => {
                            lemma2_residuals(&p).expect("kind checked").to_vec()
                        }
                        Offset::Qam64(_) => lemma3_residuals(&p).expect("kind checked").to_vec(),
                    }
                })
            })
        })
        .collect();

    let ids = [
        LemmaId::L1,
        LemmaId::L2a,
        LemmaId::L2b,
        LemmaId::L2c,
        LemmaId::L3a,
        LemmaId::L3b,
        LemmaId::L3c,
    ];
    let max_residual = ids
        .iter()
        .map(|&id| {
            let worst = reports
                .iter()
                .filter(|r| r.lemma_id == id)
                .map(|r| r.residual)
                .fold(0.0, f64::max);
            (id, worst)
        })
        .collect();
    let failures: Vec<LemmaReport> = reports
        .iter()
        .filter(|r| !r.pass)
        .take(20)
        .cloned()
        .collect();
    Ok(LemmaSweepReport {
        m,
        evaluations: reports.len(),
        max_residual,
        failures,
        negative_controls: negative_controls(m)?,
    })
}

/// Constraint-violating offsets that must leave a clearly nonzero residual.
pub fn negative_controls(m: usize) -> Result<Vec<NegativeControl>> {
    let base = DjQuadratic::new(Permutation::identity(m), vec![Z4::ONE; m], Z4::ZERO)?;
    let d = Offset16 {
        d1: Z4::ZERO,
        d2: Z4::ONE,
        d3: Z4::ONE,
    };
    let control = |name: &str, residual: f64| NegativeControl {
        name: name.to_string(),
        residual,
        pass: residual > NEGATIVE_CONTROL_FLOOR,
    };

    let bad16 = Offset16 {
        d1: Z4::ZERO,
        d2: Z4::ZERO,
        d3: Z4::ZERO,
    };
    let l1 = lemma1_residual(&ConstructionParams {
        base: base.clone(),
        offset: Offset::Qam16(bad16),
    })?;

    let bad_t1 = Offset64 {
        kind: OffsetKind::Type1,
        d,
        h1: Z4::TWO,
        h2: Z4::ZERO,
        h3: Z4::ZERO,
    };
    let l2 = lemma2_residuals(&ConstructionParams {
        base: base.clone(),
        offset: Offset::Qam64(bad_t1),
    })?;

    // Type 1 parameters (h1, h3) = (0, 0) evaluated with the Type 2 formulas
    let t1_as_t2 = Offset64 {
        kind: OffsetKind::Type2,
        d,
        h1: Z4::ZERO,
        h2: d.d2 + Z4::TWO,
        h3: Z4::ZERO,
    };
    let l3 = lemma3_residuals(&ConstructionParams {
        base,
        offset: Offset::Qam64(t1_as_t2),
    })?;

    Ok(vec![
        control("lemma1 with d=(0,0,0)", l1.residual),
        control("lemma2 a2a3 with (h1,h3)=(2,0)", l2[2].residual),
        control(
            "lemma3 with type-1 (h1,h3)=(0,0)",
            l3.iter().map(|r| r.residual).fold(0.0, f64::max),
        ),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub class: BoundClass,
    pub count: usize,
    pub min_star_over_n: f64,
    pub max_star_over_n: f64,
    pub max_pmepr: f64,
    pub exact_bound: f64,
    pub stated_bound: f64,
    /// Largest `X ⋆ X' / n` over the non-Golay Z4 components (E, or F and G).
    pub max_component_star_over_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditFailure {
    pub params: ConstructionParams,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub m: usize,
    pub modulation: Modulation,
    pub oversample: usize,
    pub total: usize,
    pub passed: usize,
    pub golay_base_pairs: usize,
    pub classes: Vec<ClassSummary>,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn class(&self, class: BoundClass) -> Option<&ClassSummary> {
        self.classes.iter().find(|c| c.class == class)
    }
}

struct RecordAudit {
    class: BoundClass,
    star_over_n: f64,
    pmepr: f64,
    component_star_over_n: f64,
    golay_base: bool,
    failure: Option<String>,
}

fn audit_record(p: &ConstructionParams, env: &mut EnvelopeEvaluator) -> RecordAudit {
    let rec = build(p).expect("enumerated parameters are valid");
    let n = rec.n() as f64;
    let class = p.offset.class();
    let star_over_n = star(&rec.sequence, &rec.primed_sequence).expect("equal lengths") / n;
    let pmepr = env.pmepr(&rec.sequence).expect("length n");
    let primed = rec.primed_components();
    let pair_star = |k: usize| {
        star(&polyphase(&rec.components[k]), &polyphase(&primed[k])).expect("equal lengths") / n
    };
    let golay = |k: usize| {
        is_complementary(&polyphase(&rec.components[k]), &polyphase(&primed[k]))
            .expect("equal lengths")
    };

    let golay_base = golay(0);
    let mut reasons = Vec::new();
    if !golay_base {
        reasons.push("(D, D') is not complementary".to_string());
    }
    let bound = class.exact_bound_f64();
    if star_over_n > bound + BOUND_EPS {
        reasons.push(format!("star/n = {star_over_n} exceeds {bound}"));
    }
    if class == BoundClass::Qam16 && star_over_n < 2.0 - BOUND_EPS {
        reasons.push(format!("star/n = {star_over_n} below 2"));
    }
    if pmepr > star_over_n + BOUND_EPS {
        reasons.push(format!("PMEPR {pmepr} exceeds star/n {star_over_n}"));
    }
    let component_star_over_n = match class {
        BoundClass::Qam16 => pair_star(1),
        BoundClass::Type1 => {
            if !golay(1) {
                reasons.push("(F, F') is not complementary".to_string());
            }
            pair_star(2)
        }
        BoundClass::Type2 => pair_star(1).max(pair_star(2)),
    };
    if component_star_over_n > 4.0 + BOUND_EPS {
        reasons.push(format!(
            "component star/n = {component_star_over_n} exceeds 4"
        ));
    }
    RecordAudit {
        class,
        star_over_n,
        pmepr,
        component_star_over_n,
        golay_base,
        failure: if reasons.is_empty() {
            None
        } else {
            Some(reasons.join("; "))
        },
    }
}

/// Every codeword of the family: `⋆`-bound, PMEPR ≤ ⋆/n, and the component
/// decomposition (Golay base pair, companions with `⋆ ≤ 4n`).
pub fn theorem_bound_audit(
    m: usize,
    modulation: Modulation,
    cfg: EnvelopeConfig,
) -> Result<AuditReport> {
    if !(3..=4).contains(&m) {
        return Err(Error::UnsupportedOrder {
            m,
            requirement: "3 <= m <= 4 for the exhaustive audit",
        });
    }
    let n = 1usize << m;
    EnvelopeEvaluator::new(n, cfg)?;
    let rows: Vec<(ConstructionParams, RecordAudit)> = family_partitions(m, modulation)?
        .into_par_iter()
        .flat_map_iter(|part| {
            let mut env = EnvelopeEvaluator::new(n, cfg).expect("validated above");
            part.map(move |p| {
                let a = audit_record(&p, &mut env);
                (p, a)
            })
            .collect::<Vec<_>>()
        })
        .collect();

    let mut classes: Vec<ClassSummary> = Vec::new();
    for class in [BoundClass::Qam16, BoundClass::Type1, BoundClass::Type2] {
        let members: Vec<&RecordAudit> = rows
            .iter()
            .map(|(_, a)| a)
            .filter(|a| a.class == class)
            .collect();
        if members.is_empty() {
            continue;
        }
        classes.push(ClassSummary {
            class,
            count: members.len(),
            min_star_over_n: members
                .iter()
                .map(|a| a.star_over_n)
                .fold(f64::INFINITY, f64::min),
            max_star_over_n: members.iter().map(|a| a.star_over_n).fold(0.0, f64::max),
            max_pmepr: members.iter().map(|a| a.pmepr).fold(0.0, f64::max),
            exact_bound: class.exact_bound_f64(),
            stated_bound: class.stated_bound(),
            max_component_star_over_n: members
                .iter()
                .map(|a| a.component_star_over_n)
                .fold(0.0, f64::max),
        });
    }
    let failures: Vec<AuditFailure> = rows
        .iter()
        .filter_map(|(p, a)| {
            a.failure.as_ref().map(|r| AuditFailure {
                params: p.clone(),
                reason: r.clone(),
            })
        })
        .collect();
    Ok(AuditReport {
        m,
        modulation,
        oversample: cfg.oversample,
        total: rows.len(),
        passed: rows.len() - failures.len(),
        golay_base_pairs: rows.iter().filter(|(_, a)| a.golay_base).count(),
        classes,
        failures: failures.into_iter().take(20).collect(),
    })
}

/// m = 3, π = id, c = (1, 1, 1), constant 0, d = (0, 1, 1).
pub fn example1_params() -> ConstructionParams {
    let base =
        DjQuadratic::new(Permutation::identity(3), vec![Z4::ONE; 3], Z4::ZERO).expect("m = 3");
    let d = Offset16::new(Z4::ZERO, Z4::ONE, Z4::ONE).expect("valid offset");
    ConstructionParams::new(base, Offset::Qam16(d)).expect("valid params")
}

/// Example 1's base with the Type 1 offset `(h1, h3) = (0, 0)`, `d = (0, 1, 1)`.
pub fn example2_params() -> ConstructionParams {
    let base =
        DjQuadratic::new(Permutation::identity(3), vec![Z4::ONE; 3], Z4::ZERO).expect("m = 3");
    let d = Offset16::new(Z4::ZERO, Z4::ONE, Z4::ONE).expect("valid offset");
    let o = Offset64::type1(d, Z4::ZERO, Z4::ZERO).expect("valid offset");
    ConstructionParams::new(base, Offset::Qam64(o)).expect("valid params")
}

pub const EXAMPLE1_D: [u8; 8] = [0, 1, 1, 0, 1, 2, 0, 3];
pub const EXAMPLE1_E: [u8; 8] = [1, 2, 3, 2, 2, 3, 0, 3];
/// Lattice points of Example 1's codeword over √10, recomputed from D and E.
pub const EXAMPLE1_H: [(i64, i64); 8] = [
    (1, 3),
    (-3, 1),
    (-1, 1),
    (1, 1),
    (-3, 1),
    (-1, -3),
    (3, 3),
    (3, -3),
];
/// Lattice points of Example 2's codeword over √42, as published.
pub const EXAMPLE2_J: [(i64, i64); 8] = [
    (5, 7),
    (-7, 5),
    (-5, 5),
    (5, 5),
    (-7, 5),
    (-5, -7),
    (7, 7),
    (7, -7),
];
pub const EXAMPLE1_PMEPR: f64 = 2.1;
pub const EXAMPLE2_PMEPR: f64 = 3.5;
pub const EXAMPLE_PMEPR_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub example1_pmepr: f64,
    pub example2_pmepr: f64,
    pub checks: Vec<Check>,
}

impl ExampleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn seq_check(name: &str, got: &QuaternarySequence, want: &[u8]) -> Check {
    let got = got.to_u8();
    Check {
        name: name.into(),
        pass: got == want,
        detail: format!("{got:?}"),
    }
}

fn points(seq: &crate::constellation::ComplexSequence) -> Vec<(i64, i64)> {
    seq.points().iter().map(|p| (p.re, p.im)).collect()
}

pub fn example_regression(cfg: EnvelopeConfig) -> Result<ExampleReport> {
    let mut env = EnvelopeEvaluator::new(8, cfg)?;
    let mut checks = Vec::new();

    let r1 = build(&example1_params())?;
    checks.push(seq_check("example1 D", &r1.components[0], &EXAMPLE1_D));
    checks.push(seq_check("example1 E", &r1.components[1], &EXAMPLE1_E));
    let h = points(&r1.sequence);
    checks.push(Check {
        name: "example1 H lattice".into(),
        pass: h == EXAMPLE1_H,
        detail: format!("{h:?}"),
    });
    let p1 = env.pmepr(&r1.sequence)?;
    checks.push(Check {
        name: "example1 PMEPR".into(),
        pass: (p1 - EXAMPLE1_PMEPR).abs() <= EXAMPLE_PMEPR_TOLERANCE,
        detail: format!("{p1:.6}"),
    });

    let r2 = build(&example2_params())?;
    checks.push(seq_check("example2 D", &r2.components[0], &EXAMPLE1_D));
    // published as "E" and "F": the second and third QPSK components
    checks.push(seq_check("example2 F", &r2.components[1], &EXAMPLE1_D));
    checks.push(seq_check("example2 G", &r2.components[2], &EXAMPLE1_E));
    let j = points(&r2.sequence);
    checks.push(Check {
        name: "example2 J lattice".into(),
        pass: j == EXAMPLE2_J,
        detail: format!("{j:?}"),
    });
    let p2 = env.pmepr(&r2.sequence)?;
    checks.push(Check {
        name: "example2 PMEPR".into(),
        pass: (p2 - EXAMPLE2_PMEPR).abs() <= EXAMPLE_PMEPR_TOLERANCE,
        detail: format!("{p2:.6}"),
    });

    Ok(ExampleReport {
        example1_pmepr: p1,
        example2_pmepr: p2,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma1_vanishes_for_example_one() {
        let r = lemma1_residual(&example1_params()).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn lemma1_all_offsets_zero_coefficients() {
        let base = DjQuadratic::new(Permutation::identity(3), vec![Z4::ZERO; 3], Z4::ZERO).unwrap();
        for d in list_offsets16() {
            let r = lemma1_residual(&ConstructionParams {
                base: base.clone(),
                offset: Offset::Qam16(d),
            })
            .unwrap();
            assert_eq!(r.residual, 0.0, "offset {d}");
        }
    }

    #[test]
    fn lemma1_negative_control() {
        let mut p = example1_params();
        p.offset = Offset::Qam16(Offset16 {
            d1: Z4::ZERO,
            d2: Z4::ZERO,
            d3: Z4::ZERO,
        });
        let r = lemma1_residual(&p).unwrap();
        assert!(r.residual > 0.5, "{}", r.residual);
        assert!(!r.pass);
    }

    #[test]
    fn lemma2_example_two() {
        for r in lemma2_residuals(&example2_params()).unwrap() {
            assert_eq!(r.residual, 0.0, "{:?}", r.lemma_id);
        }
    }

    #[test]
    fn lemma3_type2_example() {
        let mut p = example2_params();
        let d = Offset16::new(Z4::ZERO, Z4::ONE, Z4::ONE).unwrap();
        p.offset = Offset::Qam64(Offset64::type2(d, Z4::ZERO, Z4::ONE).unwrap());
        for r in lemma3_residuals(&p).unwrap() {
            assert_eq!(r.residual, 0.0, "{:?}", r.lemma_id);
        }
    }

    #[test]
    fn lemma_kind_mismatch() {
        assert!(matches!(
            lemma2_residuals(&example1_params()),
            Err(Error::OffsetKindMismatch { .. })
        ));
        assert!(matches!(
            lemma3_residuals(&example2_params()),
            Err(Error::OffsetKindMismatch { .. })
        ));
        assert!(matches!(
            lemma1_residual(&example2_params()),
            Err(Error::OffsetKindMismatch { .. })
        ));
    }

    #[test]
    fn negative_controls_are_nonzero() {
        for c in negative_controls(3).unwrap() {
            assert!(c.pass, "{} residual {}", c.name, c.residual);
        }
    }

    #[test]
    fn examples_reproduce() {
        let r = example_regression(EnvelopeConfig::default()).unwrap();
        for c in &r.checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn cross_term_is_conjugate_symmetric() {
        let p = example1_params();
        let Offset::Qam16(o) = p.offset else {
            unreachable!()
        };
        let mut bad = o;
        bad.d2 = Z4::ZERO;
        let d = p.base.psi();
        let s = bad.sequence(3, p.pi());
        let bits = last_bits(3, p.pi());
        for u in 1..8 {
            assert_eq!(
                cross_term(&d, &s, &bits, -u),
                cross_term(&d, &s, &bits, u).conj()
            );
        }
    }
}

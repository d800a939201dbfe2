//! One test per acceptance criterion. Each prints a single `[PASS]`/`[FAIL]`
//! line; run with `--nocapture` to see them.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use nearcomp::analysis::{
    ccdf, default_thresholds, family_metrics, random_baseline, CodewordMetrics, EnvelopeEvaluator,
};
use nearcomp::constructions::FamilyParams;
use nearcomp::verification::{lemma_sweep, LemmaId, NEGATIVE_CONTROL_FLOOR};
use nearcomp::{
    build, example_regression, family_size, theorem_bound_audit, AuditReport, BoundClass,
    EnvelopeConfig, Modulation,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FAMILIES: [(usize, Modulation, u64); 3] = [
    (3, Modulation::Qam16, 6144),
    (4, Modulation::Qam16, 98304),
    (3, Modulation::Qam64, 49152),
];

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "[{}] criterion {id}: {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn audit(m: usize, modulation: Modulation) -> &'static AuditReport {
    static CELLS: [OnceLock<AuditReport>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let idx = FAMILIES
        .iter()
        .position(|f| f.0 == m && f.1 == modulation)
        .expect("known family");
    CELLS[idx]
        .get_or_init(|| theorem_bound_audit(m, modulation, EnvelopeConfig::default()).unwrap())
}

fn metrics(m: usize, modulation: Modulation) -> &'static Vec<CodewordMetrics> {
    static CELLS: [OnceLock<Vec<CodewordMetrics>>; 3] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let idx = FAMILIES
        .iter()
        .position(|f| f.0 == m && f.1 == modulation)
        .expect("known family");
    CELLS[idx].get_or_init(|| family_metrics(m, modulation, EnvelopeConfig::default()).unwrap())
}

fn failures(a: &AuditReport) -> String {
    a.failures
        .iter()
        .take(3)
        .map(|f| f.reason.clone())
        .collect::<Vec<_>>()
        .join(" | ")
}

#[test]
fn criterion_1_family_counts() {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, modulation, want) in FAMILIES {
        let start = Instant::now();
        let enumerated =
            nearcomp::enumerate_family(m, modulation)
                .unwrap()
                .fold(0u64, |acc, rec| {
                    std::hint::black_box(&rec);
                    acc + 1
                });
        let elapsed = start.elapsed();
        let closed = family_size(m, modulation).unwrap();
        let ok = enumerated == want
            && closed == BigUint::from(want)
            && elapsed < Duration::from_secs(10);
        pass &= ok;
        parts.push(format!(
            "m={m} {modulation}: {enumerated} in {:.2?}",
            elapsed
        ));
    }
    report(1, "family counts", pass, parts.join(", "));
}

#[test]
fn criterion_2_16qam_bound() {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [3, 4] {
        let a = audit(m, Modulation::Qam16);
        let c = a.class(BoundClass::Qam16).unwrap();
        let ok = a.total
            == FAMILIES
                .iter()
                .find(|f| f.0 == m && f.1 == Modulation::Qam16)
                .unwrap()
                .2 as usize
            && c.max_star_over_n <= 2.4 + 1e-9
            && c.max_pmepr <= 2.4 + 0.01
            && a.all_passed();
        pass &= ok;
        parts.push(format!(
            "m={m}: {} codewords, max star/n {:.6}, max PMEPR {:.6} {}",
            a.total,
            c.max_star_over_n,
            c.max_pmepr,
            failures(a)
        ));
    }
    pass &= start.elapsed() < Duration::from_secs(300);
    report(2, "16-QAM star and PMEPR bound", pass, parts.join("; "));
}

#[test]
fn criterion_3_64qam_bounds() {
    let start = Instant::now();
    let a = audit(3, Modulation::Qam64);
    let mut pass = a.total == 49152 && a.all_passed();
    let mut parts = vec![format!("{} codewords", a.total)];
    for class in [BoundClass::Type1, BoundClass::Type2] {
        let c = a.class(class).unwrap();
        let bound = class.stated_bound();
        pass &= c.max_star_over_n <= bound + 1e-9 && c.max_pmepr <= bound + 0.01;
        parts.push(format!(
            "{}: {} codewords, max star/n {:.6} (bound {bound}), max PMEPR {:.6}",
            class.tag(),
            c.count,
            c.max_star_over_n,
            c.max_pmepr
        ));
    }
    pass &= start.elapsed() < Duration::from_secs(300);
    report(
        3,
        "64-QAM star and PMEPR bounds",
        pass,
        format!("{} {}", parts.join("; "), failures(a)),
    );
}

#[test]
fn criterion_4_examples() {
    let r = example_regression(EnvelopeConfig::default()).unwrap();
    let failed: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} = {}", c.name, c.detail))
        .collect();
    report(
        4,
        "worked examples",
        r.all_passed(),
        format!(
            "{} checks, PMEPR {:.4} and {:.4} {}",
            r.checks.len(),
            r.example1_pmepr,
            r.example2_pmepr,
            failed.join("; ")
        ),
    );
}

#[test]
fn criterion_5_golay_substructure() {
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, modulation, _) in FAMILIES {
        let a = audit(m, modulation);
        pass &= a.golay_base_pairs == a.total;
        parts.push(format!(
            "m={m} {modulation}: {}/{}",
            a.golay_base_pairs, a.total
        ));
    }
    report(5, "(D, D') Golay pairs", pass, parts.join(", "));
}

#[test]
fn criterion_6_lemma_oracles() {
    let r = lemma_sweep(3).unwrap();
    let ids = [
        LemmaId::L1,
        LemmaId::L2a,
        LemmaId::L2b,
        LemmaId::L2c,
        LemmaId::L3a,
        LemmaId::L3b,
        LemmaId::L3c,
    ];
    let worst = ids
        .iter()
        .map(|&id| r.max_for(id).unwrap())
        .fold(0.0, f64::max);
    let controls: Vec<String> = r
        .negative_controls
        .iter()
        .map(|c| format!("{} = {:.3}", c.name, c.residual))
        .collect();
    let pass = r.all_passed()
        && worst <= 1e-9
        && r.negative_controls.len() == 3
        && r.negative_controls
            .iter()
            .all(|c| c.residual > NEGATIVE_CONTROL_FLOOR);
    report(
        6,
        "cross-term cancellation",
        pass,
        format!(
            "{} evaluations, max residual {worst:e}; controls: {}",
            r.evaluations,
            controls.join(", ")
        ),
    );
}

#[test]
fn criterion_7_ccdf_shape() {
    let thresholds = default_thresholds();
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, modulation, _) in FAMILIES {
        let rows = metrics(m, modulation);
        for class in [BoundClass::Qam16, BoundClass::Type1, BoundClass::Type2] {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.class == class)
                .map(|r| r.pmepr)
                .collect();
            if values.is_empty() {
                continue;
            }
            let curve = ccdf(&values, &thresholds).unwrap();
            let bound = class.stated_bound();
            let tail_zero = curve
                .points
                .iter()
                .filter(|(t, _)| *t >= bound)
                .all(|(_, p)| *p == 0.0);
            let at_bound = ccdf(&values, &[bound]).unwrap().points[0].1;
            pass &= tail_zero && at_bound == 0.0;
            parts.push(format!(
                "m={m} {}: Pr{{>{bound}}} = {at_bound}",
                class.tag()
            ));
        }
    }
    let baseline = random_baseline(16, Modulation::Qam16, 10_000, 2024).unwrap();
    let mut env = EnvelopeEvaluator::new(16, EnvelopeConfig::default()).unwrap();
    let values: Vec<f64> = baseline.iter().map(|s| env.pmepr(s).unwrap()).collect();
    let p = ccdf(&values, &[2.4]).unwrap().points[0].1;
    pass &= p > 0.0;
    parts.push(format!("baseline n=16 Pr{{>2.4}} = {p:.4}"));
    report(7, "CCDF shape", pass, parts.join(", "));
}

#[test]
fn criterion_8_analysis_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_parseval = 0.0f64;
    let cfg = EnvelopeConfig::default();
    for _ in 0..100 {
        let m = rng.gen_range(3..=5);
        let modulation = if rng.gen_bool(0.5) {
            Modulation::Qam16
        } else {
            Modulation::Qam64
        };
        let total = FamilyParams::new(m, modulation).unwrap().total() as usize;
        let p = FamilyParams::new(m, modulation)
            .unwrap()
            .nth(rng.gen_range(0..total))
            .unwrap();
        let rec = build(&p).unwrap();
        let power = nearcomp::analysis::envelope_power(&rec.sequence, cfg).unwrap();
        let mean = power.iter().sum::<f64>() / power.len() as f64;
        let e = rec.sequence.energy();
        let energy = *e.numer() as f64 / *e.denom() as f64;
        worst_parseval = worst_parseval.max((mean - energy).abs() / energy);
    }

    let fine = family_metrics(3, Modulation::Qam16, EnvelopeConfig::new(32).unwrap()).unwrap();
    let coarse = metrics(3, Modulation::Qam16);
    let worst_grid = fine
        .iter()
        .zip(coarse)
        .map(|(f, c)| (f.pmepr - c.pmepr).abs() / f.pmepr)
        .fold(0.0, f64::max);

    let mut worst_gap = f64::NEG_INFINITY;
    let mut checked = 0;
    for (m, modulation, _) in FAMILIES {
        for r in metrics(m, modulation) {
            worst_gap = worst_gap.max(r.pmepr - r.star_over_n);
            checked += 1;
        }
    }
    let pass = worst_parseval <= 1e-9 && worst_grid <= 0.005 && worst_gap <= 1e-9;
    report(
        8,
        "analysis self-consistency",
        pass,
        format!(
            "Parseval rel. error {worst_parseval:e}, PEP L=32 vs L=16 {:.4}%, max PMEPR - star/n {worst_gap:.4} over {checked}",
            100.0 * worst_grid
        ),
    );
}

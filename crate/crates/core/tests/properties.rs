mod common;

use common::params;
use nearcomp::analysis::{envelope_power, star_folded, EnvelopeEvaluator};
use nearcomp::{autocorr, build, pep, star, DjQuadratic, EnvelopeConfig, Offset, Z4};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn autocorrelation_is_conjugate_symmetric(p in params(6)) {
        let rec = build(&p).unwrap();
        let prof = autocorr(&rec.sequence).unwrap();
        for u in prof.shifts() {
            prop_assert_eq!(prof.numerator(-u), prof.numerator(u).conj());
        }
        prop_assert_eq!(prof.numerator(0).im, 0);
    }

    #[test]
    fn folded_star_equals_full_sum(p in params(6)) {
        let rec = build(&p).unwrap();
        let a = star(&rec.sequence, &rec.primed_sequence).unwrap();
        let b = star_folded(&rec.sequence, &rec.primed_sequence).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn polyphase_fold_has_2n_centre(p in params(6)) {
        let rec = build(&p).unwrap();
        let d = nearcomp::polyphase(&rec.components[0]);
        let d2 = nearcomp::polyphase(&rec.primed_components()[0]);
        let centre = autocorr(&d).unwrap().plus(&autocorr(&d2).unwrap()).unwrap().numerator(0);
        prop_assert_eq!(centre.re, 2 * rec.n() as i64);
        prop_assert!(autocorr(&d).unwrap().plus(&autocorr(&d2).unwrap()).unwrap().is_impulse());
    }

    #[test]
    fn coefficients_only_matter_mod_4(p in params(6), l in 0usize..6, k in 1i64..4) {
        let m = p.m();
        let l = l % (m + 1);
        let mut linear = p.base.linear().to_vec();
        let mut constant = p.base.constant();
        if l < m {
            linear[l] = Z4::new(linear[l].value() as i64 + 4 * k);
        } else {
            constant = Z4::new(constant.value() as i64 - 4 * k);
        }
        let q = nearcomp::ConstructionParams {
            base: DjQuadratic::new(p.pi().clone(), linear, constant).unwrap(),
            offset: p.offset,
        };
        prop_assert_eq!(build(&p).unwrap(), build(&q).unwrap());
    }

    #[test]
    fn components_differ_by_offsets(p in params(6)) {
        let rec = build(&p).unwrap();
        let (m, pi) = (p.m(), p.pi());
        let d = &rec.components[0];
        match p.offset {
            Offset::Qam16(o) => {
                prop_assert_eq!(rec.components[1].minus(d).unwrap(), o.sequence(m, pi));
            }
            Offset::Qam64(o) => {
                prop_assert_eq!(rec.components[1].minus(d).unwrap(), o.s1(m, pi));
                prop_assert_eq!(rec.components[2].minus(d).unwrap(), o.s2(m, pi));
            }
        }
        for (x, xp) in rec.components.iter().zip(rec.primed_components()) {
            prop_assert_eq!(xp, x.with_last_flip(pi));
        }
    }

    #[test]
    fn parseval_holds(p in params(6), l in 1usize..9) {
        let rec = build(&p).unwrap();
        let power = envelope_power(&rec.sequence, EnvelopeConfig::new(l).unwrap()).unwrap();
        let mean = power.iter().sum::<f64>() / power.len() as f64;
        let e = rec.sequence.energy();
        let energy = *e.numer() as f64 / *e.denom() as f64;
        prop_assert!((mean - energy).abs() <= 1e-9 * energy);
    }

    #[test]
    fn pep_grows_with_refinement(p in params(5), l in 1usize..9) {
        let rec = build(&p).unwrap();
        let coarse = pep(&rec.sequence, EnvelopeConfig::new(l).unwrap()).unwrap();
        let fine = pep(&rec.sequence, EnvelopeConfig::new(2 * l).unwrap()).unwrap();
        prop_assert!(fine >= coarse * (1.0 - 1e-12));
    }

    #[test]
    fn pmepr_bounded_by_star(p in params(6)) {
        let rec = build(&p).unwrap();
        let n = rec.n();
        let mut env = EnvelopeEvaluator::new(n, EnvelopeConfig::default()).unwrap();
        let s = star(&rec.sequence, &rec.primed_sequence).unwrap() / n as f64;
        prop_assert!(env.pmepr(&rec.sequence).unwrap() <= s + 1e-9);
        prop_assert!(env.pmepr(&rec.primed_sequence).unwrap() <= s + 1e-9);
        prop_assert!(s <= p.offset.class().exact_bound_f64() + 1e-9);
    }

    #[test]
    fn symbols_stay_on_grid(p in params(6)) {
        let rec = build(&p).unwrap();
        let grid = rec.sequence.scale().grid();
        for z in rec.sequence.points().iter().chain(rec.primed_sequence.points()) {
            prop_assert!(grid.contains(z));
        }
    }
}

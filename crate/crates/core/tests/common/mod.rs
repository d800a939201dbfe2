#![allow(dead_code)]

use nearcomp::{
    list_offsets16, list_offsets64, ConstructionParams, DjQuadratic, Offset, Permutation, Z4,
};
use proptest::prelude::*;

/// A valid parameter tuple for orders 3..=max_m, either modulation.
pub fn params(max_m: usize) -> impl Strategy<Value = ConstructionParams> {
    (3..=max_m)
        .prop_flat_map(|m| {
            (
                Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(0u8..4, m + 1),
                0usize..72,
            )
        })
        .prop_map(|(mut perm, coeffs, off)| {
            let m = perm.len();
            if perm[0] > perm[m - 1] {
                perm.reverse();
            }
            let pi = Permutation::new(perm).unwrap();
            let linear = coeffs[..m].iter().map(|&c| Z4::new(c as i64)).collect();
            let base = DjQuadratic::new(pi, linear, Z4::new(coeffs[m] as i64)).unwrap();
            let offset = if off < 8 {
                Offset::Qam16(list_offsets16()[off])
            } else {
                Offset::Qam64(list_offsets64()[off - 8])
            };
            ConstructionParams::new(base, offset).unwrap()
        })
}

/// Direct `O(n·N)` evaluation of `|Σ a_i e^{2πj i k/N}|²` on `N = L·n` points.
pub fn naive_power(points: &[(f64, f64)], oversample: usize) -> Vec<f64> {
    let n = points.len();
    let grid = n * oversample;
    (0..grid)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &(a, b)) in points.iter().enumerate() {
                let t = 2.0 * std::f64::consts::PI * ((i * k) % grid) as f64 / grid as f64;
                let (s, c) = t.sin_cos();
                re += a * c - b * s;
                im += a * s + b * c;
            }
            re * re + im * im
        })
        .collect()
}

/// Floating-point aperiodic autocorrelation `Σ a_i conj(a_{i+u})`.
pub fn naive_autocorr(points: &[(f64, f64)], u: isize) -> (f64, f64) {
    let n = points.len() as isize;
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..n {
        let k = i + u;
        if k < 0 || k >= n {
            continue;
        }
        let (a, b) = points[i as usize];
        let (c, d) = points[k as usize];
        re += a * c + b * d;
        im += b * c - a * d;
    }
    (re, im)
}

pub fn to_pairs(seq: &nearcomp::ComplexSequence) -> Vec<(f64, f64)> {
    seq.to_complex().iter().map(|z| (z.re, z.im)).collect()
}

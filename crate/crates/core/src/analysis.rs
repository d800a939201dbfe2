//! Aperiodic correlation, the ⋆ operator, envelope power and CCDF statistics.

use std::sync::Arc;

use num_complex::{Complex, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::algebra::{Gaussian, Z4};
use crate::constellation::{qam16_map, qam64_map, ComplexSequence};
use crate::constructions::{build, family_partitions, BoundClass, CodewordRecord, Modulation};
use crate::error::{Error, Result};

/// Absolute slack used for the ⋆ and PMEPR inequalities.
pub const BOUND_EPS: f64 = 1e-9;

/// `C(u)` for `u ∈ (−n, n)`, stored exactly as Gaussian integers over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationProfile {
    n: usize,
    denominator: i64,
    values: Vec<Gaussian>,
}

impl CorrelationProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// Numerator of `C(u)`; zero outside `(−n, n)`.
    pub fn numerator(&self, u: isize) -> Gaussian {
        let n = self.n as isize;
        if u <= -n || u >= n {
            Complex::new(0, 0)
        } else {
            self.values[(u + n - 1) as usize]
        }
    }

    pub fn at(&self, u: isize) -> Complex64 {
        let c = self.numerator(u);
        Complex64::new(c.re as f64, c.im as f64) / self.denominator as f64
    }

    pub fn shifts(&self) -> std::ops::RangeInclusive<isize> {
        let n = self.n as isize;
        1 - n..=n - 1
    }

    /// Pointwise `C_a(u) + C_b(u)` over the least common denominator.
    pub fn plus(&self, other: &CorrelationProfile) -> Result<CorrelationProfile> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let den = lcm(self.denominator, other.denominator);
        let (fa, fb) = (den / self.denominator, den / other.denominator);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * fa + b * fb)
            .collect();
        Ok(CorrelationProfile {
            n: self.n,
            denominator: den,
            values,
        })
    }

    /// `Σ_u |C(u)|`.
    pub fn abs_sum(&self) -> f64 {
        self.values
            .iter()
            .map(|c| (c.norm_sqr() as f64).sqrt())
            .sum::<f64>()
            / self.denominator as f64
    }

    /// True when every off-peak value is exactly zero.
    pub fn is_impulse(&self) -> bool {
        self.shifts()
            .all(|u| u == 0 || self.numerator(u) == Complex::new(0, 0))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// `C(u) = Σ_i A_i·conj(A_{i+u})` for `u ≥ 0`, `C(−u) = conj(C(u))`.
pub fn autocorr(a: &ComplexSequence) -> Result<CorrelationProfile> {
    let n = a.len();
    if n == 0 {
        return Err(Error::Empty("sequence"));
    }
    let pts = a.points();
    let mut values = vec![Complex::new(0, 0); 2 * n - 1];
    for u in 0..n {
        let c: Gaussian = (0..n - u).map(|i| pts[i] * pts[i + u].conj()).sum();
        values[n - 1 + u] = c;
        values[n - 1 - u] = c.conj();
    }
    Ok(CorrelationProfile {
        n,
        denominator: a.scale().denominator(),
        values,
    })
}

/// `A ⋆ B = Σ_{u=1−n}^{n−1} |C_A(u) + C_B(u)|`.
pub fn star(a: &ComplexSequence, b: &ComplexSequence) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(autocorr(a)?.plus(&autocorr(b)?)?.abs_sum())
}

/// `A ⋆ B` folded by conjugate symmetry: `|C(0)| + 2·Σ_{u=1}^{n−1}|C(u)|`.
///
/// For polyphase inputs `C(0) = 2n`, giving `2n + 2·Σ_{u≥1}|C_A(u) + C_B(u)|`.
pub fn star_folded(a: &ComplexSequence, b: &ComplexSequence) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let sum = autocorr(a)?.plus(&autocorr(b)?)?;
    let n = a.len() as isize;
    Ok(sum.at(0).norm() + 2.0 * (1..n).map(|u| sum.at(u).norm()).sum::<f64>())
}

/// True when `C_A(u) + C_B(u) = 0` exactly for every `u ≠ 0`.
pub fn is_complementary(a: &ComplexSequence, b: &ComplexSequence) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(autocorr(a)?.plus(&autocorr(b)?)?.is_impulse())
}

/// Oversampling of the envelope. The carrier grid is normalized to
/// `w0 = 0`, `ws = 1`, `T = 1`; PMEPR does not depend on that choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeConfig {
    pub oversample: usize,
}

impl EnvelopeConfig {
    pub fn new(oversample: usize) -> Result<EnvelopeConfig> {
        if oversample == 0 {
            return Err(Error::InvalidConfig(
                "oversampling factor must be at least 1".into(),
            ));
        }
        Ok(EnvelopeConfig { oversample })
    }
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        EnvelopeConfig { oversample: 16 }
    }
}

/// Samples `|S(t)|²` at `t = k/(L·n)` with a cached inverse FFT plan.
pub struct EnvelopeEvaluator {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl EnvelopeEvaluator {
    pub fn new(n: usize, cfg: EnvelopeConfig) -> Result<EnvelopeEvaluator> {
        if n == 0 {
            return Err(Error::Empty("sequence"));
        }
        if cfg.oversample == 0 {
            return Err(Error::InvalidConfig(
                "oversampling factor must be at least 1".into(),
            ));
        }
        let len = n * cfg.oversample;
        let fft = FftPlanner::new().plan_fft_inverse(len);
        let scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        Ok(EnvelopeEvaluator {
            n,
            fft,
            buf: vec![Complex64::new(0.0, 0.0); len],
            scratch,
        })
    }

    fn fill(&mut self, a: &ComplexSequence) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: a.len(),
            });
        }
        self.buf
            .iter_mut()
            .for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (slot, p) in self.buf.iter_mut().zip(a.points()) {
            *slot = Complex64::new(p.re as f64, p.im as f64);
        }
        self.fft
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        Ok(())
    }

    /// `|S(k/(L·n))|²` for every grid point.
    pub fn power(&mut self, a: &ComplexSequence) -> Result<Vec<f64>> {
        self.fill(a)?;
        let den = a.scale().denominator() as f64;
        Ok(self.buf.iter().map(|z| z.norm_sqr() / den).collect())
    }

    pub fn pep(&mut self, a: &ComplexSequence) -> Result<f64> {
        self.fill(a)?;
        let peak = self.buf.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
        Ok(peak / a.scale().denominator() as f64)
    }

    /// `PEP / n`: constellations have unit average energy, so the mean power is `n`.
    pub fn pmepr(&mut self, a: &ComplexSequence) -> Result<f64> {
        Ok(self.pep(a)? / self.n as f64)
    }
}

pub fn envelope_power(a: &ComplexSequence, cfg: EnvelopeConfig) -> Result<Vec<f64>> {
    EnvelopeEvaluator::new(a.len(), cfg)?.power(a)
}

pub fn pep(a: &ComplexSequence, cfg: EnvelopeConfig) -> Result<f64> {
    EnvelopeEvaluator::new(a.len(), cfg)?.pep(a)
}

pub fn pmepr(a: &ComplexSequence, cfg: EnvelopeConfig) -> Result<f64> {
    EnvelopeEvaluator::new(a.len(), cfg)?.pmepr(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarBoundReport {
    pub star_over_n: f64,
    pub pmepr: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Checks `PMEPR ≤ (H ⋆ H')/n ≤ bound`.
pub fn star_bound_check(
    record: &CodewordRecord,
    bound: f64,
    cfg: EnvelopeConfig,
) -> Result<StarBoundReport> {
    let n = record.n() as f64;
    let star_over_n = star(&record.sequence, &record.primed_sequence)? / n;
    let p = pmepr(&record.sequence, cfg)?;
    let pass = p <= star_over_n + BOUND_EPS && star_over_n <= bound + BOUND_EPS;
    Ok(StarBoundReport {
        star_over_n,
        pmepr: p,
        bound,
        pass,
    })
}

/// Ordered `(threshold, Pr{PMEPR > threshold})` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfCurve {
    pub points: Vec<(f64, f64)>,
}

impl CcdfCurve {
    pub fn probability_at(&self, threshold: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|(t, _)| *t == threshold)
            .map(|(_, p)| *p)
    }
}

pub fn ccdf(values: &[f64], thresholds: &[f64]) -> Result<CcdfCurve> {
    if values.is_empty() {
        return Err(Error::Empty("PMEPR samples"));
    }
    if thresholds
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::UnsortedThresholds);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total = sorted.len() as f64;
    let points = thresholds
        .iter()
        .map(|&t| {
            let at_or_below = sorted.partition_point(|&v| v <= t);
            (t, (sorted.len() - at_or_below) as f64 / total)
        })
        .collect();
    Ok(CcdfCurve { points })
}

/// Linear thresholds 1.00, 1.05, …, 10.00.
pub fn default_thresholds() -> Vec<f64> {
    (0..=180).map(|k| (100 + 5 * k) as f64 / 100.0).collect()
}

/// Uncoded OFDM symbols: i.i.d. uniform constellation points, reproducible per seed.
pub fn random_baseline(
    n: usize,
    modulation: Modulation,
    count: usize,
    seed: u64,
) -> Result<Vec<ComplexSequence>> {
    if count == 0 {
        return Err(Error::InvalidConfig(
            "baseline count must be at least 1".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Empty("sequence"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = move || Z4::new(rng.gen_range(0..4));
    Ok((0..count)
        .map(|_| {
            let pts = (0..n)
                .map(|_| match modulation {
                    Modulation::Qam16 => qam16_map(draw(), draw()).point(),
                    Modulation::Qam64 => qam64_map(draw(), draw(), draw()).point(),
                })
                .collect();
            ComplexSequence::from_points(modulation.scale(), pts)
        })
        .collect())
}

/// Per-codeword figures used by the audits and the CCDF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodewordMetrics {
    pub class: BoundClass,
    pub star_over_n: f64,
    pub pmepr: f64,
}

/// Evaluates `f` on every codeword of a family in parallel; results come back
/// in sequential enumeration order.
pub fn map_family<T, F>(m: usize, modulation: Modulation, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&CodewordRecord) -> T + Sync,
{
    let parts = family_partitions(m, modulation)?;
    let chunks: Vec<Vec<T>> = parts
        .into_par_iter()
        .map(|part| {
            part.map(|p| f(&build(&p).expect("enumerated parameters are valid")))
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

pub fn family_metrics(
    m: usize,
    modulation: Modulation,
    cfg: EnvelopeConfig,
) -> Result<Vec<CodewordMetrics>> {
    let n = 1usize << m;
    EnvelopeEvaluator::new(n, cfg)?;
    let parts = family_partitions(m, modulation)?;
    let chunks: Vec<Vec<CodewordMetrics>> = parts
        .into_par_iter()
        .map(|part| {
            let mut env = EnvelopeEvaluator::new(n, cfg).expect("validated above");
            part.map(|p| {
                let rec = build(&p).expect("enumerated parameters are valid");
                CodewordMetrics {
                    class: p.offset.class(),
                    star_over_n: star(&rec.sequence, &rec.primed_sequence).expect("equal lengths")
                        / n as f64,
                    pmepr: env.pmepr(&rec.sequence).expect("length n"),
                }
            })
            .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

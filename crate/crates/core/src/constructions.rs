//! 16-QAM and 64-QAM near-complementary codewords and their families.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::algebra::{bit, canonical_permutations, BitVector, Permutation, Z4};
use crate::constellation::{
    qam16_map, qam16_weights_sq, qam64_map, qam64_weights_sq, ComplexSequence, Scale,
};
use crate::error::{Error, Result};
use crate::gbf::{DjQuadratic, QuaternarySequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulation {
    #[serde(rename = "16qam")]
    Qam16,
    #[serde(rename = "64qam")]
    Qam64,
}

impl Modulation {
    pub fn scale(self) -> Scale {
        match self {
            Modulation::Qam16 => Scale::Qam16,
            Modulation::Qam64 => Scale::Qam64,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Modulation::Qam16 => "16qam",
            Modulation::Qam64 => "64qam",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `2·x_{π(0)}x_{π(1)} + p·x_{π(0)} + q·x_{π(1)} + r` at position `i`.
#[inline]
fn quadratic_offset_at(i: usize, m: usize, pi: &Permutation, p: Z4, q: Z4, r: Z4) -> Z4 {
    let x0 = bit(i, m, pi.at(0));
    let x1 = bit(i, m, pi.at(1));
    Z4::new(2 * (x0 & x1) as i64) + p * x0 + q * x1 + r
}

/// Offset triple of the 16-QAM construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Offset16 {
    pub d1: Z4,
    pub d2: Z4,
    pub d3: Z4,
}

impl Offset16 {
    pub fn new(d1: Z4, d2: Z4, d3: Z4) -> Result<Offset16> {
        let o = Offset16 { d1, d2, d3 };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d1 + Z4::TWO * self.d3 != Z4::TWO {
            return Err(Error::OffsetConstraint {
                constraint: "d1+2d3=2",
            });
        }
        if Z4::TWO * self.d2 != Z4::TWO {
            return Err(Error::OffsetConstraint {
                constraint: "2d2=2",
            });
        }
        Ok(())
    }

    /// `s(x) = 2x_{π(0)}x_{π(1)} + d1·x_{π(0)} + d2·x_{π(1)} + d3`.
    pub fn eval(&self, x: &BitVector, pi: &Permutation) -> Result<Z4> {
        if x.len() < 2 || x.len() != pi.len() {
            return Err(Error::LengthMismatch {
                expected: pi.len().max(2),
                actual: x.len(),
            });
        }
        Ok(quadratic_offset_at(
            x.index(),
            x.len(),
            pi,
            self.d1,
            self.d2,
            self.d3,
        ))
    }

    pub fn sequence(&self, m: usize, pi: &Permutation) -> QuaternarySequence {
        QuaternarySequence::from_fn(m, |i| {
            quadratic_offset_at(i, m, pi, self.d1, self.d2, self.d3)
        })
    }
}

impl fmt::Display for Offset16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.d1, self.d2, self.d3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OffsetKind {
    Type1,
    Type2,
}

impl OffsetKind {
    pub fn tag(self) -> &'static str {
        match self {
            OffsetKind::Type1 => "type1",
            OffsetKind::Type2 => "type2",
        }
    }
}

/// Offset pair `(s⁽¹⁾, s⁽²⁾)` of the 64-QAM construction.
///
/// Type 1: `s⁽¹⁾ = h1·x_{π(0)} + h3` with `h1 + 2h3 = 0`, and `s⁽²⁾` is the
/// 16-QAM offset of `d`. Type 2: `s⁽¹⁾` is the 16-QAM offset of `d` and
/// `s⁽²⁾ = 2x_{π(0)}x_{π(1)} + h1·x_{π(0)} + h2·x_{π(1)} + h3` with
/// `h2 = d2 + 2`, `h1 + 2h3 = 2`. `h2` is unused (zero) for Type 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Offset64 {
    pub kind: OffsetKind,
    pub d: Offset16,
    pub h1: Z4,
    pub h2: Z4,
    pub h3: Z4,
}

impl Offset64 {
    pub fn type1(d: Offset16, h1: Z4, h3: Z4) -> Result<Offset64> {
        let o = Offset64 {
            kind: OffsetKind::Type1,
            d,
            h1,
            h2: Z4::ZERO,
            h3,
        };
        o.validate()?;
        Ok(o)
    }

    pub fn type2(d: Offset16, h1: Z4, h3: Z4) -> Result<Offset64> {
        let o = Offset64 {
            kind: OffsetKind::Type2,
            d,
            h1,
            h2: d.d2 + Z4::TWO,
            h3,
        };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        self.d.validate()?;
        match self.kind {
            OffsetKind::Type1 => {
                if self.h1 + Z4::TWO * self.h3 != Z4::ZERO {
                    return Err(Error::OffsetConstraint {
                        constraint: "h1+2h3=0",
                    });
                }
                if self.h2 != Z4::ZERO {
                    return Err(Error::OffsetConstraint {
                        constraint: "h2=0 (unused for type 1)",
                    });
                }
            }
            OffsetKind::Type2 => {
                if self.h2 != self.d.d2 + Z4::TWO {
                    return Err(Error::OffsetConstraint {
                        constraint: "h2=d2+2",
                    });
                }
                if self.h1 + Z4::TWO * self.h3 != Z4::TWO {
                    return Err(Error::OffsetConstraint {
                        constraint: "h1+2h3=2",
                    });
                }
            }
        }
        Ok(())
    }

    pub fn s1_at(&self, i: usize, m: usize, pi: &Permutation) -> Z4 {
        match self.kind {
            OffsetKind::Type1 => self.h1 * bit(i, m, pi.at(0)) + self.h3,
            OffsetKind::Type2 => quadratic_offset_at(i, m, pi, self.d.d1, self.d.d2, self.d.d3),
        }
    }

    pub fn s2_at(&self, i: usize, m: usize, pi: &Permutation) -> Z4 {
        match self.kind {
            OffsetKind::Type1 => quadratic_offset_at(i, m, pi, self.d.d1, self.d.d2, self.d.d3),
            OffsetKind::Type2 => quadratic_offset_at(i, m, pi, self.h1, self.h2, self.h3),
        }
    }

    pub fn s1(&self, m: usize, pi: &Permutation) -> QuaternarySequence {
        QuaternarySequence::from_fn(m, |i| self.s1_at(i, m, pi))
    }

    pub fn s2(&self, m: usize, pi: &Permutation) -> QuaternarySequence {
        QuaternarySequence::from_fn(m, |i| self.s2_at(i, m, pi))
    }
}

impl fmt::Display for Offset64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{},{},{}",
            self.kind.tag(),
            self.d,
            self.h1,
            self.h2,
            self.h3
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "modulation", rename_all = "lowercase")]
pub enum Offset {
    #[serde(rename = "16qam")]
    Qam16(Offset16),
    #[serde(rename = "64qam")]
    Qam64(Offset64),
}

impl Offset {
    pub fn modulation(&self) -> Modulation {
        match self {
            Offset::Qam16(_) => Modulation::Qam16,
            Offset::Qam64(_) => Modulation::Qam64,
        }
    }

    pub fn class(&self) -> BoundClass {
        match self {
            Offset::Qam16(_) => BoundClass::Qam16,
            Offset::Qam64(o) if o.kind == OffsetKind::Type1 => BoundClass::Type1,
            Offset::Qam64(_) => BoundClass::Type2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Offset::Qam16(o) => o.validate(),
            Offset::Qam64(o) => o.validate(),
        }
    }
}

/// Which PMEPR guarantee a codeword falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundClass {
    Qam16,
    Type1,
    Type2,
}

impl BoundClass {
    /// The ⋆-bound (per unit length) obtained from the component inequalities:
    /// `2r1² + 4r2²`, `2a1² + 2a2² + 4a3² + 4a1a2` and `2a1² + 4a2² + 4a3²`.
    pub fn exact_bound(self) -> Ratio<i64> {
        let two = Ratio::from_integer(2);
        let four = Ratio::from_integer(4);
        match self {
            BoundClass::Qam16 => {
                let [r1, r2] = qam16_weights_sq();
                two * r1 + four * r2
            }
            BoundClass::Type1 => {
                let [a1, a2, a3] = qam64_weights_sq();
                // a1·a2 = 4·2/21
                let a1a2 = Ratio::new(8, 21);
                two * a1 + two * a2 + four * a3 + four * a1a2
            }
            BoundClass::Type2 => {
                let [a1, a2, a3] = qam64_weights_sq();
                two * a1 + four * a2 + four * a3
            }
        }
    }

    /// The rounded constant quoted for the family.
    pub fn stated_bound(self) -> f64 {
        match self {
            BoundClass::Qam16 => 2.4,
            BoundClass::Type1 => 3.62,
            BoundClass::Type2 => 2.48,
        }
    }

    pub fn exact_bound_f64(self) -> f64 {
        let r = self.exact_bound();
        *r.numer() as f64 / *r.denom() as f64
    }

    pub fn tag(self) -> &'static str {
        match self {
            BoundClass::Qam16 => "16qam",
            BoundClass::Type1 => "type1",
            BoundClass::Type2 => "type2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub base: DjQuadratic,
    pub offset: Offset,
}

impl ConstructionParams {
    pub fn new(base: DjQuadratic, offset: Offset) -> Result<ConstructionParams> {
        let p = ConstructionParams { base, offset };
        p.validate()?;
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    pub fn n(&self) -> usize {
        1 << self.m()
    }

    pub fn pi(&self) -> &Permutation {
        self.base.pi()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m() <= 2 {
            return Err(Error::UnsupportedOrder {
                m: self.m(),
                requirement: "m > 2",
            });
        }
        self.offset.validate()
    }
}

/// A codeword together with its primed companion and Z4 components.
///
/// `components` holds `[D, E]` for 16-QAM and `[D, F, G]` for 64-QAM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordRecord {
    pub params: ConstructionParams,
    pub components: Vec<QuaternarySequence>,
    pub sequence: ComplexSequence,
    pub primed_sequence: ComplexSequence,
}

impl CodewordRecord {
    pub fn n(&self) -> usize {
        self.sequence.len()
    }

    /// The components with `2x_{π(m−1)}` added: `[D', E']` or `[D', F', G']`.
    pub fn primed_components(&self) -> Vec<QuaternarySequence> {
        let pi = self.params.pi();
        self.components
            .iter()
            .map(|c| c.with_last_flip(pi))
            .collect()
    }
}

pub fn offset16_eval(o: &Offset16, x: &BitVector, pi: &Permutation) -> Result<Z4> {
    o.eval(x, pi)
}

/// The eight triples with `d1 + 2d3 = 2` and `2d2 = 2`, in lexicographic order.
pub fn list_offsets16() -> Vec<Offset16> {
    let mut out = Vec::with_capacity(8);
    for d1 in Z4::all() {
        for d2 in Z4::all() {
            for d3 in Z4::all() {
                if let Ok(o) = Offset16::new(d1, d2, d3) {
                    out.push(o);
                }
            }
        }
    }
    out
}

/// All 32 Type 1 offsets followed by all 32 Type 2 offsets.
pub fn list_offsets64() -> Vec<Offset64> {
    let mut out = Vec::with_capacity(64);
    for kind in [OffsetKind::Type1, OffsetKind::Type2] {
        for d in list_offsets16() {
            for h1 in Z4::all() {
                for h3 in Z4::all() {
                    let o = match kind {
                        OffsetKind::Type1 => Offset64::type1(d, h1, h3),
                        OffsetKind::Type2 => Offset64::type2(d, h1, h3),
                    };
                    if let Ok(o) = o {
                        out.push(o);
                    }
                }
            }
        }
    }
    out
}

pub fn list_offsets(modulation: Modulation) -> Vec<Offset> {
    match modulation {
        Modulation::Qam16 => list_offsets16().into_iter().map(Offset::Qam16).collect(),
        Modulation::Qam64 => list_offsets64().into_iter().map(Offset::Qam64).collect(),
    }
}

pub fn build_16qam(p: &ConstructionParams) -> Result<CodewordRecord> {
    p.validate()?;
    let Offset::Qam16(off) = p.offset else {
        return Err(Error::OffsetKindMismatch {
            expected: "16qam",
            actual: "64qam",
        });
    };
    let (m, pi) = (p.m(), p.pi());
    let d = p.base.psi();
    let e = d.plus(&off.sequence(m, pi))?;
    let (dp, ep) = (d.with_last_flip(pi), e.with_last_flip(pi));
    let map = |x: &QuaternarySequence, y: &QuaternarySequence| {
        let pts = x
            .values()
            .iter()
            .zip(y.values())
            .map(|(&u, &v)| qam16_map(u, v).point())
            .collect();
        ComplexSequence::from_points(Scale::Qam16, pts)
    };
    let sequence = map(&d, &e);
    let primed_sequence = map(&dp, &ep);
    Ok(CodewordRecord {
        params: p.clone(),
        components: vec![d, e],
        sequence,
        primed_sequence,
    })
}

pub fn build_64qam(p: &ConstructionParams) -> Result<CodewordRecord> {
    p.validate()?;
    let Offset::Qam64(off) = p.offset else {
        return Err(Error::OffsetKindMismatch {
            expected: "64qam",
            actual: "16qam",
        });
    };
    let (m, pi) = (p.m(), p.pi());
    let d = p.base.psi();
    let f = d.plus(&off.s1(m, pi))?;
    let g = d.plus(&off.s2(m, pi))?;
    let map = |x: &QuaternarySequence, y: &QuaternarySequence, z: &QuaternarySequence| {
        let pts = (0..x.len())
            .map(|i| qam64_map(x[i], y[i], z[i]).point())
            .collect();
        ComplexSequence::from_points(Scale::Qam64, pts)
    };
    let sequence = map(&d, &f, &g);
    let primed_sequence = map(
        &d.with_last_flip(pi),
        &f.with_last_flip(pi),
        &g.with_last_flip(pi),
    );
    Ok(CodewordRecord {
        params: p.clone(),
        components: vec![d, f, g],
        sequence,
        primed_sequence,
    })
}

pub fn build(p: &ConstructionParams) -> Result<CodewordRecord> {
    match p.offset {
        Offset::Qam16(_) => build_16qam(p),
        Offset::Qam64(_) => build_64qam(p),
    }
}

/// Closed-form family size `(#offsets)·(m!/2)·4^(m+1)`.
pub fn family_size(m: usize, modulation: Modulation) -> Result<BigUint> {
    if m <= 2 {
        return Err(Error::UnsupportedOrder {
            m,
            requirement: "m > 2",
        });
    }
    let offsets: u32 = match modulation {
        Modulation::Qam16 => 8,
        Modulation::Qam64 => 64,
    };
    let fact: BigUint = (1..=m as u32).map(BigUint::from).product();
    Ok(BigUint::from(offsets) * fact / 2u32 * BigUint::from(4u32).pow(m as u32 + 1))
}

/// Largest order accepted by the enumerators; larger families cannot be indexed.
pub const MAX_ENUMERATION_ORDER: usize = 12;

/// Parameter tuples of a family in deterministic order: permutation
/// (lexicographic) outermost, then `(c_0, …, c_{m−1}, c)` as a base-4 counter
/// with `c_0` most significant, then the offset list order.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    m: usize,
    perms: Vec<Permutation>,
    offsets: Vec<Offset>,
    perm_idx: usize,
    coeff: u64,
    off_idx: usize,
    coeff_count: u64,
}

impl FamilyParams {
    pub fn new(m: usize, modulation: Modulation) -> Result<FamilyParams> {
        check_order(m)?;
        Ok(FamilyParams::with_perms(
            m,
            canonical_permutations(m)?,
            list_offsets(modulation),
        ))
    }

    fn with_perms(m: usize, perms: Vec<Permutation>, offsets: Vec<Offset>) -> FamilyParams {
        FamilyParams {
            m,
            perms,
            offsets,
            perm_idx: 0,
            coeff: 0,
            off_idx: 0,
            coeff_count: 1 << (2 * (m + 1)),
        }
    }

    /// Total number of tuples, from the enumerated component lists.
    pub fn total(&self) -> u64 {
        self.perms.len() as u64 * self.coeff_count * self.offsets.len() as u64
    }

    fn position(&self) -> u64 {
        (self.perm_idx as u64 * self.coeff_count + self.coeff) * self.offsets.len() as u64
            + self.off_idx as u64
    }

    fn coefficients(&self) -> (Vec<Z4>, Z4) {
        let m = self.m;
        let linear = (0..m)
            .map(|l| Z4::new(((self.coeff >> (2 * (m - l))) & 3) as i64))
            .collect();
        (linear, Z4::new((self.coeff & 3) as i64))
    }
}

impl Iterator for FamilyParams {
    type Item = ConstructionParams;

    fn next(&mut self) -> Option<ConstructionParams> {
        if self.perm_idx >= self.perms.len() || self.offsets.is_empty() {
            return None;
        }
        let (linear, constant) = self.coefficients();
        let base = DjQuadratic::new(self.perms[self.perm_idx].clone(), linear, constant)
            .expect("coefficient count matches permutation length");
        let item = ConstructionParams {
            base,
            offset: self.offsets[self.off_idx],
        };
        self.off_idx += 1;
        if self.off_idx == self.offsets.len() {
            self.off_idx = 0;
            self.coeff += 1;
            if self.coeff == self.coeff_count {
                self.coeff = 0;
                self.perm_idx += 1;
            }
        }
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total() - self.position()) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for FamilyParams {}

fn check_order(m: usize) -> Result<()> {
    if m <= 2 {
        return Err(Error::UnsupportedOrder {
            m,
            requirement: "m > 2",
        });
    }
    if m > MAX_ENUMERATION_ORDER {
        return Err(Error::UnsupportedOrder {
            m,
            requirement: "m <= 12 for enumeration",
        });
    }
    Ok(())
}

/// One lazily built record per parameter tuple.
pub fn enumerate_family(
    m: usize,
    modulation: Modulation,
) -> Result<impl ExactSizeIterator<Item = CodewordRecord>> {
    Ok(FamilyParams::new(m, modulation)?
        .map(|p| build(&p).expect("enumerated parameters are valid")))
}

/// The family split by permutation; concatenating the partitions in order
/// reproduces the sequential enumeration.
pub fn family_partitions(m: usize, modulation: Modulation) -> Result<Vec<FamilyParams>> {
    check_order(m)?;
    let offsets = list_offsets(modulation);
    Ok(canonical_permutations(m)?
        .into_iter()
        .map(|p| FamilyParams::with_perms(m, vec![p], offsets.clone()))
        .collect())
}

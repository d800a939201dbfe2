//! Z4 arithmetic, binary index decomposition and path permutations.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian integer, the exact carrier for every unit root and lattice symbol.
pub type Gaussian = Complex<i64>;

/// Residue class modulo 4.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(into = "u8", try_from = "u8")]
pub struct Z4(u8);

impl Z4 {
    pub const ZERO: Z4 = Z4(0);
    pub const ONE: Z4 = Z4(1);
    pub const TWO: Z4 = Z4(2);
    pub const THREE: Z4 = Z4(3);

    pub const fn new(v: i64) -> Z4 {
        Z4(v.rem_euclid(4) as u8)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// All four residues in ascending order.
    pub fn all() -> [Z4; 4] {
        [Z4(0), Z4(1), Z4(2), Z4(3)]
    }

    pub fn is_odd(self) -> bool {
        self.0 & 1 == 1
    }

    /// ζ^v with ζ = i, as an exact Gaussian integer.
    pub fn unit_root(self) -> Gaussian {
        match self.0 {
            0 => Complex::new(1, 0),
            1 => Complex::new(0, 1),
            2 => Complex::new(-1, 0),
            _ => Complex::new(0, -1),
        }
    }
}

impl From<Z4> for u8 {
    fn from(z: Z4) -> u8 {
        z.0
    }
}

impl TryFrom<u8> for Z4 {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Z4, String> {
        if v < 4 {
            Ok(Z4(v))
        } else {
            Err(format!("{v} is not a residue mod 4"))
        }
    }
}

impl fmt::Display for Z4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Z4 {
    type Output = Z4;
    fn add(self, rhs: Z4) -> Z4 {
        Z4((self.0 + rhs.0) & 3)
    }
}

impl AddAssign for Z4 {
    fn add_assign(&mut self, rhs: Z4) {
        *self = *self + rhs;
    }
}

impl Sub for Z4 {
    type Output = Z4;
    fn sub(self, rhs: Z4) -> Z4 {
        Z4((self.0 + 4 - rhs.0) & 3)
    }
}

impl Neg for Z4 {
    type Output = Z4;
    fn neg(self) -> Z4 {
        Z4((4 - self.0) & 3)
    }
}

impl Mul for Z4 {
    type Output = Z4;
    fn mul(self, rhs: Z4) -> Z4 {
        Z4((self.0 * rhs.0) & 3)
    }
}

impl Mul<u8> for Z4 {
    type Output = Z4;
    fn mul(self, bit: u8) -> Z4 {
        Z4((self.0 * bit) & 3)
    }
}

/// Binary digits of an index, most significant first: `i = Σ bits[k]·2^(m−1−k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn new(bits: Vec<u8>) -> Result<BitVector> {
        if bits.is_empty() {
            return Err(Error::Empty("bit vector"));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidConfig("bits must be 0 or 1".into()));
        }
        Ok(BitVector(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, k: usize) -> u8 {
        self.0[k]
    }

    pub fn index(&self) -> usize {
        index_of(self)
    }
}

pub fn bits_of(i: usize, m: usize) -> Result<BitVector> {
    if m == 0 || m >= usize::BITS as usize || i >> m != 0 {
        return Err(Error::IndexOutOfRange { index: i, m });
    }
    Ok(BitVector((0..m).map(|k| bit(i, m, k)).collect()))
}

pub fn index_of(bits: &BitVector) -> usize {
    bits.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Digit `k` of `i` under the most-significant-first convention, without allocating.
#[inline]
pub fn bit(i: usize, m: usize, k: usize) -> u8 {
    ((i >> (m - 1 - k)) & 1) as u8
}

/// A bijection on `{0, …, m−1}` describing the order of the quadratic path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Permutation> {
        let m = mapping.len();
        if m == 0 {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let mut seen = vec![false; m];
        for &t in &mapping {
            if t >= m || seen[t] {
                return Err(Error::InvalidPermutation(format!(
                    "{mapping:?} is not a bijection on 0..{m}"
                )));
            }
            seen[t] = true;
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(m: usize) -> Permutation {
        Permutation((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.0
    }

    /// π(l)
    pub fn at(&self, l: usize) -> usize {
        self.0[l]
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// One representative per `{π, reverse(π)}` class.
    pub fn is_canonical(&self) -> bool {
        self.first() <= self.last()
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Permutation> {
        Permutation::new(v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The m!/2 path orders with π(0) < π(m−1), in lexicographic order.
pub fn canonical_permutations(m: usize) -> Result<Vec<Permutation>> {
    if m < 2 {
        return Err(Error::UnsupportedOrder {
            m,
            requirement: "m >= 2",
        });
    }
    let mut current: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    loop {
        if current[0] < current[m - 1] {
            out.push(Permutation(current.clone()));
        }
        if !next_permutation(&mut current) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

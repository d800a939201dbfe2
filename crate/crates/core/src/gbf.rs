//! Quadratic generalized Boolean functions `Z2^m → Z4` and their sequences.

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::algebra::{bit, BitVector, Permutation, Z4};
use crate::constellation::{ComplexSequence, Scale};
use crate::error::{Error, Result};

/// `D(x) = 2·Σ x_{π(l)}x_{π(l+1)} + Σ c_l·x_{π(l)} + c` over Z4.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DjQuadratic {
    pi: Permutation,
    linear: Vec<Z4>,
    constant: Z4,
}

impl DjQuadratic {
    pub fn new(pi: Permutation, linear: Vec<Z4>, constant: Z4) -> Result<DjQuadratic> {
        if linear.len() != pi.len() {
            return Err(Error::LengthMismatch {
                expected: pi.len(),
                actual: linear.len(),
            });
        }
        Ok(DjQuadratic {
            pi,
            linear,
            constant,
        })
    }

    pub fn m(&self) -> usize {
        self.pi.len()
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    pub fn linear(&self) -> &[Z4] {
        &self.linear
    }

    pub fn constant(&self) -> Z4 {
        self.constant
    }

    pub fn evaluate(&self, x: &BitVector) -> Result<Z4> {
        if x.len() != self.m() {
            return Err(Error::LengthMismatch {
                expected: self.m(),
                actual: x.len(),
            });
        }
        Ok(self.eval_with(|var| x.get(var)))
    }

    /// Value at sequence position `i`, where variable `x_k` is the k-th most significant bit.
    pub fn eval_index(&self, i: usize) -> Z4 {
        let m = self.m();
        self.eval_with(|var| bit(i, m, var))
    }

    fn eval_with(&self, x: impl Fn(usize) -> u8) -> Z4 {
        let m = self.m();
        let path: u8 = (0..m.saturating_sub(1))
            .map(|l| x(self.pi.at(l)) & x(self.pi.at(l + 1)))
            .sum();
        let mut acc = Z4::new(2 * path as i64) + self.constant;
        for (l, &c) in self.linear.iter().enumerate() {
            acc += c * x(self.pi.at(l));
        }
        acc
    }

    /// The Z4-valued sequence `ψ(D)` of length 2^m.
    pub fn psi(&self) -> QuaternarySequence {
        QuaternarySequence::from_fn(self.m(), |i| self.eval_index(i))
    }

    /// `D' = D + 2·x_{π(m−1)}`, the Golay mate of `D`.
    pub fn primed(&self) -> DjQuadratic {
        let mut linear = self.linear.clone();
        let last = linear.len() - 1;
        linear[last] += Z4::TWO;
        DjQuadratic {
            pi: self.pi.clone(),
            linear,
            constant: self.constant,
        }
    }
}

/// A length-2^m sequence over Z4.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuaternarySequence {
    m: usize,
    values: Vec<Z4>,
}

impl QuaternarySequence {
    pub fn new(m: usize, values: Vec<Z4>) -> Result<QuaternarySequence> {
        let n = 1usize << m;
        if values.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: values.len(),
            });
        }
        Ok(QuaternarySequence { m, values })
    }

    pub fn from_fn(m: usize, f: impl Fn(usize) -> Z4) -> QuaternarySequence {
        QuaternarySequence {
            m,
            values: (0..1usize << m).map(f).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Z4] {
        &self.values
    }

    pub fn to_u8(&self) -> Vec<u8> {
        self.values.iter().map(|z| z.value()).collect()
    }

    /// Elementwise sum in Z4.
    pub fn plus(&self, other: &QuaternarySequence) -> Result<QuaternarySequence> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Elementwise difference in Z4.
    pub fn minus(&self, other: &QuaternarySequence) -> Result<QuaternarySequence> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &QuaternarySequence,
        f: impl Fn(Z4, Z4) -> Z4,
    ) -> Result<QuaternarySequence> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(QuaternarySequence {
            m: self.m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Adds `2·x_{π(m−1)}`, turning `X` into its primed companion `X'`.
    pub fn with_last_flip(&self, pi: &Permutation) -> QuaternarySequence {
        let var = pi.last();
        let m = self.m;
        QuaternarySequence::from_fn(m, |i| self.values[i] + Z4::TWO * bit(i, m, var))
    }
}

impl Index<usize> for QuaternarySequence {
    type Output = Z4;
    fn index(&self, i: usize) -> &Z4 {
        &self.values[i]
    }
}

/// `Ψ(s)`: entry i is ζ^{s_i}.
pub fn polyphase(s: &QuaternarySequence) -> ComplexSequence {
    ComplexSequence::from_points(
        Scale::Unit,
        s.values().iter().map(|z| z.unit_root()).collect(),
    )
}

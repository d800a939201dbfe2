//! Exact QAM symbols built from QPSK components.
//!
//! A 16-QAM symbol `γ(r1·ζ^u + r2·ζ^v)` with `γ = e^{jπ/4}`, `r1 = 2/√5`,
//! `r2 = 1/√5` equals `(1+j)(2ζ^u + ζ^v)/√10`, so it is stored as the Gaussian
//! integer `(1+j)(2ζ^u + ζ^v)` together with the energy denominator 10. The
//! 64-QAM symbol `γ(a1ζ^u + a2ζ^v + a3ζ^w)` is `(1+j)(4ζ^u + 2ζ^v + ζ^w)/√42`.

use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::algebra::{Gaussian, Z4};
use crate::error::{Error, Result};

/// Lattice scaling of a constellation: symbols are `point / √denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Unit,
    Qam16,
    Qam64,
}

impl Scale {
    pub fn denominator(self) -> i64 {
        match self {
            Scale::Unit => 1,
            Scale::Qam16 => 10,
            Scale::Qam64 => 42,
        }
    }

    pub fn amplitude(self) -> f64 {
        1.0 / (self.denominator() as f64).sqrt()
    }

    pub fn tag(self) -> &'static str {
        match self {
            Scale::Unit => "unit",
            Scale::Qam16 => "qam16",
            Scale::Qam64 => "qam64",
        }
    }

    /// Every lattice point the constellation can produce.
    pub fn grid(self) -> Vec<Gaussian> {
        match self {
            Scale::Unit => Z4::all().iter().map(|z| z.unit_root()).collect(),
            Scale::Qam16 => {
                let mut out = Vec::with_capacity(16);
                for u in Z4::all() {
                    for v in Z4::all() {
                        out.push(qam16_map(u, v).point());
                    }
                }
                out
            }
            Scale::Qam64 => {
                let mut out = Vec::with_capacity(64);
                for u in Z4::all() {
                    for v in Z4::all() {
                        for w in Z4::all() {
                            out.push(qam64_map(u, v, w).point());
                        }
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSymbol {
    pub re: i64,
    pub im: i64,
    pub scale: Scale,
}

impl LatticeSymbol {
    pub fn point(self) -> Gaussian {
        Complex::new(self.re, self.im)
    }

    pub fn norm_sqr(self) -> Ratio<i64> {
        Ratio::new(
            self.re * self.re + self.im * self.im,
            self.scale.denominator(),
        )
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64) * self.scale.amplitude()
    }
}

/// Multiplication by `1+j`; the `1/√2` of γ is folded into the scale.
#[inline]
fn rotate(z: Gaussian) -> Gaussian {
    Complex::new(z.re - z.im, z.re + z.im)
}

pub fn qam16_map(u: Z4, v: Z4) -> LatticeSymbol {
    let p = rotate(u.unit_root() * 2 + v.unit_root());
    LatticeSymbol {
        re: p.re,
        im: p.im,
        scale: Scale::Qam16,
    }
}

pub fn qam64_map(u: Z4, v: Z4, w: Z4) -> LatticeSymbol {
    let p = rotate(u.unit_root() * 4 + v.unit_root() * 2 + w.unit_root());
    LatticeSymbol {
        re: p.re,
        im: p.im,
        scale: Scale::Qam64,
    }
}

/// Mean squared magnitude over the full constellation, exactly.
pub fn average_energy(scale: Scale) -> Ratio<i64> {
    let grid = scale.grid();
    let total: i64 = grid.iter().map(|p| p.norm_sqr()).sum();
    Ratio::new(total, grid.len() as i64 * scale.denominator())
}

/// Squared QPSK weights `(r1², r2²)`.
pub fn qam16_weights_sq() -> [Ratio<i64>; 2] {
    [Ratio::new(4, 5), Ratio::new(1, 5)]
}

/// Squared QPSK weights `(a1², a2², a3²)`.
pub fn qam64_weights_sq() -> [Ratio<i64>; 3] {
    [Ratio::new(16, 21), Ratio::new(4, 21), Ratio::new(1, 21)]
}

/// A finite sequence of lattice symbols sharing one scale.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexSequence {
    scale: Scale,
    points: Vec<Gaussian>,
}

impl ComplexSequence {
    pub fn from_points(scale: Scale, points: Vec<Gaussian>) -> ComplexSequence {
        ComplexSequence { scale, points }
    }

    pub fn from_symbols(symbols: &[LatticeSymbol]) -> Result<ComplexSequence> {
        let first = symbols.first().ok_or(Error::Empty("symbol list"))?;
        if symbols.iter().any(|s| s.scale != first.scale) {
            return Err(Error::MixedScale);
        }
        Ok(ComplexSequence {
            scale: first.scale,
            points: symbols.iter().map(|s| s.point()).collect(),
        })
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Gaussian] {
        &self.points
    }

    pub fn symbol(&self, i: usize) -> LatticeSymbol {
        let p = self.points[i];
        LatticeSymbol {
            re: p.re,
            im: p.im,
            scale: self.scale,
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        let a = self.scale.amplitude();
        self.points
            .iter()
            .map(|p| Complex64::new(p.re as f64 * a, p.im as f64 * a))
            .collect()
    }

    /// `Σ|A_i|²` as an exact rational.
    pub fn energy(&self) -> Ratio<i64> {
        let total: i64 = self.points.iter().map(|p| p.norm_sqr()).sum();
        Ratio::new(total, self.scale.denominator())
    }
}

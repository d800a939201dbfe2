//! Construction and verification of 16-QAM and 64-QAM near-complementary
//! sequences for low-PMEPR OFDM.
//!
//! Codewords are built from quadratic generalized Boolean functions over Z4
//! plus nonlinear offsets, mapped to QAM through a sum of weighted QPSK
//! symbols. Symbols are kept on an integer lattice so correlation identities
//! are checked exactly; only the envelope evaluation uses floating point.

pub mod algebra;
pub mod analysis;
pub mod constellation;
pub mod constructions;
pub mod error;
pub mod gbf;
pub mod verification;

pub use algebra::{
    bits_of, canonical_permutations, index_of, BitVector, Gaussian, Permutation, Z4,
};
pub use analysis::{
    autocorr, ccdf, pep, pmepr, random_baseline, star, star_bound_check, CcdfCurve,
    CorrelationProfile, EnvelopeConfig,
};
pub use constellation::{
    average_energy, qam16_map, qam64_map, ComplexSequence, LatticeSymbol, Scale,
};
pub use constructions::{
    build, build_16qam, build_64qam, enumerate_family, family_size, list_offsets16, list_offsets64,
    offset16_eval, BoundClass, CodewordRecord, ConstructionParams, Modulation, Offset, Offset16,
    Offset64, OffsetKind,
};
pub use error::{Error, Result};
pub use gbf::{polyphase, DjQuadratic, QuaternarySequence};
pub use verification::{
    example_regression, lemma1_residual, lemma2_residuals, lemma3_residuals, lemma_sweep,
    theorem_bound_audit, AuditReport, LemmaId, LemmaReport,
};

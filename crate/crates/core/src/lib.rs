//! Condition numbers of the Vandermonde matrix of the primitive `n`-th roots
//! of unity, computed by independent float and exact routes, together with
//! the exact integer matrix `n G_n^{-1}` and checks of the structure of the
//! Gram matrix `G_n = V_n* V_n`.

pub mod arith;
pub mod cli;
pub mod cond;
pub mod error;
pub mod exact;
pub mod matrices;
pub mod ramanujan;
pub mod verify;

pub use arith::{coprime_residues, cyclotomic_poly, euler_phi, factorize, moebius, radical, IntPolynomial, Modulus};
pub use cond::{
    cond_closed_form, cond_closed_form_sq, cond_exact_sq, cond_float, cond_prime_closed_form, cond_reduced,
    cond_report, ConditionReport,
};
pub use error::{Error, Result};
pub use exact::{
    build_s_table, det_exact, inverse_trace_exact, scaled_inverse, scaled_inverse_via_recurrence, trace_sequence,
    BigIntMatrix, STable,
};
pub use matrices::{
    build_gram, build_vandermonde, frobenius_norm, gram_numeric_check, j_similarity_check, kronecker_check,
    orthogonality_check, spectrum_numeric, structured_det, ComplexMatrix, GramMatrix, Spectrum,
};
pub use ramanujan::{ramanujan_row, ramanujan_sum, ramanujan_sum_direct, RamanujanRow};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

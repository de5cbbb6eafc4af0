//! Exact arithmetic: integer polynomials, rational matrices, number fields,
//! resultants and certified root location.

mod linalg;
pub mod modp;
mod numfield;
mod poly;
mod resultant;
mod roots;
mod serde_impls;
pub use serde_impls::bigint_vecs;

use thiserror::Error;

pub use linalg::{
    char_poly_int, det_int, integer_kernel, kernel_meets_nonneg_orthant, rat_inverse, rat_mat_mul,
    IntMatrix, RatMatrix,
};
pub use numfield::{nf_ops, NFElem, NfOp, NumberField};
pub use poly::{
    chi, cyclotomic, cyclotomic_factors, from_trace_polynomial, lehmer_polynomial, poly_divide_exact,
    strip_cyclotomic, trace_polynomial, IntPolynomial,
};
pub use resultant::{min_poly_of_product, poly_of_powers};
pub use roots::{
    classify_roots, real_roots, refine_root, rational_to_f64, sturm_count, Enclosure,
    RootClassification,
};

pub(crate) use poly::RatPoly;

/// Default enclosure width for root computations.
pub fn default_eps() -> num_rational::BigRational {
    num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(12))
}

/// Parse `3/7`, `-12`, `0.25` or `1e-12` exactly.
pub fn parse_rational_literal(s: &str) -> Result<num_rational::BigRational, ExactError> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let t = s.trim();
    let bad = || ExactError::Parse(format!("not a rational literal: {s:?}"));
    if t.contains('/') {
        return serde_impls::parse_rational(t).map_err(|_| bad());
    }
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.trim_start_matches(['-', '+']).is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = match digits.as_str() {
        "-" | "+" => BigInt::from(0),
        d => d.parse().map_err(|_| bad())?,
    };
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(numer * ten.pow(shift as u32))
    } else {
        BigRational::new(numer, ten.pow((-shift) as u32))
    })
}

/// Default bound on cyclotomic orders tried when stripping.
pub const DEFAULT_MAX_CYCLOTOMIC_ORDER: usize = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("remainder is nonzero")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root classification inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

//! Real number fields `Q(alpha)` and exact arithmetic on their elements.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::roots::{real_roots, refine_root, Enclosure};
use super::{rational_to_f64, ExactError, IntPolynomial, RatPoly};

/// `Q(alpha)` with `alpha` the `root_index`-th real root (ascending) of
/// `minpoly`.
#[derive(Debug, Clone)]
pub struct NumberField {
    minpoly: IntPolynomial,
    root_index: usize,
    enclosure: Enclosure,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.root_index == other.root_index
    }
}
impl Eq for NumberField {}

fn tight_eps() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2).pow(80))
}

impl NumberField {
    pub fn new(minpoly: IntPolynomial, root_index: usize) -> Result<Arc<Self>, ExactError> {
        let d = minpoly.degree().ok_or(ExactError::ZeroPolynomial)?;
        if d == 0 || !minpoly.is_monic() {
            return Err(ExactError::InvalidField(format!("{minpoly} is not monic of positive degree")));
        }
        if !minpoly.is_squarefree() {
            return Err(ExactError::NotSquarefree);
        }
        let roots = real_roots(&minpoly, &tight_eps());
        let enclosure = roots.into_iter().nth(root_index).ok_or_else(|| {
            ExactError::InvalidField(format!("{minpoly} has no real root with index {root_index}"))
        })?;
        Ok(Arc::new(NumberField { minpoly, root_index, enclosure }))
    }

    /// The field whose generator is the largest real root of `minpoly`.
    pub fn with_largest_real_root(minpoly: IntPolynomial) -> Result<Arc<Self>, ExactError> {
        let n = real_roots(&minpoly.squarefree_part(), &BigRational::one()).len();
        let idx = n
            .checked_sub(1)
            .ok_or_else(|| ExactError::InvalidField(format!("{minpoly} has no real root")))?;
        Self::new(minpoly, idx)
    }

    pub fn rationals() -> Arc<Self> {
        Self::new(IntPolynomial::x(), 0).expect("t is a valid minimal polynomial")
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    /// Enclosure of the generator, refined to width at most `eps`.
    pub fn generator_enclosure(&self, eps: &BigRational) -> Enclosure {
        if &self.enclosure.width() <= eps {
            self.enclosure.clone()
        } else {
            refine_root(&self.minpoly, &self.enclosure, eps)
        }
    }

    pub fn generator_f64(&self) -> f64 {
        self.enclosure.mid_f64()
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        let m = self.minpoly.coeffs();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = c.len() - d;
            for (k, mk) in m.iter().enumerate().take(d) {
                c[base + k] -= &top * BigRational::from(mk.clone());
            }
        }
        c.resize(d, BigRational::zero());
        c
    }
}

/// Element of a [`NumberField`], stored as coefficients of `1, alpha, ...`.
#[derive(Clone, Debug)]
pub struct NFElem {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for NFElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}
impl Eq for NFElem {}

impl Hash for NFElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn nf_ops(a: &NFElem, b: &NFElem, op: NfOp) -> Result<NFElem, ExactError> {
    match op {
        NfOp::Add => a.checked_add(b),
        NfOp::Sub => a.checked_sub(b),
        NfOp::Mul => a.checked_mul(b),
        NfOp::Div => a.checked_div(b),
    }
}

impl NFElem {
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> Self {
        let coeffs = field.reduce(coeffs);
        NFElem { field: field.clone(), coeffs }
    }

    pub fn from_rational(field: &Arc<NumberField>, x: BigRational) -> Self {
        Self::from_coeffs(field, vec![x])
    }

    pub fn from_int(field: &Arc<NumberField>, x: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(x.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_coeffs(field, Vec::new())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_coeffs(field, vec![BigRational::zero(), BigRational::one()])
    }

    /// `poly(alpha)`.
    pub fn from_int_poly(field: &Arc<NumberField>, poly: &IntPolynomial) -> Self {
        Self::from_coeffs(field, poly.coeffs().iter().cloned().map(BigRational::from).collect())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value when the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(NFElem { field: self.field.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(NFElem { field: self.field.clone(), coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let d = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(Self::from_coeffs(&self.field, prod))
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, BigRational::one() / r));
        }
        let a = RatPoly::new(self.coeffs.clone());
        let m = self.field.minpoly.to_rat();
        let (g, s) = RatPoly::half_gcd_ext(&a, &m);
        if g.degree() != Some(0) {
            // Only possible when the minimal polynomial is reducible.
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::from_coeffs(&self.field, s.coeffs))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.field);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Rational enclosure of the real value, by interval evaluation at an
    /// enclosure of the generator.
    pub fn enclosure(&self, eps: &BigRational) -> Enclosure {
        let g = self.field.generator_enclosure(eps);
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            // [lo, hi] * [g.lo, g.hi] + c
            let cands = [&lo * &g.lo, &lo * &g.hi, &hi * &g.lo, &hi * &g.hi];
            let mn = cands.iter().min().unwrap().clone();
            let mx = cands.iter().max().unwrap().clone();
            lo = mn + c;
            hi = mx + c;
        }
        Enclosure { lo, hi }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.enclosure(&tight_eps()).mid())
    }

    /// Exact sign of the real value.
    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let mut eps = tight_eps();
        loop {
            let e = self.enclosure(&eps);
            if e.lo.is_positive() {
                return 1;
            }
            if e.hi.is_negative() {
                return -1;
            }
            eps = &eps * &eps;
        }
    }
}

impl Neg for &NFElem {
    type Output = NFElem;
    fn neg(self) -> NFElem {
        NFElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for NFElem {
    type Output = NFElem;
    fn neg(self) -> NFElem {
        -&self
    }
}

macro_rules! panicking_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&NFElem> for &NFElem {
            type Output = NFElem;
            fn $m(self, rhs: &NFElem) -> NFElem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("number field {}: {e}", stringify!($m)))
            }
        }
        impl $tr<NFElem> for NFElem {
            type Output = NFElem;
            fn $m(self, rhs: NFElem) -> NFElem {
                (&self).$m(&rhs)
            }
        }
    };
}
panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);
panicking_op!(Div, div, checked_div);

impl fmt::Display for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})a")?,
                _ => write!(f, "({c})a^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phi_field() -> Arc<NumberField> {
        NumberField::with_largest_real_root(IntPolynomial::from_i64(&[1, -2, 1, -2, 1])).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn fourth_power_reduces() {
        let k = phi_field();
        let a = NFElem::generator(&k);
        let a4 = a.pow(4).unwrap();
        assert_eq!(a4.coeffs(), &[q(-1, 1), q(2, 1), q(-1, 1), q(2, 1)]);
    }

    #[test]
    fn s_times_denominator() {
        let k = phi_field();
        let a = NFElem::generator(&k);
        let one = NFElem::one(&k);
        let two = NFElem::from_int(&k, 2);
        let a5 = a.pow(5).unwrap();
        let s = nf_ops(&(&(&two * &a5) + &one), &(&a5 - &one), NfOp::Div).unwrap();
        assert_eq!(&s * &(&a5 - &one), &(&two * &a5) + &one);
        assert!((a.to_f64() - 1.883_203_505_913_53).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let k = phi_field();
        let other = NumberField::new(IntPolynomial::from_i64(&[1, -2, 1, -2, 1]), 0).unwrap();
        let a = NFElem::generator(&k);
        let b = NFElem::generator(&other);
        assert_eq!(nf_ops(&a, &b, NfOp::Add), Err(ExactError::FieldMismatch));
        assert_eq!(nf_ops(&a, &NFElem::zero(&k), NfOp::Div), Err(ExactError::DivisionByZero));
        assert!(NumberField::new(IntPolynomial::from_i64(&[1, 0, 1]), 0).is_err());
    }

    #[test]
    fn signs() {
        let k = phi_field();
        let a = NFElem::generator(&k);
        // alpha - 1.8832 > 0 and alpha - 1.8833 < 0
        assert_eq!((&a - &NFElem::from_rational(&k, q(18832, 10000))).signum(), 1);
        assert_eq!((&a - &NFElem::from_rational(&k, q(18833, 10000))).signum(), -1);
    }

    proptest! {
        #[test]
        fn inverse_law(c in prop::collection::vec((-30i64..30, 1i64..10), 4)) {
            let k = phi_field();
            let x = NFElem::from_coeffs(&k, c.iter().map(|&(n, d)| q(n, d)).collect());
            prop_assume!(!x.is_zero());
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
        }

        #[test]
        fn multiplication_matches_f64(a in prop::collection::vec(-5i64..5, 4), b in prop::collection::vec(-5i64..5, 4)) {
            let k = phi_field();
            let x = NFElem::from_int_poly(&k, &IntPolynomial::from_i64(&a));
            let y = NFElem::from_int_poly(&k, &IntPolynomial::from_i64(&b));
            let prod = (&x * &y).to_f64();
            let approx = x.to_f64() * y.to_f64();
            prop_assert!((prod - approx).abs() <= 1e-9 * (1.0 + approx.abs()));
        }
    }
}

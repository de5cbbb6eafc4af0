//! Univariate polynomials with integer coefficients, plus the small amount of
//! rational-coefficient machinery the rest of the crate needs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Integer polynomial, coefficients in ascending degree order.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and `coeffs().last()` is the leading
/// coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `den^d * p(num/den)`; has the sign of `p(num/den)` whenever `den > 0`.
    pub fn eval_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let Some(d) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Horner in num with a running power of den for the lower terms.
        let mut terms = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            terms.push(den_pow.clone());
            den_pow *= den;
        }
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + c * &terms[d - i];
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// `t^deg * p(1/t)`.
    pub fn reverse(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Self-reciprocal with nonzero constant term.
    pub fn is_reciprocal(&self) -> bool {
        !self.is_zero() && !self.coeffs[0].is_zero() && *self == self.reverse()
    }

    /// `p(t^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut coeffs = vec![BigInt::zero(); d * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self = q*d + r`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        let mut steps = match self.degree() {
            Some(n) if n >= dd => n - dd + 1,
            _ => 0,
        };
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            steps -= 1;
            let shift = rd - dd;
            let rl = r.leading().unwrap().clone();
            let mut next = r.scale(&lc).coeffs;
            for (i, c) in d.coeffs.iter().enumerate() {
                next[i + shift] -= &rl * c;
            }
            r = Self::new(next);
        }
        for _ in 0..steps {
            r = r.scale(&lc);
        }
        r
    }

    /// Exact quotient over the integers.
    pub fn exact_div(&self, d: &Self) -> Result<Self, ExactError> {
        let dd = d.degree().ok_or(ExactError::DivisionByZero)?;
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok(Self::zero());
        };
        if nd < dd {
            return Err(ExactError::NotDivisible);
        }
        let mut q = vec![BigInt::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let top = &r[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return Err(ExactError::NotDivisible);
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i + shift] -= &quot * c;
            }
            q[shift] = quot;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(ExactError::NotDivisible);
        }
        Ok(Self::new(q))
    }

    pub fn divides(&self, p: &Self) -> bool {
        p.exact_div(self).is_ok()
    }

    /// Primitive gcd with positive leading coefficient (primitive remainder
    /// sequence).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut a = a.primitive();
        let mut b = b.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && Self::gcd(self, &self.derivative()).degree() == Some(0)
    }

    /// `p / gcd(p, p')`, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = Self::gcd(self, &self.derivative());
        self.primitive()
            .exact_div(&g)
            .expect("gcd divides its argument")
            .primitive()
    }

    pub(crate) fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().cloned().map(BigRational::from).collect())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Exact division, failing with `NotDivisible` on a nonzero remainder.
pub fn poly_divide_exact(num: &IntPolynomial, den: &IntPolynomial) -> Result<IntPolynomial, ExactError> {
    num.exact_div(den)
}

fn mobius(mut k: usize) -> i8 {
    let mut m = 1;
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            k /= d;
            if k % d == 0 {
                return 0;
            }
            m = -m;
        }
        d += 1;
    }
    if k > 1 {
        m = -m;
    }
    m
}

pub fn euler_totient(k: usize) -> usize {
    (1..=k).filter(|&i| num_integer::gcd(i, k) == 1).count()
}

/// The k-th cyclotomic polynomial, as the Mobius product of `t^d - 1`.
pub fn cyclotomic(k: usize) -> IntPolynomial {
    assert!(k >= 1, "cyclotomic order starts at 1");
    let mut num = IntPolynomial::one();
    let mut den = IntPolynomial::one();
    for d in (1..=k).filter(|d| k % d == 0) {
        let f = &IntPolynomial::monomial(BigInt::one(), d) - &IntPolynomial::one();
        match mobius(k / d) {
            1 => num = &num * &f,
            -1 => den = &den * &f,
            _ => {}
        }
    }
    num.exact_div(&den).expect("Mobius quotient is a polynomial")
}

/// Orders and multiplicities of the cyclotomic factors of `p` up to
/// `max_order`, together with the cofactor left after dividing them out.
pub fn cyclotomic_factors(p: &IntPolynomial, max_order: usize) -> (Vec<(usize, usize)>, IntPolynomial) {
    let mut rest = p.clone();
    let mut found = Vec::new();
    for k in 1..=max_order {
        if euler_totient(k) > rest.degree().unwrap_or(0) {
            continue;
        }
        let phi = cyclotomic(k);
        let mut mult = 0;
        while let Ok(q) = rest.exact_div(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((k, mult));
        }
    }
    (found, rest)
}

/// Divide out every cyclotomic factor of order at most `max_order`.
pub fn strip_cyclotomic(p: &IntPolynomial, max_order: usize) -> IntPolynomial {
    cyclotomic_factors(p, max_order).1
}

/// For a reciprocal `p` of even degree `2m`, the degree-`m` polynomial `Q`
/// with `p(t) = t^m Q(t + 1/t)`.
pub fn trace_polynomial(p: &IntPolynomial) -> Option<IntPolynomial> {
    let d = p.degree()?;
    if d % 2 != 0 || *p != p.reverse() {
        return None;
    }
    let m = d / 2;
    // V_k(x) = t^k + t^-k: V_0 = 2, V_1 = x, V_{k+1} = x V_k - V_{k-1}.
    let x = IntPolynomial::x();
    let mut v_prev = IntPolynomial::from_i64(&[2]);
    let mut v_cur = x.clone();
    let mut q = IntPolynomial::constant(p.coeff(m));
    for k in 1..=m {
        q = &q + &v_cur.scale(&p.coeff(m + k));
        let next = &(&x * &v_cur) - &v_prev;
        v_prev = v_cur;
        v_cur = next;
    }
    Some(q)
}

/// Inverse of [`trace_polynomial`]: `t^m Q(t + 1/t)` for `Q` of degree `m`.
pub fn from_trace_polynomial(q: &IntPolynomial) -> IntPolynomial {
    let Some(m) = q.degree() else {
        return IntPolynomial::zero();
    };
    // (t^2 + 1)^i * t^(m - i)
    let t2p1 = IntPolynomial::from_i64(&[1, 0, 1]);
    let mut out = IntPolynomial::zero();
    let mut pw = IntPolynomial::one();
    for i in 0..=m {
        let term = &pw * &IntPolynomial::monomial(q.coeff(i), m - i);
        out = &out + &term;
        pw = &pw * &t2p1;
    }
    out
}

/// Lehmer's degree-10 polynomial.
pub fn lehmer_polynomial() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}

/// `t^(n+1) - 2 t^n + 2 t - 1`.
pub fn chi(n: usize) -> IntPolynomial {
    let mut c = vec![BigInt::zero(); n + 2];
    c[0] = BigInt::from(-1);
    c[1] += BigInt::from(2);
    c[n] -= BigInt::from(2);
    c[n + 1] += BigInt::one();
    IntPolynomial::new(c)
}

/// Rational-coefficient polynomial, ascending order, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct RatPoly {
    pub coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            let top = r[shift + dd].clone();
            if top.is_zero() {
                continue;
            }
            let quot = top / &lc;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i + shift] -= &quot * c;
            }
            q[shift] = quot;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Returns `(g, s)` with `s*a = g (mod b)` and `g` monic.
    pub fn half_gcd_ext(a: &Self, b: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (b.clone(), a.clone());
        let (mut s0, mut s1) = (Self::zero(), Self::new(vec![BigRational::one()]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let lc = r0.coeffs.last().cloned().unwrap_or_else(BigRational::one);
        let inv = BigRational::one() / lc;
        let scale = |p: &Self| Self::new(p.coeffs.iter().map(|c| c * &inv).collect());
        (scale(&r0), scale(&s0))
    }

    /// Interpolating polynomial through `(xs[i], ys[i])` (Newton form).
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<BigRational> = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        let mut acc = Self::zero();
        for i in (0..n).rev() {
            // acc = acc * (x - xs[i]) + dd[i]
            let lin = Self::new(vec![-xs[i].clone(), BigRational::one()]);
            acc = acc.mul(&lin);
            let mut c = acc.coeffs.clone();
            if c.is_empty() {
                c.push(BigRational::zero());
            }
            c[0] += &dd[i];
            acc = Self::new(c);
        }
        acc
    }

    pub fn to_int(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }
}

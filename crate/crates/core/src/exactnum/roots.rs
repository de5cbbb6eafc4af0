//! Sturm sequences, real root isolation, and exact location of roots with
//! respect to the unit circle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::trace_polynomial;
use super::{ExactError, IntPolynomial};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn point(x: BigRational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn mid_f64(&self) -> f64 {
        rational_to_f64(&self.mid())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootClassification {
    pub degree: usize,
    /// Real roots in `(1, inf)`.
    pub n_real_gt1: usize,
    /// Real roots in `(-inf, -1)`.
    pub n_real_lt_neg1: usize,
    /// Real roots in `(-1, 1)`.
    pub n_real_in_unit: usize,
    /// Roots of modulus exactly one, including `1` and `-1`.
    pub n_on_circle: usize,
    pub n_off_circle_complex: usize,
    pub largest_real: Option<Enclosure>,
}

#[derive(Clone, Debug)]
struct Sturm {
    seq: Vec<IntPolynomial>,
}

impl Sturm {
    fn new(p: &IntPolynomial) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while let Some(b) = seq.last().filter(|b| b.degree().is_some_and(|d| d > 0)) {
            let a = &seq[seq.len() - 2];
            let lc = b.leading().unwrap();
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let mut r = a.pseudo_rem(b);
            if lc.is_negative() && delta % 2 == 0 {
                r = -&r;
            }
            if r.is_zero() {
                break;
            }
            let c = r.content();
            let r = IntPolynomial::new(r.coeffs().iter().map(|x| -(x / &c)).collect());
            seq.push(r);
        }
        Sturm { seq }
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    fn v_at(&self, x: &BigRational) -> usize {
        let (num, den) = (x.numer(), x.denom());
        Self::variations(self.seq.iter().map(|p| sign(&p.eval_homogeneous(num, den))))
    }

    fn v_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = sign(p.leading().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    fn v_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| sign(p.leading().unwrap())))
    }

    /// Distinct real roots `<= x`.
    fn le(&self, x: &BigRational) -> usize {
        self.v_neg_inf() - self.v_at(x)
    }

    fn total(&self) -> usize {
        self.v_neg_inf() - self.v_pos_inf()
    }
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn is_root(p: &IntPolynomial, x: &BigRational) -> bool {
    p.eval_homogeneous(x.numer(), x.denom()).is_zero()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`.
pub fn sturm_count(p: &IntPolynomial, a: &BigRational, b: &BigRational) -> usize {
    let s = Sturm::new(p);
    s.le(b).saturating_sub(s.le(a))
}

fn cauchy_bound(p: &IntPolynomial) -> BigRational {
    let lc = p.leading().unwrap().abs();
    let m = p.coeffs().iter().map(Signed::abs).max().unwrap();
    BigRational::one() + BigRational::new(m, lc)
}

fn refine_with(s: &Sturm, p: &IntPolynomial, mut e: Enclosure, eps: &BigRational) -> Enclosure {
    // Invariant: exactly one root in (lo, hi].
    if is_root(p, &e.hi) {
        return Enclosure::point(e.hi);
    }
    let mut below_lo = s.le(&e.lo);
    while &e.width() > eps {
        let mid = e.mid();
        if is_root(p, &mid) {
            return Enclosure::point(mid);
        }
        let at_mid = s.le(&mid);
        if at_mid > below_lo {
            e.hi = mid;
        } else {
            e.lo = mid;
            below_lo = at_mid;
        }
    }
    e
}

/// Isolating enclosures of width at most `eps` for every real root of a
/// squarefree `p`, in increasing order.
pub fn real_roots(p: &IntPolynomial, eps: &BigRational) -> Vec<Enclosure> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let s = Sturm::new(p);
    let b = cauchy_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = s.le(&hi) - s.le(&lo);
        match n {
            0 => {}
            1 => out.push(refine_with(&s, p, Enclosure { lo, hi }, eps)),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Shrink an isolating enclosure of a root of squarefree `p`.
pub fn refine_root(p: &IntPolynomial, e: &Enclosure, eps: &BigRational) -> Enclosure {
    let s = Sturm::new(p);
    if e.lo == e.hi {
        return e.clone();
    }
    refine_with(&s, p, e.clone(), eps)
}

/// Exact counts of roots of a squarefree polynomial by location relative to
/// the real line and the unit circle.
///
/// Real roots are counted with Sturm sequences. Non-real roots on the unit
/// circle are the roots of the self-reciprocal part `gcd(p, reverse p)`
/// lying over real roots of its trace polynomial in `(-2, 2)`.
pub fn classify_roots(p: &IntPolynomial, eps: &BigRational) -> Result<RootClassification, ExactError> {
    let degree = p.degree().ok_or(ExactError::ZeroPolynomial)?;
    if degree > 0 && !p.is_squarefree() {
        return Err(ExactError::NotSquarefree);
    }
    if degree == 0 {
        return Ok(RootClassification {
            degree,
            n_real_gt1: 0,
            n_real_lt_neg1: 0,
            n_real_in_unit: 0,
            n_on_circle: 0,
            n_off_circle_complex: 0,
            largest_real: None,
        });
    }
    let s = Sturm::new(p);
    let (one, neg_one) = (rat(1), rat(-1));
    let root_one = is_root(p, &one);
    let root_neg_one = is_root(p, &neg_one);
    let le_one = s.le(&one);
    let le_neg_one = s.le(&neg_one);
    let total = s.total();
    let n_real_gt1 = total - le_one;
    let n_real_lt_neg1 = le_neg_one - usize::from(root_neg_one);
    let n_real_in_unit = le_one - usize::from(root_one) - le_neg_one;

    let mut g = IntPolynomial::gcd(p, &p.reverse());
    for lin in [IntPolynomial::from_i64(&[-1, 1]), IntPolynomial::from_i64(&[1, 1])] {
        if let Ok(q) = g.exact_div(&lin) {
            g = q;
        }
    }
    let circle_pairs = match g.degree() {
        Some(d) if d > 0 => {
            let q = trace_polynomial(&g).ok_or_else(|| {
                ExactError::Inconclusive(format!("self-reciprocal part {g} is not reciprocal"))
            })?;
            let sq = Sturm::new(&q);
            let two = rat(2);
            sq.le(&two) - usize::from(is_root(&q, &two)) - sq.le(&-two)
        }
        _ => 0,
    };
    let n_on_circle = 2 * circle_pairs + usize::from(root_one) + usize::from(root_neg_one);
    let real_total = n_real_gt1 + n_real_lt_neg1 + n_real_in_unit;
    let n_off_circle_complex = degree
        .checked_sub(real_total + n_on_circle)
        .ok_or_else(|| ExactError::Inconclusive("root counts exceed degree".into()))?;

    let largest_real = real_roots(p, eps).pop();
    Ok(RootClassification {
        degree,
        n_real_gt1,
        n_real_lt_neg1,
        n_real_in_unit,
        n_on_circle,
        n_off_circle_complex,
        largest_real,
    })
}

//! Salem-number predicates, powers, roots, and the product dichotomy.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{
    classify_roots, cyclotomic_factors, default_eps, from_trace_polynomial, min_poly_of_product,
    modp, poly_of_powers, real_roots, trace_polynomial, Enclosure, ExactError, IntPolynomial,
    RootClassification, DEFAULT_MAX_CYCLOTOMIC_ORDER,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SalemError {
    #[error("{0} is not a Salem polynomial")]
    NotSalem(IntPolynomial),
    #[error("neither a common power base nor the product certificate could be established")]
    SearchBoundExceeded,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SalemVerdict {
    pub is_salem: bool,
    pub degree: usize,
    pub largest_root: Option<Enclosure>,
    pub witness: Option<RootClassification>,
    /// First failed condition, when `is_salem` is false.
    pub failure: Option<String>,
}

impl SalemVerdict {
    pub fn largest_root_f64(&self) -> Option<f64> {
        self.largest_root.as_ref().map(Enclosure::mid_f64)
    }
}

/// Reciprocal monic of degree >= 4 with one real root > 1, its reciprocal in
/// (0, 1), and every other root non-real on the unit circle and not a root
/// of unity.
pub fn is_salem(p: &IntPolynomial) -> SalemVerdict {
    let degree = p.degree().unwrap_or(0);
    let fail = |why: &str, witness: Option<RootClassification>| SalemVerdict {
        is_salem: false,
        degree,
        largest_root: witness.as_ref().and_then(|w| w.largest_real.clone()),
        witness,
        failure: Some(why.to_string()),
    };
    if !p.is_monic() {
        return fail("not monic", None);
    }
    if degree < 4 {
        return fail("degree below 4", None);
    }
    if !p.is_squarefree() {
        return fail("not squarefree", None);
    }
    let witness = match classify_roots(p, &default_eps()) {
        Ok(w) => w,
        Err(e) => return fail(&e.to_string(), None),
    };
    if !p.is_reciprocal() {
        return fail("not reciprocal", Some(witness));
    }
    if witness.n_real_gt1 != 1 {
        return fail("number of real roots above 1 differs from 1", Some(witness));
    }
    if witness.n_real_in_unit != 1 || witness.n_real_lt_neg1 != 0 {
        return fail("real roots besides the pair lambda, 1/lambda", Some(witness));
    }
    if witness.n_off_circle_complex != 0 || witness.n_on_circle != degree - 2 {
        return fail("roots off the unit circle", Some(witness));
    }
    let (cyc, _) = cyclotomic_factors(p, DEFAULT_MAX_CYCLOTOMIC_ORDER.max(2 * degree * degree));
    if !cyc.is_empty() {
        return fail("has a cyclotomic factor", Some(witness));
    }
    SalemVerdict {
        is_salem: true,
        degree,
        largest_root: witness.largest_real.clone(),
        witness: Some(witness),
        failure: None,
    }
}

/// Verdict for the polynomial whose roots are the k-th powers of the roots
/// of `p`.
pub fn power_is_salem(p: &IntPolynomial, k: usize) -> SalemVerdict {
    is_salem(&poly_of_powers(p, k).squarefree_part())
}

fn largest_root_f64(p: &IntPolynomial) -> Option<f64> {
    real_roots(&p.squarefree_part(), &default_eps()).pop().map(|e| e.mid_f64())
}

/// All Salem polynomials `r` of the same degree as the Salem polynomial `p`
/// whose root raised to the k-th power is the root of `p`.
///
/// The conjugates of a k-th root lie over k branches of each circle
/// conjugate of `p`; every branch combination is rounded to an integer
/// trace polynomial and then certified exactly.
pub fn salem_roots(p: &IntPolynomial, k: usize) -> Vec<IntPolynomial> {
    if k == 1 {
        return vec![p.clone()];
    }
    let Some(q) = trace_polynomial(p) else {
        return Vec::new();
    };
    let fine = BigRational::new(BigInt::from(1), BigInt::from(2).pow(70));
    let traces: Vec<f64> = real_roots(&q.squarefree_part(), &fine).iter().map(Enclosure::mid_f64).collect();
    let Some(&big) = traces.iter().find(|&&x| x > 2.0) else {
        return Vec::new();
    };
    let lambda = (big + (big * big - 4.0).sqrt()) / 2.0;
    let mu = lambda.powf(1.0 / k as f64);
    let circle: Vec<f64> = traces
        .iter()
        .filter(|&&x| x.abs() < 2.0)
        .map(|x| (x / 2.0).acos())
        .collect();
    let mut found = Vec::new();
    let mut choice = vec![0usize; circle.len()];
    loop {
        let mut roots = vec![mu + 1.0 / mu];
        roots.extend(circle.iter().zip(&choice).map(|(theta, &m)| {
            2.0 * ((theta + 2.0 * std::f64::consts::PI * m as f64) / k as f64).cos()
        }));
        if let Some(tr) = round_monic_from_roots(&roots) {
            let r = from_trace_polynomial(&tr);
            if poly_of_powers(&r, k) == *p && is_salem(&r).is_salem && !found.contains(&r) {
                found.push(r);
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return found;
            }
            choice[i] += 1;
            if choice[i] < k {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn round_monic_from_roots(roots: &[f64]) -> Option<IntPolynomial> {
    let mut c = vec![1.0f64];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        c = next;
    }
    let mut out = Vec::with_capacity(c.len());
    for a in c {
        let rounded = a.round();
        if (a - rounded).abs() > 1e-6 {
            return None;
        }
        out.push(BigInt::from_f64(rounded)?);
    }
    Some(IntPolynomial::new(out))
}

/// A Salem factor of `r` having `x` as its root above 1, if one exists.
///
/// A Salem factor `f` of a polynomial is `t^m F(t + 1/t)` where `F` divides
/// the trace polynomial of the self-reciprocal part and has the root
/// `x + 1/x` together with some of the roots in (-2, 2). Every such `F` is
/// tried; `None` is an exact certificate that no Salem factor through `x`
/// exists.
pub fn salem_factor_containing(r: &IntPolynomial, x: f64) -> Option<IntPolynomial> {
    let mut g = IntPolynomial::gcd(r, &r.reverse());
    for lin in [IntPolynomial::from_i64(&[-1, 1]), IntPolynomial::from_i64(&[1, 1])] {
        while let Ok(q) = g.exact_div(&lin) {
            g = q;
        }
    }
    let q = trace_polynomial(&g)?.squarefree_part();
    let fine = BigRational::new(BigInt::from(1), BigInt::from(2).pow(70));
    let roots: Vec<f64> = real_roots(&q, &fine).iter().map(Enclosure::mid_f64).collect();
    let target = x + 1.0 / x;
    let top = roots.iter().copied().find(|c| (c - target).abs() < 1e-7)?;
    let circle: Vec<f64> = roots.iter().copied().filter(|c| c.abs() < 2.0).collect();
    assert!(circle.len() < 24, "too many circle roots for subset search");
    for mask in 0u32..(1 << circle.len()) {
        let mut chosen = vec![top];
        chosen.extend(circle.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c));
        let Some(big_f) = round_monic_from_roots(&chosen) else { continue };
        if !big_f.divides(&q) {
            continue;
        }
        let f = from_trace_polynomial(&big_f);
        if f.divides(r) && is_salem(&f).is_salem {
            return Some(f);
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCheck {
    pub label: String,
    pub value: f64,
    /// Squarefree polynomial whose roots are all such products.
    pub polynomial: IntPolynomial,
    pub verdict: SalemVerdict,
    pub irreducible_certified: bool,
    /// For values above 1: no Salem factor of `polynomial` has this value as
    /// a root. Values at most 1 are never Salem.
    pub salem_factor_excluded: bool,
}

impl ProductCheck {
    pub fn certified_non_salem(&self) -> bool {
        !self.verdict.is_salem
            && (self.value <= 1.0 || self.irreducible_certified || self.salem_factor_excluded)
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum ProductClass {
    CommonPowerBase {
        base: IntPolynomial,
        p_exponent: usize,
        q_exponent: usize,
    },
    NonSalemProducts(Vec<ProductCheck>),
}

/// Maximum denominator in the exponent-ratio search.
pub const RATIO_DENOMINATOR_BOUND: usize = 12;

/// Either both Salem numbers are powers of one Salem number, or none of the
/// four products `dp*dq`, `dp/dq`, `dq/dp`, `1/(dp*dq)` is Salem.
pub fn product_class(p: &IntPolynomial, q: &IntPolynomial) -> Result<ProductClass, SalemError> {
    for x in [p, q] {
        if !is_salem(x).is_salem {
            return Err(SalemError::NotSalem(x.clone()));
        }
    }
    let dp = largest_root_f64(p).ok_or(SalemError::SearchBoundExceeded)?;
    let dq = largest_root_f64(q).ok_or(SalemError::SearchBoundExceeded)?;
    let ratio = dp.ln() / dq.ln();
    for b in 1..=RATIO_DENOMINATOR_BOUND {
        let a = (ratio * b as f64).round();
        if a < 1.0 || (ratio * b as f64 - a).abs() > 1e-9 * b as f64 {
            continue;
        }
        let a = a as usize;
        if gcd(a, b) != 1 {
            continue;
        }
        // dp = mu^a, dq = mu^b
        for base in salem_roots(p, a) {
            if poly_of_powers(&base, b) == *q {
                return Ok(ProductClass::CommonPowerBase { base, p_exponent: a, q_exponent: b });
            }
        }
    }

    let (rp, rq) = (p.reverse(), q.reverse());
    let cases = [
        ("dp*dq", p, q, dp * dq),
        ("dp/dq", p, &rq, dp / dq),
        ("dq/dp", &rp, q, dq / dp),
        ("1/(dp*dq)", &rp, &rq, 1.0 / (dp * dq)),
    ];
    let mut checks = Vec::new();
    for (label, a, b, value) in cases {
        let poly = min_poly_of_product(a, b);
        let irreducible_certified = modp::certify_irreducible(&poly, 400);
        let verdict = is_salem(&poly);
        let salem_factor_excluded = value > 1.0 && salem_factor_containing(&poly, value).is_none();
        let check = ProductCheck {
            label: label.into(),
            value,
            polynomial: poly,
            verdict,
            irreducible_certified,
            salem_factor_excluded,
        };
        if !check.certified_non_salem() {
            return Err(SalemError::SearchBoundExceeded);
        }
        checks.push(check);
    }
    Ok(ProductClass::NonSalemProducts(checks))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerGap {
    pub delta: f64,
    pub fourth_root: f64,
    pub lehmer: f64,
    pub fourth_root_below_lehmer: bool,
    /// Exponents k for which a Salem k-th root of the base was searched.
    pub roots_checked: Vec<usize>,
    /// Whether any such root was found.
    pub any_root_found: bool,
}

/// Compare `delta^(1/4)` with Lehmer's number and search for Salem k-th
/// roots of `p` for k = 2, 3, 4.
pub fn power_gap_check(p: &IntPolynomial, lehmer: &IntPolynomial) -> PowerGap {
    let delta = largest_root_f64(p).unwrap_or(f64::NAN);
    let lam = largest_root_f64(lehmer).unwrap_or(f64::NAN);
    let fourth_root = delta.powf(0.25);
    let roots_checked = vec![2, 3, 4];
    let any_root_found = roots_checked.iter().any(|&k| !salem_roots(p, k).is_empty());
    PowerGap {
        delta,
        fourth_root,
        lehmer: lam,
        fourth_root_below_lehmer: fourth_root < lam,
        roots_checked,
        any_root_found,
    }
}

/// `t^4 - 2t^3 + t^2 - 2t + 1`, the Salem factor for orbit length five.
pub fn phi() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, -2, 1, -2, 1])
}

/// Numeric value of a rational enclosure's midpoint, for reports.
pub fn enclosure_value(e: &Enclosure) -> f64 {
    e.mid().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::lehmer_polynomial;

    #[test]
    fn salem_examples() {
        let v = is_salem(&phi());
        assert!(v.is_salem);
        assert!((v.largest_root_f64().unwrap() - 1.8832).abs() < 1e-4);
        let l = is_salem(&lehmer_polynomial());
        assert!(l.is_salem);
        assert!((l.largest_root_f64().unwrap() - 1.17628).abs() < 1e-5);
        assert!(!is_salem(&IntPolynomial::from_i64(&[2, -2, 1, -2, 1])).is_salem);
        assert!(!is_salem(&IntPolynomial::from_i64(&[-2, 0, 1])).is_salem);
        // phi * Phi_3 fails on the cyclotomic factor
        let red = &phi() * &IntPolynomial::from_i64(&[1, 1, 1]);
        assert!(!is_salem(&red).is_salem);
    }

    #[test]
    fn powers_of_phi() {
        let d = 1.883_203_505_913_53f64;
        for k in 1..=5 {
            let v = power_is_salem(&phi(), k);
            assert!(v.is_salem, "k = {k}");
            assert_eq!(v.degree, 4);
            assert!((v.largest_root_f64().unwrap() - d.powi(k as i32)).abs() < 1e-8);
        }
    }

    #[test]
    fn square_root_recovered() {
        let sq = poly_of_powers(&phi(), 2);
        assert_eq!(salem_roots(&sq, 2), vec![phi()]);
        assert!(salem_roots(&phi(), 2).is_empty());
    }

    #[test]
    fn product_dichotomy() {
        let sq = poly_of_powers(&phi(), 2).squarefree_part();
        match product_class(&phi(), &sq).unwrap() {
            ProductClass::CommonPowerBase { base, p_exponent, q_exponent } => {
                assert_eq!((base, p_exponent, q_exponent), (phi(), 1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            product_class(&phi(), &phi()).unwrap(),
            ProductClass::CommonPowerBase { p_exponent: 1, q_exponent: 1, .. }
        ));
        match product_class(&phi(), &lehmer_polynomial()).unwrap() {
            ProductClass::NonSalemProducts(v) => {
                assert_eq!(v.len(), 4);
                assert!(v.iter().all(ProductCheck::certified_non_salem));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn salem_factor_found_when_present() {
        let r = &phi() * &lehmer_polynomial();
        let d = is_salem(&phi()).largest_root_f64().unwrap();
        assert_eq!(salem_factor_containing(&r, d), Some(phi()));
        assert_eq!(salem_factor_containing(&r, 1.5), None);
    }

    #[test]
    fn gap() {
        let g = power_gap_check(&phi(), &lehmer_polynomial());
        assert!((g.fourth_root - 1.17145).abs() < 1e-5);
        assert!(g.fourth_root_below_lehmer);
        assert!(!g.any_root_found);
    }

    #[test]
    fn reverse_of_salem_is_itself() {
        for p in [phi(), lehmer_polynomial()] {
            assert_eq!(p.reverse(), p);
            assert!(is_salem(&p.reverse()).is_salem);
        }
    }
}

//! Two-variable resultants, computed by evaluating Sylvester determinants
//! at integer points and interpolating.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::linalg::det_int;
use super::{IntPolynomial, RatPoly};

/// Sylvester matrix of `a` and `b`, treated as having formal degrees `da`
/// and `db` (coefficients ascending).
fn sylvester(a: &[BigInt], da: usize, b: &[BigInt], db: usize) -> Vec<Vec<BigInt>> {
    let n = da + db;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    let coeff = |c: &[BigInt], i: usize| c.get(i).cloned().unwrap_or_default();
    for r in 0..db {
        for i in 0..=da {
            m[r][r + i] = coeff(a, da - i);
        }
    }
    for r in 0..da {
        for i in 0..=db {
            m[db + r][r + i] = coeff(b, db - i);
        }
    }
    m
}

/// `Res_y(p(y), F(x0, y))` for `x0 = 0..=bound`, interpolated in `x`.
fn resultant_in_x<F>(p: &IntPolynomial, db: usize, bound: usize, f: F) -> IntPolynomial
where
    F: Fn(&BigInt) -> Vec<BigInt>,
{
    let da = p.degree().expect("resultant of the zero polynomial");
    let xs: Vec<BigRational> = (0..=bound).map(|i| BigRational::from_integer(i.into())).collect();
    let ys: Vec<BigRational> = (0..=bound)
        .map(|i| {
            let b = f(&BigInt::from(i));
            BigRational::from_integer(det_int(&sylvester(p.coeffs(), da, &b, db)))
        })
        .collect();
    RatPoly::interpolate(&xs, &ys)
        .to_int()
        .expect("resultant of integer polynomials is integral")
}

/// Squarefree polynomial whose roots are the products `a*b` with
/// `p(a) = 0` and `q(b) = 0`.
pub fn min_poly_of_product(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    let m = q.degree().expect("zero polynomial");
    let n = p.degree().expect("zero polynomial");
    // y^m q(x / y) = sum_k q_k x^k y^(m-k)
    let r = resultant_in_x(p, m, n * m, |x| {
        let mut c = vec![BigInt::zero(); m + 1];
        let mut xp = BigInt::from(1);
        for k in 0..=m {
            c[m - k] = q.coeff(k) * &xp;
            xp *= x;
        }
        c
    });
    r.squarefree_part()
}

/// `prod (x - a^k)` over the roots `a` of a monic `p`, with multiplicity.
pub fn poly_of_powers(p: &IntPolynomial, k: usize) -> IntPolynomial {
    assert!(k >= 1);
    let n = p.degree().expect("zero polynomial");
    let r = resultant_in_x(p, k, n, |x| {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = x.clone();
        c[k] = BigInt::from(-1);
        c
    });
    if r.leading().is_some_and(num_traits::Signed::is_negative) {
        -&r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{char_poly_int, classify_roots, default_eps, real_roots};
    use num_traits::One;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn companion(q: &IntPolynomial) -> Vec<Vec<BigInt>> {
        let n = q.degree().unwrap();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for i in 1..n {
            m[i][i - 1] = BigInt::one();
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[n - 1] = -q.coeff(i);
        }
        m
    }

    fn kron(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let (n, m) = (a.len(), b.len());
        (0..n * m)
            .map(|r| (0..n * m).map(|c| &a[r / m][c / m] * &b[r % m][c % m]).collect())
            .collect()
    }

    fn mat_pow(a: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let mut acc: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
        for _ in 0..k {
            acc = (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|l| &acc[i][l] * &a[l][j]).sum()).collect())
                .collect();
        }
        acc
    }

    #[test]
    fn rational_roots() {
        assert_eq!(min_poly_of_product(&p(&[-2, 1]), &p(&[-2, 1])), p(&[-4, 1]));
    }

    #[test]
    fn reciprocal_pair_gives_one() {
        let phi = p(&[1, -2, 1, -2, 1]);
        let r = min_poly_of_product(&phi, &phi.reverse());
        assert!(r.eval_int(&BigInt::one()).is_zero());
    }

    #[test]
    fn delta_squared() {
        let phi = p(&[1, -2, 1, -2, 1]);
        let r = min_poly_of_product(&phi, &phi);
        let c = classify_roots(&r, &default_eps()).unwrap();
        let top = c.largest_real.unwrap().mid_f64();
        let delta = real_roots(&phi, &default_eps()).pop().unwrap().mid_f64();
        assert!((top - delta * delta).abs() < 1e-10);
        assert!((top - 3.546_455).abs() < 1e-6);
    }

    fn arb_monic(max: usize) -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-4i64..5, 1..=max).prop_map(|mut c| {
            c.push(1);
            IntPolynomial::from_i64(&c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn product_matches_kronecker_charpoly(a in arb_monic(3), b in arb_monic(3)) {
            let oracle = char_poly_int(&kron(&companion(&a), &companion(&b))).squarefree_part();
            prop_assert_eq!(min_poly_of_product(&a, &b), oracle);
        }

        #[test]
        fn powers_match_companion_power(a in arb_monic(4), k in 1usize..5) {
            let oracle = char_poly_int(&mat_pow(&companion(&a), k));
            prop_assert_eq!(poly_of_powers(&a, k), oracle);
        }
    }
}

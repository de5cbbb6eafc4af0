//! Dense exact linear algebra over Z and Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactError, IntPolynomial, RatPoly};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_int(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IntMatrix = a.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Characteristic polynomial `det(tI - A)`: determinants at `t = 0..=n`,
/// then interpolation.
pub fn char_poly_int(a: &[Vec<BigInt>]) -> IntPolynomial {
    let n = a.len();
    let xs: Vec<BigRational> = (0..=n).map(|i| BigRational::from_integer(i.into())).collect();
    let ys: Vec<BigRational> = (0..=n)
        .map(|x| {
            let shifted: IntMatrix = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let d = if i == j { BigInt::from(x) } else { BigInt::zero() };
                            d - &a[i][j]
                        })
                        .collect()
                })
                .collect();
            BigRational::from_integer(det_int(&shifted))
        })
        .collect();
    RatPoly::interpolate(&xs, &ys)
        .to_int()
        .expect("characteristic polynomial of an integer matrix has integer coefficients")
}

pub fn rat_mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> RatMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

/// Gauss–Jordan inverse; `DivisionByZero` if singular.
pub fn rat_inverse(a: &[Vec<BigRational>]) -> Result<RatMatrix, ExactError> {
    let n = a.len();
    let mut m: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(ExactError::DivisionByZero)?;
        m.swap(c, p);
        let inv = BigRational::one() / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &f * p;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A Z-basis of `{v in Z^cols : A v = 0}`.
pub fn integer_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // Row-reduce [A^T | I] by unimodular operations.
    let mut m: IntMatrix = (0..cols)
        .map(|i| {
            let mut r: Vec<BigInt> = (0..rows).map(|k| a[k][i].clone()).collect();
            r.extend((0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..rows {
        loop {
            let best = (pivot_row..cols)
                .filter(|&r| !m[r][c].is_zero())
                .min_by_key(|&r| m[r][c].abs());
            let Some(best) = best else { break };
            m.swap(pivot_row, best);
            let pivot = m[pivot_row].clone();
            let mut done = true;
            for row in m.iter_mut().skip(pivot_row + 1) {
                if row[c].is_zero() {
                    continue;
                }
                let q = row[c].div_floor(&pivot[c]);
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
                if !row[c].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == cols {
            break;
        }
    }
    m.into_iter()
        .skip(pivot_row)
        .map(|r| r[rows..].to_vec())
        .collect()
}

/// Whether the real span of `basis` contains a nonzero vector with all
/// coordinates non-negative (Fourier–Motzkin elimination over Q).
pub fn kernel_meets_nonneg_orthant(basis: &[Vec<BigInt>]) -> bool {
    let Some(first) = basis.first() else {
        return false;
    };
    let dim = first.len();
    let k = basis.len();
    // Constraints sum_j c_j * lambda_j >= rhs, as (c, rhs).
    let mut sys: Vec<(Vec<BigRational>, BigRational)> = (0..dim)
        .map(|i| {
            (
                basis.iter().map(|b| BigRational::from(b[i].clone())).collect(),
                BigRational::zero(),
            )
        })
        .collect();
    sys.push((
        basis
            .iter()
            .map(|b| BigRational::from(b.iter().sum::<BigInt>()))
            .collect(),
        BigRational::one(),
    ));
    for var in (0..k).rev() {
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (c, r) in sys {
            match c[var].signum() {
                s if s.is_positive() => pos.push((c, r)),
                s if s.is_negative() => neg.push((c, r)),
                _ => zero.push((c, r)),
            }
        }
        let mut next = zero;
        for (pc, pr) in &pos {
            for (nc, nr) in &neg {
                let a = pc[var].clone();
                let b = -nc[var].clone();
                let c: Vec<BigRational> =
                    pc.iter().zip(nc).map(|(x, y)| x * &b + y * &a).collect();
                next.push((c, pr * &b + nr * &a));
            }
        }
        for (c, _) in next.iter_mut() {
            c.truncate(var);
        }
        next.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        next.dedup();
        sys = next;
    }
    // All variables eliminated: each constraint reads 0 >= rhs.
    sys.iter().all(|(_, r)| !r.is_positive())
}

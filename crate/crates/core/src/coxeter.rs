//! The lattice Z^{1,n}, the Coxeter group W_n acting on it, and spectral
//! data of its elements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{
    char_poly_int, classify_roots, min_poly_of_product, real_roots, Enclosure, ExactError,
    IntPolynomial,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("indices must be distinct")]
    DuplicateIndices,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix does not preserve the intersection form")]
    NotIsometry,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Vector in Z^{1,n}, coordinates on e_0..e_n.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![0; n + 1])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = 1;
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len() - 1
    }

    /// Intersection pairing with form diag(1, -1, ..., -1).
    pub fn dot(&self, other: &Self) -> i64 {
        assert_eq!(self.0.len(), other.0.len());
        let head = self.0[0] * other.0[0];
        self.0[1..]
            .iter()
            .zip(&other.0[1..])
            .fold(head, |acc, (a, b)| acc - a * b)
    }

    pub fn add_scaled(&self, c: i64, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }
}

/// `-3 e_0 + e_1 + ... + e_n`.
pub fn kappa(n: usize) -> LatticeVector {
    let mut v = vec![1; n + 1];
    v[0] = -3;
    LatticeVector(v)
}

/// Simple root alpha_i: `e_0 - e_1 - e_2 - e_3` for i = 0, else `e_i - e_{i+1}`.
pub fn simple_root(i: usize, n: usize) -> Result<LatticeVector, CoxeterError> {
    if n < 3 || i >= n {
        return Err(CoxeterError::IndexOutOfRange { index: i, n });
    }
    let mut v = LatticeVector::zero(n);
    if i == 0 {
        v.0[..4].copy_from_slice(&[1, -1, -1, -1]);
    } else {
        v.0[i] = 1;
        v.0[i + 1] = -1;
    }
    Ok(v)
}

/// Integer matrix acting on coordinate columns of Z^{1,n}; column j is the
/// image of e_j.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeIsometry {
    rows: Vec<Vec<i64>>,
}

impl Serialize for LatticeIsometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeIsometry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        LatticeIsometry::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

fn checked_dot(a: impl Iterator<Item = (i64, i64)>) -> i64 {
    a.fold(0i64, |acc, (x, y)| {
        x.checked_mul(y)
            .and_then(|p| acc.checked_add(p))
            .expect("lattice matrix entry overflowed i64")
    })
}

impl LatticeIsometry {
    pub fn identity(n: usize) -> Self {
        let rows = (0..=n)
            .map(|i| (0..=n).map(|j| i64::from(i == j)).collect())
            .collect();
        LatticeIsometry { rows }
    }

    /// Validates that the matrix is square and preserves the form.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, CoxeterError> {
        let d = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(CoxeterError::DimensionMismatch(d, r.len()));
        }
        let m = LatticeIsometry { rows };
        if d == 0 || !m.preserves_form() {
            return Err(CoxeterError::NotIsometry);
        }
        Ok(m)
    }

    /// Build from the images of e_0..e_n.
    pub fn from_images(images: &[LatticeVector]) -> Result<Self, CoxeterError> {
        let d = images.len();
        let rows = (0..d)
            .map(|i| images.iter().map(|v| v.0[i]).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn rank(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    /// Image of e_j.
    pub fn image_of_basis(&self, j: usize) -> LatticeVector {
        LatticeVector(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(
            self.rows
                .iter()
                .map(|r| checked_dot(r.iter().copied().zip(v.0.iter().copied())))
                .collect(),
        )
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.rows.len(), other.rows.len(), "rank mismatch");
        let d = self.rows.len();
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| checked_dot((0..d).map(|k| (self.rows[i][k], other.rows[k][j]))))
                    .collect()
            })
            .collect();
        LatticeIsometry { rows }
    }

    /// `J M^T J`, the inverse of a form-preserving M.
    pub fn inverse(&self) -> Self {
        let d = self.rows.len();
        let sgn = |i: usize| if i == 0 { 1 } else { -1 };
        let rows = (0..d)
            .map(|i| (0..d).map(|j| sgn(i) * self.rows[j][i] * sgn(j)).collect())
            .collect();
        LatticeIsometry { rows }
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.rank());
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.len()).map(|i| self.rows[i][i]).sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    pub fn preserves_form(&self) -> bool {
        let n = self.rank();
        (0..=n).all(|i| {
            let ci = self.image_of_basis(i);
            (i..=n).all(|j| {
                let expected = match (i == j, i) {
                    (false, _) => 0,
                    (true, 0) => 1,
                    (true, _) => -1,
                };
                ci.dot(&self.image_of_basis(j)) == expected
            })
        })
    }

    pub fn fixes_kappa(&self) -> bool {
        let k = kappa(self.rank());
        self.apply(&k) == k
    }

    /// Smallest k in 1..=max with `self^k = id`.
    pub fn order(&self, max: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=max {
            if p.is_identity() {
                return Some(k);
            }
            p = p.compose(self);
        }
        None
    }

    pub fn to_bigint_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }
}

/// Reflection `x -> x + (x . v) v` through a root of square -2.
pub fn reflection_through(v: &LatticeVector) -> LatticeIsometry {
    let n = v.rank();
    let images: Vec<LatticeVector> = (0..=n)
        .map(|j| {
            let e = LatticeVector::basis(n, j);
            let c = e.dot(v);
            e.add_scaled(c, v)
        })
        .collect();
    LatticeIsometry::from_images(&images).expect("reflection through a (-2)-vector is an isometry")
}

pub fn simple_reflection(i: usize, n: usize) -> Result<LatticeIsometry, CoxeterError> {
    Ok(reflection_through(&simple_root(i, n)?))
}

/// Reflection through `e_0 - e_i - e_j - e_k`.
pub fn cremona_reflection(i: usize, j: usize, k: usize, n: usize) -> Result<LatticeIsometry, CoxeterError> {
    for idx in [i, j, k] {
        if idx == 0 || idx > n {
            return Err(CoxeterError::IndexOutOfRange { index: idx, n });
        }
    }
    if i == j || j == k || i == k {
        return Err(CoxeterError::DuplicateIndices);
    }
    let mut v = LatticeVector::zero(n);
    v.0[0] = 1;
    for idx in [i, j, k] {
        v.0[idx] = -1;
    }
    Ok(reflection_through(&v))
}

/// Product `s_{w[0]} s_{w[1]} ...` as matrices (the last letter acts first).
pub fn reflection_word(word: &[usize], n: usize) -> Result<LatticeIsometry, CoxeterError> {
    word.iter().try_fold(LatticeIsometry::identity(n), |acc, &i| {
        Ok(acc.compose(&simple_reflection(i, n)?))
    })
}

/// Permutation matrix sending `e_a -> e_{images[a-1]+1}` for a, and fixing e_0.
pub fn permutation_isometry(images: &[usize]) -> LatticeIsometry {
    let n = images.len();
    let mut img: Vec<LatticeVector> = vec![LatticeVector::basis(n, 0)];
    img.extend(images.iter().map(|&b| LatticeVector::basis(n, b + 1)));
    LatticeIsometry::from_images(&img).expect("permutations of e_1..e_n are isometries")
}

pub fn char_poly(w: &LatticeIsometry) -> IntPolynomial {
    char_poly_int(&w.to_bigint_rows())
}

/// Enclosure of the largest modulus of a root of `p`.
pub fn root_modulus_bound(p: &IntPolynomial, eps: &BigRational) -> Result<Enclosure, ExactError> {
    let sq = p.squarefree_part();
    let cls = classify_roots(&sq, eps)?;
    if cls.n_off_circle_complex == 0 {
        let roots = real_roots(&sq, eps);
        let mut best = if cls.n_on_circle > 0 {
            Some(Enclosure::point(BigRational::one()))
        } else {
            None
        };
        let cands = roots
            .first()
            .map(|e| Enclosure { lo: -e.hi.clone(), hi: -e.lo.clone() })
            .into_iter()
            .chain(roots.last().cloned());
        for e in cands {
            if best.as_ref().is_none_or(|b| e.lo > b.lo) {
                best = Some(e);
            }
        }
        return best.ok_or(ExactError::ZeroPolynomial);
    }
    // rho^2 is the largest real root of the product polynomial; its square
    // root is the largest real root of that polynomial composed with t^2.
    let prod = min_poly_of_product(&sq, &sq).compose_power(2).squarefree_part();
    real_roots(&prod, eps)
        .pop()
        .ok_or_else(|| ExactError::Inconclusive("no real root for modulus".into()))
}

pub fn spectral_radius(w: &LatticeIsometry, eps: &BigRational) -> Result<Enclosure, ExactError> {
    root_modulus_bound(&char_poly(w), eps)
}

/// `2 + trace(w^k)`.
pub fn lefschetz_number(w: &LatticeIsometry, k: u32) -> i64 {
    2 + w.pow(i64::from(k)).trace()
}

//! The cubic made of three concurrent lines, parametrized as
//! `(t, i) := gamma_i(t)` with `gamma_1(t) = [-t:1:1]`, `gamma_2(t) = [t:1:0]`,
//! `gamma_3(t) = [t:0:1]`. All three lines pass through `[1:0:0]`, the point
//! `t = infinity`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::diller::{solve_parameters, DillerError};
use crate::exactnum::{integer_kernel, kernel_meets_nonneg_orthant, NFElem, NumberField};
use crate::perm::Perm3;
use crate::planemaps::{PlaneError, PlaneMap, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("expected one point on each line, got lines {0:?}")]
    BadConfiguration([u8; 3]),
    #[error("map does not fix the cubic: {0}")]
    NotCubicFixing(String),
    #[error("line index {0} outside 1..=3")]
    BadLine(u8),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CubicPoint {
    /// `None` is the triple point.
    pub t: Option<NFElem>,
    pub line: u8,
    #[serde(skip)]
    field: Arc<NumberField>,
}

impl CubicPoint {
    pub fn new(t: NFElem, line: u8) -> Result<Self, CubicError> {
        if !(1..=3).contains(&line) {
            return Err(CubicError::BadLine(line));
        }
        Ok(CubicPoint { field: t.field().clone(), t: Some(t), line })
    }

    /// The triple point `[1:0:0]`, reported on line 1.
    pub fn triple_point(field: &Arc<NumberField>) -> Self {
        CubicPoint { t: None, line: 1, field: field.clone() }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn from_ints(field: &Arc<NumberField>, t: i64, line: u8) -> Result<Self, CubicError> {
        Self::new(NFElem::from_int(field, t), line)
    }

    pub fn embed(&self) -> ProjPoint {
        let Some(t) = &self.t else {
            return ProjPoint::coordinate(&self.field, 1);
        };
        let f = t.field();
        let (one, zero) = (NFElem::one(f), NFElem::zero(f));
        let c = match self.line {
            1 => [-t.clone(), one.clone(), one],
            2 => [t.clone(), one, zero],
            _ => [t.clone(), zero, one],
        };
        ProjPoint::new(c).expect("second or third coordinate is 1")
    }

    /// The cubic point at `p`, if `p` lies on the cubic. The triple point is
    /// reported on line 1.
    pub fn locate(p: &ProjPoint) -> Option<CubicPoint> {
        let [x1, x2, x3] = p.coords();
        if x2.is_zero() && x3.is_zero() {
            return Some(CubicPoint::triple_point(p.field()));
        }
        let (t, line) = if x3.is_zero() {
            (x1 / x2, 2)
        } else if x2.is_zero() {
            (x1 / x3, 3)
        } else if x2 == x3 {
            (-(x1 / x2), 1)
        } else {
            return None;
        };
        Some(CubicPoint { field: p.field().clone(), t: Some(t), line })
    }
}

impl fmt::Display for CubicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.t {
            Some(t) => write!(f, "({t}, {})", self.line),
            None => write!(f, "(inf, {})", self.line),
        }
    }
}

/// Collinearity of one point on each line: `t1 + t2 + t3 = 0`.
pub fn collinear(p: &[CubicPoint; 3]) -> Result<bool, CubicError> {
    let mut sorted: Vec<&CubicPoint> = p.iter().collect();
    sorted.sort_by_key(|q| q.line);
    if sorted.iter().map(|q| q.line).collect::<Vec<_>>() != [1, 2, 3] {
        return Err(CubicError::BadConfiguration([p[0].line, p[1].line, p[2].line]));
    }
    let ts: Option<Vec<&NFElem>> = sorted.iter().map(|q| q.t.as_ref()).collect();
    let Some(ts) = ts else {
        // the triple point is on every line through it
        return Ok(true);
    };
    let by_sum = (&(ts[0] + ts[1]) + ts[2]).is_zero();
    debug_assert_eq!(by_sum, collinear_by_determinant(p));
    Ok(by_sum)
}

/// Vanishing of the determinant of the embedded coordinates.
pub fn collinear_by_determinant(p: &[CubicPoint; 3]) -> bool {
    let rows = p.clone().map(|q| q.embed().coords().clone());
    let m = |i: usize, j: usize| &rows[i][j];
    let d = &(&(m(0, 0) * &(&(m(1, 1) * m(2, 2)) - &(m(1, 2) * m(2, 1))))
        - &(m(0, 1) * &(&(m(1, 0) * m(2, 2)) - &(m(1, 2) * m(2, 0)))))
        + &(m(0, 2) * &(&(m(1, 0) * m(2, 1)) - &(m(1, 1) * m(2, 0))));
    d.is_zero()
}

/// `(t, i) -> (a t + b, tau(i))`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RestrictionMap {
    pub a: NFElem,
    pub b: NFElem,
    pub tau: Perm3,
}

impl RestrictionMap {
    pub fn apply(&self, p: &CubicPoint) -> CubicPoint {
        CubicPoint {
            t: p.t.as_ref().map(|t| &(&self.a * t) + &self.b),
            line: self.tau.apply(p.line as usize) as u8,
            field: p.field.clone(),
        }
    }

    /// `self . other`.
    pub fn compose(&self, other: &Self) -> Self {
        RestrictionMap {
            a: &self.a * &other.a,
            b: &(&self.a * &other.b) + &self.b,
            tau: self.tau.compose(other.tau),
        }
    }
}

const SAMPLE_PARAMS: [i64; 8] = [2, 3, 5, 7, 11, -2, -3, 13];

/// Restriction of a cubic-fixing map, read off from sampled images.
pub fn restriction_of<M: PlaneMap>(f: &M, field: &Arc<NumberField>) -> Result<RestrictionMap, CubicError> {
    let not_fixing = |msg: String| CubicError::NotCubicFixing(msg);
    let mut per_line: Vec<(u8, NFElem, NFElem)> = Vec::new();
    for line in 1..=3u8 {
        let mut samples: Vec<(NFElem, CubicPoint)> = Vec::new();
        for &t in &SAMPLE_PARAMS {
            let src = CubicPoint::from_ints(field, t, line)?;
            match f.image(&src.embed()) {
                Ok(img) => {
                    let loc = CubicPoint::locate(&img).ok_or_else(|| not_fixing(format!("image of {src} is off the cubic")))?;
                    samples.push((src.t.unwrap(), loc));
                }
                Err(PlaneError::Indeterminate(_)) => continue,
                Err(e) => return Err(e.into()),
            }
            if samples.len() == 4 {
                break;
            }
        }
        if samples.len() < 4 {
            return Err(not_fixing(format!("too few regular samples on line {line}")));
        }
        let target = samples[0].1.line;
        let mut us = Vec::new();
        for (t, img) in &samples {
            match (&img.t, img.line == target) {
                (Some(u), true) => us.push((t.clone(), u.clone())),
                _ => return Err(not_fixing(format!("line {line} is not mapped onto a single line"))),
            }
        }
        let a = &(&us[1].1 - &us[0].1) / &(&us[1].0 - &us[0].0);
        let b = &us[0].1 - &(&a * &us[0].0);
        if a.is_zero() || us.iter().any(|(t, u)| &(&(&a * t) + &b) != u) {
            return Err(not_fixing(format!("line {line} is not mapped affinely")));
        }
        per_line.push((target, a, b));
    }
    let images = [0, 1, 2].map(|i| per_line[i].0 - 1);
    let tau = Perm3::from_images(images).ok_or_else(|| not_fixing("lines are not permuted".into()))?;
    let (a, b) = (per_line[0].1.clone(), per_line[0].2.clone());
    if per_line.iter().any(|(_, a2, b2)| *a2 != a || *b2 != b) {
        return Err(not_fixing("lines carry different affine maps".into()));
    }
    Ok(RestrictionMap { a, b, tau })
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationKernel {
    /// Basis of the integer relations among the values, first nonzero entry positive.
    #[serde(serialize_with = "crate::exactnum::bigint_vecs")]
    pub basis: Vec<Vec<BigInt>>,
    pub meets_nonneg_orthant: bool,
}

/// Integer relations `sum m_i v_i = 0` among number field elements.
pub fn relation_kernel(values: &[NFElem]) -> RelationKernel {
    let deg = values.first().map_or(1, |v| v.field().degree());
    // one row per power-basis coordinate, scaled to integers
    let rows: Vec<Vec<BigInt>> = (0..deg)
        .map(|k| {
            let coeffs: Vec<_> = values.iter().map(|v| v.coeffs().get(k).cloned().unwrap_or_else(Zero::zero)).collect();
            let den = coeffs.iter().fold(BigInt::one(), |l, c: &num_rational::BigRational| l.lcm(c.denom()));
            coeffs.iter().map(|c| (c * num_rational::BigRational::from(den.clone())).to_integer()).collect()
        })
        .collect();
    let mut basis = integer_kernel(&rows);
    for v in &mut basis {
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
    }
    let meets = kernel_meets_nonneg_orthant(&basis);
    RelationKernel { basis, meets_nonneg_orthant: meets }
}

/// Relations among the base-locus parameters `1 + t_j`, j = 1..n.
pub fn nonodal_kernel(n: usize) -> Result<RelationKernel, DillerError> {
    let sol = solve_parameters(n)?;
    let one = NFElem::one(&sol.field);
    let values: Vec<NFElem> = sol.t_params.iter().map(|t| &one + t).collect();
    Ok(relation_kernel(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    #[test]
    fn embedding() {
        let k = q();
        assert_eq!(CubicPoint::from_ints(&k, 0, 2).unwrap().embed(), ProjPoint::from_ints(&k, [0, 1, 0]).unwrap());
        assert_eq!(CubicPoint::from_ints(&k, 1, 1).unwrap().embed(), ProjPoint::from_ints(&k, [-1, 1, 1]).unwrap());
        let inf = CubicPoint::triple_point(&k);
        assert_eq!(inf.embed(), ProjPoint::coordinate(&k, 1));
        for line in 1..=3 {
            let p = CubicPoint::from_ints(&k, 4, line).unwrap();
            assert_eq!(CubicPoint::locate(&p.embed()), Some(p));
        }
        assert_eq!(CubicPoint::locate(&ProjPoint::from_ints(&k, [1, 2, 3]).unwrap()), None);
    }

    #[test]
    fn collinearity_examples() {
        let k = q();
        let c = |t, l| CubicPoint::from_ints(&k, t, l).unwrap();
        assert!(collinear(&[c(1, 1), c(-2, 2), c(1, 3)]).unwrap());
        assert!(!collinear(&[c(1, 1), c(1, 2), c(1, 3)]).unwrap());
        assert!(collinear(&[c(1, 3), c(1, 1), c(-2, 2)]).unwrap());
        assert_eq!(
            collinear(&[c(1, 1), c(1, 1), c(1, 3)]),
            Err(CubicError::BadConfiguration([1, 1, 3]))
        );
    }

    #[test]
    fn collinearity_matches_determinant_on_random_triples() {
        let k = q();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let t1 = rng.gen_range(-6..=6);
            let t2 = rng.gen_range(-6..=6);
            let t3 = if rng.gen_bool(0.5) { -t1 - t2 } else { rng.gen_range(-6..=6) };
            let pts = [CubicPoint::from_ints(&k, t1, 1).unwrap(), CubicPoint::from_ints(&k, t2, 2).unwrap(), CubicPoint::from_ints(&k, t3, 3).unwrap()];
            assert_eq!(collinear(&pts).unwrap(), collinear_by_determinant(&pts));
        }
    }

    #[test]
    fn kernel_of_simple_values() {
        let k = NumberField::with_largest_real_root(crate::exactnum::IntPolynomial::from_i64(&[-2, 0, 1])).unwrap();
        let a = NFElem::generator(&k);
        let vals = [NFElem::from_int(&k, 1), a.clone(), &a + &NFElem::from_int(&k, 1)];
        let ker = relation_kernel(&vals);
        assert_eq!(ker.basis, vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]]);
        assert!(!ker.meets_nonneg_orthant);
        let ker = relation_kernel(&[NFElem::from_int(&k, 2), NFElem::from_int(&k, -3)]);
        assert!(ker.meets_nonneg_orthant);
    }

    #[test]
    fn no_nodal_relations_for_five() {
        let ker = nonodal_kernel(5).unwrap();
        let expected: Vec<BigInt> = [1, -1, 1, -1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(ker.basis, vec![expected]);
        assert!(!ker.meets_nonneg_orthant);
    }
}

//! Construction of quadratic maps that fix the concurrent-lines cubic and
//! restrict to `t -> a(t - 1) + 1` on it, with orbit data `(n, n, n)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cubic::{CubicError, CubicPoint};
use crate::exactnum::{chi, strip_cyclotomic, IntPolynomial, NFElem, NumberField, DEFAULT_MAX_CYCLOTOMIC_ORDER};
use crate::perm::Perm3;
use crate::planemaps::{OrbitData, PlaneError, ProjLinearMap, QuadraticMap};
use crate::salem::is_salem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DillerError {
    #[error("orbit length {0} is below 4")]
    OrbitTooShort(usize),
    #[error("no Salem factor of degree >= 4 in chi_{n}: remainder {rest}")]
    NoSalemFactor { n: usize, rest: IntPolynomial },
    #[error("constructed map for tau = {tau} has orbit data {found}, expected {expected}")]
    ValidationFailed { tau: Perm3, found: OrbitData, expected: OrbitData },
    #[error("degenerate normalization: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Cubic(#[from] CubicError),
}

#[derive(Clone, Debug, Serialize)]
pub struct DillerSolution {
    pub n: usize,
    #[serde(skip)]
    pub field: Arc<NumberField>,
    pub alpha: NFElem,
    /// `t_1, ..., t_n`.
    pub t_params: Vec<NFElem>,
    /// `p_{k,j} = (1 + t_j, k)` at index `(k-1) n + j - 1`.
    pub base_locus: Vec<CubicPoint>,
}

pub fn solve_parameters(n: usize) -> Result<DillerSolution, DillerError> {
    if n < 4 {
        return Err(DillerError::OrbitTooShort(n));
    }
    let rest = strip_cyclotomic(&chi(n), DEFAULT_MAX_CYCLOTOMIC_ORDER.max(2 * n + 2));
    if rest.degree().unwrap_or(0) < 4 || !is_salem(&rest).is_salem {
        return Err(DillerError::NoSalemFactor { n, rest });
    }
    let field = NumberField::with_largest_real_root(rest).map_err(|e| DillerError::Degenerate(e.to_string()))?;
    let alpha = NFElem::generator(&field);
    let one = NFElem::one(&field);
    let alpha_n = alpha.pow(n as i64).unwrap();
    let denom = &one + &(&NFElem::from_int(&field, 2) * &alpha_n);
    let scale = &NFElem::from_int(&field, -3) / &denom;
    let t_params: Vec<NFElem> = (1..=n).map(|j| &scale * &alpha.pow(j as i64).unwrap()).collect();
    let base_locus = (1..=3u8)
        .flat_map(|k| t_params.iter().map(move |t| (k, t)))
        .map(|(k, t)| CubicPoint::new(&one + t, k).unwrap())
        .collect();
    Ok(DillerSolution { n, field, alpha, t_params, base_locus })
}

impl DillerSolution {
    /// `p_{k,j}`, 1-based.
    pub fn base_point(&self, k: usize, j: usize) -> &CubicPoint {
        &self.base_locus[(k - 1) * self.n + j - 1]
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        self.field.minpoly()
    }

    /// The basic map with `p_i+ = (1 + t_n, i)`, `p_i- = (1 + t_1, tau(i))`
    /// that fixes `[1:0:0]`, checked by exact orbit tracking.
    pub fn construct(&self, tau: Perm3) -> Result<DillerMap, DillerError> {
        let f = &self.field;
        let plus: [[NFElem; 3]; 3] = [1, 2, 3].map(|i| self.base_point(i, self.n).embed().coords().clone());
        let minus: [[NFElem; 3]; 3] = [1, 2, 3].map(|i| self.base_point(tau.apply(i), 1).embed().coords().clone());
        let t_plus = ProjLinearMap::from_columns(plus)?;
        let raw_minus = ProjLinearMap::from_columns(minus.clone())?;
        let e1 = [NFElem::one(f), NFElem::zero(f), NFElem::zero(f)];
        let v = t_plus.inverse().apply_vec(&e1);
        let w = [&v[1] * &v[2], &v[0] * &v[2], &v[0] * &v[1]];
        let c = raw_minus.inverse().apply_vec(&e1);
        if w.iter().any(NFElem::is_zero) {
            return Err(DillerError::Degenerate("[1:0:0] lies on an exceptional line".into()));
        }
        let cols: [[NFElem; 3]; 3] = [0, 1, 2].map(|i| {
            let mu = &c[i] / &w[i];
            minus[i].clone().map(|x| &x * &mu)
        });
        let map = QuadraticMap::basic(ProjLinearMap::from_columns(cols)?, t_plus);
        let sigma = tau.pow(self.n as i64);
        let expected = OrbitData::finite([self.n; 3], sigma);
        let orbit = map.orbit_data(self.n + 5);
        if orbit != expected {
            return Err(DillerError::ValidationFailed { tau, found: orbit, expected });
        }
        Ok(DillerMap { n: self.n, tau, sigma, map, orbit })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DillerMap {
    pub n: usize,
    pub tau: Perm3,
    pub sigma: Perm3,
    pub map: QuadraticMap,
    pub orbit: OrbitData,
}

pub fn construct_map(n: usize, tau: Perm3) -> Result<(DillerSolution, DillerMap), DillerError> {
    let sol = solve_parameters(n)?;
    let m = sol.construct(tau)?;
    Ok((sol, m))
}

/// The six maps for `n = 5`, keyed by their orbit-data permutation.
pub fn six_maps_n5() -> Result<(DillerSolution, BTreeMap<Perm3, DillerMap>), DillerError> {
    let sol = solve_parameters(5)?;
    let mut out = BTreeMap::new();
    for tau in Perm3::all() {
        let m = sol.construct(tau)?;
        out.insert(m.sigma, m);
    }
    Ok((sol, out))
}

/// `s = (2a^5 + 1)/(a^5 - 1)` and `r = (2a^5 + 1)/(2a^5 - 3a + 1)`.
pub fn printed_s_r(field: &Arc<NumberField>) -> (NFElem, NFElem) {
    let a = NFElem::generator(field);
    let a5 = a.pow(5).unwrap();
    let int = |k| NFElem::from_int(field, k);
    let num = &(&int(2) * &a5) + &int(1);
    let s = &num / &(&a5 - &int(1));
    let r = &num / &(&(&(&int(2) * &a5) - &(&int(3) * &a)) + &int(1));
    (s, r)
}

fn third_of(field: &Arc<NumberField>, rows: [[NFElem; 3]; 3]) -> ProjLinearMap {
    let third = &NFElem::one(field) / &NFElem::from_int(field, 3);
    ProjLinearMap::new(rows.map(|r| r.map(|x| &x * &third))).expect("printed matrices are invertible")
}

/// `S = (1/3)[[1,1,1],[s,-s,0],[s,0,-s]]`.
pub fn printed_s_matrix(field: &Arc<NumberField>) -> ProjLinearMap {
    let (s, _) = printed_s_r(field);
    let (one, zero) = (NFElem::one(field), NFElem::zero(field));
    third_of(field, [[one.clone(), one.clone(), one], [s.clone(), -s.clone(), zero.clone()], [s.clone(), zero, -s]])
}

/// The printed `T_sigma` for `n = 5`.
pub fn printed_t_matrix(field: &Arc<NumberField>, sigma: Perm3) -> ProjLinearMap {
    let (_, r) = printed_s_r(field);
    let one = NFElem::one(field);
    // rows two and three as coefficients of r
    let pattern: [[i64; 3]; 2] = match sigma.to_string().as_str() {
        "id" => [[-1, 1, 0], [-1, 0, 1]],
        "(12)" => [[1, -1, 0], [0, -1, 1]],
        "(13)" => [[0, 1, -1], [1, 0, -1]],
        "(23)" => [[-1, 0, 1], [-1, 1, 0]],
        "(123)" => [[0, -1, 1], [1, -1, 0]],
        _ => [[1, 0, -1], [0, 1, -1]],
    };
    let row = |p: [i64; 3]| p.map(|k| &NFElem::from_int(field, k) * &r);
    third_of(field, [[one.clone(), one.clone(), one], row(pattern[0]), row(pattern[1])])
}

/// The printed map `T_sigma . J3 . S^-1`.
pub fn printed_map(field: &Arc<NumberField>, sigma: Perm3) -> QuadraticMap {
    QuadraticMap::basic(printed_t_matrix(field, sigma), printed_s_matrix(field))
}

#[derive(Clone, Debug, Serialize)]
pub struct PrintedComparison {
    pub sigma: Perm3,
    pub same_map: bool,
    pub t_minus_matches: bool,
}

/// Compare each constructed `n = 5` map with its printed counterpart.
pub fn compare_printed_n5() -> Result<Vec<PrintedComparison>, DillerError> {
    let (sol, maps) = six_maps_n5()?;
    Ok(maps
        .values()
        .map(|m| {
            let printed = printed_map(&sol.field, m.sigma);
            PrintedComparison {
                sigma: m.sigma,
                same_map: printed.eq_as_maps(&m.map),
                t_minus_matches: column_lines_match(printed.t_minus(), m.map.t_minus()),
            }
        })
        .collect())
}

fn column_lines_match(a: &ProjLinearMap, b: &ProjLinearMap) -> bool {
    (0..3).all(|j| {
        let (x, y) = (a.column(j), b.column(j));
        crate::planemaps::proportional(&x.iter().collect::<Vec<_>>(), &y.iter().collect::<Vec<_>>())
    })
}

/// `L_sigma = T-_sigma . (T-_id)^-1`, the linear map with `f_sigma = L_sigma . f_id`.
pub fn linear_part(maps: &BTreeMap<Perm3, DillerMap>, sigma: Perm3) -> ProjLinearMap {
    let id = &maps[&Perm3::ID].map;
    maps[&sigma].map.t_minus().compose(&id.t_minus().inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::{collinear, restriction_of};
    use crate::planemaps::ProjPoint;

    #[test]
    fn parameters_n5() {
        let sol = solve_parameters(5).unwrap();
        assert_eq!(sol.minpoly(), &IntPolynomial::from_i64(&[1, -2, 1, -2, 1]));
        assert!((sol.alpha.to_f64() - 1.883_203_505_913_53).abs() < 1e-12);
        let one = NFElem::one(&sol.field);
        let (s, r) = printed_s_r(&sol.field);
        assert_eq!(&one + &sol.t_params[0], &one / &r);
        assert_eq!(&one + &sol.t_params[4], -(&one / &s));
        assert!(((&one + &sol.t_params[0]).to_f64() - 0.8832).abs() < 1e-4);
        assert!(((&one + &sol.t_params[4]).to_f64() + 0.4689).abs() < 1e-4);
        let chi5 = chi(5);
        assert!(NFElem::from_int_poly(&sol.field, &chi5).is_zero());
        let distinct: std::collections::HashSet<_> = sol.base_locus.iter().map(|p| p.embed()).collect();
        assert_eq!(distinct.len(), 15);
        assert!(!distinct.contains(&ProjPoint::coordinate(&sol.field, 1)));
    }

    #[test]
    fn short_orbits_rejected() {
        assert!(matches!(solve_parameters(3), Err(DillerError::OrbitTooShort(3))));
    }

    #[test]
    fn identity_map_n5() {
        let (sol, m) = construct_map(5, Perm3::ID).unwrap();
        let f = &sol.field;
        let e1 = ProjPoint::coordinate(f, 1);
        assert_eq!(m.map.apply(&e1).unwrap(), e1);
        assert!(matches!(m.map.apply(&sol.base_point(1, 5).embed()), Err(PlaneError::Indeterminate(1))));
        let res = restriction_of(&m.map, f).unwrap();
        assert_eq!(res.a, sol.alpha);
        assert_eq!(res.b, &NFElem::one(f) - &sol.alpha);
        assert_eq!(res.tau, Perm3::ID);
        assert!(printed_map(f, Perm3::ID).eq_as_maps(&m.map));
    }

    #[test]
    fn exceptional_lines_and_critical_sums() {
        let (sol, m) = construct_map(5, "(132)".parse().unwrap()).unwrap();
        assert_eq!(m.sigma, "(123)".parse().unwrap());
        let f = &sol.field;
        let one = NFElem::one(f);
        let three = NFElem::from_int(f, 3);
        let ex = m.map.exceptional_data().unwrap();
        let params = |pts: &[ProjPoint; 3]| -> Vec<NFElem> {
            pts.iter().map(|p| CubicPoint::locate(p).unwrap().t.unwrap()).collect()
        };
        let tm = params(&ex.p_minus);
        let tp = params(&ex.p_plus);
        assert_eq!(&(&tm[0] + &tm[1]) + &tm[2], &three * &(&sol.alpha - &one));
        assert_eq!(&(&tp[0] + &tp[1]) + &tp[2], &(&three * &(&one - &sol.alpha)) / &sol.alpha);
        // E_i+ is the line through the other two indeterminacy points; its
        // third point on the cubic lies on line i.
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let s_i = -(&tp[j] + &tp[k]);
            let third = CubicPoint::new(s_i, i as u8 + 1).unwrap();
            assert!(ex.exc_lines[i].contains(&third.embed()));
            let pts = [third, CubicPoint::locate(&ex.p_plus[j]).unwrap(), CubicPoint::locate(&ex.p_plus[k]).unwrap()];
            assert!(collinear(&pts).unwrap());
        }
        let res = restriction_of(&m.map, f).unwrap();
        assert_eq!(res.tau, "(132)".parse().unwrap());
    }

    #[test]
    fn cyclic_tau_n4() {
        let tau: Perm3 = "(123)".parse().unwrap();
        let (_, m) = construct_map(4, tau).unwrap();
        assert_eq!(m.orbit, OrbitData::finite([4, 4, 4], tau));
    }

    #[test]
    fn printed_matrices_agree() {
        let cmp = compare_printed_n5().unwrap();
        assert_eq!(cmp.len(), 6);
        for c in &cmp {
            assert!(c.same_map && c.t_minus_matches, "{c:?}");
        }
    }

    #[test]
    fn linear_parts_fix_the_cubic_with_unit_multiplier() {
        let (sol, maps) = six_maps_n5().unwrap();
        for sigma in Perm3::all() {
            let l = linear_part(&maps, sigma);
            let res = restriction_of(&l, &sol.field).unwrap();
            assert!(res.a.is_one(), "{sigma}");
            assert!(l.compose(maps[&Perm3::ID].map.t_minus()).eq_up_to_scalar(maps[&sigma].map.t_minus()));
        }
    }
}

//! The projective plane over a number field, the three Cremona involutions,
//! quadratic maps `T- . J . (T+)^-1`, and orbit data.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::{NFElem, NumberField};
use crate::perm::Perm3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("point is the indeterminacy point p{0}+")]
    Indeterminate(usize),
    #[error("map is not basic (kind {0:?})")]
    NotBasic(CremonaKind),
    #[error("matrix is singular")]
    Singular,
    #[error("all homogeneous coordinates vanish")]
    ZeroPoint,
}

/// Point of P^2, stored with its last nonzero coordinate scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint {
    coords: [NFElem; 3],
}

impl ProjPoint {
    pub fn new(coords: [NFElem; 3]) -> Result<Self, PlaneError> {
        let last = coords.iter().rposition(|c| !c.is_zero()).ok_or(PlaneError::ZeroPoint)?;
        let inv = coords[last].inverse().map_err(|_| PlaneError::ZeroPoint)?;
        Ok(ProjPoint { coords: coords.map(|c| &c * &inv) })
    }

    pub fn from_ints(field: &Arc<NumberField>, c: [i64; 3]) -> Result<Self, PlaneError> {
        Self::new(c.map(|x| NFElem::from_int(field, x)))
    }

    /// Coordinate point e_i, i in 1..=3.
    pub fn coordinate(field: &Arc<NumberField>, i: usize) -> Self {
        let mut c = [0i64; 3];
        c[i - 1] = 1;
        Self::from_ints(field, c).unwrap()
    }

    pub fn coords(&self) -> &[NFElem; 3] {
        &self.coords
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.coords[0].field()
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.coords[i].to_f64())
    }

    /// Random point with small rational coordinates in the given field.
    pub fn random<R: Rng>(field: &Arc<NumberField>, rng: &mut R) -> Self {
        loop {
            let c = [(); 3].map(|_| random_elem(field, rng));
            if let Ok(p) = Self::new(c) {
                return p;
            }
        }
    }
}

pub fn random_elem<R: Rng>(field: &Arc<NumberField>, rng: &mut R) -> NFElem {
    let coeffs = (0..field.degree())
        .map(|_| BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=7))))
        .collect();
    NFElem::from_coeffs(field, coeffs)
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// Line `l . x = 0` in P^2.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Line {
    pub coeffs: [NFElem; 3],
}

impl Line {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        dot(&self.coeffs, p.coords()).is_zero()
    }
}

fn dot(a: &[NFElem; 3], b: &[NFElem; 3]) -> NFElem {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

/// Invertible 3x3 matrix over a number field, acting on column vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjLinearMap {
    m: [[NFElem; 3]; 3],
}

impl Serialize for ProjLinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

impl ProjLinearMap {
    pub fn new(m: [[NFElem; 3]; 3]) -> Result<Self, PlaneError> {
        let map = ProjLinearMap { m };
        if map.det().is_zero() {
            return Err(PlaneError::Singular);
        }
        Ok(map)
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        let m = [0, 1, 2].map(|i| [0, 1, 2].map(|j| NFElem::from_int(field, i64::from(i == j))));
        ProjLinearMap { m }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: [[NFElem; 3]; 3]) -> Result<Self, PlaneError> {
        Self::new([0, 1, 2].map(|i| [0, 1, 2].map(|j| cols[j][i].clone())))
    }

    pub fn entries(&self) -> &[[NFElem; 3]; 3] {
        &self.m
    }

    pub fn column(&self, j: usize) -> [NFElem; 3] {
        [0, 1, 2].map(|i| self.m[i][j].clone())
    }

    pub fn det(&self) -> NFElem {
        let m = &self.m;
        let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
        let t0 = &m[0][0] * &minor(1, 2, 2, 1);
        let t1 = &m[0][1] * &minor(0, 2, 2, 0);
        let t2 = &m[0][2] * &minor(0, 1, 1, 0);
        &(&t0 - &t1) + &t2
    }

    pub fn apply_vec(&self, v: &[NFElem; 3]) -> [NFElem; 3] {
        [0, 1, 2].map(|i| dot(&self.m[i], v))
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.apply_vec(p.coords())).expect("invertible map sends points to points")
    }

    /// `self . other`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = [0, 1, 2].map(|i| [0, 1, 2].map(|j| dot(&self.m[i], &other.column(j))));
        ProjLinearMap { m }
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        let d = self.det().inverse().expect("nonsingular");
        let cof = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
        };
        // inverse = adj / det, adj[j][i] = cofactor(i, j)
        let inv = [0, 1, 2].map(|j| [0, 1, 2].map(|i| &cof(i, j) * &d));
        ProjLinearMap { m: inv }
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        ProjLinearMap { m: self.m.clone().map(|r| r.map(|x| &x * c)) }
    }

    /// Equal as projective transformations.
    pub fn eq_up_to_scalar(&self, other: &Self) -> bool {
        let a: Vec<&NFElem> = self.m.iter().flatten().collect();
        let b: Vec<&NFElem> = other.m.iter().flatten().collect();
        proportional(&a, &b)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.m[0][0].field()
    }
}

/// Whether two vectors are nonzero scalar multiples of each other.
pub fn proportional(a: &[&NFElem], b: &[&NFElem]) -> bool {
    let Some(k) = a.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if b[k].is_zero() {
        return false;
    }
    let ratio = b[k] / a[k];
    a.iter().zip(b).all(|(x, y)| &(*x * &ratio) == *y)
}

/// Anything that can be evaluated on points of P^2.
pub trait PlaneMap {
    fn image(&self, p: &ProjPoint) -> Result<ProjPoint, PlaneError>;
}

impl PlaneMap for ProjLinearMap {
    fn image(&self, p: &ProjPoint) -> Result<ProjPoint, PlaneError> {
        Ok(self.apply(p))
    }
}

impl PlaneMap for QuadraticMap {
    fn image(&self, p: &ProjPoint) -> Result<ProjPoint, PlaneError> {
        self.apply(p)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CremonaKind {
    J1,
    J2,
    J3,
}

fn cremona_vec(kind: CremonaKind, x: &[NFElem; 3]) -> [NFElem; 3] {
    let [a, b, c] = x;
    match kind {
        CremonaKind::J3 => [b * c, a * c, a * b],
        CremonaKind::J2 => [a * c, b * c, a * a],
        CremonaKind::J1 => [a * a, a * b, &(b * b) - &(a * c)],
    }
}

/// Apply one of the standard quadratic involutions.
pub fn cremona_apply(kind: CremonaKind, p: &ProjPoint) -> Result<ProjPoint, PlaneError> {
    let img = cremona_vec(kind, p.coords());
    ProjPoint::new(img).map_err(|_| {
        let idx = p.coords().iter().position(|c| !c.is_zero()).map_or(0, |i| i + 1);
        PlaneError::Indeterminate(idx)
    })
}

/// `T- . J . (T+)^-1`.
#[derive(Clone, Debug)]
pub struct QuadraticMap {
    kind: CremonaKind,
    t_plus: ProjLinearMap,
    t_minus: ProjLinearMap,
    t_plus_inv: ProjLinearMap,
}

impl Serialize for QuadraticMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadraticMap", 3)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("t_minus", &self.t_minus)?;
        st.serialize_field("t_plus", &self.t_plus)?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalData {
    pub p_plus: [ProjPoint; 3],
    pub p_minus: [ProjPoint; 3],
    pub exc_lines: [Line; 3],
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum OrbitLength {
    Finite(usize),
    /// No indeterminacy point reached within this many iterations.
    InfiniteAtBound(usize),
}

impl OrbitLength {
    pub fn finite(self) -> Option<usize> {
        match self {
            OrbitLength::Finite(n) => Some(n),
            OrbitLength::InfiniteAtBound(_) => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OrbitData {
    pub lengths: [OrbitLength; 3],
    /// `None` unless every length is finite.
    pub sigma: Option<Perm3>,
}

impl OrbitData {
    pub fn finite(lengths: [usize; 3], sigma: Perm3) -> Self {
        OrbitData { lengths: lengths.map(OrbitLength::Finite), sigma: Some(sigma) }
    }

    pub fn finite_lengths(&self) -> Option<[usize; 3]> {
        let [a, b, c] = self.lengths.map(OrbitLength::finite);
        Some([a?, b?, c?])
    }

    /// Data of the inverse map: lengths `n_{sigma^-1(i)}` and `sigma^-1`.
    pub fn inverse(&self) -> Option<Self> {
        let s = self.sigma?;
        let inv = s.inverse();
        let lengths = [1, 2, 3].map(|i| self.lengths[inv.apply(i) - 1]);
        Some(OrbitData { lengths, sigma: Some(inv) })
    }
}

impl fmt::Display for OrbitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self
            .lengths
            .iter()
            .map(|x| match x {
                OrbitLength::Finite(n) => n.to_string(),
                OrbitLength::InfiniteAtBound(b) => format!(">{b}"),
            })
            .collect();
        match self.sigma {
            Some(s) => write!(f, "({}, {s})", l.join(", ")),
            None => write!(f, "({})", l.join(", ")),
        }
    }
}

impl QuadraticMap {
    pub fn new(kind: CremonaKind, t_minus: ProjLinearMap, t_plus: ProjLinearMap) -> Self {
        let t_plus_inv = t_plus.inverse();
        QuadraticMap { kind, t_plus, t_minus, t_plus_inv }
    }

    pub fn basic(t_minus: ProjLinearMap, t_plus: ProjLinearMap) -> Self {
        Self::new(CremonaKind::J3, t_minus, t_plus)
    }

    pub fn kind(&self) -> CremonaKind {
        self.kind
    }

    pub fn t_plus(&self) -> &ProjLinearMap {
        &self.t_plus
    }

    pub fn t_minus(&self) -> &ProjLinearMap {
        &self.t_minus
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.t_plus.field()
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, PlaneError> {
        let y = self.t_plus_inv.apply_vec(p.coords());
        let j = cremona_vec(self.kind, &y);
        if j.iter().all(NFElem::is_zero) {
            let idx = y.iter().position(|c| !c.is_zero()).map_or(0, |i| i + 1);
            return Err(PlaneError::Indeterminate(idx));
        }
        Ok(ProjPoint::new(self.t_minus.apply_vec(&j)).expect("nonzero image"))
    }

    fn require_basic(&self) -> Result<(), PlaneError> {
        match self.kind {
            CremonaKind::J3 => Ok(()),
            k => Err(PlaneError::NotBasic(k)),
        }
    }

    pub fn inverse(&self) -> Result<Self, PlaneError> {
        self.require_basic()?;
        Ok(Self::basic(self.t_plus.clone(), self.t_minus.clone()))
    }

    /// `l . self` for a linear map `l`.
    pub fn post_compose(&self, l: &ProjLinearMap) -> Self {
        Self::new(self.kind, l.compose(&self.t_minus), self.t_plus.clone())
    }

    pub fn p_plus(&self, i: usize) -> ProjPoint {
        ProjPoint::new(self.t_plus.column(i - 1)).unwrap()
    }

    pub fn p_minus(&self, i: usize) -> ProjPoint {
        ProjPoint::new(self.t_minus.column(i - 1)).unwrap()
    }

    pub fn exceptional_data(&self) -> Result<ExceptionalData, PlaneError> {
        self.require_basic()?;
        Ok(ExceptionalData {
            p_plus: [1, 2, 3].map(|i| self.p_plus(i)),
            p_minus: [1, 2, 3].map(|i| self.p_minus(i)),
            exc_lines: [0, 1, 2].map(|i| Line { coeffs: self.t_plus_inv.entries()[i].clone() }),
        })
    }

    /// The three components as quadratic forms in the monomials
    /// x1^2, x2^2, x3^2, x1x2, x1x3, x2x3.
    pub fn quadratic_components(&self) -> [[NFElem; 6]; 3] {
        let a = self.t_plus_inv.entries();
        let field = self.field();
        // product of linear forms a[r] and a[s] as a quadratic form
        let prod = |r: usize, s: usize| -> [NFElem; 6] {
            let (u, v) = (&a[r], &a[s]);
            [
                &u[0] * &v[0],
                &u[1] * &v[1],
                &u[2] * &v[2],
                &(&u[0] * &v[1]) + &(&u[1] * &v[0]),
                &(&u[0] * &v[2]) + &(&u[2] * &v[0]),
                &(&u[1] * &v[2]) + &(&u[2] * &v[1]),
            ]
        };
        let j: [[NFElem; 6]; 3] = match self.kind {
            CremonaKind::J3 => [prod(1, 2), prod(0, 2), prod(0, 1)],
            CremonaKind::J2 => [prod(0, 2), prod(1, 2), prod(0, 0)],
            CremonaKind::J1 => {
                let bb = prod(1, 1);
                let ac = prod(0, 2);
                let diff = [0, 1, 2, 3, 4, 5].map(|k| &bb[k] - &ac[k]);
                [prod(0, 0), prod(0, 1), diff]
            }
        };
        let tm = self.t_minus.entries();
        [0, 1, 2].map(|i| {
            [0, 1, 2, 3, 4, 5].map(|k| {
                (0..3).fold(NFElem::zero(field), |acc, l| &acc + &(&tm[i][l] * &j[l][k]))
            })
        })
    }

    /// Equal as rational maps.
    pub fn eq_as_maps(&self, other: &Self) -> bool {
        let a = self.quadratic_components();
        let b = other.quadratic_components();
        proportional(&a.iter().flatten().collect::<Vec<_>>(), &b.iter().flatten().collect::<Vec<_>>())
    }

    /// Orbit data by exact tracking of the points `f(E_i+)`.
    pub fn orbit_data(&self, max_iter: usize) -> OrbitData {
        match self.kind {
            CremonaKind::J3 => {
                let plus: Vec<ProjPoint> = (1..=3).map(|i| self.p_plus(i)).collect();
                let mut lengths = [OrbitLength::InfiniteAtBound(max_iter); 3];
                let mut images = [0u8; 3];
                for i in 0..3 {
                    if let Some((n, j)) = self.track(self.p_minus(i + 1), &plus, max_iter) {
                        lengths[i] = OrbitLength::Finite(n);
                        images[i] = j as u8;
                    }
                }
                let sigma = lengths
                    .iter()
                    .all(|l| l.finite().is_some())
                    .then(|| Perm3::from_images(images))
                    .flatten();
                OrbitData { lengths, sigma }
            }
            // J2 collapses E1 to e2 and E3 to e3; J1 collapses E1 to e3.
            CremonaKind::J2 => {
                let plus = [self.p_plus(2), self.p_plus(3)];
                let n1 = self.track(self.p_minus(2), &plus, max_iter).map(|x| x.0);
                let n3 = self.track(self.p_minus(3), &plus, max_iter).map(|x| x.0);
                let len = |n: Option<usize>| n.map_or(OrbitLength::InfiniteAtBound(max_iter), OrbitLength::Finite);
                let lengths = [len(n1), len(n1), len(n3)];
                let sigma = (n1.is_some() && n3.is_some()).then_some(Perm3::ID);
                OrbitData { lengths, sigma }
            }
            CremonaKind::J1 => {
                let plus = [self.p_plus(3)];
                let n1 = self.track(self.p_minus(3), &plus, max_iter).map(|x| x.0);
                let l = n1.map_or(OrbitLength::InfiniteAtBound(max_iter), OrbitLength::Finite);
                OrbitData { lengths: [l; 3], sigma: n1.map(|_| Perm3::ID) }
            }
        }
    }

    /// Number of points in the forward orbit of `start` up to and including
    /// the first member of `targets`, with that member's index.
    fn track(&self, start: ProjPoint, targets: &[ProjPoint], max_iter: usize) -> Option<(usize, usize)> {
        let mut x = start;
        for n in 1..=max_iter {
            if let Some(j) = targets.iter().position(|t| *t == x) {
                return Some((n, j));
            }
            x = self.apply(&x).ok()?;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::IntPolynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    #[test]
    fn cremona_examples() {
        let k = q();
        let p = ProjPoint::from_ints(&k, [1, 2, 3]).unwrap();
        assert_eq!(cremona_apply(CremonaKind::J3, &p).unwrap(), ProjPoint::from_ints(&k, [6, 3, 2]).unwrap());
        let one = ProjPoint::from_ints(&k, [1, 1, 1]).unwrap();
        assert_eq!(cremona_apply(CremonaKind::J2, &one).unwrap(), one);
        let e1 = ProjPoint::coordinate(&k, 1);
        assert_eq!(cremona_apply(CremonaKind::J3, &e1), Err(PlaneError::Indeterminate(1)));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = ProjPoint::random(&k, &mut rng);
            for kind in [CremonaKind::J1, CremonaKind::J2, CremonaKind::J3] {
                if let Ok(img) = cremona_apply(kind, &p) {
                    if let Ok(back) = cremona_apply(kind, &img) {
                        assert_eq!(back, p, "{kind:?}");
                    }
                }
            }
        }
    }

    fn random_map(k: &Arc<NumberField>, rng: &mut ChaCha8Rng) -> QuadraticMap {
        let mut lin = || loop {
            let m = [(); 3].map(|_| [(); 3].map(|_| random_elem(k, rng)));
            if let Ok(l) = ProjLinearMap::new(m) {
                return l;
            }
        };
        QuadraticMap::basic(lin(), lin())
    }

    #[test]
    fn inverse_composes_to_identity() {
        let k = NumberField::with_largest_real_root(IntPolynomial::from_i64(&[1, -2, 1, -2, 1])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2022);
        let f = random_map(&k, &mut rng);
        let g = f.inverse().unwrap();
        assert!(g.inverse().unwrap().eq_as_maps(&f));
        for _ in 0..5 {
            let p = ProjPoint::random(&k, &mut rng);
            assert_eq!(g.apply(&f.apply(&p).unwrap()).unwrap(), p);
        }
        let ex = f.exceptional_data().unwrap();
        let gx = g.exceptional_data().unwrap();
        assert_eq!(ex.p_plus, gx.p_minus);
        // points of E1+ collapse onto p1-
        let line = &ex.exc_lines[0];
        assert!(line.contains(&ex.p_plus[1]) && line.contains(&ex.p_plus[2]));
        let a = &ex.p_plus[1];
        let b = &ex.p_plus[2];
        for w in [2i64, -5] {
            let c = [0, 1, 2].map(|i| &a.coords()[i] + &(&b.coords()[i] * &NFElem::from_int(&k, w)));
            let p = ProjPoint::new(c).unwrap();
            assert_eq!(f.apply(&p).unwrap(), ex.p_minus[0]);
        }
        assert!(matches!(f.apply(&ex.p_plus[0]), Err(PlaneError::Indeterminate(1))));
    }

    #[test]
    fn identity_linear_parts_give_j3() {
        let k = q();
        let id = ProjLinearMap::identity(&k);
        let f = QuadraticMap::basic(id.clone(), id);
        let p = ProjPoint::from_ints(&k, [1, 2, 3]).unwrap();
        assert_eq!(f.apply(&p).unwrap(), cremona_apply(CremonaKind::J3, &p).unwrap());
        let ex = f.exceptional_data().unwrap();
        assert_eq!(ex.p_plus[2], ProjPoint::coordinate(&k, 3));
        // J3 itself: each E_i collapses straight onto e_i, so orbit length 1
        assert_eq!(f.orbit_data(5), OrbitData::finite([1, 1, 1], Perm3::ID));
    }

    #[test]
    fn generic_map_has_no_finite_orbits() {
        let k = q();
        let mut rng = ChaCha8Rng::seed_from_u64(2022);
        let f = random_map(&k, &mut rng);
        let d = f.orbit_data(8);
        assert!(d.lengths.iter().all(|l| *l == OrbitLength::InfiniteAtBound(8)));
        assert_eq!(d.sigma, None);
    }

    #[test]
    fn non_basic_kinds() {
        let k = q();
        let id = ProjLinearMap::identity(&k);
        let f = QuadraticMap::new(CremonaKind::J2, id.clone(), id);
        assert_eq!(f.inverse().unwrap_err(), PlaneError::NotBasic(CremonaKind::J2));
        let d = f.orbit_data(4);
        assert_eq!(d.sigma, Some(Perm3::ID));
        assert_eq!(d.lengths[0], d.lengths[1]);
    }
}

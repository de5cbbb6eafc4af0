//! Words in the cubic-fixing quadratic automorphisms, their Picard and
//! birational evaluations, and a bounded certification of the group they
//! generate.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{spectral_radius, LatticeIsometry};
use crate::cubic::restriction_of;
use crate::diller::{solve_parameters, DillerError, DillerSolution};
use crate::exactnum::{Enclosure, ExactError, NFElem};
use crate::perm::{Perm3, PermError};
use crate::picard::{induced_action, linear_induced_action, GeometricBasis, PicardError};
use crate::planemaps::{PlaneError, PlaneMap, ProjLinearMap, ProjPoint, QuadraticMap};

pub const DEFAULT_SEED: u64 = 2022;
pub const SAMPLE_POINTS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("relation failed: {0}")]
    RelationFailed(String),
    #[error("no generator labelled {0}")]
    UnknownGenerator(Perm3),
    #[error("cannot parse word {0:?}")]
    Parse(String),
    #[error(transparent)]
    Diller(#[from] DillerError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<PermError> for GroupError {
    fn from(e: PermError) -> Self {
        GroupError::Parse(e.to_string())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Letter {
    pub label: Perm3,
    pub inverse: bool,
}

/// `f_{a1} f_{a2} ...` as a composition of maps (the last letter acts first).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize)]
pub struct GenWord(pub Vec<Letter>);

impl GenWord {
    pub fn letter(label: Perm3, inverse: bool) -> Self {
        GenWord(vec![Letter { label, inverse }])
    }

    pub fn then(mut self, other: &GenWord) -> Self {
        self.0.extend_from_slice(&other.0);
        self
    }

    pub fn inverse(&self) -> Self {
        GenWord(self.0.iter().rev().map(|l| Letter { label: l.label, inverse: !l.inverse }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.inverse { format!("f{}^-1", l.label) } else { format!("f{}", l.label) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Whitespace-separated letters such as `f(12) fid^-1 (123)`.
impl FromStr for GenWord {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(GenWord::default());
        }
        t.split_whitespace()
            .map(|tok| {
                let (body, inverse) = match tok.strip_suffix("^-1") {
                    Some(b) => (b, true),
                    None => (tok, false),
                };
                let body = body.strip_prefix('f').unwrap_or(body);
                let body = body.strip_prefix('_').unwrap_or(body);
                Ok(Letter { label: body.parse()?, inverse })
            })
            .collect::<Result<_, GroupError>>()
            .map(GenWord)
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: Perm3,
    pub tau: Perm3,
    pub sigma: Perm3,
    pub map: QuadraticMap,
    pub inverse_map: QuadraticMap,
    pub pullback: LatticeIsometry,
    pub pullback_inverse: LatticeIsometry,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Labelling {
    /// One generator per orbit-data permutation `sigma = tau^n`.
    BySigma,
    /// One generator per line rotation `tau`.
    ByTau,
}

/// Generators for one `n`, all acting on the same blowup of `3n` points.
#[derive(Clone, Debug)]
pub struct GroupContext {
    pub n: usize,
    pub labelling: Labelling,
    pub solution: DillerSolution,
    pub basis: GeometricBasis,
    pub gens: BTreeMap<Perm3, Generator>,
    /// Construction failures, by `tau`.
    pub rejected: Vec<(Perm3, String)>,
    pub base: Perm3,
}

impl GroupContext {
    pub fn new(n: usize, labelling: Labelling) -> Result<Self, GroupError> {
        let solution = solve_parameters(n)?;
        let basis = GeometricBasis::from_solution(&solution);
        let mut gens = BTreeMap::new();
        let mut rejected = Vec::new();
        for tau in Perm3::all() {
            let m = match solution.construct(tau) {
                Ok(m) => m,
                Err(e) => {
                    rejected.push((tau, e.to_string()));
                    continue;
                }
            };
            let label = match labelling {
                Labelling::BySigma => m.sigma,
                Labelling::ByTau => tau,
            };
            // the first tau in the fixed order wins a shared sigma
            if gens.contains_key(&label) {
                continue;
            }
            let pullback = induced_action(&m.map, &basis)?;
            let inverse_map = m.map.inverse()?;
            gens.insert(
                label,
                Generator {
                    label,
                    tau,
                    sigma: m.sigma,
                    pullback_inverse: pullback.inverse(),
                    pullback,
                    inverse_map,
                    map: m.map,
                },
            );
        }
        let base = if gens.contains_key(&Perm3::ID) {
            Perm3::ID
        } else {
            *gens.keys().next().ok_or_else(|| GroupError::RelationFailed("no generator could be constructed".into()))?
        };
        Ok(GroupContext { n, labelling, solution, basis, gens, rejected, base })
    }

    pub fn n5() -> Result<Self, GroupError> {
        Self::new(5, Labelling::BySigma)
    }

    fn gen(&self, label: Perm3) -> Result<&Generator, GroupError> {
        self.gens.get(&label).ok_or(GroupError::UnknownGenerator(label))
    }

    pub fn alpha(&self) -> &NFElem {
        &self.solution.alpha
    }

    /// Pullback of the composite map.
    pub fn eval_lattice(&self, w: &GenWord) -> Result<LatticeIsometry, GroupError> {
        let mut acc = LatticeIsometry::identity(3 * self.n);
        for l in &w.0 {
            let g = self.gen(l.label)?;
            let m = if l.inverse { &g.pullback_inverse } else { &g.pullback };
            acc = m.compose(&acc);
        }
        Ok(acc)
    }

    pub fn eval_birational(&self, w: &GenWord) -> Result<Composite, GroupError> {
        let maps = w
            .0
            .iter()
            .map(|l| {
                let g = self.gen(l.label)?;
                Ok(if l.inverse { g.inverse_map.clone() } else { g.map.clone() })
            })
            .collect::<Result<_, GroupError>>()?;
        Ok(Composite { maps })
    }

    /// `L_g = f_g . f_base^-1` as a linear map.
    pub fn linear_part(&self, label: Perm3) -> Result<ProjLinearMap, GroupError> {
        let g = self.gen(label)?;
        let b = self.gen(self.base)?;
        Ok(g.map.t_minus().compose(&b.map.t_minus().inverse()))
    }

    pub fn linear_word(&self, label: Perm3) -> GenWord {
        GenWord::letter(label, false).then(&GenWord::letter(self.base, true))
    }

    pub fn sample_points(&self, seed: u64) -> Vec<ProjPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLE_POINTS).map(|_| ProjPoint::random(&self.solution.field, &mut rng)).collect()
    }

    pub fn labels(&self) -> Vec<Perm3> {
        self.gens.keys().copied().collect()
    }

    /// Product of the letters' restriction multipliers.
    pub fn word_determinant(&self, w: &GenWord) -> NFElem {
        let a = self.alpha();
        let k: i64 = w.0.iter().map(|l| if l.inverse { -1 } else { 1 }).sum();
        a.pow(k).expect("alpha is a unit")
    }

    pub fn word_dyndeg(&self, w: &GenWord, eps: &BigRational) -> Result<Enclosure, GroupError> {
        Ok(spectral_radius(&self.eval_lattice(w)?, eps)?)
    }
}

/// Maps applied right to left.
#[derive(Clone, Debug)]
pub struct Composite {
    pub maps: Vec<QuadraticMap>,
}

impl PlaneMap for Composite {
    fn image(&self, p: &ProjPoint) -> Result<ProjPoint, PlaneError> {
        self.maps.iter().rev().try_fold(p.clone(), |x, f| f.apply(&x))
    }
}

/// Whether two maps agree on every sample point where both are defined.
/// `None` when no sample point is regular for both.
pub fn agree_on<A: PlaneMap, B: PlaneMap>(a: &A, b: &B, pts: &[ProjPoint]) -> Option<bool> {
    let mut checked = 0;
    for p in pts {
        if let (Ok(x), Ok(y)) = (a.image(p), b.image(p)) {
            if x != y {
                return Some(false);
            }
            checked += 1;
        }
    }
    (checked > 0).then_some(true)
}

struct Identity;

impl PlaneMap for Identity {
    fn image(&self, p: &ProjPoint) -> Result<ProjPoint, PlaneError> {
        Ok(p.clone())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub lattice: bool,
    pub birational: bool,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.lattice && self.birational
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCertificate {
    pub checks: Vec<RelationCheck>,
    pub distinct_linear_parts: usize,
}

impl RelationCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(RelationCheck::passed)
    }

    pub fn require(&self) -> Result<(), GroupError> {
        match self.checks.iter().find(|c| !c.passed()) {
            Some(c) => Err(GroupError::RelationFailed(c.relation.clone())),
            None => Ok(()),
        }
    }
}

fn p3(s: &str) -> Perm3 {
    s.parse().expect("static label")
}

/// The dihedral relations among the six linear parts for `n = 5`.
pub fn verify_dihedral(ctx: &GroupContext) -> Result<RelationCertificate, GroupError> {
    verify_dihedral_seeded(ctx, DEFAULT_SEED)
}

pub fn verify_dihedral_seeded(ctx: &GroupContext, seed: u64) -> Result<RelationCertificate, GroupError> {
    let pts = ctx.sample_points(seed);
    let mut checks = Vec::new();
    let lat = |s: Perm3| ctx.eval_lattice(&ctx.linear_word(s));
    // L_g as a word agrees with the linear map, in both representations
    for &s in ctx.gens.keys() {
        let l = ctx.linear_part(s)?;
        let direct = linear_induced_action(&l, &ctx.basis)?;
        checks.push(RelationCheck {
            relation: format!("f{s} f{}^-1 = L{s}", ctx.base),
            lattice: lat(s)? == direct,
            birational: agree_on(&ctx.eval_birational(&ctx.linear_word(s))?, &l, &pts) == Some(true),
        });
    }
    let mut power = |label: &str, k: i64| -> Result<(), GroupError> {
        let s = p3(label);
        let l = ctx.linear_part(s)?;
        let lk = (1..k).fold(l.clone(), |acc, _| acc.compose(&l));
        checks.push(RelationCheck {
            relation: format!("L{label}^{k} = Id"),
            lattice: lat(s)?.pow(k).is_identity(),
            birational: lk.eq_up_to_scalar(&ProjLinearMap::identity(&ctx.solution.field)),
        });
        Ok(())
    };
    for (label, k) in [("(12)", 2), ("(23)", 2), ("(13)", 2), ("(123)", 3), ("(132)", 3)] {
        power(label, k)?;
    }
    let (a, b) = (p3("(123)"), p3("(132)"));
    checks.push(RelationCheck {
        relation: "L(123)^-1 = L(132)".into(),
        lattice: lat(a)?.inverse() == lat(b)?,
        birational: ctx.linear_part(a)?.inverse().eq_up_to_scalar(&ctx.linear_part(b)?),
    });
    let distinct: HashSet<LatticeIsometry> = ctx.gens.keys().map(|&s| lat(s)).collect::<Result<_, _>>()?;
    Ok(RelationCertificate { checks, distinct_linear_parts: distinct.len() })
}

/// `L_g . f_base = f_base . L_g` for every generator.
pub fn verify_commutation(ctx: &GroupContext) -> Result<RelationCertificate, GroupError> {
    verify_commutation_seeded(ctx, DEFAULT_SEED + 1)
}

pub fn verify_commutation_seeded(ctx: &GroupContext, seed: u64) -> Result<RelationCertificate, GroupError> {
    let pts = ctx.sample_points(seed);
    let base = GenWord::letter(ctx.base, false);
    let mut checks = Vec::new();
    for &s in ctx.gens.keys() {
        let lw = ctx.linear_word(s);
        let left = lw.clone().then(&base);
        let right = base.clone().then(&lw);
        let l = ctx.linear_part(s)?;
        let f = &ctx.gen(ctx.base)?.map;
        let lf = f.post_compose(&l);
        let fl = LinearThen { first: l, then: f.clone() };
        checks.push(RelationCheck {
            relation: format!("L{s} f{b} = f{b} L{s}", b = ctx.base),
            lattice: ctx.eval_lattice(&left)? == ctx.eval_lattice(&right)?,
            birational: agree_on(&lf, &fl, &pts) == Some(true),
        });
    }
    Ok(RelationCertificate { checks, distinct_linear_parts: ctx.gens.len() })
}

struct LinearThen {
    first: ProjLinearMap,
    then: QuadraticMap,
}

impl PlaneMap for LinearThen {
    fn image(&self, p: &ProjPoint) -> Result<ProjPoint, PlaneError> {
        self.then.apply(&self.first.apply(p))
    }
}

/// `L . f_base^power` with `L` an element of the linear quotient.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct NormalForm {
    /// Index into [`LinearQuotient::elements`].
    pub linear: usize,
    pub power: i64,
}

/// The finite group generated by the linear parts, as pullback matrices.
#[derive(Clone, Debug)]
pub struct LinearQuotient {
    pub elements: Vec<LatticeIsometry>,
    /// Element index of `L_g` for each generator label.
    pub of_generator: BTreeMap<Perm3, usize>,
    /// `table[i][j]` is the index of the map composite `L_i . L_j`.
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    /// Generator labels whose linear part equals each element, where one does.
    pub names: Vec<Option<Perm3>>,
}

impl LinearQuotient {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.table[x][i];
            k += 1;
        }
        k
    }
}

/// Closure of the pullbacks of `L_g`, identity first.
pub fn linear_quotient(ctx: &GroupContext, max_order: usize) -> Result<LinearQuotient, GroupError> {
    let id = LatticeIsometry::identity(3 * ctx.n);
    let mut elements = vec![id];
    let mut index: HashMap<LatticeIsometry, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut of_generator = BTreeMap::new();
    let gens: Vec<LatticeIsometry> = ctx
        .gens
        .keys()
        .map(|&s| ctx.eval_lattice(&ctx.linear_word(s)))
        .collect::<Result<_, _>>()?;
    for (&s, g) in ctx.gens.keys().zip(&gens) {
        let k = *index.entry(g.clone()).or_insert_with(|| {
            elements.push(g.clone());
            elements.len() - 1
        });
        of_generator.insert(s, k);
    }
    let mut i = 0;
    while i < elements.len() {
        for g in &gens {
            // pullback of (L_i . g) is g* . L_i*
            let x = g.compose(&elements[i]);
            if !index.contains_key(&x) {
                if elements.len() >= max_order {
                    return Err(GroupError::RelationFailed(format!("linear parts generate more than {max_order} elements")));
                }
                index.insert(x.clone(), elements.len());
                elements.push(x);
            }
        }
        i += 1;
    }
    let n = elements.len();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| index[&elements[j].compose(&elements[i])]).collect())
        .collect();
    let inverse = (0..n).map(|i| index[&elements[i].inverse()]).collect();
    let mut names = vec![None; n];
    for (&s, &k) in &of_generator {
        names[k].get_or_insert(s);
    }
    Ok(LinearQuotient { elements, of_generator, table, inverse, names })
}

/// Rewrite `w` using `f_g = L_g . f_base` and `L_g f_base = f_base L_g`.
pub fn normal_form(q: &LinearQuotient, w: &GenWord) -> NormalForm {
    let mut linear = 0;
    let mut power = 0;
    for l in &w.0 {
        let g = q.of_generator[&l.label];
        if l.inverse {
            linear = q.table[linear][q.inverse[g]];
            power -= 1;
        } else {
            linear = q.table[linear][g];
            power += 1;
        }
    }
    NormalForm { linear, power }
}

/// Pullback of `L . f_base^k`.
pub fn eval_normal_form(ctx: &GroupContext, q: &LinearQuotient, nf: NormalForm) -> Result<LatticeIsometry, GroupError> {
    let fk = ctx.gen(ctx.base)?.pullback.pow(nf.power);
    Ok(fk.compose(&q.elements[nf.linear]))
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub max_len: usize,
    pub words_checked_exhaustively: usize,
    pub exhaustive_len: usize,
    pub distinct_matrices: usize,
    pub distinct_normal_forms: usize,
    pub sound: bool,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.sound && self.distinct_matrices == self.distinct_normal_forms
    }
}

fn all_letters(ctx: &GroupContext) -> Vec<Letter> {
    ctx.gens.keys().flat_map(|&label| [false, true].map(|inverse| Letter { label, inverse })).collect()
}

/// Every word up to `exhaustive_len` is evaluated directly; longer words up
/// to `max_len` are explored through their normal forms, each new state's
/// matrix obtained by one multiplication and compared with the normal form's
/// own evaluation.
pub fn enumerate_normal_forms(
    ctx: &GroupContext,
    q: &LinearQuotient,
    max_len: usize,
    exhaustive_len: usize,
) -> Result<EnumerationReport, GroupError> {
    let letters = all_letters(ctx);
    let mut sound = true;
    let mut words_checked = 0;
    let mut frontier = vec![GenWord::default()];
    for _ in 0..exhaustive_len.min(max_len) {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for w in &frontier {
            for &l in &letters {
                let mut v = w.clone();
                v.0.push(l);
                let direct = ctx.eval_lattice(&v)?;
                let nf = normal_form(q, &v);
                sound &= direct == eval_normal_form(ctx, q, nf)?;
                words_checked += 1;
                next.push(v);
            }
        }
        frontier = next;
    }
    let mut seen: HashMap<NormalForm, LatticeIsometry> = HashMap::new();
    let id = NormalForm { linear: 0, power: 0 };
    seen.insert(id, LatticeIsometry::identity(3 * ctx.n));
    let mut states = vec![id];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for nf in &states {
            let m = seen[nf].clone();
            for &l in &letters {
                let g = ctx.gen(l.label)?;
                let step = if l.inverse { &g.pullback_inverse } else { &g.pullback };
                let x = step.compose(&m);
                let g_idx = q.of_generator[&l.label];
                let new_nf = if l.inverse {
                    NormalForm { linear: q.table[nf.linear][q.inverse[g_idx]], power: nf.power - 1 }
                } else {
                    NormalForm { linear: q.table[nf.linear][g_idx], power: nf.power + 1 }
                };
                match seen.get(&new_nf) {
                    Some(prev) => sound &= *prev == x,
                    None => {
                        sound &= eval_normal_form(ctx, q, new_nf)? == x;
                        seen.insert(new_nf, x);
                        next.push(new_nf);
                    }
                }
            }
        }
        states = next;
    }
    let matrices: HashSet<&LatticeIsometry> = seen.values().collect();
    Ok(EnumerationReport {
        max_len,
        words_checked_exhaustively: words_checked,
        exhaustive_len: exhaustive_len.min(max_len),
        distinct_matrices: matrices.len(),
        distinct_normal_forms: seen.len(),
        sound,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum StructureLabel {
    #[serde(rename = "D3 x| Z")]
    D3SemiZ,
    #[serde(rename = "(Z/2Z)^2 x| Z")]
    KleinSemiZ,
    #[serde(rename = "Z/3Z x| Z")]
    Z3SemiZ,
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "unmatched")]
    Unmatched,
}

impl fmt::Display for StructureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureLabel::D3SemiZ => "D3 x| Z",
            StructureLabel::KleinSemiZ => "(Z/2Z)^2 x| Z",
            StructureLabel::Z3SemiZ => "Z/3Z x| Z",
            StructureLabel::Z => "Z",
            StructureLabel::Unmatched => "unmatched",
        })
    }
}

/// Expected shape of each catalogued label: quadratic generators, order of
/// the linear quotient, and whether it is abelian with exponent <= 2.
const CATALOGUE: [(StructureLabel, usize, usize, Option<bool>); 4] = [
    (StructureLabel::D3SemiZ, 6, 6, Some(false)),
    (StructureLabel::KleinSemiZ, 3, 4, Some(true)),
    (StructureLabel::Z3SemiZ, 3, 3, None),
    (StructureLabel::Z, 1, 1, None),
];

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub n: usize,
    pub labelling: Labelling,
    /// `(label, tau, sigma)` per generator.
    pub generators: Vec<(Perm3, Perm3, Perm3)>,
    pub rejected_tau: Vec<(Perm3, String)>,
    pub linear_quotient_order: usize,
    pub linear_quotient_abelian: bool,
    pub linear_element_orders: Vec<usize>,
    pub commutation: bool,
    pub enumeration: EnumerationReport,
    /// The linear parts commute with `f_base`, so the product is direct.
    pub direct_product: bool,
    pub label: StructureLabel,
    pub evidence: Vec<String>,
}

pub fn classify_context(ctx: &GroupContext, max_len: usize) -> Result<Classification, GroupError> {
    let q = linear_quotient(ctx, 64)?;
    let commutation = verify_commutation(ctx)?.passed();
    let enumeration = enumerate_normal_forms(ctx, &q, max_len, max_len.min(3))?;
    let orders: Vec<usize> = (0..q.order()).map(|i| q.element_order(i)).collect();
    let exp2 = orders.iter().all(|&o| o <= 2);
    let ngens = ctx.gens.len();
    let mut evidence = Vec::new();
    let certified = commutation && enumeration.passed();
    if !commutation {
        evidence.push("some linear part does not commute with the base generator".into());
    }
    if !enumeration.passed() {
        evidence.push(format!(
            "normal forms not certified: {} matrices vs {} normal forms, sound = {}",
            enumeration.distinct_matrices, enumeration.distinct_normal_forms, enumeration.sound
        ));
    }
    let found = CATALOGUE.iter().find(|(_, g, o, shape)| {
        *g == ngens
            && *o == q.order()
            && match shape {
                Some(false) => !q.is_abelian(),
                Some(true) => q.is_abelian() && exp2,
                None => true,
            }
    });
    let label = match (certified, found) {
        (true, Some((l, ..))) => *l,
        _ => {
            evidence.push(format!(
                "{ngens} quadratic generators; linear quotient of order {} ({}), element orders {:?}",
                q.order(),
                if q.is_abelian() { "abelian" } else { "nonabelian" },
                orders
            ));
            StructureLabel::Unmatched
        }
    };
    Ok(Classification {
        n: ctx.n,
        labelling: ctx.labelling,
        generators: ctx.gens.values().map(|g| (g.label, g.tau, g.sigma)).collect(),
        rejected_tau: ctx.rejected.clone(),
        linear_quotient_order: q.order(),
        linear_quotient_abelian: q.is_abelian(),
        linear_element_orders: orders,
        commutation,
        direct_product: commutation,
        enumeration,
        label,
        evidence,
    })
}

/// One generator per realized orbit-data permutation.
pub fn classify_subgroup(n: usize, max_len: usize) -> Result<Classification, GroupError> {
    classify_context(&GroupContext::new(n, Labelling::BySigma)?, max_len)
}

#[derive(Clone, Debug, Serialize)]
pub struct WordReport {
    pub word: String,
    pub normal_form: NormalForm,
    pub normal_form_linear: Option<Perm3>,
    pub normal_form_sound: bool,
    pub determinant: NFElem,
    pub determinant_matches_restriction: Option<bool>,
    pub dynamical_degree: [f64; 2],
    pub expected_dynamical_degree: f64,
}

/// Normal form, determinant and dynamical degree of a word, each checked
/// against an independent evaluation.
pub fn word_report(ctx: &GroupContext, q: &LinearQuotient, w: &GenWord, eps: &BigRational) -> Result<WordReport, GroupError> {
    let nf = normal_form(q, w);
    let sound = ctx.eval_lattice(w)? == eval_normal_form(ctx, q, nf)?;
    let det = ctx.word_determinant(w);
    let det_ok = if w.is_empty() {
        None
    } else {
        restriction_of(&ctx.eval_birational(w)?, &ctx.solution.field).ok().map(|r| r.a == det)
    };
    let rho = ctx.word_dyndeg(w, eps)?;
    Ok(WordReport {
        word: w.to_string(),
        normal_form: nf,
        normal_form_linear: q.names[nf.linear],
        normal_form_sound: sound,
        determinant: det,
        determinant_matches_restriction: det_ok,
        dynamical_degree: [crate::exactnum::rational_to_f64(&rho.lo), crate::exactnum::rational_to_f64(&rho.hi)],
        expected_dynamical_degree: ctx.alpha().to_f64().powi(nf.power.unsigned_abs() as i32),
    })
}

pub fn identity_agrees(c: &Composite, pts: &[ProjPoint]) -> bool {
    agree_on(c, &Identity, pts) == Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::default_eps;
    use crate::salem::enclosure_value;
    use std::sync::OnceLock;

    fn ctx() -> &'static GroupContext {
        static CTX: OnceLock<GroupContext> = OnceLock::new();
        CTX.get_or_init(|| GroupContext::n5().unwrap())
    }

    fn w(s: &str) -> GenWord {
        s.parse().unwrap()
    }

    #[test]
    fn word_parsing() {
        let x = w("f(12) fid^-1 (123)");
        assert_eq!(x.len(), 3);
        assert_eq!(x.to_string(), "f(12) fid^-1 f(123)");
        assert_eq!(w("1"), GenWord::default());
        assert!("f(14)".parse::<GenWord>().is_err());
    }

    #[test]
    fn trivial_words() {
        let c = ctx();
        assert!(c.eval_lattice(&GenWord::default()).unwrap().is_identity());
        assert!(c.eval_lattice(&w("fid fid^-1")).unwrap().is_identity());
        let pts = c.sample_points(DEFAULT_SEED);
        assert!(identity_agrees(&c.eval_birational(&w("f(13)^-1 f(13)")).unwrap(), &pts));
    }

    #[test]
    fn dihedral_and_commutation() {
        let c = ctx();
        let d = verify_dihedral(c).unwrap();
        assert!(d.passed(), "{d:?}");
        assert_eq!(d.distinct_linear_parts, 6);
        let k = verify_commutation(c).unwrap();
        assert!(k.passed(), "{k:?}");
        for a in Perm3::all() {
            for b in Perm3::all() {
                let m = c.eval_lattice(&GenWord::letter(a, false).then(&GenWord::letter(b, true))).unwrap();
                assert!(m.order(6).is_some(), "f{a} f{b}^-1");
            }
        }
    }

    #[test]
    fn normal_forms_and_invariants() {
        let c = ctx();
        let q = linear_quotient(c, 64).unwrap();
        assert_eq!(q.order(), 6);
        assert!(!q.is_abelian());
        let nf = normal_form(&q, &w("f(12) f(13)"));
        assert_eq!(nf.power, 2);
        let l12 = q.of_generator[&"(12)".parse().unwrap()];
        let l13 = q.of_generator[&"(13)".parse().unwrap()];
        assert_eq!(nf.linear, q.table[l12][l13]);
        assert_eq!(normal_form(&q, &w("fid^-1 fid^-1 fid^-1")), NormalForm { linear: 0, power: -3 });
        let rep = enumerate_normal_forms(c, &q, 6, 4).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.words_checked_exhaustively, 12 + 144 + 1728 + 20736);
        // 6 linear parts times powers -6..=6
        assert_eq!(rep.distinct_normal_forms, 6 * 13);
    }

    #[test]
    fn determinants_and_degrees() {
        let c = ctx();
        let q = linear_quotient(c, 64).unwrap();
        let eps = default_eps();
        let a = c.alpha().clone();
        assert_eq!(c.word_determinant(&w("fid")), a);
        assert!(c.word_determinant(&w("fid fid^-1")).is_one());
        let r = word_report(c, &q, &w("f(12) f(13)"), &eps).unwrap();
        assert_eq!(r.determinant, &a * &a);
        assert_eq!(r.determinant_matches_restriction, Some(true));
        let r = word_report(c, &q, &w("fid fid"), &eps).unwrap();
        assert!((r.dynamical_degree[0] - 3.5464).abs() < 1e-4);
        let rho = c.word_dyndeg(&w("f(12) f(13)^-1"), &eps).unwrap();
        assert!((enclosure_value(&rho) - 1.0).abs() < 1e-9);
        let l = c.linear_word("(123)".parse().unwrap());
        assert!((enclosure_value(&c.word_dyndeg(&l, &eps).unwrap()) - 1.0).abs() < 1e-9);
        for s in ["f(12) f(23)^-1 f(132)", "fid^-1 f(13) f(13)"] {
            let x = w(s);
            let d1 = enclosure_value(&c.word_dyndeg(&x, &eps).unwrap());
            let d2 = enclosure_value(&c.word_dyndeg(&x.inverse(), &eps).unwrap());
            assert!((d1 - d2).abs() < 1e-9);
            let (y, z) = (x.clone(), w("f(23)"));
            assert_eq!(c.word_determinant(&y.clone().then(&z)), &c.word_determinant(&y) * &c.word_determinant(&z));
        }
    }

    #[test]
    fn classification_n5() {
        let cl = classify_subgroup(5, 6).unwrap();
        assert_eq!(cl.label, StructureLabel::D3SemiZ, "{cl:?}");
        assert!(cl.direct_product);
    }
}

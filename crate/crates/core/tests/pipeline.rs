use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use coxforge::coxeter::{permutation_isometry, LatticeIsometry};
use coxforge::cubic::{collinear, collinear_by_determinant, restriction_of, CubicPoint};
use coxforge::diller::{construct_map, solve_parameters};
use coxforge::exactnum::{default_eps, lehmer_polynomial, Enclosure, IntPolynomial, NFElem, NumberField};
use coxforge::groupengine::{
    identity_agrees, linear_quotient, normal_form, eval_normal_form, GenWord, GroupContext, LinearQuotient,
};
use coxforge::perm::Perm3;
use coxforge::picard::{agrees_with_bk, induced_action, GeometricBasis};
use coxforge::realize::{build_omega, omega1};

fn n5() -> &'static (GroupContext, LinearQuotient) {
    static CTX: OnceLock<(GroupContext, LinearQuotient)> = OnceLock::new();
    CTX.get_or_init(|| {
        let ctx = GroupContext::n5().unwrap();
        let q = linear_quotient(&ctx, 64).unwrap();
        (ctx, q)
    })
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = GenWord> {
    prop::collection::vec((0usize..6, any::<bool>()), 0..=max_len).prop_map(|letters| {
        let labels = Perm3::all();
        letters
            .into_iter()
            .fold(GenWord(Vec::new()), |w, (i, inv)| w.then(&GenWord::letter(labels[i], inv)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn words_act_as_isometries_fixing_kappa(w in word_strategy(6)) {
        let (ctx, _) = n5();
        let m = ctx.eval_lattice(&w).unwrap();
        prop_assert!(m.preserves_form());
        prop_assert!(m.fixes_kappa());
    }

    #[test]
    fn normal_form_evaluates_to_the_word(w in word_strategy(7)) {
        let (ctx, q) = n5();
        let nf = normal_form(q, &w);
        prop_assert_eq!(ctx.eval_lattice(&w).unwrap(), eval_normal_form(ctx, q, nf).unwrap());
        let signed: i64 = w.0.iter().map(|l| if l.inverse { -1 } else { 1 }).sum();
        prop_assert_eq!(nf.power, signed);
    }

    #[test]
    fn word_times_inverse_is_trivial(w in word_strategy(4)) {
        let (ctx, _) = n5();
        let both = w.clone().then(&w.inverse());
        prop_assert!(ctx.eval_lattice(&both).unwrap().is_identity());
    }

    #[test]
    fn word_display_round_trips(w in word_strategy(6)) {
        let back: GenWord = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn collinearity_over_q(a in -20i64..=20, b in -20i64..=20, c in -20i64..=20, force in any::<bool>()) {
        let k = NumberField::rationals();
        let c = if force { -a - b } else { c };
        let pts = [
            CubicPoint::from_ints(&k, a, 1).unwrap(),
            CubicPoint::from_ints(&k, b, 2).unwrap(),
            CubicPoint::from_ints(&k, c, 3).unwrap(),
        ];
        prop_assert_eq!(collinear(&pts).unwrap(), a + b + c == 0);
        prop_assert_eq!(collinear(&pts).unwrap(), collinear_by_determinant(&pts));
    }

    #[test]
    fn omega_trace_splits_by_block(k in 1i64..=12) {
        let cycle = permutation_isometry(&[1, 2, 3, 0]);
        let extra = cycle.pow(k).trace() - 1;
        prop_assert_eq!(extra, if k % 4 == 0 { 4 } else { 0 });
        prop_assert_eq!(build_omega().pow(k).trace(), omega1(10).pow(k).trace() + extra);
    }
}

#[test]
fn inverse_words_undo_maps_on_sample_points() {
    let (ctx, _) = n5();
    let pts = ctx.sample_points(7);
    for w in ["f(12) f(12)^-1", "fid f(123) f(123)^-1 fid^-1", "f(13)^-1 f(13)"] {
        let w: GenWord = w.parse().unwrap();
        assert!(identity_agrees(&ctx.eval_birational(&w).unwrap(), &pts), "{w}");
    }
}

#[test]
fn determinant_is_multiplicative_along_words() {
    let (ctx, _) = n5();
    for w in ["fid", "f(12) f(13)", "f(123)^-1", "f(23) fid f(132)"] {
        let w: GenWord = w.parse().unwrap();
        let r = restriction_of(&ctx.eval_birational(&w).unwrap(), &ctx.solution.field).unwrap();
        assert_eq!(r.a, ctx.word_determinant(&w), "{w}");
    }
}

#[test]
fn geometric_actions_match_the_orbit_formula_for_other_n() {
    for n in [4, 6, 7] {
        let sol = solve_parameters(n).unwrap();
        let basis = GeometricBasis::from_solution(&sol);
        for tau in Perm3::all() {
            let m = sol.construct(tau).unwrap();
            let w = induced_action(&m.map, &basis).unwrap();
            assert!(w.preserves_form() && w.fixes_kappa());
            assert!(agrees_with_bk(&w, &m.orbit).unwrap(), "n {n} tau {tau}");
        }
    }
}

#[test]
fn serialized_values_round_trip() {
    let (sol, m) = construct_map(5, "(13)".parse().unwrap()).unwrap();
    let json = serde_json::to_string(&sol.alpha).unwrap();
    let back: NFElem = serde_json::from_str(&json).unwrap();
    assert_eq!(back.to_f64(), sol.alpha.to_f64());
    let p: IntPolynomial = serde_json::from_str(&serde_json::to_string(&lehmer_polynomial()).unwrap()).unwrap();
    assert_eq!(p, lehmer_polynomial());
    let e = Enclosure { lo: BigRational::new(1.into(), 3.into()), hi: BigRational::new(BigInt::from(1), 2.into()) };
    let back: Enclosure = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
    assert_eq!(back, e);
    let sigma: Perm3 = serde_json::from_str(&serde_json::to_string(&m.sigma).unwrap()).unwrap();
    assert_eq!(sigma, m.sigma);
    assert!(default_eps() < BigRational::new(1.into(), 1000.into()));
}

#[test]
fn identity_isometry_has_full_trace() {
    assert_eq!(LatticeIsometry::identity(14).trace(), 15);
}

//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coxforge::coxeter::{char_poly, spectral_radius, LatticeIsometry};
use coxforge::cubic::{collinear, collinear_by_determinant, nonodal_kernel, CubicPoint};
use coxforge::diller::{solve_parameters, six_maps_n5};
use coxforge::exactnum::{lehmer_polynomial, rational_to_f64, NFElem};
use coxforge::groupengine::{
    classify_subgroup, enumerate_normal_forms, linear_quotient, verify_commutation, verify_dihedral, GroupContext,
    StructureLabel,
};
use coxforge::perm::Perm3;
use coxforge::picard::{action_from_orbit_data, bk_charpoly, derived_actions_n5, errata_report, non_cyclotomic_part};
use coxforge::planemaps::{random_elem, OrbitData};
use coxforge::realize::{nonrealizability_certificate, omega1};
use coxforge::salem::{is_salem, phi, power_gap_check, power_is_salem, product_class, ProductClass};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, format!("took {elapsed:?}, limit {limit:?}"))
}

/// Growth rate of `w^k e_0` by floating power iteration.
fn power_iteration(w: &LatticeIsometry, steps: usize) -> f64 {
    let n = w.rank() + 1;
    let mut v = vec![0.0f64; n];
    v[0] = 1.0;
    let mut rate = 0.0;
    for _ in 0..steps {
        let next: Vec<f64> = (0..n).map(|i| (0..n).map(|j| w.entry(i, j) as f64 * v[j]).sum()).collect();
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        let prev = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        rate = norm / prev;
        v = next.into_iter().map(|x| x / norm).collect();
    }
    rate
}

fn six_maps() -> Outcome {
    let start = Instant::now();
    let (sol, maps) = six_maps_n5().map_err(|e| e.to_string())?;
    check(maps.len() == 6, format!("{} distinct sigma", maps.len()))?;
    let locus: HashSet<String> = sol.base_locus.iter().map(|p| p.embed().to_string()).collect();
    check(locus.len() == 15, "base locus is not 15 distinct points")?;
    for tau in Perm3::all() {
        let sigma = tau.pow(5);
        let m = &maps[&sigma];
        check(m.tau == tau, format!("sigma {sigma} built from {} not {tau}", m.tau))?;
        let recomputed = m.map.orbit_data(50);
        check(recomputed == OrbitData::finite([5, 5, 5], sigma), format!("tau {tau}: orbit data {recomputed}"))?;
        for i in 1..=3 {
            for p in [m.map.p_plus(i), m.map.p_minus(i)] {
                check(locus.contains(&p.to_string()), format!("tau {tau}: {p} outside the base locus"))?;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("six maps, orbit data (5,5,5,tau^5), one 15-point locus, {:?}", start.elapsed()))
}

fn dynamical_degree() -> Outcome {
    let eps = BigRational::new(1.into(), BigInt::from(10).pow(9));
    let target = 1.8832;
    for (sigma, w) in derived_actions_n5().map_err(|e| e.to_string())? {
        let rho = spectral_radius(&w, &eps).map_err(|e| e.to_string())?;
        let (lo, hi) = (rational_to_f64(&rho.lo), rational_to_f64(&rho.hi));
        check(hi - lo <= 1e-6, format!("{sigma}: enclosure width {}", hi - lo))?;
        check((lo - target).abs() < 5e-5 && (hi - target).abs() < 5e-5, format!("{sigma}: [{lo}, {hi}]"))?;
        let iterated = power_iteration(&w, 200);
        check((iterated - lo).abs() < 1e-6, format!("{sigma}: power iteration gives {iterated}"))?;
        check(non_cyclotomic_part(&char_poly(&w)) == phi(), format!("{sigma}: Salem factor differs"))?;
    }
    Ok("six actions: radius 1.883204 (width <= 1e-6, power iteration agrees), factor t^4-2t^3+t^2-2t+1".into())
}

fn printed_actions() -> Outcome {
    let report = errata_report().map_err(|e| e.to_string())?;
    let mut matched = Vec::new();
    let mut erratum = String::new();
    for e in &report {
        check(e.derived_preserves_form && e.derived_fixes_kappa, format!("derived {} is not an isometry fixing kappa", e.sigma))?;
        if e.sigma.to_string() == "(12)" {
            let why = e.printed_valid.as_ref().err().ok_or("printed (12) action unexpectedly valid")?;
            check(why.contains('9'), format!("unexpected erratum: {why}"))?;
            erratum = e.derived.clone();
        } else {
            check(e.matches, format!("{} differs on {:?}", e.sigma, e.differing_columns))?;
            matched.push(e.sigma.to_string());
        }
    }
    Ok(format!("{} match exactly; (12) erratum (index 9 repeated), derived {erratum}", matched.join(" ")))
}

fn bk_equivalence() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for n in 4..=7 {
        let sigmas: HashSet<Perm3> = Perm3::all().into_iter().map(|t| t.pow(n as i64)).collect();
        for sigma in sigmas {
            let data = OrbitData::finite([n; 3], sigma);
            let w = action_from_orbit_data(&data).map_err(|e| e.to_string())?;
            check(w.preserves_form() && w.fixes_kappa(), format!("n {n} sigma {sigma}: not an isometry"))?;
            let bk = bk_charpoly(&data).map_err(|e| e.to_string())?;
            check(
                non_cyclotomic_part(&char_poly(&w)) == non_cyclotomic_part(&bk),
                format!("n {n} sigma {sigma}: polynomials differ off cyclotomics"),
            )?;
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{count} (n, sigma) cases for n = 4..7 agree, {:?}", start.elapsed()))
}

fn group_n5() -> Outcome {
    let ctx = GroupContext::n5().map_err(|e| e.to_string())?;
    let d = verify_dihedral(&ctx).map_err(|e| e.to_string())?;
    d.require().map_err(|e| e.to_string())?;
    let c = verify_commutation(&ctx).map_err(|e| e.to_string())?;
    c.require().map_err(|e| e.to_string())?;
    let q = linear_quotient(&ctx, 64).map_err(|e| e.to_string())?;
    let en = enumerate_normal_forms(&ctx, &q, 6, 3).map_err(|e| e.to_string())?;
    check(en.passed(), format!("{} matrices vs {} normal forms", en.distinct_matrices, en.distinct_normal_forms))?;
    let class = classify_subgroup(5, 6).map_err(|e| e.to_string())?;
    check(class.label == StructureLabel::D3SemiZ, format!("label {}", class.label))?;
    Ok(format!(
        "{} relations hold; {} matrices = {} normal forms to length 6; {}",
        d.checks.len() + c.checks.len(),
        en.distinct_matrices,
        en.distinct_normal_forms,
        class.label
    ))
}

fn general_n() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (n, expected) in [
        (4, StructureLabel::Z3SemiZ),
        (6, StructureLabel::Z),
        (7, StructureLabel::D3SemiZ),
        (9, StructureLabel::KleinSemiZ),
    ] {
        let c = classify_subgroup(n, 6).map_err(|e| e.to_string())?;
        if c.label == expected {
            parts.push(format!("n={n}: {}", c.label));
        } else if c.label == StructureLabel::Unmatched && !c.evidence.is_empty() && n >= 6 {
            parts.push(format!("n={n}: unmatched [{}]", c.evidence.join("; ")));
        } else {
            return Err(format!("n={n}: {} where {expected} was expected", c.label));
        }
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("{}, {:?}", parts.join(", "), start.elapsed()))
}

fn theorem_c() -> Outcome {
    let start = Instant::now();
    let cert = nonrealizability_certificate();
    let elapsed = start.elapsed();
    check(cert.passed(), format!("{cert}"))?;
    check(cert.conclusion.starts_with("not realizable"), "conclusion")?;
    let w1 = omega1(10);
    check(w1.pow(2).trace() == 2 && w1.pow(4).trace() == 2, "traces of omega1")?;
    let deficit = cert.steps.iter().find(|s| s.name == "lefschetz_deficit").ok_or("no deficit step")?;
    check(deficit.value["deficit"] == 4, "deficit")?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("{} exact steps, L4 - L2 = 4, not realizable, {elapsed:?}", cert.steps.len()))
}

fn salem_suite() -> Outcome {
    let (p, l) = (phi(), lehmer_polynomial());
    for (poly, root) in [(&p, 1.8832), (&l, 1.17628)] {
        let v = is_salem(poly);
        let r = v.largest_root_f64().unwrap_or(f64::NAN);
        check(v.is_salem && (r - root).abs() < 1e-5, format!("{poly}: root {r}"))?;
    }
    for k in 1..=5 {
        let v = power_is_salem(&p, k);
        check(v.is_salem && v.degree == 4, format!("phi power {k}"))?;
    }
    match product_class(&p, &l).map_err(|e| e.to_string())? {
        ProductClass::NonSalemProducts(checks) => {
            check(checks.len() == 4, "product count")?;
            for c in &checks {
                check(!c.verdict.is_salem && c.certified_non_salem(), format!("{} not certified", c.label))?;
            }
        }
        ProductClass::CommonPowerBase { .. } => return Err("phi and Lehmer reported as powers of one base".into()),
    }
    let gap = power_gap_check(&p, &l);
    check(gap.fourth_root_below_lehmer && (gap.fourth_root - 1.17145).abs() < 1e-5, format!("{gap:?}"))?;
    Ok(format!("roots 1.88320, 1.17628; phi^k Salem for k <= 5; no product Salem; {:.5} < {:.5}", gap.fourth_root, gap.lehmer))
}

fn cubic_suite() -> Outcome {
    let sol = solve_parameters(5).map_err(|e| e.to_string())?;
    let k = &sol.field;
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut hits = 0;
    for _ in 0..1000 {
        let t1 = random_elem(k, &mut rng);
        let t2 = random_elem(k, &mut rng);
        let t3 = if rng.gen_bool(0.5) { -(&t1 + &t2) } else { random_elem(k, &mut rng) };
        let pts = [t1, t2, t3]
            .into_iter()
            .zip(1u8..)
            .map(|(t, line)| CubicPoint::new(t, line).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let pts: [CubicPoint; 3] = pts.try_into().expect("three points");
        let by_law = collinear(&pts).map_err(|e| e.to_string())?;
        check(by_law == collinear_by_determinant(&pts), "parameter law and determinant disagree")?;
        hits += usize::from(by_law);
    }
    let (_, maps) = six_maps_n5().map_err(|e| e.to_string())?;
    let three = NFElem::from_int(k, 3);
    let target = &three * &(&sol.alpha - &NFElem::one(k));
    for m in maps.values() {
        let ex = m.map.exceptional_data().map_err(|e| e.to_string())?;
        let ts: Vec<NFElem> = ex
            .p_minus
            .iter()
            .map(|p| CubicPoint::locate(p).and_then(|c| c.t).ok_or("exceptional point off the cubic"))
            .collect::<Result<_, _>>()?;
        check(&(&ts[0] + &ts[1]) + &ts[2] == target, format!("{}: critical sum", m.sigma))?;
    }
    let ker = nonodal_kernel(5).map_err(|e| e.to_string())?;
    let expected: Vec<BigInt> = [1, -1, 1, -1, 1].into_iter().map(BigInt::from).collect();
    check(ker.basis == vec![expected], format!("kernel {:?}", ker.basis))?;
    check(!ker.meets_nonneg_orthant, "kernel meets the nonnegative orthant")?;
    Ok(format!("1000 triples agree ({hits} collinear); critical sums 3(alpha-1); kernel {{(1,-1,1,-1,1)}}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("six-map construction (n=5)", six_maps),
        ("dynamical degree", dynamical_degree),
        ("printed-action agreement", printed_actions),
        ("orbit-data formula equivalence", bk_equivalence),
        ("group structure (n=5)", group_n5),
        ("general-n classification", general_n),
        ("W_14 non-realizability certificate", theorem_c),
        ("Salem suite", salem_suite),
        ("cubic-law suite", cubic_suite),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

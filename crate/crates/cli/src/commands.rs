use std::fmt::Write as _;

use serde_json::json;

use coxforge::coxeter::{char_poly, spectral_radius};
use coxforge::cubic::restriction_of;
use coxforge::diller::{compare_printed_n5, solve_parameters, DillerError, DillerMap, DillerSolution};
use coxforge::exactnum::{lehmer_polynomial, rational_to_f64, IntPolynomial};
use coxforge::groupengine::{
    classify_context, linear_quotient, verify_commutation_seeded, verify_dihedral_seeded, word_report, GenWord,
    GroupContext, GroupError, Labelling, StructureLabel,
};
use coxforge::perm::Perm3;
use coxforge::picard::{
    action_from_orbit_data, agrees_with_bk, bk_charpoly, errata_report, induced_action, non_cyclotomic_part,
    presentation, GeometricBasis, PicardError,
};
use coxforge::realize::nonrealizability_certificate;
use coxforge::salem::{is_salem, phi, power_gap_check, power_is_salem, product_class, ProductClass};

use crate::report::{mark, value, CliError, Report};
use crate::{Ctx, MapArgs};

fn diller_err(e: DillerError) -> CliError {
    match e {
        DillerError::OrbitTooShort(_) | DillerError::NoSalemFactor { .. } => CliError::Usage(e.to_string()),
        e => CliError::Failed(e.to_string()),
    }
}

fn group_err(e: GroupError) -> CliError {
    match e {
        GroupError::Diller(d) => diller_err(d),
        GroupError::Parse(_) | GroupError::UnknownGenerator(_) => CliError::Usage(e.to_string()),
        e => CliError::Failed(e.to_string()),
    }
}

fn picard_err(e: PicardError) -> CliError {
    CliError::Failed(e.to_string())
}

fn parse_perm(s: &str) -> Result<Perm3, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("bad permutation {s:?}: {e}")))
}

/// The rotation to build: `--tau` directly, or the first tau in the fixed
/// order whose n-th power is `--sigma`.
fn resolve_tau(m: &MapArgs) -> Result<Perm3, CliError> {
    match (&m.tau, &m.sigma) {
        (Some(t), _) => parse_perm(t),
        (None, Some(s)) => {
            let sigma = parse_perm(s)?;
            Perm3::all()
                .into_iter()
                .find(|t| t.pow(m.n as i64) == sigma)
                .ok_or_else(|| CliError::Usage(format!("sigma = {sigma} is not tau^{} for any tau", m.n)))
        }
        (None, None) => Ok(Perm3::ID),
    }
}

enum Built {
    Ok(DillerSolution, DillerMap),
    Rejected(Perm3, DillerError),
}

fn build(m: &MapArgs) -> Result<Built, CliError> {
    let tau = resolve_tau(m)?;
    let sol = solve_parameters(m.n).map_err(diller_err)?;
    match sol.construct(tau) {
        Ok(map) => Ok(Built::Ok(sol, map)),
        Err(e @ DillerError::ValidationFailed { .. }) => Ok(Built::Rejected(tau, e)),
        Err(e) => Err(diller_err(e)),
    }
}

fn build_validated(m: &MapArgs) -> Result<(DillerSolution, DillerMap), CliError> {
    match build(m)? {
        Built::Ok(s, f) => Ok((s, f)),
        Built::Rejected(_, e) => Err(CliError::Failed(e.to_string())),
    }
}

fn rejected_report(command: &'static str, tau: Perm3, e: &DillerError) -> Report {
    let body = match e {
        DillerError::ValidationFailed { found, expected, .. } => {
            json!({ "tau": tau, "orbit_data": value(found), "expected": value(expected) })
        }
        _ => json!({ "tau": tau }),
    };
    Report::new(command, false, json!({ "validation": body, "error": e.to_string() }), format!("validation FAIL: {e}\n"))
}

pub fn construct(m: &MapArgs) -> Result<Report, CliError> {
    let (sol, f) = match build(m)? {
        Built::Ok(s, f) => (s, f),
        Built::Rejected(tau, e) => return Ok(rejected_report("construct", tau, &e)),
    };
    let restriction = restriction_of(&f.map, &sol.field).ok();
    let multiplier_ok = restriction.as_ref().map_or(false, |r| r.a == sol.alpha && r.tau == f.tau);
    let passed = multiplier_ok;
    let body = json!({
        "n": sol.n,
        "tau": f.tau,
        "sigma": f.sigma,
        "minpoly": value(sol.minpoly()),
        "alpha": value(&sol.alpha),
        "alpha_approx": sol.alpha.to_f64(),
        "t_params": value(&sol.t_params),
        "base_locus": value(&sol.base_locus),
        "map": value(&f.map),
        "orbit_data": value(&f.orbit),
        "verification": {
            "orbit_data": true,
            "restriction": value(&restriction),
            "restriction_multiplier_is_alpha": multiplier_ok,
        },
    });
    let mut text = String::new();
    let _ = writeln!(text, "n = {}, tau = {}, sigma = {}", sol.n, f.tau, f.sigma);
    let _ = writeln!(text, "alpha ~ {:.12} root of {}", sol.alpha.to_f64(), sol.minpoly());
    let _ = writeln!(text, "base locus: {} points", sol.base_locus.len());
    let _ = writeln!(text, "T+ = {}", row_text(f.map.t_plus().entries().iter().map(|r| r.to_vec())));
    let _ = writeln!(text, "T- = {}", row_text(f.map.t_minus().entries().iter().map(|r| r.to_vec())));
    let _ = writeln!(text, "orbit data {} ({})", f.orbit, mark(true));
    let _ = writeln!(text, "restriction t -> alpha t + 1 - alpha ({})", mark(multiplier_ok));
    Ok(Report::new("construct", passed, body, text))
}

fn row_text<T: std::fmt::Display>(rows: impl Iterator<Item = Vec<T>>) -> String {
    let r: Vec<String> = rows.map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", r.join("; "))
}

pub fn orbit(m: &MapArgs, max_iter: usize) -> Result<Report, CliError> {
    let (sol, f) = match build(m)? {
        Built::Ok(s, f) => (s, f),
        Built::Rejected(tau, e) => return Ok(rejected_report("orbit", tau, &e)),
    };
    let data = f.map.orbit_data(max_iter);
    let passed = data == f.orbit;
    let body = json!({
        "n": sol.n,
        "tau": f.tau,
        "max_iter": max_iter,
        "orbit_data": value(&data),
        "expected": value(&f.orbit),
    });
    let text = format!("orbit data within {max_iter} steps: {data}, expected {} ({})\n", f.orbit, mark(passed));
    Ok(Report::new("orbit", passed, body, text))
}

pub fn action(ctx: &Ctx, m: &MapArgs) -> Result<Report, CliError> {
    let (sol, f) = build_validated(m)?;
    let basis = GeometricBasis::from_solution(&sol);
    let w = induced_action(&f.map, &basis).map_err(picard_err)?;
    let n = sol.n;
    let pres = presentation(&w, [n, 2 * n, 3 * n]);
    let rho = spectral_radius(&w, &ctx.eps).map_err(|e| CliError::Failed(e.to_string()))?;
    let form = w.preserves_form();
    let kappa = w.fixes_kappa();
    let passed = form && kappa && pres.is_some();
    let body = json!({
        "n": n,
        "tau": f.tau,
        "sigma": f.sigma,
        "rank": w.rank(),
        "matrix": value(&w),
        "presentation": pres,
        "preserves_form": form,
        "fixes_kappa": kappa,
        "spectral_radius": value(&rho),
    });
    let mut text = String::new();
    let _ = writeln!(text, "f* on Z^(1,{}) for tau = {}, sigma = {}", 3 * n, f.tau, f.sigma);
    let _ = writeln!(text, "f* = s_kappa . {}", pres.as_deref().unwrap_or("(not of this form)"));
    for i in 0..=w.rank() {
        let _ = writeln!(text, "  e{i} -> {:?}", w.image_of_basis(i).0);
    }
    let _ = writeln!(text, "form ({}), kappa ({})", mark(form), mark(kappa));
    let _ = writeln!(text, "spectral radius in [{:.12}, {:.12}]", rational_to_f64(&rho.lo), rational_to_f64(&rho.hi));
    Ok(Report::new("action", passed, body, text))
}

pub fn charpoly(ctx: &Ctx, m: &MapArgs) -> Result<Report, CliError> {
    let (sol, f) = build_validated(m)?;
    let basis = GeometricBasis::from_solution(&sol);
    let w = induced_action(&f.map, &basis).map_err(picard_err)?;
    let cp = char_poly(&w);
    let bk = bk_charpoly(&f.orbit).map_err(picard_err)?;
    let model = action_from_orbit_data(&f.orbit).map_err(picard_err)?;
    let bk_geometric = agrees_with_bk(&w, &f.orbit).map_err(picard_err)?;
    let bk_model = agrees_with_bk(&model, &f.orbit).map_err(picard_err)?;
    let factor = non_cyclotomic_part(&cp);
    let factor_is_minpoly = &factor == sol.minpoly();
    let verdict = is_salem(&factor);
    let rho = spectral_radius(&w, &ctx.eps).map_err(|e| CliError::Failed(e.to_string()))?;
    let alpha = sol.alpha.to_f64();
    let encloses = rational_to_f64(&rho.lo) - 1e-12 <= alpha && alpha <= rational_to_f64(&rho.hi) + 1e-12;
    let passed = bk_geometric && bk_model && factor_is_minpoly && verdict.is_salem && encloses;
    let body = json!({
        "n": sol.n,
        "tau": f.tau,
        "sigma": f.sigma,
        "char_poly": value(&cp),
        "orbit_formula": value(&bk),
        "salem_factor": value(&factor),
        "salem_factor_is_salem": verdict.is_salem,
        "salem_factor_is_minpoly": factor_is_minpoly,
        "agrees_geometric": bk_geometric,
        "agrees_lattice_model": bk_model,
        "spectral_radius": value(&rho),
        "spectral_radius_encloses_alpha": encloses,
    });
    let mut text = String::new();
    let _ = writeln!(text, "char poly of f*: {cp}");
    let _ = writeln!(text, "orbit-data formula: {bk}");
    let _ = writeln!(text, "agree off cyclotomics: geometric ({}), lattice model ({})", mark(bk_geometric), mark(bk_model));
    let _ = writeln!(text, "Salem factor {factor} ({})", mark(verdict.is_salem && factor_is_minpoly));
    let _ = writeln!(text, "dynamical degree ~ {:.12} ({})", rho.mid_f64(), mark(encloses));
    Ok(Report::new("charpoly", passed, body, text))
}

fn parse_coeffs(s: &str) -> Result<IntPolynomial, CliError> {
    let mut c: Vec<num_bigint::BigInt> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad coefficient {t:?}"))))
        .collect::<Result<_, _>>()?;
    c.reverse();
    let p = IntPolynomial::new(c);
    if p.is_zero() {
        return Err(CliError::Usage("zero polynomial".into()));
    }
    Ok(p)
}

pub fn salem(coeffs: Option<&str>, max_power: usize) -> Result<Report, CliError> {
    if let Some(s) = coeffs {
        let p = parse_coeffs(s)?;
        let v = is_salem(&p);
        let powers: Vec<_> = (1..=max_power).map(|k| (k, power_is_salem(&p, k))).collect();
        let mut text = format!("{p}: {}\n", if v.is_salem { "Salem" } else { "not Salem" });
        if let Some(r) = v.largest_root_f64() {
            let _ = writeln!(text, "largest root ~ {r:.12}");
        }
        if let Some(why) = &v.failure {
            let _ = writeln!(text, "reason: {why}");
        }
        for (k, pv) in &powers {
            let _ = writeln!(text, "power {k}: {} (degree {})", pv.is_salem, pv.degree);
        }
        let body = json!({ "polynomial": value(&p), "verdict": value(&v), "powers": value(&powers) });
        return Ok(Report::new("salem", true, body, text));
    }

    let (phi, lehmer) = (phi(), lehmer_polynomial());
    let mut text = String::new();
    let mut passed = true;
    let mut verdicts = Vec::new();
    for (name, p, root) in [("phi", &phi, 1.8832_f64), ("lehmer", &lehmer, 1.17628)] {
        let v = is_salem(p);
        let r = v.largest_root_f64().unwrap_or(f64::NAN);
        let ok = v.is_salem && (r - root).abs() < 1e-5;
        passed &= ok;
        let _ = writeln!(text, "is_salem({name}) root ~ {r:.8} ({})", mark(ok));
        verdicts.push(json!({ "name": name, "verdict": value(&v), "passed": ok }));
    }
    let powers: Vec<_> = (1..=max_power)
        .map(|k| {
            let v = power_is_salem(&phi, k);
            let ok = v.is_salem && v.degree == 4;
            (k, v, ok)
        })
        .collect();
    for (k, v, ok) in &powers {
        passed &= ok;
        let _ = writeln!(text, "phi power {k}: Salem degree {} ({})", v.degree, mark(*ok));
    }
    let class = product_class(&phi, &lehmer).map_err(|e| CliError::Failed(e.to_string()))?;
    let products_ok = match &class {
        ProductClass::NonSalemProducts(checks) => checks.len() == 4 && checks.iter().all(|c| c.certified_non_salem()),
        ProductClass::CommonPowerBase { .. } => false,
    };
    passed &= products_ok;
    let _ = writeln!(text, "product class of (phi, lehmer): no product is Salem ({})", mark(products_ok));
    let gap = power_gap_check(&phi, &lehmer);
    passed &= gap.fourth_root_below_lehmer;
    let _ = writeln!(
        text,
        "gap: delta^(1/4) ~ {:.5} < {:.5} ({})",
        gap.fourth_root,
        gap.lehmer,
        mark(gap.fourth_root_below_lehmer)
    );
    let body = json!({
        "verdicts": verdicts,
        "powers": powers.iter().map(|(k, v, ok)| json!({ "k": k, "verdict": value(v), "passed": ok })).collect::<Vec<_>>(),
        "product_class": value(&class),
        "power_gap": value(&gap),
    });
    Ok(Report::new("salem", passed, body, text))
}

pub fn group(ctx: &Ctx, n: usize, max_len: usize, certify: bool, word: Option<&str>) -> Result<Report, CliError> {
    let word = word.map(|w| w.parse::<GenWord>().map_err(group_err)).transpose()?;
    let g = GroupContext::new(n, Labelling::BySigma).map_err(group_err)?;
    let class = classify_context(&g, max_len).map_err(group_err)?;
    let mut passed = class.enumeration.passed() && class.commutation;
    let mut text = String::new();
    let gens: Vec<String> = class.generators.iter().map(|(l, t, _)| format!("f{l} (tau = {t})")).collect();
    let _ = writeln!(text, "n = {n}: generators {}", gens.join(", "));
    let _ = writeln!(
        text,
        "linear quotient of order {} ({}), element orders {:?}",
        class.linear_quotient_order,
        if class.linear_quotient_abelian { "abelian" } else { "nonabelian" },
        class.linear_element_orders
    );
    let _ = writeln!(
        text,
        "words to length {max_len}: {} matrices, {} normal forms ({})",
        class.enumeration.distinct_matrices,
        class.enumeration.distinct_normal_forms,
        mark(class.enumeration.passed())
    );

    let mut relations = Vec::new();
    if certify {
        let commutation = verify_commutation_seeded(&g, ctx.seed + 1).map_err(group_err)?;
        relations.extend(commutation.checks.iter().cloned());
        if g.gens.len() == 6 {
            let dihedral = verify_dihedral_seeded(&g, ctx.seed).map_err(group_err)?;
            relations.extend(dihedral.checks.iter().cloned());
        } else {
            let _ = writeln!(text, "dihedral relations skipped: {} generators", g.gens.len());
        }
        for r in &relations {
            passed &= r.passed();
            let _ = writeln!(text, "  {} ({})", r.relation, mark(r.passed()));
        }
    }

    let word_json = match &word {
        Some(w) => {
            let q = linear_quotient(&g, 64).map_err(group_err)?;
            let r = word_report(&g, &q, w, &ctx.eps).map_err(group_err)?;
            passed &= r.normal_form_sound && r.determinant_matches_restriction != Some(false);
            let _ = writeln!(
                text,
                "word {}: normal form L{} f{}^{} ({}), dynamical degree ~ {:.10}",
                r.word,
                r.normal_form_linear.map_or("?".into(), |p| p.to_string()),
                g.base,
                r.normal_form.power,
                mark(r.normal_form_sound),
                (r.dynamical_degree[0] + r.dynamical_degree[1]) / 2.0
            );
            value(&r)
        }
        None => serde_json::Value::Null,
    };
    if class.label == StructureLabel::Unmatched {
        for e in &class.evidence {
            let _ = writeln!(text, "evidence: {e}");
        }
    }
    let _ = writeln!(text, "structure: {}", class.label);
    let body = json!({
        "n": n,
        "classification": value(&class),
        "relations": value(&relations),
        "normal_form_table_size": class.enumeration.distinct_normal_forms,
        "structure_label": class.label.to_string(),
        "word": word_json,
    });
    Ok(Report::new("group", passed, body, text))
}

pub fn theoremc() -> Report {
    let c = nonrealizability_certificate();
    Report::new("theoremc", c.passed(), value(&c), format!("{c}\n"))
}

pub fn errata() -> Result<Report, CliError> {
    let maps = compare_printed_n5().map_err(diller_err)?;
    let actions = errata_report().map_err(picard_err)?;
    let maps_ok = maps.iter().all(|c| c.same_map);
    let derived_ok = actions.iter().all(|e| e.derived_preserves_form && e.derived_fixes_kappa);
    let mut text = String::new();
    for c in &maps {
        let _ = writeln!(text, "map f{}: printed matrices give the same map ({})", c.sigma, mark(c.same_map));
    }
    for e in &actions {
        let status = match (&e.printed_valid, e.matches) {
            (Err(why), _) => format!("printed action invalid: {why}"),
            (Ok(()), true) => "printed action matches".into(),
            (Ok(()), false) => format!("printed action differs on classes {:?}", e.differing_columns),
        };
        let _ = writeln!(text, "action f{}*: {status}; derived s_kappa . {}", e.sigma, e.derived);
    }
    let _ = writeln!(text, "derived actions preserve form and kappa ({})", mark(derived_ok));
    let body = json!({ "maps": value(&maps), "actions": value(&actions) });
    Ok(Report::new("errata", maps_ok && derived_ok, body, text))
}

pub fn sweep(n_min: usize, n_max: usize, max_len: usize) -> Result<Report, CliError> {
    if n_min < 4 || n_min > n_max {
        return Err(CliError::Usage(format!("need 4 <= n-min <= n-max, got {n_min}..{n_max}")));
    }
    let mut rows = Vec::new();
    let mut passed = true;
    let mut text = String::from("n  tau    sigma  validated  structure\n");
    for n in n_min..=n_max {
        let g = GroupContext::new(n, Labelling::BySigma).map_err(group_err)?;
        let class = classify_context(&g, max_len).map_err(group_err)?;
        passed &= class.enumeration.passed();
        let sol = &g.solution;
        let mut maps = Vec::new();
        for tau in Perm3::all() {
            let validated = sol.construct(tau).is_ok();
            passed &= validated;
            let sigma = tau.pow(n as i64);
            let _ = writeln!(text, "{n:<2} {:<6} {:<6} {:<10} {}", tau.to_string(), sigma.to_string(), validated, class.label);
            maps.push(json!({ "tau": tau, "sigma": sigma, "validated": validated }));
        }
        rows.push(json!({
            "n": n,
            "maps": maps,
            "structure_label": class.label.to_string(),
            "classification": value(&class),
        }));
    }
    Ok(Report::new("sweep", passed, json!({ "rows": rows }), text))
}

//! An element of W_14 that no automorphism of a rational surface realizes:
//! `omega = (s_0 s_1 ... s_9)(s_11 s_12 s_13)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coxeter::{char_poly, reflection_word, LatticeIsometry, LatticeVector};
use crate::exactnum::{lehmer_polynomial, IntPolynomial};

pub const RANK: usize = 14;

pub fn omega1(n: usize) -> LatticeIsometry {
    reflection_word(&(0..=9).collect::<Vec<_>>(), n).expect("indices below rank")
}

pub fn build_omega() -> LatticeIsometry {
    reflection_word(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13], RANK).expect("indices below rank")
}

/// The action written out basis vector by basis vector.
pub fn displayed_omega() -> LatticeIsometry {
    let v = |pairs: &[(usize, i64)]| {
        let mut x = LatticeVector::zero(RANK);
        for &(i, c) in pairs {
            x.0[i] += c;
        }
        x
    };
    let mut images = vec![LatticeVector::zero(RANK); RANK + 1];
    images[0] = v(&[(0, 2), (1, -1), (2, -1), (3, -1)]);
    images[1] = v(&[(0, 1), (1, -1), (3, -1)]);
    images[2] = v(&[(0, 1), (1, -1), (2, -1)]);
    for k in 3..10 {
        images[k] = v(&[(k + 1, 1)]);
    }
    images[10] = v(&[(0, 1), (2, -1), (3, -1)]);
    for k in 11..14 {
        images[k] = v(&[(k + 1, 1)]);
    }
    images[14] = v(&[(11, 1)]);
    LatticeIsometry::from_images(&images).expect("displayed action is an isometry")
}

/// Power sums `p_1..p_k` of the roots of a monic polynomial.
pub fn power_sums(p: &IntPolynomial, k: usize) -> Vec<BigInt> {
    let d = p.degree().unwrap_or(0);
    // e-coefficients c_i of t^{d-i}
    let c = |i: usize| if i <= d { p.coeff(d - i) } else { BigInt::zero() };
    let mut sums: Vec<BigInt> = Vec::with_capacity(k);
    for m in 1..=k {
        let mut s = -BigInt::from(m) * c(m);
        for i in 1..m {
            s -= c(i) * &sums[m - i - 1];
        }
        sums.push(s);
    }
    sums
}

#[derive(Clone, Debug, Serialize)]
pub struct CertStep {
    pub name: String,
    pub statement: String,
    pub value: Value,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub subject: String,
    pub preamble: Vec<String>,
    pub steps: Vec<CertStep>,
    pub conclusion: String,
    pub all_values_exact: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for p in &self.preamble {
            writeln!(f, "  note: {p}")?;
        }
        for (i, s) in self.steps.iter().enumerate() {
            let mark = if s.passed { "ok" } else { "FAILED" };
            writeln!(f, "  [{}] {} ({mark})\n      {}\n      = {}", i + 1, s.name, s.statement, s.value)?;
        }
        write!(f, "  conclusion: {}", self.conclusion)
    }
}

fn step(name: &str, statement: &str, value: Value, passed: bool) -> CertStep {
    CertStep { name: name.into(), statement: statement.into(), value, passed }
}

pub fn nonrealizability_certificate() -> Certificate {
    let lehmer = lehmer_polynomial();
    let t_minus_1 = IntPolynomial::from_i64(&[-1, 1]);
    let w1 = omega1(10);
    let w = build_omega();
    let mut steps = Vec::new();

    let cp1 = char_poly(&w1);
    let expected1 = &t_minus_1 * &lehmer;
    steps.push(step(
        "char_poly_omega1",
        "the characteristic polynomial of s_0 s_1 ... s_9 on Z^{1,10} is (t - 1) times Lehmer's polynomial",
        json!({ "char_poly": cp1.to_string(), "lehmer": lehmer.to_string() }),
        cp1 == expected1,
    ));

    let tr2 = w1.pow(2).trace();
    let tr4 = w1.pow(4).trace();
    let newton = power_sums(&expected1, 4);
    let (n2, n4) = (newton[1].to_i64(), newton[3].to_i64());
    steps.push(step(
        "traces_omega1",
        "trace(omega1^2) = trace(omega1^4), by matrix powers and by Newton power sums",
        json!({ "trace2": tr2, "trace4": tr4, "newton2": n2, "newton4": n4 }),
        tr2 == tr4 && Some(tr2) == n2 && Some(tr4) == n4,
    ));

    let display = displayed_omega();
    let differing: Vec<usize> = (0..=RANK).filter(|&j| display.image_of_basis(j) != w.image_of_basis(j)).collect();
    steps.push(step(
        "displayed_action",
        "the reflection word agrees with the basis-by-basis display of omega",
        json!({ "differing_columns": differing }),
        differing.is_empty(),
    ));

    let cp = char_poly(&w);
    let cycle = IntPolynomial::from_i64(&[-1, 0, 0, 0, 1]);
    steps.push(step(
        "char_poly_omega",
        "the characteristic polynomial of omega is (t - 1) Lehmer(t) (t^4 - 1)",
        json!({ "char_poly": cp.to_string() }),
        cp == &expected1 * &cycle,
    ));

    let isometry = w.preserves_form() && w.fixes_kappa();
    steps.push(step(
        "isometry",
        "omega preserves the intersection form and the anticanonical class",
        json!(isometry),
        isometry,
    ));

    let lef: Vec<i64> = (1..=8).map(|k| 2 + w.pow(k).trace()).collect();
    let split_ok = (1..=8).all(|k| {
        let block = if k % 4 == 0 { 4 } else { 0 };
        w.pow(k).trace() == w1.pow(k).trace() + block
    });
    steps.push(step(
        "trace_split",
        "trace(omega^k) = trace(omega1^k) + (4 if 4 | k else 0) for k = 1..8",
        json!({ "lefschetz_1_to_8": lef }),
        split_ok,
    ));

    let (l2, l4) = (lef[1], lef[3]);
    steps.push(step(
        "lefschetz_deficit",
        "L_4 - L_2 = 4, with L_k = 2 + trace(omega^k)",
        json!({ "L2": l2, "L4": l4, "deficit": l4 - l2 }),
        l4 - l2 == 4,
    ));

    let all = steps.iter().all(|s| s.passed);
    Certificate {
        subject: "omega = s_0 s_1 ... s_9 s_11 s_12 s_13 in W_14".into(),
        preamble: vec![
            "omega lives in W_14 (basis e_0..e_14); a stray mention of W_16 for this element is read as a typo.".into(),
            "Assumed, not re-proved: non-fixed periodic points are isolated, so L_k = 2 + trace(omega^k) counts fixed points of omega^k.".into(),
        ],
        steps,
        conclusion: if all {
            "not realizable: a realization needs a period-4 cycle from the e_11..e_14 block, while the \
             omega1 part has equal traces in degrees 2 and 4 and so contributes no period-4 points"
                .into()
        } else {
            "inconclusive: a certificate step failed".into()
        },
        all_values_exact: true,
    }
}

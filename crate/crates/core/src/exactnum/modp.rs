//! Polynomials over small prime fields, used to certify irreducibility over
//! the rationals by comparing distinct-degree factorization patterns.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntPolynomial;

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn reduce(f: &IntPolynomial, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn rem(a: &Fp, m: &Fp, p: u64) -> Fp {
    let mut r = a.clone();
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * li % p;
        if c != 0 {
            for (k, &mk) in m.iter().enumerate() {
                let idx = top - dm + k;
                r[idx] = (r[idx] + p - c * mk % p) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn div(a: &Fp, m: &Fp, p: u64) -> Fp {
    let mut r = a.clone();
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    if r.len() <= dm {
        return Vec::new();
    }
    let mut q = vec![0u64; r.len() - dm];
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * li % p;
        q[top - dm] = c;
        for (k, &mk) in m.iter().enumerate() {
            let idx = top - dm + k;
            r[idx] = (r[idx] + p - c * mk % p) % p;
        }
        r.pop();
    }
    trim(q)
}

fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = inv(l, p);
        a = a.iter().map(|c| c * li % p).collect();
    }
    a
}

fn derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

fn pow_poly(base: &Fp, mut e: u64, m: &Fp, p: u64) -> Fp {
    let mut r = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = rem(&mul(&r, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

/// Degrees of the irreducible factors of `f` modulo `p`, or `None` when
/// `p` divides the leading coefficient or `f mod p` is not squarefree.
pub fn factor_degrees_mod(f: &IntPolynomial, p: u64) -> Option<Vec<usize>> {
    let deg = f.degree()?;
    let mut g = reduce(f, p);
    if g.len() != deg + 1 {
        return None;
    }
    if gcd(&g, &derivative(&g, p), p).len() != 1 {
        return None;
    }
    let mut degrees = Vec::new();
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if 2 * d > g.len() - 1 {
            degrees.push(g.len() - 1);
            break;
        }
        h = pow_poly(&h, p, &g, p);
        let c = gcd(&g, &sub(&h, &x, p), p);
        let cd = c.len() - 1;
        if cd > 0 {
            degrees.extend(std::iter::repeat(d).take(cd / d));
            g = div(&g, &c, p);
            h = rem(&h, &g, p);
        }
    }
    Some(degrees)
}

fn subset_sums(degrees: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0]);
    for &d in degrees {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums
}

fn small_primes(bound: u64) -> impl Iterator<Item = u64> {
    (2..bound).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// `true` when factorization patterns modulo primes below `prime_bound`
/// leave no room for a proper factor over the rationals. `false` means
/// "not certified", not "reducible".
pub fn certify_irreducible(f: &IntPolynomial, prime_bound: u64) -> bool {
    let Some(deg) = f.degree() else { return false };
    if deg <= 1 {
        return deg == 1;
    }
    if f.content() != BigInt::from(1) {
        return false;
    }
    let mut possible: BTreeSet<usize> = (1..deg).collect();
    for p in small_primes(prime_bound) {
        if let Some(ds) = factor_degrees_mod(f, p) {
            let sums = subset_sums(&ds);
            possible.retain(|d| sums.contains(d));
            if possible.is_empty() {
                return true;
            }
        }
    }
    false
}

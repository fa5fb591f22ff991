//! Multivariate polynomial GCD over a field.
//!
//! Classic content / primitive-part recursion: pick the earliest
//! variable as main variable, view both inputs as univariate with
//! polynomial coefficients, and run a primitive pseudo-remainder
//! sequence. Recursion bottoms out at constants. Results are returned
//! monic so the fraction normal form is unique.

use std::collections::BTreeMap;

use super::poly::{Monomial, Polynomial, Var};
use crate::scalar::Scalar;

/// Monic greatest common divisor of `a` and `b`.
pub fn gcd<S: Scalar>(a: &Polynomial<S>, b: &Polynomial<S>) -> Polynomial<S> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let v = main_var(a, b);
    let ua = to_univariate(a, v);
    let ub = to_univariate(b, v);
    let (ca, pa) = content_and_primitive(&ua);
    let (cb, pb) = content_and_primitive(&ub);
    let cont = gcd(&ca, &cb);
    let prim = primitive_prs(pa, pb);
    cont.mul(&from_univariate(&prim, v)).monic()
}

/// Earliest variable occurring in either polynomial.
fn main_var<S: Scalar>(a: &Polynomial<S>, b: &Polynomial<S>) -> Var {
    let va = a.vars();
    let vb = b.vars();
    match (va.first(), vb.first()) {
        (Some(&x), Some(&y)) => x.min(y),
        (Some(&x), None) => x,
        (None, Some(&y)) => y,
        (None, None) => unreachable!("constants handled by caller"),
    }
}

/// Coefficient map of `p` viewed as univariate in `v`.
type Univariate<S> = BTreeMap<u32, Polynomial<S>>;

fn to_univariate<S: Scalar>(p: &Polynomial<S>, v: Var) -> Univariate<S> {
    let mut coeffs: BTreeMap<u32, Vec<(Monomial, S)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.exponent(v);
        let rest = Monomial::from_pairs(
            m.factors().iter().copied().filter(|&(w, _)| w != v),
        );
        coeffs.entry(e).or_default().push((rest, c.clone()));
    }
    coeffs
        .into_iter()
        .map(|(e, ts)| (e, Polynomial::from_terms(ts)))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

fn from_univariate<S: Scalar>(u: &Univariate<S>, v: Var) -> Polynomial<S> {
    let mut acc = Polynomial::zero();
    for (&e, c) in u {
        let pow = Polynomial::monomial(
            Monomial::from_pairs([(v, e)]),
            S::one(),
        );
        acc = acc.add(&c.mul(&pow));
    }
    acc
}

fn uni_degree<S: Scalar>(u: &Univariate<S>) -> u32 {
    u.keys().next_back().copied().unwrap_or(0)
}

fn uni_is_zero<S: Scalar>(u: &Univariate<S>) -> bool {
    u.is_empty()
}

fn uni_scale<S: Scalar>(u: &Univariate<S>, f: &Polynomial<S>) -> Univariate<S> {
    u.iter()
        .map(|(&e, c)| (e, c.mul(f)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn uni_sub<S: Scalar>(a: &Univariate<S>, b: &Univariate<S>) -> Univariate<S> {
    let mut out = a.clone();
    for (&e, c) in b {
        let entry = out.entry(e).or_insert_with(Polynomial::zero);
        *entry = entry.sub(c);
        if entry.is_zero() {
            out.remove(&e);
        }
    }
    out
}

/// GCD of all coefficients plus the coefficient-wise quotient.
fn content_and_primitive<S: Scalar>(u: &Univariate<S>) -> (Polynomial<S>, Univariate<S>) {
    let mut cont = Polynomial::zero();
    for c in u.values() {
        cont = gcd(&cont, c);
        if cont.is_one() {
            break;
        }
    }
    if cont.is_zero() {
        return (Polynomial::zero(), BTreeMap::new());
    }
    let prim = u
        .iter()
        .map(|(&e, c)| {
            (
                e,
                c.exact_div(&cont)
                    .expect("content divides every coefficient"),
            )
        })
        .collect();
    (cont, prim)
}

/// Pseudo-remainder of `a` by `b` in the main variable.
fn pseudo_rem<S: Scalar>(a: &Univariate<S>, b: &Univariate<S>) -> Univariate<S> {
    let db = uni_degree(b);
    let lb = b[&db].clone();
    let mut r = a.clone();
    while !uni_is_zero(&r) && uni_degree(&r) >= db {
        let dr = uni_degree(&r);
        let lr = r[&dr].clone();
        // lb * r  -  lr * x^(dr-db) * b
        let shifted: Univariate<S> = b
            .iter()
            .map(|(&e, c)| (e + dr - db, c.mul(&lr)))
            .collect();
        r = uni_sub(&uni_scale(&r, &lb), &shifted);
    }
    r
}

/// Primitive PRS on primitive inputs; returns the primitive GCD.
fn primitive_prs<S: Scalar>(mut a: Univariate<S>, mut b: Univariate<S>) -> Univariate<S> {
    if uni_degree(&a) < uni_degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b);
        if uni_is_zero(&r) {
            return b;
        }
        if uni_degree(&r) == 0 {
            // nonzero remainder of main-degree zero: coprime in the main
            // variable, common content already handled by the caller
            return BTreeMap::from([(0u32, Polynomial::one())]);
        }
        let (_, prim) = content_and_primitive(&r);
        a = b;
        b = prim;
    }
}

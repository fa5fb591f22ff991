//! Sparse multivariate polynomials over an exact scalar field.
//!
//! Monomials are compared in graded lexicographic order with respect to
//! the global variable order fixed by the owning jet space (lower
//! [`Var`] index = earlier variable). Polynomials keep their terms
//! sorted by descending monomial order with no zero coefficients, so
//! structural equality is semantic equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Index of a variable in the owning jet space's coordinate table.
///
/// The numeric order of `Var` indices is the global variable precedence
/// used by the monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

/// A power product of variables, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    /// `(variable, exponent)` pairs, sorted by variable, exponents > 0.
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs, merging
    /// duplicates and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial { factors: map.into_iter().collect() }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (va, ea) = self.factors[i];
            let (vb, eb) = other.factors[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Exact monomial quotient; `None` if some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(v, e) in &self.factors {
            let mut e = e;
            if j < other.factors.len() && other.factors[j].0 < v {
                return None; // divisor has a variable we lack
            }
            if j < other.factors.len() && other.factors[j].0 == v {
                let eb = other.factors[j].1;
                if eb > e {
                    return None;
                }
                e -= eb;
                j += 1;
            }
            if e > 0 {
                out.push((v, e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, ties broken by the
    /// first variable (in global precedence) with differing exponent,
    /// larger exponent winning.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // earliest variable present only on one side: that
                    // side has the larger exponent there
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

/// A multivariate polynomial in canonical sparse form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<S: Scalar> {
    /// Terms sorted by descending monomial order, no zero coefficients.
    terms: Vec<(Monomial, S)>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn var(v: Var) -> Self {
        Polynomial { terms: vec![(Monomial::var(v), S::one())] }
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds from unsorted terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut map: BTreeMap<Monomial, S> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().clone() + c;
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().collect();
        terms.reverse(); // descending
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> &[(Monomial, S)] {
        &self.terms
    }

    /// Leading (largest) monomial and coefficient; `None` for zero.
    pub fn leading(&self) -> Option<(&Monomial, &S)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Highest power of `v` occurring.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// All variables occurring with nonzero exponent, ascending.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.vars()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = ca.clone() + cb.clone();
                    if !s.is_zero() {
                        out.push((ma.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        Polynomial { terms: out }
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut map: BTreeMap<Monomial, S> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match map.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get().clone() + c;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().collect();
        terms.reverse();
        Polynomial { terms }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Self {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let factors = m
                .factors()
                .iter()
                .filter_map(|&(w, k)| {
                    let k = if w == v { k - 1 } else { k };
                    (k > 0).then_some((w, k))
                })
                .collect::<Vec<_>>();
            terms.push((
                Monomial::from_pairs(factors),
                c.clone() * S::from_int(e as i64),
            ));
        }
        Self::from_terms(terms)
    }

    /// Divides every coefficient by `c`.
    pub fn div_scalar(&self, c: &S) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() / c.clone()))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, lc)) => {
                if lc.is_one() {
                    self.clone()
                } else {
                    let lc = lc.clone();
                    self.div_scalar(&lc)
                }
            }
        }
    }

    /// Exact multivariate division: `Some(q)` with `self = q * d`, or
    /// `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dm, dc) = d.leading().expect("nonzero");
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, S)> = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(dm)?;
            let qc = rc.clone() / dc.clone();
            let t = Polynomial::monomial(qm.clone(), qc.clone());
            rem = rem.sub(&t.mul(d));
            quot.push((qm, qc));
        }
        Some(Polynomial::from_terms(quot))
    }

    /// Evaluates at a total assignment `value(v)` of every variable.
    pub fn eval_with<F: FnMut(Var) -> S>(&self, mut value: F) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = value(v);
                let mut p = S::one();
                for _ in 0..e {
                    p = p * x.clone();
                }
                t = t * p;
            }
            acc = acc + t;
        }
        acc
    }
}

//! Finite-order jet space bookkeeping.
//!
//! A [`JetSpace`] declares base coordinates, fields, gauge parameters,
//! symbolic constants and the maximum jet order it tracks. On
//! construction it enumerates every coordinate in the global variable
//! order used by the canonical monomial order: base coordinates, then
//! field jets by `(field, |alpha|, lex alpha)`, then parameter jets,
//! then constants.
//!
//! Order bookkeeping is explicit: operations that raise the jet order
//! fail loudly with [`Error::OrderOverflow`] instead of truncating.

mod fields;
mod forms;

pub use fields::{Prolongation, ProjectableVectorField};
pub use forms::HorizontalForm;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::symexpr::{Coordinate, CoordKind, RatExpr, SpaceId, Var};

/// Derivative multi-index: one exponent per base direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex { exps: vec![0; n] }
    }

    pub fn unit(n: usize, mu: usize) -> Self {
        let mut exps = vec![0; n];
        exps[mu] = 1;
        MultiIndex { exps }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        MultiIndex { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    /// Total order `|alpha|`.
    pub fn order(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.order() == 0
    }

    pub fn plus(&self, mu: usize) -> Self {
        let mut exps = self.exps.clone();
        exps[mu] += 1;
        MultiIndex { exps }
    }

    pub fn minus(&self, mu: usize) -> Option<Self> {
        if self.exps[mu] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[mu] -= 1;
        Some(MultiIndex { exps })
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Componentwise difference; `None` when `other` is not contained.
    pub fn sub(&self, other: &Self) -> Option<Self> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            if b > a {
                return None;
            }
            exps.push(a - b);
        }
        Some(MultiIndex { exps })
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a >= b)
    }

    /// Smallest base direction with a nonzero exponent.
    pub fn smallest_direction(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    /// Base directions with multiplicity, ascending.
    pub fn directions(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .flat_map(|(mu, &e)| std::iter::repeat(mu).take(e as usize))
    }

    /// Product of componentwise binomial coefficients `C(alpha, beta)`.
    pub fn binomial<S: Scalar>(&self, beta: &Self) -> S {
        let mut b: u64 = 1;
        for (&a, &c) in self.exps.iter().zip(&beta.exps) {
            b *= binom(a as u64, c as u64);
        }
        S::from_u64(b).expect("binomial fits the scalar")
    }

    /// Every multi-index of order `<= max` over `n` directions, in the
    /// canonical `(|alpha|, lex)` ascending order.
    pub fn all_up_to(n: usize, max: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for deg in 0..=max {
            let mut batch = Vec::new();
            compositions(n, deg, &mut vec![0; n], 0, &mut batch);
            batch.sort_by(|a: &MultiIndex, b| a.exps.cmp(&b.exps));
            out.extend(batch);
        }
        out
    }

    /// Every `beta <= alpha` componentwise, canonical order.
    pub fn submultis(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.exps.len())];
        for (mu, &e) in self.exps.iter().enumerate() {
            let prev = std::mem::take(&mut out);
            for b in prev {
                for k in 0..=e {
                    let mut exps = b.exps.clone();
                    exps[mu] = k;
                    out.push(MultiIndex { exps });
                }
            }
        }
        out.sort();
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn compositions(n: usize, deg: u32, buf: &mut Vec<u32>, at: usize, out: &mut Vec<MultiIndex>) {
    if at == n {
        if deg == 0 {
            out.push(MultiIndex { exps: buf.clone() });
        }
        return;
    }
    for e in 0..=deg {
        buf[at] = e;
        compositions(n, deg - e, buf, at + 1, out);
    }
    buf[at] = 0;
}

/// Declaration of a jet space.
#[derive(Debug, Clone)]
pub struct SpaceSpec<S: Scalar> {
    pub base: Vec<String>,
    pub fields: Vec<String>,
    pub params: Vec<String>,
    pub constants: Vec<String>,
    pub max_order: u32,
    pub metric: Option<Vec<Vec<S>>>,
}

impl<S: Scalar> SpaceSpec<S> {
    pub fn new(base: &[&str], fields: &[&str], max_order: u32) -> Self {
        SpaceSpec {
            base: base.iter().map(|s| s.to_string()).collect(),
            fields: fields.iter().map(|s| s.to_string()).collect(),
            params: Vec::new(),
            constants: Vec::new(),
            max_order,
            metric: None,
        }
    }

    pub fn params(mut self, params: &[&str]) -> Self {
        self.params = params.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn constants(mut self, constants: &[&str]) -> Self {
        self.constants = constants.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn metric(mut self, metric: Vec<Vec<S>>) -> Self {
        self.metric = Some(metric);
        self
    }
}

/// A finite-order jet space with its full coordinate table.
#[derive(Debug)]
pub struct JetSpace<S: Scalar> {
    id: SpaceId,
    base: Vec<String>,
    fields: Vec<String>,
    params: Vec<String>,
    constants: Vec<String>,
    max_order: u32,
    metric: Option<Vec<Vec<S>>>,
    coords: Vec<Coordinate>,
    by_name: HashMap<String, Var>,
    /// Multi-indices of order `<= max_order`, canonical order; the rank
    /// of a multi-index is its position here.
    ranks: Vec<MultiIndex>,
    rank_of: HashMap<MultiIndex, usize>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric())
}

impl<S: Scalar> JetSpace<S> {
    pub fn new(spec: SpaceSpec<S>) -> Result<Self> {
        let n = spec.base.len();
        let m = spec.fields.len();
        if n < 1 || m < 1 || spec.max_order < 1 {
            return Err(Error::InvalidSpace(
                "need at least one base coordinate, one field, and order >= 1".into(),
            ));
        }
        let mut seen = HashMap::new();
        for name in spec
            .base
            .iter()
            .chain(&spec.fields)
            .chain(&spec.params)
            .chain(&spec.constants)
        {
            if !valid_identifier(name) {
                return Err(Error::InvalidSpace(format!(
                    "`{name}` is not a valid identifier (letters and digits, starting with a letter)"
                )));
            }
            if seen.insert(name.clone(), ()).is_some() {
                return Err(Error::InvalidSpace(format!("name `{name}` declared twice")));
            }
        }
        // Jet subscripts are decoded greedily, so base names must be
        // mutually prefix-free.
        for a in &spec.base {
            for b in &spec.base {
                if a != b && b.starts_with(a.as_str()) {
                    return Err(Error::InvalidSpace(format!(
                        "base coordinate `{a}` is a prefix of `{b}`"
                    )));
                }
            }
        }
        if let Some(g) = &spec.metric {
            if g.len() != n || g.iter().any(|row| row.len() != n) {
                return Err(Error::InvalidSpace("metric must be n x n".into()));
            }
            for i in 0..n {
                for j in 0..n {
                    if g[i][j] != g[j][i] {
                        return Err(Error::InvalidSpace("metric must be symmetric".into()));
                    }
                }
            }
            if linalg::rank(g.clone()) < n {
                return Err(Error::InvalidSpace("metric must be invertible".into()));
            }
        }

        let id = SpaceId::fresh();
        let ranks = MultiIndex::all_up_to(n, spec.max_order);
        let rank_of: HashMap<MultiIndex, usize> = ranks
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();

        let mut coords = Vec::new();
        let push = |coords: &mut Vec<Coordinate>,
                        kind: CoordKind,
                        owner: usize,
                        index: MultiIndex,
                        name: String| {
            let var = Var(coords.len() as u32);
            coords.push(Coordinate { space: id, var, kind, owner, index, name });
        };
        for (mu, name) in spec.base.iter().enumerate() {
            push(&mut coords, CoordKind::Base, mu, MultiIndex::zero(n), name.clone());
        }
        for (a, field) in spec.fields.iter().enumerate() {
            for alpha in &ranks {
                let name = jet_name(field, alpha, &spec.base);
                push(&mut coords, CoordKind::FieldJet, a, alpha.clone(), name);
            }
        }
        for (p, param) in spec.params.iter().enumerate() {
            for alpha in &ranks {
                let name = jet_name(param, alpha, &spec.base);
                push(&mut coords, CoordKind::ParamJet, p, alpha.clone(), name);
            }
        }
        for (k, name) in spec.constants.iter().enumerate() {
            push(&mut coords, CoordKind::Constant, k, MultiIndex::zero(n), name.clone());
        }
        let by_name = coords.iter().map(|c| (c.name.clone(), c.var)).collect();

        Ok(JetSpace {
            id,
            base: spec.base,
            fields: spec.fields,
            params: spec.params,
            constants: spec.constants,
            max_order: spec.max_order,
            metric: spec.metric,
            coords,
            by_name,
            ranks,
            rank_of,
        })
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn base_dim(&self) -> usize {
        self.base.len()
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn constant_count(&self) -> usize {
        self.constants.len()
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn field_names(&self) -> &[String] {
        &self.fields
    }

    pub fn param_names(&self) -> &[String] {
        &self.params
    }

    pub fn metric(&self) -> Option<&Vec<Vec<S>>> {
        self.metric.as_ref()
    }

    /// Multi-indices of order `<= max_order` in canonical order.
    pub fn multi_indices(&self) -> &[MultiIndex] {
        &self.ranks
    }

    pub fn coord(&self, v: Var) -> &Coordinate {
        &self.coords[v.0 as usize]
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    /// Looks a coordinate up by spelling; non-canonical derivative
    /// spellings (`y_tx` for `y_xt`) resolve to the same coordinate.
    pub fn coordinate(&self, name: &str) -> Option<&Coordinate> {
        self.resolve(name).ok()
    }

    pub(crate) fn resolve(&self, name: &str) -> Result<&Coordinate> {
        if let Some(&v) = self.by_name.get(name) {
            return Ok(self.coord(v));
        }
        let Some((head, tail)) = name.split_once('_') else {
            return Err(Error::UnknownIdentifier { name: name.into(), pos: 0 });
        };
        let (kind, owner) = if let Some(a) = self.fields.iter().position(|f| f == head) {
            (CoordKind::FieldJet, a)
        } else if let Some(p) = self.params.iter().position(|q| q == head) {
            (CoordKind::ParamJet, p)
        } else {
            return Err(Error::UnknownIdentifier { name: name.into(), pos: 0 });
        };
        let alpha = self.decode_subscript(name, tail)?;
        if alpha.order() > self.max_order {
            return Err(Error::JetOrderExceeded {
                name: name.into(),
                order: alpha.order(),
                max: self.max_order,
            });
        }
        let coord = match kind {
            CoordKind::FieldJet => self.field_jet(owner, &alpha)?,
            CoordKind::ParamJet => self.param_jet(owner, &alpha)?,
            _ => unreachable!(),
        };
        Ok(coord)
    }

    /// Greedy longest-match decoding of a derivative subscript into a
    /// multi-index (valid because base names are prefix-free).
    fn decode_subscript(&self, full: &str, tail: &str) -> Result<MultiIndex> {
        let mut alpha = MultiIndex::zero(self.base.len());
        let mut rest = tail;
        while !rest.is_empty() {
            let mut matched = None;
            for (mu, b) in self.base.iter().enumerate() {
                if rest.starts_with(b.as_str())
                    && matched.is_none_or(|(_, l): (usize, usize)| b.len() > l)
                {
                    matched = Some((mu, b.len()));
                }
            }
            let Some((mu, len)) = matched else {
                return Err(Error::UnknownIdentifier { name: full.into(), pos: 0 });
            };
            alpha = alpha.plus(mu);
            rest = &rest[len..];
        }
        if alpha.is_empty() {
            return Err(Error::UnknownIdentifier { name: full.into(), pos: 0 });
        }
        Ok(alpha)
    }

    fn jet_var(&self, block_start: usize, owner: usize, alpha: &MultiIndex) -> Result<Var> {
        if alpha.order() > self.max_order {
            return Err(Error::OrderOverflow { needed: alpha.order(), max: self.max_order });
        }
        let rank = *self.rank_of.get(alpha).ok_or(Error::UndeclaredCoordinate)?;
        Ok(Var((block_start + owner * self.ranks.len() + rank) as u32))
    }

    /// Field jet coordinate `y^a_alpha`.
    pub fn field_jet(&self, a: usize, alpha: &MultiIndex) -> Result<&Coordinate> {
        if a >= self.fields.len() {
            return Err(Error::UndeclaredCoordinate);
        }
        let v = self.jet_var(self.base.len(), a, alpha)?;
        Ok(self.coord(v))
    }

    /// Parameter jet coordinate `eps^A_alpha`.
    pub fn param_jet(&self, p: usize, alpha: &MultiIndex) -> Result<&Coordinate> {
        if p >= self.params.len() {
            return Err(Error::UndeclaredCoordinate);
        }
        let v = self.jet_var(self.base.len() + self.fields.len() * self.ranks.len(), p, alpha)?;
        Ok(self.coord(v))
    }

    pub fn base_coord(&self, mu: usize) -> &Coordinate {
        &self.coords[mu]
    }

    pub fn constant_coord(&self, k: usize) -> &Coordinate {
        let start = self.base.len() + (self.fields.len() + self.params.len()) * self.ranks.len();
        &self.coords[start + k]
    }

    /// Expression consisting of a single named coordinate.
    pub fn expr(&self, name: &str) -> Result<RatExpr<S>> {
        Ok(RatExpr::coord(self.resolve(name)?))
    }

    pub fn parse(&self, text: &str) -> Result<RatExpr<S>> {
        crate::symexpr::parse::parse(self, text)
    }

    pub fn render(&self, e: &RatExpr<S>) -> String {
        crate::symexpr::print::render(self, e)
    }

    /// Total derivative `D_mu f`: the chain rule on jet coordinates,
    /// raising the order by one.
    pub fn total_derivative(&self, f: &RatExpr<S>, mu: usize) -> Result<RatExpr<S>> {
        assert!(mu < self.base.len(), "base direction out of range");
        assert_eq!(f.space_id(), self.id, "expression from another space");
        let mut acc = RatExpr::zero(self.id);
        for v in f.vars() {
            let c = self.coord(v);
            let lifted = match c.kind {
                CoordKind::Base => {
                    if c.owner == mu {
                        RatExpr::one(self.id)
                    } else {
                        continue;
                    }
                }
                CoordKind::Constant => continue,
                CoordKind::FieldJet => {
                    let next = c.index.plus(mu);
                    if next.order() > self.max_order {
                        return Err(Error::OrderOverflow {
                            needed: next.order(),
                            max: self.max_order,
                        });
                    }
                    RatExpr::coord(self.field_jet(c.owner, &next)?)
                }
                CoordKind::ParamJet => {
                    let next = c.index.plus(mu);
                    if next.order() > self.max_order {
                        return Err(Error::OrderOverflow {
                            needed: next.order(),
                            max: self.max_order,
                        });
                    }
                    RatExpr::coord(self.param_jet(c.owner, &next)?)
                }
            };
            acc = acc.add(&f.partial_var(v).mul(&lifted));
        }
        Ok(acc)
    }

    /// Iterated total derivative `D_alpha f`; the result does not depend
    /// on the composition order.
    pub fn total_derivative_multi(&self, f: &RatExpr<S>, alpha: &MultiIndex) -> Result<RatExpr<S>> {
        let mut acc = f.clone();
        for mu in alpha.directions() {
            acc = self.total_derivative(&acc, mu)?;
        }
        Ok(acc)
    }

    /// Contact coefficients of the vertical differential: the table of
    /// nonzero `df/dy^a_alpha` (and parameter analogues), indexed by
    /// jet coordinate.
    pub fn vertical_differential(&self, f: &RatExpr<S>) -> Vec<(Coordinate, RatExpr<S>)> {
        let mut out = Vec::new();
        for v in f.vars() {
            let c = self.coord(v);
            if matches!(c.kind, CoordKind::FieldJet | CoordKind::ParamJet) {
                let d = f.partial_var(v);
                if !d.is_zero() {
                    out.push((c.clone(), d));
                }
            }
        }
        out
    }
}

fn jet_name(owner: &str, alpha: &MultiIndex, base: &[String]) -> String {
    if alpha.is_empty() {
        return owner.to_string();
    }
    let mut name = String::from(owner);
    name.push('_');
    for (mu, &e) in alpha.exponents().iter().enumerate() {
        for _ in 0..e {
            name.push_str(&base[mu]);
        }
    }
    name
}

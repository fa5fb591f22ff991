//! Linearized Euler-Lagrange operators, formal adjoints, the
//! self-adjointness certificate, and the Jacobi operator on gauge
//! parameters.
//!
//! The central check: the linearization of any Euler-Lagrange
//! expression compares coefficientwise equal to its formal adjoint
//! after canonicalization. The engine certifies this rather than
//! assuming it, and reports every discrepancy for operators where it
//! fails.

mod ode;

pub use ode::{conjugate_points_fundamental, jacobi_fields_ode, Trajectory};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::jetspace::{JetSpace, MultiIndex};
use crate::scalar::Scalar;
use crate::symexpr::{CoordKind, RatExpr, SpaceId};
use crate::variational::{
    euler_operator, GaugeLift, Lagrangian, ELExpression,
};

/// A linear total-derivative operator
/// `(Lv)_a = sum_{b,alpha} A^alpha_{ab} D_alpha v^b`.
#[derive(Debug, Clone)]
pub struct LinearDiffOperator<S: Scalar> {
    space: SpaceId,
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<(usize, usize, MultiIndex), RatExpr<S>>,
}

impl<S: Scalar> LinearDiffOperator<S> {
    pub fn new(space: &JetSpace<S>, rows: usize, cols: usize) -> Self {
        LinearDiffOperator { space: space.id(), rows, cols, coeffs: BTreeMap::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    /// Maximum `|alpha|` with a nonzero coefficient.
    pub fn order(&self) -> u32 {
        self.coeffs.keys().map(|(_, _, a)| a.order()).max().unwrap_or(0)
    }

    pub fn set(&mut self, a: usize, b: usize, alpha: MultiIndex, e: RatExpr<S>) {
        assert!(a < self.rows && b < self.cols, "component out of range");
        if e.is_zero() {
            self.coeffs.remove(&(a, b, alpha));
        } else {
            self.coeffs.insert((a, b, alpha), e);
        }
    }

    pub fn coefficient(&self, a: usize, b: usize, alpha: &MultiIndex) -> RatExpr<S> {
        self.coeffs
            .get(&(a, b, alpha.clone()))
            .cloned()
            .unwrap_or(RatExpr::zero(self.space))
    }

    pub fn coefficients(
        &self,
    ) -> impl Iterator<Item = (&(usize, usize, MultiIndex), &RatExpr<S>)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Applies the operator to vertical components.
    pub fn apply(&self, space: &JetSpace<S>, v: &[RatExpr<S>]) -> Result<Vec<RatExpr<S>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = vec![RatExpr::zero(self.space); self.rows];
        for ((a, b, alpha), coeff) in &self.coeffs {
            let dv = space.total_derivative_multi(&v[*b], alpha)?;
            out[*a] = out[*a].add(&coeff.mul(&dv));
        }
        Ok(out)
    }

    /// Structural equality of canonical coefficient tables.
    pub fn equals(&self, other: &Self) -> bool {
        self.space == other.space
            && self.rows == other.rows
            && self.cols == other.cols
            && self.coeffs == other.coeffs
    }
}

/// Fréchet linearization `A^alpha_{ab} = dE_a / dy^b_alpha`.
pub fn linearize<S: Scalar>(
    space: &JetSpace<S>,
    el: &ELExpression<S>,
) -> Result<LinearDiffOperator<S>> {
    let m = space.field_count();
    if el.components().len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: el.components().len() });
    }
    let mut op = LinearDiffOperator::new(space, m, m);
    for (a, e) in el.components().iter().enumerate() {
        for var in e.vars() {
            let c = space.coord(var).clone();
            if c.kind != CoordKind::FieldJet {
                continue;
            }
            op.set(a, c.owner, c.index.clone(), e.partial_var(var));
        }
    }
    Ok(op)
}

/// Formal adjoint `(L* u)_b = sum (-1)^|alpha| D_alpha(A^alpha_{ab} u^a)`,
/// re-expanded into coefficient form with the Leibniz rule:
/// `A*^beta_{ba} = sum_{alpha >= beta} (-1)^|alpha| C(alpha,beta)
/// D_{alpha-beta} A^alpha_{ab}`.
pub fn formal_adjoint<S: Scalar>(
    space: &JetSpace<S>,
    op: &LinearDiffOperator<S>,
) -> Result<LinearDiffOperator<S>> {
    let mut acc: BTreeMap<(usize, usize, MultiIndex), RatExpr<S>> = BTreeMap::new();
    for ((a, b, alpha), coeff) in op.coefficients() {
        let sign_alpha = alpha.order() % 2 == 0;
        for beta in alpha.submultis() {
            let gap = alpha.sub(&beta).expect("beta <= alpha");
            let mut term = space.total_derivative_multi(coeff, &gap)?;
            let binom: S = alpha.binomial(&beta);
            term = term.scale(&binom);
            if !sign_alpha {
                term = term.neg();
            }
            let key = (*b, *a, beta);
            let entry = acc.remove(&key).unwrap_or(RatExpr::zero(op.space_id()));
            let sum = entry.add(&term);
            if !sum.is_zero() {
                acc.insert(key, sum);
            }
        }
    }
    let mut out = LinearDiffOperator::new(space, op.cols(), op.rows());
    for ((b, a, beta), e) in acc {
        out.set(b, a, beta, e);
    }
    Ok(out)
}

/// Outcome of the self-adjointness comparison.
#[derive(Debug, Clone)]
pub struct SelfAdjointReport<S: Scalar> {
    /// True iff the discrepancy table is empty.
    pub verdict: bool,
    /// Nonzero coefficients of `L - L*`, indexed `(a, b, alpha)`.
    pub discrepancies: Vec<(usize, usize, MultiIndex, RatExpr<S>)>,
}

/// Compares an operator to its formal adjoint coefficientwise.
pub fn self_adjoint_report<S: Scalar>(
    space: &JetSpace<S>,
    op: &LinearDiffOperator<S>,
) -> Result<SelfAdjointReport<S>> {
    if op.rows() != op.cols() {
        return Err(Error::UnsupportedOperator(
            "self-adjointness needs a square operator".into(),
        ));
    }
    let adj = formal_adjoint(space, op)?;
    let mut keys: Vec<(usize, usize, MultiIndex)> =
        op.coefficients().map(|(k, _)| k.clone()).collect();
    keys.extend(adj.coefficients().map(|(k, _)| k.clone()));
    keys.sort();
    keys.dedup();
    let mut discrepancies = Vec::new();
    for (a, b, alpha) in keys {
        let diff = op.coefficient(a, b, &alpha).sub(&adj.coefficient(a, b, &alpha));
        if !diff.is_zero() {
            discrepancies.push((a, b, alpha, diff));
        }
    }
    Ok(SelfAdjointReport { verdict: discrepancies.is_empty(), discrepancies })
}

/// Second formal derivative of the density along `y -> y + t v` at
/// `t = 0`: the density quadratic in the variation,
/// `sum d2L/dy^a_alpha dy^b_beta D_alpha(v^a) D_beta(v^b)`.
pub fn second_variation_density<S: Scalar>(
    space: &JetSpace<S>,
    lagrangian: &Lagrangian<S>,
    v: &[RatExpr<S>],
) -> Result<RatExpr<S>> {
    if v.len() != space.field_count() {
        return Err(Error::DimensionMismatch {
            expected: space.field_count(),
            got: v.len(),
        });
    }
    let density = lagrangian.density();
    let mut acc = RatExpr::zero(space.id());
    for var1 in density.vars() {
        let c1 = space.coord(var1).clone();
        if c1.kind != CoordKind::FieldJet {
            continue;
        }
        let d1 = density.partial_var(var1);
        let dv1 = space.total_derivative_multi(&v[c1.owner], &c1.index)?;
        for var2 in d1.vars() {
            let c2 = space.coord(var2).clone();
            if c2.kind != CoordKind::FieldJet {
                continue;
            }
            let d2 = d1.partial_var(var2);
            let dv2 = space.total_derivative_multi(&v[c2.owner], &c2.index)?;
            acc = acc.add(&d2.mul(&dv1).mul(&dv2));
        }
    }
    Ok(acc)
}

/// The Jacobi operator on gauge parameters:
/// `(J eps)_A = 1/2 E_{eps^A}(second variation along the lift)`.
///
/// For the identity lift this must coincide with the Fréchet
/// linearization of the Euler-Lagrange expressions; the equality is
/// asserted, not assumed.
pub fn jacobi_operator<S: Scalar>(
    space: &JetSpace<S>,
    lagrangian: &Lagrangian<S>,
    lift: &GaugeLift<S>,
) -> Result<LinearDiffOperator<S>> {
    let delta2 = second_variation_density(space, lagrangian, lift.vertical())?;
    let euler = euler_operator(space, &delta2, CoordKind::ParamJet)?;
    let half = S::one() / S::from_int(2);
    let p = space.param_count();
    let mut op = LinearDiffOperator::new(space, p, p);
    for (cap_a, e) in euler.iter().enumerate() {
        let halved = e.scale(&half);
        for var in halved.vars() {
            let c = space.coord(var).clone();
            if c.kind != CoordKind::ParamJet {
                continue;
            }
            let coeff = halved.partial_var(var);
            for w in coeff.vars() {
                if matches!(space.coord(w).kind, CoordKind::ParamJet) {
                    return Err(Error::IdentityViolation(
                        "Jacobi operator coefficients are not parameter-free".into(),
                    ));
                }
            }
            op.set(cap_a, c.owner, c.index.clone(), coeff);
        }
        // the Euler output must be exactly linear in the parameter jets
        let rebuilt = op.apply(space, &identity_parameters(space)?)?;
        if !rebuilt[cap_a].equals(&halved)? {
            return Err(Error::IdentityViolation(
                "Jacobi operator row is not linear in the parameter jets".into(),
            ));
        }
    }

    if is_identity_lift(space, lift) {
        let el = crate::variational::euler_lagrange(space, lagrangian)?;
        let lin = linearize(space, &el)?;
        if !op.equals(&lin) {
            return Err(Error::IdentityViolation(
                "Jacobi operator of the identity lift differs from the linearized \
                 Euler-Lagrange operator"
                    .into(),
            ));
        }
    }
    Ok(op)
}

fn identity_parameters<S: Scalar>(space: &JetSpace<S>) -> Result<Vec<RatExpr<S>>> {
    let n = space.base_dim();
    (0..space.param_count())
        .map(|p| Ok(RatExpr::coord(space.param_jet(p, &MultiIndex::zero(n))?)))
        .collect()
}

fn is_identity_lift<S: Scalar>(space: &JetSpace<S>, lift: &GaugeLift<S>) -> bool {
    if space.param_count() != space.field_count() {
        return false;
    }
    let Ok(id) = identity_parameters(space) else {
        return false;
    };
    lift.vertical()
        .iter()
        .zip(&id)
        .all(|(v, e)| v.equals(e).unwrap_or(false))
}

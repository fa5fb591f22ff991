//! Projectable vector fields and their jet prolongation.

use std::collections::BTreeMap;

use super::{JetSpace, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symexpr::{CoordKind, RatExpr, SpaceId};

/// A projectable (generalized) vector field: base components depending
/// on base coordinates only, fiber components allowed to depend on jets.
#[derive(Debug, Clone)]
pub struct ProjectableVectorField<S: Scalar> {
    space: SpaceId,
    xi: Vec<RatExpr<S>>,
    fiber: Vec<RatExpr<S>>,
}

impl<S: Scalar> ProjectableVectorField<S> {
    pub fn new(
        space: &JetSpace<S>,
        xi: Vec<RatExpr<S>>,
        fiber: Vec<RatExpr<S>>,
    ) -> Result<Self> {
        if xi.len() != space.base_dim() {
            return Err(Error::InvalidVectorField(format!(
                "expected {} base components, got {}",
                space.base_dim(),
                xi.len()
            )));
        }
        if fiber.len() != space.field_count() {
            return Err(Error::InvalidVectorField(format!(
                "expected {} fiber components, got {}",
                space.field_count(),
                fiber.len()
            )));
        }
        for e in xi.iter().chain(&fiber) {
            if e.space_id() != space.id() {
                return Err(Error::SpaceMismatch);
            }
        }
        for (mu, e) in xi.iter().enumerate() {
            for v in e.vars() {
                if !matches!(space.coord(v).kind, CoordKind::Base | CoordKind::Constant) {
                    return Err(Error::InvalidVectorField(format!(
                        "base component {mu} depends on `{}`; projectability needs base \
                         coordinates and constants only",
                        space.coord(v).name
                    )));
                }
            }
        }
        for (a, e) in fiber.iter().enumerate() {
            for v in e.vars() {
                if matches!(space.coord(v).kind, CoordKind::ParamJet) {
                    return Err(Error::InvalidVectorField(format!(
                        "fiber component {a} depends on parameter jet `{}`",
                        space.coord(v).name
                    )));
                }
            }
        }
        Ok(ProjectableVectorField { space: space.id(), xi, fiber })
    }

    /// Purely vertical field with the given fiber components.
    pub fn vertical(space: &JetSpace<S>, fiber: Vec<RatExpr<S>>) -> Result<Self> {
        let xi = vec![RatExpr::zero(space.id()); space.base_dim()];
        Self::new(space, xi, fiber)
    }

    pub fn xi(&self) -> &[RatExpr<S>] {
        &self.xi
    }

    pub fn fiber(&self) -> &[RatExpr<S>] {
        &self.fiber
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    /// Highest jet order appearing in the fiber components.
    pub fn order(&self, space: &JetSpace<S>) -> u32 {
        self.fiber
            .iter()
            .map(|e| e.max_jet_order(space))
            .max()
            .unwrap_or(0)
    }

    /// Vertical part `v^a = Xi^a - y^a_nu xi^nu`. The generalized Lie
    /// derivative of a section along the field is the negative of this,
    /// componentwise.
    pub fn vertical_part(&self, space: &JetSpace<S>) -> Result<Vec<RatExpr<S>>> {
        let n = space.base_dim();
        let mut out = Vec::with_capacity(space.field_count());
        for (a, fib) in self.fiber.iter().enumerate() {
            let mut v = fib.clone();
            for nu in 0..n {
                if self.xi[nu].is_zero() {
                    continue;
                }
                let y_nu = RatExpr::coord(space.field_jet(a, &MultiIndex::unit(n, nu))?);
                v = v.sub(&y_nu.mul(&self.xi[nu]));
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Prolongs the field to jet order `s`:
    /// `Xi^a_alpha = D_alpha(v^a) + y^a_{alpha+nu} xi^nu`.
    pub fn prolong(&self, space: &JetSpace<S>, s: u32) -> Result<Prolongation<S>> {
        let n = space.base_dim();
        let vert = self.vertical_part(space)?;
        let mut components = Vec::with_capacity(space.field_count());
        for (a, v) in vert.iter().enumerate() {
            let mut table = BTreeMap::new();
            for alpha in MultiIndex::all_up_to(n, s) {
                let mut comp = space.total_derivative_multi(v, &alpha)?;
                for nu in 0..n {
                    if self.xi[nu].is_zero() {
                        continue;
                    }
                    let bumped = alpha.plus(nu);
                    if bumped.order() > space.max_order() {
                        return Err(Error::OrderOverflow {
                            needed: bumped.order(),
                            max: space.max_order(),
                        });
                    }
                    let y = RatExpr::coord(space.field_jet(a, &bumped)?);
                    comp = comp.add(&y.mul(&self.xi[nu]));
                }
                table.insert(alpha, comp);
            }
            components.push(table);
        }
        Ok(Prolongation { components })
    }

    /// Applies the prolonged field as a derivation to `f`, using only
    /// the jet coordinates that actually occur in `f`:
    /// `pr(V)(f) = xi^mu df/dx^mu + Xi^a_alpha df/dy^a_alpha`.
    pub fn apply_prolonged(&self, space: &JetSpace<S>, f: &RatExpr<S>) -> Result<RatExpr<S>> {
        let vert = self.vertical_part(space)?;
        let mut acc = RatExpr::zero(space.id());
        // horizontal part: xi^mu D_mu f reorganized through the chain
        // rule; equivalently xi^mu df/dx^mu + xi^nu y_{alpha+nu} df/dy_alpha
        for v in f.vars() {
            let c = space.coord(v).clone();
            let df = f.partial_var(v);
            match c.kind {
                CoordKind::Base => {
                    acc = acc.add(&df.mul(&self.xi[c.owner]));
                }
                CoordKind::FieldJet => {
                    // Xi^a_alpha = D_alpha v^a + y^a_{alpha+nu} xi^nu
                    let mut comp = space.total_derivative_multi(&vert[c.owner], &c.index)?;
                    for nu in 0..space.base_dim() {
                        if self.xi[nu].is_zero() {
                            continue;
                        }
                        let bumped = c.index.plus(nu);
                        if bumped.order() > space.max_order() {
                            return Err(Error::OrderOverflow {
                                needed: bumped.order(),
                                max: space.max_order(),
                            });
                        }
                        let y = RatExpr::coord(space.field_jet(c.owner, &bumped)?);
                        comp = comp.add(&y.mul(&self.xi[nu]));
                    }
                    acc = acc.add(&df.mul(&comp));
                }
                CoordKind::ParamJet | CoordKind::Constant => {}
            }
        }
        Ok(acc)
    }
}

/// Prolongation table: per field, multi-index to component.
#[derive(Debug, Clone)]
pub struct Prolongation<S: Scalar> {
    components: Vec<BTreeMap<MultiIndex, RatExpr<S>>>,
}

impl<S: Scalar> Prolongation<S> {
    pub fn component(&self, field: usize, alpha: &MultiIndex) -> Option<&RatExpr<S>> {
        self.components.get(field).and_then(|t| t.get(alpha))
    }

    pub fn field_table(&self, field: usize) -> &BTreeMap<MultiIndex, RatExpr<S>> {
        &self.components[field]
    }
}

//! Horizontal forms and the horizontal differential.

use std::collections::BTreeMap;

use super::JetSpace;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symexpr::{RatExpr, SpaceId};

/// A horizontal `q`-form: an antisymmetric coefficient table indexed by
/// strictly increasing `q`-tuples of base directions. Zero coefficients
/// are not stored.
#[derive(Debug, Clone)]
pub struct HorizontalForm<S: Scalar> {
    space: SpaceId,
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, RatExpr<S>>,
}

impl<S: Scalar> HorizontalForm<S> {
    pub fn zero(space: &JetSpace<S>, degree: usize) -> Result<Self> {
        if degree > space.base_dim() {
            return Err(Error::InvalidSpace(format!(
                "form degree {degree} exceeds base dimension {}",
                space.base_dim()
            )));
        }
        Ok(HorizontalForm {
            space: space.id(),
            dim: space.base_dim(),
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    /// Degree-`n` form `f dx^1 ^ ... ^ dx^n`.
    pub fn density(space: &JetSpace<S>, f: RatExpr<S>) -> Result<Self> {
        let mut form = Self::zero(space, space.base_dim())?;
        form.set((0..space.base_dim()).collect(), f)?;
        Ok(form)
    }

    /// Degree-`(n-1)` current with components `eps^mu`, assembled as
    /// `sum_mu eps^mu (d/dx^mu _| vol)` so its horizontal differential
    /// is the divergence density `sum_mu D_mu eps^mu`.
    pub fn current(space: &JetSpace<S>, components: Vec<RatExpr<S>>) -> Result<Self> {
        let n = space.base_dim();
        if components.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: components.len() });
        }
        let mut form = Self::zero(space, n - 1)?;
        for (mu, eps) in components.into_iter().enumerate() {
            let subset: Vec<usize> = (0..n).filter(|&i| i != mu).collect();
            let signed = if mu % 2 == 0 { eps } else { eps.neg() };
            form.add_to(subset, signed)?;
        }
        Ok(form)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at a strictly increasing index tuple.
    pub fn coefficient(&self, subset: &[usize]) -> RatExpr<S> {
        self.coeffs
            .get(subset)
            .cloned()
            .unwrap_or(RatExpr::zero(self.space))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, &RatExpr<S>)> {
        self.coeffs.iter()
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.len() != self.degree
            || subset.windows(2).any(|w| w[0] >= w[1])
            || subset.iter().any(|&i| i >= self.dim)
        {
            return Err(Error::InvalidSpace(format!(
                "invalid index tuple {subset:?} for a degree-{} form",
                self.degree
            )));
        }
        Ok(())
    }

    pub fn set(&mut self, subset: Vec<usize>, e: RatExpr<S>) -> Result<()> {
        self.check_subset(&subset)?;
        if e.space_id() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if e.is_zero() {
            self.coeffs.remove(&subset);
        } else {
            self.coeffs.insert(subset, e);
        }
        Ok(())
    }

    fn add_to(&mut self, subset: Vec<usize>, e: RatExpr<S>) -> Result<()> {
        let cur = self.coefficient(&subset);
        self.set(subset, cur.add(&e))
    }

    /// Components `eps^mu` of a degree-`(n-1)` current.
    pub fn current_components(&self) -> Result<Vec<RatExpr<S>>> {
        if self.degree + 1 != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim - 1,
                got: self.degree,
            });
        }
        let mut out = Vec::with_capacity(self.dim);
        for mu in 0..self.dim {
            let subset: Vec<usize> = (0..self.dim).filter(|&i| i != mu).collect();
            let c = self.coefficient(&subset);
            out.push(if mu % 2 == 0 { c } else { c.neg() });
        }
        Ok(out)
    }

    /// The single coefficient of a degree-`n` form.
    pub fn density_coefficient(&self) -> Result<RatExpr<S>> {
        if self.degree != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: self.degree });
        }
        Ok(self.coefficient(&(0..self.dim).collect::<Vec<_>>()))
    }

    /// Horizontal differential `d_H omega = dx^mu ^ D_mu omega`.
    ///
    /// A degree-`n` input has no horizontal differential to represent;
    /// the dedicated error flags it (the value would be the zero
    /// `(n+1)`-form).
    pub fn d_h(&self, space: &JetSpace<S>) -> Result<HorizontalForm<S>> {
        if space.id() != self.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree == self.dim {
            return Err(Error::FormDegreeOverflow { degree: self.degree });
        }
        let mut out = HorizontalForm {
            space: self.space,
            dim: self.dim,
            degree: self.degree + 1,
            coeffs: BTreeMap::new(),
        };
        for (subset, c) in &self.coeffs {
            for mu in 0..self.dim {
                if subset.contains(&mu) {
                    continue;
                }
                let d = space.total_derivative(c, mu)?;
                if d.is_zero() {
                    continue;
                }
                let before = subset.iter().filter(|&&i| i < mu).count();
                let mut bigger = subset.clone();
                bigger.insert(before, mu);
                let signed = if before % 2 == 0 { d } else { d.neg() };
                out.add_to(bigger, signed)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetspace::SpaceSpec;
    use num_rational::BigRational;

    type Space = JetSpace<BigRational>;

    fn plane() -> Space {
        Space::new(SpaceSpec::new(&["x", "t"], &["y"], 4)).unwrap()
    }

    #[test]
    fn d_h_of_function_collects_gradient() {
        let sp = plane();
        // n=2, omega = f dx -> (D_t f) dt ^ dx = -(D_t f) dx ^ dt
        let f = sp.parse("y").unwrap();
        let mut omega = HorizontalForm::zero(&sp, 1).unwrap();
        omega.set(vec![0], f).unwrap();
        let d = omega.d_h(&sp).unwrap();
        let c = d.coefficient(&[0, 1]);
        assert!(c.equals(&sp.parse("-y_t").unwrap()).unwrap());
    }

    #[test]
    fn d_h_squared_vanishes() {
        let sp = plane();
        let mut omega = HorizontalForm::zero(&sp, 0).unwrap();
        omega.set(vec![], sp.parse("x*y_x^2 + t*y*y_t").unwrap()).unwrap();
        let dd = omega.d_h(&sp).unwrap().d_h(&sp).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn top_degree_is_flagged() {
        let sp = plane();
        let vol = HorizontalForm::density(&sp, sp.parse("y").unwrap()).unwrap();
        let err = vol.d_h(&sp).unwrap_err();
        assert!(matches!(err, Error::FormDegreeOverflow { degree: 2 }));
    }

    #[test]
    fn current_divergence_convention() {
        let sp = plane();
        let ex = sp.parse("y*y_x").unwrap();
        let et = sp.parse("y_t^2").unwrap();
        let current =
            HorizontalForm::current(&sp, vec![ex.clone(), et.clone()]).unwrap();
        // components round-trip
        let comps = current.current_components().unwrap();
        assert!(comps[0].equals(&ex).unwrap());
        assert!(comps[1].equals(&et).unwrap());
        // d_h is the divergence density
        let div = current.d_h(&sp).unwrap().density_coefficient().unwrap();
        let expect = sp
            .total_derivative(&ex, 0)
            .unwrap()
            .add(&sp.total_derivative(&et, 1).unwrap());
        assert!(div.equals(&expect).unwrap());
    }
}

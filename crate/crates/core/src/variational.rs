//! Euler-Lagrange operator, first-variation decomposition, Noether
//! currents, and Bergmann-Bianchi identities.
//!
//! The integration-by-parts recursion that produces boundary currents is
//! deterministic: when stripping a derivative multi-index it always
//! removes the smallest base direction first. Boundary terms are not
//! unique in general; this fixes one coordinate-canonical choice.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::jetspace::{HorizontalForm, JetSpace, MultiIndex, ProjectableVectorField};
use crate::linalg;
use crate::scalar::Scalar;
use crate::symexpr::{CoordKind, Monomial, Polynomial, RatExpr, Var};

/// A Lagrangian density `L`; the `n`-form is `L dx^1 ^ ... ^ dx^n`.
#[derive(Debug, Clone)]
pub struct Lagrangian<S: Scalar> {
    density: RatExpr<S>,
    order: u32,
}

impl<S: Scalar> Lagrangian<S> {
    pub fn new(space: &JetSpace<S>, density: RatExpr<S>) -> Result<Self> {
        if density.space_id() != space.id() {
            return Err(Error::SpaceMismatch);
        }
        for v in density.vars() {
            if matches!(space.coord(v).kind, CoordKind::ParamJet) {
                return Err(Error::InvalidLagrangian(format!(
                    "density depends on parameter jet `{}`",
                    space.coord(v).name
                )));
            }
        }
        let order = density.max_jet_order(space);
        Ok(Lagrangian { density, order })
    }

    pub fn density(&self) -> &RatExpr<S> {
        &self.density
    }

    /// Maximum jet order appearing in the density.
    pub fn order(&self) -> u32 {
        self.order
    }
}

/// The Euler-Lagrange expressions `E_a`, of order at most `2s`.
#[derive(Debug, Clone)]
pub struct ELExpression<S: Scalar> {
    components: Vec<RatExpr<S>>,
    order: u32,
}

impl<S: Scalar> ELExpression<S> {
    pub fn components(&self) -> &[RatExpr<S>] {
        &self.components
    }

    pub fn component(&self, a: usize) -> &RatExpr<S> {
        &self.components[a]
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|e| e.is_zero())
    }

    pub fn from_components(space: &JetSpace<S>, components: Vec<RatExpr<S>>) -> Result<Self> {
        if components.len() != space.field_count() {
            return Err(Error::DimensionMismatch {
                expected: space.field_count(),
                got: components.len(),
            });
        }
        let order = components.iter().map(|e| e.max_jet_order(space)).max().unwrap_or(0);
        Ok(ELExpression { components, order })
    }
}

/// Euler operator in the directions of one coordinate family: for every
/// owner `a` of the given kind, `sum_alpha (-1)^|alpha| D_alpha
/// (df/dy^a_alpha)` over the jet coordinates actually present in `f`.
///
/// `kind` must be [`CoordKind::FieldJet`] or [`CoordKind::ParamJet`].
pub fn euler_operator<S: Scalar>(
    space: &JetSpace<S>,
    f: &RatExpr<S>,
    kind: CoordKind,
) -> Result<Vec<RatExpr<S>>> {
    let owners = match kind {
        CoordKind::FieldJet => space.field_count(),
        CoordKind::ParamJet => space.param_count(),
        _ => panic!("euler operator acts along field or parameter jets"),
    };
    let mut out = vec![RatExpr::zero(space.id()); owners];
    for v in f.vars() {
        let c = space.coord(v).clone();
        if c.kind != kind {
            continue;
        }
        let term = space.total_derivative_multi(&f.partial_var(v), &c.index)?;
        let signed = if c.index.order() % 2 == 0 { term } else { term.neg() };
        out[c.owner] = out[c.owner].add(&signed);
    }
    Ok(out)
}

/// `E_a = sum_alpha (-1)^|alpha| D_alpha(dL/dy^a_alpha)`.
pub fn euler_lagrange<S: Scalar>(
    space: &JetSpace<S>,
    lagrangian: &Lagrangian<S>,
) -> Result<ELExpression<S>> {
    let components = euler_operator(space, lagrangian.density(), CoordKind::FieldJet)?;
    ELExpression::from_components(space, components)
}

/// Result of the first-variation decomposition
/// `pr(v)(L) = interior + D_mu eps^mu`.
#[derive(Debug, Clone)]
pub struct FirstVariation<S: Scalar> {
    /// `sum_a v^a E_a`.
    pub interior: RatExpr<S>,
    /// Boundary current as a degree-(n-1) horizontal form.
    pub boundary: HorizontalForm<S>,
}

/// Derivation action of a vertical variation on the density:
/// `pr(v)(L) = sum_{a,alpha} D_alpha(v^a) dL/dy^a_alpha`.
fn vertical_prolonged_action<S: Scalar>(
    space: &JetSpace<S>,
    density: &RatExpr<S>,
    v: &[RatExpr<S>],
) -> Result<RatExpr<S>> {
    let mut acc = RatExpr::zero(space.id());
    for var in density.vars() {
        let c = space.coord(var).clone();
        if c.kind != CoordKind::FieldJet {
            continue;
        }
        let dv = space.total_derivative_multi(&v[c.owner], &c.index)?;
        acc = acc.add(&density.partial_var(var).mul(&dv));
    }
    Ok(acc)
}

/// Decomposes the first variation along vertical components `v` into
/// `sum_a v^a E_a` plus a divergence, by the deterministic
/// smallest-direction integration by parts. The exact identity
/// `pr(v)(L) = interior + D_mu eps^mu` is re-verified symbolically.
pub fn first_variation<S: Scalar>(
    space: &JetSpace<S>,
    lagrangian: &Lagrangian<S>,
    v: &[RatExpr<S>],
) -> Result<FirstVariation<S>> {
    if v.len() != space.field_count() {
        return Err(Error::DimensionMismatch {
            expected: space.field_count(),
            got: v.len(),
        });
    }
    let n = space.base_dim();
    let density = lagrangian.density();
    let mut interior = RatExpr::zero(space.id());
    let mut eps = vec![RatExpr::zero(space.id()); n];

    for var in density.vars() {
        let c = space.coord(var).clone();
        if c.kind != CoordKind::FieldJet {
            continue;
        }
        // strip D_beta v one smallest direction at a time:
        // A D_beta v = D_mu(A D_{beta-mu} v) - (D_mu A) D_{beta-mu} v
        let mut coeff = density.partial_var(var);
        let mut beta = c.index.clone();
        while let Some(mu) = beta.smallest_direction() {
            let reduced = beta.minus(mu).expect("direction present");
            let dv = space.total_derivative_multi(&v[c.owner], &reduced)?;
            eps[mu] = eps[mu].add(&coeff.mul(&dv));
            coeff = space.total_derivative(&coeff, mu)?.neg();
            beta = reduced;
        }
        interior = interior.add(&coeff.mul(&v[c.owner]));
    }

    // re-verify the decomposition
    let action = vertical_prolonged_action(space, density, v)?;
    let mut divergence = RatExpr::zero(space.id());
    for (mu, e) in eps.iter().enumerate() {
        divergence = divergence.add(&space.total_derivative(e, mu)?);
    }
    if !action.sub(&interior).sub(&divergence).is_zero() {
        return Err(Error::IdentityViolation(
            "first variation decomposition does not reproduce pr(v)(L)".into(),
        ));
    }

    let boundary = HorizontalForm::current(space, eps)?;
    Ok(FirstVariation { interior, boundary })
}

/// Density of the Lie derivative of the Lagrangian `n`-form:
/// `pr(V)(L) + L D_mu xi^mu`.
pub fn lie_derivative_lagrangian<S: Scalar>(
    space: &JetSpace<S>,
    lagrangian: &Lagrangian<S>,
    field: &ProjectableVectorField<S>,
) -> Result<RatExpr<S>> {
    let mut acc = field.apply_prolonged(space, lagrangian.density())?;
    for mu in 0..space.base_dim() {
        let dxi = space.total_derivative(&field.xi()[mu], mu)?;
        acc = acc.add(&lagrangian.density().mul(&dxi));
    }
    Ok(acc)
}

/// Noether current and symmetry residual for a projectable field.
#[derive(Debug, Clone)]
pub struct NoetherReport<S: Scalar> {
    /// Current `eps^mu = (boundary of the first variation at the
    /// vertical part) + xi^mu L`, as a degree-(n-1) form.
    pub current: HorizontalForm<S>,
    /// Lie derivative density; zero iff the field is a symmetry.
    pub residual: RatExpr<S>,
    /// Vertical part of the field, kept for on-shell bookkeeping.
    pub vertical: Vec<RatExpr<S>>,
}

/// First Noether theorem, off shell: builds the current and re-verifies
/// the exact identity `D_mu eps^mu = residual - sum_a v^a E_a`.
pub fn noether_current<S: Scalar>(
    space: &JetSpace<S>,
    lagrangian: &Lagrangian<S>,
    field: &ProjectableVectorField<S>,
) -> Result<NoetherReport<S>> {
    let vertical = field.vertical_part(space)?;
    let fv = first_variation(space, lagrangian, &vertical)?;
    let mut components = fv.boundary.current_components()?;
    for (mu, comp) in components.iter_mut().enumerate() {
        *comp = comp.add(&field.xi()[mu].mul(lagrangian.density()));
    }
    let residual = lie_derivative_lagrangian(space, lagrangian, field)?;

    let mut divergence = RatExpr::zero(space.id());
    for (mu, e) in components.iter().enumerate() {
        divergence = divergence.add(&space.total_derivative(e, mu)?);
    }
    if !divergence.sub(&residual).add(&fv.interior).is_zero() {
        return Err(Error::IdentityViolation(
            "Noether identity D.eps = residual - v.E failed to normalize to zero".into(),
        ));
    }

    let current = HorizontalForm::current(space, components)?;
    Ok(NoetherReport { current, residual, vertical })
}

/// Parameter-linear family of vertical variations
/// `v^a = sum_{A,alpha} Z^{a alpha}_A D_alpha eps^A`.
#[derive(Debug, Clone)]
pub struct GaugeLift<S: Scalar> {
    vertical: Vec<RatExpr<S>>,
}

impl<S: Scalar> GaugeLift<S> {
    /// Builds a lift from its vertical variations, enforcing
    /// homogeneous linearity in the parameter jets with coefficients
    /// free of parameter jets.
    pub fn new(space: &JetSpace<S>, vertical: Vec<RatExpr<S>>) -> Result<Self> {
        if vertical.len() != space.field_count() {
            return Err(Error::DimensionMismatch {
                expected: space.field_count(),
                got: vertical.len(),
            });
        }
        for (a, v) in vertical.iter().enumerate() {
            if v.space_id() != space.id() {
                return Err(Error::SpaceMismatch);
            }
            let mut linear = RatExpr::zero(space.id());
            for var in v.vars() {
                let c = space.coord(var);
                if c.kind != CoordKind::ParamJet {
                    continue;
                }
                let z = v.partial_var(var);
                for w in z.vars() {
                    if matches!(space.coord(w).kind, CoordKind::ParamJet) {
                        return Err(Error::InvalidLift(format!(
                            "coefficient of `{}` in component {a} still contains \
                             parameter jets",
                            c.name
                        )));
                    }
                }
                linear = linear.add(&z.mul(&RatExpr::coord(c)));
            }
            if !linear.equals(v).unwrap_or(false) {
                return Err(Error::InvalidLift(format!(
                    "component {a} is not homogeneous linear in the parameter jets"
                )));
            }
        }
        Ok(GaugeLift { vertical })
    }

    /// The identity lift `v^a = eps^a`; needs one parameter per field.
    pub fn identity(space: &JetSpace<S>) -> Result<Self> {
        if space.param_count() != space.field_count() {
            return Err(Error::InvalidLift(format!(
                "identity lift needs {} parameters, space has {}",
                space.field_count(),
                space.param_count()
            )));
        }
        let n = space.base_dim();
        let vertical = (0..space.field_count())
            .map(|a| Ok(RatExpr::coord(space.param_jet(a, &MultiIndex::zero(n))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GaugeLift { vertical })
    }

    pub fn vertical(&self) -> &[RatExpr<S>] {
        &self.vertical
    }

    /// Coefficient table `Z^{a alpha}_A = dv^a / d eps^A_alpha`.
    pub fn coefficients(
        &self,
        space: &JetSpace<S>,
    ) -> Vec<(usize, usize, MultiIndex, RatExpr<S>)> {
        let mut out = Vec::new();
        for (a, v) in self.vertical.iter().enumerate() {
            for var in v.vars() {
                let c = space.coord(var);
                if c.kind == CoordKind::ParamJet {
                    out.push((a, c.owner, c.index.clone(), v.partial_var(var)));
                }
            }
        }
        out
    }
}

/// Bergmann-Bianchi expressions: the Euler operator in the parameter
/// directions applied to `omega = sum_a v^a(eps) E_a`. All-zero output
/// certifies the gauge identities for the lift.
pub fn bianchi_identities<S: Scalar>(
    space: &JetSpace<S>,
    lagrangian: &Lagrangian<S>,
    lift: &GaugeLift<S>,
) -> Result<Vec<RatExpr<S>>> {
    let el = euler_lagrange(space, lagrangian)?;
    let mut omega = RatExpr::zero(space.id());
    for (a, v) in lift.vertical().iter().enumerate() {
        omega = omega.add(&v.mul(el.component(a)));
    }
    euler_operator(space, &omega, CoordKind::ParamJet)
}

/// Ansatz bounds for the on-shell membership search.
#[derive(Debug, Clone)]
pub struct OnShellOptions {
    /// Total-degree bound on the unknown coefficient expressions.
    pub coeff_degree: u32,
    /// Hard cap on the number of linear unknowns.
    pub max_unknowns: usize,
}

impl Default for OnShellOptions {
    fn default() -> Self {
        OnShellOptions { coeff_degree: 2, max_unknowns: 2000 }
    }
}

/// Certificate that `f = sum C^{a alpha} D_alpha E_a`.
#[derive(Debug, Clone)]
pub struct OnShellCertificate<S: Scalar> {
    pub coefficients: Vec<(usize, MultiIndex, RatExpr<S>)>,
}

/// Decides membership of `f` in the bounded differential ideal of `E`:
/// searches for polynomial coefficients `C^{a alpha}` of bounded degree
/// with `f = sum_{a,|alpha|<=k} C^{a alpha} D_alpha E_a`, by exact
/// linear algebra over monomial coefficients. Returns the certificate
/// on success, `None` when no representation exists in the ansatz.
pub fn is_on_shell_zero<S: Scalar>(
    space: &JetSpace<S>,
    f: &RatExpr<S>,
    el: &ELExpression<S>,
    k: u32,
    opts: &OnShellOptions,
) -> Result<Option<OnShellCertificate<S>>> {
    let n = space.base_dim();
    // derivative prolongations of the Euler-Lagrange expressions
    let mut generators: Vec<(usize, MultiIndex, RatExpr<S>)> = Vec::new();
    for a in 0..space.field_count() {
        for alpha in MultiIndex::all_up_to(n, k) {
            let g = space.total_derivative_multi(el.component(a), &alpha)?;
            if !g.is_zero() {
                generators.push((a, alpha, g));
            }
        }
    }
    if generators.is_empty() {
        return Ok(if f.is_zero() {
            Some(OnShellCertificate { coefficients: Vec::new() })
        } else {
            None
        });
    }

    // variables the coefficient ansatz may mention
    let mut ansatz_vars: Vec<Var> = f.vars();
    for (_, _, g) in &generators {
        ansatz_vars.extend(g.vars());
    }
    for c in space.coords() {
        if matches!(c.kind, CoordKind::Base | CoordKind::Constant) {
            ansatz_vars.push(c.var());
        }
    }
    ansatz_vars.sort_unstable();
    ansatz_vars.dedup();

    let monomials = monomials_up_to(&ansatz_vars, opts.coeff_degree);
    let unknowns = monomials.len() * generators.len();
    if unknowns > opts.max_unknowns {
        return Err(Error::AnsatzTooLarge { needed: unknowns, cap: opts.max_unknowns });
    }

    // clear denominators: common denominator of f and all generators
    let mut denom = f.denominator().clone();
    for (_, _, g) in &generators {
        let g_den = g.denominator();
        let gcd = crate::symexpr::gcd::gcd(&denom, g_den);
        denom = denom.mul(&g_den.exact_div(&gcd).expect("gcd divides"));
    }
    let scaled = |e: &RatExpr<S>| -> Polynomial<S> {
        let extra = denom.exact_div(e.denominator()).expect("common denominator");
        e.numerator().mul(&extra)
    };
    let rhs_poly = scaled(f);
    let gen_polys: Vec<Polynomial<S>> = generators.iter().map(|(_, _, g)| scaled(g)).collect();

    // assemble the linear system column by column
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, S)>> = Vec::with_capacity(unknowns);
    for gp in &gen_polys {
        for m in &monomials {
            let prod = gp.mul(&Polynomial::monomial(m.clone(), S::one()));
            let mut col = Vec::with_capacity(prod.terms().len());
            for (mono, c) in prod.terms() {
                let next = row_of.len();
                let row = *row_of.entry(mono.clone()).or_insert(next);
                col.push((row, c.clone()));
            }
            columns.push(col);
        }
    }
    let mut rhs = vec![S::zero(); row_of.len().max(1)];
    for (mono, c) in rhs_poly.terms() {
        let next = row_of.len();
        let row = *row_of.entry(mono.clone()).or_insert(next);
        if row >= rhs.len() {
            rhs.resize(row + 1, S::zero());
        }
        rhs[row] = c.clone();
    }
    let rows = row_of.len().max(1);
    rhs.resize(rows, S::zero());
    let mut a = vec![vec![S::zero(); columns.len()]; rows];
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            a[*i][j] = c.clone();
        }
    }

    let Some(x) = linalg::solve(&a, &rhs) else {
        return Ok(None);
    };

    // reassemble certificate coefficients and re-verify exactly
    let mut coefficients = Vec::new();
    let mut check = RatExpr::zero(space.id());
    for (gi, (owner, alpha, g)) in generators.iter().enumerate() {
        let mut coeff_poly = Polynomial::zero();
        for (mj, m) in monomials.iter().enumerate() {
            let c = x[gi * monomials.len() + mj].clone();
            if !c.is_zero() {
                coeff_poly = coeff_poly.add(&Polynomial::monomial(m.clone(), c));
            }
        }
        if coeff_poly.is_zero() {
            continue;
        }
        let coeff = RatExpr::from_num_den(space.id(), coeff_poly, Polynomial::one())?;
        check = check.add(&coeff.mul(g));
        coefficients.push((*owner, alpha.clone(), coeff));
    }
    if !check.equals(f)? {
        return Err(Error::IdentityViolation(
            "on-shell certificate failed re-verification".into(),
        ));
    }
    Ok(Some(OnShellCertificate { coefficients }))
}

fn monomials_up_to(vars: &[Var], degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![Monomial::one()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for m in &frontier {
            // avoid duplicates: only extend by variables >= the largest
            // variable already present
            let min_var = m.factors().last().map(|&(v, _)| v);
            for &v in vars {
                if min_var.is_none_or(|mv| v >= mv) {
                    next.push(m.mul(&Monomial::var(v)));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out.dedup();
    out
}

//! Exact symbolic expressions in jet coordinates.
//!
//! An expression is a canonical fraction of two multivariate polynomials
//! over an exact scalar field: numerator and denominator coprime,
//! denominator monic under the global graded-lex order, zero represented
//! uniquely as `0/1`. Equality is therefore decidable by structural
//! comparison, and every operation renormalizes.
//!
//! Coefficients are exact rationals at the default instantiation;
//! declared symbolic constants enter as extra indeterminates with no
//! relations, so identities certified here are unconditional.

pub mod gcd;
pub mod parse;
pub mod poly;
pub(crate) mod print;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::jetspace::{JetSpace, MultiIndex};
use crate::scalar::Scalar;

pub use poly::{Monomial, Polynomial, Var};

/// Identity tag of a [`JetSpace`]; expressions from different spaces
/// never compare equal and refuse to combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceId(u64);

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

impl SpaceId {
    pub(crate) fn fresh() -> Self {
        SpaceId(NEXT_SPACE_ID.fetch_add(1, AtomicOrdering::Relaxed))
    }
}

/// What a coordinate stands for on the jet space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoordKind {
    /// Independent base variable `x^mu`.
    Base,
    /// Field jet `y^a_alpha` (`alpha` empty for the field itself).
    FieldJet,
    /// Gauge-parameter jet `eps^A_alpha`.
    ParamJet,
    /// Declared symbolic constant.
    Constant,
}

/// A single coordinate of the jet space, uniquely identified by
/// `(kind, owner, index)` and by its generated name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub(crate) space: SpaceId,
    pub(crate) var: Var,
    pub kind: CoordKind,
    /// Base/field/parameter/constant slot this coordinate belongs to.
    pub owner: usize,
    /// Derivative multi-index; all zero for base coords and constants.
    pub index: MultiIndex,
    pub name: String,
}

impl Coordinate {
    /// Position in the global variable order.
    pub fn var(&self) -> Var {
        self.var
    }

    /// Total derivative order `|alpha|`.
    pub fn order(&self) -> u32 {
        self.index.order()
    }
}

impl std::fmt::Display for Coordinate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name)
    }
}

/// Exact symbolic expression: a canonical rational normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatExpr<S: Scalar> {
    space: SpaceId,
    num: Polynomial<S>,
    den: Polynomial<S>,
}

impl<S: Scalar> RatExpr<S> {
    /// Normalizes `num/den`: reduce by the gcd, make the denominator
    /// monic, collapse zero to `0/1`.
    pub fn from_num_den(
        space: SpaceId,
        num: Polynomial<S>,
        den: Polynomial<S>,
    ) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatExpr { space, num, den: Polynomial::one() });
        }
        if den.is_one() {
            return Ok(RatExpr { space, num, den });
        }
        let (num, den) = if den.is_constant() {
            let c = den.leading().expect("nonzero").1.clone();
            (num.div_scalar(&c), Polynomial::one())
        } else {
            let g = gcd::gcd(&num, &den);
            let num = num.exact_div(&g).expect("gcd divides numerator");
            let den = den.exact_div(&g).expect("gcd divides denominator");
            let lc = den.leading().expect("nonzero").1.clone();
            (num.div_scalar(&lc), den.div_scalar(&lc))
        };
        Ok(RatExpr { space, num, den })
    }

    pub fn zero(space: SpaceId) -> Self {
        RatExpr { space, num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one(space: SpaceId) -> Self {
        RatExpr { space, num: Polynomial::one(), den: Polynomial::one() }
    }

    pub fn constant(space: SpaceId, c: S) -> Self {
        RatExpr { space, num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn int(space: SpaceId, v: i64) -> Self {
        Self::constant(space, S::from_int(v))
    }

    /// The expression consisting of the single coordinate `c`.
    pub fn coord(c: &Coordinate) -> Self {
        RatExpr {
            space: c.space,
            num: Polynomial::var(c.var),
            den: Polynomial::one(),
        }
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    pub fn numerator(&self) -> &Polynomial<S> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<S> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the expression is a polynomial (denominator one).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn assert_same_space(&self, other: &Self) {
        assert_eq!(
            self.space, other.space,
            "expressions from different jet spaces cannot be combined"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_space(other);
        if self.den.is_one() && other.den.is_one() {
            return RatExpr {
                space: self.space,
                num: self.num.add(&other.num),
                den: Polynomial::one(),
            };
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::from_num_den(self.space, num, den).expect("denominator nonzero")
    }

    pub fn neg(&self) -> Self {
        RatExpr { space: self.space, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_space(other);
        if self.den.is_one() && other.den.is_one() {
            return RatExpr {
                space: self.space,
                num: self.num.mul(&other.num),
                den: Polynomial::one(),
            };
        }
        Self::from_num_den(
            self.space,
            self.num.mul(&other.num),
            self.den.mul(&other.den),
        )
        .expect("denominator nonzero")
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        RatExpr { space: self.space, num: self.num.scale(c), den: self.den.clone() }
    }

    /// Division; fails when `other` is the zero expression.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.assert_same_space(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::from_num_den(
            self.space,
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        )
    }

    /// Integer power; negative exponents invert (zero base fails).
    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp == 0 {
            return Ok(Self::one(self.space));
        }
        let k = exp.unsigned_abs() as u32;
        if exp > 0 {
            // coprime k-th powers stay coprime and a monic denominator
            // stays monic, so no renormalization is needed
            Ok(RatExpr {
                space: self.space,
                num: self.num.pow(k),
                den: self.den.pow(k),
            })
        } else {
            if self.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Self::from_num_den(self.space, self.den.pow(k), self.num.pow(k))
        }
    }

    /// Decidable equality: `a - b` normalizes to the unique zero.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.sub(other).is_zero())
    }

    /// Formal partial derivative treating every coordinate as
    /// independent.
    pub fn partial(&self, c: &Coordinate) -> Result<Self> {
        if c.space != self.space {
            return Err(Error::UndeclaredCoordinate);
        }
        Ok(self.partial_var(c.var))
    }

    pub(crate) fn partial_var(&self, v: Var) -> Self {
        if self.den.is_one() {
            return RatExpr {
                space: self.space,
                num: self.num.derivative(v),
                den: Polynomial::one(),
            };
        }
        let num = self
            .num
            .derivative(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(v)));
        let den = self.den.mul(&self.den);
        Self::from_num_den(self.space, num, den).expect("denominator nonzero")
    }

    /// Simultaneous substitution followed by renormalization. Bindings
    /// for coordinates of another space are rejected; a substitution
    /// that drives a denominator to zero reports the pole.
    pub fn substitute(&self, bindings: &[(Coordinate, RatExpr<S>)]) -> Result<Self> {
        let mut map: BTreeMap<Var, &RatExpr<S>> = BTreeMap::new();
        for (c, e) in bindings {
            if c.space != self.space || e.space != self.space {
                return Err(Error::UndeclaredCoordinate);
            }
            map.insert(c.var, e);
        }
        let num = self.subst_poly(&self.num, &map)?;
        let den = self.subst_poly(&self.den, &map)?;
        num.div(&den)
    }

    fn subst_poly(
        &self,
        p: &Polynomial<S>,
        map: &BTreeMap<Var, &RatExpr<S>>,
    ) -> Result<Self> {
        let mut acc = Self::zero(self.space);
        for (m, c) in p.terms() {
            let mut t = Self::constant(self.space, c.clone());
            for &(v, e) in m.factors() {
                let factor = match map.get(&v) {
                    Some(rep) => (*rep).clone(),
                    None => RatExpr {
                        space: self.space,
                        num: Polynomial::var(v),
                        den: Polynomial::one(),
                    },
                };
                t = t.mul(&factor.pow(e as i64)?);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Exact evaluation at a point binding every variable (symbolic
    /// constants included). Fails on unbound variables and on poles.
    pub fn eval_numeric(
        &self,
        space: &JetSpace<S>,
        bindings: &[(Coordinate, S)],
    ) -> Result<S> {
        if space.id() != self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut map: BTreeMap<Var, S> = BTreeMap::new();
        for (c, v) in bindings {
            if c.space != self.space {
                return Err(Error::UndeclaredCoordinate);
            }
            map.insert(c.var, v.clone());
        }
        for v in self.vars() {
            if !map.contains_key(&v) {
                return Err(Error::UnboundVariable {
                    name: space.coord(v).name.clone(),
                });
            }
        }
        let den = self.den.eval_with(|v| map[&v].clone());
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.num.eval_with(|v| map[&v].clone());
        Ok(num / den)
    }

    /// All variables occurring in numerator or denominator.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Highest jet order among the coordinates of this expression.
    pub fn max_jet_order(&self, space: &JetSpace<S>) -> u32 {
        self.vars()
            .into_iter()
            .map(|v| space.coord(v).order())
            .max()
            .unwrap_or(0)
    }

    /// Approximate evaluation through `f64`, for the numeric layers.
    pub fn eval_f64<F: FnMut(Var) -> f64>(&self, mut value: F) -> f64 {
        let num = eval_poly_f64(&self.num, &mut value);
        let den = eval_poly_f64(&self.den, &mut value);
        num / den
    }
}

fn eval_poly_f64<S: Scalar, F: FnMut(Var) -> f64>(p: &Polynomial<S>, value: &mut F) -> f64 {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64().expect("scalar representable as f64");
        for &(v, e) in m.factors() {
            t *= value(v).powi(e as i32);
        }
        acc += t;
    }
    acc
}

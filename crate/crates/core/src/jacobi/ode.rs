//! Numeric Jacobi fields along one-dimensional bases.
//!
//! Integrates `J v = 0` as a first-order system with fixed-step RK4 and
//! reports conjugate points: zero crossings of the field (for a single
//! field with canonical data `v(0)=0, v'(0)=1`) or of the determinant of
//! the fundamental solution matrix (for systems), refined by bisection.

use num_traits::Float;

use super::LinearDiffOperator;
use crate::error::{Error, Result};
use crate::jetspace::{JetSpace, MultiIndex};
use crate::scalar::Scalar;
use crate::symexpr::{Coordinate, CoordKind, Polynomial, RatExpr, Var};

/// Values of the non-base coordinates appearing in the operator's
/// coefficients along the background, as a function of the base point.
pub type BackgroundSampler<'a, F> = &'a dyn Fn(&Coordinate, F) -> Option<F>;

/// Sampled Jacobi field with detected conjugate points.
#[derive(Debug, Clone)]
pub struct Trajectory<F> {
    /// Rows `(t, v, v')` at the integration nodes.
    pub samples: Vec<[F; 3]>,
    /// Zero crossings of `v` on `(0, t_max]`, bisection-refined.
    pub conjugate_points: Vec<F>,
}

const LEADING_TOLERANCE: f64 = 1e-12;
const RESIDUAL_TOLERANCE: f64 = 1e-9;
const BISECTION_SUBSTEPS: usize = 8;

fn eval_poly_float<S: Scalar, F: Float>(p: &Polynomial<S>, val: &impl Fn(Var) -> F) -> F {
    let mut acc = F::zero();
    for (m, c) in p.terms() {
        let mut t = F::from(c.to_f64().expect("coefficient fits in f64"))
            .expect("f64 converts to float type");
        for &(v, e) in m.factors() {
            t = t * val(v).powi(e as i32);
        }
        acc = acc + t;
    }
    acc
}

fn eval_at<S: Scalar, F: Float>(
    space: &JetSpace<S>,
    e: &RatExpr<S>,
    t: F,
    background: BackgroundSampler<'_, F>,
) -> Result<F> {
    let mut pairs: Vec<(Var, F)> = Vec::new();
    for var in e.vars() {
        let c = space.coord(var);
        let value = if c.kind == CoordKind::Base {
            t
        } else {
            background(c, t).ok_or_else(|| Error::UnboundVariable {
                name: c.name.clone(),
            })?
        };
        pairs.push((var, value));
    }
    let val = |v: Var| pairs.iter().find(|(w, _)| *w == v).map(|(_, x)| *x).unwrap();
    let den = eval_poly_float(e.denominator(), &val);
    let num = eval_poly_float(e.numerator(), &val);
    Ok(num / den)
}

struct ScalarCoeffs<'a, S: Scalar> {
    a2: RatExpr<S>,
    a1: RatExpr<S>,
    a0: RatExpr<S>,
    space: &'a JetSpace<S>,
}

impl<'a, S: Scalar> ScalarCoeffs<'a, S> {
    /// `v'' = -(a1 v' + a0 v) / a2` evaluated along the background.
    fn rhs<F: Float>(
        &self,
        t: F,
        v: F,
        w: F,
        background: BackgroundSampler<'_, F>,
    ) -> Result<(F, F)> {
        let a2 = eval_at(self.space, &self.a2, t, background)?;
        if a2.abs() < F::from(LEADING_TOLERANCE).unwrap() {
            return Err(Error::DegenerateLeadingCoefficient {
                t: a2_to_f64(t),
            });
        }
        let a1 = eval_at(self.space, &self.a1, t, background)?;
        let a0 = eval_at(self.space, &self.a0, t, background)?;
        Ok((w, -(a1 * w + a0 * v) / a2))
    }
}

fn a2_to_f64<F: Float>(t: F) -> f64 {
    t.to_f64().unwrap_or(f64::NAN)
}

fn rk4_step<S: Scalar, F: Float>(
    coeffs: &ScalarCoeffs<'_, S>,
    t: F,
    v: F,
    w: F,
    h: F,
    background: BackgroundSampler<'_, F>,
) -> Result<(F, F)> {
    let two = F::from(2.0).unwrap();
    let six = F::from(6.0).unwrap();
    let half = h / two;
    let (k1v, k1w) = coeffs.rhs(t, v, w, background)?;
    let (k2v, k2w) = coeffs.rhs(t + half, v + half * k1v, w + half * k1w, background)?;
    let (k3v, k3w) = coeffs.rhs(t + half, v + half * k2v, w + half * k2w, background)?;
    let (k4v, k4w) = coeffs.rhs(t + h, v + h * k3v, w + h * k3w, background)?;
    Ok((
        v + h / six * (k1v + two * k2v + two * k3v + k4v),
        w + h / six * (k1w + two * k2w + two * k3w + k4w),
    ))
}

/// Integrates the scalar Jacobi equation `J v = 0` from `(v0, dv0)` up
/// to `t_max` with fixed step `h`, reporting sign-change zeros of `v`
/// refined by bisection.
pub fn jacobi_fields_ode<S: Scalar, F: Float>(
    space: &JetSpace<S>,
    op: &LinearDiffOperator<S>,
    background: BackgroundSampler<'_, F>,
    v0: F,
    dv0: F,
    t_max: F,
    h: F,
) -> Result<Trajectory<F>> {
    if space.base_dim() != 1 {
        return Err(Error::UnsupportedOperator(
            "Jacobi field integration needs a one-dimensional base".into(),
        ));
    }
    if op.rows() != 1 || op.cols() != 1 {
        return Err(Error::UnsupportedOperator(
            "use the fundamental-matrix variant for multi-field operators".into(),
        ));
    }
    if op.order() != 2 {
        return Err(Error::UnsupportedOperator(format!(
            "expected a second-order operator, got order {}",
            op.order()
        )));
    }
    if !(h > F::zero()) || !(t_max > F::zero()) || h > t_max {
        return Err(Error::InvalidIntegration(
            "need 0 < step <= horizon".into(),
        ));
    }

    let coeffs = ScalarCoeffs {
        a2: op.coefficient(0, 0, &MultiIndex::from_exponents(vec![2])),
        a1: op.coefficient(0, 0, &MultiIndex::from_exponents(vec![1])),
        a0: op.coefficient(0, 0, &MultiIndex::zero(1)),
        space,
    };

    let mut samples: Vec<[F; 3]> = vec![[F::zero(), v0, dv0]];
    let mut conjugate_points = Vec::new();
    let (mut t, mut v, mut w) = (F::zero(), v0, dv0);
    let tiny = h * F::from(1e-9).unwrap();
    while t < t_max - tiny {
        let step = h.min(t_max - t);
        let (nv, nw) = rk4_step(&coeffs, t, v, w, step, background)?;
        let nt = t + step;
        if nv == F::zero() {
            conjugate_points.push(nt);
        } else if v != F::zero() && (v < F::zero()) != (nv < F::zero()) {
            let root = bisect(&coeffs, t, v, w, nt, background)?;
            conjugate_points.push(root);
        }
        t = nt;
        v = nv;
        w = nw;
        samples.push([t, v, w]);
    }
    Ok(Trajectory { samples, conjugate_points })
}

/// Shoots from the state at `t_a` to `target` with a few RK4 substeps.
fn shoot<S: Scalar, F: Float>(
    coeffs: &ScalarCoeffs<'_, S>,
    t_a: F,
    v_a: F,
    w_a: F,
    target: F,
    background: BackgroundSampler<'_, F>,
) -> Result<F> {
    let steps = F::from(BISECTION_SUBSTEPS as f64).unwrap();
    let h = (target - t_a) / steps;
    let (mut t, mut v, mut w) = (t_a, v_a, w_a);
    for _ in 0..BISECTION_SUBSTEPS {
        let (nv, nw) = rk4_step(coeffs, t, v, w, h, background)?;
        t = t + h;
        v = nv;
        w = nw;
    }
    Ok(v)
}

fn bisect<S: Scalar, F: Float>(
    coeffs: &ScalarCoeffs<'_, S>,
    t_a: F,
    v_a: F,
    w_a: F,
    t_b: F,
    background: BackgroundSampler<'_, F>,
) -> Result<F> {
    let residual = F::from(RESIDUAL_TOLERANCE).unwrap();
    let (mut lo, mut hi) = (t_a, t_b);
    let mut f_lo = v_a;
    let two = F::from(2.0).unwrap();
    let mut mid = (lo + hi) / two;
    for _ in 0..200 {
        mid = (lo + hi) / two;
        let f_mid = shoot(coeffs, t_a, v_a, w_a, mid, background)?;
        if f_mid.abs() <= residual {
            return Ok(mid);
        }
        if (f_mid < F::zero()) == (f_lo < F::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= F::epsilon() * mid.abs().max(F::one()) {
            break;
        }
    }
    Ok(mid)
}

/// Conjugate points of a multi-field operator along a one-dimensional
/// base: zeros of `det V(t)` for the fundamental matrix solution with
/// `V(0) = 0`, `V'(0) = I`.
pub fn conjugate_points_fundamental<S: Scalar, F: Float>(
    space: &JetSpace<S>,
    op: &LinearDiffOperator<S>,
    background: BackgroundSampler<'_, F>,
    t_max: F,
    h: F,
) -> Result<Vec<F>> {
    if space.base_dim() != 1 {
        return Err(Error::UnsupportedOperator(
            "Jacobi field integration needs a one-dimensional base".into(),
        ));
    }
    let m = op.rows();
    if op.cols() != m {
        return Err(Error::UnsupportedOperator("operator must be square".into()));
    }
    if op.order() != 2 {
        return Err(Error::UnsupportedOperator(format!(
            "expected a second-order operator, got order {}",
            op.order()
        )));
    }
    if !(h > F::zero()) || !(t_max > F::zero()) || h > t_max {
        return Err(Error::InvalidIntegration("need 0 < step <= horizon".into()));
    }

    let idx2 = MultiIndex::from_exponents(vec![2]);
    let idx1 = MultiIndex::from_exponents(vec![1]);
    let idx0 = MultiIndex::zero(1);
    let coeff_at = |alpha: &MultiIndex, t: F| -> Result<Vec<Vec<F>>> {
        let mut rows = Vec::with_capacity(m);
        for a in 0..m {
            let mut row = Vec::with_capacity(m);
            for b in 0..m {
                row.push(eval_at(space, &op.coefficient(a, b, alpha), t, background)?);
            }
            rows.push(row);
        }
        Ok(rows)
    };
    // V'' = -A2^{-1} (A1 V' + A0 V), columns independent
    let rhs = |t: F, v: &Vec<Vec<F>>, w: &Vec<Vec<F>>| -> Result<(Vec<Vec<F>>, Vec<Vec<F>>)> {
        let a2 = coeff_at(&idx2, t)?;
        let a1 = coeff_at(&idx1, t)?;
        let a0 = coeff_at(&idx0, t)?;
        let mut force = vec![vec![F::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut s = F::zero();
                for k in 0..m {
                    s = s + a1[i][k] * w[k][j] + a0[i][k] * v[k][j];
                }
                force[i][j] = -s;
            }
        }
        let acc = float_solve(&a2, &force).ok_or(Error::DegenerateLeadingCoefficient {
            t: a2_to_f64(t),
        })?;
        Ok((w.clone(), acc))
    };

    let mut v = vec![vec![F::zero(); m]; m];
    let mut w = vec![vec![F::zero(); m]; m];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = F::one();
    }
    let mut t = F::zero();
    let mut det_prev = F::zero();
    let mut started = false;
    let mut points = Vec::new();
    let tiny = h * F::from(1e-9).unwrap();
    let two = F::from(2.0).unwrap();
    let six = F::from(6.0).unwrap();
    while t < t_max - tiny {
        let step = h.min(t_max - t);
        let half = step / two;
        let (k1v, k1w) = rhs(t, &v, &w)?;
        let (k2v, k2w) = rhs(
            t + half,
            &mat_axpy(&v, &k1v, half),
            &mat_axpy(&w, &k1w, half),
        )?;
        let (k3v, k3w) = rhs(
            t + half,
            &mat_axpy(&v, &k2v, half),
            &mat_axpy(&w, &k2w, half),
        )?;
        let (k4v, k4w) = rhs(
            t + step,
            &mat_axpy(&v, &k3v, step),
            &mat_axpy(&w, &k3w, step),
        )?;
        for i in 0..m {
            for j in 0..m {
                v[i][j] = v[i][j]
                    + step / six * (k1v[i][j] + two * k2v[i][j] + two * k3v[i][j] + k4v[i][j]);
                w[i][j] = w[i][j]
                    + step / six * (k1w[i][j] + two * k2w[i][j] + two * k3w[i][j] + k4w[i][j]);
            }
        }
        t = t + step;
        let det = float_det(&v);
        if started {
            if det == F::zero() || (det_prev < F::zero()) != (det < F::zero()) {
                // no refined bisection for the determinant path: report
                // the midpoint of the bracketing step
                points.push(t - h / two);
            }
        }
        det_prev = det;
        started = true;
    }
    Ok(points)
}

fn mat_axpy<F: Float>(a: &[Vec<F>], b: &[Vec<F>], s: F) -> Vec<Vec<F>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| x + s * y).collect())
        .collect()
}

fn float_det<F: Float>(a: &[Vec<F>]) -> F {
    let m = a.len();
    let mut lu: Vec<Vec<F>> = a.to_vec();
    let mut det = F::one();
    for c in 0..m {
        let Some(p) = (c..m).max_by(|&i, &j| {
            lu[i][c]
                .abs()
                .partial_cmp(&lu[j][c].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        }) else {
            return F::zero();
        };
        if lu[p][c] == F::zero() {
            return F::zero();
        }
        if p != c {
            lu.swap(p, c);
            det = -det;
        }
        det = det * lu[c][c];
        for i in (c + 1)..m {
            let f = lu[i][c] / lu[c][c];
            for j in c..m {
                let delta = f * lu[c][j];
                lu[i][j] = lu[i][j] - delta;
            }
        }
    }
    det
}

/// Solves `A X = B` for square float `A`; `None` when singular.
fn float_solve<F: Float>(a: &[Vec<F>], b: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let m = a.len();
    let cols = b[0].len();
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).copied().collect())
        .collect();
    for c in 0..m {
        let p = (c..m).max_by(|&i, &j| {
            aug[i][c]
                .abs()
                .partial_cmp(&aug[j][c].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if aug[p][c].abs() < F::from(LEADING_TOLERANCE).unwrap() {
            return None;
        }
        aug.swap(p, c);
        let piv = aug[c][c];
        for j in 0..(m + cols) {
            aug[c][j] = aug[c][j] / piv;
        }
        for i in 0..m {
            if i != c && aug[i][c] != F::zero() {
                let f = aug[i][c];
                for j in 0..(m + cols) {
                    let delta = f * aug[c][j];
                    aug[i][j] = aug[i][j] - delta;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[m..].to_vec()).collect())
}

//! Numeric Gateaux-derivative oracle for Euler-Lagrange expressions.
//!
//! For random polynomial background sections `y` and compactly
//! supported polynomial variations `phi`, the derivative of the
//! trapezoid-discretized action `S[y + tau phi]` at `tau = 0` must
//! match the discretized pairing `integral sum_a E_a phi^a`. The
//! tau-derivative is taken with a central stencil that is exact for
//! polynomials, so the only mismatch left is the quadrature itself.
//!
//! Everything here differentiates plain polynomial sections directly;
//! none of the engine's total-derivative or Euler machinery is used on
//! this side of the comparison.

use std::collections::HashMap;

use super::CorpusEntry;
use jetvar_core::symexpr::Var;
use jetvar_core::variational::euler_lagrange;
use jetvar_core::{CoordKind, Expr, JetSpace, MultiIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Exact derivative-at-zero stencil on tau in {-3..3}, valid for
/// polynomials of degree <= 6.
const STENCIL: [(f64, f64); 6] = [
    (-3.0, -1.0 / 60.0),
    (-2.0, 3.0 / 20.0),
    (-1.0, -3.0 / 4.0),
    (1.0, 3.0 / 4.0),
    (2.0, -3.0 / 20.0),
    (3.0, 1.0 / 60.0),
];

/// Univariate polynomial, ascending coefficients.
#[derive(Clone)]
struct UniPoly(Vec<f64>);

impl UniPoly {
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn derivative(&self) -> UniPoly {
        UniPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    fn mul(&self, other: &UniPoly) -> UniPoly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly(out)
    }
}

/// Dense small multivariate polynomial with float coefficients.
#[derive(Clone)]
struct SectionPoly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl SectionPoly {
    fn random(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> SectionPoly {
        let mut terms = Vec::new();
        for alpha in MultiIndex::all_up_to(n, degree) {
            terms.push((alpha.exponents().to_vec(), rng.gen_range(-0.5..0.5)));
        }
        SectionPoly { terms }
    }

    fn derivative(&self, mu: usize) -> SectionPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[mu] > 0)
            .map(|(e, c)| {
                let mut e = e.clone();
                let k = e[mu] as f64;
                e[mu] -= 1;
                (e, c * k)
            })
            .collect();
        SectionPoly { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(&k, &xi)| xi.powi(k as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

/// How to fill one evaluation slot of a compiled expression.
enum Fill {
    Base(usize),
    Jet { field: usize, rank: usize },
    Const(f64),
}

/// An expression lowered to float terms over slot indices.
struct Compiled {
    num: Vec<(f64, Vec<(usize, u32)>)>,
    den: Vec<(f64, Vec<(usize, u32)>)>,
    fills: Vec<Fill>,
}

fn lower(terms: &[(jetvar_core::symexpr::Monomial, jetvar_core::Rat)], slot: &HashMap<Var, usize>) -> Vec<(f64, Vec<(usize, u32)>)> {
    use num_traits::ToPrimitive;
    terms
        .iter()
        .map(|(m, c)| {
            (
                c.to_f64().unwrap(),
                m.factors().iter().map(|&(v, e)| (slot[&v], e)).collect(),
            )
        })
        .collect()
}

fn compile(
    expr: &Expr,
    space: &JetSpace,
    rank_of: &HashMap<MultiIndex, usize>,
    constants: &[(String, f64)],
) -> Compiled {
    let vars = expr.vars();
    let slot: HashMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let fills = vars
        .iter()
        .map(|&v| {
            let c = space.coord(v);
            match c.kind {
                CoordKind::Base => Fill::Base(c.owner),
                CoordKind::FieldJet => Fill::Jet {
                    field: c.owner,
                    rank: rank_of[&c.index],
                },
                CoordKind::Constant => {
                    let value = constants
                        .iter()
                        .find(|(n, _)| *n == c.name)
                        .map(|(_, v)| *v)
                        .unwrap_or_else(|| panic!("no value for constant {}", c.name));
                    Fill::Const(value)
                }
                CoordKind::ParamJet => panic!("parameter jet in an oracle expression"),
            }
        })
        .collect();
    Compiled {
        num: lower(expr.numerator().terms(), &slot),
        den: lower(expr.denominator().terms(), &slot),
        fills,
    }
}

fn eval_terms(terms: &[(f64, Vec<(usize, u32)>)], slots: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(c, fs)| {
            c * fs
                .iter()
                .map(|&(s, e)| slots[s].powi(e as i32))
                .product::<f64>()
        })
        .sum()
}

impl Compiled {
    /// `jet(field, rank)` supplies field-jet slot values.
    fn eval(&self, x: &[f64], jet: impl Fn(usize, usize) -> f64) -> f64 {
        let slots: Vec<f64> = self
            .fills
            .iter()
            .map(|f| match f {
                Fill::Base(mu) => x[*mu],
                Fill::Jet { field, rank } => jet(*field, *rank),
                Fill::Const(v) => *v,
            })
            .collect();
        eval_terms(&self.num, &slots) / eval_terms(&self.den, &slots)
    }
}

fn binom(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Largest relative mismatch between the numeric Gateaux derivative of
/// the discretized action and the discretized `E . phi` pairing, over
/// the given number of random (section, variation) pairs.
pub fn gateaux_max_rel_error(entry: &CorpusEntry, seed: u64, trials: usize) -> f64 {
    let space = &entry.space;
    let n = space.base_dim();
    let m = space.field_count();
    let s = entry.lagrangian.order();
    let spacing = 1e-3;
    let edge_nodes: usize = match n {
        1 => 1000,
        2 => 50,
        _ => 20,
    };
    let edge = edge_nodes as f64 * spacing;

    let el = euler_lagrange(space, &entry.lagrangian).expect("corpus EL");

    // multi-index ranks up to 2s (background jets feed E directly)
    let ranks: Vec<MultiIndex> = MultiIndex::all_up_to(n, 2 * s);
    let rank_of: HashMap<MultiIndex, usize> =
        ranks.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    let s_rank_count = ranks.iter().filter(|a| a.order() <= s).count();

    let density = compile(entry.lagrangian.density(), space, &rank_of, &entry.constant_values);
    let el_compiled: Vec<Compiled> = el
        .components()
        .iter()
        .map(|e| compile(e, space, &rank_of, &entry.constant_values))
        .collect();

    // bump with zeros of order 2s+2 at both edges of every axis keeps
    // every Euler-Maclaurin boundary term of the mismatch at zero
    let k_bump = 2 * s + 2;
    let axis_bump = {
        let linear = UniPoly(vec![0.0, 4.0 * edge / (edge * edge), -4.0 / (edge * edge)]);
        let mut b = UniPoly(vec![1.0]);
        for _ in 0..k_bump {
            b = b.mul(&linear);
        }
        b
    };
    let mut axis_derivs: Vec<UniPoly> = vec![axis_bump];
    for _ in 0..s {
        axis_derivs.push(axis_derivs.last().unwrap().derivative());
    }

    let mut rng = super::seeded(seed);
    let mut worst: f64 = 0.0;

    for _ in 0..trials {
        // background sections and variation factors
        let sections: Vec<SectionPoly> =
            (0..m).map(|_| SectionPoly::random(n, 3, &mut rng)).collect();
        let q: Vec<SectionPoly> =
            (0..m).map(|_| SectionPoly::random(n, 2, &mut rng)).collect();

        // derivative tables
        let y_derivs: Vec<Vec<SectionPoly>> = sections
            .iter()
            .map(|sec| {
                ranks
                    .iter()
                    .map(|alpha| {
                        let mut p = sec.clone();
                        for mu in alpha.directions() {
                            p = p.derivative(mu);
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        let q_derivs: Vec<Vec<SectionPoly>> = q
            .iter()
            .map(|qa| {
                ranks[..s_rank_count]
                    .iter()
                    .map(|alpha| {
                        let mut p = qa.clone();
                        for mu in alpha.directions() {
                            p = p.derivative(mu);
                        }
                        p
                    })
                    .collect()
            })
            .collect();

        let mut action = [0.0f64; 6]; // stencil nodes, tau = 0 not needed
        let mut pairing = 0.0f64;
        let mut magnitude = 0.0f64;

        let nodes_per_axis = edge_nodes + 1;
        let total: usize = nodes_per_axis.pow(n as u32);
        let mut x = vec![0.0f64; n];
        let mut idx = vec![0usize; n];
        for flat in 0..total {
            let mut rem = flat;
            let mut weight = spacing.powi(n as i32);
            for mu in 0..n {
                idx[mu] = rem % nodes_per_axis;
                rem /= nodes_per_axis;
                x[mu] = idx[mu] as f64 * spacing;
                if idx[mu] == 0 || idx[mu] == nodes_per_axis - 1 {
                    weight *= 0.5;
                }
            }

            // per-node caches
            let bvals: Vec<Vec<f64>> = (0..n)
                .map(|mu| axis_derivs.iter().map(|b| b.eval(x[mu])).collect())
                .collect();
            let yvals: Vec<Vec<f64>> = y_derivs
                .iter()
                .map(|tab| tab.iter().map(|p| p.eval(&x)).collect())
                .collect();
            let qvals: Vec<Vec<f64>> = q_derivs
                .iter()
                .map(|tab| tab.iter().map(|p| p.eval(&x)).collect())
                .collect();
            // jets of phi^a = bump * q^a by the Leibniz rule
            let phivals: Vec<Vec<f64>> = (0..m)
                .map(|a| {
                    ranks[..s_rank_count]
                        .iter()
                        .map(|alpha| {
                            let mut acc = 0.0;
                            for beta in alpha.submultis() {
                                let gamma = alpha.sub(&beta).unwrap();
                                let mut term = qvals[a][rank_of[&gamma]];
                                for mu in 0..n {
                                    let b = beta.exponents()[mu];
                                    term *= binom(alpha.exponents()[mu], b)
                                        * bvals[mu][b as usize];
                                }
                                acc += term;
                            }
                            acc
                        })
                        .collect()
                })
                .collect();

            for (i, (tau, _)) in STENCIL.iter().enumerate() {
                let l = density.eval(&x, |a, r| yvals[a][r] + tau * phivals[a][r]);
                action[i] += weight * l;
            }

            for a in 0..m {
                let e = el_compiled[a].eval(&x, |b, r| yvals[b][r]);
                pairing += weight * e * phivals[a][0];
                magnitude += weight * e.abs() * phivals[a][0].abs();
            }
        }

        let gateaux: f64 = STENCIL
            .iter()
            .enumerate()
            .map(|(i, (_, c))| c * action[i])
            .sum();
        let scale = pairing.abs().max(gateaux.abs()).max(1e-3 * magnitude);
        let rel = if scale < 1e-12 {
            0.0
        } else {
            (gateaux - pairing).abs() / scale
        };
        worst = worst.max(rel);
    }
    worst
}

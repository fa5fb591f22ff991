//! Reductive split certification on finite-dimensional Lie algebras.
//!
//! Given exact structure constants and a linear operator, the module
//! checks the operator hypotheses (symmetric, projector, derivation),
//! produces exact kernel and image bases, certifies the direct sum
//! `k (+) im` with inner-product orthogonality, and verifies the
//! reductivity conditions `[k, k] <= k` and `[k, m] <= m`. Whether the
//! stronger equality `[k, m] = m` also holds is reported separately and
//! does not enter the pass/fail verdict.
//!
//! All arithmetic is exact; no numeric rank decisions are made.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

/// Choice of inner product for the symmetry test.
#[derive(Debug, Clone)]
pub enum InnerProduct<S: Scalar> {
    /// Identity matrix in the declared basis (default).
    Identity,
    /// Killing form `K(x,y) = tr(ad x ad y)`; rejected when degenerate.
    Killing,
    /// Custom symmetric positive-definite matrix.
    Custom(Matrix<S>),
}

/// A Lie algebra given by structure constants `c^i_{jk}` with
/// `[e_j, e_k] = c^i_{jk} e_i`, plus an inner product.
#[derive(Debug, Clone)]
pub struct LieAlgebra<S: Scalar> {
    dim: usize,
    /// `c[i][j][k] = c^i_{jk}`.
    c: Vec<Vec<Vec<S>>>,
    g: Matrix<S>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds the algebra from sparse triples `(i, j, k, value)` with
    /// `c^i_{jk} = value` for `j < k`; the antisymmetric completion is
    /// filled in automatically. Antisymmetry conflicts and Jacobi
    /// identity failures are construction errors.
    pub fn new(
        dim: usize,
        triples: &[(usize, usize, usize, S)],
        inner: InnerProduct<S>,
    ) -> Result<Self> {
        let mut c = vec![vec![vec![S::zero(); dim]; dim]; dim];
        for (i, j, k, v) in triples {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: i.max(j).max(k) + 1,
                });
            }
            if j == k {
                if !v.is_zero() {
                    return Err(Error::NotAntisymmetric { i, j, k });
                }
                continue;
            }
            if !c[i][j][k].is_zero() && c[i][j][k] != *v {
                return Err(Error::NotAntisymmetric { i, j, k });
            }
            if !c[i][k][j].is_zero() && c[i][k][j] != -v.clone() {
                return Err(Error::NotAntisymmetric { i, j, k });
            }
            c[i][j][k] = v.clone();
            c[i][k][j] = -v.clone();
        }
        let algebra = LieAlgebra { dim, c, g: Vec::new() };
        algebra.check_jacobi()?;

        let g = match inner {
            InnerProduct::Identity => {
                let mut g = vec![vec![S::zero(); dim]; dim];
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = S::one();
                }
                g
            }
            InnerProduct::Killing => {
                let k = algebra.killing_form();
                if linalg::rank(k.clone()) < dim {
                    return Err(Error::BadInnerProduct(
                        "nondegenerate: the Killing form of this algebra is singular".into(),
                    ));
                }
                k
            }
            InnerProduct::Custom(g) => {
                if g.len() != dim || g.iter().any(|r| r.len() != dim) {
                    return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
                }
                for i in 0..dim {
                    for j in 0..dim {
                        if g[i][j] != g[j][i] {
                            return Err(Error::BadInnerProduct("symmetric".into()));
                        }
                    }
                }
                if !linalg::is_positive_definite(&g) {
                    return Err(Error::BadInnerProduct("positive definite".into()));
                }
                g
            }
        };
        Ok(LieAlgebra { g, ..algebra })
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim;
        for j in 0..d {
            for k in (j + 1)..d {
                for l in (k + 1)..d {
                    for i in 0..d {
                        let mut s = S::zero();
                        for m in 0..d {
                            s = s + self.c[i][j][m].clone() * self.c[m][k][l].clone()
                                + self.c[i][k][m].clone() * self.c[m][l][j].clone()
                                + self.c[i][l][m].clone() * self.c[m][j][k].clone();
                        }
                        if !s.is_zero() {
                            return Err(Error::JacobiIdentityFails { i: j, j: k, k: l });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn killing_form(&self) -> Matrix<S> {
        let d = self.dim;
        let mut k = vec![vec![S::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s = S::zero();
                for a in 0..d {
                    for b in 0..d {
                        s = s + self.c[a][i][b].clone() * self.c[b][j][a].clone();
                    }
                }
                k[i][j] = s;
            }
        }
        k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inner_product(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &S {
        &self.c[i][j][k]
    }

    /// `[u, v]^i = c^i_{jk} u^j v^k`.
    pub fn bracket(&self, u: &[S], v: &[S]) -> Result<Vec<S>> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.len().max(v.len()),
            });
        }
        let mut out = vec![S::zero(); self.dim];
        for i in 0..self.dim {
            let mut s = S::zero();
            for j in 0..self.dim {
                if u[j].is_zero() {
                    continue;
                }
                for k in 0..self.dim {
                    if self.c[i][j][k].is_zero() || v[k].is_zero() {
                        continue;
                    }
                    s = s + self.c[i][j][k].clone() * u[j].clone() * v[k].clone();
                }
            }
            out[i] = s;
        }
        Ok(out)
    }

    fn basis_vector(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }
}

/// A linear operator on the algebra, as a matrix in the declared basis.
#[derive(Debug, Clone)]
pub struct AlgebraOperator<S: Scalar> {
    mat: Matrix<S>,
}

impl<S: Scalar> AlgebraOperator<S> {
    pub fn new(mat: Matrix<S>) -> Result<Self> {
        let d = mat.len();
        if mat.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: mat.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        Ok(AlgebraOperator { mat })
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraOperator { mat: vec![vec![S::zero(); dim]; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut mat = vec![vec![S::zero(); dim]; dim];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = S::one();
        }
        AlgebraOperator { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.len()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.mat
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        linalg::mat_vec(&self.mat, v)
    }
}

/// Status of the Theorem hypotheses for an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    /// `g J = J^T g`.
    pub symmetric: bool,
    /// `J^2 = J`.
    pub projector: bool,
    /// `J[u,v] = [Ju,v] + [u,Jv]` on every basis pair.
    pub derivation: bool,
    /// First basis pair violating the derivation property, if any.
    pub derivation_witness: Option<(usize, usize)>,
}

impl HypothesisReport {
    pub fn all(&self) -> bool {
        self.symmetric && self.projector && self.derivation
    }
}

pub fn hypothesis_report<S: Scalar>(
    algebra: &LieAlgebra<S>,
    op: &AlgebraOperator<S>,
) -> Result<HypothesisReport> {
    let d = algebra.dim();
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: op.dim() });
    }
    let g = algebra.inner_product();
    let gj = linalg::mat_mul(g, op.matrix());
    let jtg = linalg::mat_mul(&linalg::transpose(op.matrix()), g);
    let symmetric = gj == jtg;

    let jj = linalg::mat_mul(op.matrix(), op.matrix());
    let projector = jj == *op.matrix();

    let mut derivation = true;
    let mut derivation_witness = None;
    'outer: for i in 0..d {
        for j in (i + 1)..d {
            let ei = algebra.basis_vector(i);
            let ej = algebra.basis_vector(j);
            let lhs = op.apply(&algebra.bracket(&ei, &ej)?);
            let a = algebra.bracket(&op.apply(&ei), &ej)?;
            let b = algebra.bracket(&ei, &op.apply(&ej))?;
            let rhs: Vec<S> = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
            if lhs != rhs {
                derivation = false;
                derivation_witness = Some((i, j));
                break 'outer;
            }
        }
    }
    Ok(HypothesisReport { symmetric, projector, derivation, derivation_witness })
}

/// Kernel/image split of a symmetric operator, with certificates.
#[derive(Debug, Clone)]
pub struct Split<S: Scalar> {
    pub kernel: Vec<Vec<S>>,
    pub image: Vec<Vec<S>>,
    /// `dim k + dim im = d` with trivial intersection.
    pub direct_sum: bool,
    /// Kernel and image orthogonal under the declared inner product.
    pub orthogonal: bool,
}

/// Exact kernel and column-space bases of a symmetric operator; errors
/// when the operator is not symmetric for the algebra's inner product
/// (the split relies on self-adjointness).
pub fn split<S: Scalar>(
    algebra: &LieAlgebra<S>,
    op: &AlgebraOperator<S>,
) -> Result<Split<S>> {
    let d = algebra.dim();
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: op.dim() });
    }
    let g = algebra.inner_product();
    let gj = linalg::mat_mul(g, op.matrix());
    if gj != linalg::mat_mul(&linalg::transpose(op.matrix()), g) {
        return Err(Error::NonSymmetricOperator);
    }

    let kernel = linalg::nullspace(op.matrix().clone(), d);
    let mut reduced = op.matrix().clone();
    let pivots = linalg::rref(&mut reduced);
    let image: Vec<Vec<S>> = pivots
        .iter()
        .map(|&c| (0..d).map(|r| op.matrix()[r][c].clone()).collect())
        .collect();

    let mut stacked: Matrix<S> = Vec::new();
    for v in kernel.iter().chain(&image) {
        stacked.push(v.clone());
    }
    let direct_sum =
        kernel.len() + image.len() == d && linalg::rank(stacked) == d;

    let mut orthogonal = true;
    for k in &kernel {
        let gk = linalg::mat_vec(g, k);
        for m in &image {
            let ip = gk
                .iter()
                .zip(m)
                .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
            if !ip.is_zero() {
                orthogonal = false;
            }
        }
    }
    Ok(Split { kernel, image, direct_sum, orthogonal })
}

/// A basis pair whose bracket escapes the expected subspace.
#[derive(Debug, Clone)]
pub struct ReductiveFailure<S: Scalar> {
    /// Indices into the kernel basis (left) and kernel-or-image basis.
    pub left: usize,
    pub right: usize,
    /// True when the failing pair is a kernel/kernel bracket.
    pub kernel_pair: bool,
    pub bracket: Vec<S>,
}

/// Outcome of the reductivity verification.
#[derive(Debug, Clone)]
pub struct ReductiveReport<S: Scalar> {
    /// `[k, k] <= k`.
    pub subalgebra: bool,
    /// `[k, m] <= m` (the reductivity condition of the verdict).
    pub invariant: bool,
    /// Whether the stronger `[k, m] = m` also holds; reported only.
    pub equality: bool,
    pub failures: Vec<ReductiveFailure<S>>,
}

impl<S: Scalar> ReductiveReport<S> {
    pub fn passes(&self) -> bool {
        self.subalgebra && self.invariant
    }
}

/// Verifies that `kernel` is a subalgebra and `image` is
/// `kernel`-invariant; reports each failing basis pair with the
/// offending bracket.
pub fn reductive_check<S: Scalar>(
    algebra: &LieAlgebra<S>,
    kernel: &[Vec<S>],
    image: &[Vec<S>],
) -> Result<ReductiveReport<S>> {
    let d = algebra.dim();
    let mut stacked: Matrix<S> = Vec::new();
    for v in kernel.iter().chain(image) {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        stacked.push(v.clone());
    }
    if linalg::rank(stacked) != d {
        return Err(Error::SpanningFailure);
    }

    let mut failures = Vec::new();
    let mut subalgebra = true;
    for i in 0..kernel.len() {
        for j in (i + 1)..kernel.len() {
            let br = algebra.bracket(&kernel[i], &kernel[j])?;
            if !linalg::in_span(kernel, &br) {
                subalgebra = false;
                failures.push(ReductiveFailure {
                    left: i,
                    right: j,
                    kernel_pair: true,
                    bracket: br,
                });
            }
        }
    }

    let mut invariant = true;
    let mut mixed_brackets = Vec::new();
    for (i, k) in kernel.iter().enumerate() {
        for (j, m) in image.iter().enumerate() {
            let br = algebra.bracket(k, m)?;
            if !linalg::in_span(image, &br) {
                invariant = false;
                failures.push(ReductiveFailure {
                    left: i,
                    right: j,
                    kernel_pair: false,
                    bracket: br.clone(),
                });
            }
            mixed_brackets.push(br);
        }
    }

    let equality = invariant && linalg::rank(mixed_brackets) == image.len();
    Ok(ReductiveReport { subalgebra, invariant, equality, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Rat = BigRational;

    fn q(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    /// Euclidean algebra e(2): basis r, p1, p2 with [r,p1]=p2, [r,p2]=-p1.
    pub fn e2() -> LieAlgebra<Rat> {
        LieAlgebra::new(
            3,
            &[(2, 0, 1, q(1)), (1, 0, 2, q(-1))],
            InnerProduct::Identity,
        )
        .unwrap()
    }

    /// so(3): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2.
    fn so3() -> LieAlgebra<Rat> {
        LieAlgebra::new(
            3,
            &[(2, 0, 1, q(1)), (0, 1, 2, q(1)), (1, 2, 0, q(1))],
            InnerProduct::Identity,
        )
        .unwrap()
    }

    /// sl(2) in basis (h, e, f): [h,e]=2e, [h,f]=-2f, [e,f]=h.
    fn sl2() -> LieAlgebra<Rat> {
        LieAlgebra::new(
            3,
            &[(1, 0, 1, q(2)), (2, 0, 2, q(-2)), (0, 1, 2, q(1))],
            InnerProduct::Identity,
        )
        .unwrap()
    }

    fn diag(entries: &[i64]) -> AlgebraOperator<Rat> {
        let d = entries.len();
        let mut m = vec![vec![q(0); d]; d];
        for (i, &e) in entries.iter().enumerate() {
            m[i][i] = q(e);
        }
        AlgebraOperator::new(m).unwrap()
    }

    #[test]
    fn so3_bracket_and_jacobi() {
        let a = so3();
        let e1 = vec![q(1), q(0), q(0)];
        let e2 = vec![q(0), q(1), q(0)];
        assert_eq!(a.bracket(&e1, &e2).unwrap(), vec![q(0), q(0), q(1)]);
        // [u, u] = 0
        let u = vec![q(3), q(-2), q(5)];
        assert!(a.bracket(&u, &u).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // [e1,e2]=e3, [e1,e3]=e1 fails the Jacobi identity
        let res = LieAlgebra::new(
            3,
            &[(2, 0, 1, q(1)), (0, 0, 2, q(1))],
            InnerProduct::<Rat>::Identity,
        );
        assert!(matches!(res, Err(Error::JacobiIdentityFails { .. })));
    }

    #[test]
    fn antisymmetry_violation_is_rejected() {
        let res = LieAlgebra::new(
            2,
            &[(0, 0, 0, q(1))],
            InnerProduct::<Rat>::Identity,
        );
        assert!(matches!(res, Err(Error::NotAntisymmetric { .. })));
    }

    #[test]
    fn e2_projection_satisfies_all_hypotheses() {
        let a = e2();
        let j = diag(&[0, 1, 1]);
        let rep = hypothesis_report(&a, &j).unwrap();
        assert!(rep.symmetric && rep.projector && rep.derivation);
    }

    #[test]
    fn sl2_projection_on_h_is_not_a_derivation() {
        let a = sl2();
        let j = diag(&[1, 0, 0]);
        let rep = hypothesis_report(&a, &j).unwrap();
        assert!(rep.symmetric && rep.projector);
        assert!(!rep.derivation);
        assert!(rep.derivation_witness.is_some());
        // the pair (e, f) violates it directly: J[e,f] = h but
        // [Je,f] + [e,Jf] = 0
        let e = vec![q(0), q(1), q(0)];
        let f = vec![q(0), q(0), q(1)];
        let lhs = j.apply(&a.bracket(&e, &f).unwrap());
        assert_eq!(lhs, vec![q(1), q(0), q(0)]);
        let rhs: Vec<Rat> = a
            .bracket(&j.apply(&e), &f)
            .unwrap()
            .into_iter()
            .zip(a.bracket(&e, &j.apply(&f)).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        assert!(rhs.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn identity_on_abelian_algebra() {
        let a = LieAlgebra::new(2, &[], InnerProduct::<Rat>::Identity).unwrap();
        let j = AlgebraOperator::identity(2);
        let rep = hypothesis_report(&a, &j).unwrap();
        assert!(rep.all());
    }

    #[test]
    fn e2_split_and_reductive_chain() {
        let a = e2();
        let j = diag(&[0, 1, 1]);
        let s = split(&a, &j).unwrap();
        assert_eq!(s.kernel.len(), 1);
        assert_eq!(s.image.len(), 2);
        assert!(s.direct_sum && s.orthogonal);
        let rep = reductive_check(&a, &s.kernel, &s.image).unwrap();
        assert!(rep.subalgebra && rep.invariant);
        // [r, span(p1,p2)] = span(p1,p2): the paper's equality form
        assert!(rep.equality);
    }

    #[test]
    fn trivial_splits() {
        let a = e2();
        let s = split(&a, &AlgebraOperator::zero(3)).unwrap();
        assert_eq!(s.kernel.len(), 3);
        assert!(s.image.is_empty());
        assert!(s.direct_sum && s.orthogonal);

        let s = split(&a, &diag(&[2, 3, 3])).unwrap();
        assert!(s.kernel.is_empty());
        assert_eq!(s.image.len(), 3);
    }

    #[test]
    fn non_symmetric_operators_are_rejected() {
        let a = e2();
        let mut m = vec![vec![q(0); 3]; 3];
        m[0][1] = q(1);
        let j = AlgebraOperator::new(m).unwrap();
        assert!(matches!(split(&a, &j), Err(Error::NonSymmetricOperator)));
    }

    #[test]
    fn sl2_bad_split_reports_witness() {
        let a = sl2();
        // kernel candidate span(e, f), image candidate span(h)
        let k = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let m = vec![vec![q(1), q(0), q(0)]];
        let rep = reductive_check(&a, &k, &m).unwrap();
        assert!(!rep.subalgebra); // [e, f] = h escapes span(e, f)
        assert!(!rep.failures.is_empty());
        let f = &rep.failures[0];
        assert!(f.kernel_pair);
        assert_eq!(f.bracket, vec![q(1), q(0), q(0)]);
    }

    #[test]
    fn abelian_algebra_every_split_is_reductive() {
        let a = LieAlgebra::new(3, &[], InnerProduct::<Rat>::Identity).unwrap();
        let k = vec![vec![q(1), q(0), q(0)]];
        let m = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let rep = reductive_check(&a, &k, &m).unwrap();
        assert!(rep.subalgebra && rep.invariant);
        assert!(!rep.equality); // brackets vanish, [k, m] = 0 != m
    }

    #[test]
    fn spanning_failure_is_an_error() {
        let a = e2();
        let k = vec![vec![q(1), q(0), q(0)]];
        let m = vec![vec![q(0), q(1), q(0)]];
        assert!(matches!(
            reductive_check(&a, &k, &m),
            Err(Error::SpanningFailure)
        ));
    }

    #[test]
    fn killing_form_rules() {
        // so(3) has nondegenerate (negative definite) Killing form
        let a = LieAlgebra::new(
            3,
            &[(2, 0, 1, q(1)), (0, 1, 2, q(1)), (1, 2, 0, q(1))],
            InnerProduct::<Rat>::Killing,
        );
        assert!(a.is_ok());
        // abelian algebras have identically zero Killing form
        let b = LieAlgebra::new(2, &[], InnerProduct::<Rat>::Killing);
        assert!(matches!(b, Err(Error::BadInnerProduct(_))));
    }

    #[test]
    fn custom_inner_product_must_be_spd() {
        let ok = LieAlgebra::new(
            2,
            &[],
            InnerProduct::Custom(vec![vec![q(2), q(1)], vec![q(1), q(2)]]),
        );
        assert!(ok.is_ok());
        let not_pd = LieAlgebra::new(
            2,
            &[],
            InnerProduct::Custom(vec![vec![q(1), q(3)], vec![q(3), q(1)]]),
        );
        assert!(matches!(not_pd, Err(Error::BadInnerProduct(_))));
    }

    #[test]
    fn basis_independence_of_the_split() {
        // conjugate e(2) data by an invertible matrix and compare
        let a = e2();
        let j = diag(&[0, 1, 1]);
        let s = split(&a, &j).unwrap();

        // change of basis: e_i' = P e_i with P lower triangular
        let p = vec![
            vec![q(1), q(0), q(0)],
            vec![q(2), q(1), q(0)],
            vec![q(0), q(3), q(1)],
        ];
        let p_inv = invert(&p);
        // transformed structure constants and operator
        let d = 3;
        let mut triples = Vec::new();
        for i in 0..d {
            for jj in 0..d {
                for k in (jj + 1)..d {
                    // c'^i_{jk} = P^{-1}[i][a] c^a_{bc} P[b][jj] P[c][k]
                    let mut v = q(0);
                    for aa in 0..d {
                        for b in 0..d {
                            for cc in 0..d {
                                v = v + p_inv[i][aa].clone()
                                    * a.structure_constant(aa, b, cc).clone()
                                    * p[b][jj].clone()
                                    * p[cc][k].clone();
                            }
                        }
                    }
                    if !v.is_zero() {
                        triples.push((i, jj, k, v));
                    }
                }
            }
        }
        // transported inner product g' = P^T g P keeps J' symmetric
        let gp = linalg::mat_mul(
            &linalg::transpose(&p),
            &linalg::mat_mul(a.inner_product(), &p),
        );
        let a2 = LieAlgebra::new(3, &triples, InnerProduct::Custom(gp)).unwrap();
        let j2 = AlgebraOperator::new(linalg::mat_mul(
            &p_inv,
            &linalg::mat_mul(j.matrix(), &p),
        ))
        .unwrap();
        let s2 = split(&a2, &j2).unwrap();
        assert_eq!(s2.kernel.len(), s.kernel.len());
        assert_eq!(s2.image.len(), s.image.len());
        // transported kernel spans the computed kernel
        let transported: Vec<Vec<Rat>> = s
            .kernel
            .iter()
            .map(|v| linalg::mat_vec(&p_inv, v))
            .collect();
        for v in &transported {
            assert!(linalg::in_span(&s2.kernel, v));
        }
        let rep = reductive_check(&a2, &s2.kernel, &s2.image).unwrap();
        assert!(rep.passes());
    }

    fn invert(p: &Matrix<Rat>) -> Matrix<Rat> {
        let d = p.len();
        let mut aug: Matrix<Rat> = p
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                for j in 0..d {
                    r.push(if i == j { q(1) } else { q(0) });
                }
                r
            })
            .collect();
        linalg::rref(&mut aug);
        aug.into_iter().map(|row| row[d..].to_vec()).collect()
    }
}

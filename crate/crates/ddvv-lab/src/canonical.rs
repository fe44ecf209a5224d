//! The `O(n) x O(m)` action on matrix tuples and its normal form.
//!
//! A pair `(p, q)` of orthogonal matrices acts on a tuple `(A_1, ..., A_m)`
//! by conjugating every matrix with `p` and mixing the tuple linearly with
//! the rows of `q`:
//!
//! ```text
//! (p, q) . (A_1, ..., A_m) = ( sum_j q_1j  p A_j p^T, ..., sum_j q_mj  p A_j p^T )
//! ```
//!
//! Both sides of the tuple commutator inequality are invariant under this
//! action, so every tuple can be moved into a *canonical form* without
//! changing the quantity under study: `A_1` diagonal, all matrices pairwise
//! orthogonal in the Frobenius inner product, norms descending, and at most
//! `n(n+1)/2` matrices nonzero (the dimension of symmetric matrix space).
//!
//! [`canonicalize`] computes that form along with the witness group element
//! that realizes it, so the reduction can be replayed and audited.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixTuple, SymMatrix};

/// Allowed orthogonality defect per unit of dimension for group elements.
const ORTHOGONALITY_TOL: f64 = 1e-12;

/// An element `(p, q)` of `O(n) x O(m)`, validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    p: Matrix,
    q: Matrix,
}

impl GroupElement {
    /// Validates that both factors are square and orthogonal
    /// (`|p^T p - I|_max <= 1e-12 * dim`).
    pub fn new(p: Matrix, q: Matrix) -> Result<Self> {
        check_orthogonal(&p, "p")?;
        check_orthogonal(&q, "q")?;
        Ok(Self { p, q })
    }

    /// The identity element for tuples of `m` matrices of size `n`.
    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            p: Matrix::identity(n),
            q: Matrix::identity(m),
        }
    }

    /// Conjugation factor acting on each matrix.
    pub fn p(&self) -> &Matrix {
        &self.p
    }

    /// Mixing factor acting across the tuple.
    pub fn q(&self) -> &Matrix {
        &self.q
    }

    /// Composition `self . inner`: the element that first applies `inner`,
    /// then `self`. Factorwise this is `(p2 p1, q2 q1)`.
    pub fn compose(&self, inner: &GroupElement) -> Result<GroupElement> {
        let p = self.p.matmul(&inner.p)?;
        let q = self.q.matmul(&inner.q)?;
        GroupElement::new(p, q)
    }
}

fn check_orthogonal(m: &Matrix, name: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "group element factor",
            rows: m.n_rows(),
            cols: m.n_cols(),
        });
    }
    let n = m.n_rows();
    let gram = &m.transpose() * m;
    let defect = (&gram - &Matrix::identity(n)).max_abs();
    let allowed = ORTHOGONALITY_TOL * n as f64;
    if defect > allowed {
        return Err(Error::NotOrthogonal {
            name,
            defect,
            allowed,
        });
    }
    Ok(())
}

/// Applies `(p, q)` to a tuple: conjugates each matrix by `p`, then mixes
/// the results with the rows of `q`.
pub fn apply_group_action(g: &GroupElement, t: &MatrixTuple) -> Result<MatrixTuple> {
    let n = t.dim();
    let m = t.len();
    if g.p.n_rows() != n {
        return Err(Error::ShapeMismatch {
            op: "group action (conjugation factor)",
            left: format!("p is {}x{}", g.p.n_rows(), g.p.n_cols()),
            right: format!("tuple matrices are {n}x{n}"),
        });
    }
    if g.q.n_rows() != m {
        return Err(Error::ShapeMismatch {
            op: "group action (mixing factor)",
            left: format!("q is {}x{}", g.q.n_rows(), g.q.n_cols()),
            right: format!("tuple has {m} matrices"),
        });
    }

    let pt = g.p.transpose();
    let conjugated: Vec<SymMatrix> = t
        .iter()
        .map(|a| {
            let pap = &(&g.p * a.as_matrix()) * &pt;
            SymMatrix::from_matrix(&pap).expect("conjugate of a square matrix is square")
        })
        .collect();

    let mixed: Vec<SymMatrix> = (0..m)
        .map(|i| {
            let mut b = SymMatrix::zeros(n);
            for (j, c) in conjugated.iter().enumerate() {
                b.add_scaled(g.q[(i, j)], c);
            }
            b
        })
        .collect();
    MatrixTuple::new(mixed)
}

/// The `m x m` Gram matrix `G_ab = <A_a, A_b>` of Frobenius inner products.
/// Positive semidefinite; diagonal exactly when the tuple is pairwise
/// orthogonal.
pub fn gram_matrix(t: &MatrixTuple) -> SymMatrix {
    let m = t.len();
    let raw = Matrix::from_fn(m, m, |a, b| {
        t[a].frobenius_inner(&t[b])
            .expect("tuple matrices share a dimension")
    });
    SymMatrix::from_matrix(&raw).expect("gram matrix is square")
}

/// A tuple in canonical position together with the group element that
/// produced it from the original input.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// The canonicalized tuple.
    pub tuple: MatrixTuple,
    /// Element `g` with `g . input ~= tuple` (up to roundoff).
    pub witness: GroupElement,
}

impl CanonicalForm {
    /// Checks the four normal-form properties, scaled to the tuple:
    ///
    /// 1. the first matrix is diagonal (off-diagonal magnitudes at most
    ///    `1e-12 * |A_1|`);
    /// 2. distinct matrices are Frobenius-orthogonal within `1e-10`
    ///    relative to the product of their norms, with an absolute floor of
    ///    `1e-14 * sum |A_r|^2` so that matrices at machine-noise scale
    ///    count as orthogonal to everything;
    /// 3. norms are non-increasing (up to `1e-12 * |A_1|` slack, since the
    ///    final conjugation can perturb exact ties by an ulp);
    /// 4. every matrix past the first `n(n+1)/2` has norm at most
    ///    `1e-12 * |A_1|`.
    pub fn check_invariants(&self) -> Result<()> {
        let t = &self.tuple;
        let norms: Vec<f64> = t.iter().map(SymMatrix::norm).collect();
        let lead = norms[0];

        let off = t[0].max_off_diagonal_abs();
        if off > 1e-12 * lead {
            return Err(Error::precondition(format!(
                "first matrix is not diagonal (off-diagonal magnitude {off:.3e} vs allowed {:.3e})",
                1e-12 * lead
            )));
        }

        let floor = 1e-14 * t.total_norm_sq();
        for a in 0..t.len() {
            for b in (a + 1)..t.len() {
                let inner = t[a].frobenius_inner(&t[b]).expect("dimensions agree");
                let allowed = 1e-10 * norms[a] * norms[b] + floor;
                if inner.abs() > allowed {
                    return Err(Error::precondition(format!(
                        "matrices {a} and {b} are not orthogonal (<A_{a},A_{b}> = {inner:.3e}, allowed {allowed:.3e})"
                    )));
                }
            }
        }

        for w in norms.windows(2) {
            if w[1] > w[0] + 1e-12 * lead {
                return Err(Error::precondition(format!(
                    "norms are not sorted in descending order ({} then {})",
                    w[0], w[1]
                )));
            }
        }

        let rank_cap = t.dim() * (t.dim() + 1) / 2;
        for (k, &norm) in norms.iter().enumerate().skip(rank_cap) {
            if norm > 1e-12 * lead {
                return Err(Error::precondition(format!(
                    "matrix {k} should vanish beyond index {rank_cap} but has norm {norm:.3e}"
                )));
            }
        }
        Ok(())
    }
}

/// Moves a tuple into canonical position.
///
/// Pipeline: diagonalize the Gram matrix and mix the tuple with the
/// transposed eigenbasis (making the matrices pairwise orthogonal), sort by
/// the recomputed norms (descending, ties broken by lexicographic entry
/// order), then diagonalize the leading matrix and conjugate the whole
/// tuple by its eigenbasis. Orthogonal mixing commutes with orthogonal
/// conjugation, so the second step preserves the first step's properties.
///
/// Both sides of the tuple commutator inequality are preserved (up to
/// roundoff) because each step is a group action.
pub fn canonicalize(t: &MatrixTuple) -> Result<CanonicalForm> {
    if t.total_norm_sq() == 0.0 {
        return Err(Error::ZeroTuple);
    }
    let n = t.dim();
    let m = t.len();

    // Step 1: orthogonalize the tuple via the Gram eigenbasis.
    let gram = gram_matrix(t);
    let gram_eig = gram.eigh();
    let q_unsorted = gram_eig.vectors.transpose();
    let mixed: Vec<SymMatrix> = (0..m)
        .map(|i| {
            let mut b = SymMatrix::zeros(n);
            for j in 0..m {
                b.add_scaled(q_unsorted[(i, j)], &t[j]);
            }
            b
        })
        .collect();

    // Re-sort by the *recomputed* norms: the Gram eigenvalues predict them,
    // but roundoff can reorder near-ties, and the canonical form is defined
    // by the actual norms. Ties break lexicographically on entries so that
    // equal-norm matrices land in a reproducible order.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        mixed[b]
            .norm_sq()
            .partial_cmp(&mixed[a].norm_sq())
            .expect("norms are finite")
            .then_with(|| lex_cmp(mixed[a].data(), mixed[b].data()))
    });
    let q = Matrix::from_fn(m, m, |i, j| q_unsorted[(order[i], j)]);
    let sorted: Vec<&SymMatrix> = order.iter().map(|&i| &mixed[i]).collect();

    // Step 2: diagonalize the leading matrix and conjugate everything.
    let lead_eig = sorted[0].eigh();
    let p = lead_eig.vectors.transpose();
    let pt = lead_eig.vectors.clone();
    let final_matrices: Vec<SymMatrix> = sorted
        .iter()
        .map(|a| {
            let pap = &(&p * a.as_matrix()) * &pt;
            SymMatrix::from_matrix(&pap).expect("conjugate is square")
        })
        .collect();

    Ok(CanonicalForm {
        tuple: MatrixTuple::new(final_matrices)?,
        witness: GroupElement::new(p, q)?,
    })
}

/// Lexicographic comparison of two equal-length buffers of finite floats.
fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("entries are finite") {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddvv::evaluate_matrix_form;

    fn sym(rows: &[&[f64]]) -> SymMatrix {
        let nested: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        SymMatrix::from_nested(&nested).unwrap()
    }

    fn equality_pair() -> MatrixTuple {
        MatrixTuple::new(vec![
            sym(&[&[0.0, 1.0], &[1.0, 0.0]]),
            sym(&[&[1.0, 0.0], &[0.0, -1.0]]),
        ])
        .unwrap()
    }

    #[test]
    fn group_element_rejects_non_orthogonal_factors() {
        let skew = Matrix::from_nested(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        let err = GroupElement::new(skew, Matrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal { name: "p", .. }));
    }

    #[test]
    fn identity_action_is_identity() {
        let t = equality_pair();
        let g = GroupElement::identity(2, 2);
        let out = apply_group_action(&g, &t).unwrap();
        assert_eq!(out, t);
    }

    #[test]
    fn permutation_conjugation_permutes_rows_and_columns() {
        let swap = Matrix::from_nested(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let g = GroupElement::new(swap, Matrix::identity(1)).unwrap();
        let a = sym(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let t = MatrixTuple::new(vec![a]).unwrap();
        let out = apply_group_action(&g, &t).unwrap();
        assert_eq!(out[0], sym(&[&[4.0, 2.0], &[2.0, 1.0]]));
    }

    #[test]
    fn action_rejects_mismatched_dimensions() {
        let g = GroupElement::identity(3, 2);
        let t = equality_pair();
        assert!(apply_group_action(&g, &t).is_err());
        let g = GroupElement::identity(2, 5);
        assert!(apply_group_action(&g, &t).is_err());
    }

    #[test]
    fn gram_matrix_of_the_equality_pair() {
        let t = equality_pair();
        let g = gram_matrix(&t);
        assert_eq!(g[(0, 0)], 2.0);
        assert_eq!(g[(1, 1)], 2.0);
        assert_eq!(g[(0, 1)], 0.0);
    }

    #[test]
    fn gram_matrix_of_duplicated_matrix_has_rank_one() {
        let a = sym(&[&[1.0, 2.0], &[2.0, -1.0]]);
        let t = MatrixTuple::new(vec![a.clone(), a]).unwrap();
        let g = gram_matrix(&t);
        let nsq = 10.0;
        for i in 0..2 {
            for j in 0..2 {
                assert!((g[(i, j)] - nsq).abs() < 1e-12);
            }
        }
        assert!(g.as_matrix().determinant().abs() < 1e-10);
    }

    #[test]
    fn canonicalize_rejects_the_zero_tuple() {
        let t = MatrixTuple::new(vec![SymMatrix::zeros(3), SymMatrix::zeros(3)]).unwrap();
        assert!(matches!(canonicalize(&t).unwrap_err(), Error::ZeroTuple));
    }

    #[test]
    fn canonicalize_diagonalizes_a_conjugated_diagonal_matrix() {
        // Build p D p^T for known D; the canonical form must recover D
        // with eigenvalues sorted in descending order.
        let inv = 1.0 / 2.0_f64.sqrt();
        let p = Matrix::from_nested(&[vec![inv, inv], vec![-inv, inv]]).unwrap();
        let d = SymMatrix::from_diagonal(&[1.0, 3.0]).unwrap();
        let a = &(&p * d.as_matrix()) * &p.transpose();
        let t = MatrixTuple::new(vec![SymMatrix::from_matrix(&a).unwrap()]).unwrap();
        let canon = canonicalize(&t).unwrap();
        canon.check_invariants().unwrap();
        assert!((canon.tuple[0][(0, 0)] - 3.0).abs() < 1e-12);
        assert!((canon.tuple[0][(1, 1)] - 1.0).abs() < 1e-12);
        assert!(canon.tuple[0][(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn canonicalize_preserves_both_sides_of_the_inequality() {
        // A deliberately messy 3-tuple.
        let t = MatrixTuple::new(vec![
            sym(&[&[0.3, 1.1, -0.4], &[1.1, -2.0, 0.9], &[-0.4, 0.9, 1.7]]),
            sym(&[&[1.5, -0.6, 0.2], &[-0.6, 0.8, -1.3], &[0.2, -1.3, -0.7]]),
            sym(&[&[-0.9, 0.4, 1.2], &[0.4, 2.1, 0.3], &[1.2, 0.3, 0.5]]),
        ])
        .unwrap();
        let before = evaluate_matrix_form(&t, 1e-10);
        let canon = canonicalize(&t).unwrap();
        canon.check_invariants().unwrap();
        let after = evaluate_matrix_form(&canon.tuple, 1e-10);
        assert!((before.lhs - after.lhs).abs() <= 1e-10 * before.lhs);
        assert!((before.rhs - after.rhs).abs() <= 1e-10 * before.lhs);
        // Witness replays the reduction.
        let replay = apply_group_action(&canon.witness, &t).unwrap();
        let scale = t.total_norm_sq().sqrt();
        for (got, want) in replay.iter().zip(canon.tuple.iter()) {
            let diff = (got.as_matrix() - want.as_matrix()).max_abs();
            assert!(diff <= 1e-12 * scale.max(1.0), "witness replay diff {diff}");
        }
    }

    #[test]
    fn canonicalize_zeroes_the_tail_of_an_overcomplete_tuple() {
        // n = 2 allows at most n(n+1)/2 = 3 independent symmetric matrices;
        // a 5-tuple must canonicalize with two numerically-zero tails.
        let t = MatrixTuple::new(vec![
            sym(&[&[1.0, 0.3], &[0.3, -0.5]]),
            sym(&[&[0.2, -1.0], &[-1.0, 0.8]]),
            sym(&[&[-0.7, 0.1], &[0.1, 1.1]]),
            sym(&[&[0.4, 0.9], &[0.9, 0.6]]),
            sym(&[&[-1.2, 0.5], &[0.5, 0.2]]),
        ])
        .unwrap();
        let canon = canonicalize(&t).unwrap();
        canon.check_invariants().unwrap();
        let lead = canon.tuple[0].norm();
        assert!(canon.tuple[3].norm() <= 1e-12 * lead);
        assert!(canon.tuple[4].norm() <= 1e-12 * lead);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let t = equality_pair();
        let inv = 1.0 / 2.0_f64.sqrt();
        let rot_p = Matrix::from_nested(&[vec![inv, -inv], vec![inv, inv]]).unwrap();
        let rot_q = Matrix::from_nested(&[vec![0.6, 0.8], vec![-0.8, 0.6]]).unwrap();
        let g1 = GroupElement::new(rot_p.clone(), Matrix::identity(2)).unwrap();
        let g2 = GroupElement::new(Matrix::identity(2), rot_q).unwrap();
        let sequential = apply_group_action(&g2, &apply_group_action(&g1, &t).unwrap()).unwrap();
        let composed = apply_group_action(&g2.compose(&g1).unwrap(), &t).unwrap();
        for (a, b) in sequential.iter().zip(composed.iter()) {
            assert!((a.as_matrix() - b.as_matrix()).max_abs() < 1e-11);
        }
    }
}

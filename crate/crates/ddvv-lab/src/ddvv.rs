//! The DDVV (normal scalar curvature) inequality in its three equivalent
//! formulations.
//!
//! * **Matrix form** — for symmetric `A_1, ..., A_m`:
//!   `(sum_r |A_r|^2)^2 >= 2 sum_{r<s} |[A_r, A_s]|^2`.
//! * **Coefficient form** — the same statement written out in the entries
//!   `h^r_ij` of a traceless second fundamental form.
//! * **Geometric form** — `rho + rho_perp <= |H|^2 + c` for a submanifold
//!   of a space form of curvature `c`, with the curvatures assembled from
//!   `h` through the Gauss and Ricci equations.
//!
//! The three evaluators are deliberately independent computations; their
//! mutual consistency (same pass/fail, explicit algebraic relations between
//! the sides) is what the test suite checks, so no formulation is allowed
//! to borrow another's arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{MatrixTuple, SymMatrix};

/// Default relative tolerance for inequality reports.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Outcome of checking one inequality `rhs <= lhs`.
///
/// `pass` is `rhs <= lhs * (1 + tol) + tol`: relative slack on the scale of
/// the left side plus an absolute floor so that near-zero comparisons do
/// not demand exact cancellation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// Bounding side.
    pub lhs: f64,
    /// Bounded side.
    pub rhs: f64,
    /// `rhs / lhs`; defined as 0 when both sides are 0.
    pub ratio: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    /// Verdict at tolerance `tol`.
    pub pass: bool,
    /// Tolerance the verdict was taken at.
    pub tol: f64,
}

impl InequalityReport {
    /// Builds the report for `rhs <= lhs` at relative tolerance `tol`.
    pub fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        let ratio = if lhs != 0.0 {
            rhs / lhs
        } else if rhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            lhs,
            rhs,
            ratio,
            margin: lhs - rhs,
            // Mixed absolute/relative slack. The relative part must grow
            // with |lhs|, not lhs, or the allowance would tighten below
            // zero slack for negative left sides and reject exact equality
            // (e.g. the geometric inequality with both sides -2).
            pass: rhs <= lhs + tol * (1.0 + lhs.abs()),
            tol,
        }
    }
}

/// `sum_{r<s} |[A_r, A_s]|^2`, the pairwise commutator energy of a tuple.
pub(crate) fn commutator_energy(t: &MatrixTuple) -> f64 {
    let mut total = 0.0;
    for r in 0..t.len() {
        for s in (r + 1)..t.len() {
            total += t[r]
                .commutator(&t[s])
                .expect("tuple matrices share a dimension")
                .norm_sq();
        }
    }
    total
}

/// Checks the matrix form `(sum_r |A_r|^2)^2 >= 2 sum_{r<s} |[A_r,A_s]|^2`.
pub fn evaluate_matrix_form(t: &MatrixTuple, tol: f64) -> InequalityReport {
    let total = t.total_norm_sq();
    InequalityReport::new(total * total, 2.0 * commutator_energy(t), tol)
}

/// Second fundamental form data: the ambient curvature `c` and one
/// symmetric coefficient matrix `h^r` per normal direction.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondFundamentalForm {
    c: f64,
    h: MatrixTuple,
}

impl SecondFundamentalForm {
    /// Validates that the curvature is finite; the tuple carries its own
    /// shape invariants.
    pub fn new(c: f64, h: MatrixTuple) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::invalid("ambient curvature c must be finite"));
        }
        Ok(Self { c, h })
    }

    /// Ambient sectional curvature of the space form.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// The coefficient matrices `h^1, ..., h^m`.
    pub fn h(&self) -> &MatrixTuple {
        &self.h
    }

    /// Intrinsic dimension `n`.
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Codimension `m`.
    pub fn codim(&self) -> usize {
        self.h.len()
    }

    /// The same data with every slice projected to its traceless part.
    pub fn traceless(&self) -> MatrixTuple {
        MatrixTuple::new(self.h.iter().map(SymMatrix::traceless_project).collect())
            .expect("projection preserves shape")
    }
}

/// Checks the coefficient form of the inequality:
///
/// ```text
/// sum_r sum_{i<j} (h^r_ii - h^r_jj)^2  +  2n sum_r sum_{i<j} (h^r_ij)^2
///   >=  2n sqrt( sum_{r<s} sum_{i<j} ( sum_k (h^r_ik h^s_jk - h^s_ik h^r_jk) )^2 )
/// ```
///
/// Requires every slice to be traceless (within `1e-10` relative to its
/// norm); apply [`SymMatrix::traceless_project`] first otherwise. The sums
/// are evaluated entrywise, independently of the matrix-form evaluator.
pub fn evaluate_coefficient_form(sff: &SecondFundamentalForm, tol: f64) -> Result<InequalityReport> {
    let h = sff.h();
    let n = sff.dim();
    for (r, slice) in h.iter().enumerate() {
        let trace = slice.trace();
        let allowed = 1e-10 * slice.norm();
        if trace.abs() > allowed {
            return Err(Error::precondition(format!(
                "slice {r} is not traceless (|trace| = {:.3e}, allowed {:.3e})",
                trace.abs(),
                allowed
            )));
        }
    }

    let mut diag_spread = 0.0;
    let mut off_diag = 0.0;
    for slice in h {
        for i in 0..n {
            for j in (i + 1)..n {
                let dd = slice[(i, i)] - slice[(j, j)];
                diag_spread += dd * dd;
                off_diag += slice[(i, j)] * slice[(i, j)];
            }
        }
    }
    let lhs = diag_spread + 2.0 * n as f64 * off_diag;

    let mut cross = 0.0;
    for r in 0..h.len() {
        for s in (r + 1)..h.len() {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut term = 0.0;
                    for k in 0..n {
                        term += h[r][(i, k)] * h[s][(j, k)] - h[s][(i, k)] * h[r][(j, k)];
                    }
                    cross += term * term;
                }
            }
        }
    }
    let rhs = 2.0 * n as f64 * cross.sqrt();

    Ok(InequalityReport::new(lhs, rhs, tol))
}

/// Normalized curvature quantities of an immersed submanifold, assembled
/// from the (full) second fundamental form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricQuantities {
    /// Normalized scalar curvature of the tangent bundle.
    pub rho: f64,
    /// Normalized scalar curvature of the normal bundle (always >= 0).
    pub rho_perp: f64,
    /// Squared mean curvature `|H|^2 = sum_r (trace h^r / n)^2`.
    pub h_mean_sq: f64,
}

/// Computes `rho`, `rho_perp`, and `|H|^2` from the full (not traceless)
/// second fundamental form via the Gauss and Ricci equations:
///
/// ```text
/// R(e_i, e_j, e_j, e_i)        = c + sum_r ( h^r_ii h^r_jj - (h^r_ij)^2 )
/// <Rperp(e_i, e_j) xi_r, xi_s> = ([h^r, h^s])_ij
/// rho      = 2/(n(n-1)) * sum_{i<j} R(e_i, e_j, e_j, e_i)
/// rho_perp = 2/(n(n-1)) * sqrt( sum_{i<j} sum_{r<s} <Rperp(e_i,e_j) xi_r, xi_s>^2 )
/// ```
///
/// The sign convention for the normal curvature is immaterial: its entries
/// are squared.
pub fn geometric_quantities(sff: &SecondFundamentalForm) -> Result<GeometricQuantities> {
    let n = sff.dim();
    if n < 2 {
        return Err(Error::precondition(
            "normalized scalar curvature requires intrinsic dimension n >= 2".to_string(),
        ));
    }
    let h = sff.h();
    let pairs_norm = 2.0 / (n as f64 * (n as f64 - 1.0));

    let mut sectional_sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut r_ijji = sff.c();
            for slice in h {
                r_ijji += slice[(i, i)] * slice[(j, j)] - slice[(i, j)] * slice[(i, j)];
            }
            sectional_sum += r_ijji;
        }
    }
    let rho = pairs_norm * sectional_sum;

    let mut normal_sum = 0.0;
    for r in 0..h.len() {
        for s in (r + 1)..h.len() {
            let comm = h[r].commutator(&h[s]).expect("slices share a dimension");
            for i in 0..n {
                for j in (i + 1)..n {
                    normal_sum += comm[(i, j)] * comm[(i, j)];
                }
            }
        }
    }
    let rho_perp = pairs_norm * normal_sum.sqrt();

    let h_mean_sq = h
        .iter()
        .map(|slice| {
            let lambda = slice.trace() / n as f64;
            lambda * lambda
        })
        .sum();

    Ok(GeometricQuantities {
        rho,
        rho_perp,
        h_mean_sq,
    })
}

/// Checks the geometric inequality `rho + rho_perp <= |H|^2 + c`.
pub fn check_conjecture1(sff: &SecondFundamentalForm, tol: f64) -> Result<InequalityReport> {
    let q = geometric_quantities(sff)?;
    Ok(InequalityReport::new(
        q.h_mean_sq + sff.c(),
        q.rho + q.rho_perp,
        tol,
    ))
}

//! Numerical oracles for the elementary inequalities behind the tuple
//! commutator bound.
//!
//! The chain of estimates runs through four statements, each checkable on
//! its own:
//!
//! * **Weighted spread bound** ([`lemma1_check`]): for zero-sum unit
//!   vectors `eta` and nonnegative weights `r_ij`,
//!   `sum_{i<j} (eta_i - eta_j)^2 r_ij <= sum r_ij + max r_ij`.
//! * **Arrowhead spectral bound** ([`ArrowheadMatrix`]): the bound above
//!   reduces to `lambda_max(P) <= sum s_j + max s_j` for an arrowhead
//!   matrix `P`, certified through a closed-form determinant identity.
//! * **Diagonal commutator bound** ([`lemma2_check`]): for a unit-norm
//!   diagonal `A` and pairwise-orthogonal symmetric `A_2, ..., A_m` with
//!   descending norms, `sum_a |[A, A_a]|^2 <= sum_a |A_a|^2 + |A_2|^2`.
//! * **Concentration bound** ([`delta_bound_check`]): for the same kind of
//!   family with zero diagonals, `2 max_{i != j} sum_a (A_a)_ij^2 <= |A_2|^2`.
//!
//! [`remark_bound_check`] covers the standalone two-matrix consequence
//! `|[A, B]|^2 <= |B|^2 + 2 |B|_inf^2`.

use serde::Serialize;

use crate::ddvv::InequalityReport;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixTuple, SymMatrix};

/// Fixed tolerance for structural preconditions (unit norm, diagonality,
/// zero-sum constraints); inequality slack is the caller's `tol`.
const STRUCT_TOL: f64 = 1e-12;

/// A vector constrained to the sphere-slice `sum eta_i = 0`,
/// `sum eta_i^2 = 1` (both within `1e-12`), validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaVector {
    eta: Vec<f64>,
}

impl EtaVector {
    pub fn new(eta: Vec<f64>) -> Result<Self> {
        if eta.len() < 2 {
            return Err(Error::invalid(
                "a zero-sum unit vector needs at least 2 components",
            ));
        }
        if let Some(pos) = eta.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: pos });
        }
        let sum: f64 = eta.iter().sum();
        if sum.abs() > STRUCT_TOL {
            return Err(Error::precondition(format!(
                "eta must sum to zero (sum = {sum:.3e})"
            )));
        }
        let norm_sq: f64 = eta.iter().map(|v| v * v).sum();
        if (norm_sq - 1.0).abs() > STRUCT_TOL {
            return Err(Error::precondition(format!(
                "eta must have unit norm (|eta|^2 = {norm_sq})"
            )));
        }
        Ok(Self { eta })
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.eta
    }
}

/// Nonnegative weights `r_ij` for index pairs `i < j` of `{0, ..., n-1}`,
/// stored densely in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSet {
    n: usize,
    r: Vec<f64>,
}

impl WeightSet {
    pub fn new(n: usize, r: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("weights need n >= 2 index positions"));
        }
        let expected = n * (n - 1) / 2;
        if r.len() != expected {
            return Err(Error::invalid(format!(
                "expected {expected} weights for n = {n}, got {}",
                r.len()
            )));
        }
        for (k, &v) in r.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "weight {k} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight of the pair `(i, j)` with `i < j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < j && j < self.n);
        let offset = i * (self.n - 1) - i * (i.saturating_sub(1)) / 2;
        self.r[offset + (j - i - 1)]
    }

    pub fn sum(&self) -> f64 {
        self.r.iter().sum()
    }

    /// Largest weight; 0 for an empty set.
    pub fn max(&self) -> f64 {
        self.r.iter().fold(0.0, |acc, &v| acc.max(v))
    }

    pub fn values(&self) -> &[f64] {
        &self.r
    }
}

/// Checks the weighted spread bound
/// `sum_{i<j} (eta_i - eta_j)^2 r_ij <= sum_{i<j} r_ij + max r_ij`.
pub fn lemma1_check(eta: &EtaVector, weights: &WeightSet, tol: f64) -> Result<InequalityReport> {
    if eta.len() != weights.n() {
        return Err(Error::ShapeMismatch {
            op: "weighted spread bound",
            left: format!("eta has {} components", eta.len()),
            right: format!("weights are indexed by n = {}", weights.n()),
        });
    }
    let e = eta.as_slice();
    let n = eta.len();
    let mut weighted_spread = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = e[i] - e[j];
            weighted_spread += d * d * weights.get(i, j);
        }
    }
    Ok(InequalityReport::new(
        weights.sum() + weights.max(),
        weighted_spread,
        tol,
    ))
}

/// Shared arrowhead-matrix machinery: a symmetric matrix that is diagonal
/// except for its first row and column,
///
/// ```text
///     [ head   off_1  off_2  ... ]
/// P = [ off_1  d_1               ]
///     [ off_2         d_2        ]
///     [ ...                ...   ]
/// ```
///
/// Its characteristic determinant has the closed form
/// `det(yI - P) = prod_j (y - d_j) * ( y - head - sum_j off_j^2 / (y - d_j) )`,
/// which is how the spectral bounds of interest are certified on paper. The
/// code keeps the closed form and the direct elimination determinant as
/// independent routes so each can check the other.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct GeneralArrowhead {
    pub head: f64,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl GeneralArrowhead {
    pub fn dim(&self) -> usize {
        self.diag.len() + 1
    }

    pub fn to_matrix(&self) -> SymMatrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        m[(0, 0)] = self.head;
        for j in 1..n {
            m[(0, j)] = self.off[j - 1];
            m[(j, 0)] = self.off[j - 1];
            m[(j, j)] = self.diag[j - 1];
        }
        SymMatrix::from_matrix(&m).expect("arrowhead matrix is square")
    }

    pub fn lambda_max(&self) -> f64 {
        self.to_matrix().eigh().values[0]
    }

    /// `det(yI - P)` by Gaussian elimination.
    pub fn det_direct(&self, y: f64) -> f64 {
        let n = self.dim();
        let p = self.to_matrix();
        let shifted = Matrix::from_fn(n, n, |i, j| {
            let delta = if i == j { y } else { 0.0 };
            delta - p[(i, j)]
        });
        shifted.determinant()
    }

    /// `det(yI - P)` by the closed-form product; errors when `y` sits at a
    /// pole of the formula (one of the tail diagonal entries).
    pub fn det_formula(&self, y: f64) -> Result<f64> {
        let guard = STRUCT_TOL * y.abs().max(1.0);
        let mut product = 1.0;
        let mut pole_sum = 0.0;
        for (&d, &off) in self.diag.iter().zip(&self.off) {
            let gap = y - d;
            if gap.abs() <= guard {
                return Err(Error::precondition(format!(
                    "y = {y} is at a pole of the determinant formula (diagonal entry {d})"
                )));
            }
            product *= gap;
            pole_sum += off * off / gap;
        }
        Ok(product * (y - self.head - pole_sum))
    }
}

/// Largest eigenvalue versus its closed-form bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralBound {
    pub lambda_max: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Two independent evaluations of `det(yI - P)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetIdentityCheck {
    /// Gaussian elimination on the shifted matrix.
    pub direct: f64,
    /// The closed-form product expression.
    pub formula: f64,
    /// Agreement within `1e-9` relative.
    pub agree: bool,
}

impl DetIdentityCheck {
    pub(crate) fn compute(core: &GeneralArrowhead, y: f64) -> Result<Self> {
        let direct = core.det_direct(y);
        let formula = core.det_formula(y)?;
        let scale = direct.abs().max(formula.abs()).max(1e-30);
        Ok(Self {
            direct,
            formula,
            agree: (direct - formula).abs() <= 1e-9 * scale,
        })
    }
}

/// The weighted arrowhead matrix built from nonnegative weights
/// `s_1, ..., s_k`: head `sum s_j`, first row/column `-s_j`, tail diagonal
/// `s_j`. Its quadratic form is `v^T P v = sum_j (v_0 - v_j)^2 s_j`, and its
/// largest eigenvalue is bounded by `sum s_j + max s_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrowheadMatrix {
    s: Vec<f64>,
}

impl ArrowheadMatrix {
    /// Validates that all weights are finite and nonnegative.
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::invalid("arrowhead weights must be nonempty"));
        }
        for (k, &v) in s.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "arrowhead weight {k} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self { s })
    }

    pub fn weights(&self) -> &[f64] {
        &self.s
    }

    /// Matrix dimension (`weights + 1`).
    pub fn dim(&self) -> usize {
        self.s.len() + 1
    }

    /// The closed-form eigenvalue bound `sum s_j + max s_j`.
    pub fn bound(&self) -> f64 {
        let sum: f64 = self.s.iter().sum();
        sum + self.s.iter().fold(0.0f64, |acc, &v| acc.max(v))
    }

    fn core(&self) -> GeneralArrowhead {
        GeneralArrowhead {
            head: self.s.iter().sum(),
            diag: self.s.clone(),
            off: self.s.iter().map(|&v| -v).collect(),
        }
    }

    /// Dense realization of the matrix.
    pub fn to_matrix(&self) -> SymMatrix {
        self.core().to_matrix()
    }

    /// `v^T P v`, which must equal `sum_j (v_0 - v_j)^2 s_j`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim(), "vector length must match dimension");
        let mut acc = 0.0;
        for (j, &s) in self.s.iter().enumerate() {
            let d = v[0] - v[j + 1];
            acc += d * d * s;
        }
        acc
    }

    /// Compares the largest eigenvalue with `sum s_j + max s_j`
    /// (pass allows `1e-10` relative slack).
    pub fn spectral_bound(&self) -> SpectralBound {
        let lambda_max = self.core().lambda_max();
        let bound = self.bound();
        SpectralBound {
            lambda_max,
            bound,
            pass: lambda_max <= bound + 1e-10 * bound,
        }
    }

    /// Evaluates `det(yI - P)` both directly and via the closed form.
    pub fn det_identity_check(&self, y: f64) -> Result<DetIdentityCheck> {
        DetIdentityCheck::compute(&self.core(), y)
    }
}

/// Checks the diagonal commutator bound
/// `sum_a |[A, A_a]|^2 <= sum_a |A_a|^2 + |A_2|^2`
/// for a unit-norm diagonal `A` and symmetric `rest = (A_2, ..., A_m)`
/// that are pairwise Frobenius-orthogonal (within `tol` relative) with
/// norms in descending order.
pub fn lemma2_check(a: &SymMatrix, rest: &MatrixTuple, tol: f64) -> Result<InequalityReport> {
    if a.dim() != rest.dim() {
        return Err(Error::ShapeMismatch {
            op: "diagonal commutator bound",
            left: format!("A is {0}x{0}", a.dim()),
            right: format!("family matrices are {0}x{0}", rest.dim()),
        });
    }
    check_unit_diagonal(a)?;
    check_pairwise_orthogonal(rest, tol)?;
    check_descending_norms(rest)?;

    let family_energy = rest.total_norm_sq();
    let lhs = family_energy + rest[0].norm_sq();
    let rhs: f64 = rest
        .iter()
        .map(|m| a.commutator(m).expect("dimensions agree").norm_sq())
        .sum();
    Ok(InequalityReport::new(lhs, rhs, tol))
}

/// Checks the two-matrix bound `|[A, B]|^2 <= |B|^2 + 2 |B|_inf^2` for a
/// unit-norm diagonal `A` and symmetric `B`, where `|B|_inf` is the largest
/// entry magnitude.
pub fn remark_bound_check(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<InequalityReport> {
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch {
            op: "entrywise commutator bound",
            left: format!("A is {0}x{0}", a.dim()),
            right: format!("B is {0}x{0}", b.dim()),
        });
    }
    check_unit_diagonal(a)?;
    let sup = b.max_abs();
    let lhs = b.norm_sq() + 2.0 * sup * sup;
    let rhs = a.commutator(b).expect("dimensions agree").norm_sq();
    Ok(InequalityReport::new(lhs, rhs, tol))
}

/// Checks the concentration bound `2 delta <= |A_2|^2` with
/// `delta = max_{i != j} sum_a (A_a)_ij^2`, for zero-diagonal, pairwise
/// orthogonal matrices with descending norms. At most `n(n-1)/2` of them
/// may be nonzero — the dimension of the zero-diagonal symmetric space.
pub fn delta_bound_check(rest: &MatrixTuple, tol: f64) -> Result<InequalityReport> {
    let n = rest.dim();
    let lead_norm = rest[0].norm();
    for (alpha, m) in rest.iter().enumerate() {
        let diag_mag = m
            .diagonal()
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        if diag_mag > STRUCT_TOL * m.norm() {
            return Err(Error::precondition(format!(
                "matrix {alpha} must have zero diagonal (largest diagonal magnitude {diag_mag:.3e})"
            )));
        }
    }
    let capacity = n * (n - 1) / 2;
    let nonzero = rest
        .iter()
        .filter(|m| m.norm() > STRUCT_TOL * lead_norm)
        .count();
    if nonzero > capacity {
        return Err(Error::precondition(format!(
            "{nonzero} nonzero zero-diagonal matrices cannot be pairwise orthogonal in dimension {capacity}"
        )));
    }
    check_pairwise_orthogonal(rest, tol)?;
    check_descending_norms(rest)?;

    let mut delta = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let stack: f64 = rest.iter().map(|m| m[(i, j)] * m[(i, j)]).sum();
            delta = delta.max(stack);
        }
    }
    Ok(InequalityReport::new(rest[0].norm_sq(), 2.0 * delta, tol))
}

fn check_unit_diagonal(a: &SymMatrix) -> Result<()> {
    let off = a.max_off_diagonal_abs();
    if off > STRUCT_TOL {
        return Err(Error::precondition(format!(
            "A must be diagonal (largest off-diagonal magnitude {off:.3e})"
        )));
    }
    let norm = a.norm();
    if (norm - 1.0).abs() > STRUCT_TOL {
        return Err(Error::precondition(format!(
            "A must have unit norm (|A| = {norm})"
        )));
    }
    Ok(())
}

fn check_pairwise_orthogonal(t: &MatrixTuple, tol: f64) -> Result<()> {
    for a in 0..t.len() {
        for b in (a + 1)..t.len() {
            let inner = t[a].frobenius_inner(&t[b]).expect("dimensions agree");
            let allowed = tol * t[a].norm() * t[b].norm();
            if inner.abs() > allowed {
                return Err(Error::precondition(format!(
                    "matrices {a} and {b} are not orthogonal (<A,B> = {inner:.3e}, allowed {allowed:.3e})"
                )));
            }
        }
    }
    Ok(())
}

fn check_descending_norms(t: &MatrixTuple) -> Result<()> {
    let norms: Vec<f64> = t.iter().map(SymMatrix::norm).collect();
    let slack = STRUCT_TOL * norms[0];
    for w in norms.windows(2) {
        if w[1] > w[0] + slack {
            return Err(Error::precondition(format!(
                "norms are not sorted in descending order ({} then {})",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

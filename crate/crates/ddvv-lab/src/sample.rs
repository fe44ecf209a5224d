//! Random generators for every input family the laboratory consumes.
//!
//! All generators take the RNG by mutable reference and draw nothing else,
//! so a caller that controls the seed controls the output bit-for-bit.
//! Structured inputs (orthogonal matrices, orthogonal families, constrained
//! vectors) are constructed to satisfy their preconditions to near machine
//! precision, well inside the tolerances the checking functions enforce.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::canonical::GroupElement;
use crate::ddvv::SecondFundamentalForm;
use crate::error::{Error, Result};
use crate::lemmas::{ArrowheadMatrix, EtaVector, WeightSet};
use crate::linalg::{Matrix, MatrixTuple, SymMatrix};

/// Retry budget for rejection loops that discard degenerate draws. The
/// discarded events have probability ~0; hitting the budget means the RNG
/// is broken, which is worth a panic rather than an error value.
const MAX_REDRAWS: usize = 64;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix with independent standard normal entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Result<Matrix> {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    Matrix::new(rows, cols, data)
}

/// Symmetric matrix with independent normal entries on and above the
/// diagonal (the classical symmetric ensemble up to scaling).
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
    }
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = gaussian(rng);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymMatrix::from_matrix(&m)
}

/// Symmetric matrix with zero trace: a normal draw, trace-projected.
pub fn random_traceless_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<SymMatrix> {
    Ok(random_symmetric(rng, n)?.traceless_project())
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// sign of the R diagonal folded into Q.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
    }
    let dm = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let (q, r) = dm.qr().unpack();
    let mut out = Matrix::zeros(n, n);
    for j in 0..n {
        // Fixing the R diagonal to be nonnegative makes the factorization
        // unique and the Q factor exactly Haar.
        let flip = if r[(j, j)] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            out[(i, j)] = flip * q[(i, j)];
        }
    }
    Ok(out)
}

/// Tuple of `m` independent symmetric Gaussian matrices of size `n`.
pub fn random_tuple<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<MatrixTuple> {
    let matrices = (0..m)
        .map(|_| random_symmetric(rng, n))
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(matrices)
}

/// Tuple of `m` independent traceless symmetric Gaussian matrices.
pub fn random_traceless_tuple<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> Result<MatrixTuple> {
    let matrices = (0..m)
        .map(|_| random_traceless_symmetric(rng, n))
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(matrices)
}

/// Random immersion data: a Gaussian curvature offset and `m` symmetric
/// coefficient matrices of size `n`.
pub fn random_sff<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<SecondFundamentalForm> {
    let c = gaussian(rng);
    SecondFundamentalForm::new(c, random_tuple(rng, n, m)?)
}

/// Random element of the symmetry group: an orthogonal conjugation on the
/// `n x n` side and an orthogonal mixing on the `m` tuple slots.
pub fn random_group_element<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> Result<GroupElement> {
    GroupElement::new(random_orthogonal(rng, n)?, random_orthogonal(rng, m)?)
}

/// Uniform point on the sphere slice `sum eta = 0`, `sum eta^2 = 1`.
pub fn random_unit_eta<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<EtaVector> {
    if n < 2 {
        return Err(Error::invalid(
            "a zero-sum unit vector needs at least 2 components",
        ));
    }
    for _ in 0..MAX_REDRAWS {
        let mut eta: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        // Two centering passes: the second removes the rounding residue of
        // the first, leaving |sum| at the eps^2 level.
        for _ in 0..2 {
            let mean = eta.iter().sum::<f64>() / n as f64;
            for v in &mut eta {
                *v -= mean;
            }
        }
        let norm = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for v in &mut eta {
            *v /= norm;
        }
        return EtaVector::new(eta);
    }
    unreachable!("centered Gaussian vectors do not collapse to zero");
}

/// Nonnegative pair weights `r_ij` with half-normal entries.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<WeightSet> {
    if n < 2 {
        return Err(Error::invalid("weights need n >= 2 index positions"));
    }
    let count = n * (n - 1) / 2;
    WeightSet::new(n, (0..count).map(|_| gaussian(rng).abs()).collect())
}

/// Arrowhead matrix with `k` half-normal weights (dimension `k + 1`).
pub fn random_arrowhead<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Result<ArrowheadMatrix> {
    if k == 0 {
        return Err(Error::invalid("arrowhead weights must be nonempty"));
    }
    ArrowheadMatrix::new((0..k).map(|_| gaussian(rng).abs()).collect())
}

/// Diagonal matrix with unit Frobenius norm and Gaussian direction.
pub fn random_unit_diagonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
    }
    for _ in 0..MAX_REDRAWS {
        let mut d: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for v in &mut d {
            *v /= norm;
        }
        return SymMatrix::from_diagonal(&d);
    }
    unreachable!("Gaussian diagonals do not collapse to zero");
}

/// Pairwise Frobenius-orthogonal symmetric matrices with descending norms,
/// as required by the diagonal commutator and concentration bounds.
///
/// With `zero_diagonal` the matrices live in the zero-diagonal subspace,
/// whose dimension `n(n-1)/2` caps the family size; otherwise the cap is
/// the full symmetric dimension `n(n+1)/2`. Orthogonality is produced by
/// two Gram–Schmidt sweeps (the second clears the rounding residue of the
/// first), with no normalization so the norms stay spread out.
pub fn random_orthogonal_family<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    count: usize,
    zero_diagonal: bool,
) -> Result<MatrixTuple> {
    if n == 0 {
        return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
    }
    if count == 0 {
        return Err(Error::invalid("an orthogonal family needs at least one matrix"));
    }
    let capacity = if zero_diagonal {
        n * (n - 1) / 2
    } else {
        n * (n + 1) / 2
    };
    if count > capacity {
        return Err(Error::invalid(format!(
            "{count} matrices cannot be pairwise orthogonal in a space of dimension {capacity}"
        )));
    }

    let mut family: Vec<SymMatrix> = Vec::with_capacity(count);
    'outer: for _ in 0..count {
        for _ in 0..MAX_REDRAWS {
            let candidate = if zero_diagonal {
                random_zero_diagonal(rng, n)?
            } else {
                random_symmetric(rng, n)?
            };
            let original_norm = candidate.norm();
            let mut v = candidate;
            for _ in 0..2 {
                for u in &family {
                    let coef = v.frobenius_inner(u).expect("dimensions agree") / u.norm_sq();
                    v = &v - &u.scale(coef);
                }
            }
            // A draw that was almost inside the current span has lost its
            // magnitude to the projection; discard it rather than keep a
            // noise-dominated matrix.
            if v.norm() > 1e-8 * original_norm.max(1.0) {
                family.push(v);
                continue 'outer;
            }
        }
        unreachable!("Gaussian draws are not confined to a proper subspace");
    }

    family.sort_by(|a, b| {
        b.norm_sq()
            .partial_cmp(&a.norm_sq())
            .expect("norms are finite")
    });
    MatrixTuple::new(family)
}

fn random_zero_diagonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<SymMatrix> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = gaussian(rng);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymMatrix::from_matrix(&m)
}

/// Unit-norm matrix with Gaussian direction (no symmetry imposed).
pub fn random_unit_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Matrix> {
    for _ in 0..MAX_REDRAWS {
        let m = random_matrix(rng, n, n)?;
        let norm = m.norm();
        if norm < 1e-8 {
            continue;
        }
        return Ok(m.scale(1.0 / norm));
    }
    unreachable!("Gaussian matrices do not collapse to zero");
}

/// Unit-norm matrix whose top singular value `s_1` satisfies
/// `s_1^2 <= 1/2`, the regime where the commutator bound is immediate.
///
/// Singular values are drawn half-normal and the largest is capped at the
/// norm of the rest, which is exactly the constraint `s_1^2 <= 1 - s_1^2`
/// after normalization. For `n = 2` the cap binds almost surely and the
/// output sits on the regime boundary `s_1 = s_2 = 1/sqrt(2)`, the only
/// flat-enough shape in that dimension.
pub fn random_trivial_bw_source<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::invalid(
            "the trivial regime needs n >= 2: a 1x1 matrix has s_1^2 = |X|^2",
        ));
    }
    for _ in 0..MAX_REDRAWS {
        let mut s: Vec<f64> = (0..n).map(|_| gaussian(rng).abs()).collect();
        s.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        let rest: f64 = s[1..].iter().map(|v| v * v).sum();
        if rest < 1e-8 {
            continue;
        }
        if s[0] * s[0] > rest {
            s[0] = rest.sqrt();
        }
        let total: f64 = s.iter().map(|v| v * v).sum();
        let inv = 1.0 / total.sqrt();
        for v in &mut s {
            *v *= inv;
        }

        let u = random_orthogonal(rng, n)?;
        let vt = random_orthogonal(rng, n)?.transpose();
        let mut scaled = u;
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= s[j];
            }
        }
        return Ok(&scaled * &vt);
    }
    unreachable!("half-normal singular values do not all collapse to zero");
}

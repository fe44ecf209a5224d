//! The supporting inequalities, each as a runnable oracle.
//!
//! The proof toolkit for the tuple inequality runs through a handful of
//! self-contained bounds. Each is implemented here as an oracle that
//! evaluates both sides on concrete inputs:
//!
//! * a weighted spread bound for zero-sum unit vectors,
//! * the spectral bound for arrowhead matrices plus the determinant
//!   identity that locates their eigenvalues,
//! * a commutator bound for a diagonal matrix against an orthogonal family,
//! * a concentration ("delta") bound for zero-diagonal families,
//! * an entrywise two-matrix commutator bound.
//!
//! Run with: `cargo run --example lemma_oracles`

use ddvv_lab::lemmas::{
    delta_bound_check, lemma1_check, lemma2_check, remark_bound_check, ArrowheadMatrix,
};
use ddvv_lab::sample;
use ddvv_lab::DEFAULT_TOL;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ddvv_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);

    // Weighted spread bound: for unit eta with sum(eta) = 0 and
    // nonnegative weights r_ij,
    //   sum_{i<j} (eta_i - eta_j)^2 r_ij <= sum r + max r.
    let n = 5;
    let eta = sample::random_unit_eta(&mut rng, n)?;
    let weights = sample::random_weights(&mut rng, n)?;
    let report = lemma1_check(&eta, &weights, DEFAULT_TOL)?;
    println!("weighted spread bound (n = {n}):");
    println!(
        "  spread = {:.6} <= {:.6} = sum + max, pass = {}",
        report.rhs, report.lhs, report.pass
    );

    // Arrowhead bound: the comparison matrix with head sum(s), arm s_i has
    // top eigenvalue at most sum(s) + max(s); its eigenvalues are the roots
    // of an explicit rational determinant identity, checked at a probe
    // point above every pole.
    let arrow = sample::random_arrowhead(&mut rng, 4)?;
    let spectral = arrow.spectral_bound();
    let probe = arrow.bound() + 1.0;
    let det = arrow.det_identity_check(probe)?;
    println!("\narrowhead comparison matrix (5 x 5):");
    println!(
        "  lambda_max = {:.6} <= {:.6} = bound, pass = {}",
        spectral.lambda_max, spectral.bound, spectral.pass
    );
    println!(
        "  det(yI - P) at y = {probe:.6}: direct = {:.6e}, formula = {:.6e}, agree = {}",
        det.direct, det.formula, det.agree
    );

    // Hand-checkable instance: weights (1, 1) give eigenvalues {0, 1, 3},
    // so the top eigenvalue meets the bound sum + max = 3 exactly.
    let tight = ArrowheadMatrix::new(vec![1.0, 1.0])?;
    let tight_spectral = tight.spectral_bound();
    println!(
        "  tight instance s = (1, 1): lambda_max = {:.12}, bound = {}",
        tight_spectral.lambda_max, tight_spectral.bound
    );

    // Diagonal commutator bound: for a unit diagonal A and an orthogonal
    // family, sum |[A, A_alpha]|^2 <= sum |A_alpha|^2 + |A_2|^2 (the
    // family's largest norm enters once more).
    let a = sample::random_unit_diagonal(&mut rng, 4)?;
    let family = sample::random_orthogonal_family(&mut rng, 4, 3, false)?;
    let report = lemma2_check(&a, &family, DEFAULT_TOL)?;
    println!("\ndiagonal commutator bound (n = 4, family of 3):");
    println!(
        "  sum |[A, A_a]|^2 = {:.6} <= {:.6}, pass = {}",
        report.rhs, report.lhs, report.pass
    );

    // Concentration bound for zero-diagonal orthogonal families: twice the
    // largest pairwise concentration is at most the second norm squared.
    let family = sample::random_orthogonal_family(&mut rng, 4, 2, true)?;
    let report = delta_bound_check(&family, DEFAULT_TOL)?;
    println!("\nconcentration bound (n = 4, zero-diagonal family of 2):");
    println!(
        "  2 delta = {:.6} <= {:.6} = |A_2|^2, pass = {}",
        report.rhs, report.lhs, report.pass
    );

    // Entrywise bound: for a unit diagonal A and symmetric B,
    // |[A, B]|^2 <= |B|^2 + 2 max_entry(B)^2.
    let a = sample::random_unit_diagonal(&mut rng, 3)?;
    let b = sample::random_symmetric(&mut rng, 3)?;
    let report = remark_bound_check(&a, &b, DEFAULT_TOL)?;
    println!("\nentrywise commutator bound (n = 3):");
    println!(
        "  |[A, B]|^2 = {:.6} <= {:.6}, pass = {}",
        report.rhs, report.lhs, report.pass
    );

    Ok(())
}

//! The Böttcher–Wenzel inequality through its commutator operator.
//!
//! For any real square `X`, the operator `T : Y -> [X^T, [X, Y]]` is
//! symmetric positive semidefinite on matrix space, and its top eigenvalue
//! `alpha` controls the commutator: `|[X, Y]|^2 <= alpha |Y|^2 <= 2 |X|^2
//! |Y|^2`. This example builds `T` for concrete sources, inspects its
//! spectrum, exercises the eigenvector pairing that drives the sharpness
//! analysis, and checks the singular-value reduction.
//!
//! Run with: `cargo run --example bw_operator`

use ddvv_lab::bw::{
    build_t_operator, bw_check, bw_spectrum, bw_trivial_case_check, commutator_arrowhead,
    pair_eigenvector, svd_reduce_check,
};
use ddvv_lab::linalg::Matrix;
use ddvv_lab::sample;
use ddvv_lab::DEFAULT_TOL;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ddvv_lab::Result<()> {
    // The extremal source: a single nilpotent Jordan cell.
    let x = Matrix::from_nested(&[vec![0.0, 1.0], vec![0.0, 0.0]])?;
    let op = build_t_operator(&x)?;
    let top = bw_spectrum(&op)?;
    println!("X = E_12 (nilpotent cell):");
    println!("  top eigenvalue alpha = {}", top.alpha);
    println!("  2 |X|^2              = {}", 2.0 * x.norm_sq());
    println!("  top eigenvector Y =\n{}", top.eigenvector);

    // The inequality is tight here: Y = E_21 attains it.
    let y = Matrix::from_nested(&[vec![0.0, 0.0], vec![1.0, 0.0]])?;
    let report = bw_check(&x, &y, DEFAULT_TOL)?;
    println!(
        "equality pair: |[X,Y]|^2 = {} vs 2 |X|^2 |Y|^2 = {}, ratio = {}",
        report.rhs, report.lhs, report.ratio
    );

    // Eigenvector pairing: for any eigenvector Y of T with eigenvalue
    // alpha > 0, the matrix Y1 = [X^T, Y^T] is again an eigenvector for
    // alpha, orthogonal to Y — top eigenspaces come in pairs.
    let paired = pair_eigenvector(&op, &y)?;
    println!("\npairing Y = E_21:");
    println!("  Y1 = [X^T, Y^T] =\n{paired}");
    println!(
        "  <Y, Y1> = {} (orthogonal by construction)",
        y.frobenius_inner(&paired)?
    );

    // Random sources: alpha always respects the bound, and the residual of
    // the returned eigenvector under T is at rounding scale.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    println!("\nrandom sources:");
    for &n in &[2usize, 3, 4] {
        let x = sample::random_matrix(&mut rng, n, n)?;
        let op = build_t_operator(&x)?;
        let top = bw_spectrum(&op)?;
        let residual = (&op.apply(&top.eigenvector)? - &top.eigenvector.scale(top.alpha)).norm();
        println!(
            "  n = {n}: alpha = {:.6}, 2|X|^2 = {:.6}, T-residual = {:.3e}",
            top.alpha,
            2.0 * x.norm_sq(),
            residual
        );
    }

    // Singular-value reduction: |[X, Y]| only depends on X through its
    // singular values, after rotating Y into the right bases.
    let x = sample::random_matrix(&mut rng, 3, 3)?;
    let y = sample::random_matrix(&mut rng, 3, 3)?;
    let reduction = svd_reduce_check(&x, &y)?;
    println!("\nSVD reduction (n = 3):");
    println!(
        "  |[X, Y]| = {:.12}, |Lambda B - C Lambda| = {:.12}, agree = {}",
        reduction.norm_original, reduction.norm_reduced, reduction.agree
    );

    // Flat-spectrum regime: when every singular value of a unit-norm X
    // satisfies s_1^2 <= 1/2, the inequality needs no spectral analysis.
    let x = sample::random_trivial_bw_source(&mut rng, 3)?;
    let y = sample::random_unit_matrix(&mut rng, 3)?;
    let report = bw_trivial_case_check(&x, &y, DEFAULT_TOL)?;
    println!("\nflat-spectrum regime (unit-norm X, s_1^2 <= 1/2):");
    println!(
        "  |[X, Y]|^2 = {:.6} <= 2, pass = {}",
        report.rhs, report.pass
    );

    // Arrowhead comparison: the first row/column block of [B, C] is
    // spectrally dominated by an explicit arrowhead matrix.
    let b = sample::random_matrix(&mut rng, 4, 4)?;
    let c = sample::random_matrix(&mut rng, 4, 4)?;
    let arrow = commutator_arrowhead(&b, &c)?;
    let spectral = arrow.spectral_bound();
    println!("\ncommutator arrowhead comparison (n = 4):");
    println!(
        "  lambda_max = {:.6} <= {:.6} = bound, pass = {}",
        spectral.lambda_max, spectral.bound, spectral.pass
    );

    Ok(())
}

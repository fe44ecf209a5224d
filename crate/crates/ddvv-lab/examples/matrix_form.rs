//! The tuple inequality in matrix and coefficient form.
//!
//! Evaluates `(sum_r |A_r|^2)^2 >= 2 sum_{r<s} |[A_r, A_s]|^2` on the
//! classical equality configuration and on random tuples, then re-derives
//! the same verdict from the entrywise coefficient form and checks the
//! algebraic relations that tie the two formulations together.
//!
//! Run with: `cargo run --example matrix_form`

use ddvv_lab::ddvv::{
    evaluate_coefficient_form, evaluate_matrix_form, SecondFundamentalForm, DEFAULT_TOL,
};
use ddvv_lab::linalg::{MatrixTuple, SymMatrix};
use ddvv_lab::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ddvv_lab::Result<()> {
    // The configuration attaining equality: two anticommuting reflections.
    let equality = MatrixTuple::new(vec![
        SymMatrix::from_nested(&[vec![0.0, 1.0], vec![1.0, 0.0]])?,
        SymMatrix::from_nested(&[vec![1.0, 0.0], vec![0.0, -1.0]])?,
    ])?;

    let report = evaluate_matrix_form(&equality, DEFAULT_TOL);
    println!("equality pair:");
    println!("  (sum |A_r|^2)^2          = {}", report.lhs);
    println!("  2 sum |[A_r, A_s]|^2     = {}", report.rhs);
    println!("  ratio = {}, pass = {}", report.ratio, report.pass);

    // Random tuples sit strictly inside the inequality almost surely.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("\nrandom Gaussian tuples:");
    for &(n, m) in &[(2, 2), (3, 3), (4, 5), (6, 4)] {
        let tuple = sample::random_tuple(&mut rng, n, m)?;
        let report = evaluate_matrix_form(&tuple, DEFAULT_TOL);
        println!(
            "  n = {n}, m = {m}: ratio = {:.6}, margin = {:.3e}, pass = {}",
            report.ratio, report.margin, report.pass
        );
    }

    // The coefficient form is an independent computation on the entries of
    // a *traceless* tuple. Its sides relate to the matrix form by
    //   lhs_coeff         = n * sum_r |A_r|^2
    //   rhs_coeff squared = 2 n^2 * sum_{r<s} |[A_r, A_s]|^2.
    let n = 4;
    let traceless = sample::random_traceless_tuple(&mut rng, n, 3)?;
    let matrix_report = evaluate_matrix_form(&traceless, DEFAULT_TOL);
    let sff = SecondFundamentalForm::new(0.0, traceless.clone())?;
    let coeff_report = evaluate_coefficient_form(&sff, DEFAULT_TOL)?;

    println!("\ncoefficient form on a traceless tuple (n = {n}, m = 3):");
    println!("  coefficient lhs = {}", coeff_report.lhs);
    println!(
        "  n * sum |A_r|^2 = {}",
        n as f64 * traceless.total_norm_sq()
    );
    println!("  coefficient rhs^2    = {}", coeff_report.rhs * coeff_report.rhs);
    println!(
        "  2 n^2 * commutators  = {}",
        n as f64 * n as f64 * matrix_report.rhs
    );
    println!(
        "  verdicts agree: {}",
        matrix_report.pass == coeff_report.pass
    );

    Ok(())
}

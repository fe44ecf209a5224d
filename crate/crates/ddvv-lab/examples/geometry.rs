//! The inequality in its geometric form.
//!
//! For an `n`-dimensional submanifold of a space form of curvature `c`, the
//! normalized scalar curvature `rho`, the normal scalar curvature
//! `rho_perp`, and the mean curvature `H` are all computable from the
//! second fundamental form via the Gauss and Ricci equations. The
//! inequality asserts `rho + rho_perp <= |H|^2 + c`, with equality exactly
//! at the special configurations probed below.
//!
//! Run with: `cargo run --example geometry`

use ddvv_lab::ddvv::{
    check_conjecture1, geometric_quantities, SecondFundamentalForm, DEFAULT_TOL,
};
use ddvv_lab::linalg::{MatrixTuple, SymMatrix};
use ddvv_lab::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(label: &str, sff: &SecondFundamentalForm) -> ddvv_lab::Result<()> {
    let q = geometric_quantities(sff)?;
    let report = check_conjecture1(sff, DEFAULT_TOL)?;
    println!("{label}");
    println!("  rho       = {:+.6}", q.rho);
    println!("  rho_perp  = {:+.6}", q.rho_perp);
    println!("  |H|^2     = {:+.6}", q.h_mean_sq);
    println!("  c         = {:+.6}", sff.c());
    println!(
        "  rho + rho_perp = {:.6}  vs  |H|^2 + c = {:.6}   margin = {:+.3e}, pass = {}",
        report.rhs, report.lhs, report.margin, report.pass
    );
    Ok(())
}

fn main() -> ddvv_lab::Result<()> {
    // An umbilical immersion (h^r = lambda_r I, e.g. a round sphere in a
    // sphere) attains equality: rho_perp = 0 and rho = |H|^2 + c exactly.
    let n = 3;
    let lambdas = [0.8, -0.4];
    let umbilical = MatrixTuple::new(
        lambdas
            .iter()
            .map(|&l| SymMatrix::from_diagonal(&vec![l; n]))
            .collect::<ddvv_lab::Result<Vec<_>>>()?,
    )?;
    show(
        "umbilical data (equality case):",
        &SecondFundamentalForm::new(1.0, umbilical)?,
    )?;

    // The minimal equality configuration: the anticommuting traceless pair
    // gives rho = -2, rho_perp = 2, H = 0 — equality again, this time with
    // a genuinely curved normal bundle.
    let traceless_pair = MatrixTuple::new(vec![
        SymMatrix::from_nested(&[vec![0.0, 1.0], vec![1.0, 0.0]])?,
        SymMatrix::from_nested(&[vec![1.0, 0.0], vec![0.0, -1.0]])?,
    ])?;
    show(
        "\nanticommuting traceless pair (equality case):",
        &SecondFundamentalForm::new(0.0, traceless_pair)?,
    )?;

    // Generic second fundamental forms sit strictly inside the bound.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..3 {
        let sff = sample::random_sff(&mut rng, 4, 3)?;
        show(&format!("\nrandom immersion data #{trial}:"), &sff)?;
    }

    Ok(())
}

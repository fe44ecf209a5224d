//! Hunting for equality configurations by gradient ascent.
//!
//! The scale-invariant ratio `2 sum_{r<s} |[A_r,A_s]|^2 / (sum_r |A_r|^2)^2`
//! is at most 1, with equality only at very rigid configurations. The
//! search module climbs the ratio from many random starts; watching it
//! saturate at 1 — and never cross — is a strong numerical exercise of
//! both the inequality and its equality analysis.
//!
//! Run with: `cargo run --example extremal_search`

use ddvv_lab::ddvv::evaluate_matrix_form;
use ddvv_lab::search::{ddvv_ratio, extremal_search, SearchConfig};
use ddvv_lab::DEFAULT_TOL;

fn main() -> ddvv_lab::Result<()> {
    for &(n, m) in &[(2usize, 2usize), (3, 3), (3, 4)] {
        let cfg = SearchConfig {
            n,
            m,
            restarts: 50,
            max_iters: 2000,
            step: 0.05,
            seed: 2024,
            tol: 1e-10,
        };
        let result = extremal_search(&cfg)?;
        println!("n = {n}, m = {m}:");
        println!(
            "  best ratio = {:.15} after {} total iterations (converged: {})",
            result.best_ratio, result.iterations_used, result.converged
        );

        // The winner is reported in canonical position at unit energy;
        // replaying the ratio from the tuple reproduces the reported value.
        let replayed = ddvv_ratio(&result.best_tuple)?;
        println!(
            "  replayed ratio from the tuple = {:.15} (drift {:.1e})",
            replayed,
            (replayed - result.best_ratio).abs()
        );

        // And of course the tuple still satisfies the inequality.
        let report = evaluate_matrix_form(&result.best_tuple, DEFAULT_TOL);
        println!(
            "  inequality on the maximizer: margin = {:+.3e}, pass = {}",
            report.margin, report.pass
        );

        if n == 2 && m == 2 {
            println!("  maximizer (canonical form):");
            for (r, a) in result.best_tuple.iter().enumerate() {
                println!("  A_{r} =\n{a}");
            }
        }
        println!();
    }

    Ok(())
}

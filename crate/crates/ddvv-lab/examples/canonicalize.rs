//! Canonical representatives under the symmetry group `O(n) x O(m)`.
//!
//! Both sides of the tuple inequality are invariant under conjugating every
//! matrix by a fixed `P` in `O(n)` and mixing the tuple by a `Q` in `O(m)`.
//! `canonicalize` moves a tuple into a normal position — pairwise
//! Frobenius-orthogonal matrices with descending norms, leading matrix
//! diagonal — and returns the group element that maps the input there, so
//! the reduction can be replayed and audited.
//!
//! Run with: `cargo run --example canonicalize`

use ddvv_lab::canonical::{apply_group_action, canonicalize};
use ddvv_lab::ddvv::{evaluate_matrix_form, DEFAULT_TOL};
use ddvv_lab::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ddvv_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    // Start from a random tuple.
    let tuple = sample::random_tuple(&mut rng, 3, 2)?;
    let canonical = canonicalize(&tuple)?;

    println!("input tuple (n = 3, m = 2):");
    for (r, a) in tuple.iter().enumerate() {
        println!("A_{r} =\n{a}");
    }
    println!("canonical form:");
    for (r, a) in canonical.tuple.iter().enumerate() {
        println!("C_{r} =\n{a}");
    }

    // The structural invariants of the normal position.
    canonical.check_invariants()?;
    println!("invariants hold: diagonal leading matrix, pairwise orthogonal");
    println!("matrices, descending norms, nothing past the rank cap\n");

    // The witness really maps input to output...
    let replayed = apply_group_action(&canonical.witness, &tuple)?;
    let drift: f64 = replayed
        .iter()
        .zip(canonical.tuple.iter())
        .map(|(x, y)| (&x.clone().into_matrix() - &y.clone().into_matrix()).max_abs())
        .fold(0.0, f64::max);
    println!("witness replay drift: {drift:.3e}");

    // ...and the action leaves both sides of the inequality alone.
    let before = evaluate_matrix_form(&tuple, DEFAULT_TOL);
    let after = evaluate_matrix_form(&canonical.tuple, DEFAULT_TOL);
    println!(
        "lhs {} -> {} (shift {:.3e})",
        before.lhs,
        after.lhs,
        (before.lhs - after.lhs).abs()
    );
    println!(
        "rhs {} -> {} (shift {:.3e})",
        before.rhs,
        after.rhs,
        (before.rhs - after.rhs).abs()
    );

    // A random group translate of the tuple lies on the same orbit, so its
    // canonical form satisfies the same invariants and carries the same
    // invariant quantities (norm profile, both sides of the inequality).
    let g = sample::random_group_element(&mut rng, 3, 2)?;
    let translated = apply_group_action(&g, &tuple)?;
    let canonical_again = canonicalize(&translated)?;
    canonical_again.check_invariants()?;
    let translate_report = evaluate_matrix_form(&canonical_again.tuple, DEFAULT_TOL);
    println!(
        "canonical form of a translate: lhs shift {:.3e}, rhs shift {:.3e}",
        (translate_report.lhs - before.lhs).abs(),
        (translate_report.rhs - before.rhs).abs()
    );

    Ok(())
}

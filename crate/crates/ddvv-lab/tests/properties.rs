//! Property-based tests for the algebraic identities the oracles lean on.

use ddvv_lab::bw::{build_t_operator, vectorize};
use ddvv_lab::canonical::{apply_group_action, canonicalize, GroupElement};
use ddvv_lab::ddvv::{evaluate_matrix_form, InequalityReport, DEFAULT_TOL};
use ddvv_lab::linalg::{Matrix, MatrixTuple, SymMatrix};
use ddvv_lab::sample;
use ddvv_lab::search::ddvv_ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn entries(count: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, count)
}

fn sym_from(n: usize, raw: &[f64]) -> SymMatrix {
    let full = Matrix::new(n, n, raw.to_vec()).expect("sized buffer");
    SymMatrix::from_matrix(&full).expect("square")
}

fn tuple_from(n: usize, m: usize, raw: &[f64]) -> MatrixTuple {
    let matrices = (0..m)
        .map(|r| sym_from(n, &raw[r * n * n..(r + 1) * n * n]))
        .collect();
    MatrixTuple::new(matrices).expect("consistent dimensions")
}

proptest! {
    /// The commutator of two symmetric matrices is antisymmetric *bitwise*:
    /// entry (i, j) is computed from the same float products as entry
    /// (j, i), in the same order, so the sign flip is exact.
    #[test]
    fn symmetric_commutators_are_exactly_antisymmetric(
        n in 2usize..5,
        raw in entries(2 * 5 * 5),
    ) {
        let a = sym_from(n, &raw[..n * n]);
        let b = sym_from(n, &raw[5 * 5..5 * 5 + n * n]);
        let c = a.commutator(&b).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert_eq!(c[(i, j)].to_bits(), (-c[(j, i)]).to_bits());
                }
            }
        }
        // The diagonal vanishes exactly (as +0.0, so the bitwise negation
        // above would see -0.0; compare by value instead).
        for i in 0..n {
            prop_assert_eq!(c[(i, i)], 0.0);
        }
    }

    /// For an antisymmetric commutator, the squared norm is twice the
    /// off-diagonal energy of the upper triangle.
    #[test]
    fn commutator_norm_is_twice_the_upper_triangle(
        n in 2usize..5,
        raw in entries(2 * 5 * 5),
    ) {
        let a = sym_from(n, &raw[..n * n]);
        let b = sym_from(n, &raw[5 * 5..5 * 5 + n * n]);
        let c = a.commutator(&b).unwrap();
        let mut upper = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                upper += c[(i, j)] * c[(i, j)];
            }
        }
        let norm_sq = c.norm_sq();
        prop_assert!((norm_sq - 2.0 * upper).abs() <= 1e-12 * norm_sq.max(1e-300));
    }

    /// Both sides of the tuple inequality are invariant under the group
    /// action, up to roundoff on the scale of the side.
    #[test]
    fn group_action_preserves_both_sides(
        n in 2usize..4,
        m in 1usize..4,
        raw in entries(3 * 3 * 3),
        seed in 0u64..1_000,
    ) {
        let tuple = tuple_from(n, m, &raw[..n * n * m]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample::random_group_element(&mut rng, n, m).unwrap();
        let moved = apply_group_action(&g, &tuple).unwrap();

        let before = evaluate_matrix_form(&tuple, DEFAULT_TOL);
        let after = evaluate_matrix_form(&moved, DEFAULT_TOL);
        prop_assert!((before.lhs - after.lhs).abs() <= 1e-10 * before.lhs.abs().max(1.0));
        prop_assert!((before.rhs - after.rhs).abs() <= 1e-10 * before.lhs.abs().max(1.0));
    }

    /// Composing witnesses matches acting twice.
    #[test]
    fn group_law_holds_under_the_action(
        n in 2usize..4,
        m in 1usize..4,
        raw in entries(3 * 3 * 3),
        seed in 0u64..1_000,
    ) {
        let tuple = tuple_from(n, m, &raw[..n * n * m]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1 = sample::random_group_element(&mut rng, n, m).unwrap();
        let g2 = sample::random_group_element(&mut rng, n, m).unwrap();

        let twice = apply_group_action(&g2, &apply_group_action(&g1, &tuple).unwrap()).unwrap();
        let once = apply_group_action(&g2.compose(&g1).unwrap(), &tuple).unwrap();

        let scale: f64 = tuple.total_norm_sq().sqrt().max(1.0);
        for (x, y) in twice.iter().zip(once.iter()) {
            let drift = (&x.clone().into_matrix() - &y.clone().into_matrix()).max_abs();
            prop_assert!(drift <= 1e-12 * scale, "drift = {drift:.3e}");
        }
    }

    /// The commutator ratio is scale-invariant, and the report sides scale
    /// with the fourth power of the dilation.
    #[test]
    fn ratio_is_scale_invariant(
        n in 2usize..4,
        m in 2usize..4,
        raw in entries(3 * 3 * 3),
        scale in prop::sample::select(vec![0.25f64, 0.5, 2.0, 4.0, 8.0]),
    ) {
        let tuple = tuple_from(n, m, &raw[..n * n * m]);
        prop_assume!(tuple.total_norm_sq() > 1e-6);

        let scaled = tuple.scale(scale);
        let ratio = ddvv_ratio(&tuple).unwrap();
        let ratio_scaled = ddvv_ratio(&scaled).unwrap();
        prop_assert!((ratio - ratio_scaled).abs() <= 1e-12 * ratio.max(1e-30));

        // Powers of two scale the sides exactly.
        let before = evaluate_matrix_form(&tuple, DEFAULT_TOL);
        let after = evaluate_matrix_form(&scaled, DEFAULT_TOL);
        let four = scale * scale * scale * scale;
        prop_assert_eq!(after.lhs.to_bits(), (before.lhs * four).to_bits());
        prop_assert_eq!(after.rhs.to_bits(), (before.rhs * four).to_bits());
    }

    /// Reports round-trip bit-for-bit through the 17-digit JSON encoding.
    #[test]
    fn reports_round_trip_through_json(
        lhs in prop::num::f64::POSITIVE | prop::num::f64::ZERO,
        rhs in prop::num::f64::POSITIVE | prop::num::f64::ZERO,
        tol in 0.0..1.0f64,
    ) {
        prop_assume!(lhs.is_finite() && rhs.is_finite());
        let report = InequalityReport::new(lhs, rhs, tol);
        prop_assume!(report.ratio.is_finite());

        let text = ddvv_lab::jsonio::to_string(&report);
        let parsed: InequalityReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(report.lhs.to_bits(), parsed.lhs.to_bits());
        prop_assert_eq!(report.rhs.to_bits(), parsed.rhs.to_bits());
        prop_assert_eq!(report.ratio.to_bits(), parsed.ratio.to_bits());
        prop_assert_eq!(report.margin.to_bits(), parsed.margin.to_bits());
        prop_assert_eq!(report.tol.to_bits(), parsed.tol.to_bits());
        prop_assert_eq!(report.pass, parsed.pass);
    }

    /// The quadratic form of the operator T is the squared commutator norm:
    /// <vec Y, T vec Y> = |[X, Y]|^2.
    #[test]
    fn operator_quadratic_form_is_the_commutator_energy(
        n in 1usize..5,
        raw in entries(2 * 4 * 4),
    ) {
        let x = Matrix::new(n, n, raw[..n * n].to_vec()).unwrap();
        let y = Matrix::new(n, n, raw[4 * 4..4 * 4 + n * n].to_vec()).unwrap();
        let op = build_t_operator(&x).unwrap();

        let ty = vectorize(&op.apply(&y).unwrap());
        let vy = vectorize(&y);
        let quad: f64 = vy.iter().zip(&ty).map(|(a, b)| a * b).sum();
        let comm = x.commutator(&y).unwrap().norm_sq();

        let scale = (x.norm_sq() * y.norm_sq()).max(1e-30);
        prop_assert!((quad - comm).abs() <= 1e-10 * scale, "quad = {quad}, comm = {comm}");
    }

    /// Canonical forms of nondegenerate random tuples satisfy all four
    /// normal-position invariants, and canonicalization preserves the
    /// total energy.
    #[test]
    fn canonical_forms_satisfy_their_invariants(
        n in 2usize..4,
        m in 1usize..4,
        raw in entries(3 * 3 * 3),
    ) {
        let tuple = tuple_from(n, m, &raw[..n * n * m]);
        prop_assume!(tuple.total_norm_sq() > 1e-6);

        let canonical = canonicalize(&tuple).unwrap();
        prop_assert!(canonical.check_invariants().is_ok());

        let before = tuple.total_norm_sq();
        let after = canonical.tuple.total_norm_sq();
        prop_assert!((before - after).abs() <= 1e-10 * before);

        // The witness is a genuine group element even after composition
        // of the two internal steps.
        let p = canonical.witness.p().clone();
        let q = canonical.witness.q().clone();
        prop_assert!(GroupElement::new(p, q).is_ok());
    }
}

#[test]
fn witness_replay_reproduces_the_canonical_tuple() {
    // A deterministic spot check kept outside proptest: replaying the
    // witness on the input lands on the canonical tuple entrywise.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for &(n, m) in &[(2usize, 2usize), (3, 2), (4, 3)] {
        let tuple = sample::random_tuple(&mut rng, n, m).unwrap();
        let canonical = canonicalize(&tuple).unwrap();
        let replayed = apply_group_action(&canonical.witness, &tuple).unwrap();
        let scale = tuple.total_norm_sq().sqrt();
        for (x, y) in replayed.iter().zip(canonical.tuple.iter()) {
            let drift = (&x.clone().into_matrix() - &y.clone().into_matrix()).max_abs();
            assert!(drift <= 1e-12 * scale, "drift = {drift:.3e}");
        }
    }
}

//! Extremal search and randomized fuzzing for the inequality oracles.
//!
//! The search side climbs the scale-invariant ratio
//! `2 sum_{r<s} |[A_r, A_s]|^2 / (sum_r |A_r|^2)^2` by projected gradient
//! ascent from many random starts; the tuple inequality says the ratio
//! never exceeds 1, so a correct implementation must report maxima that
//! approach 1 without crossing it.
//!
//! The fuzz side runs one named oracle over a stream of random inputs and
//! aggregates pass/fail statistics. Each trial draws from its own RNG
//! stream derived from `(seed, trial_index)`, so campaigns are reproducible
//! bit-for-bit regardless of thread count, and the worst trial can be
//! regenerated after the fact from its index alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::canonical::canonicalize;
use crate::ddvv::{
    check_conjecture1, commutator_energy, evaluate_coefficient_form, evaluate_matrix_form,
    InequalityReport, SecondFundamentalForm,
};
use crate::error::{Error, Result};
use crate::jsonio;
use crate::lemmas::{delta_bound_check, lemma1_check, lemma2_check, remark_bound_check};
use crate::linalg::{MatrixTuple, SymMatrix};
use crate::{bw, sample};

/// Consecutive low-improvement iterations that count as convergence.
const CONVERGENCE_STREAK: usize = 25;
/// Step size below which a restart is considered fully stalled.
const MIN_STEP: f64 = 1e-18;

/// Parameters of one extremal search run.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Matrix size.
    pub n: usize,
    /// Tuple length.
    pub m: usize,
    /// Number of independent random starts.
    pub restarts: usize,
    /// Iteration budget per restart.
    pub max_iters: usize,
    /// Initial ascent step length (adapted during the run).
    pub step: f64,
    /// Seed for the restart RNG streams.
    pub seed: u64,
    /// Ratio improvement below which an iteration counts as stalled.
    pub tol: f64,
}

impl SearchConfig {
    /// Rejects degenerate or meaningless parameter combinations.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(
                "search needs n >= 2: 1x1 matrices always commute",
            ));
        }
        if self.m == 0 {
            return Err(Error::invalid("search needs at least one matrix slot"));
        }
        if self.restarts == 0 {
            return Err(Error::invalid("search needs at least one restart"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("search needs a positive iteration budget"));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::invalid("step must be finite and positive"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::invalid("tol must be finite and positive"));
        }
        Ok(())
    }
}

/// Outcome of an extremal search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Largest ratio seen at any restart's final iterate.
    pub best_ratio: f64,
    /// The maximizing tuple, unit-normalized and in canonical form.
    pub best_tuple: MatrixTuple,
    /// Total iterations spent across all restarts.
    pub iterations_used: usize,
    /// Whether the winning restart settled before its budget ran out.
    pub converged: bool,
}

/// The scale-invariant commutator ratio
/// `2 sum_{r<s} |[A_r, A_s]|^2 / (sum_r |A_r|^2)^2`, at most 1.
pub fn ddvv_ratio(t: &MatrixTuple) -> Result<f64> {
    let energy = t.total_norm_sq();
    if energy == 0.0 {
        return Err(Error::ZeroTuple);
    }
    Ok(2.0 * commutator_energy(t) / (energy * energy))
}

/// Euclidean gradient of [`ddvv_ratio`] with respect to every tuple entry.
///
/// With `N = 2 sum_{r<s} |[A_r, A_s]|^2` and `E = sum_r |A_r|^2` the ratio
/// is `f = N / E^2` and
///
/// ```text
///     grad_r f = (4 / E^2) sum_{s != r} [[A_r, A_s], A_s]  -  (4 N / E^3) A_r.
/// ```
///
/// Because `f` is homogeneous of degree zero, the gradient is automatically
/// tangent to the sphere `E = const` (Euler's identity), which is what makes
/// plain gradient steps followed by renormalization a true ascent method.
pub fn ratio_gradient(t: &MatrixTuple) -> Result<MatrixTuple> {
    let energy = t.total_norm_sq();
    if energy == 0.0 {
        return Err(Error::ZeroTuple);
    }
    let m = t.len();
    let numerator = 2.0 * commutator_energy(t);
    let lead = 4.0 / (energy * energy);
    let radial = 4.0 * numerator / (energy * energy * energy);

    let mut grads = Vec::with_capacity(m);
    for r in 0..m {
        let mut acc = t[r].scale(-radial);
        for s in 0..m {
            if s == r {
                continue;
            }
            let inner = t[r].commutator(&t[s]).expect("tuple dimensions agree");
            let outer = &inner.matmul(t[s].as_matrix()).expect("dimensions agree")
                - &t[s]
                    .as_matrix()
                    .matmul(&inner)
                    .expect("dimensions agree");
            // [[A_r, A_s], A_s] is symmetric (commutator of an antisymmetric
            // with a symmetric matrix); from_matrix only irons out roundoff.
            let sym = SymMatrix::from_matrix(&outer.scale(lead))?;
            acc = &acc + &sym;
        }
        grads.push(acc);
    }
    MatrixTuple::new(grads)
}

struct RestartOutcome {
    tuple: MatrixTuple,
    ratio: f64,
    iterations: usize,
    converged: bool,
}

fn run_restart(cfg: &SearchConfig, restart: usize) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);

    let mut current = sample::random_tuple(&mut rng, cfg.n, cfg.m)?;
    current = current.scale(1.0 / current.total_norm_sq().sqrt());
    let mut ratio = ddvv_ratio(&current)?;

    let mut step = cfg.step;
    let mut streak = 0usize;
    let mut iterations = 0usize;
    let mut converged = false;

    for _ in 0..cfg.max_iters {
        iterations += 1;
        let grad = ratio_gradient(&current)?;
        let grad_norm = grad.total_norm_sq().sqrt();
        if grad_norm == 0.0 {
            converged = true;
            break;
        }

        let scale = step / grad_norm;
        let moved: Vec<SymMatrix> = current
            .iter()
            .zip(grad.iter())
            .map(|(a, g)| a + &g.scale(scale))
            .collect();
        let candidate = MatrixTuple::new(moved)?;
        let candidate = candidate.scale(1.0 / candidate.total_norm_sq().sqrt());
        let candidate_ratio = ddvv_ratio(&candidate)?;

        if candidate_ratio > ratio {
            let improvement = candidate_ratio - ratio;
            current = candidate;
            ratio = candidate_ratio;
            step *= 1.25;
            streak = if improvement <= cfg.tol { streak + 1 } else { 0 };
        } else {
            step *= 0.5;
            streak += 1;
            if step < MIN_STEP {
                converged = true;
                break;
            }
        }
        if streak >= CONVERGENCE_STREAK {
            converged = true;
            break;
        }
    }

    Ok(RestartOutcome {
        tuple: current,
        ratio,
        iterations,
        converged,
    })
}

/// Run the multi-start ascent described by `cfg`.
///
/// Restarts are independent (each has its own RNG stream) and may execute
/// in parallel; the outcome is aggregated in restart order, so the result
/// does not depend on the thread count. Ties in the final ratio go to the
/// earlier restart. The winning tuple is unit-normalized and canonicalized
/// before being returned.
pub fn extremal_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| run_restart(cfg, k))
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0usize;
    let mut iterations_used = 0usize;
    for (k, outcome) in outcomes.iter().enumerate() {
        iterations_used += outcome.iterations;
        if outcome.ratio > outcomes[best].ratio {
            best = k;
        }
    }
    let winner = &outcomes[best];

    let normalized = winner
        .tuple
        .scale(1.0 / winner.tuple.total_norm_sq().sqrt());
    let canonical = canonicalize(&normalized)?;

    Ok(SearchResult {
        best_ratio: winner.ratio,
        best_tuple: canonical.tuple,
        iterations_used,
        converged: winner.converged,
    })
}

/// The inequality oracles the fuzzer can drive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// Matrix form of the tuple inequality on random symmetric tuples.
    DdvvMatrix,
    /// Coefficient form on random traceless tuples.
    DdvvCoeff,
    /// Geometric form `rho + rho_perp <= |H|^2 + c` on random immersion data.
    Conjecture1,
    /// Weighted spread bound on random zero-sum unit vectors.
    Lemma1,
    /// Diagonal commutator bound on random orthogonal families.
    Lemma2,
    /// Concentration bound `2 delta <= |A_2|^2` on zero-diagonal families.
    Delta,
    /// Entrywise bound `|[A,B]|^2 <= |B|^2 + 2 |B|_inf^2`.
    Remark,
    /// The commutator inequality itself on unconstrained pairs.
    Bw,
    /// The commutator inequality in the flat-spectrum regime.
    BwTrivial,
    /// Arrowhead spectral bound plus its determinant identity.
    Arrowhead,
}

impl OracleKind {
    /// Every oracle, in the order used for documentation and tests.
    pub const ALL: [OracleKind; 10] = [
        OracleKind::DdvvMatrix,
        OracleKind::DdvvCoeff,
        OracleKind::Conjecture1,
        OracleKind::Lemma1,
        OracleKind::Lemma2,
        OracleKind::Delta,
        OracleKind::Remark,
        OracleKind::Bw,
        OracleKind::BwTrivial,
        OracleKind::Arrowhead,
    ];

    /// The CLI-facing name.
    pub fn name(&self) -> &'static str {
        match self {
            OracleKind::DdvvMatrix => "ddvv-matrix",
            OracleKind::DdvvCoeff => "ddvv-coeff",
            OracleKind::Conjecture1 => "conjecture1",
            OracleKind::Lemma1 => "lemma1",
            OracleKind::Lemma2 => "lemma2",
            OracleKind::Delta => "delta",
            OracleKind::Remark => "remark",
            OracleKind::Bw => "bw",
            OracleKind::BwTrivial => "bw-trivial",
            OracleKind::Arrowhead => "arrowhead",
        }
    }

    fn takes_tuples(&self) -> bool {
        matches!(
            self,
            OracleKind::DdvvMatrix | OracleKind::DdvvCoeff | OracleKind::Conjecture1
        )
    }
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OracleKind::ALL
            .iter()
            .find(|kind| kind.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownOracle(s.to_string()))
    }
}

impl std::fmt::Display for OracleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How random inputs are drawn for tuple-valued oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleDistribution {
    /// Independent Gaussian entries.
    Gaussian,
    /// A Gaussian draw pushed to its canonical representative, so the
    /// oracle is exercised on the normalized slice of tuple space.
    OrthogonalCanonical,
}

impl SampleDistribution {
    pub fn name(&self) -> &'static str {
        match self {
            SampleDistribution::Gaussian => "gaussian",
            SampleDistribution::OrthogonalCanonical => "orthogonal-canonical",
        }
    }
}

impl std::str::FromStr for SampleDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(SampleDistribution::Gaussian),
            "orthogonal-canonical" => Ok(SampleDistribution::OrthogonalCanonical),
            other => Err(Error::invalid(format!(
                "unknown distribution '{other}' (expected 'gaussian' or 'orthogonal-canonical')"
            ))),
        }
    }
}

impl std::fmt::Display for SampleDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of one fuzz campaign.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzConfig {
    pub oracle: OracleKind,
    pub trials: usize,
    /// Matrix size `n`; interpretation is per oracle (see [`FuzzConfig::validate`]).
    pub n: usize,
    /// Tuple length `m`; ignored by the single-input oracles.
    pub m: usize,
    pub seed: u64,
    pub dist: SampleDistribution,
    pub tol: f64,
}

impl FuzzConfig {
    /// Checks the dimension constraints of the chosen oracle.
    ///
    /// The family oracles (`lemma2`, `delta`) interpret `m` the way the
    /// tuple inequality does — `m` normal directions, of which the first is
    /// the distinguished diagonal — so they generate `m - 1` family
    /// matrices and need `m >= 2`. The single-input oracles ignore `m`.
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::invalid("tol must be finite and nonnegative"));
        }
        if self.dist == SampleDistribution::OrthogonalCanonical && !self.oracle.takes_tuples() {
            return Err(Error::invalid(format!(
                "the orthogonal-canonical distribution only applies to tuple oracles, not '{}'",
                self.oracle
            )));
        }
        let need = |ok: bool, msg: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(format!("oracle '{}': {msg}", self.oracle)))
            }
        };
        match self.oracle {
            OracleKind::DdvvMatrix | OracleKind::DdvvCoeff => {
                need(self.n >= 1, "needs n >= 1")?;
                need(self.m >= 1, "needs m >= 1")
            }
            OracleKind::Conjecture1 => {
                need(self.n >= 2, "curvatures need n >= 2")?;
                need(self.m >= 1, "needs m >= 1")
            }
            OracleKind::Lemma1 => need(self.n >= 2, "zero-sum vectors need n >= 2"),
            OracleKind::Lemma2 => {
                need(self.n >= 1, "needs n >= 1")?;
                need(self.m >= 2, "needs m >= 2 (one diagonal plus a family)")?;
                need(
                    self.m - 1 <= self.n * (self.n + 1) / 2,
                    "m - 1 orthogonal symmetric matrices need m - 1 <= n(n+1)/2",
                )
            }
            OracleKind::Delta => {
                need(self.n >= 2, "zero-diagonal matrices need n >= 2")?;
                need(self.m >= 2, "needs m >= 2 (one diagonal plus a family)")?;
                need(
                    self.m - 1 <= self.n * (self.n - 1) / 2,
                    "m - 1 orthogonal zero-diagonal matrices need m - 1 <= n(n-1)/2",
                )
            }
            OracleKind::Remark | OracleKind::Bw => need(self.n >= 1, "needs n >= 1"),
            OracleKind::BwTrivial => need(self.n >= 2, "the flat regime needs n >= 2"),
            OracleKind::Arrowhead => need(self.n >= 2, "an arrowhead matrix needs n >= 2"),
        }
    }
}

/// One fuzz trial's outcome, as written to verbose CSV output.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub ratio: f64,
    pub pass: bool,
}

/// Aggregated outcome of a fuzz campaign.
#[derive(Clone, Debug, Serialize)]
pub struct FuzzSummary {
    pub oracle: String,
    pub trials: usize,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub dist: String,
    pub passes: usize,
    pub failures: usize,
    /// Largest ratio over all trials (0 when there were none).
    pub max_ratio: f64,
    /// Index of the trial attaining `max_ratio`.
    pub argmax_trial: Option<usize>,
    /// SHA-256 of the canonical JSON encoding of the worst trial's input,
    /// so the exact offending input can be pinned down and regenerated.
    pub argmax_digest: Option<String>,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn draw_tuple(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, traceless: bool) -> Result<MatrixTuple> {
    let raw = if traceless {
        sample::random_traceless_tuple(rng, cfg.n, cfg.m)?
    } else {
        sample::random_tuple(rng, cfg.n, cfg.m)?
    };
    match cfg.dist {
        SampleDistribution::Gaussian => Ok(raw),
        SampleDistribution::OrthogonalCanonical => Ok(canonicalize(&raw)?.tuple),
    }
}

/// Generate the input for `trial`, run the oracle once, and return the
/// report together with (on request) the input's canonical JSON encoding.
///
/// Errors abort the whole campaign: they mean the generator or the oracle's
/// preconditions are broken, not that the inequality failed. A genuine
/// inequality violation comes back as `pass = false`.
fn run_trial(
    cfg: &FuzzConfig,
    trial: usize,
    want_input: bool,
) -> Result<(InequalityReport, Option<serde_json::Value>)> {
    let mut rng = trial_rng(cfg.seed, trial);
    let keep = |value: serde_json::Value| if want_input { Some(value) } else { None };

    match cfg.oracle {
        OracleKind::DdvvMatrix => {
            let t = draw_tuple(cfg, &mut rng, false)?;
            let report = evaluate_matrix_form(&t, cfg.tol);
            Ok((
                report,
                keep(json!({ "n": t.dim(), "m": t.len(), "matrices": t.to_nested() })),
            ))
        }
        OracleKind::DdvvCoeff => {
            let t = draw_tuple(cfg, &mut rng, true)?;
            let sff = SecondFundamentalForm::new(0.0, t)?;
            let report = evaluate_coefficient_form(&sff, cfg.tol)?;
            Ok((
                report,
                keep(json!({
                    "n": sff.dim(), "m": sff.codim(), "c": sff.c(), "h": sff.h().to_nested()
                })),
            ))
        }
        OracleKind::Conjecture1 => {
            let c = {
                // Draw c before the tuple so both distributions share it.
                use rand_distr::StandardNormal;
                rand::Rng::sample::<f64, _>(&mut rng, StandardNormal)
            };
            let h = draw_tuple(cfg, &mut rng, false)?;
            let sff = SecondFundamentalForm::new(c, h)?;
            let report = check_conjecture1(&sff, cfg.tol)?;
            Ok((
                report,
                keep(json!({
                    "n": sff.dim(), "m": sff.codim(), "c": sff.c(), "h": sff.h().to_nested()
                })),
            ))
        }
        OracleKind::Lemma1 => {
            let eta = sample::random_unit_eta(&mut rng, cfg.n)?;
            let weights = sample::random_weights(&mut rng, cfg.n)?;
            let report = lemma1_check(&eta, &weights, cfg.tol)?;
            Ok((
                report,
                keep(json!({ "eta": eta.as_slice(), "weights": weights.values() })),
            ))
        }
        OracleKind::Lemma2 => {
            let a = sample::random_unit_diagonal(&mut rng, cfg.n)?;
            let family = sample::random_orthogonal_family(&mut rng, cfg.n, cfg.m - 1, false)?;
            let report = lemma2_check(&a, &family, cfg.tol)?;
            Ok((
                report,
                keep(json!({ "a_diagonal": a.diagonal(), "family": family.to_nested() })),
            ))
        }
        OracleKind::Delta => {
            let family = sample::random_orthogonal_family(&mut rng, cfg.n, cfg.m - 1, true)?;
            let report = delta_bound_check(&family, cfg.tol)?;
            Ok((report, keep(json!({ "family": family.to_nested() }))))
        }
        OracleKind::Remark => {
            let a = sample::random_unit_diagonal(&mut rng, cfg.n)?;
            let b = sample::random_symmetric(&mut rng, cfg.n)?;
            let report = remark_bound_check(&a, &b, cfg.tol)?;
            Ok((
                report,
                keep(json!({ "a_diagonal": a.diagonal(), "b": b.to_nested() })),
            ))
        }
        OracleKind::Bw => {
            let x = sample::random_matrix(&mut rng, cfg.n, cfg.n)?;
            let y = sample::random_matrix(&mut rng, cfg.n, cfg.n)?;
            let report = bw::bw_check(&x, &y, cfg.tol)?;
            Ok((
                report,
                keep(json!({ "x": x.to_nested(), "y": y.to_nested() })),
            ))
        }
        OracleKind::BwTrivial => {
            let x = sample::random_trivial_bw_source(&mut rng, cfg.n)?;
            let y = sample::random_unit_matrix(&mut rng, cfg.n)?;
            let report = bw::bw_trivial_case_check(&x, &y, cfg.tol)?;
            Ok((
                report,
                keep(json!({ "x": x.to_nested(), "y": y.to_nested() })),
            ))
        }
        OracleKind::Arrowhead => {
            let arrow = sample::random_arrowhead(&mut rng, cfg.n - 1)?;
            let spectral = arrow.spectral_bound();
            // Probe the determinant identity one unit above the bound: every
            // pole is a diagonal entry, and those never exceed the bound.
            let det = arrow.det_identity_check(arrow.bound() + 1.0)?;
            let mut report = InequalityReport::new(spectral.bound, spectral.lambda_max, cfg.tol);
            report.pass = report.pass && det.agree;
            Ok((report, keep(json!({ "weights": arrow.weights() }))))
        }
    }
}

fn digest_of(value: &serde_json::Value) -> String {
    let text = jsonio::to_string(value);
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let hash = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in hash {
        use std::fmt::Write;
        write!(hex, "{byte:02x}").expect("writing to a String does not fail");
    }
    hex
}

/// Run a fuzz campaign and return the aggregate summary.
pub fn fuzz_campaign(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    Ok(fuzz_campaign_with_records(cfg)?.0)
}

/// Run a fuzz campaign, returning the summary plus one record per trial.
///
/// Trials run in parallel but are aggregated in index order, so the summary
/// (including the argmax trial on ties: the lowest index wins) is
/// independent of the thread count.
pub fn fuzz_campaign_with_records(cfg: &FuzzConfig) -> Result<(FuzzSummary, Vec<TrialRecord>)> {
    cfg.validate()?;

    let reports: Vec<InequalityReport> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, trial, false).map(|(report, _)| report))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(cfg.trials);
    let mut passes = 0usize;
    let mut argmax: Option<usize> = None;
    for (trial_index, report) in reports.iter().enumerate() {
        if report.pass {
            passes += 1;
        }
        if argmax.is_none_or(|best| report.ratio > reports[best].ratio) {
            argmax = Some(trial_index);
        }
        records.push(TrialRecord {
            trial_index,
            ratio: report.ratio,
            pass: report.pass,
        });
    }

    let argmax_digest = match argmax {
        // The trial streams are deterministic, so the worst input can be
        // regenerated after the fact instead of serialized during the run.
        Some(trial) => {
            let (_, value) = run_trial(cfg, trial, true)?;
            Some(digest_of(&value.expect("input was requested")))
        }
        None => None,
    };

    let summary = FuzzSummary {
        oracle: cfg.oracle.name().to_string(),
        trials: cfg.trials,
        n: cfg.n,
        m: cfg.m,
        seed: cfg.seed,
        dist: cfg.dist.name().to_string(),
        passes,
        failures: cfg.trials - passes,
        max_ratio: argmax.map_or(0.0, |best| reports[best].ratio),
        argmax_trial: argmax,
        argmax_digest,
    };
    Ok((summary, records))
}

//! The escalating Bell-measurement protocol and its cost accounting.
//!
//! Goal: apply the phase gate `U(alpha_N)` with `alpha_N = pi/2^N` between
//! two distant qubits, with certainty, while consuming far less than one
//! ebit. Step `k` teleports the working pair through the four-qubit
//! resource `|psi(2^(k-1) alpha_N)>`; both parties Bell-measure their
//! ancilla pairs and exchange one bit each. When the leading outcome bits
//! agree (probability 1/2) the step applies `U(+2^(k-1) alpha_N)`,
//! otherwise `U(-2^(k-1) alpha_N)`. A success at step `k` leaves exactly
//! the accumulated phase `alpha_N`; after `N` straight failures the
//! accumulated gate is `-U(alpha_N)`, the target up to a global phase — so
//! the ladder never needs more than `N` steps and never fails.
//!
//! Because the step-`k` resource carries only `h(cos^2(2^(k-1) alpha_N))`
//! ebits of entanglement and is reached with probability `2^-(k-1)`, the
//! expected cost is `alpha_N * f_N` with `f_N` bounded by the constant
//! [`f_infinity`]; classical communication stays below two bits per
//! direction. Every simulation entry point takes its randomness through
//! the [`OutcomeSource`] trait, so runs are scriptable in tests and
//! reproducible under a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::gates::phase_gate;
use crate::operator::Operator;
use crate::states::{binary_entropy, bell_state, resource_state, Pauli, PureState};
use crate::{Error, Result};

use std::sync::OnceLock;

/// The dyadic phase `alpha_n = pi / 2^n`.
pub fn dyadic_phase(n: usize) -> f64 {
    std::f64::consts::PI / f64::powi(2.0, n as i32)
}

/// One party's Bell-measurement outcome, each index in `{1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellOutcome {
    pub i1: u8,
    pub i2: u8,
}

impl BellOutcome {
    /// The correction Pauli `sigma_{i1 i2}` this outcome calls for.
    pub fn correction(&self) -> Result<Pauli> {
        Pauli::from_bell_index(self.i1, self.i2)
    }
}

/// Supplies Bell-measurement outcomes, one pair per protocol step.
pub trait OutcomeSource {
    /// Outcomes `(A-side, B-side)` for step `k` (1-based).
    fn next_outcome(&mut self, k: usize) -> Result<(BellOutcome, BellOutcome)>;
}

/// Uniformly random outcomes, the physical distribution: each of the 16
/// outcome pairs occurs with probability 1/16.
pub struct RandomOutcomes<R: Rng> {
    rng: R,
}

impl<R: Rng> RandomOutcomes<R> {
    pub fn new(rng: R) -> Self {
        Self { rng }
    }
}

impl RandomOutcomes<ChaCha12Rng> {
    /// Counter-based generator from a bare seed; the same seed always
    /// replays the same outcomes, on every platform.
    pub fn seeded(seed: u64) -> Self {
        Self::new(ChaCha12Rng::seed_from_u64(seed))
    }
}

impl<R: Rng> OutcomeSource for RandomOutcomes<R> {
    fn next_outcome(&mut self, _k: usize) -> Result<(BellOutcome, BellOutcome)> {
        let mut bit = || self.rng.gen_range(1..=2u8);
        Ok((
            BellOutcome { i1: bit(), i2: bit() },
            BellOutcome { i1: bit(), i2: bit() },
        ))
    }
}

/// Replays a fixed outcome script; useful for deterministic tests and for
/// walking specific branches of the protocol tree.
pub struct ScriptedOutcomes {
    script: Vec<(BellOutcome, BellOutcome)>,
    pos: usize,
}

impl ScriptedOutcomes {
    pub fn new(script: Vec<(BellOutcome, BellOutcome)>) -> Self {
        Self { script, pos: 0 }
    }

    /// Builds a script from coarse success flags, using representative
    /// outcomes: success is `(1,1)/(1,1)`, failure `(1,1)/(2,1)`.
    pub fn from_flags(flags: &[bool]) -> Self {
        let script = flags
            .iter()
            .map(|&ok| {
                let b = if ok {
                    BellOutcome { i1: 1, i2: 1 }
                } else {
                    BellOutcome { i1: 2, i2: 1 }
                };
                (BellOutcome { i1: 1, i2: 1 }, b)
            })
            .collect();
        Self::new(script)
    }
}

impl OutcomeSource for ScriptedOutcomes {
    fn next_outcome(&mut self, _k: usize) -> Result<(BellOutcome, BellOutcome)> {
        let out = self
            .script
            .get(self.pos)
            .copied()
            .ok_or(Error::ScriptExhausted {
                supplied: self.script.len(),
            })?;
        self.pos += 1;
        Ok(out)
    }
}

/// Everything that happened in one step of the ladder.
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    /// Step number, 1-based.
    pub k: usize,
    /// Phase of the resource state consumed: `2^(k-1) alpha_N`.
    pub resource_phase: f64,
    /// A-side Bell outcome.
    pub outcome_a: BellOutcome,
    /// B-side Bell outcome.
    pub outcome_b: BellOutcome,
    /// Whether the leading bits agreed (gate applied with `+` sign).
    pub success: bool,
    /// Correction applied on A's working qubit.
    pub correction_a: Pauli,
    /// Correction applied on B's working qubit.
    pub correction_b: Pauli,
    /// Entanglement of the consumed resource, in ebits.
    pub ebits_consumed: f64,
    /// Bits each party sends the other for this step (1 except at the
    /// final rung, where the gate is correct either way).
    pub classical_bits_per_direction: u32,
}

/// Full record of one protocol run.
#[derive(Clone, Debug, Serialize)]
pub struct ProtocolTrace {
    /// Ladder depth: the target gate is `U(pi/2^n)`.
    pub n: usize,
    /// Target phase `alpha_N = pi/2^n`.
    pub alpha: f64,
    /// Steps actually executed (empty for `n = 1`, where the gate is a
    /// product of local `sigma_x` rotations and needs no resource).
    pub steps: Vec<StepRecord>,
    /// Total entanglement consumed, in ebits.
    pub total_ebits: f64,
    /// Total classical bits sent in each direction.
    pub total_classical_bits_per_direction: u32,
    /// The accumulated unitary, `U(alpha_N)` up to a global sign.
    pub effective_unitary: Operator,
    /// `|tr(target^dag effective)| / 4`: 1 for a correct run.
    pub fidelity_with_target: f64,
}

/// Executes step `k` of the depth-`n` ladder on top of the accumulated
/// gate, drawing outcomes from `source`.
///
/// Returns the step record and the new accumulated gate.
pub fn simulate_step<S: OutcomeSource + ?Sized>(
    cumulative: &Operator,
    k: usize,
    n: usize,
    source: &mut S,
) -> Result<(StepRecord, Operator)> {
    if n < 2 || k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "step {k} outside ladder of depth {n}"
        )));
    }
    if cumulative.dim() != 4 {
        return Err(Error::DimensionMismatch {
            context: "accumulated two-qubit gate",
            expected: 4,
            actual: cumulative.dim(),
        });
    }
    let resource_phase = f64::powi(2.0, (k - 1) as i32) * dyadic_phase(n);
    let (outcome_a, outcome_b) = source.next_outcome(k)?;
    let correction_a = outcome_a.correction()?;
    let correction_b = outcome_b.correction()?;
    let success = outcome_a.i1 == outcome_b.i1;
    let sign = if success { 1.0 } else { -1.0 };
    let step_gate = phase_gate(sign * resource_phase);
    let new_cumulative = Operator::new(
        step_gate.matrix() * cumulative.matrix(),
        vec![2, 2],
    )?;
    let record = StepRecord {
        k,
        resource_phase,
        outcome_a,
        outcome_b,
        success,
        correction_a,
        correction_b,
        ebits_consumed: binary_entropy(resource_phase.cos().powi(2)),
        classical_bits_per_direction: if k < n { 1 } else { 0 },
    };
    Ok((record, new_cumulative))
}

/// Runs the full ladder for the target gate `U(pi/2^n)`, stopping at the
/// first success (or at step `n`, where the run is correct either way).
pub fn run_protocol<S: OutcomeSource + ?Sized>(n: usize, source: &mut S) -> Result<ProtocolTrace> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "ladder depth must be at least 1".into(),
        ));
    }
    let alpha = dyadic_phase(n);
    let target = phase_gate(alpha);
    let mut cumulative = Operator::identity(&[2, 2]);
    let mut steps = Vec::new();
    if n >= 2 {
        for k in 1..=n {
            let (record, next) = simulate_step(&cumulative, k, n, source)?;
            let done = record.success;
            steps.push(record);
            cumulative = next;
            if done {
                break;
            }
        }
    } else {
        // n = 1: U(pi/2) = -i sigma_x ⊗ sigma_x is a product of local
        // gates; nothing to measure, nothing to consume.
        cumulative = target.clone();
    }
    let total_ebits = steps.iter().map(|s| s.ebits_consumed).sum();
    let total_classical_bits_per_direction =
        steps.iter().map(|s| s.classical_bits_per_direction).sum();
    let fidelity_with_target =
        (target.dagger().matrix() * cumulative.matrix()).trace().norm() / 4.0;
    Ok(ProtocolTrace {
        n,
        alpha,
        steps,
        total_ebits,
        total_classical_bits_per_direction,
        effective_unitary: cumulative,
        fidelity_with_target,
    })
}

/// Expected resource usage of the depth-`n` ladder.
#[derive(Clone, Debug, Serialize)]
pub struct CostReport {
    /// Ladder depth.
    pub n: usize,
    /// Target phase `alpha_N = pi/2^n`.
    pub alpha: f64,
    /// Expected ebits consumed: `sum_k 2^-(k-1) E(psi(2^(k-1) alpha))`,
    /// which equals `alpha * f_n`.
    pub expected_ebits: f64,
    /// The partial-series constant `f_n`.
    pub f_n: f64,
    /// Expected classical bits per direction: `2 - (1/2)^(n-2)`.
    pub expected_classical_bits_per_direction: f64,
    /// Twice the per-direction count.
    pub expected_classical_bits_total: f64,
    /// Ebits a protocol saturating the per-ebit capability bound would
    /// need for the same gate: `beta * alpha`.
    pub capability: f64,
    /// `expected_ebits / capability = f_n / beta`.
    pub ratio: f64,
}

/// Computes the expected cost of the depth-`n` ladder two ways — direct
/// sum over steps and via the series constant `f_n` — and checks they
/// agree to `1e-12` before reporting.
pub fn expected_cost(n: usize) -> Result<CostReport> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "ladder depth must be at least 1".into(),
        ));
    }
    let alpha = dyadic_phase(n);
    let mut direct = 0.0;
    if n >= 2 {
        for k in 1..=n {
            let phase = f64::powi(2.0, (k - 1) as i32) * alpha;
            direct += f64::powi(0.5, (k - 1) as i32) * binary_entropy(phase.cos().powi(2));
        }
    }
    let f_n = f_series(n);
    let via_series = alpha * f_n;
    assert!(
        (direct - via_series).abs() <= 1e-12,
        "cost formulas disagree: {direct} vs {via_series}"
    );
    let expected_classical_bits_per_direction = if n >= 2 {
        2.0 - f64::powi(0.5, (n - 2) as i32)
    } else {
        0.0
    };
    let beta = capability_constant();
    let capability = beta * alpha;
    Ok(CostReport {
        n,
        alpha,
        expected_ebits: direct,
        f_n,
        expected_classical_bits_per_direction,
        expected_classical_bits_total: 2.0 * expected_classical_bits_per_direction,
        capability,
        ratio: direct / capability,
    })
}

/// The partial series `f_n = (1/pi) sum_{k=1}^{n} 2^k E(psi(pi/2^k))`.
pub fn f_series(n: usize) -> f64 {
    (1..=n)
        .map(|k| {
            let alpha_k = dyadic_phase(k);
            f64::powi(2.0, k as i32) * binary_entropy(alpha_k.cos().powi(2)) / std::f64::consts::PI
        })
        .sum()
}

/// The limit `f_infinity = lim f_n`, summed until the next term falls
/// below `tol`. Terms decay like `k 2^-k`, so about fifty suffice for
/// `tol = 1e-12`; the first term is zero, so convergence is only tested
/// from the fourth term on.
pub fn f_infinity(tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::OutOfDomain(format!(
            "series tolerance must be positive, got {tol}"
        )));
    }
    let mut sum = 0.0;
    for k in 1..=400 {
        let alpha_k = dyadic_phase(k);
        let term =
            f64::powi(2.0, k as i32) * binary_entropy(alpha_k.cos().powi(2)) / std::f64::consts::PI;
        sum += term;
        if k >= 4 && term < tol {
            break;
        }
    }
    Ok(sum)
}

/// [`f_infinity`] at tolerance `1e-12`, computed once per process.
pub fn f_infinity_cached() -> f64 {
    static F_INF: OnceLock<f64> = OnceLock::new();
    *F_INF.get_or_init(|| f_infinity(1e-12).expect("fixed positive tolerance"))
}

/// The per-ebit capability constant
///
/// ```text
/// beta = max_{x in (0,1)} 2 sqrt(x(1-x)) log2((1-x)/x) ,
/// ```
///
/// the largest rate (gate phase per ebit, in suitable units) any one-shot
/// resource state can support. Computed once by a grid scan refined with
/// ternary search; the maximizer sits near `x = 0.083`.
pub fn capability_constant() -> f64 {
    static BETA: OnceLock<f64> = OnceLock::new();
    *BETA.get_or_init(|| {
        let g = |x: f64| 2.0 * (x * (1.0 - x)).sqrt() * ((1.0 - x) / x).log2();
        let grid = 4096;
        let mut best_i: usize = 1;
        let mut best = f64::MIN;
        for i in 1..grid {
            let x = i as f64 / (2 * grid) as f64;
            let v = g(x);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let mut lo = (best_i.saturating_sub(1)).max(1) as f64 / (2 * grid) as f64;
        let mut hi = (best_i + 1).min(grid - 1) as f64 / (2 * grid) as f64;
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if g(m1) < g(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        g(0.5 * (lo + hi))
    })
}

/// `f_infinity / beta`: how far the ladder's asymptotic ebit rate sits
/// above the capability lower bound.
pub fn capability_ratio() -> f64 {
    f_infinity_cached() / capability_constant()
}

/// Aggregate statistics over many randomized runs.
#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloSummary {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Sample mean of ebits consumed per run.
    pub mean_ebits: f64,
    /// Standard error of `mean_ebits`.
    pub ebits_std_error: f64,
    /// Sample mean of classical bits per direction per run.
    pub mean_classical_bits_per_direction: f64,
    /// Standard error of the classical-bit mean.
    pub classical_bits_std_error: f64,
    /// Smallest run fidelity observed (should be 1 to numerical accuracy).
    pub min_fidelity: f64,
    /// `step_histogram[s]` counts runs that finished after `s` steps.
    pub step_histogram: Vec<u64>,
}

/// Runs the ladder `trials` times with independent randomness derived from
/// `seed` (stream `t` for trial `t`, so results do not depend on execution
/// order) and aggregates the outcome statistics.
pub fn monte_carlo(n: usize, trials: u64, seed: u64) -> Result<MonteCarloSummary> {
    if n < 1 || trials < 1 {
        return Err(Error::InvalidParameter(
            "monte carlo needs n >= 1 and at least one trial".into(),
        ));
    }
    let mut sum_e = 0.0;
    let mut sumsq_e = 0.0;
    let mut sum_c = 0.0;
    let mut sumsq_c = 0.0;
    let mut min_fidelity = f64::INFINITY;
    let mut step_histogram = vec![0u64; n + 1];
    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut source = RandomOutcomes::new(rng);
        let trace = run_protocol(n, &mut source)?;
        sum_e += trace.total_ebits;
        sumsq_e += trace.total_ebits * trace.total_ebits;
        let c = trace.total_classical_bits_per_direction as f64;
        sum_c += c;
        sumsq_c += c * c;
        min_fidelity = min_fidelity.min(trace.fidelity_with_target);
        step_histogram[trace.steps.len()] += 1;
    }
    let t = trials as f64;
    let std_error = |sum: f64, sumsq: f64| {
        if trials < 2 {
            return 0.0;
        }
        let mean = sum / t;
        let var = ((sumsq / t - mean * mean) * t / (t - 1.0)).max(0.0);
        (var / t).sqrt()
    };
    Ok(MonteCarloSummary {
        n,
        trials,
        seed,
        mean_ebits: sum_e / t,
        ebits_std_error: std_error(sum_e, sumsq_e),
        mean_classical_bits_per_direction: sum_c / t,
        classical_bits_std_error: std_error(sum_c, sumsq_c),
        min_fidelity,
        step_histogram,
    })
}

/// Result of one exact teleportation step on a concrete state.
#[derive(Clone, Debug)]
pub struct BellStepOutcome {
    /// The corrected post-measurement state of the working pair.
    pub state: PureState,
    /// Probability of this outcome pair (1/16 for every pair).
    pub probability: f64,
}

/// Executes one ladder step by full state-vector contraction: adjoin the
/// resource `|psi(resource_phase)>`, project both ancilla pairs onto the
/// Bell states named by the outcomes, and apply the corrections.
///
/// The returned state equals `U(±resource_phase)` applied to `input`, with
/// `+` exactly when the leading outcome bits agree — this is the identity
/// the fast path in [`simulate_step`] relies on.
pub fn bell_measurement_step(
    input: &PureState,
    resource_phase: f64,
    outcome_a: BellOutcome,
    outcome_b: BellOutcome,
) -> Result<BellStepOutcome> {
    if input.dims() != [2, 2] {
        return Err(Error::DimsMismatch {
            dims: input.dims().to_vec(),
            product: 4,
            actual: input.dim(),
        });
    }
    let sigma_a = outcome_a.correction()?;
    let sigma_b = outcome_b.correction()?;
    // Factor order: A1 A2 B1 B2 (resource) then A3 B3 (input).
    let joint = resource_state(resource_phase)?.tensor(input);
    let bell_a = bell_state(outcome_a.i1, outcome_a.i2)?;
    let bell_b = bell_state(outcome_b.i1, outcome_b.i2)?;
    // Project (A2, A3) and (B2, B3) in one pass; the combined bra lives on
    // factors [1, 4] and [3, 5] of the six-qubit state.
    let bra = bell_a.tensor(&bell_b);
    let projected = joint.project_onto(&bra, &[1, 4, 3, 5])?;
    let probability = projected.probability;
    let uncorrected = projected.into_state()?;
    let correction = sigma_a.operator().tensor(&sigma_b.operator());
    let state = uncorrected.apply_unitary(&correction)?;
    Ok(BellStepOutcome { state, probability })
}

/// One leaf of the exhaustive protocol tree.
#[derive(Clone, Copy, Debug)]
pub struct BranchLeaf {
    /// Probability of reaching this leaf: `(1/16)^steps`.
    pub probability: f64,
    /// Steps executed before the run ended.
    pub steps: usize,
    /// Overlap of the final state with `U(alpha_n) |input>`.
    pub fidelity: f64,
}

/// Walks every outcome branch of the depth-`n` ladder by exact
/// state-vector simulation, starting from `input` on the working pair.
///
/// Branch counts grow like `8^n`, so keep `n` small (3 gives 1096
/// leaves). Leaf probabilities sum to one and every leaf ends at the
/// target state up to global phase.
pub fn enumerate_branches(n: usize, input: &PureState) -> Result<Vec<BranchLeaf>> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "branch enumeration needs a ladder of depth at least 2".into(),
        ));
    }
    let target = input.apply_unitary(&phase_gate(dyadic_phase(n)))?;
    let mut leaves = Vec::new();
    walk(n, 1, 1.0, input, &target, &mut leaves)?;
    Ok(leaves)
}

fn walk(
    n: usize,
    k: usize,
    prob: f64,
    state: &PureState,
    target: &PureState,
    leaves: &mut Vec<BranchLeaf>,
) -> Result<()> {
    let phase = f64::powi(2.0, (k - 1) as i32) * dyadic_phase(n);
    for i1 in 1..=2u8 {
        for i2 in 1..=2u8 {
            for j1 in 1..=2u8 {
                for j2 in 1..=2u8 {
                    let outcome = bell_measurement_step(
                        state,
                        phase,
                        BellOutcome { i1, i2 },
                        BellOutcome { i1: j1, i2: j2 },
                    )?;
                    let p = prob * outcome.probability;
                    let success = i1 == j1;
                    if success || k == n {
                        leaves.push(BranchLeaf {
                            probability: p,
                            steps: k,
                            fidelity: outcome.state.overlap(target),
                        });
                    } else {
                        walk(n, k + 1, p, &outcome.state, target, leaves)?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{re, C64};
    use nalgebra::DVector;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn test_input() -> PureState {
        PureState::normalized(
            DVector::from_vec(vec![
                C64::new(0.31, -0.4),
                C64::new(0.12, 0.77),
                C64::new(-0.2, 0.05),
                C64::new(0.4, 0.1),
            ]),
            vec![2, 2],
        )
        .unwrap()
    }

    #[test]
    fn first_success_accumulates_exactly_the_target_phase() {
        let mut source = ScriptedOutcomes::from_flags(&[true]);
        let trace = run_protocol(3, &mut source).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert!(trace.steps[0].success);
        assert!(trace
            .effective_unitary
            .max_abs_diff(&phase_gate(dyadic_phase(3)))
            < 1e-13);
        assert!((trace.fidelity_with_target - 1.0).abs() < 1e-12);
        assert_eq!(trace.total_classical_bits_per_direction, 1);
    }

    #[test]
    fn full_failure_run_lands_on_minus_the_target() {
        let n = 3;
        let mut source = ScriptedOutcomes::from_flags(&[false, false, false]);
        let trace = run_protocol(n, &mut source).unwrap();
        assert_eq!(trace.steps.len(), n);
        let minus_target = phase_gate(dyadic_phase(n)).scale(re(-1.0));
        assert!(trace.effective_unitary.max_abs_diff(&minus_target) < 1e-12);
        assert!((trace.fidelity_with_target - 1.0).abs() < 1e-12);
        // Last step charges no classical bit.
        assert_eq!(trace.total_classical_bits_per_direction, (n - 1) as u32);
    }

    #[test]
    fn failure_then_success_doubles_the_stake() {
        // Fail at pi/8, succeed at pi/4: -pi/8 + pi/4 = +pi/8.
        let mut source = ScriptedOutcomes::from_flags(&[false, true]);
        let trace = run_protocol(3, &mut source).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert!((trace.steps[0].resource_phase - PI / 8.0).abs() < 1e-15);
        assert!((trace.steps[1].resource_phase - FRAC_PI_4).abs() < 1e-15);
        assert!(trace
            .effective_unitary
            .max_abs_diff(&phase_gate(PI / 8.0))
            < 1e-13);
    }

    #[test]
    fn depth_one_needs_no_resource() {
        let mut source = ScriptedOutcomes::new(vec![]);
        let trace = run_protocol(1, &mut source).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.total_ebits, 0.0);
        assert_eq!(trace.total_classical_bits_per_direction, 0);
        assert!((trace.fidelity_with_target - 1.0).abs() < 1e-12);
        assert!(trace
            .effective_unitary
            .max_abs_diff(&phase_gate(FRAC_PI_2))
            < 1e-13);
    }

    #[test]
    fn step_ledger_charges_resource_entropy() {
        let mut source = ScriptedOutcomes::from_flags(&[false, true]);
        let trace = run_protocol(2, &mut source).unwrap();
        // Step 1 consumes |psi(pi/4)>: one full ebit. Step 2 consumes
        // |psi(pi/2)>: a product state, zero ebits.
        assert!((trace.steps[0].ebits_consumed - 1.0).abs() < 1e-12);
        assert!(trace.steps[1].ebits_consumed.abs() < 1e-12);
        assert!((trace.total_ebits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simulate_step_validates_its_arguments() {
        let id = Operator::identity(&[2, 2]);
        let mut source = ScriptedOutcomes::from_flags(&[true]);
        assert!(simulate_step(&id, 0, 3, &mut source).is_err());
        assert!(simulate_step(&id, 4, 3, &mut source).is_err());
        let mut empty = ScriptedOutcomes::new(vec![]);
        assert!(matches!(
            simulate_step(&id, 1, 3, &mut empty),
            Err(Error::ScriptExhausted { .. })
        ));
        let mut bad = ScriptedOutcomes::new(vec![(
            BellOutcome { i1: 0, i2: 1 },
            BellOutcome { i1: 1, i2: 1 },
        )]);
        assert!(matches!(
            simulate_step(&id, 1, 3, &mut bad),
            Err(Error::BadBellIndex { .. })
        ));
    }

    #[test]
    fn expected_cost_of_depth_two_is_one_ebit() {
        let report = expected_cost(2).unwrap();
        assert!((report.expected_ebits - 1.0).abs() < 1e-12);
        assert!((report.expected_classical_bits_per_direction - 1.0).abs() < 1e-12);
        assert!((report.expected_classical_bits_total - 2.0).abs() < 1e-12);
        // f_2 = 4/pi: only the k = 2 term contributes.
        assert!((report.f_n - 4.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn expected_cost_of_depth_three_matches_the_direct_sum() {
        let report = expected_cost(3).unwrap();
        let direct = binary_entropy((PI / 8.0).cos().powi(2)) + 0.5;
        assert!((report.expected_ebits - direct).abs() < 1e-12);
        assert!((report.expected_ebits - 1.1009).abs() < 1e-4);
        assert!((report.expected_classical_bits_per_direction - 1.5).abs() < 1e-12);
    }

    #[test]
    fn expected_cost_shrinks_with_depth_while_f_grows() {
        // f_n grows strictly toward its limit. The ladder cost
        // alpha_n * f_n bumps up once between n = 2 and n = 3 (the
        // f-ratio 1.1009 beats the halving of alpha there) and falls
        // strictly from then on, vanishing like n / 2^n.
        let mut last_f = 0.0;
        for n in 2..=12 {
            let report = expected_cost(n).unwrap();
            assert!(report.f_n > last_f);
            assert!(report.f_n < f_infinity_cached());
            last_f = report.f_n;
        }
        let c2 = expected_cost(2).unwrap().expected_ebits;
        let c3 = expected_cost(3).unwrap().expected_ebits;
        assert!(c3 > c2);
        let mut last_cost = c3;
        for n in 4..=12 {
            let report = expected_cost(n).unwrap();
            assert!(report.expected_ebits < last_cost);
            // The cost of the whole ladder stays below alpha * f_infinity.
            assert!(report.expected_ebits < report.alpha * f_infinity_cached());
            last_cost = report.expected_ebits;
        }
        assert!(last_cost < 0.02);
    }

    #[test]
    fn f_infinity_converges_to_the_known_constant() {
        let f = f_infinity(1e-12).unwrap();
        assert!((f - 5.97932).abs() < 1e-4, "f_infinity = {f}");
        // Tightening the tolerance does not move the value at 1e-10 scale.
        let f2 = f_infinity(1e-14).unwrap();
        assert!((f - f2).abs() < 1e-10);
        assert!(f_infinity(0.0).is_err());
    }

    #[test]
    fn capability_constant_and_ratio_match_known_values() {
        let beta = capability_constant();
        assert!((beta - 1.9123).abs() < 1e-3, "beta = {beta}");
        let ratio = capability_ratio();
        assert!((ratio - 3.1268).abs() < 1e-3, "ratio = {ratio}");
    }

    #[test]
    fn monte_carlo_is_reproducible_and_sane() {
        let a = monte_carlo(3, 400, 7).unwrap();
        let b = monte_carlo(3, 400, 7).unwrap();
        assert_eq!(a.mean_ebits.to_bits(), b.mean_ebits.to_bits());
        assert_eq!(a.step_histogram, b.step_histogram);
        let c = monte_carlo(3, 400, 8).unwrap();
        assert_ne!(a.mean_ebits.to_bits(), c.mean_ebits.to_bits());
        // Histogram counts all trials; no run exceeds n steps or misses.
        assert_eq!(a.step_histogram.iter().sum::<u64>(), 400);
        assert_eq!(a.step_histogram[0], 0);
        assert!(a.min_fidelity > 1.0 - 1e-9);
        // Expectation within five standard errors of the exact value.
        let expect = expected_cost(3).unwrap();
        assert!((a.mean_ebits - expect.expected_ebits).abs() < 5.0 * a.ebits_std_error);
    }

    #[test]
    fn bell_step_probabilities_are_uniform_and_corrections_exact() {
        let input = test_input();
        let phase = PI / 8.0;
        let mut total = 0.0;
        for i1 in 1..=2u8 {
            for i2 in 1..=2u8 {
                for j1 in 1..=2u8 {
                    for j2 in 1..=2u8 {
                        let out = bell_measurement_step(
                            &input,
                            phase,
                            BellOutcome { i1, i2 },
                            BellOutcome { i1: j1, i2: j2 },
                        )
                        .unwrap();
                        assert!(
                            (out.probability - 1.0 / 16.0).abs() < 1e-12,
                            "outcome ({i1}{i2},{j1}{j2})"
                        );
                        total += out.probability;
                        let sign = if i1 == j1 { 1.0 } else { -1.0 };
                        let expect = input.apply_unitary(&phase_gate(sign * phase)).unwrap();
                        let diff = (out.state.amplitudes() - expect.amplitudes()).norm();
                        assert!(diff < 1e-12, "outcome ({i1}{i2},{j1}{j2}): diff {diff}");
                    }
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branch_enumeration_is_exhaustive_and_faithful() {
        let input = test_input();
        let leaves = enumerate_branches(2, &input).unwrap();
        // 8 success leaves at step 1 plus 8 * 16 at step 2.
        assert_eq!(leaves.len(), 136);
        let total: f64 = leaves.iter().map(|l| l.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for leaf in &leaves {
            assert!(leaf.fidelity > 1.0 - 1e-12);
        }
        // Expected ebits from the tree equal the closed-form report.
        let ebits_of = |steps: usize| -> f64 {
            (1..=steps)
                .map(|k| {
                    let phase = f64::powi(2.0, (k - 1) as i32) * dyadic_phase(2);
                    binary_entropy(phase.cos().powi(2))
                })
                .sum()
        };
        let mean: f64 = leaves
            .iter()
            .map(|l| l.probability * ebits_of(l.steps))
            .sum();
        let report = expected_cost(2).unwrap();
        assert!((mean - report.expected_ebits).abs() < 1e-12);
    }

    #[test]
    fn trace_serializes_with_step_details() {
        let mut source = ScriptedOutcomes::from_flags(&[false, true]);
        let trace = run_protocol(3, &mut source).unwrap();
        let v = serde_json::to_value(&trace).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["steps"][0]["success"], false);
        assert_eq!(v["steps"][0]["correction_b"], "Y");
        assert_eq!(v["steps"][0]["classical_bits_per_direction"], 1);
        assert!(v["effective_unitary"]["matrix"].is_array());
    }
}

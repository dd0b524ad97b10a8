//! Bipartite channels, their Choi operators, and entangling-power
//! classification.
//!
//! A two-party operation on systems `A1 B1` is represented in Kraus form.
//! Feeding one half of a maximally entangled pair on each side through the
//! operation turns it into a four-party state on `A1 A2 B1 B2` — the Choi
//! operator — and every question about the operation becomes a question
//! about that state:
//!
//! * the operation can create entanglement between `A` and `B` iff the Choi
//!   state is entangled across the `A1A2 | B1B2` cut, which the partial
//!   transpose witnesses ([`ppt_check`]);
//! * the operation itself can be recovered from the state, either
//!   deterministically by a contraction formula ([`apply_via_choi`]) or
//!   probabilistically by projecting ancilla pairs onto `|Phi>`
//!   ([`project_implement`]).
//!
//! Choi operators are normalized to unit trace for trace-preserving
//! channels, so they really are states.

use serde::{Deserialize, Serialize};

use crate::operator::{re, Operator, C64, STRUCTURAL_TOL};
use crate::states::max_entangled;
use crate::{Error, Result};

/// Tolerance for channel-level decisions: Kraus completeness, Choi
/// positivity, and the partial-transpose threshold.
pub const CHANNEL_TOL: f64 = 1e-9;

/// Declared trace behavior of a channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceFlag {
    /// Kraus operators sum to the identity: `sum O^dag O = I`.
    #[serde(rename = "trace-preserving")]
    TracePreserving,
    /// `sum O^dag O <= I`; the channel describes a (possibly) unnormalized
    /// branch of a measurement.
    #[serde(rename = "trace-non-increasing")]
    TraceNonIncreasing,
    /// No completeness constraint at all.
    #[serde(rename = "unnormalized")]
    Unnormalized,
}

impl std::fmt::Display for TraceFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TraceFlag::TracePreserving => "trace-preserving",
            TraceFlag::TraceNonIncreasing => "trace-non-increasing",
            TraceFlag::Unnormalized => "unnormalized",
        })
    }
}

impl TraceFlag {
    fn name(self) -> &'static str {
        match self {
            TraceFlag::TracePreserving => "trace-preserving",
            TraceFlag::TraceNonIncreasing => "trace-non-increasing",
            TraceFlag::Unnormalized => "unnormalized",
        }
    }
}

/// A completely positive map on two `d`-level systems `A1 B1`, given by
/// Kraus operators acting on the joint `d^2`-dimensional space.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kraus: Vec<Operator>,
    d: usize,
    trace_flag: TraceFlag,
    local_product_form: bool,
}

impl QuantumChannel {
    /// Builds a channel from Kraus operators on `A1 B1`, validating shapes
    /// and the completeness sum implied by `trace_flag`.
    pub fn new(kraus: Vec<Operator>, d: usize, trace_flag: TraceFlag) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::EmptyKraus);
        }
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "local dimension must be at least 2, got {d}"
            )));
        }
        for op in &kraus {
            if op.dim() != d * d {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator on the joint space",
                    expected: d * d,
                    actual: op.dim(),
                });
            }
        }
        let ch = Self {
            kraus: kraus
                .into_iter()
                .map(|op| {
                    // Re-shape to the canonical [d, d] factor split.
                    Operator::new(op.into_matrix(), vec![d, d]).expect("dims checked above")
                })
                .collect(),
            d,
            trace_flag,
            local_product_form: false,
        };
        ch.check_completeness()?;
        Ok(ch)
    }

    /// Builds a channel from pairs `(A_i, B_i)` of single-party operators,
    /// so the Kraus set is `A_i ⊗ B_i`. Channels of this shape act locally
    /// and therefore cannot create entanglement between `A` and `B`; the
    /// classification step remembers that.
    pub fn from_local_kraus(
        pairs: Vec<(Operator, Operator)>,
        d: usize,
        trace_flag: TraceFlag,
    ) -> Result<Self> {
        for (a, b) in &pairs {
            for (op, side) in [(a, "A"), (b, "B")] {
                if op.dim() != d {
                    return Err(Error::DimensionMismatch {
                        context: if side == "A" {
                            "local Kraus factor on A"
                        } else {
                            "local Kraus factor on B"
                        },
                        expected: d,
                        actual: op.dim(),
                    });
                }
            }
        }
        let kraus: Vec<Operator> = pairs.iter().map(|(a, b)| a.tensor(b)).collect();
        let mut ch = Self::new(kraus, d, trace_flag)?;
        ch.local_product_form = true;
        Ok(ch)
    }

    /// Wraps a single unitary as a (trace-preserving) channel.
    pub fn from_unitary(u: Operator, d: usize) -> Result<Self> {
        let dev = u.unitarity_deviation();
        if dev > STRUCTURAL_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Self::new(vec![u], d, TraceFlag::TracePreserving)
    }

    fn check_completeness(&self) -> Result<()> {
        let n = self.d * self.d;
        let mut sum = Operator::identity(&[self.d, self.d]).scale(re(0.0));
        for op in &self.kraus {
            let term = op.dagger().matrix() * op.matrix();
            sum = Operator::new(sum.into_matrix() + term, vec![self.d, self.d])?;
        }
        match self.trace_flag {
            TraceFlag::TracePreserving => {
                let dev = sum.max_abs_diff(&Operator::identity(&[self.d, self.d]));
                if dev > CHANNEL_TOL {
                    return Err(Error::KrausCompleteness {
                        flag: self.trace_flag.name(),
                        deviation: dev,
                    });
                }
            }
            TraceFlag::TraceNonIncreasing => {
                let shifted = Operator::new(
                    sum.into_matrix() - Operator::identity(&[self.d, self.d]).into_matrix(),
                    vec![self.d, self.d],
                )?;
                let max_eig = shifted.hermitian_eig()?.eigenvalues[0];
                if max_eig > CHANNEL_TOL {
                    return Err(Error::KrausCompleteness {
                        flag: self.trace_flag.name(),
                        deviation: max_eig,
                    });
                }
                let _ = n;
            }
            TraceFlag::Unnormalized => {}
        }
        Ok(())
    }

    /// Kraus operators, each on factors `[d, d]`.
    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    /// Local dimension of each party.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Declared trace behavior.
    pub fn trace_flag(&self) -> TraceFlag {
        self.trace_flag
    }

    /// Whether the channel was constructed from local-product Kraus pairs.
    pub fn is_local_product_form(&self) -> bool {
        self.local_product_form
    }

    /// Applies the channel to a density operator on `A1 B1`:
    /// `rho -> sum_k O_k rho O_k^dag`.
    pub fn apply(&self, rho: &Operator) -> Result<Operator> {
        if rho.dim() != self.d * self.d {
            return Err(Error::DimensionMismatch {
                context: "channel input",
                expected: self.d * self.d,
                actual: rho.dim(),
            });
        }
        let n = self.d * self.d;
        let mut out = nalgebra::DMatrix::<C64>::zeros(n, n);
        for op in &self.kraus {
            out += op.matrix() * rho.matrix() * op.dagger().matrix();
        }
        Operator::new(out, vec![self.d, self.d])
    }

    /// The Choi operator: the channel applied to halves `A1 B1` of two
    /// maximally entangled pairs `P_{A1A2} ⊗ P_{B1B2}`.
    pub fn choi(&self) -> Result<ChoiOperator> {
        let p = max_entangled(self.d)?.projector();
        let doubled = p.tensor(&p);
        let full_dims = [self.d; 4];
        let n = self.d.pow(4);
        let mut out = nalgebra::DMatrix::<C64>::zeros(n, n);
        for op in &self.kraus {
            let lifted = op.embed(&full_dims, &[0, 2])?;
            out += lifted.matrix() * doubled.matrix() * lifted.dagger().matrix();
        }
        ChoiOperator::new(Operator::new(out, full_dims.to_vec())?, self.d)
    }

    /// Classifies the channel's entangling power via its Choi operator,
    /// keeping the constructive knowledge that a local-product channel is
    /// separable.
    pub fn classify(&self) -> Result<EntanglingVerdict> {
        let choi = self.choi()?;
        let mut verdict = classify(&choi)?;
        if self.local_product_form
            && verdict.classification == Classification::PptUndecided
        {
            verdict.classification = Classification::SeparableByConstruction;
        }
        Ok(verdict)
    }
}

/// The Choi operator of a bipartite channel: a positive semidefinite
/// operator on the four factors `A1 A2 B1 B2`, each of dimension `d`.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct ChoiOperator {
    op: Operator,
    #[serde(skip)]
    d: usize,
}

impl ChoiOperator {
    /// Validates and wraps an operator as a Choi operator: four equal
    /// factors, Hermitian, and positive semidefinite within
    /// [`CHANNEL_TOL`].
    pub fn new(op: Operator, d: usize) -> Result<Self> {
        if op.dims() != [d, d, d, d] {
            return Err(Error::DimsMismatch {
                dims: op.dims().to_vec(),
                product: d.pow(4),
                actual: op.dim(),
            });
        }
        let dev = op.hermiticity_deviation();
        if dev > STRUCTURAL_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let min = op.hermitian_eig()?.min_eigenvalue();
        if min < -CHANNEL_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self { op, d })
    }

    /// The underlying operator on `A1 A2 B1 B2`.
    pub fn operator(&self) -> &Operator {
        &self.op
    }

    /// Local dimension of each of the four factors.
    pub fn d(&self) -> usize {
        self.d
    }
}

/// Applies a channel *through* its Choi operator: for input `rho` on
/// `A1 B1`,
///
/// ```text
/// E(rho) = d^2 tr_{A2 B2} [ E (1_{A1 B1} ⊗ rho^T_{A2 B2}) ]
/// ```
///
/// which agrees with the Kraus form exactly.
pub fn apply_via_choi(choi: &ChoiOperator, rho: &Operator) -> Result<Operator> {
    let d = choi.d;
    if rho.dim() != d * d {
        return Err(Error::DimensionMismatch {
            context: "channel input",
            expected: d * d,
            actual: rho.dim(),
        });
    }
    let rho_t = Operator::new(rho.matrix().transpose(), vec![d, d])?;
    let lifted = rho_t.embed(&[d, d, d, d], &[1, 3])?;
    let product = Operator::new(
        choi.op.matrix() * lifted.matrix(),
        vec![d, d, d, d],
    )?;
    let reduced = product.partial_trace(&[0, 2])?;
    Ok(reduced.scale(re((d * d) as f64)))
}

/// Outcome of the probabilistic implementation in [`project_implement`].
#[derive(Clone, Debug)]
pub struct ProjectionOutcome {
    /// Normalized post-measurement state on `A1 B1`, or `None` when the
    /// success branch has (numerically) zero probability.
    pub state: Option<Operator>,
    /// Probability of the success branch.
    pub probability: f64,
}

/// Implements the channel probabilistically from its Choi state: adjoin the
/// input on a fresh pair `A3 B3`, project `(A2, A3)` and `(B2, B3)` onto the
/// maximally entangled state, and keep `A1 B1`.
///
/// The branch where both projections land on `|Phi>` needs no correction;
/// for a trace-preserving channel on qubits it occurs with probability
/// `1/d^4` and leaves exactly `E(rho)` (normalized) on `A1 B1`.
pub fn project_implement(choi: &ChoiOperator, rho_in: &Operator) -> Result<ProjectionOutcome> {
    let d = choi.d;
    if rho_in.dim() != d * d {
        return Err(Error::DimensionMismatch {
            context: "channel input",
            expected: d * d,
            actual: rho_in.dim(),
        });
    }
    let rho_in = Operator::new(rho_in.matrix().clone(), vec![d, d])?;
    // Factor order: A1 A2 B1 B2 A3 B3.
    let full_dims = [d; 6];
    let joint = choi.op.tensor(&rho_in);
    let p = max_entangled(d)?.projector();
    let proj = {
        let on_a = p.embed(&full_dims, &[1, 4])?;
        let on_b = p.embed(&full_dims, &[3, 5])?;
        Operator::new(on_a.matrix() * on_b.matrix(), full_dims.to_vec())?
    };
    let projected = Operator::new(
        proj.matrix() * joint.matrix() * proj.matrix(),
        full_dims.to_vec(),
    )?;
    let probability = projected.trace().re;
    if probability <= 1e-12 {
        return Ok(ProjectionOutcome {
            state: None,
            probability: probability.max(0.0),
        });
    }
    let state = projected
        .partial_trace(&[0, 2])?
        .scale(re(1.0 / probability));
    Ok(ProjectionOutcome {
        state: Some(state),
        probability,
    })
}

/// Result of a partial-transpose positivity test.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PptVerdict {
    /// Smallest eigenvalue of the partially transposed operator.
    pub min_eigenvalue: f64,
    /// `true` when that eigenvalue is at least `-`[`CHANNEL_TOL`].
    pub is_ppt: bool,
}

/// Partially transposes `op` on the listed factors and reports the smallest
/// eigenvalue of the result.
///
/// A negative eigenvalue proves entanglement across the corresponding cut.
/// The converse holds only in small dimensions (`2x2` and `2x3` cuts), so a
/// pass is *not* a proof of separability.
pub fn ppt_check(op: &Operator, left: &[usize]) -> Result<PptVerdict> {
    let pt = op.partial_transpose(left)?;
    let min_eigenvalue = pt.hermitian_eig()?.min_eigenvalue();
    Ok(PptVerdict {
        min_eigenvalue,
        is_ppt: min_eigenvalue >= -CHANNEL_TOL,
    })
}

/// Three-way classification of a bipartite operation's entangling power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// The Choi state is manifestly separable across `A1A2 | B1B2` (local
    /// construction or explicit product form), so the operation cannot
    /// entangle the parties.
    #[serde(rename = "separable-by-construction")]
    SeparableByConstruction,
    /// The partial transpose of the Choi state is negative: the operation
    /// can create entanglement.
    #[serde(rename = "npt-entangling")]
    NptEntangling,
    /// The partial transpose is positive but no separable form is known;
    /// the test is inconclusive in this regime.
    #[serde(rename = "ppt-undecided")]
    PptUndecided,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::SeparableByConstruction => "separable-by-construction",
            Classification::NptEntangling => "npt-entangling",
            Classification::PptUndecided => "ppt-undecided",
        })
    }
}

/// What [`classify`] reports about a Choi operator.
#[derive(Clone, Debug, Serialize)]
pub struct EntanglingVerdict {
    /// Smallest eigenvalue of the partial transpose across `A1A2 | B1B2`.
    pub ppt_min_eigenvalue: f64,
    /// Entangling / separable / undecided.
    pub classification: Classification,
    /// Kraus rank: the number of Choi eigenvalues above [`CHANNEL_TOL`].
    pub rank: usize,
    /// `true` when the Choi state corresponds to a single unitary (rank
    /// one and maximally mixed on `A2 B2`).
    pub is_unitary: bool,
}

/// Classifies a Choi operator by the partial-transpose criterion across the
/// `A1A2 | B1B2` cut, also reporting Kraus rank and unitarity.
pub fn classify(choi: &ChoiOperator) -> Result<EntanglingVerdict> {
    let d = choi.d;
    let ppt = ppt_check(&choi.op, &[0, 1])?;
    let eig = choi.op.hermitian_eig()?;
    let rank = eig.eigenvalues.iter().filter(|&&w| w > CHANNEL_TOL).count();
    let is_unitary = rank == 1 && {
        let env = choi.op.partial_trace(&[1, 3])?;
        let target = Operator::identity(&[d, d]).scale(re(1.0 / ((d * d) as f64)));
        env.max_abs_diff(&target) <= CHANNEL_TOL
    };
    let classification = if !ppt.is_ppt {
        Classification::NptEntangling
    } else if is_product_across_cut(&choi.op)? {
        Classification::SeparableByConstruction
    } else {
        Classification::PptUndecided
    };
    Ok(EntanglingVerdict {
        ppt_min_eigenvalue: ppt.min_eigenvalue,
        classification,
        rank,
        is_unitary,
    })
}

/// Detects an exact product form `E = X_{A1A2} ⊗ Y_{B1B2}`, the one
/// separable structure a raw operator shows on its own, with no record
/// of how it was built.
fn is_product_across_cut(op: &Operator) -> Result<bool> {
    let t = op.trace();
    if t.norm() < 1e-12 {
        // The zero operator (nothing else is PSD with zero trace) is
        // trivially product.
        return Ok(op.max_abs() < 1e-12);
    }
    let x = op.partial_trace(&[0, 1])?;
    let y = op.partial_trace(&[2, 3])?;
    let candidate = x.tensor(&y).scale(re(1.0) / t);
    Ok(op.max_abs_diff(&candidate) <= CHANNEL_TOL)
}

/// Raw JSON form of a channel: local dimension, trace flag, and row-major
/// Kraus matrices (each of size `d^2 x d^2`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelWire {
    pub d: usize,
    pub trace_flag: TraceFlag,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelWire {
    /// Validates the wire data into a [`QuantumChannel`].
    pub fn into_channel(self) -> Result<QuantumChannel> {
        let n = self.d * self.d;
        let mut kraus = Vec::with_capacity(self.kraus.len());
        for rows in &self.kraus {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch {
                    context: "Kraus matrix rows",
                    expected: n,
                    actual: rows.len(),
                });
            }
            let entries: Vec<C64> = rows
                .iter()
                .flatten()
                .map(|&[x, y]| C64::new(x, y))
                .collect();
            kraus.push(Operator::from_row_slice(&entries, vec![self.d, self.d])?);
        }
        QuantumChannel::new(kraus, self.d, self.trace_flag)
    }

    /// Wire form of an existing channel.
    pub fn from_channel(ch: &QuantumChannel) -> Self {
        let kraus = ch
            .kraus()
            .iter()
            .map(|op| {
                (0..op.dim())
                    .map(|r| {
                        (0..op.dim())
                            .map(|c| {
                                let z = op.matrix()[(r, c)];
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            d: ch.d(),
            trace_flag: ch.trace_flag(),
            kraus,
        }
    }
}

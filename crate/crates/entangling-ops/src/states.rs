//! Pure states, Bell structure, and entanglement measures.
//!
//! The two workhorses here are [`max_entangled`], which fixes the phase
//! convention `|Phi> = (1/sqrt(d)) sum_i |ii>` used everywhere else, and
//! [`resource_state`], the four-qubit family
//!
//! ```text
//! |psi(alpha)> = cos(alpha) |Phi+>|Phi+> - i sin(alpha) |Psi+>|Psi+>
//! ```
//!
//! on factors ordered `A1 A2 B1 B2`, whose entanglement across the
//! `A1A2 | B1B2` split is the binary entropy of `cos^2(alpha)`. Schmidt
//! decompositions are computed by diagonalizing the reduced density
//! operator, which keeps the heavy lifting in [`crate::operator`].

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::operator::{flatten, im, re, C64, DigitTable, Operator};
use crate::{Error, Result};

/// Squared Schmidt coefficients below this threshold are treated as zero
/// and dropped from the decomposition.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// A normalized state vector on an ordered list of subsystems.
#[derive(Clone, Debug)]
pub struct PureState {
    amps: DVector<C64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Wraps an amplitude vector, checking finiteness, the dims product,
    /// and unit norm (within `1e-10`).
    pub fn new(amps: DVector<C64>, dims: Vec<usize>) -> Result<Self> {
        let product: usize = dims.iter().product();
        if dims.is_empty() || product != amps.len() {
            return Err(Error::DimsMismatch {
                dims,
                product,
                actual: amps.len(),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { context: "state vector" });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::OutOfDomain(format!(
                "state vector norm is {norm}, expected 1"
            )));
        }
        Ok(Self { amps, dims })
    }

    /// Normalizes an arbitrary finite amplitude vector.
    ///
    /// # Errors
    ///
    /// Fails with [`Error::ZeroNorm`] when the vector's norm is below
    /// `1e-12`.
    pub fn normalized(amps: DVector<C64>, dims: Vec<usize>) -> Result<Self> {
        let norm = amps.norm();
        if norm < 1e-12 {
            return Err(Error::ZeroNorm);
        }
        Self::new(amps.map(|z| z / re(norm)), dims)
    }

    /// Amplitudes in the computational basis.
    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// Ordered subsystem dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product across different spaces");
        self.amps.dotc(&other.amps)
    }

    /// Overlap magnitude `|<self|other>|`, a phase-blind fidelity.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Tensor product, `self` first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            amps: self.amps.kronecker(&other.amps),
            dims,
        }
    }

    /// The projector `|self><self|` as an [`Operator`].
    pub fn projector(&self) -> Operator {
        let mat = &self.amps * self.amps.adjoint();
        Operator::new(mat, self.dims.clone()).expect("projector of a valid state")
    }

    /// Applies a unitary acting on the full space.
    ///
    /// # Errors
    ///
    /// Fails on a dimension mismatch or when `u` is not unitary (the result
    /// would leave the state manifold).
    pub fn apply_unitary(&self, u: &Operator) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "unitary acting on state",
                expected: self.dim(),
                actual: u.dim(),
            });
        }
        let dev = u.unitarity_deviation();
        if dev > crate::operator::STRUCTURAL_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self {
            amps: u.matrix() * &self.amps,
            dims: self.dims.clone(),
        })
    }

    /// Contracts `<bra|` against the listed subsystems, returning the
    /// unnormalized remainder on the complementary factors together with
    /// the outcome probability.
    ///
    /// `at[i]` names the factor of `self` matched with factor `i` of `bra`,
    /// so the list also fixes the pairing order. The remaining factors keep
    /// their original relative order.
    pub fn project_onto(&self, bra: &Self, at: &[usize]) -> Result<Projected> {
        let m = self.dims.len();
        if at.len() != bra.dims.len() || at.len() >= m {
            return Err(Error::BadSubsystems {
                subsystems: at.to_vec(),
                count: m,
            });
        }
        let mut seen = vec![false; m];
        for (i, &s) in at.iter().enumerate() {
            if s >= m || seen[s] {
                return Err(Error::BadSubsystems {
                    subsystems: at.to_vec(),
                    count: m,
                });
            }
            seen[s] = true;
            if self.dims[s] != bra.dims[i] {
                return Err(Error::DimensionMismatch {
                    context: "projection subsystem",
                    expected: bra.dims[i],
                    actual: self.dims[s],
                });
            }
        }
        let rest: Vec<usize> = (0..m).filter(|&s| !seen[s]).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&s| self.dims[s]).collect();
        let out_dim: usize = rest_dims.iter().product();
        let digits = DigitTable::new(&self.dims);
        let mut out = DVector::<C64>::zeros(out_dim);
        for idx in 0..self.dim() {
            let bra_idx = flatten(
                &at.iter().map(|&s| digits.digit(idx, s)).collect::<Vec<_>>(),
                &bra.dims,
            );
            let rest_idx = flatten(
                &rest.iter().map(|&s| digits.digit(idx, s)).collect::<Vec<_>>(),
                &rest_dims,
            );
            out[rest_idx] += bra.amps[bra_idx].conj() * self.amps[idx];
        }
        let probability = out.norm_squared();
        Ok(Projected {
            amplitudes: out,
            dims: rest_dims,
            probability,
        })
    }

    /// Schmidt decomposition across the bipartition whose left side is the
    /// listed factors (the right side is the complement, both in ascending
    /// order).
    pub fn schmidt(&self, left: &[usize]) -> Result<SchmidtForm> {
        let m = self.dims.len();
        let mut ls = left.to_vec();
        ls.sort_unstable();
        let in_range = ls.iter().all(|&s| s < m);
        let distinct = ls.windows(2).all(|w| w[0] != w[1]);
        if !in_range || !distinct {
            return Err(Error::BadSubsystems {
                subsystems: left.to_vec(),
                count: m,
            });
        }
        if ls.is_empty() || ls.len() == m {
            return Err(Error::EmptyCut);
        }
        let rs: Vec<usize> = (0..m).filter(|s| !ls.contains(s)).collect();
        let ldims: Vec<usize> = ls.iter().map(|&s| self.dims[s]).collect();
        let rdims: Vec<usize> = rs.iter().map(|&s| self.dims[s]).collect();
        let dl: usize = ldims.iter().product();
        let dr: usize = rdims.iter().product();
        // Amplitude matrix M[l, r] with the state as sum_{l,r} M[l,r] |l>|r>.
        let digits = DigitTable::new(&self.dims);
        let mut amp = DMatrix::<C64>::zeros(dl, dr);
        for idx in 0..self.dim() {
            let l = flatten(
                &ls.iter().map(|&s| digits.digit(idx, s)).collect::<Vec<_>>(),
                &ldims,
            );
            let r = flatten(
                &rs.iter().map(|&s| digits.digit(idx, s)).collect::<Vec<_>>(),
                &rdims,
            );
            amp[(l, r)] = self.amps[idx];
        }
        // Diagonalize the left reduced density operator M M^dagger; its
        // eigenvalues are the squared Schmidt coefficients.
        let rho_l = Operator::new(&amp * amp.adjoint(), ldims.clone())?;
        let eig = rho_l.hermitian_eig()?;
        let mut coefficients = Vec::new();
        let mut left_vectors = Vec::new();
        let mut right_vectors = Vec::new();
        for (i, &w) in eig.eigenvalues.iter().enumerate() {
            // The eigenvalue is the squared coefficient; cutting there
            // keeps diagonalization noise (~1e-16) out of the rank.
            if w < SCHMIDT_CUTOFF {
                continue;
            }
            let c = w.sqrt();
            let lv = eig.eigenvector(i);
            let rv = (amp.adjoint() * &lv).map(|z| (z / re(c)).conj());
            coefficients.push(c);
            left_vectors.push(lv);
            right_vectors.push(rv);
        }
        Ok(SchmidtForm {
            coefficients,
            left_vectors,
            right_vectors,
            left_subsystems: ls,
            right_subsystems: rs,
            left_dims: ldims,
            right_dims: rdims,
        })
    }

    /// Entropy of entanglement (base-2) across the given bipartition:
    /// the Shannon entropy of the squared Schmidt coefficients.
    pub fn entropy_of_entanglement(&self, left: &[usize]) -> Result<f64> {
        let schmidt = self.schmidt(left)?;
        let entropy: f64 = schmidt
            .coefficients
            .iter()
            .map(|&c| {
                let p = c * c;
                if p > 0.0 {
                    -p * p.log2()
                } else {
                    0.0
                }
            })
            .sum();
        // A single unit coefficient yields -1 * log2(1) = -0.0; clamp so
        // product states report exactly zero.
        Ok(entropy.max(0.0))
    }
}

/// Unnormalized result of conditioning on a measurement outcome.
#[derive(Clone, Debug)]
pub struct Projected {
    /// Remaining amplitudes, not normalized.
    pub amplitudes: DVector<C64>,
    /// Dims of the remaining factors.
    pub dims: Vec<usize>,
    /// Squared norm of `amplitudes`: the probability of the outcome.
    pub probability: f64,
}

impl Projected {
    /// Normalizes the remainder into a [`PureState`].
    ///
    /// # Errors
    ///
    /// Fails with [`Error::ZeroNorm`] when the outcome had (numerically)
    /// zero probability.
    pub fn into_state(self) -> Result<PureState> {
        PureState::normalized(self.amplitudes, self.dims)
    }
}

/// Schmidt form of a pure state across a fixed bipartition.
///
/// Coefficients are nonnegative, sorted descending, and sum-of-squares one;
/// the vector lists are orthonormal and aligned index-by-index with the
/// coefficients. Squared coefficients below [`SCHMIDT_CUTOFF`] are dropped.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<DVector<C64>>,
    pub right_vectors: Vec<DVector<C64>>,
    pub left_subsystems: Vec<usize>,
    pub right_subsystems: Vec<usize>,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
}

impl SchmidtForm {
    /// Number of retained Schmidt terms.
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuilds the state on the reordered space `left ⊗ right` (left
    /// factors first). Useful for verifying the decomposition.
    pub fn reconstruct(&self) -> PureState {
        let dl: usize = self.left_dims.iter().product();
        let dr: usize = self.right_dims.iter().product();
        let mut amps = DVector::<C64>::zeros(dl * dr);
        for ((c, lv), rv) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            for l in 0..dl {
                for r in 0..dr {
                    amps[l * dr + r] += re(*c) * lv[l] * rv[r];
                }
            }
        }
        let mut dims = self.left_dims.clone();
        dims.extend_from_slice(&self.right_dims);
        PureState::normalized(amps, dims).expect("schmidt reconstruction is normalized")
    }
}

/// The maximally entangled state `(1/sqrt(d)) sum_i |ii>` on two `d`-level
/// systems.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "maximally entangled state needs local dimension >= 2, got {d}"
        )));
    }
    let mut amps = DVector::<C64>::zeros(d * d);
    let c = re(1.0 / (d as f64).sqrt());
    for i in 0..d {
        amps[i * d + i] = c;
    }
    PureState::new(amps, vec![d, d])
}

/// One-qubit Pauli operators addressed by the Bell-basis double index
/// `(i1, i2)`, each in `{1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// The Pauli addressed by `(i1, i2)`: `(1,1) -> I`, `(1,2) -> X`,
    /// `(2,1) -> Y`, `(2,2) -> Z`.
    pub fn from_bell_index(i1: u8, i2: u8) -> Result<Self> {
        match (i1, i2) {
            (1, 1) => Ok(Pauli::I),
            (1, 2) => Ok(Pauli::X),
            (2, 1) => Ok(Pauli::Y),
            (2, 2) => Ok(Pauli::Z),
            _ => Err(Error::BadBellIndex { i1, i2 }),
        }
    }

    /// The 2x2 matrix.
    pub fn operator(self) -> Operator {
        match self {
            Pauli::I => crate::operator::id2(),
            Pauli::X => crate::operator::sigma_x(),
            Pauli::Y => crate::operator::sigma_y(),
            Pauli::Z => crate::operator::sigma_z(),
        }
    }
}

/// The Bell state `(1 ⊗ sigma_{i1 i2}) |Phi>` with indices in `{1, 2}`.
///
/// The four states are orthonormal; `bell_state(1, 1)` is `|Phi>` itself.
pub fn bell_state(i1: u8, i2: u8) -> Result<PureState> {
    let sigma = Pauli::from_bell_index(i1, i2)?.operator();
    let phi = max_entangled(2)?;
    let op = crate::operator::id2().tensor(&sigma);
    phi.apply_unitary(&op)
}

/// The four-qubit resource state
/// `cos(alpha)|Phi+>|Phi+> - i sin(alpha)|Psi+>|Psi+>` on factors
/// `A1 A2 B1 B2`, where `|Phi+>` lives on `A1 B1` and the pairing is
/// `(A1 B1) ⊗ (A2 B2)` reordered into the canonical factor order.
pub fn resource_state(alpha: f64) -> Result<PureState> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite { context: "resource phase" });
    }
    // |Phi+> = (|00> + |11>)/sqrt(2), |Psi+> = (|01> + |10>)/sqrt(2).
    // The pairs (A1, A2) and (B1, B2) each sit on one side of the A|B
    // cut, and the two-qubit phase acts on (A1, B1) across it; the
    // amplitudes are assembled directly in A1 A2 B1 B2 order. Both
    // branches are products of local Bell pairs, so the Schmidt
    // coefficients across A|B are exactly (cos a, sin a).
    let c = re(alpha.cos() * 0.5);
    let s = im(-alpha.sin() * 0.5);
    let mut amps = DVector::<C64>::zeros(16);
    let idx = |a1: usize, a2: usize, b1: usize, b2: usize| ((a1 * 2 + a2) * 2 + b1) * 2 + b2;
    for a in 0..2 {
        for b in 0..2 {
            // cos branch: |a a>_{A1 A2} |b b>_{B1 B2};
            // sin branch flips the first qubit of each pair.
            amps[idx(a, a, b, b)] += c;
            amps[idx(1 - a, a, 1 - b, b)] += s;
        }
    }
    PureState::new(amps, vec![2, 2, 2, 2])
}

/// Binary entropy `h(x) = -x log2(x) - (1-x) log2(1-x)` with the usual
/// convention `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "binary entropy needs x in [0, 1]");
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

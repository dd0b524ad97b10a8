//! Two-qubit gates and Hamiltonian structure.
//!
//! The central family is the phase gate
//!
//! ```text
//! U(alpha) = exp(-i alpha sigma_x ⊗ sigma_x)
//!          = cos(alpha) 1 - i sin(alpha) sigma_x ⊗ sigma_x ,
//! ```
//!
//! the natural "unit" of two-qubit interaction: any two-qubit Hamiltonian
//! reduces to at most three commuting gates of this form, one per canonical
//! axis, after local basis changes. [`pauli_decompose`] splits a
//! Hamiltonian into local fields and a 3x3 interaction matrix `gamma`;
//! [`canonicalize`] rotates `gamma` to diagonal form with proper rotations
//! and lifts them to SU(2); [`commuting_factorization`] then turns the
//! diagonal into three commuting factors. [`binary_phase_approx`] expands
//! an arbitrary phase into dyadic ones (`pi/2^N`), the phases a
//! measurement-based implementation can realize deterministically, and
//! [`gate_cost`] prices a Hamiltonian in ebits per unit time.

use nalgebra::{Matrix3, Vector3};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::operator::{id2, im, re, sigma_x, sigma_y, sigma_z, Operator, STRUCTURAL_TOL};
use crate::{Error, Result};

/// The two-qubit phase gate `U(alpha) = exp(-i alpha sigma_x ⊗ sigma_x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseGate {
    /// Phase in radians.
    pub alpha: f64,
}

impl PhaseGate {
    /// The 4x4 unitary, assembled in closed form.
    pub fn operator(&self) -> Operator {
        let xx = sigma_x().tensor(&sigma_x());
        let id = Operator::identity(&[2, 2]);
        Operator::new(
            id.matrix().map(|z| z * re(self.alpha.cos()))
                + xx.matrix().map(|z| z * im(-self.alpha.sin())),
            vec![2, 2],
        )
        .expect("closed-form phase gate is well-formed")
    }
}

/// Convenience constructor for [`PhaseGate`]'s unitary.
pub fn phase_gate(alpha: f64) -> Operator {
    PhaseGate { alpha }.operator()
}

/// A two-qubit Hermitian operator split along the Pauli basis:
///
/// ```text
/// H = c0·1 + a·(sigma ⊗ 1) + b·(1 ⊗ sigma) + sum_jk gamma_jk sigma_j ⊗ sigma_k
/// ```
#[derive(Clone, Debug)]
pub struct PauliDecomposition {
    /// Coefficient of the identity.
    pub identity_coefficient: f64,
    /// Local field on the first qubit.
    pub local_a: Vector3<f64>,
    /// Local field on the second qubit.
    pub local_b: Vector3<f64>,
    /// Interaction matrix (rows index the first qubit's Pauli, columns the
    /// second's).
    pub gamma: Matrix3<f64>,
}

impl PauliDecomposition {
    /// Reassembles the Hamiltonian from its coefficients.
    pub fn reconstruct(&self) -> Operator {
        let paulis = [sigma_x(), sigma_y(), sigma_z()];
        let mut m = Operator::identity(&[2, 2])
            .scale(re(self.identity_coefficient))
            .into_matrix();
        for (j, p) in paulis.iter().enumerate() {
            m += p.tensor(&id2()).matrix().map(|z| z * re(self.local_a[j]));
            m += id2().tensor(p).matrix().map(|z| z * re(self.local_b[j]));
        }
        for (j, pj) in paulis.iter().enumerate() {
            for (k, pk) in paulis.iter().enumerate() {
                m += pj.tensor(pk).matrix().map(|z| z * re(self.gamma[(j, k)]));
            }
        }
        Operator::new(m, vec![2, 2]).expect("reconstruction is well-formed")
    }

    /// Just the interaction term `sum_jk gamma_jk sigma_j ⊗ sigma_k`.
    pub fn two_body_part(&self) -> Operator {
        let paulis = [sigma_x(), sigma_y(), sigma_z()];
        let mut m = Operator::identity(&[2, 2]).scale(re(0.0)).into_matrix();
        for (j, pj) in paulis.iter().enumerate() {
            for (k, pk) in paulis.iter().enumerate() {
                m += pj.tensor(pk).matrix().map(|z| z * re(self.gamma[(j, k)]));
            }
        }
        Operator::new(m, vec![2, 2]).expect("interaction part is well-formed")
    }
}

impl Serialize for PauliDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PauliDecomposition", 4)?;
        s.serialize_field("identity_coefficient", &self.identity_coefficient)?;
        s.serialize_field("local_a", &[self.local_a[0], self.local_a[1], self.local_a[2]])?;
        s.serialize_field("local_b", &[self.local_b[0], self.local_b[1], self.local_b[2]])?;
        s.serialize_field("gamma", &matrix_rows(&self.gamma))?;
        s.end()
    }
}

/// Splits a two-qubit Hermitian operator along the Pauli product basis.
///
/// # Errors
///
/// Fails when `h` is not 4-dimensional or not Hermitian.
pub fn pauli_decompose(h: &Operator) -> Result<PauliDecomposition> {
    if h.dim() != 4 {
        return Err(Error::DimensionMismatch {
            context: "two-qubit Hamiltonian",
            expected: 4,
            actual: h.dim(),
        });
    }
    let dev = h.hermiticity_deviation();
    if dev > STRUCTURAL_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let coeff = |basis: &Operator| -> f64 {
        (basis.matrix() * h.matrix()).trace().re / 4.0
    };
    let identity_coefficient = h.trace().re / 4.0;
    let mut local_a = Vector3::zeros();
    let mut local_b = Vector3::zeros();
    let mut gamma = Matrix3::zeros();
    for (j, p) in paulis.iter().enumerate() {
        local_a[j] = coeff(&p.tensor(&id2()));
        local_b[j] = coeff(&id2().tensor(p));
        for (k, q) in paulis.iter().enumerate() {
            gamma[(j, k)] = coeff(&p.tensor(q));
        }
    }
    Ok(PauliDecomposition {
        identity_coefficient,
        local_a,
        local_b,
        gamma,
    })
}

/// Canonical (Cartan) form of a two-qubit interaction.
///
/// `rot_a` and `rot_b` are the proper rotations that diagonalize the
/// interaction matrix, `rot_a · gamma · rot_b^T = diag(mu)`, so `gamma`
/// is recovered as `rot_a^T · diag(mu) · rot_b`. The canonical
/// coefficients satisfy `mu[0] >= mu[1] >= |mu[2]|` with `mu[0], mu[1] >=
/// 0`; the sign of `mu[2]` equals the sign of `det(gamma)`, which no
/// proper rotation can change. `su2_a` and `su2_b` lift the rotations to
/// SU(2), so conjugating the interaction term by `su2_a ⊗ su2_b` lands
/// exactly on `sum_k mu_k sigma_k ⊗ sigma_k`.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// Canonical interaction coefficients.
    pub mu: [f64; 3],
    /// Proper rotation applied on the first qubit's Pauli indices.
    pub rot_a: Matrix3<f64>,
    /// Proper rotation applied on the second qubit's Pauli indices.
    pub rot_b: Matrix3<f64>,
    /// SU(2) lift of `rot_a`.
    pub su2_a: Operator,
    /// SU(2) lift of `rot_b`.
    pub su2_b: Operator,
}

impl CanonicalForm {
    /// The canonical interaction `sum_k mu_k sigma_k ⊗ sigma_k`.
    pub fn canonical_interaction(&self) -> Operator {
        let paulis = [sigma_x(), sigma_y(), sigma_z()];
        let mut m = Operator::identity(&[2, 2]).scale(re(0.0)).into_matrix();
        for (k, p) in paulis.iter().enumerate() {
            m += p.tensor(p).matrix().map(|z| z * re(self.mu[k]));
        }
        Operator::new(m, vec![2, 2]).expect("canonical interaction is well-formed")
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CanonicalForm", 5)?;
        s.serialize_field("mu", &self.mu)?;
        s.serialize_field("rot_a", &matrix_rows(&self.rot_a))?;
        s.serialize_field("rot_b", &matrix_rows(&self.rot_b))?;
        s.serialize_field("su2_a", &self.su2_a)?;
        s.serialize_field("su2_b", &self.su2_b)?;
        s.end()
    }
}

fn matrix_rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    let mut rows = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            rows[r][c] = m[(r, c)];
        }
    }
    rows
}

/// Brings the interaction part of a two-qubit Hamiltonian to canonical
/// diagonal form via the singular value decomposition of `gamma`, patched
/// to proper rotations.
pub fn canonicalize(h: &Operator) -> Result<CanonicalForm> {
    let dec = pauli_decompose(h)?;
    let svd = dec.gamma.svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let mut rot_a = u.transpose();
    let mut rot_b = v_t;
    let mut mu = [
        svd.singular_values[0],
        svd.singular_values[1],
        svd.singular_values[2],
    ];
    // The SVD factors are orthogonal but not necessarily proper. Flipping
    // the third row of a factor negates its determinant at the cost of
    // negating the third diagonal entry; doing it to both leaves the
    // diagonal alone. When det(gamma) < 0 exactly one factor is improper
    // and the sign sticks to mu[2].
    let improper_a = rot_a.determinant() < 0.0;
    let improper_b = rot_b.determinant() < 0.0;
    if improper_a {
        for c in 0..3 {
            rot_a[(2, c)] = -rot_a[(2, c)];
        }
    }
    if improper_b {
        for c in 0..3 {
            rot_b[(2, c)] = -rot_b[(2, c)];
        }
    }
    if improper_a != improper_b {
        mu[2] = -mu[2];
    }
    let su2_a = su2_from_rotation(&rot_a)?;
    let su2_b = su2_from_rotation(&rot_b)?;
    Ok(CanonicalForm {
        mu,
        rot_a,
        rot_b,
        su2_a,
        su2_b,
    })
}

/// Lifts a proper rotation `R` to SU(2): the returned `u` satisfies
/// `u sigma_k u^dag = sum_j R_jk sigma_j`. (The other lift is `-u`.)
///
/// # Errors
///
/// Fails when `R` is not orthogonal with determinant `+1` (within `1e-8`).
pub fn su2_from_rotation(r: &Matrix3<f64>) -> Result<Operator> {
    let ortho_dev = (r.transpose() * r - Matrix3::identity()).abs().max();
    if ortho_dev > 1e-8 || (r.determinant() - 1.0).abs() > 1e-8 {
        return Err(Error::OutOfDomain(
            "su2 lift needs a proper rotation matrix".into(),
        ));
    }
    // Quaternion extraction, branching on the largest diagonal sum so no
    // branch divides by a small number.
    let t = r.trace();
    let (w, x, y, z);
    if t > 0.0 {
        let s = (t + 1.0).sqrt() * 2.0;
        w = 0.25 * s;
        x = (r[(2, 1)] - r[(1, 2)]) / s;
        y = (r[(0, 2)] - r[(2, 0)]) / s;
        z = (r[(1, 0)] - r[(0, 1)]) / s;
    } else if r[(0, 0)] > r[(1, 1)] && r[(0, 0)] > r[(2, 2)] {
        let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt() * 2.0;
        w = (r[(2, 1)] - r[(1, 2)]) / s;
        x = 0.25 * s;
        y = (r[(0, 1)] + r[(1, 0)]) / s;
        z = (r[(0, 2)] + r[(2, 0)]) / s;
    } else if r[(1, 1)] > r[(2, 2)] {
        let s = (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt() * 2.0;
        w = (r[(0, 2)] - r[(2, 0)]) / s;
        x = (r[(0, 1)] + r[(1, 0)]) / s;
        y = 0.25 * s;
        z = (r[(1, 2)] + r[(2, 1)]) / s;
    } else {
        let s = (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt() * 2.0;
        w = (r[(1, 0)] - r[(0, 1)]) / s;
        x = (r[(0, 2)] + r[(2, 0)]) / s;
        y = (r[(1, 2)] + r[(2, 1)]) / s;
        z = 0.25 * s;
    }
    // u = w·1 - i (x sigma_x + y sigma_y + z sigma_z).
    let mut m = Operator::identity(&[2]).scale(re(w)).into_matrix();
    m += sigma_x().matrix().map(|v| v * im(-x));
    m += sigma_y().matrix().map(|v| v * im(-y));
    m += sigma_z().matrix().map(|v| v * im(-z));
    Operator::new(m, vec![2])
}

/// The three commuting factors `exp(-i mu_k t sigma_k ⊗ sigma_k)` of a
/// canonical interaction evolved for time `t`, in axis order x, y, z.
///
/// Each factor is assembled in closed form; since all three commute, their
/// product in any order equals `exp(-i t sum_k mu_k sigma_k ⊗ sigma_k)`.
pub fn commuting_factorization(mu: [f64; 3], t: f64) -> Result<[Operator; 3]> {
    if mu.iter().any(|m| !m.is_finite()) || !t.is_finite() {
        return Err(Error::NonFinite { context: "canonical coefficients or time" });
    }
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    let factors: Vec<Operator> = paulis
        .iter()
        .zip(mu)
        .map(|(p, m)| {
            let phi = m * t;
            let pp = p.tensor(p);
            Operator::new(
                Operator::identity(&[2, 2]).matrix().map(|z| z * re(phi.cos()))
                    + pp.matrix().map(|z| z * im(-phi.sin())),
                vec![2, 2],
            )
            .expect("closed-form factor is well-formed")
        })
        .collect();
    Ok(factors.try_into().expect("three factors"))
}

/// A dyadic expansion of a phase: `alpha ≈ sum_i pi / 2^(exponents[i])`.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseApproximation {
    /// The dyadic phases `pi / 2^N_i`, largest first.
    pub phases: Vec<f64>,
    /// The exponents `N_i >= 2`, smallest first.
    pub exponents: Vec<u32>,
    /// What is left of `alpha` after subtracting all phases.
    pub residual: f64,
    /// Upper bound on the entanglement cost of running one deterministic
    /// phase-gate protocol per term: `f_infinity · sum_i phases[i]`.
    pub cost_bound: f64,
}

/// Greedily expands `alpha` into dyadic phases `pi/2^N` with `N >= 2`,
/// stopping once the remainder is at most `eps`.
///
/// Exponents may repeat only at the first step (`alpha = pi/2` opens with
/// `pi/4 + pi/4`); afterwards each term is strictly smaller than the
/// remainder it was subtracted from, so the expansion has at most a few
/// dozen terms before hitting the resolution of `f64`.
///
/// # Errors
///
/// Fails unless `0 < alpha <= pi/2` and `eps > 0`.
pub fn binary_phase_approx(alpha: f64, eps: f64) -> Result<PhaseApproximation> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > std::f64::consts::FRAC_PI_2 {
        return Err(Error::OutOfDomain(format!(
            "phase must lie in (0, pi/2], got {alpha}"
        )));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::OutOfDomain(format!(
            "tolerance must be positive, got {eps}"
        )));
    }
    let mut remaining = alpha;
    let mut phases = Vec::new();
    let mut exponents = Vec::new();
    while remaining > eps {
        // Largest dyadic phase pi/2^n (n >= 2) that fits.
        let mut n: u32 = 2;
        while std::f64::consts::PI / f64::powi(2.0, n as i32) > remaining {
            n += 1;
            if n > 1070 {
                break;
            }
        }
        let phase = std::f64::consts::PI / f64::powi(2.0, n as i32);
        if phase <= 0.0 || phase > remaining {
            // The remainder sits below the resolution of f64 dyadics;
            // report it as residual rather than looping forever.
            break;
        }
        phases.push(phase);
        exponents.push(n);
        remaining -= phase;
    }
    let cost_bound = crate::protocol::f_infinity_cached() * phases.iter().sum::<f64>();
    Ok(PhaseApproximation {
        phases,
        exponents,
        residual: remaining,
        cost_bound,
    })
}

/// Entanglement cost (in ebits) of simulating `exp(-i H t)` by running the
/// deterministic phase-gate protocol in the interaction picture: the
/// canonical coefficients weight the asymptotic per-radian rate, so the
/// cost is `f_infinity · |t| · sum_k |mu_k|`. Local terms of `H` are free.
pub fn gate_cost(h: &Operator, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { context: "evolution time" });
    }
    let canonical = canonicalize(h)?;
    let weight: f64 = canonical.mu.iter().map(|m| m.abs()).sum();
    Ok(crate::protocol::f_infinity_cached() * t.abs() * weight)
}

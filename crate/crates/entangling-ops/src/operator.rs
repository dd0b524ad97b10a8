//! Dense complex operators on labeled tensor-product spaces.
//!
//! An [`Operator`] is a square matrix together with the list of subsystem
//! dimensions whose product equals its size. Matrix indices follow the usual
//! Kronecker convention: the first tensor factor is the most significant
//! digit of a row or column index. All the index gymnastics the rest of the
//! crate needs — embedding into a larger space, tracing out factors,
//! transposing a subset of factors — live here, so the physics modules can
//! stay close to the formulas.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Tolerance for structural predicates: Hermiticity, unitarity, positivity.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Shorthand for a real complex scalar.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Shorthand for a purely imaginary complex scalar.
#[inline]
pub fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// A square complex matrix acting on an ordered list of subsystems.
#[derive(Clone, Debug)]
pub struct Operator {
    mat: DMatrix<C64>,
    dims: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Operator {
    /// Wraps a matrix, checking that it is square, finite, and compatible
    /// with the declared subsystem dimensions.
    pub fn new(mat: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let product: usize = dims.iter().product();
        if product != mat.nrows() || dims.is_empty() {
            return Err(Error::DimsMismatch {
                dims,
                product,
                actual: mat.nrows(),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { context: "matrix" });
        }
        Ok(Self {
            mat,
            dims,
            labels: None,
        })
    }

    /// Builds an operator from a row-major slice of entries.
    pub fn from_row_slice(entries: &[C64], dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if entries.len() != n * n {
            return Err(Error::DimsMismatch {
                dims,
                product: n * n,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries), dims)
    }

    /// The identity on the given subsystems.
    pub fn identity(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            mat: DMatrix::identity(n, n),
            dims: dims.to_vec(),
            labels: None,
        }
    }

    /// Attaches human-readable subsystem names (purely cosmetic).
    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        assert_eq!(labels.len(), self.dims.len(), "one label per subsystem");
        self.labels = Some(labels.iter().map(|s| s.to_string()).collect());
        self
    }

    /// Subsystem names, if any were attached.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Consumes the operator, returning the underlying matrix.
    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    /// Ordered subsystem dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension (product of [`dims`](Self::dims)).
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Number of tensor factors.
    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Matrix trace.
    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Plain transpose in the computational basis (no conjugation).
    pub fn transpose(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Multiplies every entry by a scalar.
    pub fn scale(&self, z: C64) -> Self {
        Self {
            mat: self.mat.map(|w| w * z),
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of the difference `self - other`.
    ///
    /// Panics if the two operators have different total dimension; that is
    /// a programming error, not a data error.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "comparing different spaces");
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product; the left factor becomes the most significant
    /// block of indices and its subsystems come first in `dims`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => {
                let mut l = a.clone();
                l.extend_from_slice(b);
                Some(l)
            }
            _ => None,
        };
        Self {
            mat: self.mat.kronecker(&other.mat),
            dims,
            labels,
        }
    }

    /// `true` when the operator equals its conjugate transpose within
    /// [`STRUCTURAL_TOL`].
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= STRUCTURAL_TOL
    }

    /// Largest entrywise modulus of `A - A^dagger`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self.mat[(r, c)] - self.mat[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `true` when `A^dagger A` equals the identity within
    /// [`STRUCTURAL_TOL`].
    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() <= STRUCTURAL_TOL
    }

    /// Largest entrywise modulus of `A^dagger A - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        let prod = self.mat.adjoint() * &self.mat;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { re(1.0) } else { re(0.0) };
                dev = dev.max((prod[(r, c)] - target).norm());
            }
        }
        dev
    }

    /// `true` when the operator is Hermitian with all eigenvalues at least
    /// `-`[`STRUCTURAL_TOL`].
    pub fn is_positive_semidefinite(&self) -> bool {
        match self.hermitian_eig() {
            Ok(eig) => eig.min_eigenvalue() >= -STRUCTURAL_TOL,
            Err(_) => false,
        }
    }

    /// Traces out every subsystem *not* listed in `keep`, returning the
    /// reduced operator on the kept factors (in ascending position order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let keep = check_subsystems(keep, self.dims.len())?;
        let digits = DigitTable::new(&self.dims);
        let kept_dims: Vec<usize> = keep.iter().map(|&s| self.dims[s]).collect();
        let traced: Vec<usize> = (0..self.dims.len()).filter(|s| !keep.contains(s)).collect();
        let out_dim: usize = kept_dims.iter().product();
        let mut out = DMatrix::<C64>::zeros(out_dim, out_dim);
        let n = self.dim();
        for r in 0..n {
            for c in 0..n {
                if traced.iter().any(|&s| digits.digit(r, s) != digits.digit(c, s)) {
                    continue;
                }
                let ro = digits.flatten_subset(r, &keep, &kept_dims);
                let co = digits.flatten_subset(c, &keep, &kept_dims);
                out[(ro, co)] += self.mat[(r, c)];
            }
        }
        Operator::new(out, kept_dims)
    }

    /// Transposes the listed subsystems in place, leaving the rest alone.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<Self> {
        let subs = check_subsystems(subsystems, self.dims.len())?;
        let digits = DigitTable::new(&self.dims);
        let n = self.dim();
        let mut out = DMatrix::<C64>::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let mut rd: Vec<usize> = (0..self.dims.len()).map(|s| digits.digit(r, s)).collect();
                let mut cd: Vec<usize> = (0..self.dims.len()).map(|s| digits.digit(c, s)).collect();
                for &s in &subs {
                    std::mem::swap(&mut rd[s], &mut cd[s]);
                }
                let ro = flatten(&rd, &self.dims);
                let co = flatten(&cd, &self.dims);
                out[(ro, co)] = self.mat[(r, c)];
            }
        }
        Ok(Self {
            mat: out,
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        })
    }

    /// Extends the operator to a larger space by acting as the identity on
    /// every factor not listed in `targets`.
    ///
    /// `targets[i]` names the factor of the larger space on which the `i`-th
    /// factor of `self` acts, so the list also fixes the factor ordering.
    pub fn embed(&self, full_dims: &[usize], targets: &[usize]) -> Result<Self> {
        if targets.len() != self.dims.len() {
            return Err(Error::BadSubsystems {
                subsystems: targets.to_vec(),
                count: self.dims.len(),
            });
        }
        let mut seen = vec![false; full_dims.len()];
        for (i, &t) in targets.iter().enumerate() {
            if t >= full_dims.len() || seen[t] {
                return Err(Error::BadSubsystems {
                    subsystems: targets.to_vec(),
                    count: full_dims.len(),
                });
            }
            seen[t] = true;
            if full_dims[t] != self.dims[i] {
                return Err(Error::DimensionMismatch {
                    context: "embedding target subsystem",
                    expected: self.dims[i],
                    actual: full_dims[t],
                });
            }
        }
        let digits = DigitTable::new(full_dims);
        let n: usize = full_dims.iter().product();
        let rest: Vec<usize> = (0..full_dims.len()).filter(|&s| !seen[s]).collect();
        let mut out = DMatrix::<C64>::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if rest.iter().any(|&s| digits.digit(r, s) != digits.digit(c, s)) {
                    continue;
                }
                let ri = flatten(
                    &targets.iter().map(|&t| digits.digit(r, t)).collect::<Vec<_>>(),
                    &self.dims,
                );
                let ci = flatten(
                    &targets.iter().map(|&t| digits.digit(c, t)).collect::<Vec<_>>(),
                    &self.dims,
                );
                out[(r, c)] = self.mat[(ri, ci)];
            }
        }
        Operator::new(out, full_dims.to_vec())
    }

    /// Eigendecomposition of a Hermitian operator.
    ///
    /// # Errors
    ///
    /// Fails with [`Error::NotHermitian`] when the operator deviates from
    /// Hermiticity by more than [`STRUCTURAL_TOL`].
    pub fn hermitian_eig(&self) -> Result<HermitianEig> {
        let dev = self.hermiticity_deviation();
        if dev > STRUCTURAL_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        // Symmetrize first so the solver sees an exactly Hermitian matrix;
        // the adjustment is below tolerance by the check above.
        let sym = (&self.mat + self.mat.adjoint()).map(|z| z * re(0.5));
        let eig = sym.symmetric_eigen();
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut eigenvectors = DMatrix::<C64>::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            eigenvectors.set_column(col, &eig.eigenvectors.column(i));
        }
        Ok(HermitianEig {
            eigenvalues,
            eigenvectors,
        })
    }

    /// `exp(-i t H)` for a Hermitian `H`, via eigendecomposition.
    pub fn expm_hermitian(&self, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite { context: "evolution time" });
        }
        let eig = self.hermitian_eig()?;
        let n = self.dim();
        let mut d = DMatrix::<C64>::zeros(n, n);
        for (i, &w) in eig.eigenvalues.iter().enumerate() {
            d[(i, i)] = C64::new(0.0, -w * t).exp();
        }
        let mat = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        Ok(Self {
            mat,
            dims: self.dims.clone(),
            labels: self.labels.clone(),
        })
    }

    /// Decodes the JSON matrix representation (`dims` plus row-major rows of
    /// `[re, im]` pairs), re-running all structural checks.
    pub fn from_wire(wire: MatrixWire) -> Result<Self> {
        let n: usize = wire.dims.iter().product();
        if wire.matrix.len() != n || wire.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::DimsMismatch {
                dims: wire.dims,
                product: n,
                actual: wire.matrix.len(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &wire.matrix {
            for &[x, y] in row {
                entries.push(C64::new(x, y));
            }
        }
        Self::from_row_slice(&entries, wire.dims)
    }

    /// Parses the JSON matrix representation from text.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: MatrixWire = serde_json::from_str(text)?;
        Self::from_wire(wire)
    }
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Operator", 2)?;
        s.serialize_field("dims", &self.dims)?;
        s.serialize_field("matrix", &Rows(&self.mat))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        Operator::from_wire(wire).map_err(serde::de::Error::custom)
    }
}

struct Rows<'a>(&'a DMatrix<C64>);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.nrows()))?;
        for r in 0..self.0.nrows() {
            let row: Vec<[f64; 2]> = (0..self.0.ncols())
                .map(|c| [self.0[(r, c)].re, self.0[(r, c)].im])
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Raw JSON form of an operator: subsystem dims plus row-major entries.
///
/// Deserializing this type only checks JSON shape; converting it to an
/// [`Operator`] runs the structural validation, so callers can tell a
/// malformed file from an invalid matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixWire {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// Result of [`Operator::hermitian_eig`]: real eigenvalues in descending
/// order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl HermitianEig {
    /// Smallest eigenvalue (the last one, given descending order).
    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Eigenvector column `i` as an owned vector.
    pub fn eigenvector(&self, i: usize) -> DVector<C64> {
        self.eigenvectors.column(i).into_owned()
    }
}

/// Validates a subsystem selection: in range, no repeats. Returns the
/// selection sorted ascending.
fn check_subsystems(subsystems: &[usize], count: usize) -> Result<Vec<usize>> {
    let mut subs = subsystems.to_vec();
    subs.sort_unstable();
    let in_range = subs.iter().all(|&s| s < count);
    let distinct = subs.windows(2).all(|w| w[0] != w[1]);
    if subs.is_empty() || !in_range || !distinct {
        return Err(Error::BadSubsystems {
            subsystems: subsystems.to_vec(),
            count,
        });
    }
    Ok(subs)
}

/// Mixed-radix digit decomposition of flat indices for a dims list.
pub(crate) struct DigitTable {
    strides: Vec<usize>,
    dims: Vec<usize>,
}

impl DigitTable {
    pub(crate) fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1usize; dims.len()];
        for s in (0..dims.len().saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * dims[s + 1];
        }
        Self {
            strides,
            dims: dims.to_vec(),
        }
    }

    /// Digit of `index` at subsystem `s` (subsystem 0 most significant).
    #[inline]
    pub(crate) fn digit(&self, index: usize, s: usize) -> usize {
        (index / self.strides[s]) % self.dims[s]
    }

    /// Flattens the digits of `index` restricted to `subset` (ascending)
    /// into an index over `subset_dims`.
    fn flatten_subset(&self, index: usize, subset: &[usize], subset_dims: &[usize]) -> usize {
        let digits: Vec<usize> = subset.iter().map(|&s| self.digit(index, s)).collect();
        flatten(&digits, subset_dims)
    }
}

/// Flattens a digit list over `dims` into a single index.
pub(crate) fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0;
    for (d, &dim) in digits.iter().zip(dims) {
        idx = idx * dim + d;
    }
    idx
}

/// The 2x2 identity.
pub fn id2() -> Operator {
    Operator::identity(&[2])
}

/// Pauli X.
pub fn sigma_x() -> Operator {
    Operator::from_row_slice(&[re(0.0), re(1.0), re(1.0), re(0.0)], vec![2]).unwrap()
}

/// Pauli Y.
pub fn sigma_y() -> Operator {
    Operator::from_row_slice(&[re(0.0), im(-1.0), im(1.0), re(0.0)], vec![2]).unwrap()
}

/// Pauli Z.
pub fn sigma_z() -> Operator {
    Operator::from_row_slice(&[re(1.0), re(0.0), re(0.0), re(-1.0)], vec![2]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_projector() -> Operator {
        // |Phi><Phi| for |Phi> = (|00> + |11>)/sqrt(2).
        let mut m = DMatrix::<C64>::zeros(4, 4);
        for &r in &[0usize, 3] {
            for &c in &[0usize, 3] {
                m[(r, c)] = re(0.5);
            }
        }
        Operator::new(m, vec![2, 2]).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        let m = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(
            Operator::new(m, vec![2]),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let m = DMatrix::<C64>::zeros(4, 4);
        assert!(matches!(
            Operator::new(m, vec![2, 3]),
            Err(Error::DimsMismatch { .. })
        ));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            Operator::new(m, vec![2]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn tensor_of_sigma_x_and_sigma_z_has_expected_entries() {
        let t = sigma_x().tensor(&sigma_z());
        assert_eq!(t.dims(), &[2, 2]);
        let expect = [
            ((0usize, 2usize), 1.0),
            ((1, 3), -1.0),
            ((2, 0), 1.0),
            ((3, 1), -1.0),
        ];
        for ((r, c), v) in expect {
            assert_eq!(t.matrix()[(r, c)], re(v));
        }
        let nonzero: usize = t
            .matrix()
            .iter()
            .filter(|z| z.norm() > 0.0)
            .count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        let p = bell_projector();
        for keep in [&[0usize][..], &[1][..]] {
            let r = p.partial_trace(keep).unwrap();
            assert_eq!(r.dims(), &[2]);
            let half_id = Operator::identity(&[2]).scale(re(0.5));
            assert!(r.max_abs_diff(&half_id) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_contracts_a_product_correctly() {
        // tr_B (sigma_x (x) rho_B) = tr(rho_B) * sigma_x.
        let rho_b = Operator::from_row_slice(
            &[re(0.7), C64::new(0.1, 0.2), C64::new(0.1, -0.2), re(0.3)],
            vec![2],
        )
        .unwrap();
        let prod = sigma_x().tensor(&rho_b);
        let reduced = prod.partial_trace(&[0]).unwrap();
        assert!(reduced.max_abs_diff(&sigma_x()) < 1e-12);
    }

    #[test]
    fn partial_transpose_of_bell_projector_has_negative_eigenvalue() {
        let pt = bell_projector().partial_transpose(&[0]).unwrap();
        let eig = pt.hermitian_eig().unwrap();
        assert!((eig.min_eigenvalue() + 0.5).abs() < 1e-12);
        // Transposing both subsystems is the full transpose.
        let full = bell_projector().partial_transpose(&[0, 1]).unwrap();
        assert!(full.max_abs_diff(&bell_projector().transpose()) < 1e-14);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let a = sigma_y().tensor(&sigma_x());
        let back = a
            .partial_transpose(&[1])
            .unwrap()
            .partial_transpose(&[1])
            .unwrap();
        assert!(back.max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn subsystem_selections_are_validated() {
        let p = bell_projector();
        assert!(matches!(
            p.partial_trace(&[2]),
            Err(Error::BadSubsystems { .. })
        ));
        assert!(matches!(
            p.partial_transpose(&[0, 0]),
            Err(Error::BadSubsystems { .. })
        ));
        assert!(matches!(
            p.partial_trace(&[]),
            Err(Error::BadSubsystems { .. })
        ));
    }

    #[test]
    fn embed_places_a_factor_with_identity_padding() {
        let x = sigma_x();
        let full = x.embed(&[2, 2], &[1]).unwrap();
        let direct = id2().tensor(&sigma_x());
        assert!(full.max_abs_diff(&direct) < 1e-15);
        let full0 = x.embed(&[2, 2], &[0]).unwrap();
        assert!(full0.max_abs_diff(&sigma_x().tensor(&id2())) < 1e-15);
    }

    #[test]
    fn embed_respects_target_order() {
        // Placing a two-factor operator on (2, 0) swaps its factors
        // relative to (0, 2).
        let xz = sigma_x().tensor(&sigma_z());
        let swapped = xz.embed(&[2, 2, 2], &[2, 0]).unwrap();
        let direct = sigma_z().tensor(&id2()).tensor(&sigma_x());
        assert!(swapped.max_abs_diff(&direct) < 1e-15);
    }

    #[test]
    fn hermitian_eig_reconstructs_and_orders() {
        let h = Operator::from_row_slice(
            &[
                re(1.0),
                C64::new(0.0, -2.0),
                C64::new(0.0, 2.0),
                re(1.0),
            ],
            vec![2],
        )
        .unwrap();
        let eig = h.hermitian_eig().unwrap();
        assert!((eig.eigenvalues[0] - 3.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
        let mut rec = DMatrix::<C64>::zeros(2, 2);
        for i in 0..2 {
            let v = eig.eigenvector(i);
            rec += (&v * v.adjoint()).map(|z| z * re(eig.eigenvalues[i]));
        }
        assert!((rec - h.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian_input() {
        let a = Operator::from_row_slice(&[re(0.0), re(1.0), re(0.0), re(0.0)], vec![2]).unwrap();
        assert!(matches!(
            a.hermitian_eig(),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn expm_of_xx_at_quarter_period_is_minus_i_xx() {
        let xx = sigma_x().tensor(&sigma_x());
        let u = xx.expm_hermitian(std::f64::consts::FRAC_PI_2).unwrap();
        let target = xx.scale(im(-1.0));
        assert!(u.max_abs_diff(&target) < 1e-12);
        assert!(u.is_unitary());
    }

    #[test]
    fn expm_at_zero_time_is_identity() {
        let h = sigma_z().tensor(&sigma_z());
        let u = h.expm_hermitian(0.0).unwrap();
        assert!(u.max_abs_diff(&Operator::identity(&[2, 2])) < 1e-14);
    }

    #[test]
    fn structural_predicates_agree_with_construction() {
        assert!(sigma_y().is_hermitian());
        assert!(sigma_y().is_unitary());
        assert!(!sigma_y().is_positive_semidefinite());
        assert!(bell_projector().is_positive_semidefinite());
        let up = Operator::from_row_slice(&[re(0.0), re(1.0), re(0.0), re(0.0)], vec![2]).unwrap();
        assert!(!up.is_hermitian());
        assert!(!up.is_unitary());
    }

    #[test]
    fn json_round_trip_preserves_entries_and_dims() {
        let a = sigma_y().tensor(&sigma_x());
        let text = serde_json::to_string(&a).unwrap();
        let b = Operator::from_json(&text).unwrap();
        assert_eq!(b.dims(), a.dims());
        assert!(b.max_abs_diff(&a) < 1e-16);
        // Spot-check the wire shape: row-major rows of [re, im] pairs.
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dims"], serde_json::json!([2, 2]));
        assert_eq!(v["matrix"][0][3], serde_json::json!([0.0, -1.0]));
    }

    #[test]
    fn json_decoding_distinguishes_parse_from_validation() {
        assert!(matches!(
            Operator::from_json("{not json"),
            Err(Error::Json(_))
        ));
        // Well-formed JSON, wrong dims product.
        let text = r#"{"dims":[3],"matrix":[[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]]}"#;
        assert!(matches!(
            Operator::from_json(text),
            Err(Error::DimsMismatch { .. })
        ));
    }
}

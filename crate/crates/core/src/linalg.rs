//! States, operators, and the spectral machinery everything else builds on.
//!
//! A [`StateVector`] is a unit vector in `C^d`; an [`Operator`] is a dense
//! `d x d` complex matrix. Both validate their dimension against
//! [`tolerance::MIN_DIM`]..[`tolerance::MAX_DIM`] and reject non-finite
//! entries at construction, so downstream code can assume clean data.
//!
//! The spectral tools are the ones the measure theory needs: projectors
//! onto rays, eigenprojector resolutions `A = sum_i a_i P_i` with explicit
//! degeneracy grouping, and orthonormal bases for the complement of a ray.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

/// Checks that a dimension lies in the supported range.
pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if !(tolerance::MIN_DIM..=tolerance::MAX_DIM).contains(&dim) {
        return Err(Error::DimensionOutOfRange {
            dim,
            min: tolerance::MIN_DIM,
            max: tolerance::MAX_DIM,
        });
    }
    Ok(())
}

fn check_finite(values: &[Complex64], context: &str) -> Result<()> {
    if values
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(Error::NonFinite {
            context: context.to_string(),
        });
    }
    Ok(())
}

/// A normalized pure state in `C^d`.
///
/// The only public constructors normalize their input (or build a basis
/// vector), so a `StateVector` always has unit norm up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: DVector<Complex64>,
}

impl StateVector {
    /// Builds a unit state from raw amplitudes, scaling by `1/|v|` and
    /// preserving the global phase.
    ///
    /// Fails with [`Error::ZeroVector`] when the norm is at or below
    /// [`tolerance::ZERO_NORM_FLOOR`], and rejects non-finite amplitudes
    /// and out-of-range dimensions.
    pub fn normalize(raw: &[Complex64]) -> Result<Self> {
        check_dim(raw.len())?;
        check_finite(raw, "state amplitudes")?;
        let v = DVector::from_column_slice(raw);
        let norm = v.norm();
        if norm <= tolerance::ZERO_NORM_FLOOR {
            return Err(Error::ZeroVector {
                norm,
                min: tolerance::ZERO_NORM_FLOOR,
            });
        }
        // Already-unit input is kept verbatim so that normalizing is
        // idempotent and serialized states round-trip bit for bit. The
        // band covers the rounding of the norm computation itself up to
        // the maximum supported dimension.
        if (norm - 1.0).abs() <= 32.0 * f64::EPSILON {
            return Ok(Self { data: v });
        }
        Ok(Self {
            data: v / Complex64::new(norm, 0.0),
        })
    }

    /// The `index`-th computational basis vector of `C^dim`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                left: index,
                right: dim,
            });
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { data: v })
    }

    /// Wraps a vector that is already unit-norm (used internally after
    /// unitary maps and Householder reflections).
    pub(crate) fn from_unit(data: DVector<Complex64>) -> Self {
        debug_assert!((data.norm() - 1.0).abs() < 1e-12, "from_unit: norm drifted");
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    /// Amplitudes in the computational basis.
    pub fn amplitudes(&self) -> &[Complex64] {
        self.data.as_slice()
    }

    pub(crate) fn vector(&self) -> &DVector<Complex64> {
        &self.data
    }

    /// Inner product `<self|other>` (antilinear in `self`).
    ///
    /// Panics on dimension mismatch: mixing dimensions at this level is a
    /// programming error, and the public entry points check first.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data.dotc(&other.data)
    }

    /// Rank-one operator `|self><other|`.
    pub fn outer(&self, other: &Self) -> Operator {
        assert_eq!(self.dim(), other.dim(), "outer product dimension mismatch");
        Operator {
            data: &self.data * other.data.adjoint(),
        }
    }

    /// Rank-one projector `|self><self|` onto the ray of this state.
    pub fn projector(&self) -> Operator {
        self.outer(self)
    }

    /// An orthonormal basis of the orthogonal complement of this ray:
    /// `d - 1` unit vectors, each orthogonal to the state and to the others.
    ///
    /// Implemented with a single Householder reflection mapping the state
    /// onto (a phase times) the first basis vector, so orthogonality is
    /// exact to machine precision for every dimension.
    pub fn orthogonal_complement_basis(&self) -> Vec<StateVector> {
        let d = self.dim();
        let first = self.data[0];
        let phase = if first.norm() > tolerance::ZERO_NORM_FLOOR {
            first / Complex64::new(first.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        // u = v + phase * e_1 reflects v onto -phase * e_1; the remaining
        // columns of H = 1 - 2uu'/|u|^2 then span the complement.
        let mut u = self.data.clone();
        u[0] += phase;
        let factor = Complex64::new(2.0 / u.norm_squared(), 0.0);
        (1..d)
            .map(|j| {
                let mut col = &u * (-factor * u[j].conj());
                col[j] += Complex64::new(1.0, 0.0);
                let norm = col.norm();
                StateVector::from_unit(col / Complex64::new(norm, 0.0))
            })
            .collect()
    }
}

/// A dense operator on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    data: DMatrix<Complex64>,
}

impl Operator {
    /// Builds an operator from rows; every row must have the same length as
    /// the number of rows, and all entries must be finite.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        check_dim(d)?;
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: d,
                });
            }
            check_finite(row, "operator entries")?;
        }
        let data = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        Ok(Self { data })
    }

    pub fn identity(dim: usize) -> Self {
        assert!(
            (tolerance::MIN_DIM..=tolerance::MAX_DIM).contains(&dim),
            "identity: dimension out of range"
        );
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(
            (tolerance::MIN_DIM..=tolerance::MAX_DIM).contains(&dim),
            "zeros: dimension out of range"
        );
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub(crate) fn from_matrix(data: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(data.nrows(), data.ncols());
        Self { data }
    }

    pub(crate) fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    /// Entries as a row-major vector of rows (the document layout).
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.data[(i, j)]).collect())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            data: &self.data * c,
        }
    }

    /// Matrix element `<bra|A|ket>`.
    pub fn matrix_element(&self, bra: &StateVector, ket: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), bra.dim(), "matrix element dimension mismatch");
        assert_eq!(self.dim(), ket.dim(), "matrix element dimension mismatch");
        bra.vector().dotc(&(&self.data * ket.vector()))
    }

    /// Diagonal matrix element `<state|A|state>`.
    pub fn expectation(&self, state: &StateVector) -> Complex64 {
        self.matrix_element(state, state)
    }

    /// Applies the operator to a state and renormalizes. Only meaningful
    /// for norm-preserving maps; the unitary propagators use this.
    pub(crate) fn apply_unit(&self, state: &StateVector) -> StateVector {
        let image = &self.data * state.vector();
        let norm = image.norm();
        StateVector::from_unit(image / Complex64::new(norm, 0.0))
    }

    /// Largest entry modulus, the max-norm used by all the entrywise
    /// comparisons in this crate.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from another operator.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "comparison dimension mismatch");
        (&self.data - &other.data)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus of `A - A'`; zero for Hermitian operators.
    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.data - self.data.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Largest entry modulus of `U'U - 1`; zero for unitaries.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        (self.data.adjoint() * &self.data - DMatrix::<Complex64>::identity(d, d))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus of `P^2 - P` and `P - P'` combined; zero for
    /// orthogonal projectors.
    pub fn projector_deviation(&self) -> f64 {
        let idempotency = (&self.data * &self.data - &self.data)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        idempotency.max(self.hermiticity_deviation())
    }

    /// Eigenprojector resolution `A = sum_k a_k P_k` of a Hermitian
    /// operator, with eigenvalues sorted ascending.
    ///
    /// Eigenvalues whose gap to their neighbor is at most `degeneracy_tol`
    /// times the largest eigenvalue modulus are merged into one cluster;
    /// each cluster contributes the mean eigenvalue and the rank-`m`
    /// projector onto its eigenspace. The projectors resolve the identity
    /// and are mutually orthogonal by construction.
    pub fn spectral_decomposition(&self, degeneracy_tol: f64) -> Result<SpectralDecomposition> {
        let deviation = self.hermiticity_deviation();
        if deviation > tolerance::HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tol: tolerance::HERMITIAN_TOL,
            });
        }
        let (values, vectors) = hermitian_eigen(&self.data);
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gap = degeneracy_tol * scale.max(f64::MIN_POSITIVE);

        let mut eigenvalues = Vec::new();
        let mut projectors = Vec::new();
        let mut start = 0;
        while start < values.len() {
            let mut end = start + 1;
            while end < values.len() && values[end] - values[end - 1] <= gap {
                end += 1;
            }
            let cluster = &values[start..end];
            eigenvalues.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
            let block = vectors.columns(start, end - start);
            projectors.push(Operator::from_matrix(block * block.adjoint()));
            start = end;
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            projectors,
        })
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator sum dimension mismatch");
        Operator {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "operator difference dimension mismatch"
        );
        Operator {
            data: &self.data - &rhs.data,
        }
    }
}

impl std::ops::Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator product dimension mismatch");
        Operator {
            data: &self.data * &rhs.data,
        }
    }
}

/// Result of [`Operator::spectral_decomposition`]: paired eigenvalues and
/// eigenprojectors, ascending in eigenvalue, one entry per degenerate
/// cluster.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<Operator>,
}

impl SpectralDecomposition {
    /// Reassembles `sum_k a_k P_k`.
    pub fn reassemble(&self) -> Operator {
        let d = self.projectors[0].dim();
        let mut acc = DMatrix::<Complex64>::zeros(d, d);
        for (a, p) in self.eigenvalues.iter().zip(&self.projectors) {
            acc += p.matrix() * Complex64::new(*a, 0.0);
        }
        Operator::from_matrix(acc)
    }
}

/// Validates that `basis` is a complete orthonormal basis of `C^dim`:
/// right count, right dimensions, Gram matrix within
/// [`tolerance::BASIS_TOL`] of the identity.
pub(crate) fn check_orthonormal_basis(dim: usize, basis: &[StateVector]) -> Result<()> {
    if basis.len() != dim {
        return Err(Error::IncompleteBasis {
            reason: format!("expected {dim} vectors, found {}", basis.len()),
        });
    }
    for b in basis {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: b.dim(),
                right: dim,
            });
        }
    }
    let mut worst = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b).norm() - expected).abs());
        }
    }
    if worst > tolerance::BASIS_TOL {
        return Err(Error::IncompleteBasis {
            reason: format!(
                "Gram matrix deviates from identity by {worst:.3e} (tolerance {:.3e})",
                tolerance::BASIS_TOL
            ),
        });
    }
    Ok(())
}

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns of
/// a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eigen = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        eigen.eigenvectors[(i, order[j])]
    });
    (values, vectors)
}

/// Eigenphases and orthonormal eigenvectors of a unitary `U`, so that
/// `U = V diag(exp(i theta_k)) V'`.
///
/// A unitary is normal but not Hermitian, so this goes through the
/// commuting Hermitian pair `C = (U + U')/2` and `S = (U - U')/(2i)`:
/// eigenspaces of `C` are found first, `S` is diagonalized inside each, and
/// the phase of every joint eigenvector is `atan2(s, c)` of its two
/// Rayleigh quotients. Exactly degenerate `C` clusters (e.g. phases at
/// `+-theta`) are separated by the sign of `S`.
pub(crate) fn unitary_eigensystem(u: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let d = u.nrows();
    let adj = u.adjoint();
    let cos_part = (u + &adj).map(|c| c * 0.5);
    let sin_part = (u - &adj).map(|c| c * Complex64::new(0.0, -0.5));

    let (cos_values, cos_vectors) = hermitian_eigen(&cos_part);
    // Cluster eigenvalues of C; |cos| <= 1 so an absolute gap works.
    let cluster_gap = 1e-8;
    let mut phases = Vec::with_capacity(d);
    let mut vectors = DMatrix::<Complex64>::zeros(d, d);
    let mut filled = 0;
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && cos_values[end] - cos_values[end - 1] <= cluster_gap {
            end += 1;
        }
        let block = cos_vectors.columns(start, end - start);
        let projected = block.adjoint() * &sin_part * block;
        let (_, inner_vectors) = hermitian_eigen(&projected);
        let joint = block * inner_vectors;
        for k in 0..joint.ncols() {
            let v = joint.column(k);
            let c = (v.adjoint() * &cos_part * v)[(0, 0)].re;
            let s = (v.adjoint() * &sin_part * v)[(0, 0)].re;
            phases.push(s.atan2(c));
            vectors.set_column(filled, &v);
            filled += 1;
        }
        start = end;
    }
    (phases, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalize_scales_to_unit_norm() {
        let v = StateVector::normalize(&[c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_relative_eq!(v.amplitudes()[0].re, 0.6, max_relative = 1e-15);
        assert_relative_eq!(v.amplitudes()[1].im, 0.8, max_relative = 1e-15);
        let norm: f64 = v.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert_relative_eq!(norm, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn normalize_preserves_global_phase() {
        let v = StateVector::normalize(&[c(0.0, 2.0), c(0.0, 0.0)]).unwrap();
        assert_relative_eq!(v.amplitudes()[0].im, 1.0, max_relative = 1e-15);
        assert_relative_eq!(v.amplitudes()[0].re, 0.0);
    }

    #[test]
    fn normalize_rejects_zero_vector() {
        let err = StateVector::normalize(&[c(0.0, 0.0), c(1e-16, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::ZeroVector { .. }));
    }

    #[test]
    fn normalize_rejects_non_finite_and_bad_dims() {
        assert!(matches!(
            StateVector::normalize(&[c(f64::NAN, 0.0), c(1.0, 0.0)]).unwrap_err(),
            Error::NonFinite { .. }
        ));
        assert!(matches!(
            StateVector::normalize(&[c(1.0, 0.0)]).unwrap_err(),
            Error::DimensionOutOfRange { .. }
        ));
    }

    #[test]
    fn projector_of_circular_state_is_frozen_matrix() {
        // (1, i)/sqrt(2) -> [[1/2, -i/2], [i/2, 1/2]]
        let s = 1.0 / 2.0_f64.sqrt();
        let v = StateVector::normalize(&[c(s, 0.0), c(0.0, s)]).unwrap();
        let p = v.projector();
        assert_relative_eq!(p.entry(0, 0).re, 0.5, max_relative = 1e-14);
        assert_relative_eq!(p.entry(0, 1).im, -0.5, max_relative = 1e-14);
        assert_relative_eq!(p.entry(1, 0).im, 0.5, max_relative = 1e-14);
        assert_relative_eq!(p.entry(1, 1).re, 0.5, max_relative = 1e-14);
        assert!(p.projector_deviation() < 1e-14);
        assert_relative_eq!(p.trace().re, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn spectral_decomposition_of_diagonal_matrix() {
        let a = Operator::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let sd = a.spectral_decomposition(tolerance::DEGENERACY_TOL).unwrap();
        assert_eq!(sd.eigenvalues, vec![-1.0, 2.0]);
        assert!(
            sd.projectors[0].max_abs_diff(&StateVector::basis_state(2, 1).unwrap().projector())
                < 1e-14
        );
        assert!(
            sd.projectors[1].max_abs_diff(&StateVector::basis_state(2, 0).unwrap().projector())
                < 1e-14
        );
    }

    #[test]
    fn spectral_decomposition_merges_degenerate_identity() {
        let sd = Operator::identity(3)
            .spectral_decomposition(tolerance::DEGENERACY_TOL)
            .unwrap();
        assert_eq!(sd.eigenvalues.len(), 1);
        assert_relative_eq!(sd.eigenvalues[0], 1.0, max_relative = 1e-14);
        assert!(sd.projectors[0].max_abs_diff(&Operator::identity(3)) < 1e-12);
    }

    #[test]
    fn spectral_decomposition_of_pauli_x() {
        let x = Operator::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let sd = x.spectral_decomposition(tolerance::DEGENERACY_TOL).unwrap();
        assert_eq!(sd.eigenvalues.len(), 2);
        assert_relative_eq!(sd.eigenvalues[0], -1.0, max_relative = 1e-14);
        assert_relative_eq!(sd.eigenvalues[1], 1.0, max_relative = 1e-14);
        // P(+-1) = (1 -+ X)/2 with all entry moduli 1/2.
        for p in &sd.projectors {
            for i in 0..2 {
                for j in 0..2 {
                    assert_relative_eq!(p.entry(i, j).norm(), 0.5, max_relative = 1e-12);
                }
            }
        }
        assert!(sd.reassemble().max_abs_diff(&x) < 1e-14);
    }

    #[test]
    fn spectral_decomposition_rejects_non_hermitian() {
        let a = Operator::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            a.spectral_decomposition(tolerance::DEGENERACY_TOL)
                .unwrap_err(),
            Error::NotHermitian { .. }
        ));
    }

    #[test]
    fn complement_basis_of_first_basis_vector() {
        let e0 = StateVector::basis_state(2, 0).unwrap();
        let comp = e0.orthogonal_complement_basis();
        assert_eq!(comp.len(), 1);
        assert_relative_eq!(comp[0].amplitudes()[1].norm(), 1.0, max_relative = 1e-14);
        assert!(comp[0].amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn complement_basis_is_orthonormal_and_orthogonal_to_state() {
        let v = StateVector::normalize(&[c(0.3, 0.1), c(-0.2, 0.7), c(0.5, -0.4), c(0.1, 0.2)])
            .unwrap();
        let comp = v.orthogonal_complement_basis();
        assert_eq!(comp.len(), 3);
        for (i, a) in comp.iter().enumerate() {
            assert!(v.inner(a).norm() < 1e-14, "not orthogonal to the state");
            for (j, b) in comp.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).norm() - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn unitary_eigensystem_splits_conjugate_phase_pair() {
        // Rotation by 90 degrees: eigenphases +-pi/2 share cos = 0, so the
        // two-stage split has to separate them via the sine part.
        let u =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let (phases, vectors) = unitary_eigensystem(&u);
        let mut sorted = phases.clone();
        sorted.sort_by(f64::total_cmp);
        assert_relative_eq!(
            sorted[0],
            -std::f64::consts::FRAC_PI_2,
            max_relative = 1e-12
        );
        assert_relative_eq!(sorted[1], std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
        // Rebuild U from the eigensystem.
        let mut rebuilt = DMatrix::<Complex64>::zeros(2, 2);
        for (k, &phase) in phases.iter().enumerate() {
            let v = vectors.column(k);
            rebuilt += v * v.adjoint() * Complex64::from_polar(1.0, phase);
        }
        assert!((rebuilt - u).iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-12);
    }

    fn arb_amplitudes(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
            .prop_map(|pairs| pairs.into_iter().map(|(re, im)| c(re, im)).collect())
    }

    fn arb_hermitian(dim: usize) -> impl Strategy<Value = Operator> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |raw| {
            let g = DMatrix::from_fn(dim, dim, |i, j| {
                let (re, im) = raw[i * dim + j];
                c(re, im)
            });
            Operator::from_matrix((&g + g.adjoint()).map(|x| x * 0.5))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_normalize_is_scale_invariant(raw in arb_amplitudes(4), scale in 0.1..10.0f64) {
            prop_assume!(raw.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-6);
            let direct = StateVector::normalize(&raw).unwrap();
            let scaled: Vec<Complex64> = raw.iter().map(|a| a * scale).collect();
            let rescaled = StateVector::normalize(&scaled).unwrap();
            for (a, b) in direct.amplitudes().iter().zip(rescaled.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn prop_projector_is_idempotent_unit_trace(raw in arb_amplitudes(5)) {
            prop_assume!(raw.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-6);
            let p = StateVector::normalize(&raw).unwrap().projector();
            prop_assert!(p.projector_deviation() < 1e-13);
            prop_assert!((p.trace() - c(1.0, 0.0)).norm() < 1e-13);
        }

        #[test]
        fn prop_spectral_decomposition_reassembles(a in arb_hermitian(5)) {
            let sd = a.spectral_decomposition(tolerance::DEGENERACY_TOL).unwrap();
            prop_assert!(sd.reassemble().max_abs_diff(&a) < 1e-11);
            // Projectors resolve the identity and are mutually orthogonal.
            let mut sum = Operator::zeros(5);
            for p in &sd.projectors {
                prop_assert!(p.projector_deviation() < 1e-11);
                sum = &sum + p;
            }
            prop_assert!(sum.max_abs_diff(&Operator::identity(5)) < 1e-12);
            for (i, p) in sd.projectors.iter().enumerate() {
                for q in sd.projectors.iter().skip(i + 1) {
                    prop_assert!((p * q).max_abs() < 1e-11);
                }
            }
        }

        #[test]
        fn prop_complement_extends_to_full_basis(raw in arb_amplitudes(6)) {
            prop_assume!(raw.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-6);
            let v = StateVector::normalize(&raw).unwrap();
            let mut basis = vec![v.clone()];
            basis.extend(v.orthogonal_complement_basis());
            let mut resolution = Operator::zeros(6);
            for b in &basis {
                resolution = &resolution + &b.projector();
            }
            prop_assert!(resolution.max_abs_diff(&Operator::identity(6)) < 1e-13);
        }
    }
}

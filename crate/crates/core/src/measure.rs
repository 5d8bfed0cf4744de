//! Complex measures attached to pre/post-selected processes.
//!
//! A process prepares `|psi>` and post-selects on `|phi>`. Its double state
//!
//! ```text
//! W = alpha |psi><phi| / <phi|psi>  +  (1 - alpha) |phi><psi| / <psi|phi>
//! ```
//!
//! has unit trace for every complex `alpha` and induces the complex measure
//! `mu(P) = tr(W P)` on projectors. The measure is additive over orthogonal
//! projectors, assigns 1 to the rays of both selected states and 0 to
//! everything orthogonal to them, and reproduces the Born rule when the two
//! states coincide. Expectations `lambda(A) = sum_k a_k mu(P_k)` over the
//! eigenprojectors of an observable recover the weak value at `alpha = 1`
//! and a real, symmetric-ordering value at `alpha = 1/2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_orthonormal_basis, hermitian_eigen, Operator, StateVector};
use crate::tolerance;

fn check_same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

fn check_finite_scalar(value: Complex64, context: &str) -> Result<()> {
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite {
            context: context.to_string(),
        });
    }
    Ok(())
}

fn check_projector(p: &Operator) -> Result<()> {
    let deviation = p.projector_deviation();
    if deviation > tolerance::PROJECTOR_TOL {
        return Err(Error::InvalidProjector {
            reason: format!(
                "max |P^2 - P| or |P - P'| = {deviation:.3e} exceeds {:.3e}",
                tolerance::PROJECTOR_TOL
            ),
        });
    }
    Ok(())
}

fn check_density(rho: &Operator) -> Result<()> {
    let herm = rho.hermiticity_deviation();
    if herm > tolerance::DENSITY_TOL {
        return Err(Error::InvalidDensity {
            reason: format!("max |rho - rho'| = {herm:.3e}"),
        });
    }
    let trace = rho.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > tolerance::DENSITY_TOL {
        return Err(Error::InvalidDensity {
            reason: format!("trace = {trace} differs from one"),
        });
    }
    let (values, _) = hermitian_eigen(rho.matrix());
    if let Some(min) = values.first() {
        if *min < -tolerance::DENSITY_TOL {
            return Err(Error::InvalidDensity {
                reason: format!("negative eigenvalue {min:.3e}"),
            });
        }
    }
    Ok(())
}

/// Born probability `Re tr(rho P)` of a projector in a density operator.
///
/// Validates both arguments; the result lies in `[0, 1]` up to rounding
/// (callers that report it should clamp to the unit interval).
pub fn born_measure(rho: &Operator, p: &Operator) -> Result<f64> {
    check_same_dim(rho.dim(), p.dim())?;
    check_density(rho)?;
    check_projector(p)?;
    Ok((rho.matrix() * p.matrix()).trace().re)
}

/// Ordinary quantum expectation `<psi|A|psi>` of a Hermitian observable,
/// evaluated as `sum_k a_k mu(P_k)` over the eigenprojectors of `A`.
pub fn expectation_single(psi: &StateVector, a: &Operator) -> Result<f64> {
    check_same_dim(psi.dim(), a.dim())?;
    let sd = a.spectral_decomposition(tolerance::DEGENERACY_TOL)?;
    Ok(sd
        .eigenvalues
        .iter()
        .zip(&sd.projectors)
        .map(|(value, p)| value * p.expectation(psi).re)
        .sum())
}

/// Weak value `<phi|A|psi> / <phi|psi>` of a Hermitian observable for the
/// process preparing `psi` and post-selecting `phi`.
pub fn weak_value(psi: &StateVector, phi: &StateVector, a: &Operator) -> Result<Complex64> {
    check_same_dim(psi.dim(), phi.dim())?;
    check_same_dim(psi.dim(), a.dim())?;
    let deviation = a.hermiticity_deviation();
    if deviation > tolerance::HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tol: tolerance::HERMITIAN_TOL,
        });
    }
    let overlap = phi.inner(psi);
    if overlap.norm() <= tolerance::OVERLAP_FLOOR {
        return Err(Error::OrthogonalPair {
            overlap: overlap.norm(),
            floor: tolerance::OVERLAP_FLOOR,
        });
    }
    Ok(a.matrix_element(phi, psi) / overlap)
}

/// The selected states and weight a double state was built from.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub psi: StateVector,
    pub phi: StateVector,
    pub alpha: Complex64,
}

/// A trace-one operator carrying the complex measure `mu(P) = tr(W P)`.
///
/// Built either from a pre/post-selected pair ([`DoubleState::from_states`],
/// which remembers its [`Provenance`]) or from any trace-one matrix
/// ([`DoubleState::from_operator`]).
#[derive(Debug, Clone)]
pub struct DoubleState {
    w: Operator,
    provenance: Option<Provenance>,
}

impl DoubleState {
    /// Builds the double state of the process preparing `psi` and
    /// post-selecting `phi`, weighted by a complex `alpha`.
    ///
    /// When the two states are the same ray (overlap modulus within
    /// `1e-12` of one) the operator degenerates to the projector
    /// `|psi><psi|` for every `alpha`, and that limit is returned directly.
    /// Orthogonal pairs (overlap at or below [`tolerance::OVERLAP_FLOOR`])
    /// are rejected, since the transition denominators vanish.
    pub fn from_states(psi: &StateVector, phi: &StateVector, alpha: Complex64) -> Result<Self> {
        check_same_dim(psi.dim(), phi.dim())?;
        check_finite_scalar(alpha, "alpha")?;
        let overlap = phi.inner(psi);
        let provenance = Provenance {
            psi: psi.clone(),
            phi: phi.clone(),
            alpha,
        };
        if overlap.norm() >= tolerance::IDENTICAL_OVERLAP {
            return Ok(Self {
                w: psi.projector(),
                provenance: Some(provenance),
            });
        }
        if overlap.norm() <= tolerance::OVERLAP_FLOOR {
            return Err(Error::OrthogonalPair {
                overlap: overlap.norm(),
                floor: tolerance::OVERLAP_FLOOR,
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let forward = psi.outer(phi).scale(alpha / overlap);
        let backward = phi.outer(psi).scale((one - alpha) / overlap.conj());
        Ok(Self {
            w: &forward + &backward,
            provenance: Some(provenance),
        })
    }

    /// Internal constructor for modules that assemble the two-term form
    /// themselves (e.g. time evolution) and know the states it came from.
    pub(crate) fn with_provenance(w: Operator, provenance: Provenance) -> Self {
        debug_assert!(
            (w.trace() - Complex64::new(1.0, 0.0)).norm() <= tolerance::TRACE_ONE_TOL,
            "with_provenance: trace drifted from one"
        );
        Self {
            w,
            provenance: Some(provenance),
        }
    }

    /// Wraps an arbitrary trace-one operator (no provenance attached).
    pub fn from_operator(w: Operator) -> Result<Self> {
        let deviation = (w.trace() - Complex64::new(1.0, 0.0)).norm();
        if deviation > tolerance::TRACE_ONE_TOL {
            return Err(Error::NotTraceOne {
                deviation,
                tol: tolerance::TRACE_ONE_TOL,
            });
        }
        Ok(Self {
            w,
            provenance: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    /// The underlying trace-one operator.
    pub fn operator(&self) -> &Operator {
        &self.w
    }

    /// States and weight this double state was built from, when known.
    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Complex measure `mu(P) = tr(W P)` of a projector.
    pub fn complex_measure(&self, p: &Operator) -> Result<Complex64> {
        check_same_dim(self.dim(), p.dim())?;
        check_projector(p)?;
        Ok((self.w.matrix() * p.matrix()).trace())
    }

    /// Expectation `lambda(A) = sum_k a_k mu(P_k)` over the eigenprojector
    /// resolution of a Hermitian observable.
    ///
    /// At `alpha = 1` this is the weak value; at `alpha = 1/2` it is real
    /// for every Hermitian `A`.
    pub fn lambda_expectation(&self, a: &Operator) -> Result<Complex64> {
        check_same_dim(self.dim(), a.dim())?;
        let sd = a.spectral_decomposition(tolerance::DEGENERACY_TOL)?;
        let mut total = Complex64::new(0.0, 0.0);
        for (value, p) in sd.eigenvalues.iter().zip(&sd.projectors) {
            total += (self.w.matrix() * p.matrix()).trace() * value;
        }
        Ok(total)
    }

    /// Direct pairing `tr(W A)`, defined for any operator.
    ///
    /// For Hermitian `A` this agrees with [`Self::lambda_expectation`] by
    /// linearity of the trace; keeping both routes lets tests pin the
    /// spectral code against the closed form.
    pub fn trace_expectation(&self, a: &Operator) -> Result<Complex64> {
        check_same_dim(self.dim(), a.dim())?;
        Ok((self.w.matrix() * a.matrix()).trace())
    }

    /// Affine combination `beta W_1 + (1 - beta) W_2` of two double states;
    /// the result has unit trace for every complex `beta`.
    pub fn affine_combine(&self, other: &Self, beta: Complex64) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        check_finite_scalar(beta, "beta")?;
        let one = Complex64::new(1.0, 0.0);
        let w = &self.w.scale(beta) + &other.w.scale(one - beta);
        Self::from_operator(w)
    }

    /// Whether `W` is idempotent within `tol`, i.e. a bare transition
    /// operator `|psi><phi| / <phi|psi>` rather than a genuine mixture of
    /// forward and backward terms.
    pub fn is_pure_process(&self, tol: f64) -> bool {
        (&self.w * &self.w).max_abs_diff(&self.w) <= tol
    }
}

/// One named check inside a [`MeasureReport`].
#[derive(Debug, Clone)]
pub struct ConsistencyCheck {
    pub name: String,
    pub expected: Complex64,
    pub actual: Complex64,
    pub pass: bool,
}

/// Outcome of a consistency sweep: every check passes exactly when
/// `|expected - actual|` is at most the report tolerance.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub tolerance: f64,
    pub checks: Vec<ConsistencyCheck>,
}

impl MeasureReport {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            checks: Vec::new(),
        }
    }

    pub fn record(&mut self, name: impl Into<String>, expected: Complex64, actual: Complex64) {
        let pass = (expected - actual).norm() <= self.tolerance;
        self.checks.push(ConsistencyCheck {
            name: name.into(),
            expected,
            actual,
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&ConsistencyCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Largest `|expected - actual|` across all checks.
    pub fn worst_deviation(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| (c.expected - c.actual).norm())
            .fold(0.0, f64::max)
    }
}

/// Runs the defining consistency conditions of the complex measure for the
/// process `psi -> phi` at weight `alpha`:
///
/// * `tr W = 1`,
/// * `mu(P_psi) = 1` and `mu(P_phi) = 1`,
/// * `mu(P) = 0` for every projector in an orthonormal basis of the
///   complement of `psi`, and likewise for `phi`.
///
/// Failures are recorded in the report, not thrown; only the construction
/// of the double state itself can fail.
pub fn verify_consistency(
    psi: &StateVector,
    phi: &StateVector,
    alpha: Complex64,
    tol: f64,
) -> Result<MeasureReport> {
    let w = DoubleState::from_states(psi, phi, alpha)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut report = MeasureReport::new(tol);

    report.record("trace(W) = 1", one, w.operator().trace());
    let measure_of = |s: &StateVector| (w.operator().matrix() * s.projector().matrix()).trace();
    report.record("mu(P_psi) = 1", one, measure_of(psi));
    report.record("mu(P_phi) = 1", one, measure_of(phi));
    for (k, state) in psi.orthogonal_complement_basis().iter().enumerate() {
        report.record(format!("mu(P_psi_perp_{k}) = 0"), zero, measure_of(state));
    }
    for (k, state) in phi.orthogonal_complement_basis().iter().enumerate() {
        report.record(format!("mu(P_phi_perp_{k}) = 0"), zero, measure_of(state));
    }
    Ok(report)
}

/// Sum over every summand of the pole-free contextual average: with the
/// first state in the bra slot of the forward term.
fn contextual_sum(
    fixed: &StateVector,
    basis: &[StateVector],
    a: &Operator,
    alpha: Complex64,
    fixed_is_preparation: bool,
) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    basis
        .iter()
        .map(|b| {
            let (psi, phi) = if fixed_is_preparation {
                (fixed, b)
            } else {
                (b, fixed)
            };
            // |<psi|phi>|^2 * lambda(A) with the vanishing denominators
            // cancelled analytically, so orthogonal basis members
            // contribute zero instead of 0/0.
            alpha * a.matrix_element(phi, psi) * psi.inner(phi)
                + (one - alpha) * a.matrix_element(psi, phi) * phi.inner(psi)
        })
        .sum()
}

/// Average of `|<psi|phi>|^2 lambda(A)` over all post-selections `phi` in
/// an orthonormal basis; equals `<psi|A|psi>` for every complex `alpha`
/// and every basis.
///
/// Each summand is evaluated in the pole-free form
/// `alpha <phi|A|psi><psi|phi> + (1 - alpha) <psi|A|phi><phi|psi>`, so
/// bases containing states orthogonal to `psi` (including `psi` itself as
/// a member) are handled without dividing by a vanishing overlap.
pub fn contextual_average(
    psi: &StateVector,
    basis: &[StateVector],
    a: &Operator,
    alpha: Complex64,
) -> Result<Complex64> {
    check_same_dim(psi.dim(), a.dim())?;
    check_finite_scalar(alpha, "alpha")?;
    check_orthonormal_basis(psi.dim(), basis)?;
    Ok(contextual_sum(psi, basis, a, alpha, true))
}

/// Mirrored variant of [`contextual_average`]: the post-selection `phi` is
/// fixed and the preparation runs over the basis; equals `<phi|A|phi>`.
pub fn contextual_average_pre(
    phi: &StateVector,
    basis: &[StateVector],
    a: &Operator,
    alpha: Complex64,
) -> Result<Complex64> {
    check_same_dim(phi.dim(), a.dim())?;
    check_finite_scalar(alpha, "alpha")?;
    check_orthonormal_basis(phi.dim(), basis)?;
    Ok(contextual_sum(phi, basis, a, alpha, false))
}

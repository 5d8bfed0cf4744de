//! Expanding a trace-one operator into a classical mixture of processes.
//!
//! Every trace-one operator `W` on `C^d` can be written as
//!
//! ```text
//! W = sum_i p_i |psi_i><phi_i| / <phi_i|psi_i>
//! ```
//!
//! with at most `d + 1` terms and classical probabilities `p_i`: a
//! probability distribution over pre/post-selected processes whose
//! weak-value expectations average, term by term, to `tr(W A)`. The
//! construction works in any orthonormal basis in which the first row of
//! `W` is nonzero; the basis and the probabilities are free choices
//! recorded in a [`DecompositionPlan`], so the expansion is deliberately
//! non-unique.
//!
//! The singular expansion [`svd_decompose`] is the orthogonal alternative:
//! `W = sum_i r_i |u_i><v_i|` with nonnegative weights, which is *not*
//! always a process mixture — terms with `<u_i|v_i> = 0` admit no
//! normalized transition operator and come back flagged unphysical.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_orthonormal_basis, Operator, StateVector};
use crate::measure::{DoubleState, MeasureReport};
use crate::tolerance;

/// Coefficient conventions used by the closing `(d + 1)`-th term of the
/// expansion, recorded so that downstream reports can state exactly which
/// reading of the construction this crate implements.
pub const EXPANSION_CONVENTION: &str = "alpha_i = (w_ii - p_i)/p_last for i >= 2; \
beta_1j = (w_1j - p_last)/p_1; \
beta_ij = (w_ij - p_last alpha_i)/p_i for i, j >= 2; \
beta_i1 = (w_i1 - p_last alpha_i (1 - sum_{j=2..d} alpha_j))/p_i, the inner sum running over the alpha_j; \
kets carry conjugated coefficients so their bras apply the coefficients unconjugated (indices 1-based in the plan basis)";

/// One weighted process `psi -> phi` inside a mixture.
///
/// States are stored normalized; the invariant `|<phi|psi>| > 0` is
/// enforced at construction so the transition operator
/// `|psi><phi| / <phi|psi>` always exists.
#[derive(Debug, Clone)]
pub struct ProcessTerm {
    probability: f64,
    psi: StateVector,
    phi: StateVector,
}

impl ProcessTerm {
    pub fn new(probability: f64, psi: StateVector, phi: StateVector) -> Result<Self> {
        if psi.dim() != phi.dim() {
            return Err(Error::DimensionMismatch {
                left: psi.dim(),
                right: phi.dim(),
            });
        }
        if !probability.is_finite() || !(0.0..=1.0).contains(&probability) {
            return Err(Error::InvalidMixture {
                reason: format!("term probability {probability} is outside [0, 1]"),
            });
        }
        let overlap = phi.inner(&psi).norm();
        if overlap <= tolerance::ORTHOGONAL_TERM_TOL {
            return Err(Error::OrthogonalTerm { index: 0, overlap });
        }
        Ok(Self {
            probability,
            psi,
            phi,
        })
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    pub fn phi(&self) -> &StateVector {
        &self.phi
    }

    /// Transition amplitude `<phi|psi>` of this term.
    pub fn overlap(&self) -> Complex64 {
        self.phi.inner(&self.psi)
    }

    /// The normalized transition operator `|psi><phi| / <phi|psi>`.
    pub fn transition_operator(&self) -> Operator {
        let overlap = self.overlap();
        self.psi
            .outer(&self.phi)
            .scale(Complex64::new(1.0, 0.0) / overlap)
    }

    /// Weak value `<phi|A|psi> / <phi|psi>` of this term's process.
    ///
    /// No Hermiticity check here: mixtures apply it once for the whole
    /// observable.
    pub fn weak_value(&self, a: &Operator) -> Complex64 {
        a.matrix_element(&self.phi, &self.psi) / self.overlap()
    }
}

/// A classical probability distribution over processes.
#[derive(Debug, Clone)]
pub struct ProcessMixture {
    terms: Vec<ProcessTerm>,
}

impl ProcessMixture {
    /// Validates that the terms are non-empty, share one dimension, and
    /// carry weights summing to one.
    pub fn new(terms: Vec<ProcessTerm>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::EmptyMixture);
        };
        let dim = first.psi.dim();
        for term in &terms {
            if term.psi.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: term.psi.dim(),
                    right: dim,
                });
            }
        }
        let total: f64 = terms.iter().map(|t| t.probability).sum();
        if (total - 1.0).abs() > tolerance::WEIGHT_SUM_TOL {
            return Err(Error::InvalidMixture {
                reason: format!("probabilities sum to {total}, not one"),
            });
        }
        Ok(Self { terms })
    }

    pub fn dim(&self) -> usize {
        self.terms[0].psi.dim()
    }

    pub fn terms(&self) -> &[ProcessTerm] {
        &self.terms
    }

    /// Reassembles `sum_i p_i |psi_i><phi_i| / <phi_i|psi_i>` as a double
    /// state (provenance-free).
    pub fn reconstruct(&self) -> Result<DoubleState> {
        let mut acc = Operator::zeros(self.dim());
        for (index, term) in self.terms.iter().enumerate() {
            let overlap = term.overlap();
            if overlap.norm() <= tolerance::ORTHOGONAL_TERM_TOL {
                return Err(Error::OrthogonalTerm {
                    index,
                    overlap: overlap.norm(),
                });
            }
            acc = &acc
                + &term
                    .transition_operator()
                    .scale(Complex64::new(term.probability, 0.0));
        }
        DoubleState::from_operator(acc)
    }

    /// Classical average of the per-term weak values,
    /// `sum_i p_i <phi_i|A|psi_i> / <phi_i|psi_i>`; equals `tr(W A)` for
    /// the reconstructed `W` by linearity.
    pub fn expectation(&self, a: &Operator) -> Result<Complex64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: self.dim(),
            });
        }
        let deviation = a.hermiticity_deviation();
        if deviation > tolerance::HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tol: tolerance::HERMITIAN_TOL,
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.weak_value(a) * t.probability)
            .sum())
    }
}

/// The free choices of the expansion: an orthonormal working basis and a
/// probability vector of length `d + 1` (the last entry weights the
/// closing term).
#[derive(Debug, Clone)]
pub struct DecompositionPlan {
    basis: Vec<StateVector>,
    probabilities: Vec<f64>,
}

impl DecompositionPlan {
    /// Structural validation only; compatibility with a concrete `W` (zero
    /// rows must get zero probability, the first row must be nonzero) is
    /// checked when the plan is resolved against it.
    pub fn new(basis: Vec<StateVector>, probabilities: Vec<f64>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(Error::IncompleteBasis {
                reason: "empty basis".to_string(),
            });
        };
        let dim = first.dim();
        check_orthonormal_basis(dim, &basis)?;
        if probabilities.len() != dim + 1 {
            return Err(Error::PlanInvalid {
                reason: format!(
                    "expected {} probabilities (one per basis row plus the closing term), found {}",
                    dim + 1,
                    probabilities.len()
                ),
            });
        }
        for (k, p) in probabilities.iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0).contains(p) {
                return Err(Error::PlanInvalid {
                    reason: format!("probability {k} is {p}, outside [0, 1]"),
                });
            }
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > tolerance::WEIGHT_SUM_TOL {
            return Err(Error::PlanInvalid {
                reason: format!("probabilities sum to {total}, not one"),
            });
        }
        if *probabilities.last().unwrap() <= 0.0 {
            return Err(Error::PlanInvalid {
                reason: "the closing probability must be positive".to_string(),
            });
        }
        Ok(Self {
            basis,
            probabilities,
        })
    }

    /// The default plan for a given operator: the computational basis,
    /// reordered so the first row is nonzero, with half the weight on the
    /// closing term and the rest spread uniformly over the nonzero rows.
    pub fn default_for(w: &DoubleState) -> Result<Self> {
        let d = w.dim();
        let row_nonzero: Vec<bool> = (0..d)
            .map(|i| (0..d).any(|j| w.operator().entry(i, j).norm() > tolerance::ROW_ZERO_TOL))
            .collect();
        let Some(pivot) = row_nonzero.iter().position(|&nz| nz) else {
            return Err(Error::DegenerateRow1);
        };
        let mut order = vec![pivot];
        order.extend((0..d).filter(|&i| i != pivot));
        let basis: Vec<StateVector> = order
            .iter()
            .map(|&i| StateVector::basis_state(d, i))
            .collect::<Result<_>>()?;
        let nonzero_count = row_nonzero.iter().filter(|&&nz| nz).count();
        let share = 0.5 / nonzero_count as f64;
        let mut probabilities: Vec<f64> = order
            .iter()
            .map(|&i| if row_nonzero[i] { share } else { 0.0 })
            .collect();
        probabilities.push(0.5);
        Self::new(basis, probabilities)
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// A term of the expansion before normalization: the raw amplitudes are
/// arranged so that `<phi|psi> = 1` exactly.
#[derive(Debug, Clone)]
pub struct RawTerm {
    pub probability: f64,
    pub psi: Vec<Complex64>,
    pub phi: Vec<Complex64>,
}

/// A plan resolved against a concrete operator: the derived coefficients
/// and the raw (unnormalized) term states, all in computational
/// coordinates.
#[derive(Debug, Clone)]
pub struct ResolvedDecomposition {
    plan: DecompositionPlan,
    /// `alpha_i` for rows `2..=d` of the plan basis (`alphas[0]` is row 2).
    alphas: Vec<Complex64>,
    /// `beta_ij` for `i != j`, zero on the diagonal and on zero-probability
    /// rows; indices follow the plan basis.
    betas: Vec<Vec<Complex64>>,
    raw_terms: Vec<RawTerm>,
}

impl ResolvedDecomposition {
    pub fn plan(&self) -> &DecompositionPlan {
        &self.plan
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[Vec<Complex64>] {
        &self.betas
    }

    /// Raw terms in row order, the closing term last. Rows with zero
    /// probability are omitted.
    pub fn raw_terms(&self) -> &[RawTerm] {
        &self.raw_terms
    }

    /// Normalizes the raw terms into a [`ProcessMixture`].
    pub fn into_mixture(self) -> Result<ProcessMixture> {
        let terms = self
            .raw_terms
            .into_iter()
            .map(|raw| {
                ProcessTerm::new(
                    raw.probability,
                    StateVector::normalize(&raw.psi)?,
                    StateVector::normalize(&raw.phi)?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        ProcessMixture::new(terms)
    }
}

/// Resolves a plan against a double state, deriving every expansion
/// coefficient. See [`EXPANSION_CONVENTION`] for the exact conventions.
pub fn resolve_plan(w: &DoubleState, plan: &DecompositionPlan) -> Result<ResolvedDecomposition> {
    let d = w.dim();
    if plan.dim() != d {
        return Err(Error::DimensionMismatch {
            left: plan.dim(),
            right: d,
        });
    }
    let basis = plan.basis();
    let p = plan.probabilities();
    let p_last = p[d];

    // W in the plan basis.
    let wb: Vec<Vec<Complex64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| w.operator().matrix_element(&basis[i], &basis[j]))
                .collect()
        })
        .collect();
    let row_nonzero: Vec<bool> = wb
        .iter()
        .map(|row| row.iter().any(|e| e.norm() > tolerance::ROW_ZERO_TOL))
        .collect();
    if !row_nonzero[0] {
        return Err(Error::PlanInvalid {
            reason:
                "the first row of W vanishes in this basis; reorder the basis so row one is nonzero"
                    .to_string(),
        });
    }
    for i in 0..d {
        if row_nonzero[i] && p[i] <= 0.0 {
            return Err(Error::PlanInvalid {
                reason: format!(
                    "row {} of W is nonzero but its probability is {}",
                    i + 1,
                    p[i]
                ),
            });
        }
        if !row_nonzero[i] && p[i] != 0.0 {
            return Err(Error::PlanInvalid {
                reason: format!("row {} of W is zero but its probability is {}", i + 1, p[i]),
            });
        }
    }

    // alpha_i = (w_ii - p_i) / p_last, rows 2..=d; automatically zero on
    // zero rows (their diagonal vanishes along with their probability).
    let alphas: Vec<Complex64> = (1..d).map(|i| (wb[i][i] - p[i]) / p_last).collect();
    let alpha_sum: Complex64 = alphas.iter().sum();
    let closing_first = Complex64::new(1.0, 0.0) - alpha_sum;

    let zero = Complex64::new(0.0, 0.0);
    let mut betas = vec![vec![zero; d]; d];
    for j in 1..d {
        if p[0] > 0.0 {
            betas[0][j] = (wb[0][j] - p_last) / p[0];
        }
    }
    for i in 1..d {
        if p[i] <= 0.0 {
            continue;
        }
        let alpha_i = alphas[i - 1];
        betas[i][0] = (wb[i][0] - p_last * alpha_i * closing_first) / p[i];
        for j in 1..d {
            if j != i {
                betas[i][j] = (wb[i][j] - p_last * alpha_i) / p[i];
            }
        }
    }

    // Assemble raw terms in computational coordinates.
    let to_computational = |coeffs: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![zero; d];
        for (k, c) in coeffs.iter().enumerate() {
            for (slot, amp) in out.iter_mut().zip(basis[k].amplitudes()) {
                *slot += c * amp;
            }
        }
        out
    };

    let mut raw_terms = Vec::new();
    for i in 0..d {
        if p[i] <= 0.0 {
            continue;
        }
        let mut psi = vec![zero; d];
        psi[i] = Complex64::new(1.0, 0.0);
        let mut phi = vec![zero; d];
        for j in 0..d {
            phi[j] = if j == i {
                Complex64::new(1.0, 0.0)
            } else {
                betas[i][j].conj()
            };
        }
        raw_terms.push(RawTerm {
            probability: p[i],
            psi: to_computational(&psi),
            phi: to_computational(&phi),
        });
    }
    // Closing term: psi = w_1 + sum alpha_i w_i, phi has conjugated
    // coefficients so <phi|psi> telescopes to exactly one.
    let mut closing_psi = vec![Complex64::new(1.0, 0.0)];
    closing_psi.extend(alphas.iter().copied());
    let mut closing_phi = vec![closing_first.conj()];
    closing_phi.extend(std::iter::repeat_n(Complex64::new(1.0, 0.0), d - 1));
    raw_terms.push(RawTerm {
        probability: p_last,
        psi: to_computational(&closing_psi),
        phi: to_computational(&closing_phi),
    });

    Ok(ResolvedDecomposition {
        plan: plan.clone(),
        alphas,
        betas,
        raw_terms,
    })
}

/// Expands a trace-one operator into at most `d + 1` weighted processes.
///
/// With no plan, [`DecompositionPlan::default_for`] chooses the
/// computational basis (reordered for a nonzero first row) and puts half
/// the weight on the closing term.
pub fn decompose_processes(
    w: &DoubleState,
    plan: Option<&DecompositionPlan>,
) -> Result<ProcessMixture> {
    let resolved = match plan {
        Some(plan) => resolve_plan(w, plan)?,
        None => resolve_plan(w, &DecompositionPlan::default_for(w)?)?,
    };
    resolved.into_mixture()
}

/// One term of the singular expansion `W = sum_i r_i |u_i><v_i|`.
#[derive(Debug, Clone)]
pub struct SvdTerm {
    /// Nonnegative singular value.
    pub singular_value: f64,
    pub u: StateVector,
    pub v: StateVector,
    /// Whether the term admits a normalized process interpretation, i.e.
    /// `|<u|v>|` exceeds [`tolerance::SVD_PHYSICAL_TOL`]. Orthogonal pairs
    /// carry weight in the expansion but describe no pre/post-selected
    /// process.
    pub physical: bool,
}

/// Singular expansion of a double state, largest singular value first;
/// exact zero modes are dropped.
pub fn svd_decompose(w: &DoubleState) -> Result<Vec<SvdTerm>> {
    let svd = w
        .operator()
        .matrix()
        .clone()
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical {
            context: "singular-value iteration did not converge".to_string(),
        })?;
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut terms = Vec::new();
    for k in order {
        let r = svd.singular_values[k];
        if r <= tolerance::SVD_RANK_TOL {
            continue;
        }
        let u_k: Vec<Complex64> = u.column(k).iter().copied().collect();
        let v_k: Vec<Complex64> = v_t.row(k).iter().map(|c| c.conj()).collect();
        let u_state = StateVector::normalize(&u_k)?;
        let v_state = StateVector::normalize(&v_k)?;
        let physical = u_state.inner(&v_state).norm() > tolerance::SVD_PHYSICAL_TOL;
        terms.push(SvdTerm {
            singular_value: r,
            u: u_state,
            v: v_state,
            physical,
        });
    }
    Ok(terms)
}

/// Reassembles `sum_i r_i |u_i><v_i|` from singular terms.
pub fn svd_reconstruct(terms: &[SvdTerm], dim: usize) -> Operator {
    let mut acc = Operator::zeros(dim);
    for term in terms {
        acc = &acc
            + &term
                .u
                .outer(&term.v)
                .scale(Complex64::new(term.singular_value, 0.0));
    }
    acc
}

/// Three-level states and spin operators for the worked example.
pub mod spin1 {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `S_z` eigenstate with eigenvalue `+1` (first basis vector).
    pub fn z_plus() -> StateVector {
        StateVector::basis_state(3, 0).expect("dimension 3 is supported")
    }

    /// `S_z` eigenstate with eigenvalue `0`.
    pub fn z_zero() -> StateVector {
        StateVector::basis_state(3, 1).expect("dimension 3 is supported")
    }

    /// `S_z` eigenstate with eigenvalue `-1`.
    pub fn z_minus() -> StateVector {
        StateVector::basis_state(3, 2).expect("dimension 3 is supported")
    }

    /// `S_x` eigenstate with eigenvalue `+1`: `(1/2, 1/sqrt(2), 1/2)` in
    /// the `z` basis, so `<z_plus|x_plus> = 1/2`.
    pub fn x_plus() -> StateVector {
        let s = 1.0 / 2.0f64.sqrt();
        StateVector::normalize(&[c(0.5, 0.0), c(s, 0.0), c(0.5, 0.0)])
            .expect("amplitudes are unit-norm")
    }

    /// The closing state `(z_plus - z_zero - z_minus)/sqrt(3)` of the
    /// four-term expansion.
    pub fn omega() -> StateVector {
        StateVector::normalize(&[c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)])
            .expect("amplitudes are nonzero")
    }

    /// Spin-1 `S_x`: `1/sqrt(2)` on the first off-diagonals.
    pub fn s_x() -> Operator {
        let s = 1.0 / 2.0f64.sqrt();
        Operator::from_rows(&[
            vec![c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)],
            vec![c(s, 0.0), c(0.0, 0.0), c(s, 0.0)],
            vec![c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)],
        ])
        .expect("matrix is well-formed")
    }

    /// Spin-1 `S_z`: `diag(1, 0, -1)`.
    pub fn s_z() -> Operator {
        Operator::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .expect("matrix is well-formed")
    }
}

/// The worked three-level example: the process preparing the `S_x = +1`
/// state and post-selecting the `S_z = +1` state, expanded into four
/// processes with uniform probabilities `1/4`.
///
/// The four prepared states are `z_plus`, `z_zero`, `z_minus`, and
/// `omega = (z_plus - z_zero - z_minus)/sqrt(3)`; the matched
/// post-selections depend on `alpha`. The expansion is exact for every
/// complex `alpha` — including `alpha = 0`, where rows two and three of
/// `W` vanish and a freshly derived plan would have to reassign their
/// weight — so the returned report's reconstruction residual sits at
/// rounding level. The report (tolerance `1e-8`) records the trace check,
/// the residual, and, at `alpha = 1/2`, the self-adjointness deviation.
pub fn spin1_example(alpha: Complex64) -> (DoubleState, ProcessMixture, MeasureReport) {
    let c = Complex64::new;
    let one = c(1.0, 0.0);
    let root2 = 2.0f64.sqrt();

    let w = DoubleState::from_states(&spin1::x_plus(), &spin1::z_plus(), alpha)
        .expect("the example pair has overlap 1/2");

    // Raw post-selections with <phi_i|psi_i> = 1, derived by resolving the
    // uniform plan in the z basis (alpha_2 = alpha_3 = -1).
    let a = alpha.conj();
    let raw_phis: [[Complex64; 3]; 4] = [
        [
            one,
            c(4.0 * root2, 0.0) * (one - a) - one,
            c(3.0, 0.0) - c(4.0, 0.0) * a,
        ],
        [c(4.0 * root2, 0.0) * a + c(3.0, 0.0), one, one],
        [c(4.0, 0.0) * a + c(3.0, 0.0), one, one],
        [c(3.0, 0.0), one, one],
    ];
    let psis = [
        spin1::z_plus(),
        spin1::z_zero(),
        spin1::z_minus(),
        spin1::omega(),
    ];
    let terms: Vec<ProcessTerm> = psis
        .into_iter()
        .zip(raw_phis)
        .map(|(psi, phi)| {
            let phi = StateVector::normalize(&phi).expect("post-selections are never zero");
            ProcessTerm::new(0.25, psi, phi).expect("overlaps are nonzero by construction")
        })
        .collect();
    let mixture = ProcessMixture::new(terms).expect("four terms of weight 1/4");

    let mut report = MeasureReport::new(1e-8);
    report.record("trace(W) = 1", one, w.operator().trace());
    let residual = mixture
        .reconstruct()
        .map(|r| r.operator().max_abs_diff(w.operator()))
        .unwrap_or(f64::INFINITY);
    report.record("reconstruction residual", c(0.0, 0.0), c(residual, 0.0));
    if alpha == c(0.5, 0.0) {
        report.record(
            "self-adjointness at alpha = 1/2",
            c(0.0, 0.0),
            c(w.operator().hermiticity_deviation(), 0.0),
        );
    }
    (w, mixture, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_double_state(dim: usize) -> DoubleState {
        // A deterministic non-Hermitian trace-one operator with all rows
        // nonzero: a double state of two fixed states at complex alpha.
        let psi_raw: Vec<Complex64> = (0..dim)
            .map(|k| c(1.0 + 0.3 * k as f64, 0.2 - 0.1 * k as f64))
            .collect();
        let phi_raw: Vec<Complex64> = (0..dim)
            .map(|k| c(0.5 - 0.2 * k as f64, -0.3 + 0.25 * k as f64))
            .collect();
        let psi = StateVector::normalize(&psi_raw).unwrap();
        let phi = StateVector::normalize(&phi_raw).unwrap();
        DoubleState::from_states(&psi, &phi, c(0.7, -0.4)).unwrap()
    }

    #[test]
    fn process_term_validates_probability_and_overlap() {
        let e0 = StateVector::basis_state(2, 0).unwrap();
        let e1 = StateVector::basis_state(2, 1).unwrap();
        assert!(matches!(
            ProcessTerm::new(1.5, e0.clone(), e0.clone()).unwrap_err(),
            Error::InvalidMixture { .. }
        ));
        assert!(matches!(
            ProcessTerm::new(0.5, e0.clone(), e1).unwrap_err(),
            Error::OrthogonalTerm { .. }
        ));
        let t = ProcessTerm::new(0.5, e0.clone(), e0).unwrap();
        assert!(t.transition_operator().max_abs_diff(&t.psi().projector()) < 1e-15);
    }

    #[test]
    fn mixture_requires_normalized_weights() {
        let e0 = StateVector::basis_state(2, 0).unwrap();
        let t = ProcessTerm::new(0.4, e0.clone(), e0).unwrap();
        assert!(matches!(
            ProcessMixture::new(vec![t.clone(), t.clone()]).unwrap_err(),
            Error::InvalidMixture { .. }
        ));
        assert!(matches!(
            ProcessMixture::new(vec![]).unwrap_err(),
            Error::EmptyMixture
        ));
    }

    #[test]
    fn two_term_direct_reading_reconstructs_the_double_state() {
        // For real alpha in [0, 1] the defining two-term form is itself a
        // mixture: alpha on psi -> phi plus (1 - alpha) on phi -> psi.
        let psi = StateVector::normalize(&[c(0.8, 0.1), c(0.3, -0.4)]).unwrap();
        let phi = StateVector::normalize(&[c(0.2, 0.5), c(0.7, 0.0)]).unwrap();
        let alpha = 0.3;
        let w = DoubleState::from_states(&psi, &phi, c(alpha, 0.0)).unwrap();
        let mixture = ProcessMixture::new(vec![
            ProcessTerm::new(alpha, psi.clone(), phi.clone()).unwrap(),
            ProcessTerm::new(1.0 - alpha, phi, psi).unwrap(),
        ])
        .unwrap();
        let residual = mixture
            .reconstruct()
            .unwrap()
            .operator()
            .max_abs_diff(w.operator());
        assert!(residual < 1e-13);
    }

    #[test]
    fn default_plan_reorders_for_a_nonzero_first_row() {
        // |e1><e1| has a zero first row; the default plan must pivot to
        // row two and zero out the weights of the vanishing rows.
        let w = DoubleState::from_operator(StateVector::basis_state(3, 1).unwrap().projector())
            .unwrap();
        let plan = DecompositionPlan::default_for(&w).unwrap();
        assert_relative_eq!(plan.basis()[0].amplitudes()[1].re, 1.0);
        assert_eq!(plan.probabilities().len(), 4);
        assert_relative_eq!(plan.probabilities()[0], 0.5);
        assert_relative_eq!(plan.probabilities()[1], 0.0);
        assert_relative_eq!(plan.probabilities()[2], 0.0);
        assert_relative_eq!(plan.probabilities()[3], 0.5);
        let mixture = decompose_processes(&w, None).unwrap();
        assert!(mixture.terms().len() <= 4);
        let residual = mixture
            .reconstruct()
            .unwrap()
            .operator()
            .max_abs_diff(w.operator());
        assert!(residual < 1e-12, "residual {residual:.3e}");
    }

    #[test]
    fn default_plan_round_trips_across_dimensions() {
        for dim in 2..=6 {
            let w = sample_double_state(dim);
            let mixture = decompose_processes(&w, None).unwrap();
            assert!(mixture.terms().len() <= dim + 1);
            let rebuilt = mixture.reconstruct().unwrap();
            let residual = rebuilt.operator().max_abs_diff(w.operator());
            assert!(residual < 1e-11, "dim {dim}: residual {residual:.3e}");
        }
    }

    #[test]
    fn raw_terms_have_unit_overlap_before_normalization() {
        let w = sample_double_state(4);
        let resolved = resolve_plan(&w, &DecompositionPlan::default_for(&w).unwrap()).unwrap();
        for raw in resolved.raw_terms() {
            let overlap: Complex64 = raw
                .phi
                .iter()
                .zip(&raw.psi)
                .map(|(f, s)| f.conj() * s)
                .sum();
            assert!((overlap - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn custom_plans_give_different_mixtures_with_the_same_reconstruction() {
        let w = sample_double_state(3);
        let uniform = DecompositionPlan::new(
            (0..3)
                .map(|k| StateVector::basis_state(3, k).unwrap())
                .collect(),
            vec![0.25, 0.25, 0.25, 0.25],
        )
        .unwrap();
        let skewed = DecompositionPlan::new(
            (0..3)
                .map(|k| StateVector::basis_state(3, k).unwrap())
                .collect(),
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let first = decompose_processes(&w, Some(&uniform)).unwrap();
        let second = decompose_processes(&w, Some(&skewed)).unwrap();
        // Same operator, different distributions over processes.
        let r1 = first.reconstruct().unwrap();
        let r2 = second.reconstruct().unwrap();
        assert!(r1.operator().max_abs_diff(w.operator()) < 1e-12);
        assert!(r2.operator().max_abs_diff(w.operator()) < 1e-12);
        let p1 = first.terms()[0].probability();
        let p2 = second.terms()[0].probability();
        assert!((p1 - p2).abs() > 0.1);
    }

    #[test]
    fn rotated_basis_plans_work_too() {
        let w = sample_double_state(3);
        let seed = StateVector::normalize(&[c(0.4, 0.3), c(-0.5, 0.2), c(0.1, 0.65)]).unwrap();
        let mut basis = vec![seed.clone()];
        basis.extend(seed.orthogonal_complement_basis());
        let plan = DecompositionPlan::new(basis, vec![0.2, 0.2, 0.1, 0.5]).unwrap();
        let mixture = decompose_processes(&w, Some(&plan)).unwrap();
        let residual = mixture
            .reconstruct()
            .unwrap()
            .operator()
            .max_abs_diff(w.operator());
        assert!(residual < 1e-11, "residual {residual:.3e}");
    }

    #[test]
    fn plan_validation_rejects_structural_defects() {
        let basis: Vec<StateVector> = (0..2)
            .map(|k| StateVector::basis_state(2, k).unwrap())
            .collect();
        assert!(matches!(
            DecompositionPlan::new(basis.clone(), vec![0.5, 0.5]).unwrap_err(),
            Error::PlanInvalid { .. }
        ));
        assert!(matches!(
            DecompositionPlan::new(basis.clone(), vec![0.5, 0.6, -0.1]).unwrap_err(),
            Error::PlanInvalid { .. }
        ));
        assert!(matches!(
            DecompositionPlan::new(basis.clone(), vec![0.5, 0.5, 0.0]).unwrap_err(),
            Error::PlanInvalid { .. }
        ));
        let skewed = vec![basis[0].clone(), basis[0].clone()];
        assert!(matches!(
            DecompositionPlan::new(skewed, vec![0.25, 0.25, 0.5]).unwrap_err(),
            Error::IncompleteBasis { .. }
        ));
    }

    #[test]
    fn resolve_rejects_plans_inconsistent_with_the_operator() {
        // |e0><e0| in d = 3: rows two and three vanish.
        let w = DoubleState::from_operator(StateVector::basis_state(3, 0).unwrap().projector())
            .unwrap();
        let basis: Vec<StateVector> = (0..3)
            .map(|k| StateVector::basis_state(3, k).unwrap())
            .collect();
        // Positive probability on a zero row.
        let plan = DecompositionPlan::new(basis.clone(), vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        assert!(matches!(
            resolve_plan(&w, &plan).unwrap_err(),
            Error::PlanInvalid { .. }
        ));
        // First row zero in a reversed basis.
        let reversed: Vec<StateVector> = (0..3)
            .rev()
            .map(|k| StateVector::basis_state(3, k).unwrap())
            .collect();
        let plan = DecompositionPlan::new(reversed, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(matches!(
            resolve_plan(&w, &plan).unwrap_err(),
            Error::PlanInvalid { .. }
        ));
    }

    #[test]
    fn mixture_expectation_matches_the_trace_pairing() {
        let w = sample_double_state(3);
        let mixture = decompose_processes(&w, None).unwrap();
        let a = Operator::from_rows(&[
            vec![c(0.4, 0.0), c(0.1, -0.3), c(0.0, 0.2)],
            vec![c(0.1, 0.3), c(-0.7, 0.0), c(0.5, 0.0)],
            vec![c(0.0, -0.2), c(0.5, 0.0), c(1.2, 0.0)],
        ])
        .unwrap();
        let by_terms = mixture.expectation(&a).unwrap();
        let by_trace = w.trace_expectation(&a).unwrap();
        assert!((by_terms - by_trace).norm() < 1e-11);
    }

    #[test]
    fn svd_expansion_reconstructs_and_orders_descending() {
        let w = sample_double_state(4);
        let terms = svd_decompose(&w).unwrap();
        assert!(terms.len() <= 4);
        for pair in terms.windows(2) {
            assert!(pair[0].singular_value >= pair[1].singular_value);
        }
        let rebuilt = svd_reconstruct(&terms, 4);
        assert!(rebuilt.max_abs_diff(w.operator()) < 1e-12);
    }

    #[test]
    fn svd_flags_orthogonal_pairs_as_unphysical() {
        // W = 2|e0><e1| + |e2><e2| has trace one; its dominant singular
        // pair is (e0, e1), orthogonal, hence no process interpretation.
        let e0 = StateVector::basis_state(3, 0).unwrap();
        let e1 = StateVector::basis_state(3, 1).unwrap();
        let e2 = StateVector::basis_state(3, 2).unwrap();
        let w = DoubleState::from_operator(&e0.outer(&e1).scale(c(2.0, 0.0)) + &e2.projector())
            .unwrap();
        let terms = svd_decompose(&w).unwrap();
        assert_eq!(terms.len(), 2);
        assert_relative_eq!(terms[0].singular_value, 2.0, epsilon = 1e-12);
        assert!(!terms[0].physical);
        assert_relative_eq!(terms[1].singular_value, 1.0, epsilon = 1e-12);
        assert!(terms[1].physical);
        // The expansion still reconstructs W even though one term has no
        // process reading.
        assert!(svd_reconstruct(&terms, 3).max_abs_diff(w.operator()) < 1e-13);
    }

    #[test]
    fn svd_of_a_projector_is_the_projector() {
        let v = StateVector::normalize(&[c(0.6, 0.2), c(0.1, -0.7)]).unwrap();
        let w = DoubleState::from_operator(v.projector()).unwrap();
        let terms = svd_decompose(&w).unwrap();
        assert_eq!(terms.len(), 1, "zero modes must be dropped");
        assert_relative_eq!(terms[0].singular_value, 1.0, epsilon = 1e-12);
        assert!(terms[0].physical);
        assert!(terms[0].u.inner(&terms[0].v).norm() > 1.0 - 1e-12);
    }

    #[test]
    fn spin1_states_match_their_spectral_definitions() {
        // x_plus must be the +1 eigenvector of S_x; derive it from the
        // spectral decomposition rather than trusting the constant.
        let sd = spin1::s_x()
            .spectral_decomposition(tolerance::DEGENERACY_TOL)
            .unwrap();
        let top = sd.eigenvalues.len() - 1;
        assert_relative_eq!(sd.eigenvalues[top], 1.0, epsilon = 1e-12);
        let p = &sd.projectors[top];
        let x = spin1::x_plus();
        assert!((p.expectation(&x) - c(1.0, 0.0)).norm() < 1e-12);
        // <z+|x+> = 1/2 exactly.
        let overlap = spin1::z_plus().inner(&x);
        assert_relative_eq!(overlap.re, 0.5, epsilon = 1e-14);
        assert!(overlap.im.abs() < 1e-14);
    }

    #[test]
    fn spin1_example_matches_the_frozen_operator_form() {
        // W = [[1, sqrt(2)(1-a), 1-a], [sqrt(2) a, 0, 0], [a, 0, 0]].
        let alpha = c(0.3, 0.6);
        let (w, _, _) = spin1_example(alpha);
        let root2 = 2.0f64.sqrt();
        let one = c(1.0, 0.0);
        let expected = Operator::from_rows(&[
            vec![one, (one - alpha) * root2, one - alpha],
            vec![alpha * root2, c(0.0, 0.0), c(0.0, 0.0)],
            vec![alpha, c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(w.operator().max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn spin1_example_reconstructs_exactly_for_arbitrary_complex_alpha() {
        for alpha in [
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.5, 0.0),
            c(-0.8, 1.7),
            c(0.3, -2.2),
        ] {
            let (w, mixture, report) = spin1_example(alpha);
            assert_eq!(mixture.terms().len(), 4);
            let residual = mixture
                .reconstruct()
                .unwrap()
                .operator()
                .max_abs_diff(w.operator());
            assert!(residual < 1e-12, "alpha {alpha}: residual {residual:.3e}");
            assert!(report.all_pass(), "alpha {alpha}: {:?}", report.failures());
        }
    }

    #[test]
    fn spin1_example_prepared_states_are_the_z_basis_plus_omega() {
        let (_, mixture, _) = spin1_example(c(0.7, 0.0));
        let expected = [
            spin1::z_plus(),
            spin1::z_zero(),
            spin1::z_minus(),
            spin1::omega(),
        ];
        for (term, reference) in mixture.terms().iter().zip(&expected) {
            assert_relative_eq!(term.probability(), 0.25);
            assert!(term.psi().inner(reference).norm() > 1.0 - 1e-13);
        }
    }

    #[test]
    fn spin1_example_agrees_with_the_general_construction() {
        // Away from alpha = 0 the uniform plan resolves, and must produce
        // the same four processes as the closed-form fixture.
        let alpha = c(0.7, -0.2);
        let (w, fixture, _) = spin1_example(alpha);
        let plan = DecompositionPlan::new(
            vec![spin1::z_plus(), spin1::z_zero(), spin1::z_minus()],
            vec![0.25, 0.25, 0.25, 0.25],
        )
        .unwrap();
        let derived = decompose_processes(&w, Some(&plan)).unwrap();
        assert_eq!(derived.terms().len(), 4);
        for (a, b) in fixture.terms().iter().zip(derived.terms()) {
            assert_relative_eq!(a.probability(), b.probability());
            assert!(a.psi().inner(b.psi()).norm() > 1.0 - 1e-12);
            assert!(a.phi().inner(b.phi()).norm() > 1.0 - 1e-12);
        }
    }

    fn arb_trace_one(dim: usize) -> impl Strategy<Value = DoubleState> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_filter_map(
            "trace too small to normalize",
            move |raw| {
                let rows: Vec<Vec<Complex64>> = (0..dim)
                    .map(|i| {
                        (0..dim)
                            .map(|j| c(raw[i * dim + j].0, raw[i * dim + j].1))
                            .collect()
                    })
                    .collect();
                let g = Operator::from_rows(&rows).ok()?;
                let trace = g.trace();
                if trace.norm() < 0.3 {
                    return None;
                }
                DoubleState::from_operator(g.scale(c(1.0, 0.0) / trace)).ok()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn prop_default_decomposition_reconstructs(w in arb_trace_one(4)) {
            let mixture = decompose_processes(&w, None).unwrap();
            prop_assert!(mixture.terms().len() <= 5);
            let rebuilt = mixture.reconstruct().unwrap();
            prop_assert!(rebuilt.operator().max_abs_diff(w.operator()) < 1e-10);
        }

        #[test]
        fn prop_svd_reconstructs_generic_operators(w in arb_trace_one(3)) {
            let terms = svd_decompose(&w).unwrap();
            prop_assert!(terms.len() <= 3);
            prop_assert!(svd_reconstruct(&terms, 3).max_abs_diff(w.operator()) < 1e-11);
        }

        #[test]
        fn prop_spin1_reconstruction_is_exact_on_the_complex_plane(
            (re, im) in (-3.0..3.0f64, -3.0..3.0f64)
        ) {
            let alpha = c(re, im);
            let (w, mixture, _) = spin1_example(alpha);
            let residual = mixture
                .reconstruct()
                .unwrap()
                .operator()
                .max_abs_diff(w.operator());
            prop_assert!(residual < 1e-11);
        }
    }
}

//! Unitary evolution of a pre/post-selected process across a time window.
//!
//! A process runs from preparation at `t_i` to post-selection at `t_f`
//! under a one-parameter unitary group `U(t)`. Between the endpoints the
//! double state interpolates as
//!
//! ```text
//! W(t) = alpha U(t - t_i)|psi><phi|U(t - t_f)' / D
//!      + (1 - alpha) U(t - t_f)|phi><psi|U(t - t_i)' / conj(D)
//! ```
//!
//! where `D = <phi|U(t_f - t_i)|psi>` is the transition amplitude across
//! the whole window — time-independent, so the measure stays consistently
//! normalized at every intermediate time. Every process has a *dual*
//! running backwards through the same window with the roles of the two
//! states (and the weights `alpha`, `1 - alpha`) exchanged; both describe
//! the same family of operators `W(t)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, unitary_eigensystem, Operator, StateVector};
use crate::measure::{DoubleState, Provenance};
use crate::tolerance;

/// A time window `[t_i, t_f]` equipped with a one-parameter unitary group.
///
/// The group is stored as an eigensystem `U(t) = V diag(exp(i theta_k t)) V'`,
/// so propagators at arbitrary (also negative) times come out exactly
/// unitary and satisfy `U(s + t) = U(s) U(t)` and `U(-t) = U(t)'` to
/// machine precision.
#[derive(Debug, Clone)]
pub struct ProcessWindow {
    t_i: f64,
    t_f: f64,
    phases: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl ProcessWindow {
    fn check_span(t_i: f64, t_f: f64) -> Result<()> {
        if !t_i.is_finite() || !t_f.is_finite() {
            return Err(Error::NonFinite {
                context: "window endpoints".to_string(),
            });
        }
        if t_i >= t_f {
            return Err(Error::InvalidWindow { t_i, t_f });
        }
        Ok(())
    }

    /// Window generated by a Hermitian Hamiltonian: `U(t) = exp(-i H t)`.
    pub fn with_hamiltonian(t_i: f64, t_f: f64, h: &Operator) -> Result<Self> {
        Self::check_span(t_i, t_f)?;
        let deviation = h.hermiticity_deviation();
        if deviation > tolerance::HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tol: tolerance::HERMITIAN_TOL,
            });
        }
        let (energies, vectors) = hermitian_eigen(h.matrix());
        Ok(Self {
            t_i,
            t_f,
            phases: energies.iter().map(|e| -e).collect(),
            vectors,
        })
    }

    /// Window whose dynamics is given by the unitary over one unit of
    /// time: `U(1) = u`, extended to all real times through the principal
    /// eigenphases of `u`.
    pub fn with_unit_step(t_i: f64, t_f: f64, u: &Operator) -> Result<Self> {
        Self::check_span(t_i, t_f)?;
        let deviation = u.unitarity_deviation();
        if deviation > tolerance::UNITARY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tol: tolerance::UNITARY_TOL,
            });
        }
        let (phases, vectors) = unitary_eigensystem(u.matrix());
        let window = Self {
            t_i,
            t_f,
            phases,
            vectors,
        };
        debug_assert!(
            window.unitary(1.0).max_abs_diff(u) < 1e-9,
            "eigenphase reconstruction drifted from the supplied unit step"
        );
        Ok(window)
    }

    pub fn t_i(&self) -> f64 {
        self.t_i
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && t >= self.t_i && t <= self.t_f
    }

    /// The propagator `U(t)` for any real `t` (negative times give the
    /// adjoint, by the group law).
    pub fn unitary(&self, t: f64) -> Operator {
        let d = self.dim();
        let diag = DVector::from_iterator(
            d,
            self.phases
                .iter()
                .map(|p| Complex64::from_polar(1.0, p * t)),
        );
        let scaled = &self.vectors * DMatrix::from_diagonal(&diag);
        Operator::from_matrix(scaled * self.vectors.adjoint())
    }

    /// Applies `U(t)` to a state.
    pub fn propagate(&self, state: &StateVector, t: f64) -> StateVector {
        assert_eq!(self.dim(), state.dim(), "propagate dimension mismatch");
        self.unitary(t).apply_unit(state)
    }
}

/// The double state of the process `psi -> phi` at an intermediate time
/// `t` of the window, built with the time-independent denominator
/// `D = <phi|U(t_f - t_i)|psi>`.
///
/// At the endpoints this reduces to the static construction on
/// `(psi, U(t_i - t_f) phi)` and `(U(t_f - t_i) psi, phi)` respectively,
/// and for all `t` it evolves covariantly:
/// `W(t_2) = U(t_2 - t_1) W(t_1) U(t_2 - t_1)'`.
pub fn evolve_double_state(
    psi: &StateVector,
    phi: &StateVector,
    alpha: Complex64,
    window: &ProcessWindow,
    t: f64,
) -> Result<DoubleState> {
    if psi.dim() != window.dim() || phi.dim() != window.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim().min(phi.dim()),
            right: window.dim(),
        });
    }
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::NonFinite {
            context: "alpha".to_string(),
        });
    }
    if !window.contains(t) {
        return Err(Error::TimeOutOfWindow {
            t,
            t_i: window.t_i,
            t_f: window.t_f,
        });
    }
    let span = window.t_f - window.t_i;
    let denominator = window.unitary(span).matrix_element(phi, psi);
    let forward_state = window.propagate(psi, t - window.t_i);
    let backward_state = window.propagate(phi, t - window.t_f);
    if denominator.norm() >= tolerance::IDENTICAL_OVERLAP {
        // The evolved pair is the same ray at every t; the process is a
        // single evolving state.
        return DoubleState::from_states(&forward_state, &backward_state, alpha);
    }
    if denominator.norm() <= tolerance::OVERLAP_FLOOR {
        return Err(Error::OrthogonalPair {
            overlap: denominator.norm(),
            floor: tolerance::OVERLAP_FLOOR,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let forward = forward_state
        .outer(&backward_state)
        .scale(alpha / denominator);
    let backward = backward_state
        .outer(&forward_state)
        .scale((one - alpha) / denominator.conj());
    Ok(DoubleState::with_provenance(
        &forward + &backward,
        Provenance {
            psi: forward_state,
            phi: backward_state,
            alpha,
        },
    ))
}

/// The dual of the process `psi -> phi`: the pair
/// `(preparation, post_selection) = (U(t_i - t_f) phi, U(t_f - t_i) psi)`
/// running through the same window.
///
/// Evolving the dual with weight `1 - alpha` reproduces `W(t)` exactly;
/// taking the dual twice returns the original pair.
pub fn dual_process(
    psi: &StateVector,
    phi: &StateVector,
    window: &ProcessWindow,
) -> Result<(StateVector, StateVector)> {
    if psi.dim() != window.dim() || phi.dim() != window.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim().min(phi.dim()),
            right: window.dim(),
        });
    }
    let span = window.t_f - window.t_i;
    Ok((window.propagate(phi, -span), window.propagate(psi, span)))
}

/// Checks the defining identity of the dual: the double state of
/// `psi -> phi` at weight `alpha` equals the double state of its dual at
/// weight `1 - alpha`, entrywise within `tol`, at the given time.
pub fn verify_dual_equivalence(
    psi: &StateVector,
    phi: &StateVector,
    alpha: Complex64,
    window: &ProcessWindow,
    t: f64,
    tol: f64,
) -> Result<bool> {
    let original = evolve_double_state(psi, phi, alpha, window, t)?;
    let (preparation, post_selection) = dual_process(psi, phi, window)?;
    let one = Complex64::new(1.0, 0.0);
    let dual = evolve_double_state(&preparation, &post_selection, one - alpha, window, t)?;
    Ok(original.operator().max_abs_diff(dual.operator()) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_hamiltonian() -> Operator {
        Operator::from_rows(&[
            vec![c(0.3, 0.0), c(0.8, -0.2)],
            vec![c(0.8, 0.2), c(-1.1, 0.0)],
        ])
        .unwrap()
    }

    fn sample_pair() -> (StateVector, StateVector) {
        (
            StateVector::normalize(&[c(0.7, 0.1), c(0.4, -0.5)]).unwrap(),
            StateVector::normalize(&[c(0.2, -0.3), c(0.9, 0.2)]).unwrap(),
        )
    }

    #[test]
    fn window_validates_its_inputs() {
        let h = sample_hamiltonian();
        assert!(matches!(
            ProcessWindow::with_hamiltonian(1.0, 1.0, &h).unwrap_err(),
            Error::InvalidWindow { .. }
        ));
        let skew = Operator::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            ProcessWindow::with_hamiltonian(0.0, 1.0, &skew).unwrap_err(),
            Error::NotHermitian { .. }
        ));
        assert!(matches!(
            ProcessWindow::with_unit_step(0.0, 1.0, &skew).unwrap_err(),
            Error::NotUnitary { .. }
        ));
    }

    #[test]
    fn propagators_form_a_unitary_group() {
        let window = ProcessWindow::with_hamiltonian(-0.5, 2.0, &sample_hamiltonian()).unwrap();
        for t in [-1.3, 0.0, 0.7, 2.9] {
            assert!(window.unitary(t).unitarity_deviation() < 1e-13);
        }
        let composed = &window.unitary(0.6) * &window.unitary(1.1);
        assert!(composed.max_abs_diff(&window.unitary(1.7)) < 1e-13);
        let inverse = window.unitary(0.8).adjoint();
        assert!(inverse.max_abs_diff(&window.unitary(-0.8)) < 1e-14);
    }

    #[test]
    fn zero_hamiltonian_freezes_the_process() {
        let (psi, phi) = sample_pair();
        let window = ProcessWindow::with_hamiltonian(0.0, 1.0, &Operator::zeros(2)).unwrap();
        let alpha = c(0.4, 0.7);
        let evolved = evolve_double_state(&psi, &phi, alpha, &window, 0.63).unwrap();
        let frozen = DoubleState::from_states(&psi, &phi, alpha).unwrap();
        assert!(evolved.operator().max_abs_diff(frozen.operator()) < 1e-13);
    }

    #[test]
    fn unit_step_window_reproduces_its_generator() {
        // A rotation mixing both axes, with distinct eigenphases.
        let theta = 0.9f64;
        let u = Operator::from_rows(&[
            vec![c(theta.cos(), 0.0), c(-theta.sin(), 0.0)],
            vec![c(theta.sin(), 0.0), c(theta.cos(), 0.0)],
        ])
        .unwrap();
        let window = ProcessWindow::with_unit_step(0.0, 3.0, &u).unwrap();
        assert!(window.unitary(1.0).max_abs_diff(&u) < 1e-12);
        assert!(window.unitary(2.0).max_abs_diff(&(&u * &u)) < 1e-12);
        // Fractional times give the principal root.
        let half = window.unitary(0.5);
        assert!((&half * &half).max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn unit_step_handles_degenerate_real_part() {
        // sigma_x has eigenphases {0, pi}: cos parts 1 and -1. A quarter
        // turn exp(i pi sigma_x / 2)... instead take U = i sigma_x, whose
        // eigenphases +-pi/2 share the same cosine and force the sine
        // split.
        let u = Operator::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let window = ProcessWindow::with_unit_step(0.0, 1.0, &u).unwrap();
        assert!(window.unitary(1.0).max_abs_diff(&u) < 1e-12);
        assert!(window.unitary(-1.0).max_abs_diff(&u.adjoint()) < 1e-12);
    }

    #[test]
    fn evolution_matches_static_form_at_both_endpoints() {
        let (psi, phi) = sample_pair();
        let window = ProcessWindow::with_hamiltonian(0.2, 1.7, &sample_hamiltonian()).unwrap();
        let alpha = c(0.8, -0.3);
        let span = window.t_f() - window.t_i();

        let at_start = evolve_double_state(&psi, &phi, alpha, &window, window.t_i()).unwrap();
        let pulled_back = window.propagate(&phi, -span);
        let expected_start = DoubleState::from_states(&psi, &pulled_back, alpha).unwrap();
        assert!(at_start.operator().max_abs_diff(expected_start.operator()) < 1e-12);

        let at_end = evolve_double_state(&psi, &phi, alpha, &window, window.t_f()).unwrap();
        let pushed_forward = window.propagate(&psi, span);
        let expected_end = DoubleState::from_states(&pushed_forward, &phi, alpha).unwrap();
        assert!(at_end.operator().max_abs_diff(expected_end.operator()) < 1e-12);
    }

    #[test]
    fn evolution_rejects_times_outside_the_window() {
        let (psi, phi) = sample_pair();
        let window = ProcessWindow::with_hamiltonian(0.0, 1.0, &sample_hamiltonian()).unwrap();
        assert!(matches!(
            evolve_double_state(&psi, &phi, c(1.0, 0.0), &window, 1.5).unwrap_err(),
            Error::TimeOutOfWindow { .. }
        ));
    }

    #[test]
    fn transition_denominator_is_time_independent() {
        let (psi, phi) = sample_pair();
        let window = ProcessWindow::with_hamiltonian(-1.0, 2.0, &sample_hamiltonian()).unwrap();
        let span = window.t_f() - window.t_i();
        let reference = window.unitary(span).matrix_element(&phi, &psi);
        for t in [-1.0, -0.25, 0.5, 1.999] {
            let w = evolve_double_state(&psi, &phi, c(1.0, 0.0), &window, t).unwrap();
            let p = w.provenance().unwrap();
            // <Phi(t)|Psi(t)> = <phi|U(t_f - t_i)|psi> for every t.
            assert!((p.phi.inner(&p.psi) - reference).norm() < 1e-13);
        }
    }

    #[test]
    fn dual_pair_swaps_roles_under_a_trivial_window() {
        let (psi, phi) = sample_pair();
        let window = ProcessWindow::with_hamiltonian(0.0, 1.0, &Operator::zeros(2)).unwrap();
        let (preparation, post_selection) = dual_process(&psi, &phi, &window).unwrap();
        assert!(preparation.inner(&phi).norm() > 1.0 - 1e-13);
        assert!(post_selection.inner(&psi).norm() > 1.0 - 1e-13);
    }

    #[test]
    fn dual_is_an_involution() {
        let (psi, phi) = sample_pair();
        let window = ProcessWindow::with_hamiltonian(0.3, 2.1, &sample_hamiltonian()).unwrap();
        let (prep, post) = dual_process(&psi, &phi, &window).unwrap();
        let (prep2, post2) = dual_process(&prep, &post, &window).unwrap();
        for (twice, original) in [(&prep2, &psi), (&post2, &phi)] {
            let overlap = twice.inner(original).norm();
            assert_relative_eq!(overlap, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn dual_weight_exchange_reproduces_the_double_state() {
        let (psi, phi) = sample_pair();
        let window = ProcessWindow::with_hamiltonian(0.0, 1.5, &sample_hamiltonian()).unwrap();
        for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.3, -0.8)] {
            assert!(
                verify_dual_equivalence(&psi, &phi, alpha, &window, 0.77, 1e-11).unwrap(),
                "dual equivalence failed at alpha = {alpha}"
            );
        }
    }

    fn arb_state(dim: usize) -> impl Strategy<Value = StateVector> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim).prop_filter_map(
            "norm too small",
            |pairs| {
                let raw: Vec<Complex64> = pairs.into_iter().map(|(re, im)| c(re, im)).collect();
                if raw.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-2 {
                    return None;
                }
                StateVector::normalize(&raw).ok()
            },
        )
    }

    fn arb_hamiltonian(dim: usize) -> impl Strategy<Value = Operator> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |raw| {
            let rows: Vec<Vec<Complex64>> = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| c(raw[i * dim + j].0, raw[i * dim + j].1))
                        .collect()
                })
                .collect();
            let g = Operator::from_rows(&rows).unwrap();
            &g.scale(c(0.5, 0.0)) + &g.adjoint().scale(c(0.5, 0.0))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn prop_evolution_is_covariant_and_trace_preserving(
            psi in arb_state(3),
            phi in arb_state(3),
            h in arb_hamiltonian(3),
            (alpha_re, alpha_im) in (-1.5..1.5f64, -1.5..1.5f64),
            (t1_frac, t2_frac) in (0.0..1.0f64, 0.0..1.0f64),
        ) {
            let window = ProcessWindow::with_hamiltonian(-0.4, 1.9, &h).unwrap();
            let span = window.t_f() - window.t_i();
            let d = window.unitary(span).matrix_element(&phi, &psi);
            prop_assume!(d.norm() > 1e-3);
            let alpha = c(alpha_re, alpha_im);
            let t1 = window.t_i() + t1_frac * span;
            let t2 = window.t_i() + t2_frac * span;
            let w1 = evolve_double_state(&psi, &phi, alpha, &window, t1).unwrap();
            let w2 = evolve_double_state(&psi, &phi, alpha, &window, t2).unwrap();
            prop_assert!((w1.operator().trace() - c(1.0, 0.0)).norm() < 1e-11);
            let u = window.unitary(t2 - t1);
            let transported = &(&u * w1.operator()) * &u.adjoint();
            prop_assert!(transported.max_abs_diff(w2.operator()) < 1e-10);
        }

        #[test]
        fn prop_dual_equivalence_holds_generically(
            psi in arb_state(2),
            phi in arb_state(2),
            h in arb_hamiltonian(2),
            (alpha_re, alpha_im) in (-1.5..1.5f64, -1.5..1.5f64),
            t_frac in 0.0..1.0f64,
        ) {
            let window = ProcessWindow::with_hamiltonian(0.0, 2.5, &h).unwrap();
            let d = window.unitary(2.5).matrix_element(&phi, &psi);
            prop_assume!(d.norm() > 1e-3);
            let t = window.t_i() + t_frac * 2.5;
            prop_assert!(verify_dual_equivalence(
                &psi, &phi, c(alpha_re, alpha_im), &window, t, 1e-10
            ).unwrap());
        }
    }
}

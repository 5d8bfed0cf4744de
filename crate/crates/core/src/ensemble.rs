//! Monte Carlo estimation of mixture expectations.
//!
//! A [`ProcessMixture`] is a genuine
//! classical distribution, so `sum_i p_i wv_i(A)` can be estimated by
//! sampling process indices and averaging their (complex) weak values.
//! The estimate converges to `tr(W A)` of the reconstructed operator at
//! the usual `1/sqrt(n)` rate regardless of which decomposition produced
//! the mixture.
//!
//! Sampling is deterministic: draws come from counter-based ChaCha
//! streams, one stream per fixed-size chunk, and chunk statistics are
//! merged in chunk order. The same `(inputs, n, seed)` therefore yield the
//! same estimate bit for bit, no matter how many worker threads execute
//! the chunks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decompose::ProcessMixture;
use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::tolerance;

/// Samples per ChaCha stream; the chunk grid, not the worker count,
/// defines the random sequence.
const CHUNK: u64 = 4096;

/// A Monte Carlo mean with its statistical uncertainty.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloEstimate {
    pub mean: Complex64,
    /// Largest of the real- and imaginary-part standard errors of the
    /// mean; zero when every sample is identical.
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Streaming mean/variance accumulator (Welford update, pairwise merge).
/// Exact zeros survive: a constant sample stream keeps `m2` at 0.0.
#[derive(Debug, Clone, Copy, Default)]
struct RunningStats {
    count: u64,
    mean_re: f64,
    m2_re: f64,
    mean_im: f64,
    m2_im: f64,
}

impl RunningStats {
    fn push(&mut self, value: Complex64) {
        self.count += 1;
        let n = self.count as f64;
        let delta_re = value.re - self.mean_re;
        self.mean_re += delta_re / n;
        self.m2_re += delta_re * (value.re - self.mean_re);
        let delta_im = value.im - self.mean_im;
        self.mean_im += delta_im / n;
        self.m2_im += delta_im * (value.im - self.mean_im);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let n = n1 + n2;
        let delta_re = other.mean_re - self.mean_re;
        let delta_im = other.mean_im - self.mean_im;
        RunningStats {
            count: self.count + other.count,
            mean_re: self.mean_re + delta_re * n2 / n,
            m2_re: self.m2_re + other.m2_re + delta_re * delta_re * n1 * n2 / n,
            mean_im: self.mean_im + delta_im * n2 / n,
            m2_im: self.m2_im + other.m2_im + delta_im * delta_im * n1 * n2 / n,
        }
    }

    fn estimate(&self, seed: u64) -> MonteCarloEstimate {
        let n = self.count as f64;
        let std_error = if self.count >= 2 {
            let se_re = (self.m2_re / (n - 1.0) / n).max(0.0).sqrt();
            let se_im = (self.m2_im / (n - 1.0) / n).max(0.0).sqrt();
            se_re.max(se_im)
        } else {
            0.0
        };
        MonteCarloEstimate {
            mean: Complex64::new(self.mean_re, self.mean_im),
            std_error,
            n_samples: self.count,
            seed,
        }
    }
}

fn sample_stream(
    mixture: &ProcessMixture,
    a: &Operator,
    n: u64,
    seed: u64,
    stream_base: u64,
) -> Result<MonteCarloEstimate> {
    if n == 0 {
        return Err(Error::InvalidSampleCount);
    }
    if a.dim() != mixture.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: mixture.dim(),
        });
    }
    let deviation = a.hermiticity_deviation();
    if deviation > tolerance::HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tol: tolerance::HERMITIAN_TOL,
        });
    }

    let values: Vec<Complex64> = mixture.terms().iter().map(|t| t.weak_value(a)).collect();
    let mut cdf: Vec<f64> = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    for term in mixture.terms() {
        acc += term.probability();
        cdf.push(acc);
    }
    // Guard the final bin against rounding in the partial sums; uniform
    // draws live in [0, 1).
    *cdf.last_mut().expect("mixture is non-empty") = 1.0;

    let chunks = n.div_ceil(CHUNK);
    let stats = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_base + chunk);
            let size = CHUNK.min(n - chunk * CHUNK);
            let mut stats = RunningStats::default();
            for _ in 0..size {
                let u: f64 = rng.gen();
                let index = cdf.partition_point(|&edge| edge <= u);
                stats.push(values[index]);
            }
            stats
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(RunningStats::default(), RunningStats::merge);

    Ok(stats.estimate(seed))
}

/// Draws `n` processes from the mixture and averages their weak values of
/// the Hermitian observable `a`.
///
/// Reproducible: the same mixture, observable, `n`, and `seed` give the
/// same estimate bit for bit, independent of the rayon worker count. A
/// single-term mixture returns its weak value exactly, with a standard
/// error of exactly zero.
pub fn sample_ensemble(
    mixture: &ProcessMixture,
    a: &Operator,
    n: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    sample_stream(mixture, a, n, seed, 0)
}

/// Runs [`sample_ensemble`] once per entry of a strictly increasing sample
/// schedule, with statistically independent draws for each entry (distinct
/// stream ranges derived from the same seed).
pub fn convergence_study(
    mixture: &ProcessMixture,
    a: &Operator,
    schedule: &[u64],
    seed: u64,
) -> Result<Vec<MonteCarloEstimate>> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSchedule);
    }
    schedule
        .iter()
        .enumerate()
        .map(|(k, &n)| sample_stream(mixture, a, n, seed, (k as u64 + 1) << 32))
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`; `None` when fewer than
/// two points or any coordinate is not strictly positive.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let denominator = n * sxx - sx * sx;
    if denominator.abs() < f64::EPSILON {
        return None;
    }
    Some((n * sxy - sx * sy) / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{decompose_processes, DecompositionPlan, ProcessTerm};
    use crate::linalg::StateVector;
    use crate::measure::DoubleState;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level_pieces() -> (DoubleState, ProcessMixture, Operator) {
        let psi = StateVector::normalize(&[c(0.8, 0.1), c(0.3, -0.45)]).unwrap();
        let phi = StateVector::normalize(&[c(0.3, 0.4), c(0.75, 0.0)]).unwrap();
        let alpha = 0.5;
        let w = DoubleState::from_states(&psi, &phi, c(alpha, 0.0)).unwrap();
        let mixture = ProcessMixture::new(vec![
            ProcessTerm::new(alpha, psi.clone(), phi.clone()).unwrap(),
            ProcessTerm::new(1.0 - alpha, phi, psi).unwrap(),
        ])
        .unwrap();
        let a = Operator::from_rows(&[
            vec![c(1.0, 0.0), c(0.4, -0.6)],
            vec![c(0.4, 0.6), c(-0.8, 0.0)],
        ])
        .unwrap();
        (w, mixture, a)
    }

    #[test]
    fn single_term_mixture_is_exact_with_zero_error() {
        let psi = StateVector::normalize(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let phi = StateVector::normalize(&[c(1.0, 0.2), c(0.4, -0.3)]).unwrap();
        let term = ProcessTerm::new(1.0, psi, phi).unwrap();
        let expected = term.weak_value(&Operator::identity(2));
        let mixture = ProcessMixture::new(vec![term]).unwrap();
        let estimate = sample_ensemble(&mixture, &Operator::identity(2), 5000, 7).unwrap();
        assert_eq!(estimate.mean, expected);
        assert_eq!(estimate.std_error, 0.0);
        assert_eq!(estimate.n_samples, 5000);
    }

    #[test]
    fn sampling_is_reproducible_bit_for_bit() {
        let (_, mixture, a) = two_level_pieces();
        let first = sample_ensemble(&mixture, &a, 10_000, 42).unwrap();
        let second = sample_ensemble(&mixture, &a, 10_000, 42).unwrap();
        assert_eq!(first.mean.re.to_bits(), second.mean.re.to_bits());
        assert_eq!(first.mean.im.to_bits(), second.mean.im.to_bits());
        assert_eq!(first.std_error.to_bits(), second.std_error.to_bits());
        // A different seed moves the estimate. (For a Hermitian observable
        // the two conjugate-ordered terms share a real part, so the
        // imaginary part carries all the sampling noise.)
        let third = sample_ensemble(&mixture, &a, 10_000, 43).unwrap();
        assert_ne!(first.mean.im.to_bits(), third.mean.im.to_bits());
    }

    #[test]
    fn estimate_is_independent_of_worker_count() {
        let (_, mixture, a) = two_level_pieces();
        let parallel = sample_ensemble(&mixture, &a, 20_000, 11).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_ensemble(&mixture, &a, 20_000, 11).unwrap());
        assert_eq!(parallel.mean.re.to_bits(), single.mean.re.to_bits());
        assert_eq!(parallel.mean.im.to_bits(), single.mean.im.to_bits());
        assert_eq!(parallel.std_error.to_bits(), single.std_error.to_bits());
    }

    #[test]
    fn estimate_converges_to_the_trace_pairing() {
        let (w, mixture, a) = two_level_pieces();
        let exact = w.trace_expectation(&a).unwrap();
        let estimate = sample_ensemble(&mixture, &a, 100_000, 5).unwrap();
        assert!(estimate.std_error > 0.0);
        assert!(
            (estimate.mean.re - exact.re).abs() < 5.0 * estimate.std_error,
            "real part off by {} with se {}",
            (estimate.mean.re - exact.re).abs(),
            estimate.std_error
        );
        assert!((estimate.mean.im - exact.im).abs() < 5.0 * estimate.std_error);
    }

    #[test]
    fn different_decompositions_converge_to_the_same_value() {
        let (w, direct, a) = two_level_pieces();
        let plan = DecompositionPlan::new(
            vec![
                StateVector::basis_state(2, 0).unwrap(),
                StateVector::basis_state(2, 1).unwrap(),
            ],
            vec![0.3, 0.3, 0.4],
        )
        .unwrap();
        let derived = decompose_processes(&w, Some(&plan)).unwrap();
        let exact = w.trace_expectation(&a).unwrap();
        let e1 = sample_ensemble(&direct, &a, 80_000, 3).unwrap();
        let e2 = sample_ensemble(&derived, &a, 80_000, 3).unwrap();
        for e in [&e1, &e2] {
            assert!((e.mean - exact).norm() < 5.0 * e.std_error + 1e-12);
        }
        assert!((e1.mean - e2.mean).norm() < 5.0 * (e1.std_error + e2.std_error));
    }

    #[test]
    fn sampler_validates_inputs() {
        let (_, mixture, a) = two_level_pieces();
        assert!(matches!(
            sample_ensemble(&mixture, &a, 0, 1).unwrap_err(),
            Error::InvalidSampleCount
        ));
        let skew = Operator::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            sample_ensemble(&mixture, &skew, 10, 1).unwrap_err(),
            Error::NotHermitian { .. }
        ));
    }

    #[test]
    fn convergence_study_validates_and_orders_the_schedule() {
        let (_, mixture, a) = two_level_pieces();
        assert!(matches!(
            convergence_study(&mixture, &a, &[], 1).unwrap_err(),
            Error::InvalidSchedule
        ));
        assert!(matches!(
            convergence_study(&mixture, &a, &[100, 100], 1).unwrap_err(),
            Error::InvalidSchedule
        ));
        let estimates = convergence_study(&mixture, &a, &[100, 1000, 10_000], 9).unwrap();
        assert_eq!(estimates.len(), 3);
        assert_eq!(estimates[0].n_samples, 100);
        assert_eq!(estimates[2].n_samples, 10_000);
        // Standard errors shrink roughly like 1/sqrt(n) across two decades.
        assert!(estimates[2].std_error < estimates[0].std_error);
    }

    #[test]
    fn log_log_slope_recovers_power_laws() {
        let points: Vec<(f64, f64)> = (1..=6)
            .map(|k| {
                let x = 10f64.powi(k);
                (x, 3.0 * x.powf(-0.5))
            })
            .collect();
        let slope = log_log_slope(&points).unwrap();
        assert!((slope + 0.5).abs() < 1e-12);
        assert!(log_log_slope(&points[..1]).is_none());
        assert!(log_log_slope(&[(1.0, 1.0), (2.0, 0.0)]).is_none());
    }
}

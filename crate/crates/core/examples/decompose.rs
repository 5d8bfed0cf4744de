//! Expanding a trace-one operator into a classical mixture of processes.
//!
//! Any trace-one operator — Hermitian or not — can be written as
//! `sum_i p_i |psi_i><phi_i| / <phi_i|psi_i>` with genuine probabilities
//! `p_i`, using at most `d + 1` terms. The run decomposes a random
//! trace-one operator with the synthesized default plan and with a custom
//! plan, checks both reconstructions, and shows the special two-term case
//! where the weights are directly the real weight alpha and 1 - alpha.
//!
//! ```bash
//! cargo run --example decompose
//! ```

use doublestate::{
    decompose_processes, Complex64, DecompositionPlan, DoubleState, Operator, ProcessMixture,
    ProcessTerm, Result, StateVector, EXPANSION_CONVENTION,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn summarize(label: &str, w: &DoubleState, mixture: &ProcessMixture) -> Result<()> {
    let residual = mixture.reconstruct()?.operator().max_abs_diff(w.operator());
    println!(
        "== {label}: {} terms, residual {residual:.2e} ==",
        mixture.terms().len()
    );
    for (k, term) in mixture.terms().iter().enumerate() {
        println!(
            "  term {k}: p = {:.4}, <phi|psi> = {:.4} {:+.4}i",
            term.probability(),
            term.overlap().re,
            term.overlap().im,
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    // A non-Hermitian trace-one operator with no process provenance.
    let w = DoubleState::from_operator(Operator::from_rows(&[
        vec![c(0.9, 0.1), c(-0.2, 0.4), c(0.1, 0.0)],
        vec![c(0.3, 0.0), c(-0.1, -0.3), c(0.0, 0.2)],
        vec![c(0.05, -0.15), c(0.25, 0.0), c(0.2, 0.2)],
    ])?)?;

    let default = decompose_processes(&w, None)?;
    summarize("default plan", &w, &default)?;

    let lead = StateVector::normalize(&[c(1.0, 0.5), c(0.0, 1.0), c(-0.5, 0.25)])?;
    let mut basis = vec![lead.clone()];
    basis.extend(lead.orthogonal_complement_basis());
    let plan = DecompositionPlan::new(basis, vec![0.3, 0.25, 0.25, 0.2])?;
    let custom = decompose_processes(&w, Some(&plan))?;
    summarize("custom plan", &w, &custom)?;
    println!("  different plans, different stories, the same operator.\n");

    // A W built from a pre/post-selected pair with real alpha in [0, 1]
    // is already a two-term classical mixture.
    let psi = StateVector::normalize(&[c(0.8, 0.1), c(0.3, -0.45), c(0.2, 0.0)])?;
    let phi = StateVector::normalize(&[c(0.3, 0.4), c(0.75, 0.0), c(-0.1, 0.35)])?;
    let alpha = 0.35;
    let direct = DoubleState::from_states(&psi, &phi, c(alpha, 0.0))?;
    let two_term = ProcessMixture::new(vec![
        ProcessTerm::new(alpha, psi.clone(), phi.clone())?,
        ProcessTerm::new(1.0 - alpha, phi, psi)?,
    ])?;
    summarize("two-term convex form", &direct, &two_term)?;
    println!("  forward with probability alpha, reversed with 1 - alpha.\n");

    println!("coefficient convention used by the general construction:");
    println!("  {EXPANSION_CONVENTION}");
    Ok(())
}

//! Weak values and the expectation functional.
//!
//! Builds the two-level fixture (prepare `z+`, post-select `x+`), reads
//! the antisymmetric imaginary observable, and shows how the expectation
//! `lambda(A)` interpolates between the weak value (`alpha = 1`), its
//! conjugate (`alpha = 0`), and the guaranteed-real symmetric point
//! (`alpha = 1/2`). Finishes with an anomalous weak value far outside the
//! observable's spectrum.
//!
//! ```bash
//! cargo run --example weak_values
//! ```

use doublestate::{weak_value, Complex64, DoubleState, Operator, Result, StateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn show(label: &str, z: Complex64) {
    println!("  {label:<34} {:>12.8} {:+.8}i", z.re, z.im);
}

fn main() -> Result<()> {
    let z_plus = StateVector::basis_state(2, 0)?;
    let x_plus = StateVector::normalize(&[c(1.0, 0.0), c(1.0, 0.0)])?;
    let sigma_y = Operator::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, -1.0)],
        vec![c(0.0, 1.0), c(0.0, 0.0)],
    ])?;

    println!("== weak value of the imaginary antisymmetric observable ==");
    let wv = weak_value(&z_plus, &x_plus, &sigma_y)?;
    show("A_w = <phi|A|psi>/<phi|psi>", wv);
    println!("  (purely imaginary: both eigenvalues are -1 and +1, yet A_w = i)");

    println!("\n== lambda(A) across the weight alpha ==");
    for (label, alpha) in [
        ("alpha = 1 (weak value)", c(1.0, 0.0)),
        ("alpha = 1/2 (real symmetric point)", c(0.5, 0.0)),
        ("alpha = 0 (conjugate process)", c(0.0, 0.0)),
        ("alpha = 0.3 + 0.7i", c(0.3, 0.7)),
    ] {
        let w = DoubleState::from_states(&z_plus, &x_plus, alpha)?;
        show(label, w.lambda_expectation(&sigma_y)?);
    }
    println!("  (the trace of W is one for every alpha, so lambda(1) = 1 throughout)");

    println!("\n== anomalous amplification from a nearly orthogonal pair ==");
    let nearly = StateVector::normalize(&[c(1.0, 0.0), c(-0.99, 0.0)])?;
    let anomalous = weak_value(&z_plus, &nearly, &sigma_y)?;
    show("post-selection almost orthogonal", anomalous);
    println!(
        "  |A_w| = {:.3} although every eigenvalue of A lies in [-1, 1]",
        anomalous.norm()
    );
    Ok(())
}

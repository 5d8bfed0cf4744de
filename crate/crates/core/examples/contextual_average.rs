//! Basis independence of the contextual average.
//!
//! Averaging the expectation functional over all post-selections in an
//! orthonormal basis, weighted by their Born probabilities, collapses to
//! the ordinary single-state expectation `<psi|A|psi>` — independent of
//! which basis is chosen and of the weight `alpha`, even when the basis
//! contains `psi` itself (where the naive weak-value form would divide by
//! a vanishing overlap).
//!
//! ```bash
//! cargo run --example contextual_average
//! ```

use doublestate::{
    contextual_average, expectation_single, Complex64, Operator, Result, StateVector,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    let psi = StateVector::normalize(&[c(0.6, 0.2), c(-0.3, 0.5), c(0.4, 0.0)])?;
    let a = Operator::from_rows(&[
        vec![c(0.7, 0.0), c(0.2, -0.4), c(0.0, 0.1)],
        vec![c(0.2, 0.4), c(-1.1, 0.0), c(0.3, 0.0)],
        vec![c(0.0, -0.1), c(0.3, 0.0), c(0.5, 0.0)],
    ])?;

    let born = expectation_single(&psi, &a)?;
    println!("single-state expectation <psi|A|psi> = {born:.12}");

    let computational: Vec<StateVector> = (0..3)
        .map(|k| StateVector::basis_state(3, k))
        .collect::<Result<_>>()?;
    let tilted = {
        let lead = StateVector::normalize(&[c(0.5, 0.5), c(0.5, -0.5), c(0.0, 0.5)])?;
        let mut basis = vec![lead.clone()];
        basis.extend(lead.orthogonal_complement_basis());
        basis
    };
    let containing_psi = {
        let mut basis = vec![psi.clone()];
        basis.extend(psi.orthogonal_complement_basis());
        basis
    };

    for (name, basis) in [
        ("computational basis", &computational),
        ("tilted basis", &tilted),
        ("basis containing psi", &containing_psi),
    ] {
        println!("\n== averaged over the {name} ==");
        for alpha in [c(1.0, 0.0), c(0.5, 0.0), c(-0.8, 1.3)] {
            let average = contextual_average(&psi, basis, &a, alpha)?;
            println!(
                "  alpha = {:>5.2} {:+.2}i  ->  {:.12} {:+.2e}i   (gap {:.2e})",
                alpha.re,
                alpha.im,
                average.re,
                average.im,
                (average - c(born, 0.0)).norm(),
            );
        }
    }
    println!("\nevery basis and every alpha reproduce the same real number.");
    Ok(())
}

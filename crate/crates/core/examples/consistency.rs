//! Consistency conditions of the complex measure.
//!
//! A double state `W` assigns the complex number `mu(P) = tr(W P)` to
//! every projector. For the defining pair this measure is certain:
//! `mu(P_psi) = mu(P_phi) = 1`, and it vanishes on every projector
//! orthogonal to either state — for any complex weight `alpha`.
//!
//! ```bash
//! cargo run --example consistency
//! ```

use doublestate::{verify_consistency, Complex64, Result, StateVector};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    let psi = StateVector::normalize(&[c(0.8, 0.1), c(0.3, -0.45), c(0.2, 0.0)])?;
    let phi = StateVector::normalize(&[c(0.3, 0.4), c(0.75, 0.0), c(-0.1, 0.35)])?;

    for alpha in [c(0.5, 0.0), c(1.0, 0.0), c(0.3, 0.7), c(-1.25, 2.0)] {
        println!("== alpha = {:.2} {:+.2}i ==", alpha.re, alpha.im);
        let report = verify_consistency(&psi, &phi, alpha, 1e-9)?;
        for check in &report.checks {
            println!(
                "  {:<22} expected {:>5.2} {:+.2}i   got {:>9.2e} {:+.2e}i   {}",
                check.name,
                check.expected.re,
                check.expected.im,
                check.actual.re,
                check.actual.im,
                if check.pass { "pass" } else { "FAIL" },
            );
        }
        println!(
            "  all pass: {} (worst deviation {:.2e})\n",
            report.all_pass(),
            report.worst_deviation(),
        );
    }
    println!("the measure is certain about both selections regardless of alpha;");
    println!("only how it distributes weight between the two orderings changes.");
    Ok(())
}

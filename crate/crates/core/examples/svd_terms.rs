//! Singular-value expansion and its physicality flags.
//!
//! The singular-value route writes `W = sum_i s_i |u_i><v_i|`. Unlike the
//! guaranteed process expansion, a singular pair may be orthogonal
//! (`<u_i|v_i> = 0`), in which case the dyad carries weight but describes
//! no normalizable pre/post-selected process. Such terms are flagged
//! rather than silently normalized.
//!
//! ```bash
//! cargo run --example svd_terms
//! ```

use doublestate::{svd_decompose, svd_reconstruct, Complex64, DoubleState, Operator, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn show(label: &str, w: &DoubleState) -> Result<()> {
    let terms = svd_decompose(w)?;
    let residual = svd_reconstruct(&terms, w.dim()).max_abs_diff(w.operator());
    println!(
        "== {label}: {} terms, residual {residual:.2e} ==",
        terms.len()
    );
    for (k, term) in terms.iter().enumerate() {
        let overlap = term.u.inner(&term.v).norm();
        println!(
            "  term {k}: s = {:.6}, |<u|v>| = {overlap:.3e}, {}",
            term.singular_value,
            if term.physical {
                "process"
            } else {
                "NOT a process (orthogonal pair)"
            },
        );
    }
    println!();
    Ok(())
}

fn main() -> Result<()> {
    let generic = DoubleState::from_operator(Operator::from_rows(&[
        vec![c(0.6, 0.1), c(-0.2, 0.3), c(0.1, 0.0)],
        vec![c(0.25, 0.0), c(0.3, -0.2), c(0.0, 0.15)],
        vec![c(0.1, -0.1), c(0.2, 0.0), c(0.1, 0.1)],
    ])?)?;
    show("generic trace-one operator", &generic)?;

    // Dominated by an off-diagonal dyad: 2|0><1| + |2><2|. The heavy
    // singular pair is orthogonal, so it cannot be normalized into a
    // process term.
    let zero = c(0.0, 0.0);
    let skewed = DoubleState::from_operator(Operator::from_rows(&[
        vec![zero, c(2.0, 0.0), zero],
        vec![zero, zero, zero],
        vec![zero, zero, c(1.0, 0.0)],
    ])?)?;
    show("off-diagonal dominant operator", &skewed)?;

    println!("the guaranteed route around this obstruction is the d+1-term");
    println!("process expansion (see the decompose example).");
    Ok(())
}

//! Reading and writing the JSON document formats.
//!
//! Every object the library works with — states, operators, double states,
//! process mixtures — has a tagged JSON form that the `doublestate` binary
//! reads and writes. This example builds each kind in code, round-trips it
//! through a file, and shows that the files are directly usable as CLI
//! inputs. Complex numbers are stored as `[re, im]` pairs.
//!
//! ```bash
//! cargo run --example json_documents
//! ```

use doublestate::{decompose_processes, Document, DoubleState, Operator, Result, StateVector};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("doublestate_documents");
    std::fs::create_dir_all(&dir).map_err(|e| doublestate::Error::InvalidDocument {
        path: dir.display().to_string(),
        reason: e.to_string(),
    })?;

    // A state document: the normalized preparation |psi>.
    let psi = StateVector::normalize(&[c(0.6, 0.0), c(0.0, 0.8)])?;
    let psi_path = dir.join("psi.json");
    Document::from_state(&psi).write_file(&psi_path)?;
    println!("== state ==");
    println!("{}", Document::from_state(&psi).to_json());
    let back = Document::read_file(&psi_path)?.into_state()?;
    println!(
        "round trip max deviation: {:.2e}",
        psi.amplitudes()
            .iter()
            .zip(back.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    );
    println!();

    // An operator document: the second Pauli matrix as a 2x2 grid of pairs.
    let sigma_y = Operator::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, -1.0)],
        vec![c(0.0, 1.0), c(0.0, 0.0)],
    ])?;
    let op_path = dir.join("sigma_y.json");
    Document::from_operator(&sigma_y).write_file(&op_path)?;
    println!("== operator ==");
    println!("{}", Document::from_operator(&sigma_y).to_json());
    println!();

    // A double-state document. The matrix is stored together with the
    // (psi, phi, alpha) provenance so it can be re-expanded later.
    let phi = StateVector::normalize(&[c(1.0, 0.0), c(0.5, -0.5)])?;
    let w = DoubleState::from_states(&psi, &phi, c(0.3, 0.7))?;
    let w_path = dir.join("w.json");
    Document::from_double_state(&w).write_file(&w_path)?;
    let w_back = Document::read_file(&w_path)?.into_double_state()?;
    println!("== double state ==");
    println!(
        "round trip max deviation: {:.2e}",
        w.operator().max_abs_diff(w_back.operator())
    );
    println!();

    // A mixture document: the terms of a decomposition, each with its
    // probability and its own preparation / post-selection pair.
    let mixture = decompose_processes(&w, None)?;
    let mix_path = dir.join("mixture.json");
    Document::from_mixture(&mixture).write_file(&mix_path)?;
    let mix_back = Document::read_file(&mix_path)?.into_mixture()?;
    println!("== mixture ==");
    println!("terms stored: {}", mix_back.terms().len());
    println!(
        "reconstruction residual after round trip: {:.2e}",
        mix_back
            .reconstruct()?
            .operator()
            .max_abs_diff(w.operator())
    );
    println!();

    // The same files drive the command-line interface:
    let phi_path = dir.join("phi.json");
    Document::from_state(&phi).write_file(&phi_path)?;
    let proj_path = dir.join("p0.json");
    let p0 = Operator::from_rows(&[
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0)],
    ])?;
    Document::from_operator(&p0).write_file(&proj_path)?;
    println!("== CLI usage ==");
    println!(
        "doublestate measure --w {} --projector {}",
        w_path.display(),
        proj_path.display()
    );
    println!(
        "doublestate weak-value --psi {} --phi {} --obs {}",
        psi_path.display(),
        phi_path.display(),
        op_path.display()
    );
    println!(
        "doublestate simulate --mixture {} --obs {} --samples 10000",
        mix_path.display(),
        op_path.display()
    );
    Ok(())
}

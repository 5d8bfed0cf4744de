//! JSON interchange documents.
//!
//! Every file the command-line front end reads or writes is a single JSON
//! object tagged by `kind`, with complex numbers encoded as two-element
//! `[re, im]` arrays and matrices as row-major nested arrays:
//!
//! ```json
//! { "kind": "state", "dim": 2, "amplitudes": [[1.0, 0.0], [0.0, 0.0]] }
//! ```
//!
//! [`Document`] is the serialization shape; the `into_*` extractors
//! convert a parsed document into the corresponding domain type, checking
//! finiteness and dimension consistency and reporting failures with a
//! field path (`terms[2].psi`). Semantic validation (Hermiticity, trace
//! normalization, overlap floors, ...) is delegated to the domain
//! constructors so their error variants are preserved.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decompose::{DecompositionPlan, ProcessMixture, ProcessTerm};
use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};
use crate::measure::{DoubleState, Provenance};
use crate::process::ProcessWindow;

/// Pre/post-selected origin of a stored double state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceDocument {
    pub psi: Vec<[f64; 2]>,
    pub phi: Vec<[f64; 2]>,
    pub alpha: [f64; 2],
}

/// One `(probability, psi, phi)` entry of a mixture document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDocument {
    pub probability: f64,
    pub psi: Vec<[f64; 2]>,
    pub phi: Vec<[f64; 2]>,
}

/// A `kind`-tagged JSON document.
///
/// Writing a document produced by the `from_*` constructors and reading it
/// back yields the same domain object (canonical round trip).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    State {
        dim: usize,
        amplitudes: Vec<[f64; 2]>,
    },
    Operator {
        dim: usize,
        entries: Vec<Vec<[f64; 2]>>,
    },
    DoubleState {
        dim: usize,
        entries: Vec<Vec<[f64; 2]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        provenance: Option<ProvenanceDocument>,
    },
    Mixture {
        dim: usize,
        terms: Vec<TermDocument>,
    },
    Plan {
        dim: usize,
        basis: Vec<Vec<[f64; 2]>>,
        probabilities: Vec<f64>,
    },
    Window {
        dim: usize,
        t_i: f64,
        t_f: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hamiltonian: Option<Vec<Vec<[f64; 2]>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unitary: Option<Vec<Vec<[f64; 2]>>>,
    },
}

fn invalid(path: &str, reason: impl Into<String>) -> Error {
    Error::InvalidDocument {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn encode_vector(state: &StateVector) -> Vec<[f64; 2]> {
    state.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

fn encode_matrix(op: &Operator) -> Vec<Vec<[f64; 2]>> {
    op.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn decode_complex(path: &str, pair: [f64; 2]) -> Result<Complex64> {
    if !pair[0].is_finite() || !pair[1].is_finite() {
        return Err(invalid(path, "non-finite component"));
    }
    Ok(Complex64::new(pair[0], pair[1]))
}

fn decode_vector(path: &str, dim: usize, pairs: &[[f64; 2]]) -> Result<Vec<Complex64>> {
    if pairs.len() != dim {
        return Err(invalid(
            path,
            format!("expected {dim} amplitudes, found {}", pairs.len()),
        ));
    }
    pairs
        .iter()
        .enumerate()
        .map(|(k, &pair)| decode_complex(&format!("{path}[{k}]"), pair))
        .collect()
}

fn decode_state(path: &str, dim: usize, pairs: &[[f64; 2]]) -> Result<StateVector> {
    let amplitudes = decode_vector(path, dim, pairs)?;
    StateVector::normalize(&amplitudes)
}

fn decode_matrix(path: &str, dim: usize, rows: &[Vec<[f64; 2]>]) -> Result<Operator> {
    if rows.len() != dim {
        return Err(invalid(
            path,
            format!("expected {dim} rows, found {}", rows.len()),
        ));
    }
    let mut decoded = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(invalid(
                &format!("{path}[{i}]"),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        let mut out = Vec::with_capacity(dim);
        for (j, &pair) in row.iter().enumerate() {
            out.push(decode_complex(&format!("{path}[{i}][{j}]"), pair)?);
        }
        decoded.push(out);
    }
    Operator::from_rows(&decoded)
}

impl Document {
    /// Parses a document from a JSON string; malformed input is reported
    /// with serde's line/column diagnostic.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid("<input>", e.to_string()))
    }

    /// Reads and parses a document file.
    pub fn read_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(&path.display().to_string(), e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| invalid(&path.display().to_string(), e.to_string()))
    }

    /// Pretty-printed canonical JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Writes the canonical JSON form, newline-terminated.
    pub fn write_file(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| invalid(&path.display().to_string(), e.to_string()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::State { .. } => "state",
            Document::Operator { .. } => "operator",
            Document::DoubleState { .. } => "double_state",
            Document::Mixture { .. } => "mixture",
            Document::Plan { .. } => "plan",
            Document::Window { .. } => "window",
        }
    }

    pub fn from_state(state: &StateVector) -> Self {
        Document::State {
            dim: state.dim(),
            amplitudes: encode_vector(state),
        }
    }

    pub fn from_operator(op: &Operator) -> Self {
        Document::Operator {
            dim: op.dim(),
            entries: encode_matrix(op),
        }
    }

    pub fn from_double_state(w: &DoubleState) -> Self {
        Document::DoubleState {
            dim: w.dim(),
            entries: encode_matrix(w.operator()),
            provenance: w.provenance().map(|p| ProvenanceDocument {
                psi: encode_vector(&p.psi),
                phi: encode_vector(&p.phi),
                alpha: [p.alpha.re, p.alpha.im],
            }),
        }
    }

    pub fn from_mixture(mixture: &ProcessMixture) -> Self {
        Document::Mixture {
            dim: mixture.dim(),
            terms: mixture
                .terms()
                .iter()
                .map(|t| TermDocument {
                    probability: t.probability(),
                    psi: encode_vector(t.psi()),
                    phi: encode_vector(t.phi()),
                })
                .collect(),
        }
    }

    pub fn from_plan(plan: &DecompositionPlan) -> Self {
        Document::Plan {
            dim: plan.basis().first().map_or(0, StateVector::dim),
            basis: plan.basis().iter().map(encode_vector).collect(),
            probabilities: plan.probabilities().to_vec(),
        }
    }

    pub fn window_with_hamiltonian(t_i: f64, t_f: f64, h: &Operator) -> Self {
        Document::Window {
            dim: h.dim(),
            t_i,
            t_f,
            hamiltonian: Some(encode_matrix(h)),
            unitary: None,
        }
    }

    pub fn window_with_unitary(t_i: f64, t_f: f64, u: &Operator) -> Self {
        Document::Window {
            dim: u.dim(),
            t_i,
            t_f,
            hamiltonian: None,
            unitary: Some(encode_matrix(u)),
        }
    }

    /// Extracts a normalized state vector from a `state` document.
    pub fn into_state(&self) -> Result<StateVector> {
        match self {
            Document::State { dim, amplitudes } => decode_state("amplitudes", *dim, amplitudes),
            other => Err(invalid(
                "kind",
                format!("expected a state document, found kind \"{}\"", other.kind()),
            )),
        }
    }

    /// Extracts an operator from an `operator` document.
    pub fn into_operator(&self) -> Result<Operator> {
        match self {
            Document::Operator { dim, entries } => decode_matrix("entries", *dim, entries),
            other => Err(invalid(
                "kind",
                format!(
                    "expected an operator document, found kind \"{}\"",
                    other.kind()
                ),
            )),
        }
    }

    /// Extracts a trace-one double state from a `double_state` document.
    ///
    /// A provenance block, when present, must reproduce the stored entries
    /// (within 1e-8 entrywise); it is then attached to the result.
    pub fn into_double_state(&self) -> Result<DoubleState> {
        match self {
            Document::DoubleState {
                dim,
                entries,
                provenance,
            } => {
                let op = decode_matrix("entries", *dim, entries)?;
                let Some(block) = provenance else {
                    return DoubleState::from_operator(op);
                };
                let psi = decode_state("provenance.psi", *dim, &block.psi)?;
                let phi = decode_state("provenance.phi", *dim, &block.phi)?;
                let alpha = decode_complex("provenance.alpha", block.alpha)?;
                let rebuilt = DoubleState::from_states(&psi, &phi, alpha).map_err(|e| {
                    invalid("provenance", format!("does not define a double state: {e}"))
                })?;
                let drift = rebuilt.operator().max_abs_diff(&op);
                if drift > 1e-8 {
                    return Err(invalid(
                        "provenance",
                        format!("does not reproduce the stored entries (drift {drift:.3e})"),
                    ));
                }
                let w = DoubleState::from_operator(op)?;
                Ok(DoubleState::with_provenance(
                    w.operator().clone(),
                    Provenance { psi, phi, alpha },
                ))
            }
            other => Err(invalid(
                "kind",
                format!(
                    "expected a double_state document, found kind \"{}\"",
                    other.kind()
                ),
            )),
        }
    }

    /// Extracts a process mixture from a `mixture` document.
    pub fn into_mixture(&self) -> Result<ProcessMixture> {
        match self {
            Document::Mixture { dim, terms } => {
                let mut out = Vec::with_capacity(terms.len());
                for (k, term) in terms.iter().enumerate() {
                    if !term.probability.is_finite() {
                        return Err(invalid(
                            &format!("terms[{k}].probability"),
                            "non-finite component",
                        ));
                    }
                    let psi = decode_state(&format!("terms[{k}].psi"), *dim, &term.psi)?;
                    let phi = decode_state(&format!("terms[{k}].phi"), *dim, &term.phi)?;
                    out.push(ProcessTerm::new(term.probability, psi, phi).map_err(
                        |e| match e {
                            Error::OrthogonalTerm { overlap, .. } => {
                                Error::OrthogonalTerm { index: k, overlap }
                            }
                            other => other,
                        },
                    )?);
                }
                ProcessMixture::new(out)
            }
            other => Err(invalid(
                "kind",
                format!(
                    "expected a mixture document, found kind \"{}\"",
                    other.kind()
                ),
            )),
        }
    }

    /// Extracts a decomposition plan from a `plan` document.
    pub fn into_plan(&self) -> Result<DecompositionPlan> {
        match self {
            Document::Plan {
                dim,
                basis,
                probabilities,
            } => {
                let states = basis
                    .iter()
                    .enumerate()
                    .map(|(k, pairs)| decode_state(&format!("basis[{k}]"), *dim, pairs))
                    .collect::<Result<Vec<_>>>()?;
                for (k, p) in probabilities.iter().enumerate() {
                    if !p.is_finite() {
                        return Err(invalid(
                            &format!("probabilities[{k}]"),
                            "non-finite component",
                        ));
                    }
                }
                DecompositionPlan::new(states, probabilities.clone())
            }
            other => Err(invalid(
                "kind",
                format!("expected a plan document, found kind \"{}\"", other.kind()),
            )),
        }
    }

    /// Extracts an evolution window from a `window` document, which must
    /// carry exactly one of `hamiltonian` or `unitary`.
    pub fn into_window(&self) -> Result<ProcessWindow> {
        match self {
            Document::Window {
                dim,
                t_i,
                t_f,
                hamiltonian,
                unitary,
            } => {
                if !t_i.is_finite() || !t_f.is_finite() {
                    return Err(invalid("t_i/t_f", "non-finite component"));
                }
                match (hamiltonian, unitary) {
                    (Some(rows), None) => {
                        let h = decode_matrix("hamiltonian", *dim, rows)?;
                        ProcessWindow::with_hamiltonian(*t_i, *t_f, &h)
                    }
                    (None, Some(rows)) => {
                        let u = decode_matrix("unitary", *dim, rows)?;
                        ProcessWindow::with_unit_step(*t_i, *t_f, &u)
                    }
                    (Some(_), Some(_)) => Err(invalid(
                        "hamiltonian/unitary",
                        "a window document must carry exactly one generator, found both",
                    )),
                    (None, None) => Err(invalid(
                        "hamiltonian/unitary",
                        "a window document must carry exactly one generator, found neither",
                    )),
                }
            }
            other => Err(invalid(
                "kind",
                format!(
                    "expected a window document, found kind \"{}\"",
                    other.kind()
                ),
            )),
        }
    }
}

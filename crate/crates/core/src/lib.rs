//! Complex probability measures for pre/post-selected quantum processes.
//!
//! A quantum process prepared in `|psi>` and post-selected on `|phi>` is
//! described here by a trace-one double state `W` built from the two rays.
//! `W` induces a complex measure `mu(P) = tr(W P)` on projectors, and
//! through it complex expectations whose endpoint is the weak value. The
//! crate constructs these objects, evolves them over a time window, expands
//! any trace-one operator into a classical mixture of at most `d + 1`
//! pre/post-selected processes, averages observables over such mixtures by
//! deterministic Monte Carlo, and verifies the identities that make the
//! whole picture consistent.
//!
//! The `examples/` directory is the front door: each file is a runnable,
//! self-contained tour of one capability.
//!
//! ## Directory structure
//!
//! ```text
//! examples/
//! ├── weak_values.rs        # mu, lambda(A), and the weak-value endpoint
//! ├── contextual_average.rs # basis-independent averages without poles
//! ├── consistency.rs        # the invariant checklist on random inputs
//! ├── evolution.rs          # time windows, boundary certainties, duals
//! ├── decompose.rs          # mixtures of at most d + 1 processes
//! ├── svd_terms.rs          # singular-value expansion and physicality
//! ├── ensemble.rs           # seeded Monte Carlo and convergence rates
//! ├── spin1.rs              # the three-level worked example
//! └── json_documents.rs     # file formats shared with the CLI
//! ```
//!
//! ## Measures and weak values
//!
//! - **`weak_values`** — build `W` from a prepared/post-selected pair,
//!   evaluate `mu` and `lambda(A)`, recover the weak value at weight 1
//! - **`contextual_average`** — the pole-free contextual average equals
//!   `<psi|A|psi>` in every orthonormal basis
//! - **`consistency`** — run the full invariant report for real and
//!   complex weights
//!
//! ```bash
//! cargo run --example weak_values
//! cargo run --example contextual_average
//! cargo run --example consistency
//! ```
//!
//! ## Evolution and dual processes
//!
//! - **`evolution`** — evolve `W` across a window, confirm unit trace and
//!   the boundary certainties, exchange roles with the dual process
//!
//! ```bash
//! cargo run --example evolution
//! ```
//!
//! ## Decomposition into processes
//!
//! - **`decompose`** — expand a trace-one operator into at most `d + 1`
//!   weighted processes, with default and custom plans
//! - **`svd_terms`** — the singular-value alternative and its
//!   physicality flags
//! - **`spin1`** — the three-level worked example, exact for every
//!   complex weight
//!
//! ```bash
//! cargo run --example decompose
//! cargo run --example svd_terms
//! cargo run --example spin1
//! ```
//!
//! ## Sampling and files
//!
//! - **`ensemble`** — reproducible Monte Carlo averages, decomposition
//!   independence, and the `n^(-1/2)` convergence slope
//! - **`json_documents`** — write and read every document kind and feed
//!   the same files to the command-line interface
//!
//! ```bash
//! cargo run --example ensemble
//! cargo run --example json_documents
//! ```
//!
//! ## Command-line interface
//!
//! The `doublestate` binary exposes the same capabilities over JSON
//! documents (complex numbers as `[re, im]` pairs, results printed to
//! 15 significant digits):
//!
//! ```bash
//! cargo run --bin doublestate -- --help
//! cargo run --bin doublestate -- spin1-example --alpha 0.3,0.7
//! ```
//!
//! ## Acceptance suite
//!
//! An end-to-end acceptance run prints one line per criterion:
//!
//! ```bash
//! cargo test --test acceptance -- --nocapture
//! ```

pub mod cli;
pub mod decompose;
pub mod document;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod process;
pub mod tolerance;

pub use decompose::{
    decompose_processes, resolve_plan, spin1_example, svd_decompose, svd_reconstruct,
    DecompositionPlan, ProcessMixture, ProcessTerm, RawTerm, ResolvedDecomposition, SvdTerm,
    EXPANSION_CONVENTION,
};
pub use document::{Document, ProvenanceDocument, TermDocument};
pub use ensemble::{convergence_study, log_log_slope, sample_ensemble, MonteCarloEstimate};
pub use error::{Error, Result};
pub use linalg::{Operator, SpectralDecomposition, StateVector};
pub use measure::{
    born_measure, contextual_average, contextual_average_pre, expectation_single,
    verify_consistency, weak_value, ConsistencyCheck, DoubleState, MeasureReport, Provenance,
};
pub use num_complex::Complex64;
pub use process::{dual_process, evolve_double_state, verify_dual_equivalence, ProcessWindow};

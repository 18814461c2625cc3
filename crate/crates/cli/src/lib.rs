//! Command-line front end: JSON documents, subcommands and the seeded lemma suite.

pub mod commands;
pub mod document;
pub mod lemmas;
pub mod random;

pub use commands::{run_subcommand, Outcome};
pub use document::parse_matrix_document;
pub use lemmas::{run_lemma_suite, LemmaReport, SuiteConfig};

//! Experiment presets, the run ledger and the verification batteries behind the
//! `connpart` command-line tool.

pub mod experiment;
pub mod verify;

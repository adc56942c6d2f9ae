//! Library half of the `gwmax` command-line tool: run reports, command
//! implementations, and the W_n benchmark harness. The binary in
//! `main.rs` only parses arguments and dispatches here.

pub mod bench;
pub mod commands;
pub mod report;

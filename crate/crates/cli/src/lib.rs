//! Library surface of the `quatsamp` harness: config parsing, the
//! experiment runner, the verification battery, grid file i/o, and the
//! report types. The binary in `main.rs` is a thin wrapper over these.

pub mod config;
pub mod gridio;
pub mod report;
pub mod runner;
pub mod verify;

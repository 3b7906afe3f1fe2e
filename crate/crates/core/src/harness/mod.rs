//! Instance files, generators, verifiers, brute-force oracles, the
//! statistical runner and the command implementations used by the CLI.

pub mod commands;
pub mod gen;
pub mod io;
pub mod oracle;
pub mod stats;
pub mod verify;

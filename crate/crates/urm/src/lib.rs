//! File formats and the command-line front end for `urm-core`.

pub mod cli;
pub mod formats;

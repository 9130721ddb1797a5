//! File formats and command-line front end for `gmedim-core`.

pub mod cli;
pub mod io;
pub mod report;

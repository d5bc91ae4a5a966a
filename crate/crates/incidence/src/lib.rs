//! Standard-library companion to `incidence-core`: JSON and CSV formats,
//! the `incidence` command line, and rayon-parallel drivers.

pub mod cli;
pub mod formats;
pub mod parallel;

//! Command-line front end for `bjorth`: argument parsing, configuration,
//! SVG figures and the seeded verification suites.

pub mod commands;
pub mod config;
pub mod io;
pub mod plot;
pub mod suites;

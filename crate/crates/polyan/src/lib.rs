//! Command-line front end and file formats for `polyan-core`.

pub mod cli;
pub mod error;
pub mod heatmap;
pub mod io;

pub use cli::run;
pub use error::CliError;

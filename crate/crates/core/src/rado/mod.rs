//! Numerical Radó extension across zero sets, coefficient recovery, and
//! assembly of separate polyanalyticity on polydiscs.

mod dbar;
mod hartogs;
mod verify;

pub use dbar::{calibrate, numeric_dbar};
pub use hartogs::{hartogs_assemble, HartogsReport, HartogsVerdict, PolyGrid, Polydisc};
pub use verify::{extract_coefficients, rado_verify, RadoReport, RadoVerdict, SampledFunction};

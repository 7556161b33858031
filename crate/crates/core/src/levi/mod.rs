//! Levi form of a graph hypersurface, the family of attached discs that
//! fills one side of it, and maximum modulus checks along those discs.

mod discs;
mod surface;
mod verify;

pub use discs::{build_disc_family, Disc, DiscCounts, DiscFamily};
pub use surface::{levi_form, GraphHypersurface, HTerm, LeviData};
pub use verify::{bmmp_verify, constant_modulus_trace, BmmpReport, TraceReport, TraceVerdict};

//! Certified real zeros of S_q, C_q, A_q, f_u and B t − D, and interlacing checks.

mod find;
mod interlace;
mod table;

pub use find::find_zeros;
pub use interlace::{interlace_certified, interlace_check};
pub use table::{interlace_locations, Bracket, Zero, ZeroTable};

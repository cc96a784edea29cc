//! Constructions of second surfaces: S-Willmore duals, Darboux transforms and
//! the cmc-1 second envelope test.

pub mod cmc1;
pub mod darboux;
pub mod dual;

pub use cmc1::{cmc1_verify, Branch, Cmc1Report, HorosphereLift};
pub use darboux::{darboux_integrate, darboux_pair, darboux_transform, verify_darboux, DarbouxParams, DarbouxReport, DarbouxResult};
pub use dual::{dual_lift, dual_swillmore, DualLift};

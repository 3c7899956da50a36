//! Closed immersions, separatedness, valuative lifting over `ℚ[t]_(t)` and the pro-local
//! finite-presentation covering criterion.

mod immersion;
mod prolocal;
mod rational;
mod valuative;

pub use immersion::{
    diagonal, is_closed_immersion, is_separated, ClosedImmersionReport, ImmersionPoint, SeparatedReport,
};
pub use prolocal::{chart_covers, prolocal_fp_check, ProlocalReport};
pub use rational::RationalFunction;
pub use valuative::{raw_lifts, v_lifts, v_proper_report, BaseData, LiftCount, SigmaPoint, VProperReport};

//! Cost-aware evaluation of delivery-robot navigation.
//!
//! The pipeline runs from episode logs (produced by [`sim`] or supplied
//! externally) through [`log`] aggregation into the unit economics of
//! [`econ`], and on to sweeps, break-even curves and leaderboards in
//! [`analysis`].

pub mod analysis;
pub mod econ;
pub mod fixture;
pub mod log;
pub mod sim;

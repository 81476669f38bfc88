//! Reduction stages and certificate maps.

pub mod aonf_co;
pub mod co_upward;
pub mod mcc_aonf;
pub mod stage;

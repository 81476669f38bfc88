//! Gadget constructors and verifiers.

pub mod rect_tendril;
pub mod vs_ch;
pub mod rect_verify;
pub mod tendril;
pub mod tendril_verify;
pub mod verify;

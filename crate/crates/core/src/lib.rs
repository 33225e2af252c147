//! Partition rank statistics: exact counts, the modular and mock modular
//! functions behind their generating function, and a circle-method
//! reconstruction of `N(m,n)` from those functions.

pub mod exact;
pub mod qseries;
pub mod specfun;
pub mod asym;
pub mod report;
pub mod circle;
pub mod verify;

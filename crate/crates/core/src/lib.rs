pub mod cocycle;
pub mod engines;
pub mod error;
pub mod lattice;
pub mod pascal;
pub mod qp;
pub mod qseries;
pub mod verify;

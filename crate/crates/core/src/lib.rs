pub mod certify;
pub mod cli;
pub mod families;
pub mod lattice;
pub mod linalg;
pub mod log_canonical;
pub mod moment;
pub mod polyhedral;
pub mod rational;
pub mod verify;

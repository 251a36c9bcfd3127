pub mod algebra;
pub mod bethe;
pub mod hamiltonian;
pub mod lattice;
pub mod qboson;
pub mod rep;
pub mod scalar;
pub mod verify;

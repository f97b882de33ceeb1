pub mod bispace;
pub mod json;
pub mod linalg;
pub mod orbits;
pub mod poset;
pub mod sample;
pub mod scalars;
pub mod semiconformal;
pub mod conformal;
pub mod fock;

pub mod atlas;
pub mod delpezzo;
pub mod error;
pub mod lattice;
pub mod laurent;
pub mod mutation;
pub mod num;
pub mod polytope;

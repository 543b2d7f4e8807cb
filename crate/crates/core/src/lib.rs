//! Groupoid generalizations of the toric code.
//!
//! Edges of a square lattice carry morphisms of a finite groupoid. For the
//! groupoids with one arrow between each ordered pair of objects, an edge
//! splits into two qudit sites (tail and head), and the vertex and face
//! projectors become sums of clock/shift strings. The crate builds those
//! models, computes ground-state degeneracies exactly over Z_n, and checks
//! everything against a brute-force oracle on small lattices.

pub mod catalog;
pub mod commutation;
pub mod dense;
pub mod error;
pub mod groupoid;
pub mod lattice;
pub mod pauli;
pub mod stabilizer;
pub mod zmod;

pub use catalog::{build_hamiltonian, HamiltonianSpec, ModelId, TermKind};
pub use error::{Error, Result};
pub use groupoid::{Groupoid, MorphismId, ObjectId};
pub use lattice::{Corner, Direction, FaceId, Lattice, SiteId, Topology, VertexId};
pub use pauli::{OperatorSum, PauliString};
pub use stabilizer::StabilizerModel;

//! Analysis and design of non-binary (2,v)-regular LDPC codes.
//!
//! The pipeline: parse a code ([`code`]), contract its Tanner graph to the
//! check multigraph and enumerate short cycles ([`cyclegraph`]), mine the
//! inter-connected cycle patterns admissible for the girth ([`ontology`]),
//! then solve each subgraph's homogeneous system to count low-weight
//! codewords of the binary image ([`spectrum`]). [`design`] uses cycle
//! cancellation and spectrum comparison to search for new value assignments.

pub mod code;
pub mod cyclegraph;
pub mod design;
pub mod error;
pub mod fixtures;
pub mod galois;
pub mod ontology;
pub mod spectrum;

pub use code::{BinaryImage, LdpcCode, SymbolCodeword};
pub use error::{Error, Result};
pub use galois::{Field, FieldSpec, Gf};

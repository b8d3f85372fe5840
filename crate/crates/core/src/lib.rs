pub mod bisections;
pub mod catalog;
pub mod cli;
pub mod cover;
pub mod error;
pub mod format;
pub mod germ;
pub mod groupoid;
pub mod iso;
pub mod lattice;
pub mod quantale;
pub mod report;
pub mod search;
pub mod semigroup;
pub mod tensor;
pub mod topology;
pub mod verdict;

pub use error::{Error, Result};
pub use lattice::{Elem, FiniteLattice, LatticeMap};
pub use quantale::{Classification, Quantale};
pub use verdict::{TheoremCheck, Verdict};

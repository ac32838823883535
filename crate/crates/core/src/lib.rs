//! Linear-time verification of strong structural controllability for a pair
//! of structural matrices `(A, B)`, together with brute-force oracles, a
//! small-scale minimum-input search, Matrix Market I/O and a scaling
//! benchmark harness.

pub mod bench;
pub mod error;
pub mod generate;
pub mod index_sets;
pub mod min_input;
pub mod mtx;
pub mod oracle;
pub mod pattern;
pub mod verifier;

pub use error::{IndexOutOfRange, PatternError};
pub use index_sets::{MembershipFlags, SparseIndexSet};
pub use pattern::{
    build_ccs, validate_links, CcsPattern, LinkedPattern, PatternTriplets, Violation,
};
pub use verifier::{is_ssc, run, Mode, SscReport, Verifier, VerifyOutcome};

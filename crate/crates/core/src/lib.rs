//! Exact arithmetic and constraint checks for fixed-point data of circle
//! actions on closed manifolds, with exhaustive searches over three-point
//! weight patterns in dimensions 4, 8 and 12.

pub mod constraints;
pub mod document;
pub mod dot;
pub mod exact;
pub mod fpdata;
pub mod search;
pub mod verify;

pub use constraints::{Certificate, ConstraintError, SignatureResult, Stage, Verdict};
pub use document::{DocumentError, FixedPointDataDocument};
pub use exact::{IntPolynomial, TruncatedSeries};
pub use fpdata::{FixedPoint, FixedPointData, FpError, Sign, TriplePattern};
pub use search::{SearchError, SearchKind, SearchOptions, SearchReport};
pub use verify::{verify_data, VerifyReport};

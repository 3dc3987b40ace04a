//! Prefix-free coding with unequal letter costs.
//!
//! Given probabilities `p_1 >= p_2 >= ... >= p_n` and an encoding alphabet whose
//! letters have costs `c_1 <= c_2 <= ...` (finitely or infinitely many), this
//! crate builds a prefix-free code by recursive midpoint splitting into
//! geometrically sized bins, and evaluates the redundancy guarantees that go
//! with it.
//!
//! The pieces:
//!
//! * [`costs`] describes alphabets ([`CostSpec`]), solves the characteristic
//!   equation `1 = sum_i 2^(-c * c_i)` and computes the structural quantities
//!   (`beta`, `d_j`, tail sums) the bounds rely on.
//! * [`coder`] builds the code tree in `O(n log n)` independently of the
//!   alphabet size.
//! * [`analysis`] reports cost, entropy, redundancy and every bound value.
//! * [`oracle`] computes exact optima for small instances by branch and bound.
//! * [`probfile`] parses probability lists from text or JSON.

pub mod analysis;
pub mod coder;
pub mod costs;
mod error;
pub mod numeric;
pub mod oracle;
pub mod probfile;

pub use analysis::{AnalysisReport, ApproxBound, BoundEntry, BoundName};
pub use coder::{build_code, prepare, verify_prefix_free, CodeTree, ProbInput, SplitTrace};
pub use costs::{char_root, normalize, CharRoot, CostSpec, Family};
pub use error::{AnalysisError, CodeError, CostError, Error, OracleError};
pub use oracle::{exact_opt, huffman_equal_cost, OracleResult};

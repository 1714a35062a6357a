//! Palindromic structure of texts: the array of maximal palindrome lengths
//! at every center, a linear-bit codec for it, a linear-bit index answering
//! single-center queries with a bounded number of probes, and reconstruction
//! of minimal-alphabet preimages.
//!
//! Centers are augmented: a text of length `n` has `2n - 1` of them, even
//! ones on characters and odd ones between neighbors.

pub mod bits;
pub mod cfarray;
pub mod codec;
pub mod corpus;
pub mod error;
pub mod palindex;
pub mod pals;
pub mod periodic;
pub mod reconstruct;
pub mod succinct;

pub use cfarray::{cf_build, cf_check_constraint, cf_find, CfArray, CfEntry};
pub use codec::{decode_compact, encode_compact, CompactPal};
pub use error::{Error, Result};
pub use palindex::{build_index, PalIndex, SpaceReport};
pub use pals::{brute_force_pals, manacher, mps_change_list, PalArray, SuffixChange};
pub use periodic::{centric_centers, detect_ppds, ppd_radius, Ppd};
pub use reconstruct::{reconstruct_min, verify_pal_match, Preimage};
pub use succinct::RsBitVector;

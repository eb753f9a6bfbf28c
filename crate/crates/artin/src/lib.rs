//! Geodesics and the word problem in Artin groups without length-3
//! relations.
//!
//! An Artin group is given by generators and, for selected pairs, a relation
//! equating the two alternating products of some length m ≥ 2. When no pair
//! has m = 3, every non-geodesic word admits a *rightward reducing
//! sequence*: a chain of length-preserving rewrites on overlapping
//! pseudo-2-generated blocks that marches a letter to the right until it
//! cancels. Searching for such sequences decides geodesity, and folding a
//! word letter by letter through them computes an equivalent geodesic, so
//! the word problem is solved by reducing `w·v⁻¹` and checking for the
//! empty word.
//!
//! The crate is organized bottom-up:
//!
//! - [`presentation`]: validated 3-free presentations and the exponent
//!   table.
//! - [`words`]: letters, words, parsing/printing, free reduction.
//! - [`dihedral`]: the two-generator theory: the p/n geodesic criterion,
//!   critical words and the involution τ.
//! - [`p2g`]: pseudo-2-generated words, the α·ρ·ŵ·β rearrangement and the
//!   extended τ-move.
//! - [`rrs`]: rightward reducing sequences: search, optimality selection,
//!   replay with trace emission.
//! - [`reducer`]: geodesic testing, the letter-folding reduction map, word
//!   equality, geodesic classes and the abelianization check.
//! - [`oracle`]: independent brute-force verifiers (bounded rewrite-ball
//!   search and baselines) used to cross-check everything above.
//! - [`cli`]: the `artin` command-line tool.

pub mod cli;
pub mod dihedral;
pub mod oracle;
pub mod p2g;
pub mod presentation;
pub mod reducer;
pub mod rrs;
pub mod words;

pub use presentation::{Exponent, Gen, Presentation, PresentationError};
pub use reducer::{equal, geodesic_closure, is_geodesic, reduce};
pub use words::{Letter, Word, WordError};

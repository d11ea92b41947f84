//! Exact arithmetic for Wahl singularities, Markov triples, toric models of
//! weighted projective planes, and exceptional bundle numerics.
//!
//! Everything is computed over `BigInt`/`BigRational`; no floating point.

pub mod bundle;
pub mod cli;
pub mod correspondence;
pub mod cyclic_quotient;
pub mod error;
pub mod exact;
pub mod homology;
pub mod markov;
pub mod serial;
pub mod toric;
pub mod verify;

pub use correspondence::BundleClass;
pub use cyclic_quotient::{CyclicQuotient, WahlPair, WahlType};
pub use error::{Error, Result};
pub use exact::HjChain;
pub use markov::MarkovTriple;

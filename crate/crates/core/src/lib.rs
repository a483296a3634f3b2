//! Exact finite decision procedures for whether equivariant chromatic
//! localizations preserve multiplicative structure.
//!
//! * [`group`]: finite groups, subgroup lattices, conjugation, double cosets.
//! * [`transfer`]: transfer systems (relational indexing systems / N∞ operads).
//! * [`spectrum`]: Balmer primes, vanishing loci, support profiles, ℓ-vectors.
//! * [`engine`]: the preservation criteria and their cyclic specializations.

pub mod bitset;
pub mod group;
pub mod transfer;
pub mod spectrum;
pub mod engine;

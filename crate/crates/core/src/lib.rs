//! Property testing of H-freeness for graphs of bounded r-admissibility in
//! the random-neighbor oracle model, together with the structural toolkit
//! used to analyse the tester.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod admissibility;
pub mod bitset;
mod flow;
pub mod graph;
pub mod structure;
pub mod trimming;
mod search;
pub mod oracle;
pub mod tester;
pub mod generators;

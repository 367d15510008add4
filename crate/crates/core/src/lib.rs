//! Galilean intelligibility of empirical statements and trained networks.
//!
//! `I = 1 - N_E / N_O`, where `N_O` counts ontologically grounded variables
//! and `N_E` counts empirical constants after algebraically combinable
//! constants have been fused.

pub mod cli;
pub mod corpus;
pub mod expr;
pub mod intelligibility;
pub mod netintel;
pub mod ontology;

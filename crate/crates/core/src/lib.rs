//! Finite relational structures, morphism oracles, graph-to-tree codings,
//! structure sums and finite quotient constructions.

mod bitset;
mod indexed;

pub mod coding;
pub mod morphisms;
pub mod structures;
pub mod trees;
pub mod sums;
pub mod quotients;
pub mod corpus;
pub mod suite;

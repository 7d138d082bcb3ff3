//! Decision procedures for graphs of groups whose vertex groups are free or
//! infinite dihedral and whose edge groups are infinite cyclic.
//!
//! The pipeline: [`model`] holds the graph, [`word`] solves the word
//! problem by Britton reduction, [`balance`] decides balancedness through a
//! weighted groupoid of root classes, [`conj_graph`] builds the conjugacy
//! graph of each edge class, [`parametrize`] maps those to the infinite
//! dihedral group, and [`certify`] produces Baumslag–Solitar type witnesses
//! when no such map exists.

pub mod balance;
pub mod certify;
pub mod conj_graph;
pub mod dihedral;
pub mod free_words;
pub mod model;
pub mod par;
pub mod parametrize;
pub mod random;
pub mod report;
pub mod search;
pub mod text;
pub mod word;

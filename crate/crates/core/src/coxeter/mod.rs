//! Coxeter graphs, group elements as canonical reduced words, Bruhat
//! order, full commutativity, and bounded enumeration.

mod graph;
mod group;

pub use graph::{Bond, Classification, CoxeterGraph, GraphLabel};
pub use group::{Element, Group, Side, DEFAULT_ELEMENT_CAP};

pub(crate) use group::braid_tail;

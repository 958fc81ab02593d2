// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Exactly simulated quantum algorithms for deciding whether a graph is a
//! forest or bipartite.
//!
//! The pipeline reduces cycle detection to s-t connectivity in a lifted
//! graph H, then decides connectivity either with a span program (adjacency
//! matrix model) or with a quantum walk (adjacency array model). Every
//! quantum step is simulated with dense linear algebra, and classical
//! brute-force oracles are provided for checking each stage.

pub mod ancillary;
pub mod coloring;
pub mod error;
pub mod gadget;
pub mod graph;
pub mod linalg;
pub mod oracles;
pub mod search;
pub mod sim;
pub mod span;

pub use ancillary::{AncillarySpec, HVertex};
pub use coloring::VertexColoring;
pub use error::{Error, Result};
pub use graph::{AdjacencyArray, EdgeCount, Graph};
pub use oracles::CycleWitness;
pub use search::{Constants, DecisionReport, OracleCounter, Verdict};
pub use span::STProgram;

// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-level permutation graphs whose cycle structure encodes the parity
//! of a bit string.
//!
//! Vertex `v_{i,b}` (level `b`, column `i`) has label `2i + b + 1`, and
//! `v_{i,b}` is joined to `v_{i+1, b xor x_i}` with columns taken cyclically.
//! Even parity closes two cycles of length `p`; odd parity one of length `2p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AdjacencyArray, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetVariant {
    /// One edge removed: acyclic iff the parity is odd.
    CycleTest,
    /// A zero bit appended when `p` is even: bipartite iff the parity is odd.
    BipartiteTest,
}

pub fn gadget_label(i: usize, b: usize) -> usize {
    2 * i + b + 1
}

pub fn parity(x: &[bool]) -> bool {
    x.iter().fold(false, |acc, &b| acc ^ b)
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidParameter(format!("bit string contains `{other}`"))),
        })
        .collect()
}

/// The permutation graph before any edge removal.
pub fn permutation_graph(x: &[bool]) -> Result<Graph> {
    let p = x.len();
    if p < 2 {
        return Err(Error::InvalidParameter(format!("gadget needs p >= 2, got {p}")));
    }
    let mut g = Graph::new(2 * p);
    for (i, &xi) in x.iter().enumerate() {
        for b in 0..2 {
            let u = gadget_label(i, b);
            let v = gadget_label((i + 1) % p, b ^ usize::from(xi));
            g.add_edge(u, v).map_err(|_| {
                Error::InvalidParameter(format!(
                    "p = {p} with even parity closes two 2-cycles, which is a multigraph"
                ))
            })?;
        }
    }
    Ok(g)
}

pub fn parity_gadget(x: &[bool], variant: GadgetVariant) -> Result<AdjacencyArray> {
    if x.len() < 2 {
        return Err(Error::InvalidParameter(format!("gadget needs p >= 2, got {}", x.len())));
    }
    let g = match variant {
        GadgetVariant::CycleTest => {
            let mut g = permutation_graph(x)?;
            g.remove_edge(gadget_label(0, 0), gadget_label(1 % x.len(), usize::from(x[0])))?;
            g
        }
        GadgetVariant::BipartiteTest => {
            let mut bits = x.to_vec();
            if bits.len() % 2 == 0 {
                bits.push(false);
            }
            permutation_graph(&bits)?
        }
    };
    Ok(AdjacencyArray::from_graph(&g))
}

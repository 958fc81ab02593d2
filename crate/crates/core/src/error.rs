// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("slot {slot} out of range 1..={degree}")]
    SlotOutOfRange { slot: usize, degree: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("size cap exceeded: {what} is {actual}, limit {limit}")]
    SizeCap {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("dense input refused: {edges} edges on {vertices} vertices")]
    DenseRegime { edges: usize, vertices: usize },
}

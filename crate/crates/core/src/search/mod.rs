// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! QSearch, the doubling schedule over cycle-length guesses, majority
//! amplification and the end-to-end deciders.

mod decide;
mod majority;
mod qsearch;

pub use decide::{
    decide_bipartite_matrix, decide_forest_array, decide_forest_matrix, DeciderMode, Problem, ProblemDecider,
};
pub use majority::{amplify_majority, boosted_probability, majority_repetitions, Majority};
pub use qsearch::{
    doubling_budget, doubling_search, grover_success_closed_form, grover_success_statevector, qsearch,
    qsearch_with, QSearchOutcome,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::CycleWitness;

/// Tunable constants of the pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// `C''` in the doubling budget `C'' sqrt(n / 2^i)`.
    pub c_double: f64,
    /// QSearch growth factor, `1 < lambda < 4/3`.
    pub lambda: f64,
    /// `alpha = alpha_c sqrt(2d + 2)`.
    pub alpha_c: f64,
    /// `Theta = 1 / (c_prime sqrt(W0 W1))`.
    pub c_prime: f64,
    /// Walk weight `C` in `zeta_s`.
    pub walk_c: f64,
    /// Walk length `T = ceil(c_w sqrt(d n))`.
    pub c_w: f64,
    /// Phase precision factor of the walk statistic.
    pub c_theta: f64,
    /// Majority threshold as a fraction of the repetitions.
    pub tau: f64,
    /// Assumed single-run acceptance on positive inputs.
    pub p_true: f64,
    /// Assumed single-run acceptance on negative inputs.
    pub p_false: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c_double: 16.0,
            lambda: 1.2,
            alpha_c: 2.0,
            c_prime: 10.0,
            walk_c: crate::sim::walk::DEFAULT_WALK_WEIGHT,
            c_w: crate::sim::walk::DEFAULT_C_W,
            c_theta: 1.0,
            tau: 0.30,
            p_true: 0.45,
            p_false: 0.10,
        }
    }
}

impl Constants {
    pub const KEYS: [&'static str; 10] = [
        "c_double", "lambda", "alpha_c", "c_prime", "walk_c", "c_w", "c_theta", "tau", "p_true", "p_false",
    ];

    /// Sets one constant by name.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "c_double" => &mut self.c_double,
            "lambda" => &mut self.lambda,
            "alpha_c" => &mut self.alpha_c,
            "c_prime" => &mut self.c_prime,
            "walk_c" => &mut self.walk_c,
            "c_w" => &mut self.c_w,
            "c_theta" => &mut self.c_theta,
            "tau" => &mut self.tau,
            "p_true" => &mut self.p_true,
            "p_false" => &mut self.p_false,
            _ => return Err(Error::InvalidParameter(format!("unknown constant {key:?}"))),
        };
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("{key} = {value}")));
        }
        *slot = value;
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 1.0 && self.lambda < 4.0 / 3.0) {
            return Err(Error::InvalidParameter(format!("lambda = {} not in (1, 4/3)", self.lambda)));
        }
        if !(self.p_false < self.tau && self.tau < self.p_true) {
            return Err(Error::InvalidParameter("need p_false < tau < p_true".into()));
        }
        for (k, v) in [
            ("c_double", self.c_double),
            ("alpha_c", self.alpha_c),
            ("c_prime", self.c_prime),
            ("walk_c", self.walk_c),
            ("c_w", self.c_w),
            ("c_theta", self.c_theta),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("{k} = {v} must be positive")));
            }
        }
        Ok(())
    }
}

/// Work counters; every field only grows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounter {
    /// Queries to the input graph.
    pub queries: u64,
    pub grover_iterations: u64,
    pub walk_steps: u64,
    /// Single runs of the per-(k, d) decider.
    pub base_calls: u64,
    pub seed: u64,
}

impl OracleCounter {
    pub fn new(seed: u64) -> Self {
        OracleCounter {
            seed,
            ..Default::default()
        }
    }

    pub fn merge(&mut self, other: &OracleCounter) {
        self.queries += other.queries;
        self.grover_iterations += other.grover_iterations;
        self.walk_steps += other.walk_steps;
        self.base_calls += other.base_calls;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    Forest,
    HasCycle { k: usize },
    Bipartite,
    OddCycle { k: usize },
}

impl Verdict {
    /// Whether the property asked about (forest or bipartite) holds.
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Forest | Verdict::Bipartite)
    }
}

/// Classical certificate attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Cycle { cycle: CycleWitness },
    TwoColoring { colors: Vec<u8> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub i: u32,
    pub d: usize,
    pub budget: usize,
    pub iterations: usize,
    /// QSearch measurement rounds.
    pub rounds: usize,
    pub found: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub problem: Problem,
    pub model: String,
    pub n: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub counters: OracleCounter,
    pub trace: Vec<RoundTrace>,
    /// Set when the array model rejected on edge count alone.
    pub early_reject: bool,
    pub constants: Constants,
}

impl DecisionReport {
    /// Checks that the witness, if any, supports the verdict on `g`.
    pub fn witness_consistent(&self, g: &crate::graph::Graph) -> bool {
        match (&self.verdict, &self.witness) {
            (_, None) => true,
            (Verdict::HasCycle { .. }, Some(Witness::Cycle { cycle })) => {
                CycleWitness::new(g, cycle.vertices.clone()).is_ok()
            }
            (Verdict::OddCycle { .. }, Some(Witness::Cycle { cycle })) => {
                cycle.len() % 2 == 1 && CycleWitness::new(g, cycle.vertices.clone()).is_ok()
            }
            (Verdict::Bipartite, Some(Witness::TwoColoring { colors })) => {
                g.edges().all(|(u, v)| colors[u] != colors[v])
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_keys_and_validation() {
        let mut c = Constants::default();
        c.validate().unwrap();
        for k in Constants::KEYS {
            let v = match k {
                "lambda" => 1.1,
                "tau" => 0.3,
                "p_true" => 0.5,
                "p_false" => 0.05,
                _ => 3.0,
            };
            c.set(k, v).unwrap();
        }
        assert!(c.set("nope", 1.0).is_err());
        assert!(c.set("lambda", 1.5).is_err());
    }

    #[test]
    fn verdict_serialisation() {
        let v = Verdict::HasCycle { k: 3 };
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"kind":"has-cycle","k":3}"#);
        assert!(!v.holds());
        assert!(Verdict::Bipartite.holds());
    }
}

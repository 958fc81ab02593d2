// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end deciders.
//!
//! A single run of the per-`(k, d)` decider accepts with a probability that
//! is computed exactly: the span-program acceptance `||P_Theta|0>||^2` in the
//! matrix model, or the zero-phase probability of the walk in the array
//! model. Colourings enter through their effect on the edges at `k`, so
//! probabilities are cached per neighbour-colour pattern.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ancillary::AncillarySpec;
use crate::coloring::VertexColoring;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyArray, Graph};
use crate::oracles;
use crate::search::majority::{amplify_majority, boosted_probability, majority_repetitions, Majority};
use crate::search::qsearch::doubling_search;
use crate::search::{Constants, DecisionReport, OracleCounter, RoundTrace, Verdict, Witness};
use crate::sim::spanu::acceptance_reduced;
use crate::sim::walk::{doubled_component, zero_phase_probability, WalkSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Forest,
    Bipartite,
}

/// How a predicate evaluation inside QSearch is simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeciderMode {
    /// One Bernoulli draw from the exact boosted acceptance probability.
    Exact,
    /// Literal repetitions, each with a freshly sampled colouring.
    Sampled,
}

#[derive(Clone, Debug)]
enum Input {
    Matrix(Graph),
    Array(AdjacencyArray),
}

/// Per-run cost of one decider call, and its acceptance probability.
#[derive(Clone, Copy, Debug)]
struct CallCost {
    p: f64,
    queries: u64,
    steps: u64,
}

#[derive(Clone, Debug)]
struct Table {
    boosted: Vec<f64>,
    queries: u64,
    steps: u64,
}

/// A decider for one input graph. Probability caches persist across runs.
#[derive(Clone, Debug)]
pub struct ProblemDecider {
    problem: Problem,
    input: Input,
    graph: Graph,
    pub consts: Constants,
    pub majority: Majority,
    pub mode: DeciderMode,
    single: HashMap<(usize, usize, Vec<bool>), CallCost>,
    tables: HashMap<usize, Table>,
}

impl ProblemDecider {
    pub fn matrix(g: &Graph, problem: Problem, consts: &Constants, epsilon: f64) -> Result<Self> {
        Self::build(Input::Matrix(g.clone()), g.clone(), problem, consts, epsilon)
    }

    pub fn array(arr: &AdjacencyArray, consts: &Constants, epsilon: f64) -> Result<Self> {
        arr.validate()?;
        let g = arr.to_graph()?;
        Self::build(Input::Array(arr.clone()), g, Problem::Forest, consts, epsilon)
    }

    fn build(input: Input, graph: Graph, problem: Problem, consts: &Constants, epsilon: f64) -> Result<Self> {
        consts.validate()?;
        Ok(ProblemDecider {
            problem,
            input,
            graph,
            consts: consts.clone(),
            majority: majority_repetitions(epsilon, consts)?,
            mode: DeciderMode::Exact,
            single: HashMap::new(),
            tables: HashMap::new(),
        })
    }

    pub fn with_mode(mut self, mode: DeciderMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn model_name(&self) -> &'static str {
        match self.input {
            Input::Matrix(_) => "matrix",
            Input::Array(_) => "array",
        }
    }

    fn s_mod(&self) -> usize {
        match self.problem {
            Problem::Forest => 3,
            Problem::Bipartite => 2,
        }
    }

    fn pattern(&self, k: usize, coloring: Option<VertexColoring>) -> Vec<bool> {
        match coloring {
            Some(h) => self.graph.neighbors(k).iter().map(|&u| h.color(u)).collect(),
            None => Vec::new(),
        }
    }

    fn call(&mut self, k: usize, d: usize, coloring: Option<VertexColoring>) -> Result<CallCost> {
        let key = (k, d, self.pattern(k, coloring));
        if let Some(c) = self.single.get(&key) {
            return Ok(*c);
        }
        let s_mod = self.s_mod();
        let cost = match &self.input {
            Input::Matrix(g) => {
                let spec = AncillarySpec::matrix(g, s_mod, k, coloring)?;
                let h = spec.build_explicit()?;
                let edges: Vec<(usize, usize)> = h.edges().collect();
                let big_n = h.n();
                let w1 = 2.0 * d as f64 + 2.0;
                let w0 = (big_n * (big_n - 1) / 2) as f64;
                let alpha = self.consts.alpha_c * w1.sqrt();
                let theta = 1.0 / (self.consts.c_prime * (w0 * w1).sqrt());
                let acc = acceptance_reduced(big_n, 1, 2, alpha, &edges, theta)?;
                let n = g.n() as u64;
                CallCost {
                    p: acc.probability,
                    queries: n * (n - 1) / 2,
                    steps: 0,
                }
            }
            Input::Array(arr) => {
                let spec = AncillarySpec::array(arr, s_mod, k, coloring)?;
                let comp = doubled_component(&spec)?;
                let walk = WalkSpace::new(
                    comp.graph,
                    comp.s,
                    comp.t,
                    self.consts.walk_c,
                    2 * d + 3,
                    comp.n_total,
                )?;
                let steps = walk.steps(self.consts.c_w);
                if walk.edges().len() > walk.n_total {
                    return Err(Error::DenseRegime {
                        edges: walk.edges().len(),
                        vertices: walk.n_total,
                    });
                }
                CallCost {
                    p: zero_phase_probability(&walk, steps).clamp(0.0, 1.0),
                    queries: spec.queries(),
                    steps: steps as u64,
                }
            }
        };
        self.single.insert(key, cost);
        Ok(cost)
    }

    /// Probability that one run accepts for anchor `k` and guess `d`, averaged
    /// over the colouring family (forest) or exact (bipartite).
    pub fn mean_acceptance(&mut self, k: usize, d: usize) -> Result<f64> {
        Ok(self.mean_call(k, d)?.p)
    }

    fn mean_call(&mut self, k: usize, d: usize) -> Result<CallCost> {
        if self.problem == Problem::Bipartite {
            return self.call(k, d, None);
        }
        let mut groups: HashMap<Vec<bool>, (usize, VertexColoring)> = HashMap::new();
        let mut total = 0usize;
        for h in VertexColoring::family(self.graph.n()) {
            total += 1;
            groups.entry(self.pattern(k, Some(h))).or_insert((0, h)).0 += 1;
        }
        let mut groups: Vec<(Vec<bool>, (usize, VertexColoring))> = groups.into_iter().collect();
        groups.sort_by(|a, b| a.0.cmp(&b.0));
        let mut mean = 0.0;
        let (mut queries, mut steps) = (0, 0);
        for (_, (count, h)) in groups {
            let c = self.call(k, d, Some(h))?;
            mean += count as f64 * c.p;
            queries = queries.max(c.queries);
            steps = steps.max(c.steps);
        }
        Ok(CallCost {
            p: mean / total as f64,
            queries,
            steps,
        })
    }

    /// Boosted acceptance probabilities for every anchor at guess `d`.
    pub fn boosted_table(&mut self, d: usize) -> Result<Vec<f64>> {
        Ok(self.table(d)?.boosted.clone())
    }

    fn table(&mut self, d: usize) -> Result<&Table> {
        if !self.tables.contains_key(&d) {
            let n = self.graph.n();
            let mut boosted = Vec::with_capacity(n);
            let (mut queries, mut steps) = (0, 0);
            for k in 1..=n {
                let c = self.mean_call(k, d)?;
                boosted.push(boosted_probability(c.p, self.majority));
                queries = queries.max(c.queries);
                steps = steps.max(c.steps);
            }
            self.tables.insert(d, Table { boosted, queries, steps });
        }
        Ok(&self.tables[&d])
    }

    fn single_run<R: Rng + ?Sized>(&mut self, k: usize, d: usize, rng: &mut R) -> Result<bool> {
        let coloring = match self.problem {
            Problem::Forest => Some(VertexColoring::sample_with(self.graph.n(), rng)?),
            Problem::Bipartite => None,
        };
        let p = self.call(k, d, coloring)?.p;
        Ok(rng.random_bool(p))
    }

    fn sample_marked<R: Rng + ?Sized>(&mut self, d: usize, rng: &mut R) -> Result<Vec<bool>> {
        let n = self.graph.n();
        match self.mode {
            DeciderMode::Exact => {
                let probs = self.table(d)?.boosted.clone();
                Ok(probs.into_iter().map(|p| rng.random_bool(p.clamp(0.0, 1.0))).collect())
            }
            DeciderMode::Sampled => {
                let m = self.majority;
                let mut out = Vec::with_capacity(n);
                for k in 1..=n {
                    let mut err = None;
                    let yes = amplify_majority(
                        || match self.single_run(k, d, rng) {
                            Ok(b) => b,
                            Err(e) => {
                                err.get_or_insert(e);
                                false
                            }
                        },
                        m,
                    );
                    if let Some(e) = err {
                        return Err(e);
                    }
                    out.push(yes);
                }
                Ok(out)
            }
        }
    }

    fn witness(&self, verdict: &Verdict) -> Option<Witness> {
        match verdict {
            Verdict::HasCycle { .. } => oracles::has_cycle(&self.graph).map(|cycle| Witness::Cycle { cycle }),
            Verdict::OddCycle { .. } => oracles::is_bipartite(&self.graph)
                .err()
                .map(|cycle| Witness::Cycle { cycle }),
            Verdict::Bipartite => oracles::is_bipartite(&self.graph)
                .ok()
                .map(|colors| Witness::TwoColoring { colors }),
            Verdict::Forest => None,
        }
    }

    fn negative_verdict(&self) -> Verdict {
        match self.problem {
            Problem::Forest => Verdict::Forest,
            Problem::Bipartite => Verdict::Bipartite,
        }
    }

    fn positive_verdict(&self, k: usize) -> Verdict {
        match self.problem {
            Problem::Forest => Verdict::HasCycle { k },
            Problem::Bipartite => Verdict::OddCycle { k },
        }
    }

    fn report(&self, verdict: Verdict, counters: OracleCounter, trace: Vec<RoundTrace>, early: bool) -> DecisionReport {
        DecisionReport {
            problem: self.problem,
            model: self.model_name().into(),
            n: self.graph.n(),
            witness: self.witness(&verdict),
            verdict,
            counters,
            trace,
            early_reject: early,
            constants: self.consts.clone(),
        }
    }

    /// One end-to-end run with its own seed.
    pub fn run(&mut self, seed: u64) -> Result<DecisionReport> {
        let n = self.graph.n();
        let mut counters = OracleCounter::new(seed);
        if let Input::Array(arr) = &self.input {
            if arr.edge_count()?.dense {
                let k = oracles::has_cycle(&self.graph).map(|c| c.vertices[0]).unwrap_or(1);
                return Ok(self.report(Verdict::HasCycle { k }, counters, Vec::new(), true));
            }
        }
        if n <= 2 {
            return Ok(self.report(self.negative_verdict(), counters, Vec::new(), false));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c_double, lambda) = (self.consts.c_double, self.consts.lambda);
        let (found, trace) = doubling_search(n, |d, r| self.sample_marked(d, r), c_double, lambda, &mut rng)?;
        let r = self.majority.repetitions as u64;
        for t in &trace {
            let table = self.table(t.d)?;
            let evals = (2 * t.iterations + t.rounds) as u64 * r;
            counters.grover_iterations += t.iterations as u64;
            counters.base_calls += evals;
            counters.queries += evals * table.queries;
            counters.walk_steps += evals * table.steps;
        }
        let verdict = match found {
            Some(k) => self.positive_verdict(k + 1),
            None => self.negative_verdict(),
        };
        Ok(self.report(verdict, counters, trace, false))
    }
}

pub fn decide_forest_matrix(g: &Graph, seed: u64, epsilon: f64, consts: &Constants) -> Result<DecisionReport> {
    ProblemDecider::matrix(g, Problem::Forest, consts, epsilon)?.run(seed)
}

pub fn decide_bipartite_matrix(g: &Graph, seed: u64, epsilon: f64, consts: &Constants) -> Result<DecisionReport> {
    ProblemDecider::matrix(g, Problem::Bipartite, consts, epsilon)?.run(seed)
}

pub fn decide_forest_array(
    arr: &AdjacencyArray,
    seed: u64,
    epsilon: f64,
    consts: &Constants,
) -> Result<DecisionReport> {
    ProblemDecider::array(arr, consts, epsilon)?.run(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((1, n));
        Graph::from_edges(n, &edges).unwrap()
    }

    fn consts() -> Constants {
        Constants::default()
    }

    #[test]
    fn tree_is_forest() {
        let g = Graph::from_edges(5, &[(1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let r = decide_forest_matrix(&g, 1, 0.05, &consts()).unwrap();
        assert_eq!(r.verdict, Verdict::Forest);
        assert!(r.trace.len() <= 3);
        let arr = AdjacencyArray::from_graph(&g);
        let r = decide_forest_array(&arr, 1, 0.05, &consts()).unwrap();
        assert_eq!(r.verdict, Verdict::Forest);
    }

    #[test]
    fn cycles_detected() {
        let g = cycle(4);
        let r = decide_forest_matrix(&g, 2, 0.05, &consts()).unwrap();
        assert!(matches!(r.verdict, Verdict::HasCycle { .. }), "{r:?}");
        assert!(r.witness_consistent(&g));
        let bad = Graph::from_edges(4, &[(1, 3), (3, 2), (2, 4), (4, 1)]).unwrap();
        let r = decide_forest_matrix(&bad, 3, 0.05, &consts()).unwrap();
        assert!(matches!(r.verdict, Verdict::HasCycle { .. }));
    }

    #[test]
    fn bipartite_examples() {
        let r = decide_bipartite_matrix(&cycle(4), 1, 0.05, &consts()).unwrap();
        assert_eq!(r.verdict, Verdict::Bipartite);
        assert!(r.witness_consistent(&cycle(4)));
        let r = decide_bipartite_matrix(&cycle(5), 1, 0.05, &consts()).unwrap();
        assert!(matches!(r.verdict, Verdict::OddCycle { .. }));
        assert!(matches!(r.witness, Some(Witness::Cycle { .. })));
    }

    #[test]
    fn array_early_reject() {
        let arr = AdjacencyArray::from_graph(&cycle(6));
        let r = decide_forest_array(&arr, 1, 0.05, &consts()).unwrap();
        assert!(r.early_reject);
        assert_eq!(r.counters.walk_steps, 0);
        assert!(matches!(r.verdict, Verdict::HasCycle { .. }));
    }

    #[test]
    fn sampled_mode_agrees_on_easy_inputs() {
        let g = cycle(3);
        let mut d = ProblemDecider::matrix(&g, Problem::Forest, &consts(), 0.05)
            .unwrap()
            .with_mode(DeciderMode::Sampled);
        assert!(matches!(d.run(4).unwrap().verdict, Verdict::HasCycle { .. }));
        let g = Graph::from_edges(4, &[(1, 2), (2, 3)]).unwrap();
        let mut d = ProblemDecider::matrix(&g, Problem::Forest, &consts(), 0.05)
            .unwrap()
            .with_mode(DeciderMode::Sampled);
        assert_eq!(d.run(4).unwrap().verdict, Verdict::Forest);
    }

    #[test]
    fn reports_are_deterministic() {
        let g = cycle(5);
        let a = decide_forest_matrix(&g, 9, 0.05, &consts()).unwrap();
        let b = decide_forest_matrix(&g, 9, 0.05, &consts()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

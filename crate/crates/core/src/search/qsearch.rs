// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Grover search with an unknown number of solutions, and the doubling
//! schedule over length guesses.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::RoundTrace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QSearchOutcome {
    pub found: Option<usize>,
    /// Grover iterations spent, summed over rounds.
    pub iterations: usize,
    pub rounds: usize,
}

/// `sin^2((2j + 1) theta)` with `sin^2 theta = t / N`.
pub fn grover_success_closed_form(n: usize, t: usize, j: usize) -> f64 {
    if t == 0 {
        return 0.0;
    }
    let theta = (t as f64 / n as f64).sqrt().asin();
    (((2 * j + 1) as f64) * theta).sin().powi(2)
}

/// The same probability from a statevector of size `N`.
pub fn grover_success_statevector(marked: &[bool], j: usize) -> Result<f64> {
    let n = marked.len();
    if n == 0 || n > 1024 {
        return Err(Error::SizeCap {
            what: "Grover statevector",
            actual: n,
            limit: 1024,
        });
    }
    let mut amps = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..j {
        for (a, &m) in amps.iter_mut().zip(marked) {
            if m {
                *a = -*a;
            }
        }
        let mean = amps.iter().sum::<f64>() / n as f64;
        for a in amps.iter_mut() {
            *a = 2.0 * mean - *a;
        }
    }
    Ok(amps.iter().zip(marked).filter(|(_, &m)| m).map(|(a, _)| a * a).sum())
}

/// QSearch over `[n]` where each round draws the marked set afresh from
/// `sample_marked` (a randomised predicate is re-evaluated per round).
///
/// `m` starts at 1; each round runs `j` iterations with `j` uniform in
/// `0..ceil(m)`, then sets `m = min(lambda m, sqrt(n))`. The search stops
/// before a round that would push the iteration count past `budget`.
pub fn qsearch_with<R: Rng + ?Sized>(
    n: usize,
    mut sample_marked: impl FnMut(&mut R) -> Vec<bool>,
    lambda: f64,
    budget: usize,
    rng: &mut R,
) -> Result<QSearchOutcome> {
    if n == 0 {
        return Err(Error::InvalidParameter("search space is empty".into()));
    }
    if !(lambda > 1.0 && lambda < 4.0 / 3.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} not in (1, 4/3)")));
    }
    let cap = 4 * (budget + 1) + 64;
    let sqrt_n = (n as f64).sqrt();
    let mut m: f64 = 1.0;
    let mut iterations = 0;
    let mut rounds = 0;
    while rounds < cap {
        let j = rng.random_range(0..m.ceil() as usize);
        if iterations + j > budget {
            break;
        }
        iterations += j;
        rounds += 1;
        let marked = sample_marked(rng);
        let hits: Vec<usize> = (0..n).filter(|&i| marked[i]).collect();
        let p = grover_success_closed_form(n, hits.len(), j);
        if !hits.is_empty() && rng.random_bool(p.clamp(0.0, 1.0)) {
            let pick = hits[rng.random_range(0..hits.len())];
            return Ok(QSearchOutcome {
                found: Some(pick),
                iterations,
                rounds,
            });
        }
        m = (lambda * m).min(sqrt_n);
    }
    Ok(QSearchOutcome {
        found: None,
        iterations,
        rounds,
    })
}

/// QSearch for a deterministic predicate.
pub fn qsearch<R: Rng + ?Sized>(
    n: usize,
    f: impl Fn(usize) -> bool,
    lambda: f64,
    budget: usize,
    rng: &mut R,
) -> Result<QSearchOutcome> {
    let marked: Vec<bool> = (0..n).map(&f).collect();
    qsearch_with(n, |_| marked.clone(), lambda, budget, rng)
}

/// `floor(c'' sqrt(n / 2^i))`.
pub fn doubling_budget(n: usize, i: u32, c_double: f64) -> usize {
    (c_double * (n as f64 / (1u64 << i) as f64).sqrt()).floor() as usize
}

/// Runs QSearch for `d = 2^i`, `i = 1..=ceil(log2 n)`, returning the first
/// vertex found (0-based) and the per-round trace. `sampler(d, rng)` draws
/// the marked set for guess `d`.
pub fn doubling_search<R: Rng + ?Sized>(
    n: usize,
    mut sampler: impl FnMut(usize, &mut R) -> Result<Vec<bool>>,
    c_double: f64,
    lambda: f64,
    rng: &mut R,
) -> Result<(Option<usize>, Vec<RoundTrace>)> {
    let rounds = (n.max(2) as f64).log2().ceil() as u32;
    let mut trace = Vec::new();
    for i in 1..=rounds {
        let d = 1usize << i;
        let budget = doubling_budget(n, i, c_double);
        let mut err = None;
        let out = qsearch_with(
            n,
            |r: &mut R| match sampler(d, r) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    vec![false; n]
                }
            },
            lambda,
            budget,
            rng,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        trace.push(RoundTrace {
            i,
            d,
            budget,
            iterations: out.iterations,
            rounds: out.rounds,
            found: out.found.map(|k| k + 1),
        });
        if out.found.is_some() {
            return Ok((out.found, trace));
        }
    }
    Ok((None, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_marked_found_immediately() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = qsearch(4, |_| true, 1.2, 10, &mut rng).unwrap();
        assert_eq!(out.rounds, 1);
        assert_eq!(out.iterations, 0);
        assert!(out.found.is_some());
    }

    #[test]
    fn none_marked_respects_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = qsearch(64, |_| false, 1.2, 50, &mut rng).unwrap();
        assert!(out.found.is_none());
        assert!(out.iterations <= 50);
        let out = qsearch(1, |_| false, 1.2, 5, &mut rng).unwrap();
        assert!(out.found.is_none());
        assert!(qsearch(4, |_| true, 1.5, 10, &mut rng).is_err());
    }

    #[test]
    fn statevector_matches_closed_form() {
        for (n, t) in [(64, 1), (64, 5), (16, 4), (100, 25)] {
            let marked: Vec<bool> = (0..n).map(|i| i % (n / t) == 0 && i / (n / t) < t).collect();
            assert_eq!(marked.iter().filter(|&&m| m).count(), t);
            for j in 0..12 {
                let a = grover_success_closed_form(n, t, j);
                let b = grover_success_statevector(&marked, j).unwrap();
                assert!((a - b).abs() < 1e-9, "n={n} t={t} j={j}");
            }
        }
    }

    #[test]
    fn doubling_respects_geometric_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3, 8, 20, 64] {
            let (found, trace) = doubling_search(n, |_, _| Ok(vec![false; n]), 16.0, 1.2, &mut rng).unwrap();
            assert!(found.is_none());
            assert_eq!(trace.len(), (n as f64).log2().ceil() as usize);
            let total: usize = trace.iter().map(|r| r.iterations).sum();
            assert!(total as f64 <= 16.0 * (n as f64).sqrt() * (1.0 + 2f64.sqrt()));
        }
    }
}

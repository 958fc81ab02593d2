// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Majority-vote amplification with an asymmetric threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::Constants;

/// Repetition count and acceptance threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Majority {
    pub repetitions: usize,
    /// Accept when at least this many runs accept.
    pub threshold: usize,
}

/// `r = ceil(ln(1/eps) / (2 delta^2))` with `delta = min(p1 - tau, tau - p0)`,
/// which bounds both one-sided errors by `eps` (Hoeffding).
pub fn majority_repetitions(epsilon: f64, consts: &Constants) -> Result<Majority> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} not in (0, 1/2)")));
    }
    consts.validate()?;
    let delta = (consts.p_true - consts.tau).min(consts.tau - consts.p_false);
    let r = ((1.0 / epsilon).ln() / (2.0 * delta * delta)).ceil() as usize;
    let r = r.max(1);
    Ok(Majority {
        repetitions: r,
        threshold: (consts.tau * r as f64).ceil() as usize,
    })
}

/// Runs `a` the prescribed number of times and votes.
pub fn amplify_majority(mut a: impl FnMut() -> bool, m: Majority) -> bool {
    let mut yes = 0;
    for done in 0..m.repetitions {
        if a() {
            yes += 1;
        }
        if yes >= m.threshold {
            return true;
        }
        if yes + (m.repetitions - done - 1) < m.threshold {
            return false;
        }
    }
    yes >= m.threshold
}

/// `P(Bin(r, q) >= threshold)`.
pub fn boosted_probability(q: f64, m: Majority) -> f64 {
    let q = q.clamp(0.0, 1.0);
    let r = m.repetitions;
    if m.threshold == 0 {
        return 1.0;
    }
    if q == 0.0 {
        return 0.0;
    }
    if q == 1.0 {
        return 1.0;
    }
    // Sum the pmf in log space.
    let (lq, lp) = (q.ln(), (1.0 - q).ln());
    let mut log_binom = 0.0;
    let mut total = 0.0;
    for k in 0..=r {
        if k > 0 {
            log_binom += ((r - k + 1) as f64).ln() - (k as f64).ln();
        }
        if k >= m.threshold {
            total += (log_binom + k as f64 * lq + (r - k) as f64 * lp).exp();
        }
    }
    total.min(1.0)
}

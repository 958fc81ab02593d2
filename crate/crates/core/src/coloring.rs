// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Pairwise-independent vertex colourings `h(x) = <a, x> + b mod 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexColoring {
    pub m_bits: u32,
    /// Low `m_bits` bits hold the vector `a`.
    pub a: u64,
    pub b: bool,
}

/// Bit length used for labels `1..=n`: `ceil(log2(n + 1))`.
pub fn label_bits(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

impl VertexColoring {
    pub fn new(m_bits: u32, a: u64, b: bool) -> Result<Self> {
        if m_bits > 63 || (m_bits < 64 && a >> m_bits != 0) {
            return Err(Error::InvalidParameter(format!(
                "a = {a:#b} does not fit in {m_bits} bits"
            )));
        }
        Ok(VertexColoring { m_bits, a, b })
    }

    #[inline]
    pub fn color(&self, x: usize) -> bool {
        ((self.a & x as u64).count_ones() & 1 == 1) ^ self.b
    }

    /// Draws `(a, b)` uniformly with a seeded ChaCha8 stream.
    pub fn sample(n: usize, seed: u64) -> Result<Self> {
        Self::sample_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn sample_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("colouring needs n >= 1".into()));
        }
        let m_bits = label_bits(n);
        let a = rng.random::<u64>() & ((1u64 << m_bits) - 1);
        Ok(VertexColoring {
            m_bits,
            a,
            b: rng.random(),
        })
    }

    /// All `2^(m_bits + 1)` members of the family for labels `1..=n`.
    pub fn family(n: usize) -> impl Iterator<Item = VertexColoring> {
        let m_bits = label_bits(n);
        (0..1u64 << m_bits).flat_map(move |a| {
            [false, true]
                .into_iter()
                .map(move |b| VertexColoring { m_bits, a, b })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bit_lengths() {
        assert_eq!(label_bits(1), 1);
        assert_eq!(label_bits(3), 2);
        assert_eq!(label_bits(4), 3);
        assert_eq!(label_bits(7), 3);
        assert_eq!(label_bits(8), 4);
        assert_eq!(VertexColoring::family(5).count(), 16);
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let a = VertexColoring::sample(9, 42).unwrap();
        assert_eq!(a, VertexColoring::sample(9, 42).unwrap());
        assert_eq!(a.m_bits, 4);
        assert!(VertexColoring::sample(0, 1).is_err());
        assert!(VertexColoring::new(3, 8, false).is_err());
    }

    #[test]
    fn family_is_pairwise_uniform() {
        for n in 2..=12 {
            let m = label_bits(n);
            for x in 1..=n {
                for y in (x + 1)..=n {
                    let mut counts = [0u32; 4];
                    for h in VertexColoring::family(n) {
                        counts[(h.color(x) as usize) << 1 | h.color(y) as usize] += 1;
                    }
                    assert_eq!(counts, [1 << (m - 1); 4], "n={n} x={x} y={y}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn colour_is_affine(a in 0u64..256, b: bool, x in 1usize..256, y in 1usize..256) {
            let h = VertexColoring::new(8, a, b).unwrap();
            let h0 = VertexColoring::new(8, a, false).unwrap();
            // h(x) xor h(y) = <a, x xor y>
            prop_assert_eq!(h.color(x) ^ h.color(y), h0.color(x ^ y));
        }
    }
}

//! Seeded draws of rational parameter points.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitState;
use crate::error::Result;
use crate::exact::BigRational;
use crate::operators::Params;
use crate::spectrum::eigenvalue_list;

/// Largest numerator and denominator drawn.
pub const MAX_PART: i64 = 1000;
/// Bounds for the per-configuration rates of the general model. The
/// steady-state denominators multiply up to `2^L - 1` pivots, so large
/// random denominators make `L = 8` intractable.
pub const MAX_RATE_NUMER: i64 = 30;
pub const MAX_RATE_DENOM: i64 = 4;

pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `p/q` with `1 <= p, q <= 1000`.
    pub fn positive(&mut self) -> BigRational {
        let p = self.rng.gen_range(1..=MAX_PART);
        let q = self.rng.gen_range(1..=MAX_PART);
        BigRational::new(p.into(), q.into())
    }

    /// `p/q` with `1 <= p <= 30`, `1 <= q <= 4`.
    pub fn rate(&mut self) -> BigRational {
        let p = self.rng.gen_range(1..=MAX_RATE_NUMER);
        let q = self.rng.gen_range(1..=MAX_RATE_DENOM);
        BigRational::new(p.into(), q.into())
    }

    /// Positive or negative, never zero.
    pub fn signed(&mut self) -> BigRational {
        let x = self.positive();
        if self.rng.gen_bool(0.5) {
            -x
        } else {
            x
        }
    }

    pub fn vector(&mut self, n: usize) -> Vec<BigRational> {
        (0..n).map(|_| self.signed()).collect()
    }

    /// A positive `(alpha, beta)` at which the specialized spectrum has its
    /// full `2L` distinct values; colliding draws are rejected.
    pub fn generic_pair(&mut self, len: usize) -> Result<(BigRational, BigRational)> {
        loop {
            let (a, b) = (self.positive(), self.positive());
            let p = Params::specialized(len, a.clone(), b.clone())?;
            let distinct: BTreeSet<_> = eigenvalue_list(&p).into_iter().collect();
            if distinct.len() == 2 * len {
                return Ok((a, b));
            }
        }
    }

    /// Generalized parameters with each `alpha_b` present with probability
    /// `density` (the all-zero and first-site entries always present).
    pub fn general_params(&mut self, len: usize, density: f64) -> Result<Params<BigRational>> {
        let mut alpha = BTreeMap::new();
        for b in BitState::all(len) {
            if b.value() == 0 || b == BitState::first_site(len) || self.rng.gen_bool(density) {
                alpha.insert(b, self.rate());
            }
        }
        let beta = (0..len).map(|_| self.rate()).collect();
        Params::new(len, alpha, beta)
    }

    pub fn beta_vector(&mut self, len: usize) -> Vec<BigRational> {
        (0..len).map(|_| self.positive()).collect()
    }
}

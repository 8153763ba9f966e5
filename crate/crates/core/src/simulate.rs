//! Continuous-time simulation of the two-parameter process, for an
//! empirical cross-check of the exact steady state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitState;
use crate::error::{Error, Result};
use crate::exact::BigRational;
use crate::steady::steady_state_specialized;

pub const DEFAULT_BURN_IN: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct Simulation {
    pub len: usize,
    pub events: u64,
    /// Time-weighted occupation after burn-in, indexed by value order.
    pub occupation: Vec<f64>,
}

/// Gillespie kernel. From `b`: `psi_j(b)` at rate 1 (`j < L`) or `beta`
/// (`j = L`) whenever `b_j = 1`, and a flip of the first bit at rate `alpha`.
pub fn simulate_ctmc(len: usize, alpha: f64, beta: f64, events: u64, seed: u64, burn_in: f64) -> Result<Simulation> {
    BitState::new(len, 0)?;
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Invalid("simulation needs alpha, beta > 0".into()));
    }
    if events == 0 {
        return Err(Error::Invalid("at least one event is required".into()));
    }
    if !(0.0..1.0).contains(&burn_in) {
        return Err(Error::Invalid("burn-in fraction must lie in [0, 1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let skip = (events as f64 * burn_in) as u64;
    let mut occupation = vec![0.0; 1 << len];
    let mut state = BitState::zero(len);
    let mut rates = Vec::with_capacity(len + 1);
    for step in 0..events {
        rates.clear();
        rates.push((alpha, state.flip_unchecked(1)));
        for j in (1..=len).filter(|&j| state.bit(j) == 1) {
            rates.push((if j < len { 1.0 } else { beta }, state.psi_unchecked(j)));
        }
        let total: f64 = rates.iter().map(|r| r.0).sum();
        let u: f64 = rng.gen();
        let wait = -(1.0 - u).ln() / total;
        if step >= skip {
            occupation[state.index()] += wait;
        }
        let mut pick = rng.gen::<f64>() * total;
        let mut next = rates[rates.len() - 1].1;
        for &(r, s) in &rates {
            if pick < r {
                next = s;
                break;
            }
            pick -= r;
        }
        state = next;
    }
    let t: f64 = occupation.iter().sum();
    occupation.iter_mut().for_each(|x| *x /= t);
    Ok(Simulation {
        len,
        events,
        occupation,
    })
}

/// Half the L1 distance.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationRow {
    pub state: BitState,
    pub empirical_frequency: f64,
    pub exact_probability: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    #[serde(rename = "L")]
    pub len: usize,
    pub alpha: String,
    pub beta: String,
    pub events: u64,
    pub seed: u64,
    pub burn_in: f64,
    pub rows: Vec<SimulationRow>,
    pub tv_distance: f64,
}

/// Simulates at an exact rational point and compares with the exact steady state.
pub fn simulate_against_exact(
    len: usize,
    alpha: &BigRational,
    beta: &BigRational,
    events: u64,
    seed: u64,
    burn_in: f64,
) -> Result<SimulationReport> {
    let exact = steady_state_specialized(len, alpha, beta)?;
    let sim = simulate_ctmc(len, to_f64(alpha), to_f64(beta), events, seed, burn_in)?;
    let exact_f: Vec<f64> = exact.iter().map(to_f64).collect();
    let rows = BitState::all(len)
        .map(|b| SimulationRow {
            state: b,
            empirical_frequency: sim.occupation[b.index()],
            exact_probability: exact[b.index()].to_string(),
        })
        .collect();
    Ok(SimulationReport {
        len,
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        events,
        seed,
        burn_in,
        rows,
        tv_distance: tv_distance(&sim.occupation, &exact_f),
    })
}

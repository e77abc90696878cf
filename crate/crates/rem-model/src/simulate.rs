//! Continuous-time trajectories of the Metropolis dynamics.
//!
//! Holding times are exponential with the exact exit rate; the next state is
//! a neighbor chosen with probability proportional to its rate.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::dynamics::metropolis_rate;
use crate::instance::RemInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Jump times, starting with 0.
    pub times: Vec<f64>,
    /// `states[i]` is occupied on `[times[i], times[i+1])`.
    pub states: Vec<u32>,
    pub t_max: f64,
}

impl Trajectory {
    pub fn state_at(&self, t: f64) -> u32 {
        let i = self.times.partition_point(|&s| s <= t);
        self.states[i.saturating_sub(1)]
    }

    pub fn jumps(&self) -> usize {
        self.states.len() - 1
    }

    /// Time spent in each configuration up to `t_max`.
    pub fn occupation_times(&self, size: usize) -> Vec<f64> {
        let mut occ = vec![0.0; size];
        for (i, &s) in self.states.iter().enumerate() {
            let end = self.times.get(i + 1).copied().unwrap_or(self.t_max);
            occ[s as usize] += end - self.times[i];
        }
        occ
    }
}

/// Total jump rate out of `x`.
pub fn exit_rate(inst: &RemInstance, x: u32) -> f64 {
    (0..inst.n).map(|s| metropolis_rate(inst, x, x ^ (1 << s))).sum()
}

pub fn simulate_trajectory<R: Rng + ?Sized>(inst: &RemInstance, start: u32, t_max: f64, rng: &mut R) -> Trajectory {
    let mut times = vec![0.0];
    let mut states = vec![start];
    let mut t = 0.0;
    let mut x = start;
    let mut rates = vec![0.0; inst.n];
    loop {
        for (s, r) in rates.iter_mut().enumerate() {
            *r = metropolis_rate(inst, x, x ^ (1 << s));
        }
        let total: f64 = rates.iter().sum();
        t += Exp::new(total).expect("positive exit rate").sample(rng);
        if t > t_max {
            break;
        }
        let mut u = rng.random::<f64>() * total;
        let mut site = inst.n - 1;
        for (s, r) in rates.iter().enumerate() {
            if u < *r {
                site = s;
                break;
            }
            u -= r;
        }
        x ^= 1 << site;
        times.push(t);
        states.push(x);
    }
    Trajectory { times, states, t_max }
}

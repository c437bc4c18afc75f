//! Pairwise conflict MDP: reward shaping, sigma-point transition model, and
//! value iteration producing a persisted, interpolatable Q-table.

pub mod bellman;
mod io;

pub use io::TableError;

use serde::{Deserialize, Serialize};

use crate::advisory::{Advisory, NUM_ADVISORIES};
use crate::angle::wrap_angle;
use crate::dynamics::{sigma_points, NoiseModel, SigmaPointSet};
use crate::grid::GridSpec;
use crate::types::{Constants, PairwiseObservation};

/// Weights of the pairwise conflict reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RewardParams {
    /// Proximity penalty weight.
    pub w_rho: f64,
    /// Turn-magnitude penalty weight, per (deg/s)^2.
    pub w_a: f64,
    /// NMAC occurrence penalty weight.
    pub w_nmac: f64,
    /// Alert (non-COC) penalty weight.
    pub w_conflict: f64,
    /// NMAC separation threshold (meters).
    pub rho_nmac: f64,
}

impl Default for RewardParams {
    fn default() -> Self {
        Self {
            w_rho: 1.0,
            w_a: 0.005,
            w_nmac: 100.0,
            w_conflict: 0.1,
            rho_nmac: 150.0,
        }
    }
}

impl RewardParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("w_rho", self.w_rho),
            ("w_a", self.w_a),
            ("w_nmac", self.w_nmac),
            ("w_conflict", self.w_conflict),
        ] {
            if !(v >= 0.0) {
                return Err(format!("{name} must be nonnegative, got {v}"));
            }
        }
        if !(self.rho_nmac > 0.0) {
            return Err(format!("rho_nmac must be positive, got {}", self.rho_nmac));
        }
        Ok(())
    }
}

/// Pairwise conflict reward. The turn rate inside the quadratic penalty is
/// in degrees/second; the NMAC indicator uses `rho <= rho_nmac`.
pub fn reward(obs: &PairwiseObservation, a: Advisory, p: &RewardParams) -> f64 {
    let tr = a.turn_rate_deg();
    let mut r = -p.w_rho * (-(obs.rho - p.rho_nmac) / p.rho_nmac).exp() - p.w_a * tr * tr;
    if obs.rho <= p.rho_nmac {
        r -= p.w_nmac;
    }
    if a != Advisory::Coc {
        r -= p.w_conflict;
    }
    r
}

/// Picks the argmax advisory; ties break to the earliest advisory in
/// canonical order (COC first).
pub fn extract_action(qvalues: &[f64; NUM_ADVISORIES]) -> Advisory {
    let mut best = 0;
    for (ix, v) in qvalues.iter().enumerate().skip(1) {
        if *v > qvalues[best] {
            best = ix;
        }
    }
    Advisory::from_index(best)
}

/// Solver inputs bundled for `value_iterate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub gamma: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub noise: NoiseModel,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gamma: 0.95,
            tol: 0.01,
            max_iters: 500,
            noise: NoiseModel::default(),
        }
    }
}

/// The pairwise conflict MDP over a state grid: ownship propagates at the
/// advisory turn rate, the intruder holds heading and speed, and the shared
/// sigma-point set perturbs both aircraft's speed and turn rate.
pub struct PairwiseMdp<'a> {
    grid: &'a GridSpec,
    sigma: SigmaPointSet,
    dt: f64,
    /// Per (advisory, sigma point): ownship heading after one step and its
    /// unit displacement direction.
    own_step: Vec<(f64, f64, f64)>,
}

impl<'a> PairwiseMdp<'a> {
    pub fn new(grid: &'a GridSpec, noise: &NoiseModel, constants: &Constants) -> Self {
        let sigma = sigma_points(noise);
        let dt = constants.dt;
        let mut own_step = Vec::with_capacity(NUM_ADVISORIES * sigma.points.len());
        for a in Advisory::ALL {
            for &(_, dw) in &sigma.points {
                // Ownship frame: heading 0 before the step.
                let phi = wrap_angle((a.turn_rate() + dw) * dt);
                own_step.push((phi.cos(), phi.sin(), phi));
            }
        }
        Self {
            grid,
            sigma,
            dt,
            own_step,
        }
    }

    /// Expected next-state value `sum_i w_i * max_a' Q(s'_i, a')` for one
    /// grid state and advisory, interpolating each successor on the grid.
    /// `q_values` is the current iterate, state-major and advisory-minor.
    pub fn transition_expectation<T: Copy + Into<f64>>(
        &self,
        state: usize,
        a: Advisory,
        q_values: &[T],
    ) -> f64 {
        let mut out = [0.0f64; NUM_ADVISORIES];
        self.expectations_impl(state, q_values, &mut out, Some(a.index()));
        out[a.index()]
    }

    /// Core successor evaluation. When `only` is set, just that advisory's
    /// expectation is computed; otherwise all six.
    fn expectations_impl<T: Copy + Into<f64>>(
        &self,
        state: usize,
        q_values: &[T],
        out: &mut [f64],
        only: Option<usize>,
    ) {
        let obs = self.grid.observation_at(self.grid.multi_index(state));
        let n_sigma = self.sigma.points.len();
        out[..NUM_ADVISORIES].fill(0.0);
        for (s_ix, (&(dv, dw), &w)) in self
            .sigma
            .points
            .iter()
            .zip(&self.sigma.weights)
            .enumerate()
        {
            if w == 0.0 {
                continue;
            }
            // Intruder: constant heading plus shared noise, advanced once and
            // reused for every advisory.
            let psi_new = wrap_angle(obs.psi + dw * self.dt);
            let v_int = (obs.v_int + dv).max(0.0);
            let int_x = obs.rho * obs.theta.cos() + v_int * psi_new.cos() * self.dt;
            let int_y = obs.rho * obs.theta.sin() + v_int * psi_new.sin() * self.dt;
            let v_own = (obs.v_own + dv).max(0.0);
            for a_ix in 0..NUM_ADVISORIES {
                if let Some(o) = only {
                    if o != a_ix {
                        continue;
                    }
                }
                let (cos_phi, sin_phi, phi_new) = self.own_step[a_ix * n_sigma + s_ix];
                let own_x = v_own * cos_phi * self.dt;
                let own_y = v_own * sin_phi * self.dt;
                let dx = int_x - own_x;
                let dy = int_y - own_y;
                let rho = (dx * dx + dy * dy).sqrt();
                let theta = if rho == 0.0 {
                    0.0
                } else {
                    wrap_angle(dy.atan2(dx) - phi_new)
                };
                let next = PairwiseObservation {
                    rho,
                    theta,
                    psi: wrap_angle(psi_new - phi_new),
                    v_own,
                    v_int,
                };
                let row: [f64; NUM_ADVISORIES] = self.grid.stencil(&next).interp_row(q_values);
                let best = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                out[a_ix] += w * best;
            }
        }
    }

    /// Reward table for every (state, advisory), state-major.
    pub fn reward_table(&self, p: &RewardParams) -> Vec<f64> {
        let n = self.grid.n_states();
        let mut rewards = vec![0.0f64; n * NUM_ADVISORIES];
        for s in 0..n {
            let obs = self.grid.observation_at(self.grid.multi_index(s));
            for a in Advisory::ALL {
                rewards[s * NUM_ADVISORIES + a.index()] = reward(&obs, a, p);
            }
        }
        rewards
    }
}

impl bellman::TransitionModel for PairwiseMdp<'_> {
    fn n_states(&self) -> usize {
        self.grid.n_states()
    }
    fn n_actions(&self) -> usize {
        NUM_ADVISORIES
    }
    fn expectations(&self, state: usize, q_prev: &[f64], out: &mut [f64]) {
        self.expectations_impl(state, q_prev, out, None);
    }
}

/// Discretized state-action value table produced by value iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    pub grid: GridSpec,
    pub gamma: f64,
    /// Dense values, state-major and advisory-minor.
    pub values: Vec<f32>,
    /// Max-abs change of the final sweep.
    pub residual: f64,
    /// Number of sweeps performed.
    pub iterations: u32,
}

impl QTable {
    /// Whether the recorded residual met the given tolerance.
    pub fn converged(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    /// Interpolated Q-row for a continuous observation.
    pub fn lookup(&self, obs: &PairwiseObservation) -> [f64; NUM_ADVISORIES] {
        self.grid.stencil(obs).interp_row(&self.values)
    }

    /// The stored row at a grid state.
    pub fn row(&self, state: usize) -> [f64; NUM_ADVISORIES] {
        let base = state * NUM_ADVISORIES;
        let mut out = [0.0; NUM_ADVISORIES];
        for (o, v) in out.iter_mut().zip(&self.values[base..base + NUM_ADVISORIES]) {
            *o = *v as f64;
        }
        out
    }

    /// Greedy advisory at a continuous observation.
    pub fn policy(&self, obs: &PairwiseObservation) -> Advisory {
        extract_action(&self.lookup(obs))
    }
}

/// Runs value iteration on the pairwise conflict MDP.
///
/// Converges when the max-abs change of a sweep is at most `cfg.tol`;
/// otherwise stops at `cfg.max_iters` and returns the table flagged with its
/// final residual for the caller to judge.
pub fn value_iterate(
    grid: &GridSpec,
    p: &RewardParams,
    constants: &Constants,
    cfg: &SolverConfig,
) -> QTable {
    grid.validate().expect("invalid grid");
    p.validate().expect("invalid reward params");
    let mdp = PairwiseMdp::new(grid, &cfg.noise, constants);
    let rewards = mdp.reward_table(p);
    let sol = bellman::solve(&mdp, &rewards, cfg.gamma, cfg.tol, cfg.max_iters);
    QTable {
        grid: grid.clone(),
        gamma: cfg.gamma,
        values: sol.q.iter().map(|&v| v as f32).collect(),
        residual: sol.residual(),
        iterations: sol.iterations as u32,
    }
}

//! Generic Jacobi value iteration over a finite state-action space.
//!
//! One sweep evaluates every state against the read-only previous iterate,
//! so the result is independent of how states are split across workers.

use rayon::prelude::*;

/// Expected-value model plugged into [`solve`].
pub trait TransitionModel: Sync {
    fn n_states(&self) -> usize;
    fn n_actions(&self) -> usize;

    /// Writes, for each action `a`, the expected next-state value
    /// `E[max_a' Q(s', a')]` under the previous iterate `q_prev`
    /// (layout: state-major, action-minor).
    fn expectations(&self, state: usize, q_prev: &[f64], out: &mut [f64]);
}

/// Result of a value-iteration run.
#[derive(Debug, Clone)]
pub struct BellmanSolution {
    /// Final iterate, state-major and action-minor.
    pub q: Vec<f64>,
    /// Max-abs change per sweep, in sweep order.
    pub residuals: Vec<f64>,
    /// Number of sweeps performed.
    pub iterations: usize,
    /// Whether the final residual reached the tolerance.
    pub converged: bool,
}

impl BellmanSolution {
    pub fn residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// Iterates `Q_{k+1}(s,a) = R(s,a) + gamma * E[max_a' Q_k(s',a')]` from an
/// all-zero start until the max-abs change is at most `tol` or `max_iters`
/// sweeps have run. Non-convergence is reported, not an error.
pub fn solve(
    model: &impl TransitionModel,
    rewards: &[f64],
    gamma: f64,
    tol: f64,
    max_iters: usize,
) -> BellmanSolution {
    assert!((0.0..1.0).contains(&gamma), "gamma must be in [0, 1)");
    assert!(tol > 0.0, "tolerance must be positive");
    let n_states = model.n_states();
    let n_actions = model.n_actions();
    assert_eq!(rewards.len(), n_states * n_actions);

    let mut q_prev = vec![0.0f64; n_states * n_actions];
    let mut q_next = vec![0.0f64; n_states * n_actions];
    let mut residuals = Vec::new();
    let mut converged = false;

    for _ in 0..max_iters {
        {
            let q_ref = &q_prev;
            q_next
                .par_chunks_mut(n_actions)
                .enumerate()
                .for_each(|(s, out)| {
                    model.expectations(s, q_ref, out);
                    let base = s * n_actions;
                    for (a, o) in out.iter_mut().enumerate() {
                        *o = rewards[base + a] + gamma * *o;
                    }
                });
        }
        let residual = q_next
            .par_iter()
            .zip(q_prev.par_iter())
            .map(|(a, b)| (a - b).abs())
            .reduce(|| 0.0, f64::max);
        residuals.push(residual);
        std::mem::swap(&mut q_prev, &mut q_next);
        if residual <= tol {
            converged = true;
            break;
        }
    }

    BellmanSolution {
        q: q_prev,
        iterations: residuals.len(),
        residuals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Single state with a deterministic self-loop.
    struct SelfLoop {
        n_actions: usize,
    }

    impl TransitionModel for SelfLoop {
        fn n_states(&self) -> usize {
            1
        }
        fn n_actions(&self) -> usize {
            self.n_actions
        }
        fn expectations(&self, _state: usize, q_prev: &[f64], out: &mut [f64]) {
            let best = q_prev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            out.fill(best);
        }
    }

    #[test]
    fn one_state_mdp_reaches_analytic_fixed_point() {
        // r(a1)=1, r(a2)=0, gamma=0.5: Q*(a1) = 1/(1-gamma) = 2, Q*(a2) = 1.
        let sol = solve(&SelfLoop { n_actions: 2 }, &[1.0, 0.0], 0.5, 1e-12, 1000);
        assert!(sol.converged);
        assert!((sol.q[0] - 2.0).abs() < 1e-9);
        assert!((sol.q[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn residuals_respect_contraction_bound() {
        let sol = solve(&SelfLoop { n_actions: 2 }, &[1.0, 0.0], 0.5, 1e-12, 1000);
        let r0 = sol.residuals[0];
        for (k, r) in sol.residuals.iter().enumerate().skip(1) {
            let bound = 0.5f64.powi(k as i32) * r0 / (1.0 - 0.5);
            assert!(*r <= bound + 1e-15, "residual {r} above bound {bound} at sweep {k}");
        }
        // Residuals are non-increasing after the first sweep.
        for w in sol.residuals.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn gamma_zero_is_myopic() {
        let rewards = [3.0, -1.0, 0.5];
        let sol = solve(&SelfLoop { n_actions: 3 }, &rewards, 0.0, 1e-12, 10);
        assert!(sol.converged);
        assert!(sol.iterations <= 2);
        for (q, r) in sol.q.iter().zip(&rewards) {
            assert_eq!(q, r);
        }
    }

    #[test]
    fn non_convergence_is_flagged() {
        let sol = solve(&SelfLoop { n_actions: 2 }, &[1.0, 0.0], 0.9, 1e-12, 3);
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 3);
        assert!(sol.residual() > 1e-12);
    }
}

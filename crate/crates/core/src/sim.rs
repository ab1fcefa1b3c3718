//! Fixed-step RK4 simulation of `ξ̇ = Fξ`, `F = I ⊗ A − L ⊗ BK`.
//!
//! States are stacked per agent: `[x₁, v₁, x₂, v₂, …]`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::consensus::check_gamma;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::topology::{LaplacianMatrix, Network, Topology};

pub const MAX_STEPS: u64 = 10_000_000;

/// States whose max-norm exceeds this end the run early.
pub const OVERFLOW_GUARD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub topology: Topology,
    pub n: usize,
    pub gamma: f64,
    pub dt: f64,
    pub horizon: f64,
    pub seed: u64,
    pub init_low: f64,
    pub init_high: f64,
    /// Draw velocities as usual, then zero them.
    #[serde(default)]
    pub zero_velocity: bool,
    /// Record every `record_stride`-th step.
    #[serde(default = "one")]
    pub record_stride: usize,
}

fn one() -> usize {
    1
}

impl SimConfig {
    pub fn new(topology: Topology, n: usize, gamma: f64) -> Self {
        Self {
            topology,
            n,
            gamma,
            dt: 0.01,
            horizon: 100.0,
            seed: 0,
            init_low: 0.0,
            init_high: 10.0,
            zero_velocity: false,
            record_stride: 1,
        }
    }

    pub fn steps(&self) -> u64 {
        (self.horizon / self.dt).round() as u64
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma(self.gamma)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon >= self.dt && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon {} must be at least dt {}",
                self.horizon, self.dt
            )));
        }
        if !(self.init_low <= self.init_high) || !self.init_low.is_finite() || !self.init_high.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "invalid initial range [{}, {}]",
                self.init_low, self.init_high
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record stride must be at least 1".into()));
        }
        let steps = self.steps();
        if steps > MAX_STEPS {
            return Err(Error::StepCap { steps, cap: MAX_STEPS });
        }
        Ok(())
    }

    /// Positions and velocities drawn in stacked order from the seeded
    /// generator.
    pub fn initial_state(&self) -> Vec<f64> {
        let mut rng = SplitMix64::new(self.seed);
        let mut state = Vec::with_capacity(2 * self.n);
        for _ in 0..self.n {
            let x = rng.uniform(self.init_low, self.init_high);
            let v = rng.uniform(self.init_low, self.init_high);
            state.push(x);
            state.push(if self.zero_velocity { 0.0 } else { v });
        }
        state
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub disagreement: Vec<f64>,
    /// Step at which the overflow guard fired, if it did.
    pub truncated_at: Option<u64>,
}

impl Trajectory {
    pub fn truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    pub fn final_disagreement(&self) -> f64 {
        *self.disagreement.last().expect("at least the initial sample")
    }

    /// Least-squares slope of `ln(disagreement)` against time over the
    /// second half of the recorded horizon.
    pub fn tail_decay_slope(&self) -> Option<f64> {
        let t0 = *self.times.first()?;
        let t_end = *self.times.last()?;
        let cut = t0 + 0.5 * (t_end - t0);
        let pts: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(&self.disagreement)
            .filter(|(t, d)| **t >= cut && **d > 0.0)
            .map(|(t, d)| (*t, d.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let k = pts.len() as f64;
        let mt = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

/// Max over agent pairs of `‖(x_i − x_k, v_i − v_k)‖₂`.
pub fn disagreement(state: &[f64], n: usize) -> Result<f64> {
    if state.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, got: state.len() });
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for k in i + 1..n {
            let dx = state[2 * i] - state[2 * k];
            let dv = state[2 * i + 1] - state[2 * k + 1];
            worst = worst.max(dx.hypot(dv));
        }
    }
    Ok(worst)
}

/// Assembles `F = I ⊗ A − L ⊗ BK` block by block.
pub fn build_f(gamma: f64, laplacian: &LaplacianMatrix) -> Result<DMatrix<f64>> {
    check_gamma(gamma)?;
    let n = laplacian.n();
    let l = laplacian.matrix();
    let mut f = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        f[(2 * i, 2 * i + 1)] = 1.0;
        f[(2 * i + 1, 2 * i + 1)] = -gamma;
        for k in 0..n {
            f[(2 * i + 1, 2 * k)] -= l[(i, k)];
        }
    }
    Ok(f)
}

/// Sparse right-hand side: `ẋ_i = v_i`, `v̇_i = −γv_i − Σ_k l_ik x_k`.
struct Dynamics {
    gamma: f64,
    rows: Vec<Vec<(usize, f64)>>,
}

impl Dynamics {
    fn new(gamma: f64, laplacian: &LaplacianMatrix) -> Self {
        let l = laplacian.matrix();
        let rows = (0..laplacian.n())
            .map(|i| {
                (0..laplacian.n())
                    .filter(|&k| l[(i, k)] != 0.0)
                    .map(|k| (k, l[(i, k)]))
                    .collect()
            })
            .collect();
        Self { gamma, rows }
    }

    fn eval(&self, state: &[f64], out: &mut [f64]) {
        for (i, row) in self.rows.iter().enumerate() {
            let coupling: f64 = row.iter().map(|&(k, w)| w * state[2 * k]).sum();
            out[2 * i] = state[2 * i + 1];
            out[2 * i + 1] = -self.gamma * state[2 * i + 1] - coupling;
        }
    }
}

/// Classic RK4 from `initial` for `steps` steps of size `dt`, recording the
/// initial state and every `stride`-th step after it.
pub fn integrate(
    gamma: f64,
    laplacian: &LaplacianMatrix,
    initial: Vec<f64>,
    dt: f64,
    steps: u64,
    stride: usize,
) -> Result<Trajectory> {
    check_gamma(gamma)?;
    let n = laplacian.n();
    if initial.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, got: initial.len() });
    }
    if steps > MAX_STEPS {
        return Err(Error::StepCap { steps, cap: MAX_STEPS });
    }
    let stride = stride.max(1) as u64;
    let dynamics = Dynamics::new(gamma, laplacian);
    let dim = 2 * n;

    let mut traj = Trajectory {
        n,
        times: vec![0.0],
        disagreement: vec![disagreement(&initial, n)?],
        states: vec![initial.clone()],
        truncated_at: None,
    };

    let mut y = initial;
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    for step in 1..=steps {
        dynamics.eval(&y, &mut k1);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * dt * k1[j];
        }
        dynamics.eval(&tmp, &mut k2);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * dt * k2[j];
        }
        dynamics.eval(&tmp, &mut k3);
        for j in 0..dim {
            tmp[j] = y[j] + dt * k3[j];
        }
        dynamics.eval(&tmp, &mut k4);
        for j in 0..dim {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }

        if y.iter().any(|v| !v.is_finite() || v.abs() > OVERFLOW_GUARD) {
            traj.truncated_at = Some(step);
            break;
        }
        if step % stride == 0 || step == steps {
            traj.times.push(step as f64 * dt);
            traj.disagreement.push(disagreement(&y, n)?);
            traj.states.push(y.clone());
        }
    }
    Ok(traj)
}

/// Runs the configured network from its seeded initial state.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let network = Network::new(cfg.topology, cfg.n)?;
    integrate(
        cfg.gamma,
        &network.laplacian(),
        cfg.initial_state(),
        cfg.dt,
        cfg.steps(),
        cfg.record_stride,
    )
}

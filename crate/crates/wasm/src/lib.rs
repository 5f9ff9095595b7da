//! Browser bindings: the spectrum of the block generator, linear decay
//! curves and nonlinear profiles, all returned as flat `Float64Array`s.

use mgt_core::block::{BlockOperator, MgtParams, StateTriple};
use mgt_core::nonlinearity::{Nonlinearity, ScalarFn};
use mgt_core::semigroup::{generic_state, PropagatorSet};
use mgt_core::solver::{continue_solution, SolverConfig};
use mgt_core::spectral::{SineGrid, SpectralOperator};
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn operator(alpha: f64, beta: f64, gamma: f64, delta: f64, n: usize) -> Result<BlockOperator, JsError> {
    let p = MgtParams::new(alpha, beta, gamma, delta).map_err(err)?;
    let op = SpectralOperator::dirichlet_power(1, n).map_err(err)?;
    BlockOperator::new(op, p).map_err(err)
}

/// One line: the condition value, `χ` and the verdict.
#[wasm_bindgen]
pub fn stability(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<String, JsError> {
    let b = operator(alpha, beta, gamma, delta, 1)?;
    let v = b.stability();
    Ok(format!(
        "γ/(α+δλ₀) = {:.4} {} β = {:.4}, χ = {:.4}: {}",
        v.ratio,
        if v.stable { "<" } else { "≥" },
        v.beta,
        v.chi,
        if v.stable { "stable" } else { "unstable" }
    ))
}

/// `[re, im]` pairs of all `3n` eigenvalues of `G`.
#[wasm_bindgen]
pub fn spectrum(alpha: f64, beta: f64, gamma: f64, delta: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let b = operator(alpha, beta, gamma, delta, n)?;
    Ok(b.spectrum()
        .iter()
        .flat_map(|r| r.roots.iter().flat_map(|z| [z.re, z.im]))
        .collect())
}

/// `y_norm(e^{Gt}s₀)` at `samples + 1` equally spaced times on `[0, horizon]`.
#[wasm_bindgen]
pub fn decay_curve(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    n: usize,
    horizon: f64,
    samples: usize,
) -> Result<Vec<f64>, JsError> {
    let b = operator(alpha, beta, gamma, delta, n)?;
    let step = PropagatorSet::new(&b, horizon / samples.max(1) as f64).map_err(err)?;
    let mut s = generic_state(n);
    let mut out = vec![b.y_norm(&s).map_err(err)?];
    for _ in 0..samples {
        s = step.apply(&s).map_err(err)?;
        out.push(b.y_norm(&s).map_err(err)?);
    }
    Ok(out)
}

/// Profiles `u(x, t)` on `points` grid values at `snapshots + 1` times in
/// `[0, t_end]`, starting from `u₀ = amplitude·sin x`, `v₀ = w₀ = 0`.
/// Rows end early if the solution blows up.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn simulate_profile(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    f1: &str,
    f3: &str,
    amplitude: f64,
    t_end: f64,
    snapshots: usize,
) -> Result<Vec<f64>, JsError> {
    const N: usize = 32;
    const POINTS: usize = 128;
    let b = operator(alpha, beta, gamma, delta, N)?;
    let nl = Nonlinearity::new(
        ScalarFn::gallery(f1, 3.0).map_err(err)?,
        ScalarFn::zero(),
        ScalarFn::gallery(f3, 3.0).map_err(err)?,
        3.0,
        3,
        1,
    )
    .map_err(err)?;
    let mut s0 = StateTriple::zeros(N);
    s0.u[0] = amplitude;
    let snapshots = snapshots.max(1);
    let cfg = SolverConfig {
        dt: t_end / (10 * snapshots) as f64,
        t_window: t_end.min(1.0),
        horizon: t_end,
        ..SolverConfig::default()
    };
    let tr = continue_solution(&b, &nl, &s0, &cfg, t_end).map_err(err)?;
    let grid = SineGrid::new(N, POINTS).map_err(err)?;
    let mut out = Vec::new();
    for i in (0..tr.times.len()).step_by(10) {
        out.extend(grid.synthesize(&tr.states[i].u));
    }
    Ok(out)
}

/// Collocation points matching the rows of [`simulate_profile`].
#[wasm_bindgen]
pub fn profile_grid() -> Result<Vec<f64>, JsError> {
    Ok(SineGrid::new(32, 128).map_err(err)?.points().to_vec())
}

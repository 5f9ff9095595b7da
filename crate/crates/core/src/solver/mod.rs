//! Local solutions of `du/dt = Gu + 𝔽(u)`.
//!
//! * [`picard_solve`] iterates the variation-of-constants formula on a time
//!   grid with exact per-mode propagators;
//! * [`reference_integrate`] is an independent adaptive Dormand–Prince
//!   integration of the same truncated system;
//! * [`continue_solution`] chains local windows with blow-up detection;
//! * [`augmented_solve`] integrates the differentiated four-component system
//!   for `(u, ∂ₜu, ∂ₜ²u, ∂ₜ³u)`.

mod dp45;

use nalgebra::{Matrix3, SMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::block::{BlockOperator, StateTriple, YAlphaNorm};
use crate::error::{MgtError, Result};
use crate::expm::expm;
use crate::nonlinearity::{FEvaluator, Nonlinearity};
use crate::par;

/// Number of times [`picard_solve`] halves the window before giving up.
pub const MAX_HALVINGS: u32 = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Local window length.
    #[serde(rename = "T")]
    pub t_window: f64,
    pub dt: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    /// Exponent of the `Y^α₋₁` norm used for contraction and ball radii.
    pub alpha_space: f64,
    /// Radius of the initial-data ball.
    pub r: f64,
    pub blowup_threshold: f64,
    /// End time for continuation.
    pub horizon: f64,
    /// Tolerance of the reference integrator.
    pub ref_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_window: 1.0,
            dt: 0.01,
            picard_tol: 1e-10,
            picard_max: 60,
            alpha_space: 0.75,
            r: 1.0,
            blowup_threshold: 1e6,
            horizon: 10.0,
            ref_tol: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, what: &str| Err(MgtError::Config(format!("solver.{key} {what}")));
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !pos(self.t_window) {
            return bad("T", "must be positive");
        }
        if !pos(self.dt) {
            return bad("dt", "must be positive");
        }
        if self.dt > self.t_window {
            return bad("dt", "must not exceed solver.T");
        }
        if !pos(self.picard_tol) {
            return bad("picard_tol", "must be positive");
        }
        if self.picard_max == 0 {
            return bad("picard_max", "must be at least 1");
        }
        if !(self.alpha_space > 0.0 && self.alpha_space < 1.0) {
            return bad("alpha_space", "must lie in (0, 1)");
        }
        if !pos(self.r) {
            return bad("r", "must be positive");
        }
        if !pos(self.blowup_threshold) {
            return bad("blowup_threshold", "must be positive");
        }
        if !pos(self.horizon) {
            return bad("horizon", "must be positive");
        }
        if !pos(self.ref_tol) {
            return bad("ref_tol", "must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormRecord {
    pub y_norm: f64,
    pub y_minus1_norm: f64,
    /// `NaN` when the parameters are unstable and `Y^α₋₁` is undefined.
    pub y_alpha_norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlowUpReason {
    /// `y_alpha_norm` crossed the configured threshold.
    Threshold,
    /// No local existence window could be found from the current state.
    WindowCollapse,
    /// The adaptive step size underflowed.
    StepUnderflow,
    /// The state stopped being finite.
    NonFinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowUp {
    pub time: f64,
    pub reason: BlowUpReason,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PicardStats {
    /// Window actually used.
    pub window: f64,
    pub halvings: u32,
    pub iterations: usize,
    /// `sup_t ‖u^{(j+1)}(t) − u^{(j)}(t)‖_α` per iteration.
    pub increments: Vec<f64>,
    /// Largest ratio of successive increments above the tolerance.
    pub contraction_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateTriple>,
    pub norms: Vec<NormRecord>,
    pub blowup: Option<BlowUp>,
    /// One entry per Picard window.
    pub picard: Vec<PicardStats>,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn final_state(&self) -> &StateTriple {
        self.states.last().expect("trajectories start with the initial state")
    }

    /// `sup_t` of a norm column.
    pub fn sup(&self, pick: impl Fn(&NormRecord) -> f64) -> f64 {
        self.norms.iter().map(pick).fold(0.0, f64::max)
    }
}

fn norm_record(b: &BlockOperator, ya: Option<&YAlphaNorm<'_>>, s: &StateTriple) -> Result<NormRecord> {
    Ok(NormRecord {
        y_norm: b.y_norm(s)?,
        y_minus1_norm: b.y_minus1_norm(s)?,
        y_alpha_norm: match ya {
            Some(ya) => ya.norm(s)?,
            None => f64::NAN,
        },
    })
}

fn norm_records(b: &BlockOperator, ya: Option<&YAlphaNorm<'_>>, states: &[StateTriple]) -> Result<Vec<NormRecord>> {
    par::map_indices(states.len(), |i| norm_record(b, ya, &states[i]))
        .into_iter()
        .collect()
}

fn time_grid(t_final: f64, dt: f64) -> Vec<f64> {
    let steps = ((t_final / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    (0..=steps).map(|i| if i == steps { t_final } else { i as f64 * h }).collect()
}

/// Per-mode one-step data of the exponential integrator: `e^{hL}` and the
/// columns `h(φ₁ − φ₂)e₃`, `hφ₂e₃` weighting `f` at the two ends of the step.
struct StepMats {
    p: Vec<Matrix3<f64>>,
    c_left: Vec<Vector3<f64>>,
    c_right: Vec<Vector3<f64>>,
}

impl StepMats {
    fn new(b: &BlockOperator, h: f64) -> Result<Self> {
        let per = par::map_indices(b.n_modes(), |k| {
            // exp([[hL, I, 0], [0, 0, I], [0, 0, 0]]) = [[e^{hL}, φ₁, φ₂], …]
            let mut m = SMatrix::<f64, 9, 9>::zeros();
            m.fixed_view_mut::<3, 3>(0, 0).copy_from(&(b.blocks()[k].matrix * h));
            m.fixed_view_mut::<3, 3>(0, 3).copy_from(&Matrix3::identity());
            m.fixed_view_mut::<3, 3>(3, 6).copy_from(&Matrix3::identity());
            let e = expm(&m)?;
            let p: Matrix3<f64> = e.fixed_view::<3, 3>(0, 0).into();
            let phi1: Vector3<f64> = e.fixed_view::<3, 1>(0, 5).into();
            let phi2: Vector3<f64> = e.fixed_view::<3, 1>(0, 8).into();
            Ok((p, (phi1 - phi2) * h, phi2 * h))
        });
        let mut out = StepMats {
            p: Vec::with_capacity(per.len()),
            c_left: Vec::with_capacity(per.len()),
            c_right: Vec::with_capacity(per.len()),
        };
        for r in per {
            let (p, l, rr) = r?;
            out.p.push(p);
            out.c_left.push(l);
            out.c_right.push(rr);
        }
        Ok(out)
    }

    /// `e^{hL}s + c_left·f_l + c_right·f_r`, with `f` acting on the third slot.
    fn step(&self, s: &StateTriple, f_l: &[f64], f_r: &[f64]) -> StateTriple {
        StateTriple::from_modes((0..s.len()).map(|k| {
            self.p[k] * s.mode(k) + self.c_left[k] * f_l[k] + self.c_right[k] * f_r[k]
        }))
    }
}

enum Attempt {
    Converged(Vec<StateTriple>, PicardStats),
    NonFinite(Vec<StateTriple>, f64, PicardStats),
    Stalled,
}

fn picard_window(
    b: &BlockOperator,
    ev: &FEvaluator<'_>,
    ya: &YAlphaNorm<'_>,
    s0: &StateTriple,
    times: &[f64],
    cfg: &SolverConfig,
) -> Result<Attempt> {
    let steps = times.len() - 1;
    let h = times[1] - times[0];
    let mats = StepMats::new(b, h)?;
    let zero = vec![0.0; s0.len()];

    // u⁽⁰⁾: the linear evolution
    let mut traj = Vec::with_capacity(steps + 1);
    traj.push(s0.clone());
    for i in 0..steps {
        let next = mats.step(&traj[i], &zero, &zero);
        traj.push(next);
    }

    let mut stats = PicardStats {
        window: times[steps],
        halvings: 0,
        iterations: 0,
        increments: Vec::new(),
        contraction_ratio: 0.0,
    };
    for it in 1..=cfg.picard_max {
        let f: Vec<Vec<f64>> = par::map_indices(steps + 1, |i| ev.third(&traj[i]));
        let mut next = Vec::with_capacity(steps + 1);
        next.push(s0.clone());
        for i in 0..steps {
            let s = mats.step(&next[i], &f[i], &f[i + 1]);
            next.push(s);
        }
        stats.iterations = it;
        if let Some(bad) = next.iter().position(|s| !s.is_finite()) {
            next.truncate(bad);
            return Ok(Attempt::NonFinite(next, times[bad], stats));
        }
        let inc = par::map_indices(steps + 1, |i| ya.norm(&next[i].sub(&traj[i])))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if let Some(&prev) = stats.increments.last() {
            if prev > cfg.picard_tol {
                stats.contraction_ratio = stats.contraction_ratio.max(inc / prev);
            }
        }
        stats.increments.push(inc);
        traj = next;
        if !inc.is_finite() {
            return Ok(Attempt::Stalled);
        }
        if inc < cfg.picard_tol {
            return Ok(Attempt::Converged(traj, stats));
        }
        // two consecutive non-contracting iterations: outside the window
        let n = stats.increments.len();
        if n >= 3 && stats.increments[n - 1] >= stats.increments[n - 2] && stats.increments[n - 2] >= stats.increments[n - 3] {
            return Ok(Attempt::Stalled);
        }
    }
    Ok(Attempt::Stalled)
}

/// Picard iteration `u⁽ʲ⁺¹⁾(t) = e^{Gt}u₀ + ∫₀ᵗ e^{G(t−s)}𝔽(u⁽ʲ⁾(s))ds` on
/// the grid `{0, dt, …, T}`.
///
/// Between grid nodes the linear part is propagated exactly and `𝔽` is
/// interpolated linearly in time, so the quadrature weights are the
/// `φ₁, φ₂` functions of `hL` (an exponential trapezoid rule that stays
/// accurate on stiff modes). Iteration stops once
/// `sup_t ‖u⁽ʲ⁺¹⁾ − u⁽ʲ⁾‖_α < picard_tol`; without contraction the window
/// is halved, at most [`MAX_HALVINGS`] times.
pub fn picard_solve(b: &BlockOperator, nl: &Nonlinearity, s0: &StateTriple, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    b.check(s0)?;
    let ev = FEvaluator::new(b, nl)?;
    let ya = b.y_alpha_evaluator(cfg.alpha_space)?;
    let mut window = cfg.t_window;
    for halving in 0..=MAX_HALVINGS {
        let times = time_grid(window, cfg.dt.min(window));
        match picard_window(b, &ev, &ya, s0, &times, cfg)? {
            Attempt::Converged(states, mut stats) => {
                stats.halvings = halving;
                let norms = norm_records(b, Some(&ya), &states)?;
                return Ok(Trajectory {
                    times,
                    states,
                    norms,
                    blowup: None,
                    picard: vec![stats],
                });
            }
            Attempt::NonFinite(states, t, mut stats) => {
                stats.halvings = halving;
                let norms = norm_records(b, Some(&ya), &states)?;
                return Ok(Trajectory {
                    times: times[..states.len()].to_vec(),
                    states,
                    norms,
                    blowup: Some(BlowUp {
                        time: t,
                        reason: BlowUpReason::NonFinite,
                    }),
                    picard: vec![stats],
                });
            }
            Attempt::Stalled => window *= 0.5,
        }
    }
    Err(MgtError::NoExistenceWindow)
}

fn flatten(s: &StateTriple) -> Vec<f64> {
    [s.u.as_slice(), &s.v, &s.w].concat()
}

fn unflatten(y: &[f64], n: usize) -> StateTriple {
    StateTriple {
        u: y[..n].to_vec(),
        v: y[n..2 * n].to_vec(),
        w: y[2 * n..3 * n].to_vec(),
    }
}

/// Adaptive Dormand–Prince integration of `du/dt = Gu + 𝔽(u)` on the
/// coefficient system, reported on the grid `{0, dt_out, …, t_final}`.
///
/// Step-size underflow or a non-finite state ends the trajectory with a
/// blow-up flag at the failing time.
pub fn reference_integrate(
    b: &BlockOperator,
    nl: &Nonlinearity,
    s0: &StateTriple,
    t_final: f64,
    dt_out: f64,
    tol: f64,
) -> Result<Trajectory> {
    b.check(s0)?;
    if !(t_final > 0.0 && dt_out > 0.0 && tol > 0.0) {
        return Err(MgtError::Precondition("t_final, dt_out and tol must be positive".into()));
    }
    let ev = FEvaluator::new(b, nl)?;
    let n = b.n_modes();
    let coeffs: Vec<(f64, f64, f64)> = b.lambdas().iter().map(|&l| b.params().char_poly(l)).collect();
    let rhs = |y: &[f64], dy: &mut [f64]| {
        let (u, v, w) = (&y[..n], &y[n..2 * n], &y[2 * n..]);
        let f = ev.third(&StateTriple {
            u: u.to_vec(),
            v: v.to_vec(),
            w: w.to_vec(),
        });
        for k in 0..n {
            let (c2, c1, c0) = coeffs[k];
            dy[k] = v[k];
            dy[n + k] = w[k];
            dy[2 * n + k] = -c0 * u[k] - c1 * v[k] - c2 * w[k] + f[k];
        }
    };
    let times = time_grid(t_final, dt_out.min(t_final));
    let out = dp45::integrate(rhs, &flatten(s0), &times, tol);
    let states: Vec<StateTriple> = out.states.iter().map(|y| unflatten(y, n)).collect();
    let ya = if b.stability().stable {
        Some(b.y_alpha_evaluator(SolverConfig::default().alpha_space)?)
    } else {
        None
    };
    let norms = norm_records(b, ya.as_ref(), &states)?;
    Ok(Trajectory {
        times: out.times,
        states,
        norms,
        blowup: out.failure.map(|(time, reason)| BlowUp { time, reason }),
        picard: Vec::new(),
    })
}

/// Chains [`picard_solve`] windows up to `horizon`.
///
/// Each restart re-derives the window from the current radius,
/// `T·min(1, (r/‖s‖_α)^{ρ−1})` (the scaling of the local existence time for
/// growth `ρ`), or twice the previous window if that is longer; Picard's own
/// halving catches windows that are too long. The run stops with a blow-up flag when
/// `y_alpha_norm` exceeds the threshold, the state stops being finite, or
/// no contracting window can be found.
pub fn continue_solution(
    b: &BlockOperator,
    nl: &Nonlinearity,
    s0: &StateTriple,
    cfg: &SolverConfig,
    horizon: f64,
) -> Result<Trajectory> {
    cfg.validate()?;
    let ya = b.y_alpha_evaluator(cfg.alpha_space)?;
    let mut out = Trajectory {
        times: vec![0.0],
        states: vec![s0.clone()],
        norms: vec![norm_record(b, Some(&ya), s0)?],
        blowup: None,
        picard: Vec::new(),
    };
    let mut t0 = 0.0;
    let mut last_window: f64 = 0.0;
    let flag = |out: &mut Trajectory, time: f64, reason: BlowUpReason| {
        out.blowup = Some(BlowUp { time, reason });
    };
    while t0 < horizon * (1.0 - 1e-12) {
        let s = out.final_state().clone();
        let na = out.norms.last().map(|n| n.y_alpha_norm).unwrap_or(f64::NAN);
        if !na.is_finite() {
            flag(&mut out, t0, BlowUpReason::NonFinite);
            break;
        }
        if na > cfg.blowup_threshold {
            flag(&mut out, t0, BlowUpReason::Threshold);
            break;
        }
        let shrink = if na > cfg.r { (cfg.r / na).powf(nl.rho - 1.0) } else { 1.0 };
        // the radius scaling is a worst case; a window that just contracted
        // is a better guess, so also try twice the last one
        let window = (cfg.t_window * shrink)
            .max((2.0 * last_window).min(cfg.t_window))
            .min(horizon - t0);
        if window <= 1e-12 * horizon.max(1.0) {
            flag(&mut out, t0, BlowUpReason::WindowCollapse);
            break;
        }
        let wcfg = SolverConfig {
            t_window: window,
            dt: cfg.dt.min(window),
            ..cfg.clone()
        };
        let tr = match picard_solve(b, nl, &s, &wcfg) {
            Ok(tr) => tr,
            Err(MgtError::NoExistenceWindow) => {
                flag(&mut out, t0, BlowUpReason::WindowCollapse);
                break;
            }
            Err(e) => return Err(e),
        };
        out.picard.extend(tr.picard.iter().cloned());
        for i in 1..tr.times.len() {
            out.times.push(t0 + tr.times[i]);
            out.states.push(tr.states[i].clone());
            out.norms.push(tr.norms[i]);
            if tr.norms[i].y_alpha_norm > cfg.blowup_threshold {
                flag(&mut out, t0 + tr.times[i], BlowUpReason::Threshold);
                return Ok(out);
            }
        }
        if let Some(bu) = tr.blowup {
            flag(&mut out, t0 + bu.time, bu.reason);
            break;
        }
        last_window = tr.final_time();
        t0 += last_window;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DependenceCurve {
    pub times: Vec<f64>,
    /// `‖u(t; s₀) − u(t; s₀′)‖_α / ‖s₀ − s₀′‖_α`; zeros when the data agree.
    pub ratios: Vec<f64>,
    /// `max_t` of the ratio.
    pub bound: f64,
}

/// Continuous dependence on the data over one common local window.
pub fn dependence_probe(
    b: &BlockOperator,
    nl: &Nonlinearity,
    s0: &StateTriple,
    s0_perturbed: &StateTriple,
    cfg: &SolverConfig,
) -> Result<DependenceCurve> {
    let ya = b.y_alpha_evaluator(cfg.alpha_space)?;
    let d0 = ya.norm(&s0.sub(s0_perturbed))?;
    let mut a = picard_solve(b, nl, s0, cfg)?;
    let common = SolverConfig {
        t_window: a.final_time(),
        ..cfg.clone()
    };
    let c = picard_solve(b, nl, s0_perturbed, &common)?;
    if c.final_time() < a.final_time() || c.times.len() != a.times.len() {
        let shorter = SolverConfig {
            t_window: c.final_time(),
            ..cfg.clone()
        };
        a = picard_solve(b, nl, s0, &shorter)?;
    }
    if a.blowup.is_some() || c.blowup.is_some() || a.times.len() != c.times.len() {
        return Err(MgtError::NoExistenceWindow);
    }
    let ratios = if d0 == 0.0 {
        vec![0.0; a.times.len()]
    } else {
        (0..a.times.len())
            .map(|i| Ok(ya.norm(&a.states[i].sub(&c.states[i]))? / d0))
            .collect::<Result<Vec<f64>>>()?
    };
    let bound = ratios.iter().copied().fold(0.0, f64::max);
    Ok(DependenceCurve {
        times: a.times,
        ratios,
        bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AugmentedReport {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<StateTriple>,
    /// `∂ₜ³u` coefficients at each output time.
    #[serde(skip)]
    pub z: Vec<Vec<f64>>,
    /// `z(0) = −αw₀ − A(βv₀ + γu₀ + δw₀) + f(u₀, v₀, w₀)`.
    pub z0: Vec<f64>,
    /// Max relative difference between `z0` and the third component of
    /// `G s₀ + 𝔽(s₀)`.
    pub z0_mismatch: f64,
    /// `sup_t ‖z − ∂ₜw‖_X` with a fourth-order central difference for `∂ₜw`
    /// (interior output times).
    pub fd_residual: f64,
    /// `sup_t ‖z − (Gs + 𝔽(s))₃‖_X`.
    pub algebraic_residual: f64,
    pub blowup: Option<BlowUp>,
}

/// Integrates `d/dt(u, v, w, z) = (v, w, z, −γAv − βAw − (α + δA)z + h̄)`
/// with `h̄ = ∂₁f·v + ∂₂f·w + ∂₃f·z`, the time derivative of the
/// first-order system, and checks `z` against `∂ₜw`.
pub fn augmented_solve(
    b: &BlockOperator,
    nl: &Nonlinearity,
    s0: &StateTriple,
    t_final: f64,
    dt_out: f64,
    tol: f64,
) -> Result<AugmentedReport> {
    b.check(s0)?;
    if !(t_final > 0.0 && dt_out > 0.0 && tol > 0.0) {
        return Err(MgtError::Precondition("t_final, dt_out and tol must be positive".into()));
    }
    let ev = FEvaluator::new(b, nl)?;
    let n = b.n_modes();
    let p = *b.params();
    let lam = b.lambdas().to_vec();
    let f0 = ev.third(s0);
    let z0: Vec<f64> = (0..n)
        .map(|k| -p.alpha * s0.w[k] - lam[k] * (p.beta * s0.v[k] + p.gamma * s0.u[k] + p.delta * s0.w[k]) + f0[k])
        .collect();
    let g0 = b.apply_generator(s0)?;
    let z0_mismatch = (0..n)
        .map(|k| {
            let other = g0.w[k] + f0[k];
            (z0[k] - other).abs() / z0[k].abs().max(other.abs()).max(1e-300)
        })
        .fold(0.0, f64::max);

    let coeffs: Vec<(f64, f64, f64)> = lam.iter().map(|&l| p.char_poly(l)).collect();
    let rhs = |y: &[f64], dy: &mut [f64]| {
        let (u, v, w, z) = (&y[..n], &y[n..2 * n], &y[2 * n..3 * n], &y[3 * n..]);
        let s = StateTriple {
            u: u.to_vec(),
            v: v.to_vec(),
            w: w.to_vec(),
        };
        let d = StateTriple {
            u: v.to_vec(),
            v: w.to_vec(),
            w: z.to_vec(),
        };
        let hbar = ev.directional(&s, &d);
        for k in 0..n {
            let (c2, c1, _) = coeffs[k];
            dy[k] = v[k];
            dy[n + k] = w[k];
            dy[2 * n + k] = z[k];
            dy[3 * n + k] = -p.gamma * lam[k] * v[k] - c1 * w[k] - c2 * z[k] + hbar[k];
        }
    };
    let times = time_grid(t_final, dt_out.min(t_final));
    let y0 = [flatten(s0), z0.clone()].concat();
    let out = dp45::integrate(rhs, &y0, &times, tol);
    let states: Vec<StateTriple> = out.states.iter().map(|y| unflatten(y, n)).collect();
    let z: Vec<Vec<f64>> = out.states.iter().map(|y| y[3 * n..].to_vec()).collect();

    let l2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let mut fd_residual: f64 = 0.0;
    let h = if out.times.len() > 1 { out.times[1] - out.times[0] } else { 0.0 };
    for i in 2..out.times.len().saturating_sub(2) {
        let dw: Vec<f64> = (0..n)
            .map(|k| {
                (-states[i + 2].w[k] + 8.0 * states[i + 1].w[k] - 8.0 * states[i - 1].w[k] + states[i - 2].w[k])
                    / (12.0 * h)
            })
            .collect();
        fd_residual = fd_residual.max(l2(&z[i], &dw));
    }
    let mut algebraic_residual: f64 = 0.0;
    for (s, zi) in states.iter().zip(&z) {
        let g = b.apply_generator(s)?;
        let f = ev.third(s);
        let w_dot: Vec<f64> = (0..n).map(|k| g.w[k] + f[k]).collect();
        algebraic_residual = algebraic_residual.max(l2(zi, &w_dot));
    }
    Ok(AugmentedReport {
        times: out.times,
        states,
        z,
        z0,
        z0_mismatch,
        fd_residual,
        algebraic_residual,
        blowup: out.failure.map(|(time, reason)| BlowUp { time, reason }),
    })
}

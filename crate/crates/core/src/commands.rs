//! Back end of the `mgt` subcommands. Each returns its full output as text
//! so that the bytes written are a pure function of the configuration.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::block::{BlockOperator, StateTriple};
use crate::config::RunConfig;
use crate::diagnostics::run_suite;
use crate::error::Result;
use crate::nonlinearity::smooth_coeffs;
use crate::semigroup::{generic_state, PropagatorSet};
use crate::solver::continue_solution;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// The command's output proper (CSV, text or JSON).
    pub text: String,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            notes: Vec::new(),
            code: EXIT_OK,
        }
    }
}

/// Shortest decimal that round-trips to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:?}")
}

fn row(out: &mut String, cells: impl IntoIterator<Item = f64>) {
    let line: Vec<String> = cells.into_iter().map(fmt_num).collect();
    out.push_str(&line.join(","));
    out.push('\n');
}

/// Prints `γ/(α + δλ₀)`, `β`, `χ` and the verdict.
pub fn cmd_stability(cfg: &RunConfig, base: Option<&Path>) -> Result<Outcome> {
    let b = cfg.block_operator(base)?;
    let v = b.stability();
    let mut s = String::new();
    writeln!(s, "lambda0 = {}", fmt_num(b.op().lambda0())).unwrap();
    writeln!(s, "gamma/(alpha+delta*lambda0) = {}", fmt_num(v.ratio)).unwrap();
    writeln!(s, "beta = {}", fmt_num(v.beta)).unwrap();
    writeln!(s, "chi = {}", fmt_num(v.chi)).unwrap();
    let rel = if v.stable { "<" } else { ">=" };
    let verdict = if v.stable { "stable" } else { "unstable" };
    writeln!(s, "verdict: {verdict} ({} {rel} {})", fmt_num(v.ratio), fmt_num(v.beta)).unwrap();
    Ok(Outcome::ok(s))
}

/// `mode,lambda,re1,im1,re2,im2,re3,im3`: the three eigenvalues of `G` per
/// mode (modes numbered from 1).
pub fn cmd_spectrum(cfg: &RunConfig, base: Option<&Path>) -> Result<Outcome> {
    let b = cfg.block_operator(base)?;
    let mut s = String::from("mode,lambda,re1,im1,re2,im2,re3,im3\n");
    for (k, roots) in b.spectrum().iter().enumerate() {
        write!(s, "{},", k + 1).unwrap();
        let mut cells = vec![b.lambdas()[k]];
        for z in &roots.roots {
            cells.extend([z.re, z.im]);
        }
        row(&mut s, cells);
    }
    Ok(Outcome::ok(s))
}

/// `t,y_norm` for the linear evolution of a fixed generic datum on
/// `[0, solver.horizon]` with step `solver.dt`.
pub fn cmd_semigroup(cfg: &RunConfig, base: Option<&Path>) -> Result<Outcome> {
    let b = cfg.block_operator(base)?;
    let dt = cfg.solver.dt;
    let steps = (cfg.solver.horizon / dt).round() as usize;
    let step = PropagatorSet::new(&b, dt)?;
    let mut state = generic_state(b.n_modes());
    let mut s = String::from("t,y_norm\n");
    row(&mut s, [0.0, b.y_norm(&state)?]);
    for i in 1..=steps {
        state = step.apply(&state)?;
        row(&mut s, [i as f64 * dt, b.y_norm(&state)?]);
    }
    Ok(Outcome::ok(s))
}

/// The seeded initial datum used by `simulate`: smooth random coefficients
/// scaled to `y_alpha_norm = solver.r`.
pub fn initial_datum(cfg: &RunConfig, b: &BlockOperator) -> Result<StateTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = b.n_modes();
    let s = StateTriple {
        u: smooth_coeffs(n, &mut rng),
        v: smooth_coeffs(n, &mut rng),
        w: smooth_coeffs(n, &mut rng),
    };
    let norm = b.y_alpha_norm(cfg.solver.alpha_space, &s)?;
    Ok(s.scaled(cfg.solver.r / norm))
}

/// `t,y_norm,y_minus1_norm,y_alpha_norm`, plus `u_k,v_k,w_k` columns when
/// `output.full_coefficients` is set, up to `solver.horizon`.
pub fn cmd_simulate(cfg: &RunConfig, base: Option<&Path>) -> Result<Outcome> {
    let b = cfg.block_operator(base)?;
    let nl = cfg.nonlinearity()?;
    let s0 = initial_datum(cfg, &b)?;
    let tr = continue_solution(&b, &nl, &s0, &cfg.solver, cfg.solver.horizon)?;
    let n = b.n_modes();
    let mut s = String::from("t,y_norm,y_minus1_norm,y_alpha_norm");
    if cfg.output.full_coefficients {
        for c in ["u", "v", "w"] {
            for k in 1..=n {
                write!(s, ",{c}_{k}").unwrap();
            }
        }
    }
    s.push('\n');
    for i in 0..tr.times.len() {
        let nr = &tr.norms[i];
        let mut cells = vec![tr.times[i], nr.y_norm, nr.y_minus1_norm, nr.y_alpha_norm];
        if cfg.output.full_coefficients {
            let st = &tr.states[i];
            cells.extend(st.u.iter().chain(&st.v).chain(&st.w));
        }
        row(&mut s, cells);
    }
    let mut out = Outcome::ok(s);
    if let Some(bu) = tr.blowup {
        out.notes.push(format!("blow-up at t = {} ({:?})", fmt_num(bu.time), bu.reason));
    }
    Ok(out)
}

/// `a,max_abs_disagreement` between the functional-calculus and quadrature
/// routes for `𝔸^{−a}` on a seeded datum with unit max-entry.
pub fn cmd_fracpow(cfg: &RunConfig, base: Option<&Path>) -> Result<Outcome> {
    let b = cfg.block_operator(base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = b.n_modes();
    let mut c = || -> Vec<f64> { (0..n).map(|k| rng.gen_range(-1.0..1.0) / (k + 1) as f64).collect() };
    let raw = StateTriple { u: c(), v: c(), w: c() };
    let s = raw.scaled(1.0 / raw.max_abs());
    let mut text = String::from("a,max_abs_disagreement\n");
    for a in [0.25, 0.5, 0.75] {
        let fc = b.frac_block_power_fc(a, &s)?.state;
        let q = b.frac_block_power_quad(a, &s)?;
        row(&mut text, [a, fc.sub(&q).max_abs()]);
    }
    Ok(Outcome::ok(text))
}

/// Runs the property suite; exit code 1 when any entry fails.
pub fn cmd_verify(cfg: &RunConfig, base: Option<&Path>) -> Result<Outcome> {
    let rep = run_suite(cfg, base)?;
    let notes = rep
        .failures()
        .iter()
        .map(|e| format!("FAILED {}: {}", e.name, serde_json::to_string(&e.values).unwrap_or_default()))
        .collect();
    Ok(Outcome {
        code: if rep.passed() { EXIT_OK } else { EXIT_CHECK_FAILED },
        text: rep.to_json(),
        notes,
    })
}

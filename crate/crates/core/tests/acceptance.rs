//! Acceptance run: one PASS/FAIL line per criterion. Built with
//! `harness = false` so the lines are always printed; exits nonzero if any
//! criterion fails unexpectedly. A criterion that cannot hold as stated is
//! printed as FAIL with the reason, and its counterexample is checked
//! instead.

use std::f64::consts::PI;
use std::time::Instant;

use mgt_core::block::{BlockOperator, MgtParams, StateTriple};
use mgt_core::commands;
use mgt_core::config::parse_config_str;
use mgt_core::diagnostics::random_params;
use mgt_core::nonlinearity::{
    f_local_lipschitz_probe, growth_check, lemma_lipschitz_probe, smooth_coeffs, FEvaluator, Nonlinearity,
    ScalarFn,
};
use mgt_core::semigroup::{decay_rate, mode_expm, sectoriality_probe, PropagatorSet};
use mgt_core::solver::{augmented_solve, dependence_probe, picard_solve, reference_integrate, SolverConfig};
use mgt_core::spectral::SpectralOperator;
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNIT_CFG: &str = "[params]\nalpha = 1.0\nbeta = 1.0\ngamma = 1.0\ndelta = 1.0\n";

fn dirichlet(n: usize, p: MgtParams) -> BlockOperator {
    BlockOperator::new(SpectralOperator::dirichlet_power(1, n).unwrap(), p).unwrap()
}

fn unit() -> MgtParams {
    MgtParams::new(1.0, 1.0, 1.0, 1.0).unwrap()
}

/// The per-mode block written out directly.
fn block(p: &MgtParams, l: f64) -> Matrix3<f64> {
    Matrix3::new(
        0.0, 1.0, 0.0,
        0.0, 0.0, 1.0,
        -p.gamma * l, -p.beta * l, -(p.alpha + p.delta * l),
    )
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateTriple {
    let mut c = || -> Vec<f64> { (0..n).map(|k| rng.gen_range(-1.0..1.0) / (k + 1) as f64).collect() };
    StateTriple { u: c(), v: c(), w: c() }
}

/// `‖s‖_Y` from the definition: `X^½ × X^½ × X`.
fn y_norm(l: &[f64], s: &StateTriple) -> f64 {
    (0..l.len())
        .map(|k| l[k] * (s.u[k] * s.u[k] + s.v[k] * s.v[k]) + s.w[k] * s.w[k])
        .sum::<f64>()
        .sqrt()
}

/// `G⁻¹s` by an LU solve per mode.
fn lu_inverse(p: &MgtParams, l: &[f64], s: &StateTriple) -> StateTriple {
    StateTriple::from_modes((0..l.len()).map(|k| block(p, l[k]).lu().solve(&s.mode(k)).unwrap()))
}

struct Outcome {
    failed: Vec<usize>,
    known: Vec<usize>,
}

impl Outcome {
    fn record(&mut self, n: usize, name: &str, pass: bool, detail: String) {
        println!("{} criterion {n} ({name}): {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(n);
        }
    }

    /// A criterion that cannot hold as stated; still printed as FAIL. It only
    /// fails the run if the documented counterexample stops reproducing.
    fn known_failure(&mut self, n: usize, name: &str, counterexample_holds: bool, detail: String) {
        println!("FAIL criterion {n} ({name}) [known: the lower bound is not uniform in the number of modes]: {detail}");
        if counterexample_holds {
            self.known.push(n);
        } else {
            println!("  counterexample no longer reproduces");
            self.failed.push(n);
        }
    }
}

fn c1(out: &mut Outcome) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut stable, mut unstable, mut disagree) = (0, 0, 0);
    for _ in 0..240 {
        let n = rng.gen_range(1..=8);
        let op = if rng.gen_bool(0.5) {
            SpectralOperator::dirichlet_power(rng.gen_range(1..=2), n).unwrap()
        } else {
            let mut l: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-1.0..2.0))).collect();
            l.sort_by(f64::total_cmp);
            SpectralOperator::from_sequence(l).unwrap()
        };
        let l = op.lambdas().to_vec();
        let p = random_params(&mut rng, l[0], 0.02);
        let b = BlockOperator::new(op, p).unwrap();
        let cond = p.gamma / (p.alpha + p.delta * l[0]) < p.beta;
        let rh = l.iter().all(|&x| {
            let (a, bb, c) = (p.alpha + p.delta * x, p.beta * x, p.gamma * x);
            a > 0.0 && bb > 0.0 && c > 0.0 && a * bb > c
        });
        let roots = l
            .iter()
            .flat_map(|&x| block(&p, x).complex_eigenvalues().iter().map(|z| z.re).collect::<Vec<_>>())
            .fold(f64::NEG_INFINITY, f64::max)
            < 0.0;
        let fit = decay_rate(&b, 50.0, 2000).unwrap();
        if !(cond == rh && rh == roots && roots == fit.decaying) {
            disagree += 1;
        }
        if cond { stable += 1 } else { unstable += 1 }
    }
    // single modes: fitted rate within 1% of the eigenvalue oracle
    let mut worst: f64 = 0.0;
    for _ in 0..40 {
        let lam = 10f64.powf(rng.gen_range(-1.0..1.0));
        let p = random_params(&mut rng, lam, 0.2);
        let b = BlockOperator::new(SpectralOperator::from_sequence(vec![lam]).unwrap(), p).unwrap();
        let a = block(&p, lam).complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let fit = decay_rate(&b, 50.0, 4000).unwrap();
        worst = worst.max((fit.omega + a).abs() / a.abs());
    }
    let secs = start.elapsed().as_secs_f64();
    out.record(
        1,
        "stability equivalence",
        disagree == 0 && stable > 50 && unstable > 50 && worst <= 0.01 && secs < 60.0,
        format!("240 draws ({stable} stable, {unstable} unstable), {disagree} disagreements; single-mode rate error {worst:.2e}; {secs:.1}s"),
    );
}

fn c2(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let p = MgtParams::new(0.7, 1.3, 0.9, 0.4).unwrap();
    let b = dirichlet(128, p);
    let l = b.lambdas().to_vec();
    let (mut comp, mut vs_lu): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let s = random_state(128, &mut rng);
        let inv = b.apply_generator_inverse(&s).unwrap();
        comp = comp.max(y_norm(&l, &b.apply_generator(&inv).unwrap().sub(&s)) / y_norm(&l, &s));
        vs_lu = vs_lu.max(y_norm(&l, &inv.sub(&lu_inverse(&p, &l, &s))) / y_norm(&l, &inv));
    }
    let u: Vec<f64> = (0..128).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let img = b
        .apply_generator_inverse(&StateTriple::new(u.clone(), vec![0.0; 128], vec![0.0; 128]).unwrap())
        .unwrap();
    let image_exact = (0..128).all(|k| {
        let want = -(p.beta / p.gamma) * u[k];
        (img.u[k] - want).abs() <= f64::EPSILON * want.abs() && img.v[k] == u[k] && img.w[k] == 0.0
    });
    out.record(
        2,
        "explicit inverse",
        comp <= 1e-12 && vs_lu <= 1e-12 && image_exact,
        format!("‖G G⁻¹s − s‖/‖s‖ ≤ {comp:.1e}, vs LU {vs_lu:.1e}, image formula exact: {image_exact}"),
    );
}

fn c3(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let p = MgtParams::new(0.6, 1.0, 0.8, 0.3).unwrap();
    let b = dirichlet(64, p);
    let l = b.lambdas().to_vec();
    let (mut margin, mut closed): (f64, f64) = (f64::NEG_INFINITY, 0.0);
    for _ in 0..100 {
        let w: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w2: f64 = w.iter().map(|x| x * x).sum();
        let w_half: f64 = w.iter().zip(&l).map(|(x, lk)| lk * x * x).sum();
        let form = b
            .accretivity_form(&StateTriple::new(vec![0.0; 64], vec![0.0; 64], w).unwrap())
            .unwrap();
        margin = margin.max((form + p.alpha * w2) / w2);
        // (G(0,0,w), (0,0,w))_Y = −α‖w‖² − δ‖w‖²_½
        let want = -p.alpha * w2 - p.delta * w_half;
        closed = closed.max((form - want).abs() / want.abs());
    }
    out.record(
        3,
        "non-accretivity",
        margin <= 1e-12 && closed <= 1e-12,
        format!("max (form + α‖w‖²)/‖w‖² = {margin:.3e}, closed-form error {closed:.1e}"),
    );
}

fn c4(out: &mut Outcome) {
    let mut worst: f64 = 0.0;
    for p in [unit(), MgtParams::new(0.5, 2.0, 0.7, 0.1).unwrap(), MgtParams::new(2.0, 0.3, 3.0, 1.5).unwrap()] {
        let b = dirichlet(128, p);
        let want = (2.0 * (1.0 + (p.beta / p.gamma).powi(2))).sqrt();
        for size in [2, 3, 8, 32, 128] {
            worst = worst.max((b.noncompactness_witness(size).unwrap() - want).abs());
        }
    }
    out.record(
        4,
        "non-compact resolvent witness",
        worst <= 1e-10,
        format!("max |d_min − √(2(1+(β/γ)²))| = {worst:.1e} over family sizes 2..128"),
    );
}

fn c5(out: &mut Outcome) {
    let p = MgtParams::new(0.8, 1.2, 1.0, 0.5).unwrap();
    let mut rows = Vec::new();
    for n in [64, 256, 1024] {
        let b = dirichlet(n, p);
        let l = b.lambdas().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(105);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..1000 {
            let s = random_state(n, &mut rng);
            let m1 = (0..n)
                .map(|k| l[k] * (s.u[k] * s.u[k] + s.v[k] * s.v[k]) + s.w[k] * s.w[k] / l[k])
                .sum::<f64>()
                .sqrt();
            let r = y_norm(&l, &lu_inverse(&p, &l, &s)) / m1;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let (c, cc) = b.extrapolation_constants();
        rows.push((n, lo, hi, c, cc));
    }
    let inside = rows.iter().all(|&(_, lo, hi, c, cc)| lo >= c * (1.0 - 1e-10) && hi <= cc * (1.0 + 1e-10));
    let ratio: Vec<f64> = rows.iter().map(|r| r.4 / r.3).collect();
    let stable = |v: &[f64]| v.iter().all(|x| x.is_finite() && (x / v[0] - 1.0).abs() <= 0.05);
    let pass = inside && stable(&ratio);
    // The lower bound degrades along (0, b, −(α+δλ)b): ‖G⁻¹s‖_Y sees b only
    // in X while the product norm charges it in X^½, so c·√λ_max → const.
    let upper: Vec<f64> = rows.iter().map(|r| r.4).collect();
    let scaled_lower: Vec<f64> = rows.iter().map(|r| r.3 * (r.0 as f64)).collect();
    let counterexample = inside && stable(&upper) && stable(&scaled_lower);
    let detail = format!(
        "C/c over n = 64, 256, 1024: {ratio:.1?}; upper C: {upper:.4?}; c·√λ_max: {scaled_lower:.4?}; samples inside bounds: {inside}"
    );
    if pass {
        out.record(5, "extrapolation identification", true, detail);
    } else {
        out.known_failure(5, "extrapolation identification", counterexample, detail);
    }
}

fn c6(out: &mut Outcome) {
    let start = Instant::now();
    let p = MgtParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
    let b = dirichlet(256, p);
    let l = b.lambdas().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let raw = random_state(256, &mut rng);
    let s = raw.scaled(1.0 / raw.max_abs());
    let mut routes: f64 = 0.0;
    for a in [0.25, 0.5, 0.75] {
        let fc = b.frac_block_power_fc(a, &s).unwrap().state;
        let q = b.frac_block_power_quad(a, &s).unwrap();
        routes = routes.max(fc.sub(&q).max_abs());
    }
    let pw = |a: f64, x: &StateTriple| b.frac_block_power_fc(a, x).unwrap().state;
    let comp = pw(0.25, &pw(0.5, &s)).sub(&pw(0.75, &s)).max_abs();
    // 𝔸 = −G, so 𝔸⁻¹ = −G⁻¹
    let direct = lu_inverse(&p, &l, &s).scaled(-1.0);
    let one = pw(1.0, &s).sub(&direct).max_abs();
    let half_half = pw(0.5, &pw(0.5, &s)).sub(&direct).max_abs();
    let comp = comp.max(half_half);
    let secs = start.elapsed().as_secs_f64();
    out.record(
        6,
        "fractional powers",
        routes <= 1e-6 && comp <= 1e-8 && one <= 1e-10 && secs < 30.0,
        format!("routes {routes:.1e}, composition {comp:.1e}, a = 1 vs LU inverse {one:.1e}; {secs:.1}s at n = 256"),
    );
}

fn c7(out: &mut Outcome) {
    let p = MgtParams::new(0.9, 1.1, 1.0, 0.6).unwrap();
    let b = dirichlet(64, p);
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let s = random_state(64, &mut rng);
    let identity = PropagatorSet::new(&b, 0.0).unwrap().apply(&s).unwrap() == s;
    let mut law: f64 = 0.0;
    let grid = [0.05, 0.3, 1.0, 2.5];
    for &t in &grid {
        for &u in &grid {
            let lhs = PropagatorSet::new(&b, t + u).unwrap().apply(&s).unwrap();
            let rhs = PropagatorSet::new(&b, t)
                .unwrap()
                .apply(&PropagatorSet::new(&b, u).unwrap().apply(&s).unwrap())
                .unwrap();
            law = law.max(lhs.sub(&rhs).max_abs() / s.max_abs());
        }
    }
    // eigen-decomposition oracle for one low mode
    let m = block(&p, 4.0);
    let eig = m.complex_eigenvalues();
    let mut vand = nalgebra::Matrix3::<num_complex::Complex64>::zeros();
    for (j, z) in eig.iter().enumerate() {
        vand.set_column(j, &Vector3::new(num_complex::Complex64::new(1.0, 0.0), *z, z * z));
    }
    let vinv = vand.try_inverse().unwrap();
    let d = nalgebra::Matrix3::from_diagonal(&eig.map(|z| (z * 1.7).exp()));
    let oracle = (vand * d * vinv).map(|z| z.re);
    let eig_err = (mode_expm(&m, 1.7).unwrap() - oracle).abs().max();

    let radii: Vec<f64> = (-2..=5).flat_map(|e| [1.0, 3.0].map(|c| c * 10f64.powi(e))).collect();
    let angles = [0.0, 0.25 * PI, 0.5 * PI, 0.55 * PI];
    let ms: Vec<Vec<f64>> = [64, 256, 1024]
        .iter()
        .map(|&n| {
            sectoriality_probe(&dirichlet(n, p), &angles, &radii)
                .unwrap()
                .iter()
                .map(|r| r.m_weighted)
                .collect()
        })
        .collect();
    let sector_ok = (0..angles.len()).all(|i| {
        let v: Vec<f64> = ms.iter().map(|m| m[i]).collect();
        v.iter().all(|x| x.is_finite()) && v.iter().all(|x| (x / v[0] - 1.0).abs() <= 0.05)
    });
    out.record(
        7,
        "semigroup laws",
        identity && law <= 1e-8 && eig_err <= 1e-10 && sector_ok,
        format!(
            "e^(G·0) = I exactly: {identity}; law error {law:.1e}; eigen oracle {eig_err:.1e}; M(θ ≤ 0.55π) at n = 64/256/1024: {:.3?}",
            ms.iter().map(|m| m[3]).collect::<Vec<_>>()
        ),
    );
}

fn c8(out: &mut Outcome) {
    let start = Instant::now();
    let b = dirichlet(128, unit());
    let g = |n: &str| ScalarFn::gallery(n, 3.0).unwrap();
    let cases = [
        ("cubic", "zero", "zero"),
        ("cubic", "zero", "saturating"),
        ("pure_power", "sine", "zero"),
        ("sine", "sine", "sine"),
        ("saturating", "cubic", "saturating"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let (mut worst_diff, mut worst_ratio, mut worst_dep): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut ok = true;
    for alpha_space in [0.75, 0.9] {
        let ya = b.y_alpha_evaluator(alpha_space).unwrap();
        for (f1, f2, f3) in cases {
            let nl = Nonlinearity::new(g(f1), g(f2), g(f3), 3.0, 3, 1).unwrap();
            let cfg = SolverConfig { alpha_space, ..SolverConfig::default() };
            let raw = StateTriple::new(smooth_coeffs(128, &mut rng), smooth_coeffs(128, &mut rng), smooth_coeffs(128, &mut rng)).unwrap();
            let s0 = raw.scaled(1.0 / ya.norm(&raw).unwrap());
            let tr = match picard_solve(&b, &nl, &s0, &cfg) {
                Ok(t) => t,
                Err(e) => {
                    println!("  {f1}/{f2}/{f3} α={alpha_space}: {e}");
                    ok = false;
                    continue;
                }
            };
            let ratio = tr.picard[0].contraction_ratio;
            let rf = reference_integrate(&b, &nl, &s0, tr.final_time(), cfg.dt, 1e-9).unwrap();
            let l = b.lambdas();
            let diff = tr
                .states
                .iter()
                .zip(&rf.states)
                .map(|(x, y)| y_norm(l, &x.sub(y)))
                .fold(0.0, f64::max);
            let d = StateTriple::new(smooth_coeffs(128, &mut rng), smooth_coeffs(128, &mut rng), smooth_coeffs(128, &mut rng)).unwrap();
            let s1 = s0.add(&d.scaled(1e-3 / ya.norm(&d).unwrap()));
            let dep = dependence_probe(&b, &nl, &s0, &s1, &cfg).unwrap();
            ok &= ratio < 1.0 && diff <= 1e-4 && dep.bound.is_finite() && rf.times.len() == tr.times.len();
            worst_ratio = worst_ratio.max(ratio);
            worst_diff = worst_diff.max(diff);
            worst_dep = worst_dep.max(dep.bound);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    out.record(
        8,
        "local well-posedness",
        ok && secs < 120.0,
        format!("10 runs at n = 128, r = 1: max contraction {worst_ratio:.3}, max sup-t Y difference vs reference {worst_diff:.1e}, max dependence ratio {worst_dep:.3}; {secs:.1}s"),
    );
}

fn c9(out: &mut Outcome) {
    let g = |n: &str| ScalarFn::gallery(n, 3.0).unwrap();
    let mut finite = true;
    let mut flagged_sub = Vec::new();
    for name in ["pure_power", "cubic", "sine", "saturating", "zero"] {
        let nl = Nonlinearity::new(g(name), g(name), g("saturating"), 3.0, 3, 1).unwrap();
        for which in [1, 2] {
            let c = growth_check(&nl, which, 4001, 100.0).unwrap();
            finite &= c.constant.is_finite();
            if c.flagged {
                flagged_sub.push(name);
            }
        }
    }
    let quintic = Nonlinearity::new(g("quintic"), ScalarFn::zero(), ScalarFn::zero(), 3.0, 3, 1).unwrap();
    let super_flagged = growth_check(&quintic, 1, 4001, 100.0).unwrap().flagged;

    let b = dirichlet(32, unit());
    let mut drift: f64 = 0.0;
    for name in ["cubic", "sine", "saturating", "pure_power"] {
        let nl = Nonlinearity::new(g(name), ScalarFn::zero(), ScalarFn::zero(), 3.0, 3, 1).unwrap();
        let coarse = lemma_lipschitz_probe(&b, &nl, 1, 200, 64, &mut ChaCha8Rng::seed_from_u64(109)).unwrap();
        let fine = lemma_lipschitz_probe(&b, &nl, 1, 200, 128, &mut ChaCha8Rng::seed_from_u64(109)).unwrap();
        finite &= coarse.constant.is_finite() && coarse.constant > 0.0;
        drift = drift.max((fine.constant / coarse.constant - 1.0).abs());
        let fl = f_local_lipschitz_probe(&b, &nl, 1.0, 0.75, 50, &mut ChaCha8Rng::seed_from_u64(110)).unwrap();
        finite &= fl.is_finite();
    }
    out.record(
        9,
        "nonlinearity estimates",
        finite && flagged_sub.is_empty() && super_flagged && drift <= 0.2,
        format!("constants finite: {finite}; subcritical entries flagged: {flagged_sub:?}; quintic flagged: {super_flagged}; lemma constant change under grid doubling {drift:.1e}"),
    );
}

fn c10(out: &mut Outcome) {
    let b = dirichlet(16, unit());
    let p = unit();
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut c = || -> Vec<f64> {
        smooth_coeffs(16, &mut rng)
            .iter()
            .enumerate()
            .map(|(k, x)| 0.5 * x / ((k + 1) as f64).powi(3))
            .collect()
    };
    let s0 = StateTriple::new(c(), c(), c()).unwrap();
    let g = |n: &str| ScalarFn::gallery(n, 3.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut z0_err: f64 = 0.0;
    for nl in [Nonlinearity::zero(), Nonlinearity::new(g("cubic"), ScalarFn::zero(), ScalarFn::zero(), 3.0, 3, 1).unwrap()] {
        let rep = augmented_solve(&b, &nl, &s0, 1.0, 1e-3, 1e-11).unwrap();
        worst = worst.max(rep.fd_residual);
        // z(0) = −αw₀ − A(βv₀ + γu₀ + δw₀) + f(u₀, v₀, w₀)
        let f = FEvaluator::new(&b, &nl).unwrap().third(&s0);
        for k in 0..16 {
            let l = b.lambdas()[k];
            let want = -p.alpha * s0.w[k] - l * (p.beta * s0.v[k] + p.gamma * s0.u[k] + p.delta * s0.w[k]) + f[k];
            z0_err = z0_err.max((rep.z0[k] - want).abs() / want.abs().max(1e-300));
        }
    }
    out.record(
        10,
        "time regularity",
        worst <= 1e-4 && z0_err <= 1e-14,
        format!("sup_t ‖z − ∂ₜw‖ = {worst:.1e}; initial z relative error {z0_err:.1e}"),
    );
}

fn c11(out: &mut Outcome) {
    let cfg = parse_config_str(UNIT_CFG, &[]).unwrap();
    let verify = commands::cmd_verify(&cfg, None).unwrap();
    let small = parse_config_str(UNIT_CFG, &["operator.n_modes=32".into(), "solver.horizon=2.0".into()]).unwrap();
    type Cmd = fn(&mgt_core::config::RunConfig, Option<&std::path::Path>) -> mgt_core::Result<commands::Outcome>;
    let cmds: [(&str, Cmd); 4] = [
        ("spectrum", commands::cmd_spectrum),
        ("semigroup", commands::cmd_semigroup),
        ("simulate", commands::cmd_simulate),
        ("fracpow", commands::cmd_fracpow),
    ];
    let identical = cmds.iter().all(|(_, f)| {
        let a = f(&small, None).unwrap();
        let b = f(&small, None).unwrap();
        a.text.as_bytes() == b.text.as_bytes() && !a.text.is_empty()
    });
    let again = commands::cmd_verify(&cfg, None).unwrap();
    out.record(
        11,
        "determinism",
        verify.code == 0 && identical && verify.text == again.text,
        format!("verify exit {}; CSV outputs byte-identical across runs: {identical}; report reproducible: {}", verify.code, verify.text == again.text),
    );
}

fn main() {
    // `cargo test -- --list` and filters are harness conventions; honour --list
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut out = Outcome { failed: Vec::new(), known: Vec::new() };
    c1(&mut out);
    c2(&mut out);
    c3(&mut out);
    c4(&mut out);
    c5(&mut out);
    c6(&mut out);
    c7(&mut out);
    c8(&mut out);
    c9(&mut out);
    c10(&mut out);
    c11(&mut out);
    if !out.known.is_empty() {
        println!("known failures (documented): {:?}", out.known);
    }
    if !out.failed.is_empty() {
        println!("failed criteria: {:?}", out.failed);
        std::process::exit(1);
    }
}

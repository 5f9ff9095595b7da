//! Dormand–Prince 5(4) with step-size control, for autonomous systems on
//! flat `f64` vectors. Steps are clamped so that every requested output time
//! is hit exactly.

use super::BlowUpReason;

const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus the embedded fourth-order ones
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) struct Dp45Output {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub failure: Option<(f64, BlowUpReason)>,
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `y' = rhs(y)` and records `y` at each of `out_times`
/// (increasing, starting at 0).
pub(crate) fn integrate<F>(mut rhs: F, y0: &[f64], out_times: &[f64], tol: f64) -> Dp45Output
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut out = Dp45Output {
        times: vec![0.0],
        states: vec![y.clone()],
        failure: None,
        accepted: 0,
        rejected: 0,
    };
    rhs(&y, &mut k[0]);
    let mut t = 0.0;
    let mut h = initial_step(&y, &k[0], tol);
    for &target in &out_times[1..] {
        while t < target {
            let last = t + h >= target;
            let step = if last { target - t } else { h };
            if step <= 1e-14 * t.abs().max(1.0) && !last {
                out.failure = Some((t, BlowUpReason::StepUnderflow));
                return out;
            }
            for s in 0..6 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, a) in A[s].iter().enumerate() {
                        acc += a * k[j][i];
                    }
                    ytmp[i] = y[i] + step * acc;
                }
                rhs(&ytmp, &mut k[s + 1]);
                if s == 5 {
                    ynew.copy_from_slice(&ytmp);
                }
            }
            let mut err = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, c) in E.iter().enumerate() {
                    e += c * k[j][i];
                }
                let sc = tol + tol * y[i].abs().max(ynew[i].abs());
                err += (step * e / sc).powi(2);
            }
            let err = (err / n.max(1) as f64).sqrt();
            if !err.is_finite() || ynew.iter().any(|x| !x.is_finite()) {
                if step <= 1e-14 * t.abs().max(1.0) {
                    out.failure = Some((t, BlowUpReason::NonFinite));
                    return out;
                }
                h = 0.1 * step;
                out.rejected += 1;
                continue;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                t = if last { target } else { t + step };
                std::mem::swap(&mut y, &mut ynew);
                k.swap(0, 6);
                out.accepted += 1;
                if !last {
                    h = step * fac;
                }
            } else {
                out.rejected += 1;
                h = step * fac;
                if h <= 1e-14 * t.abs().max(1.0) {
                    out.failure = Some((t, BlowUpReason::StepUnderflow));
                    return out;
                }
            }
        }
        out.times.push(target);
        out.states.push(y.clone());
    }
    out
}

fn initial_step(y: &[f64], f: &[f64], tol: f64) -> f64 {
    let n = y.len().max(1) as f64;
    let d0 = (y.iter().map(|x| (x / (tol + tol * x.abs())).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (y
        .iter()
        .zip(f)
        .map(|(x, g)| (g / (tol + tol * x.abs())).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        (0.01 * d0 / d1).min(1e-2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let out = integrate(|y, dy| dy[0] = -2.0 * y[0], &[1.0], &times, 1e-10);
        assert!(out.failure.is_none());
        for (t, y) in out.times.iter().zip(&out.states) {
            assert!((y[0] - (-2.0 * t).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_oscillator_order() {
        let times = [0.0, 10.0];
        let err = |tol: f64| {
            let out = integrate(|y, dy| { dy[0] = y[1]; dy[1] = -y[0] }, &[1.0, 0.0], &times, tol);
            (out.states[1][0] - 10f64.cos()).abs()
        };
        let (a, b) = (err(1e-6), err(1e-8));
        assert!(b < a && b < 1e-6);
    }

    #[test]
    fn finite_time_blowup_is_flagged() {
        // y' = y², y(0) = 1 blows up at t = 1
        let times = [0.0, 0.5, 2.0];
        let out = integrate(|y, dy| dy[0] = y[0] * y[0], &[1.0], &times, 1e-8);
        let (t, _) = out.failure.expect("blow-up");
        assert!((t - 1.0).abs() < 1e-3, "{t}");
        assert_eq!(out.times, vec![0.0, 0.5]);
    }
}

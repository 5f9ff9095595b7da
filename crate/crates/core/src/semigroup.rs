//! The linear flow `e^{Gt}` mode by mode, decay-rate fits and numerical
//! sectoriality probes.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::block::{shifted, BlockOperator, StateTriple};
use crate::error::{MgtError, Result};
use crate::expm::expm;
use crate::par;

/// `e^{Lt}` for one mode block.
pub fn mode_expm(l: &Matrix3<f64>, t: f64) -> Result<Matrix3<f64>> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(MgtError::Precondition(format!("time {t} must be finite and ≥ 0")));
    }
    if l.iter().any(|x| !x.is_finite()) {
        return Err(MgtError::Precondition("matrix has non-finite entries".into()));
    }
    if t == 0.0 {
        return Ok(Matrix3::identity());
    }
    expm(&(l * t))
}

/// Per-mode propagators `e^{L_k t}` at a fixed time.
#[derive(Clone, Debug)]
pub struct PropagatorSet {
    pub t: f64,
    pub mats: Vec<Matrix3<f64>>,
}

impl PropagatorSet {
    pub fn new(b: &BlockOperator, t: f64) -> Result<Self> {
        let mats = par::map_indices(b.n_modes(), |k| mode_expm(&b.blocks()[k].matrix, t))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { t, mats })
    }

    pub fn apply(&self, s: &StateTriple) -> Result<StateTriple> {
        if s.len() != self.mats.len() {
            return Err(MgtError::LengthMismatch {
                expected: self.mats.len(),
                got: s.len(),
            });
        }
        Ok(crate::block::apply_mats(&self.mats, s))
    }
}

pub fn evolve_linear(b: &BlockOperator, s: &StateTriple, t: f64) -> Result<StateTriple> {
    PropagatorSet::new(b, t)?.apply(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    /// Fitted decay rate: `y_norm ~ e^{−ωt}`.
    pub omega: f64,
    /// Largest real part over all mode roots.
    pub abscissa: f64,
    /// `ω > 0`.
    pub decaying: bool,
    /// Order of the linear recurrence that reproduced the late snapshots.
    pub order: usize,
    /// Relative residual of that recurrence.
    pub residual: f64,
    /// `(t, log y_norm)` over the whole horizon.
    #[serde(skip)]
    pub log_norms: Vec<(f64, f64)>,
}

/// Generic initial datum used by the decay fit: every component of every
/// mode excited, with smooth decay in `k`.
pub fn generic_state(n: usize) -> StateTriple {
    let c: Vec<f64> = (0..n).map(|k| 1.0 / ((k + 1) as f64).powi(2)).collect();
    StateTriple {
        u: c.clone(),
        v: c.iter().map(|x| 0.5 * x).collect(),
        w: c.iter().map(|x| -0.25 * x).collect(),
    }
}

const MAX_ORDER: usize = 8;
/// Relative residual below which a recurrence order is accepted.
const RECURRENCE_TOL: f64 = 1e-7;
/// Start indices used in the recurrence fit.
const FIT_STARTS: usize = 48;

/// Decay rate of `e^{Gt}s₀` measured from snapshots on `[horizon/2, horizon]`.
///
/// Once fast transients have died out the snapshots are a short sum of
/// exponentials, so at a lag `τ` they satisfy a linear recurrence
/// `y_{j+r} + c_{r−1}y_{j+r−1} + … + c_0 y_j = 0` of small order `r`. The
/// smallest order that fits is found by least squares (Prony's method) and
/// `ω = −max ln|z|/τ` over the roots `z` of its characteristic polynomial.
/// Unlike a straight-line fit of `log y_norm`, this is unbiased by slow
/// rotation of a complex pair and by close real rates. The state is
/// renormalized every step so neither growth nor decay leaves
/// floating-point range.
pub fn decay_rate(b: &BlockOperator, horizon: f64, samples: usize) -> Result<DecayFit> {
    if !(horizon > 0.0 && horizon.is_finite()) || samples < 8 {
        return Err(MgtError::Precondition(
            "decay fit needs horizon > 0 and at least 8 samples".into(),
        ));
    }
    let h = horizon / samples as f64;
    let step = PropagatorSet::new(b, h)?;
    let mut s = generic_state(b.n_modes());
    let mut log_scale = 0.0;
    let mut log_norms = Vec::with_capacity(samples + 1);
    let first = samples / 2;
    // Y-weighted normalized snapshots on the fit window, with their log scale
    let mut snaps: Vec<(Vec<f64>, f64)> = Vec::with_capacity(samples - first + 1);
    let sq: Vec<f64> = b.lambdas().iter().map(|l| l.sqrt()).collect();
    for i in 0..=samples {
        if i > 0 {
            s = step.apply(&s)?;
        }
        let t = i as f64 * h;
        let n = b.y_norm(&s)?;
        if !(n > 0.0 && n.is_finite()) {
            return Err(MgtError::Precondition(format!(
                "norm left the representable range at t = {t}"
            )));
        }
        log_scale += n.ln();
        log_norms.push((t, log_scale));
        s = s.scaled(1.0 / n);
        if i >= first {
            let mut y = Vec::with_capacity(3 * s.len());
            y.extend(s.u.iter().zip(&sq).map(|(x, w)| x * w));
            y.extend(s.v.iter().zip(&sq).map(|(x, w)| x * w));
            y.extend(s.w.iter().copied());
            snaps.push((y, log_scale));
        }
    }
    let slope = ls_slope(&log_norms[first..]);
    // lag: long enough to separate rates, short enough for MAX_ORDER lags
    // to fit the window with room for many starts
    let span = snaps.len() - 1;
    let max_lag = (span / (2 * MAX_ORDER)).max(1);
    let m = ((2.0 / slope.abs().max(1e-12)) / h).round().clamp(1.0, max_lag as f64) as usize;
    let tau = m as f64 * h;
    let mut best = (f64::INFINITY, 0usize, slope);
    for r in 1..=MAX_ORDER {
        if r * m > span {
            break;
        }
        let (res, rate) = recurrence_fit(&snaps, m, r);
        if res < best.0 {
            best = (res, r, rate / tau);
        }
        if res < RECURRENCE_TOL {
            break;
        }
    }
    let (residual, order, rate) = best;
    Ok(DecayFit {
        omega: -rate,
        abscissa: b.spectral_abscissa(),
        decaying: -rate > 0.0,
        order,
        residual,
        log_norms,
    })
}

/// Least-squares recurrence of order `r` at lag `m`; returns the relative
/// residual and `max ln|z|` over the characteristic roots.
fn recurrence_fit(snaps: &[(Vec<f64>, f64)], m: usize, r: usize) -> (f64, f64) {
    let last_start = snaps.len() - 1 - r * m;
    let starts = FIT_STARTS.min(last_start + 1);
    let dim = snaps[0].0.len();
    let mut a = DMatrix::<f64>::zeros(starts * dim, r);
    let mut rhs = DVector::<f64>::zeros(starts * dim);
    for q in 0..starts {
        let j = if starts == 1 { 0 } else { q * last_start / (starts - 1) };
        let base = snaps[j].1;
        for k in 0..=r {
            let (y, ls) = &snaps[j + k * m];
            let f = (ls - base).exp();
            for (e, x) in y.iter().enumerate() {
                if k < r {
                    a[(q * dim + e, k)] = f * x;
                } else {
                    rhs[q * dim + e] = -f * x;
                }
            }
        }
    }
    let Ok(c) = a.clone().svd(true, true).solve(&rhs, 1e-14) else {
        return (f64::INFINITY, f64::NAN);
    };
    let res = (&a * &c - &rhs).norm() / rhs.norm();
    // companion matrix of z^r + c_{r−1}z^{r−1} + … + c_0
    let mut comp = DMatrix::<f64>::zeros(r, r);
    for i in 0..r {
        comp[(0, i)] = -c[r - 1 - i];
        if i + 1 < r {
            comp[(i + 1, i)] = 1.0;
        }
    }
    let rate = comp
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm().ln())
        .fold(f64::NEG_INFINITY, f64::max);
    (res, rate)
}

fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mg = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(t, g)| (t - mt) * (g - mg)).sum();
    let sxx: f64 = pts.iter().map(|(t, _)| (t - mt).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorRow {
    pub theta: f64,
    /// `sup |z|·‖(z − L_k)⁻¹‖₂` over radii and modes.
    pub m_raw: f64,
    /// Same with the `Y` weights `diag(λ^½, λ^½, 1)` applied.
    pub m_weighted: f64,
    /// Probe points `(mode, radius)` skipped for being on the spectrum.
    pub skipped: Vec<(usize, f64)>,
}

/// Resolvent bounds for `G` on rays `z = r e^{iθ}`.
///
/// `G = −𝔸` has its spectrum in the left half-plane, so bounded values for
/// `|θ|` up to somewhat beyond `π/2` are the sector condition for `𝔸`
/// (equivalently, `e^{Gt}` is analytic).
pub fn sectoriality_probe(b: &BlockOperator, angles: &[f64], radii: &[f64]) -> Result<Vec<SectorRow>> {
    if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(MgtError::Precondition("probe radii must be positive".into()));
    }
    let spectrum = b.spectrum();
    let rows = angles
        .iter()
        .map(|&theta| {
            let per_mode = par::map_indices(b.n_modes(), |k| {
                let blk = &b.blocks()[k];
                let sq = blk.lambda.sqrt();
                let w = Vector3::new(sq, sq, 1.0);
                let mut raw: f64 = 0.0;
                let mut weighted: f64 = 0.0;
                let mut skipped = Vec::new();
                for &r in radii {
                    let z = Complex64::from_polar(r, theta);
                    let near = spectrum[k]
                        .roots
                        .iter()
                        .any(|mu| (z - mu).norm() <= 1e-8 * r.max(1.0));
                    let inv = if near {
                        None
                    } else {
                        shifted(&blk.matrix, z).try_inverse()
                    };
                    let Some(inv) = inv else {
                        skipped.push((k, r));
                        continue;
                    };
                    raw = raw.max(r * spectral_norm(&inv));
                    let wi = Matrix3::from_fn(|i, j| inv[(i, j)] * (w[i] / w[j]));
                    weighted = weighted.max(r * spectral_norm(&wi));
                }
                (raw, weighted, skipped)
            });
            let mut row = SectorRow {
                theta,
                m_raw: 0.0,
                m_weighted: 0.0,
                skipped: Vec::new(),
            };
            for (raw, weighted, skipped) in per_mode {
                row.m_raw = row.m_raw.max(raw);
                row.m_weighted = row.m_weighted.max(weighted);
                row.skipped.extend(skipped);
            }
            row
        })
        .collect();
    Ok(rows)
}

fn spectral_norm(m: &Matrix3<Complex64>) -> f64 {
    m.singular_values().max()
}

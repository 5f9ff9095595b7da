//! Fractional powers of `𝔸 = −G` by two independent routes.
//!
//! * functional calculus: `𝔸_k^p = V diag(μ_i^p) V⁻¹` with `μ_i = −z_i`
//!   the (principal-branch) eigenvalues and `V` the companion eigenvectors
//!   `(1, z_i, z_i²)`;
//! * quadrature: `𝔸^{−a} = Γ(a)⁻¹ ∫₀^∞ t^{a−1} e^{Lt} dt`, evaluated with
//!   `t = e^τ` and composite Gauss–Legendre panels over matrix exponentials.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::{BlockOperator, ModeBlock, StateTriple};
use crate::error::{MgtError, Result};
use crate::expm::expm;
use crate::par;
use crate::poly::{cubic_roots, gauss_legendre, CubicRoots};

/// Eigenbasis condition number above which the quadrature route is used.
const MAX_EIGEN_CONDITION: f64 = 1e6;
/// Largest `|Im|` (relative to the entry's term magnitudes) discarded silently.
const IMAG_RESIDUE_TOL: f64 = 1e-10;
/// `e^{-TAIL_EXPONENT}` bounds the dropped upper tail of the Γ-integral.
const TAIL_EXPONENT: f64 = 45.0;
const GL_POINTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    FunctionalCalculus,
    Quadrature,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FracPowerOutput {
    pub state: StateTriple,
    /// Modes whose eigenbasis was too ill-conditioned and fell back to
    /// quadrature.
    pub fallback_modes: Vec<usize>,
}

struct ModeEigen {
    mu: [Complex64; 3],
    v: Matrix3<Complex64>,
    v_inv: Matrix3<Complex64>,
}

fn mode_eigen(block: &ModeBlock, roots: &CubicRoots) -> Option<ModeEigen> {
    let mut v = Matrix3::<Complex64>::zeros();
    for (i, z) in roots.roots.iter().enumerate() {
        let col = Vector3::new(Complex64::new(1.0, 0.0), *z, z * z);
        let n = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.set_column(i, &(col / Complex64::new(n, 0.0)));
    }
    let v_inv = v.try_inverse()?;
    let cond = frob(&v) * frob(&v_inv);
    if !(cond.is_finite() && cond <= MAX_EIGEN_CONDITION) {
        return None;
    }
    debug_assert!(block.lambda > 0.0);
    Some(ModeEigen {
        mu: roots.roots.map(|z| -z),
        v,
        v_inv,
    })
}

fn frob(m: &Matrix3<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl ModeEigen {
    /// Real matrix `V diag(μ^p) V⁻¹`.
    fn power(&self, p: f64, mode: usize) -> Result<Matrix3<f64>> {
        let pw = self.mu.map(|m| m.powf(p));
        let mut out = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut mag = 0.0;
                for l in 0..3 {
                    let term = self.v[(i, l)] * pw[l] * self.v_inv[(l, j)];
                    acc += term;
                    mag += term.norm();
                }
                if acc.im.abs() > IMAG_RESIDUE_TOL * mag.max(f64::MIN_POSITIVE) {
                    return Err(MgtError::ComplexResidue {
                        mode,
                        residue: acc.im.abs() / mag,
                    });
                }
                out[(i, j)] = acc.re;
            }
        }
        Ok(out)
    }
}

/// `Γ(a)⁻¹ ∫₀^∞ t^{a−1} e^{Lt} dt` for a stable block, `0 < a < 1`.
fn quad_mode_matrix(l: &Matrix3<f64>, roots: &CubicRoots, a: f64) -> Result<Matrix3<f64>> {
    let omega = -roots.max_real();
    if !(omega > 0.0) {
        return Err(MgtError::Unstable);
    }
    let ga = gamma(a);
    // below t_min, e^{Lt} ≈ I and the integral is t_min^a / a
    let t_min = (1e-14 * a * ga).powf(1.0 / a).min(1e-3 / (1.0 + l.abs().max()));
    let t_max = TAIL_EXPONENT / omega;
    let (x, w) = gauss_legendre(GL_POINTS);
    let mut acc = Matrix3::<f64>::identity() * (t_min.powf(a) / a);
    let rates: Vec<(f64, f64)> = roots.roots.iter().map(|z| (-z.re, z.norm())).collect();
    let mut tau = t_min.ln();
    let tau_end = t_max.ln();
    while tau < tau_end {
        let t = tau.exp();
        // fastest root still alive at this time controls the panel width
        let live = rates
            .iter()
            .filter(|(r, _)| r * t < TAIL_EXPONENT)
            .map(|(_, m)| *m)
            .fold(0.0, f64::max);
        let mut width = 1.0f64;
        if live > 0.0 {
            width = width.min((1.0 + 4.0 / (live * t)).ln());
        }
        let hi = (tau + width).min(tau_end);
        let half = 0.5 * (hi - tau);
        let mid = 0.5 * (hi + tau);
        for (xi, wi) in x.iter().zip(&w) {
            let s = mid + half * xi;
            let ts = s.exp();
            acc += expm(&(l * ts))? * (wi * half * (a * s).exp());
        }
        tau = hi;
    }
    Ok(acc / ga)
}

impl BlockOperator {
    fn require_stable(&self) -> Result<()> {
        if self.stability().stable {
            Ok(())
        } else {
            Err(MgtError::Unstable)
        }
    }

    fn check_exponent(a: f64, lo_open: f64, hi: f64, closed_hi: bool) -> Result<()> {
        let ok = a > lo_open && (a < hi || (closed_hi && a == hi));
        if ok {
            Ok(())
        } else {
            Err(MgtError::Precondition(format!(
                "exponent {a} outside ({lo_open}, {hi}{}",
                if closed_hi { "]" } else { ")" }
            )))
        }
    }

    /// Per-mode matrices of `𝔸^p` for `p ∈ [−1, 1]` by functional calculus,
    /// falling back to quadrature for ill-conditioned eigenbases.
    pub fn power_matrices_fc(&self, p: f64) -> Result<(Vec<Matrix3<f64>>, Vec<usize>)> {
        self.require_stable()?;
        if !(-1.0..=1.0).contains(&p) {
            return Err(MgtError::Precondition(format!("power {p} outside [−1, 1]")));
        }
        let spectrum = self.spectrum();
        let mats: Vec<Result<(Matrix3<f64>, bool)>> = par::map_indices(self.n_modes(), |k| {
            let block = &self.blocks[k];
            if p == 0.0 {
                return Ok((Matrix3::identity(), false));
            }
            match mode_eigen(block, &spectrum[k]) {
                Some(e) => Ok((e.power(p, k)?, false)),
                None => Ok((self.power_by_quadrature(block, &spectrum[k], p)?, true)),
            }
        });
        let mut out = Vec::with_capacity(mats.len());
        let mut fallback = Vec::new();
        for (k, m) in mats.into_iter().enumerate() {
            let (m, fb) = m?;
            if fb {
                fallback.push(k);
            }
            out.push(m);
        }
        Ok((out, fallback))
    }

    fn power_by_quadrature(&self, block: &ModeBlock, roots: &CubicRoots, p: f64) -> Result<Matrix3<f64>> {
        let a_op = -block.matrix;
        if p == 1.0 {
            Ok(a_op)
        } else if p == -1.0 {
            Ok(-block.inverse(&self.params))
        } else if p < 0.0 {
            quad_mode_matrix(&block.matrix, roots, -p)
        } else {
            Ok(a_op * quad_mode_matrix(&block.matrix, roots, 1.0 - p)?)
        }
    }

    /// `𝔸^{−a} s` by functional calculus, `a ∈ (0, 1]`.
    pub fn frac_block_power_fc(&self, a: f64, s: &StateTriple) -> Result<FracPowerOutput> {
        Self::check_exponent(a, 0.0, 1.0, true)?;
        self.check(s)?;
        let (mats, fallback_modes) = self.power_matrices_fc(-a)?;
        Ok(FracPowerOutput {
            state: apply_mats(&mats, s),
            fallback_modes,
        })
    }

    /// Per-mode matrices of `𝔸^{−a}` by quadrature, `a ∈ (0, 1)`.
    pub fn quad_power_matrices(&self, a: f64) -> Result<Vec<Matrix3<f64>>> {
        Self::check_exponent(a, 0.0, 1.0, false)?;
        self.require_stable()?;
        par::map_indices(self.n_modes(), |k| {
            let block = &self.blocks[k];
            let (c2, c1, c0) = self.params.char_poly(block.lambda);
            quad_mode_matrix(&block.matrix, &cubic_roots(c2, c1, c0), a)
        })
        .into_iter()
        .collect()
    }

    /// `𝔸^{−a} s` by quadrature of the Γ-integral, `a ∈ (0, 1)`.
    pub fn frac_block_power_quad(&self, a: f64, s: &StateTriple) -> Result<StateTriple> {
        self.check(s)?;
        let mats = self.quad_power_matrices(a)?;
        Ok(apply_mats(&mats, s))
    }

    /// `‖𝔸^a s‖_{Y₋₁}` for `a ∈ [0, 1]`.
    pub fn y_alpha_norm(&self, a: f64, s: &StateTriple) -> Result<f64> {
        if !(0.0..=1.0).contains(&a) {
            return Err(MgtError::Precondition(format!("exponent {a} outside [0, 1]")));
        }
        self.require_stable()?;
        self.check(s)?;
        if a == 0.0 {
            return self.y_minus1_norm(s);
        }
        if a == 1.0 {
            return self.y_minus1_norm(&self.apply_generator(s)?);
        }
        let (mats, _) = self.power_matrices_fc(a)?;
        self.y_minus1_norm(&apply_mats(&mats, s))
    }

    /// Reusable evaluator for `y_alpha_norm` at a fixed exponent.
    pub fn y_alpha_evaluator(&self, a: f64) -> Result<YAlphaNorm<'_>> {
        if !(0.0..=1.0).contains(&a) {
            return Err(MgtError::Precondition(format!("exponent {a} outside [0, 1]")));
        }
        self.require_stable()?;
        let mats = if a == 0.0 || a == 1.0 {
            None
        } else {
            Some(self.power_matrices_fc(a)?.0)
        };
        Ok(YAlphaNorm { op: self, a, mats })
    }

    /// `‖s‖_{α} / (‖s‖_{Y₋₁}^{1−a} ‖s‖_{1}^{a})`; bounded for the moment
    /// inequality to hold.
    pub fn interpolation_ratio(&self, a: f64, s: &StateTriple) -> Result<f64> {
        let mid = self.y_alpha_norm(a, s)?;
        let lo = self.y_minus1_norm(s)?;
        let hi = self.y_alpha_norm(1.0, s)?;
        Ok(mid / (lo.powf(1.0 - a) * hi.powf(a)))
    }
}

/// Precomputed `y_alpha_norm` at one exponent.
pub struct YAlphaNorm<'a> {
    op: &'a BlockOperator,
    a: f64,
    mats: Option<Vec<Matrix3<f64>>>,
}

impl YAlphaNorm<'_> {
    pub fn exponent(&self) -> f64 {
        self.a
    }

    pub fn norm(&self, s: &StateTriple) -> Result<f64> {
        match &self.mats {
            Some(m) => {
                self.op.check(s)?;
                self.op.y_minus1_norm(&apply_mats(m, s))
            }
            None if self.a == 0.0 => self.op.y_minus1_norm(s),
            None => self.op.y_minus1_norm(&self.op.apply_generator(s)?),
        }
    }
}

pub fn apply_mats(mats: &[Matrix3<f64>], s: &StateTriple) -> StateTriple {
    StateTriple::from_modes(mats.iter().enumerate().map(|(k, m)| m * s.mode(k)))
}

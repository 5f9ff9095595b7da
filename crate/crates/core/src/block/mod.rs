//! First-order reformulation of the third-order equation.
//!
//! With `v = ∂ₜu`, `w = ∂ₜ²u` the linear part acts mode by mode through the
//! companion block
//!
//! ```text
//!       ⎡  0     1        0     ⎤
//! L_k = ⎢  0     0        1     ⎥ ,   λ = λ_k,
//!       ⎣ -γλ  -βλ  -(α + δλ)  ⎦
//! ```
//!
//! so `G(u, v, w) = (v, w, -αw - A(βv + γu + δw))` and the dynamics read
//! `d𝐮/dt = G𝐮 + 𝔽(𝐮)`. Spectral and fractional-power statements are made
//! for the positive operator `𝔸 = -G`.
//!
//! The truncated model makes every state a member of every domain; domain
//! semantics survive only as the choice of norm:
//!
//! | norm              | weights on (u, v, w)   |
//! |-------------------|------------------------|
//! | `y_norm`          | `X^½ × X^½ × X`        |
//! | `y_minus1_norm`   | `X^½ × X^½ × X^{-½}`   |
//! | `y_alpha_norm(a)` | `y_minus1_norm(𝔸^a ·)` |

mod fracpow;
mod state;

pub use fracpow::{apply_mats, FracPowerOutput, Route, YAlphaNorm};
pub use state::{ComplexTriple, StateTriple};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MgtError, Result};
use crate::par;
use crate::poly::{cubic_roots, CubicRoots};
use crate::spectral::SpectralOperator;

/// The positive constants `α, β, γ, δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MgtParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl MgtParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            gamma,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(MgtError::InvalidParams(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Coefficients `(c2, c1, c0)` of `z³ + (α+δλ)z² + βλz + γλ`.
    pub fn char_poly(&self, lambda: f64) -> (f64, f64, f64) {
        (
            self.alpha + self.delta * lambda,
            self.beta * lambda,
            self.gamma * lambda,
        )
    }

    /// `β(α + δλ) − γ`.
    pub fn margin(&self, lambda: f64) -> f64 {
        self.beta * (self.alpha + self.delta * lambda) - self.gamma
    }
}

/// Outcome of the condition `γ/(α + δλ₀) < β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    /// `γ/(α + δλ₀)`
    pub ratio: f64,
    pub beta: f64,
    /// `χ = β(α + δλ₀) − γ`
    pub chi: f64,
}

pub fn stability_condition(params: &MgtParams, lambda0: f64) -> Result<StabilityVerdict> {
    if !(lambda0 > 0.0) {
        return Err(MgtError::Precondition("λ₀ must be positive".into()));
    }
    let ratio = params.gamma / (params.alpha + params.delta * lambda0);
    Ok(StabilityVerdict {
        stable: ratio < params.beta,
        ratio,
        beta: params.beta,
        chi: params.margin(lambda0),
    })
}

/// Routh–Hurwitz test for the mode cubic: all coefficients positive and
/// `c2·c1 > c0`.
pub fn routh_hurwitz(params: &MgtParams, lambda: f64) -> bool {
    let (c2, c1, c0) = params.char_poly(lambda);
    c2 > 0.0 && c1 > 0.0 && c0 > 0.0 && c2 * c1 > c0
}

/// Per-mode companion block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeBlock {
    pub lambda: f64,
    pub matrix: Matrix3<f64>,
}

impl ModeBlock {
    pub fn new(params: &MgtParams, lambda: f64) -> Self {
        let (c2, c1, c0) = params.char_poly(lambda);
        Self {
            lambda,
            matrix: Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -c0, -c1, -c2),
        }
    }

    /// Explicit `L⁻¹`.
    pub fn inverse(&self, params: &MgtParams) -> Matrix3<f64> {
        let MgtParams {
            alpha,
            beta,
            gamma,
            delta,
        } = *params;
        let inv_lam = 1.0 / self.lambda;
        Matrix3::new(
            -beta / gamma,
            -delta / gamma - alpha * inv_lam / gamma,
            -inv_lam / gamma,
            1.0,
            0.0,
            0.0,
            0.0,
            1.0,
            0.0,
        )
    }
}

pub fn mode_block(params: &MgtParams, lambda: f64) -> Result<ModeBlock> {
    if !(lambda > 0.0) {
        return Err(MgtError::Precondition("λ must be positive".into()));
    }
    Ok(ModeBlock::new(params, lambda))
}

/// `G` together with the operator it is built on.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    op: SpectralOperator,
    params: MgtParams,
    blocks: Vec<ModeBlock>,
}

impl BlockOperator {
    pub fn new(op: SpectralOperator, params: MgtParams) -> Result<Self> {
        params.validate()?;
        let blocks = op
            .lambdas()
            .iter()
            .map(|&l| ModeBlock::new(&params, l))
            .collect();
        Ok(Self { op, params, blocks })
    }

    pub fn op(&self) -> &SpectralOperator {
        &self.op
    }

    pub fn params(&self) -> &MgtParams {
        &self.params
    }

    pub fn blocks(&self) -> &[ModeBlock] {
        &self.blocks
    }

    pub fn n_modes(&self) -> usize {
        self.blocks.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        self.op.lambdas()
    }

    pub(crate) fn check(&self, s: &StateTriple) -> Result<()> {
        if s.len() != self.n_modes() {
            return Err(MgtError::LengthMismatch {
                expected: self.n_modes(),
                got: s.len(),
            });
        }
        Ok(())
    }

    /// `G(u, v, w) = (v, w, −αw − λ(βv + γu + δw))`.
    pub fn apply_generator(&self, s: &StateTriple) -> Result<StateTriple> {
        self.check(s)?;
        let MgtParams {
            alpha,
            beta,
            gamma,
            delta,
        } = self.params;
        let w3 = s
            .u
            .iter()
            .zip(&s.v)
            .zip(&s.w)
            .zip(self.lambdas())
            .map(|(((u, v), w), l)| -alpha * w - l * (beta * v + gamma * u + delta * w))
            .collect();
        Ok(StateTriple {
            u: s.v.clone(),
            v: s.w.clone(),
            w: w3,
        })
    }

    /// `G⁻¹` through the explicit block-row formula
    /// `(−γ⁻¹βu − (γ⁻¹δ + γ⁻¹αA⁻¹)v − γ⁻¹A⁻¹w, u, v)`.
    pub fn apply_generator_inverse(&self, s: &StateTriple) -> Result<StateTriple> {
        self.check(s)?;
        let MgtParams {
            alpha,
            beta,
            gamma,
            delta,
        } = self.params;
        let first = s
            .u
            .iter()
            .zip(&s.v)
            .zip(&s.w)
            .zip(self.lambdas())
            .map(|(((u, v), w), l)| {
                let inv = 1.0 / l;
                -(beta * u) / gamma - (delta / gamma + alpha * inv / gamma) * v - inv * w / gamma
            })
            .collect();
        Ok(StateTriple {
            u: first,
            v: s.u.clone(),
            w: s.v.clone(),
        })
    }

    /// Applies a per-mode 3×3 map.
    pub fn map_modes<F>(&self, s: &StateTriple, f: F) -> Result<StateTriple>
    where
        F: Fn(usize, &ModeBlock, Vector3<f64>) -> Result<Vector3<f64>> + Sync + Send,
    {
        self.check(s)?;
        let out: Result<Vec<_>> = par::map_indices(self.n_modes(), |k| {
            f(k, &self.blocks[k], s.mode(k))
        })
        .into_iter()
        .collect();
        Ok(StateTriple::from_modes(out?))
    }

    /// Roots of every mode cubic (eigenvalues of `G`).
    pub fn spectrum(&self) -> Vec<CubicRoots> {
        par::map_indices(self.n_modes(), |k| {
            let (c2, c1, c0) = self.params.char_poly(self.lambdas()[k]);
            cubic_roots(c2, c1, c0)
        })
    }

    /// `max_k max_i Re z_{k,i}`.
    pub fn spectral_abscissa(&self) -> f64 {
        self.spectrum()
            .iter()
            .map(|r| r.max_real())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn stability(&self) -> StabilityVerdict {
        stability_condition(&self.params, self.op.lambda0()).expect("λ₀ > 0 by construction")
    }

    pub fn routh_hurwitz_all(&self) -> bool {
        self.lambdas().iter().all(|&l| routh_hurwitz(&self.params, l))
    }

    /// Index of the mode minimizing `β(α + δλ_k) − γ`.
    pub fn worst_margin_mode(&self) -> usize {
        let mut best = 0;
        for (k, &l) in self.lambdas().iter().enumerate() {
            if self.params.margin(l) < self.params.margin(self.lambdas()[best]) {
                best = k;
            }
        }
        best
    }

    /// Solves `(zI − L_k)x = s_k` for every mode.
    pub fn resolvent_apply(&self, z: Complex64, s: &StateTriple) -> Result<ComplexTriple> {
        self.check(s)?;
        let spectrum = self.spectrum();
        for (k, roots) in spectrum.iter().enumerate() {
            if roots
                .roots
                .iter()
                .any(|r| (z - r).norm() <= 1e-12 * z.norm().max(1.0))
            {
                return Err(MgtError::NearSingular {
                    mode: k,
                    re: z.re,
                    im: z.im,
                });
            }
        }
        let modes: Result<Vec<_>> = par::map_indices(self.n_modes(), |k| {
            let m = shifted(&self.blocks[k].matrix, z);
            solve3(&m, &s.mode(k).map(|x| Complex64::new(x, 0.0))).ok_or(
                MgtError::NearSingular {
                    mode: k,
                    re: z.re,
                    im: z.im,
                },
            )
        })
        .into_iter()
        .collect();
        Ok(ComplexTriple::from_modes(modes?))
    }

    /// Product norm with weights `λ^{2σ_i}` on the three components.
    pub fn product_norm(&self, s: &StateTriple, sigmas: [f64; 3]) -> Result<f64> {
        self.check(s)?;
        Ok(s.components()
            .iter()
            .zip(sigmas)
            .map(|(c, sig)| self.op.frac_norm_sq_unchecked(sig, c))
            .sum::<f64>()
            .sqrt())
    }

    /// `‖(u,v,w)‖_Y² = ‖u‖²_{½} + ‖v‖²_{½} + ‖w‖²_0`.
    pub fn y_norm(&self, s: &StateTriple) -> Result<f64> {
        self.product_norm(s, [0.5, 0.5, 0.0])
    }

    /// Norm of `X^½ × X^½ × X^{-½}`.
    pub fn y_minus1_norm(&self, s: &StateTriple) -> Result<f64> {
        self.product_norm(s, [0.5, 0.5, -0.5])
    }

    pub fn y_inner(&self, a: &StateTriple, b: &StateTriple) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        let op = &self.op;
        Ok(op.inner_sigma(0.5, &a.u, &b.u)?
            + op.inner_sigma(0.5, &a.v, &b.v)?
            + op.inner_sigma(0.0, &a.w, &b.w)?)
    }

    /// `(G s, s)_Y`.
    pub fn accretivity_form(&self, s: &StateTriple) -> Result<f64> {
        let gs = self.apply_generator(s)?;
        self.y_inner(&gs, s)
    }

    /// Minimum pairwise `Y`-distance between `G⁻¹(u_n, 0, 0)` for the
    /// `X^½`-orthonormal family `u_n = λ_n^{−½} e_n`, `n < n_family`.
    pub fn noncompactness_witness(&self, n_family: usize) -> Result<f64> {
        if n_family < 2 || n_family > self.n_modes() {
            return Err(MgtError::Precondition(format!(
                "family size must lie in [2, {}]",
                self.n_modes()
            )));
        }
        let n = self.n_modes();
        let images: Vec<StateTriple> = (0..n_family)
            .map(|j| {
                let mut u = vec![0.0; n];
                u[j] = self.lambdas()[j].powf(-0.5);
                self.apply_generator_inverse(&StateTriple {
                    u,
                    v: vec![0.0; n],
                    w: vec![0.0; n],
                })
            })
            .collect::<Result<_>>()?;
        // sparse supports keep the pairwise sweep O(n_family²)
        let supports: Vec<Vec<usize>> = images
            .iter()
            .map(|s| (0..n).filter(|&k| s.mode(k) != Vector3::zeros()).collect())
            .collect();
        let sq_norms: Vec<f64> = images
            .iter()
            .map(|s| self.y_norm(s).map(|x| x * x))
            .collect::<Result<_>>()?;
        let weights = [0.5, 0.5, 0.0].map(|sig: f64| {
            self.lambdas()
                .iter()
                .map(|l| l.powf(2.0 * sig))
                .collect::<Vec<_>>()
        });
        let mut min_d = f64::INFINITY;
        for i in 0..n_family {
            for j in (i + 1)..n_family {
                let mut ip = 0.0;
                for &k in &supports[i] {
                    if supports[j].binary_search(&k).is_ok() {
                        let (a, b) = (images[i].mode(k), images[j].mode(k));
                        ip += (0..3).map(|c| weights[c][k] * a[c] * b[c]).sum::<f64>();
                    }
                }
                let d2 = sq_norms[i] + sq_norms[j] - 2.0 * ip;
                min_d = min_d.min(d2.max(0.0).sqrt());
            }
        }
        Ok(min_d)
    }

    /// Exact constants `c, C` with
    /// `c·‖s‖_{Y₋₁} ≤ ‖G⁻¹s‖_Y ≤ C·‖s‖_{Y₋₁}`, from per-mode singular values.
    pub fn extrapolation_constants(&self) -> (f64, f64) {
        let svs = par::map_indices(self.n_modes(), |k| {
            let l = self.lambdas()[k];
            let wy = Matrix3::from_diagonal(&Vector3::new(l.sqrt(), l.sqrt(), 1.0));
            let wm_inv = Matrix3::from_diagonal(&Vector3::new(
                1.0 / l.sqrt(),
                1.0 / l.sqrt(),
                l.sqrt(),
            ));
            let m = wy * self.blocks[k].inverse(&self.params) * wm_inv;
            let sv = m.singular_values();
            (sv.min(), sv.max())
        });
        svs.iter().fold((f64::INFINITY, 0.0), |(lo, hi), (a, b)| {
            (lo.min(*a), hi.max(*b))
        })
    }
}

pub(crate) fn shifted(l: &Matrix3<f64>, z: Complex64) -> Matrix3<Complex64> {
    Matrix3::from_fn(|i, j| {
        let d = if i == j { z } else { Complex64::new(0.0, 0.0) };
        d - l[(i, j)]
    })
}

/// Gaussian elimination with partial pivoting on a 3×3 complex system.
pub(crate) fn solve3(m: &Matrix3<Complex64>, b: &Vector3<Complex64>) -> Option<Vector3<Complex64>> {
    let mut a = *m;
    let mut x = *b;
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[(i, col)].norm().partial_cmp(&a[(j, col)].norm()).unwrap())
            .unwrap();
        if a[(piv, col)].norm() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            a.swap_rows(piv, col);
            x.swap_rows(piv, col);
        }
        for row in (col + 1)..3 {
            let f = a[(row, col)] / a[(col, col)];
            for c in col..3 {
                let t = a[(col, c)];
                a[(row, c)] -= f * t;
            }
            let t = x[col];
            x[row] -= f * t;
        }
    }
    for row in (0..3).rev() {
        let mut acc = x[row];
        for c in (row + 1)..3 {
            acc -= a[(row, c)] * x[c];
        }
        x[row] = acc / a[(row, row)];
    }
    Some(x)
}

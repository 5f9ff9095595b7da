//! Diagonal model of the positive elliptic operator `A`.
//!
//! `A` is represented by its nondecreasing eigenvalue sequence `λ_k > 0`.
//! Elements of every fractional power space `X^σ = D(A^σ)` are finite
//! coefficient vectors `φ_k = (φ, e_k)`, and
//!
//! ```text
//! (A^σ φ)_k = λ_k^σ φ_k,      ‖φ‖_σ² = Σ λ_k^{2σ} φ_k².
//! ```
//!
//! The Dirichlet-power model realizes `A = (-∂ₓ²)^m` on `(0, π)` with
//! eigenpairs `λ_k = k^{2m}`, `e_k(x) = √(2/π) sin(kx)` and carries a sine
//! collocation grid so pointwise nonlinearities can be evaluated.

use std::f64::consts::PI;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{MgtError, Result};

/// Finite eigen-coefficient sequence `(φ_k)`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct CoeffVector(Vec<f64>);

impl CoeffVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(MgtError::Precondition(format!(
                "coefficient {i} is not finite"
            )));
        }
        Ok(Self(coeffs))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Unit coefficient at (0-based) mode `k`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut c = vec![0.0; n];
        c[k] = 1.0;
        Self(c)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for CoeffVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<CoeffVector> for Vec<f64> {
    fn from(c: CoeffVector) -> Self {
        c.0
    }
}

/// Sine collocation on the interior points `x_j = jπ/(M+1)`, `j = 1..=M`,
/// for the first `n_modes` basis functions `e_k(x) = √(2/π) sin(kx)`.
///
/// With `M ≥ n_modes` the analysis map is the exact type-I DST projection,
/// so `analyze(synthesize(φ)) = φ` and the grid quadrature of products of
/// band-limited fields is exact up to total frequency `2M + 1`.
#[derive(Clone, Debug)]
pub struct SineGrid {
    n_modes: usize,
    points: Vec<f64>,
    // table[k * M + j] = e_{k+1}(x_j)
    table: Vec<f64>,
}

impl SineGrid {
    pub fn new(n_modes: usize, n_points: usize) -> Result<Self> {
        if n_modes == 0 || n_points < n_modes {
            return Err(MgtError::InvalidOperator(format!(
                "sine grid needs 0 < n_modes ≤ n_points (got {n_modes}, {n_points})"
            )));
        }
        let h = PI / (n_points as f64 + 1.0);
        let points: Vec<f64> = (1..=n_points).map(|j| j as f64 * h).collect();
        let norm = (2.0 / PI).sqrt();
        let mut table = vec![0.0; n_modes * n_points];
        let period = 2 * (n_points + 1);
        for k in 0..n_modes {
            let row = &mut table[k * n_points..(k + 1) * n_points];
            for (j, slot) in row.iter_mut().enumerate() {
                // reduce (k+1)(j+1) mod 2(M+1) so the sine argument stays in [0, 2π)
                let idx = ((k + 1) * (j + 1)) % period;
                *slot = norm * (idx as f64 * h).sin();
            }
        }
        Ok(Self {
            n_modes,
            points,
            table,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Quadrature weight `π/(M+1)`.
    pub fn weight(&self) -> f64 {
        PI / (self.points.len() as f64 + 1.0)
    }

    /// Grid values of `Σ_k φ_k e_k(x_j)`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let m = self.points.len();
        let mut out = vec![0.0; m];
        for (k, &c) in coeffs.iter().enumerate().take(self.n_modes) {
            if c == 0.0 {
                continue;
            }
            let row = &self.table[k * m..(k + 1) * m];
            for (o, &e) in out.iter_mut().zip(row) {
                *o += c * e;
            }
        }
        out
    }

    /// Projection of grid values onto the first `n_modes` basis functions.
    pub fn analyze(&self, values: &[f64]) -> Vec<f64> {
        let m = self.points.len();
        let w = self.weight();
        (0..self.n_modes)
            .map(|k| {
                let row = &self.table[k * m..(k + 1) * m];
                w * row.iter().zip(values).map(|(e, v)| e * v).sum::<f64>()
            })
            .collect()
    }

    /// Discrete `∫ g dx` over `(0, π)`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weight() * values.iter().sum::<f64>()
    }
}

/// The positive operator `A` in diagonal form.
#[derive(Clone, Debug)]
pub struct SpectralOperator {
    lambdas: Vec<f64>,
    order_2m: Option<u32>,
    transform: Option<Arc<SineGrid>>,
}

impl SpectralOperator {
    /// `A = (-∂ₓ²)^m` with Dirichlet conditions on `(0, π)`: `λ_k = k^{2m}`.
    pub fn dirichlet_power(m: u32, n_modes: usize) -> Result<Self> {
        if m == 0 {
            return Err(MgtError::InvalidOperator("m must be at least 1".into()));
        }
        if n_modes == 0 {
            return Err(MgtError::InvalidOperator("n_modes must be at least 1".into()));
        }
        let lambdas = (1..=n_modes)
            .map(|k| (k as f64).powi(2 * m as i32))
            .collect();
        Ok(Self {
            lambdas,
            order_2m: Some(2 * m),
            transform: Some(Arc::new(SineGrid::new(n_modes, n_modes)?)),
        })
    }

    /// Operator with a user-supplied spectrum and no collocation grid.
    pub fn from_sequence(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(MgtError::InvalidOperator("empty spectrum".into()));
        }
        for (k, &l) in lambdas.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(MgtError::InvalidOperator(format!(
                    "eigenvalue {k} = {l} is not positive"
                )));
            }
            if k > 0 && l < lambdas[k - 1] {
                return Err(MgtError::InvalidOperator(format!(
                    "eigenvalues must be nondecreasing: λ[{}] = {} > λ[{k}] = {l}",
                    k - 1,
                    lambdas[k - 1]
                )));
            }
        }
        Ok(Self {
            lambdas,
            order_2m: None,
            transform: None,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn n_modes(&self) -> usize {
        self.lambdas.len()
    }

    /// Smallest eigenvalue `λ₀`.
    pub fn lambda0(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn order_2m(&self) -> Option<u32> {
        self.order_2m
    }

    pub fn transform(&self) -> Option<&SineGrid> {
        self.transform.as_deref()
    }

    pub fn has_collocation(&self) -> bool {
        self.transform.is_some()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len > self.n_modes() {
            return Err(MgtError::LengthMismatch {
                expected: self.n_modes(),
                got: len,
            });
        }
        Ok(())
    }

    /// `(A^σ φ)_k = λ_k^σ φ_k`.
    pub fn apply_frac_power(&self, sigma: f64, phi: &[f64]) -> Result<CoeffVector> {
        self.check_len(phi.len())?;
        Ok(CoeffVector(
            phi.iter()
                .zip(&self.lambdas)
                .map(|(p, l)| l.powf(sigma) * p)
                .collect(),
        ))
    }

    /// `‖φ‖_σ = (Σ λ_k^{2σ} φ_k²)^{1/2}`.
    pub fn frac_norm(&self, sigma: f64, phi: &[f64]) -> Result<f64> {
        self.check_len(phi.len())?;
        Ok(self.frac_norm_sq_unchecked(sigma, phi).sqrt())
    }

    pub(crate) fn frac_norm_sq_unchecked(&self, sigma: f64, phi: &[f64]) -> f64 {
        let two_sigma = 2.0 * sigma;
        phi.iter()
            .zip(&self.lambdas)
            .map(|(p, l)| weight(*l, two_sigma) * p * p)
            .sum()
    }

    /// `(φ, ψ)_σ = Σ λ_k^{2σ} φ_k ψ_k`.
    pub fn inner_sigma(&self, sigma: f64, phi: &[f64], psi: &[f64]) -> Result<f64> {
        if phi.len() != psi.len() {
            return Err(MgtError::LengthMismatch {
                expected: phi.len(),
                got: psi.len(),
            });
        }
        self.check_len(phi.len())?;
        let two_sigma = 2.0 * sigma;
        Ok(phi
            .iter()
            .zip(psi)
            .zip(&self.lambdas)
            .map(|((p, q), l)| weight(*l, two_sigma) * p * q)
            .sum())
    }

    /// Both sides of `‖φ‖_{σ₂} ≤ λ₀^{σ₂−σ₁} ‖φ‖_{σ₁}` for `σ₁ ≥ σ₂`.
    pub fn embedding_bound(&self, sigma1: f64, sigma2: f64, phi: &[f64]) -> Result<(f64, f64)> {
        if sigma1 < sigma2 {
            return Err(MgtError::Precondition(format!(
                "embedding needs σ₁ ≥ σ₂ (got {sigma1} < {sigma2})"
            )));
        }
        let lhs = self.frac_norm(sigma2, phi)?;
        let rhs = self.lambda0().powf(sigma2 - sigma1) * self.frac_norm(sigma1, phi)?;
        debug_assert!(lhs <= rhs * (1.0 + 1e-12) + f64::MIN_POSITIVE);
        Ok((lhs, rhs))
    }
}

#[inline]
fn weight(lambda: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else if exponent == 1.0 {
        lambda
    } else if exponent == -1.0 {
        1.0 / lambda
    } else {
        lambda.powf(exponent)
    }
}

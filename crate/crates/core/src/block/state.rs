use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MgtError, Result};

/// A state `(u, v, w) = (u, ∂ₜu, ∂ₜ²u)` as three coefficient vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateTriple {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

impl StateTriple {
    pub fn new(u: Vec<f64>, v: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if v.len() != u.len() || w.len() != u.len() {
            return Err(MgtError::LengthMismatch {
                expected: u.len(),
                got: if v.len() != u.len() { v.len() } else { w.len() },
            });
        }
        let s = Self { u, v, w };
        if !s.is_finite() {
            return Err(MgtError::Precondition("state has non-finite entries".into()));
        }
        Ok(s)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.iter().all(|x| x.is_finite()))
    }

    pub fn components(&self) -> [&[f64]; 3] {
        [&self.u, &self.v, &self.w]
    }

    pub fn mode(&self, k: usize) -> Vector3<f64> {
        Vector3::new(self.u[k], self.v[k], self.w[k])
    }

    pub fn set_mode(&mut self, k: usize, x: &Vector3<f64>) {
        self.u[k] = x[0];
        self.v[k] = x[1];
        self.w[k] = x[2];
    }

    pub fn from_modes(modes: impl IntoIterator<Item = Vector3<f64>>) -> Self {
        let mut s = Self::zeros(0);
        for x in modes {
            s.u.push(x[0]);
            s.v.push(x[1]);
            s.w.push(x[2]);
        }
        s
    }

    pub fn modes(&self) -> impl Iterator<Item = Vector3<f64>> + '_ {
        (0..self.len()).map(|k| self.mode(k))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = |x: &Vec<f64>| x.iter().map(|a| a * c).collect();
        Self {
            u: f(&self.u),
            v: f(&self.v),
            w: f(&self.w),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Self {
        let f = |x: &Vec<f64>, y: &Vec<f64>| x.iter().zip(y).map(|(a, b)| a + c * b).collect();
        Self {
            u: f(&self.u, &other.u),
            v: f(&self.v, &other.v),
            w: f(&self.w, &other.w),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn max_abs(&self) -> f64 {
        self.components()
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Complex-valued state, produced by resolvent evaluations.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTriple {
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
}

impl ComplexTriple {
    pub fn from_modes(modes: impl IntoIterator<Item = Vector3<Complex64>>) -> Self {
        let (mut u, mut v, mut w) = (Vec::new(), Vec::new(), Vec::new());
        for x in modes {
            u.push(x[0]);
            v.push(x[1]);
            w.push(x[2]);
        }
        Self { u, v, w }
    }

    pub fn mode(&self, k: usize) -> Vector3<Complex64> {
        Vector3::new(self.u[k], self.v[k], self.w[k])
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn re(&self) -> StateTriple {
        let f = |x: &Vec<Complex64>| x.iter().map(|z| z.re).collect();
        StateTriple {
            u: f(&self.u),
            v: f(&self.v),
            w: f(&self.w),
        }
    }

    pub fn max_im(&self) -> f64 {
        [&self.u, &self.v, &self.w]
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.im.abs()))
    }
}

//! Cubic roots and Gauss–Legendre rules.

use nalgebra::Matrix3;
use num_complex::Complex64;

/// Roots of the monic cubic `z³ + c2·z² + c1·z + c0`, sorted by descending
/// real part (ties broken by descending imaginary part).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicRoots {
    pub roots: [Complex64; 3],
    /// Smallest pairwise root distance divided by `max(1, max |z|)`.
    pub separation: f64,
}

impl CubicRoots {
    /// Condition estimate for the eigenbasis: `1 / separation`.
    pub fn condition(&self) -> f64 {
        1.0 / self.separation.max(f64::MIN_POSITIVE)
    }

    pub fn max_real(&self) -> f64 {
        self.roots[0].re
    }

    pub fn max_abs(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn eval_cubic(c2: f64, c1: f64, c0: f64, z: Complex64) -> Complex64 {
    ((z + c2) * z + c1) * z + c0
}

/// Roots through the eigenvalues of the companion matrix, each polished by
/// Newton steps that are kept only while the residual decreases.
pub fn cubic_roots(c2: f64, c1: f64, c0: f64) -> CubicRoots {
    let companion = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -c0, -c1, -c2);
    let eig = companion.complex_eigenvalues();
    let mut roots = [eig[0], eig[1], eig[2]];
    for z in roots.iter_mut() {
        *z = polish(c2, c1, c0, *z);
    }
    // restore exact conjugate symmetry / realness after polishing
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut real_idx: Vec<usize> = Vec::new();
    for (i, z) in roots.iter_mut().enumerate() {
        if z.im.abs() <= 1e-14 * scale {
            z.im = 0.0;
            real_idx.push(i);
        }
    }
    if real_idx.len() == 1 {
        let others: Vec<usize> = (0..3).filter(|i| *i != real_idx[0]).collect();
        let (a, b) = (roots[others[0]], roots[others[1]]);
        let re = 0.5 * (a.re + b.re);
        let im = 0.5 * (a.im.abs() + b.im.abs());
        roots[others[0]] = Complex64::new(re, im);
        roots[others[1]] = Complex64::new(re, -im);
    }
    roots.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut sep = f64::INFINITY;
    for i in 0..3 {
        for j in (i + 1)..3 {
            sep = sep.min((roots[i] - roots[j]).norm());
        }
    }
    CubicRoots {
        roots,
        separation: sep / scale,
    }
}

fn polish(c2: f64, c1: f64, c0: f64, mut z: Complex64) -> Complex64 {
    let mut res = eval_cubic(c2, c1, c0, z).norm();
    for _ in 0..4 {
        let dp = (z * 3.0 + 2.0 * c2) * z + c1;
        if dp.norm() == 0.0 {
            break;
        }
        let cand = z - eval_cubic(c2, c1, c0, z) / dp;
        let cand_res = eval_cubic(c2, c1, c0, cand).norm();
        if cand_res < res {
            z = cand;
            res = cand_res;
        } else {
            break;
        }
    }
    z
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

// P_n(x) and P_n'(x) by the three-term recurrence
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form Cardano roots, independent of the companion route.
    fn cardano(c2: f64, c1: f64, c0: f64) -> [Complex64; 3] {
        let shift = c2 / 3.0;
        let p = c1 - c2 * c2 / 3.0;
        let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;
        let disc = Complex64::new(q * q / 4.0 + p.powi(3) / 27.0, 0.0).sqrt();
        let mut u = (Complex64::new(-q / 2.0, 0.0) + disc).cbrt();
        if u.norm() < 1e-300 {
            u = (Complex64::new(-q / 2.0, 0.0) - disc).cbrt();
        }
        let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let uk = u * omega.powu(k as u32);
            let vk = if uk.norm() < 1e-300 {
                Complex64::new(0.0, 0.0)
            } else {
                -p / (3.0 * uk)
            };
            *slot = uk + vk - shift;
        }
        out
    }

    fn matches(a: &[Complex64; 3], b: &[Complex64; 3], tol: f64) -> bool {
        a.iter()
            .all(|x| b.iter().any(|y| (x - y).norm() <= tol * x.norm().max(1.0)))
    }

    #[test]
    fn known_cubic() {
        // (z+1)(z+2)(z+3) = z³ + 6z² + 11z + 6
        let r = cubic_roots(6.0, 11.0, 6.0);
        let expect = [-1.0, -2.0, -3.0];
        for (z, e) in r.roots.iter().zip(expect) {
            assert!((z.re - e).abs() < 1e-13 && z.im == 0.0);
        }
    }

    #[test]
    fn agrees_with_cardano_and_vieta() {
        let mut seed = 17u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 10.0
        };
        for _ in 0..200 {
            let (c2, c1, c0) = (next(), next(), next());
            let r = cubic_roots(c2, c1, c0);
            assert!(matches(&r.roots, &cardano(c2, c1, c0), 1e-8));
            let sum: Complex64 = r.roots.iter().sum();
            let prod: Complex64 = r.roots.iter().product();
            let pair = r.roots[0] * r.roots[1] + r.roots[0] * r.roots[2] + r.roots[1] * r.roots[2];
            assert!((sum + c2).norm() < 1e-8 * c2.max(1.0));
            assert!((pair - c1).norm() < 1e-8 * c1.max(1.0));
            assert!((prod + c0).norm() < 1e-8 * c0.max(1.0));
            for z in r.roots {
                let res = eval_cubic(c2, c1, c0, z).norm();
                assert!(res <= 1e-9 * z.norm().powi(3).max(1.0));
            }
        }
    }

    #[test]
    fn near_triple_root_reports_poor_separation() {
        // (z+1)³ perturbed
        let r = cubic_roots(3.0, 3.0, 1.0 + 1e-12);
        assert!(r.condition() > 1e3);
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in [1, 2, 5, 16] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }
}

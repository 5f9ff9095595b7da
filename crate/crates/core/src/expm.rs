//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (orders 3, 5, 7, 9, 13), following Higham's 2005 variant.
//!
//! Works on any fixed-size `SMatrix<f64, D, D>`; the block propagators are
//! 3×3 and the φ-function augmentations used by the mild solver are 9×9.

use nalgebra::SMatrix;

use crate::error::{MgtError, Result};

const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
    (13, 5.371_920_351_148_152),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn norm1<const D: usize>(a: &SMatrix<f64, D, D>) -> f64 {
    (0..D)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `e^A`. Errors when the result overflows.
pub fn expm<const D: usize>(a: &SMatrix<f64, D, D>) -> Result<SMatrix<f64, D, D>> {
    let norm = norm1(a);
    if !norm.is_finite() {
        return Err(MgtError::ExpmOverflow {
            scale: norm,
            suggested_step: 0.0,
        });
    }
    for &(order, theta) in &THETA[..4] {
        if norm <= theta {
            let (u, v) = match order {
                3 => pade_low(a, &B3),
                5 => pade_low(a, &B5),
                7 => pade_low(a, &B7),
                _ => pade_low(a, &B9),
            };
            return solve_pade(&u, &v, 0, norm);
        }
    }
    let theta13 = THETA[4].1;
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * 2f64.powi(-s);
    let (u, v) = pade13(&scaled);
    solve_pade(&u, &v, s, norm)
}

fn pade_low<const D: usize>(
    a: &SMatrix<f64, D, D>,
    b: &[f64],
) -> (SMatrix<f64, D, D>, SMatrix<f64, D, D>) {
    let ident = SMatrix::<f64, D, D>::identity();
    let a2 = a * a;
    // even powers A^0, A^2, A^4, ...
    let mut pows = vec![ident, a2];
    while 2 * pows.len() < b.len() {
        let next = pows.last().unwrap() * a2;
        pows.push(next);
    }
    let mut u_inner = SMatrix::<f64, D, D>::zeros();
    let mut v = SMatrix::<f64, D, D>::zeros();
    for (i, p) in pows.iter().enumerate() {
        if 2 * i + 1 < b.len() {
            u_inner += p * b[2 * i + 1];
        }
        if 2 * i < b.len() {
            v += p * b[2 * i];
        }
    }
    (a * u_inner, v)
}

fn pade13<const D: usize>(a: &SMatrix<f64, D, D>) -> (SMatrix<f64, D, D>, SMatrix<f64, D, D>) {
    let ident = SMatrix::<f64, D, D>::identity();
    let b = &B13;
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let u_hi = a6 * (a6 * b[13] + a4 * b[11] + a2 * b[9]);
    let u = a * (u_hi + a6 * b[7] + a4 * b[5] + a2 * b[3] + ident * b[1]);
    let v_hi = a6 * (a6 * b[12] + a4 * b[10] + a2 * b[8]);
    let v = v_hi + a6 * b[6] + a4 * b[4] + a2 * b[2] + ident * b[0];
    (u, v)
}

fn solve_pade<const D: usize>(
    u: &SMatrix<f64, D, D>,
    v: &SMatrix<f64, D, D>,
    squarings: i32,
    norm: f64,
) -> Result<SMatrix<f64, D, D>> {
    let p = v + u;
    let q = v - u;
    let mut r = solve(q, p).ok_or(MgtError::ExpmOverflow {
        scale: norm,
        suggested_step: 0.0,
    })?;
    for _ in 0..squarings {
        r = r * r;
    }
    if r.iter().all(|x| x.is_finite()) {
        Ok(r)
    } else {
        // e^{‖A‖} must stay below f64::MAX ≈ e^{709}
        Err(MgtError::ExpmOverflow {
            scale: norm,
            suggested_step: 700.0 / norm.max(f64::MIN_POSITIVE),
        })
    }
}

/// `Q⁻¹P` by Gaussian elimination with partial pivoting.
fn solve<const D: usize>(
    mut q: SMatrix<f64, D, D>,
    mut p: SMatrix<f64, D, D>,
) -> Option<SMatrix<f64, D, D>> {
    for col in 0..D {
        let piv = (col..D).max_by(|&i, &j| q[(i, col)].abs().total_cmp(&q[(j, col)].abs()))?;
        if q[(piv, col)] == 0.0 || !q[(piv, col)].is_finite() {
            return None;
        }
        q.swap_rows(piv, col);
        p.swap_rows(piv, col);
        for row in (col + 1)..D {
            let f = q[(row, col)] / q[(col, col)];
            if f == 0.0 {
                continue;
            }
            for c in col..D {
                q[(row, c)] -= f * q[(col, c)];
            }
            for c in 0..D {
                p[(row, c)] -= f * p[(col, c)];
            }
        }
    }
    for row in (0..D).rev() {
        for c in 0..D {
            let mut acc = p[(row, c)];
            for k in (row + 1)..D {
                acc -= q[(row, k)] * p[(k, c)];
            }
            p[(row, c)] = acc / q[(row, row)];
        }
    }
    Some(p)
}

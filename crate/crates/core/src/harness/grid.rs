//! Deterministic sample points in moduli boxes.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_pcg::Lcg64Xsh32;
use serde::{Deserialize, Serialize};

use crate::period::PeriodMatrix;

/// Axis-aligned box in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl ComplexBox {
    pub const fn square(lo: f64, hi: f64) -> Self {
        ComplexBox { re: (lo, hi), im: (lo, hi) }
    }

    fn at(&self, x: f64, y: f64) -> Complex64 {
        Complex64::new(
            self.re.0 + x * (self.re.1 - self.re.0),
            self.im.0 + y * (self.im.1 - self.im.0),
        )
    }
}

/// Seeded sampler; a 64-bit LCG with permuted 32-bit output.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: Lcg64Xsh32,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: Lcg64Xsh32::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    pub fn in_box(&mut self, b: &ComplexBox) -> Complex64 {
        let x = self.rng.random::<f64>();
        let y = self.rng.random::<f64>();
        b.at(x, y)
    }

    pub fn vector(&mut self, g: usize, b: &ComplexBox) -> Vec<Complex64> {
        (0..g).map(|_| self.in_box(b)).collect()
    }

    /// Random period matrix: `Re Ω` entries in `[−½, ½]`,
    /// `Im Ω = AAᵀ/g + ½ I` with `A` uniform in `[−1, 1]`.
    pub fn period_matrix(&mut self, g: usize) -> PeriodMatrix {
        let a = DMatrix::from_fn(g, g, |_, _| self.uniform(-1.0, 1.0));
        let y = &a * a.transpose() / g as f64 + DMatrix::identity(g, g) * 0.5;
        let mut x = DMatrix::zeros(g, g);
        for i in 0..g {
            for j in i..g {
                let v = self.uniform(-0.5, 0.5);
                x[(i, j)] = v;
                x[(j, i)] = v;
            }
        }
        let rows: Vec<Vec<Complex64>> = (0..g)
            .map(|i| (0..g).map(|j| Complex64::new(x[(i, j)], y[(i, j)])).collect())
            .collect();
        PeriodMatrix::from_rows(&rows).expect("positive-definite by construction")
    }
}

/// `k × k` cell-centred grid filling the box.
pub fn regular_grid(b: &ComplexBox, k: usize) -> Vec<Complex64> {
    if k == 1 {
        return vec![b.at(0.5, 0.5)];
    }
    let step = 1.0 / (k - 1) as f64;
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            out.push(b.at(i as f64 * step, j as f64 * step));
        }
    }
    out
}

/// `n` points: a regular grid when `n` is a perfect square, else seeded samples.
pub fn grid_points(n: usize, b: &ComplexBox, sampler: &mut Sampler) -> Vec<Complex64> {
    let k = (n as f64).sqrt().round() as usize;
    if k * k == n {
        regular_grid(b, k)
    } else {
        (0..n).map(|_| sampler.in_box(b)).collect()
    }
}

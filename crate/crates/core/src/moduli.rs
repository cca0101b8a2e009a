//! Coordinates on the moduli of rank-one local systems.
//!
//! A deRham point `(t, s)` is the flat connection `d + Σ t_i ω_i + s_i ω̄_i`.
//! Its holonomy is the Betti character with exponents `(a, b)`,
//! `χ(α_j) = e^{2πi a_j}`, `χ(β_j) = e^{2πi b_j}`; the unitary locus is
//! `t = −s̄`, and the Jacobian coordinate `u` records the underlying
//! holomorphic line bundle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{FormExpr, Gen};
use crate::period::{real_mat_vec, PeriodMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuliError {
    #[error("genus mismatch: period matrix has genus {expected}, point has {got}")]
    GenusMismatch { expected: usize, got: usize },
    #[error("t and s have different lengths ({t} vs {s})")]
    RaggedPoint { t: usize, s: usize },
    #[error("non-finite coordinate")]
    NonFinite,
}

/// Point `(t, s)` of the deRham moduli space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DeRhamRepr", into = "DeRhamRepr")]
pub struct DeRhamPoint {
    pub t: Vec<Complex64>,
    pub s: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct DeRhamRepr {
    genus: usize,
    t: Vec<Complex64>,
    s: Vec<Complex64>,
}

impl TryFrom<DeRhamRepr> for DeRhamPoint {
    type Error = ModuliError;
    fn try_from(r: DeRhamRepr) -> Result<Self, ModuliError> {
        let p = DeRhamPoint::new(r.t, r.s)?;
        if p.genus() != r.genus {
            return Err(ModuliError::GenusMismatch {
                expected: r.genus,
                got: p.genus(),
            });
        }
        Ok(p)
    }
}

impl From<DeRhamPoint> for DeRhamRepr {
    fn from(p: DeRhamPoint) -> Self {
        DeRhamRepr {
            genus: p.genus(),
            t: p.t,
            s: p.s,
        }
    }
}

impl DeRhamPoint {
    pub fn new(t: Vec<Complex64>, s: Vec<Complex64>) -> Result<Self, ModuliError> {
        if t.len() != s.len() {
            return Err(ModuliError::RaggedPoint {
                t: t.len(),
                s: s.len(),
            });
        }
        if t.iter().chain(&s).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(ModuliError::NonFinite);
        }
        Ok(DeRhamPoint { t, s })
    }

    pub fn zero(g: usize) -> Self {
        DeRhamPoint {
            t: vec![Complex64::new(0.0, 0.0); g],
            s: vec![Complex64::new(0.0, 0.0); g],
        }
    }

    /// The unitary point `t = −s̄` over `s`.
    pub fn unitary(s: Vec<Complex64>) -> Self {
        DeRhamPoint {
            t: s.iter().map(|z| -z.conj()).collect(),
            s,
        }
    }

    pub fn genus(&self) -> usize {
        self.t.len()
    }

    /// `max |t + s̄|`; zero exactly on the unitary locus.
    pub fn unitary_defect(&self) -> f64 {
        self.t
            .iter()
            .zip(&self.s)
            .map(|(t, s)| (t + s.conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &DeRhamPoint) -> DeRhamPoint {
        DeRhamPoint {
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
            s: self.s.iter().zip(&other.s).map(|(a, b)| a + b).collect(),
        }
    }

    fn check(&self, omega: &PeriodMatrix) -> Result<(), ModuliError> {
        if self.genus() != omega.genus() {
            return Err(ModuliError::GenusMismatch {
                expected: omega.genus(),
                got: self.genus(),
            });
        }
        Ok(())
    }
}

/// Character exponents `(a, b)`. Identities between characters hold modulo `Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiCharacter {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    /// Whether every real part has been reduced into `[0, 1)`.
    pub normalized: bool,
}

impl BettiCharacter {
    pub fn genus(&self) -> usize {
        self.a.len()
    }

    /// Canonical representative with real parts in `[0, 1)`.
    pub fn normalize(&self) -> BettiCharacter {
        let red = |z: &Complex64| Complex64::new(z.re - z.re.floor(), z.im);
        BettiCharacter {
            a: self.a.iter().map(red).collect(),
            b: self.b.iter().map(red).collect(),
            normalized: true,
        }
    }

    /// Largest distance between exponents modulo `Z`.
    pub fn distance_mod_z(&self, other: &BettiCharacter) -> f64 {
        let d = |x: Complex64, y: Complex64| {
            let w = x - y;
            let re = w.re - w.re.round();
            Complex64::new(re, w.im).norm()
        };
        self.a
            .iter()
            .zip(&other.a)
            .chain(self.b.iter().zip(&other.b))
            .map(|(x, y)| d(*x, *y))
            .fold(0.0, f64::max)
    }

    /// Largest `|Im|` over all exponents; zero for unitary characters.
    pub fn max_imag(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    /// `(χ(α_j), χ(β_j))`.
    pub fn values(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let e = |z: &Complex64| (Complex64::new(0.0, 2.0 * PI) * z).exp();
        (self.a.iter().map(e).collect(), self.b.iter().map(e).collect())
    }
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// Holonomy exponents of `d + Σ t_i ω_i + s_i ω̄_i`:
/// `2πi a_j = t_j + s_j`, `2πi b_j = Σ_k t_k Ω_kj + s_k Ω̄_kj`.
pub fn betti_of_de_rham(p: &DeRhamPoint, omega: &PeriodMatrix) -> Result<BettiCharacter, ModuliError> {
    p.check(omega)?;
    let g = p.genus();
    let a = (0..g).map(|j| (p.t[j] + p.s[j]) / two_pi_i()).collect();
    let b = (0..g)
        .map(|j| {
            (0..g)
                .map(|k| p.t[k] * omega.get(k, j) + p.s[k] * omega.get(k, j).conj())
                .sum::<Complex64>()
                / two_pi_i()
        })
        .collect();
    Ok(BettiCharacter {
        a,
        b,
        normalized: false,
    })
}

/// Character of the Chern connection of the bundle underlying `p`:
/// `2πi a_j = s_j − s̄_j`, `2πi b_j = Σ_k s_k Ω̄_kj − s̄_k Ω_kj`.
pub fn unitary_betti(p: &DeRhamPoint, omega: &PeriodMatrix) -> Result<BettiCharacter, ModuliError> {
    p.check(omega)?;
    let g = p.genus();
    // The expressions are real by construction; drop rounding noise.
    let a = (0..g)
        .map(|j| Complex64::new(((p.s[j] - p.s[j].conj()) / two_pi_i()).re, 0.0))
        .collect();
    let b = (0..g)
        .map(|j| {
            let v: Complex64 = (0..g)
                .map(|k| p.s[k] * omega.get(k, j).conj() - p.s[k].conj() * omega.get(k, j))
                .sum();
            Complex64::new((v / two_pi_i()).re, 0.0)
        })
        .collect();
    Ok(BettiCharacter {
        a,
        b,
        normalized: false,
    })
}

/// Point of the Jacobian `Cᵍ / (Zᵍ + ΩZᵍ)`.
///
/// `lift` is reduced so that `lift = x + Ωy` with `x, y ∈ [0, 1)ᵍ`;
/// the original value is `lift + m + Ωn`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianPoint {
    pub lift: Vec<Complex64>,
    pub m: Vec<i64>,
    pub n: Vec<i64>,
}

impl JacobianPoint {
    /// Reduces `u` into the fundamental domain.
    pub fn reduce(u: &[Complex64], omega: &PeriodMatrix) -> JacobianPoint {
        let (x, y) = lattice_coordinates(u, omega);
        let m: Vec<i64> = x.iter().map(|v| v.floor() as i64).collect();
        let n: Vec<i64> = y.iter().map(|v| v.floor() as i64).collect();
        let lift = shift(u, omega, &m, &n, -1);
        JacobianPoint { lift, m, n }
    }

    /// The unreduced value `lift + m + Ωn`.
    pub fn value(&self, omega: &PeriodMatrix) -> Vec<Complex64> {
        shift(&self.lift, omega, &self.m, &self.n, 1)
    }

    pub fn genus(&self) -> usize {
        self.lift.len()
    }
}

fn shift(u: &[Complex64], omega: &PeriodMatrix, m: &[i64], n: &[i64], sign: i64) -> Vec<Complex64> {
    let g = u.len();
    (0..g)
        .map(|i| {
            let lat: Complex64 = m[i] as f64
                + (0..g)
                    .map(|j| omega.get(i, j) * n[j] as f64)
                    .sum::<Complex64>();
            u[i] + lat * sign as f64
        })
        .collect()
}

/// Real `(x, y)` with `u = x + Ωy`.
pub fn lattice_coordinates(u: &[Complex64], omega: &PeriodMatrix) -> (Vec<f64>, Vec<f64>) {
    let g = u.len();
    let yinv = omega.imag_inverse();
    let y: Vec<f64> = (0..g)
        .map(|i| (0..g).map(|j| yinv[(i, j)] * u[j].im).sum())
        .collect();
    let real = omega.real();
    let x: Vec<f64> = (0..g)
        .map(|i| u[i].re - (0..g).map(|j| real[(i, j)] * y[j]).sum::<f64>())
        .collect();
    (x, y)
}

/// Distance from `d` to the nearest lattice point, measured on the
/// representative with lattice coordinates in `[−½, ½)`.
pub fn lattice_residual(d: &[Complex64], omega: &PeriodMatrix) -> f64 {
    let (x, y) = lattice_coordinates(d, omega);
    let xr: Vec<Complex64> = x.iter().map(|v| Complex64::new(v - v.round(), 0.0)).collect();
    let yr: Vec<f64> = y.iter().map(|v| v - v.round()).collect();
    let g = d.len();
    (0..g)
        .map(|i| {
            (xr[i] + (0..g).map(|j| omega.get(i, j) * yr[j]).sum::<Complex64>()).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// `u_j = −(1/π) Σ_k s_k (Im Ω)_kj`.
pub fn jacobian_of_de_rham(p: &DeRhamPoint, omega: &PeriodMatrix) -> Result<JacobianPoint, ModuliError> {
    p.check(omega)?;
    Ok(JacobianPoint::reduce(&jacobian_lift(p, omega), omega))
}

/// The unreduced `u` of [`jacobian_of_de_rham`].
pub fn jacobian_lift(p: &DeRhamPoint, omega: &PeriodMatrix) -> Vec<Complex64> {
    real_mat_vec(omega.imag(), &p.s)
        .into_iter()
        .map(|v| -v / PI)
        .collect()
}

/// `b − aΩ` computed from a character.
pub fn jacobian_of_character(chi: &BettiCharacter, omega: &PeriodMatrix) -> Vec<Complex64> {
    let g = chi.genus();
    (0..g)
        .map(|j| chi.b[j] - (0..g).map(|k| chi.a[k] * omega.get(k, j)).sum::<Complex64>())
        .collect()
}

/// Unitary point over `u`: `s_j = −π Σ_k u_k (Im Ω)⁻¹_kj`, `t = −s̄`.
pub fn unitary_section(u: &JacobianPoint, omega: &PeriodMatrix) -> DeRhamPoint {
    unitary_section_of_lift(&u.value(omega), omega)
}

/// [`unitary_section`] on an explicit lift.
pub fn unitary_section_of_lift(u: &[Complex64], omega: &PeriodMatrix) -> DeRhamPoint {
    let s = real_mat_vec(omega.imag_inverse(), u)
        .into_iter()
        .map(|v| -v * PI)
        .collect();
    DeRhamPoint::unitary(s)
}

/// Cohomology-valued 1-form `Σ ω_i ⊗ holo_i + ω̄_i ⊗ anti_i` on the base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussManinInvariant {
    pub holo: Vec<FormExpr>,
    pub anti: Vec<FormExpr>,
}

impl GaussManinInvariant {
    pub fn zero(g: usize) -> Self {
        GaussManinInvariant {
            holo: vec![FormExpr::zero(); g],
            anti: vec![FormExpr::zero(); g],
        }
    }

    pub fn genus(&self) -> usize {
        self.holo.len()
    }

    /// Components over the basis `ω_1…ω_g, ω̄_1…ω̄_g`.
    pub fn components(&self) -> Vec<FormExpr> {
        self.holo.iter().chain(&self.anti).cloned().collect()
    }

    /// `(·)′`: the `ω` block.
    pub fn prime(&self) -> Self {
        GaussManinInvariant {
            holo: self.holo.clone(),
            anti: vec![FormExpr::zero(); self.genus()],
        }
    }

    /// `(·)″`: the `ω̄` block.
    pub fn double_prime(&self) -> Self {
        GaussManinInvariant {
            holo: vec![FormExpr::zero(); self.genus()],
            anti: self.anti.clone(),
        }
    }

    /// Complex conjugate; swaps the blocks.
    pub fn conj(&self) -> Self {
        GaussManinInvariant {
            holo: self.anti.iter().map(|f| f.conj()).collect(),
            anti: self.holo.iter().map(|f| f.conj()).collect(),
        }
    }

    /// Restriction to `ds = 0` (and `ds̄ = 0`).
    pub fn freeze_s(&self) -> Self {
        let kill = |f: &FormExpr| -> FormExpr {
            let mut out = FormExpr::zero();
            for (m, c) in f.terms() {
                if !m.iter().any(|g| matches!(g, Gen::S(_) | Gen::SBar(_))) {
                    out = out + FormExpr::term(m.clone(), *c);
                }
            }
            out
        };
        GaussManinInvariant {
            holo: self.holo.iter().map(kill).collect(),
            anti: self.anti.iter().map(kill).collect(),
        }
    }
}

/// `∇_GM ν = Σ ω_i ⊗ dt_i + ω̄_i ⊗ ds_i` for the universal family.
pub fn gm_invariant(g: usize) -> GaussManinInvariant {
    GaussManinInvariant {
        holo: (0..g).map(|i| FormExpr::gen(Gen::T(i))).collect(),
        anti: (0..g).map(|i| FormExpr::gen(Gen::S(i))).collect(),
    }
}

/// The universal invariant restricted to the unitary locus `t = −s̄`:
/// `Σ ω_i ⊗ (−ds̄_i) + ω̄_i ⊗ ds_i`.
pub fn gm_invariant_unitary(g: usize) -> GaussManinInvariant {
    GaussManinInvariant {
        holo: (0..g).map(|i| -FormExpr::gen(Gen::SBar(i))).collect(),
        anti: (0..g).map(|i| FormExpr::gen(Gen::S(i))).collect(),
    }
}

//! Constant-coefficient exterior algebra over the moduli 1-forms
//! `dt_i, ds_i, dt̄_i, ds̄_i, dλ`, with coefficients that are Laurent
//! polynomials in a formal parameter `λ`, and fiber integration of
//! cohomology-valued forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::moduli::GaussManinInvariant;
use crate::period::PeriodMatrix;

pub const MIN_DEGREE: i32 = -4;
pub const MAX_DEGREE: i32 = 4;
const WIDTH: usize = (MAX_DEGREE - MIN_DEGREE + 1) as usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("genus mismatch: expected {expected}, got {got}")]
    GenusMismatch { expected: usize, got: usize },
    #[error("unknown generator name {0:?}")]
    UnknownGenerator(String),
}

/// A 1-form generator. Indices are zero-based; names are one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    T(usize),
    S(usize),
    TBar(usize),
    SBar(usize),
    Lambda,
}

impl Gen {
    /// Complex conjugate generator; `dλ` has no conjugate in this algebra.
    pub fn conj(self) -> Gen {
        match self {
            Gen::T(i) => Gen::TBar(i),
            Gen::S(i) => Gen::SBar(i),
            Gen::TBar(i) => Gen::T(i),
            Gen::SBar(i) => Gen::S(i),
            Gen::Lambda => panic!("conjugate of dλ is not modeled"),
        }
    }

    pub fn name(self) -> String {
        match self {
            Gen::T(i) => format!("dt{}", i + 1),
            Gen::S(i) => format!("ds{}", i + 1),
            Gen::TBar(i) => format!("dtb{}", i + 1),
            Gen::SBar(i) => format!("dsb{}", i + 1),
            Gen::Lambda => "dl".to_string(),
        }
    }

    pub fn parse(name: &str) -> Result<Gen, FormError> {
        if name == "dl" {
            return Ok(Gen::Lambda);
        }
        let bad = || FormError::UnknownGenerator(name.to_string());
        let (ctor, rest): (fn(usize) -> Gen, &str) = if let Some(r) = name.strip_prefix("dtb") {
            (Gen::TBar, r)
        } else if let Some(r) = name.strip_prefix("dsb") {
            (Gen::SBar, r)
        } else if let Some(r) = name.strip_prefix("dt") {
            (Gen::T, r)
        } else if let Some(r) = name.strip_prefix("ds") {
            (Gen::S, r)
        } else {
            return Err(bad());
        };
        let idx: usize = rest.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        Ok(ctor(idx - 1))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Laurent polynomial in `λ` supported in degrees `MIN_DEGREE..=MAX_DEGREE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Laurent {
    coeffs: [Complex64; WIDTH],
}

impl Default for Laurent {
    fn default() -> Self {
        Laurent::zero()
    }
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            coeffs: [Complex64::new(0.0, 0.0); WIDTH],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Laurent::monomial(0, c)
    }

    /// `c·λ^deg`.
    pub fn monomial(deg: i32, c: Complex64) -> Self {
        let mut l = Laurent::zero();
        l.coeffs[slot(deg)] = c;
        l
    }

    pub fn coeff(&self, deg: i32) -> Complex64 {
        if (MIN_DEGREE..=MAX_DEGREE).contains(&deg) {
            self.coeffs[slot(deg)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Degrees with a nonzero coefficient.
    pub fn support(&self) -> Vec<i32> {
        (MIN_DEGREE..=MAX_DEGREE)
            .filter(|d| self.coeff(*d) != Complex64::new(0.0, 0.0))
            .collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = *self;
        for x in out.coeffs.iter_mut() {
            *x *= c;
        }
        out
    }

    /// Conjugates the coefficients, keeping `λ` formal.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        for x in out.coeffs.iter_mut() {
            *x = x.conj();
        }
        out
    }

    /// Value at a numeric `λ ≠ 0`.
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        (MIN_DEGREE..=MAX_DEGREE)
            .map(|d| self.coeff(d) * lambda.powi(d))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Product of two Laurent polynomials. Panics if the result leaves the
    /// degree window; that only happens through an algebra bug.
    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for da in MIN_DEGREE..=MAX_DEGREE {
            let a = self.coeff(da);
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for db in MIN_DEGREE..=MAX_DEGREE {
                let b = other.coeff(db);
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let d = da + db;
                assert!(
                    (MIN_DEGREE..=MAX_DEGREE).contains(&d),
                    "λ-degree {d} outside the window [{MIN_DEGREE}, {MAX_DEGREE}]"
                );
                out.coeffs[slot(d)] += a * b;
            }
        }
        out
    }
}

fn slot(deg: i32) -> usize {
    assert!(
        (MIN_DEGREE..=MAX_DEGREE).contains(&deg),
        "λ-degree {deg} outside the window [{MIN_DEGREE}, {MAX_DEGREE}]"
    );
    (deg - MIN_DEGREE) as usize
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        self + (-rhs)
    }
}

/// Element of the exterior algebra: monomials in strictly increasing
/// generator order mapped to nonzero Laurent coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormExpr {
    terms: BTreeMap<Vec<Gen>, Laurent>,
}

/// Sorts a monomial, returning the permutation sign, or `None` on a repeat.
fn normalize(mut mono: Vec<Gen>) -> Option<(Vec<Gen>, f64)> {
    let mut sign = 1.0;
    // insertion sort keeps the sign bookkeeping obvious
    for i in 1..mono.len() {
        let mut j = i;
        while j > 0 && mono[j - 1] > mono[j] {
            mono.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if mono.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((mono, sign))
    }
}

impl FormExpr {
    pub fn zero() -> Self {
        FormExpr::default()
    }

    /// The 0-form `c`.
    pub fn scalar(c: Complex64) -> Self {
        FormExpr::term(Vec::new(), Laurent::constant(c))
    }

    /// A single generator with coefficient 1.
    pub fn gen(g: Gen) -> Self {
        FormExpr::term(vec![g], Laurent::constant(Complex64::new(1.0, 0.0)))
    }

    /// `coeff · g₁∧…∧g_k`, in any order.
    pub fn term(mono: Vec<Gen>, coeff: Laurent) -> Self {
        let mut f = FormExpr::zero();
        f.add_term(mono, coeff);
        f
    }

    fn add_term(&mut self, mono: Vec<Gen>, coeff: Laurent) {
        let Some((mono, sign)) = normalize(mono) else {
            return;
        };
        let coeff = coeff.scale(Complex64::new(sign, 0.0));
        let entry = self.terms.entry(mono.clone()).or_default();
        *entry = *entry + coeff;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `g₁∧…∧g_k`, with the sign of the given ordering.
    pub fn coeff(&self, mono: &[Gen]) -> Laurent {
        match normalize(mono.to_vec()) {
            None => Laurent::zero(),
            Some((m, sign)) => self
                .terms
                .get(&m)
                .map(|c| c.scale(Complex64::new(sign, 0.0)))
                .unwrap_or_default(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &Laurent)> {
        self.terms.iter()
    }

    /// Form degree of every monomial present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Union of the λ-supports of all coefficients.
    pub fn lambda_support(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.values().flat_map(|c| c.support()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn wedge(&self, other: &FormExpr) -> FormExpr {
        let mut out = FormExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut mono = ma.clone();
                mono.extend_from_slice(mb);
                out.add_term(mono, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> FormExpr {
        self.scale_laurent(&Laurent::constant(c))
    }

    pub fn scale_laurent(&self, l: &Laurent) -> FormExpr {
        let mut out = FormExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(l));
        }
        out
    }

    /// Conjugates coefficients and generators with `λ` held formal.
    ///
    /// Panics on forms containing `dλ`.
    pub fn conj(&self) -> FormExpr {
        let mut out = FormExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.iter().map(|g| g.conj()).collect(), c.conj());
        }
        out
    }

    /// Conjugate at a fixed numeric `λ`: evaluates first, so the result has
    /// only degree-0 coefficients.
    pub fn conj_at(&self, lambda: Complex64) -> FormExpr {
        self.eval_lambda(lambda).conj()
    }

    /// Substitutes a numeric `λ`.
    pub fn eval_lambda(&self, lambda: Complex64) -> FormExpr {
        let mut out = FormExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Laurent::constant(c.eval(lambda)));
        }
        out
    }

    /// The coefficient of `λ^deg`, as a λ-free form.
    pub fn lambda_part(&self, deg: i32) -> FormExpr {
        let mut out = FormExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Laurent::constant(c.coeff(deg)));
        }
        out
    }

    /// Drops every monomial containing `dλ`.
    pub fn without_dlambda(&self) -> FormExpr {
        self.filter(|m| !m.contains(&Gen::Lambda))
    }

    /// Keeps only monomials containing `dλ`.
    pub fn dlambda_part(&self) -> FormExpr {
        self.filter(|m| m.contains(&Gen::Lambda))
    }

    fn filter(&self, keep: impl Fn(&[Gen]) -> bool) -> FormExpr {
        FormExpr {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Largest coefficient modulus over all monomials and degrees.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// `max |self − other|` coefficientwise.
    pub fn distance(&self, other: &FormExpr) -> f64 {
        (self.clone() - other.clone()).max_abs()
    }
}

impl Add for FormExpr {
    type Output = FormExpr;
    fn add(mut self, rhs: FormExpr) -> FormExpr {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for FormExpr {
    type Output = FormExpr;
    fn sub(self, rhs: FormExpr) -> FormExpr {
        self + (-rhs)
    }
}

impl Neg for FormExpr {
    type Output = FormExpr;
    fn neg(self) -> FormExpr {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for FormExpr {
    type Output = FormExpr;
    fn mul(self, rhs: Complex64) -> FormExpr {
        self.scale(rhs)
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            for d in c.support() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                let v = c.coeff(d);
                write!(f, "({:.6}{:+.6}i)", v.re, v.im)?;
                if d != 0 {
                    write!(f, "·λ^{d}")?;
                }
                if !m.is_empty() {
                    let names: Vec<String> = m.iter().map(|g| g.name()).collect();
                    write!(f, " {}", names.join("∧"))?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    monomial: Vec<String>,
    coeff: Vec<(i32, Complex64)>,
}

impl Serialize for FormExpr {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let list: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                monomial: m.iter().map(|g| g.name()).collect(),
                coeff: c.support().into_iter().map(|d| (d, c.coeff(d))).collect(),
            })
            .collect();
        list.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FormExpr {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let list = Vec::<TermRepr>::deserialize(de)?;
        let mut out = FormExpr::zero();
        for t in list {
            let mono = t
                .monomial
                .iter()
                .map(|n| Gen::parse(n))
                .collect::<Result<Vec<_>, _>>()
                .map_err(D::Error::custom)?;
            let mut coeff = Laurent::zero();
            for (d, c) in t.coeff {
                if !(MIN_DEGREE..=MAX_DEGREE).contains(&d) {
                    return Err(D::Error::custom(format!("λ-degree {d} out of range")));
                }
                coeff = coeff + Laurent::monomial(d, c);
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

/// Class in relative first cohomology, `Σ holo_i ω_i + anti_i ω̄_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelClass {
    pub holo: Vec<Complex64>,
    pub anti: Vec<Complex64>,
}

impl RelClass {
    pub fn zero(g: usize) -> Self {
        RelClass {
            holo: vec![Complex64::new(0.0, 0.0); g],
            anti: vec![Complex64::new(0.0, 0.0); g],
        }
    }

    /// `ω_i`.
    pub fn omega(g: usize, i: usize) -> Self {
        let mut c = RelClass::zero(g);
        c.holo[i] = Complex64::new(1.0, 0.0);
        c
    }

    /// `ω̄_i`.
    pub fn omega_bar(g: usize, i: usize) -> Self {
        let mut c = RelClass::zero(g);
        c.anti[i] = Complex64::new(1.0, 0.0);
        c
    }

    pub fn genus(&self) -> usize {
        self.holo.len()
    }

    /// The `(1,0)` projection.
    pub fn prime(&self) -> RelClass {
        RelClass {
            holo: self.holo.clone(),
            anti: vec![Complex64::new(0.0, 0.0); self.genus()],
        }
    }

    /// The `(0,1)` projection.
    pub fn double_prime(&self) -> RelClass {
        RelClass {
            holo: vec![Complex64::new(0.0, 0.0); self.genus()],
            anti: self.anti.clone(),
        }
    }

    /// Complex conjugate class: swaps types.
    pub fn conj(&self) -> RelClass {
        RelClass {
            holo: self.anti.iter().map(|c| c.conj()).collect(),
            anti: self.holo.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Periods over `α_k`.
    pub fn a_periods(&self) -> Vec<Complex64> {
        self.holo.iter().zip(&self.anti).map(|(h, a)| h + a).collect()
    }

    /// Periods over `β_k`.
    pub fn b_periods(&self, omega: &PeriodMatrix) -> Vec<Complex64> {
        let g = self.genus();
        (0..g)
            .map(|k| {
                (0..g)
                    .map(|i| self.holo[i] * omega.get(i, k) + self.anti[i] * omega.get(i, k).conj())
                    .sum()
            })
            .collect()
    }
}

/// `∫_X c1 ∪ c2` by the Riemann bilinear relations.
pub fn fiber_pairing(omega: &PeriodMatrix, c1: &RelClass, c2: &RelClass) -> Result<Complex64, FormError> {
    let g = omega.genus();
    for c in [c1, c2] {
        if c.genus() != g || c.anti.len() != g {
            return Err(FormError::GenusMismatch {
                expected: g,
                got: c.genus(),
            });
        }
    }
    let (a1, b1) = (c1.a_periods(), c1.b_periods(omega));
    let (a2, b2) = (c2.a_periods(), c2.b_periods(omega));
    Ok((0..g).map(|k| a1[k] * b2[k] - b1[k] * a2[k]).sum())
}

/// Basis `ω_1…ω_g, ω̄_1…ω̄_g` of relative cohomology.
fn basis(g: usize) -> Vec<RelClass> {
    (0..g)
        .map(|i| RelClass::omega(g, i))
        .chain((0..g).map(|i| RelClass::omega_bar(g, i)))
        .collect()
}

/// `π_*(x ∪ y)` for cohomology-valued 1-forms: `Σ P(e_a, e_b) x_a ∧ y_b`.
fn cup(omega: &PeriodMatrix, x: &[FormExpr], y: &[FormExpr]) -> FormExpr {
    let g = omega.genus();
    let basis = basis(g);
    let mut out = FormExpr::zero();
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            let p = fiber_pairing(omega, &basis[a], &basis[b]).expect("basis has matching genus");
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            out = out + xa.wedge(yb).scale(p);
        }
    }
    out
}

fn check_genus(omega: &PeriodMatrix, nu: &GaussManinInvariant) -> Result<(), FormError> {
    if nu.genus() != omega.genus() {
        return Err(FormError::GenusMismatch {
            expected: omega.genus(),
            got: nu.genus(),
        });
    }
    Ok(())
}

fn two_pi_i_inv() -> Complex64 {
    Complex64::new(0.0, -1.0 / (2.0 * PI))
}

/// Curvature of the intersection connection, `(1/2πi) π_*(∇ν_L ∪ ∇ν_M)`.
pub fn intersection_curvature(
    omega: &PeriodMatrix,
    nu_l: &GaussManinInvariant,
    nu_m: &GaussManinInvariant,
) -> Result<FormExpr, FormError> {
    check_genus(omega, nu_l)?;
    check_genus(omega, nu_m)?;
    Ok(cup(omega, &nu_l.components(), &nu_m.components()).scale(two_pi_i_inv()))
}

/// Curvature of the trace connection on a family with constant periods:
/// `(1/2πi) π_*{(∇ν_L)′ ∪ (∇ν_M)″ − (∇ν_L)″ ∪ conj((∇ν_M)″)}`.
pub fn trace_curvature(
    omega: &PeriodMatrix,
    nu_l: &GaussManinInvariant,
    nu_m: &GaussManinInvariant,
) -> Result<FormExpr, FormError> {
    check_genus(omega, nu_l)?;
    check_genus(omega, nu_m)?;
    let first = cup(
        omega,
        &nu_l.prime().components(),
        &nu_m.double_prime().components(),
    );
    let second = cup(
        omega,
        &nu_l.double_prime().components(),
        &nu_m.double_prime().conj().components(),
    );
    Ok((first - second).scale(two_pi_i_inv()))
}

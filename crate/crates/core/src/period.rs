//! Period matrices and the real linear algebra on their imaginary parts.
//!
//! A [`PeriodMatrix`] is a symmetric complex `g×g` matrix whose imaginary part
//! is positive definite. Validation caches the Cholesky factor and inverse of
//! `Im Ω`, together with the length of the shortest nonzero vector of the
//! lattice `Lᵀ Zᵍ`, which every theta evaluation needs for its truncation
//! bound.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance on `|Ω_ij − Ω_ji|`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Smallest eigenvalue of `Im Ω` accepted without Siegel reduction.
pub const MIN_IMAG_EIGENVALUE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodError {
    #[error("period matrix is empty")]
    Empty,
    #[error("period matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("period matrix is not symmetric: |Ω_ij − Ω_ji| = {deviation:e} at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize, deviation: f64 },
    #[error("imaginary part is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefiniteImaginaryPart { min_eigenvalue: f64 },
    #[error(
        "imaginary part is nearly degenerate (smallest eigenvalue {min_eigenvalue:e} < 1e-3); \
         reduce the period matrix before evaluating theta functions"
    )]
    NotReduced { min_eigenvalue: f64 },
}

/// A validated period matrix `Ω = X + iY`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Complex64>>", into = "Vec<Vec<Complex64>>")]
pub struct PeriodMatrix {
    omega: DMatrix<Complex64>,
    imag: DMatrix<f64>,
    imag_chol: DMatrix<f64>,
    imag_inv: DMatrix<f64>,
    shortest: f64,
}

impl fmt::Debug for PeriodMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodMatrix")
            .field("genus", &self.genus())
            .field("omega", &self.to_rows())
            .finish()
    }
}

/// Validates a raw square matrix as a period matrix.
///
/// The stored matrix is the symmetrization `(Ω + Ωᵀ)/2` of the input.
pub fn validate(raw: &DMatrix<Complex64>) -> Result<PeriodMatrix, PeriodError> {
    let (rows, cols) = raw.shape();
    if rows == 0 || cols == 0 {
        return Err(PeriodError::Empty);
    }
    if rows != cols {
        return Err(PeriodError::NotSquare { rows, cols });
    }
    for i in 0..rows {
        for j in 0..cols {
            let z = raw[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(PeriodError::NonFinite { row: i, col: j });
            }
        }
    }
    let mut worst = (0, 0, 0.0_f64);
    for i in 0..rows {
        for j in (i + 1)..cols {
            let d = (raw[(i, j)] - raw[(j, i)]).norm();
            if d > worst.2 {
                worst = (i, j, d);
            }
        }
    }
    if worst.2 >= SYMMETRY_TOL {
        return Err(PeriodError::NotSymmetric {
            row: worst.0,
            col: worst.1,
            deviation: worst.2,
        });
    }
    let omega = (raw + raw.transpose()) * Complex64::new(0.5, 0.0);
    let imag = omega.map(|z| z.im);

    let min_eigenvalue = SymmetricEigen::new(imag.clone()).eigenvalues.min();
    if min_eigenvalue <= 0.0 {
        return Err(PeriodError::NotPositiveDefiniteImaginaryPart { min_eigenvalue });
    }
    let chol = match imag.clone().cholesky() {
        Some(c) => c,
        None => return Err(PeriodError::NotPositiveDefiniteImaginaryPart { min_eigenvalue }),
    };
    if min_eigenvalue < MIN_IMAG_EIGENVALUE {
        return Err(PeriodError::NotReduced { min_eigenvalue });
    }
    let imag_chol = chol.l();
    let imag_inv = chol.inverse();
    let shortest = shortest_lattice_vector(&imag_chol.transpose());

    Ok(PeriodMatrix {
        omega,
        imag,
        imag_chol,
        imag_inv,
        shortest,
    })
}

/// `(Im Ω)⁻¹`.
pub fn imag_inverse(omega: &PeriodMatrix) -> DMatrix<f64> {
    omega.imag_inv.clone()
}

/// Lower-triangular `L` with `L·Lᵀ = Im Ω`.
pub fn imag_cholesky(omega: &PeriodMatrix) -> DMatrix<f64> {
    omega.imag_chol.clone()
}

impl PeriodMatrix {
    /// Genus-one period matrix `[[τ]]`.
    pub fn from_tau(tau: Complex64) -> Result<Self, PeriodError> {
        validate(&DMatrix::from_element(1, 1, tau))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, PeriodError> {
        let n = rows.len();
        if n == 0 {
            return Err(PeriodError::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(PeriodError::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        validate(&DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn genus(&self) -> usize {
        self.omega.nrows()
    }

    pub fn omega(&self) -> &DMatrix<Complex64> {
        &self.omega
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.omega[(i, j)]
    }

    /// `Im Ω`.
    pub fn imag(&self) -> &DMatrix<f64> {
        &self.imag
    }

    pub fn real(&self) -> DMatrix<f64> {
        self.omega.map(|z| z.re)
    }

    pub fn imag_cholesky(&self) -> &DMatrix<f64> {
        &self.imag_chol
    }

    pub fn imag_inverse(&self) -> &DMatrix<f64> {
        &self.imag_inv
    }

    /// Length of the shortest nonzero vector of `Lᵀ Zᵍ`.
    pub fn shortest_lattice_length(&self) -> f64 {
        self.shortest
    }

    /// The period matrix `−Ω̄` of the conjugate surface.
    pub fn conjugate_surface(&self) -> PeriodMatrix {
        PeriodMatrix {
            omega: self.omega.map(|z| -z.conj()),
            imag: self.imag.clone(),
            imag_chol: self.imag_chol.clone(),
            imag_inv: self.imag_inv.clone(),
            shortest: self.shortest,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.genus())
            .map(|i| (0..self.genus()).map(|j| self.omega[(i, j)]).collect())
            .collect()
    }

    /// `Ω·v` for a complex vector.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let g = self.genus();
        (0..g)
            .map(|i| (0..g).map(|j| self.omega[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `Im Ω · v` for a complex vector.
    pub fn imag_mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        real_mat_vec(&self.imag, v)
    }
}

impl TryFrom<Vec<Vec<Complex64>>> for PeriodMatrix {
    type Error = PeriodError;

    fn try_from(rows: Vec<Vec<Complex64>>) -> Result<Self, Self::Error> {
        PeriodMatrix::from_rows(&rows)
    }
}

impl From<PeriodMatrix> for Vec<Vec<Complex64>> {
    fn from(p: PeriodMatrix) -> Self {
        p.to_rows()
    }
}

/// `M·v` for a real matrix and complex vector.
pub fn real_mat_vec(m: &DMatrix<f64>, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| v[j] * m[(i, j)]).sum())
        .collect()
}

/// `vᵀ·M` for a real matrix and complex vector.
pub fn real_vec_mat(v: &[Complex64], m: &DMatrix<f64>) -> Vec<Complex64> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| v[i] * m[(i, j)]).sum())
        .collect()
}

/// Shortest nonzero vector of the lattice `U·Zᵍ` for upper-triangular `U`.
fn shortest_lattice_vector(upper: &DMatrix<f64>) -> f64 {
    let g = upper.ncols();
    let bound = (0..g)
        .map(|j| upper.column(j).norm())
        .fold(f64::INFINITY, f64::min);
    let mut best = bound;
    let center = vec![0.0; g];
    crate::theta::enumerate_ellipsoid(upper, &center, bound * (1.0 + 1e-9), |n, norm2| {
        if n.iter().any(|&k| k != 0) {
            best = best.min(norm2.sqrt());
        }
    });
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn upper_half_plane_accepted() {
        let p = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        assert_eq!(p.genus(), 1);
        assert_eq!(p.get(0, 0), c(0.0, 1.0));
    }

    #[test]
    fn lower_half_plane_rejected() {
        let err = PeriodMatrix::from_tau(c(0.0, -1.0)).unwrap_err();
        assert!(matches!(err, PeriodError::NotPositiveDefiniteImaginaryPart { .. }));
    }

    #[test]
    fn asymmetric_rejected() {
        let err = PeriodMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(0.4, 0.0)],
            vec![c(0.3, 0.0), c(0.0, 2.0)],
        ])
        .unwrap_err();
        assert!(matches!(err, PeriodError::NotSymmetric { row: 0, col: 1, .. }));
    }

    #[test]
    fn nearly_degenerate_rejected() {
        let err = PeriodMatrix::from_tau(c(0.0, 1e-4)).unwrap_err();
        assert!(matches!(err, PeriodError::NotReduced { .. }));
    }

    #[test]
    fn non_square_and_non_finite() {
        let raw = DMatrix::from_element(1, 2, c(0.0, 1.0));
        assert!(matches!(validate(&raw), Err(PeriodError::NotSquare { .. })));
        let raw = DMatrix::from_element(1, 1, c(f64::NAN, 1.0));
        assert!(matches!(validate(&raw), Err(PeriodError::NonFinite { .. })));
    }

    #[test]
    fn scalar_inverses() {
        let p = PeriodMatrix::from_tau(c(0.0, 2.0)).unwrap();
        assert!((imag_inverse(&p)[(0, 0)] - 0.5).abs() < 1e-15);
        let p = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        assert!((imag_inverse(&p)[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((imag_cholesky(&p)[(0, 0)] - 1.0).abs() < 1e-15);
        let p = PeriodMatrix::from_tau(c(0.0, 4.0)).unwrap();
        assert!((imag_cholesky(&p)[(0, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_genus_two_inverse() {
        let p = PeriodMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 2.0)],
        ])
        .unwrap();
        let inv = imag_inverse(&p);
        assert!((inv[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((inv[(1, 1)] - 0.5).abs() < 1e-15);
        assert!(inv[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn cholesky_reconstructs() {
        let p = PeriodMatrix::from_rows(&[
            vec![c(0.1, 2.0), c(0.2, 1.0)],
            vec![c(0.2, 1.0), c(-0.3, 2.0)],
        ])
        .unwrap();
        let l = imag_cholesky(&p);
        let resid = (&l * l.transpose() - p.imag()).abs().max();
        assert!(resid < 1e-12);
        assert!(l[(0, 1)] == 0.0);
    }

    #[test]
    fn shortest_vector_of_square_lattice() {
        let p = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        assert!((p.shortest_lattice_length() - 1.0).abs() < 1e-12);
        // Im Ω = [[2,1],[1,2]] has shortest vector (1,-1) of squared length 2.
        let p = PeriodMatrix::from_rows(&[
            vec![c(0.0, 2.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 2.0)],
        ])
        .unwrap();
        assert!((p.shortest_lattice_length() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_uses_pairs() {
        let p = PeriodMatrix::from_tau(c(0.5, 1.5)).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[[0.5,1.5]]]");
        let back: PeriodMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<PeriodMatrix>("[[[0.0,-1.0]]]").is_err());
    }
}

//! Numerical toolkit for rank-one local systems on compact Riemann surfaces.
//!
//! Layers, bottom-up:
//!
//! - [`period`]: validated period matrices and the `Im Ω` linear algebra.
//! - [`theta`]: Riemann theta functions with certified truncation.
//! - [`moduli`]: deRham, Betti and Jacobian coordinates.
//! - [`forms`]: constant-coefficient exterior algebra with Laurent
//!   coefficients in a twistor parameter, and fiber integration.
//! - [`surface`]: the genus-one model: prime form, equivariant sections,
//!   the universal connection and Weil reciprocity.
//! - [`torsion`]: holomorphic analytic torsion in moduli coordinates.
//! - [`twistor`]: λ-connections and the curvature decomposition on twistor space.
//! - [`harness`]: finite differences, seeded grids, checks and reports.

pub mod forms;
pub mod harness;
pub mod moduli;
pub mod period;
pub mod surface;
pub mod theta;
pub mod torsion;
pub mod twistor;

pub use num_complex::Complex64;
pub use period::PeriodMatrix;

/// `re + i·im`.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

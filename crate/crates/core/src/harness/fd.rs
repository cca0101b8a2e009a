//! Wirtinger finite differences on complex coordinates.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FdError {
    #[error("stencil point {at} returned a non-finite value")]
    StencilHitsSingularity { at: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Second-order central differences.
    #[default]
    Central,
    /// Central differences at `h` and `h/2`, extrapolated to fourth order.
    Richardson,
}

fn partials<F>(f: &mut F, w: Complex64, h: f64) -> Result<(Complex64, Complex64), FdError>
where
    F: FnMut(Complex64) -> Complex64,
{
    let mut eval = |z: Complex64| {
        let v = f(z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(FdError::StencilHitsSingularity { at: z })
        }
    };
    let dx = Complex64::new(h, 0.0);
    let dy = Complex64::new(0.0, h);
    let fx = (eval(w + dx)? - eval(w - dx)?) / (2.0 * h);
    let fy = (eval(w + dy)? - eval(w - dy)?) / (2.0 * h);
    Ok((fx, fy))
}

/// `(∂f/∂w, ∂f/∂w̄)` from one stencil, with `∂/∂w = ½(∂_x − i∂_y)`.
pub fn wirtinger_pair<F>(mut f: F, w: Complex64, h: f64, scheme: Scheme) -> Result<(Complex64, Complex64), FdError>
where
    F: FnMut(Complex64) -> Complex64,
{
    let (fx, fy) = match scheme {
        Scheme::Central => partials(&mut f, w, h)?,
        Scheme::Richardson => {
            let (ax, ay) = partials(&mut f, w, h)?;
            let (bx, by) = partials(&mut f, w, h / 2.0)?;
            ((4.0 * bx - ax) / 3.0, (4.0 * by - ay) / 3.0)
        }
    };
    let i = Complex64::new(0.0, 1.0);
    Ok((0.5 * (fx - i * fy), 0.5 * (fx + i * fy)))
}

/// `∂f/∂w` by finite differences in the real coordinates of `w`.
pub fn wirtinger_fd<F>(f: F, w: Complex64, h: f64, scheme: Scheme) -> Result<Complex64, FdError>
where
    F: FnMut(Complex64) -> Complex64,
{
    Ok(wirtinger_pair(f, w, h, scheme)?.0)
}

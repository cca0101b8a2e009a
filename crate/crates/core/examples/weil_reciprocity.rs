//! Weil reciprocity for the universal connection on a genus-one curve, and
//! the two classical laws it generalizes.

use delpair::surface::{
    reciprocity_i, reciprocity_ii, section_value, weil_traces, EllipticSurface, FormClass, FunctionData, SectionData,
};
use delpair::c64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = EllipticSurface::new(c64(0.2, 1.1))?;

    // a meromorphic function: the last pole closes the divisor equation
    let f = FunctionData::closing(
        &x,
        vec![x.from_coords(0.31, 0.62), x.from_coords(0.77, 0.18)],
        vec![x.from_coords(0.55, 0.41)],
    )?;
    // a section of the universal bundle at (t, s); its first zero moves with s
    let (t, s) = (c64(0.3, -0.2), c64(0.4, 0.25));
    let l = SectionData::with_moving_point(
        &x,
        vec![x.from_coords(0.45, 0.85), x.from_coords(0.9, 0.5)],
        vec![x.from_coords(0.2, 0.3)],
        t,
        s,
    )?;
    println!("divisor of f: {:?}", f.divisor());
    println!("divisor of ℓ: {:?}", l.divisor());
    println!("ℓ(0.5+0.5i) = {:.6}", section_value(&x, &l, c64(0.5, 0.5))?);

    let w = weil_traces(&x, &l, &f)?;
    println!("tr_Div f(∇ℓ/ℓ) = {:.12?}", w.left);
    println!("tr_Div ℓ(df/f) = {:.12?}", w.right);
    println!("residual       = {:.1e}", w.max_residual());

    for class in [FormClass::Omega, FormClass::OmegaBar] {
        let r = reciprocity_i(&x, class, &f)?;
        println!("first law ({class:?}): {:.1e}, contour check {:.1e}", r.residual.norm(), r.contour_residual);
    }
    let g = FunctionData::closing(
        &x,
        vec![x.from_coords(0.12, 0.15), x.from_coords(0.64, 0.9)],
        vec![x.from_coords(0.88, 0.72)],
    )?;
    let r = reciprocity_ii(&x, &f, &g)?;
    println!("second law (mod 2πi): {:.1e}", r.residual.norm());
    Ok(())
}

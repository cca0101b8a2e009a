use std::f64::consts::PI;

use delpair::forms::{FormExpr, Gen, Laurent};
use delpair::moduli::{jacobian_of_de_rham, lattice_residual, unitary_section, DeRhamPoint};
use delpair::theta::{log_theta_norm, theta, Characteristic};
use delpair::{c64, Complex64, PeriodMatrix};
use num_rational::Ratio;
use proptest::prelude::*;

fn tau() -> impl Strategy<Value = Complex64> {
    (-0.5..0.5f64, 0.6..2.0f64).prop_map(|(x, y)| c64(x, y))
}

fn point() -> impl Strategy<Value = Complex64> {
    (-0.6..0.6f64, -0.6..0.6f64).prop_map(|(x, y)| c64(x, y))
}

fn genus2() -> impl Strategy<Value = PeriodMatrix> {
    (tau(), tau(), -0.2..0.2f64, -0.2..0.2f64).prop_map(|(a, b, x, y)| {
        PeriodMatrix::from_rows(&[vec![a, c64(x, y)], vec![c64(x, y), b]]).unwrap()
    })
}

fn half_char(g: usize) -> impl Strategy<Value = Characteristic> {
    prop::collection::vec(0i64..2, 2 * g).prop_map(move |v| {
        let r: Vec<_> = v.iter().map(|n| Ratio::new(*n, 2)).collect();
        Characteristic::new(r[..g].to_vec(), r[g..].to_vec()).unwrap()
    })
}

fn gen() -> impl Strategy<Value = Gen> {
    (0usize..4, 0usize..2).prop_map(|(k, i)| match k {
        0 => Gen::T(i),
        1 => Gen::S(i),
        2 => Gen::TBar(i),
        _ => Gen::SBar(i),
    })
}

fn one_form() -> impl Strategy<Value = FormExpr> {
    prop::collection::vec((gen(), point()), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(FormExpr::zero(), |acc, (g, c)| acc + FormExpr::term(vec![g], Laurent::constant(c)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_shift_by_b_period(t in tau(), z in point(), ch in half_char(1)) {
        let omega = PeriodMatrix::from_tau(t).unwrap();
        let beta = *ch.beta()[0].numer() as f64 / 2.0;
        let v = theta(&[z], &omega, &ch, 1e-14).unwrap().value();
        let w = theta(&[z + t], &omega, &ch, 1e-14).unwrap().value();
        let factor = (Complex64::i() * (-2.0 * PI * beta - 2.0 * PI * z - PI * t)).exp();
        prop_assert!((w - v * factor).norm() <= 1e-10 * v.norm().max(1e-3));
    }

    #[test]
    fn theta_parity_genus_two(omega in genus2(), z0 in point(), z1 in point(), ch in half_char(2)) {
        let v = theta(&[z0, z1], &omega, &ch, 1e-14).unwrap().value();
        let w = theta(&[-z0, -z1], &omega, &ch, 1e-14).unwrap().value();
        let sign = ch.parity().unwrap() as f64;
        prop_assert!((w - v * sign).norm() <= 1e-10 * v.norm().max(1e-3));
    }

    #[test]
    fn theta_norm_is_lattice_periodic(t in tau(), z in point(), m in -2i64..3, n in -2i64..3) {
        let omega = PeriodMatrix::from_tau(t).unwrap();
        let ch = Characteristic::zero(1);
        let shifted = z + m as f64 + t * n as f64;
        let a = log_theta_norm(&[z], &omega, &ch).unwrap();
        let b = log_theta_norm(&[shifted], &omega, &ch).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn unitary_section_inverts_jacobian(omega in genus2(), s0 in point(), s1 in point(), t0 in point()) {
        let p = DeRhamPoint::new(vec![t0, c64(0.1, -0.2)], vec![s0, s1]).unwrap();
        let u = jacobian_of_de_rham(&p, &omega).unwrap();
        let q = unitary_section(&u, &omega);
        prop_assert!(q.unitary_defect() < 1e-12);
        let v = jacobian_of_de_rham(&q, &omega).unwrap();
        let d: Vec<_> = v.lift.iter().zip(&u.lift).map(|(a, b)| a - b).collect();
        prop_assert!(lattice_residual(&d, &omega) < 1e-10);
    }

    #[test]
    fn wedge_of_one_forms_is_antisymmetric(a in one_form(), b in one_form()) {
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        prop_assert!((ab + ba).max_abs() < 1e-12);
        prop_assert!(a.wedge(&a).max_abs() < 1e-12);
    }

    #[test]
    fn conjugation_is_an_involution(a in one_form(), b in one_form()) {
        let f = a.wedge(&b);
        prop_assert!(f.conj().conj().distance(&f) < 1e-15);
        prop_assert!(f.conj().distance(&a.conj().wedge(&b.conj())) < 1e-12);
    }
}

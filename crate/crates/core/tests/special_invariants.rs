use nagd_core::special::internals::{jy_asymptotic, jy_series};
use nagd_core::special::{bessel_i0, bessel_i1, bessel_j0, bessel_j1, bessel_k0, bessel_k1, bessel_y0, bessel_y1};
use nagd_core::Complex64;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

fn wronskian_error(z: Complex64) -> f64 {
    let (j0, j1) = (bessel_j0(z).unwrap(), bessel_j1(z).unwrap());
    let (y0, y1) = (bessel_y0(z).unwrap(), bessel_y1(z).unwrap());
    let w = j1 * y0 - j0 * y1;
    let exact = Complex64::new(2.0 / PI, 0.0) / z;
    // relative to the size of the products whose difference forms W
    let scale = exact.norm().max((j1 * y0).norm() + (j0 * y1).norm());
    (w - exact).norm() / scale
}

#[test]
fn wronskian_on_real_axis() {
    let mut z: f64 = 0.1;
    while z <= 50.0 {
        let e = wronskian_error(Complex64::new(z, 0.0));
        assert!(e <= 1e-10, "z={z}: {e:e}");
        let j1 = bessel_j1(Complex64::new(z, 0.0)).unwrap();
        let y1 = bessel_y1(Complex64::new(z, 0.0)).unwrap();
        assert_eq!(j1.im, 0.0);
        assert!(y1.im.abs() <= 1e-15 * y1.re.abs().max(1.0));
        z += 0.05;
    }
}

#[test]
fn wronskian_on_complex_grid() {
    for ir in 1..=50 {
        for ii in -5..=5 {
            let z = Complex64::new(f64::from(ir), f64::from(ii));
            let e = wronskian_error(z);
            assert!(e <= 1e-10, "z={z}: {e:e}");
        }
    }
}

#[test]
fn modified_wronskian() {
    let mut x: f64 = 0.1;
    while x <= 30.0 {
        let (i0, i1, k0, k1) = (bessel_i0(x).unwrap(), bessel_i1(x).unwrap(), bessel_k0(x).unwrap(), bessel_k1(x).unwrap());
        let w = i1 * (-k0 - k1 / x) - (i0 - i1 / x) * k1;
        assert!(((w + 1.0 / x) * x).abs() <= 1e-10, "x={x}");
        x += 0.05;
    }
}

#[test]
fn connection_formula() {
    let mut x: f64 = 0.05;
    while x <= 20.0 {
        let j = bessel_j1(Complex64::new(0.0, x)).unwrap();
        let i1 = bessel_i1(x).unwrap();
        assert!(j.re.abs() <= 1e-10 * i1 && ((j.im - i1) / i1).abs() <= 1e-10, "x={x}");
        x += 0.05;
    }
}

#[test]
fn series_and_asymptotic_agree_in_handover_band() {
    for k in 0..=100 {
        let r = 15.0 + 0.1 * f64::from(k);
        for &phase in &[0.0, 0.1, 0.25, -0.2] {
            let z = Complex64::from_polar(r, phase);
            let s = jy_series(z);
            let a = jy_asymptotic(z);
            for (u, v) in s.iter().zip(&a) {
                let scale = v.norm().max(1.0 / r.sqrt());
                assert!((u - v).norm() / scale <= 1e-8, "z={z}: {u} vs {v}");
            }
        }
    }
}

#[test]
fn single_precision_agrees_with_double() {
    for &x in &[0.5f32, 3.0, 12.0, 25.0] {
        let a = bessel_j1(nagd_core::C::new(x, 0.0)).unwrap().re;
        let b = bessel_j1(Complex64::new(f64::from(x), 0.0)).unwrap().re;
        assert!((f64::from(a) - b).abs() < 1e-5, "x={x}");
        let a = bessel_k1(x).unwrap();
        let b = bessel_k1(f64::from(x)).unwrap();
        assert!(((f64::from(a) - b) / b).abs() < 1e-5, "x={x}");
    }
}

proptest! {
    #[test]
    fn wronskian_random_right_half_plane(re in 0.1f64..50.0, im in -5.0f64..5.0) {
        let e = wronskian_error(Complex64::new(re, im));
        prop_assert!(e <= 1e-10, "{e:e}");
    }

    #[test]
    fn conjugate_symmetry(re in 0.1f64..40.0, im in 0.0f64..5.0) {
        let z = Complex64::new(re, im);
        let a = bessel_y1(z).unwrap();
        let b = bessel_y1(z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1e-3));
    }
}

use nagd_core::dynamics::{simulate_modal, simulate_nagd, IntegratorConfig};
use nagd_core::game::PseudoGradientSystem;
use nagd_core::special::{eval_modal, make_modal_solution};
use nagd_core::spectral::eigendecompose_default;
use nagd_core::{Complex64, Matrix64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn project(w: &[Complex64], x: &[f64]) -> Complex64 {
    w.iter().zip(x).map(|(wi, xi)| wi.conj() * *xi).sum()
}

#[test]
fn modal_commutation() {
    for rows in [
        vec![vec![0.4, 0.2], vec![0.2, 0.8]],
        vec![vec![6.0, 1.5], vec![-1.5, 6.0]],
        vec![vec![1.0, 0.0], vec![0.0, -0.5]],
        vec![vec![1.0, 0.3, 0.2], vec![0.3, 0.8, 0.25], vec![0.2, 0.25, 0.6]],
        vec![vec![2.0, 1.0, 0.0], vec![0.0, 1.0, 3.0], vec![0.5, 0.0, 1.0]],
    ] {
        let g = Matrix64::from_rows(&rows).unwrap();
        let n = g.rows();
        let q0: Vec<f64> = (0..n).map(|i| 0.5 - 0.3 * i as f64).collect();
        let v0: Vec<f64> = (0..n).map(|i| 0.1 * i as f64).collect();
        let cfg = IntegratorConfig::new(1.0, 20.0);
        let tr = simulate_nagd(&g, &vec![0.0; n], &q0, &v0, &cfg).unwrap();
        let s = eigendecompose_default(&g).unwrap();
        for (k, lam) in s.eigenvalues.iter().enumerate() {
            let w = &s.left_vectors[k];
            let m = simulate_modal(*lam, project(w, &q0), project(w, &v0), &cfg).unwrap();
            for (i, q) in tr.q.iter().enumerate() {
                let y = project(w, q);
                let scale = m.y[i].norm().max(1e-3 * m.y[0].norm().max(1.0));
                assert!((y - m.y[i]).norm() <= 1e-8 * scale, "lambda={lam} t={}", tr.times[i]);
            }
        }
    }
}

#[test]
fn rk4_order_against_closed_form() {
    let lam = Complex64::new(0.5, 0.0);
    let y0 = Complex64::new(1.0, 0.0);
    let v0 = Complex64::new(0.0, 0.0);
    let exact = eval_modal(&make_modal_solution(lam, 1.0, y0, v0).unwrap(), 10.0).unwrap().y;
    let err =
        |dt: f64| (simulate_modal(lam, y0, v0, &IntegratorConfig::new(1.0, 10.0).with_dt(dt)).unwrap().y.last().unwrap() - exact).norm();
    for dt in [0.1, 0.05, 0.025] {
        let ratio = err(dt) / err(dt / 2.0);
        assert!((12.0..=20.0).contains(&ratio), "dt={dt}: {ratio}");
    }
}

#[test]
fn translation_invariance_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let n = rng.gen_range(1..=4);
        let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut g = Matrix64::from_row_major(n, n, data).unwrap();
        for i in 0..n {
            g[(i, i)] += 2.0;
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut sys = PseudoGradientSystem::from_matrix(g.clone(), b.clone()).unwrap();
        let (g_h, q_h, v_h) = sys.translate_to_homogeneous(&q0, &v0).unwrap();
        let x = sys.equilibrium.clone().unwrap();
        let cfg = IntegratorConfig::new(1.0, 30.0);
        let affine = simulate_nagd(&g, &b, &q0, &v0, &cfg).unwrap();
        let homog = simulate_nagd(&g_h, &vec![0.0; n], &q_h, &v_h, &cfg).unwrap();
        for (a, h) in affine.q.iter().zip(&homog.q) {
            for i in 0..n {
                assert!((a[i] - (h[i] + x[i])).abs() <= 1e-10);
            }
        }
    }
}

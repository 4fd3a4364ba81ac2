use std::f64::consts::{PI, SQRT_2};

use breather_lab::analytic::{eval, sample, AkhmedievParams, KmParams};
use breather_lab::evolve::{run, SimConfig, Splitting, Stepper};
use breather_lab::functionals::{self, Quadrature};
use breather_lab::linalg::{symmetric_eigen, SquareMatrix};
use breather_lab::noise::NoiseSpec;
use breather_lab::spectral::{integrate_periodic, sobolev_norm};
use breather_lab::{BreatherSpec, Complex64, GridSpec, SymmetryParams};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn km_denominator_bounded_below(a in 0.5001f64..4.0, t in -100.0f64..100.0, x in -100.0f64..100.0) {
        let p = KmParams::new(a).unwrap();
        let den = p.alpha * (p.beta * x).cosh() - SQRT_2 * p.beta * (p.alpha * t).cos();
        prop_assert!(den >= (p.alpha - SQRT_2 * p.beta) * (1.0 - 1e-12));
        prop_assert!(p.alpha - SQRT_2 * p.beta > 0.0);
    }

    #[test]
    fn akhmediev_denominator_bounded_away(a in 0.0001f64..0.4999, t in -100.0f64..100.0, x in -100.0f64..100.0) {
        let p = AkhmedievParams::new(a).unwrap();
        let den = (2.0 * a).sqrt() * (p.alpha * x).cos() - (p.beta * t).cosh();
        prop_assert!(den <= ((2.0 * a).sqrt() - 1.0) * (1.0 - 1e-12));
    }

    #[test]
    fn breathers_are_finite(a in 0.501f64..3.0, b in 0.001f64..0.499, t in -30.0f64..30.0, x in -30.0f64..30.0) {
        for spec in [
            BreatherSpec::peregrine(),
            BreatherSpec::kuznetsov_ma(a).unwrap(),
            BreatherSpec::akhmediev(b).unwrap(),
        ] {
            let v = eval(&spec, t, x).unwrap();
            prop_assert!(v.re.is_finite() && v.im.is_finite());
        }
    }

    #[test]
    fn km_modulus_is_time_periodic(a in 0.55f64..2.5, t in -5.0f64..5.0, x in -10.0f64..10.0) {
        let km = BreatherSpec::kuznetsov_ma(a).unwrap();
        let period = 2.0 * PI / KmParams::new(a).unwrap().alpha;
        let d = eval(&km, t + period, x).unwrap().norm() - eval(&km, t, x).unwrap().norm();
        prop_assert!(d.abs() < 1e-9);
    }

    #[test]
    fn akhmediev_is_space_periodic(a in 0.05f64..0.45, t in -5.0f64..5.0, x in -10.0f64..10.0) {
        let ak = BreatherSpec::akhmediev(a).unwrap();
        let l = AkhmedievParams::new(a).unwrap().period();
        prop_assert!((eval(&ak, t, x + l).unwrap() - eval(&ak, t, x).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn symmetries_preserve_modulus_shape(x0 in -3.0f64..3.0, t0 in -1.0f64..1.0, phase in -3.0f64..3.0, t in -1.0f64..1.0, x in -5.0f64..5.0) {
        let s = SymmetryParams { x0, t0, phase, ..SymmetryParams::IDENTITY };
        let moved = BreatherSpec::peregrine().with_symmetry(s).unwrap();
        let v = eval(&moved, t + t0, x + x0).unwrap().norm();
        let w = eval(&BreatherSpec::peregrine(), t, x).unwrap().norm();
        prop_assert!((v - w).abs() < 1e-12);
    }

    #[test]
    fn parseval_on_noise(seed in any::<u64>(), k_max in 1usize..6) {
        let g = GridSpec::new(23.0, 128).unwrap();
        let mut spec = NoiseSpec::new(seed);
        spec.k_max = k_max as f64;
        let f = spec.sample(&g).unwrap();
        let lhs = sobolev_norm(&f, 0.0).powi(2);
        let rhs = integrate_periodic(&f.map(|v| Complex64::from(v.norm_sqr())).unwrap()).re;
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn split_step_is_time_reversible(a in 0.1f64..0.45, steps in 1usize..60, dt in 0.001f64..0.02) {
        let g = GridSpec::new(AkhmedievParams::new(a).unwrap().period(), 64).unwrap();
        let u0 = sample(&BreatherSpec::akhmediev(a).unwrap(), &g, -1.0, false).unwrap();
        for splitting in [Splitting::Strang, Splitting::Yoshida4] {
            let mut st = Stepper::new(g, splitting);
            let mut v = u0.values().to_vec();
            for _ in 0..steps {
                st.advance(&mut v, dt).unwrap();
            }
            for _ in 0..steps {
                st.advance(&mut v, -dt).unwrap();
            }
            let err = v.iter().zip(u0.values()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-10, "{splitting:?}: {err:e}");
        }
    }

    #[test]
    fn mass_is_conserved_by_each_step(seed in any::<u64>(), dt in 0.001f64..0.05) {
        let g = GridSpec::new(40.0, 128).unwrap();
        let noise = NoiseSpec::new(seed).sample(&g).unwrap();
        let u0 = sample(&BreatherSpec::stokes(), &g, 0.0, false).unwrap().axpy(0.1, &noise).unwrap();
        let q = Quadrature::PERIODIC;
        let m0 = functionals::mass(&u0, &q).unwrap();
        let u1 = Stepper::new(g, Splitting::Yoshida4).step(&u0, dt).unwrap();
        prop_assert!((functionals::mass(&u1, &q).unwrap() - m0).abs() < 1e-11);
    }

    #[test]
    fn seeded_runs_are_identical(seed in any::<u64>()) {
        let g = GridSpec::new(60.0, 128).unwrap();
        let go = || {
            let noise = NoiseSpec::new(seed).with_envelope(8.0).sample(&g).unwrap();
            let u0 = sample(&BreatherSpec::peregrine(), &g, -0.5, false).unwrap().axpy(1e-3, &noise).unwrap();
            let mut cfg = SimConfig::new(g, 0.01, -0.5, 0.0);
            cfg.record_every = 5;
            cfg.tracked_modes = vec![1, 2];
            run(&cfg, &u0).unwrap().to_csv(&[("seed".into(), seed.to_string())])
        };
        prop_assert_eq!(go(), go());
    }

    #[test]
    fn jacobi_matches_nalgebra(seed in any::<u64>(), n in 2usize..12) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.random_range(-1.0..1.0);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let ours = symmetric_eigen(&m).unwrap();
        let reference = nalgebra::DMatrix::from_fn(n, n, |i, j| m.get(i, j)).symmetric_eigen();
        let mut theirs: Vec<f64> = reference.eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.values.iter().zip(&theirs) {
            prop_assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
        for k in 0..n {
            let v = ours.vector(k);
            let mv = m.mul_vec(&v);
            let res = mv.iter().zip(v).map(|(p, q)| (p - ours.values[k] * q).abs()).fold(0.0, f64::max);
            prop_assert!(res < 1e-10);
        }
    }
}

#[test]
fn degenerate_limits_approach_peregrine() {
    let p = BreatherSpec::peregrine();
    let mut last = (f64::INFINITY, f64::INFINITY);
    for d in [1e-2, 1e-3, 1e-4, 1e-5] {
        let km = BreatherSpec::kuznetsov_ma(0.5 + d).unwrap();
        let ak = BreatherSpec::akhmediev(0.5 - d).unwrap();
        let mut e = (0.0f64, 0.0f64);
        for (t, x) in [(0.0, 0.0), (0.4, 0.9), (-1.2, 2.5)] {
            let r = eval(&p, t, x).unwrap();
            e.0 = e.0.max((eval(&km, t, x).unwrap() - r).norm());
            e.1 = e.1.max((eval(&ak, t, x).unwrap() - r).norm());
        }
        assert!(e.0 < last.0 && e.1 < last.1, "{e:?} {last:?}");
        last = e;
    }
    assert!(last.0 < 1e-3 && last.1 < 1e-3);
}

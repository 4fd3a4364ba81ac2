//! Acceptance suite: one status line per criterion, details indented below.
//! Exits non-zero when any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use breather_lab::analytic::{akhmediev_phase, eval, sample, AkhmedievParams, KmParams};
use breather_lab::evolve::{growth_config, mi_growth_rate, mi_theory_rate, run, run_to_end, SimConfig, Stepper, Splitting};
use breather_lab::functionals::{self, Frame, Lyapunov, Quadrature};
use breather_lab::noise::NoiseSpec;
use breather_lab::spectral::{integrate_periodic, sobolev_norm};
use breather_lab::variation::{
    assemble_hessian, first_variation, ode_residual, ode_residual_with, orbital_distance, pde_residual,
    second_variation, test_directions, variation_scale, windowed_sample, Equation, DEFAULT_EPS,
};
use breather_lab::{BreatherSpec, Complex64, ComplexField, GridSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn grid(l: f64, n: usize) -> GridSpec {
    GridSpec::new(l, n).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn conserved_values() -> Outcome {
    let mut o = Outcome::new();
    let q = Quadrature::LINE_EXPONENTIAL;
    for a in [0.6, 0.75, 1.0] {
        let beta = KmParams::new(a).unwrap().beta;
        let u = sample(&BreatherSpec::kuznetsov_ma(a).unwrap(), &grid(400.0, 4096), 0.0, false).unwrap();
        let r = functionals::report(&u, &q).unwrap();
        let m = (r.mass, 4.0 * beta);
        let e = (r.energy, -(8.0 / 3.0) * beta.powi(3));
        let f = (r.f, 0.8 * beta.powi(5));
        o.check(rel(m.0, m.1) < 1e-4, format!("KM a={a}: M = {:.8} vs 4β = {:.8}", m.0, m.1));
        o.check(
            rel(e.0, e.1) < 1e-4,
            format!("KM a={a}: E = {:.8} vs -(8/3)β³ = {:.8} (ratio {:.6})", e.0, e.1, e.0 / e.1),
        );
        o.check(rel(f.0, f.1) < 1e-4, format!("KM a={a}: F = {:.8} vs (4/5)β⁵ = {:.8}", f.0, f.1));
    }
    let u = sample(&BreatherSpec::peregrine(), &grid(2000.0, 1 << 15), 0.0, false).unwrap();
    let r = functionals::report(&u, &Quadrature::LINE_ALGEBRAIC).unwrap();
    let worst = [r.mass, r.momentum, r.energy, r.f].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    o.check(
        worst < 1e-3,
        format!(
            "Peregrine: M={:.2e} P={:.2e} E={:.2e} F={:.2e}",
            r.mass, r.momentum, r.energy, r.f
        ),
    );
    o
}

fn residuals() -> Outcome {
    let mut o = Outcome::new();
    let line = grid(200.0, 4096);
    let mut specs = vec![(BreatherSpec::peregrine(), line)];
    for a in [0.6, 1.0] {
        specs.push((BreatherSpec::kuznetsov_ma(a).unwrap(), line));
    }
    for a in [0.2, 0.4] {
        let l = AkhmedievParams::new(a).unwrap().period();
        specs.push((BreatherSpec::akhmediev(a).unwrap(), grid(l, 4096)));
    }
    for (spec, g) in specs {
        let pde = pde_residual(&spec, &g, 0.3, 1e-5).unwrap();
        let ode = ode_residual(&spec, &g, 0.7).unwrap();
        o.check(
            pde.sup_residual < 1e-6 && ode.sup_residual < 1e-6,
            format!(
                "{} a={}: PDE sup {:.2e}, {} sup {:.2e}",
                spec.kind, spec.a, pde.sup_residual, ode.equation, ode.sup_residual
            ),
        );
    }
    let km = BreatherSpec::kuznetsov_ma(0.8).unwrap();
    let ctrl = ode_residual_with(Equation::EcP, &km, &line, 1.2).unwrap();
    o.check(ctrl.sup_residual > 0.1, format!("Ec_P on KM a=0.8: sup {:.3} (must exceed 0.1)", ctrl.sup_residual));
    o
}

fn dispersion() -> Outcome {
    let mut o = Outcome::new();
    let eps = 1e-6;
    for i in 1..=7 {
        let k = 0.25 * i as f64;
        let fit = mi_growth_rate(k, eps, &growth_config(k, eps).unwrap()).unwrap();
        let theory = mi_theory_rate(k);
        if fit.out_of_band {
            o.details.push(format!("     k={k:.2}: out of band, measured {:.3e}, theory 0", fit.rate));
        } else {
            let err = rel(fit.rate, theory);
            o.check(
                fit.window_found && err < 0.05,
                format!("k={k:.2}: rate {:.5} vs {theory:.5} (rel {err:.1e})", fit.rate),
            );
        }
    }
    for a in [0.1, 0.25, 0.4] {
        let p = AkhmedievParams::new(a).unwrap();
        let fit = mi_growth_rate(p.alpha, eps, &growth_config(p.alpha, eps).unwrap()).unwrap();
        let err = rel(fit.rate, p.beta);
        o.check(
            fit.window_found && err < 0.05,
            format!("a={a}: k=α={:.4}, rate {:.5} vs β={:.5} (rel {err:.1e})", p.alpha, fit.rate, p.beta),
        );
    }
    o
}

/// `‖Q(t)‖_{H¹}` on a window scaled with the width of `Q(t)`.
fn perturbation_norm(t: f64) -> f64 {
    let width = (1.0 + 4.0 * t * t).sqrt() / SQRT_2;
    let g = grid(400.0 * width.max(1.0), 8192);
    sobolev_norm(&sample(&BreatherSpec::peregrine(), &g, t, true).unwrap(), 1.0)
}

fn asymptotics() -> Outcome {
    let mut o = Outcome::new();
    let ts: Vec<f64> = (0..=8).map(|i| 10f64.powf(2.0 + 0.25 * i as f64)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = ts.iter().map(|t| (t.ln(), perturbation_norm(*t).ln())).unzip();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    o.check(
        (slope + 0.5).abs() < 0.05,
        format!("decay exponent of ‖Q(t)‖_H1 over [1e2, 1e4]: {slope:.4}"),
    );

    let a = 0.25;
    let spec = BreatherSpec::akhmediev(a).unwrap();
    let g = grid(AkhmedievParams::new(a).unwrap().period(), 256);
    let theta = akhmediev_phase(a).unwrap();
    for (t, phase) in [(15.0, theta), (-15.0, theta.conj())] {
        let u = sample(&spec, &g, t, false).unwrap();
        let limit = Complex64::from_polar(1.0, t) * phase;
        let d = sobolev_norm(&u.map(|v| v - limit).unwrap(), 1.0);
        o.check(d < 1e-3, format!("Akhmediev a=0.25, t={t}: ‖B_A - e^(±iθ) e^(it)‖_H1 = {d:.2e}"));
    }
    o
}

fn variational() -> Outcome {
    let mut o = Outcome::new();
    let cases = [
        (BreatherSpec::peregrine(), grid(200.0, 2048), 0.0),
        (BreatherSpec::kuznetsov_ma(0.8).unwrap(), grid(100.0, 1024), 0.9),
        (
            BreatherSpec::akhmediev(0.25).unwrap(),
            grid(AkhmedievParams::new(0.25).unwrap().period(), 128),
            0.4,
        ),
    ];
    for (spec, g, t) in cases {
        let functional = Lyapunov::for_spec(&spec).unwrap();
        let b = windowed_sample(&spec, &g, t).unwrap();
        let frame = functional.quadrature().frame();
        let worst = test_directions(&g, frame)
            .unwrap()
            .iter()
            .map(|z| first_variation(&functional, &b, z, DEFAULT_EPS).unwrap().abs() / variation_scale(z))
            .fold(0.0f64, f64::max);
        o.check(worst < 1e-5, format!("{} first variation / (1+‖z‖²_H2): max {worst:.2e}", spec.kind));
    }

    let t0 = Instant::now();
    let km = BreatherSpec::kuznetsov_ma(0.8).unwrap();
    let b = windowed_sample(&km, &grid(80.0, 512), 0.5).unwrap();
    let h = assemble_hessian(&Lyapunov::for_spec(&km).unwrap(), &b, 12).unwrap();
    let ratio = h.max_kernel_residual() / h.spectral_norm;
    o.check(
        ratio < 1e-4,
        format!(
            "KM a=0.8 K=12: kernel residual {:.2e}, ‖H‖ {:.3}, ratio {ratio:.2e} ({:.1}s)",
            h.max_kernel_residual(),
            h.spectral_norm,
            t0.elapsed().as_secs_f64()
        ),
    );

    let t0 = Instant::now();
    let p = BreatherSpec::peregrine();
    let f = Lyapunov::for_spec(&p).unwrap();
    let g = grid(400.0, 2048);
    let b = windowed_sample(&p, &g, 50.0).unwrap();
    let h = assemble_hessian(&f, &b, 16).unwrap();
    o.check(
        h.min_eigenvalue < 0.0,
        format!(
            "Peregrine t=50 K=16: min eigenvalue {:.4e}, asymmetry {:.1e} ({:.1}s)",
            h.min_eigenvalue,
            h.asymmetry,
            t0.elapsed().as_secs_f64()
        ),
    );

    let z0 = ComplexField::from_fn(g, 50.0, |x| Complex64::from_polar((-(x / 10.0).powi(2)).exp(), 50.0)).unwrap();
    let sv = second_variation(&f, &b, &z0, &z0, DEFAULT_EPS).unwrap();
    o.check(sv < 0.0, format!("Peregrine t=50, z0 = e^(it) exp(-(x/10)²): second variation {sv:.4e}"));
    o
}

fn solver_order() -> Outcome {
    let mut o = Outcome::new();
    let a = 0.25;
    let spec = BreatherSpec::akhmediev(a).unwrap();
    let g = grid(AkhmedievParams::new(a).unwrap().period(), 64);
    let (t0, t1) = (-3.0, 0.0);
    let u0 = sample(&spec, &g, t0, false).unwrap();
    let exact = sample(&spec, &g, t1, false).unwrap();
    let q = Quadrature::PERIODIC;
    let (m0, e0) = (functionals::mass(&u0, &q).unwrap(), functionals::energy(&u0, &q).unwrap());
    let mut rows = Vec::new();
    for dt in [0.01, 0.005] {
        let mut cfg = SimConfig::new(g, dt, t0, t1);
        cfg.record_every = usize::MAX / 2;
        let (_, u) = run_to_end(&cfg, &u0).unwrap();
        let err = u.zip_with(&exact, |x, y| x - y).unwrap().sup_norm();
        let dm = (functionals::mass(&u, &q).unwrap() - m0).abs();
        let de = (functionals::energy(&u, &q).unwrap() - e0).abs();
        rows.push((dt, err, dm, de));
    }
    let (r_err, r_e) = (rows[0].1 / rows[1].1, rows[0].3 / rows[1].3);
    for (dt, err, dm, de) in &rows {
        o.details.push(format!("     dt={dt}: error {err:.3e}, |ΔM| {dm:.1e}, |ΔE| {de:.3e}"));
    }
    o.check((r_err - 4.0).abs() <= 1.0, format!("error ratio under dt halving: {r_err:.3}"));
    o.check((r_e - 4.0).abs() <= 1.0, format!("energy drift ratio under dt halving: {r_e:.3}"));
    let dm = rows.iter().fold(0.0f64, |m, r| m.max(r.2));
    o.check(dm < 1e-10, format!("mass drift (conserved exactly by both substeps): {dm:.1e}"));

    let s = sample(&BreatherSpec::stokes(), &grid(50.0, 256), 0.0, false).unwrap();
    let dt = 0.01;
    let v = Stepper::new(*s.grid(), Splitting::Strang).step(&s, dt).unwrap();
    let err = v.values().iter().map(|x| (x - Complex64::from_polar(1.0, dt)).norm()).fold(0.0, f64::max);
    o.check(err < 1e-12, format!("Stokes wave after one step: {err:.1e}"));
    o
}

fn properties() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);

    let mut worst_km = f64::INFINITY;
    let mut worst_a = f64::INFINITY;
    for _ in 0..2000 {
        let (t, x) = (rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
        let a = rng.random_range(0.5001..3.0);
        let p = KmParams::new(a).unwrap();
        let den = p.alpha * (p.beta * x).cosh() - SQRT_2 * p.beta * (p.alpha * t).cos();
        worst_km = worst_km.min(den / (p.alpha - SQRT_2 * p.beta));
        let a = rng.random_range(0.0001..0.4999);
        let p = AkhmedievParams::new(a).unwrap();
        let den = (2.0 * a).sqrt() * (p.alpha * x).cos() - (p.beta * t).cosh();
        worst_a = worst_a.min(den / ((2.0 * a).sqrt() - 1.0));
    }
    o.check(
        worst_km >= 1.0 - 1e-12 && worst_a >= 1.0 - 1e-12,
        format!("denominators: min KM ratio {worst_km:.3}, min Akhmediev ratio {worst_a:.3} (both >= 1)"),
    );

    let mut per = 0.0f64;
    for _ in 0..200 {
        let (t, x) = (rng.random_range(-5.0..5.0), rng.random_range(-20.0..20.0));
        let a = rng.random_range(0.55..2.0);
        let km = BreatherSpec::kuznetsov_ma(a).unwrap();
        let period = 2.0 * PI / KmParams::new(a).unwrap().alpha;
        per = per.max((eval(&km, t + period, x).unwrap().norm() - eval(&km, t, x).unwrap().norm()).abs());
        let a = rng.random_range(0.05..0.45);
        let ak = BreatherSpec::akhmediev(a).unwrap();
        let l = AkhmedievParams::new(a).unwrap().period();
        per = per.max((eval(&ak, t, x + l).unwrap() - eval(&ak, t, x).unwrap()).norm());
    }
    o.check(per < 1e-10, format!("KM |u| time period and Akhmediev space period: max defect {per:.1e}"));

    let pts = [(0.0, 0.0), (0.3, 1.1), (-0.7, 2.0), (1.5, -0.4)];
    let mut monotone = true;
    let mut last = (f64::INFINITY, f64::INFINITY);
    for d in [1e-2, 1e-3, 1e-4] {
        let km = BreatherSpec::kuznetsov_ma(0.5 + d).unwrap();
        let ak = BreatherSpec::akhmediev(0.5 - d).unwrap();
        let mut e = (0.0f64, 0.0f64);
        for (t, x) in pts {
            let p = eval(&BreatherSpec::peregrine(), t, x).unwrap();
            e.0 = e.0.max((eval(&km, t, x).unwrap() - p).norm());
            e.1 = e.1.max((eval(&ak, t, x).unwrap() - p).norm());
        }
        monotone &= e.0 < last.0 && e.1 < last.1;
        last = e;
    }
    o.check(
        monotone,
        format!("degenerate limits a → 1/2: final errors KM {:.1e}, Akhmediev {:.1e}, decreasing", last.0, last.1),
    );

    let g = grid(37.0, 256);
    let noise = NoiseSpec::new(rng.random()).sample(&g).unwrap();
    let lhs = sobolev_norm(&noise, 0.0).powi(2);
    let rhs = integrate_periodic(&noise.map(|v| Complex64::from(v.norm_sqr())).unwrap()).re;
    o.check((lhs - rhs).abs() < 1e-10 * (1.0 + lhs), format!("Parseval on seeded noise: {:.1e}", (lhs - rhs).abs()));

    let a = rng.random_range(0.1..0.45);
    let spec = BreatherSpec::akhmediev(a).unwrap();
    let g = grid(AkhmedievParams::new(a).unwrap().period(), 64);
    let u0 = sample(&spec, &g, -1.0, false).unwrap();
    let mut st = Stepper::new(g, Splitting::Strang);
    let mut v = u0.values().to_vec();
    for _ in 0..100 {
        st.advance(&mut v, 0.005).unwrap();
    }
    for _ in 0..100 {
        st.advance(&mut v, -0.005).unwrap();
    }
    let back = v.iter().zip(u0.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    o.check(back < 1e-8, format!("time reversibility, Akhmediev a={a:.3}: {back:.1e}"));

    let g = grid(100.0, 512);
    let seed = rng.random();
    let mk = || {
        let noise = NoiseSpec::new(seed).with_envelope(10.0).sample(&g).unwrap();
        let u0 = sample(&BreatherSpec::peregrine(), &g, -1.0, false).unwrap().axpy(1e-3, &noise).unwrap();
        let mut cfg = SimConfig::new(g, 0.01, -1.0, 0.0);
        cfg.record_every = 10;
        cfg.reference = Some(BreatherSpec::peregrine());
        cfg.tracked_modes = vec![1, 3];
        run(&cfg, &u0).unwrap().to_csv(&[])
    };
    o.check(mk() == mk(), format!("determinism: two seeded runs (seed {seed}) give identical CSV"));

    let u = sample(&BreatherSpec::peregrine(), &g, 0.0, false).unwrap();
    let d = orbital_distance(&u.roll(5), &BreatherSpec::peregrine(), 1.0, Frame::Line).unwrap();
    o.check(
        (d.best_shift - 5.0 * g.dx()).abs() < 1e-6 && d.distance < 1e-6,
        format!("orbital shift recovery: shift {:.6} vs {:.6}", d.best_shift, 5.0 * g.dx()),
    );
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("conserved-value reproduction", conserved_values),
        ("exact-solution residuals", residuals),
        ("modulational-instability dispersion", dispersion),
        ("instability by asymptotics", asymptotics),
        ("variational certification", variational),
        ("solver order and conservation", solver_order),
        ("property suites", properties),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "{} criterion {}: {name} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for d in &o.details {
            println!("    {d}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

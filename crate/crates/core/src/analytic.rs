//! Closed-form solutions of the focusing cubic NLS.
//!
//! Every breather is written as `u = e^{it} (1 + w)` and evaluated through its
//! perturbation `w`, so decay to the Stokes wave is computed without
//! cancellation. The hyperbolic factors of Kuznetsov-Ma (in `x`) and
//! Akhmediev (in `t`) are normalized by `e^{-|arg|}` so large arguments never
//! overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{check_range, Error, Result};
use crate::spectral::{ComplexField, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreatherKind {
    Stokes,
    Peregrine,
    KuznetsovMa,
    Akhmediev,
    /// Zero-background soliton `√2 sech(x) e^{it}`, used only as a solver oracle.
    Soliton,
}

impl BreatherKind {
    pub fn name(self) -> &'static str {
        match self {
            BreatherKind::Stokes => "stokes",
            BreatherKind::Peregrine => "peregrine",
            BreatherKind::KuznetsovMa => "km",
            BreatherKind::Akhmediev => "akhmediev",
            BreatherKind::Soliton => "soliton",
        }
    }

    pub fn has_background(self) -> bool {
        self != BreatherKind::Soliton
    }
}

impl fmt::Display for BreatherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BreatherKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stokes" => Ok(BreatherKind::Stokes),
            "peregrine" | "p" => Ok(BreatherKind::Peregrine),
            "km" | "kuznetsov-ma" | "kuznetsov_ma" | "kuznetsovma" => Ok(BreatherKind::KuznetsovMa),
            "akhmediev" | "a" => Ok(BreatherKind::Akhmediev),
            "soliton" => Ok(BreatherKind::Soliton),
            other => Err(Error::Usage(format!("unknown breather kind `{other}`"))),
        }
    }
}

/// Parameters of the symmetry transform
/// `√c u(c(t-t0), √c(x - vt - x0)) exp(i(xv/2 - v²t/4 + γ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryParams {
    pub scale: f64,
    pub velocity: f64,
    pub phase: f64,
    pub x0: f64,
    pub t0: f64,
}

impl Default for SymmetryParams {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl SymmetryParams {
    pub const IDENTITY: Self = Self {
        scale: 1.0,
        velocity: 0.0,
        phase: 0.0,
        x0: 0.0,
        t0: 0.0,
    };

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn validate(&self) -> Result<()> {
        check_range("scale", self.scale, "(0, inf)", self.scale > 0.0)?;
        for (name, v) in [
            ("velocity", self.velocity),
            ("phase", self.phase),
            ("x0", self.x0),
            ("t0", self.t0),
        ] {
            check_range(name, v, "finite", v.is_finite())?;
        }
        Ok(())
    }

    /// Applies the transform to a solution `u(t, x)`.
    pub fn apply(&self, u: impl Fn(f64, f64) -> Complex64, t: f64, x: f64) -> Complex64 {
        if self.is_identity() {
            return u(t, x);
        }
        let c = self.scale;
        let v = self.velocity;
        let tau = c * (t - self.t0);
        let xi = c.sqrt() * (x - v * t - self.x0);
        let gauge = Complex64::from_polar(1.0, 0.5 * x * v - 0.25 * v * v * t + self.phase);
        u(tau, xi) * c.sqrt() * gauge
    }
}

/// `α = √(8a(2a-1))`, `β = √(2(2a-1))` for `a > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmParams {
    pub alpha: f64,
    pub beta: f64,
}

impl KmParams {
    pub fn new(a: f64) -> Result<Self> {
        check_range("a", a, "(1/2, inf) for Kuznetsov-Ma", a > 0.5)?;
        Ok(Self {
            alpha: (8.0 * a * (2.0 * a - 1.0)).sqrt(),
            beta: (2.0 * (2.0 * a - 1.0)).sqrt(),
        })
    }
}

/// `β = √(8a(1-2a))`, `α = √(2(1-2a))` for `0 < a < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AkhmedievParams {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl AkhmedievParams {
    pub fn new(a: f64) -> Result<Self> {
        check_range("a", a, "(0, 1/2) for Akhmediev", a > 0.0 && a < 0.5)?;
        Ok(Self {
            a,
            alpha: (2.0 * (1.0 - 2.0 * a)).sqrt(),
            beta: (8.0 * a * (1.0 - 2.0 * a)).sqrt(),
        })
    }

    /// Spatial period `2π/α`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreatherSpec {
    pub kind: BreatherKind,
    /// Family parameter; ignored by Stokes, Peregrine and Soliton.
    pub a: f64,
    #[serde(default)]
    pub symmetry: SymmetryParams,
}

impl BreatherSpec {
    pub fn new(kind: BreatherKind, a: f64) -> Result<Self> {
        let spec = Self {
            kind,
            a,
            symmetry: SymmetryParams::IDENTITY,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn stokes() -> Self {
        Self::unchecked(BreatherKind::Stokes, 0.0)
    }

    pub fn peregrine() -> Self {
        Self::unchecked(BreatherKind::Peregrine, 0.0)
    }

    pub fn soliton() -> Self {
        Self::unchecked(BreatherKind::Soliton, 0.0)
    }

    pub fn kuznetsov_ma(a: f64) -> Result<Self> {
        Self::new(BreatherKind::KuznetsovMa, a)
    }

    pub fn akhmediev(a: f64) -> Result<Self> {
        Self::new(BreatherKind::Akhmediev, a)
    }

    fn unchecked(kind: BreatherKind, a: f64) -> Self {
        Self {
            kind,
            a,
            symmetry: SymmetryParams::IDENTITY,
        }
    }

    pub fn with_symmetry(mut self, symmetry: SymmetryParams) -> Result<Self> {
        symmetry.validate()?;
        self.symmetry = symmetry;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            BreatherKind::KuznetsovMa => KmParams::new(self.a).map(|_| ())?,
            BreatherKind::Akhmediev => AkhmedievParams::new(self.a).map(|_| ())?,
            _ => {}
        }
        self.symmetry.validate()
    }

    pub fn km_params(&self) -> Result<KmParams> {
        KmParams::new(self.a)
    }

    pub fn akhmediev_params(&self) -> Result<AkhmedievParams> {
        AkhmedievParams::new(self.a)
    }

    /// Perturbation-frame evaluator for the untransformed solution.
    fn profile(&self) -> Result<Profile> {
        Ok(match self.kind {
            BreatherKind::Stokes => Profile::Stokes,
            BreatherKind::Peregrine => Profile::Peregrine,
            BreatherKind::KuznetsovMa => Profile::KuznetsovMa(self.km_params()?),
            BreatherKind::Akhmediev => Profile::Akhmediev(self.akhmediev_params()?),
            BreatherKind::Soliton => Profile::Soliton,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Profile {
    Stokes,
    Peregrine,
    KuznetsovMa(KmParams),
    Akhmediev(AkhmedievParams),
    Soliton,
}

impl Profile {
    /// `w(t, x)` with `u = e^{it}(1 + w)`; not defined for the soliton.
    fn perturbation(&self, t: f64, x: f64) -> Complex64 {
        match *self {
            Profile::Stokes | Profile::Soliton => Complex64::new(0.0, 0.0),
            Profile::Peregrine => {
                Complex64::new(-4.0, -8.0 * t) / (1.0 + 4.0 * t * t + 2.0 * x * x)
            }
            Profile::KuznetsovMa(KmParams { alpha, beta }) => {
                let e = (-(beta * x).abs()).exp();
                let (s, c) = (alpha * t).sin_cos();
                let num = Complex64::new(beta * beta * c, alpha * s) * (-SQRT_2 * beta * e);
                let den = 0.5 * alpha * (1.0 + e * e) - SQRT_2 * beta * c * e;
                num / den
            }
            Profile::Akhmediev(AkhmedievParams { a, alpha, beta }) => {
                let e = (-(beta * t).abs()).exp();
                let e2 = e * e;
                let sign = if t < 0.0 { -1.0 } else { 1.0 };
                let num = Complex64::new(0.5 * alpha * alpha * (1.0 + e2), 0.5 * sign * beta * (1.0 - e2));
                let den = (2.0 * a).sqrt() * (alpha * x).cos() * e - 0.5 * (1.0 + e2);
                num / den
            }
        }
    }

    fn value(&self, t: f64, x: f64) -> Complex64 {
        match self {
            Profile::Soliton => Complex64::from_polar(SQRT_2 / x.cosh(), t),
            _ => Complex64::from_polar(1.0, t) * (1.0 + self.perturbation(t, x)),
        }
    }
}

fn check_point(t: f64, x: f64) -> Result<()> {
    check_range("t", t, "finite", t.is_finite())?;
    check_range("x", x, "finite", x.is_finite())
}

/// Exact solution value `u(t, x)`, symmetry transform included.
pub fn eval(spec: &BreatherSpec, t: f64, x: f64) -> Result<Complex64> {
    spec.validate()?;
    check_point(t, x)?;
    let profile = spec.profile()?;
    Ok(spec.symmetry.apply(|t, x| profile.value(t, x), t, x))
}

/// Perturbation `w = e^{-it} u - 1` relative to the unit Stokes wave.
pub fn eval_perturbation(spec: &BreatherSpec, t: f64, x: f64) -> Result<Complex64> {
    if !spec.kind.has_background() {
        return Err(Error::Usage("the soliton has no Stokes background".into()));
    }
    spec.validate()?;
    check_point(t, x)?;
    let profile = spec.profile()?;
    Ok(perturbation_of(&profile, &spec.symmetry, t, x))
}

fn perturbation_of(profile: &Profile, symmetry: &SymmetryParams, t: f64, x: f64) -> Complex64 {
    if symmetry.is_identity() {
        profile.perturbation(t, x)
    } else {
        Complex64::from_polar(1.0, -t) * symmetry.apply(|t, x| profile.value(t, x), t, x) - 1.0
    }
}

/// Samples `u` (or `w` when `as_perturbation`) on the grid nodes at time `t`.
pub fn sample(spec: &BreatherSpec, grid: &GridSpec, t: f64, as_perturbation: bool) -> Result<ComplexField> {
    if as_perturbation && !spec.kind.has_background() {
        return Err(Error::Usage("the soliton has no Stokes background".into()));
    }
    spec.validate()?;
    check_range("t", t, "finite", t.is_finite())?;
    let profile = spec.profile()?;
    let sym = spec.symmetry;
    if as_perturbation {
        ComplexField::from_fn(*grid, t, |x| perturbation_of(&profile, &sym, t, x))
    } else {
        ComplexField::from_fn(*grid, t, |x| sym.apply(|t, x| profile.value(t, x), t, x))
    }
}

/// Temporal period `2π/α` of the Kuznetsov-Ma breather.
pub fn km_period(a: f64) -> Result<f64> {
    Ok(2.0 * PI / KmParams::new(a)?.alpha)
}

/// Asymptotic phase `e^{iθ} = 1 - α² - iβ` of the Akhmediev breather as `t → +∞`.
pub fn akhmediev_phase(a: f64) -> Result<Complex64> {
    let p = AkhmedievParams::new(a)?;
    Ok(Complex64::new(1.0 - p.alpha * p.alpha, -p.beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn peregrine_center_value() {
        let v = eval(&BreatherSpec::peregrine(), 0.0, 0.0).unwrap();
        assert_eq!(v, Complex64::new(-3.0, 0.0));
    }

    #[test]
    fn stokes_at_zero_time() {
        for x in [-3.0, 0.0, 17.5] {
            assert_eq!(eval(&BreatherSpec::stokes(), 0.0, x).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn peregrine_decays_to_background() {
        let v = eval(&BreatherSpec::peregrine(), 0.0, 100.0).unwrap();
        assert!((v - 1.0).norm() < 1e-3);
        // bound from the formula: 4/(1+2x²)
        assert!((v - 1.0).norm() <= 4.0 / (1.0 + 2.0 * 100.0f64.powi(2)) + 1e-15);
        let late = eval(&BreatherSpec::peregrine(), 1e4, 0.0).unwrap();
        assert!((late - Complex64::from_polar(1.0, 1e4)).norm() < 1e-3);
    }

    #[test]
    fn km_center_value() {
        let v = eval(&BreatherSpec::kuznetsov_ma(1.0).unwrap(), 0.0, 0.0).unwrap();
        let expected = 1.0 - 4.0 / (2.0 * SQRT_2 - 2.0);
        assert!((v - expected).norm() < 1e-13, "{v}");
    }

    #[test]
    fn perturbation_examples() {
        let p = BreatherSpec::peregrine();
        assert_eq!(eval_perturbation(&p, 0.0, 0.0).unwrap(), Complex64::new(-4.0, 0.0));
        let q = eval_perturbation(&p, 1.0, 0.0).unwrap();
        assert!(close(q, Complex64::new(-4.0, -8.0) / 5.0, 1e-15));
        let s = eval_perturbation(&BreatherSpec::stokes(), 3.3, -1.2).unwrap();
        assert_eq!(s, Complex64::new(0.0, 0.0));
        assert!(eval_perturbation(&BreatherSpec::soliton(), 0.0, 0.0).is_err());
    }

    #[test]
    fn parameter_domains() {
        assert!(matches!(
            BreatherSpec::akhmediev(0.6),
            Err(Error::ParameterDomain { name: "a", .. })
        ));
        assert!(BreatherSpec::akhmediev(0.0).is_err());
        assert!(BreatherSpec::kuznetsov_ma(0.5).is_err());
        assert!(BreatherSpec::kuznetsov_ma(0.3).is_err());
        let bad = SymmetryParams {
            scale: 0.0,
            ..SymmetryParams::IDENTITY
        };
        assert!(BreatherSpec::peregrine().with_symmetry(bad).is_err());
        assert!(eval(&BreatherSpec::peregrine(), f64::NAN, 0.0).is_err());
    }

    #[test]
    fn km_period_values() {
        assert!((km_period(1.0).unwrap() - 2.0 * PI / 8f64.sqrt()).abs() < 1e-15);
        assert!((km_period(0.75).unwrap() - 2.0 * PI / 3f64.sqrt()).abs() < 1e-14);
        assert!(km_period(0.5 + 1e-12).unwrap() > 1e5);
        assert!(km_period(0.5).is_err());
    }

    #[test]
    fn akhmediev_phase_values() {
        assert!(close(akhmediev_phase(0.25).unwrap(), Complex64::new(0.0, -1.0), 1e-15));
        assert!(close(akhmediev_phase(0.5 - 1e-12).unwrap(), Complex64::new(1.0, 0.0), 1e-5));
        for a in [0.01, 0.1, 0.2, 0.3, 0.45, 0.499] {
            assert!((akhmediev_phase(a).unwrap().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn wide_arguments_stay_finite() {
        let km = BreatherSpec::kuznetsov_ma(3.0).unwrap();
        let v = eval(&km, 0.3, 1e4).unwrap();
        assert!(close(v, Complex64::from_polar(1.0, 0.3), 1e-15));
        let ak = BreatherSpec::akhmediev(0.25).unwrap();
        let v = eval(&ak, 2000.0, 0.4).unwrap();
        let limit = Complex64::from_polar(1.0, 2000.0) * akhmediev_phase(0.25).unwrap();
        assert!(close(v, limit, 1e-12));
    }

    #[test]
    fn sample_examples() {
        let g = GridSpec::new(10.0, 8).unwrap();
        let z = sample(&BreatherSpec::stokes(), &g, 0.0, true).unwrap();
        assert!(z.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)));

        let g = GridSpec::new(20.0, 64).unwrap();
        let p = sample(&BreatherSpec::peregrine(), &g, 0.0, false).unwrap();
        let (jmin, vmin) = p
            .values()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.re.total_cmp(&b.1.re))
            .unwrap();
        assert_eq!(vmin.re, -3.0);
        assert_eq!(g.node(jmin), 0.0);
    }

    #[test]
    fn soliton_matches_sech_formula() {
        let sym = SymmetryParams {
            scale: 2.0,
            velocity: 0.5,
            phase: 0.3,
            x0: -1.0,
            t0: 0.0,
        };
        let spec = BreatherSpec::soliton().with_symmetry(sym).unwrap();
        let (t, x) = (0.7, 0.4);
        let c: f64 = 2.0;
        let expected = Complex64::from_polar(
            (2.0 * c).sqrt() / (c.sqrt() * (x - 0.5 * t + 1.0)).cosh(),
            c * t + 0.5 * x * 0.5 - 0.25 * 0.25 * t + 0.3,
        );
        assert!(close(eval(&spec, t, x).unwrap(), expected, 1e-14));
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("KM".parse::<BreatherKind>().unwrap(), BreatherKind::KuznetsovMa);
        assert_eq!("peregrine".parse::<BreatherKind>().unwrap(), BreatherKind::Peregrine);
        assert!("dark".parse::<BreatherKind>().is_err());
    }
}

use std::f64::consts::PI;
use std::path::Path;

use breather_lab::analytic::AkhmedievParams;
use breather_lab::evolve::{fmt_num, growth_config, mi_growth_rate, GrowthFit, Splitting};
use breather_lab::GridSpec;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{metadata_for, Experiment};
use crate::defaults::{MI_DT, MI_EPS, MI_POINTS, MI_REL_TOL, MI_SWEEP};
use crate::error::{CliError, CliResult};
use crate::report::{metadata_lines, Artifact, Outcome};

/// Modulational-instability growth rates of seeded modes `ε cos(kx)`.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[group(skip)]
#[serde(deny_unknown_fields)]
pub struct Mi {
    /// Wavenumbers, comma separated [default: 0.25,0.5,…,1.75 unless --a is given]
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<f64>>,
    /// Akhmediev parameters; each adds a row at k = α(a), where the rate should equal β(a)
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    /// Seed amplitude, at most 1e-5
    #[arg(long)]
    pub eps: Option<f64>,
    /// Points per wavelength window
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub points: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// strang or yoshida4
    #[arg(long)]
    pub splitting: Option<String>,
    /// Pass threshold on the in-band relative error
    #[arg(long)]
    pub tol: Option<f64>,
}

struct Row {
    a: Option<f64>,
    fit: GrowthFit,
}

impl Row {
    fn relative_error(&self) -> Option<f64> {
        (!self.fit.out_of_band).then(|| ((self.fit.rate - self.fit.theory_rate) / self.fit.theory_rate).abs())
    }
}

impl Mi {
    fn fit(&self, k: f64) -> CliResult<GrowthFit> {
        let eps = self.eps.unwrap_or(MI_EPS);
        let mut cfg = growth_config(k, eps)?;
        cfg.grid = GridSpec::new(2.0 * PI / k, self.points.unwrap_or(MI_POINTS))?;
        cfg.dt = self.dt.unwrap_or(MI_DT);
        cfg.splitting = self.splitting.as_deref().unwrap_or("strang").parse()?;
        Ok(mi_growth_rate(k, eps, &cfg)?)
    }
}

impl Experiment for Mi {
    const NAME: &'static str = "mi";

    fn resolve(mut self) -> CliResult<Self> {
        if self.k.is_none() && self.a.is_none() {
            self.k = Some(MI_SWEEP.to_vec());
        }
        if let Some(k) = self.k.iter().flatten().find(|k| !(**k > 0.0)) {
            return Err(CliError::Usage(format!("wavenumber {k} must be positive")));
        }
        for a in self.a.iter().flatten() {
            AkhmedievParams::new(*a)?;
        }
        let splitting: Splitting = self.splitting.as_deref().unwrap_or("strang").parse()?;
        self.k = Some(self.k.unwrap_or_default());
        self.a = Some(self.a.unwrap_or_default());
        self.eps = Some(self.eps.unwrap_or(MI_EPS));
        self.points = Some(self.points.unwrap_or(MI_POINTS));
        self.dt = Some(self.dt.unwrap_or(MI_DT));
        self.splitting = Some(splitting.to_string());
        self.tol = Some(self.tol.unwrap_or(MI_REL_TOL));
        Ok(self)
    }

    fn execute(&self, out: Option<&Path>) -> CliResult<Outcome> {
        let mut jobs: Vec<(Option<f64>, f64)> = self.k.iter().flatten().map(|k| (None, *k)).collect();
        for a in self.a.iter().flatten() {
            jobs.push((Some(*a), AkhmedievParams::new(*a)?.alpha));
        }
        let rows: Vec<Row> = jobs
            .par_iter()
            .map(|&(a, k)| self.fit(k).map(|fit| Row { a, fit }))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<CliResult<_>>()?;

        let worst = rows.iter().filter_map(Row::relative_error).fold(0.0f64, f64::max);
        let mut o = Outcome::default();
        o.put(
            "rows",
            rows.iter()
                .map(|r| {
                    json!({
                        "k": r.fit.k,
                        "a": r.a,
                        "measured_rate": r.fit.rate,
                        "theory_rate": r.fit.theory_rate,
                        "relative_error": r.relative_error(),
                        "in_band": !r.fit.out_of_band,
                        "window_found": r.fit.window_found,
                        "fit_points": r.fit.fit_points,
                    })
                })
                .collect::<Vec<_>>(),
        );
        o.put("max_in_band_relative_error", worst);
        let windows = rows.iter().all(|r| r.fit.out_of_band || r.fit.window_found);
        o.put("all_windows_found", windows);
        o.require(windows && worst < self.tol.unwrap_or(MI_REL_TOL));

        if let Some(path) = out {
            let mut csv = metadata_lines(&metadata_for(self));
            csv.push_str("k,a,measured_rate,theory_rate,relative_error,in_band,window_found,fit_points\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    fmt_num(r.fit.k),
                    r.a.map(fmt_num).unwrap_or_default(),
                    fmt_num(r.fit.rate),
                    fmt_num(r.fit.theory_rate),
                    r.relative_error().map(fmt_num).unwrap_or_default(),
                    !r.fit.out_of_band,
                    r.fit.window_found,
                    r.fit.fit_points
                ));
            }
            o.artifacts.push(Artifact {
                path: path.to_path_buf(),
                contents: csv,
            });
        }
        Ok(o)
    }
}

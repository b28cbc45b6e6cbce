//! TOML run configuration.
//!
//! ```toml
//! [scenario]
//! id = "channel"
//! params = { shear = 1.0 }
//!
//! [sweep]
//! eps_list = [0.015625, 0.0078125, 0.00390625]
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Every other table is optional and falls back to the defaults below. The
//! only environment override is `PRANDTL_CHANNEL_OUT` for the output directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{PipelineOptions, SweepOptions};
use crate::error::{Error, Result};
use crate::fields::GridPolicy;
use crate::prandtl::CorrectorOptions;
use crate::scenario::catalog::{build, Extent, Params};
use crate::scenario::Scenario;

pub const OUTPUT_ENV: &str = "PRANDTL_CHANNEL_OUT";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    #[serde(default)]
    pub params: Params,
    pub length: Option<f64>,
    pub horizon: Option<f64>,
    pub c0: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub eps_list: Vec<f64>,
    /// Audit every point against a doubled-resolution run.
    pub audit: bool,
    pub audit_threshold: f64,
    /// Never fail on slope bars.
    pub report_only: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            eps_list: (6..=14).map(|k| 2f64.powi(-k)).collect(),
            audit: true,
            audit_threshold: 0.1,
            report_only: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    /// Stored stamps over the horizon.
    pub nt: usize,
    /// Viscous solver steps per stamp.
    pub substeps: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { nt: 200, substeps: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub delta: f64,
    pub weighted_ceiling: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { delta: 0.25, weighted_ceiling: 1e6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    pub dump_fields: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), jobs: 0, dump_fields: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub grid: GridPolicy,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub corrector: CorrectorOptions,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    /// Parses and checks a configuration; the output directory is taken
    /// from `PRANDTL_CHANNEL_OUT` when set.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(dir) = std::env::var_os(OUTPUT_ENV) {
            c.output.dir = PathBuf::from(dir);
        }
        c.check()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let e = &self.sweep.eps_list;
        if e.is_empty() {
            return bad("sweep.eps_list is empty".into());
        }
        if e.iter().any(|v| !(*v > 0.0 && v.is_finite())) || e.windows(2).any(|w| !(w[1] < w[0])) {
            return bad("sweep.eps_list must be positive and strictly decreasing".into());
        }
        for (name, v) in [
            ("grid.nx", self.grid.nx),
            ("grid.nz", self.grid.nz),
            ("grid.layer_nodes", self.grid.layer_nodes),
            ("time.nt", self.time.nt),
            ("time.substeps", self.time.substeps),
            ("corrector.substeps", self.corrector.substeps),
        ] {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if !(self.analysis.delta > 0.0 && self.analysis.delta < 0.5) {
            return bad(format!("analysis.delta = {} outside (0, 1/2)", self.analysis.delta));
        }
        if !(self.sweep.audit_threshold > 0.0) {
            return bad("sweep.audit_threshold must be positive".into());
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let s = &self.scenario;
        build(&s.id, &s.params, Some(&Extent { length: s.length, horizon: s.horizon, c0: s.c0 }))
    }

    pub fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            policy: self.grid.clone(),
            nt: self.time.nt,
            substeps: self.time.substeps,
            corrector: self.corrector.clone(),
            delta: self.analysis.delta,
        }
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            audit: self.sweep.audit,
            audit_threshold: self.sweep.audit_threshold,
            weighted_ceiling: self.analysis.weighted_ceiling,
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = RunConfig::parse("[scenario]\nid = \"channel\"\n").unwrap();
        assert_eq!(c.sweep.eps_list.len(), 9);
        assert_eq!(c.grid, GridPolicy::default());
        assert_eq!(c.pipeline(), PipelineOptions::default());
        assert!(c.scenario().is_ok());
    }

    #[test]
    fn errors_name_the_field() {
        let e = RunConfig::parse("[scenario]\nid = \"channel\"\n[grid]\nnq = 3\n").unwrap_err();
        assert!(e.to_string().contains("nq"), "{e}");
        let e = RunConfig::parse("[scenario]\nid = \"channel\"\n[sweep]\neps_list = []\n").unwrap_err();
        assert!(e.to_string().contains("eps_list"));
        let e = RunConfig::parse("[scenario]\nid = \"channel\"\n[time]\nnt = 0\n").unwrap_err();
        assert!(e.to_string().contains("time.nt"));
        assert!(RunConfig::parse("[scenario\n").is_err());
    }
}

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::domain::ParamRT;
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::qc::QCParams;

use super::commands::{capacity_set, kernel_domain};
use super::{Command, CommonArgs, Format, GammaMethodArg};

/// Everything that determines a run; echoed into every record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub common: CommonArgs,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub k_max: u32,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

impl Provenance {
    pub(super) fn start(config: &RunConfig) -> Self {
        let now = unix_ms();
        Provenance {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: config.common.seed,
            k_max: config.common.kmax,
            started_unix_ms: now,
            finished_unix_ms: now,
        }
    }

    pub(super) fn finish(mut self) -> Self {
        self.finished_unix_ms = unix_ms();
        self
    }
}

fn unix_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config: RunConfig,
    pub results: serde_json::Value,
    pub provenance: Provenance,
}

impl ResultRecord {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Re-checks the echoed config against every precondition.
    pub fn revalidate(&self) -> Result<()> {
        self.config.validate()
    }
}

fn positive_steps(name: &'static str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param(name, "need at least one grid point"));
    }
    Ok(())
}

fn ordered(name: &'static str, lo: &Scalar, hi: &Scalar) -> Result<()> {
    if !lo.cmp_value(hi).is_le() {
        return Err(Error::param(name, format!("lower bound {lo} exceeds upper bound {hi}")));
    }
    Ok(())
}

impl RunConfig {
    /// Checks the preconditions of the target module before dispatch.
    pub fn validate(&self) -> Result<()> {
        if self.common.kmax == 0 {
            return Err(Error::param("kmax", "need kmax >= 1"));
        }
        let csv_ok = matches!(self.command, Command::PhaseDiagram(_) | Command::Classify(_));
        if self.common.format == Format::Csv && !csv_ok {
            return Err(Error::param("format", "csv output is available for phase-diagram and classify"));
        }
        match &self.command {
            Command::Capacity(a) => {
                capacity_set(a)?;
                if a.fekete == 1 {
                    return Err(Error::param("fekete", "need 0 (skip) or at least 2 points"));
                }
                if (1..8).contains(&a.equilibrium) {
                    return Err(Error::param("equilibrium", "need 0 (skip) or at least 8 nodes"));
                }
            }
            Command::Gamma(a) => {
                ParamRT::new(a.r.clone(), a.t.clone())?;
                if a.method == GammaMethodArg::Shell && a.z.norm() != 0.0 {
                    return Err(Error::param("method", "the shell series is only available at z = 0"));
                }
                if !(a.delta_min > 0.0 && a.delta_min < 0.25) {
                    return Err(Error::param("delta-min", format!("need 0 < delta_min < 1/4, got {}", a.delta_min)));
                }
                if !(a.rel_tol > 0.0) {
                    return Err(Error::param("rel-tol", "need rel_tol > 0"));
                }
                if a.fekete_n < 2 {
                    return Err(Error::param("fekete-n", "need at least 2 points"));
                }
            }
            Command::Classify(a) => {
                ParamRT::new(a.r.clone(), a.t.clone())?;
            }
            Command::PhaseDiagram(a) => {
                ParamRT::new(a.r_min.clone(), a.t_min.clone())?;
                ParamRT::new(a.r_max.clone(), a.t_max.clone())?;
                ordered("r-min", &a.r_min, &a.r_max)?;
                ordered("t-min", &a.t_min, &a.t_max)?;
                positive_steps("r-steps", a.r_steps)?;
                positive_steps("t-steps", a.t_steps)?;
            }
            Command::Qc(a) => {
                QCParams::new(a.alpha.clone())?;
                ParamRT::new(a.r.clone(), a.t.clone())?;
            }
            Command::Kernel(a) => {
                kernel_domain(a)?;
                if a.z.is_empty() && a.path.is_none() {
                    return Err(Error::param("z", "need at least one evaluation point or a path"));
                }
                if a.samples < 2 {
                    return Err(Error::param("samples", "need at least 2 intervals"));
                }
            }
            Command::Counterexample(a) => {
                QCParams::new(a.alpha.clone())?;
                if a.max_pairs == 0 {
                    return Err(Error::param("max-pairs", "need at least 1"));
                }
            }
        }
        Ok(())
    }
}

use anyhow::{bail, ensure, Context, Result};
use lattice_index::descriptor::{CodeDescriptor, SchemeDescriptor};
use lattice_index::simulate::StopRule;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything a command needs; read from `--config` or a preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Prefix of every output file.
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeDescriptor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub receivers: Vec<ReceiverConfig>,
    #[serde(default = "default_target")]
    pub target_ser: f64,
    #[serde(default)]
    pub stop: StopRule,
    /// Side length of a square QAM whose closed-form error rate is written
    /// alongside the simulated curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_qam: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_target() -> f64 {
    1e-4
}

/// One receiver: its side information and SNR grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverConfig {
    /// 1-based indices of known messages. For schemes, the receiver number.
    pub side_info: Vec<usize>,
    /// Explicit grid in dB. Without it the grid is centred on the union
    /// bound at `target_ser`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<Vec<f64>>,
    #[serde(default)]
    pub grid: GridConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub below: f64,
    pub above: f64,
    pub step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            below: 2.0,
            above: 2.0,
            step: 0.5,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(s).context("invalid config")?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            !self.name.is_empty() && self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'),
            "name must be nonempty and use only letters, digits, '-' and '_'"
        );
        if self.code.is_some() && self.scheme.is_some() {
            bail!("give either a code or a scheme, not both");
        }
        ensure!(self.target_ser > 0.0 && self.target_ser < 1.0, "target_ser must lie in (0, 1)");
        ensure!(self.stop.max_trials > 0, "stop.max_trials must be positive");
        for r in &self.receivers {
            if let Some(g) = &r.snr_db {
                ensure!(
                    !g.is_empty() && g.windows(2).all(|w| w[0] < w[1]),
                    "snr_db grids must be nonempty and increasing"
                );
            }
            ensure!(r.grid.step > 0.0 && r.grid.below >= 0.0 && r.grid.above >= 0.0, "invalid grid");
            if self.scheme.is_some() {
                ensure!(
                    r.side_info.len() == 1 && (1..=3).contains(&r.side_info[0]),
                    "scheme receivers are named by a single number 1..3"
                );
            }
        }
        Ok(())
    }

    /// Identifier of the code or scheme: sha256 of its compact JSON.
    pub fn code_id(&self) -> String {
        let json = match (&self.code, &self.scheme) {
            (Some(c), _) => c.canonical_json(),
            (_, Some(s)) => serde_json::to_string(s).expect("scheme serialises"),
            _ => String::new(),
        };
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn code(&self) -> Result<&CodeDescriptor> {
        self.code.as_ref().context("config has no code")
    }

    pub fn scheme(&self) -> Result<&SchemeDescriptor> {
        self.scheme.as_ref().context("config has no scheme")
    }
}

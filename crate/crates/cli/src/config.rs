use std::fmt;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use spinphoton::cavity::{transmission_contrast, ContrastParams, InteractionModel, LossCoefficients};

/// Bad flag values or combinations; reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Ideal,
    Lossy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub const DEFAULT_Q_RATIO_SQ: f64 = 0.8;
pub const DEFAULT_PURCELL: f64 = 6.0;

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Cavity model.
    #[arg(long, value_enum, global = true)]
    pub model: Option<ModelChoice>,
    /// (Q/Q0)^2 for the lossy model [default: 0.8]
    #[arg(long, global = true, conflicts_with_all = ["alpha_m", "alpha_scat", "alpha_rad"])]
    pub q_ratio_sq: Option<f64>,
    /// Purcell factor for the lossy model [default: 6]
    #[arg(long, global = true)]
    pub purcell: Option<f64>,
    /// Mirror loss in 1/cm; with --alpha-scat and --alpha-rad replaces --q-ratio-sq.
    #[arg(long, global = true)]
    pub alpha_m: Option<f64>,
    /// Scattering loss in 1/cm.
    #[arg(long, global = true)]
    pub alpha_scat: Option<f64>,
    /// Radiation loss in 1/cm.
    #[arg(long, global = true)]
    pub alpha_rad: Option<f64>,
    /// Seed for sampling; required by --samples.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Draw this many samples per distribution.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Sampling {
    pub seed: u64,
    pub samples: u64,
}

/// Validated settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: InteractionModel<f64>,
    pub model_meta: Value,
    pub sampling: Option<Sampling>,
    pub seed: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn losses(a: &CommonArgs) -> anyhow::Result<Option<LossCoefficients<f64>>> {
    match (a.alpha_m, a.alpha_scat, a.alpha_rad) {
        (None, None, None) => Ok(None),
        (Some(alpha_m), Some(alpha_scat), Some(alpha_rad)) => {
            Ok(Some(LossCoefficients { alpha_m, alpha_scat, alpha_rad }))
        }
        _ => Err(usage("--alpha-m, --alpha-scat and --alpha-rad must be given together")),
    }
}

pub fn sampling(a: &CommonArgs) -> anyhow::Result<Option<Sampling>> {
    match (a.samples, a.seed) {
        (None, _) => Ok(None),
        (Some(_), None) => Err(usage("--samples requires an explicit --seed")),
        (Some(0), _) => Err(usage("--samples must be positive")),
        (Some(samples), Some(seed)) => Ok(Some(Sampling { seed, samples })),
    }
}

pub fn contrast(
    q: Option<f64>,
    purcell: Option<f64>,
    losses: Option<LossCoefficients<f64>>,
) -> anyhow::Result<ContrastParams<f64>> {
    let fp = purcell.unwrap_or(DEFAULT_PURCELL);
    let cp = match losses {
        Some(l) => ContrastParams::from_losses(l, fp),
        None => ContrastParams::new(q.unwrap_or(DEFAULT_Q_RATIO_SQ), fp),
    };
    cp.map_err(|e| usage(e.to_string()))
}

pub fn lossy_meta(cp: &ContrastParams<f64>, m: &InteractionModel<f64>) -> Value {
    let mut v = json!({
        "mode": "lossy",
        "q_ratio_sq": cp.q_ratio_sq(),
        "purcell": cp.purcell(),
        "delta": transmission_contrast(cp),
        "coupled_reflect": m.coupled_reflect(),
        "coupled_transmit": m.coupled_transmit(),
        "uncoupled_transmit": m.uncoupled_transmit(),
        "uncoupled_reflect": m.uncoupled_reflect(),
    });
    if let Some(l) = cp.losses() {
        v["losses"] = json!({"alpha_m": l.alpha_m, "alpha_scat": l.alpha_scat, "alpha_rad": l.alpha_rad});
    }
    v
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs) -> anyhow::Result<Self> {
        let losses = losses(a)?;
        let lossy = a.model == Some(ModelChoice::Lossy);
        let contrast_flags = a.q_ratio_sq.is_some() || a.purcell.is_some() || losses.is_some();
        if !lossy && contrast_flags {
            return Err(usage("cavity parameters need --model lossy"));
        }
        let (model, model_meta) = if lossy {
            let cp = contrast(a.q_ratio_sq, a.purcell, losses)?;
            let m = InteractionModel::from_contrast(&cp);
            (m, lossy_meta(&cp, &m))
        } else {
            (InteractionModel::ideal(), json!({"mode": "ideal"}))
        };
        Ok(Self {
            model,
            model_meta,
            sampling: sampling(a)?,
            seed: a.seed,
            format: a.format.unwrap_or_default(),
            out: a.out.clone(),
        })
    }

    pub fn reject_sampling(&self, command: &str) -> anyhow::Result<()> {
        if self.sampling.is_some() {
            return Err(usage(format!("{command} is exact; --samples is not supported")));
        }
        Ok(())
    }
}

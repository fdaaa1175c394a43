//! Experiment configuration: a flat key-value file mirroring the flags,
//! with command-line values taking precedence. The format round-trips
//! losslessly, which makes experiment provenance a plain diffable file.

use std::fmt::Write as _;
use std::path::PathBuf;
use zeromean::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// All tunables of a run. Every field has a documented default applied at
/// use time; `seed` defaults to 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub spectrum: Option<String>,
    pub n: Option<u32>,
    pub p: Option<u64>,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub margin: Option<f64>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub verify: Option<bool>,
    pub interval: Option<String>,
    pub ball: Option<String>,
    pub equispaced: Option<u32>,
    pub gauss: Option<usize>,
    pub tchakaloff: Option<bool>,
    pub certificate: Option<PathBuf>,
    pub quick: Option<bool>,
}

macro_rules! merge_fields {
    ($file:expr, $cli:expr, $($field:ident),+ $(,)?) => {{
        let mut merged = $file;
        $(
            if $cli.$field.is_some() {
                merged.$field = $cli.$field.clone();
            }
        )+
        merged
    }};
}

impl ExperimentConfig {
    /// File values overridden by command-line values.
    pub fn merge(file: ExperimentConfig, cli: &ExperimentConfig) -> ExperimentConfig {
        merge_fields!(
            file,
            cli,
            spectrum,
            n,
            p,
            tol,
            grid,
            margin,
            seed,
            jobs,
            out,
            format,
            verify,
            interval,
            ball,
            equispaced,
            gauss,
            tchakaloff,
            certificate,
            quick,
        )
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn jobs(&self) -> usize {
        self.jobs.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or(OutputFormat::Json)
    }

    /// Serialize to the flat key-value file format. Only set fields are
    /// emitted; key order is fixed.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                let _ = writeln!(out, "{key} = {v}");
            }
        };
        put("spectrum", self.spectrum.clone());
        put("n", self.n.map(|v| v.to_string()));
        put("p", self.p.map(|v| v.to_string()));
        put("tol", self.tol.map(|v| format!("{v:e}")));
        put("grid", self.grid.map(|v| v.to_string()));
        put("margin", self.margin.map(|v| format!("{v:e}")));
        put("seed", self.seed.map(|v| v.to_string()));
        put("jobs", self.jobs.map(|v| v.to_string()));
        put("out", self.out.as_ref().map(|v| v.display().to_string()));
        put("format", self.format.map(|v| v.as_str().to_string()));
        put("verify", self.verify.map(|v| v.to_string()));
        put("interval", self.interval.clone());
        put("ball", self.ball.clone());
        put("equispaced", self.equispaced.map(|v| v.to_string()));
        put("gauss", self.gauss.map(|v| v.to_string()));
        put("tchakaloff", self.tchakaloff.map(|v| v.to_string()));
        put(
            "certificate",
            self.certificate.as_ref().map(|v| v.display().to_string()),
        );
        put("quick", self.quick.map(|v| v.to_string()));
        out
    }

    pub fn parse_kv(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidInput(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::InvalidInput(format!(
                    "config line {}: bad {what} value `{value}`",
                    lineno + 1
                ))
            };
            match key {
                "spectrum" => cfg.spectrum = Some(value.to_string()),
                "n" => cfg.n = Some(value.parse().map_err(|_| bad("n"))?),
                "p" => cfg.p = Some(value.parse().map_err(|_| bad("p"))?),
                "tol" => cfg.tol = Some(value.parse().map_err(|_| bad("tol"))?),
                "grid" => cfg.grid = Some(value.parse().map_err(|_| bad("grid"))?),
                "margin" => cfg.margin = Some(value.parse().map_err(|_| bad("margin"))?),
                "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                "jobs" => cfg.jobs = Some(value.parse().map_err(|_| bad("jobs"))?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => {
                    cfg.format = Some(match value {
                        "json" => OutputFormat::Json,
                        "csv" => OutputFormat::Csv,
                        _ => return Err(bad("format")),
                    })
                }
                "verify" => cfg.verify = Some(value.parse().map_err(|_| bad("verify"))?),
                "interval" => cfg.interval = Some(value.to_string()),
                "ball" => cfg.ball = Some(value.to_string()),
                "equispaced" => {
                    cfg.equispaced = Some(value.parse().map_err(|_| bad("equispaced"))?)
                }
                "gauss" => cfg.gauss = Some(value.parse().map_err(|_| bad("gauss"))?),
                "tchakaloff" => {
                    cfg.tchakaloff = Some(value.parse().map_err(|_| bad("tchakaloff"))?)
                }
                "certificate" => cfg.certificate = Some(PathBuf::from(value)),
                "quick" => cfg.quick = Some(value.parse().map_err(|_| bad("quick"))?),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "config line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let cfg = ExperimentConfig {
            spectrum: Some("1,0;0,1;1,1".into()),
            n: Some(2),
            p: Some(3),
            tol: Some(5e-3),
            grid: Some(64),
            margin: Some(1e-3),
            seed: Some(17),
            jobs: Some(4),
            out: Some(PathBuf::from("report.json")),
            format: Some(OutputFormat::Csv),
            verify: Some(true),
            interval: Some("0.0,0.5".into()),
            ball: Some("0.5,0.5;0.52".into()),
            equispaced: Some(3),
            gauss: Some(8),
            tchakaloff: Some(false),
            certificate: Some(PathBuf::from("cert.json")),
            quick: Some(true),
        };
        let text = cfg.to_kv();
        let back = ExperimentConfig::parse_kv(&text).unwrap();
        assert_eq!(cfg, back);
        // and the file is stable under a second round trip
        assert_eq!(text, back.to_kv());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let cfg = ExperimentConfig::parse_kv("# experiment\n\nspectrum = 1,2\nseed = 3\n").unwrap();
        assert_eq!(cfg.spectrum.as_deref(), Some("1,2"));
        assert_eq!(cfg.seed, Some(3));
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(ExperimentConfig::parse_kv("bogus = 1\n").is_err());
    }

    #[test]
    fn cli_overrides_file() {
        let file = ExperimentConfig {
            grid: Some(256),
            seed: Some(1),
            ..Default::default()
        };
        let cli = ExperimentConfig {
            grid: Some(2048),
            ..Default::default()
        };
        let merged = ExperimentConfig::merge(file, &cli);
        assert_eq!(merged.grid, Some(2048));
        assert_eq!(merged.seed, Some(1));
    }
}

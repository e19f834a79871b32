//! Run configuration: strict `key = value` files plus command-line
//! overrides. Unknown keys are errors, not warnings: a silently ignored
//! typo would change the experiment while leaving the provenance hash
//! looking legitimate.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use fracheat::fbm::{HurstParam, TimeGrid};
use fracheat::noise::SamplerKind;
use fracheat::solver::{PicardOptions, ProblemSpec};
use fracheat::spectral::{synthesize, SpectralField};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Everything one Monte Carlo run needs. `threads` and `out_dir` are
/// execution concerns and stay out of the canonical form so reports are
/// byte-identical across schedulers.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub hurst: f64,
    pub p: f64,
    pub alpha: f64,
    pub c: f64,
    pub horizon: f64,
    pub modes: usize,
    pub steps: usize,
    pub spatial: usize,
    pub paths: usize,
    pub sampler: SamplerKind,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    pub ball_slack: f64,
    pub u0_mode: usize,
    pub u0_amplitude: f64,
    pub emit_z_norms: bool,
    pub threads: Option<usize>,
    pub out_dir: std::path::PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            hurst: 0.75,
            p: 2.0,
            alpha: 1.0,
            c: 2.0,
            horizon: 1.0,
            modes: 64,
            steps: 512,
            spatial: 4096,
            paths: 4,
            sampler: SamplerKind::Circulant,
            seed: 42,
            tol: 1e-8,
            max_iters: 200,
            ball_slack: 0.02,
            u0_mode: 1,
            u0_amplitude: 0.1,
            emit_z_norms: false,
            threads: None,
            out_dir: "out".into(),
        }
    }
}

impl RunConfig {
    /// Parse a flat `key = value` file into an existing config. Blank lines
    /// and `#` comments are allowed; unknown keys are errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("line {}: expected `key = value`", lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| err(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: fmt::Display,
        {
            value
                .parse::<T>()
                .map_err(|e| err(format!("bad value for {key}: {e}")))
        }
        match key {
            "hurst" => self.hurst = parse(key, value)?,
            "p" => self.p = parse(key, value)?,
            "alpha" => self.alpha = parse(key, value)?,
            "c" => self.c = parse(key, value)?,
            "horizon" => self.horizon = parse(key, value)?,
            "modes" => self.modes = parse(key, value)?,
            "steps" => self.steps = parse(key, value)?,
            "spatial" => self.spatial = parse(key, value)?,
            "paths" => self.paths = parse(key, value)?,
            "sampler" => {
                self.sampler = match value {
                    "cholesky" => SamplerKind::Cholesky,
                    "circulant" => SamplerKind::Circulant,
                    other => return Err(err(format!("unknown sampler `{other}`"))),
                }
            }
            "seed" => self.seed = parse(key, value)?,
            "tol" => self.tol = parse(key, value)?,
            "max_iters" => self.max_iters = parse(key, value)?,
            "ball_slack" => self.ball_slack = parse(key, value)?,
            "u0_mode" => self.u0_mode = parse(key, value)?,
            "u0_amplitude" => self.u0_amplitude = parse(key, value)?,
            "emit_z_norms" => self.emit_z_norms = parse(key, value)?,
            other => return Err(err(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    fn sampler_name(&self) -> &'static str {
        match self.sampler {
            SamplerKind::Cholesky => "cholesky",
            SamplerKind::Circulant => "circulant",
        }
    }

    /// Sorted `key = value` map of the semantic configuration (floats at 17
    /// significant digits); the provenance hash is taken over this.
    pub fn canonical_map(&self) -> BTreeMap<String, String> {
        let f = |x: f64| format!("{x:.16e}");
        let mut map = BTreeMap::new();
        map.insert("hurst".into(), f(self.hurst));
        map.insert("p".into(), f(self.p));
        map.insert("alpha".into(), f(self.alpha));
        map.insert("c".into(), f(self.c));
        map.insert("horizon".into(), f(self.horizon));
        map.insert("modes".into(), self.modes.to_string());
        map.insert("steps".into(), self.steps.to_string());
        map.insert("spatial".into(), self.spatial.to_string());
        map.insert("paths".into(), self.paths.to_string());
        map.insert("sampler".into(), self.sampler_name().into());
        map.insert("seed".into(), self.seed.to_string());
        map.insert("tol".into(), f(self.tol));
        map.insert("max_iters".into(), self.max_iters.to_string());
        map.insert("ball_slack".into(), f(self.ball_slack));
        map.insert("u0_mode".into(), self.u0_mode.to_string());
        map.insert("u0_amplitude".into(), f(self.u0_amplitude));
        map.insert("emit_z_norms".into(), self.emit_z_norms.to_string());
        map
    }

    pub fn canonical_string(&self) -> String {
        self.canonical_map()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// FNV-1a 64 over the canonical string, hex-encoded.
    pub fn config_hash(&self) -> String {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.canonical_string().bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }

    /// Structural validation plus the pieces the solver needs.
    pub fn problem_spec(&self) -> Result<ProblemSpec, ConfigError> {
        let hurst = HurstParam::new(self.hurst).map_err(|e| err(e.to_string()))?;
        if self.u0_mode < 1 {
            return Err(err("u0_mode must be >= 1"));
        }
        if self.u0_mode > self.modes {
            return Err(err(format!(
                "u0_mode = {} exceeds modes = {}: the initial condition would be invisible to the solver",
                self.u0_mode, self.modes
            )));
        }
        if self.spatial < 2 * self.modes.max(self.u0_mode) {
            return Err(err(format!(
                "spatial = {} too coarse for {} modes (need at least 2x)",
                self.spatial,
                self.modes.max(self.u0_mode)
            )));
        }
        let u0 = synthesize(
            &SpectralField::basis(self.u0_mode, self.u0_mode).scale(self.u0_amplitude),
            self.spatial,
        )
        .map_err(|e| err(e.to_string()))?;
        ProblemSpec::new(hurst, self.p, self.alpha, self.c, self.horizon, u0)
            .map_err(|e| err(e.to_string()))
    }

    pub fn time_grid(&self) -> Result<TimeGrid, ConfigError> {
        TimeGrid::new(self.horizon, self.steps).map_err(|e| err(e.to_string()))
    }

    pub fn picard_options(&self) -> PicardOptions {
        PicardOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            ball_slack: self.ball_slack,
            ..PicardOptions::default()
        }
    }
}

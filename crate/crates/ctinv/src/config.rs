//! Job configuration: a flat `key = value` file, overridden by flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ctinv_core::consistency::{MapBox, ScanOptions};
use ctinv_core::ctcore::SolveOptions;
use ctinv_core::forward::ForwardOptions;

use crate::error::CliError;

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "CTINV_CONFIG";

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    /// Kernel grid step.
    pub h: f64,
    /// Kernel grid cutoff.
    pub lambda: f64,
    pub k_range: i32,
    pub seeds_per_axis: usize,
    pub search_box: Option<(f64, f64)>,
    pub max_iterations: usize,
    pub solve_tolerance: f64,
    /// Determinant sampling step.
    pub scan_step: f64,
    /// Fixed scan cutoff; per-configuration default when unset.
    pub scan_lambda: Option<f64>,
    pub max_doublings: u32,
    pub map_box: MapBox,
    pub map_resolution: f64,
    /// Highest partial wave in forward tables; `max(S) + 2` when unset.
    pub ell_max: Option<u32>,
    pub forward_h: f64,
    /// Forward integration range; `lambda` when unset.
    pub forward_r_max: Option<f64>,
    pub threads: Option<usize>,
}

impl Default for JobConfig {
    fn default() -> Self {
        let solve = SolveOptions::default();
        let scan = ScanOptions::default();
        Self {
            h: 0.005,
            lambda: 400.0,
            k_range: solve.k_range,
            seeds_per_axis: solve.seeds_per_axis,
            search_box: solve.search_box,
            max_iterations: solve.max_iterations,
            solve_tolerance: solve.tolerance,
            scan_step: scan.step,
            scan_lambda: scan.lambda,
            max_doublings: scan.max_doublings,
            map_box: (-0.45, 6.0, -0.45, 6.0),
            map_resolution: 0.02,
            ell_max: None,
            forward_h: 0.005,
            forward_r_max: None,
            threads: None,
        }
    }
}

const KEYS: &[&str] = &[
    "h",
    "lambda",
    "k_range",
    "seeds_per_axis",
    "search_box",
    "max_iterations",
    "solve_tolerance",
    "scan_step",
    "scan_lambda",
    "max_doublings",
    "map_box",
    "map_resolution",
    "ell_max",
    "forward_h",
    "forward_r_max",
    "threads",
];

impl JobConfig {
    /// Reads `path`, else the file named by [`CONFIG_ENV`], else defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let from_env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let Some(path) = path.map(Path::to_path_buf).or(from_env) else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        Self::parse(&text).map_err(|e| e.in_file(&path))
    }

    /// Parses `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::parse(n + 1, "expected `key = value`"))?;
            config
                .set(key.trim(), value.trim())
                .map_err(|m| CliError::parse(n + 1, m))?;
        }
        config.validate()?;
        Ok(config)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let unset = value.eq_ignore_ascii_case("none") || value.is_empty();
        match key {
            "h" => self.h = number(value)?,
            "lambda" => self.lambda = number(value)?,
            "k_range" => self.k_range = integer(value)?,
            "seeds_per_axis" => self.seeds_per_axis = integer(value)?,
            "search_box" => self.search_box = if unset { None } else { Some(pair(value)?) },
            "max_iterations" => self.max_iterations = integer(value)?,
            "solve_tolerance" => self.solve_tolerance = number(value)?,
            "scan_step" => self.scan_step = number(value)?,
            "scan_lambda" => self.scan_lambda = if unset { None } else { Some(number(value)?) },
            "max_doublings" => self.max_doublings = integer(value)?,
            "map_box" => self.map_box = map_box(value)?,
            "map_resolution" => self.map_resolution = number(value)?,
            "ell_max" => self.ell_max = if unset { None } else { Some(integer(value)?) },
            "forward_h" => self.forward_h = number(value)?,
            "forward_r_max" => self.forward_r_max = if unset { None } else { Some(number(value)?) },
            "threads" => self.threads = if unset { None } else { Some(integer(value)?) },
            _ => return Err(format!("unknown key `{key}` (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("h", self.h),
            ("solve_tolerance", self.solve_tolerance),
            ("scan_step", self.scan_step),
            ("map_resolution", self.map_resolution),
            ("forward_h", self.forward_h),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{key} must be positive, got {v}")));
            }
        }
        if !(self.lambda > 10.0 && self.lambda.is_finite()) {
            return Err(CliError::Config(format!(
                "lambda must exceed 10, got {}",
                self.lambda
            )));
        }
        if self.h >= self.lambda {
            return Err(CliError::Config("h must be below lambda".into()));
        }
        if let Some(l) = self.scan_lambda.filter(|l| !(*l > 10.0)) {
            return Err(CliError::Config(format!(
                "scan_lambda must exceed 10, got {l}"
            )));
        }
        if let Some(r) = self.forward_r_max.filter(|r| !(*r > 10.0)) {
            return Err(CliError::Config(format!(
                "forward_r_max must exceed 10, got {r}"
            )));
        }
        if self.seeds_per_axis == 0 || self.max_iterations == 0 || self.k_range < 0 {
            return Err(CliError::Config(
                "seeds_per_axis and max_iterations must be positive, k_range >= 0".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be positive".into()));
        }
        Ok(())
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            k_range: self.k_range,
            seeds_per_axis: self.seeds_per_axis,
            search_box: self.search_box,
            max_iterations: self.max_iterations,
            tolerance: self.solve_tolerance,
        }
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            lambda: self.scan_lambda,
            step: self.scan_step,
            max_doublings: self.max_doublings,
            refine: true,
        }
    }

    pub fn forward_options(&self) -> ForwardOptions {
        ForwardOptions {
            h: self.forward_h,
            r_max: self.forward_r_max.unwrap_or(self.lambda),
            window: None,
        }
    }

    /// The configuration as `key = value` lines, readable by [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
        let mut s = String::new();
        let mut put = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("string write");
        put("h", self.h.to_string());
        put("lambda", self.lambda.to_string());
        put("k_range", self.k_range.to_string());
        put("seeds_per_axis", self.seeds_per_axis.to_string());
        put(
            "search_box",
            opt(self.search_box.map(|(a, b)| format!("{a},{b}"))),
        );
        put("max_iterations", self.max_iterations.to_string());
        put("solve_tolerance", self.solve_tolerance.to_string());
        put("scan_step", self.scan_step.to_string());
        put("scan_lambda", opt(self.scan_lambda.map(|v| v.to_string())));
        put("max_doublings", self.max_doublings.to_string());
        let (a, b, c, d) = self.map_box;
        put("map_box", format!("{a},{b},{c},{d}"));
        put("map_resolution", self.map_resolution.to_string());
        put("ell_max", opt(self.ell_max.map(|v| v.to_string())));
        put("forward_h", self.forward_h.to_string());
        put(
            "forward_r_max",
            opt(self.forward_r_max.map(|v| v.to_string())),
        );
        put("threads", opt(self.threads.map(|v| v.to_string())));
        s
    }
}

fn number(v: &str) -> Result<f64, String> {
    v.parse::<f64>()
        .map_err(|_| format!("`{v}` is not a number"))
}

fn integer<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>()
        .map_err(|_| format!("`{v}` is not a valid integer"))
}

/// Comma-separated numbers.
pub fn numbers(v: &str) -> Result<Vec<f64>, String> {
    v.split(',').map(|p| number(p.trim())).collect()
}

fn pair(v: &str) -> Result<(f64, f64), String> {
    match numbers(v)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(format!("`{v}` should be two comma-separated numbers")),
    }
}

pub fn map_box(v: &str) -> Result<MapBox, String> {
    match numbers(v)?[..] {
        [a, b, c, d] => Ok((a, b, c, d)),
        _ => Err(format!("`{v}` should be four comma-separated numbers")),
    }
}

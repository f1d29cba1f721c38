//! Run configuration: a flat `key = value` file, overlaid by flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use dirac2d::expr::Bindings;
use dirac2d::killing::SpecialCaseParams;
use num_complex::Complex64;

/// Keys accepted in config files, besides `bind.<name>`.
pub const KEYS: [&str; 27] = [
    "surface.preset",
    "surface.A",
    "surface.B",
    "surface.beta",
    "jet.order",
    "grid.u0",
    "grid.u1",
    "grid.v0",
    "grid.v1",
    "grid.nu",
    "grid.nv",
    "tol.residual",
    "seed",
    "mass",
    "mu",
    "mu1",
    "amplitudes",
    "sample.points",
    "sample.fields",
    "representation",
    "report",
    "special.k",
    "special.a",
    "special.b",
    "symmetry.A",
    "symmetry.g",
    "g0",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Unvalidated key/value pairs; later writes win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub values: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("config line {}: expected key = value, got `{line}`", n + 1));
            };
            raw.set(k.trim(), v.trim()).map_err(|e| ConfigError(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(raw)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let known = KEYS.contains(&key) || key.strip_prefix("bind.").is_some_and(|n| !n.is_empty());
        if !known {
            return err(format!("unknown key `{key}`"));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(s) => s.parse().map(Some).or_else(|_| err(format!("`{key}`: cannot parse `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSpec {
    Preset(String),
    Exprs { a: String, b: String },
    Beta(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub u: Option<(f64, f64)>,
    pub v: Option<(f64, f64)>,
    pub nu: usize,
    pub nv: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub surface: SurfaceSpec,
    pub bindings: Bindings,
    pub order: usize,
    pub grid: GridSpec,
    /// `None` means the command's default.
    pub tol: Option<f64>,
    pub seed: u64,
    pub points: usize,
    pub fields: usize,
    pub mass: f64,
    pub mu: Option<Complex64>,
    pub mu1: Complex64,
    /// `[c₁, c₂, d₁, d₂]`
    pub amplitudes: [Complex64; 4],
    pub representation: String,
    pub report: Option<PathBuf>,
    pub special: Option<SpecialCaseParams>,
    /// Constant `A` of the first-order operator.
    pub sym_a: Complex64,
    /// Constant `g` of the first-order operator.
    pub sym_g: f64,
    /// `g` at the center of the domain for second-order operators.
    pub g0: f64,
}

fn complex(key: &str, s: &str) -> Result<Complex64, ConfigError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Complex64::from_str(&t).or_else(|_| err(format!("`{key}`: cannot parse `{s}` as a complex number")))
}

fn list(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().or_else(|_| err(format!("`{key}`: cannot parse `{x}`"))))
        .collect()
}

fn four(key: &str, s: &str) -> Result<[f64; 4], ConfigError> {
    let v = list(key, s)?;
    v.try_into().or_else(|v: Vec<f64>| err(format!("`{key}` needs 4 comma-separated numbers, got {}", v.len())))
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let preset = raw.get("surface.preset");
        let a = raw.get("surface.A");
        let b = raw.get("surface.B");
        let beta = raw.get("surface.beta");
        let surface = match (preset, a, b, beta) {
            (Some(p), None, None, None) => SurfaceSpec::Preset(p.to_string()),
            (None, Some(a), Some(b), None) => SurfaceSpec::Exprs { a: a.to_string(), b: b.to_string() },
            (None, None, None, Some(beta)) => SurfaceSpec::Beta(beta.to_string()),
            (None, Some(_), None, None) | (None, None, Some(_), None) => return err("surface.A and surface.B must be given together"),
            (None, None, None, None) => return err("no surface given: set one of surface.preset, surface.A + surface.B, surface.beta"),
            _ => return err("give exactly one of surface.preset, surface.A + surface.B, surface.beta"),
        };
        let mut bindings = Bindings::new();
        for (k, v) in &raw.values {
            if let Some(name) = k.strip_prefix("bind.") {
                let x = v.parse::<f64>().or_else(|_| err(format!("`{k}`: cannot parse `{v}`")))?;
                bindings.insert(name.to_string(), x);
            }
        }
        let range = |lo: &str, hi: &str| -> Result<Option<(f64, f64)>, ConfigError> {
            match (raw.parsed::<f64>(lo)?, raw.parsed::<f64>(hi)?) {
                (Some(x), Some(y)) if x < y => Ok(Some((x, y))),
                (Some(_), Some(_)) => err(format!("`{lo}` must be below `{hi}`")),
                (None, None) => Ok(None),
                _ => err(format!("`{lo}` and `{hi}` must be given together")),
            }
        };
        let grid = GridSpec {
            u: range("grid.u0", "grid.u1")?,
            v: range("grid.v0", "grid.v1")?,
            nu: raw.parsed("grid.nu")?.unwrap_or(20),
            nv: raw.parsed("grid.nv")?.unwrap_or(20),
        };
        if grid.nu == 0 || grid.nv == 0 {
            return err("grid.nu and grid.nv must be positive");
        }
        let tol: Option<f64> = raw.parsed("tol.residual")?;
        if let Some(t) = tol {
            if !(t > 0.0 && t.is_finite()) {
                return err(format!("tol.residual must be positive, got {t}"));
            }
        }
        let order = raw.parsed("jet.order")?.unwrap_or(4);
        if !(3..=12).contains(&order) {
            return err(format!("jet.order must lie in 3..=12, got {order}"));
        }
        let amplitudes = match raw.get("amplitudes") {
            None => [1.0, 0.5, 0.3, 1.0].map(|x| Complex64::new(x, 0.0)),
            Some(s) => {
                let parts: Vec<&str> = s.split(',').collect();
                if parts.len() != 4 {
                    return err(format!("`amplitudes` needs c1,c2,d1,d2, got {} values", parts.len()));
                }
                let mut out = [Complex64::new(0.0, 0.0); 4];
                for (o, p) in out.iter_mut().zip(parts) {
                    *o = complex("amplitudes", p)?;
                }
                out
            }
        };
        let special = match (raw.parsed::<f64>("special.k")?, raw.get("special.a"), raw.get("special.b")) {
            (None, None, None) => None,
            (Some(k), Some(a), b) => {
                let a = four("special.a", a)?;
                Some(match b {
                    Some(b) => SpecialCaseParams { k, a, b: four("special.b", b)? },
                    None => SpecialCaseParams::case_ii(k, a),
                })
            }
            _ => return err("special-case parameters need special.k and special.a (special.b defaults to case II)"),
        };
        let representation = raw.get("representation").unwrap_or("pauli").to_string();
        if dirac2d::clifford::Representation::by_name(&representation).is_none() {
            return err(format!("unknown representation `{representation}` (pauli, separation)"));
        }
        let points = raw.parsed("sample.points")?.unwrap_or(100);
        if points == 0 {
            return err("sample.points must be positive");
        }
        Ok(RunConfig {
            surface,
            bindings,
            order,
            grid,
            tol,
            seed: raw.parsed("seed")?.unwrap_or(0),
            points,
            fields: raw.parsed("sample.fields")?.unwrap_or(5),
            mass: raw.parsed("mass")?.unwrap_or(1.0),
            mu: raw.get("mu").map(|s| complex("mu", s)).transpose()?,
            mu1: raw.get("mu1").map(|s| complex("mu1", s)).transpose()?.unwrap_or(Complex64::new(1.0, 0.0)),
            amplitudes,
            representation,
            report: raw.get("report").map(PathBuf::from),
            special,
            sym_a: raw.get("symmetry.A").map(|s| complex("symmetry.A", s)).transpose()?.unwrap_or(Complex64::new(0.5, 0.0)),
            sym_g: raw.parsed("symmetry.g")?.unwrap_or(0.25),
            g0: raw.parsed("g0")?.unwrap_or(0.0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut raw = RawConfig::parse("# sphere run\nsurface.preset = sphere\nseed = 3\nbind.k = 2.5\n").unwrap();
        raw.set("seed", "9").unwrap();
        let cfg = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(cfg.surface, SurfaceSpec::Preset("sphere".into()));
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.bindings["k"], 2.5);
        assert_eq!(cfg.grid.nu, 20);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RawConfig::parse("colour = red").is_err());
        assert!(RawConfig::parse("surface.preset sphere").is_err());
        let two = RawConfig::parse("surface.preset = sphere\nsurface.beta = 1").unwrap();
        assert!(RunConfig::from_raw(&two).is_err());
        let neg = RawConfig::parse("surface.beta = 1\ntol.residual = -1").unwrap();
        assert!(RunConfig::from_raw(&neg).is_err());
        assert!(RunConfig::from_raw(&RawConfig::default()).is_err());
    }

    #[test]
    fn complex_and_lists() {
        let raw = RawConfig::parse("surface.beta = 1\nmu = 0.5 + 0.25i\namplitudes = 1, 2i, 0, 1-1i\nspecial.k = 0\nspecial.a = 0,4,0,0").unwrap();
        let cfg = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(cfg.mu, Some(Complex64::new(0.5, 0.25)));
        assert_eq!(cfg.amplitudes[1], Complex64::new(0.0, 2.0));
        assert!(cfg.special.unwrap().is_case_ii());
    }
}

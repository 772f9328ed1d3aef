//! Flat `key = value` scan configuration.
//!
//! ```text
//! # comments and blank lines are ignored
//! k = 3
//! a = 1
//! m = 1
//! higher_terms = 5:0.1, 7:-0.02   # optional extra terms b sᵖ of f
//! omega = 0.9, 0.95, 0.98          # explicit list, or:
//! omega_min = 0.99
//! omega_max = 0.9999
//! count = 6
//! spacing = geometric              # linear | geometric (in m - ω)
//! N = auto                         # grid nodes, or auto
//! L = auto                         # half width, or auto
//! out = results
//! checks = spectrum, rescaled      # subset; may be empty
//! ```
//!
//! `to_text` writes the canonical form, and parsing it gives back the same
//! config.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use nld_core::numerics::MAX_DENSE_POINTS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    /// Geometric in `m - ω`.
    Geometric,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OmegaSpec {
    List(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        count: usize,
        spacing: Spacing,
    },
}

/// `None` means the automatic policy picks the value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridSpec {
    pub points: Option<usize>,
    pub half_width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Spectrum,
    Rescaled,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Spectrum => "spectrum",
            Check::Rescaled => "rescaled",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub k: u32,
    pub a: f64,
    pub m: f64,
    pub higher_terms: Vec<(u32, f64)>,
    pub omega: OmegaSpec,
    pub grid: GridSpec,
    pub out: PathBuf,
    pub checks: Vec<Check>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            k: 3,
            a: 1.0,
            m: 1.0,
            higher_terms: Vec::new(),
            omega: OmegaSpec::List(vec![0.9]),
            grid: GridSpec::default(),
            out: PathBuf::from("results"),
            checks: vec![Check::Spectrum],
        }
    }
}

/// Command-line overrides; `Some` fields replace the file values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub k: Option<u32>,
    pub a: Option<f64>,
    pub m: Option<f64>,
    pub omega: Option<Vec<f64>>,
    pub points: Option<usize>,
    pub half_width: Option<f64>,
    pub out: Option<PathBuf>,
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .with_context(|| format!("{key}: expected a number, got `{v}`"))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s))
        .collect()
}

fn auto_or<T>(v: &str, parse: impl FnOnce(&str) -> Result<T>) -> Result<Option<T>> {
    if v == "auto" {
        Ok(None)
    } else {
        parse(v).map(Some)
    }
}

impl ScanConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim().to_string();
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                bail!("line {}: duplicate key `{key}`", lineno + 1);
            }
        }
        let mut cfg = ScanConfig::default();
        let mut take = |k: &str| entries.remove(k);
        if let Some(v) = take("k") {
            cfg.k = v
                .parse()
                .with_context(|| format!("k: expected an integer, got `{v}`"))?;
        }
        if let Some(v) = take("a") {
            cfg.a = parse_f64("a", &v)?;
        }
        if let Some(v) = take("m") {
            cfg.m = parse_f64("m", &v)?;
        }
        if let Some(v) = take("higher_terms") {
            cfg.higher_terms = v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|t| {
                    let (p, b) = t.split_once(':').ok_or_else(|| {
                        anyhow!("higher_terms: expected `power:coefficient`, got `{t}`")
                    })?;
                    Ok((
                        p.trim()
                            .parse()
                            .with_context(|| format!("higher_terms: bad power `{p}`"))?,
                        parse_f64("higher_terms", b.trim())?,
                    ))
                })
                .collect::<Result<_>>()?;
        }
        let list = take("omega");
        let range = (
            take("omega_min"),
            take("omega_max"),
            take("count"),
            take("spacing"),
        );
        cfg.omega = match (list, range) {
            (Some(v), (None, None, None, None)) => OmegaSpec::List(parse_list("omega", &v)?),
            (None, (Some(lo), Some(hi), Some(n), sp)) => OmegaSpec::Range {
                min: parse_f64("omega_min", &lo)?,
                max: parse_f64("omega_max", &hi)?,
                count: n
                    .parse()
                    .with_context(|| format!("count: expected an integer, got `{n}`"))?,
                spacing: match sp.as_deref().unwrap_or("linear") {
                    "linear" => Spacing::Linear,
                    "geometric" => Spacing::Geometric,
                    other => bail!("spacing: expected linear or geometric, got `{other}`"),
                },
            },
            (None, (None, None, None, None)) => cfg.omega,
            (Some(_), _) => {
                bail!("give either `omega` or the omega_min/omega_max/count range, not both")
            }
            (None, _) => bail!("an omega range needs omega_min, omega_max and count"),
        };
        if let Some(v) = take("N") {
            cfg.grid.points = auto_or(&v, |s| {
                s.parse()
                    .with_context(|| format!("N: expected an integer or auto, got `{s}`"))
            })?;
        }
        if let Some(v) = take("L") {
            cfg.grid.half_width = auto_or(&v, |s| parse_f64("L", s))?;
        }
        if let Some(v) = take("out") {
            cfg.out = PathBuf::from(v);
        }
        if let Some(v) = take("checks") {
            let mut checks = Vec::new();
            for c in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                checks.push(match c {
                    "spectrum" => Check::Spectrum,
                    "rescaled" => Check::Rescaled,
                    other => bail!("checks: unknown check `{other}`"),
                });
            }
            checks.sort();
            checks.dedup();
            cfg.checks = checks;
        }
        if let Some(key) = entries.keys().next() {
            bail!("unknown key `{key}`");
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "k = {}", self.k);
        let _ = writeln!(s, "a = {}", self.a);
        let _ = writeln!(s, "m = {}", self.m);
        if !self.higher_terms.is_empty() {
            let terms: Vec<String> = self
                .higher_terms
                .iter()
                .map(|(p, b)| format!("{p}:{b}"))
                .collect();
            let _ = writeln!(s, "higher_terms = {}", terms.join(", "));
        }
        match &self.omega {
            OmegaSpec::List(v) => {
                let v: Vec<String> = v.iter().map(f64::to_string).collect();
                let _ = writeln!(s, "omega = {}", v.join(", "));
            }
            OmegaSpec::Range {
                min,
                max,
                count,
                spacing,
            } => {
                let _ = writeln!(s, "omega_min = {min}");
                let _ = writeln!(s, "omega_max = {max}");
                let _ = writeln!(s, "count = {count}");
                let sp = match spacing {
                    Spacing::Linear => "linear",
                    Spacing::Geometric => "geometric",
                };
                let _ = writeln!(s, "spacing = {sp}");
            }
        }
        let n = self.grid.points.map_or("auto".into(), |n| n.to_string());
        let l = self
            .grid
            .half_width
            .map_or("auto".into(), |l| l.to_string());
        let _ = writeln!(s, "N = {n}");
        let _ = writeln!(s, "L = {l}");
        let _ = writeln!(s, "out = {}", self.out.display());
        let checks: Vec<&str> = self.checks.iter().map(|c| c.as_str()).collect();
        let _ = writeln!(s, "checks = {}", checks.join(", "));
        s
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(k) = o.k {
            self.k = k;
        }
        if let Some(a) = o.a {
            self.a = a;
        }
        if let Some(m) = o.m {
            self.m = m;
        }
        if let Some(w) = &o.omega {
            self.omega = OmegaSpec::List(w.clone());
        }
        if let Some(n) = o.points {
            self.grid.points = Some(n);
        }
        if let Some(l) = o.half_width {
            self.grid.half_width = Some(l);
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            bail!("k must be at least 1");
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            bail!("a must be positive, got {}", self.a);
        }
        if !(self.m.is_finite() && self.m > 0.0) {
            bail!("m must be positive, got {}", self.m);
        }
        if let OmegaSpec::Range {
            min, max, count, ..
        } = self.omega
        {
            if count == 0 || (count == 1 && min != max) {
                bail!("an omega range needs count >= 2");
            }
            if min > max {
                bail!("omega_min {min} exceeds omega_max {max}");
            }
        }
        let omegas = self.omegas();
        if omegas.is_empty() {
            bail!("no frequencies requested");
        }
        for w in &omegas {
            if !(*w > 0.0 && *w < self.m) {
                bail!("every ω must satisfy 0 < ω < m = {}, got {w}", self.m);
            }
        }
        if let Some(n) = self.grid.points {
            if n > MAX_DENSE_POINTS {
                bail!("N = {n} exceeds the dense-solver budget of {MAX_DENSE_POINTS} nodes");
            }
        }
        if let Some(l) = self.grid.half_width {
            if !(l.is_finite() && l > 0.0) {
                bail!("L must be positive, got {l}");
            }
        }
        if self.checks.contains(&Check::Rescaled) && self.m != 1.0 {
            bail!("the rescaled check is written for m = 1");
        }
        Ok(())
    }

    /// Requested frequencies, ascending.
    pub fn omegas(&self) -> Vec<f64> {
        let mut w = match &self.omega {
            OmegaSpec::List(v) => v.clone(),
            OmegaSpec::Range {
                min,
                max,
                count,
                spacing,
            } => {
                let (min, max, count) = (*min, *max, *count);
                if count < 2 {
                    vec![min; count]
                } else {
                    (0..count)
                        .map(|i| {
                            let t = i as f64 / (count - 1) as f64;
                            match spacing {
                                _ if i == 0 => min,
                                _ if i == count - 1 => max,
                                Spacing::Linear => min + t * (max - min),
                                Spacing::Geometric => {
                                    self.m
                                        - (self.m - min) * ((self.m - max) / (self.m - min)).powf(t)
                                }
                            }
                        })
                        .collect()
                }
            }
        };
        w.sort_by(f64::total_cmp);
        w
    }

    pub fn wants(&self, check: Check) -> bool {
        self.checks.contains(&check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_round_trip() {
        let text = "k=4\nomega_min = 0.99\nomega_max=0.9999 # near m\ncount=6\nspacing=geometric\nN=1025\nchecks=rescaled,spectrum\n";
        let cfg = ScanConfig::parse(text).unwrap();
        assert_eq!(cfg.checks, vec![Check::Spectrum, Check::Rescaled]);
        let canon = cfg.to_text();
        assert_eq!(ScanConfig::parse(&canon).unwrap(), cfg);
        assert_eq!(ScanConfig::parse(&canon).unwrap().to_text(), canon);
        let w = cfg.omegas();
        assert_eq!(w.len(), 6);
        assert_eq!((w[0], w[5]), (0.99, 0.9999));
        let r: Vec<f64> = w.windows(2).map(|p| (1.0 - p[1]) / (1.0 - p[0])).collect();
        assert!(r.iter().all(|x| (x - r[0]).abs() < 1e-12));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "omega = 1.2",
            "omega = 0.9\nomega_min = 0.5",
            "N = 5000",
            "frobnicate = 1",
            "k = 3\nk = 4",
            "m = 2\nomega = 0.9\nchecks = rescaled",
            "omega_min = 0.9",
        ] {
            assert!(ScanConfig::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut cfg = ScanConfig::parse("omega_min=0.5\nomega_max=0.6\ncount=3").unwrap();
        cfg.apply(&Overrides {
            omega: Some(vec![0.95, 0.9]),
            points: Some(257),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.omegas(), vec![0.9, 0.95]);
        assert_eq!(cfg.grid.points, Some(257));
    }
}

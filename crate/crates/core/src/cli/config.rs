//! Command-line flags, the `key=value` config file, and their merge into a [`RunConfig`].

use crate::error::{Error, Result};
use crate::pair::Tolerances;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "lightcone", version, about = "Möbius invariants of surfaces and surface pairs in the light-cone model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Frame, invariants and classifiers of one surface.
    Analyze(Flags),
    /// Pair invariants θ, ρ, ζ and the verdict.
    Pair(Flags),
    /// S-Willmore dual with verification.
    Dual(Flags),
    /// Darboux transform of an isothermic surface.
    Darboux(Flags),
    /// Contact-element invariants along a pair.
    Contact(Flags),
    /// List catalog surfaces, or export one as surface samples.
    Catalog(Flags),
    /// Run the built-in property suite.
    Selftest(Flags),
}

#[derive(Args, Debug, Default, Clone)]
#[command(allow_negative_numbers = true)]
pub struct Flags {
    /// Surface reference: `<name>`, `catalog:<name>`, `file:<path>`.
    #[arg(long)]
    pub surface: Option<String>,
    /// First surface of a pair.
    #[arg(long)]
    pub a: Option<String>,
    /// Second surface: also `dual:<name>` or `reflect:<name>[:x0,x1,...|:random]`.
    #[arg(long)]
    pub b: Option<String>,
    /// Grid spacing.
    #[arg(long)]
    pub h: Option<f64>,
    /// Grid size `N` or `NuxNv`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Chart origin `u,v`; defaults to a grid centered on the catalog reference point.
    #[arg(long, allow_hyphen_values = true)]
    pub origin: Option<String>,
    /// Finite-difference stencil order (2, 4, 6, 8).
    #[arg(long)]
    pub stencil: Option<usize>,
    /// Tolerances `rel` or `rel,abs`.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output format: json or csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plain-text `key=value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Darboux spectral constant.
    #[arg(long)]
    pub c: Option<f64>,
    /// Darboux initial μ as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub mu0: Option<String>,
    /// Darboux initial ξ as comma-separated components.
    #[arg(long, allow_hyphen_values = true)]
    pub xi0: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Pair,
    Dual,
    Darboux,
    Contact,
    Catalog,
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a run depends on, after merging the config file and flags.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub surface: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub h: f64,
    pub grid: [usize; 2],
    pub origin: Option<[f64; 2]>,
    pub stencil: Option<usize>,
    pub tol: Tolerances,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub c: f64,
    pub mu0: [f64; 2],
    pub xi0: Vec<f64>,
}

const KEYS: &[&str] = &[
    "surface", "a", "b", "h", "grid", "origin", "stencil", "tol", "seed", "format", "out", "c", "mu0", "xi0",
];

/// Reads `key=value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("config line {}: expected key=value", n + 1)))?;
        let k = k.trim().trim_start_matches("--").to_string();
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::Invalid(format!("config line {}: unknown key '{k}'", n + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn flag_map(f: &Flags) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("surface", f.surface.clone());
    put("a", f.a.clone());
    put("b", f.b.clone());
    put("h", f.h.map(|x| x.to_string()));
    put("grid", f.grid.clone());
    put("origin", f.origin.clone());
    put("stencil", f.stencil.map(|x| x.to_string()));
    put("tol", f.tol.clone());
    put("seed", f.seed.map(|x| x.to_string()));
    put("format", f.format.clone());
    put("out", f.out.as_ref().map(|p| p.display().to_string()));
    put("c", f.c.map(|x| x.to_string()));
    put("mu0", f.mu0.clone());
    put("xi0", f.xi0.clone());
    m
}

fn floats(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("{key}: cannot parse '{x}' as a number"))))
        .collect()
}

fn parse<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Invalid(format!("{key}: cannot parse '{s}'")))
}

impl RunConfig {
    /// Parses a full argument list, program name first.
    pub fn from_args<I, T>(args: I) -> Result<RunConfig>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| Error::Invalid(e.to_string()))?;
        RunConfig::from_cli(cli)
    }

    pub fn from_cli(cli: Cli) -> Result<RunConfig> {
        let (command, flags) = match cli.command {
            CliCommand::Analyze(f) => (Command::Analyze, f),
            CliCommand::Pair(f) => (Command::Pair, f),
            CliCommand::Dual(f) => (Command::Dual, f),
            CliCommand::Darboux(f) => (Command::Darboux, f),
            CliCommand::Contact(f) => (Command::Contact, f),
            CliCommand::Catalog(f) => (Command::Catalog, f),
            CliCommand::Selftest(f) => (Command::Selftest, f),
        };
        let mut map = match &flags.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        map.extend(flag_map(&flags));
        RunConfig::from_map(command, &map)
    }

    /// Builds and validates a config from merged `key → value` entries.
    pub fn from_map(command: Command, m: &BTreeMap<String, String>) -> Result<RunConfig> {
        let get = |k: &str| m.get(k).map(String::as_str);
        let h = get("h").map(|s| parse::<f64>("h", s)).transpose()?.unwrap_or(1e-2);
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Invalid(format!("h must be positive, got {h}")));
        }
        let grid = match get("grid") {
            None => [32, 32],
            Some(s) => {
                let parts: Vec<&str> = s.split(['x', 'X', ',']).collect();
                match parts.as_slice() {
                    [n] => {
                        let n = parse("grid", n)?;
                        [n, n]
                    }
                    [a, b] => [parse("grid", a)?, parse("grid", b)?],
                    _ => return Err(Error::Invalid(format!("grid: expected N or NuxNv, got '{s}'"))),
                }
            }
        };
        if grid[0] == 0 || grid[1] == 0 {
            return Err(Error::Invalid("grid must have at least one node per direction".into()));
        }
        let origin = match get("origin") {
            None => None,
            Some(s) => match floats("origin", s)?.as_slice() {
                [u, v] => Some([*u, *v]),
                _ => return Err(Error::Invalid("origin: expected u,v".into())),
            },
        };
        let stencil = get("stencil").map(|s| parse::<usize>("stencil", s)).transpose()?;
        if let Some(p) = stencil {
            crate::charts::grid::Stencil::from_order(p)?;
        }
        let mut tol = Tolerances::default();
        if let Some(s) = get("tol") {
            match floats("tol", s)?.as_slice() {
                [r] => tol.rel = *r,
                [r, a] => {
                    tol.rel = *r;
                    tol.abs = *a;
                }
                _ => return Err(Error::Invalid("tol: expected rel or rel,abs".into())),
            }
            if !(tol.rel > 0.0 && tol.abs >= 0.0) {
                return Err(Error::Invalid("tol: tolerances must be positive".into()));
            }
        }
        let format = match get("format").unwrap_or("json") {
            "json" => Format::Json,
            "csv" => Format::Csv,
            other => return Err(Error::Invalid(format!("format must be json or csv, got '{other}'"))),
        };
        let mu0 = match get("mu0") {
            None => [0.0, 0.0],
            Some(s) => match floats("mu0", s)?.as_slice() {
                [r] => [*r, 0.0],
                [r, i] => [*r, *i],
                _ => return Err(Error::Invalid("mu0: expected re[,im]".into())),
            },
        };
        Ok(RunConfig {
            command,
            surface: get("surface").map(str::to_string),
            a: get("a").map(str::to_string),
            b: get("b").map(str::to_string),
            h,
            grid,
            origin,
            stencil,
            tol,
            seed: get("seed").map(|s| parse("seed", s)).transpose()?.unwrap_or(0),
            format,
            out: get("out").map(PathBuf::from),
            c: get("c").map(|s| parse("c", s)).transpose()?.unwrap_or(1.0),
            mu0,
            xi0: get("xi0").map(|s| floats("xi0", s)).transpose()?.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let mut m = parse_config_text("# run\nsurface = cylinder\nh=0.02\ngrid=8x10\n").unwrap();
        m.extend(flag_map(&Flags { h: Some(0.005), ..Default::default() }));
        let c = RunConfig::from_map(Command::Analyze, &m).unwrap();
        assert_eq!(c.h, 0.005);
        assert_eq!(c.grid, [8, 10]);
        assert_eq!(c.surface.as_deref(), Some("cylinder"));
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |k: &str, v: &str| {
            let m = BTreeMap::from([(k.to_string(), v.to_string())]);
            RunConfig::from_map(Command::Pair, &m).is_err()
        };
        assert!(bad("h", "-1"));
        assert!(bad("format", "xml"));
        assert!(bad("stencil", "3"));
        assert!(bad("grid", "0"));
        assert!(parse_config_text("colour=red").is_err());
        assert!(parse_config_text("no equals sign").is_err());
    }
}

//! Run configuration: built-in defaults, overridden by an optional
//! `key = value` file, overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cphi_core::special_functions::PrecisionBudget;
use cphi_core::symbol::DirichletSymbol;
use cphi_core::{Complex64, Error};
use serde_json::{json, Value};

/// Environment variable overriding the cap on stored matrix entries.
pub const MAX_ENTRIES_ENV: &str = "CPHI_MAX_ENTRIES";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Settings that may come from the config file or from flags. `None` means
/// "not given at this layer".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub c1_re: Option<f64>,
    pub c1_im: Option<f64>,
    pub c2_abs: Option<f64>,
    pub c2_arg: Option<f64>,
    pub q: Option<u32>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_terms: Option<usize>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    /// Layers `top` over `self`.
    pub fn merged_with(self, top: Overrides) -> Overrides {
        Overrides {
            c1_re: top.c1_re.or(self.c1_re),
            c1_im: top.c1_im.or(self.c1_im),
            c2_abs: top.c2_abs.or(self.c2_abs),
            c2_arg: top.c2_arg.or(self.c2_arg),
            q: top.q.or(self.q),
            rows: top.rows.or(self.rows),
            cols: top.cols.or(self.cols),
            abs_tol: top.abs_tol.or(self.abs_tol),
            rel_tol: top.rel_tol.or(self.rel_tol),
            max_terms: top.max_terms.or(self.max_terms),
            format: top.format.or(self.format),
            output: top.output.or(self.output),
        }
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file_contents(text: &str) -> Result<Overrides, String> {
        let mut out = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            let bad = |e: &dyn fmt::Display| format!("line {}: {key}: {e}", n + 1);
            match key.as_str() {
                "c1_re" => out.c1_re = Some(value.parse().map_err(|e| bad(&e))?),
                "c1_im" => out.c1_im = Some(value.parse().map_err(|e| bad(&e))?),
                "c2_abs" => out.c2_abs = Some(value.parse().map_err(|e| bad(&e))?),
                "c2_arg" => out.c2_arg = Some(value.parse().map_err(|e| bad(&e))?),
                "q" => out.q = Some(value.parse().map_err(|e| bad(&e))?),
                "rows" => out.rows = Some(value.parse().map_err(|e| bad(&e))?),
                "cols" => out.cols = Some(value.parse().map_err(|e| bad(&e))?),
                "tol" => {
                    let t: f64 = value.parse().map_err(|e| bad(&e))?;
                    out.abs_tol = Some(t);
                    out.rel_tol = Some(t);
                }
                "abs_tol" => out.abs_tol = Some(value.parse().map_err(|e| bad(&e))?),
                "rel_tol" => out.rel_tol = Some(value.parse().map_err(|e| bad(&e))?),
                "max_terms" => out.max_terms = Some(value.parse().map_err(|e| bad(&e))?),
                "format" => out.format = Some(value.parse().map_err(|e: String| bad(&e))?),
                "output" => out.output = Some(PathBuf::from(value)),
                other => return Err(format!("line {}: unknown key '{other}'", n + 1)),
            }
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Overrides, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        Self::parse_file_contents(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Fully resolved configuration, validated before any computation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub c1_re: f64,
    pub c1_im: f64,
    pub c2_abs: f64,
    pub c2_arg: f64,
    pub q: u32,
    /// Highest row index `I`; `None` picks a size from the symbol.
    pub rows: Option<usize>,
    /// Column count `J`; `None` picks a size from the symbol.
    pub cols: Option<usize>,
    pub budget: PrecisionBudget,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(o: Overrides) -> Result<RunConfig, Error> {
        let defaults = PrecisionBudget::default();
        let budget = PrecisionBudget::new(
            o.abs_tol.unwrap_or(defaults.abs_tol()),
            o.rel_tol.unwrap_or(defaults.rel_tol()),
            o.max_terms.unwrap_or(defaults.max_terms()),
        )?;
        let cfg = RunConfig {
            c1_re: o.c1_re.unwrap_or(2.0),
            c1_im: o.c1_im.unwrap_or(0.0),
            c2_abs: o.c2_abs.unwrap_or(0.5),
            c2_arg: o.c2_arg.unwrap_or(0.0),
            q: o.q.unwrap_or(2),
            rows: o.rows,
            cols: o.cols,
            budget,
            format: o.format,
            output: o.output,
        };
        cfg.symbol()?;
        Ok(cfg)
    }

    pub fn symbol(&self) -> Result<DirichletSymbol, Error> {
        DirichletSymbol::from_polar(
            Complex64::new(self.c1_re, self.c1_im),
            self.c2_abs,
            self.c2_arg,
            self.q,
        )
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Echo of every resolved setting, for reproducibility.
    pub fn echo(&self) -> Value {
        json!({
            "c1_re": self.c1_re,
            "c1_im": self.c1_im,
            "c2_abs": self.c2_abs,
            "c2_arg": self.c2_arg,
            "q": self.q,
            "rows": self.rows,
            "cols": self.cols,
            "abs_tol": self.budget.abs_tol(),
            "rel_tol": self.budget.rel_tol(),
            "max_terms": self.budget.max_terms(),
        })
    }
}

/// The entry cap from [`MAX_ENTRIES_ENV`], or the library default.
pub fn max_entries() -> Result<usize, Error> {
    match std::env::var(MAX_ENTRIES_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| *x >= 1.0 && x.is_finite())
            .map(|x| x as usize)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{MAX_ENTRIES_ENV} = '{v}' is not a positive entry count"
                ))
            }),
        Err(_) => Ok(cphi_core::operator_matrix::DEFAULT_MAX_ENTRIES),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing() {
        let o = Overrides::parse_file_contents(
            "# comment\nc1_re = 3\n c2-abs=0.25 # trailing\n\ntol = 1e-10\nformat = CSV\n",
        )
        .unwrap();
        assert_eq!(o.c1_re, Some(3.0));
        assert_eq!(o.c2_abs, Some(0.25));
        assert_eq!((o.abs_tol, o.rel_tol), (Some(1e-10), Some(1e-10)));
        assert_eq!(o.format, Some(Format::Csv));
        assert!(Overrides::parse_file_contents("bogus = 1").is_err());
        assert!(Overrides::parse_file_contents("q = two").is_err());
        assert!(Overrides::parse_file_contents("c1_re 2").is_err());
    }

    #[test]
    fn precedence() {
        let file = Overrides {
            c1_re: Some(3.0),
            c2_abs: Some(0.1),
            ..Overrides::default()
        };
        let flags = Overrides {
            c1_re: Some(4.0),
            ..Overrides::default()
        };
        let cfg = RunConfig::resolve(file.merged_with(flags)).unwrap();
        assert_eq!((cfg.c1_re, cfg.c2_abs, cfg.q), (4.0, 0.1, 2));
    }

    #[test]
    fn invalid_symbol_rejected() {
        let o = Overrides {
            c1_re: Some(0.6),
            ..Overrides::default()
        };
        let err = RunConfig::resolve(o).unwrap_err();
        assert!(err
            .to_string()
            .contains("symbol violates Re c1 ≥ 1/2 + |c2|"));
    }
}

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

use qboson_core::scalar::Rational;

/// `alpha` as given: a value, or the q-boson specialization `-(1 - q)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Value(Rational),
    QBoson,
}

impl Alpha {
    pub fn resolve(&self, s: &Rational) -> Rational {
        match self {
            Alpha::Value(a) => a.clone(),
            Alpha::QBoson => s.clone() * s.clone() - Rational::one(),
        }
    }
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        if text.trim().eq_ignore_ascii_case("qboson") {
            Ok(Alpha::QBoson)
        } else {
            parse_rational(text).map(Alpha::Value)
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Value(a) => write!(f, "{a}"),
            Alpha::QBoson => write!(f, "qboson"),
        }
    }
}

/// Parses `"3"`, `"-2/3"` or `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let bad = || format!("not a rational number: {text:?}");
    if t.contains('/') {
        let r = BigRational::from_str(t).map_err(|_| bad())?;
        return Ok(r);
    }
    let (neg, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let whole = format!("{int}{frac}");
    let numer =
        BigRational::from_str(if whole.is_empty() { "0" } else { &whole }).map_err(|_| bad())?;
    let denom = BigRational::from_integer(10.into()).pow(frac.len() as i32);
    let r = numer / denom;
    Ok(if neg { -r } else { r })
}

/// A number in the config file: integer, float or string literal.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Int(n) => n.to_string(),
            Number::Float(x) => x.to_string(),
            Number::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    k: Option<usize>,
    n_colors: Option<u8>,
    s: Option<Number>,
    alpha: Option<Number>,
    window: Option<i64>,
    seed: Option<u64>,
    t_end: Option<f64>,
    depth: Option<usize>,
    out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Flag values; `None` when the flag was not given.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub k: Option<usize>,
    pub n_colors: Option<u8>,
    pub s: Option<String>,
    pub alpha: Option<String>,
    pub q_boson: bool,
    pub window: Option<i64>,
    pub seed: Option<u64>,
    pub t_end: Option<f64>,
    pub depth: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Effective settings: flags over file over defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub k: usize,
    /// `None` when neither flag nor file set it.
    pub n_colors: Option<u8>,
    pub s: Rational,
    pub alpha: Alpha,
    pub window: i64,
    pub seed: u64,
    pub t_end: f64,
    pub depth: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: 3,
            n_colors: None,
            s: Rational::new(1.into(), 2.into()),
            alpha: Alpha::Value(Rational::new(2.into(), 3.into())),
            window: 2,
            seed: 0,
            t_end: 1.0,
            depth: 6,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self, String> {
        let d = RunConfig::default();
        let s_text = flags.s.or(file.s.map(|n| n.text()));
        let alpha_text = flags.alpha.or(file.alpha.map(|n| n.text()));
        let s = s_text
            .map(|t| parse_rational(&t))
            .transpose()?
            .unwrap_or(d.s);
        if s.is_zero() {
            return Err("s must be nonzero".into());
        }
        let alpha = if flags.q_boson {
            Alpha::QBoson
        } else {
            alpha_text
                .map(|t| t.parse())
                .transpose()?
                .unwrap_or(d.alpha)
        };
        let window = flags.window.or(file.window).unwrap_or(d.window);
        if window < 0 {
            return Err(format!("window must be nonnegative, got {window}"));
        }
        Ok(RunConfig {
            k: flags.k.or(file.k).unwrap_or(d.k),
            n_colors: flags.n_colors.or(file.n_colors),
            s,
            alpha,
            window,
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            t_end: flags.t_end.or(file.t_end).unwrap_or(d.t_end),
            depth: flags.depth.or(file.depth).unwrap_or(d.depth),
            out: flags.out.or(file.out),
        })
    }

    pub fn colors(&self) -> u8 {
        self.n_colors.unwrap_or(2)
    }

    pub fn alpha_value(&self) -> Rational {
        self.alpha.resolve(&self.s)
    }

    pub fn q(&self) -> Rational {
        self.s.clone() * self.s.clone()
    }
}

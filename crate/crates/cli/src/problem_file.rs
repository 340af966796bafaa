//! `key = value` problem files.
//!
//! ```text
//! # ∫_1^5 ∫_{x/5}^{x²+1} sin(xt) dt dx
//! f     = sin(x*t)
//! t0    = x/5
//! t1    = x^2 + 1
//! x0    = 1
//! x_end = 5
//! ```
//!
//! `f`, `t0`, `t1`, `x0`, `x_end` are required. Optional keys: `a`, `b`
//! (outer limits as functions of x, selecting the general solver), `h`, `n`,
//! `order`, `tolerance`, and `mode` (`plain` or `general`).

use std::fmt;
use std::path::Path;

use dblint_core::{GeneralProblem, Problem};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Plain,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub f: String,
    pub t0: String,
    pub t1: String,
    pub x0: f64,
    pub x_end: f64,
    pub a: Option<String>,
    pub b: Option<String>,
    pub h: Option<f64>,
    pub n: Option<usize>,
    pub order: Option<usize>,
    pub tolerance: Option<f64>,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for FileError {}

fn err(line: usize, message: impl Into<String>) -> FileError {
    FileError {
        line,
        message: message.into(),
    }
}

/// Decimal literal with optional sign and exponent; no `inf`/`nan`.
fn decimal(line: usize, key: &str, v: &str) -> Result<f64, FileError> {
    let ok = !v.is_empty()
        && v.bytes().any(|c| c.is_ascii_digit())
        && v.bytes()
            .all(|c| c.is_ascii_digit() || matches!(c, b'.' | b'e' | b'E' | b'+' | b'-'));
    match v.parse::<f64>() {
        Ok(x) if ok && x.is_finite() => Ok(x),
        _ => Err(err(line, format!("`{key}` is not a decimal number: `{v}`"))),
    }
}

fn integer(line: usize, key: &str, v: &str) -> Result<usize, FileError> {
    v.parse().map_err(|_| {
        err(
            line,
            format!("`{key}` is not a non-negative integer: `{v}`"),
        )
    })
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let mut f = None;
        let mut t0 = None;
        let mut t1 = None;
        let mut x0 = None;
        let mut x_end = None;
        let mut pf = ProblemFile {
            f: String::new(),
            t0: String::new(),
            t1: String::new(),
            x0: 0.0,
            x_end: 0.0,
            a: None,
            b: None,
            h: None,
            n: None,
            order: None,
            tolerance: None,
            mode: Mode::Plain,
        };
        let mut mode = None;
        let mut seen = std::collections::HashSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected `key = value`, found `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(err(line, format!("`{key}` has no value")));
            }
            if !seen.insert(key.to_string()) {
                return Err(err(line, format!("duplicate key `{key}`")));
            }
            match key {
                "f" => f = Some(value.to_string()),
                "t0" => t0 = Some(value.to_string()),
                "t1" => t1 = Some(value.to_string()),
                "x0" => x0 = Some(decimal(line, key, value)?),
                "x_end" => x_end = Some(decimal(line, key, value)?),
                "a" => pf.a = Some(value.to_string()),
                "b" => pf.b = Some(value.to_string()),
                "h" => pf.h = Some(decimal(line, key, value)?),
                "n" => pf.n = Some(integer(line, key, value)?),
                "order" => pf.order = Some(integer(line, key, value)?),
                "tolerance" => pf.tolerance = Some(decimal(line, key, value)?),
                "mode" => {
                    mode = Some(match value {
                        "plain" => Mode::Plain,
                        "general" => Mode::General,
                        other => return Err(err(line, format!("unknown mode `{other}`"))),
                    })
                }
                other => return Err(err(line, format!("unknown key `{other}`"))),
            }
        }

        let missing = |k: &str| err(0, format!("missing required key `{k}`"));
        pf.f = f.ok_or_else(|| missing("f"))?;
        pf.t0 = t0.ok_or_else(|| missing("t0"))?;
        pf.t1 = t1.ok_or_else(|| missing("t1"))?;
        pf.x0 = x0.ok_or_else(|| missing("x0"))?;
        pf.x_end = x_end.ok_or_else(|| missing("x_end"))?;

        let has_outer = pf.a.is_some() || pf.b.is_some();
        pf.mode = mode.unwrap_or(if has_outer {
            Mode::General
        } else {
            Mode::Plain
        });
        match pf.mode {
            Mode::General if pf.a.is_none() || pf.b.is_none() => {
                return Err(err(0, "general mode needs both `a` and `b`"))
            }
            Mode::Plain if has_outer => {
                return Err(err(0, "`a`/`b` are only meaningful in general mode"))
            }
            _ => {}
        }
        Ok(pf)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        ProblemFile::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn problem(&self, quad_order: usize) -> Result<Problem, CliError> {
        Ok(
            Problem::parse(&self.f, &self.t0, &self.t1, self.x0, self.x_end)?
                .with_quad_order(quad_order)?,
        )
    }

    pub fn general_problem(&self, quad_order: usize) -> Result<GeneralProblem, CliError> {
        let (Some(a), Some(b)) = (&self.a, &self.b) else {
            return Err(CliError::Usage(
                "general mode needs both `a` and `b`".into(),
            ));
        };
        Ok(
            GeneralProblem::parse(&self.f, &self.t0, &self.t1, a, b, self.x0, self.x_end)?
                .with_quad_order(quad_order)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
# worked example
f     = sin(x*t)
t0    = x/5
t1    = x^2 + 1   # upper limit
x0    = 1
x_end = 5
";

    #[test]
    fn parses_the_example() {
        let pf = ProblemFile::parse(EXAMPLE).unwrap();
        assert_eq!(pf.f, "sin(x*t)");
        assert_eq!(pf.t1, "x^2 + 1");
        assert_eq!((pf.x0, pf.x_end), (1.0, 5.0));
        assert_eq!(pf.mode, Mode::Plain);
        assert!(pf.problem(20).is_ok());
    }

    #[test]
    fn optional_keys() {
        let text = format!("{EXAMPLE}h = 6.3e-4\norder = 5\ntolerance = 1e-12\nn = 10\n");
        let pf = ProblemFile::parse(&text).unwrap();
        assert_eq!(pf.h, Some(6.3e-4));
        assert_eq!(pf.order, Some(5));
        assert_eq!(pf.tolerance, Some(1e-12));
        assert_eq!(pf.n, Some(10));
    }

    #[test]
    fn general_mode_from_outer_limits() {
        let pf = ProblemFile::parse(&format!("{EXAMPLE}a = 1\nb = x\n")).unwrap();
        assert_eq!(pf.mode, Mode::General);
        assert!(pf.general_problem(20).is_ok());
        assert!(ProblemFile::parse(&format!("{EXAMPLE}a = 1\n")).is_err());
        assert!(ProblemFile::parse(&format!("{EXAMPLE}a = 1\nb = x\nmode = plain\n")).is_err());
    }

    #[test]
    fn rejects_bad_documents() {
        let e = ProblemFile::parse(&format!("{EXAMPLE}colour = red\n")).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(e.message.contains("unknown key"));
        assert!(ProblemFile::parse("f = 1\nt0 = 0\nt1 = 1\nx0 = 0\n")
            .unwrap_err()
            .message
            .contains("x_end"));
        assert!(ProblemFile::parse(&EXAMPLE.replace("x0    = 1", "x0 = one")).is_err());
        assert!(ProblemFile::parse(&EXAMPLE.replace("x0    = 1", "x0 = inf")).is_err());
        assert!(ProblemFile::parse(&format!("{EXAMPLE}x0 = 2\n")).is_err());
        assert!(ProblemFile::parse(&format!("{EXAMPLE}just text\n")).is_err());
        assert!(ProblemFile::parse(&format!("{EXAMPLE}mode = fancy\n")).is_err());
    }
}

//! Output formatting and the error report printed on stderr.

use std::fmt;

use serde::Serialize;
use taille::geometry::GeometryError;
use taille::io::IoError;
use taille::lattice::LatticeError;
use taille::nerve::NerveError;
use taille::{CochainError, SemigroupError, TwistError};

/// `printf("%.15g")`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (14 - exp) as usize, x))
    }
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn csv_table(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(Failure::internal)?;
    for r in rows {
        w.write_record(&r).map_err(Failure::internal)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::internal(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// A failed run: exit code 1 for domain errors, 2 for usage errors.
#[derive(Debug)]
pub struct Failure {
    pub exit_code: i32,
    pub module: &'static str,
    pub variant: &'static str,
    pub message: String,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    module: &'a str,
    variant: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            exit_code: 2,
            module: "cli",
            variant: "Usage",
            message: message.into(),
        }
    }

    pub fn file(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure {
            exit_code: 1,
            module: "cli",
            variant: "File",
            message: format!("{}: {e}", path.display()),
        }
    }

    fn internal(e: impl fmt::Display) -> Self {
        Failure {
            exit_code: 1,
            module: "cli",
            variant: "Output",
            message: e.to_string(),
        }
    }

    fn domain(module: &'static str, variant: &'static str, e: impl fmt::Display) -> Self {
        Failure {
            exit_code: 1,
            module,
            variant,
            message: e.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = ErrorDoc {
            error: ErrorBody {
                module: self.module,
                variant: self.variant,
                message: &self.message,
            },
        };
        serde_json::to_string(&doc).expect("serializable error")
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::domain(e.module(), e.variant(), e)
    }
}

impl From<SemigroupError> for Failure {
    fn from(e: SemigroupError) -> Self {
        Failure::domain("semigroup", e.variant(), e)
    }
}

impl From<CochainError> for Failure {
    fn from(e: CochainError) -> Self {
        Failure::domain("cochain", e.variant(), e)
    }
}

impl From<TwistError> for Failure {
    fn from(e: TwistError) -> Self {
        Failure::domain("twist", e.variant(), e)
    }
}

impl From<NerveError> for Failure {
    fn from(e: NerveError) -> Self {
        Failure::domain("nerve", e.variant(), e)
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::domain("geometry", e.variant(), e)
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::domain("lattice", e.variant(), e)
    }
}

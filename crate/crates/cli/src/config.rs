use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;

/// A missing or contradictory option, reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| UsageError(format!("missing required option --{flag}")).into())
}

/// Fields present in `other` replace those of `self`.
pub trait Overlay {
    fn overlay(self, other: Self) -> Self;
}

macro_rules! overlay {
    ($t:ty { $($field:ident),* $(,)? }) => {
        impl $crate::config::Overlay for $t {
            fn overlay(mut self, other: Self) -> Self {
                $(
                    if other.$field.is_some() {
                        self.$field = other.$field;
                    }
                )*
                self
            }
        }
    };
}
pub(crate) use overlay;

/// Parses a TOML document (or JSON, by extension), reporting the path of
/// the offending field on schema errors.
pub fn load_document<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json {
        let mut de = serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(&mut de).map_err(|e| schema_error(e.path(), e.inner()))
    } else {
        let de = toml::Deserializer::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        serde_path_to_error::deserialize(de).map_err(|e| schema_error(e.path(), e.inner()))
    };
    parsed.with_context(|| format!("invalid {}", path.display()))
}

fn schema_error(path: &serde_path_to_error::Path, inner: &dyn fmt::Display) -> anyhow::Error {
    // TOML messages put the position first and the reason last
    let msg = inner.to_string();
    let lines: Vec<&str> = msg.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let text = match lines.as_slice() {
        [] => String::new(),
        [one] => (*one).to_owned(),
        [first, .., last] => format!("{last} ({first})"),
    };
    anyhow::anyhow!("at field `{path}`: {text}")
}

/// Parses a kebab-case enum value through its serde names.
pub fn parse_enum<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|e| e.to_string())
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

//! Optional configuration file: either a JSON object or `key = value` lines
//! (`#` starts a comment). Keys are the long flag names.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

const KEYS: [&str; 16] = [
    "equation", "set", "rep", "grid", "box", "mass", "tol", "seed", "sigma", "dt", "samples", "axis", "theta", "velocity",
    "dtheta", "out",
];

#[derive(Debug, PartialEq)]
pub struct UsageError(pub String);

#[derive(Debug, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, UsageError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut values = BTreeMap::new();
        if text.trim_start().starts_with('{') {
            let json: serde_json::Value =
                serde_json::from_str(text).map_err(|e| UsageError(format!("config is not valid JSON: {e}")))?;
            let obj = json.as_object().ok_or_else(|| UsageError("config JSON must be an object".into()))?;
            for (k, v) in obj {
                let s = match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::Bool(b) => b.to_string(),
                    _ => return Err(UsageError(format!("config key `{k}` must be a string, number or boolean"))),
                };
                values.insert(k.clone(), s);
            }
        } else {
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) =
                    line.split_once('=').ok_or_else(|| UsageError(format!("config line {}: expected key=value", n + 1)))?;
                values.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        if let Some(k) = values.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(UsageError(format!("unknown config key `{k}`")));
        }
        Ok(Self { values })
    }

    /// The flag if given, else the parsed config value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| UsageError(format!("config `{key}` = `{v}`: {e}"))))
            .transpose()
    }

    /// Like [`Config::pick`] for a string flag that must be present and parse.
    pub fn required<T: FromStr>(&self, flag: Option<String>, key: &str) -> Result<T, UsageError>
    where
        T::Err: Display,
    {
        let raw: String = self.pick(flag, key)?.ok_or_else(|| UsageError(format!("--{key} is required")))?;
        raw.parse::<T>().map_err(|e| UsageError(format!("--{key} {raw}: {e}")))
    }

    pub fn out(&self, flag: Option<&PathBuf>) -> Result<Option<PathBuf>, UsageError> {
        self.pick(flag.cloned(), "out")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_and_json_agree() {
        let kv = Config::parse("# defaults\ngrid = 16\nbox=8.5  # comment\nset = q3\n").unwrap();
        let js = Config::parse(r#"{"grid": 16, "box": 8.5, "set": "q3"}"#).unwrap();
        assert_eq!(kv, js);
        assert_eq!(kv.pick::<usize>(None, "grid").unwrap(), Some(16));
        assert_eq!(kv.pick::<usize>(Some(32), "grid").unwrap(), Some(32));
        assert_eq!(kv.pick::<f64>(None, "mass").unwrap(), None);
    }

    #[test]
    fn bad_input_is_a_usage_error() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("grid 16").is_err());
        assert!(Config::parse("[1, 2]").is_err());
        assert!(Config::parse(r#"{"grid": [16]}"#).is_err());
        let c = Config::parse("grid = sixteen").unwrap();
        assert!(c.pick::<usize>(None, "grid").is_err());
        assert!(c.required::<String>(None, "set").is_err());
    }
}

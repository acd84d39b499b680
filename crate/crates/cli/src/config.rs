//! Flag/config-file resolution and the provenance header every output carries.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Environment variable that replaces the built-in default seed.
pub const SEED_ENV: &str = "BELLAB_SEED";
pub const DEFAULT_SEED: u64 = 1;

/// Flat `key = value` text with `#` comments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key = value, got `{raw}`", k + 1))?;
            let key = key.trim();
            if key.is_empty() {
                bail!("config line {}: empty key", k + 1);
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                bail!("config line {}: duplicate key `{key}`", k + 1);
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

/// Resolves each parameter as flag, then config file, then default, and
/// records the result for the output header.
#[derive(Debug)]
pub struct Resolver {
    command: &'static str,
    file: ConfigFile,
    used: Vec<String>,
    values: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(command: &'static str, config: Option<&Path>) -> Result<Self> {
        let file = match config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Ok(Resolver {
            command,
            file,
            used: Vec::new(),
            values: BTreeMap::new(),
        })
    }

    fn file_value<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.used.push(key.to_string());
        match self.file.get(key) {
            Some(v) => v.parse().map(Some).map_err(|e| anyhow!("config key `{key}`: {e}")),
            None => Ok(None),
        }
    }

    pub fn optional<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.used.push(key.to_string());
        let v = match flag {
            Some(v) => Some(v),
            None => self.file_value(key)?,
        };
        if let Some(v) = &v {
            self.record(key, v);
        }
        Ok(v)
    }

    pub fn get<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.optional(key, flag)?.unwrap_or_else(|| {
            self.record(key, &default);
            default
        }))
    }

    pub fn required<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T::Err: Display,
    {
        self.optional(key, flag)?
            .ok_or_else(|| anyhow!("missing `{key}` (give --{key} or set it in the config file)"))
    }

    /// Seed from flag, config, `BELLAB_SEED`, then [`DEFAULT_SEED`].
    pub fn seed(&mut self, flag: Option<u64>) -> Result<u64> {
        let env = match std::env::var(SEED_ENV) {
            Ok(v) => Some(v.trim().parse::<u64>().with_context(|| format!("{SEED_ENV}={v}"))?),
            Err(_) => None,
        };
        self.get("seed", flag, env.unwrap_or(DEFAULT_SEED))
    }

    /// Reads a key without echoing it (execution resources such as thread counts).
    pub fn unrecorded<T: FromStr>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.used.push(key.to_string());
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file_value(key),
        }
    }

    /// Marks keys as consumed without reading them.
    pub fn ignore(&mut self, keys: &[&str]) {
        self.used.extend(keys.iter().map(|k| k.to_string()));
    }

    pub fn record(&mut self, key: &str, value: &dyn Display) {
        self.values.insert(key.to_string(), value.to_string());
    }

    /// Fails on config keys that no parameter consumed.
    pub fn finish(&self) -> Result<()> {
        let unknown: Vec<&str> = self
            .file
            .entries
            .keys()
            .map(String::as_str)
            .filter(|k| !self.used.iter().any(|u| u == k))
            .collect();
        if !unknown.is_empty() {
            bail!("unknown config key(s) for `{}`: {}", self.command, unknown.join(", "));
        }
        Ok(())
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// `# bellab <version> <command> key=value ...`
    pub fn header(&self) -> String {
        let mut s = format!("# bellab {} {}", env!("CARGO_PKG_VERSION"), self.command);
        for (k, v) in &self.values {
            s.push(' ');
            s.push_str(k);
            s.push('=');
            s.push_str(v);
        }
        s
    }

    /// Header fields as a JSON object for structured reports.
    pub fn header_json(&self) -> serde_json::Value {
        serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let c = ConfigFile::parse("# top\n eta = 0.5 # trailing\n\nseed=7\n").unwrap();
        assert_eq!(c.get("eta"), Some("0.5"));
        assert_eq!(c.get("seed"), Some("7"));
        assert_eq!(c.get("F"), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("eta 0.5").is_err());
        assert!(ConfigFile::parse("= 3").is_err());
        assert!(ConfigFile::parse("a=1\na=2").is_err());
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let mut r = Resolver {
            command: "x",
            file: ConfigFile::parse("eta = 0.5\nF = 0.9").unwrap(),
            used: vec![],
            values: BTreeMap::new(),
        };
        assert_eq!(r.get("eta", Some(0.1), 1.0).unwrap(), 0.1);
        assert_eq!(r.get("F", None, 1.0).unwrap(), 0.9);
        assert_eq!(r.get("grid", None, 256usize).unwrap(), 256);
        assert_eq!(
            r.header(),
            format!("# bellab {} x F=0.9 eta=0.1 grid=256", env!("CARGO_PKG_VERSION"))
        );
        r.finish().unwrap();
    }

    #[test]
    fn unknown_keys_are_reported() {
        let r = Resolver {
            command: "x",
            file: ConfigFile::parse("typo = 1").unwrap(),
            used: vec![],
            values: BTreeMap::new(),
        };
        assert!(r.finish().unwrap_err().to_string().contains("typo"));
    }
}

//! Scenario files.
//!
//! A scenario is a line-oriented text file of `[section]` headers followed by
//! `key = value` lines. `#` starts a comment anywhere outside a quoted
//! string; blank lines are ignored. Keys are unique within a section and
//! sections may appear once each.
//!
//! ```text
//! [space]
//! domain = 0, 0.5          # interval split into `cells` equal cells
//! cells = 64
//! atoms = 2: 0.5, 3: 1     # optional omega: mass pairs
//!
//! [functions]
//! phi = hinge(shift = t)
//! phi1 = linear()
//!
//! [task]
//! samples = 200
//!
//! [values]
//! z = random(0.01, 10)
//! ```
//!
//! Instead of `domain` and `cells`, a space may list `reps` and `masses`
//! explicitly. Function values use the family grammar of
//! [`mokit_core::family`]; `table(file = "...")` paths are resolved relative
//! to the scenario file. Vectors in `[values]` are either a comma separated
//! list with one entry per point (cells first, then atoms), `const(c)`,
//! `indicator(i, j, ...)` or `random(lo, hi)` / `random(lo, hi, zero_prob)`.
//!
//! Which keys are accepted depends on the task; see [`crate::task::Task`].

use std::collections::BTreeMap;
use std::fmt;

use mokit_core::error::Error as CoreError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ConfigError {}

/// A value together with where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
    /// 1-based column of the first character of `value`.
    pub col: usize,
}

impl Entry {
    pub fn error(&self, msg: impl Into<String>) -> ConfigError {
        ConfigError { line: self.line, col: self.col, msg: msg.into() }
    }

    /// Error at byte `pos` inside the value.
    pub fn error_at(&self, pos: usize, msg: impl Into<String>) -> ConfigError {
        let chars = self.value.get(..pos).map_or(pos, |s| s.chars().count());
        ConfigError { line: self.line, col: self.col + chars, msg: msg.into() }
    }

    /// Maps a core parse error to a position in the file.
    pub fn core_error(&self, e: CoreError) -> ConfigError {
        match e {
            CoreError::Parse { pos, msg } => self.error_at(pos, msg),
            other => self.error(other.to_string()),
        }
    }

    pub fn f64(&self) -> Result<f64, ConfigError> {
        parse_f64(&self.value).ok_or_else(|| self.error(format!("expected a number, found '{}'", self.value)))
    }

    pub fn usize(&self) -> Result<usize, ConfigError> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("expected a nonnegative integer, found '{}'", self.value)))
    }

    pub fn u64(&self) -> Result<u64, ConfigError> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("expected a nonnegative integer, found '{}'", self.value)))
    }

    pub fn bool(&self) -> Result<bool, ConfigError> {
        match self.value.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            v => Err(self.error(format!("expected true or false, found '{v}'"))),
        }
    }

    /// Comma separated numbers, with positions for errors.
    pub fn list(&self) -> Result<Vec<f64>, ConfigError> {
        self.items().into_iter().map(|(pos, s)| parse_f64(s).ok_or_else(|| self.error_at(pos, format!("expected a number, found '{s}'")))).collect()
    }

    /// Comma separated items with their byte offsets, trimmed.
    pub fn items(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        for part in self.value.split(',') {
            let lead = part.len() - part.trim_start().len();
            out.push((start + lead, part.trim()));
            start += part.len() + 1;
        }
        out
    }
}

/// Numbers accept `inf` in addition to the usual float syntax.
pub fn parse_f64(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" => Some(f64::INFINITY),
        t if t.eq_ignore_ascii_case("nan") || t.contains("inf") || t.contains("Inf") => None,
        t => t.parse().ok(),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Section {
    pub line: usize,
    pub entries: BTreeMap<String, Entry>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    pub sections: BTreeMap<String, Section>,
}

pub const SECTIONS: [&str; 4] = ["space", "functions", "task", "values"];

impl Config {
    pub fn parse(src: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        let mut current: Option<String> = None;
        let mut any = false;
        for (n, raw) in src.lines().enumerate() {
            let line = n + 1;
            let text = strip_comment(raw);
            let trimmed = text.trim();
            if trimmed.is_empty() {
                continue;
            }
            any = true;
            let indent = text.len() - text.trim_start().len();
            if let Some(rest) = trimmed.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return Err(ConfigError { line, col: indent + 1, msg: "unterminated section header".into() });
                };
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(ConfigError {
                        line,
                        col: indent + 2,
                        msg: format!("unknown section '{name}' (expected one of {})", SECTIONS.join(", ")),
                    });
                }
                if cfg.sections.contains_key(name) {
                    return Err(ConfigError { line, col: indent + 2, msg: format!("section '{name}' appears twice") });
                }
                cfg.sections.insert(name.to_string(), Section { line, entries: BTreeMap::new() });
                current = Some(name.to_string());
                continue;
            }
            let Some(eq) = text.find('=') else {
                return Err(ConfigError { line, col: indent + 1, msg: "expected 'key = value' or '[section]'".into() });
            };
            let Some(section) = current.as_ref() else {
                return Err(ConfigError { line, col: indent + 1, msg: "key outside of any section".into() });
            };
            let key = text[..eq].trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ConfigError { line, col: indent + 1, msg: format!("invalid key '{key}'") });
            }
            let after = &text[eq + 1..];
            let lead = after.len() - after.trim_start().len();
            let value = after.trim();
            let col = text[..eq + 1 + lead].chars().count() + 1;
            if value.is_empty() {
                return Err(ConfigError { line, col, msg: format!("missing value for '{key}'") });
            }
            let sec = cfg.sections.get_mut(section).expect("current section exists");
            if sec.entries.contains_key(key) {
                return Err(ConfigError { line, col: indent + 1, msg: format!("duplicate key '{key}' in [{section}]") });
            }
            sec.entries.insert(key.to_string(), Entry { value: value.to_string(), line, col });
        }
        if !any {
            return Err(ConfigError { line: 1, col: 1, msg: "empty scenario".into() });
        }
        Ok(cfg)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section)?.entries.get(key)
    }

    /// Rejects keys outside `allowed[section]` and sections not listed.
    pub fn check_keys(&self, allowed: &[(&str, &[&str])], context: &str) -> Result<(), ConfigError> {
        for (name, sec) in &self.sections {
            let Some((_, keys)) = allowed.iter().find(|(s, _)| s == name) else {
                return Err(ConfigError { line: sec.line, col: 1, msg: format!("section [{name}] is not used by {context}") });
            };
            for (key, entry) in &sec.entries {
                if !keys.contains(&key.as_str()) {
                    let hint = if keys.is_empty() { String::from("none") } else { keys.join(", ") };
                    return Err(ConfigError {
                        line: entry.line,
                        col: entry.col,
                        msg: format!("unknown key '{key}' in [{name}] for {context} (accepted: {hint})"),
                    });
                }
            }
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

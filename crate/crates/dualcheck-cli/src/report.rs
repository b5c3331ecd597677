//! Deterministic command reports and their text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::dsl::{print, SystemDecl};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub name: String,
    /// SHA-256 of the canonical source text.
    pub digest: String,
    pub n: usize,
    pub m: usize,
    pub p: usize,
}

impl InputInfo {
    pub fn of(decl: &SystemDecl) -> Self {
        let digest = Sha256::digest(print(decl).as_bytes());
        InputInfo {
            name: decl.name.clone(),
            digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
            n: decl.n(),
            m: decl.dep.len(),
            p: decl.equations.len(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FlagInfo {
    pub max_order: Option<u32>,
    pub subst: Vec<String>,
    pub seed: Option<u64>,
}

/// One intermediate operator of a computation.
#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub order: Option<u32>,
    pub rank: Option<usize>,
    /// Whether a compatibility search proved its result complete.
    pub certified: Option<bool>,
    pub unknowns: Vec<String>,
    pub operator: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub fixture: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub input: Option<InputInfo>,
    pub flags: FlagInfo,
    pub verdict: String,
    /// `false` when a search bound was hit before an answer was reached.
    pub definite: bool,
    pub steps: Vec<Step>,
    pub values: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    /// Only filled with `--timing`, so that reports stay reproducible.
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str, input: Option<InputInfo>, flags: FlagInfo) -> Self {
        Report {
            command: command.to_string(),
            version: VERSION.to_string(),
            input,
            flags,
            verdict: String::new(),
            definite: true,
            steps: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
            checks: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serializable"),
        );
    }

    /// 0 for a definite answer, 2 when a bound stopped the computation, 1
    /// when a demo check failed.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| !c.pass) {
            1
        } else if self.definite {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dualcheck {} {}", self.version, self.command);
        if let Some(i) = &self.input {
            let _ = writeln!(
                s,
                "input: {} (n = {}, m = {}, p = {}) sha256 {}",
                i.name, i.n, i.m, i.p, i.digest
            );
        }
        if let Some(k) = self.flags.max_order {
            let _ = writeln!(s, "max order: {k}");
        }
        for sub in &self.flags.subst {
            let _ = writeln!(s, "subst: {sub}");
        }
        if let Some(seed) = self.flags.seed {
            let _ = writeln!(s, "seed: {seed}");
        }
        let _ = writeln!(
            s,
            "verdict: {}{}",
            self.verdict,
            if self.definite {
                ""
            } else {
                " (bound reached)"
            }
        );
        for st in &self.steps {
            let opt = |v: Option<usize>| v.map_or("-".to_string(), |k| k.to_string());
            let _ = write!(
                s,
                "\n[{}] {}x{}, order {}, rank {}",
                st.name,
                st.rows,
                st.cols,
                st.order.map_or("-".to_string(), |k| k.to_string()),
                opt(st.rank)
            );
            if let Some(c) = st.certified {
                let _ = write!(s, ", {}", if c { "certified" } else { "not certified" });
            }
            s.push('\n');
            if !st.unknowns.is_empty() {
                let _ = writeln!(s, "  unknowns: {}", st.unknowns.join(", "));
            }
            for row in &st.operator {
                let _ = writeln!(s, "  {row}");
            }
        }
        if !self.values.is_empty() {
            s.push('\n');
            for (k, v) in &self.values {
                let text = match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "{k}: {text}");
            }
        }
        if !self.checks.is_empty() {
            s.push('\n');
            for c in &self.checks {
                let _ = writeln!(
                    s,
                    "{} {}: {}\n    expected {}\n    actual   {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.fixture,
                    c.check,
                    c.expected,
                    c.actual
                );
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(s, "wall time: {ms} ms");
        }
        s
    }
}

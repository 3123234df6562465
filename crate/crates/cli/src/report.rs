//! Serializable reports and their plain-text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitValue {
    pub orbit: String,
    pub coset: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub mu: String,
    pub total: i64,
    pub per_orbit: Vec<OrbitValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub pair: String,
    pub lambda: String,
    pub entries: Vec<EntryReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pair: String,
    pub lambdas: Vec<String>,
    pub entries_checked: usize,
    pub route_checks: usize,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub pair: String,
    pub properties: Vec<PropertyReport>,
    pub verdict: String,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub label: String,
    pub hx: String,
    pub wxh_order: usize,
    pub cosets: Vec<String>,
    pub ci: usize,
    pub nci: usize,
    pub real: usize,
    pub complex_pairs: usize,
    pub complex_unpaired: usize,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitsReport {
    pub pair: String,
    pub classes: Vec<ClassReport>,
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

impl BranchReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("pair {}  lambda {}\n", self.pair, self.lambda);
        let mut header = vec!["mu".to_string(), "total".to_string()];
        if let Some(first) = self.entries.first() {
            header.extend(first.per_orbit.iter().map(|o| format!("{}/{}", o.orbit, o.coset)));
        }
        let mut rows = vec![header];
        for e in &self.entries {
            let mut row = vec![e.mu.clone(), e.total.to_string()];
            row.extend(e.per_orbit.iter().map(|o| o.value.to_string()));
            rows.push(row);
        }
        out.push_str(&pad_table(&rows));
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "verdict: {v}");
        }
        out
    }
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "pair {}: {} highest weights, {} entries against the oracle, {} route checks\n",
            self.pair,
            self.lambdas.len(),
            self.entries_checked,
            self.route_checks
        );
        if let Some(m) = &self.mismatch {
            let _ = writeln!(out, "first mismatch: {m}");
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}

impl SelftestReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("pair {}\n", self.pair);
        for p in &self.properties {
            let status = if p.passed { "pass" } else { "FAIL" };
            let _ = write!(out, "{status}  {} ({} checks)", p.name, p.checked);
            if let Some(d) = &p.detail {
                let _ = write!(out, ": {d}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}

impl OrbitsReport {
    pub fn to_text(&self) -> String {
        let mut rows =
            vec![["class", "H_x", "|W_x^H|", "cosets", "ci", "nci", "real", "cx-pairs", "cx-other", "delta"]
                .map(String::from)
                .to_vec()];
        for c in &self.classes {
            rows.push(vec![
                c.label.clone(),
                c.hx.clone(),
                c.wxh_order.to_string(),
                c.cosets.join(" "),
                c.ci.to_string(),
                c.nci.to_string(),
                c.real.to_string(),
                c.complex_pairs.to_string(),
                c.complex_unpaired.to_string(),
                c.delta.clone(),
            ]);
        }
        format!("pair {}\n{}", self.pair, pad_table(&rows))
    }
}

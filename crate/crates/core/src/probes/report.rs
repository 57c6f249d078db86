use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    EvidenceFor,
    EvidenceAgainst,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::EvidenceFor => "evidence-for",
            Verdict::EvidenceAgainst => "evidence-against",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// Decided from metadata or exact arithmetic.
    Exact,
    /// A trend observed up to a finite order.
    FiniteEvidence,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evidence::Exact => "exact",
            Evidence::FiniteEvidence => "finite-evidence",
        })
    }
}

/// One table row: an order and its values as decimal strings.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub order: usize,
    pub values: Vec<String>,
}

/// Structured output of a diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub probe: String,
    pub inputs: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    verdict: Verdict,
    evidence: Evidence,
    /// The statement the verdict refers to.
    pub claim: String,
    pub notes: Vec<String>,
    pub children: Vec<ProbeReport>,
}

impl ProbeReport {
    pub fn new(probe: &str, claim: &str) -> Self {
        ProbeReport {
            probe: probe.to_string(),
            inputs: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            verdict: Verdict::Inconclusive,
            evidence: Evidence::FiniteEvidence,
            claim: claim.to_string(),
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.push((key.to_string(), value.to_string()));
        self
    }

    pub fn columns(mut self, names: &[&str]) -> Self {
        self.columns = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn push_row(&mut self, order: usize, values: Vec<String>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(Row { order, values });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Set the verdict. `holds` and `fails` are reserved for exact evidence.
    pub fn set_verdict(&mut self, verdict: Verdict, evidence: Evidence) {
        let decisive = matches!(verdict, Verdict::Holds | Verdict::Fails);
        assert!(!decisive || evidence == Evidence::Exact, "verdict {verdict} is not allowed with evidence {evidence}");
        self.verdict = verdict;
        self.evidence = evidence;
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn evidence(&self) -> Evidence {
        self.evidence
    }

    /// Values of one column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[i].as_str()).collect())
    }

    pub fn to_json(&self) -> Value {
        let inputs: serde_json::Map<String, Value> =
            self.inputs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![json!(r.order)];
                cells.extend(r.values.iter().map(|v| Value::String(v.clone())));
                Value::Array(cells)
            })
            .collect();
        let mut obj = json!({
            "probe": self.probe,
            "inputs": inputs,
            "columns": self.columns,
            "rows": rows,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "claim": self.claim,
            "notes": self.notes,
        });
        if !self.children.is_empty() {
            obj["reports"] = Value::Array(self.children.iter().map(|c| c.to_json()).collect());
        }
        obj
    }

    /// One CSV row per order; nested reports follow, each prefixed by its probe name.
    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["probe".to_string(), "order".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).map_err(io)?;
        for r in &self.rows {
            let mut rec = vec![self.probe.clone(), r.order.to_string()];
            rec.extend(r.values.iter().cloned());
            w.write_record(&rec).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        let mut out = String::from_utf8(bytes).expect("utf-8");
        for child in &self.children {
            out.push_str(&child.to_csv()?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = ProbeReport::new("demo", "x tends to 0").input("measure", "uniform(-1,1)").columns(&["value"]);
        r.push_row(2, vec!["1/3".into()]);
        r.set_verdict(Verdict::EvidenceFor, Evidence::FiniteEvidence);
        let j = r.to_json();
        assert_eq!(j["rows"][0][0], json!(2));
        assert_eq!(j["rows"][0][1], json!("1/3"));
        assert_eq!(j["verdict"], json!("evidence-for"));
        assert_eq!(j["evidence"], json!("finite-evidence"));
        assert_eq!(r.to_csv().unwrap(), "probe,order,value\ndemo,2,1/3\n");
    }

    #[test]
    #[should_panic]
    fn decisive_verdicts_need_exact_evidence() {
        let mut r = ProbeReport::new("demo", "");
        r.set_verdict(Verdict::Holds, Evidence::FiniteEvidence);
    }
}

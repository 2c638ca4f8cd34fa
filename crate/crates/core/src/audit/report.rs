use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Falsified,
    Ambiguous,
    BudgetExceeded,
}

/// Outcome of checking one published claim against brute force.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub claim: String,
    pub parameters: Map<String, Value>,
    pub paper_value: Option<Value>,
    pub computed_value: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<f64>,
    pub seed: u64,
    pub digits: u32,
    pub tolerance: Option<f64>,
    /// Set when a budget cut the computation short.
    pub partial: bool,
    pub notes: String,
}

impl AuditReport {
    pub fn new(claim: &str, seed: u64, digits: u32) -> Self {
        Self {
            claim: claim.to_string(),
            parameters: Map::new(),
            paper_value: None,
            computed_value: Value::Null,
            verdict: Verdict::Ambiguous,
            runtime_ms: None,
            seed,
            digits,
            tolerance: None,
            partial: false,
            notes: String::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn paper(mut self, value: impl Into<Value>) -> Self {
        self.paper_value = Some(value.into());
        self
    }

    pub fn computed(mut self, value: impl Into<Value>) -> Self {
        self.computed_value = value.into();
        self
    }

    pub fn verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push(' ');
        }
        self.notes.push_str(&text.into());
        self
    }

    /// Verified when both values are numbers within `tol`, falsified when
    /// they are numbers further apart, ambiguous otherwise.
    pub fn compare_numbers(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        let paper = self.paper_value.as_ref().and_then(Value::as_f64);
        let computed = self.computed_value.as_f64();
        self.verdict = match (paper, computed) {
            (Some(p), Some(c)) if (p - c).abs() <= tol => Verdict::Verified,
            (Some(_), Some(_)) => Verdict::Falsified,
            _ => Verdict::Ambiguous,
        };
        self
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }

    /// Extra structured output, stored under `parameters.details`.
    pub fn detail(mut self, extra: Value) -> Self {
        self.parameters.insert("details".into(), extra);
        self
    }

    pub fn budget_exceeded(mut self, why: &str) -> Self {
        self.verdict = Verdict::BudgetExceeded;
        self.partial = true;
        self.note(why)
    }
}

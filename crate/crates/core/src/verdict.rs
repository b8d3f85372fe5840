use serde::Serialize;

use crate::lattice::Elem;

/// Outcome of a single exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    /// Fails, with the element tuple that refutes it.
    Fails(Vec<Elem>),
    /// Hypotheses unmet; the check was not run.
    Skipped(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn from_failure(w: Option<Vec<Elem>>) -> Self {
        match w {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails(w),
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails(Vec::new())
        }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Verdict::Skipped(reason.into())
    }

    pub fn witness(&self) -> Option<&[Elem]> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }
}

/// A theorem or lemma checked on one instance. A failure here means the
/// implementation disagrees with a proved statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub name: String,
    pub verdict: Verdict,
    /// Free-form witness rendering (names rather than ids).
    pub detail: Option<String>,
}

impl TheoremCheck {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        TheoremCheck {
            name: name.into(),
            verdict,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn is_red_flag(&self) -> bool {
        self.verdict.fails()
    }
}

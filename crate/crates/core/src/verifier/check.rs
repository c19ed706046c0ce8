use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eigensolver::Estimate;
use crate::error::{Error, Result};

/// Multiple of the combined error bars a margin must clear.
pub const BAR_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = "=")]
    Equal,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Less => "<",
            Relation::LessEq => "<=",
            Relation::Equal => "=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Inconclusive,
    Violated,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Inconclusive => "inconclusive",
            Status::Violated => "violated",
        })
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "<" => Ok(Relation::Less),
            "<=" => Ok(Relation::LessEq),
            "=" => Ok(Relation::Equal),
            other => Err(Error::Parse(format!("unknown relation `{other}`"))),
        }
    }
}

/// One side of a check: a labelled value with its error bar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Operand {
    pub label: String,
    pub value: f64,
    pub error_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub relation: Relation,
    pub lhs: Operand,
    pub rhs: Operand,
    /// `rhs - lhs`.
    pub margin: f64,
    pub status: Status,
}

/// Status of `lhs relation rhs` given the margin `rhs - lhs` and the summed
/// error bars.
///
/// * `<`: verified when the margin exceeds three bars, violated when it is
///   below minus three bars, inconclusive otherwise.
/// * `<=`: violated when the margin is below minus three bars, else verified.
/// * `=`: verified when `|margin|` is within three bars (plus a `1e-12`
///   relative floor for exactly known values), else violated.
pub fn evaluate(relation: Relation, lhs: f64, rhs: f64, bars: f64) -> Status {
    let margin = rhs - lhs;
    let tol = BAR_FACTOR * bars;
    match relation {
        Relation::Less => {
            if margin > tol {
                Status::Verified
            } else if margin < -tol {
                Status::Violated
            } else {
                Status::Inconclusive
            }
        }
        Relation::LessEq => {
            if margin < -tol {
                Status::Violated
            } else {
                Status::Verified
            }
        }
        Relation::Equal => {
            let floor = 1e-12 * lhs.abs().max(rhs.abs());
            if margin.abs() <= tol + floor {
                Status::Verified
            } else {
                Status::Violated
            }
        }
    }
}

impl InequalityCheck {
    pub fn new(name: impl Into<String>, relation: Relation, lhs: (&str, &Estimate), rhs: (&str, &Estimate)) -> Self {
        let operand = |(label, e): (&str, &Estimate)| Operand {
            label: label.to_string(),
            value: super::canon(e.value),
            error_bar: super::canon(e.error_bar),
        };
        let (lhs, rhs) = (operand(lhs), operand(rhs));
        let margin = super::canon(rhs.value - lhs.value);
        let status = evaluate(relation, lhs.value, rhs.value, lhs.error_bar + rhs.error_bar);
        Self {
            name: name.into(),
            relation,
            lhs,
            rhs,
            margin,
            status,
        }
    }

    /// Recomputes the status from the stored operands.
    pub fn reevaluate(&self) -> Status {
        evaluate(self.relation, self.lhs.value, self.rhs.value, self.lhs.error_bar + self.rhs.error_bar)
    }

    pub fn bars(&self) -> f64 {
        self.lhs.error_bar + self.rhs.error_bar
    }
}

impl fmt::Display for InequalityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} = {:.10} {} {} = {:.10} (margin {:.3e}, bars {:.3e})",
            self.status,
            self.name,
            self.lhs.label,
            self.lhs.value,
            self.relation,
            self.rhs.label,
            self.rhs.value,
            self.margin,
            self.bars()
        )
    }
}

//! Batch invariant tables over knot families.

use std::fmt;

use cfk::doubles::{classify_iterates, Verdict};
use cfk::staircase::{d1_closed_form, delta_whitehead, tau, torus_staircase};
use serde::Serialize;

use crate::{Failure, Outcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Coprime `2 ≤ p < q ≤ n`.
    Torus(i64),
    /// `T(2, 2m+1)` for `lo ≤ m ≤ hi`.
    TwistKnots { lo: i64, hi: i64 },
}

impl Family {
    /// `torus:N`, `t2:a..b` or `t2:N` (meaning `1..N`).
    pub fn parse(spec: &str) -> Outcome<Family> {
        let bad = || Failure::Usage(format!("unrecognised family '{spec}'; expected torus:N or t2:a..b"));
        let (kind, range) = spec.split_once(':').ok_or_else(bad)?;
        let int = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
        match kind {
            "torus" => Ok(Family::Torus(int(range)?)),
            "t2" => match range.split_once("..") {
                Some((lo, hi)) => Ok(Family::TwistKnots {
                    lo: int(lo)?,
                    hi: int(hi)?,
                }),
                None => Ok(Family::TwistKnots { lo: 1, hi: int(range)? }),
            },
            _ => Err(bad()),
        }
    }

    /// Members as `(p, q)`, in increasing `q` then `p`.
    pub fn members(&self) -> Vec<(i64, i64)> {
        match *self {
            Family::Torus(n) => (3..=n)
                .flat_map(|q| (2..q).map(move |p| (p, q)))
                .filter(|&(p, q)| gcd(p, q) == 1)
                .collect(),
            Family::TwistKnots { lo, hi } => (lo.max(1)..=hi).map(|m| (2, 2 * m + 1)).collect(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Torus(n) => write!(f, "torus:{n}"),
            Family::TwistKnots { lo, hi } => write!(f, "t2:{lo}..{hi}"),
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub knot: String,
    pub p: i64,
    pub q: i64,
    pub steps: String,
    pub tau: i64,
    pub d1: i64,
    pub delta_whitehead: i64,
    pub delta_double_double: Option<i64>,
    pub verdict: Verdict,
}

#[derive(Debug, Serialize)]
pub struct TableDocument {
    pub schema: &'static str,
    pub family: String,
    pub rows: Vec<Row>,
}

pub fn rows(family: &Family) -> Outcome<Vec<Row>> {
    let members = family.members();
    if members.is_empty() {
        return Err(Failure::Usage(format!("family {family} has no members")));
    }
    members
        .into_iter()
        .map(|(p, q)| {
            let s = torus_staircase(p, q)?;
            let class = classify_iterates(&s)?;
            let steps: Vec<String> = s.steps().iter().map(u64::to_string).collect();
            Ok(Row {
                knot: format!("T({p},{q})"),
                p,
                q,
                steps: steps.join(","),
                tau: tau(&s),
                d1: d1_closed_form(&s),
                delta_whitehead: delta_whitehead(&s),
                delta_double_double: class.delta_double_double,
                verdict: class.verdict,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[Row]) -> Outcome<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Compute(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Compute(e.to_string()))
}

//! The knot Floer complex of the Whitehead double `D(T_{2,2m+1})`, its
//! splitting into a trefoil summand plus boxes, `δ(D²(T_{2,2m+1}))`, and the
//! `D(K)` versus `Dⁿ(K)` classification.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtered::{direct_sum, from_staircase, isomorphism_up_to_shift, split_summands, tensor, FilteredComplex};
use crate::homology::{d1_general, is_acyclic, Acyclicity};
use crate::staircase::{delta_whitehead, tau, Staircase};

/// Ranks of `HFK^(D(T_{2,2m+1}))` keyed by `(alexander, maslov)`.
pub type RankTable = BTreeMap<(i64, i64), usize>;

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    Ok(())
}

/// The three nonzero rows `j = 1, 0, −1` of `HFK^(D(T_{2,2m+1}))`.
pub fn hfk_hat_double(m: usize) -> Result<RankTable> {
    check_m(m)?;
    let m_i = m as i64;
    let mut table = RankTable::new();
    table.insert((1, 0), 2 * m);
    table.insert((0, -1), 4 * m - 1);
    table.insert((-1, -2), 2 * m);
    for p in 1..=m_i {
        table.insert((1, 1 - 2 * p), 2);
        table.insert((0, -2 * p), 4);
        table.insert((-1, -1 - 2 * p), 2);
    }
    Ok(table)
}

/// Generator rank profile of a complex, keyed like [`RankTable`].
pub fn rank_profile(c: &FilteredComplex) -> RankTable {
    let mut table = RankTable::new();
    for g in c.generators() {
        *table.entry((g.alexander, g.maslov)).or_default() += 1;
    }
    table
}

fn x(k: usize) -> String {
    format!("x{k}")
}
fn y(k: usize) -> String {
    format!("y{k}")
}
fn z(k: usize) -> String {
    format!("z{k}")
}
fn u(p: usize, i: usize) -> String {
    format!("u{p}.{i}")
}
fn v(p: usize, i: usize) -> String {
    format!("v{p}.{i}")
}
fn w(p: usize, i: usize) -> String {
    format!("w{p}.{i}")
}

/// `CFK∞(D(T_{2,2m+1}))` in its diagonal-free normal form.
///
/// Generators `x₁..x_{2m}` (j=1, M=0), `u_{p,i}` (j=1, M=1−2p),
/// `y₁..y_{4m−1}` (j=0, M=−1), `v_{p,1..4}` (j=0, M=−2p), `z₁..z_{2m}`
/// (j=−1, M=−2), `w_{p,i}` (j=−1, M=−1−2p).
pub fn build_double_complex(m: usize) -> Result<FilteredComplex> {
    check_m(m)?;
    let mut c = FilteredComplex::new();
    let m_i = m as i64;
    for k in 1..=2 * m {
        c.add_generator(x(k), 1, 0);
    }
    for p in 1..=m {
        for i in 1..=2 {
            c.add_generator(u(p, i), 1, 1 - 2 * p as i64);
        }
    }
    for k in 1..=4 * m - 1 {
        c.add_generator(y(k), 0, -1);
    }
    for p in 1..=m {
        for i in 1..=4 {
            c.add_generator(v(p, i), 0, -2 * p as i64);
        }
    }
    for k in 1..=2 * m {
        c.add_generator(z(k), -1, -2);
    }
    for p in 1..=m {
        for i in 1..=2 {
            c.add_generator(w(p, i), -1, -1 - 2 * p as i64);
        }
    }
    debug_assert_eq!(c.len() as i64, 16 * m_i - 1);

    let mut arrow = |from: String, to: String, upower: i64| c.add_arrow(&from, &to, upower).expect("generators exist");
    for k in 2..=2 * m {
        arrow(x(k), y(k - 1), 0);
        arrow(z(k), y(k - 1), 1);
    }
    for l in 1..=2 * m {
        arrow(y(2 * m + l - 1), z(l), 0);
        arrow(y(2 * m + l - 1), x(l), 1);
    }
    for p in 1..=m {
        for i in 1..=2 {
            arrow(u(p, i), v(p, i), 0);
            arrow(v(p, i + 2), w(p, i), 0);
            arrow(v(p, i + 2), u(p, i), 1);
            arrow(w(p, i), v(p, i), 1);
        }
    }
    Ok(c)
}

/// The partition of [`build_double_complex`] into the trefoil-shaped subset
/// `{y_{2m}, x₁, z₁}`, the boxes `{y_{2m+q}, x_{q+1}, z_{q+1}, y_q}` and the
/// boxes `{v_{p,i+2}, u_{p,i}, w_{p,i}, v_{p,i}}`, ordered so that admissible
/// cross arrows point from later to earlier subsets.
pub fn double_complex_plan(m: usize) -> Result<Vec<Vec<String>>> {
    check_m(m)?;
    let mut plan = vec![vec![y(2 * m), x(1), z(1)]];
    for q in 1..2 * m {
        plan.push(vec![y(2 * m + q), x(q + 1), z(q + 1), y(q)]);
    }
    for p in 1..=m {
        for i in 1..=2 {
            plan.push(vec![v(p, i + 2), u(p, i), w(p, i), v(p, i)]);
        }
    }
    Ok(plan)
}

/// The trefoil complex `St(1,1) ⊗ F[U, U⁻¹]`.
pub fn trefoil_complex() -> FilteredComplex {
    from_staircase(&Staircase::twist_family(1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub trefoil_summand: bool,
    /// Index into `components` of the trefoil summand.
    pub trefoil_component: Option<usize>,
    #[serde(serialize_with = "serialize_acyclicity")]
    pub acyclic_rest: Acyclicity,
    /// Generator counts of the connected components.
    pub components: Vec<usize>,
}

impl SplittingReport {
    /// Trefoil summand found and everything else certified acyclic.
    pub fn confirmed(&self) -> bool {
        self.trefoil_summand && self.acyclic_rest.is_certified_acyclic()
    }
}

fn serialize_acyclicity<S: serde::Serializer>(a: &Acyclicity, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(acyclicity_label(a))
}

pub fn acyclicity_label(a: &Acyclicity) -> &'static str {
    match a {
        Acyclicity::CertifiedAcyclic => "certified-acyclic",
        Acyclicity::CertifiedNonacyclic { .. } => "certified-nonacyclic",
        Acyclicity::Indeterminate { .. } => "indeterminate",
    }
}

/// Splits `c` into arrow-connected components, looks for one isomorphic (up
/// to a uniform grading shift) to the trefoil complex, and certifies the
/// direct sum of the others.
pub fn verify_splitting(c: &FilteredComplex) -> SplittingReport {
    let parts = split_summands(c);
    let trefoil = trefoil_complex();
    let trefoil_component = parts
        .iter()
        .position(|p| p.len() == trefoil.len() && isomorphism_up_to_shift(&trefoil, p).is_some());
    let rest: Vec<FilteredComplex> = parts
        .iter()
        .enumerate()
        .filter(|(k, _)| Some(*k) != trefoil_component)
        .map(|(_, p)| p.clone())
        .collect();
    let rest = direct_sum(&rest).expect("components of one complex have distinct names");
    SplittingReport {
        trefoil_summand: trefoil_component.is_some(),
        trefoil_component,
        acyclic_rest: is_acyclic(&rest),
        components: parts.iter().map(FilteredComplex::len).collect(),
    }
}

/// The trefoil summand of `D(T_{2,2m+1})` found by [`verify_splitting`].
fn trefoil_summand_of_double(m: usize) -> Result<FilteredComplex> {
    let double = build_double_complex(m)?;
    let report = verify_splitting(&double);
    if !report.confirmed() {
        return Err(Error::InvalidComplex(format!(
            "D(T_{{2,{}}}) did not split as trefoil ⊕ acyclic",
            2 * m + 1
        )));
    }
    let idx = report.trefoil_component.expect("confirmed report has a trefoil");
    Ok(split_summands(&double).swap_remove(idx))
}

/// `δ(D²(T_{2,2m+1})) = 2 d(S³₁(D # D^r))` from the trefoil summand alone.
pub fn delta_double_double_fast(m: usize) -> Result<i64> {
    let summand = trefoil_summand_of_double(m)?;
    Ok(2 * d1_general(&tensor(&summand, &summand))?)
}

/// `δ(D²(T_{2,2m+1}))` from the full complex `CFK∞(D) ⊗ CFK∞(D)`.
pub fn delta_double_double_full(m: usize) -> Result<i64> {
    let double = build_double_complex(m)?;
    Ok(2 * d1_general(&tensor(&double, &double))?)
}

/// `δ(D²(T_{2,2m+1}))` by both routes, which must agree.
pub fn delta_double_double(m: usize) -> Result<i64> {
    let full = delta_double_double_full(m)?;
    let fast = delta_double_double_fast(m)?;
    if full != fast {
        return Err(Error::RouteMismatch { full, fast });
    }
    Ok(full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    /// `|δ(D(K))| > 8`: `D(K)` and `Dⁿ(K)` differ for all `n ≥ 2`.
    Distinguishable,
    /// `T_{2,5}`: not covered by the `|δ| > 8` test but separated by
    /// `δ(D²) = −4 ≠ −8 = δ(D)`.
    SpecialCaseDistinguishable,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Distinguishable => "DISTINGUISHABLE",
            Verdict::SpecialCaseDistinguishable => "SPECIAL-CASE-DISTINGUISHABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tau: i64,
    pub delta_whitehead: i64,
    pub verdict: Verdict,
    /// Rows `ψ(D(K))` and, when known, `ψ(D²(K))`, with `ψ = (τ, δ/4)`.
    pub psi: Vec<[i64; 2]>,
    /// `δ(D²(K))`, computed for the `T_{2,2m+1}` family.
    pub delta_double_double: Option<i64>,
    /// The `ψ` rows form a unimodular matrix, so `D(K)` and `D²(K)` span a
    /// `ℤ²` summand.
    pub summand: bool,
    pub splitting: Option<SplittingReport>,
    pub notes: Vec<String>,
}

/// Largest `|δ(Dⁿ(K))|` possible for `n ≥ 2`.
pub const ITERATE_DELTA_BOUND: i64 = 8;

/// Decides whether `D(K)` and `Dⁿ(K)` are told apart by `δ`, for the L-space
/// knot with staircase `staircase`.
pub fn classify_iterates(staircase: &Staircase) -> Result<Classification> {
    let t = tau(staircase);
    let delta = delta_whitehead(staircase);
    let tau_of_double = i64::from(t > 0);
    let mut psi = vec![[tau_of_double, delta / 4]];
    let mut notes = Vec::new();

    let family = staircase.twist_parameter();
    let (splitting, delta2) = match family {
        Some(m) => {
            let report = verify_splitting(&build_double_complex(m)?);
            let d2 = delta_double_double_fast(m)?;
            psi.push([1, d2 / 4]);
            (Some(report), Some(d2))
        }
        None => (None, None),
    };

    let verdict = if delta.abs() > ITERATE_DELTA_BOUND {
        Verdict::Distinguishable
    } else if family == Some(2) {
        notes.push(format!(
            "|δ(D(K))| = {} does not exceed {ITERATE_DELTA_BOUND}, but δ(D²(K)) = {} differs from δ(D(K))",
            delta.abs(),
            delta2.expect("family member"),
        ));
        Verdict::SpecialCaseDistinguishable
    } else {
        if delta.abs() == ITERATE_DELTA_BOUND {
            notes.push(format!(
                "|δ(D(K))| = {ITERATE_DELTA_BOUND} equals the bound for iterated doubles; the criterion does not apply"
            ));
        }
        if family == Some(1) {
            notes.push("τ and δ agree on D(K) and D²(K); whether they are smoothly concordant is open".to_string());
        }
        Verdict::Inconclusive
    };

    let det = match psi.as_slice() {
        [a, b] => Some(a[0] * b[1] - a[1] * b[0]),
        _ => None,
    };
    let summand = det.is_some_and(|d| d.abs() == 1);
    if let Some(d) = det.filter(|d| d.abs() > 1) {
        notes.push(format!(
            "ψ(D(K)) and ψ(D²(K)) are independent but span an index-{} sublattice of ℤ²",
            d.abs()
        ));
    }
    Ok(Classification {
        tau: t,
        delta_whitehead: delta,
        verdict,
        psi,
        delta_double_double: delta2,
        summand,
        splitting,
        notes,
    })
}

//! Homology of filtered complexes over finite grading slices, the `U`-tower
//! search for `d(S³₁(K))`, and acyclicity certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::filtered::FilteredComplex;
use crate::gf2::{BitMatrix, BitVector};

/// Some `x` with `Mx = b` over GF(2), or `None`.
pub fn solve_gf2(m: &BitMatrix, b: &BitVector) -> Result<Option<BitVector>> {
    m.solve(b)
}

/// A GF(2) sum of `U`-translates `U^s g`, all at one Maslov grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub terms: BTreeSet<(String, i64)>,
    pub maslov: i64,
}

/// Which part of `CFK∞` a slice is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// All of `CFK∞`.
    Full,
    /// The `i = 0` column, `CFK∞_{i=0}`.
    Column,
    /// `CFK∞_{i≥0 or j≥0}`, the quotient by the `{i<0 and j<0}` subcomplex.
    Quotient,
}

impl Region {
    fn contains(self, alexander: i64, upower: i64) -> bool {
        match self {
            Region::Full => true,
            Region::Column => upower == 0,
            Region::Quotient => upower <= 0 || alexander - upower >= 0,
        }
    }
}

/// The translates lying in `region` at Maslov grading `maslov`. Each orbit
/// contributes at most one translate, so the basis is finite.
#[derive(Debug, Clone)]
pub struct GradingSlice {
    pub region: Region,
    pub maslov: i64,
    basis: Vec<(usize, i64)>,
    index: HashMap<usize, usize>,
}

impl GradingSlice {
    pub fn new(c: &FilteredComplex, region: Region, maslov: i64) -> Self {
        let mut basis = Vec::new();
        let mut index = HashMap::new();
        for (g, gen) in c.generators().iter().enumerate() {
            let diff = gen.maslov - maslov;
            if diff.rem_euclid(2) != 0 {
                continue;
            }
            let s = diff / 2;
            if region.contains(gen.alexander, s) {
                index.insert(g, basis.len());
                basis.push((g, s));
            }
        }
        Self {
            region,
            maslov,
            basis,
            index,
        }
    }

    /// `(generator index, U-power)` pairs in generator order.
    pub fn basis(&self) -> &[(usize, i64)] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Position of `U^s g`, if it lies in this slice.
    pub fn position(&self, g: usize, s: i64) -> Option<usize> {
        self.index.get(&g).copied().filter(|&k| self.basis[k].1 == s)
    }
}

/// Matrix of `∂ : from → to`; rows index `to`, columns index `from`.
/// Components leaving the region are dropped, which is exactly the induced
/// differential on the column and on the quotient.
pub fn slice_differential(c: &FilteredComplex, from: &GradingSlice, to: &GradingSlice) -> BitMatrix {
    let mut m = BitMatrix::zeros(to.dim(), from.dim());
    for (col, &(g, s)) in from.basis().iter().enumerate() {
        for a in c.outgoing(g) {
            if let Some(row) = to.position(a.target, s + a.upower) {
                m.toggle(row, col);
            }
        }
    }
    m
}

fn slice_triplet(c: &FilteredComplex, region: Region, maslov: i64) -> (GradingSlice, GradingSlice, GradingSlice) {
    (
        GradingSlice::new(c, region, maslov + 1),
        GradingSlice::new(c, region, maslov),
        GradingSlice::new(c, region, maslov - 1),
    )
}

/// Rank of homology of `region` at Maslov grading `maslov`.
pub fn homology_rank(c: &FilteredComplex, region: Region, maslov: i64) -> usize {
    let (above, here, below) = slice_triplet(c, region, maslov);
    let outgoing = slice_differential(c, &here, &below);
    let incoming = slice_differential(c, &above, &here);
    here.dim() - outgoing.rank() - incoming.rank()
}

/// Total rank of the homology of the `i = 0` column, by grading.
pub fn column_homology(c: &FilteredComplex) -> BTreeMap<i64, usize> {
    let levels: BTreeSet<i64> = c.generators().iter().map(|g| g.maslov).collect();
    levels
        .into_iter()
        .map(|m| (m, homology_rank(c, Region::Column, m)))
        .filter(|&(_, r)| r > 0)
        .collect()
}

/// A cycle of the `i = 0` column generating its homology `F_{(0)}`.
///
/// Among kernel basis vectors (one per free column, in generator order) the
/// first one that is not a boundary is returned.
pub fn hat_generator(c: &FilteredComplex) -> Result<Cycle> {
    let ranks = column_homology(c);
    let expected: BTreeMap<i64, usize> = [(0, 1)].into_iter().collect();
    if ranks != expected {
        return Err(Error::NotAKnotComplex(format!(
            "i=0 column homology has ranks {ranks:?} by grading, expected a single F at grading 0"
        )));
    }
    let (above, here, below) = slice_triplet(c, Region::Column, 0);
    let outgoing = slice_differential(c, &here, &below);
    let incoming = slice_differential(c, &above, &here);
    for candidate in outgoing.kernel_basis() {
        if incoming.solve(&candidate)?.is_none() {
            let terms = candidate
                .ones()
                .map(|k| {
                    let (g, s) = here.basis()[k];
                    (c.generator(g).name.clone(), s)
                })
                .collect();
            return Ok(Cycle { terms, maslov: 0 });
        }
    }
    unreachable!("rank-one homology has a non-boundary kernel vector")
}

/// Largest `n` tried before giving up on the `U`-tower search.
pub fn d1_search_cap(c: &FilteredComplex) -> i64 {
    let (lo, hi) = c.alexander_range().unwrap_or((0, 0));
    (hi - lo) + hi.max(0) + 4
}

/// `d(S³₁(K)) = −2 min{n ≥ 0 : [U^{n+1} ξ] = 0 in H_*(CFK∞_{i≥0 or j≥0})}`
/// with `ξ` from [`hat_generator`].
pub fn d1_general(c: &FilteredComplex) -> Result<i64> {
    let xi = hat_generator(c)?;
    let terms: Vec<(usize, i64)> = xi
        .terms
        .iter()
        .map(|(name, s)| (c.index_of(name).expect("cycle names come from the complex"), *s))
        .collect();
    let cap = d1_search_cap(c);
    for n in 0..=cap {
        let level = xi.maslov - 2 * (n + 1);
        let here = GradingSlice::new(c, Region::Quotient, level);
        let mut target = BitVector::zeros(here.dim());
        for &(g, s) in &terms {
            if let Some(k) = here.position(g, s + n + 1) {
                target.toggle(k);
            }
        }
        if target.is_zero() {
            return Ok(-2 * n);
        }
        let above = GradingSlice::new(c, Region::Quotient, level + 1);
        let boundary = slice_differential(c, &above, &here);
        if boundary.solve(&target)?.is_some() {
            return Ok(-2 * n);
        }
    }
    Err(Error::NoTermination { cap })
}

/// A Laurent polynomial over GF(2), as its set of exponents.
pub type Gf2Laurent = BTreeSet<i64>;

fn is_monomial(p: &Gf2Laurent) -> Option<i64> {
    (p.len() == 1).then(|| *p.iter().next().expect("one element"))
}

fn add_into(acc: &mut Gf2Laurent, p: impl IntoIterator<Item = i64>) {
    for e in p {
        if !acc.remove(&e) {
            acc.insert(e);
        }
    }
}

/// Sparse differential over GF(2)[U, U⁻¹] on named free generators:
/// `entry(s, t)` is the coefficient of `t` in `∂s`.
#[derive(Debug, Clone, Default)]
pub struct LaurentDifferential {
    names: Vec<String>,
    entries: BTreeMap<(usize, usize), Gf2Laurent>,
}

impl LaurentDifferential {
    pub fn new(names: Vec<String>) -> Self {
        Self {
            names,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_complex(c: &FilteredComplex) -> Self {
        let mut d = Self::new(c.generators().iter().map(|g| g.name.clone()).collect());
        for a in c.arrows() {
            d.add(a.source, a.target, [a.upower]);
        }
        d
    }

    /// Adds `Σ U^e` (over `exponents`) to the coefficient of `target` in
    /// `∂ source`.
    pub fn add(&mut self, source: usize, target: usize, exponents: impl IntoIterator<Item = i64>) {
        let slot = self.entries.entry((source, target)).or_default();
        add_into(slot, exponents);
        if slot.is_empty() {
            self.entries.remove(&(source, target));
        }
    }
}

/// Outcome of [`is_acyclic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    CertifiedAcyclic,
    /// The listed generators survive with zero differential; each spans a
    /// free summand of homology.
    CertifiedNonacyclic {
        surviving: Vec<String>,
    },
    /// Only non-unit entries remain; no verdict.
    Indeterminate {
        blocked: usize,
    },
}

impl Acyclicity {
    pub fn is_certified_acyclic(&self) -> bool {
        matches!(self, Acyclicity::CertifiedAcyclic)
    }
}

/// Cancels pairs along monomial entries of the differential until nothing
/// can be reduced.
pub fn reduce_laurent(mut d: LaurentDifferential) -> Acyclicity {
    let n = d.names.len();
    let mut alive = vec![true; n];
    loop {
        if d.entries.is_empty() {
            break;
        }
        let pivot = d
            .entries
            .iter()
            .filter(|(&(s, t), _)| s != t)
            .find_map(|(&(s, t), p)| is_monomial(p).map(|a| (s, t, a)));
        let Some((s, t, a)) = pivot else {
            return Acyclicity::Indeterminate {
                blocked: d.entries.len(),
            };
        };
        let into_t: Vec<(usize, Gf2Laurent)> = d
            .entries
            .iter()
            .filter(|(&(r, tt), _)| tt == t && r != s)
            .map(|(&(r, _), p)| (r, p.clone()))
            .collect();
        let out_of_s: Vec<(usize, Gf2Laurent)> = d
            .entries
            .iter()
            .filter(|(&(ss, q), _)| ss == s && q != t)
            .map(|(&(_, q), p)| (q, p.clone()))
            .collect();
        for (r, p) in &into_t {
            for (q, c) in &out_of_s {
                let mut product = Gf2Laurent::new();
                for e1 in p {
                    for e2 in c {
                        add_into(&mut product, [e1 - a + e2]);
                    }
                }
                d.add(*r, *q, product);
            }
        }
        d.entries.retain(|&(x, y), _| x != s && x != t && y != s && y != t);
        alive[s] = false;
        alive[t] = false;
    }
    let surviving: Vec<String> = (0..n).filter(|&k| alive[k]).map(|k| d.names[k].clone()).collect();
    if surviving.is_empty() {
        Acyclicity::CertifiedAcyclic
    } else {
        Acyclicity::CertifiedNonacyclic { surviving }
    }
}

/// Acyclicity of `c` as a complex over GF(2)[U, U⁻¹].
pub fn is_acyclic(c: &FilteredComplex) -> Acyclicity {
    reduce_laurent(LaurentDifferential::from_complex(c))
}

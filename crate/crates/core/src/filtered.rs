//! `ℤ ⊕ ℤ`-filtered, `U`-equivariant chain complexes over GF(2)[U, U⁻¹].
//!
//! A complex is stored through one representative per `U`-orbit: the
//! translate lying in the `i = 0` column. A generator therefore carries only
//! its Alexander filtration `j` at `i = 0` and its Maslov grading; `U^s g`
//! sits at `(−s, j − s)` with grading `maslov − 2s`. An arrow
//! `source → U^a target` records the component `U^a · target` of
//! `∂(source)`. Arrows live in a set, so inserting an existing arrow removes
//! it (coefficients are reduced mod 2 eagerly).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::staircase::{vertices, Staircase};

/// One `F[U, U⁻¹]` generator, described by its `i = 0` translate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub alexander: i64,
    pub maslov: i64,
}

/// `∂(source) ∋ U^upower · target`, with indices into the generator list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub upower: i64,
}

/// A generator pinned at lattice position `(i, j)` with grading `gr`, used to
/// describe complexes the way they are drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub name: String,
    pub i: i64,
    pub j: i64,
    pub gr: i64,
}

impl LatticePoint {
    pub fn new(name: impl Into<String>, i: i64, j: i64, gr: i64) -> Self {
        Self {
            name: name.into(),
            i,
            j,
            gr,
        }
    }
}

/// The first-found reason a complex is malformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateName,
    Grading,
    Filtration,
    DSquared,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::DuplicateName => "duplicate-name",
            ViolationKind::Grading => "grading",
            ViolationKind::Filtration => "filtration",
            ViolationKind::DSquared => "d-squared",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub generators: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violation at [{}]: {}",
            self.kind,
            self.generators.join(", "),
            self.detail
        )
    }
}

impl std::error::Error for Violation {}

/// The filtered basis change `y' = y + U^s x`, where `s ≥ 0` is fixed by
/// requiring `U^s x` and `y` to share a Maslov grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisChange {
    pub x: String,
    pub y: String,
}

impl BasisChange {
    pub fn new(x: impl Into<String>, y: impl Into<String>) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct FilteredComplex {
    generators: Vec<Generator>,
    names: HashMap<String, usize>,
    arrows: BTreeSet<Arrow>,
}

impl fmt::Debug for FilteredComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FilteredComplex {{")?;
        for g in &self.generators {
            writeln!(f, "  {} (A={}, M={})", g.name, g.alexander, g.maslov)?;
        }
        for a in &self.arrows {
            writeln!(
                f,
                "  {} -> U^{} {}",
                self.generators[a.source].name, a.upower, self.generators[a.target].name
            )?;
        }
        write!(f, "}}")
    }
}

impl FilteredComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a generator and returns its index. A repeated name is kept
    /// (and later reported by [`validate`]) but lookups resolve to the first.
    pub fn add_generator(&mut self, name: impl Into<String>, alexander: i64, maslov: i64) -> usize {
        let name = name.into();
        let idx = self.generators.len();
        self.names.entry(name.clone()).or_insert(idx);
        self.generators.push(Generator {
            name,
            alexander,
            maslov,
        });
        idx
    }

    /// Adds `U^upower · target` to `∂(source)` over GF(2).
    pub fn toggle_arrow(&mut self, source: usize, target: usize, upower: i64) {
        assert!(source < self.generators.len() && target < self.generators.len());
        let arrow = Arrow { source, target, upower };
        if !self.arrows.remove(&arrow) {
            self.arrows.insert(arrow);
        }
    }

    pub fn add_arrow(&mut self, from: &str, to: &str, upower: i64) -> Result<()> {
        let s = self.require(from)?;
        let t = self.require(to)?;
        self.toggle_arrow(s, t, upower);
        Ok(())
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::InvalidComplex(format!("unknown generator '{name}'")))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, idx: usize) -> &Generator {
        &self.generators[idx]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows.iter().copied()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn has_arrow(&self, source: usize, target: usize, upower: i64) -> bool {
        self.arrows.contains(&Arrow { source, target, upower })
    }

    /// Arrows leaving `source`.
    pub fn outgoing(&self, source: usize) -> impl Iterator<Item = Arrow> + '_ {
        let lo = Arrow {
            source,
            target: 0,
            upower: i64::MIN,
        };
        self.arrows.range(lo..).take_while(move |a| a.source == source).copied()
    }

    /// Arrows entering `target`.
    pub fn incoming(&self, target: usize) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows.iter().filter(move |a| a.target == target).copied()
    }

    /// `(min, max)` Alexander grading, `None` when empty.
    pub fn alexander_range(&self) -> Option<(i64, i64)> {
        let lo = self.generators.iter().map(|g| g.alexander).min()?;
        let hi = self.generators.iter().map(|g| g.alexander).max()?;
        Some((lo, hi))
    }

    /// Builds a complex from generators drawn at lattice points. An arrow
    /// between points at `(i₁, j₁)` and `(i₂, j₂)` becomes `U^{i₁−i₂}` on the
    /// orbit representatives.
    pub fn from_lattice(points: &[LatticePoint], arrows: &[(&str, &str)]) -> Result<Self> {
        let mut c = Self::new();
        let mut column = HashMap::new();
        for p in points {
            c.add_generator(p.name.clone(), p.j - p.i, p.gr - 2 * p.i);
            column.insert(p.name.as_str(), p.i);
        }
        for (from, to) in arrows {
            let (Some(i1), Some(i2)) = (column.get(from), column.get(to)) else {
                return Err(Error::InvalidComplex(format!(
                    "arrow {from} -> {to} names an unknown point"
                )));
            };
            c.add_arrow(from, to, i1 - i2)?;
        }
        Ok(c)
    }

    /// For drawing: a column `k_g` per generator so that `U^{−k_g} g` sits at
    /// `(k_g, alexander + k_g)` and spanning-tree arrows stay on the lattice.
    /// Each connected component is shifted so its leftmost dot is at `i = 0`.
    pub fn layout_columns(&self) -> Vec<i64> {
        let n = self.len();
        let mut adjacency: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        for a in &self.arrows {
            // displayed target column = source column − upower
            adjacency[a.source].push((a.target, -a.upower));
            adjacency[a.target].push((a.source, a.upower));
        }
        let mut column: Vec<Option<i64>> = vec![None; n];
        for root in 0..n {
            if column[root].is_some() {
                continue;
            }
            column[root] = Some(0);
            let mut members = vec![root];
            let mut stack = vec![root];
            while let Some(g) = stack.pop() {
                let base = column[g].expect("visited");
                for &(h, delta) in &adjacency[g] {
                    if column[h].is_none() {
                        column[h] = Some(base + delta);
                        members.push(h);
                        stack.push(h);
                    }
                }
            }
            let offset = members.iter().map(|&m| column[m].expect("visited")).min().unwrap_or(0);
            for m in members {
                column[m] = column[m].map(|k| k - offset);
            }
        }
        column
            .into_iter()
            .map(|k| k.expect("every generator visited"))
            .collect()
    }

    /// The complex induced on a subset of generators (arrows with both ends
    /// inside), keeping the generators' relative order.
    pub fn induced(&self, members: &[usize]) -> FilteredComplex {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut remap = HashMap::new();
        let mut out = FilteredComplex::new();
        for &m in &sorted {
            let g = &self.generators[m];
            remap.insert(m, out.add_generator(g.name.clone(), g.alexander, g.maslov));
        }
        for a in &self.arrows {
            if let (Some(&s), Some(&t)) = (remap.get(&a.source), remap.get(&a.target)) {
                out.toggle_arrow(s, t, a.upower);
            }
        }
        out
    }

    /// Same complex with every Alexander grading shifted by `alexander` and
    /// every Maslov grading by `maslov`.
    pub fn shifted(&self, alexander: i64, maslov: i64) -> FilteredComplex {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.alexander += alexander;
            g.maslov += maslov;
        }
        out
    }

    /// Same complex with each generator renamed through `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> FilteredComplex {
        let mut out = FilteredComplex::new();
        for g in &self.generators {
            out.add_generator(f(&g.name), g.alexander, g.maslov);
        }
        out.arrows = self.arrows.clone();
        out
    }

    /// Differential on the `i = 0` column: the arrows with `upower = 0`.
    pub fn column_arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows.iter().filter(|a| a.upower == 0).copied()
    }
}

/// Checks the structural invariants, stopping at the first violation:
/// unique names, then gradings, then filtration, then `∂² = 0`.
pub fn validate(c: &FilteredComplex) -> std::result::Result<(), Violation> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for g in &c.generators {
        if seen.insert(g.name.as_str(), 0).is_some() {
            return Err(Violation {
                kind: ViolationKind::DuplicateName,
                generators: vec![g.name.clone()],
                detail: "generator name used twice".into(),
            });
        }
    }
    let name = |k: usize| c.generators[k].name.clone();
    for a in &c.arrows {
        let s = &c.generators[a.source];
        let t = &c.generators[a.target];
        if t.maslov - 2 * a.upower != s.maslov - 1 {
            return Err(Violation {
                kind: ViolationKind::Grading,
                generators: vec![name(a.source), name(a.target)],
                detail: format!(
                    "U^{} {} has grading {}, expected {}",
                    a.upower,
                    t.name,
                    t.maslov - 2 * a.upower,
                    s.maslov - 1
                ),
            });
        }
    }
    for a in &c.arrows {
        let s = &c.generators[a.source];
        let t = &c.generators[a.target];
        if a.upower < 0 || t.alexander - a.upower > s.alexander {
            return Err(Violation {
                kind: ViolationKind::Filtration,
                generators: vec![name(a.source), name(a.target)],
                detail: format!(
                    "arrow to U^{} {} raises the filtration ({} at j={} to ({}, {}))",
                    a.upower,
                    t.name,
                    s.name,
                    s.alexander,
                    -a.upower,
                    t.alexander - a.upower
                ),
            });
        }
    }
    for source in 0..c.len() {
        let mut parity: BTreeMap<(usize, i64), bool> = BTreeMap::new();
        for first in c.outgoing(source) {
            for second in c.outgoing(first.target) {
                let slot = parity
                    .entry((second.target, first.upower + second.upower))
                    .or_insert(false);
                *slot = !*slot;
            }
        }
        if let Some(((target, power), _)) = parity.into_iter().find(|(_, odd)| *odd) {
            return Err(Violation {
                kind: ViolationKind::DSquared,
                generators: vec![name(source), name(target)],
                detail: format!("∂²({}) contains U^{} {}", name(source), power, name(target)),
            });
        }
    }
    Ok(())
}

/// `St(v) ⊗ F[U, U⁻¹]`: one generator `v0, v1, …` per walk vertex; every
/// grading-one vertex maps to both walk neighbours.
pub fn from_staircase(staircase: &Staircase) -> FilteredComplex {
    let verts = vertices(staircase);
    let points: Vec<LatticePoint> = verts
        .iter()
        .enumerate()
        .map(|(k, v)| LatticePoint::new(format!("v{k}"), v.i, v.j, v.gr))
        .collect();
    let names: Vec<&str> = points.iter().map(|p| p.name.as_str()).collect();
    let arrows: Vec<(&str, &str)> = (1..verts.len())
        .step_by(2)
        .flat_map(|k| [(names[k], names[k - 1]), (names[k], names[k + 1])])
        .collect();
    FilteredComplex::from_lattice(&points, &arrows).expect("staircase arrows name walk vertices")
}

/// Tensor product over GF(2)[U, U⁻¹]: generator `(a,b)` with summed
/// gradings, differential by the Leibniz rule.
pub fn tensor(left: &FilteredComplex, right: &FilteredComplex) -> FilteredComplex {
    let mut out = FilteredComplex::new();
    let n2 = right.len();
    for a in &left.generators {
        for b in &right.generators {
            out.add_generator(
                format!("({},{})", a.name, b.name),
                a.alexander + b.alexander,
                a.maslov + b.maslov,
            );
        }
    }
    for arrow in &left.arrows {
        for b in 0..n2 {
            out.toggle_arrow(arrow.source * n2 + b, arrow.target * n2 + b, arrow.upower);
        }
    }
    for a in 0..left.len() {
        for arrow in &right.arrows {
            out.toggle_arrow(a * n2 + arrow.source, a * n2 + arrow.target, arrow.upower);
        }
    }
    out
}

/// Disjoint union of complexes with pairwise distinct generator names.
pub fn direct_sum(parts: &[FilteredComplex]) -> Result<FilteredComplex> {
    let mut out = FilteredComplex::new();
    for part in parts {
        let offset = out.len();
        for g in &part.generators {
            if out.index_of(&g.name).is_some() {
                return Err(Error::InvalidComplex(format!(
                    "generator '{}' appears in two summands",
                    g.name
                )));
            }
            out.add_generator(g.name.clone(), g.alexander, g.maslov);
        }
        for a in &part.arrows {
            out.toggle_arrow(a.source + offset, a.target + offset, a.upower);
        }
    }
    Ok(out)
}

/// The `U`-power `s` making `U^s x` a legal partner for `y`, if any.
fn basis_change_shift(c: &FilteredComplex, x: usize, y: usize) -> std::result::Result<i64, String> {
    if x == y {
        return Err("x and y must differ".into());
    }
    let gx = &c.generators[x];
    let gy = &c.generators[y];
    let diff = gx.maslov - gy.maslov;
    if diff % 2 != 0 {
        return Err(format!(
            "no U-translate of {} has grading {} (parity differs)",
            gx.name, gy.maslov
        ));
    }
    let s = diff / 2;
    if s < 0 {
        return Err(format!(
            "U^{s} {} lies right of {} in the i filtration",
            gx.name, gy.name
        ));
    }
    if gx.alexander - s > gy.alexander {
        return Err(format!(
            "U^{s} {} has j = {} above {}'s j = {}",
            gx.name,
            gx.alexander - s,
            gy.name,
            gy.alexander
        ));
    }
    Ok(s)
}

/// Replaces `y` by `y' = y + U^s x` (the new generator keeps the name `y`):
/// every arrow into `y` adds one into `x`, every arrow out of `x` adds one out
/// of `y'`.
pub fn basis_change(c: &FilteredComplex, change: &BasisChange) -> Result<FilteredComplex> {
    let illegal = |reason: String| Error::IllegalBasisChange {
        x: change.x.clone(),
        y: change.y.clone(),
        reason,
    };
    let x = c
        .index_of(&change.x)
        .ok_or_else(|| illegal("x is not a generator".into()))?;
    let y = c
        .index_of(&change.y)
        .ok_or_else(|| illegal("y is not a generator".into()))?;
    let s = basis_change_shift(c, x, y).map_err(illegal)?;
    Ok(apply_basis_change(c, x, y, s))
}

fn apply_basis_change(c: &FilteredComplex, x: usize, y: usize, s: i64) -> FilteredComplex {
    let mut out = c.clone();
    for a in c.incoming(y) {
        out.toggle_arrow(a.source, x, a.upower + s);
    }
    for a in c.outgoing(x) {
        out.toggle_arrow(y, a.target, a.upower + s);
    }
    out
}

/// Eliminates every arrow between distinct subsets of `plan` by filtered
/// basis changes.
///
/// `plan` must partition the generators, with every cross-subset arrow
/// pointing from a later subset to an earlier one. Subsets are processed from
/// last to first; for the current subset `P` and the union `E` of the earlier
/// ones, a filtered map `h : P → E` with `D + ∂_E h + h ∂_P = 0` is solved for
/// over GF(2) and applied as the basis changes `p' = p + h(p)`.
pub fn remove_diagonals(c: &FilteredComplex, plan: &[Vec<String>]) -> Result<FilteredComplex> {
    let subset_of = plan_membership(c, plan)?;
    for a in &c.arrows {
        let (sp, tp) = (subset_of[a.source], subset_of[a.target]);
        if sp < tp {
            return Err(Error::InadmissiblePlan(format!(
                "arrow {} -> {} goes from subset {sp} to the later subset {tp}",
                c.generators[a.source].name, c.generators[a.target].name
            )));
        }
    }

    let mut current = c.clone();
    for level in (1..plan.len()).rev() {
        let moves = solve_level(&current, &subset_of, level)?;
        for (x, y, s) in moves {
            current = apply_basis_change(&current, x, y, s);
        }
        if current
            .arrows
            .iter()
            .any(|a| subset_of[a.source] == level && subset_of[a.target] < level)
        {
            return Err(Error::ObstructedDiagonals(level));
        }
    }
    debug_assert!(current
        .arrows
        .iter()
        .all(|a| subset_of[a.source] == subset_of[a.target]));
    Ok(current)
}

fn plan_membership(c: &FilteredComplex, plan: &[Vec<String>]) -> Result<Vec<usize>> {
    let mut subset_of = vec![usize::MAX; c.len()];
    for (k, subset) in plan.iter().enumerate() {
        for name in subset {
            let idx = c
                .index_of(name)
                .ok_or_else(|| Error::InadmissiblePlan(format!("'{name}' is not a generator")))?;
            if subset_of[idx] != usize::MAX {
                return Err(Error::InadmissiblePlan(format!("'{name}' is listed twice")));
            }
            subset_of[idx] = k;
        }
    }
    if let Some(missing) = subset_of.iter().position(|&k| k == usize::MAX) {
        return Err(Error::InadmissiblePlan(format!(
            "'{}' is not covered by the plan",
            c.generators[missing].name
        )));
    }
    Ok(subset_of)
}

/// Solves for the basis changes `(x, y, s)` clearing arrows out of subset
/// `level` into earlier subsets.
fn solve_level(c: &FilteredComplex, subset_of: &[usize], level: usize) -> Result<Vec<(usize, usize, i64)>> {
    let block: Vec<usize> = (0..c.len()).filter(|&g| subset_of[g] == level).collect();
    let earlier: Vec<usize> = (0..c.len()).filter(|&g| subset_of[g] < level).collect();

    // unknowns h(p, q) for every legal move y = p, x = q
    let mut unknowns: Vec<(usize, usize, i64)> = Vec::new();
    let mut unknown_index: HashMap<(usize, usize), usize> = HashMap::new();
    for &p in &block {
        for &q in &earlier {
            if let Ok(s) = basis_change_shift(c, q, p) {
                unknown_index.insert((p, q), unknowns.len());
                unknowns.push((q, p, s));
            }
        }
    }

    // one equation per potential arrow p -> U^a t with t earlier
    let mut equations: BTreeMap<(usize, usize, i64), (Vec<usize>, bool)> = BTreeMap::new();
    for &p in &block {
        for a in c.outgoing(p) {
            if subset_of[a.target] < level {
                equations.entry((p, a.target, a.upower)).or_default().1 ^= true;
            }
        }
    }
    for (var, &(q, p, s)) in unknowns.iter().enumerate() {
        // ∂_E h: p' picks up the arrows out of q
        for a in c.outgoing(q) {
            equations.entry((p, a.target, a.upower + s)).or_default().0.push(var);
        }
        // h ∂_P: arrows k -> p inside the block add k -> q
        for a in c.incoming(p) {
            if subset_of[a.source] == level {
                equations.entry((a.source, q, a.upower + s)).or_default().0.push(var);
            }
        }
    }
    if equations.values().all(|(_, rhs)| !rhs) {
        return Ok(Vec::new());
    }

    let mut matrix = BitMatrix::zeros(equations.len(), unknowns.len());
    let mut rhs = BitVector::zeros(equations.len());
    for (row, (_, (vars, constant))) in equations.iter().enumerate() {
        for &v in vars {
            matrix.toggle(row, v);
        }
        rhs.set(row, *constant);
    }
    let solution = matrix.solve(&rhs)?.ok_or(Error::ObstructedDiagonals(level))?;
    Ok(solution.ones().map(|v| unknowns[v]).collect())
}

/// Connected components of the arrow graph, ordered by their first
/// generator.
pub fn split_summands(c: &FilteredComplex) -> Vec<FilteredComplex> {
    let n = c.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut k: usize) -> usize {
        while parent[k] != k {
            parent[k] = parent[parent[k]];
            k = parent[k];
        }
        k
    }
    for a in &c.arrows {
        let (ra, rb) = (find(&mut parent, a.source), find(&mut parent, a.target));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for g in 0..n {
        let root = find(&mut parent, g);
        groups.entry(root).or_default().push(g);
    }
    let mut parts: Vec<Vec<usize>> = groups.into_values().collect();
    parts.sort_by_key(|members| members[0]);
    parts.iter().map(|members| c.induced(members)).collect()
}

/// A bijection `self → other` (as index map) matching gradings after a
/// uniform shift and carrying arrows onto arrows with equal `U`-powers.
/// Returns the map together with the `(alexander, maslov)` shift.
pub fn isomorphism_up_to_shift(a: &FilteredComplex, b: &FilteredComplex) -> Option<(Vec<usize>, (i64, i64))> {
    if a.len() != b.len() || a.arrow_count() != b.arrow_count() {
        return None;
    }
    if a.is_empty() {
        return Some((Vec::new(), (0, 0)));
    }
    for first in 0..b.len() {
        let shift = (
            b.generators[first].alexander - a.generators[0].alexander,
            b.generators[first].maslov - a.generators[0].maslov,
        );
        let mut map = vec![usize::MAX; a.len()];
        let mut used = vec![false; b.len()];
        map[0] = first;
        used[first] = true;
        if extend_isomorphism(a, b, shift, 1, &mut map, &mut used) {
            return Some((map, shift));
        }
    }
    None
}

fn extend_isomorphism(
    a: &FilteredComplex,
    b: &FilteredComplex,
    shift: (i64, i64),
    next: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if next == a.len() {
        return a
            .arrows
            .iter()
            .all(|arr| b.has_arrow(map[arr.source], map[arr.target], arr.upower));
    }
    let g = &a.generators[next];
    for cand in 0..b.len() {
        let h = &b.generators[cand];
        if used[cand] || h.alexander != g.alexander + shift.0 || h.maslov != g.maslov + shift.1 {
            continue;
        }
        // arrows among already-mapped generators must match
        map[next] = cand;
        let consistent = a.arrows.iter().all(|arr| {
            if arr.source > next || arr.target > next {
                return true;
            }
            b.has_arrow(map[arr.source], map[arr.target], arr.upower)
        });
        if consistent {
            used[cand] = true;
            if extend_isomorphism(a, b, shift, next + 1, map, used) {
                return true;
            }
            used[cand] = false;
        }
        map[next] = usize::MAX;
    }
    false
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    from: String,
    to: String,
    upower: i64,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    generators: Vec<Generator>,
    arrows: Vec<ArrowJson>,
}

impl Serialize for FilteredComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            generators: self.generators.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    from: self.generators[a.source].name.clone(),
                    to: self.generators[a.target].name.clone(),
                    upower: a.upower,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FilteredComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexJson::deserialize(deserializer)?;
        let mut c = FilteredComplex::new();
        for g in raw.generators {
            c.add_generator(g.name, g.alexander, g.maslov);
        }
        for a in raw.arrows {
            c.add_arrow(&a.from, &a.to, a.upower)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(steps: &[u64]) -> Staircase {
        Staircase::new(steps.to_vec()).unwrap()
    }

    fn trefoil() -> FilteredComplex {
        from_staircase(&st(&[1, 1]))
    }

    #[test]
    fn staircase_complex_shape() {
        let c = trefoil();
        assert_eq!(c.len(), 3);
        assert_eq!(c.arrow_count(), 2);
        let (a, b, cc) = (0, 1, 2);
        // vertical arrow keeps the column, horizontal one carries one U
        assert!(c.has_arrow(b, cc, 0));
        assert!(c.has_arrow(b, a, 1));
        assert_eq!(c.generators()[a].alexander, 1);
        assert!(validate(&c).is_ok());

        let unknot = from_staircase(&Staircase::unknot());
        assert_eq!((unknot.len(), unknot.arrow_count()), (1, 0));

        let t34 = from_staircase(&st(&[1, 2, 2, 1]));
        assert_eq!((t34.len(), t34.arrow_count()), (5, 4));
        assert!(validate(&t34).is_ok());
        // i = 0 column reproduces j - i of each vertex
        let alex: Vec<i64> = t34.generators().iter().map(|g| g.alexander).collect();
        assert_eq!(alex, vec![3, 2, 0, -2, -3]);
    }

    #[test]
    fn validate_reports_filtration() {
        let mut c = FilteredComplex::new();
        c.add_generator("a", 0, 1);
        c.add_generator("b", 1, 0);
        c.add_arrow("a", "b", 0).unwrap();
        let v = validate(&c).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Filtration);
        assert_eq!(v.generators, vec!["a", "b"]);
    }

    #[test]
    fn validate_reports_d_squared() {
        let mut c = FilteredComplex::new();
        c.add_generator("a", 0, 2);
        c.add_generator("b", 0, 1);
        c.add_generator("c", 0, 0);
        c.add_arrow("a", "b", 0).unwrap();
        c.add_arrow("b", "c", 0).unwrap();
        assert_eq!(validate(&c).unwrap_err().kind, ViolationKind::DSquared);
    }

    #[test]
    fn validate_reports_grading_and_duplicates() {
        let mut c = FilteredComplex::new();
        c.add_generator("a", 0, 0);
        c.add_generator("b", 0, 0);
        c.add_arrow("a", "b", 0).unwrap();
        assert_eq!(validate(&c).unwrap_err().kind, ViolationKind::Grading);

        let mut c = FilteredComplex::new();
        c.add_generator("a", 0, 0);
        c.add_generator("a", 1, 0);
        assert_eq!(validate(&c).unwrap_err().kind, ViolationKind::DuplicateName);
    }

    #[test]
    fn toggling_twice_cancels() {
        let mut c = trefoil();
        c.add_arrow("v1", "v0", 1).unwrap();
        assert_eq!(c.arrow_count(), 1);
        assert!(c.add_arrow("v1", "nope", 0).is_err());
    }

    #[test]
    fn tensor_with_unknot_is_a_copy() {
        let t = from_staircase(&st(&[1, 2, 2, 1]));
        let prod = tensor(&t, &from_staircase(&Staircase::unknot()));
        assert!(isomorphism_up_to_shift(&t, &prod).is_some());
        assert_eq!(prod.generators()[0].name, "(v0,v0)");
    }

    #[test]
    fn tensor_squares_validate() {
        let t = trefoil();
        let sq = tensor(&t, &t);
        assert_eq!(sq.len(), 9);
        assert_eq!(sq.arrow_count(), 12);
        assert!(validate(&sq).is_ok());
        let t34 = from_staircase(&st(&[1, 2, 2, 1]));
        let sq = tensor(&t34, &t34);
        assert_eq!(sq.len(), 25);
        assert_eq!(sq.arrow_count(), 40);
        assert!(validate(&sq).is_ok());
    }

    #[test]
    fn basis_change_preconditions() {
        let c = trefoil();
        // U v0 at (-1, 0) is not below v2 at (0, -1)
        let err = basis_change(&c, &BasisChange::new("v0", "v2")).unwrap_err();
        assert!(matches!(err, Error::IllegalBasisChange { .. }));
        // would need U^{-1} v2
        assert!(basis_change(&c, &BasisChange::new("v2", "v0")).is_err());
        // parity
        assert!(basis_change(&c, &BasisChange::new("v1", "v0")).is_err());
        assert!(basis_change(&c, &BasisChange::new("v0", "v0")).is_err());
        assert!(basis_change(&c, &BasisChange::new("zz", "v0")).is_err());
    }

    #[test]
    fn basis_change_follows_both_rules() {
        let points = [
            LatticePoint::new("z", 2, 1, 1),
            LatticePoint::new("y", 1, 1, 0),
            LatticePoint::new("x", 0, 0, 0),
            LatticePoint::new("w", 0, -1, -1),
        ];
        let c = FilteredComplex::from_lattice(&points, &[("z", "y"), ("x", "w")]).unwrap();
        assert!(validate(&c).is_ok());
        let changed = basis_change(&c, &BasisChange::new("x", "y")).unwrap();
        assert!(validate(&changed).is_ok());
        let (z, y, x, w) = (0, 1, 2, 3);
        // z -> U y adds z -> U^2 x; x -> w adds y' -> U w
        assert!(changed.has_arrow(z, x, 2));
        assert!(changed.has_arrow(y, w, 1));
        assert_eq!(changed.arrow_count(), 4);
        let twice = basis_change(&changed, &BasisChange::new("x", "y")).unwrap();
        assert_eq!(twice, c);
    }

    #[test]
    fn basis_change_leaves_untouched_arrows() {
        let mut c = trefoil();
        let x = c.add_generator("x", 0, 0);
        let y = c.add_generator("y", 0, 0);
        let changed = basis_change(&c, &BasisChange::new("x", "y")).unwrap();
        assert_eq!(changed.arrows().collect::<Vec<_>>(), c.arrows().collect::<Vec<_>>());
        let _ = (x, y);
    }

    #[test]
    fn split_of_staircase_is_single() {
        assert_eq!(split_summands(&trefoil()).len(), 1);
        assert!(split_summands(&FilteredComplex::new()).is_empty());
    }

    #[test]
    fn direct_sum_rejects_name_clash() {
        let t = trefoil();
        assert!(direct_sum(&[t.clone(), t.clone()]).is_err());
        let sum = direct_sum(&[t.clone(), t.renamed(|n| format!("{n}'"))]).unwrap();
        assert_eq!(sum.len(), 6);
        assert_eq!(split_summands(&sum).len(), 2);
    }

    #[test]
    fn plan_errors() {
        let t = trefoil();
        let plan = vec![vec!["v0".to_string(), "v1".to_string()]];
        assert!(matches!(remove_diagonals(&t, &plan), Err(Error::InadmissiblePlan(_))));
        let plan = vec![
            vec!["v0".to_string()],
            vec!["v1".to_string(), "v2".to_string()],
            vec!["v0".to_string()],
        ];
        assert!(matches!(remove_diagonals(&t, &plan), Err(Error::InadmissiblePlan(_))));
        // v1 -> v0 would go from an earlier to a later subset
        let plan = vec![vec!["v1".to_string(), "v2".to_string()], vec!["v0".to_string()]];
        assert!(matches!(remove_diagonals(&t, &plan), Err(Error::InadmissiblePlan(_))));
        // the trefoil is not a direct sum of {v0} and {v1, v2}
        let plan = vec![vec!["v0".to_string()], vec!["v1".to_string(), "v2".to_string()]];
        assert!(matches!(
            remove_diagonals(&t, &plan),
            Err(Error::ObstructedDiagonals(1))
        ));
    }

    #[test]
    fn diagonal_free_input_is_unchanged() {
        let t = trefoil();
        let plan = vec![vec!["v0".to_string(), "v1".to_string(), "v2".to_string()]];
        assert_eq!(remove_diagonals(&t, &plan).unwrap(), t);
    }

    #[test]
    fn layout_recovers_staircase_lattice() {
        let t34 = from_staircase(&st(&[1, 2, 2, 1]));
        let cols = t34.layout_columns();
        let pos: Vec<(i64, i64)> = cols
            .iter()
            .zip(t34.generators())
            .map(|(&k, g)| (k, g.alexander + k))
            .collect();
        assert_eq!(pos, vec![(0, 3), (1, 3), (1, 1), (3, 1), (3, 0)]);
    }

    #[test]
    fn json_round_trip() {
        let t = from_staircase(&st(&[1, 2, 2, 1]));
        let json = serde_json::to_string(&t).unwrap();
        let back: FilteredComplex = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        let bad =
            r#"{"generators":[{"name":"a","alexander":0,"maslov":0}],"arrows":[{"from":"a","to":"b","upower":0}]}"#;
        assert!(serde_json::from_str::<FilteredComplex>(bad).is_err());
    }
}

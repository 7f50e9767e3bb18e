//! Staircase complexes of L-space knots and the closed-form invariants read
//! off their vertex sets.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// A generator position `(i, j)` of a staircase together with its Maslov
/// grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub i: i64,
    pub j: i64,
    pub gr: i64,
}

/// The staircase `St(v₁, …, v_{2k})`.
///
/// Odd-indexed steps (1-based) are horizontal, even-indexed ones vertical.
/// The walk starts on the `i = 0` axis and ends on the `j = 0` axis. The tuple
/// has `2k` entries while the complex has `2k + 1` generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Staircase {
    steps: Vec<u64>,
}

#[derive(Deserialize)]
struct StaircaseRepr {
    steps: Vec<u64>,
}

impl<'de> Deserialize<'de> for Staircase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StaircaseRepr::deserialize(d)?;
        Staircase::new(repr.steps).map_err(serde::de::Error::custom)
    }
}

impl Staircase {
    /// Validates positivity, even length and palindromicity.
    pub fn new(steps: Vec<u64>) -> Result<Self> {
        if let Some(pos) = steps.iter().position(|&s| s == 0) {
            return Err(Error::InvalidStaircase(format!(
                "step {} is zero; steps must be positive",
                pos + 1
            )));
        }
        if !steps.len().is_multiple_of(2) {
            return Err(Error::InvalidStaircase(format!(
                "a staircase needs an even number of steps, got {}",
                steps.len()
            )));
        }
        if steps.iter().ne(steps.iter().rev()) {
            return Err(Error::InvalidStaircase(format!("steps {steps:?} are not palindromic")));
        }
        Ok(Self { steps })
    }

    /// The unknot staircase: a single generator at the origin.
    pub fn unknot() -> Self {
        Self { steps: Vec::new() }
    }

    /// `St(1, …, 1)` with `2m` entries, the staircase of `T_{2,2m+1}`.
    pub fn twist_family(m: usize) -> Self {
        Self { steps: vec![1; 2 * m] }
    }

    pub fn steps(&self) -> &[u64] {
        &self.steps
    }

    pub fn generator_count(&self) -> usize {
        self.steps.len() + 1
    }

    /// True for `St(1, …, 1)`, returning `m` for the `T_{2,2m+1}` member.
    pub fn twist_parameter(&self) -> Option<usize> {
        (!self.steps.is_empty() && self.steps.iter().all(|&s| s == 1)).then_some(self.steps.len() / 2)
    }

    /// Parses `"v1,v2,..."`; the empty string is the unknot.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::unknot());
        }
        let steps = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidStaircase(format!("'{}' is not a positive integer", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(steps)
    }
}

impl std::fmt::Display for Staircase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body: Vec<String> = self.steps.iter().map(u64::to_string).collect();
        write!(f, "St({})", body.join(","))
    }
}

/// Reads off the staircase of an L-space knot from `Σ_{k=0}^{2m} (−1)^k t^{n_k}`.
pub fn staircase_from_alexander(poly: &LaurentPoly) -> Result<Staircase> {
    if poly.is_zero() {
        return Err(Error::NotLSpaceForm("zero polynomial".into()));
    }
    let mut exponents = Vec::new();
    for (k, (e, c)) in poly.terms().enumerate() {
        if !c.abs().is_one() {
            return Err(Error::NotLSpaceForm(format!("coefficient {c} of t^{e} is not ±1")));
        }
        let expected_positive = k % 2 == 0;
        if c.is_positive() != expected_positive {
            return Err(Error::NotLSpaceForm(format!(
                "coefficient of t^{e} breaks the +,−,+,… alternation"
            )));
        }
        exponents.push(e);
    }
    if exponents.len() % 2 == 0 {
        return Err(Error::NotLSpaceForm("top coefficient is −1".into()));
    }
    let steps = exponents.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
    Staircase::new(steps).map_err(|e| Error::NotLSpaceForm(e.to_string()))
}

/// The staircase of `T_{p,q}`.
pub fn torus_staircase(p: i64, q: i64) -> Result<Staircase> {
    staircase_from_alexander(&crate::laurent::alexander_torus(p, q)?)
}

/// Walk vertices: start at `(0, Σ even-indexed steps)`, step right then down
/// alternately, with gradings `0, 1, 0, 1, …, 0`.
pub fn vertices(staircase: &Staircase) -> Vec<Vertex> {
    let height: i64 = staircase.steps.iter().skip(1).step_by(2).map(|&s| s as i64).sum();
    let mut current = Vertex { i: 0, j: height, gr: 0 };
    let mut out = vec![current];
    for (k, &step) in staircase.steps.iter().enumerate() {
        let step = step as i64;
        if k % 2 == 0 {
            current.i += step;
        } else {
            current.j -= step;
        }
        current.gr = 1 - current.gr;
        out.push(current);
    }
    out
}

/// `τ`: height of the vertex on the `i = 0` axis.
pub fn tau(staircase: &Staircase) -> i64 {
    vertices(staircase)[0].j
}

/// `d(S³₁(K)) = −2 · min_{(i,j)} max{i, j}`.
pub fn d1_closed_form(staircase: &Staircase) -> i64 {
    let best = vertices(staircase)
        .iter()
        .map(|v| v.i.max(v.j))
        .min()
        .expect("nonempty vertex set");
    -2 * best
}

/// `δ(D(K)) = 2 · d(S³₁(K # K)) = 2 · (−2 · min max{i+k, j+l})` over ordered
/// vertex pairs.
pub fn delta_whitehead(staircase: &Staircase) -> i64 {
    let verts = vertices(staircase);
    let best = verts
        .iter()
        .flat_map(|a| verts.iter().map(move |b| (a.i + b.i).max(a.j + b.j)))
        .min()
        .expect("nonempty vertex set");
    2 * (-2 * best)
}

/// Pairwise sums of vertices with summed gradings, sorted.
pub fn tensor_vertex_multiset(first: &Staircase, second: &Staircase) -> Vec<Vertex> {
    let right = vertices(second);
    let mut out: Vec<Vertex> = vertices(first)
        .iter()
        .flat_map(|a| {
            right.iter().map(move |b| Vertex {
                i: a.i + b.i,
                j: a.j + b.j,
                gr: a.gr + b.gr,
            })
        })
        .collect();
    out.sort();
    out
}

/// `Σ (−1)^{gr} t^{j−i}` over vertices: the graded Euler characteristic of
/// the `i = 0` column.
pub fn alexander_of_staircase(staircase: &Staircase) -> LaurentPoly {
    LaurentPoly::from_terms(
        vertices(staircase)
            .into_iter()
            .map(|v| (v.j - v.i, if v.gr % 2 == 0 { 1 } else { -1 })),
    )
}

//! Exact Laurent polynomials in one variable with integer coefficients, and
//! the numerical semigroup route to Alexander polynomials of torus knots.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Laurent polynomial `Σ c_e t^e` with `c_e ∈ ℤ`.
///
/// Only nonzero coefficients are stored, so two polynomials are equal exactly
/// when their maps are equal.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c · t^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// `P(t⁻¹)`.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// `P(1)`, the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.reflect()
    }
}

/// True iff `P(t) = P(t⁻¹)` and `P(1) = ±1`, the shape every symmetrized
/// Alexander polynomial has.
pub fn poly_eval_symmetry_check(poly: &LaurentPoly) -> bool {
    poly.is_symmetric() && poly.eval_at_one().abs().is_one()
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.coeffs.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let show_mag = !mag.is_one() || *e == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match *e {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

// JSON form: `[[exponent, coefficient], ...]` sorted by exponent. Coefficients
// that overflow i64 are written as decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            match c.to_i64() {
                Some(small) => seq.serialize_element(&(*e, small))?,
                None => seq.serialize_element(&(*e, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
                let mut p = LaurentPoly::zero();
                let mut last: Option<i64> = None;
                while let Some((e, c)) = seq.next_element::<(i64, CoeffRepr)>()? {
                    if last.is_some_and(|l| l >= e) {
                        return Err(de::Error::custom("exponents must be strictly increasing"));
                    }
                    last = Some(e);
                    let c = match c {
                        CoeffRepr::Small(v) => BigInt::from(v),
                        CoeffRepr::Big(s) => s.parse().map_err(de::Error::custom)?,
                    };
                    if c.is_zero() {
                        return Err(de::Error::custom("zero coefficient"));
                    }
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }
        deserializer.deserialize_seq(PolyVisitor)
    }
}

fn check_torus(p: i64, q: i64) -> Result<()> {
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(Error::InvalidTorusParameters { p, q });
    }
    Ok(())
}

/// The numerical semigroup `⟨p, q⟩ ⊂ ℕ` for coprime `p, q ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Semigroup {
    p: i64,
    q: i64,
}

impl Semigroup {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        check_torus(p, q)?;
        Ok(Self { p, q })
    }

    pub fn generators(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// Least `c` with every integer `≥ c` a member: `(p−1)(q−1)`.
    pub fn conductor(&self) -> i64 {
        (self.p - 1) * (self.q - 1)
    }

    /// Members in `[0, bound]`, increasing.
    pub fn elements(&self, bound: i64) -> Vec<i64> {
        if bound < 0 {
            return Vec::new();
        }
        let size = usize::try_from(bound).expect("bound fits in usize") + 1;
        let mut member = vec![false; size];
        member[0] = true;
        for n in 1..size {
            let n_i = n as i64;
            member[n] = (n_i >= self.p && member[(n_i - self.p) as usize])
                || (n_i >= self.q && member[(n_i - self.q) as usize]);
        }
        member
            .iter()
            .enumerate()
            .filter(|(_, m)| **m)
            .map(|(n, _)| n as i64)
            .collect()
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= 0 && (n >= self.conductor() || self.elements(n).last() == Some(&n))
    }

    /// Non-members below the conductor.
    pub fn gaps(&self) -> Vec<i64> {
        let c = self.conductor();
        let members = self.elements(c - 1);
        (0..c).filter(|n| members.binary_search(n).is_err()).collect()
    }
}

/// `{ap + bq : a, b ≥ 0} ∩ [0, bound]` in increasing order.
pub fn semigroup_elements(p: i64, q: i64, bound: i64) -> Result<Vec<i64>> {
    if bound < 0 {
        return Err(Error::InvalidParameter(format!(
            "bound must be non-negative, got {bound}"
        )));
    }
    Ok(Semigroup::new(p, q)?.elements(bound))
}

/// Symmetrized Alexander polynomial of the torus knot `T_{p,q}`.
///
/// With `S = ⟨p, q⟩` and conductor `c = (p−1)(q−1)`, the unsymmetrized
/// polynomial is `(1 − t)·Σ_{s ∈ S, s < c} t^s + t^c`; it is then centered by
/// `t^{−c/2}`.
pub fn alexander_torus(p: i64, q: i64) -> Result<LaurentPoly> {
    let semigroup = Semigroup::new(p, q)?;
    let c = semigroup.conductor();
    let below: LaurentPoly = LaurentPoly::from_terms(semigroup.elements(c - 1).into_iter().map(|s| (s, 1)));
    let one_minus_t = LaurentPoly::from_terms([(0, 1), (1, -1)]);
    let unsymmetrized = &(&one_minus_t * &below) + &LaurentPoly::monomial(1, c);
    Ok(unsymmetrized.shift(-c / 2))
}

#![allow(dead_code)]

use std::collections::BTreeSet;

use cfk::filtered::{FilteredComplex, LatticePoint};
use cfk::laurent::LaurentPoly;

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Coprime pairs `2 <= p < q <= bound`.
pub fn torus_pairs(bound: i64) -> Vec<(i64, i64)> {
    (2..=bound)
        .flat_map(|q| (2..q).map(move |p| (p, q)))
        .filter(|&(p, q)| gcd(p, q) == 1)
        .collect()
}

/// Dense integer polynomial, index = degree.
fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `t^n − 1`.
fn cyclotomic_factor(n: usize) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    v[0] = -1;
    v[n] = 1;
    v
}

/// Exact long division by a monic divisor; panics on a nonzero remainder.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1);
    let mut quot = vec![0; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "division left a remainder");
    quot
}

/// `Δ_{T_{p,q}}` by dividing `(t^{pq} − 1)(t − 1)` by `(t^p − 1)(t^q − 1)`,
/// then centring.
pub fn alexander_by_division(p: i64, q: i64) -> LaurentPoly {
    let (pu, qu) = (p as usize, q as usize);
    let num = poly_mul(&cyclotomic_factor(pu * qu), &cyclotomic_factor(1));
    let den = poly_mul(&cyclotomic_factor(pu), &cyclotomic_factor(qu));
    let quot = poly_div_exact(&num, &den);
    let half = ((p - 1) * (q - 1)) / 2;
    LaurentPoly::from_terms(
        quot.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k as i64 - half, c)),
    )
}

/// Every `ap + bq <= bound` with `a, b >= 0`.
pub fn semigroup_brute_force(p: i64, q: i64, bound: i64) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for a in 0..=bound / p {
        for b in 0..=bound / q {
            let n = a * p + b * q;
            if n <= bound {
                out.insert(n);
            }
        }
    }
    out
}

/// Shape-(I) complex: two boxes with dashed coefficients `A, B, C, D`.
pub fn shape_one(coeffs: [bool; 4]) -> FilteredComplex {
    let [a, b, c, d] = coeffs;
    let points = [
        LatticePoint::new("w", 1, 1, 0),
        LatticePoint::new("x", 0, 1, -1),
        LatticePoint::new("y", 1, 0, -1),
        LatticePoint::new("z", 0, 0, -2),
        LatticePoint::new("a", 3, 3, 0),
        LatticePoint::new("b", 2, 3, -1),
        LatticePoint::new("c", 3, 2, -1),
        LatticePoint::new("d", 2, 2, -2),
    ];
    let mut arrows = vec![
        ("w", "x"),
        ("w", "y"),
        ("x", "z"),
        ("y", "z"),
        ("a", "b"),
        ("a", "c"),
        ("b", "d"),
        ("c", "d"),
    ];
    for (on, arrow) in [(a, ("a", "x")), (b, ("a", "y")), (c, ("b", "z")), (d, ("c", "z"))] {
        if on {
            arrows.push(arrow);
        }
    }
    FilteredComplex::from_lattice(&points, &arrows).unwrap()
}

/// Shape-(II) complex with dashed coefficients
/// `u1→x, u1→z, w1→x, w1→z, v12→y2`.
pub fn shape_two(coeffs: [bool; 5]) -> FilteredComplex {
    let points = [
        LatticePoint::new("y2", 1, 1, -1),
        LatticePoint::new("x", 0, 1, -2),
        LatticePoint::new("z", 1, 0, -2),
        LatticePoint::new("y1", 0, 0, -3),
        LatticePoint::new("v12", 3, 3, 0),
        LatticePoint::new("u1", 2, 3, -1),
        LatticePoint::new("w1", 3, 2, -1),
        LatticePoint::new("v11", 2, 2, -2),
    ];
    let mut arrows = vec![
        ("y2", "x"),
        ("y2", "z"),
        ("x", "y1"),
        ("z", "y1"),
        ("v12", "u1"),
        ("v12", "w1"),
        ("u1", "v11"),
        ("w1", "v11"),
    ];
    let dashed = [("u1", "x"), ("u1", "z"), ("w1", "x"), ("w1", "z"), ("v12", "y2")];
    arrows.extend(dashed.iter().zip(coeffs).filter(|(_, on)| *on).map(|(a, _)| *a));
    FilteredComplex::from_lattice(&points, &arrows).unwrap()
}

/// Shape-(III) complex (a trefoil plus a box) with dashed coefficients
/// `u2→x, u2→z, w2→x, w2→z, v23→y`.
pub fn shape_three(coeffs: [bool; 5]) -> FilteredComplex {
    let points = [
        LatticePoint::new("x", 0, 1, 0),
        LatticePoint::new("y", 1, 1, 1),
        LatticePoint::new("z", 1, 0, 0),
        LatticePoint::new("v23", 3, 3, 2),
        LatticePoint::new("u2", 2, 3, 1),
        LatticePoint::new("w2", 3, 2, 1),
        LatticePoint::new("v21", 2, 2, 0),
    ];
    let mut arrows = vec![
        ("y", "x"),
        ("y", "z"),
        ("v23", "u2"),
        ("v23", "w2"),
        ("u2", "v21"),
        ("w2", "v21"),
    ];
    let dashed = [("u2", "x"), ("u2", "z"), ("w2", "x"), ("w2", "z"), ("v23", "y")];
    arrows.extend(dashed.iter().zip(coeffs).filter(|(_, on)| *on).map(|(a, _)| *a));
    FilteredComplex::from_lattice(&points, &arrows).unwrap()
}

pub fn bits<const N: usize>(code: u32) -> [bool; N] {
    std::array::from_fn(|k| code >> k & 1 == 1)
}

pub fn plan(subsets: &[&[&str]]) -> Vec<Vec<String>> {
    subsets
        .iter()
        .map(|s| s.iter().map(|n| n.to_string()).collect())
        .collect()
}

/// Coefficient patterns of shape (I) allowed by `∂² = 0`, excluding zero.
pub fn shape_one_patterns() -> Vec<[bool; 4]> {
    (1..16u32)
        .map(bits::<4>)
        .filter(|c| c.iter().filter(|&&b| b).count() % 2 == 0)
        .collect()
}

pub fn shape_two_patterns() -> Vec<[bool; 5]> {
    (1..32u32)
        .map(bits::<5>)
        .filter(|[a, b, c, d, e]| a == b && c == d && *e == (a ^ c))
        .collect()
}

pub fn shape_three_patterns() -> Vec<[bool; 5]> {
    (1..32u32)
        .map(bits::<5>)
        .filter(|[a, b, c, d, e]| (a ^ c) == *e && (b ^ d) == *e)
        .collect()
}

pub const SHAPE_ONE_PLAN: &[&[&str]] = &[&["w", "x", "y", "z"], &["a", "b", "c", "d"]];
pub const SHAPE_TWO_PLAN: &[&[&str]] = &[&["y2", "x", "z", "y1"], &["v12", "u1", "w1", "v11"]];
pub const SHAPE_THREE_PLAN: &[&[&str]] = &[&["x", "y", "z"], &["v23", "u2", "w2", "v21"]];

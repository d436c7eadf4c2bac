//! Geodesic paths between cusps, expanded into symbols by continued
//! fractions.
//!
//! With m(c, d) denoting the class of {g0, g.inf} for g in SL_2(Z) with
//! bottom row (c, d), the path {inf, a/b} expands as
//! sum_k m(q_k, (-1)^(k-1) q_{k-1}) over the continued-fraction
//! convergents p_k/q_k of a/b, and general paths split through infinity.

use crate::modcurve::p1::PairTable;

/// A point of P^1(Q): infinity or a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspPoint {
    Infinity,
    Rational(i128, i128), // numerator, positive denominator, reduced
}

impl CuspPoint {
    pub fn rational(num: i128, den: i128) -> Self {
        if den == 0 {
            return CuspPoint::Infinity;
        }
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n.abs(), d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        CuspPoint::Rational(n, d)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Accumulate the expansion of {inf, a/b} into sparse symbol terms.
fn expand_from_infinity(table: &PairTable, num: i128, den: i128, sign: i64, out: &mut Vec<(usize, i64)>) {
    debug_assert!(den >= 0);
    if den == 0 {
        return; // {inf, inf} = 0
    }
    // continued fraction a/b = [a0; a1, ...] with floor division
    let (mut a, mut b) = (num, den);
    let mut coefs = Vec::new();
    while b != 0 {
        let q = a.div_euclid(b);
        coefs.push(q);
        let r = a - q * b;
        a = b;
        b = r;
    }
    // convergents p_k / q_k with (p_{-1}, q_{-1}) = (1, 0)
    let (mut p_prev, mut q_prev) = (1i128, 0i128);
    let (mut p_cur, mut q_cur) = (coefs[0], 1i128);
    let m = table.modulus() as i128;
    let push = |qk: i128, qk1: i128, sgn: i64, out: &mut Vec<(usize, i64)>| {
        let u = qk.rem_euclid(m) as i64;
        let v = (sgn as i128 * qk1).rem_euclid(m) as i64;
        if let Some(idx) = table.index_of(u, v) {
            out.push((idx, sign));
        } else {
            // a path segment can only be invalid if gcd(u, v, M) > 1,
            // which cannot happen for convergents (q_k, q_{k-1}) = 1
            unreachable!("convergent pair must be coprime");
        }
    };
    // k = 0 term: m(q_0, (-1)^{-1} q_{-1}) = m(1, 0) piece {inf, a0}
    push(q_cur, q_prev, -1, out);
    let mut k = 1usize;
    for &c in &coefs[1..] {
        let p_next = c * p_cur + p_prev;
        let q_next = c * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        let sgn = if (k as i64 - 1).rem_euclid(2) == 0 { 1 } else { -1 };
        push(q_cur, q_prev, sgn, out);
        k += 1;
    }
    debug_assert_eq!(p_cur, num.signum() * num.abs() / gcd_i128(num, den).max(1));
}

/// Expand the path {alpha, beta} into a sparse combination of symbol
/// classes of `table`: {alpha, beta} = {inf, beta} - {inf, alpha}.
pub fn path_to_symbols(table: &PairTable, alpha: CuspPoint, beta: CuspPoint) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    match beta {
        CuspPoint::Infinity => {}
        CuspPoint::Rational(n, d) => expand_from_infinity(table, n, d, 1, &mut out),
    }
    match alpha {
        CuspPoint::Infinity => {}
        CuspPoint::Rational(n, d) => expand_from_infinity(table, n, d, -1, &mut out),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_to_infinity_is_single_symbol() {
        let t = PairTable::new(11);
        // {inf, 0} = m(1, 0); so {0, inf} = -m(1, 0)
        let terms = path_to_symbols(&t, CuspPoint::rational(0, 1), CuspPoint::Infinity);
        assert_eq!(terms.len(), 1);
        let (idx, c) = terms[0];
        assert_eq!(t.pair(idx), (1, 0));
        assert_eq!(c, -1);
    }

    #[test]
    fn degenerate_path_is_empty() {
        let t = PairTable::new(11);
        let a = CuspPoint::rational(3, 7);
        let terms = path_to_symbols(&t, a, a);
        // {a, a} = {inf,a} - {inf,a}: identical terms with opposite signs
        let mut acc = std::collections::BTreeMap::new();
        for (i, c) in terms {
            *acc.entry(i).or_insert(0i64) += c;
        }
        assert!(acc.values().all(|&c| c == 0));
    }
}

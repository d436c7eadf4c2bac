//! Polynomial helpers over Z/p^m (dense u64 coefficient vectors, low to
//! high), including the Hensel machinery that splits a monic polynomial
//! into its x-power part and its unit-constant part.

use crate::arith::zpm::Zpm;
use crate::error::Error;
use crate::Result;

pub fn poly_trim(ring: &Zpm, a: &mut Vec<u64>) {
    let _ = ring;
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn poly_mul(ring: &Zpm, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ring.add(out[i + j], ring.mul(x, y));
        }
    }
    out
}

pub fn poly_add(ring: &Zpm, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = ring.add(x, y);
    }
    out
}

pub fn poly_sub(ring: &Zpm, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = ring.sub(x, y);
    }
    out
}

/// Division with remainder by a monic divisor.
pub fn poly_divmod_monic(ring: &Zpm, a: &[u64], d: &[u64]) -> (Vec<u64>, Vec<u64>) {
    assert!(!d.is_empty() && *d.last().unwrap() == 1, "divisor must be monic");
    let mut rem = a.to_vec();
    poly_trim(ring, &mut rem);
    let dd = d.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quo = vec![0u64; rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        if c != 0 {
            quo[k - dd] = c;
            for (j, &dj) in d.iter().enumerate() {
                rem[k - dd + j] = ring.sub(rem[k - dd + j], ring.mul(c, dj));
            }
        }
    }
    poly_trim(ring, &mut rem);
    poly_trim(ring, &mut quo);
    (quo, rem)
}

fn poly_mod_p(ring: &Zpm, a: &[u64]) -> Vec<u64> {
    let p = ring.p();
    let mut out: Vec<u64> = a.iter().map(|&c| c % p).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

// ---- F_p polynomial arithmetic ----

fn fp_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn fp_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn fp_divmod(p: u64, a: &[u64], d: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut rem = a.to_vec();
    while rem.last() == Some(&0) {
        rem.pop();
    }
    let dd = d.len() - 1;
    let lead_inv = mod_inv(p, *d.last().unwrap());
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quo = vec![0u64; rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = (rem[k] * lead_inv) % p;
        if c != 0 {
            quo[k - dd] = c;
            for (j, &dj) in d.iter().enumerate() {
                rem[k - dd + j] = (rem[k - dd + j] + p * p - c * dj % (p * p)) % p;
            }
        }
    }
    while rem.last() == Some(&0) {
        rem.pop();
    }
    while quo.last() == Some(&0) {
        quo.pop();
    }
    (quo, rem)
}

fn mod_inv(p: u64, a: u64) -> u64 {
    // Fermat
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Extended gcd over F_p: returns (s, t) with s a + t b = 1; fails if
/// gcd is not a unit constant.
fn fp_ext_gcd(p: u64, a: &[u64], b: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![1], vec![]);
    let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divmod(p, &r0, &r1);
        let s2 = fp_sub(p, &s0, &fp_mul(p, &q, &s1));
        let t2 = fp_sub(p, &t0, &fp_mul(p, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if r0.len() != 1 || r0[0] == 0 {
        return Err(Error::domain("polynomials are not comaximal mod p".to_string()));
    }
    let c = mod_inv(p, r0[0]);
    let s: Vec<u64> = s0.iter().map(|&x| x * c % p).collect();
    let t: Vec<u64> = t0.iter().map(|&x| x * c % p).collect();
    Ok((s, t))
}

/// Split a monic polynomial f over Z/p^m as f = f_nil * f_unit with
/// f_nil = x^a mod p and f_unit(0) a unit, together with a Bezout pair
/// (u, v) with u f_nil + v f_unit = 1 mod p^m.
///
/// Returns None for the degenerate cases a = 0 (f_unit = f) and
/// a = deg f (f_nil = f), which the caller special-cases.
pub struct MonicSplit {
    pub f_nil: Vec<u64>,
    pub f_unit: Vec<u64>,
    pub u: Vec<u64>,
    pub v: Vec<u64>,
}

pub fn split_nil_unit(ring: &Zpm, f: &[u64]) -> Result<Option<MonicSplit>> {
    let p = ring.p();
    let m = ring.m();
    assert!(*f.last().unwrap() == 1, "f must be monic");
    let n = f.len() - 1;
    let fbar = poly_mod_p(ring, f);
    // a = order of vanishing at x = 0 mod p
    let a = f.iter().take(n).position(|&c| c % p != 0).unwrap_or(n);
    if a == 0 || a == n {
        return Ok(None);
    }
    let _ = fbar;
    // initial factors mod p
    let mut f1: Vec<u64> = {
        let mut v = vec![0u64; a + 1];
        v[a] = 1;
        v
    };
    let mut f2: Vec<u64> = {
        // f / x^a mod p
        let mut v: Vec<u64> = f.iter().skip(a).map(|&c| c % p).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let f1bar = poly_mod_p(ring, &f1);
    let f2bar = poly_mod_p(ring, &f2);
    let (ubar, vbar) = fp_ext_gcd(p, &f1bar, &f2bar)?;
    // linear Hensel: lift the factorization one p-digit at a time
    let mut pk = p;
    for _ in 1..m {
        // h = (f - f1 f2) / p^k
        let prod = poly_mul(ring, &f1, &f2);
        let diff = poly_sub(ring, f, &prod);
        let mut h: Vec<u64> = diff.iter().map(|&c| (c / pk) % p).collect();
        while h.last() == Some(&0) {
            h.pop();
        }
        if !h.is_empty() {
            // delta1 = (h * vbar) rem f1bar; delta2 = (h - delta1 f2bar)/f1bar
            let hv = fp_mul(p, &h, &vbar);
            let (_, d1) = fp_divmod(p, &hv, &f1bar);
            let rest = fp_sub(p, &h, &fp_mul(p, &d1, &f2bar));
            let (d2, rem) = fp_divmod(p, &rest, &f1bar);
            debug_assert!(rem.is_empty());
            for (i, &c) in d1.iter().enumerate() {
                f1[i] = ring.add(f1[i], ring.mul(pk, c));
            }
            for (i, &c) in d2.iter().enumerate() {
                if i >= f2.len() {
                    break;
                }
                f2[i] = ring.add(f2[i], ring.mul(pk, c));
            }
        }
        pk = pk.wrapping_mul(p);
    }
    debug_assert_eq!(poly_mul(ring, &f1, &f2), {
        let mut ff = f.to_vec();
        poly_trim(ring, &mut ff);
        ff
    });
    // lift the Bezout identity u f1 + v f2 = 1 mod p^m
    let mut u: Vec<u64> = ubar.clone();
    let mut v: Vec<u64> = vbar.clone();
    let mut pk = p;
    for _ in 1..m {
        let lhs = poly_add(ring, &poly_mul(ring, &u, &f1), &poly_mul(ring, &v, &f2));
        let mut err = poly_sub(ring, &[1], &lhs);
        poly_trim(ring, &mut err);
        let mut h: Vec<u64> = err.iter().map(|&c| (c / pk) % p).collect();
        while h.last() == Some(&0) {
            h.pop();
        }
        if !h.is_empty() {
            // du f1 + dv f2 = h mod p, with deg du < deg f2
            let hu = fp_mul(p, &h, &ubar);
            let (_, du) = fp_divmod(p, &hu, &f2bar);
            let rest = fp_sub(p, &h, &fp_mul(p, &du, &f1bar));
            let (dv, rem) = fp_divmod(p, &rest, &f2bar);
            debug_assert!(rem.is_empty());
            if u.len() < du.len() {
                u.resize(du.len(), 0);
            }
            for (i, &c) in du.iter().enumerate() {
                u[i] = ring.add(u[i], ring.mul(pk, c));
            }
            if v.len() < dv.len() {
                v.resize(dv.len(), 0);
            }
            for (i, &c) in dv.iter().enumerate() {
                v[i] = ring.add(v[i], ring.mul(pk, c));
            }
        }
        pk = pk.wrapping_mul(p);
    }
    Ok(Some(MonicSplit { f_nil: f1, f_unit: f2, u, v }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hensel_split_example() {
        let ring = Zpm::new(5, 4).unwrap();
        // f = x^2 (x - 1) (x - 7) = has nil part x^2, unit part (x-1)(x-7)
        let f = {
            let a = vec![0, 0, 1]; // x^2
            let b = vec![ring.reduce_i64(-1), 1];
            let c = vec![ring.reduce_i64(-7), 1];
            poly_mul(&ring, &poly_mul(&ring, &a, &b), &c)
        };
        let split = split_nil_unit(&ring, &f).unwrap().unwrap();
        assert_eq!(split.f_nil.len() - 1, 2);
        assert_eq!(split.f_unit.len() - 1, 2);
        assert_eq!(poly_mul(&ring, &split.f_nil, &split.f_unit), f);
        // Bezout
        let one = poly_add(
            &ring,
            &poly_mul(&ring, &split.u, &split.f_nil),
            &poly_mul(&ring, &split.v, &split.f_unit),
        );
        let mut one = one;
        poly_trim(&ring, &mut one);
        assert_eq!(one, vec![1]);
        // nil part is x^2 plus p-corrections only
        assert_eq!(split.f_nil[0] % 5, 0);
        assert_eq!(split.f_nil[1] % 5, 0);
    }

    #[test]
    fn degenerate_splits() {
        let ring = Zpm::new(5, 3).unwrap();
        // fully invertible
        let f = vec![ring.reduce_i64(2), ring.reduce_i64(3), 1];
        assert!(split_nil_unit(&ring, &f).unwrap().is_none());
        // fully nilpotent
        let g = vec![0, 0, 1];
        assert!(split_nil_unit(&ring, &g).unwrap().is_none());
    }
}

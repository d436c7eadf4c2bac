//! Merel's determinant-n matrix family: all integer matrices
//! (a b; c d) with ad - bc = n, a > b >= 0 and d > c >= 0.
//!
//! Acting on the right of symbol pairs (with classes of non-unit ideal
//! dropped), the sum over this family computes the n-th Hecke operator on
//! weight-two symbols, for every n >= 1 including n sharing factors with
//! the level. The constraint a + d <= n + 1 bounds the enumeration.

/// All Merel matrices of determinant n, in lexicographic order.
pub fn merel_matrices(n: u64) -> Vec<[i64; 4]> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=(n + 1 - a) {
            let k = a * d - n;
            if k < 0 {
                continue;
            }
            if k == 0 {
                // bc = 0: either b = 0 (any c < d) or c = 0 (any b < a)
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
            } else {
                // bc = k with 1 <= b < a, 1 <= c < d
                let mut b = 1;
                while b * b <= k {
                    if k % b == 0 {
                        let c = k / b;
                        if b < a && c < d {
                            out.push([a, b, c, d]);
                        }
                        if b != c {
                            let (b2, c2) = (c, b);
                            if b2 < a && c2 < d {
                                out.push([a, b2, c2, d]);
                            }
                        }
                    }
                    b += 1;
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_constraints() {
        for n in 1..40u64 {
            for g in merel_matrices(n) {
                assert_eq!(g[0] * g[3] - g[1] * g[2], n as i64);
                assert!(g[0] > g[1] && g[1] >= 0);
                assert!(g[3] > g[2] && g[2] >= 0);
            }
        }
    }

    #[test]
    fn small_families() {
        // n = 1: identity only
        assert_eq!(merel_matrices(1), vec![[1, 0, 0, 1]]);
        // n = 2: the four classical matrices
        assert_eq!(
            merel_matrices(2),
            vec![[1, 0, 0, 2], [1, 0, 1, 2], [2, 0, 0, 1], [2, 1, 0, 1]]
        );
    }
}

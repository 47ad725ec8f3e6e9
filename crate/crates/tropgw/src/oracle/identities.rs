//! Two standalone combinatorial identities used when collapsing the
//! contributions of walls based at a marked point.

use crate::rational::{binomial, factorial, harmonic, q, qf, Q};

/// `(Σ_{i=0}^n (−1)^i H_i C(n,i), −1/n)`.
pub fn harmonic_sides(n: u64) -> (Q, Q) {
    let mut lhs = q(0);
    for i in 0..=n {
        let t = harmonic(i) * binomial(n as i64, i as i64);
        if i % 2 == 0 {
            lhs += t;
        } else {
            lhs -= t;
        }
    }
    (lhs, qf(-1, n as i64))
}

pub fn harmonic_identity(n: u64) -> bool {
    assert!(n >= 1, "harmonic identity needs n >= 1");
    let (l, r) = harmonic_sides(n);
    l == r
}

fn fact(n: i64) -> Option<Q> {
    (n >= 0).then(|| factorial(n as u64))
}

/// Binomial coefficient with a possibly negative upper index, read as the
/// coefficient of `x^k` in `(1+x)^n`. Zero for negative `k`.
pub fn gen_binomial(n: i64, k: i64) -> Q {
    if k < 0 {
        return q(0);
    }
    if n >= 0 {
        return binomial(n, k);
    }
    let mut acc = q(1);
    for i in 0..k {
        acc = acc * q(n - i) / q(i + 1);
    }
    acc
}

/// Left side of the collapse: a double sum over `s` and `M₁ + M₂ = t − s`,
/// with `t = a + 1 − d + n₀`; terms with a negative factorial are dropped.
pub fn collapse_lhs(d: i64, nu: i64, n: [i64; 3], a: i64) -> Q {
    let [n0, n1, n2] = n;
    let Some(f0) = fact(d - n0) else { return q(0) };
    let t = a + 1 - d + n0;
    let mut acc = q(0);
    for s in 0..=a + 1 {
        for m1 in 0..=t - s {
            let m2 = t - s - m1;
            let (Some(num), Some(den)) = (fact(n1 + m1 - d - 1), fact(d - n2 - m2)) else {
                continue;
            };
            let sign = if (m1 + n1 + d + 1) % 2 == 0 { q(1) } else { q(-1) };
            let weight = gen_binomial(nu - 1, s - 1) * q(n2 - n1) + gen_binomial(nu, s) * q(m2 - m1);
            acc += sign * num / (factorial(m1 as u64) * factorial(m2 as u64) * den) * weight;
        }
    }
    acc / f0
}

/// Right side: `−C(ν + 3d − |n| − 1 − e, a − e) / Π(d − n_i)!` with
/// `e = (d − n₀) + (d − n₁)`, and zero if any `d − n_i` is negative.
pub fn collapse_rhs(d: i64, nu: i64, n: [i64; 3], a: i64) -> Q {
    let mut den = q(1);
    for ni in n {
        match fact(d - ni) {
            Some(f) => den *= f,
            None => return q(0),
        }
    }
    let e = (d - n[0]) + (d - n[1]);
    let norm: i64 = n.iter().sum();
    -gen_binomial(nu + 3 * d - norm - 1 - e, a - e) / den
}

pub fn binomial_collapse_check(d: i64, nu: i64, n: [i64; 3], a: i64) -> bool {
    collapse_lhs(d, nu, n, a) == collapse_rhs(d, nu, n, a)
}

/// Every grid point `1 ≤ d ≤ dmax`, `ν ≤ numax`, `a ≤ amax`, `n_i ≤ d`
/// where the collapse fails.
pub fn collapse_grid_failures(dmax: i64, numax: i64, amax: i64) -> Vec<(i64, i64, [i64; 3], i64)> {
    let mut bad = Vec::new();
    for d in 1..=dmax {
        for nu in 0..=numax {
            for a in 0..=amax {
                for n0 in 0..=d {
                    for n1 in 0..=d {
                        for n2 in 0..=d {
                            if !binomial_collapse_check(d, nu, [n0, n1, n2], a) {
                                bad.push((d, nu, [n0, n1, n2], a));
                            }
                        }
                    }
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_small() {
        assert_eq!(harmonic_sides(1), (q(-1), q(-1)));
        assert_eq!(harmonic_sides(2).0, qf(-1, 2));
        assert!((1..=30).all(harmonic_identity));
    }

    #[test]
    fn collapse_grid() {
        assert!(collapse_grid_failures(3, 3, 3).is_empty());
    }

    #[test]
    fn collapse_vanishing_cases() {
        // t < 0: nothing to sum.
        assert_eq!(collapse_lhs(3, 1, [0, 0, 0], 0), q(0));
        assert_eq!(collapse_rhs(3, 1, [0, 0, 0], 0), q(0));
        // n₁ > d: both sides vanish.
        assert_eq!(collapse_lhs(1, 2, [1, 2, 0], 2), q(0));
        assert_eq!(collapse_rhs(1, 2, [1, 2, 0], 2), q(0));
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(gen_binomial(-1, 3), q(-1));
        assert_eq!(gen_binomial(-2, 2), q(3));
        assert_eq!(gen_binomial(4, 2), q(6));
        assert_eq!(gen_binomial(2, -1), q(0));
    }
}

//! Exact rational scalars and the small combinatorial functions used
//! throughout (factorials, binomials, harmonic numbers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field. Every number in the pipeline is one of these.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `n!` as an exact rational. Panics on negative input; callers that need the
/// "negative factorial is zero" convention use [`inv_factorial`].
pub fn factorial(n: u64) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

/// `1/n!`, with the convention that `1/n! = 0` for negative `n`.
pub fn inv_factorial(n: i64) -> Q {
    if n < 0 {
        Q::zero()
    } else {
        factorial(n as u64).recip()
    }
}

/// Binomial coefficient `C(n, k)` for integer `n` and `k`, zero unless
/// `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || n < 0 || k > n {
        return Q::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

/// Harmonic number `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> Q {
    (1..=n).fold(Q::zero(), |acc, j| acc + qf(1, j as i64))
}

/// Second-order harmonic number `Σ_{j<=n} 1/j²`.
pub fn harmonic2(n: u64) -> Q {
    (1..=n).fold(Q::zero(), |acc, j| acc + qf(1, (j * j) as i64))
}

/// Multinomial coefficient `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u64]) -> Q {
    let total: u64 = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(total), |acc, &p| acc / factorial(p))
}

/// Normalized `"p/q"` form; integers are written without a denominator.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `"p/q"`, `"p"`, or a plain decimal integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exact conversion to `i64` when the value is an integer in range.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2), q(10));
        assert_eq!(binomial(3, 4), q(0));
        assert_eq!(binomial(-1, 0), q(0));
        assert_eq!(factorial(5), q(120));
        assert_eq!(inv_factorial(-2), q(0));
        assert_eq!(multinomial(&[1, 2, 2]), q(30));
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), q(0));
        assert_eq!(harmonic(3), qf(11, 6));
        assert_eq!(harmonic2(2), qf(5, 4));
    }

    #[test]
    fn round_trip_strings() {
        for s in ["0", "-3", "7/12", "-1/8"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}

//! The truncated coefficient ring.
//!
//! Monomials combine the toric variables `x_0, x_1, x_2`, the square-zero
//! descendent variables `u_{i,j}` (with `u_{i,j} u_{i,j'} = 0`), a truncated
//! `y_{0,0}`, and a signed power of `ħ`. Coefficients are exact rationals.

mod key;
mod series;

pub use key::{ExponentKey, RingConfig, MAX_POINTS};
pub use series::Series;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn cfg() -> RingConfig {
        RingConfig::new(3, 2, 6)
    }

    fn u(i: usize, j: usize) -> Series {
        Series::u(cfg(), i, j).unwrap()
    }

    fn x(i: usize) -> Series {
        Series::x(cfg(), i)
    }

    fn one() -> Series {
        Series::one(cfg())
    }

    #[test]
    fn ideal_relations() {
        assert!((u(1, 0) * u(1, 2)).is_zero());
        let p = u(1, 0) * u(2, 0);
        assert_eq!(p.len(), 1);
        let lhs = (one() + u(1, 0) * x(2)) * (one() + u(1, 1) * x(2));
        assert_eq!(lhs, one() + u(1, 0) * x(2) + u(1, 1) * x(2));
    }

    #[test]
    fn exp_examples() {
        let a = u(1, 0) * x(2);
        let e = a.exp_truncated(-1).unwrap();
        assert_eq!(e, one() + a.shift_hbar(-1));
        assert_eq!(Series::zero(cfg()).exp_truncated(-1).unwrap(), one());

        let b = u(2, 0) * x(1);
        let e = (a.clone() + b.clone()).exp_truncated(-1).unwrap();
        let expect = one() + (a.clone() + b.clone()).shift_hbar(-1) + (a * b).shift_hbar(-2);
        assert_eq!(e, expect);
        assert!(one().exp_truncated(-1).is_err());
    }

    #[test]
    fn operators() {
        assert_eq!((u(1, 0) * x(2)).fundamental_operator(), u(1, 1) * x(2));
        assert!(Series::w_basic(cfg()).fundamental_operator().is_zero());
        let a = u(1, 0) * u(2, 1) * x(1) * x(2);
        let expect = u(1, 1) * u(2, 1) * x(1) * x(2) + u(1, 0) * u(2, 2) * x(1) * x(2);
        assert_eq!(a.fundamental_operator(), expect);

        let c1 = RingConfig::new(3, 1, 6);
        let a = Series::u(c1, 1, 0).unwrap() * Series::x(c1, 2);
        let expect = a.clone() + Series::y0(c1) * Series::u(c1, 1, 1).unwrap() * Series::x(c1, 2);
        assert_eq!(a.that_operator(), expect);
        let c0 = RingConfig::new(3, 0, 6);
        let a = Series::u(c0, 1, 0).unwrap() * Series::x(c0, 2);
        assert_eq!(a.that_operator(), a);
        assert_eq!(Series::x(cfg(), 0).that_operator(), Series::x(cfg(), 0));
    }

    #[test]
    fn top_order_is_annihilated() {
        assert!(u(1, 2).fundamental_operator().is_zero());
        assert!(Series::u(cfg(), 1, 3).unwrap().is_zero());
        assert_eq!(Series::y2(cfg(), 0).len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let a = (u(1, 0) * x(2)).scale(&q(3)) + Series::y0(cfg()).shift_hbar(-2);
        let v = a.to_json();
        assert_eq!(Series::from_json(cfg(), &v).unwrap(), a);
    }

    #[test]
    fn config_mismatch_is_an_error() {
        let other = Series::x(RingConfig::new(2, 0, 3), 0);
        assert!(x(0).try_mul(&other).is_err());
    }
}

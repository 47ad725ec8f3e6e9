use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tropgw::coeffring::{ExponentKey, RingConfig, Series};
use tropgw::geometry::{generate_arrangement, intersect, lattice_index, primitive, wedge, Pt, Ray, SampleBox};
use tropgw::invariants::{compatible_keys, tropfun_sides, DescendentKey, TableSpec, TropicalEngine};
use tropgw::oracle::{ClassicalOracle, GWKey, Insertion, Strategy as Reduction};
use tropgw::scattering::{build_diagram, check_all_loops};
use tropgw::verify::random_oracle_keys;

fn cfg() -> RingConfig {
    RingConfig::new(2, 2, 3).with_orders(3)
}

fn term() -> impl Strategy<Value = (ExponentKey, BigRational)> {
    (
        prop::array::uniform3(0u32..=2),
        prop::option::of(0usize..3),
        prop::option::of(0usize..3),
        0u32..=2,
        -2i32..=0,
        -4i64..=4,
        1i64..=3,
    )
        .prop_map(|(x, u1, u2, y0, h, n, d)| {
            let mut k = ExponentKey::x(x).with_y0(y0).with_hbar(h);
            if let Some(j) = u1 {
                k = k.with_u(1, j).unwrap();
            }
            if let Some(j) = u2 {
                k = k.with_u(2, j).unwrap();
            }
            (k, BigRational::new(BigInt::from(n), BigInt::from(d)))
        })
}

fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(term(), 0..5).prop_map(|ts| {
        let mut s = Series::zero(cfg());
        for (k, c) in ts {
            s.add_term(k, c);
        }
        s
    })
}

fn vec2() -> impl Strategy<Value = [i64; 2]> {
    prop::array::uniform2(-6i64..=6)
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn engine() -> &'static TropicalEngine {
    static E: OnceLock<TropicalEngine> = OnceLock::new();
    E.get_or_init(|| TropicalEngine::new(&generate_arrangement(9, 4, &SampleBox::default()).unwrap(), 2))
}

fn table_keys() -> &'static Vec<DescendentKey> {
    static K: OnceLock<Vec<DescendentKey>> = OnceLock::new();
    K.get_or_init(|| compatible_keys(&TableSpec { dmax: 2, kmax: 4, psi_max: 3, m_max: 2 }))
}

proptest! {
    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(b.clone() + c.clone()), &a * &b + &a * &c);
        prop_assert_eq!(&a * &Series::one(cfg()), a.clone());
        prop_assert_eq!(a.clone() - a.clone(), Series::zero(cfg()));
    }

    #[test]
    fn descendent_shift_is_a_derivation(a in series(), b in series()) {
        let lhs = (&a * &b).fundamental_operator();
        let rhs = &a.fundamental_operator() * &b + &a * &b.fundamental_operator();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!((&a * &b).that_operator(), &a.that_operator() * &b.that_operator());
    }

    #[test]
    fn wedge_is_alternating_and_bilinear(u in vec2(), v in vec2(), w in vec2()) {
        prop_assert_eq!(wedge(u, v), -wedge(v, u));
        prop_assert_eq!(wedge(u, u), 0);
        let vw = [v[0] + w[0], v[1] + w[1]];
        prop_assert_eq!(wedge(u, vw), wedge(u, v) + wedge(u, w));
        if u != [0, 0] {
            let p = primitive(u);
            let n = lattice_index(u);
            prop_assert_eq!([p[0] * n, p[1] * n], u);
        }
    }

    #[test]
    fn intersection_is_symmetric(ax in rational(), ay in rational(), bx in rational(), by in rational(),
                                 da in vec2(), db in vec2(), la in any::<bool>(), lb in any::<bool>()) {
        prop_assume!(da != [0, 0] && db != [0, 0]);
        let mk = |x: &BigRational, y: &BigRational, d: [i64; 2], line: bool| {
            let base = Pt::new(x.clone(), y.clone());
            let d = primitive(d);
            if line { Ray::line(base, d) } else { Ray::new(base, d) }
        };
        let a = mk(&ax, &ay, da, la);
        let b = mk(&bx, &by, db, lb);
        let x = intersect(&a, &b);
        prop_assert_eq!(&x, &intersect(&b, &a));
        if let Some(p) = x {
            prop_assert!(a.contains(&p) && b.contains(&p));
        }
    }

    #[test]
    fn oracle_ignores_insertion_order(seed in 0u64..10_000, rot in 0usize..5) {
        let key = &random_oracle_keys(seed, 1, 3, 4)[0];
        let mut ins: Vec<Insertion> = key.insertions().to_vec();
        let n = ins.len();
        ins.rotate_left(rot % n);
        ins.reverse();
        let o = ClassicalOracle::default();
        prop_assert_eq!(o.eval(key), o.eval(&GWKey::new(key.d, ins)));
        prop_assert_eq!(o.eval(key), ClassicalOracle::new(Reduction::alternative()).eval(key));
    }

    #[test]
    fn tropical_fundamental_class(i in 0usize..10_000) {
        let with_m: Vec<&DescendentKey> = table_keys().iter().filter(|k| k.m >= 1).collect();
        let key = with_m[i % with_m.len()];
        let (lhs, rhs) = tropfun_sides(engine(), key).unwrap();
        prop_assert_eq!(lhs, rhs, "{}", key);
    }

    #[test]
    fn invariants_symmetric_in_marked_points(i in 0usize..10_000, perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let key = &table_keys()[i % table_keys().len()];
        let moved = DescendentKey { r: key.r.permuted(&perm), ..key.clone() };
        prop_assert_eq!(engine().value(key).unwrap(), engine().value(&moved).unwrap(), "{} vs {}", key, moved);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn loops_trivial_on_random_arrangements(seed in 100u64..10_000) {
        let a = generate_arrangement(seed, 2, &SampleBox::default()).unwrap();
        let d = build_diagram(&a, 2).unwrap();
        for (x, ok) in check_all_loops(&d).unwrap() {
            prop_assert!(ok, "loop at {} for seed {}", x, seed);
        }
    }
}

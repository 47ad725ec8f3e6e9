//! Tropical invariants and potentials against independent values.

use num_bigint::BigInt;
use num_rational::BigRational;
use tropgw::brokenlines::{enumerate_broken_lines, potential_w_k0};
use tropgw::coeffring::Series;
use tropgw::geometry::{generate_arrangement, Arrangement, Pt, SampleBox};
use tropgw::invariants::{compatible_keys, tropfun_sides, DescendentKey, RVector, TableSpec, TropicalEngine};
use tropgw::oracle::ClassicalOracle;
use tropgw::rational::qf;
use tropgw::scattering::build_diagram;
use tropgw::Error;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn arrangement(seed: u64, k: usize) -> Arrangement {
    generate_arrangement(seed, k, &SampleBox::default()).unwrap()
}

fn key(d: u32, rv: &str, m: u32, nu: u32, cls: u8) -> DescendentKey {
    DescendentKey::new(d, RVector::parse(rv).unwrap(), m, nu, cls).unwrap()
}

#[test]
fn line_through_two_points() {
    let eng = TropicalEngine::new(&arrangement(4, 2), 1);
    assert_eq!(eng.value(&key(1, "1,0", 0, 0, 0)).unwrap(), r(1, 1));
    assert_eq!(eng.value(&key(1, "0,1", 0, 0, 0)).unwrap(), r(1, 1));
}

#[test]
fn one_point_descendents() {
    // ⟨ψ^{3d−2}T₂⟩_d = 1/(d!)³ from the closed form of the small J-function.
    let eng = TropicalEngine::new(&arrangement(1, 0), 2);
    assert_eq!(eng.value(&key(1, "", 0, 1, 0)).unwrap(), r(1, 1));
    assert_eq!(eng.value(&key(2, "", 0, 4, 0)).unwrap(), r(1, 8));
    // ⟨ψ^{3d−1}T₁⟩_d = −3H_d/(d!)³ and ⟨ψ^{3d}T₀⟩_d at d = 1.
    assert_eq!(eng.value(&key(1, "", 0, 2, 1)).unwrap(), r(-3, 1));
    assert_eq!(eng.value(&key(2, "", 0, 5, 1)).unwrap(), r(-3, 1) * r(3, 2) / r(8, 1));
    assert_eq!(eng.value(&key(1, "", 0, 3, 2)).unwrap(), r(6, 1));
}

#[test]
fn incompatible_keys_vanish() {
    let eng = TropicalEngine::new(&arrangement(2, 2), 1);
    let k = key(1, "1,1", 0, 0, 0);
    assert!(!k.is_compatible());
    assert_eq!(eng.value(&k).unwrap(), r(0, 1));
}

#[test]
fn bad_keys_are_rejected() {
    let eng = TropicalEngine::new(&arrangement(2, 2), 1);
    assert!(matches!(eng.value(&key(1, "1,0,1", 0, 1, 0)), Err(Error::Key(_))));
    assert!(matches!(eng.value(&key(2, "1,1", 0, 2, 0)), Err(Error::Key(_))));
    assert!(DescendentKey::new(1, RVector::zero(1), 0, 0, 3).is_err());
}

#[test]
fn sector_contributions_add_up() {
    let eng = TropicalEngine::new(&arrangement(1, 4), 2);
    let res = eng.invariant(&key(2, "3,1,1,0", 1, 2, 2)).unwrap();
    let sum: BigRational = res.sectors.values().sum();
    assert_eq!(sum, res.value);
    assert_eq!(res.value, ClassicalOracle::default().eval(&res.key.to_gw_key()));
}

#[test]
fn d2_k3_table_matches_oracle() {
    let spec = TableSpec { dmax: 2, kmax: 3, psi_max: 3, m_max: 1 };
    let eng = TropicalEngine::new(&arrangement(11, 3), 2);
    let oracle = ClassicalOracle::default();
    let keys = compatible_keys(&spec);
    assert!(keys.len() > 100);
    for k in keys {
        assert_eq!(eng.value(&k).unwrap(), oracle.eval(&k.to_gw_key()), "{k}");
    }
}

#[test]
fn fundamental_class_example() {
    // ⟨ψP₁, T₀, ψ S₁⟩₁ = ⟨P₁, ψ S₁⟩₁ + ⟨ψP₁, S₁⟩₁.
    let eng = TropicalEngine::new(&arrangement(3, 1), 1);
    let k = key(1, "2", 1, 1, 1);
    assert!(k.is_compatible());
    let (lhs, rhs) = tropfun_sides(&eng, &k).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(lhs, ClassicalOracle::default().eval(&k.to_gw_key()));
}

#[test]
fn basic_potential_without_points() {
    let a = Arrangement::new(Pt::new(qf(2, 3), qf(-1, 5)), vec![]).unwrap();
    let d = build_diagram(&a, 2).unwrap();
    assert_eq!(enumerate_broken_lines(&d, &a.q, None).unwrap().len(), 3);
    assert_eq!(potential_w_k0(&d, &a.q).unwrap(), Series::w_basic(d.cfg));
}

#[test]
fn potential_is_basic_at_u_zero() {
    for k in 1..=3 {
        let a = arrangement(k as u64 + 20, k);
        let d = build_diagram(&a, 2).unwrap();
        assert_eq!(potential_w_k0(&d, &a.q).unwrap().u_to_zero(), Series::w_basic(d.cfg), "k={k}");
    }
}

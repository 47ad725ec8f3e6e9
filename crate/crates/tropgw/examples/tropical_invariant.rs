//! Descendent tropical invariants with their contributions by position of the
//! distinguished vertex, next to the classical values.

use tropgw::geometry::{generate_arrangement, SampleBox};
use tropgw::invariants::{DescendentKey, RVector, TropicalEngine};
use tropgw::oracle::ClassicalOracle;
use tropgw::rational::fmt_q;

fn main() -> tropgw::Result<()> {
    let a = generate_arrangement(1, 4, &SampleBox::default())?;
    let engine = TropicalEngine::new(&a, 2);
    let oracle = ClassicalOracle::default();

    let keys = [
        DescendentKey::new(1, RVector::parse("1,0,0,0")?, 0, 0, 0)?,
        DescendentKey::new(1, RVector::parse("2,0,0,0")?, 0, 1, 1)?,
        DescendentKey::new(2, RVector::parse("3,1,1,0")?, 1, 2, 2)?,
        DescendentKey::new(2, RVector::parse("2,2,1,1")?, 0, 1, 1)?,
        DescendentKey::new(2, RVector::zero(4), 0, 4, 0)?,
    ];
    for key in &keys {
        let res = engine.invariant(key)?;
        let classical = oracle.eval(&key.to_gw_key());
        println!("{key}: tropical {}  classical {}  ({})", fmt_q(&res.value), fmt_q(&classical), key.to_gw_key());
        for (cell, v) in &res.sectors {
            println!("    {cell:>9}: {}", fmt_q(v));
        }
    }
    Ok(())
}

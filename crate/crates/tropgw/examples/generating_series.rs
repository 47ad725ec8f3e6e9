//! Tropical generating series against the mirror-map side of the oracle.

use tropgw::geometry::{generate_arrangement, SampleBox};
use tropgw::invariants::{check_generating_against_oracle, t_trop, TropicalEngine};
use tropgw::oracle::mirror::Trunc;
use tropgw::oracle::ClassicalOracle;

fn main() -> tropgw::Result<()> {
    let a = generate_arrangement(2, 4, &SampleBox::default())?;
    let engine = TropicalEngine::new(&a, 2);
    let trunc = Trunc::new(2, 3, 3)?;

    let t = t_trop(&engine, trunc)?;
    for (i, c) in t.comp.iter().enumerate() {
        println!("component T_{i}: {} terms", c.len());
    }
    println!("{}", t.comp[2].restrict(1, 2));

    let rep = check_generating_against_oracle(&engine, &ClassicalOracle::default(), trunc)?;
    println!("compared {} terms: passed {}", rep.terms_compared, rep.passed());
    Ok(())
}

//! The tropical fundamental class identity: removing a T0 insertion lowers
//! one ψ-order at a time.

use tropgw::geometry::{generate_arrangement, SampleBox};
use tropgw::invariants::{compatible_keys, tropfun_sides, TableSpec, TropicalEngine};
use tropgw::rational::fmt_q;

fn main() -> tropgw::Result<()> {
    let a = generate_arrangement(5, 3, &SampleBox::default())?;
    let engine = TropicalEngine::new(&a, 2);
    let spec = TableSpec { dmax: 2, kmax: 3, psi_max: 2, m_max: 1 };
    let mut checked = 0;
    for key in compatible_keys(&spec).into_iter().filter(|k| k.m >= 1) {
        let (lhs, rhs) = tropfun_sides(&engine, &key)?;
        if checked < 8 {
            println!("{key}: {} = {}", fmt_q(&lhs), fmt_q(&rhs));
        }
        assert_eq!(lhs, rhs, "{key}");
        checked += 1;
    }
    println!("{checked} keys satisfy the identity");
    Ok(())
}

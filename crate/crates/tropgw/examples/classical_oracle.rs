//! The classical side on its own: descendent invariants by reduction, WDVV
//! and Givental's J-function.

use tropgw::oracle::mirror::{givental_small_j, j_function};
use tropgw::oracle::{wdvv_violations, ClassicalOracle, GWKey, Strategy};
use tropgw::rational::fmt_q;

fn main() -> tropgw::Result<()> {
    let oracle = ClassicalOracle::default();
    let alt = ClassicalOracle::new(Strategy::alternative());
    for (d, ins) in [(1, "T2, T2"), (3, "T2*8"), (1, "psi^1 T2, T2, T0"), (2, "psi^4 T2"), (2, "psi^2 T2, psi T2, T1, T2*2")] {
        let key = GWKey::parse(d, ins)?;
        println!("{key} = {} (alternative reduction: {})", fmt_q(&oracle.eval(&key)), fmt_q(&alt.eval(&key)));
    }
    println!("WDVV violations up to d = 4: {}", wdvv_violations(&oracle, 4).len());
    for d in 1..=3 {
        println!("small J, d = {d}: {} {} {}", fmt_q(&givental_small_j(d, 0)), fmt_q(&givental_small_j(d, 1)), fmt_q(&givental_small_j(d, 2)));
    }
    let j = j_function(&oracle, 2, 3);
    println!("J up to q^2, y-degree 3: {} terms", j.len());
    Ok(())
}

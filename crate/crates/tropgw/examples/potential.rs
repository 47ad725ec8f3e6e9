//! Broken lines at the basepoint and the Landau-Ginzburg potential they sum to.

use tropgw::brokenlines::{enumerate_broken_lines, exp_identity_holds, potential_w_k0, potential_w_kmbar};
use tropgw::coeffring::Series;
use tropgw::geometry::{generate_arrangement, SampleBox};
use tropgw::rational::fmt_q;
use tropgw::scattering::build_diagram;

fn main() -> tropgw::Result<()> {
    let a = generate_arrangement(3, 2, &SampleBox::default())?;
    let d = build_diagram(&a, 2)?;

    let lines = enumerate_broken_lines(&d, &a.q, None)?;
    for b in &lines {
        let t = b.final_term();
        println!("{:>2} bends  coeff {:>4}  x^{:?}  u {:?}", b.bends.len(), fmt_q(&b.coeff), t.x, t.u_pairs());
    }

    let w = potential_w_k0(&d, &a.q)?;
    println!("W_(k,0) has {} terms; at u = 0 it is W_basic: {}", w.len(), w.u_to_zero() == Series::w_basic(d.cfg));
    let w2 = potential_w_kmbar(&d, &a.q, 2)?;
    println!("W_(k,2) has {} terms", w2.len());
    for mbar in 0..=2 {
        println!("exponential identity at mbar = {mbar}: {}", exp_identity_holds(&d, &a.q, mbar)?);
    }
    Ok(())
}

//! Rational plane curve counts through 3d - 1 general points, tropically and
//! from Kontsevich's recursion. Pass a degree (default 2); degree 3 takes
//! some seconds in release mode.

use std::time::Instant;

use tropgw::oracle::kontsevich_numbers;
use tropgw::rational::fmt_q;
use tropgw::verify::tropical_primary;

fn main() -> tropgw::Result<()> {
    let dmax: u32 = std::env::args().nth(1).map_or(2, |s| s.parse().expect("degree"));
    let classical = kontsevich_numbers(dmax.max(4));
    for d in 1..=dmax {
        let t = Instant::now();
        let v = tropical_primary(d, 1)?;
        println!("d = {d}: tropical {} classical {} ({:.2?})", fmt_q(&v), fmt_q(&classical[d as usize]), t.elapsed());
    }
    println!("N_4 = {}", fmt_q(&classical[4]));
    Ok(())
}

//! Sample a general arrangement and certify it.
//!
//! `cargo run --release --example arrangement -- 3 42` samples three marked
//! points from seed 42.

use tropgw::geometry::{cell_of, generate_arrangement, SampleBox};
use tropgw::scattering::generality_check;

fn main() -> tropgw::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("numeric argument"));
    let k = args.next().unwrap_or(3) as usize;
    let seed = args.next().unwrap_or(42);

    let a = generate_arrangement(seed, k, &SampleBox::default())?;
    println!("{}", serde_json::to_string_pretty(&a.to_json())?);
    for l in 1..=a.k() {
        println!("P{l} lies in {}", cell_of(&a.q, a.point(l)).label());
    }
    let report = generality_check(&a, 2);
    println!("general at D = 2: {} ({} violations)", report.general, report.violations.len());
    Ok(())
}

//! The two combinatorial identities used by the vertex weights.

use tropgw::oracle::identities::{collapse_grid_failures, collapse_lhs, collapse_rhs, harmonic_sides};
use tropgw::rational::fmt_q;

fn main() {
    for n in [1, 2, 5, 30] {
        let (l, r) = harmonic_sides(n);
        println!("n = {n}: {} = {}", fmt_q(&l), fmt_q(&r));
    }
    let (d, nu, n, a) = (2, 1, [1, 2, 0], 2);
    println!("collapse at d={d} nu={nu} n={n:?} a={a}: {} = {}", fmt_q(&collapse_lhs(d, nu, n, a)), fmt_q(&collapse_rhs(d, nu, n, a)));
    println!("grid failures: {}", collapse_grid_failures(3, 3, 3).len());
}

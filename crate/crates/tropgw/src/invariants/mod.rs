//! Descendent tropical invariants and their generating series.
//!
//! Invariants are computed by gluing broken-line disks at the finitely many
//! candidate positions of the distinguished vertex: the basepoint `Q`, the
//! crossings of walls with the rays of `Q + Σ`, the unmarked crossings of two
//! walls, and the marked points. See [`TropicalEngine`].

mod engine;
mod generating;
mod keys;

pub use engine::{probe_local_data, tropical_invariant, TropResult, TropicalEngine};
pub use generating::{check_generating_against_oracle, generating_l, hbar_inverse_part, t_trop, GeneratingReport};
pub use keys::{compatible_keys, DescendentKey, RVector, TableSpec};

use crate::rational::{factorial, harmonic, harmonic2, q, Q};

/// Vertex weight of the distinguished vertex with `n_i` unbounded rays in
/// direction `m_i`, at level 0, 1 or 2.
pub fn mult_vertex(level: u8, n: [u32; 3]) -> Q {
    let den: Q = n.iter().map(|&k| factorial(k as u64)).product();
    let h: Q = n.iter().map(|&k| harmonic(k as u64)).sum();
    match level {
        0 => q(1) / den,
        1 => -h / den,
        2 => {
            let h2: Q = n.iter().map(|&k| harmonic2(k as u64)).sum();
            (h.clone() * h + h2) / (q(2) * den)
        }
        _ => panic!("vertex weight level {level} out of range"),
    }
}

/// Invariants `⟨ψ^{r_1−1}P_1, .., T₀^m, ψ^ν S_i⟩` with `m ≥ 1` should equal the
/// sum over removing one `T₀` while lowering one ψ-order by one. Returns
/// `(lhs, rhs)`.
pub fn tropfun_sides(engine: &TropicalEngine, key: &DescendentKey) -> crate::Result<(Q, Q)> {
    if key.m == 0 {
        return Err(crate::Error::Precondition("the fundamental class identity needs m >= 1".into()));
    }
    let lhs = engine.value(key)?;
    let mut rhs = q(0);
    for j in 0..key.r.k() {
        if key.r.entries()[j] == 0 {
            continue;
        }
        let mut r = key.r.entries().to_vec();
        r[j] -= 1;
        if r[j] == 0 {
            // ψ^{-1} at a marked point.
            continue;
        }
        let k2 = DescendentKey { r: RVector::new(r), m: key.m - 1, ..key.clone() };
        rhs += engine.value(&k2)?;
    }
    if key.nu > 0 {
        let k2 = DescendentKey { nu: key.nu - 1, m: key.m - 1, ..key.clone() };
        rhs += engine.value(&k2)?;
    }
    Ok((lhs, rhs))
}

pub fn check_tropfun(engine: &TropicalEngine, key: &DescendentKey) -> crate::Result<bool> {
    let (l, r) = tropfun_sides(engine, key)?;
    Ok(l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn vertex_weights() {
        assert_eq!(mult_vertex(0, [0, 0, 0]), q(1));
        assert_eq!(mult_vertex(1, [1, 0, 0]), q(-1));
        assert_eq!(mult_vertex(2, [0, 0, 0]), q(0));
        assert_eq!(mult_vertex(0, [2, 1, 3]), qf(1, 12));
        // (H_2)^2 + 1 + 1/4 over 2·2!.
        assert_eq!(mult_vertex(2, [2, 0, 0]), (qf(9, 4) + qf(5, 4)) / q(4));
    }
}

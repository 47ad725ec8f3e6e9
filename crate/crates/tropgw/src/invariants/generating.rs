//! Tropical generating series in the y-variables.
//!
//! A monomial `Π_c y_{2,c}^{e_c}/e_c!` stands for the symmetric sum over all
//! ways of giving `e_c` distinct marked points the ψ-order `c`, so its
//! coefficient is the invariant of any one such assignment.

use num_traits::Zero;

use super::engine::TropicalEngine;
use super::keys::{DescendentKey, RVector};
use crate::error::{Error, Result};
use crate::oracle::mirror::{big_j, exponent_vectors, mirror_k, CohomologySeries, MKey, MSeries, Trunc, MAX_VARS};
use crate::oracle::ClassicalOracle;
use crate::rational::{factorial, q, Q};

fn ykey(qd: u32, hinv: u32, y: [u32; MAX_VARS]) -> MKey {
    MKey { q: qd, hinv, y }
}

/// `L_j = Σ ⟨S_j(A)/(ħ−ψ), T₀, γ^w⟩^trop_d q^d e^{d y_{1,0}}` plus the
/// degree-zero terms `e^{y_{0,0}/ħ}` (for `j = 0`) and
/// `ħ⁻¹ e^{y_{0,0}/ħ} Σ_l y_{0,0}^l/l! y_{2,l}` (for `j = 2`).
pub fn generating_l(engine: &TropicalEngine, j: u8, t: Trunc) -> Result<MSeries> {
    if j > 2 {
        return Err(Error::Key(format!("generating series index {j} must be 0, 1 or 2")));
    }
    let mut out = MSeries::zero(t);
    let mut y = [0; MAX_VARS];
    if j == 0 {
        for n in 0..=t.ymax {
            y[0] = n;
            out.add_term(ykey(0, n, y), factorial(n as u64).recip());
        }
    }
    if j == 2 {
        for c in 0..=t.psi_max {
            for l in 0..=t.ymax {
                for n in 0..=t.ymax {
                    let mut y = [0; MAX_VARS];
                    y[0] = l + n;
                    y[2 + c] += 1;
                    let coeff = if l as usize == c { factorial(l as u64).recip() * factorial(n as u64).recip() } else { q(0) };
                    out.add_term(ykey(0, n + 1, y), coeff);
                }
            }
        }
    }
    let k = engine.arrangement().k();
    for d in 1..=t.dmax.min(engine.dmax()) {
        let mut body = MSeries::zero(t);
        for e in exponent_vectors(t.nvars(), t.ymax) {
            if e[1] != 0 {
                continue;
            }
            let mut r = Vec::new();
            let mut w = factorial(e[0] as u64).recip();
            for c in 0..=t.psi_max {
                r.extend(std::iter::repeat_n(c as u32 + 1, e[2 + c] as usize));
                w /= factorial(e[2 + c] as u64);
            }
            if r.len() > k {
                return Err(Error::Precondition(format!("{} marked points needed, arrangement has {k}", r.len())));
            }
            let m = e[0] + 1;
            let norm: u32 = r.iter().sum();
            let nu = 3 * d as i64 + m as i64 + j as i64 - 2 - norm as i64;
            if nu < 0 {
                continue;
            }
            let key = DescendentKey { d, r: RVector::new(r).padded(k), m, nu: nu as u32, cls: j };
            let v = engine.value(&key)?;
            if !v.is_zero() {
                body.add_term(ykey(d, nu as u32 + 1, e), v * w);
            }
        }
        // e^{d y_{1,0}}.
        let mut edy = MSeries::zero(t);
        for l in 0..=t.ymax {
            let mut y = [0; MAX_VARS];
            y[1] = l;
            edy.add_term(ykey(0, 0, y), q(d as i64).pow(l as i32) / factorial(l as u64));
        }
        out.add_assign(&body.mul(&edy));
    }
    Ok(out)
}

/// `𝕋_trop = φ₀T₀ + φ₁T₁ + φ₂T₂` with `φ₀ = L₀`, `φ₁ = y_{1,0}ħ⁻¹L₀ + L₁`
/// and `φ₂ = y_{1,0}²ħ⁻²L₀/2 + y_{1,0}ħ⁻¹L₁ + L₂`.
pub fn t_trop(engine: &TropicalEngine, t: Trunc) -> Result<CohomologySeries> {
    let l: Vec<MSeries> = (0..3).map(|j| generating_l(engine, j, t)).collect::<Result<_>>()?;
    let mut y1 = [0; MAX_VARS];
    y1[1] = 1;
    let a = ykey(0, 1, y1);
    y1[1] = 2;
    let b = ykey(0, 2, y1);
    let mut out = CohomologySeries::zero(t);
    out.comp[0] = l[0].clone();
    out.comp[1] = l[0].mul_key(&a, &q(1));
    out.comp[1].add_assign(&l[1]);
    out.comp[2] = l[0].mul_key(&b, &(q(1) / q(2)));
    out.comp[2].add_assign(&l[1].mul_key(&a, &q(1)));
    out.comp[2].add_assign(&l[2]);
    Ok(out)
}

/// The `ħ⁻¹` part of a series, as a series in the y-variables.
pub fn hbar_inverse_part(s: &MSeries) -> MSeries {
    let mut out = MSeries::zero(*s.trunc());
    for (k, c) in s.terms() {
        if k.hinv == 1 {
            out.add_term(MKey { hinv: 0, ..*k }, c.clone());
        }
    }
    out
}

/// Mismatching coefficients found when comparing the tropical series with
/// the classical ones.
#[derive(Clone, Debug, Default)]
pub struct GeneratingReport {
    /// `(i, key, φ_{i,1} coefficient, K_{2−i} coefficient)`.
    pub phi_vs_k: Vec<(usize, MKey, Q, Q)>,
    /// `(component, key, 𝕋_trop coefficient, 𝕁 coefficient)`.
    pub t_vs_j: Vec<(usize, MKey, Q, Q)>,
    pub terms_compared: usize,
}

impl GeneratingReport {
    pub fn passed(&self) -> bool {
        self.phi_vs_k.is_empty() && self.t_vs_j.is_empty()
    }
}

pub fn check_generating_against_oracle(engine: &TropicalEngine, oracle: &ClassicalOracle, t: Trunc) -> Result<GeneratingReport> {
    let tt = t_trop(engine, t)?;
    let mut rep = GeneratingReport::default();
    for i in 0..3 {
        let phi1 = hbar_inverse_part(&tt.comp[i]);
        let k = mirror_k(oracle, 2 - i as u8, t);
        for (key, _) in phi1.sub(&k).sorted_terms() {
            rep.phi_vs_k.push((i, key, phi1.coeff(&key), k.coeff(&key)));
        }
    }
    let bj = big_j(oracle, t);
    rep.t_vs_j = tt.differences(&bj);
    rep.terms_compared = tt.len().max(bj.len());
    Ok(rep)
}

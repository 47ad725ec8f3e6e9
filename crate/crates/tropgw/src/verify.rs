//! The verification suite behind `tropgw verify` and the acceptance test.
//!
//! Each check compares the tropical pipeline with the classical oracle, or
//! checks an internal identity, in exact arithmetic. Checks are grouped by
//! criterion number so that callers can print one line per criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::brokenlines::{enumerate_broken_lines, exp_identity_holds, potential_w_k0};
use crate::coeffring::Series;
use crate::error::Result;
use crate::geometry::{generate_arrangement, Arrangement, SampleBox};
use crate::invariants::{
    check_generating_against_oracle, check_tropfun, compatible_keys, DescendentKey, RVector, TableSpec, TropicalEngine,
};
use crate::oracle::identities::collapse_grid_failures;
use crate::oracle::mirror::{big_j, big_t, euler_identity_check, grading_violations, j_function, mirror_k, MSeries, Trunc};
use crate::oracle::{harmonic_identity, wdvv_violations, ClassicalOracle, GWKey, Insertion, Strategy};
use crate::rational::{fmt_q, q, qf, Q};
use crate::scattering::{build_diagram, check_all_loops};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Tier {
    /// `k ≤ 2`, `d ≤ 1`.
    Quick,
    /// `k ≤ 4`, `d ≤ 2`.
    Standard,
    /// The standard tier plus the degree 3 primary count.
    Extended,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Quick => "quick",
            Tier::Standard => "standard",
            Tier::Extended => "extended",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub tier: Tier,
    /// Arrangement seeds; the first one is the main arrangement.
    pub seeds: Vec<u64>,
    /// Time allowed for the degree 3 primary count in the extended tier.
    pub budget: Duration,
    /// Seed of the random oracle keys.
    pub key_seed: u64,
}

impl VerifyConfig {
    pub fn new(tier: Tier) -> Self {
        VerifyConfig { tier, seeds: vec![1, 2, 3], budget: Duration::from_secs(600), key_seed: 7 }
    }

    fn dmax(&self) -> u32 {
        if self.tier == Tier::Quick {
            1
        } else {
            2
        }
    }

    fn kmax(&self) -> usize {
        if self.tier == Tier::Quick {
            2
        } else {
            4
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub tier: Tier,
    pub seeds: Vec<u64>,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Criterion number to (all passed, number of checks).
    pub fn by_criterion(&self) -> BTreeMap<u8, (bool, usize)> {
        let mut m: BTreeMap<u8, (bool, usize)> = BTreeMap::new();
        for c in &self.checks {
            let e = m.entry(c.criterion).or_insert((true, 0));
            e.0 &= c.passed;
            e.1 += 1;
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "tier": self.tier.name(),
            "seeds": self.seeds,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "criterion": c.criterion,
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
                "seconds": (c.seconds * 1000.0).round() / 1000.0,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{mark} [{}] {}: {} ({:.2}s)\n", c.criterion, c.name, c.detail, c.seconds));
        }
        let n_ok = self.checks.iter().filter(|c| c.passed).count();
        s.push_str(&format!("{} of {} checks passed (tier {})\n", n_ok, self.checks.len(), self.tier.name()));
        s
    }
}

struct Runner {
    checks: Vec<CheckResult>,
}

impl Runner {
    /// Run one check. An `Err` counts as a failure with the error as detail.
    fn run(&mut self, criterion: u8, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let t = Instant::now();
        let (passed, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(CheckResult { criterion, name: name.into(), passed, detail, seconds: t.elapsed().as_secs_f64() });
    }
}

/// Arrangement with `k` points from `seed`, certified with the default probe.
pub fn arrangement(seed: u64, k: usize) -> Result<Arrangement> {
    generate_arrangement(seed, k, &SampleBox::default())
}

/// The key `⟨P_1, .., P_{3d−2}, S₀⟩_d` on an arrangement of `3d − 1` points.
pub fn primary_key(d: u32) -> DescendentKey {
    let k = (3 * d - 1) as usize;
    DescendentKey { d, r: RVector::new(vec![1; k - 1]).padded(k), m: 0, nu: 0, cls: 0 }
}

/// Tropical primary count for degree `d`. From degree 3 on, the generality
/// probe caps descendent orders at 1, which is all a primary count needs.
pub fn tropical_primary(d: u32, seed: u64) -> Result<Q> {
    let k = (3 * d - 1) as usize;
    let b = SampleBox { probe_dmax: d, probe_orders: (d >= 3).then_some(1), ..SampleBox::default() };
    let a = generate_arrangement(seed, k, &b)?;
    TropicalEngine::new(&a, d).value(&primary_key(d))
}

/// The full compatible-key table on one arrangement.
pub fn tropical_table(a: &Arrangement, spec: &TableSpec) -> Result<BTreeMap<DescendentKey, Q>> {
    let eng = TropicalEngine::new(a, spec.dmax);
    compatible_keys(spec).into_iter().map(|k| eng.value(&k).map(|v| (k, v))).collect()
}

/// `n` random dimension-compatible keys with `1 ≤ d ≤ dmax` and every ψ-power
/// at most `psi_max`.
pub fn random_oracle_keys(seed: u64, n: usize, dmax: u32, psi_max: u32) -> Vec<GWKey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let d = rng.gen_range(1..=dmax);
        let len = rng.gen_range(1..=5usize);
        let mut ins: Vec<Insertion> =
            (0..len).map(|_| Insertion::new(rng.gen_range(0..=2u8), rng.gen_range(0..=psi_max))).collect();
        // Fix the last ψ-power so the dimension constraint holds.
        let used: i64 = ins[..len - 1].iter().map(|i| i.class as i64 + i.psi as i64).sum();
        let need = 3 * d as i64 + len as i64 - 1 - used - ins[len - 1].class as i64;
        if !(0..=psi_max as i64).contains(&need) {
            continue;
        }
        ins[len - 1].psi = need as u32;
        let key = GWKey::new(d, ins);
        if key.is_compatible() {
            out.push(key);
        }
    }
    out
}

fn first_diffs(diffs: &[(DescendentKey, Q, Q)]) -> String {
    let shown: Vec<String> =
        diffs.iter().take(3).map(|(k, a, b)| format!("{k}: {} vs {}", fmt_q(a), fmt_q(b))).collect();
    shown.join("; ")
}

pub fn run(cfg: &VerifyConfig) -> VerificationReport {
    let mut r = Runner { checks: Vec::new() };
    let (dmax, kmax) = (cfg.dmax(), cfg.kmax());
    let spec = TableSpec::new(dmax, kmax);
    let oracle = ClassicalOracle::default();
    let main_seed = cfg.seeds.first().copied().unwrap_or(1);

    // 1. Primary counts.
    r.run(1, "primary d=1 equals N_1", || {
        let v = tropical_primary(1, main_seed)?;
        Ok((v == oracle.primary_count(1) && v == q(1), format!("tropical {}", fmt_q(&v))))
    });
    if cfg.tier >= Tier::Standard {
        r.run(1, "primary d=2 equals N_2", || {
            let v = tropical_primary(2, main_seed)?;
            Ok((v == oracle.primary_count(2) && v == q(1), format!("tropical {}", fmt_q(&v))))
        });
    }
    if cfg.tier == Tier::Extended {
        r.run(1, "primary d=3 equals N_3", || {
            let t = Instant::now();
            let v = tropical_primary(3, main_seed)?;
            let within = t.elapsed() <= cfg.budget;
            let ok = v == oracle.primary_count(3) && v == q(12) && within;
            Ok((ok, format!("tropical {} in {:.1}s (budget {}s)", fmt_q(&v), t.elapsed().as_secs_f64(), cfg.budget.as_secs())))
        });
    }
    r.run(1, "oracle N_4 = 620 under 1s", || {
        let t = Instant::now();
        let v = ClassicalOracle::default().primary_count(4);
        let s = t.elapsed();
        Ok((v == q(620) && s < Duration::from_secs(1), format!("{} in {:.3}s", fmt_q(&v), s.as_secs_f64())))
    });

    // 2 and 6 share the tables.
    let mut tables: Vec<(u64, Result<BTreeMap<DescendentKey, Q>>)> = Vec::new();
    r.run(2, "table identical across seeds", || {
        for &s in &cfg.seeds {
            tables.push((s, arrangement(s, kmax).and_then(|a| tropical_table(&a, &spec))));
        }
        let mut base: Option<(u64, &BTreeMap<DescendentKey, Q>)> = None;
        for (s, t) in &tables {
            let t = t.as_ref().map_err(|e| crate::Error::Precondition(format!("seed {s}: {e}")))?;
            match base {
                None => base = Some((*s, t)),
                Some((s0, t0)) => {
                    let diffs: Vec<(DescendentKey, Q, Q)> = t0
                        .iter()
                        .filter(|(k, v)| t.get(*k) != Some(*v))
                        .map(|(k, v)| (k.clone(), v.clone(), t.get(k).cloned().unwrap_or_else(|| q(0))))
                        .collect();
                    if !diffs.is_empty() || t.len() != t0.len() {
                        return Ok((false, format!("seeds {s0} and {s} differ: {}", first_diffs(&diffs))));
                    }
                }
            }
        }
        let n = base.map_or(0, |(_, t)| t.len());
        Ok((cfg.seeds.len() >= 2, format!("{n} keys on seeds {:?}", cfg.seeds)))
    });

    // 3. Loop consistency.
    let loop_kmax = kmax.min(3);
    r.run(3, "loops trivial at unmarked singular points", || {
        let mut n = 0;
        for k in 0..=loop_kmax {
            let a = arrangement(main_seed, k)?;
            let d = build_diagram(&a, 2)?;
            for (x, ok) in check_all_loops(&d)? {
                if !ok {
                    return Ok((false, format!("k={k}: loop at {x} is not the identity")));
                }
                n += 1;
            }
        }
        Ok((true, format!("{n} loops, k <= {loop_kmax}, D = 2")))
    });
    r.run(3, "deleting a child wall is detected", || {
        let a = arrangement(main_seed, loop_kmax.max(2))?;
        let d = build_diagram(&a, 2)?;
        let Some(idx) = d.walls.iter().position(|w| w.parents.is_some()) else {
            return Ok((false, "diagram has no child wall".into()));
        };
        let broken = d.without_wall(idx);
        let caught = check_all_loops(&broken)?.iter().any(|(_, ok)| !ok);
        Ok((caught, format!("removed wall {idx}")))
    });

    // 4. Potential.
    r.run(4, "k=0 has 3 broken lines and W = W_basic", || {
        let a = Arrangement::new(crate::geometry::Pt::new(qf(1, 3), qf(-2, 7)), vec![])?;
        let d = build_diagram(&a, 2)?;
        let lines = enumerate_broken_lines(&d, &a.q, None)?;
        let w = potential_w_k0(&d, &a.q)?;
        Ok((lines.len() == 3 && w == Series::w_basic(d.cfg), format!("{} lines", lines.len())))
    });
    r.run(4, "W_k0 at u = 0 is W_basic and the exponential identity holds", || {
        for k in 1..=loop_kmax {
            let a = arrangement(main_seed, k)?;
            let d = build_diagram(&a, 2)?;
            if potential_w_k0(&d, &a.q)?.u_to_zero() != Series::w_basic(d.cfg) {
                return Ok((false, format!("k={k}: u -> 0 limit differs")));
            }
            for mbar in 0..=2 {
                if !exp_identity_holds(&d, &a.q, mbar)? {
                    return Ok((false, format!("k={k}, mbar={mbar}: exponential identity fails")));
                }
            }
        }
        Ok((true, format!("k <= {loop_kmax}, mbar <= 2")))
    });

    // 5. Fundamental class.
    r.run(5, "fundamental class identity for m >= 1", || {
        let a = arrangement(main_seed, kmax)?;
        let eng = TropicalEngine::new(&a, dmax);
        let mut n = 0;
        for key in compatible_keys(&spec).into_iter().filter(|k| k.m >= 1) {
            if !check_tropfun(&eng, &key)? {
                return Ok((false, format!("fails at {key}")));
            }
            n += 1;
        }
        Ok((true, format!("{n} keys")))
    });

    // 6. Oracle equality.
    r.run(6, "table equals the classical oracle", || {
        let Some((s, t)) = tables.first() else {
            return Ok((false, "no arrangement seeds given".into()));
        };
        let t = t.as_ref().map_err(|e| crate::Error::Precondition(format!("seed {s}: {e}")))?;
        let diffs: Vec<(DescendentKey, Q, Q)> = t
            .iter()
            .filter_map(|(k, v)| {
                let c = oracle.eval(&k.to_gw_key());
                (c != *v).then(|| (k.clone(), v.clone(), c))
            })
            .collect();
        let psi = t.keys().map(|k| k.r.max_entry().saturating_sub(1).max(k.nu)).max().unwrap_or(0);
        Ok((diffs.is_empty(), format!("{} keys, max psi {psi}, {} mismatches {}", t.len(), diffs.len(), first_diffs(&diffs))))
    });
    r.run(6, "spot values <psi T2>_1 = 1 and <psi^4 T2>_2 = 1/8", || {
        let a = arrangement(main_seed, 0)?;
        let eng = TropicalEngine::new(&a, 2);
        let k1 = DescendentKey::new(1, RVector::zero(0), 0, 1, 0)?;
        let k2 = DescendentKey::new(2, RVector::zero(0), 0, 4, 0)?;
        let (t1, t2) = (eng.value(&k1)?, eng.value(&k2)?);
        let (c1, c2) = (oracle.eval(&k1.to_gw_key()), oracle.eval(&k2.to_gw_key()));
        let ok = t1 == q(1) && c1 == q(1) && t2 == qf(1, 8) && c2 == qf(1, 8);
        Ok((ok, format!("tropical {}, {}; classical {}, {}", fmt_q(&t1), fmt_q(&t2), fmt_q(&c1), fmt_q(&c2))))
    });

    // 7. Oracle self-consistency.
    let n_keys = if cfg.tier == Tier::Quick { 50 } else { 200 };
    r.run(7, "reduction order independence", || {
        let keys = random_oracle_keys(cfg.key_seed, n_keys, 3, 4);
        let oracles: Vec<ClassicalOracle> = Strategy::variants().into_iter().map(ClassicalOracle::new).collect();
        for key in &keys {
            let v0 = oracles[0].eval(key);
            if oracles[1..].iter().any(|o| o.eval(key) != v0) {
                return Ok((false, format!("strategies disagree at d={} {key}", key.d)));
            }
        }
        Ok((true, format!("{} random keys, {} strategies", keys.len(), oracles.len())))
    });
    r.run(7, "WDVV associativity up to d = 4", || {
        let bad = wdvv_violations(&oracle, 4);
        Ok((bad.is_empty(), format!("{} violations", bad.len())))
    });
    r.run(7, "two forms of J agree up to d = 3", || {
        let a = j_function(&oracle, 3, 5);
        let b = big_t(&oracle, Trunc::small(3, 5));
        let diffs = a.differences(&b);
        Ok((diffs.is_empty(), format!("{} terms, {} differences", a.len(), diffs.len())))
    });

    // 8. Identities.
    r.run(8, "harmonic and binomial identities under 1s", || {
        let t = Instant::now();
        let h_bad: Vec<u64> = (1..=30).filter(|&n| !harmonic_identity(n)).collect();
        let c_bad = collapse_grid_failures(3, 3, 3);
        let s = t.elapsed();
        let ok = h_bad.is_empty() && c_bad.is_empty() && s < Duration::from_secs(1);
        Ok((ok, format!("harmonic failures {h_bad:?}, collapse failures {}, {:.3}s", c_bad.len(), s.as_secs_f64())))
    });

    // 9. Mirror structure.
    let (tdmax, ymax, psi_cut) = if cfg.tier == Tier::Quick { (1, 2, 2) } else { (2, 3, 3) };
    let trunc = Trunc::new(tdmax, ymax, psi_cut).expect("cutoff within MAX_VARS");
    r.run(9, "K_2 degree-0 part is y00", || {
        let mut k2 = mirror_k(&oracle, 2, trunc);
        k2 = k2.restrict(0, ymax);
        Ok((k2 == MSeries::var(trunc, 0), format!("{} terms", k2.len())))
    });
    r.run(9, "classical T = J, grading and Euler identity", || {
        let bt = big_t(&oracle, trunc);
        let bj = big_j(&oracle, trunc);
        let diffs = bt.differences(&bj);
        let gv = grading_violations(&bt).len() + grading_violations(&bj).len();
        let e = euler_identity_check(&oracle, trunc);
        let ok = diffs.is_empty() && gv == 0 && e.t_holds && e.j_holds && e.mutation_detected;
        Ok((ok, format!("{} terms, {} differences, {gv} grading violations, euler {}/{}", bt.len(), diffs.len(), e.t_holds, e.j_holds)))
    });
    r.run(9, "tropical phi_i1 = K_(2-i) and T_trop = J", || {
        let a = arrangement(main_seed, kmax.max(ymax as usize))?;
        let eng = TropicalEngine::new(&a, tdmax);
        let rep = check_generating_against_oracle(&eng, &oracle, trunc)?;
        Ok((
            rep.passed(),
            format!("{} terms, {} phi mismatches, {} T/J mismatches", rep.terms_compared, rep.phi_vs_k.len(), rep.t_vs_j.len()),
        ))
    });

    VerificationReport { tier: cfg.tier, seeds: cfg.seeds.clone(), checks: r.checks }
}

//! Genus-zero Gromov–Witten invariants of ℙ² from the axioms.
//!
//! Values are computed by a memoized reduction: string, dilaton and divisor
//! strip insertions, topological recursion lowers ψ-powers, and primary
//! point counts come from Kontsevich's recursion. The order in which the
//! rules are tried is a [`Strategy`], so that two different reduction paths
//! can be compared against each other.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, q, Q};

/// One insertion `ψ^psi T_class`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Insertion {
    pub class: u8,
    pub psi: u32,
}

impl Insertion {
    pub fn new(class: u8, psi: u32) -> Self {
        Insertion { class, psi }
    }

    /// `γ ∪ T₁`, or `None` when it vanishes.
    fn cup_t1(self) -> Option<Insertion> {
        (self.class < 2).then(|| Insertion { class: self.class + 1, psi: self.psi })
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.psi {
            0 => write!(f, "T{}", self.class),
            1 => write!(f, "psi T{}", self.class),
            a => write!(f, "psi^{a} T{}", self.class),
        }
    }
}

/// `⟨ψ^{a_1}T_{b_1}, ..., ψ^{a_n}T_{b_n}⟩_{0,d}` with insertions kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GWKey {
    pub d: u32,
    ins: Vec<Insertion>,
}

impl GWKey {
    pub fn new(d: u32, mut ins: Vec<Insertion>) -> Self {
        ins.sort();
        GWKey { d, ins }
    }

    /// Build a key from an explicit list, rejecting class indices above 2.
    pub fn checked(d: u32, ins: Vec<Insertion>) -> Result<Self> {
        if let Some(bad) = ins.iter().find(|i| i.class > 2) {
            return Err(Error::Key(format!("class index {} is not 0, 1 or 2", bad.class)));
        }
        Ok(Self::new(d, ins))
    }

    /// Parse a list such as `"psi^1 T2, T2, T0"` or `"T2*8"`.
    pub fn parse(d: u32, text: &str) -> Result<Self> {
        let mut ins = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (body, count) = match item.split_once('*') {
                Some((b, c)) => (
                    b.trim(),
                    c.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad count in {item:?}")))?,
                ),
                None => (item, 1),
            };
            let mut psi = 0;
            let mut class = None;
            for tok in body.split_whitespace() {
                if let Some(rest) = tok.strip_prefix("psi") {
                    psi = match rest.strip_prefix('^') {
                        Some(e) => e.parse().map_err(|_| Error::Parse(format!("bad ψ power in {item:?}")))?,
                        None if rest.is_empty() => 1,
                        None => return Err(Error::Parse(format!("bad token {tok:?}"))),
                    };
                } else if let Some(c) = tok.strip_prefix('T') {
                    class = Some(c.parse::<u8>().map_err(|_| Error::Parse(format!("bad class in {item:?}")))?);
                } else {
                    return Err(Error::Parse(format!("bad token {tok:?}")));
                }
            }
            let class = class.ok_or_else(|| Error::Parse(format!("no class in {item:?}")))?;
            ins.extend(std::iter::repeat_n(Insertion::new(class, psi), count));
        }
        Self::checked(d, ins)
    }

    pub fn insertions(&self) -> &[Insertion] {
        &self.ins
    }

    pub fn n(&self) -> usize {
        self.ins.len()
    }

    /// `Σ (b_i + a_i) = 3d + n − 1`.
    pub fn is_compatible(&self) -> bool {
        let lhs: i64 = self.ins.iter().map(|i| i.class as i64 + i.psi as i64).sum();
        lhs == 3 * self.d as i64 + self.n() as i64 - 1
    }

    fn without(&self, idx: usize) -> Vec<Insertion> {
        let mut v = self.ins.clone();
        v.remove(idx);
        v
    }
}

impl fmt::Display for GWKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ins.iter().map(|i| i.to_string()).collect();
        write!(f, "<{}>_{}", parts.join(", "), self.d)
    }
}

/// Reduction rules for positive degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    String,
    Dilaton,
    Divisor,
    Recursion,
}

/// How the reduction chooses among applicable rules.
///
/// `order` is the priority of the rules. For topological recursion,
/// `psi_pick` selects which insertion carrying ψ is lowered and `pair_shift`
/// rotates the choice of the two distinguished insertions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub order: [Rule; 4],
    pub psi_pick: PsiPick,
    pub pair_shift: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiPick {
    LargestFirst,
    LargestLast,
    SmallestPositive,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            order: [Rule::String, Rule::Dilaton, Rule::Divisor, Rule::Recursion],
            psi_pick: PsiPick::LargestFirst,
            pair_shift: 0,
        }
    }
}

impl Strategy {
    /// A deliberately different reduction path from the default one.
    pub fn alternative() -> Self {
        Strategy {
            order: [Rule::Recursion, Rule::Divisor, Rule::Dilaton, Rule::String],
            psi_pick: PsiPick::SmallestPositive,
            pair_shift: 1,
        }
    }

    pub fn variants() -> Vec<Strategy> {
        vec![
            Strategy::default(),
            Strategy::alternative(),
            Strategy {
                order: [Rule::Divisor, Rule::Recursion, Rule::String, Rule::Dilaton],
                psi_pick: PsiPick::LargestLast,
                pair_shift: 2,
            },
        ]
    }
}

/// Kontsevich's numbers `N_d` of rational plane curves through `3d − 1`
/// points, for `d = 0..=dmax` (`N_0 = 0`).
pub fn kontsevich_numbers(dmax: u32) -> Vec<Q> {
    let mut n = vec![q(0); dmax as usize + 1];
    if dmax >= 1 {
        n[1] = q(1);
    }
    for d in 2..=dmax as i64 {
        let mut acc = q(0);
        for d1 in 1..d {
            let d2 = d - d1;
            let a = binomial(3 * d - 4, 3 * d1 - 2) * q(d2);
            let b = binomial(3 * d - 4, 3 * d1 - 1) * q(d1);
            acc += &n[d1 as usize] * &n[d2 as usize] * q(d1 * d1 * d2) * (a - b);
        }
        n[d as usize] = acc;
    }
    n
}

/// Memoized classical evaluator.
pub struct ClassicalOracle {
    strategy: Strategy,
    memo: Mutex<HashMap<GWKey, Q>>,
    kontsevich: Mutex<Vec<Q>>,
}

impl Default for ClassicalOracle {
    fn default() -> Self {
        Self::new(Strategy::default())
    }
}

impl ClassicalOracle {
    pub fn new(strategy: Strategy) -> Self {
        ClassicalOracle { strategy, memo: Mutex::new(HashMap::new()), kontsevich: Mutex::new(vec![q(0), q(1)]) }
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    /// `N_d`.
    pub fn primary_count(&self, d: u32) -> Q {
        let mut k = self.kontsevich.lock().unwrap();
        if k.len() <= d as usize {
            *k = kontsevich_numbers(d);
        }
        k[d as usize].clone()
    }

    /// Evaluate a key given as a degree and insertion list.
    pub fn invariant(&self, d: u32, ins: &[Insertion]) -> Q {
        self.eval(&GWKey::new(d, ins.to_vec()))
    }

    pub fn eval(&self, key: &GWKey) -> Q {
        if !key.is_compatible() {
            return q(0);
        }
        if let Some(v) = self.memo.lock().unwrap().get(key) {
            return v.clone();
        }
        let v = self.compute(key);
        self.memo.lock().unwrap().insert(key.clone(), v.clone());
        v
    }

    fn compute(&self, key: &GWKey) -> Q {
        if key.d == 0 {
            return degree_zero(key);
        }
        for rule in self.strategy.order {
            if let Some(v) = self.try_rule(rule, key) {
                return v;
            }
        }
        if key.ins.iter().all(|i| i.class == 2 && i.psi == 0) {
            // Compatibility forces exactly 3d − 1 point insertions.
            return self.primary_count(key.d);
        }
        // Only ψ-insertions remain and there are too few of them for the
        // recursion.
        self.pad_and_recurse(key)
    }

    fn try_rule(&self, rule: Rule, key: &GWKey) -> Option<Q> {
        let pos = |c: u8, a: u32| key.ins.iter().position(|i| i.class == c && i.psi == a);
        match rule {
            Rule::String => pos(0, 0).map(|idx| self.string(key.d, &key.without(idx))),
            Rule::Dilaton => pos(0, 1).map(|idx| {
                let rest = key.without(idx);
                q(rest.len() as i64 - 2) * self.eval(&GWKey::new(key.d, rest))
            }),
            Rule::Divisor => pos(1, 0).map(|idx| self.divisor(key.d, &key.without(idx))),
            Rule::Recursion => {
                if key.n() >= 3 && key.ins.iter().any(|i| i.psi > 0) {
                    Some(self.recursion(key))
                } else {
                    None
                }
            }
        }
    }

    /// `⟨T₀, X⟩_d = Σ_j ⟨X with ψ_j lowered⟩_d`.
    fn string(&self, d: u32, rest: &[Insertion]) -> Q {
        let mut acc = q(0);
        for (j, ins) in rest.iter().enumerate() {
            if ins.psi > 0 {
                let mut v = rest.to_vec();
                v[j].psi -= 1;
                acc += self.eval(&GWKey::new(d, v));
            }
        }
        acc
    }

    /// `⟨T₁, X⟩_d = d⟨X⟩_d + Σ_j ⟨X with ψ_j lowered and γ_j ∪ T₁⟩_d`.
    fn divisor(&self, d: u32, rest: &[Insertion]) -> Q {
        let mut acc = q(d as i64) * self.eval(&GWKey::new(d, rest.to_vec()));
        acc += self.divisor_tail(d, rest);
        acc
    }

    fn divisor_tail(&self, d: u32, rest: &[Insertion]) -> Q {
        let mut acc = q(0);
        for (j, ins) in rest.iter().enumerate() {
            if ins.psi == 0 {
                continue;
            }
            if let Some(mut c) = ins.cup_t1() {
                c.psi -= 1;
                let mut v = rest.to_vec();
                v[j] = c;
                acc += self.eval(&GWKey::new(d, v));
            }
        }
        acc
    }

    /// Invert the divisor equation: `⟨X⟩ = (⟨T₁,X⟩ − tail)/d`, computing
    /// `⟨T₁,X⟩` by recursion (padding again if still too short).
    fn pad_and_recurse(&self, key: &GWKey) -> Q {
        let mut padded = key.ins.clone();
        padded.push(Insertion::new(1, 0));
        let padded = GWKey::new(key.d, padded);
        let with_t1 = if padded.n() >= 3 { self.recursion(&padded) } else { self.pad_and_recurse(&padded) };
        (with_t1 - self.divisor_tail(key.d, &key.ins)) / q(key.d as i64)
    }

    /// Genus-zero topological recursion on one ψ-carrying insertion with two
    /// distinguished companions:
    /// `⟨ψ^{a}γ, α, β, S⟩_d = Σ ⟨ψ^{a−1}γ, S₁, T_e⟩_{d₁} ⟨T_{2−e}, α, β, S₂⟩_{d₂}`.
    fn recursion(&self, key: &GWKey) -> Q {
        let n = key.n();
        let carriers: Vec<usize> = (0..n).filter(|&i| key.ins[i].psi > 0).collect();
        let main = match self.strategy.psi_pick {
            PsiPick::LargestFirst => {
                let m = carriers.iter().map(|&i| key.ins[i].psi).max().unwrap();
                *carriers.iter().find(|&&i| key.ins[i].psi == m).unwrap()
            }
            PsiPick::LargestLast => {
                let m = carriers.iter().map(|&i| key.ins[i].psi).max().unwrap();
                *carriers.iter().rev().find(|&&i| key.ins[i].psi == m).unwrap()
            }
            PsiPick::SmallestPositive => {
                let m = carriers.iter().map(|&i| key.ins[i].psi).min().unwrap();
                *carriers.iter().find(|&&i| key.ins[i].psi == m).unwrap()
            }
        };
        let others: Vec<usize> = (0..n).filter(|&i| i != main).collect();
        let s = self.strategy.pair_shift % others.len();
        let j = others[s];
        let k = others[(s + 1) % others.len()];
        let rest: Vec<Insertion> = others.iter().filter(|&&i| i != j && i != k).map(|&i| key.ins[i]).collect();
        let mut lowered = key.ins[main];
        lowered.psi -= 1;
        let (alpha, beta) = (key.ins[j], key.ins[k]);

        let mut acc = q(0);
        for mask in 0u64..(1u64 << rest.len()) {
            let mut s1 = vec![lowered];
            let mut s2 = vec![alpha, beta];
            for (t, ins) in rest.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    s1.push(*ins);
                } else {
                    s2.push(*ins);
                }
            }
            for d1 in 0..=key.d {
                let d2 = key.d - d1;
                if d1 == 0 && s1.len() < 2 {
                    continue;
                }
                for e in 0..3u8 {
                    let mut left = s1.clone();
                    left.push(Insertion::new(e, 0));
                    let lk = GWKey::new(d1, left);
                    if !lk.is_compatible() {
                        continue;
                    }
                    let lv = self.eval(&lk);
                    if lv.is_zero() {
                        continue;
                    }
                    let mut right = s2.clone();
                    right.push(Insertion::new(2 - e, 0));
                    acc += lv * self.eval(&GWKey::new(d2, right));
                }
            }
        }
        acc
    }
}

/// Degree-zero invariants: `∫_{M̄_{0,n}} Πψ^{a_i} · ∫_{ℙ²} Πγ_i`.
fn degree_zero(key: &GWKey) -> Q {
    let n = key.n();
    let classes: u32 = key.ins.iter().map(|i| i.class as u32).sum();
    let psis: u32 = key.ins.iter().map(|i| i.psi).sum();
    if n < 3 || classes != 2 || psis as usize != n - 3 {
        return q(0);
    }
    key.ins.iter().fold(factorial(n as u64 - 3), |acc, i| acc / factorial(i.psi as u64))
}

/// Three-point functions `G_{abc} = Σ ⟨T_a,T_b,T_c,T₂^n⟩_d t^n/n! q^d`
/// truncated at `q^dmax`, keyed by `(d, n)`.
fn three_point(oracle: &ClassicalOracle, a: u8, b: u8, c: u8, dmax: u32) -> HashMap<(u32, u32), Q> {
    let mut out = HashMap::new();
    for d in 0..=dmax {
        let n = 3 * d as i64 + 2 - (a + b + c) as i64;
        if n < 0 {
            continue;
        }
        let mut ins = vec![Insertion::new(a, 0), Insertion::new(b, 0), Insertion::new(c, 0)];
        ins.extend(std::iter::repeat_n(Insertion::new(2, 0), n as usize));
        let v = oracle.invariant(d, &ins) / factorial(n as u64);
        if !v.is_zero() {
            out.insert((d, n as u32), v);
        }
    }
    out
}

fn poly_mul(x: &HashMap<(u32, u32), Q>, y: &HashMap<(u32, u32), Q>, dmax: u32) -> HashMap<(u32, u32), Q> {
    let mut out: HashMap<(u32, u32), Q> = HashMap::new();
    for ((d1, n1), c1) in x {
        for ((d2, n2), c2) in y {
            if d1 + d2 <= dmax {
                *out.entry((d1 + d2, n1 + n2)).or_insert_with(|| q(0)) += c1 * c2;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Associativity of the big quantum product restricted to the `t₂`-line:
/// `Σ_e G_{abe}G_{(2−e)cf} = Σ_e G_{ace}G_{(2−e)bf}` up to `q^dmax`, for all
/// `a,b,c,f`. Returns the list of violating index tuples.
pub fn wdvv_violations(oracle: &ClassicalOracle, dmax: u32) -> Vec<[u8; 4]> {
    let mut g = HashMap::new();
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                g.insert([a, b, c], three_point(oracle, a, b, c, dmax));
            }
        }
    }
    let side = |a: u8, b: u8, c: u8, f: u8| {
        let mut acc: HashMap<(u32, u32), Q> = HashMap::new();
        for e in 0..3u8 {
            for (k, v) in poly_mul(&g[&[a, b, e]], &g[&[2 - e, c, f]], dmax) {
                *acc.entry(k).or_insert_with(|| q(0)) += v;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    };
    let mut bad = Vec::new();
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                for f in 0..3u8 {
                    if side(a, b, c, f) != side(a, c, b, f) {
                        bad.push([a, b, c, f]);
                    }
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn ev(d: u32, s: &str) -> Q {
        ClassicalOracle::default().eval(&GWKey::parse(d, s).unwrap())
    }

    #[test]
    fn kontsevich_values() {
        let n = kontsevich_numbers(5);
        assert_eq!(n[1..], [q(1), q(1), q(12), q(620), q(87304)]);
    }

    #[test]
    fn primaries_through_the_reduction() {
        assert_eq!(ev(1, "T2, T2"), q(1));
        assert_eq!(ev(3, "T2*8"), q(12));
        assert_eq!(ev(1, "T1, T2, T2"), q(1));
        assert_eq!(ev(2, "T1*2, T2*5"), q(4));
        assert_eq!(ev(0, "T0, T1, T1"), q(1));
        assert_eq!(ev(1, "T2"), q(0));
    }

    #[test]
    fn descendents() {
        assert_eq!(ev(1, "psi T2, T2, T0"), q(1));
        assert_eq!(ev(1, "psi T2"), q(1));
        assert_eq!(ev(2, "psi^4 T2"), qf(1, 8));
        for d in 1..=3u32 {
            let want = (factorial(d as u64).pow(3)).recip();
            assert_eq!(ev(d, &format!("psi^{} T2", 3 * d - 2)), want, "d={d}");
        }
        assert_eq!(ev(0, "psi^2 T2, T0, T0, T0, T0"), q(1));
    }

    #[test]
    fn parse_and_display() {
        let k = GWKey::parse(2, "psi^2 T1, T2*3, psi T0").unwrap();
        assert_eq!(k.n(), 5);
        assert_eq!(GWKey::parse(2, &k.to_string()[1..k.to_string().len() - 3]).unwrap(), k);
        assert!(GWKey::parse(1, "T3").is_err());
        assert!(GWKey::parse(1, "psi^x T2").is_err());
    }

    #[test]
    fn strategies_agree_on_samples() {
        let a = ClassicalOracle::new(Strategy::default());
        let b = ClassicalOracle::new(Strategy::alternative());
        for s in ["psi^3 T2, T2, T1", "psi^2 T2, psi^2 T2, T2*2", "psi T1, psi T1, psi^2 T2, T2*2"] {
            for d in 1..=2 {
                let k = GWKey::parse(d, s).unwrap();
                assert_eq!(a.eval(&k), b.eval(&k), "{k}");
            }
        }
    }

    #[test]
    fn wdvv_low_degree() {
        assert!(wdvv_violations(&ClassicalOracle::default(), 3).is_empty());
    }
}

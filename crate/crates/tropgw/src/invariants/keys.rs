use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{GWKey, Insertion};

/// ψ-order data at the marked points: point `i` carries `ψ^{r_i − 1}` when
/// `r_i > 0` and is unused when `r_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RVector(Vec<u32>);

impl RVector {
    pub fn new(entries: Vec<u32>) -> Self {
        RVector(entries)
    }

    pub fn zero(k: usize) -> Self {
        RVector(vec![0; k])
    }

    /// Unit vector `e^i` (1-based) of length `k`.
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i - 1] = 1;
        RVector(v)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(RVector(Vec::new()));
        }
        text.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad r entry `{t}`"))))
            .collect::<Result<Vec<_>>>()
            .map(RVector)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Length `k`.
    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// `#(r)`.
    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&e| e > 0).count()
    }

    /// `|r|`.
    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `r{i}`: 1-based position of the `i`-th nonzero entry.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).nth(i.checked_sub(1)?).map(|(p, _)| p + 1)
    }

    /// `r(i)`: value of the `i`-th nonzero entry.
    pub fn value(&self, i: usize) -> Option<u32> {
        self.position(i).map(|p| self.0[p - 1])
    }

    /// Positions of the nonzero entries, 1-based.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.k()).filter(|&p| self.0[p - 1] > 0).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Componentwise `r ≤ s`, after padding the shorter vector with zeros.
    pub fn le(&self, s: &RVector) -> bool {
        let n = self.k().max(s.k());
        (0..n).all(|i| self.get(i) <= s.get(i))
    }

    /// `r ≺ s`: `r ≤ s` and `r` is nonzero wherever `s` is.
    pub fn dominated_by(&self, s: &RVector) -> bool {
        let n = self.k().max(s.k());
        self.le(s) && (0..n).all(|i| s.get(i) == 0 || self.get(i) > 0)
    }

    pub fn disjoint(&self, s: &RVector) -> bool {
        let n = self.k().max(s.k());
        (0..n).all(|i| self.get(i) * s.get(i) == 0)
    }

    fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// The same entries padded with zeros to length `k`.
    pub fn padded(&self, k: usize) -> RVector {
        let mut v = self.0.clone();
        v.resize(k.max(v.len()), 0);
        RVector(v)
    }

    /// Apply a permutation of the point labels: entry `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> RVector {
        let mut v = vec![0; self.k()];
        for (i, &e) in self.0.iter().enumerate() {
            v[perm[i]] = e;
        }
        RVector(v)
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `⟨ψ^{r(1)−1}P_{r{1}}, .., T₀^m, ψ^ν S_cls(A)⟩^trop_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DescendentKey {
    pub d: u32,
    pub r: RVector,
    pub m: u32,
    pub nu: u32,
    pub cls: u8,
}

impl DescendentKey {
    pub fn new(d: u32, r: RVector, m: u32, nu: u32, cls: u8) -> Result<Self> {
        if cls > 2 {
            return Err(Error::Key(format!("class index {cls} must be 0, 1 or 2")));
        }
        Ok(DescendentKey { d, r, m, nu, cls })
    }

    /// `3d − ν + m − |r| + i = 2`.
    pub fn is_compatible(&self) -> bool {
        3 * self.d as i64 - self.nu as i64 + self.m as i64 - self.r.norm() as i64 + self.cls as i64 == 2
    }

    /// The classical counterpart: `T₂` with ψ-order `r_j − 1` per used point,
    /// `T₀^m` and `ψ^ν T_{2−i}`.
    pub fn to_gw_key(&self) -> GWKey {
        let mut ins: Vec<Insertion> = self.r.entries().iter().filter(|&&e| e > 0).map(|&e| Insertion::new(2, e - 1)).collect();
        ins.extend(std::iter::repeat_n(Insertion::new(0, 0), self.m as usize));
        ins.push(Insertion::new(2 - self.cls, self.nu));
        GWKey::new(self.d, ins)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "r": self.r.entries(),
            "m": self.m,
            "nu": self.nu,
            "cls": self.cls,
        })
    }
}

impl fmt::Display for DescendentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} r={} m={} nu={} cls={}", self.d, self.r, self.m, self.nu, self.cls)
    }
}

/// Bounds of an invariant table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableSpec {
    pub dmax: u32,
    /// Largest number of used marked points.
    pub kmax: usize,
    /// Largest ψ-order at a marked point.
    pub psi_max: u32,
    /// Largest number of `T₀` insertions.
    pub m_max: u32,
}

impl TableSpec {
    pub fn new(dmax: u32, kmax: usize) -> Self {
        TableSpec { dmax, kmax, psi_max: 4, m_max: 2 }
    }
}

/// Every dimension-compatible key within the bounds, with `r` in canonical
/// form: nonincreasing entries on the first `#(r)` points, padded to `kmax`.
/// Degree 0 is skipped since no tropical curve has degree 0.
pub fn compatible_keys(spec: &TableSpec) -> Vec<DescendentKey> {
    fn partitions(n_left: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        if n_left == 0 {
            return;
        }
        for e in (1..=cap).rev() {
            cur.push(e);
            partitions(n_left - 1, e, cur, out);
            cur.pop();
        }
    }
    let mut shapes = Vec::new();
    partitions(spec.kmax, spec.psi_max + 1, &mut Vec::new(), &mut shapes);
    let mut keys = Vec::new();
    for d in 1..=spec.dmax {
        for shape in &shapes {
            let r = RVector::new(shape.clone()).padded(spec.kmax);
            for m in 0..=spec.m_max {
                for cls in 0..3u8 {
                    let nu = 3 * d as i64 + m as i64 + cls as i64 - 2 - r.norm() as i64;
                    if nu < 0 {
                        continue;
                    }
                    keys.push(DescendentKey { d, r: r.clone(), m, nu: nu as u32, cls });
                }
            }
        }
    }
    keys.sort();
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rvector_basics() {
        let r = RVector::new(vec![0, 2, 0, 1]);
        assert_eq!(r.count(), 2);
        assert_eq!(r.norm(), 3);
        assert_eq!(r.position(1), Some(2));
        assert_eq!(r.value(2), Some(1));
        assert_eq!(r.position(3), None);
        assert!(RVector::new(vec![0, 1, 0, 1]).dominated_by(&r));
        assert!(!RVector::new(vec![0, 1, 0, 0]).dominated_by(&r));
        assert!(RVector::new(vec![0, 1, 0, 0]).le(&r));
        assert!(r.disjoint(&RVector::new(vec![3, 0, 1, 0])));
    }

    #[test]
    fn key_bridge() {
        let k = DescendentKey::new(1, RVector::new(vec![1, 0]), 0, 0, 0).unwrap();
        assert!(k.is_compatible());
        assert_eq!(k.to_gw_key().to_string(), GWKey::parse(1, "T2*2").unwrap().to_string());
        assert!(!DescendentKey::new(1, RVector::new(vec![1, 1]), 0, 0, 0).unwrap().is_compatible());
        assert!(DescendentKey::new(1, RVector::zero(0), 0, 0, 3).is_err());
    }

    #[test]
    fn table_keys_are_compatible() {
        let keys = compatible_keys(&TableSpec::new(2, 2));
        assert!(!keys.is_empty());
        assert!(keys.iter().all(DescendentKey::is_compatible));
    }
}

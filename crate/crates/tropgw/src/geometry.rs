//! Exact planar primitives over ℚ²: the fan of ℙ², rays, intersections and
//! marked-point arrangements.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, qf, Q};

/// An integer vector in `M = ℤ²`.
pub type V2 = [i64; 2];

/// The primitive generators `m_0, m_1, m_2` of the fan of ℙ².
pub const FAN: [V2; 3] = [[-1, -1], [1, 0], [0, 1]];

pub fn wedge(u: V2, v: V2) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Lattice index of `v`; zero for the zero vector.
pub fn lattice_index(v: V2) -> i64 {
    v[0].gcd(&v[1])
}

/// `v / index(v)`. Panics on the zero vector.
pub fn primitive(v: V2) -> V2 {
    let g = lattice_index(v);
    assert!(g != 0, "the zero vector has no primitive direction");
    [v[0] / g, v[1] / g]
}

/// `p(n) = n_0 m_0 + n_1 m_1 + n_2 m_2` for an x-exponent triple.
pub fn p_of(n: [u32; 3]) -> V2 {
    let n = [n[0] as i64, n[1] as i64, n[2] as i64];
    [n[1] - n[0], n[2] - n[0]]
}

pub fn add(u: V2, v: V2) -> V2 {
    [u[0] + v[0], u[1] + v[1]]
}

pub fn neg(u: V2) -> V2 {
    [-u[0], -u[1]]
}

/// A point of `M_ℝ` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Self {
        Pt { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Pt { x: q(x), y: q(y) }
    }

    pub fn plus(&self, v: V2, t: &Q) -> Pt {
        Pt { x: &self.x + t * q(v[0]), y: &self.y + t * q(v[1]) }
    }

    /// Floating-point approximation, used only to skip exact work that is
    /// certain to be discarded.
    pub fn approx(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }

    pub fn minus(&self, other: &Pt) -> (Q, Q) {
        (&self.x - &other.x, &self.y - &other.y)
    }

    pub fn to_strings(&self) -> [String; 2] {
        [fmt_q(&self.x), fmt_q(&self.y)]
    }

    pub fn from_strings(s: &[String; 2]) -> Result<Pt> {
        Ok(Pt { x: parse_q(&s[0])?, y: parse_q(&s[1])? })
    }
}

impl std::fmt::Display for Pt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.x), fmt_q(&self.y))
    }
}

/// `(a, b) ∧ v` for a rational vector `(a, b)`.
pub fn wedge_q(a: &(Q, Q), v: V2) -> Q {
    &a.0 * q(v[1]) - &a.1 * q(v[0])
}

/// Support of a wall: the half-line `base + ℝ≥0·dir`, or the full line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub base: Pt,
    pub dir: V2,
    pub is_line: bool,
}

impl Ray {
    pub fn new(base: Pt, dir: V2) -> Self {
        assert!(lattice_index(dir) == 1, "ray direction must be primitive");
        Ray { base, dir, is_line: false }
    }

    pub fn line(base: Pt, dir: V2) -> Self {
        Ray { is_line: true, ..Ray::new(base, dir) }
    }

    /// Signed distance parameter of `p` along the ray when `p` lies on the
    /// supporting line.
    pub fn param_of(&self, p: &Pt) -> Option<Q> {
        let w = p.minus(&self.base);
        if !wedge_q(&w, self.dir).is_zero() {
            return None;
        }
        Some(if self.dir[0] != 0 { w.0 / q(self.dir[0]) } else { w.1 / q(self.dir[1]) })
    }

    /// True when `p` lies on the support.
    pub fn contains(&self, p: &Pt) -> bool {
        match self.param_of(p) {
            Some(t) => self.is_line || !t.is_negative(),
            None => false,
        }
    }

    /// True when `p` lies on the support but is not the base point.
    pub fn contains_in_interior(&self, p: &Pt) -> bool {
        match self.param_of(p) {
            Some(t) => self.is_line || t.is_positive(),
            None => false,
        }
    }

    pub fn same_line(&self, other: &Ray) -> bool {
        wedge(self.dir, other.dir) == 0 && self.param_of(&other.base).is_some()
    }
}

/// Parameters `(s, t)` with `a.base + s·a.dir = b.base + t·b.dir`, if the
/// supporting lines are not parallel.
pub fn line_params(a: &Ray, b: &Ray) -> Option<(Q, Q)> {
    let det = wedge(a.dir, b.dir);
    if det == 0 {
        return None;
    }
    let w = b.base.minus(&a.base);
    let det = q(det);
    let s = wedge_q(&w, b.dir) / &det;
    let t = wedge_q(&w, a.dir) / &det;
    Some((s, t))
}

/// Cheap necessary condition for [`intersect`]: false only when the f64
/// parameters are clearly outside the supports.
pub fn may_intersect(a: &Ray, pa: (f64, f64), b: &Ray, pb: (f64, f64)) -> bool {
    let det = wedge(a.dir, b.dir);
    if det == 0 {
        return false;
    }
    let (wx, wy) = (pb.0 - pa.0, pb.1 - pa.1);
    let det = det as f64;
    let s = (wx * b.dir[1] as f64 - wy * b.dir[0] as f64) / det;
    let t = (wx * a.dir[1] as f64 - wy * a.dir[0] as f64) / det;
    const EPS: f64 = 1e-7;
    !((!a.is_line && s < -EPS) || (!b.is_line && t < -EPS))
}

/// Transverse intersection of two supports in their relative interiors.
pub fn intersect(a: &Ray, b: &Ray) -> Option<Pt> {
    let (s, t) = line_params(a, b)?;
    if (a.is_line || s.is_positive()) && (b.is_line || t.is_positive()) {
        Some(a.base.plus(a.dir, &s))
    } else {
        None
    }
}

/// Where a point sits relative to the translated fan `Q + Σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cell {
    /// The vertex `Q`.
    Vertex,
    /// The open ray `Q + ℝ>0 m_i`.
    Ray(usize),
    /// The open cone `Q + σ_{i,i+1}` (indices mod 3).
    Sector(usize),
}

impl Cell {
    pub fn label(&self) -> String {
        match self {
            Cell::Vertex => "Q".into(),
            Cell::Ray(i) => format!("rho{i}"),
            Cell::Sector(i) => format!("sigma{}{}", i, (i + 1) % 3),
        }
    }
}

/// Locate `p` relative to `Q + Σ`.
pub fn cell_of(qpt: &Pt, p: &Pt) -> Cell {
    let v = p.minus(qpt);
    if v.0.is_zero() && v.1.is_zero() {
        return Cell::Vertex;
    }
    for i in 0..3 {
        let a = FAN[i];
        let b = FAN[(i + 1) % 3];
        // v = α a + β b, solved by Cramer's rule (det(a, b) = 1 for this fan).
        let det = q(wedge(a, b));
        let alpha = wedge_q(&v, b) / &det;
        let beta = -wedge_q(&v, a) / &det;
        if alpha.is_positive() && beta.is_zero() {
            return Cell::Ray(i);
        }
        if alpha.is_positive() && beta.is_positive() {
            return Cell::Sector(i);
        }
    }
    unreachable!("the fan of P^2 is complete")
}

/// The marked-point configuration `A = {Q, P_1, .., P_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub q: Pt,
    pub p: Vec<Pt>,
    pub seed: u64,
    /// Set only by a successful generality check.
    pub general: bool,
}

#[derive(Serialize, Deserialize)]
struct ArrangementJson {
    k: usize,
    seed: u64,
    #[serde(rename = "Q")]
    q: [String; 2],
    #[serde(rename = "P")]
    p: Vec<[String; 2]>,
}

impl Arrangement {
    pub fn new(q: Pt, p: Vec<Pt>) -> Result<Self> {
        let all: Vec<&Pt> = std::iter::once(&q).chain(p.iter()).collect();
        for i in 0..all.len() {
            for j in 0..i {
                if all[i] == all[j] {
                    return Err(Error::Precondition(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(Arrangement { q, p, seed: 0, general: false })
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    /// Marked point `P_l`, 1-based.
    pub fn point(&self, l: usize) -> &Pt {
        &self.p[l - 1]
    }

    /// `A(Q')`: the same marked points with a new basepoint.
    pub fn with_basepoint(&self, q: Pt) -> Result<Self> {
        let mut a = Arrangement::new(q, self.p.clone())?;
        a.seed = self.seed;
        Ok(a)
    }

    /// The first `k` marked points.
    pub fn truncate(&self, k: usize) -> Self {
        Arrangement { q: self.q.clone(), p: self.p[..k.min(self.p.len())].to_vec(), seed: self.seed, general: false }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ArrangementJson {
            k: self.k(),
            seed: self.seed,
            q: self.q.to_strings(),
            p: self.p.iter().map(Pt::to_strings).collect(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: ArrangementJson = serde_json::from_value(v.clone())?;
        let p = j.p.iter().map(Pt::from_strings).collect::<Result<Vec<_>>>()?;
        if p.len() != j.k {
            return Err(Error::Parse(format!("k = {} but {} points given", j.k, p.len())));
        }
        let mut a = Arrangement::new(Pt::from_strings(&j.q)?, p)?;
        a.seed = j.seed;
        Ok(a)
    }
}

/// Sampling box for [`generate_arrangement`]: coordinates are `n / den` with
/// `|n / den| <= half_width` and `1 <= den <= max_den`.
#[derive(Clone, Copy, Debug)]
pub struct SampleBox {
    pub half_width: i64,
    pub max_den: i64,
    pub retries: usize,
    /// Degree cutoff of the probe diagram used by the generality check.
    pub probe_dmax: u32,
    /// Descendent order cap of the probe diagram; `None` means `k`.
    pub probe_orders: Option<usize>,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox { half_width: 6, max_den: 97, retries: 200, probe_dmax: 2, probe_orders: None }
    }
}

fn sample_point(rng: &mut ChaCha8Rng, b: &SampleBox) -> Pt {
    let mut coord = || {
        let den = rng.gen_range(1..=b.max_den);
        let n = rng.gen_range(-b.half_width * den..=b.half_width * den);
        qf(n, den)
    };
    let x = coord();
    let y = coord();
    Pt::new(x, y)
}

/// Deterministic pseudo-random arrangement, re-sampled until the generality
/// check passes.
pub fn generate_arrangement(seed: u64, k: usize, b: &SampleBox) -> Result<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..b.retries.max(1) {
        let qpt = sample_point(&mut rng, b);
        let p: Vec<Pt> = (0..k).map(|_| sample_point(&mut rng, b)).collect();
        let Ok(mut a) = Arrangement::new(qpt, p) else { continue };
        a.seed = seed;
        let orders = b.probe_orders.unwrap_or(k);
        let report = crate::scattering::generality_check_with_orders(&a, b.probe_dmax, orders);
        if report.general {
            a.general = true;
            return Ok(a);
        }
        last = report.violations.join("; ");
    }
    Err(Error::Generation(format!("no general arrangement after {} tries (last: {last})", b.retries)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge([1, 0], [0, 1]), 1);
        assert_eq!(wedge([2, 3], [2, 3]), 0);
        assert_eq!(wedge([0, -1], [-1, 0]), -1);
    }

    #[test]
    fn intersect_examples() {
        let a = Ray::new(Pt::int(0, 0), [1, 1]);
        let b = Ray::new(Pt::int(2, 0), [0, 1]);
        assert_eq!(intersect(&a, &b), Some(Pt::int(2, 2)));
        let a = Ray::new(Pt::int(0, 0), [1, 0]);
        let b = Ray::new(Pt::int(0, 1), [1, 0]);
        assert_eq!(intersect(&a, &b), None);
        let b = Ray::new(Pt::int(1, 1), [0, -1]);
        assert_eq!(intersect(&a, &b), Some(Pt::int(1, 0)));
        // Meeting only at a base point is not an interior intersection.
        let b = Ray::new(Pt::int(0, 0), [0, 1]);
        assert_eq!(intersect(&a, &b), None);
    }

    #[test]
    fn fan_relations() {
        assert_eq!(add(add(FAN[0], FAN[1]), FAN[2]), [0, 0]);
        for m in FAN {
            assert_eq!(lattice_index(m), 1);
        }
        assert_eq!(p_of([1, 0, 0]), FAN[0]);
        assert_eq!(p_of([0, 1, 1]), [1, 1]);
        assert_eq!(p_of([2, 2, 2]), [0, 0]);
    }

    #[test]
    fn cells() {
        let o = Pt::int(0, 0);
        assert_eq!(cell_of(&o, &o), Cell::Vertex);
        assert_eq!(cell_of(&o, &Pt::int(3, 0)), Cell::Ray(1));
        assert_eq!(cell_of(&o, &Pt::int(-2, -2)), Cell::Ray(0));
        assert_eq!(cell_of(&o, &Pt::int(1, 1)), Cell::Sector(1));
        assert_eq!(cell_of(&o, &Pt::int(-1, 3)), Cell::Sector(2));
        assert_eq!(cell_of(&o, &Pt::int(3, -1)), Cell::Sector(0));
    }

    #[test]
    fn arrangement_json_round_trip() {
        let mut a = Arrangement::new(Pt::new(qf(1, 3), q(0)), vec![Pt::int(1, 1)]).unwrap();
        a.seed = 9;
        let b = Arrangement::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
        assert!(Arrangement::new(Pt::int(0, 0), vec![Pt::int(0, 0)]).is_err());
    }
}

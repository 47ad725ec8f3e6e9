use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::keys::DescendentKey;
use super::mult_vertex;
use crate::brokenlines::enumerate_bounded;
use crate::coeffring::ExponentKey;
use crate::error::{Error, Result};
use crate::geometry::{cell_of, intersect, wedge, Arrangement, Cell, Pt, Ray, FAN};
use crate::rational::{binomial, fmt_q, multinomial, q, Q};
use crate::scattering::{build_diagram_with_orders, ScatteringDiagram, Wall};

/// A computed invariant with its split over the cells of `Q + Σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TropResult {
    pub key: DescendentKey,
    pub value: Q,
    /// Contribution per cell label (`Q`, `rho{i}`, `sigma{i}{i+1}`); cells
    /// that contribute nothing are omitted.
    pub sectors: BTreeMap<String, Q>,
    pub seed: u64,
}

impl TropResult {
    pub fn to_json(&self) -> serde_json::Value {
        let sectors: serde_json::Map<String, serde_json::Value> =
            self.sectors.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(fmt_q(v)))).collect();
        serde_json::json!({
            "key": self.key.to_json(),
            "value": fmt_q(&self.value),
            "sectors": sectors,
            "seed": self.seed,
        })
    }
}

/// Aggregated semirigid disks at one point: final x-exponent, u-part and the
/// summed broken-line coefficient.
#[derive(Clone, Debug)]
struct Disk {
    x: [u32; 3],
    u: ExponentKey,
    coeff: Q,
}

/// How pure rays at the distinguished vertex are weighted.
#[derive(Clone, Copy, Debug)]
enum VertexWeight {
    /// `Mult^level` with pure rays in the flagged directions forbidden.
    Mult { level: u8, forbid: [bool; 3] },
    /// Gluing at a marked point in the sector `σ_{j,j+1}`: `Mult⁰` times
    /// `C(a + ν − l, ν)`, where `l` counts pure rays in directions `m_j` and
    /// `m_{j+1}`.
    Marked { sector: usize, a: u32, nu: u32 },
}

impl VertexWeight {
    fn eval(&self, n: [u32; 3]) -> Q {
        match *self {
            VertexWeight::Mult { level, forbid } => {
                if (0..3).any(|i| forbid[i] && n[i] > 0) {
                    return q(0);
                }
                mult_vertex(level, n)
            }
            VertexWeight::Marked { sector, a, nu } => {
                let l = n[sector] + n[(sector + 1) % 3];
                let top = a as i64 + nu as i64 - l as i64;
                mult_vertex(0, n) * binomial(top, nu as i64)
            }
        }
    }
}

/// The diagram of the sub-arrangement spanned by the used points, with the
/// map from its point labels back to the original ones.
struct SubDiagram {
    diagram: ScatteringDiagram,
    points: Vec<usize>,
}

type DiskCacheKey = (u32, usize, Pt, ExponentKey, [u32; 3]);

/// Computes tropical invariants over a fixed arrangement.
///
/// An invariant only involves walls whose u-support lies inside the used
/// points, and those walls do not depend on the other points. Each key is
/// therefore evaluated on the diagram of its sub-arrangement, built once per
/// (point set, descendent order) and cached together with the disk lists.
pub struct TropicalEngine {
    arrangement: Arrangement,
    dmax: u32,
    diagrams: Mutex<HashMap<(u32, usize), Arc<SubDiagram>>>,
    disks: Mutex<HashMap<DiskCacheKey, Arc<Vec<Disk>>>>,
}

impl TropicalEngine {
    pub fn new(arrangement: &Arrangement, dmax: u32) -> Self {
        TropicalEngine {
            arrangement: arrangement.clone(),
            dmax,
            diagrams: Mutex::new(HashMap::new()),
            disks: Mutex::new(HashMap::new()),
        }
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    fn sub_diagram(&self, points: &[usize], orders: usize) -> Result<Arc<SubDiagram>> {
        let mask = points.iter().fold(0u32, |m, &p| m | 1 << (p - 1));
        if let Some(s) = self.diagrams.lock().expect("cache lock").get(&(mask, orders)) {
            return Ok(s.clone());
        }
        let pts = points.iter().map(|&p| self.arrangement.point(p).clone()).collect();
        let sub = Arrangement::new(self.arrangement.q.clone(), pts)?;
        let diagram = build_diagram_with_orders(&sub, self.dmax, orders)?;
        let s = Arc::new(SubDiagram { diagram, points: points.to_vec() });
        self.diagrams.lock().expect("cache lock").insert((mask, orders), s.clone());
        Ok(s)
    }

    /// The invariant with its per-cell breakdown.
    pub fn invariant(&self, key: &DescendentKey) -> Result<TropResult> {
        let support = key.r.support();
        if let Some(&p) = support.iter().find(|&&p| p > self.arrangement.k()) {
            return Err(Error::Key(format!("r uses point {p} but the arrangement has {} points", self.arrangement.k())));
        }
        if key.d > self.dmax {
            return Err(Error::Key(format!("degree {} exceeds the cutoff {}", key.d, self.dmax)));
        }
        let mut out = TropResult { key: key.clone(), value: q(0), sectors: BTreeMap::new(), seed: self.arrangement.seed };
        if !key.is_compatible() || key.d == 0 {
            return Ok(out);
        }
        let sub = self.sub_diagram(&support, key.r.max_entry().max(1) as usize)?;
        let r: Vec<u32> = support.iter().map(|&p| key.r.entries()[p - 1]).collect();
        let ctx = Ctx { engine: self, sub: &sub, d: key.d };
        let mut acc: BTreeMap<String, Q> = BTreeMap::new();

        // T₀-markings sit at the distinguished vertex or at the marked-point
        // vertices; labelled markings are distributed in all possible ways.
        let n = r.len();
        for g in distributions(key.m, n + 1) {
            let (gx, gp) = (g[0], &g[1..]);
            if gx > key.nu || (0..n).any(|j| gp[j] >= r[j]) {
                continue;
            }
            let w = multinomial(&g.iter().map(|&v| v as u64).collect::<Vec<_>>());
            let rr: Vec<u32> = (0..n).map(|j| r[j] - gp[j]).collect();
            for (label, v) in ctx.unmerged(&rr, key.nu - gx, key.cls)? {
                *acc.entry(label).or_insert_with(Q::zero) += v * &w;
            }
        }
        if key.cls == 2 {
            // The distinguished vertex sits at P_l, where the two vertices
            // merge into one that takes all markings assigned to either.
            for l in 0..n {
                for g in distributions(key.m, n) {
                    let gm = g[0];
                    let others: Vec<u32> = g[1..].to_vec();
                    let mut rr = r.clone();
                    let mut ok = true;
                    let mut oi = 0;
                    for j in 0..n {
                        if j == l {
                            continue;
                        }
                        if others[oi] >= r[j] {
                            ok = false;
                        }
                        rr[j] = r[j].saturating_sub(others[oi]);
                        oi += 1;
                    }
                    if !ok {
                        continue;
                    }
                    let w = multinomial(&g.iter().map(|&v| v as u64).collect::<Vec<_>>());
                    if let Some((label, v)) = ctx.merged(l + 1, &rr, key.nu, gm)? {
                        *acc.entry(label).or_insert_with(Q::zero) += v * &w;
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.value = acc.values().sum();
        out.sectors = acc;
        Ok(out)
    }

    pub fn value(&self, key: &DescendentKey) -> Result<Q> {
        Ok(self.invariant(key)?.value)
    }

    /// Aggregated non-pure disks at `x` whose u-part is compatible with
    /// `target` and whose x-exponent is bounded by `bound`.
    fn disks_at(&self, sub: &SubDiagram, x: &Pt, target: &ExponentKey, bound: [u32; 3]) -> Result<Arc<Vec<Disk>>> {
        let mask = sub.points.iter().fold(0u32, |m, &p| m | 1 << (p - 1));
        let ck = (mask, sub.diagram.cfg.orders, x.clone(), target.u_only(), bound);
        if let Some(v) = self.disks.lock().expect("cache lock").get(&ck) {
            return Ok(v.clone());
        }
        let walls = compatible_walls(&sub.diagram, target);
        let lines = enumerate_bounded(&walls, &sub.diagram.cfg, x, bound)?;
        let mut agg: BTreeMap<ExponentKey, Q> = BTreeMap::new();
        for b in lines.iter().filter(|b| !b.is_pure()) {
            *agg.entry(b.final_term()).or_insert_with(Q::zero) += &b.coeff;
        }
        let v: Vec<Disk> = agg
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Disk { x: k.x, u: k.u_only(), coeff: c })
            .collect();
        let v = Arc::new(v);
        self.disks.lock().expect("cache lock").insert(ck, v.clone());
        Ok(v)
    }
}

/// Walls whose u-part divides `target`.
fn compatible_walls<'a>(d: &'a ScatteringDiagram, target: &ExponentKey) -> Vec<(usize, &'a Wall)> {
    d.walls.iter().enumerate().filter(|(_, w)| divides(&w.term, target)).collect()
}

fn divides(term: &ExponentKey, target: &ExponentKey) -> bool {
    term.umask() & !target.umask() == 0 && term.u_pairs().iter().all(|&(p, o)| target.order_at(p) == Some(o))
}

/// `target / term` on u-parts, assuming `term` divides `target`.
fn quotient(target: &ExponentKey, term: &ExponentKey) -> ExponentKey {
    let mut k = target.u_only();
    for (p, _) in term.u_pairs() {
        k = k.drop_point(p);
    }
    k
}

fn sub_x(a: [u32; 3], b: [u32; 3]) -> Option<[u32; 3]> {
    (0..3).all(|i| a[i] >= b[i]).then(|| [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

/// All vectors of `len` nonnegative integers summing to `total`.
fn distributions(total: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
    }
    if len == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, total, &mut vec![0; len], &mut out);
    out
}

/// Sum over sets of distinct disks whose u-parts partition `target` exactly,
/// padded by pure rays to total x-exponent `tx` and `n_disks` disks in all.
fn glue(disks: &[Disk], target: &ExponentKey, tx: [u32; 3], n_disks: u32, weight: VertexWeight) -> Q {
    struct St<'a> {
        disks: &'a [Disk],
        target: &'a ExponentKey,
        n_disks: u32,
        weight: VertexWeight,
        acc: Q,
    }
    fn rec(st: &mut St, left: u32, x: [u32; 3], used: u32, c: Q) {
        if left == 0 {
            if used > st.n_disks {
                return;
            }
            if x.iter().sum::<u32>() != st.n_disks - used {
                return;
            }
            let w = st.weight.eval(x);
            if !w.is_zero() {
                st.acc += c * w;
            }
            return;
        }
        let bit = left & left.wrapping_neg();
        for i in 0..st.disks.len() {
            let dk = &st.disks[i];
            let m = dk.u.umask();
            if m & bit == 0 || m & !left != 0 {
                continue;
            }
            let Some(x2) = sub_x(x, dk.x) else { continue };
            rec(st, left & !m, x2, used + 1, &c * &dk.coeff);
        }
    }
    let usable: Vec<Disk> = disks.iter().filter(|d| divides(&d.u, target)).cloned().collect();
    let mut st = St { disks: &usable, target, n_disks, weight, acc: q(0) };
    let _ = st.target;
    rec(&mut st, target.umask(), tx, 0, q(1));
    st.acc
}

struct Ctx<'a> {
    engine: &'a TropicalEngine,
    sub: &'a SubDiagram,
    d: u32,
}

impl Ctx<'_> {
    fn target(&self, r: &[u32]) -> ExponentKey {
        let mut k = ExponentKey::one();
        for (j, &e) in r.iter().enumerate() {
            if e > 0 {
                k = k.with_u(j + 1, e as usize - 1).expect("distinct points");
            }
        }
        k
    }

    fn full_x(&self) -> [u32; 3] {
        [self.d; 3]
    }

    fn qpt(&self) -> &Pt {
        &self.sub.diagram.arrangement.q
    }

    fn at(&self, x: &Pt, target: &ExponentKey, tx: [u32; 3], n_disks: i64, w: VertexWeight) -> Result<Q> {
        if n_disks < 0 {
            return Ok(q(0));
        }
        let disks = self.engine.disks_at(self.sub, x, target, tx)?;
        Ok(glue(&disks, target, tx, n_disks as u32, w))
    }

    /// Walls dividing `target` that cross the open ray `Q + ℝ>0 m_i`.
    fn ray_crossings(&self, target: &ExponentKey, i: usize) -> Vec<(Pt, &Wall)> {
        let ray = Ray::new(self.qpt().clone(), FAN[i]);
        self.sub
            .diagram
            .walls
            .iter()
            .filter(|w| divides(&w.term, target))
            .filter_map(|w| intersect(&ray, &w.support).map(|x| (x, w)))
            .collect()
    }

    /// Contributions of every configuration whose distinguished vertex is
    /// not a marked point, keyed by cell.
    fn unmerged(&self, r: &[u32], nu: u32, cls: u8) -> Result<Vec<(String, Q)>> {
        let target = self.target(r);
        let tx = self.full_x();
        let nu = nu as i64;
        let free = [false; 3];
        let mut out = Vec::new();
        let qlabel = Cell::Vertex.label();
        match cls {
            0 => {
                out.push((qlabel, self.at(self.qpt(), &target, tx, nu + 2, VertexWeight::Mult { level: 0, forbid: free })?));
            }
            1 => {
                for i in 0..3 {
                    out.push((Cell::Ray(i).label(), self.on_ray(&target, i, nu + 1, 0)?));
                }
                if nu >= 1 {
                    out.push((qlabel, self.at(self.qpt(), &target, tx, nu + 1, VertexWeight::Mult { level: 1, forbid: free })?));
                }
            }
            _ => {
                for (label, v) in self.unmarked_crossings(&target, nu)? {
                    out.push((label, v));
                }
                if nu >= 1 {
                    for i in 0..3 {
                        out.push((Cell::Ray(i).label(), self.on_ray(&target, i, nu, 1)?));
                    }
                }
                if nu >= 2 {
                    out.push((qlabel, self.at(self.qpt(), &target, tx, nu, VertexWeight::Mult { level: 2, forbid: free })?));
                }
            }
        }
        Ok(out)
    }

    /// One rigid wall crossing the ray `Q + ℝ>0 m_i`, with `n_disks`
    /// semirigid disks and no pure ray running back along the same ray.
    fn on_ray(&self, target: &ExponentKey, i: usize, n_disks: i64, level: u8) -> Result<Q> {
        let mut forbid = [false; 3];
        forbid[i] = true;
        let mut acc = q(0);
        for (x, w) in self.ray_crossings(target, i) {
            let Some(tx) = sub_x(self.full_x(), w.term.x) else { continue };
            let rest = quotient(target, &w.term);
            let factor = q(wedge(w.support.dir, FAN[i]).abs()) * &w.coeff;
            acc += factor * self.at(&x, &rest, tx, n_disks, VertexWeight::Mult { level, forbid })?;
        }
        Ok(acc)
    }

    /// Two rigid walls crossing at an unmarked point of an open sector.
    fn unmarked_crossings(&self, target: &ExponentKey, nu: i64) -> Result<Vec<(String, Q)>> {
        let walls: Vec<&Wall> = self.sub.diagram.walls.iter().filter(|w| divides(&w.term, target)).collect();
        let mut out = Vec::new();
        for a in 0..walls.len() {
            for b in 0..a {
                let (w1, w2) = (walls[a], walls[b]);
                if w1.umask() & w2.umask() != 0 {
                    continue;
                }
                let Some(x) = intersect(&w1.support, &w2.support) else { continue };
                let Cell::Sector(j) = cell_of(self.qpt(), &x) else {
                    return Err(Error::Generality(format!("walls cross at {x} on the skeleton of Q")));
                };
                let Some(tx) = self.full_x().iter().zip(0..3).map(|(&t, i)| t.checked_sub(w1.term.x[i] + w2.term.x[i])).collect::<Option<Vec<_>>>() else {
                    continue;
                };
                let tx = [tx[0], tx[1], tx[2]];
                let rest = quotient(&quotient(target, &w1.term), &w2.term);
                let mut forbid = [false; 3];
                forbid[j] = true;
                forbid[(j + 1) % 3] = true;
                let factor = q(wedge(w1.support.dir, w2.support.dir).abs()) * &w1.coeff * &w2.coeff;
                let v = self.at(&x, &rest, tx, nu, VertexWeight::Mult { level: 0, forbid })?;
                if !v.is_zero() {
                    out.push((Cell::Sector(j).label(), factor * v));
                }
            }
        }
        Ok(out)
    }

    /// Distinguished vertex at the marked point `l` (sub-diagram label)
    /// carrying `ψ^a` with `a = r_l − 1`, `gm` of the markings, and the
    /// other points reduced to `r`.
    fn merged(&self, l: usize, r: &[u32], nu: u32, gm: u32) -> Result<Option<(String, Q)>> {
        let a = r[l - 1] - 1;
        let mut rest = r.to_vec();
        rest[l - 1] = 0;
        let target = self.target(&rest);
        let p = self.sub.diagram.arrangement.point(l).clone();
        let Cell::Sector(j) = cell_of(self.qpt(), &p) else {
            return Err(Error::Generality(format!("P{l} lies on the skeleton of Q")));
        };
        let n_disks = a as i64 + nu as i64 + 1 - gm as i64;
        let v = self.at(&p, &target, self.full_x(), n_disks, VertexWeight::Marked { sector: j, a, nu })?;
        Ok((!v.is_zero()).then(|| (Cell::Sector(j).label(), v)))
    }
}

/// Evaluate a tropical invariant on `a` with a fresh engine.
pub fn tropical_invariant(a: &Arrangement, key: &DescendentKey, dmax: u32) -> Result<TropResult> {
    TropicalEngine::new(a, dmax.max(key.d)).invariant(key)
}

/// Run the local enumerations the invariants rely on over a full diagram:
/// broken lines at `Q` and at every marked point with its own walls
/// removed. Any degenerate position surfaces as a generality error.
pub fn probe_local_data(d: &ScatteringDiagram) -> Result<()> {
    let all = d.all_walls();
    enumerate_bounded(&all, &d.cfg, &d.arrangement.q, [d.dmax; 3])?;
    for l in 1..=d.arrangement.k() {
        let walls = d.walls_avoiding(1 << (l - 1));
        enumerate_bounded(&walls, &d.cfg, d.arrangement.point(l), [d.dmax; 3])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distributions_count() {
        assert_eq!(distributions(2, 3).len(), 6);
        assert_eq!(distributions(0, 0), vec![Vec::<u32>::new()]);
        assert!(distributions(1, 0).is_empty());
    }
}

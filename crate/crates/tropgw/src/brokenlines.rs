//! Broken lines, semirigid disks and the descendent Landau–Ginzburg
//! potential.
//!
//! Enumeration runs backward from the endpoint. A segment with exponent `w`
//! is traversed in direction `-p(w)`, so walking back means moving along
//! `+p(w)`; at every crossed group of collinear walls the line may have bent,
//! and undoing a bend by the walls `J` replaces `w` by `w - Σ_J m_𝔡`.

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::coeffring::{ExponentKey, RingConfig, Series};
use crate::error::{Error, Result};
use crate::geometry::{line_params, neg, p_of, wedge, Pt, Ray, V2};
use crate::rational::{fmt_q, q, Q};
use crate::scattering::{ScatteringDiagram, Wall};

/// One linear piece of a broken line, in forward order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub w: [u32; 3],
    pub coeff: Q,
    /// u-part of the monomial carried on this segment.
    pub u: ExponentKey,
}

/// A break between two segments: the walls bent at and the break point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bend {
    pub walls: Vec<usize>,
    pub at: Pt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrokenLine {
    pub endpoint: Pt,
    pub segments: Vec<Segment>,
    /// `bends[i]` sits between `segments[i]` and `segments[i + 1]`.
    pub bends: Vec<Bend>,
    pub coeff: Q,
}

impl BrokenLine {
    pub fn last(&self) -> &Segment {
        self.segments.last().expect("a broken line has a segment")
    }

    /// The final monomial's key: u-part with x-exponent `w_final`.
    pub fn final_term(&self) -> ExponentKey {
        let s = self.last();
        s.u.with_x(s.w)
    }

    pub fn is_pure(&self) -> bool {
        self.bends.is_empty()
    }

    /// `m(𝒟) = -p(Δ)`, the direction in which the disk leaves its endpoint.
    pub fn direction(&self) -> V2 {
        neg(p_of(self.last().w))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "endpoint": self.endpoint.to_strings(),
            "coeff": fmt_q(&self.coeff),
            "segments": self.segments.iter().map(|s| json!({
                "w": s.w,
                "coeff": fmt_q(&s.coeff),
                "u": s.u.u_pairs().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "bends": self.bends.iter().map(|b| json!({
                "walls": b.walls,
                "at": b.at.to_strings(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Crossings of the backward ray `y + t·v` (`t > 0`) with the walls, grouped
/// by parameter. Each group lies on a single line.
fn crossing_groups(walls: &[(usize, &Wall)], apx: &[(f64, f64)], y: &Pt, v: V2) -> Result<Vec<(Q, Vec<usize>)>> {
    const EPS: f64 = 1e-7;
    let path = Ray { base: y.clone(), dir: v, is_line: true };
    let ya = y.approx();
    let mut hits: Vec<(Q, usize)> = Vec::new();
    for (slot, (id, w)) in walls.iter().enumerate() {
        let sup = &w.support;
        let det = wedge(v, sup.dir);
        let (wx, wy) = (apx[slot].0 - ya.0, apx[slot].1 - ya.1);
        if det == 0 {
            // Parallel: only a wall on the same line matters.
            let cross = wx * v[1] as f64 - wy * v[0] as f64;
            if cross.abs() > EPS {
                continue;
            }
        } else {
            let detf = det as f64;
            let t = (wx * sup.dir[1] as f64 - wy * sup.dir[0] as f64) / detf;
            let s = (wx * v[1] as f64 - wy * v[0] as f64) / detf;
            if t < -EPS || (!sup.is_line && s < -EPS) {
                continue;
            }
        }
        if wedge(sup.dir, v) == 0 {
            if sup.same_line(&path) {
                let runs_along = sup.is_line
                    || sup.dir[0] * v[0] + sup.dir[1] * v[1] > 0
                    || path_param(y, v, &sup.base).is_positive();
                if runs_along {
                    return Err(Error::Generality(format!("broken line from {y} runs along wall {id}")));
                }
            }
            continue;
        }
        let (t, s) = line_params(&path, sup).expect("transverse");
        if !t.is_positive() {
            continue;
        }
        if !sup.is_line {
            if s.is_negative() {
                continue;
            }
            if s.is_zero() {
                return Err(Error::Generality(format!("broken line from {y} passes through the base of wall {id}")));
            }
        }
        hits.push((t, slot));
    }
    hits.sort_by(|a, b| a.0.cmp(&b.0));
    let mut groups: Vec<(Q, Vec<usize>)> = Vec::new();
    for (t, slot) in hits {
        match groups.last_mut() {
            Some((t0, g)) if *t0 == t => g.push(slot),
            _ => groups.push((t, vec![slot])),
        }
    }
    for (_, g) in &groups {
        let d0 = walls[g[0]].1.support.dir;
        if g.iter().any(|&s| wedge(walls[s].1.support.dir, d0) != 0) {
            return Err(Error::Generality(format!("broken line from {y} passes through a singular point")));
        }
    }
    Ok(groups)
}

fn path_param(y: &Pt, v: V2, p: &Pt) -> Q {
    let (dx, dy) = p.minus(y);
    if v[0] != 0 {
        dx / q(v[0])
    } else {
        dy / q(v[1])
    }
}

/// Complete list of broken lines ending at `endpoint` for the given walls,
/// with final x-exponent bounded by `dmax`.
pub fn enumerate_in(walls: &[(usize, &Wall)], cfg: &RingConfig, endpoint: &Pt, dmax: u32) -> Result<Vec<BrokenLine>> {
    if let Some((id, _)) = walls.iter().find(|(_, w)| w.support.contains(endpoint)) {
        return Err(Error::Precondition(format!("endpoint {endpoint} lies on wall {id}")));
    }
    let cap = dmax.min(cfg.xcut);
    enumerate_bounded(walls, cfg, endpoint, [cap; 3])
}

/// Broken lines ending at `endpoint` whose final x-exponent is bounded by
/// `bound` componentwise.
pub fn enumerate_bounded(walls: &[(usize, &Wall)], cfg: &RingConfig, endpoint: &Pt, bound: [u32; 3]) -> Result<Vec<BrokenLine>> {
    enumerate_where(walls, cfg, endpoint, bound, &|_| true)
}

/// Like [`enumerate_bounded`], keeping only final x-exponents accepted by
/// `keep`. Rejected exponents are never searched.
pub fn enumerate_where(
    walls: &[(usize, &Wall)],
    cfg: &RingConfig,
    endpoint: &Pt,
    bound: [u32; 3],
    keep: &dyn Fn([u32; 3]) -> bool,
) -> Result<Vec<BrokenLine>> {
    if let Some((id, _)) = walls.iter().find(|(_, w)| w.support.contains(endpoint)) {
        return Err(Error::Precondition(format!("endpoint {endpoint} lies on wall {id}")));
    }
    let apx: Vec<(f64, f64)> = walls.iter().map(|(_, w)| w.support.base.approx()).collect();
    let mut out = Vec::new();
    for a in 0..=bound[0].min(cfg.xcut) {
        for b in 0..=bound[1].min(cfg.xcut) {
            for c in 0..=bound[2].min(cfg.xcut) {
                let w = [a, b, c];
                if p_of(w) == [0, 0] || !keep(w) {
                    continue;
                }
                let mut raw = Vec::new();
                collect(walls, &apx, endpoint, w, 0, &mut Vec::new(), &mut Vec::new(), &mut raw)?;
                for (ws, bends) in raw {
                    out.push(assemble(walls, cfg, endpoint, ws, bends));
                }
            }
        }
    }
    out.sort_by(|x, y| x.final_term().cmp(&y.final_term()).then_with(|| x.bends.len().cmp(&y.bends.len())));
    Ok(out)
}

fn bend_factor(walls: &[(usize, &Wall)], bend: &Bend, before: &Segment) -> Q {
    let mut f = Q::one();
    for id in &bend.walls {
        let wall = walls.iter().find(|(i, _)| i == id).expect("bent wall is active").1;
        let e = wedge(wall.support.dir, p_of(before.w)).abs();
        f *= q(e) * &wall.coeff;
    }
    f
}

/// Forward pass over a bend sequence found backward: `c_1 = 1` on the
/// incoming segment and each bend multiplies in its wall terms.
fn assemble(walls: &[(usize, &Wall)], cfg: &RingConfig, endpoint: &Pt, mut ws: Vec<[u32; 3]>, mut bends: Vec<Bend>) -> BrokenLine {
    ws.reverse();
    bends.reverse();
    let mut c = Q::one();
    let mut u = ExponentKey::one();
    let mut segs: Vec<Segment> = Vec::with_capacity(ws.len());
    for (i, w) in ws.into_iter().enumerate() {
        if i > 0 {
            let bend = &bends[i - 1];
            c *= bend_factor(walls, bend, &segs[i - 1]);
            for id in &bend.walls {
                let wall = walls.iter().find(|(j, _)| j == id).expect("bent wall is active").1;
                u = u.mul(&wall.term.u_only(), cfg).expect("disjointness checked during search");
            }
        }
        segs.push(Segment { w, coeff: c.clone(), u });
    }
    BrokenLine { endpoint: endpoint.clone(), segments: segs, bends, coeff: c }
}

/// Backward enumeration of bend sequences. `mask` holds the points already
/// used by bends closer to the endpoint.
#[allow(clippy::too_many_arguments)]
fn collect(
    all: &[(usize, &Wall)],
    all_apx: &[(f64, f64)],
    y: &Pt,
    w: [u32; 3],
    mask: u32,
    ws: &mut Vec<[u32; 3]>,
    bends: &mut Vec<Bend>,
    out: &mut Vec<(Vec<[u32; 3]>, Vec<Bend>)>,
) -> Result<()> {
    let walls = all;
    ws.push(w);
    if w.iter().sum::<u32>() == 1 {
        // w = t_i: the segment escapes unbent. Bending further back would
        // leave a zero exponent.
        out.push((ws.clone(), bends.clone()));
        ws.pop();
        return Ok(());
    }
    let v = p_of(w);
    // Only walls the line could still bend at matter here: the others act
    // trivially on every monomial this segment can carry.
    let slots: Vec<usize> = (0..walls.len())
        .filter(|&i| {
            let wall = walls[i].1;
            wall.umask() & mask == 0 && (0..3).all(|c| wall.term.x[c] <= w[c])
        })
        .collect();
    let live: Vec<(usize, &Wall)> = slots.iter().map(|&i| walls[i]).collect();
    let live_apx: Vec<(f64, f64)> = slots.iter().map(|&i| all_apx[i]).collect();
    let walls = &live[..];
    let groups = crossing_groups(walls, &live_apx, y, v)?;
    for (t, group) in &groups {
        // Collinear walls with overlapping supports can pile up at one point,
        // so admissible subsets are grown by a pruned search.
        let mut choices = Vec::new();
        subsets(walls, group, 0, mask, [0; 3], w, &mut Vec::new(), &mut choices);
        for (ids, used, m) in choices {
            let w_prev = [w[0] - m[0], w[1] - m[1], w[2] - m[2]];
            let pv = p_of(w_prev);
            if pv == [0, 0] || wedge(walls[group[0]].1.support.dir, pv) == 0 {
                continue;
            }
            let z = y.plus(v, t);
            bends.push(Bend { walls: ids, at: z });
            collect(all, all_apx, &z_of(bends), w_prev, used, ws, bends, out)?;
            bends.pop();
        }
    }
    ws.pop();
    Ok(())
}

/// Nonempty subsets of `group` with pairwise disjoint u-supports, disjoint
/// from `used`, whose x-exponents sum to at most `w`.
#[allow(clippy::too_many_arguments)]
fn subsets(
    walls: &[(usize, &Wall)],
    group: &[usize],
    from: usize,
    used: u32,
    m: [u32; 3],
    w: [u32; 3],
    ids: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, u32, [u32; 3])>,
) {
    for i in from..group.len() {
        let (id, wall) = walls[group[i]];
        let m2 = [m[0] + wall.term.x[0], m[1] + wall.term.x[1], m[2] + wall.term.x[2]];
        if wall.umask() & used != 0 || (0..3).any(|c| m2[c] > w[c]) {
            continue;
        }
        ids.push(id);
        out.push((ids.clone(), used | wall.umask(), m2));
        subsets(walls, group, i + 1, used | wall.umask(), m2, w, ids, out);
        ids.pop();
    }
}

fn z_of(bends: &[Bend]) -> Pt {
    bends.last().expect("just pushed").at.clone()
}

/// Broken lines of a diagram ending at `endpoint`. With `exclude = Some(l)`
/// every wall whose coefficient involves the point `l` is ignored, which in
/// particular removes all walls based at `P_l`.
pub fn enumerate_broken_lines(d: &ScatteringDiagram, endpoint: &Pt, exclude: Option<usize>) -> Result<Vec<BrokenLine>> {
    let mask = exclude.map_or(0, |l| 1u32 << (l - 1));
    enumerate_in(&d.walls_avoiding(mask), &d.cfg, endpoint, d.dmax)
}

/// Sum of the final monomials of `lines`.
pub fn sum_monomials(cfg: RingConfig, lines: &[BrokenLine]) -> Series {
    let mut s = Series::zero(cfg);
    for b in lines {
        s.add_term(b.final_term(), b.coeff.clone());
    }
    s
}

/// `W_{k,0}` at `x`.
pub fn potential_w_k0(d: &ScatteringDiagram, x: &Pt) -> Result<Series> {
    Ok(sum_monomials(d.cfg, &enumerate_broken_lines(d, x, None)?))
}

/// `W_{k,m̄} = y_{0,0} + T̂(W_{k,0})`, over the ring with `y_{0,0}` kept to
/// order `mbar`.
pub fn potential_w_kmbar(d: &ScatteringDiagram, x: &Pt, mbar: u32) -> Result<Series> {
    let cfg = RingConfig { mbar, ..d.cfg };
    let w0 = potential_w_k0(d, x)?.reconfigure(cfg);
    Ok(Series::y0(cfg) + w0.that_operator())
}

/// A semirigid disk read off from a broken line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemirigidDiskRecord {
    pub endpoint: Pt,
    pub coeff: Q,
    pub term: ExponentKey,
    pub direction: V2,
    pub u_support: Vec<usize>,
    pub degree: u32,
}

impl SemirigidDiskRecord {
    /// `|Δ| - |r|`, which is 1 for every semirigid disk.
    pub fn flexibility(&self) -> i64 {
        self.degree as i64 - self.term.r_norm() as i64
    }
}

pub fn semirigid_disks_at(d: &ScatteringDiagram, x: &Pt, exclude: Option<usize>) -> Result<Vec<SemirigidDiskRecord>> {
    Ok(enumerate_broken_lines(d, x, exclude)?
        .into_iter()
        .map(|b| {
            let term = b.final_term();
            SemirigidDiskRecord {
                endpoint: x.clone(),
                coeff: b.coeff.clone(),
                direction: b.direction(),
                u_support: term.u_pairs().into_iter().map(|(i, _)| i).collect(),
                degree: term.x_degree(),
                term,
            }
        })
        .collect())
}

/// `exp((W_{k,0}(x) - W_basic)/ħ)`.
pub fn exp_potential_triples(d: &ScatteringDiagram, x: &Pt, exclude: Option<usize>) -> Result<Series> {
    let lines = enumerate_broken_lines(d, x, exclude)?;
    let bent: Vec<BrokenLine> = lines.into_iter().filter(|b| !b.is_pure()).collect();
    sum_monomials(d.cfg, &bent).exp_truncated(-1)
}

/// `e^{W_{k,m̄}/ħ} = T̂(e^{(y_{0,0}+W_{k,0})/ħ})` at `x`, compared
/// coefficientwise. Both sides share the factor `e^{W_basic/ħ}`, which `T̂`
/// fixes, so it is divided out before exponentiating.
pub fn exp_identity_holds(d: &ScatteringDiagram, x: &Pt, mbar: u32) -> Result<bool> {
    let cfg = RingConfig { mbar, ..d.cfg };
    let bent = (potential_w_k0(d, x)?.reconfigure(cfg)) - Series::w_basic(cfg);
    let y = Series::y0(cfg);
    let lhs = (y.clone() + bent.that_operator()).exp_truncated(-1)?;
    let rhs = (y + bent).exp_truncated(-1)?.that_operator();
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Arrangement;
    use crate::rational::qf;
    use crate::scattering::build_diagram;

    #[test]
    fn empty_diagram_has_three_lines() {
        let a = Arrangement::new(Pt::int(0, 0), vec![]).unwrap();
        let d = build_diagram(&a, 2).unwrap();
        let lines = enumerate_broken_lines(&d, &a.q, None).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(potential_w_k0(&d, &a.q).unwrap(), Series::w_basic(d.cfg));
    }

    #[test]
    fn one_point_example() {
        let a = Arrangement::new(Pt::new(qf(0, 1), qf(1, 3)), vec![Pt::int(1, 1)]).unwrap();
        let d = build_diagram(&a, 2).unwrap();
        let lines = enumerate_broken_lines(&d, &a.q, None).unwrap();
        assert_eq!(lines.len(), 4);
        let cfg = d.cfg;
        let u = Series::u(cfg, 1, 0).unwrap();
        let expect = Series::w_basic(cfg) + u.clone() * Series::x(cfg, 1) * Series::x(cfg, 2);
        assert_eq!(potential_w_k0(&d, &a.q).unwrap(), expect);
        let bent: Vec<_> = lines.iter().filter(|b| !b.is_pure()).collect();
        assert_eq!(bent[0].direction(), [-1, -1]);
        let disks = semirigid_disks_at(&d, &a.q, None).unwrap();
        assert!(disks.iter().all(|r| r.flexibility() == 1));
        assert_eq!(enumerate_broken_lines(&d, a.point(1), Some(1)).unwrap().len(), 3);
        let e = exp_potential_triples(&d, &a.q, None).unwrap();
        assert_eq!(e, Series::one(cfg) + (u * Series::x(cfg, 1) * Series::x(cfg, 2)).shift_hbar(-1));
        let w1 = potential_w_kmbar(&d, &a.q, 1).unwrap();
        let c1 = *w1.config();
        // With one point the ring has no order-1 generator, so T̂ acts trivially.
        assert_eq!(w1, Series::y0(c1) + expect.reconfigure(c1));
        for mbar in 0..=2 {
            assert!(exp_identity_holds(&d, &a.q, mbar).unwrap());
        }
        assert_eq!(w1.u_to_zero(), Series::y0(c1) + Series::w_basic(c1));
    }

    #[test]
    fn exp_identity_two_points() {
        let a = Arrangement::new(Pt::new(qf(1, 7), qf(2, 5)), vec![Pt::int(1, 1), Pt::new(qf(-3, 2), qf(5, 4))]).unwrap();
        let d = build_diagram(&a, 2).unwrap();
        for mbar in 0..=2 {
            assert!(exp_identity_holds(&d, &a.q, mbar).unwrap());
        }
    }
}

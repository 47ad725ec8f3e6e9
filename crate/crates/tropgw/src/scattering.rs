//! Descendent scattering diagrams: walls, their construction from rigid
//! trees, wall-crossing automorphisms and the consistency check.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::brokenlines::{self, BrokenLine};
use crate::coeffring::{ExponentKey, RingConfig, Series};
use crate::error::{Error, Result};
use crate::geometry::{
    self, cell_of, intersect, may_intersect, lattice_index, line_params, neg, p_of, primitive, wedge, Arrangement, Cell, Pt,
    Ray, FAN, V2,
};
use crate::rational::{factorial, fmt_q, q, qf, Q};

/// A ray (or line) carrying the function `1 + c·z^m`.
///
/// `term` holds the u-part and the x-exponent `m`; `coeff` is the rational
/// multiplier, so the nontrivial term is `coeff · term`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub support: Ray,
    pub weight: i64,
    pub coeff: Q,
    pub term: ExponentKey,
    /// `Some(l)` when the wall is based at the marked point `P_l`.
    pub marked_origin: Option<usize>,
    /// Indices of the two walls whose crossing produced this one.
    pub parents: Option<(usize, usize)>,
}

impl Wall {
    /// Build the wall `1 + coeff·term` based at `base`, with direction
    /// `−p(m)` and weight the lattice index of `p(m)`.
    pub fn from_term(base: Pt, coeff: Q, term: ExponentKey) -> Result<Wall> {
        let pm = p_of(term.x);
        if pm == [0, 0] {
            return Err(Error::Precondition("wall exponent has p(m) = 0".into()));
        }
        if term.is_u_free() {
            return Err(Error::Precondition("wall coefficient must be nilpotent".into()));
        }
        Ok(Wall {
            support: Ray::new(base, primitive(neg(pm))),
            weight: lattice_index(pm),
            coeff,
            term,
            marked_origin: None,
            parents: None,
        })
    }

    pub fn m(&self) -> [u32; 3] {
        self.term.x
    }

    /// `f_𝔡` as a series.
    pub fn func(&self, cfg: RingConfig) -> Series {
        Series::one(cfg) + Series::monomial(cfg, self.term, self.coeff.clone())
    }

    pub fn ucount(&self) -> u32 {
        self.term.ucount()
    }

    pub fn umask(&self) -> u32 {
        self.term.umask()
    }

    fn to_json(&self, id: usize, cfg: RingConfig) -> serde_json::Value {
        json!({
            "id": id,
            "base": self.support.base.to_strings(),
            "direction": self.support.dir,
            "is_line": self.support.is_line,
            "weight": self.weight,
            "func": self.func(cfg).to_json(),
            "marked_origin": self.marked_origin,
            "parents": self.parents.map(|(a, b)| [a, b]),
        })
    }
}

/// The three walls based at `P_l` with functions `1 + u_{l,0} x_i`.
pub fn initial_rays(a: &Arrangement) -> Vec<Wall> {
    let mut out = Vec::new();
    for l in 1..=a.k() {
        for i in 0..3 {
            let mut e = [0; 3];
            e[i] = 1;
            let term = ExponentKey::x(e).with_u(l, 0).expect("fresh key");
            let mut w = Wall::from_term(a.point(l).clone(), Q::one(), term).expect("initial ray");
            w.marked_origin = Some(l);
            out.push(w);
        }
    }
    out
}

/// The child wall at a transverse crossing `x` of `w1` and `w2`, making the
/// loop around `x` trivial to first order in `c_1 c_2`.
///
/// With `m_i = w_i·prim_i` and child weight `w`, the coefficient is
/// `w·|prim_1 ∧ prim_2|·c_1 c_2`.
pub fn scatter_unmarked(w1: &Wall, w2: &Wall, x: &Pt, cfg: &RingConfig) -> Result<Option<Wall>> {
    if !(w1.support.contains_in_interior(x) && w2.support.contains_in_interior(x)) {
        return Err(Error::Precondition("point is not an interior crossing of both walls".into()));
    }
    let det = wedge(w1.support.dir, w2.support.dir);
    if det == 0 {
        return Ok(None);
    }
    let Some(term) = w1.term.mul(&w2.term, cfg) else { return Ok(None) };
    let pm = p_of(term.x);
    if pm == [0, 0] {
        return Ok(None);
    }
    let weight = lattice_index(pm);
    let coeff = q(weight * det.abs()) * &w1.coeff * &w2.coeff;
    let mut child = Wall::from_term(x.clone(), coeff, term)?;
    child.weight = weight;
    Ok(Some(child))
}

/// A disk record used for gluing at a marked point: its coefficient, its
/// u-part and x-exponent `Δ`.
#[derive(Clone, Debug)]
pub struct DiskMono {
    pub coeff: Q,
    pub term: ExponentKey,
}

/// The wall at `P_l` obtained by joining `disks` and `M_i` pure rays in
/// direction `m_i` at `P_l`.
pub fn glue_at_marked(
    a: &Arrangement,
    l: usize,
    disks: &[DiskMono],
    pure: [u32; 3],
    cfg: &RingConfig,
) -> Result<Option<Wall>> {
    let n = disks.len() as u32 + pure.iter().sum::<u32>();
    if n == 0 {
        return Err(Error::Precondition("gluing needs at least one disk".into()));
    }
    let mut mask = 1u32 << (l - 1);
    for d in disks {
        if d.term.umask() & mask != 0 {
            return Err(Error::Precondition("disks at a marked point must have disjoint supports".into()));
        }
        mask |= d.term.umask();
    }
    if (n as usize) > cfg.orders {
        return Ok(None);
    }
    let mut term = ExponentKey::x(pure).with_u(l, n as usize - 1)?;
    if !term.fits(cfg) {
        return Ok(None);
    }
    let mut coeff = Q::one() / (factorial(pure[0] as u64) * factorial(pure[1] as u64) * factorial(pure[2] as u64));
    for d in disks {
        match term.mul(&d.term, cfg) {
            Some(t) => term = t,
            None => return Ok(None),
        }
        coeff *= &d.coeff;
    }
    let pm = p_of(term.x);
    if pm == [0, 0] {
        return Ok(None);
    }
    coeff *= q(lattice_index(pm));
    let mut w = Wall::from_term(a.point(l).clone(), coeff, term)?;
    w.marked_origin = Some(l);
    Ok(Some(w))
}

/// A finite scattering diagram over an arrangement, with its truncation.
#[derive(Clone, Debug)]
pub struct ScatteringDiagram {
    pub arrangement: Arrangement,
    pub dmax: u32,
    pub cfg: RingConfig,
    pub walls: Vec<Wall>,
}

impl ScatteringDiagram {
    pub fn empty(a: &Arrangement, dmax: u32, orders: usize) -> Self {
        let cfg = RingConfig::new(a.k(), 0, dmax).with_orders(orders);
        ScatteringDiagram { arrangement: a.clone(), dmax, cfg, walls: Vec::new() }
    }

    /// Walls whose u-support avoids `mask`, with their indices.
    pub fn walls_avoiding(&self, mask: u32) -> Vec<(usize, &Wall)> {
        self.walls.iter().enumerate().filter(|(_, w)| w.umask() & mask == 0).collect()
    }

    pub fn all_walls(&self) -> Vec<(usize, &Wall)> {
        self.walls.iter().enumerate().collect()
    }

    /// Transverse interior crossings of pairs of walls, grouped by point.
    pub fn crossings(&self) -> BTreeMap<Pt, Vec<(usize, usize)>> {
        let mut out: BTreeMap<Pt, Vec<(usize, usize)>> = BTreeMap::new();
        let approx: Vec<(f64, f64)> = self.walls.iter().map(|w| w.support.base.approx()).collect();
        for i in 0..self.walls.len() {
            for j in 0..i {
                let (a, b) = (&self.walls[i].support, &self.walls[j].support);
                if !may_intersect(a, approx[i], b, approx[j]) {
                    continue;
                }
                if let Some(x) = intersect(a, b) {
                    out.entry(x).or_default().push((j, i));
                }
            }
        }
        out
    }

    /// `Sing(𝔇)`: wall base points together with transverse crossings.
    pub fn singular_points(&self) -> Vec<Pt> {
        let mut pts: Vec<Pt> = self.crossings().into_keys().collect();
        pts.extend(self.walls.iter().map(|w| w.support.base.clone()));
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn is_marked(&self, x: &Pt) -> bool {
        self.arrangement.p.iter().any(|p| p == x)
    }

    pub fn on_support(&self, x: &Pt) -> bool {
        self.walls.iter().any(|w| w.support.contains(x))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "arrangement": self.arrangement.to_json(),
            "dmax": self.dmax,
            "orders": self.cfg.orders,
            "walls": self.walls.iter().enumerate().map(|(i, w)| w.to_json(i, self.cfg)).collect::<Vec<_>>(),
            "singular_points": self.singular_points().iter().map(Pt::to_strings).collect::<Vec<_>>(),
        })
    }

    /// Remove one wall (used for fault injection in tests).
    pub fn without_wall(&self, idx: usize) -> Self {
        let mut d = self.clone();
        d.walls.remove(idx);
        for w in &mut d.walls {
            w.parents = None;
        }
        d
    }
}

/// All pure-ray counts `(M_0, M_1, M_2)` with at most `max_n` rays in total
/// and each count at most `cap`.
fn pure_counts(max_n: u32, cap: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=cap.min(max_n) {
        for b in 0..=cap.min(max_n - a) {
            for c in 0..=cap.min(max_n - a - b) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Walls at `P_l` whose joined disks have total u-count exactly `g_disks`.
fn marked_walls_round(
    diagram: &ScatteringDiagram,
    l: usize,
    g_disks: u32,
) -> Result<Vec<Wall>> {
    let cfg = diagram.cfg;
    let a = &diagram.arrangement;
    let mut out = Vec::new();
    let max_n = cfg.orders as u32;
    if g_disks == 0 {
        for m in pure_counts(max_n, diagram.dmax) {
            if m.iter().sum::<u32>() == 0 {
                continue;
            }
            if let Some(w) = glue_at_marked(a, l, &[], m, &cfg)? {
                out.push(w);
            }
        }
        return Ok(out);
    }
    // A disk in a joined set carries at most g_disks u-factors, so heavier
    // walls cannot appear on it.
    let walls: Vec<(usize, &Wall)> =
        diagram.walls_avoiding(1 << (l - 1)).into_iter().filter(|(_, w)| w.ucount() <= g_disks).collect();
    // Every wall has x-degree equal to the |r| of its u-part, so a disk
    // carrying u-count c has x-degree between c + 1 and orders·c + 1.
    let lo = if max_n == 1 { g_disks + 1 } else { 2 };
    let hi = max_n * g_disks + 1;
    let cap = diagram.dmax.min(cfg.xcut);
    let keep = |w: [u32; 3]| (lo..=hi).contains(&w.iter().sum::<u32>());
    let lines = brokenlines::enumerate_where(&walls, &cfg, a.point(l), [cap; 3], &keep).map_err(|e| match e {
        Error::Precondition(s) => Error::Generality(format!("P{l}: {s}")),
        e => e,
    })?;
    let disks: Vec<DiskMono> = lines
        .iter()
        .filter(|b| !b.is_pure())
        .map(|b| DiskMono { coeff: b.coeff.clone(), term: b.final_term() })
        .collect();
    // Subsets of non-pure disks with disjoint supports and total u-count g_disks.
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        disks: &[DiskMono],
        start: usize,
        mask: u32,
        remaining: u32,
        max_len: usize,
        chosen: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if remaining == 0 {
            return emit(chosen);
        }
        if chosen.len() == max_len {
            return Ok(());
        }
        for i in start..disks.len() {
            let dm = disks[i].term.umask();
            let c = dm.count_ones();
            if dm & mask != 0 || c > remaining {
                continue;
            }
            chosen.push(i);
            rec(disks, i + 1, mask | dm, remaining - c, max_len, chosen, emit)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut emit = |idx: &[usize]| -> Result<()> {
        let set: Vec<DiskMono> = idx.iter().map(|&i| disks[i].clone()).collect();
        let used = set.len() as u32;
        if used > max_n {
            return Ok(());
        }
        for m in pure_counts(max_n - used, diagram.dmax) {
            if let Some(w) = glue_at_marked(a, l, &set, m, &cfg)? {
                out.push(w);
            }
        }
        Ok(())
    };
    rec(&disks, 0, 1 << (l - 1), g_disks, max_n as usize, &mut chosen, &mut emit)?;
    Ok(out)
}

/// Build `𝔇(A)_{k,0}` up to the x-exponent cutoff `dmax`, by rounds of total
/// u-count. `orders` bounds the descendent order at each point (normally `k`).
pub fn build_diagram_with_orders(a: &Arrangement, dmax: u32, orders: usize) -> Result<ScatteringDiagram> {
    let mut diagram = ScatteringDiagram::empty(a, dmax, orders);
    diagram.cfg.check()?;
    let k = a.k() as u32;
    for g in 1..=k {
        let mut fresh = Vec::new();
        let approx: Vec<(f64, f64)> = diagram.walls.iter().map(|w| w.support.base.approx()).collect();
        // Children at unmarked crossings of lower-count walls.
        for i in 0..diagram.walls.len() {
            for j in 0..i {
                let (wi, wj) = (&diagram.walls[i], &diagram.walls[j]);
                if wi.ucount() + wj.ucount() != g || wi.umask() & wj.umask() != 0 {
                    continue;
                }
                if !may_intersect(&wi.support, approx[i], &wj.support, approx[j]) {
                    continue;
                }
                let Some(x) = intersect(&wi.support, &wj.support) else { continue };
                if diagram.is_marked(&x) {
                    return Err(Error::Generality(format!("walls {j} and {i} cross at a marked point {x}")));
                }
                if let Some(mut child) = scatter_unmarked(wj, wi, &x, &diagram.cfg)? {
                    child.parents = Some((j, i));
                    fresh.push(child);
                }
            }
        }
        let t_marked = std::time::Instant::now();
        // Walls at marked points from joined disks of total count g - 1.
        for l in 1..=a.k() {
            fresh.extend(marked_walls_round(&diagram, l, g - 1)?);
        }
        if std::env::var_os("TROPGW_TRACE").is_some() {
            eprintln!("round {g}: +{} walls, marked points {:?}", fresh.len(), t_marked.elapsed());
        }
        diagram.walls.extend(fresh);
    }
    Ok(diagram)
}

pub fn build_diagram(a: &Arrangement, dmax: u32) -> Result<ScatteringDiagram> {
    build_diagram_with_orders(a, dmax, a.k())
}

/// One wall crossing along a path, with the sign-normalized exponent pairing.
fn crossing_automorphism(w: &Wall, travel: V2, arg: &Series) -> Series {
    // n annihilates the wall direction and pairs negatively with the travel
    // direction: ⟨n, v⟩ = -(dir ∧ v) for n = (dir_y, -dir_x).
    let d = w.support.dir;
    let mut n = [d[1], -d[0]];
    if n[0] * travel[0] + n[1] * travel[1] > 0 {
        n = neg(n);
    }
    let cfg = *arg.config();
    let mut out = Series::zero(cfg);
    for (k, c) in arg.terms() {
        let pw = p_of(k.x);
        let e = n[0] * pw[0] + n[1] * pw[1];
        out.add_term(*k, c.clone());
        if e != 0 {
            if let Some(k2) = k.mul(&w.term, &cfg) {
                out.add_term(k2, c * &w.coeff * q(e));
            }
        }
    }
    out
}

/// `θ_{ξ,𝔇}` for a polygonal path: per-wall automorphisms composed in
/// crossing order.
pub fn path_automorphism(d: &ScatteringDiagram, path: &[Pt], arg: &Series) -> Result<Series> {
    let walls: Vec<&Wall> = d.walls.iter().collect();
    path_automorphism_in(&walls, path, arg)
}

pub fn path_automorphism_in(walls: &[&Wall], path: &[Pt], arg: &Series) -> Result<Series> {
    let mut cur = arg.clone();
    for (i, travel) in path_crossings(walls, path)? {
        cur = crossing_automorphism(walls[i], travel, &cur);
    }
    Ok(cur)
}

/// Walls crossed by a polygonal path, in crossing order, with the integer
/// travel direction at each crossing.
pub fn path_crossings(walls: &[&Wall], path: &[Pt]) -> Result<Vec<(usize, V2)>> {
    for p in [path.first(), path.last()].into_iter().flatten() {
        if walls.iter().any(|w| w.support.contains(p)) {
            return Err(Error::Precondition(format!("path endpoint {p} lies on a wall")));
        }
    }
    let approx: Vec<(f64, f64)> = walls.iter().map(|w| w.support.base.approx()).collect();
    let mut out = Vec::new();
    for seg in path.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let (dx, dy) = b.minus(a);
        // Scale the segment to an integer travel vector.
        let den = dx.denom() * dy.denom() / num_integer::gcd(dx.denom().clone(), dy.denom().clone());
        let vx = (&dx * Q::from_integer(den.clone())).to_integer();
        let vy = (&dy * Q::from_integer(den.clone())).to_integer();
        let travel: V2 = [
            num_traits::ToPrimitive::to_i64(&vx).ok_or_else(|| Error::Precondition("path too large".into()))?,
            num_traits::ToPrimitive::to_i64(&vy).ok_or_else(|| Error::Precondition("path too large".into()))?,
        ];
        if travel == [0, 0] {
            continue;
        }
        let (pa, pb) = (a.approx(), b.approx());
        let seg_ray = Ray { base: a.clone(), dir: travel, is_line: true };
        // t is measured in units of the integer travel vector; the segment
        // ends at t = 1/den.
        let t_end = Q::new(num_bigint::BigInt::one(), den.clone());
        let mut hits: Vec<(Q, usize)> = Vec::new();
        for (i, w) in walls.iter().enumerate() {
            if wedge(w.support.dir, travel) == 0 {
                if w.support.same_line(&seg_ray) {
                    return Err(Error::Precondition("path runs along a wall".into()));
                }
                continue;
            }
            if !segment_may_cross(&w.support, approx[i], pa, pb) {
                continue;
            }
            let (t, s) = line_params(&seg_ray, &w.support).expect("not parallel");
            if !t.is_positive() || t > t_end {
                continue;
            }
            if t == t_end {
                return Err(Error::Precondition("path vertex lies on a wall".into()));
            }
            if s.is_negative() && !w.support.is_line {
                continue;
            }
            if s.is_zero() && !w.support.is_line {
                return Err(Error::Precondition("path passes through a wall endpoint".into()));
            }
            hits.push((t, i));
        }
        hits.sort_by(|x, y| x.0.cmp(&y.0));
        for pair in hits.windows(2) {
            if pair[0].0 == pair[1].0 && wedge(walls[pair[0].1].support.dir, walls[pair[1].1].support.dir) != 0 {
                return Err(Error::Precondition("path passes through a singular point".into()));
            }
        }
        out.extend(hits.into_iter().map(|(_, i)| (i, travel)));
    }
    Ok(out)
}

/// f64 test that is false only when the segment clearly misses the wall.
fn segment_may_cross(w: &Ray, base: (f64, f64), pa: (f64, f64), pb: (f64, f64)) -> bool {
    let (vx, vy) = (pb.0 - pa.0, pb.1 - pa.1);
    let (dx, dy) = (w.dir[0] as f64, w.dir[1] as f64);
    let det = vx * dy - vy * dx;
    if det.abs() < 1e-300 {
        return true;
    }
    let (wx, wy) = (base.0 - pa.0, base.1 - pa.1);
    let t = (wx * dy - wy * dx) / det;
    let s = (wx * vy - wy * vx) / det;
    const EPS: f64 = 1e-9;
    t > -EPS && t < 1.0 + EPS && (w.is_line || s > -EPS)
}

/// A small polygon around `x` that avoids every other point of `others` and
/// does not meet any wall at its vertices.
pub fn small_loop(d: &ScatteringDiagram, x: &Pt, others: &[Pt]) -> Result<Vec<Pt>> {
    let mut r = qf(1, 4);
    for z in others.iter().chain(d.arrangement.p.iter()).chain(std::iter::once(&d.arrangement.q)) {
        if z == x {
            continue;
        }
        let (dx, dy) = z.minus(x);
        let dist = if dx.abs() > dy.abs() { dx.abs() } else { dy.abs() };
        let cand = dist / q(16);
        if cand < r {
            r = cand;
        }
    }
    let shapes: [[V2; 4]; 3] =
        [[[3, 1], [-1, 3], [-3, -1], [1, -3]], [[5, 2], [-2, 5], [-5, -2], [2, -5]], [[7, 3], [-3, 7], [-7, -3], [3, -7]]];
    'shape: for shape in shapes {
        let mut pts: Vec<Pt> = shape.iter().map(|v| x.plus(*v, &r)).collect();
        for p in &pts {
            if d.on_support(p) {
                continue 'shape;
            }
        }
        pts.push(pts[0].clone());
        return Ok(pts);
    }
    Err(Error::Generality(format!("no clean loop around {x}")))
}

fn loop_is_identity(d: &ScatteringDiagram, x: &Pt, others: &[Pt]) -> Result<bool> {
    if d.is_marked(x) || &d.arrangement.q == x {
        return Err(Error::Precondition(format!("{x} is a point of the arrangement")));
    }
    let path = small_loop(d, x, others)?;
    let walls: Vec<&Wall> = d.walls.iter().collect();
    let hits = path_crossings(&walls, &path)?;
    for i in 0..3 {
        let xi = Series::x(d.cfg, i);
        let mut cur = xi.clone();
        for &(w, travel) in &hits {
            cur = crossing_automorphism(walls[w], travel, &cur);
        }
        if cur != xi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the loop automorphism around the unmarked point `x` fixes
/// `x_0, x_1, x_2`.
pub fn check_loop_identity(d: &ScatteringDiagram, x: &Pt) -> Result<bool> {
    loop_is_identity(d, x, &d.singular_points())
}

/// Loop check at every unmarked singular point, in sorted order.
pub fn check_all_loops(d: &ScatteringDiagram) -> Result<Vec<(Pt, bool)>> {
    let sing = d.singular_points();
    let mut out = Vec::new();
    for x in sing.iter().filter(|x| !d.is_marked(x)) {
        out.push((x.clone(), loop_is_identity(d, x, &sing)?));
    }
    Ok(out)
}

/// Outcome of [`generality_check`].
#[derive(Clone, Debug, Default)]
pub struct GeneralityReport {
    pub general: bool,
    pub violations: Vec<String>,
}

/// Certify the arrangement against the probe diagram at cutoff `dmax`.
///
/// Checked predicates:
/// (a) no marked point lies on a wall based elsewhere;
/// (b) no crossing point sees three walls on distinct lines with pairwise
///     disjoint u-supports, crossings are unmarked, and a crossing is the base
///     only of children of walls through it;
/// (c) `Q` avoids all walls, the rays of `Q + Σ` meet walls only transversally
///     at distinct non-singular points, and every marked or singular point
///     lies in an open sector of `Q + Σ`;
/// (d) no two walls with different bases and disjoint u-supports overlap
/// along a segment.
///
/// A deeper probe then runs every local enumeration the invariants need.
pub fn generality_check(a: &Arrangement, dmax: u32) -> GeneralityReport {
    generality_check_with_orders(a, dmax, a.k())
}

/// [`generality_check`] against a probe diagram whose descendent orders are
/// capped at `orders`, enough for invariants with ψ-orders below `orders`.
pub fn generality_check_with_orders(a: &Arrangement, dmax: u32, orders: usize) -> GeneralityReport {
    let mut v = Vec::new();
    let d = match build_diagram_with_orders(a, dmax, orders) {
        Ok(d) => d,
        Err(e) => {
            return GeneralityReport { general: false, violations: vec![format!("probe build: {e}")] };
        }
    };
    check_predicates(&d, &mut v);
    if v.is_empty() {
        if let Err(e) = crate::invariants::probe_local_data(&d) {
            v.push(format!("local probe: {e}"));
        }
    }
    GeneralityReport { general: v.is_empty(), violations: v }
}

fn interacting_triple(d: &ScatteringDiagram, ids: &[usize]) -> bool {
    let w = |i: usize| &d.walls[ids[i]];
    for a in 0..ids.len() {
        for b in 0..a {
            if w(a).umask() & w(b).umask() != 0 || w(a).support.same_line(&w(b).support) {
                continue;
            }
            for c in 0..b {
                let (wa, wb, wc) = (w(a), w(b), w(c));
                if wc.umask() & (wa.umask() | wb.umask()) == 0
                    && !wc.support.same_line(&wa.support)
                    && !wc.support.same_line(&wb.support)
                {
                    return true;
                }
            }
        }
    }
    false
}

fn check_predicates(d: &ScatteringDiagram, v: &mut Vec<String>) {
    let a = &d.arrangement;
    // (a)
    for (l, p) in a.p.iter().enumerate() {
        for (i, w) in d.walls.iter().enumerate() {
            if &w.support.base != p && w.support.contains(p) {
                v.push(format!("(a) P{} lies on wall {i}", l + 1));
            }
        }
    }
    // (b) Every wall through a crossing point in its interior meets one of
    // the other walls there transversally, so the crossing map already lists
    // all of them.
    let cross = d.crossings();
    let mut based: BTreeMap<&Pt, Vec<usize>> = BTreeMap::new();
    for (i, w) in d.walls.iter().enumerate() {
        based.entry(&w.support.base).or_default().push(i);
    }
    for (x, pairs) in &cross {
        if d.is_marked(x) {
            v.push(format!("(b) crossing at marked point {x}"));
        }
        // Three lines through one point only matter when walls on them can
        // interact, i.e. their u-supports are pairwise disjoint; otherwise
        // every product term through the point vanishes.
        let mut ids: Vec<usize> = pairs.iter().flat_map(|&(a1, a2)| [a1, a2]).collect();
        ids.sort_unstable();
        ids.dedup();
        if interacting_triple(d, &ids) {
            v.push(format!("(b) three interacting wall lines meet at {x}"));
        }
        for &i in based.get(x).map(|b| b.as_slice()).unwrap_or(&[]) {
            let ok = match d.walls[i].parents {
                Some((p1, p2)) => pairs.iter().any(|&(a1, a2)| (a1, a2) == (p1, p2) || (a2, a1) == (p1, p2)),
                None => false,
            };
            if !ok {
                v.push(format!("(b) wall {i} starts at an unrelated crossing {x}"));
            }
        }
    }
    // (c)
    let qpt = &a.q;
    if d.on_support(qpt) {
        v.push("(c) Q lies on a wall".into());
    }
    for (l, p) in a.p.iter().enumerate() {
        if !matches!(cell_of(qpt, p), Cell::Sector(_)) {
            v.push(format!("(c) P{} lies on the skeleton of Q", l + 1));
        }
    }
    let mut sing: Vec<&Pt> = cross.keys().chain(based.keys().copied()).collect();
    sing.sort();
    sing.dedup();
    for x in sing {
        if !matches!(cell_of(qpt, x), Cell::Sector(_)) {
            v.push(format!("(c) singular point {x} lies on the skeleton of Q"));
        }
    }
    for i in 0..3 {
        let ray = Ray::new(qpt.clone(), FAN[i]);
        let mut hits: Vec<(Pt, &Ray)> = Vec::new();
        for w in &d.walls {
            if wedge(w.support.dir, ray.dir) == 0 {
                if w.support.same_line(&ray) {
                    v.push(format!("(c) a wall runs along the ray rho{i} of Q"));
                }
                continue;
            }
            if let Some(x) = intersect(&ray, &w.support) {
                hits.push((x, &w.support));
            } else if let Some((s, t)) = line_params(&ray, &w.support) {
                if s.is_positive() && t.is_zero() {
                    v.push(format!("(c) a wall base lies on rho{i}"));
                }
            }
        }
        for x in 0..hits.len() {
            for y in 0..x {
                if hits[x].0 == hits[y].0 && !hits[x].1.same_line(hits[y].1) {
                    v.push(format!("(c) two walls cross rho{i} at the same point"));
                }
            }
        }
    }
    // (d)
    for i in 0..d.walls.len() {
        for j in 0..i {
            let (s1, s2) = (&d.walls[i].support, &d.walls[j].support);
            let independent = d.walls[i].umask() & d.walls[j].umask() == 0;
            if independent && s1.base != s2.base && s1.same_line(s2) {
                let overlap = s1.contains_in_interior(&s2.base)
                    || s2.contains_in_interior(&s1.base)
                    || s1.dir == s2.dir;
                if overlap {
                    v.push(format!("(d) walls {j} and {i} overlap along a segment"));
                }
            }
        }
    }
    v.sort();
    v.dedup();
}

/// Human-readable summary of a diagram, one wall per line.
pub fn describe(d: &ScatteringDiagram) -> String {
    let mut s = String::new();
    for (i, w) in d.walls.iter().enumerate() {
        s.push_str(&format!(
            "{i:4}  base {}  dir ({},{})  w={}  1 + {}\n",
            w.support.base,
            w.support.dir[0],
            w.support.dir[1],
            w.weight,
            Series::monomial(d.cfg, w.term, w.coeff.clone())
        ));
    }
    let _ = fmt_q;
    let _ = geometry::FAN;
    s
}

/// Broken lines of a diagram at a point, excluding walls that meet `mask`.
pub fn broken_lines_avoiding(d: &ScatteringDiagram, x: &Pt, mask: u32) -> Result<Vec<BrokenLine>> {
    brokenlines::enumerate_in(&d.walls_avoiding(mask), &d.cfg, x, d.dmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_arrangement, SampleBox};

    fn arr(q: Pt, p: Vec<Pt>) -> Arrangement {
        Arrangement::new(q, p).unwrap()
    }

    #[test]
    fn initial_rays_k1() {
        let a = arr(Pt::new(qf(0, 1), qf(1, 3)), vec![Pt::int(1, 1)]);
        let rays = initial_rays(&a);
        assert_eq!(rays.len(), 3);
        let dirs: Vec<V2> = rays.iter().map(|w| w.support.dir).collect();
        assert_eq!(dirs, vec![[1, 1], [-1, 0], [0, -1]]);
        assert!(rays.iter().all(|w| w.weight == 1 && w.coeff == Q::one()));
        assert!(initial_rays(&arr(Pt::int(0, 0), vec![])).is_empty());
    }

    #[test]
    fn unmarked_child_example() {
        let cfg = RingConfig::new(2, 0, 3);
        let a = arr(Pt::int(9, 9), vec![Pt::int(0, 2), Pt::int(2, 0)]);
        let rays = initial_rays(&a);
        // 1 + u_{1,0} x_2 pointing down from P1, 1 + u_{2,0} x_1 pointing left from P2.
        let (w1, w2) = (&rays[2], &rays[4]);
        let x = intersect(&w1.support, &w2.support).unwrap();
        assert_eq!(x, Pt::int(0, 0));
        let child = scatter_unmarked(w1, w2, &x, &cfg).unwrap().unwrap();
        assert_eq!(child.support.dir, [-1, -1]);
        assert_eq!(child.weight, 1);
        assert_eq!(child.coeff, Q::one());
        assert_eq!(child.term, ExponentKey::x([0, 1, 1]).with_u(1, 0).unwrap().with_u(2, 0).unwrap());
        // Same point index: the product vanishes.
        assert!(scatter_unmarked(&rays[0], &rays[2], &a.point(1).clone(), &cfg).is_err());
    }

    #[test]
    fn gluing_two_pure_rays() {
        let a = arr(Pt::int(9, 9), vec![Pt::int(0, 0)]);
        let cfg = RingConfig::new(1, 0, 3).with_orders(2);
        let w = glue_at_marked(&a, 1, &[], [0, 1, 1], &cfg).unwrap().unwrap();
        assert_eq!(w.support.dir, [-1, -1]);
        assert_eq!(w.coeff, Q::one());
        assert_eq!(w.term, ExponentKey::x([0, 1, 1]).with_u(1, 1).unwrap());
        assert!(glue_at_marked(&a, 1, &[], [1, 1, 1], &cfg).unwrap().is_none());
        let single = glue_at_marked(&a, 1, &[], [0, 0, 1], &cfg).unwrap().unwrap();
        assert_eq!(single.support.dir, [0, -1]);
    }

    #[test]
    fn k1_diagram_is_initial_rays() {
        let a = arr(Pt::new(qf(0, 1), qf(1, 3)), vec![Pt::int(1, 1)]);
        let d = build_diagram(&a, 2).unwrap();
        assert_eq!(d.walls.len(), 3);
        assert!(build_diagram(&arr(Pt::int(0, 0), vec![]), 2).unwrap().walls.is_empty());
    }

    #[test]
    fn loops_are_trivial_and_deletion_breaks_them() {
        for k in 2..=3 {
            let a = generate_arrangement(11 + k as u64, k, &SampleBox::default()).unwrap();
            let d = build_diagram(&a, 2).unwrap();
            let loops = check_all_loops(&d).unwrap();
            assert!(!loops.is_empty());
            for (x, ok) in &loops {
                assert!(ok, "k={k} loop at {x}");
            }
            let child = d.walls.iter().position(|w| w.parents.is_some()).expect("a child wall");
            let x = d.walls[child].support.base.clone();
            let broken = d.without_wall(child);
            assert!(!check_loop_identity(&broken, &x).unwrap());
        }
    }

    #[test]
    fn wall_degree_matches_point_orders() {
        let a = generate_arrangement(3, 3, &SampleBox::default()).unwrap();
        let d = build_diagram(&a, 3).unwrap();
        assert!(d.walls.len() > 20);
        for w in &d.walls {
            assert_eq!(w.term.x_degree(), w.term.r_norm(), "{:?}", w.term);
        }
    }

    #[test]
    fn path_reversal_is_identity() {
        let a = generate_arrangement(5, 2, &SampleBox::default()).unwrap();
        let d = build_diagram(&a, 2).unwrap();
        let path = vec![Pt::new(qf(-701, 100), qf(-653, 100)), Pt::new(qf(707, 100), qf(659, 100))];
        let mut rev = path.clone();
        rev.reverse();
        for i in 0..3 {
            let x = Series::x(d.cfg, i);
            let there = path_automorphism(&d, &path, &x).unwrap();
            assert_eq!(path_automorphism(&d, &rev, &there).unwrap(), x);
        }
    }
}

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::key::{ExponentKey, RingConfig};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, inv_factorial, parse_q, Q};

/// A finite formal sum of monomials with exact rational coefficients,
/// reduced modulo the ideal of its [`RingConfig`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    cfg: RingConfig,
    terms: BTreeMap<ExponentKey, Q>,
}

impl Series {
    pub fn zero(cfg: RingConfig) -> Self {
        Series { cfg, terms: BTreeMap::new() }
    }

    pub fn one(cfg: RingConfig) -> Self {
        Self::monomial(cfg, ExponentKey::one(), Q::one())
    }

    /// `c · key`, dropped if the key is outside the truncation.
    pub fn monomial(cfg: RingConfig, key: ExponentKey, c: Q) -> Self {
        let mut s = Self::zero(cfg);
        if key.fits(&cfg) {
            s.add_term(key, c);
        }
        s
    }

    /// The variable `x_i`.
    pub fn x(cfg: RingConfig, i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(cfg, ExponentKey::x(e), Q::one())
    }

    /// `x_0 + x_1 + x_2`.
    pub fn w_basic(cfg: RingConfig) -> Self {
        (0..3).fold(Self::zero(cfg), |acc, i| acc + Self::x(cfg, i))
    }

    /// The generator `u_{i,j}`; zero when `j` is beyond the configured orders.
    pub fn u(cfg: RingConfig, point: usize, order: usize) -> Result<Self> {
        if point == 0 || point > cfg.points {
            return Err(Error::Key(format!("point {point} outside 1..={}", cfg.points)));
        }
        Ok(Self::monomial(cfg, ExponentKey::one().with_u(point, order)?, Q::one()))
    }

    /// `y_{2,j} := Σ_i u_{i,j}`; zero for `j` at or beyond the order bound.
    pub fn y2(cfg: RingConfig, order: usize) -> Self {
        let mut s = Self::zero(cfg);
        for i in 1..=cfg.points {
            if let Ok(t) = Self::u(cfg, i, order) {
                s = s + t;
            }
        }
        s
    }

    pub fn y0(cfg: RingConfig) -> Self {
        Self::monomial(cfg, ExponentKey::one().with_y0(1), Q::one())
    }

    pub fn hbar_pow(cfg: RingConfig, h: i32) -> Self {
        Self::monomial(cfg, ExponentKey::one().with_hbar(h), Q::one())
    }

    pub fn config(&self) -> &RingConfig {
        &self.cfg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentKey, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &ExponentKey) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    /// Add `c · key` in place. The key is assumed to be within bounds.
    pub fn add_term(&mut self, key: ExponentKey, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn same_cfg(&self, other: &Self) -> Result<()> {
        if self.cfg != other.cfg {
            return Err(Error::Config(format!("{:?} vs {:?}", self.cfg, other.cfg)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_cfg(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_cfg(other)?;
        let mut out = Self::zero(self.cfg);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some(k) = ka.mul(kb, &self.cfg) {
                    out.add_term(k, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.cfg);
        }
        Series {
            cfg: self.cfg,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply every term by `ħ^h`.
    pub fn shift_hbar(&self, h: i32) -> Self {
        Series {
            cfg: self.cfg,
            terms: self.terms.iter().map(|(k, v)| (k.with_hbar(k.hbar + h), v.clone())).collect(),
        }
    }

    /// Keep only the terms satisfying `pred`.
    pub fn filter(&self, mut pred: impl FnMut(&ExponentKey) -> bool) -> Self {
        Series {
            cfg: self.cfg,
            terms: self.terms.iter().filter(|(k, _)| pred(k)).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Set every `u_{i,j}` to zero.
    pub fn u_to_zero(&self) -> Self {
        self.filter(|k| k.is_u_free())
    }

    /// The same terms over a different configuration, dropping what does not fit.
    pub fn reconfigure(&self, cfg: RingConfig) -> Self {
        let mut out = Self::zero(cfg);
        for (k, c) in &self.terms {
            if k.fits(&cfg) {
                out.add_term(*k, c.clone());
            }
        }
        out
    }

    /// `a^n` by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.cfg);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn has_nilpotent_factor(k: &ExponentKey) -> bool {
        k.umask() != 0 || k.y0 > 0 || k.x_degree() > 0
    }

    /// `Σ_{n>=0} aⁿ ħ^{n·hbar_shift} / n!`, a finite sum because every term of
    /// `a` carries a u-, y- or x-factor and all three are truncated.
    pub fn exp_truncated(&self, hbar_shift: i32) -> Result<Self> {
        if self.terms.keys().any(|k| !Self::has_nilpotent_factor(k)) {
            return Err(Error::Precondition(
                "exp_truncated needs every term to carry a nilpotent factor".into(),
            ));
        }
        let step = self.shift_hbar(hbar_shift);
        let mut out = Self::one(self.cfg);
        let mut power = Self::one(self.cfg);
        let mut n: i64 = 0;
        loop {
            n += 1;
            power = &power * &step;
            if power.is_zero() {
                break;
            }
            out = out + power.scale(&inv_factorial(n));
        }
        Ok(out)
    }

    /// `Ô := Σ u_{j,l} ∂/∂u_{j,l-1}`, a derivation shifting one descendent
    /// order at a time.
    pub fn fundamental_operator(&self) -> Self {
        let mut out = Self::zero(self.cfg);
        for (k, c) in &self.terms {
            for (i, j) in k.u_pairs() {
                if j + 1 < self.cfg.orders {
                    out.add_term(k.set_order(i, j + 1), c.clone());
                }
            }
        }
        out
    }

    /// `T̂ := exp(y_{0,0} Ô)`, truncated at `y_{0,0}^{m̄+1} = 0`.
    pub fn that_operator(&self) -> Self {
        let y = Self::y0(self.cfg);
        let mut out = self.clone();
        let mut shifted = self.clone();
        let mut ypow = Self::one(self.cfg);
        for j in 1..=self.cfg.mbar as i64 {
            shifted = shifted.fundamental_operator();
            ypow = &ypow * &y;
            if shifted.is_zero() || ypow.is_zero() {
                break;
            }
            out = out + (&ypow * &shifted).scale(&inv_factorial(j));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| {
                    serde_json::to_value(TermJson {
                        x: k.x,
                        u: k.u_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
                        y0: k.y0,
                        hbar: k.hbar,
                        coeff: fmt_q(c),
                    })
                    .expect("plain data serializes")
                })
                .collect(),
        )
    }

    pub fn from_json(cfg: RingConfig, v: &serde_json::Value) -> Result<Self> {
        let terms: Vec<TermJson> = serde_json::from_value(v.clone())?;
        let mut out = Self::zero(cfg);
        for t in terms {
            let mut k = ExponentKey::x(t.x).with_y0(t.y0).with_hbar(t.hbar);
            for [i, j] in t.u {
                k = k.with_u(i, j)?;
            }
            if !k.fits(&cfg) {
                return Err(Error::Key(format!("term {k:?} outside configuration")));
            }
            out.add_term(k, parse_q(&t.coeff)?);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    x: [u32; 3],
    u: Vec<[usize; 2]>,
    y0: u32,
    hbar: i32,
    coeff: String,
}

impl std::fmt::Display for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", fmt_q(c))?;
            for (i, &n) in k.x.iter().enumerate() {
                if n == 1 {
                    write!(f, "·x{i}")?;
                } else if n > 1 {
                    write!(f, "·x{i}^{n}")?;
                }
            }
            for (i, j) in k.u_pairs() {
                write!(f, "·u{i},{j}")?;
            }
            if k.y0 > 0 {
                write!(f, "·y0^{}", k.y0)?;
            }
            if k.hbar != 0 {
                write!(f, "·ħ^{}", k.hbar)?;
            }
        }
        Ok(())
    }
}

// Operator sugar. Mismatched configurations are a programming error here;
// the `try_*` forms are the checked entry points.
impl std::ops::Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        self.try_add(&rhs).expect("series configurations differ")
    }
}

impl std::ops::Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        self.try_add(&-rhs).expect("series configurations differ")
    }
}

impl std::ops::Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Q::one())
    }
}

impl std::ops::Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series configurations differ")
    }
}

impl std::ops::Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        &self * &rhs
    }
}

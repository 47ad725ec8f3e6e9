use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard upper bound on the number of marked points a key can address.
pub const MAX_POINTS: usize = 16;

/// Bounds of the truncated coefficient ring.
///
/// `points` is the number of marked points `k`. Generators are `u_{i,j}` with
/// `1 <= i <= points` and `0 <= j < orders`; normally `orders == points`, but
/// the two are kept separate so that higher descendent orders can be probed
/// with few points. `mbar` truncates `y_{0,0}` and `xcut` bounds every
/// x-exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingConfig {
    pub points: usize,
    pub orders: usize,
    pub mbar: u32,
    pub xcut: u32,
}

impl RingConfig {
    pub fn new(points: usize, mbar: u32, xcut: u32) -> Self {
        RingConfig { points, orders: points.max(1), mbar, xcut }
    }

    pub fn with_orders(mut self, orders: usize) -> Self {
        self.orders = orders.max(1);
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.points > MAX_POINTS {
            return Err(Error::Config(format!(
                "{} points exceeds the supported maximum {MAX_POINTS}",
                self.points
            )));
        }
        if self.orders > 250 || self.xcut > 250 || self.mbar > 250 {
            return Err(Error::Config("truncation bounds too large".into()));
        }
        Ok(())
    }
}

/// A monomial `x^n · u_{i1,j1}···u_{is,js} · y_{0,0}^e · ħ^h`.
///
/// The u-part stores, for point `i`, `0` when absent and `j + 1` when the
/// factor `u_{i,j}` is present; this makes a repeated point index
/// unrepresentable. `mask` caches the set of occupied points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentKey {
    pub x: [u32; 3],
    u: [u8; MAX_POINTS],
    pub y0: u32,
    pub hbar: i32,
    mask: u32,
}

impl Default for ExponentKey {
    fn default() -> Self {
        ExponentKey { x: [0; 3], u: [0; MAX_POINTS], y0: 0, hbar: 0, mask: 0 }
    }
}

impl ExponentKey {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn x(x: [u32; 3]) -> Self {
        ExponentKey { x, ..Self::default() }
    }

    /// Point indices are 1-based, as in the marked points `P_1..P_k`.
    pub fn with_u(mut self, point: usize, order: usize) -> Result<Self> {
        if point == 0 || point > MAX_POINTS {
            return Err(Error::Key(format!("point index {point} out of range")));
        }
        let slot = point - 1;
        if self.u[slot] != 0 {
            return Err(Error::Key(format!("point {point} already carries a u-factor")));
        }
        self.u[slot] = (order + 1) as u8;
        self.mask |= 1 << slot;
        Ok(self)
    }

    pub fn with_x(mut self, x: [u32; 3]) -> Self {
        self.x = x;
        self
    }

    pub fn with_y0(mut self, e: u32) -> Self {
        self.y0 = e;
        self
    }

    pub fn with_hbar(mut self, h: i32) -> Self {
        self.hbar = h;
        self
    }

    /// Bitmask of occupied points (bit `i-1` for point `i`).
    pub fn umask(&self) -> u32 {
        self.mask
    }

    /// Descendent order at `point` if a factor is present.
    pub fn order_at(&self, point: usize) -> Option<usize> {
        match self.u.get(point.wrapping_sub(1)) {
            Some(&v) if v > 0 => Some(v as usize - 1),
            _ => None,
        }
    }

    /// `(point, order)` pairs in increasing point order.
    pub fn u_pairs(&self) -> Vec<(usize, usize)> {
        (0..MAX_POINTS)
            .filter(|&s| self.u[s] != 0)
            .map(|s| (s + 1, self.u[s] as usize - 1))
            .collect()
    }

    /// Number of u-factors.
    pub fn ucount(&self) -> u32 {
        self.mask.count_ones()
    }

    /// `|r|` of the u-part: the sum of `order + 1` over factors.
    pub fn r_norm(&self) -> u32 {
        self.u.iter().map(|&v| v as u32).sum()
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn is_u_free(&self) -> bool {
        self.mask == 0
    }

    /// The same key with the u-part removed.
    pub fn without_u(&self) -> Self {
        ExponentKey { u: [0; MAX_POINTS], mask: 0, ..*self }
    }

    /// Only the u-part of the key.
    pub fn u_only(&self) -> Self {
        ExponentKey { u: self.u, mask: self.mask, ..Self::default() }
    }

    /// Replace the order at an occupied point.
    pub fn set_order(mut self, point: usize, order: usize) -> Self {
        debug_assert!(self.u[point - 1] != 0);
        self.u[point - 1] = (order + 1) as u8;
        self
    }

    /// Remove the factor at `point`, if any.
    pub fn drop_point(mut self, point: usize) -> Self {
        self.u[point - 1] = 0;
        self.mask &= !(1 << (point - 1));
        self
    }

    /// Product of two keys, or `None` when the product lies in the ideal
    /// (shared point index, `y0` or x-exponent above the truncation).
    pub fn mul(&self, other: &Self, cfg: &RingConfig) -> Option<Self> {
        if self.mask & other.mask != 0 {
            return None;
        }
        let y0 = self.y0 + other.y0;
        if y0 > cfg.mbar {
            return None;
        }
        let mut x = [0; 3];
        for i in 0..3 {
            x[i] = self.x[i] + other.x[i];
            if x[i] > cfg.xcut {
                return None;
            }
        }
        let mut u = self.u;
        for s in 0..MAX_POINTS {
            u[s] |= other.u[s];
        }
        Some(ExponentKey { x, u, y0, hbar: self.hbar + other.hbar, mask: self.mask | other.mask })
    }

    /// True when the key lies within the bounds of `cfg`.
    pub fn fits(&self, cfg: &RingConfig) -> bool {
        self.y0 <= cfg.mbar
            && self.x.iter().all(|&n| n <= cfg.xcut)
            && self.u_pairs().iter().all(|&(i, j)| i <= cfg.points && j < cfg.orders)
    }
}

//! Conjugacy classes via their structural key.
//!
//! Conjugating `g = alpha c^k` by `x` adds `form(x_bar, alpha_bar)` to `k`
//! and leaves the abelian image alone, so the class of `g` is
//! `{c^k}` when `alpha_bar = 0` and `alpha c^k <c^m>` otherwise, where `m`
//! is the positive generator of `{form(u, alpha_bar) : u}`, namely
//! `gcd_t(w_t i_t, w_t j_t)`.

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{AbelianVector, GroupElement, GroupSpec};

/// Identifies one conjugacy class: the abelian image and the residue of
/// `k` modulo the class modulus (or `k` itself for central classes).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjClassKey {
    pub abel: AbelianVector,
    pub resid: i64,
}

impl ConjClassKey {
    pub fn is_central(&self) -> bool {
        self.abel.is_zero()
    }
}

impl GroupSpec {
    /// `gcd_t(w_t i_t, w_t j_t)`; `z` coordinates do not contribute and the
    /// all-zero vector gives 0.
    pub fn class_modulus(&self, v: &AbelianVector) -> Result<i64> {
        self.class_modulus_slice(v.as_slice())
    }

    pub(crate) fn class_modulus_slice(&self, v: &[i64]) -> Result<i64> {
        if v.len() != self.abelian_rank() {
            return Err(Error::Dimension {
                expected: self.abelian_rank(),
                found: v.len(),
            });
        }
        let mut g = 0i64;
        for (t, &w) in self.weights().iter().enumerate() {
            let a = self.s() + 2 * t;
            g = arith::gcd(g, arith::mul(w, v[a])?);
            g = arith::gcd(g, arith::mul(w, v[a + 1])?);
        }
        Ok(g)
    }

    pub fn class_key(&self, g: &GroupElement) -> Result<ConjClassKey> {
        self.check(g)?;
        let m = self.class_modulus_slice(g.abelian_coords())?;
        let resid = if m == 0 { g.k() } else { g.k().rem_euclid(m) };
        Ok(ConjClassKey {
            abel: g.abelian(),
            resid,
        })
    }

    /// For `H_1` only: whether `g, h` commute (by multiplying both ways)
    /// and whether their abelian images are colinear. The two must agree.
    pub fn colinear_commute_check(&self, g: &GroupElement, h: &GroupElement) -> Result<(bool, bool)> {
        if self.s() != 0 || self.r() != 1 {
            return Err(Error::Domain(alloc::format!("colinearity criterion needs H_1, got {self}")));
        }
        let commute = self.multiply(g, h)? == self.multiply(h, g)?;
        let (i, j) = (g.coords()[0] as i128, g.coords()[1] as i128);
        let (ii, jj) = (h.coords()[0] as i128, h.coords()[1] as i128);
        Ok((commute, i * jj - j * ii == 0))
    }

    /// Largest weight `w_r`.
    pub fn max_weight(&self) -> i64 {
        *self.weights().last().expect("r >= 1")
    }
}

/// Central growth lower bound `2 floor(n/4)^2 + 1`: every `c^k` with
/// `|k| <= m^2` has a spelling of length at most `4m` in the `(a_1, b_1)`
/// plane.
pub fn central_growth_lower(n: u64) -> u128 {
    let q = (n / 4) as u128;
    2 * q * q + 1
}

/// Central growth upper bound `2 floor(w_max n^2 / 16) + 1`: a closed word
/// of length `n` encloses signed area at most `n^2 / 16` in each plane.
pub fn central_growth_upper(spec: &GroupSpec, n: u64) -> u128 {
    let n = n as u128;
    2 * (spec.max_weight() as u128 * n * n / 16) + 1
}

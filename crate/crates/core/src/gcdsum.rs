//! gcd sums over lattice balls, expected gcd on the positive orthant and
//! the Riemann zeta function at real `s >= 2`.
//!
//! Two independent routes are provided. Direct enumeration walks every
//! lattice point. The divisor route uses `gcd(y) = sum_{d | y} phi(d)`,
//! which turns the sum into `sum_d phi(d) #{y in ball : d | y, y != 0}`;
//! the inner count is a product of interval counts for cubical balls and
//! an `l1` ball count at radius `floor(n / d)` for `l1` balls centred at
//! the origin.

use alloc::vec::Vec;

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BallNorm {
    Cubical,
    L1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBallSpec {
    pub dim: usize,
    pub radius: u64,
    pub norm: BallNorm,
    /// Added to every point before taking the gcd.
    pub offset: Vec<i64>,
}

impl LatticeBallSpec {
    pub fn centred(dim: usize, radius: u64, norm: BallNorm) -> Self {
        Self {
            dim,
            radius,
            norm,
            offset: alloc::vec![0; dim],
        }
    }

    pub fn with_offset(mut self, offset: &[i64]) -> Self {
        self.offset = offset.to_vec();
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Domain("lattice dimension must be positive".into()));
        }
        if self.offset.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: self.offset.len(),
            });
        }
        if self.radius > i64::MAX as u64 / 4 || self.offset.iter().any(|a| a.unsigned_abs() > i64::MAX as u64 / 4) {
            return Err(Error::Overflow);
        }
        Ok(())
    }

    /// Number of lattice points in the ball.
    pub fn cardinality(&self) -> Result<u128> {
        match self.norm {
            BallNorm::Cubical => {
                let side = 2 * self.radius as u128 + 1;
                let mut acc: u128 = 1;
                for _ in 0..self.dim {
                    acc = acc.checked_mul(side).ok_or(Error::Overflow)?;
                }
                Ok(acc)
            }
            BallNorm::L1 => l1_ball_count(self.dim, self.radius),
        }
    }

    pub fn offset_sup_norm(&self) -> u64 {
        self.offset.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0)
    }
}

/// `#{x in Z^dim : |x|_1 <= m} = sum_k 2^k C(dim, k) C(m, k)`.
pub fn l1_ball_count(dim: usize, m: u64) -> Result<u128> {
    let mut total: u128 = 0;
    let mut c_dim: u128 = 1;
    let mut c_m: u128 = 1;
    let mut pow2: u128 = 1;
    for k in 0..=dim as u128 {
        if k > 0 {
            c_dim = c_dim * (dim as u128 - k + 1) / k;
            if k > m as u128 {
                break;
            }
            c_m = c_m.checked_mul(m as u128 - k + 1).ok_or(Error::Overflow)? / k;
            pow2 *= 2;
        }
        let term = pow2
            .checked_mul(c_dim)
            .and_then(|t| t.checked_mul(c_m))
            .ok_or(Error::Overflow)?;
        total = total.checked_add(term).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::Budget { needed, budget })
    } else {
        Ok(())
    }
}

/// Sum of `gcd(x + offset)` over the ball points with first coordinate
/// `x0`. The full direct sum is the total over `x0` in `-n..=n`, which is
/// the unit of work for callers that parallelise.
pub fn gcd_sum_direct_slice(ball: &LatticeBallSpec, x0: i64) -> Result<u128> {
    ball.validate()?;
    let n = ball.radius as i64;
    if x0.abs() > n {
        return Ok(0);
    }
    let rest = ball.dim - 1;
    let budget_l1 = n - x0.abs();
    let first = x0 + ball.offset[0];
    if rest == 0 {
        return Ok(first.unsigned_abs() as u128);
    }
    let mut point: Vec<i64> = alloc::vec![-n; rest];
    let mut total: u128 = 0;
    loop {
        let inside = match ball.norm {
            BallNorm::Cubical => true,
            BallNorm::L1 => point.iter().map(|x| x.abs()).sum::<i64>() <= budget_l1,
        };
        if inside {
            let mut g = first;
            for (x, a) in point.iter().zip(&ball.offset[1..]) {
                g = arith::gcd(g, x + a);
                if g == 1 {
                    break;
                }
            }
            total += g as u128;
        }
        // odometer
        let mut idx = 0;
        loop {
            if idx == rest {
                return Ok(total);
            }
            if point[idx] < n {
                point[idx] += 1;
                break;
            }
            point[idx] = -n;
            idx += 1;
        }
    }
}

/// Exact `sum gcd(x + offset)` by visiting every point; `budget` caps the
/// ball cardinality.
pub fn gcd_sum_direct(ball: &LatticeBallSpec, budget: u128) -> Result<u128> {
    ball.validate()?;
    check_budget(ball.cardinality()?, budget)?;
    let n = ball.radius as i64;
    let mut total: u128 = 0;
    for x0 in -n..=n {
        total += gcd_sum_direct_slice(ball, x0)?;
    }
    Ok(total)
}

/// Multiples of `d` in `[lo, hi]`.
fn multiples_in(lo: i64, hi: i64, d: i64) -> u128 {
    if lo > hi {
        return 0;
    }
    (hi.div_euclid(d) - (lo - 1).div_euclid(d)) as u128
}

/// Exact `sum gcd(x + offset)` via the totient identity. Supports cubical
/// balls with any offset and `l1` balls with zero offset.
pub fn gcd_sum_divisor(ball: &LatticeBallSpec) -> Result<u128> {
    ball.validate()?;
    let n = ball.radius as i64;
    match ball.norm {
        BallNorm::Cubical => {
            let dmax = n + ball.offset_sup_norm() as i64;
            if dmax == 0 {
                return Ok(0);
            }
            let phi = arith::totients(dmax as usize);
            let zero_inside = ball.offset_sup_norm() <= ball.radius;
            let mut total: u128 = 0;
            for d in 1..=dmax {
                let mut count: u128 = 1;
                for a in &ball.offset {
                    count = count
                        .checked_mul(multiples_in(a - n, a + n, d))
                        .ok_or(Error::Overflow)?;
                }
                if zero_inside {
                    count -= 1;
                }
                let term = (phi[d as usize] as u128).checked_mul(count).ok_or(Error::Overflow)?;
                total = total.checked_add(term).ok_or(Error::Overflow)?;
            }
            Ok(total)
        }
        BallNorm::L1 => {
            if ball.offset.iter().any(|&a| a != 0) {
                return Err(Error::Domain("divisor route for l1 balls needs zero offset".into()));
            }
            if n == 0 {
                return Ok(0);
            }
            let phi = arith::totients(n as usize);
            let mut total: u128 = 0;
            for d in 1..=n as u64 {
                let count = l1_ball_count(ball.dim, ball.radius / d)? - 1;
                let term = (phi[d as usize] as u128).checked_mul(count).ok_or(Error::Overflow)?;
                total = total.checked_add(term).ok_or(Error::Overflow)?;
            }
            Ok(total)
        }
    }
}

/// Divisor route where available, direct enumeration otherwise.
pub fn gcd_sum(ball: &LatticeBallSpec, budget: u128) -> Result<u128> {
    match gcd_sum_divisor(ball) {
        Err(Error::Domain(_)) => gcd_sum_direct(ball, budget),
        other => other,
    }
}

/// `sum_{x in [1, n]^dim} gcd(x) = sum_d phi(d) floor(n / d)^dim`.
pub fn positive_orthant_gcd_sum(dim: usize, n: u64) -> Result<u128> {
    if dim == 0 {
        return Err(Error::Domain("lattice dimension must be positive".into()));
    }
    if n == 0 {
        return Ok(0);
    }
    let phi = arith::totients(usize::try_from(n).map_err(|_| Error::Overflow)?);
    let mut total: u128 = 0;
    for d in 1..=n {
        let q = (n / d) as u128;
        let mut p: u128 = 1;
        for _ in 0..dim {
            p = p.checked_mul(q).ok_or(Error::Overflow)?;
        }
        let term = (phi[d as usize] as u128).checked_mul(p).ok_or(Error::Overflow)?;
        total = total.checked_add(term).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Same sum by visiting every point of `[1, n]^dim`.
pub fn positive_orthant_gcd_sum_direct(dim: usize, n: u64, budget: u128) -> Result<u128> {
    if dim == 0 {
        return Err(Error::Domain("lattice dimension must be positive".into()));
    }
    if n == 0 {
        return Ok(0);
    }
    let mut size: u128 = 1;
    for _ in 0..dim {
        size = size.checked_mul(n as u128).ok_or(Error::Overflow)?;
    }
    check_budget(size, budget)?;
    let n = n as i64;
    let mut point: Vec<i64> = alloc::vec![1; dim];
    let mut total: u128 = 0;
    loop {
        total += arith::gcd_all(&point) as u128;
        let mut idx = 0;
        loop {
            if idx == dim {
                return Ok(total);
            }
            if point[idx] < n {
                point[idx] += 1;
                break;
            }
            point[idx] = 1;
            idx += 1;
        }
    }
}

/// Mean of `gcd` over `{1..n}^dim`.
pub fn expected_gcd(dim: usize, n: u64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Domain(alloc::format!("expected gcd needs dim >= 2, got {dim}")));
    }
    if n == 0 {
        return Err(Error::Domain("expected gcd needs n >= 1".into()));
    }
    let total = positive_orthant_gcd_sum(dim, n)?;
    Ok(total as f64 / libm::pow(n as f64, dim as f64))
}

/// `zeta(s)` for real `s >= 2` by Euler-Maclaurin summation.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s >= 2.0) || !s.is_finite() {
        return Err(Error::Domain(alloc::format!("zeta needs s >= 2, got {s}")));
    }
    const CUT: u32 = 32;
    let mut sum = 0.0;
    for k in (1..CUT).rev() {
        sum += libm::pow(k as f64, -s);
    }
    let nn = CUT as f64;
    let head = libm::pow(nn, -s);
    sum += libm::pow(nn, 1.0 - s) / (s - 1.0) + head / 2.0;
    // Bernoulli corrections B_2/2!, B_4/4!, B_6/6!
    let mut rising = s;
    let mut power = head / nn;
    sum += rising * power / 12.0;
    rising *= (s + 1.0) * (s + 2.0);
    power /= nn * nn;
    sum -= rising * power / 720.0;
    rising *= (s + 3.0) * (s + 4.0);
    power /= nn * nn;
    sum += rising * power / 30240.0;
    Ok(sum)
}

//! gcd-sum experiments: parallel direct sums and normalised fits.

use nilgrowth_core::gcdsum::{self, BallNorm, LatticeBallSpec};
use nilgrowth_core::Error as CoreError;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{NilError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GcdMethod {
    Direct,
    Divisor,
}

/// Direct enumeration split over the first coordinate.
pub fn gcd_sum_direct_parallel(ball: &LatticeBallSpec, budget: u128) -> Result<u128> {
    let needed = ball.cardinality()?;
    if needed > budget {
        return Err(CoreError::Budget { needed, budget }.into());
    }
    let n = ball.radius as i64;
    let parts: Vec<u128> = (-n..=n)
        .into_par_iter()
        .map(|x0| gcdsum::gcd_sum_direct_slice(ball, x0))
        .collect::<std::result::Result<_, _>>()?;
    Ok(parts.into_iter().sum())
}

/// Divisor route when it applies, parallel direct enumeration otherwise.
pub fn gcd_sum(ball: &LatticeBallSpec, budget: u128) -> Result<(u128, GcdMethod)> {
    match gcdsum::gcd_sum_divisor(ball) {
        Ok(v) => Ok((v, GcdMethod::Divisor)),
        Err(CoreError::Domain(_)) => Ok((gcd_sum_direct_parallel(ball, budget)?, GcdMethod::Direct)),
        Err(e) => Err(e.into()),
    }
}

/// `n^2 log n` in dimension 2 and `n^dim` above.
pub fn leading_scale(dim: usize, n: u64) -> f64 {
    let x = n as f64;
    if dim == 2 {
        x * x * x.ln()
    } else {
        x.powi(dim as i32)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitPoint {
    pub n: u64,
    pub sum: u128,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub dim: usize,
    pub norm: String,
    pub offset: Vec<i64>,
    pub points: Vec<FitPoint>,
    /// Normalised value at the largest radius.
    pub estimate: f64,
    /// `(max - min) / min` of the normalised values.
    pub drift: f64,
    pub monotone: bool,
}

pub fn gcd_sum_fit(dim: usize, norm: BallNorm, offset: &[i64], radii: &[u64], budget: u128) -> Result<FitReport> {
    if dim < 2 {
        return Err(CoreError::Domain("gcd-sum fit needs dim >= 2".into()).into());
    }
    if radii.len() < 3 || radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] < 2 {
        return Err(NilError::Usage("gcd-sum fit needs at least 3 increasing radii >= 2".into()));
    }
    let mut points = Vec::with_capacity(radii.len());
    for &n in radii {
        let ball = LatticeBallSpec::centred(dim, n, norm).with_offset(offset);
        let (sum, _) = gcd_sum(&ball, budget)?;
        points.push(FitPoint {
            n,
            sum,
            normalized: sum as f64 / leading_scale(dim, n),
        });
    }
    let vals: Vec<f64> = points.iter().map(|p| p.normalized).collect();
    let max = vals.iter().copied().fold(f64::MIN, f64::max);
    let min = vals.iter().copied().fold(f64::MAX, f64::min);
    let monotone = vals.windows(2).all(|w| w[0] <= w[1]) || vals.windows(2).all(|w| w[0] >= w[1]);
    Ok(FitReport {
        dim,
        norm: norm_label(norm).into(),
        offset: offset.to_vec(),
        estimate: *vals.last().expect("at least 3 radii"),
        drift: (max - min) / min,
        monotone,
        points,
    })
}

pub fn norm_label(norm: BallNorm) -> &'static str {
    match norm {
        BallNorm::Cubical => "cube",
        BallNorm::L1 => "l1",
    }
}

pub fn parse_norm(s: &str) -> Result<BallNorm> {
    match s {
        "cube" | "cubical" => Ok(BallNorm::Cubical),
        "l1" => Ok(BallNorm::L1),
        other => Err(NilError::Usage(format!("unknown norm {other:?}; expected cube or l1"))),
    }
}

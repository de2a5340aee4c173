//! Detection of eventually quasi-polynomial integer sequences.
//!
//! A sequence `v(0), v(1), ..` is eventually quasi-polynomial with period
//! `N` and threshold `T` if `v(n) = f_{n mod N}(n)` for all `n >= T`. The
//! search is exact: along each residue class the values are equally
//! spaced samples of `f`, so `f` has degree at most `d` exactly when the
//! `(d+1)`-th finite differences vanish. Every fit must be confirmed by at
//! least `max_degree + 2` samples per class beyond those used to
//! interpolate.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub period: usize,
    pub threshold: usize,
    /// `polys[rho]` holds the coefficients of `f_rho` in increasing degree,
    /// with trailing zeros removed (the zero polynomial is empty).
    pub polys: Vec<Vec<BigRational>>,
}

impl QuasiPolynomial {
    pub fn eval(&self, n: usize) -> BigRational {
        let coeffs = &self.polys[n % self.period];
        let x = BigRational::from_integer(BigInt::from(n));
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    /// Degree of each component; the zero polynomial counts as degree 0.
    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.len().saturating_sub(1)).collect()
    }

    pub fn degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }
}

/// Smallest samples length accepted by [`detect_quasi_polynomial`].
pub fn required_length(max_period: usize, max_degree: usize) -> usize {
    max_period * (2 * max_degree + 3)
}

/// Searches periods `1..=max_period`, then thresholds upward, for the first
/// quasi-polynomial of degree at most `max_degree` that reproduces the
/// whole tail `values[T..]`.
pub fn detect_quasi_polynomial(
    values: &[i128],
    max_period: usize,
    max_degree: usize,
) -> Result<Option<QuasiPolynomial>> {
    if max_period == 0 {
        return Err(Error::Domain("max_period must be positive".into()));
    }
    let needed = required_length(max_period, max_degree);
    if values.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            found: values.len(),
        });
    }
    let per_class = 2 * max_degree + 3;
    for period in 1..=max_period {
        let last_threshold = values.len() - period * per_class;
        for threshold in 0..=last_threshold {
            let mut degrees = Vec::with_capacity(period);
            for rho in 0..period {
                let samples: Vec<i128> = class_samples(values, period, threshold, rho);
                match minimal_degree(&samples, max_degree) {
                    Some(d) if samples.len() >= d + 1 + max_degree + 2 => degrees.push(d),
                    _ => break,
                }
            }
            if degrees.len() == period {
                let polys = (0..period)
                    .map(|rho| {
                        let first = first_index(period, threshold, rho);
                        let pts: Vec<(usize, i128)> = (0..=degrees[rho])
                            .map(|m| {
                                let n = first + m * period;
                                (n, values[n])
                            })
                            .collect();
                        interpolate(&pts)
                    })
                    .collect();
                let rotated = rotate_to_residues(polys, period, threshold);
                return Ok(Some(QuasiPolynomial {
                    period,
                    threshold,
                    polys: rotated,
                }));
            }
        }
    }
    Ok(None)
}

/// Index of the first `n >= threshold` with `n` in the `rho`-th class
/// counted from `threshold`.
fn first_index(_period: usize, threshold: usize, rho: usize) -> usize {
    threshold + rho
}

fn class_samples(values: &[i128], period: usize, threshold: usize, rho: usize) -> Vec<i128> {
    values[first_index(period, threshold, rho)..].iter().step_by(period).copied().collect()
}

/// Classes were indexed relative to the threshold; reorder so that entry
/// `rho` is the polynomial for `n mod period = rho`.
fn rotate_to_residues(polys: Vec<Vec<BigRational>>, period: usize, threshold: usize) -> Vec<Vec<BigRational>> {
    let mut out = alloc::vec![Vec::new(); period];
    for (rel, p) in polys.into_iter().enumerate() {
        out[(threshold + rel) % period] = p;
    }
    out
}

/// Smallest `d <= max_degree` whose `(d+1)`-th differences all vanish.
fn minimal_degree(samples: &[i128], max_degree: usize) -> Option<usize> {
    let mut diff: Vec<BigInt> = samples.iter().map(|&v| BigInt::from(v)).collect();
    for d in 0..=max_degree {
        diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
        if diff.iter().all(Zero::is_zero) {
            return Some(d);
        }
    }
    None
}

/// Coefficients of the unique polynomial of degree `< pts.len()` through
/// the given points, by Gauss-Jordan elimination on the Vandermonde system.
fn interpolate(pts: &[(usize, i128)]) -> Vec<BigRational> {
    let m = pts.len();
    let mut rows: Vec<Vec<BigRational>> = pts
        .iter()
        .map(|&(x, y)| {
            let x = BigRational::from_integer(BigInt::from(x));
            let mut row = Vec::with_capacity(m + 1);
            let mut p = BigRational::one();
            for _ in 0..m {
                row.push(p.clone());
                p = p * &x;
            }
            row.push(BigRational::from_integer(BigInt::from(y)));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !rows[r][col].is_zero()).expect("distinct nodes");
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=m {
                    let delta = &factor * &rows[col][c];
                    rows[r][c] = &rows[r][c] - delta;
                }
            }
        }
    }
    let mut coeffs: Vec<BigRational> = rows.into_iter().map(|row| row[m].clone()).collect();
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Outcome of the rational-implies-polynomial check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeVerdict {
    pub degree: usize,
    /// Whether every component has the same degree.
    pub uniform: bool,
}

/// For a quasi-polynomial fitted to a non-decreasing sequence all
/// components must share one degree `d`, and then the sequence grows like
/// `n^d`. A mismatch under `nondecreasing` is a structural failure.
pub fn rational_implies_polynomial_check(qp: &QuasiPolynomial, nondecreasing: bool) -> Result<DegreeVerdict> {
    let degrees = qp.degrees();
    let degree = qp.degree();
    let uniform = degrees.iter().all(|&d| d == degree);
    if !uniform && nondecreasing {
        return Err(Error::Structural(alloc::format!(
            "component degrees {degrees:?} differ for a non-decreasing sequence"
        )));
    }
    Ok(DegreeVerdict { degree, uniform })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn squares_have_period_one() {
        let values: Vec<i128> = (0..30).map(|n| n * n).collect();
        let qp = detect_quasi_polynomial(&values, 2, 3).unwrap().unwrap();
        assert_eq!(qp.period, 1);
        assert_eq!(qp.threshold, 0);
        assert_eq!(qp.polys, vec![vec![rat(0), rat(0), rat(1)]]);
    }

    #[test]
    fn parity_split_has_period_two() {
        let values: Vec<i128> = (0..40).map(|n| if n % 2 == 0 { n * n } else { n * n + n }).collect();
        let qp = detect_quasi_polynomial(&values, 3, 3).unwrap().unwrap();
        assert_eq!(qp.period, 2);
        assert_eq!(qp.polys[0], vec![rat(0), rat(0), rat(1)]);
        assert_eq!(qp.polys[1], vec![rat(0), rat(1), rat(1)]);
        for n in 0..40 {
            assert_eq!(qp.eval(n), rat(values[n] as i64));
        }
    }

    #[test]
    fn threshold_found_after_noise() {
        let mut values: Vec<i128> = (0..30).map(|n| 3 * n + 1).collect();
        values[0] = 17;
        values[1] = -4;
        let qp = detect_quasi_polynomial(&values, 1, 2).unwrap().unwrap();
        assert_eq!(qp.threshold, 2);
        assert_eq!(qp.polys[0], vec![rat(1), rat(3)]);
    }

    #[test]
    fn rational_coefficients() {
        let values: Vec<i128> = (0..20).map(|n| n * (n + 1) / 2).collect();
        let qp = detect_quasi_polynomial(&values, 1, 2).unwrap().unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(qp.polys[0], vec![rat(0), half.clone(), half]);
    }

    #[test]
    fn insufficient_data() {
        assert_eq!(
            detect_quasi_polynomial(&[1, 2, 3], 2, 2),
            Err(Error::InsufficientData { needed: 14, found: 3 })
        );
    }

    #[test]
    fn non_polynomial_sequence_rejected() {
        let values: Vec<i128> = (0..40).map(|n| 1i128 << (n / 2)).collect();
        assert_eq!(detect_quasi_polynomial(&values, 2, 4).unwrap(), None);
    }

    #[test]
    fn degree_verdicts() {
        let qp = QuasiPolynomial {
            period: 2,
            threshold: 0,
            polys: vec![vec![rat(0), rat(0), rat(1)], vec![rat(0), rat(1), rat(1)]],
        };
        assert_eq!(
            rational_implies_polynomial_check(&qp, true).unwrap(),
            DegreeVerdict { degree: 2, uniform: true }
        );
        let mixed = QuasiPolynomial {
            period: 2,
            threshold: 0,
            polys: vec![vec![rat(0), rat(1)], vec![rat(0), rat(0), rat(1)]],
        };
        assert!(matches!(rational_implies_polynomial_check(&mixed, true), Err(Error::Structural(_))));
        assert_eq!(
            rational_implies_polynomial_check(&mixed, false).unwrap(),
            DegreeVerdict { degree: 2, uniform: false }
        );
        let cube = QuasiPolynomial {
            period: 1,
            threshold: 0,
            polys: vec![vec![rat(0), rat(0), rat(0), rat(1)]],
        };
        assert_eq!(rational_implies_polynomial_check(&cube, true).unwrap().degree, 3);
    }
}

//! Checked integer helpers. Every coordinate computation goes through these
//! so that overflow surfaces as [`Error::Overflow`] instead of wrapping.

use crate::error::{Error, Result};

#[inline]
pub fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

#[inline]
pub fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
pub fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow)
}

#[inline]
pub fn narrow(a: i128) -> Result<i64> {
    i64::try_from(a).map_err(|_| Error::Overflow)
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
#[inline]
pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// gcd of all entries, `0` for an empty or all-zero slice.
pub fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0, |acc, &v| gcd(acc, v))
}

/// `p (p - 1) / 2`, valid for negative `p` as well.
pub fn pair_count(p: i64) -> Result<i64> {
    let prod = (p as i128) * (p as i128 - 1);
    narrow(prod / 2)
}

/// Euler's totient for `0..=limit` by a linear sieve.
pub fn totients(limit: usize) -> alloc::vec::Vec<u64> {
    let mut phi: alloc::vec::Vec<u64> = (0..=limit as u64).collect();
    for p in 2..=limit {
        if phi[p] == p as u64 {
            let mut m = p;
            while m <= limit {
                phi[m] -= phi[m] / p as u64;
                m += p;
            }
        }
    }
    phi
}

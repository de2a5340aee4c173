//! Group specifications `Z^s x H_D` and the group law in Mal'cev
//! coordinates.
//!
//! Coordinates are laid out flat as
//! `[l_1, .., l_s, i_1, j_1, .., i_r, j_r, k]`. With weights `w_1 = 1` and
//! `w_t = delta_{t-1}`, the relations are `[a_t, b_t] = c^{w_t}`, all other
//! generator pairs commute, and `c` is central. Moving `b_t^j` past
//! `a_t^I` costs `c^{-w_t j I}`, which gives the multiplication law
//!
//! ```text
//! (.., i_t, j_t, .., k) * (.., I_t, J_t, .., K)
//!     = (.., i_t + I_t, j_t + J_t, .., k + K - sum_t w_t j_t I_t)
//! ```

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use smallvec::SmallVec;

use crate::arith;
use crate::error::{Error, Result};

pub(crate) type Coords = SmallVec<[i64; 8]>;

/// Parameters `(s, r, D)` of `G = Z^s x H_D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    s: usize,
    r: usize,
    delta: Vec<i64>,
    weights: Vec<i64>,
}

impl GroupSpec {
    /// Validates `delta` (length `r - 1`, positive, each entry dividing the
    /// next) and derives the commutator weights.
    pub fn new(s: usize, r: usize, delta: &[i64]) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroRank);
        }
        if delta.len() != r - 1 {
            return Err(Error::DeltaLength {
                expected: r - 1,
                found: delta.len(),
            });
        }
        if let Some(&bad) = delta.iter().find(|&&d| d <= 0) {
            return Err(Error::NonPositiveDelta(bad));
        }
        for pair in delta.windows(2) {
            if pair[1] % pair[0] != 0 {
                return Err(Error::Divisibility(pair[0], pair[1]));
            }
        }
        if s + 2 * r + 1 > u16::MAX as usize {
            return Err(Error::Domain(format!("group too large: s={s}, r={r}")));
        }
        let mut weights = Vec::with_capacity(r);
        weights.push(1);
        weights.extend_from_slice(delta);
        Ok(Self {
            s,
            r,
            delta: delta.to_vec(),
            weights,
        })
    }

    /// The `r`-th higher Heisenberg group `H_r` (all deltas equal to 1).
    pub fn heisenberg(r: usize) -> Result<Self> {
        Self::new(0, r, &alloc::vec![1; r.saturating_sub(1)])
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn delta(&self) -> &[i64] {
        &self.delta
    }

    /// Commutator weights `w_t`, with `[a_t, b_t] = c^{w_t}`.
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Rank `2r + s` of the abelianisation.
    pub fn abelian_rank(&self) -> usize {
        self.s + 2 * self.r
    }

    /// Number of Mal'cev coordinates, `2r + s + 1`.
    pub fn coord_len(&self) -> usize {
        self.abelian_rank() + 1
    }

    /// True when some `delta` differs from 1.
    pub fn is_weighted(&self) -> bool {
        self.delta.iter().any(|&d| d != 1)
    }

    /// True for `H_r` itself: no abelian factor and trivial `D`.
    pub fn is_plain_heisenberg(&self) -> bool {
        self.s == 0 && !self.is_weighted()
    }

    /// Polynomial growth degree `sum (i+1) r_i = (s + 2r) + 2`.
    pub fn bass_guivarch_exponent(&self) -> usize {
        self.abelian_rank() + 2
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            s: self.s as u16,
            coords: smallvec::smallvec![0; self.coord_len()],
        }
    }

    /// `c^k`.
    pub fn central(&self, k: i64) -> GroupElement {
        let mut g = self.identity();
        *g.coords.last_mut().expect("coords are never empty") = k;
        g
    }

    /// Builds an element from its `z` part, `(i_t, j_t)` pairs and `k`.
    pub fn element(&self, z: &[i64], ab: &[(i64, i64)], k: i64) -> Result<GroupElement> {
        if z.len() != self.s {
            return Err(Error::Shape(format!("expected {} z-coordinates, got {}", self.s, z.len())));
        }
        if ab.len() != self.r {
            return Err(Error::Shape(format!("expected {} (i,j) pairs, got {}", self.r, ab.len())));
        }
        let mut coords = Coords::with_capacity(self.coord_len());
        coords.extend_from_slice(z);
        for &(i, j) in ab {
            coords.push(i);
            coords.push(j);
        }
        coords.push(k);
        Ok(GroupElement {
            s: self.s as u16,
            coords,
        })
    }

    /// Builds an element from the flat coordinate layout.
    pub fn from_coords(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.coord_len() {
            return Err(Error::Shape(format!(
                "expected {} coordinates, got {}",
                self.coord_len(),
                coords.len()
            )));
        }
        Ok(GroupElement {
            s: self.s as u16,
            coords: Coords::from_slice(coords),
        })
    }

    /// The unit-coordinate generator with abelian index `index` in basis
    /// order `z_1..z_s, a_1, b_1, .., a_r, b_r`.
    pub fn generator(&self, index: usize) -> GroupElement {
        assert!(index < self.abelian_rank(), "generator index out of range");
        let mut g = self.identity();
        g.coords[index] = 1;
        g
    }

    /// `z_1, .., z_s, a_1, b_1, .., a_r, b_r`.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        (0..self.abelian_rank()).map(|i| self.generator(i)).collect()
    }

    pub fn conforms(&self, g: &GroupElement) -> bool {
        g.s as usize == self.s && g.coords.len() == self.coord_len()
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.conforms(g) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "element with {} coordinates (s={}) used in a group with {} coordinates (s={})",
                g.coords.len(),
                g.s,
                self.coord_len(),
                self.s
            )))
        }
    }

    /// `sum_t w_t * x_{j_t} * y_{i_t}`, the correction term of the group law.
    fn cross(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        let mut acc: i128 = 0;
        for (t, &w) in self.weights.iter().enumerate() {
            let base = self.s + 2 * t;
            acc += w as i128 * x[base + 1] as i128 * y[base] as i128;
        }
        arith::narrow(acc)
    }

    /// Normal form of `g h`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        let n = self.abelian_rank();
        let mut coords = Coords::with_capacity(n + 1);
        for idx in 0..n {
            coords.push(arith::add(g.coords[idx], h.coords[idx])?);
        }
        let k = arith::add(g.coords[n], h.coords[n])?;
        coords.push(arith::sub(k, self.cross(&g.coords, &h.coords)?)?);
        Ok(GroupElement { s: g.s, coords })
    }

    /// `g^{-1}`: all coordinates negated, with `k` corrected by
    /// `-sum_t w_t i_t j_t`.
    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let n = self.abelian_rank();
        let mut coords = Coords::with_capacity(n + 1);
        for idx in 0..n {
            coords.push(arith::neg(g.coords[idx])?);
        }
        let k = arith::neg(g.coords[n])?;
        coords.push(arith::sub(k, self.cross(&g.coords, &g.coords)?)?);
        Ok(GroupElement { s: g.s, coords })
    }

    /// `g^p` for any integer `p`, in closed form:
    /// abelian part scales by `p`, `k -> p k - C(p, 2) sum_t w_t i_t j_t`.
    pub fn pow(&self, g: &GroupElement, p: i64) -> Result<GroupElement> {
        self.check(g)?;
        let n = self.abelian_rank();
        let mut coords = Coords::with_capacity(n + 1);
        for idx in 0..n {
            coords.push(arith::mul(g.coords[idx], p)?);
        }
        let cross = self.cross(&g.coords, &g.coords)?;
        let k = arith::sub(
            arith::mul(p, g.coords[n])?,
            arith::mul(arith::pair_count(p)?, cross)?,
        )?;
        coords.push(k);
        Ok(GroupElement { s: g.s, coords })
    }

    /// `[g, h] = g h g^{-1} h^{-1}`, computed through the group law.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let gh = self.multiply(g, h)?;
        let hg = self.multiply(h, g)?;
        self.multiply(&gh, &self.inverse(&hg)?)
    }

    /// `x g x^{-1}`, computed through the group law.
    pub fn conjugate(&self, x: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        let xg = self.multiply(x, g)?;
        self.multiply(&xg, &self.inverse(x)?)
    }

    /// Image in `Ab(G) = Z^{2r+s}`.
    pub fn abelianize(&self, g: &GroupElement) -> Result<AbelianVector> {
        self.check(g)?;
        Ok(g.abelian())
    }

    /// The preimage of `v` with zero `c`-coordinate.
    pub fn canonical_lift(&self, v: &AbelianVector) -> Result<GroupElement> {
        if v.len() != self.abelian_rank() {
            return Err(Error::Dimension {
                expected: self.abelian_rank(),
                found: v.len(),
            });
        }
        let mut coords = Coords::with_capacity(self.coord_len());
        coords.extend_from_slice(v.as_slice());
        coords.push(0);
        Ok(GroupElement {
            s: self.s as u16,
            coords,
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s > 0 {
            write!(f, "Z^{} x ", self.s)?;
        }
        if self.is_weighted() {
            write!(f, "H_{:?}", self.delta)
        } else {
            write!(f, "H_{}", self.r)
        }
    }
}

/// A group element in Mal'cev coordinates.
///
/// The derived ordering is lexicographic on `(l_1..l_s, i_1, j_1, .., i_r,
/// j_r, k)`; orbit keys use it to pick canonical minima.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    s: u16,
    coords: Coords,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn z(&self) -> &[i64] {
        &self.coords[..self.s as usize]
    }

    /// `(i_1, j_1, .., i_r, j_r)` flattened.
    pub fn ab_flat(&self) -> &[i64] {
        &self.coords[self.s as usize..self.coords.len() - 1]
    }

    pub fn ab_pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.ab_flat().chunks_exact(2).map(|p| (p[0], p[1]))
    }

    pub fn k(&self) -> i64 {
        self.coords[self.coords.len() - 1]
    }

    /// All coordinates except `k`.
    pub fn abelian_coords(&self) -> &[i64] {
        &self.coords[..self.coords.len() - 1]
    }

    pub fn abelian(&self) -> AbelianVector {
        AbelianVector(Coords::from_slice(self.abelian_coords()))
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// True when the element lies in `<c>`.
    pub fn is_central_power(&self) -> bool {
        self.abelian_coords().iter().all(|&c| c == 0)
    }

    /// Same element with `k` replaced.
    pub fn with_k(&self, k: i64) -> GroupElement {
        let mut g = self.clone();
        let last = g.coords.len() - 1;
        g.coords[last] = k;
        g
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(z={:?}, ab={:?}, k={})", self.z(), self.ab_flat(), self.k())
    }
}

/// A vector in `Z^{2r+s}` in basis order `z_1..z_s, a_1, b_1, .., a_r, b_r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AbelianVector(pub(crate) Coords);

impl AbelianVector {
    pub fn new(values: &[i64]) -> Self {
        Self(Coords::from_slice(values))
    }

    pub fn zero(len: usize) -> Self {
        Self(smallvec::smallvec![0; len])
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `sum |v_i|`.
    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn checked_add(&self, other: &AbelianVector) -> Result<AbelianVector> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: other.len(),
            });
        }
        let mut out = Coords::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(arith::add(*a, *b)?);
        }
        Ok(AbelianVector(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> GroupSpec {
        GroupSpec::new(0, 1, &[]).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::new(0, 1, &[]).is_ok());
        let zh = GroupSpec::new(1, 2, &[2]).unwrap();
        assert_eq!(zh.weights(), &[1, 2]);
        assert_eq!(GroupSpec::new(0, 3, &[2, 3]), Err(Error::Divisibility(2, 3)));
        assert_eq!(GroupSpec::new(0, 2, &[0]), Err(Error::NonPositiveDelta(0)));
        assert_eq!(
            GroupSpec::new(0, 2, &[]),
            Err(Error::DeltaLength {
                expected: 1,
                found: 0
            })
        );
        assert_eq!(GroupSpec::new(2, 0, &[]), Err(Error::ZeroRank));
    }

    #[test]
    fn multiplication_law_in_h1() {
        let g = h1();
        let x = g.element(&[], &[(1, 2)], 0).unwrap();
        let y = g.element(&[], &[(3, 1)], 0).unwrap();
        assert_eq!(g.multiply(&x, &y).unwrap(), g.element(&[], &[(4, 3)], -6).unwrap());
    }

    #[test]
    fn weighted_block_multiplication() {
        let g = GroupSpec::new(0, 2, &[2]).unwrap();
        let b2 = g.element(&[], &[(0, 0), (0, 1)], 0).unwrap();
        let a2 = g.element(&[], &[(0, 0), (1, 0)], 0).unwrap();
        assert_eq!(
            g.multiply(&b2, &a2).unwrap(),
            g.element(&[], &[(0, 0), (1, 1)], -2).unwrap()
        );
    }

    #[test]
    fn inverse_examples() {
        let g = h1();
        assert_eq!(g.inverse(&g.identity()).unwrap(), g.identity());
        let a = g.generator(0);
        assert_eq!(g.inverse(&a).unwrap(), g.element(&[], &[(-1, 0)], 0).unwrap());
        let ab = g.element(&[], &[(1, 1)], 0).unwrap();
        let inv = g.inverse(&ab).unwrap();
        assert!(g.multiply(&ab, &inv).unwrap().is_identity());
        assert!(g.multiply(&inv, &ab).unwrap().is_identity());
    }

    #[test]
    fn commutator_examples() {
        let g = h1();
        let (a, b) = (g.generator(0), g.generator(1));
        assert_eq!(g.commutator(&a, &b).unwrap(), g.central(1));
        let a3 = g.pow(&a, 3).unwrap();
        let b3 = g.pow(&b, 3).unwrap();
        assert_eq!(g.commutator(&a3, &b3).unwrap(), g.central(9));
    }

    #[test]
    fn conjugate_examples() {
        let g = h1();
        let x = g.element(&[], &[(2, 4)], 7).unwrap();
        assert_eq!(
            g.conjugate(&g.generator(0), &x).unwrap(),
            g.element(&[], &[(2, 4)], 11).unwrap()
        );
        assert_eq!(g.conjugate(&g.identity(), &x).unwrap(), x);
        let c5 = g.central(5);
        assert_eq!(g.conjugate(&x, &c5).unwrap(), c5);
    }

    #[test]
    fn pow_agrees_with_repeated_multiplication() {
        let g = GroupSpec::new(1, 2, &[3]).unwrap();
        let x = g.element(&[2], &[(1, -2), (3, 1)], 5).unwrap();
        let mut acc = g.identity();
        for p in 0..6 {
            assert_eq!(g.pow(&x, p).unwrap(), acc);
            acc = g.multiply(&acc, &x).unwrap();
        }
        let inv = g.inverse(&x).unwrap();
        assert_eq!(g.pow(&x, -1).unwrap(), inv);
        assert_eq!(g.pow(&x, -3).unwrap(), g.pow(&inv, 3).unwrap());
    }

    #[test]
    fn abelianize_and_lift() {
        let g = h1();
        assert!(g.abelianize(&g.central(5)).unwrap().is_zero());
        let x = g.element(&[], &[(2, -3)], 9).unwrap();
        assert_eq!(g.abelianize(&x).unwrap().as_slice(), &[2, -3]);
        let zh = GroupSpec::new(1, 1, &[]).unwrap();
        let y = zh.element(&[4], &[(1, 0)], 2).unwrap();
        assert_eq!(zh.abelianize(&y).unwrap().as_slice(), &[4, 1, 0]);
        assert!(g.canonical_lift(&AbelianVector::zero(2)).unwrap().is_identity());
        assert_eq!(
            g.canonical_lift(&AbelianVector::new(&[2, -3])).unwrap(),
            g.element(&[], &[(2, -3)], 0).unwrap()
        );
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g = h1();
        let other = GroupSpec::new(1, 1, &[]).unwrap();
        assert!(matches!(
            g.multiply(&g.identity(), &other.identity()),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn overflow_detected() {
        let g = h1();
        let big = g.element(&[], &[(i64::MAX / 2, i64::MAX / 2)], 0).unwrap();
        assert_eq!(g.multiply(&big, &big), Err(Error::Overflow));
    }

    #[test]
    fn bass_guivarch() {
        assert_eq!(h1().bass_guivarch_exponent(), 4);
        assert_eq!(GroupSpec::new(1, 2, &[1]).unwrap().bass_guivarch_exponent(), 7);
        assert_eq!(GroupSpec::new(0, 2, &[2]).unwrap().bass_guivarch_exponent(), 6);
    }
}

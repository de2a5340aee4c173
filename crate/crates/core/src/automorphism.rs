//! Automorphisms `f = kappa o phi_M` of `G = Z^s x H_D`.
//!
//! `M` acts on row vectors of `Ab(G)` and must satisfy
//! `M Omega M^T = eps Omega` for `eps = +-1`. `phi_M` sends each generator
//! `x_i` to the canonical lift of `e_i M`, and the central twist `kappa`
//! sends `x_i` to `x_i c^{kappa_i}`. Hence
//! `f(x_i) = lift(e_i M) c^{kappa . (e_i M)}` and `f(c) = c^eps`; the
//! image of a general element is the Mal'cev-ordered product of generator
//! images, so the quadratic correction `gamma` is never written out
//! symbolically.

use alloc::vec::Vec;

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{AbelianVector, GroupElement, GroupSpec};
use crate::linalg::IntMatrix;

/// Returns `eps` when `M Omega M^T = eps Omega` and `M` is invertible over
/// the integers.
pub fn check_in_m(m: &IntMatrix, spec: &GroupSpec) -> Result<i64> {
    let n = spec.abelian_rank();
    if m.rows() != n || m.cols() != n {
        return Err(Error::Dimension {
            expected: n,
            found: if m.rows() != n { m.rows() } else { m.cols() },
        });
    }
    let omega = spec.omega_form().matrix;
    let image = m.checked_mul(&omega)?.checked_mul(&m.transpose())?;
    let eps = if image == omega {
        1
    } else if image == omega.checked_neg()? {
        -1
    } else {
        return Err(Error::NotInM);
    };
    m.inverse_unimodular()?;
    Ok(eps)
}

/// Case split of the finite-extension argument, from `eps` and
/// `rank(M - I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankCase {
    Identity,
    EpsMinusOne,
    RankGe2 { rank: usize },
    /// Carries a nonzero `b` with `b (M - I) = 0`.
    Rank1 { kernel: Vec<i64> },
    /// `M = I` with a nonzero central twist.
    Rank0,
}

impl RankCase {
    pub fn label(&self) -> &'static str {
        match self {
            RankCase::Identity => "identity",
            RankCase::EpsMinusOne => "eps_minus_one",
            RankCase::RankGe2 { .. } => "rank_ge_2",
            RankCase::Rank1 { .. } => "rank_1",
            RankCase::Rank0 => "rank_0",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    spec: GroupSpec,
    matrix: IntMatrix,
    kappa: Vec<i64>,
    eps: i64,
    /// `f(x_i)` for each standard generator.
    images: Vec<GroupElement>,
}

impl Automorphism {
    pub fn new(spec: &GroupSpec, matrix: IntMatrix, kappa: Vec<i64>) -> Result<Self> {
        let eps = check_in_m(&matrix, spec)?;
        let n = spec.abelian_rank();
        if kappa.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: kappa.len(),
            });
        }
        let images = (0..n)
            .map(|i| {
                let row = matrix.row(i);
                let shift: i128 = row.iter().zip(&kappa).map(|(a, b)| *a as i128 * *b as i128).sum();
                Ok(spec.canonical_lift(&AbelianVector::new(row))?.with_k(arith::narrow(shift)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: spec.clone(),
            matrix,
            kappa,
            eps,
            images,
        })
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        let n = spec.abelian_rank();
        Self::new(spec, IntMatrix::identity(n), alloc::vec![0; n]).expect("identity is an automorphism")
    }

    /// Recovers `(M, kappa)` from the images of the standard generators:
    /// the abelian parts form the rows of `M` and the `c`-exponents `e`
    /// satisfy `e = M kappa^T`.
    pub fn from_generator_images(spec: &GroupSpec, images: &[GroupElement]) -> Result<Self> {
        let n = spec.abelian_rank();
        if images.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: images.len(),
            });
        }
        for g in images {
            spec.check(g)?;
        }
        let rows: Vec<Vec<i64>> = images.iter().map(|g| g.abelian_coords().to_vec()).collect();
        let matrix = IntMatrix::from_rows(&rows)?;
        let exps: Vec<i64> = images.iter().map(GroupElement::k).collect();
        let inv = matrix.inverse_unimodular()?;
        let kappa = inv.transpose().left_apply(&exps)?;
        let f = Self::new(spec, matrix, kappa)?;
        debug_assert_eq!(f.images, images);
        Ok(f)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn kappa(&self) -> &[i64] {
        &self.kappa
    }

    pub fn eps(&self) -> i64 {
        self.eps
    }

    pub fn generator_images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        self.spec.check(g)?;
        let spec = &self.spec;
        let mut acc = spec.central(arith::mul(self.eps, g.k())?);
        let mut out = spec.identity();
        for (img, &e) in self.images.iter().zip(g.abelian_coords()) {
            if e != 0 {
                out = spec.multiply(&out, &spec.pow(img, e)?)?;
            }
        }
        acc = spec.multiply(&out, &acc)?;
        Ok(acc)
    }

    /// `gamma(v)`: the `c`-exponent of `f(lift(v))`.
    pub fn gamma(&self, v: &AbelianVector) -> Result<i64> {
        Ok(self.apply(&self.spec.canonical_lift(v)?)?.k())
    }

    /// `self o other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.spec != other.spec {
            return Err(Error::Shape(alloc::format!(
                "cannot compose automorphisms of {} and {}",
                self.spec,
                other.spec
            )));
        }
        let images = other.images.iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        Self::from_generator_images(&self.spec, &images)
    }

    /// `f^{-1}`: matrix `M^{-1}`, with `c`-exponents chosen so that
    /// `f(f^{-1}(x_i)) = x_i`.
    pub fn inverse(&self) -> Result<Automorphism> {
        let minv = self.matrix.inverse_unimodular()?;
        let images = (0..self.spec.abelian_rank())
            .map(|i| {
                let v = AbelianVector::new(minv.row(i));
                let gamma = self.gamma(&v)?;
                Ok(self.spec.canonical_lift(&v)?.with_k(arith::neg(arith::mul(self.eps, gamma)?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_images(&self.spec, &images)
    }

    /// `f^p` for `p >= 0`.
    pub fn power(&self, p: u32) -> Result<Automorphism> {
        let mut acc = Self::identity(&self.spec);
        for _ in 0..p {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity() && self.kappa.iter().all(|&k| k == 0)
    }

    /// Smallest `k` in `1..=bound` with `f^k = id`, checked on generators.
    pub fn order(&self, bound: u32) -> Result<Option<u32>> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Ok(Some(k));
            }
            acc = self.compose(&acc)?;
        }
        Ok(None)
    }

    pub fn rank_case(&self) -> Result<RankCase> {
        if self.is_identity() {
            return Ok(RankCase::Identity);
        }
        if self.eps == -1 {
            return Ok(RankCase::EpsMinusOne);
        }
        let n = self.spec.abelian_rank();
        let shifted = self.matrix.checked_sub(&IntMatrix::identity(n))?;
        match shifted.rank()? {
            0 => Ok(RankCase::Rank0),
            1 => {
                let kernel = shifted
                    .left_kernel_vector()?
                    .ok_or_else(|| Error::Structural("rank-1 M - I with trivial kernel".into()))?;
                Ok(RankCase::Rank1 { kernel })
            }
            rank => Ok(RankCase::RankGe2 { rank }),
        }
    }

    /// Twisted-class modulus at abelian point `v` when `M = I`: the twisted
    /// class of `lift(v) c^w` is `lift(v) c^{w + m Z}` with
    /// `m = gcd(Omega v^T + kappa)`. Returns `None` unless `M = I`.
    pub fn structural_modulus(&self, v: &[i64]) -> Result<Option<i64>> {
        if !self.matrix.is_identity() {
            return Ok(None);
        }
        let col = self.spec.form_column(v)?;
        let mut g = 0;
        for (a, b) in col.iter().zip(&self.kappa) {
            g = arith::gcd(g, arith::add(*a, *b)?);
        }
        Ok(Some(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn h1() -> GroupSpec {
        GroupSpec::new(0, 1, &[]).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn membership_in_m() {
        let spec = h1();
        assert_eq!(check_in_m(&IntMatrix::identity(2), &spec).unwrap(), 1);
        assert_eq!(check_in_m(&mat(&[&[0, 1], &[1, 0]]), &spec).unwrap(), -1);
        assert_eq!(check_in_m(&mat(&[&[2, 0], &[0, 1]]), &spec), Err(Error::NotInM));
        assert!(matches!(
            check_in_m(&IntMatrix::identity(3), &spec),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn singular_m_rejected_when_form_degenerate() {
        let spec = GroupSpec::new(1, 1, &[]).unwrap();
        let m = mat(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(check_in_m(&m, &spec), Err(Error::NotUnimodular));
    }

    #[test]
    fn apply_examples() {
        let spec = h1();
        let (a, b) = (spec.generator(0), spec.generator(1));
        let id = Automorphism::identity(&spec);
        let g = spec.element(&[], &[(3, -2)], 4).unwrap();
        assert_eq!(id.apply(&g).unwrap(), g);

        let twist = Automorphism::new(&spec, IntMatrix::identity(2), vec![1, 0]).unwrap();
        assert_eq!(twist.apply(&a).unwrap(), spec.multiply(&a, &spec.central(1)).unwrap());
        assert_eq!(twist.apply(&b).unwrap(), b);
        assert_eq!(twist.apply(&spec.central(1)).unwrap(), spec.central(1));

        let neg = Automorphism::new(&spec, mat(&[&[-1, 0], &[0, -1]]), vec![0, 0]).unwrap();
        assert_eq!(neg.eps(), 1);
        assert_eq!(neg.apply(&a).unwrap(), spec.inverse(&a).unwrap());
        assert_eq!(neg.apply(&b).unwrap(), spec.inverse(&b).unwrap());
        assert_eq!(neg.apply(&spec.central(1)).unwrap(), spec.central(1));
    }

    #[test]
    fn swap_is_an_involution_inverting_c() {
        let spec = h1();
        let swap = Automorphism::new(&spec, mat(&[&[0, 1], &[1, 0]]), vec![0, 0]).unwrap();
        assert_eq!(swap.apply(&spec.central(1)).unwrap(), spec.central(-1));
        assert_eq!(swap.order(12).unwrap(), Some(2));
        let inv = swap.inverse().unwrap();
        for i in 0..2 {
            let x = spec.generator(i);
            assert_eq!(inv.apply(&swap.apply(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn inverse_and_compose_round_trip() {
        let spec = GroupSpec::new(1, 1, &[]).unwrap();
        let m = mat(&[&[1, 0, 0], &[2, 1, 1], &[0, 0, 1]]);
        let f = Automorphism::new(&spec, m, vec![3, -1, 2]).unwrap();
        let inv = f.inverse().unwrap();
        assert!(f.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&f).unwrap().is_identity());
    }

    #[test]
    fn rank_cases() {
        let spec = h1();
        assert_eq!(Automorphism::identity(&spec).rank_case().unwrap(), RankCase::Identity);
        let neg = Automorphism::new(&spec, mat(&[&[-1, 0], &[0, -1]]), vec![0, 0]).unwrap();
        assert_eq!(neg.rank_case().unwrap(), RankCase::RankGe2 { rank: 2 });
        let twist = Automorphism::new(&spec, IntMatrix::identity(2), vec![1, 0]).unwrap();
        assert_eq!(twist.rank_case().unwrap(), RankCase::Rank0);
        let swap = Automorphism::new(&spec, mat(&[&[0, 1], &[1, 0]]), vec![0, 0]).unwrap();
        assert_eq!(swap.rank_case().unwrap(), RankCase::EpsMinusOne);
        let shear = Automorphism::new(&spec, mat(&[&[1, 1], &[0, 1]]), vec![0, 0]).unwrap();
        match shear.rank_case().unwrap() {
            RankCase::Rank1 { kernel } => {
                let shifted = mat(&[&[0, 1], &[0, 0]]);
                assert_eq!(shifted.left_apply(&kernel).unwrap(), vec![0, 0]);
                assert!(kernel.iter().any(|&x| x != 0));
            }
            other => panic!("expected rank 1, got {other:?}"),
        }
    }

    #[test]
    fn gamma_is_linear_for_central_twists() {
        let spec = GroupSpec::new(1, 2, &[2]).unwrap();
        let kappa = vec![2, -1, 3, 0, 5];
        let f = Automorphism::new(&spec, IntMatrix::identity(5), kappa.clone()).unwrap();
        let v = [1, -2, 4, 3, -1];
        let expected: i64 = v.iter().zip(&kappa).map(|(a, b)| a * b).sum();
        assert_eq!(f.gamma(&AbelianVector::new(&v)).unwrap(), expected);
    }
}

//! The skew-symmetric commutator form on `Ab(G)`.
//!
//! For lifts `g, h` of `u, v` we have `[g, h] = c^{u Omega v^T}`, where
//! `Omega` is zero on the `z` block and carries `w_t [[0, 1], [-1, 0]]` on
//! the `(a_t, b_t)` block.

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{AbelianVector, GroupSpec};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaForm {
    pub matrix: IntMatrix,
    /// True when some block weight differs from 1.
    pub weighted: bool,
}

impl GroupSpec {
    pub fn omega_form(&self) -> OmegaForm {
        let n = self.abelian_rank();
        let mut matrix = IntMatrix::zeros(n, n);
        for (t, &w) in self.weights().iter().enumerate() {
            let a = self.s() + 2 * t;
            matrix.set(a, a + 1, w);
            matrix.set(a + 1, a, -w);
        }
        OmegaForm {
            matrix,
            weighted: self.is_weighted(),
        }
    }

    /// `u Omega v^T = sum_t w_t (u_{a_t} v_{b_t} - u_{b_t} v_{a_t})`.
    pub fn commutator_form(&self, u: &AbelianVector, v: &AbelianVector) -> Result<i64> {
        self.form_slices(u.as_slice(), v.as_slice())
    }

    pub(crate) fn form_slices(&self, u: &[i64], v: &[i64]) -> Result<i64> {
        let n = self.abelian_rank();
        if u.len() != n || v.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: if u.len() != n { u.len() } else { v.len() },
            });
        }
        let mut acc: i128 = 0;
        for (t, &w) in self.weights().iter().enumerate() {
            let a = self.s() + 2 * t;
            acc += w as i128 * (u[a] as i128 * v[a + 1] as i128 - u[a + 1] as i128 * v[a] as i128);
        }
        arith::narrow(acc)
    }

    /// `Omega v^T` as a vector: the linear functional `u -> form(u, v)`.
    pub fn form_column(&self, v: &[i64]) -> Result<alloc::vec::Vec<i64>> {
        let n = self.abelian_rank();
        if v.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: v.len(),
            });
        }
        let mut out = alloc::vec![0; n];
        for (t, &w) in self.weights().iter().enumerate() {
            let a = self.s() + 2 * t;
            out[a] = arith::mul(w, v[a + 1])?;
            out[a + 1] = arith::neg(arith::mul(w, v[a])?)?;
        }
        Ok(out)
    }
}

//! The commensurability embeddings `Gamma_1 <= H_D <= Gamma_2 = H_r`.
//!
//! With `W = w_r` and `q_t = W / w_t`, the subgroup
//! `Gamma_1 = <a_t^{q_t}, b_t>` consists of the elements with `q_t | i_t`
//! and `W | k`, and `phi: H_D -> H_r` sends `(i_t, j_t, k)` to
//! `(w_t i_t, j_t, k)`. Both indices are computed here by enumerating right
//! coset representatives over growing balls.

use nilgrowth_core::{Error as CoreError, GroupElement, GroupSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ball::{BallBuilder, GeneratingSet};
use crate::conjugacy::conjugacy_growth;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub delta: Vec<i64>,
    /// Exponents `q_t` of the `a_t` generators of `Gamma_1`.
    pub subgroup_exponents: Vec<i64>,
    pub subgroup_index_expected: u64,
    pub subgroup_index_computed: u64,
    pub image_index_expected: u64,
    pub image_index_computed: u64,
    pub homomorphism_ok: bool,
    pub relators_ok: bool,
    pub injective_on_ball: bool,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.subgroup_index_expected == self.subgroup_index_computed
            && self.image_index_expected == self.image_index_computed
            && self.homomorphism_ok
            && self.relators_ok
            && self.injective_on_ball
    }
}

fn require_no_lattice(spec: &GroupSpec) -> Result<()> {
    if spec.s() != 0 {
        return Err(CoreError::Domain(format!("embeddings need s = 0, got {spec}")).into());
    }
    Ok(())
}

pub fn subgroup_exponents(spec: &GroupSpec) -> Vec<i64> {
    let top = spec.max_weight();
    spec.weights().iter().map(|w| top / w).collect()
}

/// Membership in `Gamma_1`.
pub fn in_subgroup(spec: &GroupSpec, g: &GroupElement) -> bool {
    let q = subgroup_exponents(spec);
    g.ab_pairs().zip(&q).all(|((i, _), q)| i % q == 0) && g.k() % spec.max_weight() == 0
}

/// `phi(H_D) <= H_r` on coordinates.
pub fn embed(spec: &GroupSpec, target: &GroupSpec, g: &GroupElement) -> Result<GroupElement> {
    let mut ab = Vec::with_capacity(spec.r());
    for ((i, j), w) in g.ab_pairs().zip(spec.weights()) {
        ab.push((nilgrowth_core::arith::mul(i, *w)?, j));
    }
    Ok(target.element(&[], &ab, g.k())?)
}

/// Membership in `phi(H_D)` inside `H_r`.
pub fn in_image(spec: &GroupSpec, h: &GroupElement) -> bool {
    h.ab_pairs().zip(spec.weights()).all(|((i, _), w)| i % w == 0)
}

/// Number of right cosets `U g` of a finite-index subgroup `U`, found by
/// sweeping balls until a whole sphere adds no new coset. The Schreier
/// graph is connected, so once a sphere adds nothing no later one can.
pub fn right_coset_count<F>(spec: &GroupSpec, member: F, budget: usize) -> Result<u64>
where
    F: Fn(&GroupElement) -> bool,
{
    let gens = GeneratingSet::standard(spec);
    let mut builder = BallBuilder::new(spec, &gens, budget, false);
    let mut reps: Vec<GroupElement> = vec![spec.identity()];
    let mut rep_inverses: Vec<GroupElement> = vec![spec.identity()];
    loop {
        let fresh = builder.step()?;
        let before = reps.len();
        for idx in fresh {
            let g = builder.get(idx).clone();
            let mut known = false;
            for inv in &rep_inverses {
                if member(&spec.multiply(&g, inv)?) {
                    known = true;
                    break;
                }
            }
            if !known {
                rep_inverses.push(spec.inverse(&g)?);
                reps.push(g);
            }
        }
        if reps.len() == before {
            return Ok(reps.len() as u64);
        }
    }
}

pub fn hd_embeddings(spec: &GroupSpec, budget: usize) -> Result<EmbeddingReport> {
    require_no_lattice(spec)?;
    let target = GroupSpec::heisenberg(spec.r())?;
    let q = subgroup_exponents(spec);
    let top = spec.max_weight() as u64;
    let subgroup_index_expected = q.iter().map(|&x| x as u64).product::<u64>() * top;
    let image_index_expected = spec.delta().iter().map(|&d| d as u64).product::<u64>();

    let subgroup_index_computed = right_coset_count(spec, |g| in_subgroup(spec, g), budget)?;
    let image_index_computed = right_coset_count(&target, |h| in_image(spec, h), budget)?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut homomorphism_ok = true;
    for _ in 0..2000 {
        let mut random = || -> Result<GroupElement> {
            let coords: Vec<i64> = (0..spec.coord_len()).map(|_| rng.gen_range(-40..=40)).collect();
            Ok(spec.from_coords(&coords)?)
        };
        let (g, h) = (random()?, random()?);
        let lhs = embed(spec, &target, &spec.multiply(&g, &h)?)?;
        let rhs = target.multiply(&embed(spec, &target, &g)?, &embed(spec, &target, &h)?)?;
        homomorphism_ok &= lhs == rhs;
    }

    let mut relators_ok = true;
    let gens = spec.standard_generators();
    for (t, w) in spec.weights().iter().enumerate() {
        let (a, b) = (&gens[2 * t], &gens[2 * t + 1]);
        let rel = spec.multiply(&spec.commutator(a, b)?, &spec.central(-w))?;
        relators_ok &= rel.is_identity();
        let image = target.multiply(
            &target.commutator(&embed(spec, &target, a)?, &embed(spec, &target, b)?)?,
            &embed(spec, &target, &spec.central(-w))?,
        )?;
        relators_ok &= image.is_identity();
        relators_ok &= in_subgroup(spec, &spec.pow(a, q[t])?) && in_subgroup(spec, b);
    }

    let ball = crate::ball::enumerate_ball(spec, &GeneratingSet::standard(spec), 4, budget)?;
    let mut images = rustc_hash::FxHashSet::default();
    for (g, _) in ball.entries() {
        images.insert(embed(spec, &target, g)?);
    }
    let injective_on_ball = images.len() == ball.len();

    Ok(EmbeddingReport {
        delta: spec.delta().to_vec(),
        subgroup_exponents: q,
        subgroup_index_expected,
        subgroup_index_computed,
        image_index_expected,
        image_index_computed,
        homomorphism_ok,
        relators_ok,
        injective_on_ball,
    })
}

/// Exploratory comparison of `c_{Gamma_1}` (intrinsic metric on its own
/// generators `a_t^{q_t}, b_t`) with `c_{H_D}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubgroupGrowthReport {
    pub radius: u32,
    pub subgroup: Vec<u64>,
    pub ambient: Vec<u64>,
    /// `max_m c_{Gamma_1}(m) / c_{H_D}(m)` over the computed radii.
    pub max_ratio: f64,
}

/// `Gamma_1` is isomorphic to `H_r` via `(i_t, j_t, k) -> (i_t / q_t, j_t,
/// k / W)`, which carries its generators to the standard ones.
pub fn subgroup_growth_report(spec: &GroupSpec, n: u32, budget: usize) -> Result<SubgroupGrowthReport> {
    require_no_lattice(spec)?;
    let model = GroupSpec::heisenberg(spec.r())?;
    let subgroup = conjugacy_growth(&model, &GeneratingSet::standard(&model), n, budget)?;
    let ambient = conjugacy_growth(spec, &GeneratingSet::standard(spec), n, budget)?;
    let max_ratio = subgroup
        .iter()
        .zip(&ambient)
        .map(|(&a, &b)| a as f64 / b as f64)
        .fold(0.0, f64::max);
    Ok(SubgroupGrowthReport {
        radius: n,
        subgroup,
        ambient,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::DEFAULT_BUDGET;

    #[test]
    fn indices_for_d2() {
        let spec = GroupSpec::new(0, 2, &[2]).unwrap();
        let report = hd_embeddings(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.subgroup_exponents, vec![2, 1]);
        assert_eq!(report.subgroup_index_computed, 4);
        assert_eq!(report.image_index_computed, 2);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn trivial_d_has_index_one() {
        let spec = GroupSpec::heisenberg(3).unwrap();
        let report = hd_embeddings(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.subgroup_index_computed, 1);
        assert_eq!(report.image_index_computed, 1);
        assert!(report.passed());
    }

    #[test]
    fn longer_chain() {
        let spec = GroupSpec::new(0, 3, &[2, 4]).unwrap();
        let report = hd_embeddings(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.subgroup_exponents, vec![4, 2, 1]);
        assert_eq!(report.subgroup_index_expected, 4 * 2 * 4);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn lattice_factor_rejected() {
        assert!(hd_embeddings(&GroupSpec::new(1, 2, &[2]).unwrap(), DEFAULT_BUDGET).is_err());
    }
}

//! Twisted conjugacy growth and conjugacy growth of finite cyclic
//! extensions `H x| Z/k`.
//!
//! The twisted class of `h` under `f` is `{f(x) h x^-1 : x in H}`. Brute
//! force closes the `n`-ball under this action for all conjugators in a
//! ball of radius `R`, then repeats with `R + 2`; the counts are flagged
//! stable when the two agree.

use nilgrowth_core::gcdsum::l1_ball_count;
use nilgrowth_core::{AbelianVector, Automorphism, Error as CoreError, GroupElement, GroupSpec};
use petgraph::unionfind::UnionFind;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::ball::{enumerate_ball, BallTable, GeneratingSet};
use crate::conjugacy::l1_ball_points;
use crate::error::{NilError, Result};

/// Right-multiplication partner pairs `(f(x), x^-1)` for each conjugator.
fn twisted_pairs(f: &Automorphism, conjugators: &[GroupElement]) -> Result<Vec<(GroupElement, GroupElement)>> {
    let spec = f.spec();
    conjugators
        .iter()
        .map(|x| Ok((f.apply(x)?, spec.inverse(x)?)))
        .collect()
}

/// Union-find labels of the elements of length `<= limit` in `table`,
/// closed under `h -> f(x) h x^-1` for the given conjugators and, when
/// `extra` is set, under `h -> extra(h)`.
fn close(
    table: &BallTable,
    limit: u32,
    pairs: &[(GroupElement, GroupElement)],
    extra: Option<&Automorphism>,
    spec: &GroupSpec,
) -> Result<Vec<usize>> {
    let size = table.count_within(limit);
    let mut uf = UnionFind::<usize>::new(size);
    for idx in 0..size {
        let h = table.get(idx);
        for (fx, xinv) in pairs {
            let y = spec.multiply(&spec.multiply(fx, h)?, xinv)?;
            if let Some(j) = table.index_of(&y) {
                if j < size {
                    uf.union(idx, j);
                }
            }
        }
        if let Some(g) = extra {
            if let Some(j) = table.index_of(&g.apply(h)?) {
                if j < size {
                    uf.union(idx, j);
                }
            }
        }
    }
    Ok(uf.into_labeling())
}

fn counts_by_radius(table: &BallTable, roots: &[usize], n: u32) -> Vec<u64> {
    let mut seen = FxHashSet::default();
    let mut lo = 0;
    (0..=n)
        .map(|m| {
            let hi = table.count_within(m);
            seen.extend(roots[lo..hi].iter().copied());
            lo = hi;
            seen.len() as u64
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedReport {
    pub radius: u32,
    pub conjugator_radius: u32,
    pub counts: Vec<u64>,
    /// Counts with conjugator radius `R + 2`.
    pub counts_wider: Vec<u64>,
    pub stable: bool,
    /// Most twisted classes meeting a single abelianised point.
    pub max_classes_per_point: usize,
}

pub fn twisted_growth_bruteforce(
    gens: &GeneratingSet,
    f: &Automorphism,
    n: u32,
    conjugator_radius: u32,
    budget: usize,
) -> Result<TwistedReport> {
    let spec = f.spec();
    let table = enumerate_ball(spec, gens, n.max(conjugator_radius + 2), budget)?;
    let run = |radius: u32| -> Result<Vec<usize>> {
        let conj: Vec<GroupElement> = table.within(radius).cloned().collect();
        close(&table, n, &twisted_pairs(f, &conj)?, None, spec)
    };
    let roots = run(conjugator_radius)?;
    let wider = run(conjugator_radius + 2)?;
    let counts = counts_by_radius(&table, &roots, n);
    let counts_wider = counts_by_radius(&table, &wider, n);

    let mut per_point: FxHashMap<AbelianVector, FxHashSet<usize>> = FxHashMap::default();
    for (i, root) in roots.iter().enumerate() {
        per_point.entry(table.get(i).abelian()).or_default().insert(*root);
    }
    let max_classes_per_point = per_point.values().map(FxHashSet::len).max().unwrap_or(0);

    Ok(TwistedReport {
        radius: n,
        conjugator_radius,
        stable: counts == counts_wider,
        counts,
        counts_wider,
        max_classes_per_point,
    })
}

fn require_central_twist(f: &Automorphism) -> Result<()> {
    if f.matrix().is_identity() && f.eps() == 1 {
        Ok(())
    } else {
        Err(CoreError::Domain("structural twisted classes need M = I".into()).into())
    }
}

/// Twisted class key for `M = I`: `(h_bar, k mod m)` with
/// `m = gcd(Omega h_bar^T + kappa)`, or `(h_bar, k)` when `m = 0`.
pub fn twisted_key(f: &Automorphism, h: &GroupElement) -> Result<(AbelianVector, i64)> {
    require_central_twist(f)?;
    let m = f
        .structural_modulus(h.abelian_coords())?
        .expect("M = I checked above");
    let resid = if m == 0 { h.k() } else { h.k().rem_euclid(m) };
    Ok((h.abelian(), resid))
}

/// Exact twisted growth for `M = I` from structural keys over a ball.
pub fn twisted_growth_structural(f: &Automorphism, table: &BallTable) -> Result<Vec<u64>> {
    require_central_twist(f)?;
    let mut seen = FxHashSet::default();
    (0..=table.radius())
        .map(|l| {
            for h in table.level(l) {
                seen.insert(twisted_key(f, h)?);
            }
            Ok(seen.len() as u64)
        })
        .collect()
}

/// `sum_{v in B_l1(n)} gcd(Omega v^T + kappa)`: twisted classes over the
/// points with nonzero modulus. Points where the modulus vanishes carry
/// singleton classes, one per `c`-power reached, and are returned
/// separately for the caller to count.
pub fn twisted_offset_sum(f: &Automorphism, n: u64) -> Result<(u128, Vec<Vec<i64>>)> {
    require_central_twist(f)?;
    let mut total: u128 = 0;
    let mut singular = Vec::new();
    for v in l1_ball_points(f.spec().abelian_rank(), n) {
        match f.structural_modulus(&v)?.expect("M = I") {
            0 => singular.push(v),
            m => total += m as u128,
        }
    }
    Ok((total, singular))
}

/// Number of abelian points in the `l1` ball, for comparison with the
/// offset sum.
pub fn abelian_points(spec: &GroupSpec, n: u64) -> Result<u128> {
    Ok(l1_ball_count(spec.abelian_rank(), n)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub order: u32,
    pub radius: u32,
    pub conjugator_radius: u32,
    pub counts: Vec<u64>,
    pub counts_wider: Vec<u64>,
    pub stable: bool,
}

/// Conjugacy growth of `G = H x| <t>` with `t^k = 1` and `t^-1 h t = f(h)`,
/// generated by `gens` and `t`. The element `t^i h` has length
/// `|h| + min(i, k - i)`. Conjugating by `x in H` sends `t^i h` to
/// `t^i f^i(x) h x^-1` and conjugating by `t` moves `h` along `f`.
pub fn extension_conjugacy_growth(
    gens: &GeneratingSet,
    f: &Automorphism,
    order: u32,
    n: u32,
    conjugator_radius: u32,
    budget: usize,
) -> Result<ExtensionReport> {
    if order == 0 {
        return Err(NilError::Usage("extension order must be positive".into()));
    }
    if !f.power(order)?.is_identity() {
        return Err(CoreError::Structural(format!("automorphism does not have order dividing {order}")).into());
    }
    let spec = f.spec();
    let table = enumerate_ball(spec, gens, n.max(conjugator_radius + 2), budget)?;
    let run = |radius: u32| -> Result<Vec<u64>> {
        let conj: Vec<GroupElement> = table.within(radius).cloned().collect();
        let mut counts = vec![0u64; n as usize + 1];
        for i in 0..order {
            let shift = i.min(order - i);
            if shift > n {
                continue;
            }
            let limit = n - shift;
            let fi = f.power(i)?;
            let roots = close(&table, limit, &twisted_pairs(&fi, &conj)?, Some(f), spec)?;
            let per = counts_by_radius(&table, &roots, limit);
            for m in shift..=n {
                counts[m as usize] += per[(m - shift) as usize];
            }
        }
        Ok(counts)
    };
    let counts = run(conjugator_radius)?;
    let counts_wider = run(conjugator_radius + 2)?;
    Ok(ExtensionReport {
        order,
        radius: n,
        conjugator_radius,
        stable: counts == counts_wider,
        counts,
        counts_wider,
    })
}

/// `gamma(v)`, the `c`-exponent of `f(lift(v))`; for `M = I` it is the
/// linear functional `v -> kappa . v`.
pub fn sampled_gamma(f: &Automorphism, v: &[i64]) -> Result<i64> {
    Ok(f.gamma(&AbelianVector::new(v))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::DEFAULT_BUDGET;
    use crate::conjugacy::conjugacy_growth;
    use nilgrowth_core::IntMatrix;

    fn h1() -> GroupSpec {
        GroupSpec::new(0, 1, &[]).unwrap()
    }

    fn auto(spec: &GroupSpec, rows: &[[i64; 2]], kappa: [i64; 2]) -> Automorphism {
        let m = IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        Automorphism::new(spec, m, kappa.to_vec()).unwrap()
    }

    #[test]
    fn identity_twist_is_ordinary_conjugacy() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        let id = Automorphism::identity(&spec);
        let report = twisted_growth_bruteforce(&gens, &id, 5, 7, DEFAULT_BUDGET).unwrap();
        assert!(report.stable);
        assert_eq!(report.counts, conjugacy_growth(&spec, &gens, 5, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn central_twist_structural_matches_bruteforce() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        let f = auto(&spec, &[[1, 0], [0, 1]], [1, 0]);
        let brute = twisted_growth_bruteforce(&gens, &f, 5, 7, DEFAULT_BUDGET).unwrap();
        let table = enumerate_ball(&spec, &gens, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(brute.counts, twisted_growth_structural(&f, &table).unwrap());
    }

    #[test]
    fn structural_rejects_nontrivial_matrix() {
        let spec = h1();
        let swap = auto(&spec, &[[0, 1], [1, 0]], [0, 0]);
        assert!(twisted_key(&swap, &spec.identity()).is_err());
    }

    #[test]
    fn trivial_extension_doubles_shifted() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        let id = Automorphism::identity(&spec);
        let ext = extension_conjugacy_growth(&gens, &id, 2, 5, 7, DEFAULT_BUDGET).unwrap();
        let base = conjugacy_growth(&spec, &gens, 5, DEFAULT_BUDGET).unwrap();
        for m in 0..=5usize {
            let expected = base[m] + if m >= 1 { base[m - 1] } else { 0 };
            assert_eq!(ext.counts[m], expected, "m = {m}");
        }
        let one = extension_conjugacy_growth(&gens, &id, 1, 5, 7, DEFAULT_BUDGET).unwrap();
        assert_eq!(one.counts, base);
    }

    #[test]
    fn wrong_order_rejected() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        let swap = auto(&spec, &[[0, 1], [1, 0]], [0, 0]);
        assert!(extension_conjugacy_growth(&gens, &swap, 3, 3, 5, DEFAULT_BUDGET).is_err());
    }
}

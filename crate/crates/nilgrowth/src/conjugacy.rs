//! Conjugacy growth: exact counts from class keys, an independent
//! orbit-closure oracle, the gcd-sum sandwich, the length window and the
//! direct-product inequalities.

use std::collections::BTreeMap;

use nilgrowth_core::class::{central_growth_lower, central_growth_upper};
use nilgrowth_core::gcdsum::{gcd_sum_divisor, l1_ball_count, BallNorm, LatticeBallSpec};
use nilgrowth_core::{AbelianVector, ConjClassKey, Error as CoreError, GroupSpec};
use petgraph::unionfind::UnionFind;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::ball::{enumerate_ball, BallTable, GeneratingSet};
use crate::error::{NilError, Result};

/// Largest radius accepted by the oracle.
pub const ORACLE_GUARD: u32 = 10;

/// `c(m)` for `m = 0..=radius` from the distinct class keys in each ball.
pub fn conjugacy_growth_exact(spec: &GroupSpec, table: &BallTable) -> Result<Vec<u64>> {
    let mut seen: FxHashSet<ConjClassKey> = FxHashSet::default();
    let mut out = Vec::with_capacity(table.radius() as usize + 1);
    for l in 0..=table.radius() {
        for g in table.level(l) {
            seen.insert(spec.class_key(g)?);
        }
        out.push(seen.len() as u64);
    }
    Ok(out)
}

pub fn conjugacy_growth(spec: &GroupSpec, gens: &GeneratingSet, n: u32, budget: usize) -> Result<Vec<u64>> {
    conjugacy_growth_exact(spec, &enumerate_ball(spec, gens, n, budget)?)
}

/// Partition of a ball into the orbits of conjugation by generators,
/// closed inside a ball two steps larger.
pub struct OraclePartition {
    radius: u32,
    table: BallTable,
    roots: Vec<usize>,
}

impl OraclePartition {
    pub fn new(spec: &GroupSpec, gens: &GeneratingSet, n: u32, budget: usize) -> Result<Self> {
        if n > ORACLE_GUARD {
            return Err(NilError::Usage(format!("oracle radius {n} exceeds guard {ORACLE_GUARD}")));
        }
        let table = enumerate_ball(spec, gens, n + 2, budget)?;
        let mut uf = UnionFind::<usize>::new(table.len());
        for idx in 0..table.len() {
            let g = table.get(idx);
            for x in gens.moves() {
                let y = spec.conjugate(x, g)?;
                if let Some(j) = table.index_of(&y) {
                    uf.union(idx, j);
                }
            }
        }
        let roots = uf.into_labeling();
        Ok(Self { radius: n, table, roots })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// The closure ball (radius `n + 2`).
    pub fn table(&self) -> &BallTable {
        &self.table
    }

    pub fn root(&self, index: usize) -> usize {
        self.roots[index]
    }

    pub fn growth(&self) -> Vec<u64> {
        let mut seen: FxHashSet<usize> = FxHashSet::default();
        (0..=self.radius)
            .map(|m| {
                let lo = if m == 0 { 0 } else { self.table.count_within(m - 1) };
                for i in lo..self.table.count_within(m) {
                    seen.insert(self.roots[i]);
                }
                seen.len() as u64
            })
            .collect()
    }
}

pub fn conjugacy_growth_oracle(spec: &GroupSpec, gens: &GeneratingSet, n: u32, budget: usize) -> Result<Vec<u64>> {
    Ok(OraclePartition::new(spec, gens, n, budget)?.growth())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsRow {
    pub m: u32,
    pub lower: u128,
    pub upper: u128,
    /// Whether `beta_<c>(m)` came from BFS rather than the quadratic window.
    pub central_exact: bool,
}

fn require_plain_heisenberg(spec: &GroupSpec) -> Result<()> {
    if spec.is_plain_heisenberg() {
        Ok(())
    } else {
        Err(CoreError::Domain(format!("{spec} is not H_r: the bound needs s = 0 and trivial D")).into())
    }
}

fn gcd_sum_l1(dim: usize, radius: i64) -> Result<u128> {
    if radius < 0 {
        return Ok(0);
    }
    Ok(gcd_sum_divisor(&LatticeBallSpec::centred(dim, radius as u64, BallNorm::L1))?)
}

/// `beta_<c>(m) + sum_{B(m-2)} g <= c(m) <= beta_<c>(m) + sum_{B(m)} g` for
/// `H_r`. `central_exact[m]` supplies BFS values of `beta_<c>` where known;
/// beyond that the quadratic lower and upper window is used.
pub fn conjugacy_growth_bounds(spec: &GroupSpec, n: u32, central_exact: &[u64]) -> Result<Vec<BoundsRow>> {
    require_plain_heisenberg(spec)?;
    let dim = spec.abelian_rank();
    (0..=n)
        .map(|m| {
            let (c_lo, c_hi, exact) = match central_exact.get(m as usize) {
                Some(&v) => (v as u128, v as u128, true),
                None => (central_growth_lower(m as u64), central_growth_upper(spec, m as u64), false),
            };
            Ok(BoundsRow {
                m,
                lower: c_lo + gcd_sum_l1(dim, m as i64 - 2)?,
                upper: c_hi + gcd_sum_l1(dim, m as i64)?,
                central_exact: exact,
            })
        })
        .collect()
}

/// Integer points of the `l1` ball in `Z^dim`.
pub fn l1_ball_points(dim: usize, radius: u64) -> Vec<Vec<i64>> {
    fn rec(dim: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for x in -left..=left {
            prefix.push(x);
            rec(dim, left - x.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, radius as i64, &mut Vec::with_capacity(dim), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowViolation {
    pub abel: Vec<i64>,
    pub resid: i64,
    pub length: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub radius: u32,
    pub classes_checked: usize,
    /// Classes whose length falls outside `[|a|_1, |a|_1 + 2]`.
    pub violations: Vec<WindowViolation>,
    /// Classes with `|a|_1 <= n - 2` that never appear in the ball.
    pub missing: Vec<(Vec<i64>, i64)>,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.missing.is_empty()
    }
}

/// Checks that every non-central class in the ball has length in
/// `[|a|_1, |a|_1 + 2]`. BFS order means the first member seen carries the
/// class length.
pub fn conjugacy_length_window_check(spec: &GroupSpec, table: &BallTable) -> Result<WindowReport> {
    require_plain_heisenberg(spec)?;
    let mut length: FxHashMap<ConjClassKey, u32> = FxHashMap::default();
    for (g, l) in table.entries() {
        if g.is_central_power() {
            continue;
        }
        length.entry(spec.class_key(g)?).or_insert(l);
    }
    let mut report = WindowReport {
        radius: table.radius(),
        classes_checked: length.len(),
        ..Default::default()
    };
    let mut sorted: Vec<_> = length.iter().collect();
    sorted.sort();
    for (key, &l) in sorted {
        let norm = key.abel.l1_norm() as u32;
        if l < norm || l > norm + 2 {
            report.violations.push(WindowViolation {
                abel: key.abel.as_slice().to_vec(),
                resid: key.resid,
                length: l,
            });
        }
    }
    if table.radius() >= 2 {
        for v in l1_ball_points(spec.abelian_rank(), table.radius() as u64 - 2) {
            let abel = AbelianVector::new(&v);
            if abel.is_zero() {
                continue;
            }
            let modulus = spec.class_modulus(&abel)?;
            for resid in 0..modulus {
                let key = ConjClassKey {
                    abel: abel.clone(),
                    resid,
                };
                if !length.contains_key(&key) {
                    report.missing.push((v.clone(), resid));
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassStructureReport {
    pub radius: u32,
    pub cosets: usize,
    /// Cosets containing a full run of `class_modulus` consecutive `k`.
    pub full_period_cosets: usize,
    pub violations: Vec<String>,
}

impl ClassStructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every coset `a<c>` with `a != 0` meeting the `n`-ball: the number of
/// distinct keys and of oracle classes in the intersection is at most the
/// class modulus, the two agree, and both equal it when the intersection
/// holds a full period.
pub fn class_structure_check(spec: &GroupSpec, oracle: &OraclePartition) -> Result<ClassStructureReport> {
    let table = oracle.table();
    let n = oracle.radius();
    let mut cosets: BTreeMap<AbelianVector, Vec<(i64, usize)>> = BTreeMap::new();
    for idx in 0..table.count_within(n) {
        let g = table.get(idx);
        if !g.is_central_power() {
            cosets.entry(g.abelian()).or_default().push((g.k(), oracle.root(idx)));
        }
    }
    let mut report = ClassStructureReport {
        radius: n,
        cosets: cosets.len(),
        ..Default::default()
    };
    for (abel, mut members) in cosets {
        let modulus = spec.class_modulus(&abel)?;
        members.sort();
        // Central cosets (lattice directions) split into singletons.
        let key = |k: i64| if modulus == 0 { k } else { k.rem_euclid(modulus) };
        let keys: FxHashSet<i64> = members.iter().map(|(k, _)| key(*k)).collect();
        let classes: FxHashSet<usize> = members.iter().map(|(_, r)| *r).collect();
        let ks: Vec<i64> = members.iter().map(|(k, _)| *k).collect();
        let full = modulus > 0 && ks.windows(modulus as usize).any(|w| w[w.len() - 1] - w[0] == modulus - 1);
        if full {
            report.full_period_cosets += 1;
        }
        let tag = format!("coset {:?} (modulus {modulus})", abel.as_slice());
        if modulus > 0 && keys.len() as i64 > modulus {
            report.violations.push(format!("{tag}: {} keys", keys.len()));
        }
        if classes.len() != keys.len() {
            report
                .violations
                .push(format!("{tag}: {} oracle classes vs {} keys", classes.len(), keys.len()));
        }
        if full && keys.len() as i64 != modulus {
            report.violations.push(format!("{tag}: full period but {} keys", keys.len()));
        }
    }
    Ok(report)
}

/// A direct factor: a free abelian lattice or one of our groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Lattice(usize),
    Group(GroupSpec),
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Factor::Lattice(s) => write!(f, "Z^{s}"),
            Factor::Group(spec) => write!(f, "{spec}"),
        }
    }
}

/// Conjugacy growth of a factor with its standard generators.
pub fn factor_conjugacy_growth(factor: &Factor, n: u32, budget: usize) -> Result<Vec<u64>> {
    match factor {
        Factor::Lattice(dim) => (0..=n)
            .map(|m| {
                let c = l1_ball_count(*dim, m as u64)?;
                u64::try_from(c).map_err(|_| CoreError::Overflow.into())
            })
            .collect(),
        Factor::Group(spec) => conjugacy_growth(spec, &GeneratingSet::standard(spec), n, budget),
    }
}

/// Classes of `A x B` are pairs of classes and lengths add, so
/// `c_{AxB}(m) = sum_{p + q <= m} sigma_A(p) sigma_B(q)` with `sigma` the
/// class counts by exact length.
pub fn product_conjugacy_growth(ca: &[u64], cb: &[u64], n: u32) -> Vec<u64> {
    let sphere = |c: &[u64], p: usize| if p == 0 { c[0] } else { c[p] - c[p - 1] };
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0u64;
    for m in 0..=n as usize {
        for p in 0..=m {
            if p < ca.len() && m - p < cb.len() {
                acc += sphere(ca, p) * sphere(cb, m - p);
            }
        }
        out.push(acc);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub factor_a: String,
    pub factor_b: String,
    pub radius: u32,
    pub growth_a: Vec<u64>,
    pub growth_b: Vec<u64>,
    pub growth_product: Vec<u64>,
    /// `m` where `c_A(m) c_B(m) <= c_{AxB}(2m)` fails.
    pub lower_failures: Vec<u32>,
    /// `m` where `c_{AxB}(m) <= c_A(m) c_B(m)` fails.
    pub upper_failures: Vec<u32>,
}

impl ProductReport {
    pub fn passed(&self) -> bool {
        self.lower_failures.is_empty() && self.upper_failures.is_empty()
    }
}

pub fn direct_product_inequality_check(a: &Factor, b: &Factor, n: u32, budget: usize) -> Result<ProductReport> {
    let ca = factor_conjugacy_growth(a, 2 * n, budget)?;
    let cb = factor_conjugacy_growth(b, 2 * n, budget)?;
    let cab = product_conjugacy_growth(&ca, &cb, 2 * n);
    let mut report = ProductReport {
        factor_a: a.to_string(),
        factor_b: b.to_string(),
        radius: n,
        growth_a: ca[..=n as usize].to_vec(),
        growth_b: cb[..=n as usize].to_vec(),
        growth_product: cab[..=n as usize].to_vec(),
        lower_failures: Vec::new(),
        upper_failures: Vec::new(),
    };
    for m in 0..=n as usize {
        if ca[m] * cb[m] > cab[2 * m] {
            report.lower_failures.push(m as u32);
        }
        if cab[m] > ca[m] * cb[m] {
            report.upper_failures.push(m as u32);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::DEFAULT_BUDGET;

    fn h1() -> GroupSpec {
        GroupSpec::new(0, 1, &[]).unwrap()
    }

    #[test]
    fn exact_small_values() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        let c = conjugacy_growth(&spec, &gens, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(c[0], 1);
        assert_eq!(c[1], 5);
        assert!(c.windows(2).all(|w| w[0] <= w[1]));
        let table = enumerate_ball(&spec, &gens, 3, DEFAULT_BUDGET).unwrap();
        for (m, &v) in c.iter().enumerate() {
            assert!(v <= table.cumulative()[m]);
        }
    }

    #[test]
    fn oracle_agrees_on_h1() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        assert_eq!(
            conjugacy_growth_oracle(&spec, &gens, 6, DEFAULT_BUDGET).unwrap(),
            conjugacy_growth(&spec, &gens, 6, DEFAULT_BUDGET).unwrap()
        );
        assert!(conjugacy_growth_oracle(&spec, &gens, ORACLE_GUARD + 1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn bounds_at_zero_and_scope() {
        let spec = h1();
        let rows = conjugacy_growth_bounds(&spec, 0, &[1]).unwrap();
        assert_eq!((rows[0].lower, rows[0].upper), (1, 1));
        assert!(conjugacy_growth_bounds(&GroupSpec::new(0, 2, &[2]).unwrap(), 3, &[]).is_err());
        assert!(conjugacy_growth_bounds(&GroupSpec::new(1, 1, &[]).unwrap(), 3, &[]).is_err());
    }

    #[test]
    fn window_on_small_ball() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        let table = enumerate_ball(&spec, &gens, 5, DEFAULT_BUDGET).unwrap();
        let report = conjugacy_length_window_check(&spec, &table).unwrap();
        assert!(report.passed(), "{report:?}");
        let a3 = spec.element(&[], &[(3, 0)], 0).unwrap();
        assert_eq!(table.length_of(&a3), Some(3));
    }

    #[test]
    fn l1_points_count() {
        assert_eq!(l1_ball_points(2, 3).len(), 25);
        assert_eq!(l1_ball_points(4, 2).len() as u128, l1_ball_count(4, 2).unwrap());
    }

    #[test]
    fn lattice_product_of_lines() {
        let z = Factor::Lattice(1);
        let report = direct_product_inequality_check(&z, &z, 5, DEFAULT_BUDGET).unwrap();
        assert!(report.passed());
        for m in 0..=5u64 {
            assert_eq!(report.growth_a[m as usize], 2 * m + 1);
            assert_eq!(report.growth_product[m as usize] as u128, l1_ball_count(2, m).unwrap());
        }
    }

    #[test]
    fn product_formula_matches_bfs_for_z_times_h1() {
        let n = 5;
        let direct = conjugacy_growth(
            &GroupSpec::new(1, 1, &[]).unwrap(),
            &GeneratingSet::standard(&GroupSpec::new(1, 1, &[]).unwrap()),
            n,
            DEFAULT_BUDGET,
        )
        .unwrap();
        let cz = factor_conjugacy_growth(&Factor::Lattice(1), n, DEFAULT_BUDGET).unwrap();
        let ch = factor_conjugacy_growth(&Factor::Group(h1()), n, DEFAULT_BUDGET).unwrap();
        assert_eq!(product_conjugacy_growth(&cz, &ch, n), direct);
    }
}

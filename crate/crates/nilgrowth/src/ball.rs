//! Breadth-first enumeration of word-metric balls.

use indexmap::IndexSet;
use nilgrowth_core::{Error as CoreError, GroupElement, GroupSpec};
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;

use crate::error::{NilError, Result};

/// Default cap on the number of stored ball elements.
pub const DEFAULT_BUDGET: usize = 100_000_000;

type ElementSet = IndexSet<GroupElement, FxBuildHasher>;

/// A finite generating set. Inverses are added automatically and the
/// identity is dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    label: String,
    gens: Vec<GroupElement>,
    moves: Vec<GroupElement>,
}

impl GeneratingSet {
    pub fn new(spec: &GroupSpec, gens: Vec<GroupElement>, label: impl Into<String>) -> Result<Self> {
        if gens.is_empty() {
            return Err(NilError::Usage("generating set is empty".into()));
        }
        let mut moves: Vec<GroupElement> = Vec::with_capacity(2 * gens.len());
        for g in &gens {
            spec.check(g)?;
            for m in [g.clone(), spec.inverse(g)?] {
                if !m.is_identity() && !moves.contains(&m) {
                    moves.push(m);
                }
            }
        }
        if moves.is_empty() {
            return Err(NilError::Usage("generating set has only the identity".into()));
        }
        Ok(Self {
            label: label.into(),
            gens,
            moves,
        })
    }

    /// `{z_1, .., z_s, a_1, b_1, .., a_r, b_r}`.
    pub fn standard(spec: &GroupSpec) -> Self {
        Self::new(spec, spec.standard_generators(), "standard").expect("standard generators are valid")
    }

    /// Standard generators together with the central generator `c`.
    pub fn standard_with_central(spec: &GroupSpec) -> Self {
        let mut gens = spec.standard_generators();
        gens.push(spec.central(1));
        Self::new(spec, gens, "standard+c").expect("valid generators")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gens(&self) -> &[GroupElement] {
        &self.gens
    }

    /// Generators and their inverses, in the order BFS applies them.
    pub fn moves(&self) -> &[GroupElement] {
        &self.moves
    }
}

/// The ball of radius `n` with every element's word length.
#[derive(Clone, Debug)]
pub struct BallTable {
    elements: ElementSet,
    /// Level `l` occupies `level_start[l]..level_start[l + 1]`.
    level_start: Vec<usize>,
}

impl PartialEq for BallTable {
    fn eq(&self, other: &Self) -> bool {
        self.level_start == other.level_start && self.elements.iter().eq(other.elements.iter())
    }
}

impl BallTable {
    pub fn radius(&self) -> u32 {
        (self.level_start.len() - 2) as u32
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sphere_sizes(&self) -> Vec<u64> {
        self.level_start.windows(2).map(|w| (w[1] - w[0]) as u64).collect()
    }

    /// `beta(m)` for `m = 0..=radius`.
    pub fn cumulative(&self) -> Vec<u64> {
        self.level_start[1..].iter().map(|&x| x as u64).collect()
    }

    /// Number of elements of length at most `m`.
    pub fn count_within(&self, m: u32) -> usize {
        self.level_start[(m.min(self.radius()) + 1) as usize]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.get_index_of(g)
    }

    pub fn get(&self, index: usize) -> &GroupElement {
        &self.elements[index]
    }

    /// Word length of the element stored at `index`.
    pub fn length_at(&self, index: usize) -> u32 {
        (self.level_start.partition_point(|&s| s <= index) - 1) as u32
    }

    pub fn length_of(&self, g: &GroupElement) -> Option<u32> {
        self.index_of(g).map(|i| self.length_at(i))
    }

    pub fn level(&self, l: u32) -> impl Iterator<Item = &GroupElement> {
        let l = l as usize;
        self.elements.as_slice()[self.level_start[l]..self.level_start[l + 1]].iter()
    }

    pub fn within(&self, m: u32) -> impl Iterator<Item = &GroupElement> {
        self.elements.as_slice()[..self.count_within(m)].iter()
    }

    /// `(element, length)` in BFS order.
    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, u32)> {
        (0..=self.radius()).flat_map(move |l| self.level(l).map(move |g| (g, l)))
    }
}

/// Incremental BFS, one level per step.
pub struct BallBuilder<'a> {
    spec: &'a GroupSpec,
    gens: &'a GeneratingSet,
    budget: usize,
    parallel: bool,
    elements: ElementSet,
    level_start: Vec<usize>,
}

impl<'a> BallBuilder<'a> {
    pub fn new(spec: &'a GroupSpec, gens: &'a GeneratingSet, budget: usize, parallel: bool) -> Self {
        let mut elements = ElementSet::default();
        elements.insert(spec.identity());
        Self {
            spec,
            gens,
            budget,
            parallel,
            elements,
            level_start: vec![0, 1],
        }
    }

    pub fn radius(&self) -> u32 {
        (self.level_start.len() - 2) as u32
    }

    fn frontier(&self) -> std::ops::Range<usize> {
        let n = self.level_start.len();
        self.level_start[n - 2]..self.level_start[n - 1]
    }

    fn candidates(&self, idx: usize) -> std::result::Result<Vec<GroupElement>, CoreError> {
        let g = &self.elements[idx];
        let mut out = Vec::new();
        for m in self.gens.moves() {
            let h = self.spec.multiply(g, m)?;
            if !self.elements.contains(&h) {
                out.push(h);
            }
        }
        Ok(out)
    }

    /// Adds the next sphere. Products are merged in (frontier order,
    /// generator order), so the parallel and sequential paths insert the
    /// same elements in the same order.
    pub fn step(&mut self) -> Result<std::ops::Range<usize>> {
        let frontier = self.frontier();
        let start = self.elements.len();
        if self.parallel {
            let batches: Vec<Vec<GroupElement>> = frontier
                .into_par_iter()
                .map(|i| self.candidates(i))
                .collect::<std::result::Result<_, _>>()?;
            for h in batches.into_iter().flatten() {
                self.elements.insert(h);
                self.check_budget()?;
            }
        } else {
            for i in frontier {
                for h in self.candidates(i)? {
                    self.elements.insert(h);
                }
                self.check_budget()?;
            }
        }
        let end = self.elements.len();
        self.level_start.push(end);
        Ok(start..end)
    }

    fn check_budget(&self) -> Result<()> {
        if self.elements.len() > self.budget {
            return Err(CoreError::Budget {
                needed: self.elements.len() as u128,
                budget: self.budget as u128,
            }
            .into());
        }
        Ok(())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }

    pub fn get(&self, index: usize) -> &GroupElement {
        &self.elements[index]
    }

    pub fn finish(self) -> BallTable {
        BallTable {
            elements: self.elements,
            level_start: self.level_start,
        }
    }
}

pub fn enumerate_ball(spec: &GroupSpec, gens: &GeneratingSet, n: u32, budget: usize) -> Result<BallTable> {
    build(spec, gens, n, budget, false)
}

/// Same table as [`enumerate_ball`], expanding each frontier in parallel.
pub fn enumerate_ball_parallel(spec: &GroupSpec, gens: &GeneratingSet, n: u32, budget: usize) -> Result<BallTable> {
    build(spec, gens, n, budget, true)
}

fn build(spec: &GroupSpec, gens: &GeneratingSet, n: u32, budget: usize, parallel: bool) -> Result<BallTable> {
    let mut builder = BallBuilder::new(spec, gens, budget, parallel);
    for _ in 0..n {
        builder.step()?;
    }
    Ok(builder.finish())
}

/// Word length of `g`, or `None` when it exceeds `cutoff`.
pub fn word_length(
    spec: &GroupSpec,
    gens: &GeneratingSet,
    g: &GroupElement,
    cutoff: u32,
    budget: usize,
) -> Result<Option<u32>> {
    spec.check(g)?;
    let mut builder = BallBuilder::new(spec, gens, budget, false);
    if builder.contains(g) {
        return Ok(Some(0));
    }
    for l in 1..=cutoff {
        builder.step()?;
        if builder.contains(g) {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// `beta_<c>(m)` for `m = 0..=radius`: how many `c^k` lie in the `m`-ball.
pub fn central_growth(table: &BallTable) -> Vec<u64> {
    let mut acc = 0u64;
    (0..=table.radius())
        .map(|l| {
            acc += table.level(l).filter(|g| g.is_central_power()).count() as u64;
            acc
        })
        .collect()
}

/// Least-squares slope of `log values[n]` against `log n` for `n` in
/// `window`.
pub fn growth_exponent_fit(values: &[u64], window: std::ops::RangeInclusive<usize>) -> Result<f64> {
    let pts: Vec<(f64, f64)> = window
        .clone()
        .filter(|&n| n < values.len())
        .map(|n| (n as f64, values[n] as f64))
        .collect();
    if pts.len() < 3 || pts.len() != window.count() {
        return Err(NilError::Usage("growth fit needs at least 3 points inside the table".into()));
    }
    if pts.iter().any(|&(n, v)| n <= 0.0 || v <= 0.0) {
        return Err(NilError::Usage("growth fit needs positive n and values".into()));
    }
    Ok(loglog_slope(&pts))
}

pub(crate) fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Whether the `radius`-ball contains every standard generator. Generation
/// by an arbitrary set is only checked this way.
pub fn reaches_standard_generators(
    spec: &GroupSpec,
    gens: &GeneratingSet,
    radius: u32,
    budget: usize,
) -> Result<bool> {
    let table = enumerate_ball(spec, gens, radius, budget)?;
    Ok(spec.standard_generators().iter().all(|g| table.index_of(g).is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> GroupSpec {
        GroupSpec::new(0, 1, &[]).unwrap()
    }

    #[test]
    fn small_balls() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        assert_eq!(gens.moves().len(), 4);
        let t = enumerate_ball(&spec, &gens, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.cumulative(), vec![1, 5]);
        let t4 = enumerate_ball(&spec, &gens, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(t4.length_of(&spec.central(1)), Some(4));
        assert_eq!(t4.length_of(&spec.identity()), Some(0));
        let cum = t4.cumulative();
        assert!(cum.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(cum.iter().copied().last().unwrap() as usize, t4.len());
        assert_eq!(t4.sphere_sizes().iter().sum::<u64>() as usize, t4.len());
    }

    #[test]
    fn parallel_matches_sequential() {
        for spec in [h1(), GroupSpec::new(1, 2, &[2]).unwrap()] {
            let gens = GeneratingSet::standard(&spec);
            let a = enumerate_ball(&spec, &gens, 5, DEFAULT_BUDGET).unwrap();
            let b = enumerate_ball_parallel(&spec, &gens, 5, DEFAULT_BUDGET).unwrap();
            assert_eq!(a, b);
            assert!(a.elements.iter().eq(b.elements.iter()));
        }
    }

    #[test]
    fn budget_error() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        let err = enumerate_ball(&spec, &gens, 6, 50).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn word_lengths() {
        let spec = h1();
        let gens = GeneratingSet::standard(&spec);
        assert_eq!(word_length(&spec, &gens, &spec.identity(), 3, DEFAULT_BUDGET).unwrap(), Some(0));
        let c4 = spec.central(4);
        let len = word_length(&spec, &gens, &c4, 8, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(len <= 8);
        assert_eq!(word_length(&spec, &gens, &spec.central(1), 3, DEFAULT_BUDGET).unwrap(), None);
    }

    #[test]
    fn exponent_of_exact_power() {
        let values: Vec<u64> = (0..40u64).map(|n| n.pow(4)).collect();
        let slope = growth_exponent_fit(&values, 5..=30).unwrap();
        assert!((slope - 4.0).abs() < 1e-6);
        assert!(growth_exponent_fit(&values, 1..=2).is_err());
        assert!(growth_exponent_fit(&values, 0..=5).is_err());
    }

    #[test]
    fn exponent_of_log_factor() {
        let values: Vec<u64> = (0..=100u64).map(|n| n * n * ((n.max(1) as f64).ln().ceil() as u64)).collect();
        let slope = growth_exponent_fit(&values, 10..=100).unwrap();
        assert!(slope > 2.0 && slope < 2.5, "{slope}");
    }

    #[test]
    fn generation_check() {
        let spec = h1();
        let gens = GeneratingSet::standard_with_central(&spec);
        assert!(reaches_standard_generators(&spec, &gens, 1, DEFAULT_BUDGET).unwrap());
        let only_a = GeneratingSet::new(&spec, vec![spec.generator(0)], "a").unwrap();
        assert!(!reaches_standard_generators(&spec, &only_a, 4, DEFAULT_BUDGET).unwrap());
    }
}

//! The invariant suite behind `nilgrowth verify`: seeded arithmetic fuzz,
//! relators, automorphism checks and brute-force comparisons of every
//! counting routine against its oracle.

use nilgrowth_core::{Automorphism, GroupElement, GroupSpec, IntMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ball::{central_growth, enumerate_ball, enumerate_ball_parallel, GeneratingSet};
use crate::conjugacy::{
    class_structure_check, conjugacy_growth_bounds, conjugacy_growth_exact, conjugacy_length_window_check,
    OraclePartition,
};
use crate::error::Result;
use crate::twisted::twisted_growth_bruteforce;

pub const FUZZ_SEED: u64 = 0x6e11_9c0f;
const COORD_RANGE: i64 = 50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub spec: String,
    pub quick: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn random_element(spec: &GroupSpec, rng: &mut impl Rng, range: i64) -> GroupElement {
    let coords: Vec<i64> = (0..spec.coord_len()).map(|_| rng.gen_range(-range..=range)).collect();
    spec.from_coords(&coords).expect("coordinate count matches")
}

/// Failures of `(gh)k = g(hk)` over `trials` seeded triples.
pub fn associativity_fuzz(spec: &GroupSpec, trials: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let g = random_element(spec, &mut rng, COORD_RANGE);
        let h = random_element(spec, &mut rng, COORD_RANGE);
        let k = random_element(spec, &mut rng, COORD_RANGE);
        let left = spec.multiply(&spec.multiply(&g, &h)?, &k)?;
        let right = spec.multiply(&g, &spec.multiply(&h, &k)?)?;
        let inv = spec.multiply(&g, &spec.inverse(&g)?)?;
        if left != right || !inv.is_identity() {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Failed defining relations: `[a_t, b_t] = c^{w_t}`, every other pair of
/// generators commutes, and `c` and the lattice generators are central.
pub fn relator_failures(spec: &GroupSpec) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let gens = spec.standard_generators();
    let s = spec.s();
    let c = spec.central(1);
    for (x, g) in gens.iter().enumerate() {
        for (y, h) in gens.iter().enumerate().skip(x + 1) {
            let comm = spec.commutator(g, h)?;
            let paired = x >= s && y == x + 1 && (x - s) % 2 == 0;
            let expected = if paired {
                spec.central(spec.weights()[(x - s) / 2])
            } else {
                spec.identity()
            };
            if comm != expected {
                out.push(format!("[x{x}, x{y}] = {comm:?}"));
            }
        }
        if !spec.commutator(&c, g)?.is_identity() {
            out.push(format!("c does not commute with x{x}"));
        }
    }
    Ok(out)
}

/// Identity, negation, the simultaneous block swap, a shear on the first
/// block, a central twist, and for `s > 0` a shear into the lattice.
pub fn standard_automorphisms(spec: &GroupSpec) -> Result<Vec<(String, Automorphism)>> {
    let n = spec.abelian_rank();
    let s = spec.s();
    let mut out = Vec::new();
    for name in ["identity", "neg", "swap", "twist"] {
        let f = crate::io::builtin_automorphism(spec, name)?.expect("built-in name");
        out.push((name.to_string(), f));
    }
    let mut shear = IntMatrix::identity(n);
    shear.set(s, s + 1, 1);
    out.push(("shear".into(), Automorphism::new(spec, shear, vec![0; n])?));
    if s > 0 {
        let mut into_lattice = IntMatrix::identity(n);
        into_lattice.set(s, 0, 1);
        let mut kappa = vec![0; n];
        kappa[0] = 2;
        out.push(("lattice_shear".into(), Automorphism::new(spec, into_lattice, kappa)?));
    }
    Ok(out)
}

/// Failures of the homomorphism law, of `theta(f)` on the abelianisation,
/// and of `f^-1 f = id`, over `trials` seeded pairs.
pub fn automorphism_fuzz(f: &Automorphism, trials: usize, seed: u64) -> Result<usize> {
    let spec = f.spec();
    let inv = f.inverse()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let g = random_element(spec, &mut rng, COORD_RANGE);
        let h = random_element(spec, &mut rng, COORD_RANGE);
        let hom = f.apply(&spec.multiply(&g, &h)?)? == spec.multiply(&f.apply(&g)?, &f.apply(&h)?)?;
        let theta = f.apply(&g)?.abelian_coords() == f.matrix().left_apply(g.abelian_coords())?.as_slice();
        let back = inv.apply(&f.apply(&g)?)? == g;
        if !(hom && theta && back) {
            failures += 1;
        }
    }
    Ok(failures)
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Runs every check that applies to `spec`. `quick` shrinks radii and trial
/// counts so the whole suite takes seconds.
pub fn run_suite(spec: &GroupSpec, quick: bool, budget: usize) -> Result<VerifyReport> {
    let trials = if quick { 1_000 } else { 10_000 };
    let radius: u32 = match (quick, spec.abelian_rank()) {
        (true, _) => 4,
        (false, d) if d <= 2 => 8,
        (false, d) if d <= 4 => 6,
        _ => 5,
    };
    let mut suite = Suite { checks: Vec::new() };

    let fails = associativity_fuzz(spec, trials, FUZZ_SEED)?;
    suite.record("associativity", fails == 0, format!("{fails} failures in {trials} triples"));
    let rel = relator_failures(spec)?;
    suite.record("relators", rel.is_empty(), rel.join("; "));

    for (i, (name, f)) in standard_automorphisms(spec)?.into_iter().enumerate() {
        let fails = automorphism_fuzz(&f, trials / 10, FUZZ_SEED + i as u64)?;
        suite.record(format!("automorphism {name}"), fails == 0, format!("{fails} failures"));
    }

    let gens = GeneratingSet::standard(spec);
    let table = enumerate_ball(spec, &gens, radius, budget)?;
    let par = enumerate_ball_parallel(spec, &gens, radius, budget)?;
    suite.record("parallel ball", table == par, format!("{} elements", table.len()));

    let mut pred_bad = 0;
    for (g, l) in table.entries() {
        if l == 0 {
            continue;
        }
        let has_pred = gens.moves().iter().any(|m| {
            spec.multiply(g, m)
                .ok()
                .and_then(|h| table.length_of(&h))
                .is_some_and(|lh| lh + 1 == l)
        });
        if !has_pred {
            pred_bad += 1;
        }
    }
    suite.record("bfs predecessors", pred_bad == 0, format!("{pred_bad} elements without a predecessor"));

    let exact = conjugacy_growth_exact(spec, &table)?;
    let oracle = OraclePartition::new(spec, &gens, radius, budget)?;
    let brute = oracle.growth();
    suite.record("conjugacy oracle", exact == brute, format!("exact {exact:?} oracle {brute:?}"));

    let structure = class_structure_check(spec, &oracle)?;
    suite.record(
        "class structure",
        structure.passed(),
        format!("{} cosets, {} violations", structure.cosets, structure.violations.len()),
    );

    if spec.is_plain_heisenberg() {
        let window = conjugacy_length_window_check(spec, &table)?;
        suite.record(
            "length window",
            window.passed(),
            format!(
                "{} classes, {} violations, {} missing",
                window.classes_checked,
                window.violations.len(),
                window.missing.len()
            ),
        );
        let bounds = conjugacy_growth_bounds(spec, radius, &central_growth(&table))?;
        let bad: Vec<u32> = bounds
            .iter()
            .filter(|b| !(b.lower <= exact[b.m as usize] as u128 && exact[b.m as usize] as u128 <= b.upper))
            .map(|b| b.m)
            .collect();
        suite.record("sandwich bounds", bad.is_empty(), format!("failing radii {bad:?}"));
    }

    let twist_radius = if spec.abelian_rank() > 4 { 2 } else { radius.min(4) };
    let id = Automorphism::identity(spec);
    let twisted = twisted_growth_bruteforce(&gens, &id, twist_radius, twist_radius + 2, budget)?;
    suite.record(
        "identity twist",
        twisted.counts[..] == exact[..=twist_radius as usize],
        format!("{:?}", twisted.counts),
    );

    Ok(VerifyReport {
        spec: spec.to_string(),
        quick,
        checks: suite.checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::DEFAULT_BUDGET;

    #[test]
    fn quick_suite_passes_on_builtins() {
        for name in crate::io::BUILTIN_SPECS {
            let spec = crate::io::builtin_spec(name).unwrap();
            let report = run_suite(&spec, true, DEFAULT_BUDGET).unwrap();
            let bad: Vec<_> = report.failures().collect();
            assert!(bad.is_empty(), "{name}: {bad:?}");
        }
    }

    #[test]
    fn fuzz_and_relators_clean_on_h1() {
        let spec = GroupSpec::heisenberg(1).unwrap();
        assert_eq!(associativity_fuzz(&spec, 100, 1).unwrap(), 0);
        assert!(relator_failures(&spec).unwrap().is_empty());
    }
}

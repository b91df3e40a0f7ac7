//! Standard measure pairs and seeded random generators for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::measure::{normalize_intervals, Cell, Interval, ProbabilityMeasure, ReferenceMeasure};
use crate::partition::{split_cell, Partition, SplitAt};

/// A named pair `(P, R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub p: ProbabilityMeasure,
    pub r: ProbabilityMeasure,
}

impl Fixture {
    pub fn new(name: impl Into<String>, p: ProbabilityMeasure, r: ProbabilityMeasure) -> Self {
        Fixture {
            name: name.into(),
            p,
            r,
        }
    }
}

fn unit() -> ProbabilityMeasure {
    ProbabilityMeasure::uniform(0.0, 1.0).expect("uniform")
}

fn beta(a: u32, b: u32) -> ProbabilityMeasure {
    ProbabilityMeasure::beta(a, b).expect("beta")
}

/// Continuous pairs with `P ≪ R` and bounded `φ`, so every order has a
/// finite divergence.
pub fn continuous_fixtures() -> Vec<Fixture> {
    let two_parts = vec![Interval::new(0.0, 1.0), Interval::new(2.0, 3.0)];
    let split_p = ProbabilityMeasure::piecewise(
        two_parts.clone(),
        vec![
            (Interval::new(0.0, 1.0), vec![0.0, 1.2]),
            (Interval::new(2.0, 3.0), vec![0.4]),
        ],
    )
    .expect("split support density");
    let split_r = ProbabilityMeasure::piecewise(
        two_parts,
        vec![
            (Interval::new(0.0, 1.0), vec![0.5]),
            (Interval::new(2.0, 3.0), vec![0.5]),
        ],
    )
    .expect("split support reference");
    let step = ProbabilityMeasure::piecewise(
        vec![Interval::new(0.0, 1.0)],
        vec![
            (Interval::new(0.0, 0.5), vec![1.5]),
            (Interval::new(0.5, 1.0), vec![0.5]),
        ],
    )
    .expect("step density");
    let gauss = ProbabilityMeasure::truncated_gaussian(0.0, 1.0, Interval::new(-3.0, 3.0)).expect("gaussian");
    let wide = ProbabilityMeasure::uniform(-3.0, 3.0).expect("uniform");
    vec![
        Fixture::new("beta22-uniform", beta(2, 2), unit()),
        Fixture::new("half-uniform", ProbabilityMeasure::uniform(0.0, 0.5).expect("uniform"), unit()),
        Fixture::new("beta21-uniform", beta(2, 1), unit()),
        Fixture::new("beta32-uniform", beta(3, 2), unit()),
        Fixture::new("beta22-beta21", beta(2, 2), beta(2, 1)),
        Fixture::new("beta33-beta22", beta(3, 3), beta(2, 2)),
        Fixture::new("step-uniform", step, unit()),
        Fixture::new("split-support", split_p, split_r),
        Fixture::new("gaussian-uniform", gauss, wide),
    ]
}

/// Small hand-written discrete pairs.
pub fn discrete_fixtures() -> Vec<Fixture> {
    let d = |atoms: &[(&str, f64)]| ProbabilityMeasure::discrete(atoms).expect("discrete");
    vec![
        Fixture::new("coin-biased", d(&[("a", 0.5), ("b", 0.5)]), d(&[("a", 0.25), ("b", 0.75)])),
        Fixture::new(
            "three-atoms",
            d(&[("a", 0.2), ("b", 0.3), ("c", 0.5)]),
            d(&[("a", 0.4), ("b", 0.3), ("c", 0.3)]),
        ),
        Fixture::new(
            "zero-atom",
            d(&[("a", 0.0), ("b", 0.6), ("c", 0.4)]),
            d(&[("a", 0.5), ("b", 0.25), ("c", 0.25)]),
        ),
    ]
}

/// Pairs where `P` is not absolutely continuous with respect to `R`.
pub fn non_ac_fixtures() -> Vec<Fixture> {
    vec![Fixture::new(
        "wide-uniform",
        ProbabilityMeasure::uniform(0.0, 2.0).expect("uniform"),
        unit(),
    )]
}

fn random_masses<G: Rng>(rng: &mut G, n: usize, zero_prob: f64) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(zero_prob) { 0.0 } else { rng.gen_range(0.01..1.0) })
            .collect();
        let total: f64 = raw.iter().sum();
        if total > 0.0 {
            return raw.iter().map(|x| x / total).collect();
        }
    }
}

fn labelled(masses: &[f64]) -> ProbabilityMeasure {
    let atoms: Vec<(String, f64)> = masses.iter().enumerate().map(|(i, &m)| (format!("a{i}"), m)).collect();
    ProbabilityMeasure::discrete(&atoms).expect("normalized masses")
}

/// Random absolutely continuous discrete pair with `2..=max_atoms` atoms;
/// some `P` atoms may be empty, every `R` atom is charged.
pub fn random_discrete_pair<G: Rng>(rng: &mut G, max_atoms: usize) -> Fixture {
    let n = rng.gen_range(2..=max_atoms.max(2));
    let p = random_masses(rng, n, 0.1);
    let r = random_masses(rng, n, 0.0);
    Fixture::new(format!("random-{n}"), labelled(&p), labelled(&r))
}

/// Random discrete pair where `R` misses at least one charged atom of `P`.
pub fn random_non_ac_pair<G: Rng>(rng: &mut G, max_atoms: usize) -> Fixture {
    let n = rng.gen_range(2..=max_atoms.max(2));
    let p = random_masses(rng, n, 0.0);
    let mut r_raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let missing = rng.gen_range(1..n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    for &i in &idx[..missing] {
        r_raw[i] = 0.0;
    }
    let total: f64 = r_raw.iter().sum();
    let r: Vec<f64> = r_raw.iter().map(|x| x / total).collect();
    Fixture::new(format!("non-ac-{n}"), labelled(&p), labelled(&r))
}

/// `count` random discrete pairs with at most 12 atoms.
pub fn discrete_corpus<G: Rng>(rng: &mut G, count: usize) -> Vec<Fixture> {
    (0..count).map(|_| random_discrete_pair(rng, 12)).collect()
}

/// Random nonempty cell: one to three sub-intervals of a continuous support,
/// or a random nonempty subset of atoms.
pub fn random_cell<G: Rng>(rng: &mut G, base: &ReferenceMeasure) -> Cell {
    match base {
        ReferenceMeasure::Counting { atoms } => loop {
            let picked: Vec<String> = atoms.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            if !picked.is_empty() {
                return Cell::Atoms(picked);
            }
        },
        ReferenceMeasure::Lebesgue { intervals } => loop {
            let k = rng.gen_range(1..=3);
            let mut parts = Vec::new();
            for _ in 0..k {
                let iv = intervals[rng.gen_range(0..intervals.len())];
                let a = rng.gen_range(iv.lo..iv.hi);
                let b = rng.gen_range(iv.lo..iv.hi);
                parts.push(Interval::new(a.min(b), a.max(b)));
            }
            let parts = normalize_intervals(parts);
            if !parts.is_empty() {
                return Cell::Intervals(parts);
            }
        },
    }
}

/// Random partition with at most `max_cells` cells.
pub fn random_partition<G: Rng>(rng: &mut G, base: &ReferenceMeasure, max_cells: usize) -> Partition {
    match base {
        ReferenceMeasure::Counting { atoms } => {
            let g = rng.gen_range(1..=max_cells.clamp(1, atoms.len()));
            let mut groups: Vec<Vec<String>> = vec![Vec::new(); g];
            for a in atoms {
                groups[rng.gen_range(0..g)].push(a.clone());
            }
            groups.retain(|grp| !grp.is_empty());
            Partition::from_groups(base, groups).expect("groups cover the atoms")
        }
        ReferenceMeasure::Lebesgue { intervals } => {
            let lo = intervals[0].lo;
            let hi = intervals[intervals.len() - 1].hi;
            let k = rng.gen_range(0..max_cells.max(1));
            let mut cuts: Vec<f64> = (0..k).map(|_| rng.gen_range(lo..hi)).filter(|&x| x > lo).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            Partition::from_breakpoints(base, &cuts).expect("interior breakpoints")
        }
    }
}

/// A random split of a random splittable cell, or `None` when every cell is
/// an atom or too short to cut.
pub fn random_split<G: Rng>(rng: &mut G, partition: &Partition) -> Option<Partition> {
    let splittable: Vec<usize> = partition
        .cells()
        .iter()
        .enumerate()
        .filter(|(_, c)| match c {
            Cell::Atoms(ls) => ls.len() > 1,
            Cell::Intervals(ivs) => ivs.iter().any(|iv| iv.lo.next_up() < iv.hi),
        })
        .map(|(k, _)| k)
        .collect();
    let &k = splittable.choose(rng)?;
    let at = match &partition.cells()[k] {
        Cell::Atoms(ls) => {
            let take = rng.gen_range(1..ls.len());
            let mut shuffled = ls.clone();
            shuffled.shuffle(rng);
            shuffled.truncate(take);
            SplitAt::Atoms(shuffled)
        }
        Cell::Intervals(ivs) => {
            let total: f64 = ivs.iter().map(Interval::len).sum();
            let mut u = rng.gen_range(0.0..total);
            let mut x = ivs[0].midpoint();
            for iv in ivs {
                if u < iv.len() {
                    x = iv.lo + u;
                    break;
                }
                u -= iv.len();
            }
            if x <= ivs[0].lo {
                x = ivs[0].midpoint();
            }
            SplitAt::Point(x)
        }
    };
    split_cell(partition, k, &at).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radon_nikodym::{check_absolute_continuity, AbsoluteContinuity};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixtures_are_absolutely_continuous() {
        for f in continuous_fixtures().into_iter().chain(discrete_fixtures()) {
            assert_eq!(
                check_absolute_continuity(&f.p, &f.r).unwrap(),
                AbsoluteContinuity::Continuous,
                "{}",
                f.name
            );
        }
        for f in non_ac_fixtures() {
            assert!(matches!(
                check_absolute_continuity(&f.p, &f.r).unwrap(),
                AbsoluteContinuity::Witness(_)
            ));
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(discrete_corpus(&mut a, 5), discrete_corpus(&mut b, 5));
        let base = unit().base().clone();
        assert_eq!(random_partition(&mut a, &base, 8), random_partition(&mut b, &base, 8));
    }

    #[test]
    fn random_non_ac_pairs_have_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f = random_non_ac_pair(&mut rng, 8);
            assert!(matches!(
                check_absolute_continuity(&f.p, &f.r).unwrap(),
                AbsoluteContinuity::Witness(_)
            ));
        }
    }

    #[test]
    fn random_splits_refine() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = continuous_fixtures()[7].p.base().clone();
        let mut p = Partition::trivial(&base);
        for _ in 0..20 {
            let next = random_split(&mut rng, &p).unwrap();
            assert!(crate::partition::is_refinement(&next, &p).unwrap());
            p = next;
        }
        assert_eq!(p.len(), 21);
    }
}

//! Finite measurable partitions, refinement, and the partition-level
//! divergence functionals.
//!
//! For a partition `{E_k}` the functionals are
//!
//! * KL: `Σ P(E_k) ln(P(E_k)/R(E_k))`
//! * Rényi (α > 1): `(1/(α−1)) ln Σ P(E_k)^α / R(E_k)^{α−1}`
//! * Tsallis (q > 1): `(Σ P(E_k)^q / R(E_k)^{q−1} − 1)/(q − 1)`
//!
//! Each is a lower bound for the corresponding integral divergence and is
//! nondecreasing under refinement. Empty cells contribute nothing; a cell with
//! `P(E_k) > 0 = R(E_k)` sends the functional to `+∞`.

use crate::divergence::{pair_power_integral_on, renyi_to_tsallis};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::measure::{normalize_intervals, Cell, Interval, ProbabilityMeasure, ReferenceMeasure};
use crate::quadrature::QuadratureConfig;
use crate::radon_nikodym::{AbsoluteContinuity, MeasurePair};
use crate::sum::CompensatedSum;

const STATS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    base: ReferenceMeasure,
    cells: Vec<Cell>,
}

/// Where to cut a cell: at a point strictly inside it, or by peeling off a
/// proper nonempty subset of its atoms.
#[derive(Clone, Debug, PartialEq)]
pub enum SplitAt {
    Point(f64),
    Atoms(Vec<String>),
}

impl Partition {
    /// Checks that the cells are nonempty, pairwise disjoint and cover `base`.
    pub fn new(base: ReferenceMeasure, cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidPartition("a partition needs at least one cell".into()));
        }
        if cells.iter().any(Cell::is_empty) {
            return Err(Error::InvalidPartition("empty cell".into()));
        }
        match &base {
            ReferenceMeasure::Counting { atoms } => {
                let mut seen: Vec<&String> = Vec::new();
                for cell in &cells {
                    let Cell::Atoms(labels) = cell else {
                        return Err(Error::MismatchedReference);
                    };
                    for l in labels {
                        if !atoms.contains(l) {
                            return Err(Error::InvalidPartition(format!("unknown atom {l:?}")));
                        }
                        if seen.contains(&l) {
                            return Err(Error::InvalidPartition(format!("atom {l:?} appears twice")));
                        }
                        seen.push(l);
                    }
                }
                if seen.len() != atoms.len() {
                    return Err(Error::InvalidPartition("cells do not cover every atom".into()));
                }
            }
            ReferenceMeasure::Lebesgue { intervals } => {
                let mut all: Vec<Interval> = Vec::new();
                for cell in &cells {
                    let Cell::Intervals(ivs) = cell else {
                        return Err(Error::MismatchedReference);
                    };
                    all.extend(ivs.iter().filter(|iv| !iv.is_empty()));
                }
                all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
                if all.windows(2).any(|w| w[1].lo < w[0].hi) {
                    return Err(Error::InvalidPartition("cells overlap".into()));
                }
                if normalize_intervals(all) != *intervals {
                    return Err(Error::InvalidPartition("cells do not cover the support".into()));
                }
            }
        }
        Ok(Partition { base, cells })
    }

    /// The one-cell partition `{X}`.
    pub fn trivial(base: &ReferenceMeasure) -> Self {
        Partition {
            base: base.clone(),
            cells: vec![base.full_cell()],
        }
    }

    /// Cuts an interval support at the given interior points.
    pub fn from_breakpoints(base: &ReferenceMeasure, breakpoints: &[f64]) -> Result<Self> {
        let intervals = base.intervals().ok_or(Error::MismatchedReference)?;
        let lo = intervals[0].lo;
        let hi = intervals[intervals.len() - 1].hi;
        let mut knots = vec![lo];
        for &b in breakpoints {
            if !(b > *knots.last().unwrap() && b < hi) {
                return Err(Error::InvalidPartition(format!(
                    "breakpoint {b} must be increasing and strictly inside ({lo}, {hi})"
                )));
            }
            knots.push(b);
        }
        knots.push(hi);
        let cells = knots
            .windows(2)
            .filter_map(|w| {
                let slab = Interval::new(w[0], w[1]);
                let parts: Vec<Interval> = intervals.iter().filter_map(|s| s.intersect(&slab)).collect();
                (!parts.is_empty()).then_some(Cell::Intervals(parts))
            })
            .collect();
        Partition::new(base.clone(), cells)
    }

    /// Groups of atom labels.
    pub fn from_groups(base: &ReferenceMeasure, groups: Vec<Vec<String>>) -> Result<Self> {
        Partition::new(base.clone(), groups.into_iter().map(Cell::Atoms).collect())
    }

    /// One cell per atom, in reference order.
    pub fn singletons(base: &ReferenceMeasure) -> Result<Self> {
        let atoms = base.atoms().ok_or(Error::MismatchedReference)?;
        Ok(Partition {
            base: base.clone(),
            cells: atoms.iter().map(|a| Cell::Atoms(vec![a.clone()])).collect(),
        })
    }

    pub fn base(&self) -> &ReferenceMeasure {
        &self.base
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the cell containing `x` (half-open cells, closed at the
    /// right end of each support component).
    pub fn locate(&self, x: f64) -> Option<usize> {
        self.cells.iter().position(|c| match c {
            Cell::Intervals(ivs) => ivs
                .iter()
                .any(|iv| (iv.lo <= x && x < iv.hi) || (x == iv.hi && self.base.is_right_end(x))),
            Cell::Atoms(_) => false,
        })
    }

    /// Cells reordered left to right (interval cells) or by first atom in
    /// reference order (atom cells).
    pub fn sorted(&self) -> Partition {
        let mut cells = self.cells.clone();
        match &self.base {
            ReferenceMeasure::Lebesgue { .. } => {
                cells.sort_by(|a, b| a.left().unwrap_or(0.0).total_cmp(&b.left().unwrap_or(0.0)))
            }
            ReferenceMeasure::Counting { atoms } => {
                let rank = |c: &Cell| match c {
                    Cell::Atoms(ls) => ls.iter().filter_map(|l| atoms.iter().position(|a| a == l)).min(),
                    _ => None,
                };
                cells.sort_by_key(|c| rank(c));
            }
        }
        Partition {
            base: self.base.clone(),
            cells,
        }
    }
}

/// Splits one cell of a continuous cell at a point; returns `(left, right)`.
pub(crate) fn split_intervals(ivs: &[Interval], x: f64) -> Result<(Cell, Cell)> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for iv in ivs {
        if let Some(l) = iv.intersect(&Interval::new(f64::NEG_INFINITY, x)) {
            left.push(l);
        }
        if let Some(r) = iv.intersect(&Interval::new(x, f64::INFINITY)) {
            right.push(r);
        }
    }
    if left.is_empty() || right.is_empty() {
        return Err(Error::InvalidSplit(format!("{x} is not strictly inside the cell")));
    }
    Ok((Cell::Intervals(left), Cell::Intervals(right)))
}

pub(crate) fn split_atoms(labels: &[String], peel: &[String]) -> Result<(Cell, Cell)> {
    if peel.is_empty() || peel.iter().any(|p| !labels.contains(p)) || peel.len() >= labels.len() {
        return Err(Error::InvalidSplit("subset must be a proper nonempty subset of the cell".into()));
    }
    let rest = labels.iter().filter(|l| !peel.contains(l)).cloned().collect();
    Ok((Cell::Atoms(peel.to_vec()), Cell::Atoms(rest)))
}

/// Replaces cell `k` by its two parts, in place, giving a partition with one
/// more cell that refines `π`.
pub fn split_cell(partition: &Partition, k: usize, at: &SplitAt) -> Result<Partition> {
    let cell = partition
        .cells
        .get(k)
        .ok_or_else(|| Error::InvalidSplit(format!("no cell {k}")))?;
    let (a, b) = match (cell, at) {
        (Cell::Intervals(ivs), SplitAt::Point(x)) => split_intervals(ivs, *x)?,
        (Cell::Atoms(labels), SplitAt::Atoms(peel)) => split_atoms(labels, peel)?,
        _ => return Err(Error::InvalidSplit("split kind does not match the cell".into())),
    };
    let mut cells = partition.cells.clone();
    cells.splice(k..=k, [a, b]);
    Ok(Partition {
        base: partition.base.clone(),
        cells,
    })
}

/// True when every cell of `fine` lies inside exactly one cell of `coarse`.
pub fn is_refinement(fine: &Partition, coarse: &Partition) -> Result<bool> {
    if fine.base != coarse.base {
        return Err(Error::MismatchedReference);
    }
    Ok(fine
        .cells
        .iter()
        .all(|c| coarse.cells.iter().filter(|d| c.is_subset_of(d)).count() == 1))
}

/// All nonempty pairwise intersections.
pub fn common_refinement(a: &Partition, b: &Partition) -> Result<Partition> {
    if a.base != b.base {
        return Err(Error::MismatchedReference);
    }
    let cells = a
        .cells
        .iter()
        .flat_map(|x| b.cells.iter().filter_map(move |y| x.intersect(y)))
        .collect();
    Partition::new(a.base.clone(), cells)
}

/// `P(E_k)` and `R(E_k)` for every cell.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionStats {
    pub p_masses: Vec<f64>,
    pub r_masses: Vec<f64>,
}

impl PartitionStats {
    pub fn new(p_masses: Vec<f64>, r_masses: Vec<f64>) -> Result<Self> {
        if p_masses.len() != r_masses.len() || p_masses.is_empty() {
            return Err(Error::InvalidPartition("mass lists must be nonempty and of equal length".into()));
        }
        for masses in [&p_masses, &r_masses] {
            if masses.iter().any(|&m| !(m >= 0.0)) {
                return Err(Error::InvalidPartition("negative cell mass".into()));
            }
            let total: f64 = masses.iter().sum();
            if (total - 1.0).abs() > STATS_TOLERANCE {
                return Err(Error::InvalidPartition(format!("cell masses sum to {total}")));
            }
        }
        Ok(PartitionStats { p_masses, r_masses })
    }

    pub fn len(&self) -> usize {
        self.p_masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_masses.is_empty()
    }

    fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.p_masses.iter().copied().zip(self.r_masses.iter().copied())
    }
}

pub(crate) fn pair_stats(pair: &MeasurePair, partition: &Partition) -> Result<PartitionStats> {
    let mut p = Vec::with_capacity(partition.len());
    let mut r = Vec::with_capacity(partition.len());
    for cell in &partition.cells {
        let (pm, rm) = pair.masses(cell)?;
        p.push(pm);
        r.push(rm);
    }
    PartitionStats::new(p, r)
}

/// Exact cell masses of both measures over a partition of their common support.
pub fn partition_stats(p: &ProbabilityMeasure, r: &ProbabilityMeasure, partition: &Partition) -> Result<PartitionStats> {
    pair_stats(&MeasurePair::new(p, r)?, partition)
}

/// `P ln(P/R)` for one cell, with `0 ln(0/·) = 0` and `+∞` when `R = 0 < P`.
pub(crate) fn kl_term(p: f64, r: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else if r == 0.0 {
        f64::INFINITY
    } else {
        p * (p / r).ln()
    }
}

/// `P^α / R^{α−1}` for one cell, with the same conventions.
pub(crate) fn power_term(p: f64, r: f64, alpha: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else if r == 0.0 {
        f64::INFINITY
    } else {
        p * (p / r).powf(alpha - 1.0)
    }
}

pub(crate) fn sum_terms(terms: impl Iterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for t in terms {
        if t == f64::INFINITY {
            return f64::INFINITY;
        }
        acc.add(t);
    }
    acc.value()
}

/// Partition KL functional.
pub fn partition_kl(stats: &PartitionStats) -> ExtendedReal {
    ExtendedReal::from_f64(sum_terms(stats.pairs().map(|(p, r)| kl_term(p, r))))
}

/// Inner sum `Σ P(E_k)^α / R(E_k)^{α−1}` (may be `+∞`).
pub fn partition_power_sum(stats: &PartitionStats, alpha: f64) -> f64 {
    sum_terms(stats.pairs().map(|(p, r)| power_term(p, r, alpha)))
}

fn check_certified_order(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 1.0 {
        Ok(alpha)
    } else {
        Err(Error::OrderOutOfRange(alpha))
    }
}

/// Partition Rényi functional of order `α > 1`.
pub fn partition_renyi(stats: &PartitionStats, alpha: f64) -> Result<ExtendedReal> {
    let alpha = check_certified_order(alpha)?;
    Ok(ExtendedReal::ln(partition_power_sum(stats, alpha)).scale(1.0 / (alpha - 1.0)))
}

/// Partition Tsallis functional of order `q > 1`.
pub fn partition_tsallis(stats: &PartitionStats, q: f64) -> Result<ExtendedReal> {
    let q = check_certified_order(q)?;
    let s = partition_power_sum(stats, q);
    if s == f64::INFINITY {
        return Ok(ExtendedReal::PosInf);
    }
    // direct form; equals renyi_to_tsallis(partition_renyi) up to rounding
    Ok(ExtendedReal::from_f64((s - 1.0) / (q - 1.0)))
}

/// Tsallis functional obtained by transforming the Rényi functional.
pub fn partition_tsallis_via_renyi(stats: &PartitionStats, q: f64) -> Result<ExtendedReal> {
    renyi_to_tsallis(partition_renyi(stats, q)?, q)
}

/// Both sides of the cell inequality `P(E)^α / R(E)^{α−1} ≤ ∫_E φ^α dR`
/// for `P ≪ R` and `α > 1`. Returns `(0, 0)` when `R(E) = 0`.
pub fn holder_cell_check(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    cell: &Cell,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let alpha = check_certified_order(alpha)?;
    let pair = MeasurePair::new(p, r)?;
    if let AbsoluteContinuity::Witness(witness) = pair.absolute_continuity() {
        return Err(Error::NotAbsolutelyContinuous { witness });
    }
    holder_on_pair(&pair, cell, alpha, cfg)
}

pub(crate) fn holder_on_pair(pair: &MeasurePair, cell: &Cell, alpha: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (pm, rm) = pair.masses(cell)?;
    if rm == 0.0 {
        return Ok((0.0, 0.0));
    }
    let lhs = power_term(pm, rm, alpha);
    let rhs = pair_power_integral_on(pair, Some(cell), alpha, cfg)?;
    Ok((lhs, rhs))
}

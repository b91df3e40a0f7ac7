//! Greedy partition refinement: a monotone sequence of partition lower bounds
//! for KL, Rényi and Tsallis relative entropies, checked against the
//! quadrature value.

use std::fmt;
use std::str::FromStr;

use crate::divergence::{divergence, Family, OrderParam};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::measure::{Cell, Interval, ProbabilityMeasure, ReferenceMeasure};
use crate::partition::{kl_term, power_term, split_atoms, split_intervals, Partition, SplitAt};
use crate::quadrature::QuadratureConfig;
use crate::radon_nikodym::{AbsoluteContinuity, JointPiece, Layout, MeasurePair};
use crate::sum::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitStrategy {
    Midpoint,
    PhiLevel,
    MassMedian,
}

impl SplitStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitStrategy::Midpoint => "midpoint",
            SplitStrategy::PhiLevel => "phi-level",
            SplitStrategy::MassMedian => "mass-median",
        }
    }
}

impl fmt::Display for SplitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(SplitStrategy::Midpoint),
            "phi-level" => Ok(SplitStrategy::PhiLevel),
            "mass-median" => Ok(SplitStrategy::MassMedian),
            other => Err(Error::Parse(format!("unknown split strategy {other:?}"))),
        }
    }
}

/// Stopping rules and search settings.
///
/// `min_gain` is measured on the inner sum of the functional (`Σ P ln(P/R)`
/// for KL, `Σ P^α/R^{α−1}` otherwise).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefinementConfig {
    pub max_cells: usize,
    pub rel_gap_tol: f64,
    pub min_gain: f64,
    pub split_strategy: SplitStrategy,
    pub candidate_count: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        RefinementConfig {
            max_cells: 4096,
            rel_gap_tol: 1e-4,
            min_gain: 1e-14,
            split_strategy: SplitStrategy::PhiLevel,
            candidate_count: 4,
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl RefinementConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_cells < 2 {
            return Err(Error::InvalidConfig(format!("max_cells must be at least 2, got {}", self.max_cells)));
        }
        if !(self.rel_gap_tol > 0.0 && self.rel_gap_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("rel_gap_tol must be positive, got {}", self.rel_gap_tol)));
        }
        if !(self.min_gain > 0.0 && self.min_gain.is_finite()) {
            return Err(Error::InvalidConfig(format!("min_gain must be positive, got {}", self.min_gain)));
        }
        if self.candidate_count == 0 {
            return Err(Error::InvalidConfig("candidate_count must be at least 1".into()));
        }
        QuadratureConfig::new(self.quadrature.method, self.quadrature.abs_tol, self.quadrature.max_depth)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub cells: usize,
    pub partition_value: ExtendedReal,
    pub oracle_value: ExtendedReal,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefinementTrace {
    pub steps: Vec<TraceStep>,
    pub final_partition: Partition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    GapTolerance,
    MinGain,
    Budget,
    NoValidSplit,
    /// Discrete pair refined down to single atoms.
    Singletons,
    NotAbsolutelyContinuous,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::GapTolerance => "gap-tolerance",
            StopReason::MinGain => "min-gain",
            StopReason::Budget => "budget",
            StopReason::NoValidSplit => "no-valid-split",
            StopReason::Singletons => "singletons",
            StopReason::NotAbsolutelyContinuous => "not-absolutely-continuous",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedEstimate {
    pub order: OrderParam,
    pub lower_bound: ExtendedReal,
    pub oracle: ExtendedReal,
    /// `oracle − lower_bound`, absolute, in the units of the family.
    pub gap: f64,
    pub converged: bool,
    /// Accuracy of the oracle itself; zero when it is a closed form.
    pub slack: f64,
    pub stop_reason: StopReason,
    pub witness: Option<Cell>,
    pub trace: RefinementTrace,
}

impl CertifiedEstimate {
    pub fn cells(&self) -> usize {
        self.trace.final_partition.len()
    }
}

/// A proposed split of one cell with the masses of both parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub at: SplitAt,
    /// Increase of the inner sum of the functional.
    pub gain: f64,
    pub left: (f64, f64),
    pub right: (f64, f64),
}

#[derive(Clone, Copy, Debug)]
enum Functional {
    Kl,
    Power(f64),
}

impl Functional {
    fn of(order: &OrderParam) -> Result<Self> {
        match (order.family(), order.order()) {
            (Family::Kl, _) => Ok(Functional::Kl),
            (_, Some(a)) if a > 1.0 && a.is_finite() => Ok(Functional::Power(a)),
            (_, a) => Err(Error::OrderOutOfRange(a.unwrap_or(f64::NAN))),
        }
    }

    fn term(self, p: f64, r: f64) -> f64 {
        match self {
            Functional::Kl => kl_term(p, r),
            Functional::Power(a) => power_term(p, r, a),
        }
    }
}

/// Family value from the inner sum.
fn to_family(order: &OrderParam, inner: f64) -> ExtendedReal {
    match (order.family(), order.order()) {
        (Family::Kl, _) => ExtendedReal::from_f64(inner),
        (Family::Renyi, Some(a)) => ExtendedReal::ln(inner).scale(1.0 / (a - 1.0)),
        (Family::Tsallis, Some(q)) => ExtendedReal::from_f64((inner - 1.0) / (q - 1.0)),
        _ => ExtendedReal::from_f64(f64::NAN),
    }
}

fn split_cell_at(cell: &Cell, at: &SplitAt) -> Result<(Cell, Cell)> {
    match (cell, at) {
        (Cell::Intervals(ivs), SplitAt::Point(x)) => split_intervals(ivs, *x),
        (Cell::Atoms(labels), SplitAt::Atoms(peel)) => split_atoms(labels, peel),
        _ => Err(Error::InvalidSplit("split kind does not match the cell".into())),
    }
}

fn hull(ivs: &[Interval]) -> Option<Interval> {
    Some(Interval::new(ivs.first()?.lo, ivs.last()?.hi))
}

/// First `count` terms of 1/2, 1/4, 3/4, 1/8, 3/8, ...
fn dyadic_fractions(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut den = 2u64;
    while out.len() < count && den < (1 << 52) {
        let mut num = 1;
        while num < den && out.len() < count {
            out.push(num as f64 / den as f64);
            num += 2;
        }
        den *= 2;
    }
    out
}

fn cell_points(pair: &MeasurePair, ivs: &[Interval], strategy: SplitStrategy, count: usize, mean: f64) -> Result<Vec<f64>> {
    let Some(h) = hull(ivs) else {
        return Ok(Vec::new());
    };
    let mut points = match strategy {
        SplitStrategy::Midpoint => dyadic_fractions(count).into_iter().map(|u| h.lo + u * h.len()).collect(),
        SplitStrategy::MassMedian => {
            let total = pair.masses(&Cell::Intervals(ivs.to_vec()))?.1;
            let mut pts = Vec::new();
            for u in dyadic_fractions(count) {
                pts.push(r_quantile(pair, ivs, h, u * total)?);
            }
            pts
        }
        SplitStrategy::PhiLevel => {
            let pts = level_crossings(pair, ivs, mean);
            if pts.is_empty() {
                vec![h.midpoint()]
            } else {
                pts
            }
        }
    };
    points.retain(|&x| x > h.lo && x < h.hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    Ok(points)
}

fn r_quantile(pair: &MeasurePair, ivs: &[Interval], h: Interval, target: f64) -> Result<f64> {
    let below = |x: f64| -> Result<f64> {
        let left: Vec<Interval> = ivs.iter().filter_map(|iv| iv.intersect(&Interval::new(h.lo, x))).collect();
        if left.is_empty() {
            return Ok(0.0);
        }
        Ok(pair.masses(&Cell::Intervals(left))?.1)
    };
    let (mut lo, mut hi) = (h.lo, h.hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Points of the cell where `φ` crosses `t`: roots of `p − t·r` inside joint
/// pieces and piece boundaries where `φ − t` jumps across zero.
fn level_crossings(pair: &MeasurePair, ivs: &[Interval], t: f64) -> Vec<f64> {
    let Layout::Pieces(pieces) = pair.layout() else {
        return Vec::new();
    };
    let mut parts: Vec<(Interval, &JointPiece)> = Vec::new();
    for iv in ivs {
        let start = pieces.partition_point(|jp| jp.interval.hi <= iv.lo);
        for jp in pieces[start..].iter().take_while(|jp| jp.interval.lo < iv.hi) {
            if let Some(part) = jp.interval.intersect(iv) {
                parts.push((part, jp));
            }
        }
    }
    let mut out = Vec::new();
    let mut prev_sign: Option<f64> = None;
    for (part, jp) in &parts {
        let sign_at = |x: f64| (jp.phi(x) - t).signum();
        let (s_lo, s_hi) = (sign_at(part.lo.next_up()), sign_at(part.hi.next_down()));
        if let Some(prev) = prev_sign {
            if prev != s_lo {
                out.push(part.lo);
            }
        }
        prev_sign = Some(s_hi);
        if jp.p.is_zero() || jp.r.is_zero() {
            continue;
        }
        let g = jp.p.sub(&jp.r.scale(t));
        out.extend(g.roots_in(part.lo, part.hi).into_iter().filter(|&x| x > part.lo && x < part.hi));
    }
    out
}

fn score(pair: &MeasurePair, cell: &Cell, at: SplitAt, parent: (f64, f64), f: Functional) -> Result<Option<Candidate>> {
    let (a, b) = match split_cell_at(cell, &at) {
        Ok(parts) => parts,
        Err(Error::InvalidSplit(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let left = pair.masses(&a)?;
    let right = pair.masses(&b)?;
    if !pair.is_discrete() && (left.1 == 0.0 || right.1 == 0.0) {
        return Ok(None);
    }
    let gain = f.term(left.0, left.1) + f.term(right.0, right.1) - f.term(parent.0, parent.1);
    Ok(Some(Candidate { at, gain, left, right }))
}

fn rank_candidates(cands: &mut [Candidate], base: &ReferenceMeasure) {
    let key = |c: &Candidate| match &c.at {
        SplitAt::Point(x) => *x,
        SplitAt::Atoms(ls) => ls
            .iter()
            .filter_map(|l| base.atom_index(l))
            .min()
            .map_or(f64::INFINITY, |i| i as f64),
    };
    cands.sort_by(|a, b| b.gain.total_cmp(&a.gain).then(key(a).total_cmp(&key(b))));
}

fn candidates_for(
    pair: &MeasurePair,
    cell: &Cell,
    parent: (f64, f64),
    f: Functional,
    strategy: SplitStrategy,
    count: usize,
) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    match cell {
        Cell::Atoms(labels) => {
            if labels.len() < 2 {
                return Err(Error::NoValidSplit);
            }
            for l in labels {
                if let Some(c) = score(pair, cell, SplitAt::Atoms(vec![l.clone()]), parent, f)? {
                    out.push(c);
                }
            }
        }
        Cell::Intervals(ivs) => {
            if parent.1 <= 0.0 || hull(ivs).is_none_or(|h| h.len() <= 0.0) {
                return Err(Error::NoValidSplit);
            }
            let mean = parent.0 / parent.1;
            for x in cell_points(pair, ivs, strategy, count, mean)? {
                if let Some(c) = score(pair, cell, SplitAt::Point(x), parent, f)? {
                    out.push(c);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoValidSplit);
    }
    rank_candidates(&mut out, pair.base());
    if !pair.is_discrete() {
        out.truncate(count);
    }
    Ok(out)
}

/// Ranked split candidates for cell `k` of `partition`, scored by the gain
/// of the refined partition's functional.
pub fn propose_splits(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    partition: &Partition,
    k: usize,
    order: &OrderParam,
    cfg: &RefinementConfig,
) -> Result<Vec<Candidate>> {
    cfg.validate()?;
    let f = Functional::of(order)?;
    let pair = MeasurePair::new(p, r)?;
    if partition.base() != pair.base() {
        return Err(Error::MismatchedReference);
    }
    let cell = partition
        .cells()
        .get(k)
        .ok_or_else(|| Error::InvalidSplit(format!("no cell {k}")))?;
    let parent = pair.masses(cell)?;
    candidates_for(&pair, cell, parent, f, cfg.split_strategy, cfg.candidate_count)
}

/// Cells ranked by their position in the support: left endpoint, or first
/// atom in reference order.
fn position_key(cell: &Cell, base: &ReferenceMeasure) -> f64 {
    match cell {
        Cell::Intervals(ivs) => ivs.first().map_or(f64::INFINITY, |iv| iv.lo),
        Cell::Atoms(ls) => ls
            .iter()
            .filter_map(|l| base.atom_index(l))
            .min()
            .map_or(f64::INFINITY, |i| i as f64),
    }
}

fn complement(base: &ReferenceMeasure, witness: &Cell) -> Option<Cell> {
    match (base, witness) {
        (ReferenceMeasure::Counting { atoms }, Cell::Atoms(w)) => {
            let rest: Vec<String> = atoms.iter().filter(|a| !w.contains(a)).cloned().collect();
            (!rest.is_empty()).then_some(Cell::Atoms(rest))
        }
        (ReferenceMeasure::Lebesgue { intervals }, Cell::Intervals(w)) => {
            let mut rest = Vec::new();
            for iv in intervals {
                let mut cursor = iv.lo;
                for cut in w.iter().filter_map(|x| x.intersect(iv)) {
                    if cut.lo > cursor {
                        rest.push(Interval::new(cursor, cut.lo));
                    }
                    cursor = cursor.max(cut.hi);
                }
                if iv.hi > cursor {
                    rest.push(Interval::new(cursor, iv.hi));
                }
            }
            (!rest.is_empty()).then_some(Cell::Intervals(rest))
        }
        _ => None,
    }
}

/// Certified lower bounds on `I(P‖R)` by greedy refinement from `{X}`.
///
/// Each step tries every cell's best split and applies the one with largest
/// gain; ties go to the leftmost cell, then the smallest split coordinate.
/// Continuous pairs stop on the gap tolerance, the minimum gain or the cell
/// budget. Discrete pairs are refined down to single atoms unless the budget
/// runs out first.
pub fn supremum_estimate(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    order: &OrderParam,
    cfg: &RefinementConfig,
) -> Result<CertifiedEstimate> {
    cfg.validate()?;
    let f = Functional::of(order)?;
    let pair = MeasurePair::new(p, r)?;
    let base = pair.base().clone();

    if let AbsoluteContinuity::Witness(witness) = pair.absolute_continuity() {
        let mut cells = vec![witness.clone()];
        cells.extend(complement(&base, &witness));
        cells.sort_by(|a, b| position_key(a, &base).total_cmp(&position_key(b, &base)));
        let final_partition = Partition::new(base, cells)?;
        let step = TraceStep {
            step: 0,
            cells: final_partition.len(),
            partition_value: ExtendedReal::PosInf,
            oracle_value: ExtendedReal::PosInf,
            gap: 0.0,
        };
        return Ok(CertifiedEstimate {
            order: *order,
            lower_bound: ExtendedReal::PosInf,
            oracle: ExtendedReal::PosInf,
            gap: 0.0,
            converged: true,
            slack: 0.0,
            stop_reason: StopReason::NotAbsolutelyContinuous,
            witness: Some(witness),
            trace: RefinementTrace {
                steps: vec![step],
                final_partition,
            },
        });
    }

    let oracle = divergence(pair.p(), pair.r(), order, &cfg.quadrature)?;
    let oracle_f = oracle
        .finite()
        .ok_or_else(|| Error::DomainError("oracle value is not finite for an absolutely continuous pair".into()))?;
    let slack = if pair.is_discrete() { 0.0 } else { cfg.quadrature.abs_tol };
    let scale = oracle_f.abs().max(1.0);
    let discrete = pair.is_discrete();

    let mut cells: Vec<Cell> = vec![base.full_cell()];
    let mut masses: Vec<(f64, f64)> = vec![pair.masses(&cells[0])?];
    let mut best: Vec<Option<Candidate>> = vec![None];
    let mut fresh = vec![true];

    let value_of = |masses: &[(f64, f64)]| {
        let mut acc = CompensatedSum::new();
        for &(pm, rm) in masses {
            let t = f.term(pm, rm);
            if t == f64::INFINITY {
                return f64::INFINITY;
            }
            acc.add(t);
        }
        to_family(order, acc.value()).finite().unwrap_or(f64::NAN)
    };

    let mut steps = Vec::new();
    let mut value = value_of(&masses);
    steps.push(TraceStep {
        step: 0,
        cells: 1,
        partition_value: ExtendedReal::from_f64(value),
        oracle_value: oracle,
        gap: oracle_f - value,
    });

    let stop_reason = loop {
        let gap = oracle_f - value;
        if !discrete && gap / scale < cfg.rel_gap_tol {
            break StopReason::GapTolerance;
        }
        if discrete && cells.iter().all(|c| matches!(c, Cell::Atoms(ls) if ls.len() == 1)) {
            break StopReason::Singletons;
        }
        if cells.len() >= cfg.max_cells {
            break StopReason::Budget;
        }
        for k in 0..cells.len() {
            if fresh[k] {
                best[k] = match candidates_for(&pair, &cells[k], masses[k], f, cfg.split_strategy, cfg.candidate_count) {
                    Ok(c) => c.into_iter().next(),
                    Err(Error::NoValidSplit) => None,
                    Err(e) => return Err(e),
                };
                fresh[k] = false;
            }
        }
        // strict comparison keeps the leftmost cell on ties
        let mut chosen: Option<usize> = None;
        for (k, c) in best.iter().enumerate() {
            if let Some(c) = c {
                if chosen.is_none_or(|j| c.gain > best[j].as_ref().map_or(f64::NEG_INFINITY, |b| b.gain)) {
                    chosen = Some(k);
                }
            }
        }
        let Some(k) = chosen else {
            break StopReason::NoValidSplit;
        };
        let cand = best[k].take().unwrap_or_else(|| unreachable!("chosen cell has a candidate"));
        if !discrete && cand.gain < cfg.min_gain {
            break StopReason::MinGain;
        }
        let (a, b) = split_cell_at(&cells[k], &cand.at)?;
        cells.splice(k..=k, [a, b]);
        masses.splice(k..=k, [cand.left, cand.right]);
        best.splice(k..=k, [None, None]);
        fresh.splice(k..=k, [true, true]);
        if discrete {
            let mut idx: Vec<usize> = (0..cells.len()).collect();
            idx.sort_by(|&i, &j| position_key(&cells[i], &base).total_cmp(&position_key(&cells[j], &base)));
            cells = idx.iter().map(|&i| cells[i].clone()).collect();
            masses = idx.iter().map(|&i| masses[i]).collect();
            best = idx.iter().map(|&i| best[i].clone()).collect();
            fresh = idx.iter().map(|&i| fresh[i]).collect();
        }
        value = value_of(&masses);
        steps.push(TraceStep {
            step: steps.len(),
            cells: cells.len(),
            partition_value: ExtendedReal::from_f64(value),
            oracle_value: oracle,
            gap: oracle_f - value,
        });
    };

    let gap = oracle_f - value;
    let converged = gap <= cfg.rel_gap_tol * scale;
    Ok(CertifiedEstimate {
        order: *order,
        lower_bound: ExtendedReal::from_f64(value),
        oracle,
        gap,
        converged,
        slack,
        stop_reason,
        witness: None,
        trace: RefinementTrace {
            steps,
            final_partition: Partition::new(base, cells)?,
        },
    })
}

/// One estimate per order of the given family, in the order given.
pub fn run_order_sweep(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    family: Family,
    orders: &[f64],
    cfg: &RefinementConfig,
) -> Result<Vec<CertifiedEstimate>> {
    orders
        .iter()
        .map(|&a| {
            if !(a > 1.0) {
                return Err(Error::OrderOutOfRange(a));
            }
            supremum_estimate(p, r, &OrderParam::new(family, Some(a))?, cfg)
        })
        .collect()
}

/// Rényi estimates for each `α > 1`.
pub fn run_alpha_sweep(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    alphas: &[f64],
    cfg: &RefinementConfig,
) -> Result<Vec<CertifiedEstimate>> {
    run_order_sweep(p, r, Family::Renyi, alphas, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> ProbabilityMeasure {
        ProbabilityMeasure::uniform(0.0, 1.0).unwrap()
    }

    fn half() -> ProbabilityMeasure {
        ProbabilityMeasure::uniform(0.0, 0.5).unwrap()
    }

    fn beta22() -> ProbabilityMeasure {
        ProbabilityMeasure::beta(2, 2).unwrap()
    }

    fn renyi(a: f64) -> OrderParam {
        OrderParam::renyi(a).unwrap()
    }

    fn fin(v: ExtendedReal) -> f64 {
        v.finite().expect("finite value")
    }

    fn assert_monotone(est: &CertifiedEstimate) {
        for w in est.trace.steps.windows(2) {
            assert!(fin(w[1].partition_value) >= fin(w[0].partition_value) - 1e-12);
        }
    }

    #[test]
    fn step_ratio_converges_after_one_split() {
        let est = supremum_estimate(&half(), &unit(), &renyi(2.0), &RefinementConfig::default()).unwrap();
        assert_eq!(est.cells(), 2);
        assert!(est.converged);
        assert_abs_diff_eq!(fin(est.lower_bound), 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(fin(est.oracle), 2f64.ln(), epsilon = 1e-15);
        assert_eq!(est.trace.final_partition.cells()[1], Cell::interval(0.5, 1.0));
    }

    #[test]
    fn non_ac_pair_short_circuits() {
        let wide = ProbabilityMeasure::uniform(0.0, 2.0).unwrap();
        let est = supremum_estimate(&wide, &unit(), &renyi(2.0), &RefinementConfig::default()).unwrap();
        assert_eq!(est.lower_bound, ExtendedReal::PosInf);
        assert_eq!(est.oracle, ExtendedReal::PosInf);
        assert_eq!(est.witness, Some(Cell::interval(1.0, 2.0)));
        assert_eq!(
            est.trace.final_partition.cells(),
            &[Cell::interval(0.0, 1.0), Cell::interval(1.0, 2.0)]
        );
    }

    #[test]
    fn beta_against_uniform_converges() {
        let est = supremum_estimate(&beta22(), &unit(), &renyi(2.0), &RefinementConfig::default()).unwrap();
        assert!(est.converged, "{:?}", est.stop_reason);
        assert!(est.gap <= 1e-4);
        assert!(est.cells() <= 4096);
        assert_abs_diff_eq!(fin(est.oracle), 1.2f64.ln(), epsilon = 1e-15);
        assert!(fin(est.lower_bound) <= fin(est.oracle) + 1e-9);
        assert_monotone(&est);
    }

    #[test]
    fn discrete_pair_reaches_singletons() {
        let p = ProbabilityMeasure::discrete(&[("a", 0.5), ("b", 0.5)]).unwrap();
        let r = ProbabilityMeasure::discrete(&[("a", 0.25), ("b", 0.75)]).unwrap();
        let est = supremum_estimate(&p, &r, &renyi(2.0), &RefinementConfig::default()).unwrap();
        assert_eq!(est.stop_reason, StopReason::Singletons);
        assert_eq!(est.cells(), 2);
        assert_abs_diff_eq!(fin(est.lower_bound), (4.0f64 / 3.0).ln(), epsilon = 1e-15);
        assert!(est.gap.abs() <= 1e-12);
    }

    #[test]
    fn tsallis_and_kl_estimates() {
        let cfg = RefinementConfig::default();
        let ts = supremum_estimate(&beta22(), &unit(), &OrderParam::tsallis(2.0).unwrap(), &cfg).unwrap();
        assert!(ts.converged);
        assert_abs_diff_eq!(fin(ts.oracle), 0.2, epsilon = 1e-15);
        let kl = supremum_estimate(&beta22(), &unit(), &OrderParam::kl(), &cfg).unwrap();
        assert!(kl.converged);
        assert_monotone(&kl);
    }

    #[test]
    fn equal_measures_give_zero_gains() {
        let cfg = RefinementConfig::default();
        let trivial = Partition::trivial(beta22().base());
        for strategy in [SplitStrategy::Midpoint, SplitStrategy::MassMedian, SplitStrategy::PhiLevel] {
            let cfg = RefinementConfig { split_strategy: strategy, ..cfg };
            let cands = propose_splits(&beta22(), &beta22(), &trivial, 0, &renyi(2.0), &cfg).unwrap();
            assert!(cands.iter().all(|c| c.gain.abs() < 1e-15));
        }
    }

    #[test]
    fn phi_level_proposes_the_jump() {
        let cfg = RefinementConfig::default();
        let trivial = Partition::trivial(unit().base());
        let cands = propose_splits(&half(), &unit(), &trivial, 0, &renyi(2.0), &cfg).unwrap();
        assert_eq!(cands[0].at, SplitAt::Point(0.5));
        // 2-cell inner sum is 2, the trivial one is 1
        assert_abs_diff_eq!(cands[0].gain, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mass_median_splits_r_in_half() {
        let cfg = RefinementConfig {
            split_strategy: SplitStrategy::MassMedian,
            candidate_count: 1,
            ..RefinementConfig::default()
        };
        let trivial = Partition::trivial(unit().base());
        let cands = propose_splits(&unit(), &beta22(), &trivial, 0, &OrderParam::kl(), &cfg).unwrap();
        let SplitAt::Point(x) = cands[0].at else { panic!() };
        assert_abs_diff_eq!(x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(cands[0].left.1, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn discrete_peel_offs_are_ranked() {
        let p = ProbabilityMeasure::discrete(&[("a", 0.2), ("b", 0.3), ("c", 0.5)]).unwrap();
        let r = ProbabilityMeasure::discrete(&[("a", 0.4), ("b", 0.3), ("c", 0.3)]).unwrap();
        let trivial = Partition::trivial(p.base());
        let cands = propose_splits(&p, &r, &trivial, 0, &renyi(2.0), &RefinementConfig::default()).unwrap();
        assert_eq!(cands.len(), 3);
        let inner = |parts: &[(f64, f64)]| parts.iter().map(|&(p, r)| p * p / r).sum::<f64>();
        for c in &cands {
            assert_abs_diff_eq!(c.gain, inner(&[c.left, c.right]) - 1.0, epsilon = 1e-15);
        }
        assert!(cands.windows(2).all(|w| w[0].gain >= w[1].gain));
        assert_eq!(cands[0].at, SplitAt::Atoms(vec!["c".into()]));
    }

    #[test]
    fn sweep_on_step_ratio_is_order_independent() {
        let ests = run_alpha_sweep(&half(), &unit(), &[1.5, 2.0, 3.0], &RefinementConfig::default()).unwrap();
        for e in ests {
            assert_abs_diff_eq!(fin(e.lower_bound), 2f64.ln(), epsilon = 1e-12);
        }
        assert!(run_alpha_sweep(&half(), &unit(), &[0.5], &RefinementConfig::default()).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = RefinementConfig {
            max_cells: 1,
            ..RefinementConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = RefinementConfig {
            rel_gap_tol: 0.0,
            ..RefinementConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}

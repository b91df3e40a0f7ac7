//! Simple functions, the dyadic quantizer of `φ = dP/dR` and the measures and
//! divergences those quantizations induce.

use std::collections::HashMap;

use crate::divergence::check_order;
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::measure::{cell_mass, interval_mass, Cell, Interval, ProbabilityMeasure, ReferenceMeasure};
use crate::partition::{power_term, Partition};
use crate::poly::Polynomial;
use crate::radon_nikodym::{density_ratio, DensityEvaluator, JointPiece, Layout};
use crate::sum::CompensatedSum;

/// Segments lighter than this (in R-mass) are folded into a neighbour.
const NEGLIGIBLE_MASS: f64 = 1e-15;

/// `s = Σ a_k χ_{E_k}` over the cells of a partition.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleFunction {
    levels: Vec<f64>,
    partition: Partition,
    index: Index,
}

#[derive(Clone, Debug, PartialEq)]
enum Index {
    /// Maximal intervals sorted left to right, each with its cell.
    Segments(Vec<(Interval, usize)>),
    Atoms(HashMap<String, usize>),
}

impl SimpleFunction {
    pub fn new(levels: Vec<f64>, partition: Partition) -> Result<Self> {
        if levels.len() != partition.len() {
            return Err(Error::InvalidPartition(format!(
                "{} levels for {} cells",
                levels.len(),
                partition.len()
            )));
        }
        if levels.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidConfig("levels must be finite and nonnegative".into()));
        }
        let index = build_index(&partition);
        Ok(SimpleFunction {
            levels,
            partition,
            index,
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Value at a point of a continuous support; `0` off the support.
    pub fn eval(&self, x: f64) -> f64 {
        let Index::Segments(segs) = &self.index else {
            return 0.0;
        };
        let i = segs.partition_point(|(iv, _)| iv.hi <= x);
        if let Some((iv, k)) = segs.get(i) {
            if iv.lo <= x && x < iv.hi {
                return self.levels[*k];
            }
        }
        if i > 0 {
            let (iv, k) = &segs[i - 1];
            if iv.hi == x && self.partition.base().is_right_end(x) {
                return self.levels[*k];
            }
        }
        0.0
    }

    pub fn eval_atom(&self, label: &str) -> Option<f64> {
        match &self.index {
            Index::Atoms(map) => map.get(label).map(|&k| self.levels[k]),
            Index::Segments(_) => None,
        }
    }
}

fn build_index(partition: &Partition) -> Index {
    match partition.base() {
        ReferenceMeasure::Counting { .. } => {
            let mut map = HashMap::new();
            for (k, cell) in partition.cells().iter().enumerate() {
                if let Cell::Atoms(labels) = cell {
                    for l in labels {
                        map.insert(l.clone(), k);
                    }
                }
            }
            Index::Atoms(map)
        }
        ReferenceMeasure::Lebesgue { .. } => {
            let mut segs: Vec<(Interval, usize)> = partition
                .cells()
                .iter()
                .enumerate()
                .flat_map(|(k, cell)| match cell {
                    Cell::Intervals(ivs) => ivs.iter().map(|iv| (*iv, k)).collect::<Vec<_>>(),
                    Cell::Atoms(_) => Vec::new(),
                })
                .collect();
            segs.sort_by(|a, b| a.0.lo.total_cmp(&b.0.lo));
            Index::Segments(segs)
        }
    }
}

fn dyadic_level(phi: f64, n: u32) -> f64 {
    let cap = n as f64;
    if phi >= cap {
        return cap;
    }
    let scale = (n as f64).exp2();
    ((scale * phi).floor() / scale).min(cap)
}

/// Dyadic quantization `φ_n = min(⌊2^n φ⌋ / 2^n, n)` of a density ratio.
///
/// Cells are the preimages of the dyadic levels. On continuous supports they
/// are found per joint piece: the piece is cut where `φ` turns (roots of
/// `p'r − pr'` and of `r`), and on each monotone segment every threshold
/// `t = j/2^n` in range is located as the sign change of `p − t·r`.
pub fn quantize_rn_derivative(phi: &DensityEvaluator, n: u32) -> Result<SimpleFunction> {
    if n == 0 {
        return Err(Error::InvalidConfig("quantization level n must be at least 1".into()));
    }
    if n > 40 {
        return Err(Error::InvalidConfig(format!("quantization level {n} is too fine")));
    }
    let pair = phi.pair();
    let base = pair.base().clone();
    match pair.layout() {
        Layout::Atoms { p, r } => {
            let atoms = base.atoms().unwrap_or_default();
            let mut levels: Vec<f64> = Vec::new();
            let mut groups: Vec<Vec<String>> = Vec::new();
            for (i, label) in atoms.iter().enumerate() {
                let a = dyadic_level(density_ratio(p[i], r[i]), n);
                match levels.iter().position(|&l| l == a) {
                    Some(k) => groups[k].push(label.clone()),
                    None => {
                        levels.push(a);
                        groups.push(vec![label.clone()]);
                    }
                }
            }
            let partition = Partition::from_groups(&base, groups)?;
            SimpleFunction::new(levels, partition)
        }
        Layout::Pieces(pieces) => {
            let mut segments: Vec<Segment> = Vec::new();
            for jp in pieces {
                quantize_piece(jp, n, &mut segments)?;
            }
            fold_negligible(&mut segments);
            let (levels, cells) = group_segments(&segments);
            let partition = Partition::new(base, cells)?;
            SimpleFunction::new(levels, partition)
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    interval: Interval,
    level: f64,
    r_mass: f64,
}

fn quantize_piece(jp: &JointPiece, n: u32, out: &mut Vec<Segment>) -> Result<()> {
    let iv = jp.interval;
    let push = |lo: f64, hi: f64, out: &mut Vec<Segment>| {
        if hi > lo {
            out.push(Segment {
                interval: Interval::new(lo, hi),
                level: dyadic_level(jp.phi(0.5 * (lo + hi)), n),
                r_mass: jp.r.integrate(lo, hi).max(0.0),
            });
        }
    };
    if jp.p.is_zero() || jp.r.is_zero() {
        push(iv.lo, iv.hi, out);
        return Ok(());
    }
    let wronskian = jp.p.derivative().mul(&jp.r).sub(&jp.p.mul(&jp.r.derivative()));
    let mut knots = vec![iv.lo];
    if !wronskian.is_zero() {
        knots.extend(wronskian.roots_in(iv.lo, iv.hi));
        knots.extend(jp.r.roots_in(iv.lo, iv.hi));
    }
    knots.push(iv.hi);
    knots.retain(|&x| x >= iv.lo && x <= iv.hi);
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let scale = (n as f64).exp2();
    let j_cap = n as u64 * (1u64 << n);
    let dp = derivatives(&jp.p);
    let dr = derivatives(&jp.r);
    let x_scale = iv.lo.abs().max(iv.hi.abs()).max(1.0);

    for w in knots.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        if s1 <= s0 {
            continue;
        }
        let lim0 = limit_ratio(&dp, &dr, s0, 1.0, x_scale);
        let lim1 = limit_ratio(&dp, &dr, s1, -1.0, x_scale);
        let (lo_v, hi_v) = (lim0.min(lim1), lim0.max(lim1));
        let j_lo = ((scale * lo_v).floor().max(1.0)) as u64;
        let j_hi = if hi_v.is_finite() {
            ((scale * hi_v).ceil() as u64).min(j_cap)
        } else {
            j_cap
        };
        let mut cuts: Vec<f64> = Vec::new();
        for j in j_lo..=j_hi {
            let t = j as f64 / scale;
            let sg0 = side_sign(&dp, &dr, t, s0, 1.0, x_scale);
            let sg1 = side_sign(&dp, &dr, t, s1, -1.0, x_scale);
            if sg0 * sg1 < 0.0 {
                // crossings move monotonically with t, so the previous one
                // bounds the search from one side
                let (mut lo, mut hi) = (s0, s1);
                if let Some(&c) = cuts.last() {
                    let gc = jp.p.eval(c) - t * jp.r.eval(c);
                    if gc.signum() == sg0 && c > s0 && c < s1 {
                        lo = c;
                    } else if gc.signum() == sg1 && c > s0 && c < s1 {
                        hi = c;
                    }
                }
                cuts.push(crossing(&dp, &dr, t, lo, hi, sg0));
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut prev = s0;
        for c in cuts {
            if c > prev && c < s1 {
                push(prev, c, out);
                prev = c;
            }
        }
        push(prev, s1, out);
    }
    if out.iter().any(|s| !s.level.is_finite()) {
        return Err(Error::LevelSetResolutionFailure(format!(
            "non-finite level on [{}, {}]",
            iv.lo, iv.hi
        )));
    }
    Ok(())
}

fn derivatives(p: &Polynomial) -> Vec<Polynomial> {
    let mut out = vec![p.clone()];
    while let Some(d) = out.last().filter(|q| !q.is_zero()).map(Polynomial::derivative) {
        out.push(d);
    }
    out
}

fn zero_tol(p: &Polynomial, x_scale: f64) -> f64 {
    1e-12 * p.magnitude() * x_scale.powi(p.coeffs().len().max(1) as i32 - 1)
}

/// One-sided limit of `p/r` at `s`, approached from the right (`dir = 1`) or
/// the left (`dir = -1`), by l'Hôpital on vanishing derivatives.
fn limit_ratio(dp: &[Polynomial], dr: &[Polynomial], s: f64, dir: f64, x_scale: f64) -> f64 {
    for k in 0..dp.len().max(dr.len()) {
        let pk = dp.get(k).map_or(0.0, |q| q.eval(s));
        let rk = dr.get(k).map_or(0.0, |q| q.eval(s));
        let p_zero = dp.get(k).is_none_or(|q| pk.abs() <= zero_tol(q, x_scale));
        let r_zero = dr.get(k).is_none_or(|q| rk.abs() <= zero_tol(q, x_scale));
        if p_zero && r_zero {
            continue;
        }
        // the sign flip of odd derivatives cancels in the ratio
        let sign = if k % 2 == 1 { dir } else { 1.0 };
        return density_ratio(if p_zero { 0.0 } else { sign * pk }, if r_zero { 0.0 } else { sign * rk });
    }
    0.0
}

/// Sign of `p − t·r` just inside a segment end.
fn side_sign(dp: &[Polynomial], dr: &[Polynomial], t: f64, s: f64, dir: f64, x_scale: f64) -> f64 {
    for k in 0..dp.len().max(dr.len()) {
        let pk = dp.get(k).map_or(0.0, |q| q.eval(s));
        let rk = dr.get(k).map_or(0.0, |q| q.eval(s));
        let tol = dp.get(k).map_or(0.0, |q| zero_tol(q, x_scale)) + t * dr.get(k).map_or(0.0, |q| zero_tol(q, x_scale));
        let g = pk - t * rk;
        if g.abs() > tol {
            let sign = if k % 2 == 1 { dir } else { 1.0 };
            return sign * g.signum();
        }
    }
    0.0
}

/// First point of `(lo, hi]` where `φ ≥ t` stops holding as it does just right
/// of `lo` (whose sign of `p − t·r` is `lo_sign`). Points where `φ = t` count
/// as above the level. Newton steps inside a shrinking bracket, bisection
/// whenever a step leaves it, then a few ulp steps to land exactly.
fn crossing(dp: &[Polynomial], dr: &[Polynomial], t: f64, mut lo: f64, mut hi: f64, lo_sign: f64) -> f64 {
    let zero = Polynomial::zero();
    let (p1, r1) = (dp.get(1).unwrap_or(&zero), dr.get(1).unwrap_or(&zero));
    let g = |x: f64| dp[0].eval(x) - t * dr[0].eval(x);
    let dg = |x: f64| p1.eval(x) - t * r1.eval(x);
    let above_lo = lo_sign > 0.0;
    let left_side = |x: f64| (g(x) >= 0.0) == above_lo;
    let (lo0, hi0) = (lo, hi);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = g(x);
        if left_side(x) {
            lo = x;
        } else {
            hi = x;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * x.abs().max(1.0) {
            break;
        }
        let d = dg(x);
        let step = x - v / d;
        if d != 0.0 && (step - x).abs() <= 1e-16 * x.abs().max(1.0) && step > lo && step < hi {
            hi = step;
            break;
        }
        x = if d != 0.0 && step > lo && step < hi { step } else { mid };
    }
    // polish to the exact switch between adjacent floats
    let mut c = hi;
    for _ in 0..64 {
        if c < hi0 && left_side(c) {
            c = c.next_up();
        } else if c.next_down() > lo0 && !left_side(c.next_down()) {
            c = c.next_down();
        } else {
            break;
        }
    }
    c
}

/// Gives segments of negligible R-mass the lower of their neighbours' levels.
fn fold_negligible(segments: &mut [Segment]) {
    if segments.len() < 2 {
        return;
    }
    for i in 0..segments.len() {
        if segments[i].r_mass >= NEGLIGIBLE_MASS {
            continue;
        }
        let left = i.checked_sub(1).map(|j| segments[j].level);
        let right = segments.get(i + 1).map(|s| s.level);
        let level = match (left, right) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => continue,
        };
        segments[i].level = segments[i].level.min(level);
    }
}

/// Cells ordered by their leftmost point; touching segments of equal level
/// are joined.
fn group_segments(segments: &[Segment]) -> (Vec<f64>, Vec<Cell>) {
    let mut levels: Vec<f64> = Vec::new();
    let mut cells: Vec<Vec<Interval>> = Vec::new();
    let mut slot: HashMap<u64, usize> = HashMap::new();
    for s in segments {
        let k = *slot.entry(s.level.to_bits()).or_insert_with(|| {
            levels.push(s.level);
            cells.push(Vec::new());
            levels.len() - 1
        });
        match cells[k].last_mut() {
            Some(last) if last.hi == s.interval.lo => last.hi = s.interval.hi,
            _ => cells[k].push(s.interval),
        }
    }
    (levels, cells.into_iter().map(Cell::Intervals).collect())
}

/// The measure `P_s(E) = ∫_E s dR = Σ a_k R(E ∩ E_k)`; subnormalized in general.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedMeasure {
    simple: SimpleFunction,
    r: ProbabilityMeasure,
    cell_r_masses: Vec<f64>,
}

impl InducedMeasure {
    pub fn simple(&self) -> &SimpleFunction {
        &self.simple
    }

    /// `R(E_k)` for each cell of the simple function.
    pub fn cell_r_masses(&self) -> &[f64] {
        &self.cell_r_masses
    }

    /// `P_s(E_k) = a_k R(E_k)` for each cell.
    pub fn cell_masses(&self) -> Vec<f64> {
        self.simple
            .levels
            .iter()
            .zip(&self.cell_r_masses)
            .map(|(a, r)| a * r)
            .collect()
    }

    pub fn mass(&self, cell: &Cell) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        match (cell, &self.simple.index) {
            (Cell::Atoms(labels), Index::Atoms(map)) => {
                for l in labels {
                    let k = *map.get(l).ok_or(Error::CellOutsideSupport)?;
                    let rm = cell_mass(&self.r, &Cell::Atoms(vec![l.clone()]))?;
                    acc.add(self.simple.levels[k] * rm);
                }
            }
            (Cell::Intervals(ivs), Index::Segments(segs)) => {
                for iv in ivs.iter().filter(|iv| !iv.is_empty()) {
                    if !self.r.base().covers(iv) {
                        return Err(Error::CellOutsideSupport);
                    }
                    let start = segs.partition_point(|(s, _)| s.hi <= iv.lo);
                    for (s, k) in segs[start..].iter().take_while(|(s, _)| s.lo < iv.hi) {
                        let a = self.simple.levels[*k];
                        if a == 0.0 {
                            continue;
                        }
                        if let Some(part) = s.intersect(iv) {
                            acc.add(a * interval_mass(&self.r, &part));
                        }
                    }
                }
            }
            _ => return Err(Error::CellOutsideSupport),
        }
        Ok(acc.value())
    }

    pub fn total_mass(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for m in self.cell_masses() {
            acc.add(m);
        }
        acc.value()
    }
}

fn r_masses_over(s: &SimpleFunction, r: &ProbabilityMeasure) -> Result<(ProbabilityMeasure, Vec<f64>)> {
    let r = r.extend_to(s.partition.base())?;
    let masses = s
        .partition
        .cells()
        .iter()
        .map(|c| cell_mass(&r, c))
        .collect::<Result<Vec<_>>>()?;
    Ok((r, masses))
}

/// The measure induced by a simple function against `R`.
pub fn induced_measure(s: &SimpleFunction, r: &ProbabilityMeasure) -> Result<InducedMeasure> {
    let (r, cell_r_masses) = r_masses_over(s, r)?;
    Ok(InducedMeasure {
        simple: s.clone(),
        r,
        cell_r_masses,
    })
}

/// `(1/(α−1)) ln Σ a_k^α R(E_k)`, the Rényi integral of a simple function.
pub fn simple_divergence(s: &SimpleFunction, r: &ProbabilityMeasure, alpha: f64) -> Result<ExtendedReal> {
    let alpha = check_order(alpha)?;
    let (_, rm) = r_masses_over(s, r)?;
    let mut acc = CompensatedSum::new();
    for (a, m) in s.levels.iter().zip(&rm) {
        if *a > 0.0 && *m > 0.0 {
            acc.add(a.powf(alpha) * m);
        }
    }
    Ok(ExtendedReal::ln(acc.value()).scale(1.0 / (alpha - 1.0)))
}

/// The same quantity through cell masses, `Σ P_s(E_k)^α / R(E_k)^{α−1}`.
pub fn simple_divergence_mass_form(s: &SimpleFunction, r: &ProbabilityMeasure, alpha: f64) -> Result<ExtendedReal> {
    let alpha = check_order(alpha)?;
    let induced = induced_measure(s, r)?;
    let mut acc = CompensatedSum::new();
    for (pm, rm) in induced.cell_masses().into_iter().zip(induced.cell_r_masses()) {
        if *rm > 0.0 {
            acc.add(power_term(pm, *rm, alpha));
        }
    }
    Ok(ExtendedReal::ln(acc.value()).scale(1.0 / (alpha - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radon_nikodym::rn_derivative;
    use approx::assert_abs_diff_eq;

    fn unit() -> ProbabilityMeasure {
        ProbabilityMeasure::uniform(0.0, 1.0).unwrap()
    }

    fn beta22() -> ProbabilityMeasure {
        ProbabilityMeasure::beta(2, 2).unwrap()
    }

    fn fin(v: ExtendedReal) -> f64 {
        v.finite().expect("finite value")
    }

    #[test]
    fn step_ratio_is_recovered() {
        let half = ProbabilityMeasure::uniform(0.0, 0.5).unwrap();
        let phi = rn_derivative(&half, &unit()).unwrap();
        let s = quantize_rn_derivative(&phi, 2).unwrap();
        assert_eq!(s.levels(), &[2.0, 0.0]);
        assert_eq!(s.partition().cells(), &[Cell::interval(0.0, 0.5), Cell::interval(0.5, 1.0)]);
        assert_eq!(s.eval(0.25), 2.0);
        assert_eq!(s.eval(1.0), 0.0);

        let induced = induced_measure(&s, &unit()).unwrap();
        assert_eq!(induced.total_mass(), 1.0);
        assert_eq!(induced.mass(&Cell::interval(0.0, 0.25)).unwrap(), 0.5);
        assert_abs_diff_eq!(fin(simple_divergence(&s, &unit(), 2.0).unwrap()), 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn identity_ratio_is_a_single_level() {
        for n in [1, 3, 7] {
            let phi = rn_derivative(&beta22(), &beta22()).unwrap();
            let s = quantize_rn_derivative(&phi, n).unwrap();
            assert_eq!(s.levels(), &[1.0]);
            let induced = induced_measure(&s, &beta22()).unwrap();
            assert_abs_diff_eq!(induced.total_mass(), 1.0, epsilon = 1e-15);
            assert_eq!(fin(simple_divergence(&s, &beta22(), 3.0).unwrap()), 0.0);
        }
    }

    #[test]
    fn beta_ratio_at_level_one() {
        let phi = rn_derivative(&beta22(), &unit()).unwrap();
        let s = quantize_rn_derivative(&phi, 1).unwrap();
        let mut levels = s.levels().to_vec();
        levels.sort_by(f64::total_cmp);
        assert_eq!(levels, vec![0.0, 0.5, 1.0]);

        // 6x(1-x) = t  <=>  x = (1 ± sqrt(1 - 2t/3)) / 2
        let root = |t: f64, sign: f64| 0.5 * (1.0 + sign * (1.0 - 2.0 * t / 3.0).sqrt());
        let (a, b) = (root(0.5, -1.0), root(1.0, -1.0));
        let (c, d) = (root(1.0, 1.0), root(0.5, 1.0));
        let r_mass_of = |level: f64| {
            let k = s.levels().iter().position(|&l| l == level).unwrap();
            cell_mass(&unit(), &s.partition().cells()[k]).unwrap()
        };
        assert_abs_diff_eq!(r_mass_of(0.0), a + (1.0 - d), epsilon = 1e-14);
        assert_abs_diff_eq!(r_mass_of(0.5), (b - a) + (d - c), epsilon = 1e-14);
        assert_abs_diff_eq!(r_mass_of(1.0), c - b, epsilon = 1e-14);

        let induced = induced_measure(&s, &unit()).unwrap();
        let expected = 0.5 * ((b - a) + (d - c)) + (c - b);
        assert_abs_diff_eq!(induced.total_mass(), expected, epsilon = 1e-14);
        assert!(induced.total_mass() < 1.0);
    }

    #[test]
    fn beta_ratio_at_level_three() {
        // oracle: enumerate the thresholds of 6x(1-x) directly
        let phi = rn_derivative(&beta22(), &unit()).unwrap();
        let s = quantize_rn_derivative(&phi, 3).unwrap();
        let mut inner = 0.0;
        for j in 0..12 {
            let t0 = j as f64 / 8.0;
            let t1 = (j + 1) as f64 / 8.0;
            let width = |t: f64| if t >= 1.5 { 0.0 } else { (1.0 - 2.0 * t / 3.0).sqrt() };
            inner += t0 * t0 * (width(t0) - width(t1));
        }
        let want = inner.ln();
        let got = fin(simple_divergence(&s, &unit(), 2.0).unwrap());
        assert_abs_diff_eq!(got, want, epsilon = 1e-13);
        assert!(got <= 1.2f64.ln());
        let mass_form = fin(simple_divergence_mass_form(&s, &unit(), 2.0).unwrap());
        assert_abs_diff_eq!(got, mass_form, epsilon = 1e-12);
    }

    #[test]
    fn unbounded_ratio_is_capped() {
        // φ = 2x / 1 on [0,1] against Beta(1,1); and the reverse, which blows up at 1
        let b21 = ProbabilityMeasure::beta(2, 1).unwrap();
        let b12 = ProbabilityMeasure::beta(1, 2).unwrap();
        let phi = rn_derivative(&b21, &b12).unwrap();
        let s = quantize_rn_derivative(&phi, 2).unwrap();
        assert_eq!(s.levels().iter().cloned().fold(0.0, f64::max), 2.0);
        for x in [0.05, 0.3, 0.6, 0.9, 0.999] {
            assert!(s.eval(x) <= phi.at(x));
        }
    }

    #[test]
    fn discrete_levels_group_atoms() {
        let p = ProbabilityMeasure::discrete(&[("a", 0.5), ("b", 0.25), ("c", 0.25)]).unwrap();
        let r = ProbabilityMeasure::discrete(&[("a", 0.25), ("b", 0.25), ("c", 0.5)]).unwrap();
        let phi = rn_derivative(&p, &r).unwrap();
        let s = quantize_rn_derivative(&phi, 2).unwrap();
        assert_eq!(s.levels(), &[2.0, 1.0, 0.5]);
        assert_eq!(s.eval_atom("c"), Some(0.5));
        let induced = induced_measure(&s, &r).unwrap();
        assert_eq!(induced.total_mass(), 1.0);
        let want = (0.5f64 * 0.5 / 0.25 + 0.25 + 0.25 * 0.25 / 0.5).ln();
        assert_abs_diff_eq!(fin(simple_divergence(&s, &r, 2.0).unwrap()), want, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let phi = rn_derivative(&beta22(), &unit()).unwrap();
        assert!(quantize_rn_derivative(&phi, 0).is_err());
        let base = ReferenceMeasure::lebesgue(vec![Interval::new(0.0, 1.0)]).unwrap();
        assert!(SimpleFunction::new(vec![-1.0], Partition::trivial(&base)).is_err());
        assert!(SimpleFunction::new(vec![1.0, 2.0], Partition::trivial(&base)).is_err());
    }
}

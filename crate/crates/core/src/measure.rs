//! Probability measures over finite atom sets or finite unions of bounded
//! intervals, with exact cell masses.
//!
//! Continuous densities are piecewise polynomials, so the mass of any finite
//! union of intervals is a closed-form antiderivative difference. Discrete
//! measures carry one mass per labelled atom and use the counting measure as
//! their reference.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::sum::compensated_sum;

pub const DEFAULT_NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Samples per polynomial piece for the nonnegativity check, on top of the
/// piece endpoints and the critical points of the density.
const NONNEGATIVITY_GRID: usize = 256;
const NEGATIVITY_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Nonempty intersection, if any.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Sorts intervals, drops empty ones and merges touching or overlapping runs.
pub(crate) fn normalize_intervals(mut intervals: Vec<Interval>) -> Vec<Interval> {
    intervals.retain(|iv| !iv.is_empty());
    intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}

/// Counting measure on labelled atoms, or Lebesgue measure on a finite union
/// of disjoint bounded intervals.
#[derive(Clone, Debug, PartialEq)]
pub enum ReferenceMeasure {
    Counting { atoms: Vec<String> },
    Lebesgue { intervals: Vec<Interval> },
}

impl ReferenceMeasure {
    pub fn counting(atoms: Vec<String>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidSupport("no atoms".into()));
        }
        let mut seen = HashSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::InvalidSupport(format!("duplicate atom label {a:?}")));
            }
        }
        Ok(ReferenceMeasure::Counting { atoms })
    }

    /// Intervals must be finite with positive length and pairwise disjoint;
    /// intervals sharing an endpoint are merged.
    pub fn lebesgue(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidSupport("no intervals".into()));
        }
        for iv in &intervals {
            if !(iv.lo.is_finite() && iv.hi.is_finite()) || iv.hi <= iv.lo {
                return Err(Error::InvalidSupport(format!(
                    "interval [{}, {}] must be bounded with positive length",
                    iv.lo, iv.hi
                )));
            }
        }
        let mut sorted = intervals.clone();
        sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for w in sorted.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::InvalidSupport(format!(
                    "intervals [{}, {}] and [{}, {}] overlap",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        Ok(ReferenceMeasure::Lebesgue {
            intervals: normalize_intervals(sorted),
        })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, ReferenceMeasure::Counting { .. })
    }

    pub fn atoms(&self) -> Option<&[String]> {
        match self {
            ReferenceMeasure::Counting { atoms } => Some(atoms),
            _ => None,
        }
    }

    pub fn intervals(&self) -> Option<&[Interval]> {
        match self {
            ReferenceMeasure::Lebesgue { intervals } => Some(intervals),
            _ => None,
        }
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms()?.iter().position(|a| a == label)
    }

    /// Smallest reference of the same kind containing both supports.
    pub fn union(&self, other: &ReferenceMeasure) -> Result<ReferenceMeasure> {
        match (self, other) {
            (ReferenceMeasure::Counting { atoms: a }, ReferenceMeasure::Counting { atoms: b }) => {
                let mut atoms = a.clone();
                for label in b {
                    if !atoms.contains(label) {
                        atoms.push(label.clone());
                    }
                }
                Ok(ReferenceMeasure::Counting { atoms })
            }
            (
                ReferenceMeasure::Lebesgue { intervals: a },
                ReferenceMeasure::Lebesgue { intervals: b },
            ) => Ok(ReferenceMeasure::Lebesgue {
                intervals: normalize_intervals(a.iter().chain(b).copied().collect()),
            }),
            _ => Err(Error::MismatchedReference),
        }
    }

    /// The cell covering the whole support.
    pub fn full_cell(&self) -> Cell {
        match self {
            ReferenceMeasure::Counting { atoms } => Cell::Atoms(atoms.clone()),
            ReferenceMeasure::Lebesgue { intervals } => Cell::Intervals(intervals.clone()),
        }
    }

    /// Whether an interval lies inside a single support component.
    pub fn covers(&self, iv: &Interval) -> bool {
        match self {
            ReferenceMeasure::Lebesgue { intervals } => {
                intervals.iter().any(|s| s.contains_interval(iv))
            }
            _ => false,
        }
    }

    /// Whether `x` is the right endpoint of a support component. Cells are
    /// half-open `[lo, hi)` except at these points, where they are closed.
    pub fn is_right_end(&self, x: f64) -> bool {
        match self {
            ReferenceMeasure::Lebesgue { intervals } => intervals.iter().any(|s| s.hi == x),
            _ => false,
        }
    }
}

/// A measurable set representable by this crate: a set of atom labels, or a
/// finite union of half-open intervals `[lo, hi)` (closed at the right end of
/// the support).
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Atoms(Vec<String>),
    Intervals(Vec<Interval>),
}

impl Cell {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Cell::Intervals(vec![Interval::new(lo, hi)])
    }

    pub fn atoms<S: AsRef<str>>(labels: &[S]) -> Self {
        Cell::Atoms(labels.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Cell::Atoms(a) => a.is_empty(),
            Cell::Intervals(ivs) => ivs.iter().all(Interval::is_empty),
        }
    }

    /// Leftmost coordinate of an interval cell; used for left-to-right ordering.
    pub fn left(&self) -> Option<f64> {
        match self {
            Cell::Intervals(ivs) => ivs.iter().map(|iv| iv.lo).reduce(f64::min),
            Cell::Atoms(_) => None,
        }
    }

    pub fn right(&self) -> Option<f64> {
        match self {
            Cell::Intervals(ivs) => ivs.iter().map(|iv| iv.hi).reduce(f64::max),
            Cell::Atoms(_) => None,
        }
    }

    /// Total Lebesgue length (interval cells) or atom count.
    pub fn size(&self) -> f64 {
        match self {
            Cell::Atoms(a) => a.len() as f64,
            Cell::Intervals(ivs) => ivs.iter().map(Interval::len).sum(),
        }
    }

    /// Set intersection; `None` when empty or when the kinds differ.
    pub fn intersect(&self, other: &Cell) -> Option<Cell> {
        match (self, other) {
            (Cell::Atoms(a), Cell::Atoms(b)) => {
                let common: Vec<String> = a.iter().filter(|x| b.contains(x)).cloned().collect();
                (!common.is_empty()).then_some(Cell::Atoms(common))
            }
            (Cell::Intervals(a), Cell::Intervals(b)) => {
                let parts: Vec<Interval> = a
                    .iter()
                    .flat_map(|x| b.iter().filter_map(move |y| x.intersect(y)))
                    .collect();
                let parts = normalize_intervals(parts);
                (!parts.is_empty()).then_some(Cell::Intervals(parts))
            }
            _ => None,
        }
    }

    /// Whether this cell is a subset of `other`.
    pub fn is_subset_of(&self, other: &Cell) -> bool {
        match (self, other) {
            (Cell::Atoms(a), Cell::Atoms(b)) => a.iter().all(|x| b.contains(x)),
            (Cell::Intervals(a), Cell::Intervals(b)) => {
                let b = normalize_intervals(b.clone());
                a.iter()
                    .filter(|iv| !iv.is_empty())
                    .all(|iv| b.iter().any(|s| s.contains_interval(iv)))
            }
            _ => false,
        }
    }
}

/// One polynomial piece of a density, with its cached antiderivative.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub interval: Interval,
    poly: Polynomial,
    primitive: Polynomial,
}

impl Piece {
    pub fn new(interval: Interval, poly: Polynomial) -> Self {
        let primitive = poly.antiderivative();
        Piece {
            interval,
            poly,
            primitive,
        }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Exact integral of the piece density over `[a, b] ∩ piece`.
    pub fn mass_on(&self, iv: &Interval) -> f64 {
        match self.interval.intersect(iv) {
            Some(x) => self.primitive.eval(x.hi) - self.primitive.eval(x.lo),
            None => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    /// One mass per atom, in the order of the reference atoms.
    Atoms(Vec<f64>),
    /// Sorted, non-overlapping pieces within the support. The density is zero
    /// wherever no piece applies.
    Pieces(Vec<Piece>),
}

/// A validated probability measure: discrete masses or a piecewise-polynomial
/// density with respect to its reference measure.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityMeasure {
    base: ReferenceMeasure,
    density: Density,
    normalization_tolerance: f64,
}

impl ProbabilityMeasure {
    /// Validates and builds a measure with the default normalization tolerance.
    pub fn new(base: ReferenceMeasure, density: Density) -> Result<Self> {
        Self::with_tolerance(base, density, DEFAULT_NORMALIZATION_TOLERANCE)
    }

    pub fn with_tolerance(
        base: ReferenceMeasure,
        density: Density,
        normalization_tolerance: f64,
    ) -> Result<Self> {
        let density = match density {
            Density::Pieces(mut pieces) => {
                pieces.sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
                Density::Pieces(pieces)
            }
            d => d,
        };
        validate_measure(ProbabilityMeasure {
            base,
            density,
            normalization_tolerance,
        })
    }

    /// Discrete measure from `(label, mass)` pairs.
    pub fn discrete<S: AsRef<str>>(atoms: &[(S, f64)]) -> Result<Self> {
        let base = ReferenceMeasure::counting(atoms.iter().map(|(l, _)| l.as_ref().to_string()).collect())?;
        Self::new(base, Density::Atoms(atoms.iter().map(|(_, m)| *m).collect()))
    }

    /// Discrete measure over atoms labelled `a0, a1, ...`.
    pub fn from_masses(masses: &[f64]) -> Result<Self> {
        let atoms: Vec<(String, f64)> = masses
            .iter()
            .enumerate()
            .map(|(i, &m)| (format!("a{i}"), m))
            .collect();
        Self::discrete(&atoms)
    }

    /// Piecewise-polynomial density. `pieces` holds each interval with its
    /// ascending coefficients in the global coordinate `x`.
    pub fn piecewise(support: Vec<Interval>, pieces: Vec<(Interval, Vec<f64>)>) -> Result<Self> {
        let base = ReferenceMeasure::lebesgue(support)?;
        let pieces = pieces
            .into_iter()
            .map(|(iv, c)| Piece::new(iv, Polynomial::new(c)))
            .collect();
        Self::new(base, Density::Pieces(pieces))
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        let iv = Interval::new(lo, hi);
        Self::piecewise(vec![iv], vec![(iv, vec![1.0 / (hi - lo)])])
    }

    /// Beta(a, b) with integer shape parameters, on `[0, 1]`.
    pub fn beta(a: u32, b: u32) -> Result<Self> {
        Self::beta_on(a, b, Interval::new(0.0, 1.0))
    }

    /// Beta(a, b) with integer shapes, affinely mapped onto `support`.
    pub fn beta_on(a: u32, b: u32, support: Interval) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Parse("beta shape parameters must be positive integers".into()));
        }
        // 1 / B(a, b) = (a + b - 1)! / ((a - 1)! (b - 1)!)
        let inv_beta = (1..a + b).map(f64::from).product::<f64>()
            / ((1..a).map(f64::from).product::<f64>() * (1..b).map(f64::from).product::<f64>());
        let x = Polynomial::new(vec![0.0, 1.0]);
        let one_minus_x = Polynomial::new(vec![1.0, -1.0]);
        let unit = x.powi(a - 1).mul(&one_minus_x.powi(b - 1)).scale(inv_beta);
        let w = support.len();
        let poly = unit.compose_affine(1.0 / w, -support.lo / w).scale(1.0 / w);
        Self::new(
            ReferenceMeasure::lebesgue(vec![support])?,
            Density::Pieces(vec![Piece::new(support, poly)]),
        )
    }

    /// Gaussian truncated to `support`, represented by piecewise degree-8
    /// interpolants at Chebyshev nodes on sub-pieces no wider than `sd / 2`,
    /// then renormalized by exact integration.
    pub fn truncated_gaussian(mean: f64, sd: f64, support: Interval) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) {
            return Err(Error::Parse("gaussian needs a finite mean and positive sd".into()));
        }
        const DEGREE: usize = 8;
        let n_pieces = ((support.len() / (0.5 * sd)).ceil() as usize).max(1);
        let w = support.len() / n_pieces as f64;
        let gauss = |x: f64| (-0.5 * ((x - mean) / sd).powi(2)).exp();
        let mut pieces = Vec::with_capacity(n_pieces);
        for k in 0..n_pieces {
            let lo = support.lo + k as f64 * w;
            let hi = if k + 1 == n_pieces { support.hi } else { lo + w };
            let nodes: Vec<f64> = (0..=DEGREE)
                .map(|j| {
                    (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * (DEGREE + 1)) as f64).cos()
                })
                .collect();
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let values: Vec<f64> = nodes.iter().map(|t| gauss(mid + half * t)).collect();
            let local = newton_interpolant(&nodes, &values);
            // t = (x - mid) / half
            let poly = local.compose_affine(1.0 / half, -mid / half);
            pieces.push(Piece::new(Interval::new(lo, hi), poly));
        }
        let total: f64 = pieces.iter().map(|p| p.mass_on(&p.interval)).sum();
        let pieces = pieces
            .into_iter()
            .map(|p| Piece::new(p.interval, p.poly.scale(1.0 / total)))
            .collect();
        Self::new(ReferenceMeasure::lebesgue(vec![support])?, Density::Pieces(pieces))
    }

    pub fn base(&self) -> &ReferenceMeasure {
        &self.base
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn normalization_tolerance(&self) -> f64 {
        self.normalization_tolerance
    }

    pub fn is_discrete(&self) -> bool {
        self.base.is_discrete()
    }

    /// Atom masses (discrete measures only).
    pub fn masses(&self) -> Option<&[f64]> {
        match &self.density {
            Density::Atoms(m) => Some(m),
            _ => None,
        }
    }

    pub fn pieces(&self) -> Option<&[Piece]> {
        match &self.density {
            Density::Pieces(p) => Some(p),
            _ => None,
        }
    }

    /// Density value at `x` (Lebesgue case). Zero off the pieces.
    pub fn density_at(&self, x: f64) -> f64 {
        match &self.density {
            Density::Pieces(pieces) => locate_piece(pieces, x, &self.base)
                .map(|p| p.poly.eval(x))
                .unwrap_or(0.0),
            Density::Atoms(_) => 0.0,
        }
    }

    /// Mass of a single atom, or `None` if the label is unknown.
    pub fn atom_mass(&self, label: &str) -> Option<f64> {
        let i = self.base.atom_index(label)?;
        self.masses().map(|m| m[i])
    }

    /// Total mass, recomputed by exact summation / polynomial integration.
    pub fn total_mass(&self) -> f64 {
        match &self.density {
            Density::Atoms(m) => compensated_sum(m.iter().copied()),
            Density::Pieces(pieces) => compensated_sum(pieces.iter().map(|p| p.mass_on(&p.interval))),
        }
    }

    /// The same measure re-expressed over a larger reference of the same kind.
    /// Atoms or intervals that are new carry zero density.
    pub fn extend_to(&self, base: &ReferenceMeasure) -> Result<ProbabilityMeasure> {
        match (&self.density, base) {
            (Density::Atoms(masses), ReferenceMeasure::Counting { atoms }) => {
                let own = self.base.atoms().unwrap_or(&[]);
                if own.iter().any(|a| !atoms.contains(a)) {
                    return Err(Error::MismatchedReference);
                }
                let extended = atoms
                    .iter()
                    .map(|a| own.iter().position(|o| o == a).map(|i| masses[i]).unwrap_or(0.0))
                    .collect();
                Ok(ProbabilityMeasure {
                    base: base.clone(),
                    density: Density::Atoms(extended),
                    normalization_tolerance: self.normalization_tolerance,
                })
            }
            (Density::Pieces(pieces), ReferenceMeasure::Lebesgue { .. }) => {
                let own = self.base.intervals().unwrap_or(&[]);
                if own.iter().any(|iv| !base.covers(iv)) {
                    return Err(Error::MismatchedReference);
                }
                Ok(ProbabilityMeasure {
                    base: base.clone(),
                    density: Density::Pieces(pieces.clone()),
                    normalization_tolerance: self.normalization_tolerance,
                })
            }
            _ => Err(Error::MismatchedReference),
        }
    }
}

pub(crate) fn locate_piece<'a>(pieces: &'a [Piece], x: f64, base: &ReferenceMeasure) -> Option<&'a Piece> {
    let idx = pieces.partition_point(|p| p.interval.hi <= x);
    if let Some(p) = pieces.get(idx) {
        if p.interval.lo <= x && x < p.interval.hi {
            return Some(p);
        }
    }
    // closed right end of a support component
    if idx > 0 {
        let p = &pieces[idx - 1];
        if p.interval.hi == x && base.is_right_end(x) {
            return Some(p);
        }
    }
    None
}

/// Coefficients (ascending) of the interpolating polynomial through the nodes.
fn newton_interpolant(nodes: &[f64], values: &[f64]) -> Polynomial {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    let mut poly = Polynomial::constant(dd[n - 1]);
    for i in (0..n - 1).rev() {
        poly = poly
            .mul(&Polynomial::new(vec![-nodes[i], 1.0]))
            .add(&Polynomial::constant(dd[i]));
    }
    poly
}

/// Checks nonnegativity and normalization; returns the measure unchanged when
/// both hold.
pub fn validate_measure(m: ProbabilityMeasure) -> Result<ProbabilityMeasure> {
    if !(m.normalization_tolerance > 0.0) {
        return Err(Error::InvalidConfig("normalization tolerance must be positive".into()));
    }
    match (&m.base, &m.density) {
        (ReferenceMeasure::Counting { atoms }, Density::Atoms(masses)) => {
            if atoms.len() != masses.len() {
                return Err(Error::Parse(format!(
                    "{} atoms but {} masses",
                    atoms.len(),
                    masses.len()
                )));
            }
            for (label, &mass) in atoms.iter().zip(masses) {
                if !mass.is_finite() || mass < 0.0 {
                    return Err(Error::NegativeDensity {
                        at: format!("atom {label:?}"),
                        value: mass,
                    });
                }
            }
        }
        (ReferenceMeasure::Lebesgue { .. }, Density::Pieces(pieces)) => {
            for (i, p) in pieces.iter().enumerate() {
                if p.interval.is_empty() || !m.base.covers(&p.interval) {
                    return Err(Error::InvalidSupport(format!(
                        "piece [{}, {}] is empty or outside the support",
                        p.interval.lo, p.interval.hi
                    )));
                }
                if i > 0 && pieces[i - 1].interval.hi > p.interval.lo {
                    return Err(Error::InvalidSupport("density pieces overlap".into()));
                }
                if p.poly.coeffs().iter().any(|c| !c.is_finite()) {
                    return Err(Error::Parse("non-finite density coefficient".into()));
                }
                check_piece_nonnegative(p)?;
            }
        }
        _ => return Err(Error::MismatchedReference),
    }
    let total = m.total_mass();
    if (total - 1.0).abs() > m.normalization_tolerance {
        return Err(Error::NotNormalized(total));
    }
    Ok(m)
}

fn check_piece_nonnegative(p: &Piece) -> Result<()> {
    let iv = p.interval;
    let slack = NEGATIVITY_SLACK * p.poly.magnitude().max(1.0);
    let grid = (0..=NONNEGATIVITY_GRID).map(|k| iv.lo + iv.len() * k as f64 / NONNEGATIVITY_GRID as f64);
    let critical = p.poly.derivative().roots_in(iv.lo, iv.hi);
    for x in grid.chain(critical) {
        let v = p.poly.eval(x);
        if v < -slack {
            return Err(Error::NegativeDensity {
                at: format!("x={x}"),
                value: v,
            });
        }
    }
    Ok(())
}

/// Exact mass of a cell: atom summation or piecewise antiderivative differences.
/// Tiny negative round-off is clamped to zero.
/// Mass of one interval under a continuous measure, without support checks;
/// zero for discrete measures.
pub(crate) fn interval_mass(m: &ProbabilityMeasure, iv: &Interval) -> f64 {
    let Density::Pieces(pieces) = &m.density else {
        return 0.0;
    };
    let start = pieces.partition_point(|p| p.interval.hi <= iv.lo);
    let mut total = 0.0;
    for p in pieces[start..].iter().take_while(|p| p.interval.lo < iv.hi) {
        total += p.mass_on(iv);
    }
    total.max(0.0)
}

pub fn cell_mass(m: &ProbabilityMeasure, cell: &Cell) -> Result<f64> {
    let mass = match (cell, &m.density) {
        (Cell::Atoms(labels), Density::Atoms(masses)) => {
            let mut acc = Vec::with_capacity(labels.len());
            for l in labels {
                let i = m.base.atom_index(l).ok_or(Error::CellOutsideSupport)?;
                acc.push(masses[i]);
            }
            compensated_sum(acc)
        }
        (Cell::Intervals(ivs), Density::Pieces(pieces)) => {
            let mut acc = Vec::new();
            for iv in ivs.iter().filter(|iv| !iv.is_empty()) {
                if !m.base.covers(iv) {
                    return Err(Error::CellOutsideSupport);
                }
                let start = pieces.partition_point(|p| p.interval.hi <= iv.lo);
                for p in pieces[start..].iter().take_while(|p| p.interval.lo < iv.hi) {
                    acc.push(p.mass_on(iv));
                }
            }
            compensated_sum(acc)
        }
        _ => return Err(Error::CellOutsideSupport),
    };
    Ok(mass.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_pmf_is_accepted() {
        let m = ProbabilityMeasure::from_masses(&[0.25; 4]).unwrap();
        assert_eq!(m.total_mass(), 1.0);
    }

    #[test]
    fn unnormalized_pmf_is_rejected() {
        match ProbabilityMeasure::from_masses(&[0.5, 1.0 / 3.0]) {
            Err(Error::NotNormalized(mass)) => assert_abs_diff_eq!(mass, 5.0 / 6.0, epsilon = 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn beta22_density_matches_hand_antiderivative() {
        let m = ProbabilityMeasure::beta(2, 2).unwrap();
        let coeffs = m.pieces().unwrap()[0].poly().coeffs().to_vec();
        assert_eq!(coeffs, vec![0.0, 6.0, -6.0]);
        // 3x^2 - 2x^3 at 1
        assert_abs_diff_eq!(m.total_mass(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn negative_density_is_rejected() {
        // 2 - 2x + ... shifted so it dips below zero inside [0, 1] but integrates to 1
        let r = ProbabilityMeasure::piecewise(
            vec![Interval::new(0.0, 1.0)],
            vec![(Interval::new(0.0, 1.0), vec![4.0, -18.0, 18.0])],
        );
        assert!(matches!(r, Err(Error::NegativeDensity { .. })), "{r:?}");
    }

    #[test]
    fn negative_mass_is_rejected() {
        let r = ProbabilityMeasure::from_masses(&[1.5, -0.5]);
        assert!(matches!(r, Err(Error::NegativeDensity { .. })));
    }

    #[test]
    fn cell_masses() {
        let u = ProbabilityMeasure::uniform(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(cell_mass(&u, &Cell::interval(0.0, 0.5)).unwrap(), 0.5);

        let b = ProbabilityMeasure::beta(2, 2).unwrap();
        // oracle: 3x^2 - 2x^3 at 3/4 minus at 1/4 = 27/32 - 5/32
        assert_abs_diff_eq!(cell_mass(&b, &Cell::interval(0.25, 0.75)).unwrap(), 0.6875, epsilon = 1e-15);

        let d = ProbabilityMeasure::discrete(&[("a", 0.5), ("b", 0.5)]).unwrap();
        assert_eq!(cell_mass(&d, &Cell::atoms(&["a"])).unwrap(), 0.5);
    }

    #[test]
    fn cell_outside_support() {
        let u = ProbabilityMeasure::uniform(0.0, 1.0).unwrap();
        assert!(matches!(cell_mass(&u, &Cell::interval(0.5, 1.5)), Err(Error::CellOutsideSupport)));
        let d = ProbabilityMeasure::discrete(&[("a", 1.0)]).unwrap();
        assert!(matches!(cell_mass(&d, &Cell::atoms(&["z"])), Err(Error::CellOutsideSupport)));
        assert!(matches!(cell_mass(&d, &Cell::interval(0.0, 1.0)), Err(Error::CellOutsideSupport)));
    }

    #[test]
    fn overlapping_support_rejected() {
        let r = ReferenceMeasure::lebesgue(vec![Interval::new(0.0, 1.0), Interval::new(0.5, 2.0)]);
        assert!(matches!(r, Err(Error::InvalidSupport(_))));
        let r = ReferenceMeasure::counting(vec!["a".into(), "a".into()]);
        assert!(matches!(r, Err(Error::InvalidSupport(_))));
    }

    #[test]
    fn beta_on_shifted_support() {
        let m = ProbabilityMeasure::beta_on(2, 3, Interval::new(2.0, 4.0)).unwrap();
        assert_abs_diff_eq!(m.total_mass(), 1.0, epsilon = 1e-12);
        // mode of Beta(2,3) at 1/3 -> x = 2 + 2/3
        let at_mode = m.density_at(2.0 + 2.0 / 3.0);
        assert!(at_mode > m.density_at(2.2) && at_mode > m.density_at(3.5));
    }

    #[test]
    fn truncated_gaussian_is_close_to_gaussian() {
        let support = Interval::new(-3.0, 3.0);
        let m = ProbabilityMeasure::truncated_gaussian(0.0, 1.0, support).unwrap();
        let z = 0.997_300_203_936_739_8 * (2.0 * std::f64::consts::PI).sqrt();
        for x in [-2.5f64, -1.0, 0.0, 0.3, 2.9] {
            let exact = (-0.5 * x * x).exp() / z;
            assert_abs_diff_eq!(m.density_at(x), exact, epsilon = 1e-8);
        }
    }

    #[test]
    fn right_endpoint_is_closed() {
        let u = ProbabilityMeasure::uniform(0.0, 1.0).unwrap();
        assert_eq!(u.density_at(1.0), 1.0);
        assert_eq!(u.density_at(1.0 + 1e-9), 0.0);
    }
}

//! Pairs of measures on a common reference, the density ratio `φ = dP/dR`
//! and the absolute-continuity decision.

use crate::error::{Error, Result};
use crate::measure::{cell_mass, normalize_intervals, Cell, Interval, ProbabilityMeasure, ReferenceMeasure};
use crate::poly::Polynomial;

/// Both densities restricted to a common polynomial piece.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPiece {
    pub interval: Interval,
    pub p: Polynomial,
    pub r: Polynomial,
}

impl JointPiece {
    /// `φ(x) = p(x) / r(x)`, with `0` on `{p = 0}` and `+∞` on `{r = 0 < p}`.
    pub fn phi(&self, x: f64) -> f64 {
        density_ratio(self.p.eval(x), self.r.eval(x))
    }
}

pub(crate) fn density_ratio(p: f64, r: f64) -> f64 {
    let p = p.max(0.0);
    if p == 0.0 {
        0.0
    } else if r <= 0.0 {
        f64::INFINITY
    } else {
        p / r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Layout {
    Atoms { p: Vec<f64>, r: Vec<f64> },
    Pieces(Vec<JointPiece>),
}

/// Two probability measures expressed over the union of their supports.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurePair {
    p: ProbabilityMeasure,
    r: ProbabilityMeasure,
    layout: Layout,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AbsoluteContinuity {
    Continuous,
    /// A cell with positive P-mass and zero R-mass; maximal among
    /// representable cells.
    Witness(Cell),
}

impl MeasurePair {
    /// Aligns both measures on a common reference. Fails with
    /// `MismatchedReference` when one is discrete and the other is not.
    pub fn new(p: &ProbabilityMeasure, r: &ProbabilityMeasure) -> Result<Self> {
        let base = p.base().union(r.base())?;
        let p = p.extend_to(&base)?;
        let r = r.extend_to(&base)?;
        let layout = match &base {
            ReferenceMeasure::Counting { .. } => Layout::Atoms {
                p: p.masses().unwrap_or_default().to_vec(),
                r: r.masses().unwrap_or_default().to_vec(),
            },
            ReferenceMeasure::Lebesgue { intervals } => {
                Layout::Pieces(joint_pieces(intervals, &p, &r))
            }
        };
        Ok(MeasurePair { p, r, layout })
    }

    pub fn p(&self) -> &ProbabilityMeasure {
        &self.p
    }

    pub fn r(&self) -> &ProbabilityMeasure {
        &self.r
    }

    pub fn base(&self) -> &ReferenceMeasure {
        self.p.base()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn is_discrete(&self) -> bool {
        self.base().is_discrete()
    }

    /// Masses of a cell under both measures.
    pub fn masses(&self, cell: &Cell) -> Result<(f64, f64)> {
        Ok((cell_mass(&self.p, cell)?, cell_mass(&self.r, cell)?))
    }

    pub fn absolute_continuity(&self) -> AbsoluteContinuity {
        match &self.layout {
            Layout::Atoms { p, r } => {
                let atoms = self.base().atoms().unwrap_or_default();
                let witness: Vec<String> = atoms
                    .iter()
                    .zip(p.iter().zip(r))
                    .filter(|(_, (&pm, &rm))| pm > 0.0 && rm == 0.0)
                    .map(|(a, _)| a.clone())
                    .collect();
                if witness.is_empty() {
                    AbsoluteContinuity::Continuous
                } else {
                    AbsoluteContinuity::Witness(Cell::Atoms(witness))
                }
            }
            Layout::Pieces(pieces) => {
                // r is a polynomial on each piece, so it vanishes on a set of
                // positive length only where it is identically zero.
                let witness: Vec<Interval> = pieces
                    .iter()
                    .filter(|jp| jp.r.is_zero() && jp.p.integrate(jp.interval.lo, jp.interval.hi) > 0.0)
                    .map(|jp| jp.interval)
                    .collect();
                if witness.is_empty() {
                    AbsoluteContinuity::Continuous
                } else {
                    AbsoluteContinuity::Witness(Cell::Intervals(normalize_intervals(witness)))
                }
            }
        }
    }

    /// `φ` at a point of a continuous pair; zero outside the support.
    pub fn phi(&self, x: f64) -> f64 {
        match &self.layout {
            Layout::Pieces(pieces) => locate_joint(pieces, x, self.base())
                .map(|jp| jp.phi(x))
                .unwrap_or(0.0),
            Layout::Atoms { .. } => 0.0,
        }
    }

    /// `φ` at an atom of a discrete pair.
    pub fn phi_atom(&self, index: usize) -> f64 {
        match &self.layout {
            Layout::Atoms { p, r } => density_ratio(p[index], r[index]),
            Layout::Pieces(_) => 0.0,
        }
    }
}

fn joint_pieces(support: &[Interval], p: &ProbabilityMeasure, r: &ProbabilityMeasure) -> Vec<JointPiece> {
    let pp = p.pieces().unwrap_or_default();
    let rp = r.pieces().unwrap_or_default();
    let mut knots: Vec<f64> = support
        .iter()
        .flat_map(|iv| [iv.lo, iv.hi])
        .chain(pp.iter().chain(rp).flat_map(|pc| [pc.interval.lo, pc.interval.hi]))
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let poly_at = |pieces: &[crate::measure::Piece], x: f64| {
        pieces
            .iter()
            .find(|pc| pc.interval.lo <= x && x < pc.interval.hi)
            .map(|pc| pc.poly().clone())
            .unwrap_or_else(Polynomial::zero)
    };

    knots
        .windows(2)
        .filter_map(|w| {
            let iv = Interval::new(w[0], w[1]);
            let mid = iv.midpoint();
            support
                .iter()
                .any(|s| s.lo <= mid && mid < s.hi)
                .then(|| JointPiece {
                    interval: iv,
                    p: poly_at(pp, mid),
                    r: poly_at(rp, mid),
                })
        })
        .collect()
}

pub(crate) fn locate_joint<'a>(
    pieces: &'a [JointPiece],
    x: f64,
    base: &ReferenceMeasure,
) -> Option<&'a JointPiece> {
    let idx = pieces.partition_point(|p| p.interval.hi <= x);
    if let Some(p) = pieces.get(idx) {
        if p.interval.lo <= x && x < p.interval.hi {
            return Some(p);
        }
    }
    if idx > 0 {
        let p = &pieces[idx - 1];
        if p.interval.hi == x && base.is_right_end(x) {
            return Some(p);
        }
    }
    None
}

/// Decides `P ≪ R`, returning a witness cell when it fails.
pub fn check_absolute_continuity(p: &ProbabilityMeasure, r: &ProbabilityMeasure) -> Result<AbsoluteContinuity> {
    Ok(MeasurePair::new(p, r)?.absolute_continuity())
}

/// Pointwise evaluator of the Radon–Nikodym derivative of an absolutely
/// continuous pair.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityEvaluator {
    pair: MeasurePair,
}

impl DensityEvaluator {
    pub fn pair(&self) -> &MeasurePair {
        &self.pair
    }

    pub fn at(&self, x: f64) -> f64 {
        self.pair.phi(x)
    }

    pub fn at_atom(&self, label: &str) -> Option<f64> {
        let i = self.pair.base().atom_index(label)?;
        Some(self.pair.phi_atom(i))
    }
}

/// Builds `φ = dP/dR`, failing when `P` is not absolutely continuous with
/// respect to `R`.
pub fn rn_derivative(p: &ProbabilityMeasure, r: &ProbabilityMeasure) -> Result<DensityEvaluator> {
    let pair = MeasurePair::new(p, r)?;
    match pair.absolute_continuity() {
        AbsoluteContinuity::Continuous => Ok(DensityEvaluator { pair }),
        AbsoluteContinuity::Witness(witness) => Err(Error::NotAbsolutelyContinuous { witness }),
    }
}

impl TryFrom<MeasurePair> for DensityEvaluator {
    type Error = Error;

    fn try_from(pair: MeasurePair) -> Result<Self> {
        match pair.absolute_continuity() {
            AbsoluteContinuity::Continuous => Ok(DensityEvaluator { pair }),
            AbsoluteContinuity::Witness(witness) => Err(Error::NotAbsolutelyContinuous { witness }),
        }
    }
}

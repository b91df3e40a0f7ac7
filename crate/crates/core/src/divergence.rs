//! Entropies and relative entropies computed from their integral definitions.
//!
//! All values are in nats. Divergences return `+∞` when `P` is not absolutely
//! continuous with respect to `R`. Integrands use the extended-real
//! conventions at density zeros, so `p ln p` and `p^α r^{1-α}` contribute `0`
//! where `p = 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::measure::{Cell, Density, Interval, ProbabilityMeasure};
use crate::quadrature::{integrate_piece, QuadratureConfig};
use crate::radon_nikodym::{density_ratio, AbsoluteContinuity, DensityEvaluator, JointPiece, Layout, MeasurePair};
use crate::sum::{compensated_sum, CompensatedSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Kl,
    Renyi,
    Tsallis,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Kl => "kl",
            Family::Renyi => "renyi",
            Family::Tsallis => "tsallis",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kl" => Ok(Family::Kl),
            "renyi" => Ok(Family::Renyi),
            "tsallis" => Ok(Family::Tsallis),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// Divergence family together with its order. Orders of the generalized
/// families are positive and different from 1; KL carries no order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderParam {
    family: Family,
    order: Option<f64>,
}

impl OrderParam {
    pub fn kl() -> Self {
        OrderParam {
            family: Family::Kl,
            order: None,
        }
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        Ok(OrderParam {
            family: Family::Renyi,
            order: Some(check_order(alpha)?),
        })
    }

    pub fn tsallis(q: f64) -> Result<Self> {
        Ok(OrderParam {
            family: Family::Tsallis,
            order: Some(check_order(q)?),
        })
    }

    /// Builds from a family and an optional order; the order is ignored for KL.
    pub fn new(family: Family, order: Option<f64>) -> Result<Self> {
        match family {
            Family::Kl => Ok(Self::kl()),
            _ => {
                let order = order.ok_or_else(|| Error::Parse(format!("family {family} needs an order")))?;
                match family {
                    Family::Renyi => Self::renyi(order),
                    _ => Self::tsallis(order),
                }
            }
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> Option<f64> {
        self.order
    }
}

pub(crate) fn check_order(order: f64) -> Result<f64> {
    if order.is_finite() && order > 0.0 && order != 1.0 {
        Ok(order)
    } else {
        Err(Error::InvalidOrder(order))
    }
}

fn as_integer_power(alpha: f64) -> Option<u32> {
    (alpha.fract() == 0.0 && (0.0..=64.0).contains(&alpha)).then_some(alpha as u32)
}

/// `∫ p^α dμ` over the measure's own reference.
pub(crate) fn entropy_power_integral(m: &ProbabilityMeasure, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    match m.density() {
        Density::Atoms(masses) => Ok(compensated_sum(
            masses.iter().map(|&x| if x == 0.0 { 0.0 } else { x.powf(alpha) }),
        )),
        Density::Pieces(pieces) => {
            let mut acc = CompensatedSum::new();
            for pc in pieces {
                let iv = pc.interval;
                let poly = pc.poly();
                let v = if cfg.exact() && poly.is_constant() {
                    let c = poly.eval(iv.lo).max(0.0);
                    if c == 0.0 { 0.0 } else { c.powf(alpha) * iv.len() }
                } else if let (true, Some(k)) = (cfg.exact(), as_integer_power(alpha)) {
                    poly.powi(k).integrate(iv.lo, iv.hi)
                } else {
                    let f = |x: f64| {
                        let v = poly.eval(x).max(0.0);
                        if v == 0.0 { 0.0 } else { v.powf(alpha) }
                    };
                    integrate_piece(f, iv, tol_share(cfg, iv.len(), m), cfg.max_depth)?
                };
                acc.add(v);
            }
            Ok(acc.value())
        }
    }
}

fn tol_share(cfg: &QuadratureConfig, len: f64, m: &ProbabilityMeasure) -> f64 {
    let total: f64 = m.base().intervals().map(|s| s.iter().map(|iv| iv.len()).sum()).unwrap_or(1.0);
    cfg.abs_tol * (len / total)
}

fn pair_tol_share(cfg: &QuadratureConfig, len: f64, pair: &MeasurePair) -> f64 {
    tol_share(cfg, len, pair.p())
}

/// `∫ p^α r^{1-α} dμ = ∫ φ^α dR` for an absolutely continuous pair.
pub(crate) fn pair_power_integral(pair: &MeasurePair, alpha: f64, cfg: &QuadratureConfig) -> Result<f64> {
    pair_power_integral_on(pair, None, alpha, cfg)
}

/// `∫_E φ^α dR`, over the whole space when `within` is `None`.
pub(crate) fn pair_power_integral_on(
    pair: &MeasurePair,
    within: Option<&Cell>,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    match pair.layout() {
        Layout::Atoms { p, r } => {
            let atoms = pair.base().atoms().unwrap_or_default();
            let selected = |i: usize| match within {
                None => Ok(true),
                Some(Cell::Atoms(labels)) => Ok(labels.contains(&atoms[i])),
                Some(_) => Err(Error::CellOutsideSupport),
            };
            let mut acc = CompensatedSum::new();
            for (i, (&pm, &rm)) in p.iter().zip(r).enumerate() {
                if pm != 0.0 && selected(i)? {
                    acc.add(pm * (pm / rm).powf(alpha - 1.0));
                }
            }
            Ok(acc.value())
        }
        Layout::Pieces(pieces) => {
            let cell_ivs = match within {
                None => None,
                Some(Cell::Intervals(ivs)) => {
                    if ivs.iter().any(|iv| !iv.is_empty() && !pair.base().covers(iv)) {
                        return Err(Error::CellOutsideSupport);
                    }
                    Some(ivs)
                }
                Some(_) => return Err(Error::CellOutsideSupport),
            };
            let mut acc = CompensatedSum::new();
            for jp in pieces {
                if jp.p.is_zero() {
                    continue;
                }
                let parts: Vec<Interval> = match cell_ivs {
                    None => vec![jp.interval],
                    Some(ivs) => ivs.iter().filter_map(|iv| jp.interval.intersect(iv)).collect(),
                };
                for iv in parts {
                    acc.add(joint_power_integral(jp, iv, alpha, cfg, pair_tol_share(cfg, iv.len(), pair))?);
                }
            }
            Ok(acc.value())
        }
    }
}

fn joint_power_integral(jp: &JointPiece, iv: Interval, alpha: f64, cfg: &QuadratureConfig, tol: f64) -> Result<f64> {
    if cfg.exact() && jp.p.is_constant() && jp.r.is_constant() {
        let (pc, rc) = (jp.p.eval(iv.lo).max(0.0), jp.r.eval(iv.lo));
        return Ok(if pc == 0.0 { 0.0 } else { pc * (pc / rc).powf(alpha - 1.0) * iv.len() });
    }
    if let (true, true, Some(k)) = (cfg.exact(), jp.r.is_constant(), as_integer_power(alpha)) {
        let rc = jp.r.eval(iv.lo);
        return Ok(jp.p.powi(k).integrate(iv.lo, iv.hi) * rc.powf(1.0 - alpha));
    }
    let f = |x: f64| {
        let pv = jp.p.eval(x).max(0.0);
        if pv == 0.0 {
            return 0.0;
        }
        let rv = jp.r.eval(x);
        if rv <= 0.0 {
            f64::INFINITY
        } else {
            pv * (pv / rv).powf(alpha - 1.0)
        }
    };
    integrate_piece(f, iv, tol, cfg.max_depth)
}

/// Shannon entropy `−∫ p ln p dμ` with respect to the measure's own
/// reference (counting or Lebesgue).
pub fn shannon_entropy(m: &ProbabilityMeasure, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
    let v = match m.density() {
        Density::Atoms(masses) => -compensated_sum(masses.iter().map(|&x| xlogx(x))),
        Density::Pieces(pieces) => {
            let mut acc = CompensatedSum::new();
            for pc in pieces {
                let iv = pc.interval;
                let poly = pc.poly();
                let v = if cfg.exact() && poly.is_constant() {
                    xlogx(poly.eval(iv.lo)) * iv.len()
                } else {
                    integrate_piece(|x| xlogx(poly.eval(x)), iv, tol_share(cfg, iv.len(), m), cfg.max_depth)?
                };
                acc.add(v);
            }
            -acc.value()
        }
    };
    Ok(ExtendedReal::from_f64(v))
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// KL relative entropy `∫ ln(dP/dR) dP`; `+∞` unless `P ≪ R`.
pub fn kl_divergence(p: &ProbabilityMeasure, r: &ProbabilityMeasure, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
    let pair = MeasurePair::new(p, r)?;
    if let AbsoluteContinuity::Witness(_) = pair.absolute_continuity() {
        return Ok(ExtendedReal::PosInf);
    }
    kl_over_p(&pair, cfg).map(ExtendedReal::from_f64)
}

fn kl_over_p(pair: &MeasurePair, cfg: &QuadratureConfig) -> Result<f64> {
    match pair.layout() {
        Layout::Atoms { p, r } => Ok(compensated_sum(
            p.iter().zip(r).map(|(&pm, &rm)| if pm == 0.0 { 0.0 } else { pm * (pm / rm).ln() }),
        )),
        Layout::Pieces(pieces) => {
            let mut acc = CompensatedSum::new();
            for jp in pieces.iter().filter(|jp| !jp.p.is_zero()) {
                let iv = jp.interval;
                let v = if cfg.exact() && jp.p.is_constant() && jp.r.is_constant() {
                    let (pc, rc) = (jp.p.eval(iv.lo), jp.r.eval(iv.lo));
                    if pc <= 0.0 { 0.0 } else { pc * (pc / rc).ln() * iv.len() }
                } else {
                    let f = |x: f64| {
                        let pv = jp.p.eval(x).max(0.0);
                        if pv == 0.0 { 0.0 } else { pv * jp.phi(x).ln() }
                    };
                    integrate_piece(f, iv, pair_tol_share(cfg, iv.len(), pair), cfg.max_depth)?
                };
                acc.add(v);
            }
            Ok(acc.value())
        }
    }
}

/// KL relative entropy in the form `∫ φ ln φ dR`. Agrees with
/// [`kl_divergence`] up to quadrature tolerance; kept as an independent route.
pub fn kl_divergence_over_reference(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    cfg: &QuadratureConfig,
) -> Result<ExtendedReal> {
    let pair = MeasurePair::new(p, r)?;
    if let AbsoluteContinuity::Witness(_) = pair.absolute_continuity() {
        return Ok(ExtendedReal::PosInf);
    }
    let v = match pair.layout() {
        Layout::Atoms { p, r } => compensated_sum(
            p.iter()
                .zip(r)
                .filter(|(_, &rm)| rm > 0.0)
                .map(|(&pm, &rm)| xlogx(pm / rm) * rm),
        ),
        Layout::Pieces(pieces) => {
            let mut acc = CompensatedSum::new();
            for jp in pieces.iter().filter(|jp| !jp.r.is_zero()) {
                let iv = jp.interval;
                let f = |x: f64| {
                    let rv = jp.r.eval(x);
                    if rv <= 0.0 {
                        0.0
                    } else {
                        xlogx(density_ratio(jp.p.eval(x), rv)) * rv
                    }
                };
                acc.add(integrate_piece(f, iv, pair_tol_share(cfg, iv.len(), &pair), cfg.max_depth)?);
            }
            acc.value()
        }
    };
    Ok(ExtendedReal::from_f64(v))
}

/// Rényi entropy `(1/(1−α)) ln ∫ p^α dμ`.
pub fn renyi_entropy(m: &ProbabilityMeasure, alpha: f64, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
    let alpha = check_order(alpha)?;
    let integral = entropy_power_integral(m, alpha, cfg)?;
    Ok(ExtendedReal::ln(integral).scale(1.0 / (1.0 - alpha)))
}

/// Rényi relative entropy `(1/(α−1)) ln ∫ φ^α dR`; `+∞` unless `P ≪ R`.
pub fn renyi_divergence(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<ExtendedReal> {
    let alpha = check_order(alpha)?;
    let pair = MeasurePair::new(p, r)?;
    if let AbsoluteContinuity::Witness(_) = pair.absolute_continuity() {
        return Ok(ExtendedReal::PosInf);
    }
    let integral = pair_power_integral(&pair, alpha, cfg)?;
    Ok(ExtendedReal::ln(integral).scale(1.0 / (alpha - 1.0)))
}

/// Tsallis entropy `(1 − ∫ p^q dμ)/(q − 1)`.
pub fn tsallis_entropy(m: &ProbabilityMeasure, q: f64, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
    let q = check_order(q)?;
    let integral = entropy_power_integral(m, q, cfg)?;
    Ok(ExtendedReal::from_f64((1.0 - integral) / (q - 1.0)))
}

/// Tsallis relative entropy `(∫ φ^q dR − 1)/(q − 1)`; `+∞` unless `P ≪ R`.
pub fn tsallis_divergence(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<ExtendedReal> {
    let q = check_order(q)?;
    let pair = MeasurePair::new(p, r)?;
    if let AbsoluteContinuity::Witness(_) = pair.absolute_continuity() {
        return Ok(ExtendedReal::PosInf);
    }
    let integral = pair_power_integral(&pair, q, cfg)?;
    Ok(ExtendedReal::from_f64((integral - 1.0) / (q - 1.0)))
}

/// Divergence of the requested family.
pub fn divergence(
    p: &ProbabilityMeasure,
    r: &ProbabilityMeasure,
    order: &OrderParam,
    cfg: &QuadratureConfig,
) -> Result<ExtendedReal> {
    match (order.family(), order.order()) {
        (Family::Kl, _) => kl_divergence(p, r, cfg),
        (Family::Renyi, Some(a)) => renyi_divergence(p, r, a, cfg),
        (Family::Tsallis, Some(q)) => tsallis_divergence(p, r, q, cfg),
        (_, None) => unreachable!("generalized orders are validated at construction"),
    }
}

/// Entropy of the requested family with respect to the measure's own reference.
pub fn entropy(m: &ProbabilityMeasure, order: &OrderParam, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
    match (order.family(), order.order()) {
        (Family::Kl, _) => shannon_entropy(m, cfg),
        (Family::Renyi, Some(a)) => renyi_entropy(m, a, cfg),
        (Family::Tsallis, Some(q)) => tsallis_entropy(m, q, cfg),
        (_, None) => unreachable!("generalized orders are validated at construction"),
    }
}

/// q-logarithm `(x^{1−q} − 1)/(1 − q)`, the natural log at `q = 1`.
pub fn q_log(x: f64, q: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    if q == 1.0 {
        Ok(x.ln())
    } else {
        Ok((x.powf(1.0 - q) - 1.0) / (1.0 - q))
    }
}

fn check_transform_order(q: f64) -> Result<f64> {
    check_order(q)
}

/// Maps a Rényi value of order `q` to the Tsallis value of the same order:
/// `(e^{(q−1)v} − 1)/(q − 1)`, with `+∞ ↦ +∞`.
pub fn renyi_to_tsallis(v: ExtendedReal, q: f64) -> Result<ExtendedReal> {
    let q = check_transform_order(q)?;
    let k = q - 1.0;
    Ok(match v {
        ExtendedReal::PosInf if k > 0.0 => ExtendedReal::PosInf,
        ExtendedReal::PosInf => ExtendedReal::from_f64(-1.0 / k),
        ExtendedReal::NegInf if k > 0.0 => ExtendedReal::from_f64(-1.0 / k),
        ExtendedReal::NegInf => ExtendedReal::PosInf,
        ExtendedReal::Finite(x) => ExtendedReal::from_f64((k * x).exp_m1() / k),
    })
}

/// Inverse of [`renyi_to_tsallis`]: `(1/(q−1)) ln(1 + (q−1)v)`.
pub fn tsallis_to_renyi(v: ExtendedReal, q: f64) -> Result<ExtendedReal> {
    let q = check_transform_order(q)?;
    let k = q - 1.0;
    match v {
        ExtendedReal::PosInf if k > 0.0 => Ok(ExtendedReal::PosInf),
        ExtendedReal::Finite(x) => {
            let arg = 1.0 + k * x;
            if arg < 0.0 || (arg == 0.0 && k > 0.0) {
                return Err(Error::DomainError(format!("1 + (q-1)v = {arg} must be positive")));
            }
            if arg == 0.0 {
                return Ok(ExtendedReal::PosInf);
            }
            Ok(ExtendedReal::from_f64((k * x).ln_1p() / k))
        }
        other => Err(Error::DomainError(format!("no Renyi value maps to Tsallis value {other}"))),
    }
}

/// Entropy of `P` taken with respect to a probability measure `μ` (the
/// density being `dP/dμ`). Requires `P ≪ μ`.
///
/// Evaluated from the pointwise ratio `φ = dP/dμ` by quadrature against `μ`,
/// independently of the divergence routines.
pub fn entropy_relative_to(
    p: &ProbabilityMeasure,
    mu: &ProbabilityMeasure,
    order: &OrderParam,
    cfg: &QuadratureConfig,
) -> Result<ExtendedReal> {
    let phi = DensityEvaluator::try_from(MeasurePair::new(p, mu)?)?;
    let pair = phi.pair();
    // ∫ g(φ) dμ by direct evaluation of the ratio
    let integrate = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        match pair.layout() {
            Layout::Atoms { r, .. } => Ok(compensated_sum(
                r.iter().enumerate().filter(|(_, &m)| m > 0.0).map(|(i, &m)| g(pair.phi_atom(i)) * m),
            )),
            Layout::Pieces(pieces) => {
                let mut acc = CompensatedSum::new();
                for jp in pieces.iter().filter(|jp| !jp.r.is_zero()) {
                    let f = |x: f64| {
                        let m = jp.r.eval(x);
                        if m <= 0.0 { 0.0 } else { g(jp.phi(x)) * m }
                    };
                    acc.add(integrate_piece(f, jp.interval, pair_tol_share(cfg, jp.interval.len(), pair), cfg.max_depth)?);
                }
                Ok(acc.value())
            }
        }
    };
    match (order.family(), order.order()) {
        (Family::Kl, _) => Ok(ExtendedReal::from_f64(-integrate(&xlogx)?)),
        (Family::Renyi, Some(a)) => {
            let i = integrate(&|t: f64| if t == 0.0 { 0.0 } else { t.powf(a) })?;
            Ok(ExtendedReal::ln(i).scale(1.0 / (1.0 - a)))
        }
        (Family::Tsallis, Some(q)) => {
            let i = integrate(&|t: f64| if t == 0.0 { 0.0 } else { t.powf(q) })?;
            Ok(ExtendedReal::from_f64((1.0 - i) / (q - 1.0)))
        }
        (_, None) => unreachable!(),
    }
}

/// Residual of the entropy–divergence relation `S(P) = −I(P‖μ)` for a
/// probability reference `μ`, for every family:
/// `|S(P) + I(P‖μ)|`, `|S_α(P) + I_α(P‖μ)|`, `|S_q(P) + I_q(P‖μ)|`.
///
/// The entropy side comes from [`entropy_relative_to`] and the divergence
/// side from [`divergence`].
pub fn entropy_divergence_identity_check(
    p: &ProbabilityMeasure,
    mu: &ProbabilityMeasure,
    order: &OrderParam,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let s = entropy_relative_to(p, mu, order, cfg)?;
    let i = divergence(p, mu, order, cfg)?;
    match (s, i) {
        (ExtendedReal::Finite(s), ExtendedReal::Finite(i)) => Ok((s + i).abs()),
        (s, i) if s == -i => Ok(0.0),
        _ => Ok(f64::INFINITY),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn fin(v: ExtendedReal) -> f64 {
        v.finite().unwrap_or_else(|| panic!("expected a finite value, got {v}"))
    }

    fn uniform4() -> ProbabilityMeasure {
        ProbabilityMeasure::from_masses(&[0.25; 4]).unwrap()
    }

    fn half() -> ProbabilityMeasure {
        ProbabilityMeasure::uniform(0.0, 0.5).unwrap()
    }

    fn unit() -> ProbabilityMeasure {
        ProbabilityMeasure::uniform(0.0, 1.0).unwrap()
    }

    fn beta22() -> ProbabilityMeasure {
        ProbabilityMeasure::beta(2, 2).unwrap()
    }

    fn pq() -> (ProbabilityMeasure, ProbabilityMeasure) {
        (
            ProbabilityMeasure::from_masses(&[0.5, 0.5]).unwrap(),
            ProbabilityMeasure::from_masses(&[0.25, 0.75]).unwrap(),
        )
    }

    #[test]
    fn order_validation() {
        assert!(OrderParam::renyi(1.0).is_err());
        assert!(OrderParam::tsallis(0.0).is_err());
        assert!(OrderParam::renyi(f64::NAN).is_err());
        assert!(OrderParam::renyi(0.5).is_ok());
        assert_eq!(OrderParam::new(Family::Kl, Some(3.0)).unwrap(), OrderParam::kl());
        assert!(OrderParam::new(Family::Renyi, None).is_err());
    }

    #[test]
    fn shannon_examples() {
        assert_abs_diff_eq!(fin(shannon_entropy(&uniform4(), &cfg()).unwrap()), 4f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(fin(shannon_entropy(&half(), &cfg()).unwrap()), -(2f64.ln()), epsilon = 1e-15);
        // 5/3 - ln 6; cross-checked with E[ln x] = psi(2) - psi(4) = 1 - 11/6
        let b = fin(shannon_entropy(&beta22(), &cfg()).unwrap());
        assert_abs_diff_eq!(b, 5.0 / 3.0 - 6f64.ln(), epsilon = 1e-9);
    }

    #[test]
    fn kl_examples() {
        let (p, r) = pq();
        assert_abs_diff_eq!(fin(kl_divergence(&p, &r, &cfg()).unwrap()), 0.5 * (4.0f64 / 3.0).ln(), epsilon = 1e-15);
        assert_eq!(fin(kl_divergence(&beta22(), &beta22(), &cfg()).unwrap()), 0.0);
        let wide = ProbabilityMeasure::uniform(0.0, 2.0).unwrap();
        assert_eq!(kl_divergence(&wide, &unit(), &cfg()).unwrap(), ExtendedReal::PosInf);
    }

    #[test]
    fn kl_forms_agree() {
        let b21 = ProbabilityMeasure::beta(2, 1).unwrap();
        for (p, r) in [(beta22(), unit()), (half(), unit()), (beta22(), b21.clone()), (b21, beta22())] {
            let a = fin(kl_divergence(&p, &r, &cfg()).unwrap());
            let b = fin(kl_divergence_over_reference(&p, &r, &cfg()).unwrap());
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn renyi_entropy_examples() {
        assert_abs_diff_eq!(fin(renyi_entropy(&uniform4(), 2.0, &cfg()).unwrap()), 4f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(fin(renyi_entropy(&half(), 2.0, &cfg()).unwrap()), -(2f64.ln()), epsilon = 1e-15);
        // ∫ 36 x^2 (1-x)^2 = 6/5
        assert_abs_diff_eq!(fin(renyi_entropy(&beta22(), 2.0, &cfg()).unwrap()), -(1.2f64.ln()), epsilon = 1e-14);
    }

    #[test]
    fn renyi_divergence_examples() {
        let (p, r) = pq();
        assert_abs_diff_eq!(fin(renyi_divergence(&p, &r, 2.0, &cfg()).unwrap()), (4.0f64 / 3.0).ln(), epsilon = 1e-15);
        for alpha in [1.5, 2.0, 3.0, 7.5] {
            let v = fin(renyi_divergence(&half(), &unit(), alpha, &cfg()).unwrap());
            assert_abs_diff_eq!(v, 2f64.ln(), epsilon = 1e-14);
        }
        assert_abs_diff_eq!(fin(renyi_divergence(&beta22(), &unit(), 2.0, &cfg()).unwrap()), 1.2f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn simpson_matches_exact_route() {
        let simpson = QuadratureConfig::new(crate::quadrature::QuadratureMethod::AdaptiveSimpson, 1e-11, 40).unwrap();
        let a = fin(renyi_divergence(&beta22(), &unit(), 3.0, &cfg()).unwrap());
        let b = fin(renyi_divergence(&beta22(), &unit(), 3.0, &simpson).unwrap());
        // ½ ln(216/140)
        assert_abs_diff_eq!(a, 0.5 * (216.0f64 / 140.0).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn tsallis_examples() {
        assert_abs_diff_eq!(fin(tsallis_entropy(&uniform4(), 2.0, &cfg()).unwrap()), 0.75, epsilon = 1e-15);
        let point = ProbabilityMeasure::from_masses(&[1.0, 0.0]).unwrap();
        assert_eq!(fin(tsallis_entropy(&point, 2.0, &cfg()).unwrap()), 0.0);
        assert_abs_diff_eq!(fin(tsallis_entropy(&half(), 2.0, &cfg()).unwrap()), -1.0, epsilon = 1e-15);

        let (p, r) = pq();
        assert_abs_diff_eq!(fin(tsallis_divergence(&p, &r, 2.0, &cfg()).unwrap()), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(fin(tsallis_divergence(&p, &p, 2.0, &cfg()).unwrap()), 0.0);
        assert_abs_diff_eq!(fin(tsallis_divergence(&half(), &unit(), 2.0, &cfg()).unwrap()), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn q_log_examples() {
        assert_eq!(q_log(1.0, 3.7).unwrap(), 0.0);
        assert_eq!(q_log(2.5, 1.0).unwrap(), 2.5f64.ln());
        assert_abs_diff_eq!(q_log(2.0, 2.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(q_log(0.0, 2.0), Err(Error::NonPositiveArgument(_))));
    }

    #[test]
    fn tsallis_entropy_is_q_log_average() {
        // Σ p ln_q(1/p) against the closed form
        let masses = [0.1, 0.2, 0.3, 0.4];
        let m = ProbabilityMeasure::from_masses(&masses).unwrap();
        for q in [0.5, 1.5, 2.0, 3.0] {
            let direct: f64 = masses.iter().map(|&p| p * q_log(1.0 / p, q).unwrap()).sum();
            assert_abs_diff_eq!(fin(tsallis_entropy(&m, q, &cfg()).unwrap()), direct, epsilon = 1e-14);
        }
    }

    #[test]
    fn transforms() {
        let t = renyi_to_tsallis((4.0f64 / 3.0).ln().into(), 2.0).unwrap();
        assert_abs_diff_eq!(fin(t), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(renyi_to_tsallis(ExtendedReal::ZERO, 1.5).unwrap(), ExtendedReal::ZERO);
        assert_abs_diff_eq!(fin(tsallis_to_renyi(1.0.into(), 2.0).unwrap()), 2f64.ln(), epsilon = 1e-15);
        assert_eq!(renyi_to_tsallis(ExtendedReal::PosInf, 2.0).unwrap(), ExtendedReal::PosInf);
        assert!(matches!(tsallis_to_renyi((-2.0).into(), 2.0), Err(Error::DomainError(_))));
        assert!(tsallis_to_renyi(1.0.into(), 1.0).is_err());
    }

    #[test]
    fn identity_residuals() {
        let cfg = cfg();
        let half_half = ProbabilityMeasure::from_masses(&[0.5, 0.5]).unwrap();
        let r = entropy_divergence_identity_check(&half_half, &half_half, &OrderParam::kl(), &cfg).unwrap();
        assert_eq!(r, 0.0);

        let p = ProbabilityMeasure::from_masses(&[0.75, 0.25]).unwrap();
        let r = entropy_divergence_identity_check(&p, &half_half, &OrderParam::renyi(2.0).unwrap(), &cfg).unwrap();
        assert!(r <= 1e-12, "{r}");

        let r = entropy_divergence_identity_check(&beta22(), &unit(), &OrderParam::tsallis(2.0).unwrap(), &cfg).unwrap();
        assert!(r <= 1e-8, "{r}");
    }

    #[test]
    fn entropy_relative_to_lebesgue_uniform_matches_plain_entropy() {
        let cfg = cfg();
        for order in [OrderParam::kl(), OrderParam::renyi(2.0).unwrap(), OrderParam::tsallis(3.0).unwrap()] {
            let a = fin(entropy_relative_to(&beta22(), &unit(), &order, &cfg).unwrap());
            let b = fin(entropy(&beta22(), &order, &cfg).unwrap());
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn generalized_divergences_infinite_without_absolute_continuity() {
        let wide = ProbabilityMeasure::uniform(0.0, 2.0).unwrap();
        for a in [0.5, 2.0] {
            assert_eq!(renyi_divergence(&wide, &unit(), a, &cfg()).unwrap(), ExtendedReal::PosInf);
            assert_eq!(tsallis_divergence(&wide, &unit(), a, &cfg()).unwrap(), ExtendedReal::PosInf);
        }
    }

    #[test]
    fn unbounded_ratio_reports_nonconvergence() {
        // φ = 1 / (6x(1-x)) makes ∫ φ^2 dR diverge
        let r = renyi_divergence(&unit(), &beta22(), 2.0, &cfg());
        assert!(matches!(r, Err(Error::QuadratureDidNotConverge(_))), "{r:?}");
    }
}

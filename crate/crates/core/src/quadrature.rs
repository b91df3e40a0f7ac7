//! Adaptive Simpson quadrature and its configuration.

use crate::error::{Error, Result};
use crate::measure::Interval;

/// Sub-intervals each piece is cut into before adaptive refinement starts.
const PRESPLIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureMethod {
    /// Closed forms wherever the integrand is piecewise polynomial, adaptive
    /// Simpson elsewhere.
    ExactPiecewise,
    /// Adaptive Simpson everywhere.
    AdaptiveSimpson,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub method: QuadratureMethod,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            method: QuadratureMethod::ExactPiecewise,
            abs_tol: 1e-10,
            max_depth: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn new(method: QuadratureMethod, abs_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_depth < 1 {
            return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
        }
        Ok(QuadratureConfig {
            method,
            abs_tol,
            max_depth,
        })
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Result<Self> {
        Self::new(self.method, abs_tol, self.max_depth)
    }

    pub(crate) fn exact(&self) -> bool {
        self.method == QuadratureMethod::ExactPiecewise
    }
}

/// Adaptive Simpson rule with Richardson correction on `[a, b]`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, abs_tol, abs_tol, max_depth)
        .map_err(|_| Error::QuadratureDidNotConverge(max_depth))
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    root_tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if !delta.is_finite() {
        return Err(Error::QuadratureDidNotConverge(depth));
    }
    if depth == 0 {
        // Integrable endpoint singularities (logarithmic ones in particular)
        // never meet the halved tolerance, but their remaining contribution
        // is already below the requested accuracy.
        if delta.abs() <= root_tol {
            return Ok(left + right + delta / 15.0);
        }
        return Err(Error::QuadratureDidNotConverge(0));
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, root_tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, root_tol, depth - 1)?)
}

/// Integrates over a density piece. Samples never land exactly on the piece
/// endpoints: those are pulled one ulp inward, so boundary roots of the
/// densities are not evaluated directly.
pub(crate) fn integrate_piece(f: impl Fn(f64) -> f64, iv: Interval, abs_tol: f64, max_depth: u32) -> Result<f64> {
    let inner_lo = iv.lo.next_up();
    let inner_hi = iv.hi.next_down();
    let g = |x: f64| f(x.clamp(inner_lo, inner_hi));
    let w = iv.len() / PRESPLIT as f64;
    let mut total = 0.0;
    for k in 0..PRESPLIT {
        let a = iv.lo + k as f64 * w;
        let b = if k + 1 == PRESPLIT { iv.hi } else { a + w };
        total += adaptive_simpson(g, a, b, abs_tol / PRESPLIT as f64, max_depth)?;
    }
    Ok(total)
}

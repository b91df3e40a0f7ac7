//! Dense real polynomials in the monomial basis (ascending degree).

use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Polynomial {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        Polynomial::new(out)
    }

    /// Exact integral over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + other.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn powi(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::constant(1.0), |acc, _| acc.mul(self))
    }

    /// `x ↦ self(scale·x + shift)`.
    pub fn compose_affine(&self, scale: f64, shift: f64) -> Polynomial {
        let inner = Polynomial::new(vec![shift, scale]);
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, &c| acc.mul(&inner).add(&Polynomial::constant(c)))
    }

    /// Largest coefficient magnitude, used to scale residual tolerances.
    pub fn magnitude(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Real roots in `[a, b]`, sorted ascending.
    ///
    /// Roots are isolated through the critical points of the polynomial (found
    /// recursively from the derivative): between consecutive critical points
    /// the polynomial is monotone, so each sign change brackets exactly one
    /// root, which is then bisected down to adjacent floats. Critical points
    /// whose residual is below `1e-12` relative to the coefficient scale are
    /// reported as (even-multiplicity) roots. The zero polynomial has no
    /// isolated roots and returns an empty list.
    pub fn roots_in(&self, a: f64, b: f64) -> Vec<f64> {
        let mut roots = Vec::new();
        if a > b {
            return roots;
        }
        match self.degree() {
            None | Some(0) => return roots,
            Some(1) => {
                let x = -self.coeffs[0] / self.coeffs[1];
                if x >= a && x <= b {
                    roots.push(x);
                }
                return roots;
            }
            _ => {}
        }
        let scale = self.magnitude() * a.abs().max(b.abs()).max(1.0).powi(self.coeffs.len() as i32 - 1);
        let tol = 1e-12 * scale;

        let mut knots = vec![a];
        knots.extend(self.derivative().roots_in(a, b).into_iter().filter(|&c| c > a && c < b));
        knots.push(b);

        let push = |x: f64, roots: &mut Vec<f64>| {
            if roots.last().is_none_or(|&last: &f64| x - last > 1e-14 * x.abs().max(1.0)) {
                roots.push(x);
            }
        };

        for w in knots.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let (f0, f1) = (self.eval(x0), self.eval(x1));
            if f0.abs() <= tol {
                push(x0, &mut roots);
                continue;
            }
            if f1.abs() <= tol {
                continue;
            }
            if (f0 < 0.0) != (f1 < 0.0) {
                push(bisect(|x| self.eval(x), x0, x1), &mut roots);
            }
        }
        if self.eval(b).abs() <= tol {
            push(b, &mut roots);
        }
        roots
    }
}

/// Bisects a sign change of `f` on `[lo, hi]` down to adjacent floats and
/// returns the left-most point where the sign of `f(hi)` is reached.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_negative = f(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

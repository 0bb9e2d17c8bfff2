//! Jacobi polynomials for the weight `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`.
//!
//! This module holds the three-term recurrence, polynomial evaluation, Gauss and
//! Gauss-Lobatto rules and barycentric Lagrange interpolation on the resulting
//! grids.

mod barycentric;
mod rules;

pub use barycentric::BarycentricBasis;
pub use rules::{gauss_lobatto_rule, gauss_rule, QuadratureRule, RuleKind};

use crate::error::{Error, Result};
use crate::special;

/// Largest polynomial degree / rule size accepted by the rule builders.
pub const MAX_DEGREE: usize = 256;

/// Exponents of the Jacobi weight `(1 - x)^alpha (1 + x)^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(Error::ParameterDomain {
                name: "alpha",
                value: alpha,
                reason: "Jacobi exponents must exceed -1",
            });
        }
        if !(beta.is_finite() && beta > -1.0) {
            return Err(Error::ParameterDomain {
                name: "beta",
                value: beta,
                reason: "Jacobi exponents must exceed -1",
            });
        }
        Ok(Self { alpha, beta })
    }

    /// `alpha = beta = 0`.
    pub const fn legendre() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    /// `alpha = beta = -1/2`.
    pub const fn chebyshev() -> Self {
        Self {
            alpha: -0.5,
            beta: -0.5,
        }
    }

    pub const fn alpha(&self) -> f64 {
        self.alpha
    }

    pub const fn beta(&self) -> f64 {
        self.beta
    }

    /// Parameters of the weight reflected through `x -> -x`.
    pub const fn reflected(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// `max(alpha, beta)`, the exponent governing the Lebesgue constant growth.
    pub fn max_exponent(&self) -> f64 {
        self.alpha.max(self.beta)
    }

    /// `int_{-1}^{1} (1 - x)^alpha (1 + x)^beta dx = 2^(alpha+beta+1) B(alpha+1, beta+1)`.
    pub fn zeroth_moment(&self) -> f64 {
        2f64.powf(self.alpha + self.beta + 1.0) * special::beta(self.alpha + 1.0, self.beta + 1.0)
    }

    pub(crate) fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.alpha - other.alpha).abs() <= tol && (self.beta - other.beta).abs() <= tol
    }
}

/// Recurrence coefficients `(a_k, b_k)`, `k = 0..n-1`, of the monic Jacobi
/// polynomials: `p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x)`.
///
/// `b_0` is the zeroth moment of the weight.
pub fn recurrence_coefficients(params: JacobiParams, n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::Contract(
            "at least one recurrence coefficient must be requested".into(),
        ));
    }
    let (a, b) = (params.alpha, params.beta);
    let ab = a + b;
    let out = (0..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let diag = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            };
            let off = match k {
                0 => params.zeroth_moment(),
                // k = 1 written out: the general form is 0/0 when alpha + beta = -1.
                1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab)),
                _ => 4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0)),
            };
            (diag, off)
        })
        .collect();
    Ok(out)
}

/// Value and first derivative of the degree-`n` Jacobi polynomial
/// `P_n^(alpha,beta)(x)` in the standard normalisation `P_n(1) = C(n + alpha, n)`.
pub fn jacobi_eval(params: JacobiParams, n: usize, x: f64) -> (f64, f64) {
    let (a, b) = (params.alpha, params.beta);
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut dp_prev = 0.0;
    let mut p = 0.5 * ((a + b + 2.0) * x + (a - b));
    let mut dp = 0.5 * (a + b + 2.0);
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c1 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = (s - 2.0) * (s - 1.0) * s;
        let c4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let lin = c2 + c3 * x;
        let p_next = (lin * p - c4 * p_prev) / c1;
        let dp_next = (lin * dp + c3 * p - c4 * dp_prev) / c1;
        p_prev = p;
        dp_prev = dp;
        p = p_next;
        dp = dp_next;
    }
    (p, dp)
}

/// Ordinary moments `int x^k (1 - x)^alpha (1 + x)^beta dx`, `k = 0..count`,
/// from the integration-by-parts recursion
/// `(k + alpha + beta + 2) m_{k+1} = k m_{k-1} + (beta - alpha) m_k`.
pub fn monomial_moments(params: JacobiParams, count: usize) -> Vec<f64> {
    let (a, b) = (params.alpha, params.beta);
    let mut m = vec![0.0; count];
    if count == 0 {
        return m;
    }
    m[0] = params.zeroth_moment();
    if count > 1 {
        m[1] = (b - a) * m[0] / (a + b + 2.0);
    }
    for k in 1..count.saturating_sub(1) {
        m[k + 1] = (k as f64 * m[k - 1] + (b - a) * m[k]) / (k as f64 + a + b + 2.0);
    }
    m
}

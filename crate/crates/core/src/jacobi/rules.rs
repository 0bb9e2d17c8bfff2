use std::f64::consts::PI;

use super::{jacobi_eval, JacobiParams, MAX_DEGREE};
use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;
const BISECTION_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Gauss,
    GaussLobatto,
}

/// Nodes and positive weights of a quadrature rule for `(1 - x)^alpha (1 + x)^beta`.
///
/// Nodes are strictly increasing. Lobatto rules contain both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    params: JacobiParams,
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// `m`-point Jacobi-Gauss rule, exact for polynomials of degree `2m - 1`.
    pub fn gauss(params: JacobiParams, m: usize) -> Result<Self> {
        check_size("m", m, 1)?;
        let (nodes, _, weights) = gauss_weights(params, &gauss_nodes(params, m)?);
        Ok(Self {
            params,
            kind: RuleKind::Gauss,
            nodes,
            weights,
        })
    }

    /// `(n + 1)`-point Jacobi-Gauss-Lobatto rule including `-1` and `1`,
    /// exact for polynomials of degree `2n - 1`.
    pub fn gauss_lobatto(params: JacobiParams, n: usize) -> Result<Self> {
        check_size("n", n, 2)?;
        let (a, b) = (params.alpha(), params.beta());
        let shifted = JacobiParams::new(a + 1.0, b + 1.0)?;
        let (interior, gaps, interior_weights) =
            gauss_weights(shifted, &gauss_nodes(shifted, n - 1)?);

        let mut nodes = Vec::with_capacity(n + 1);
        let mut weights = Vec::with_capacity(n + 1);
        nodes.push(-1.0);
        weights.push(lobatto_endpoint_weight(params, n, Endpoint::Left));
        for ((&x, &gap), &w) in interior.iter().zip(&gaps).zip(&interior_weights) {
            nodes.push(x);
            weights.push(w / gap);
        }
        nodes.push(1.0);
        weights.push(lobatto_endpoint_weight(params, n, Endpoint::Right));
        Ok(Self {
            params,
            kind: RuleKind::GaussLobatto,
            nodes,
            weights,
        })
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `sum_j w_j f(x_j)`, the rule's approximation of `int f(x) w(x) dx`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// See [`QuadratureRule::gauss`].
pub fn gauss_rule(params: JacobiParams, m: usize) -> Result<QuadratureRule> {
    QuadratureRule::gauss(params, m)
}

/// See [`QuadratureRule::gauss_lobatto`].
pub fn gauss_lobatto_rule(params: JacobiParams, n: usize) -> Result<QuadratureRule> {
    QuadratureRule::gauss_lobatto(params, n)
}

fn check_size(name: &'static str, size: usize, min: usize) -> Result<()> {
    if size < min || size > MAX_DEGREE {
        return Err(Error::ParameterDomain {
            name,
            value: size as f64,
            reason:
                "rule size must lie in the supported range (Gauss >= 1, Lobatto >= 2, at most 256)",
        });
    }
    Ok(())
}

/// Roots of `P_m^(alpha,beta)` in increasing order.
///
/// Deflated Newton from Chebyshev-angle seeds; if any root misbehaves the
/// whole set is recomputed by safeguarded bisection on the brackets formed by
/// the (interlacing) roots of degree `m - 1`.
pub(crate) fn gauss_nodes(params: JacobiParams, m: usize) -> Result<Vec<f64>> {
    if m == 1 {
        let (a, b) = (params.alpha(), params.beta());
        return Ok(vec![(b - a) / (a + b + 2.0)]);
    }
    match deflated_newton(params, m) {
        Some(nodes) => Ok(nodes),
        None => bracketed_nodes(params, m),
    }
}

fn deflated_newton(params: JacobiParams, m: usize) -> Option<Vec<f64>> {
    let mut roots: Vec<f64> = Vec::with_capacity(m);
    for k in 0..m {
        let seed = chebyshev_seed(k, m);
        let mut x = match roots.last() {
            Some(&prev) if seed <= prev => 0.5 * (prev + chebyshev_seed(k + 1, m)),
            _ => seed,
        };
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = jacobi_eval(params, m, x);
            let repel: f64 = roots.iter().map(|&r| 1.0 / (x - r)).sum();
            let denom = dp - p * repel;
            if denom == 0.0 || !denom.is_finite() {
                return None;
            }
            let step = p / denom;
            x -= step;
            if !(x > -1.0 && x < 1.0) {
                return None;
            }
            if step.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        roots.push(x);
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    for w in roots.windows(2) {
        if w[1] - w[0] <= 1e-13 {
            return None;
        }
    }
    // Drop the accumulated deflation bias with a couple of undeflated steps.
    for x in roots.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = jacobi_eval(params, m, *x);
            let step = p / dp;
            if !step.is_finite() || step.abs() > 1e-10 {
                return None;
            }
            *x -= step;
        }
    }
    if roots.windows(2).any(|w| w[1] <= w[0]) || roots.iter().any(|x| !(*x > -1.0 && *x < 1.0)) {
        return None;
    }
    Some(roots)
}

fn chebyshev_seed(k: usize, m: usize) -> f64 {
    if k >= m {
        return 1.0;
    }
    -((2 * k + 1) as f64 * PI / (2 * m) as f64).cos()
}

/// Roots of `P_m` located inside the interlacing brackets given by the roots
/// of `P_{m-1}` (with `-1` and `1` closing the outer brackets).
pub(crate) fn bracketed_nodes(params: JacobiParams, m: usize) -> Result<Vec<f64>> {
    if m == 1 {
        return gauss_nodes(params, 1);
    }
    let inner = bracketed_nodes(params, m - 1)?;
    let mut edges = Vec::with_capacity(m + 1);
    edges.push(-1.0);
    edges.extend_from_slice(&inner);
    edges.push(1.0);
    edges
        .windows(2)
        .map(|w| safeguarded_root(params, m, w[0], w[1]))
        .collect()
}

fn safeguarded_root(params: JacobiParams, m: usize, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (p_lo, _) = jacobi_eval(params, m, lo);
    let (p_hi, _) = jacobi_eval(params, m, hi);
    if p_lo == 0.0 {
        return Ok(lo);
    }
    if p_hi == 0.0 {
        return Ok(hi);
    }
    if p_lo.signum() == p_hi.signum() {
        return Err(Error::Convergence(format!(
            "no sign change of P_{m} on interlacing bracket [{lo}, {hi}]"
        )));
    }
    let lo_negative = p_lo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..BISECTION_MAX_ITER {
        let (p, dp) = jacobi_eval(params, m, x);
        if p == 0.0 {
            return Ok(x);
        }
        if (p < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - p / dp;
        let next = if dp != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let moved = (next - x).abs();
        x = next;
        if moved <= NEWTON_TOL || hi - lo <= NEWTON_TOL {
            return Ok(x);
        }
    }
    Err(Error::Convergence(format!(
        "root of P_{m} in [{lo}, {hi}] not isolated after {BISECTION_MAX_ITER} iterations"
    )))
}

/// `w_j = G_m / ((1 - x_j^2) P_m'(x_j)^2)` with
/// `G_m = 2^(a+b+1) Gamma(m+a+1) Gamma(m+b+1) / (m! Gamma(m+a+b+1))`.
///
/// Each node is re-polished in its distance `d` to the nearer endpoint and the
/// weight is evaluated from `d`, so that `1 - x^2` keeps full relative
/// precision for nodes crowding an endpoint. Returns the polished nodes,
/// `1 - x_j^2`, and the weights.
fn gauss_weights(params: JacobiParams, nodes: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = nodes.len();
    let constant = gauss_weight_constant(params, m);
    let mut xs = Vec::with_capacity(m);
    let mut gaps = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    for &x in nodes {
        let (x, gap, dp) = polish_from_endpoint(params, m, x);
        xs.push(x);
        gaps.push(gap);
        ws.push(constant / (gap * dp * dp));
    }
    (xs, gaps, ws)
}

/// Newton polish of a root of `P_m` in the variable `d = 1 + x` (left half)
/// or `d = 1 - x` (right half). Returns `(x, 1 - x^2, |P_m'(x)|)`.
fn polish_from_endpoint(params: JacobiParams, m: usize, x: f64) -> (f64, f64, f64) {
    // P^(a,b)(1 - d) = (-1)^m P^(b,a)(-1 + d): the right half reuses the left-half
    // evaluation with reflected parameters.
    let (local, mut d, sign) = if x <= 0.0 {
        (params, 1.0 + x, -1.0)
    } else {
        (params.reflected(), 1.0 - x, 1.0)
    };
    let mut dp = 0.0;
    for _ in 0..3 {
        let (p, dpd) = jacobi_eval_from_left(local, m, d);
        dp = dpd;
        let step = p / dpd;
        if !step.is_finite() || (d - step) <= 0.0 || (d - step) >= 2.0 {
            break;
        }
        d -= step;
        if step.abs() <= 1e-17 * d.max(1e-300) {
            break;
        }
    }
    let (_, dpd) = jacobi_eval_from_left(local, m, d);
    if dpd.is_finite() {
        dp = dpd;
    }
    (sign * (1.0 - d), d * (2.0 - d), dp.abs())
}

/// `P_n^(a,b)(-1 + u)` and its derivative, with the recurrence written in `u`.
fn jacobi_eval_from_left(params: JacobiParams, n: usize, u: f64) -> (f64, f64) {
    let (a, b) = (params.alpha(), params.beta());
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut dp_prev = 0.0;
    let mut p = 0.5 * (a + b + 2.0) * u - (b + 1.0);
    let mut dp = 0.5 * (a + b + 2.0);
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c1 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = (s - 2.0) * (s - 1.0) * s;
        let c4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let lin = (c2 - c3) + c3 * u;
        let p_next = (lin * p - c4 * p_prev) / c1;
        let dp_next = (lin * dp + c3 * p - c4 * dp_prev) / c1;
        p_prev = p;
        dp_prev = dp;
        p = p_next;
        dp = dp_next;
    }
    (p, dp)
}

// G_m written as mu_0 (1+a)(1+b) prod_{k=2}^m (k+a)(k+b) / (k (k+a+b)); avoids
// Gamma(a+b+1), which has a pole for the Chebyshev weight.
fn gauss_weight_constant(params: JacobiParams, m: usize) -> f64 {
    let (a, b) = (params.alpha(), params.beta());
    let mut g = params.zeroth_moment() * (1.0 + a) * (1.0 + b);
    for k in 2..=m {
        let kf = k as f64;
        g *= (kf + a) * (kf + b) / (kf * (kf + a + b));
    }
    g
}

#[derive(Clone, Copy)]
enum Endpoint {
    Left,
    Right,
}

// Weight at x = -1:
//   2^(a+b+1) (b+1) Gamma(b+1)^2 Gamma(n) Gamma(n+a+1) / (Gamma(n+b+1) Gamma(n+a+b+2))
// = mu_0 (b+1) / n * prod_{k=1}^n (k+a) / (k+b) * k / (k+a+b+1).
// The weight at x = 1 swaps a and b.
fn lobatto_endpoint_weight(params: JacobiParams, n: usize, end: Endpoint) -> f64 {
    let (a, b) = match end {
        Endpoint::Left => (params.alpha(), params.beta()),
        Endpoint::Right => (params.beta(), params.alpha()),
    };
    let mut w = params.zeroth_moment() * (b + 1.0) / n as f64;
    for k in 1..=n {
        let kf = k as f64;
        w *= (kf + a) / (kf + b) * kf / (kf + a + b + 1.0);
    }
    w
}

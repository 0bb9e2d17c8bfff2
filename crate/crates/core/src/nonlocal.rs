//! Kernel, horizon geometry and the two-sided singular quadrature.
//!
//! The nonlocal integral over `(x - delta, x + delta)` is split at the singular
//! point `y = x`. Each half is mapped onto `[-1, 1]` by
//!
//! ```text
//! left:  s(x, t) = (2x - delta)/2 + (delta/2) t,   |y - x|^(-mu) -> (delta/2)^(-mu) (1 - t)^(-mu)
//! right: s(x, t) = (2x + delta)/2 + (delta/2) t,   |y - x|^(-mu) -> (delta/2)^(-mu) (1 + t)^(-mu)
//! ```
//!
//! so the singularity becomes a Jacobi endpoint weight and both halves carry
//! the common factor `(delta/2)^(1 - mu)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jacobi::{gauss_rule, JacobiParams, QuadratureRule, RuleKind};

/// Gauss points per half used for `C_delta` and the second moment of
/// non-constant kernels.
pub const DEFAULT_KERNEL_POINTS: usize = 64;

/// Images closer than this to `-1` or `1` are assigned to the constraint band.
const BOUNDARY_TIE: f64 = 1e-14;

pub type KernelFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Nonnegative symmetric kernel `gamma_delta(x, y)`, only ever evaluated for
/// `|y - x| <= delta`.
#[derive(Clone)]
pub enum Kernel {
    /// `gamma = coefficient` on the horizon.
    Constant(f64),
    /// `gamma = exp(-|y - x|^2 / delta^2)`.
    Gaussian,
    /// User kernel `(x, y, delta) -> gamma`. Must be pure.
    Custom(KernelFn),
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Self::Gaussian => f.write_str("Gaussian"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Kernel {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }

    /// Constant kernel whose second moment gives the local diffusion
    /// coefficient `diffusion`: `coefficient = diffusion (3 - mu) / delta^(3 - mu)`.
    ///
    /// For `mu = 1/2` and unit diffusion this is `(5/2) delta^(-5/2)`.
    pub fn moment_normalized_constant(geom: &HorizonGeometry, diffusion: f64) -> Self {
        let p = 3.0 - geom.mu();
        Self::Constant(diffusion * p / geom.delta().powf(p))
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64, delta: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Gaussian => {
                let r = (y - x) / delta;
                (-r * r).exp()
            }
            Self::Custom(f) => f(x, y, delta),
        }
    }
}

/// Horizon radius `delta` and singularity exponent `mu` on the domain `(-1, 1)`.
///
/// The constraint band is `(-1 - delta, -1] U [1, 1 + delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonGeometry {
    delta: f64,
    mu: f64,
}

impl HorizonGeometry {
    pub fn new(delta: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::ParameterDomain {
                name: "mu",
                value: mu,
                reason: "singularity exponent must lie in (0, 1)",
            });
        }
        if !(delta > 0.0 && delta < 2.0) {
            return Err(Error::ParameterDomain {
                name: "delta",
                value: delta,
                reason: "horizon must lie in (0, 2)",
            });
        }
        Ok(Self { delta, mu })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `(delta/2)^(1 - mu)`.
    pub fn half_scale(&self) -> f64 {
        (0.5 * self.delta).powf(1.0 - self.mu)
    }

    pub fn in_domain(&self, x: f64) -> bool {
        x > -1.0 && x < 1.0
    }

    pub fn in_constraint_band(&self, x: f64) -> bool {
        (x > -1.0 - self.delta && x <= -1.0) || (x >= 1.0 && x < 1.0 + self.delta)
    }
}

/// Which half of the horizon a quadrature covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `(x - delta, x)`, weight `(1 - t)^(-mu)`.
    Left,
    /// `(x, x + delta)`, weight `(1 + t)^(-mu)`.
    Right,
}

impl Side {
    pub fn weight_params(self, mu: f64) -> Result<JacobiParams> {
        match self {
            Self::Left => JacobiParams::new(-mu, 0.0),
            Self::Right => JacobiParams::new(0.0, -mu),
        }
    }

    #[inline]
    pub fn image(self, x: f64, delta: f64, t: f64) -> f64 {
        match self {
            Self::Left => (2.0 * x - delta) / 2.0 + 0.5 * delta * t,
            Self::Right => (2.0 * x + delta) / 2.0 + 0.5 * delta * t,
        }
    }
}

/// Split of a rule's indices by where their images land.
#[derive(Debug, Clone, PartialEq)]
pub struct PointClassification {
    pub in_indices: Vec<usize>,
    pub out_indices: Vec<usize>,
    pub images: Vec<f64>,
}

#[inline]
fn image_is_interior(s: f64) -> bool {
    s > -1.0 + BOUNDARY_TIE && s < 1.0 - BOUNDARY_TIE
}

fn check_side_rule(geom: &HorizonGeometry, side: Side, rule: &QuadratureRule) -> Result<()> {
    let expected = side.weight_params(geom.mu())?;
    if rule.kind() != RuleKind::Gauss || !rule.params().approx_eq(&expected, 1e-15) {
        return Err(Error::Contract(format!(
            "{side:?} side needs a Gauss rule for ({}, {}), got {:?} rule for ({}, {})",
            expected.alpha(),
            expected.beta(),
            rule.kind(),
            rule.params().alpha(),
            rule.params().beta()
        )));
    }
    Ok(())
}

/// Maps the rule's nodes through `s_left` / `s_right` at `x` and classifies
/// each image as interior (`(-1, 1)`) or constraint band.
pub fn map_points(
    x: f64,
    geom: &HorizonGeometry,
    side: Side,
    rule: &QuadratureRule,
) -> Result<PointClassification> {
    check_side_rule(geom, side, rule)?;
    let images: Vec<f64> = rule
        .nodes()
        .iter()
        .map(|&t| side.image(x, geom.delta(), t))
        .collect();
    let (in_indices, out_indices) = (0..images.len()).partition(|&j| image_is_interior(images[j]));
    Ok(PointClassification {
        in_indices,
        out_indices,
        images,
    })
}

/// The pair of `m`-point Gauss-Jacobi rules for the left and right halves.
#[derive(Debug, Clone)]
pub struct TwoSidedRule {
    geom: HorizonGeometry,
    left: QuadratureRule,
    right: QuadratureRule,
}

impl TwoSidedRule {
    pub fn new(geom: HorizonGeometry, m: usize) -> Result<Self> {
        Ok(Self {
            geom,
            left: gauss_rule(Side::Left.weight_params(geom.mu())?, m)?,
            right: gauss_rule(Side::Right.weight_params(geom.mu())?, m)?,
        })
    }

    pub fn geometry(&self) -> &HorizonGeometry {
        &self.geom
    }

    pub fn rule(&self, side: Side) -> &QuadratureRule {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn classify(&self, x: f64, side: Side) -> Result<PointClassification> {
        map_points(x, &self.geom, side, self.rule(side))
    }

    /// Quadrature of `int_{x-delta}^{x+delta} |y - x|^(-mu) f(y) dy`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, x: f64, f: F) -> f64 {
        let delta = self.geom.delta();
        let sum = |side: Side| {
            self.rule(side)
                .iter()
                .map(|(t, w)| w * f(side.image(x, delta, t)))
                .sum::<f64>()
        };
        self.geom.half_scale() * (sum(Side::Left) + sum(Side::Right))
    }
}

/// `C_delta = int_{-delta}^{delta} gamma(0, y) |y|^(-mu) dy`.
///
/// Closed form for constant kernels; otherwise two Gauss-Jacobi rules with
/// `points` nodes each.
pub fn c_delta(kernel: &Kernel, geom: &HorizonGeometry, points: usize) -> Result<f64> {
    let (delta, mu) = (geom.delta(), geom.mu());
    match kernel {
        Kernel::Constant(c) => Ok(c * 2.0 * delta.powf(1.0 - mu) / (1.0 - mu)),
        _ => {
            let rule = TwoSidedRule::new(*geom, points)?;
            Ok(rule.integrate(0.0, |y| kernel.eval(0.0, y, delta)))
        }
    }
}

/// Local diffusion coefficient `C = (1/2) int gamma(x, y) |y - x|^(-mu) (y - x)^2 dy`,
/// evaluated at `x = 0` with the two-sided rule.
pub fn moment_check(kernel: &Kernel, geom: &HorizonGeometry) -> Result<f64> {
    let rule = TwoSidedRule::new(*geom, DEFAULT_KERNEL_POINTS)?;
    let delta = geom.delta();
    Ok(0.5 * rule.integrate(0.0, |y| kernel.eval(0.0, y, delta) * y * y))
}

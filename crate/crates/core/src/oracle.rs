//! Reference evaluations used to validate the solver.
//!
//! Nothing here goes through the fixed-order rules of [`crate::jacobi`] or the
//! two-sided rule of [`crate::nonlocal`]. Gauss-Jacobi rules are rebuilt by
//! Golub-Welsch (eigen-decomposition of the Jacobi matrix), both halves of the
//! horizon are mapped with the singular endpoint on the same side, and
//! convergence is driven by order doubling or panel bisection.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::nonlocal::{HorizonGeometry, Kernel};
use crate::special::beta;

pub use crate::special::{erf, erfc, erfi, gamma_complete, gamma_lower, gamma_upper};

/// Smallest accepted tolerance for the adaptive routines.
pub const MIN_TOLERANCE: f64 = 1e-13;

const FIRST_ORDER: usize = 8;
const MAX_ORDER: usize = 512;
const MAX_PANEL_DEPTH: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !tol.is_finite() || tol < MIN_TOLERANCE {
        return Err(Error::ParameterDomain {
            name: "tol",
            value: tol,
            reason: "tolerance must be finite and at least 1e-13",
        });
    }
    Ok(())
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;
type RuleCache = Mutex<HashMap<(u64, u64, usize), Rule>>;

/// `n`-point Gauss rule for `(1 - t)^alpha (1 + t)^beta` on `[-1, 1]` by
/// Golub-Welsch. Rules are cached per `(alpha, beta, n)`.
pub fn golub_welsch(alpha: f64, beta_exp: f64, n: usize) -> Result<Rule> {
    if !(alpha > -1.0 && beta_exp > -1.0) || n == 0 {
        return Err(Error::ParameterDomain {
            name: "alpha/beta",
            value: alpha.min(beta_exp),
            reason: "Jacobi exponents must exceed -1 and the rule must be non-empty",
        });
    }
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alpha.to_bits(), beta_exp.to_bits(), n);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_golub_welsch(alpha, beta_exp, n));
    cache
        .lock()
        .expect("rule cache poisoned")
        .insert(key, Arc::clone(&rule));
    Ok(rule)
}

fn build_golub_welsch(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let off2 = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * j + ab;
                4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = off2.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * beta(a + 1.0, b + 1.0);
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// `L_delta u(x) = int gamma(x, y) |y - x|^(-mu) (u(y) - u(x)) dy` over the
/// horizon, by order doubling from 8 up to 512 points per half.
///
/// Each half is written as `y = x -/+ (delta/2)(1 + t)`, which puts the
/// singularity at `t = -1` for both, under the weight `(1 + t)^(-mu)`.
pub fn reference_nonlocal_apply<U: Fn(f64) -> f64>(
    u: U,
    x: f64,
    kernel: &Kernel,
    geom: &HorizonGeometry,
    tol: f64,
) -> Result<AdaptiveResult> {
    check_tolerance(tol)?;
    let delta = geom.delta();
    let h = 0.5 * delta;
    let scale = h.powf(1.0 - geom.mu());
    let ux = u(x);
    let approx = |n: usize| -> Result<f64> {
        let rule = golub_welsch(0.0, -geom.mu(), n)?;
        let mut sum = 0.0;
        for (&t, &w) in rule.0.iter().zip(&rule.1) {
            let r = h * (1.0 + t);
            let (yl, yr) = (x - r, x + r);
            sum += w
                * (kernel.eval(x, yl, delta) * (u(yl) - ux)
                    + kernel.eval(x, yr, delta) * (u(yr) - ux));
        }
        Ok(scale * sum)
    };
    let mut order = FIRST_ORDER;
    let mut prev = approx(order)?;
    let mut last_change = f64::INFINITY;
    while order < MAX_ORDER {
        order *= 2;
        let next = approx(order)?;
        last_change = (next - prev).abs();
        if last_change < tol {
            return Ok(AdaptiveResult {
                value: next,
                error_estimate: last_change,
                panels_used: order,
            });
        }
        prev = next;
    }
    Err(Error::OracleFailure { tol, last_change })
}

/// `f = -L_delta u` evaluated through [`reference_nonlocal_apply`].
#[derive(Clone)]
pub struct ManufacturedRhs {
    u: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    kernel: Kernel,
    geom: HorizonGeometry,
    tol: f64,
}

impl std::fmt::Debug for ManufacturedRhs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedRhs")
            .field("kernel", &self.kernel)
            .field("geom", &self.geom)
            .field("tol", &self.tol)
            .finish_non_exhaustive()
    }
}

impl ManufacturedRhs {
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(-reference_nonlocal_apply(&*self.u, x, &self.kernel, &self.geom, self.tol)?.value)
    }

    /// Infallible view for problem setup: oracle failures become NaN, which
    /// assembly reports as a non-finite source entry.
    pub fn into_fn(self) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        move |x| self.eval(x).unwrap_or(f64::NAN)
    }
}

pub fn manufactured_rhs<U>(
    u: U,
    kernel: Kernel,
    geom: HorizonGeometry,
    tol: f64,
) -> Result<ManufacturedRhs>
where
    U: Fn(f64) -> f64 + Send + Sync + 'static,
{
    check_tolerance(tol)?;
    Ok(ManufacturedRhs {
        u: Arc::new(u),
        kernel,
        geom,
        tol,
    })
}

/// Closed-form source for `u(x) = x e^x` with the constant kernel
/// `(5/2) delta^(-5/2)` and `mu = 1/2`.
pub fn constant_kernel_exp_rhs(x: f64, geom: &HorizonGeometry) -> Result<f64> {
    if geom.mu() != 0.5 {
        return Err(Error::ParameterDomain {
            name: "mu",
            value: geom.mu(),
            reason: "the closed-form source is only valid for mu = 1/2",
        });
    }
    let d = geom.delta();
    let sd = d.sqrt();
    let bracket = 2.0 * d * (-d).exp() * (1.0 + (2.0 * d).exp()) - 8.0 * d * x
        + sd * std::f64::consts::PI.sqrt() * (2.0 * x - 1.0) * (erf(sd) + erfi(sd));
    Ok(-1.25 * d.powi(-3) * x.exp() * bracket)
}

/// Source for `u(x) = x (1 - x)` with the Gaussian kernel:
/// `delta^(3 - mu) gamma((3 - mu)/2, 1)`, independent of `x`. At `mu = 1/2`
/// this is `delta^(5/2) (Gamma(5/4) - Gamma(5/4, 1))`.
pub fn gaussian_quadratic_rhs(geom: &HorizonGeometry) -> Result<f64> {
    let p = 3.0 - geom.mu();
    Ok(geom.delta().powf(p) * gamma_lower(0.5 * p, 1.0)?)
}

/// Nodes of the 15-point Kronrod extension of the 7-point Gauss rule
/// (non-negative half; odd entries are the Gauss nodes).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// `(Kronrod, Gauss)` estimates on `[a, b]`.
fn g7k15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let pair = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    (h * k, h * g)
}

/// `int_a^b f` by recursive bisection of Gauss-Kronrod panels.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<AdaptiveResult> {
    check_tolerance(tol)?;
    let mut out = AdaptiveResult {
        value: 0.0,
        error_estimate: 0.0,
        panels_used: 0,
    };
    bisect(&f, a, b, tol, 0, &mut out)?;
    Ok(out)
}

fn bisect<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
    out: &mut AdaptiveResult,
) -> Result<()> {
    let (k, g) = g7k15(f, a, b);
    let err = (k - g).abs();
    if err <= tol || err <= 50.0 * f64::EPSILON * k.abs() {
        out.value += k;
        out.error_estimate += err;
        out.panels_used += 1;
        return Ok(());
    }
    if depth >= MAX_PANEL_DEPTH {
        return Err(Error::OracleFailure {
            tol,
            last_change: err,
        });
    }
    let m = 0.5 * (a + b);
    bisect(f, a, m, 0.5 * tol, depth + 1, out)?;
    bisect(f, m, b, 0.5 * tol, depth + 1, out)
}

/// `int_a^b (y - a)^nu phi(y) dy` for `nu > -1`, with `y - a = s^(1/(1 + nu))`
/// absorbing the endpoint power into the measure.
pub fn integrate_endpoint_power<F: Fn(f64) -> f64>(
    phi: F,
    a: f64,
    b: f64,
    nu: f64,
    tol: f64,
) -> Result<AdaptiveResult> {
    if nu.is_nan() || nu <= -1.0 || a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        return Err(Error::ParameterDomain {
            name: "nu",
            value: nu,
            reason: "need nu > -1 and b > a",
        });
    }
    let p = 1.0 + nu;
    let top = (b - a).powf(p);
    integrate_adaptive(|s: f64| phi(a + s.powf(1.0 / p)) / p, 0.0, top, tol)
}

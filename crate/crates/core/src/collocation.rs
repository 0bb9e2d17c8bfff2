//! Jacobi-Gauss-Lobatto collocation of the volume-constrained problem
//!
//! ```text
//! C_delta u(x) - int_{x-delta}^{x+delta} gamma(x, y) |y - x|^(-mu) u(y) dy = f(x),  x in (-1, 1)
//! u(x) = g(x),                                                               x in I_c
//! ```
//!
//! The unknowns are the values of `u_N` at the `N + 1` Lobatto points of the
//! collocation weight. At each collocation point the horizon integral is
//! replaced by the two-sided Gauss-Jacobi rule; quadrature images inside the
//! domain are expanded in the Lagrange basis and land in the matrix, images in
//! the constraint band are evaluated through `g` and land in the source.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jacobi::{
    gauss_lobatto_rule, gauss_rule, BarycentricBasis, JacobiParams, QuadratureRule, MAX_DEGREE,
};
use crate::linalg::{condition_number_one, DenseMatrix, LuFactors};
use crate::nonlocal::{HorizonGeometry, Kernel, Side, TwoSidedRule};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Full problem statement: operator data, source `f`, constraint data `g`,
/// collocation family and discretisation sizes.
#[derive(Clone)]
pub struct Problem {
    geom: HorizonGeometry,
    kernel: Kernel,
    rhs: ScalarFn,
    constraint: ScalarFn,
    basis: JacobiParams,
    degree: usize,
    quad_points: usize,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("geom", &self.geom)
            .field("kernel", &self.kernel)
            .field("basis", &self.basis)
            .field("degree", &self.degree)
            .field("quad_points", &self.quad_points)
            .finish_non_exhaustive()
    }
}

impl Problem {
    /// Problem with `M = N` quadrature points per half horizon.
    pub fn new<F, G>(
        geom: HorizonGeometry,
        kernel: Kernel,
        rhs: F,
        constraint: G,
        basis: JacobiParams,
        degree: usize,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(Error::ParameterDomain {
                name: "N",
                value: degree as f64,
                reason: "polynomial degree must lie in [2, 256]",
            });
        }
        Ok(Self {
            geom,
            kernel,
            rhs: Arc::new(rhs),
            constraint: Arc::new(constraint),
            basis,
            degree,
            quad_points: degree,
        })
    }

    /// Overrides the number `M` of Gauss-Jacobi points per half horizon.
    pub fn with_quadrature_points(mut self, m: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::ParameterDomain {
                name: "M",
                value: m as f64,
                reason: "quadrature size must lie in [1, 256]",
            });
        }
        self.quad_points = m;
        Ok(self)
    }

    pub fn geometry(&self) -> &HorizonGeometry {
        &self.geom
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn basis(&self) -> JacobiParams {
        self.basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }

    pub fn rhs(&self, x: f64) -> f64 {
        (self.rhs)(x)
    }

    pub fn constraint(&self, x: f64) -> f64 {
        (self.constraint)(x)
    }
}

/// `A u = F` on the collocation grid.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    pub matrix: DenseMatrix,
    pub source: Vec<f64>,
    pub grid: QuadratureRule,
    pub basis: BarycentricBasis,
    /// The `C_delta` placed on the diagonal.
    pub c_delta: f64,
    problem: Problem,
}

impl DiscreteSystem {
    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    /// `A v - F` for nodal values `v`.
    pub fn residual(&self, nodal: &[f64]) -> Result<Vec<f64>> {
        if nodal.len() != self.source.len() {
            return Err(Error::Shape {
                expected: self.source.len(),
                found: nodal.len(),
            });
        }
        Ok(self
            .matrix
            .mul_vec(nodal)
            .iter()
            .zip(&self.source)
            .map(|(a, f)| a - f)
            .collect())
    }
}

/// `C_delta` as seen by the `M`-point two-sided rule: the rule applied to the
/// kernel alone. Exact for constant kernels, and it makes the discrete operator
/// annihilate constants for every kernel.
fn discrete_c_delta(problem: &Problem, rules: &TwoSidedRule, x: f64) -> f64 {
    let delta = problem.geom.delta();
    rules.integrate(x, |y| problem.kernel.eval(x, y, delta))
}

struct AssembledRow {
    entries: Vec<f64>,
    source: f64,
    c_delta: f64,
}

fn assemble_row(
    problem: &Problem,
    rules: &TwoSidedRule,
    basis: &BarycentricBasis,
    i: usize,
    x: f64,
) -> Result<AssembledRow> {
    let n1 = basis.len();
    let delta = problem.geom.delta();
    let scale = problem.geom.half_scale();
    let mut entries = vec![0.0; n1];
    let mut source = problem.rhs(x);
    let mut h = vec![0.0; n1];
    for side in [Side::Left, Side::Right] {
        let weights = rules.rule(side).weights();
        let split = rules.classify(x, side)?;
        for &j in &split.in_indices {
            let s = split.images[j];
            let coef = scale * weights[j] * problem.kernel.eval(x, s, delta);
            basis.basis_row_into(s, &mut h);
            for (a, hk) in entries.iter_mut().zip(&h) {
                *a -= coef * hk;
            }
        }
        for &j in &split.out_indices {
            let s = split.images[j];
            source += scale * weights[j] * problem.kernel.eval(x, s, delta) * problem.constraint(s);
        }
    }
    let c_delta = discrete_c_delta(problem, rules, x);
    entries[i] += c_delta;
    if let Some(k) = entries.iter().position(|v| !v.is_finite()) {
        return Err(Error::Assembly { row: i, col: k });
    }
    if !source.is_finite() {
        return Err(Error::Assembly { row: i, col: n1 });
    }
    Ok(AssembledRow {
        entries,
        source,
        c_delta,
    })
}

/// Builds `A` and `F`. Rows are independent and assembled in parallel.
pub fn assemble(problem: &Problem) -> Result<DiscreteSystem> {
    let grid = gauss_lobatto_rule(problem.basis, problem.degree)?;
    let basis = BarycentricBasis::new(grid.nodes())?;
    let rules = TwoSidedRule::new(problem.geom, problem.quad_points)?;
    let rows: Vec<AssembledRow> = grid
        .nodes()
        .par_iter()
        .enumerate()
        .map(|(i, &x)| assemble_row(problem, &rules, &basis, i, x))
        .collect::<Result<_>>()?;

    let n1 = grid.len();
    let mut matrix = DenseMatrix::zeros(n1);
    let mut source = Vec::with_capacity(n1);
    for (i, row) in rows.iter().enumerate() {
        matrix.row_mut(i).copy_from_slice(&row.entries);
        source.push(row.source);
    }
    Ok(DiscreteSystem {
        matrix,
        source,
        grid,
        basis,
        c_delta: rows[0].c_delta,
        problem: problem.clone(),
    })
}

/// Polynomial solution `u_N = sum_k u_k h_k`.
#[derive(Debug, Clone)]
pub struct SpectralSolution {
    nodal_values: Vec<f64>,
    basis: BarycentricBasis,
    problem: Problem,
    condition_estimate: f64,
}

/// Solves `A u = F` by LU with partial pivoting.
pub fn solve(system: &DiscreteSystem) -> Result<SpectralSolution> {
    let lu = LuFactors::factor(&system.matrix)?;
    let nodal_values = lu.solve(&system.source)?;
    Ok(SpectralSolution {
        nodal_values,
        basis: system.basis.clone(),
        problem: system.problem.clone(),
        condition_estimate: condition_number_one(&system.matrix, &lu),
    })
}

impl SpectralSolution {
    pub fn nodal_values(&self) -> &[f64] {
        &self.nodal_values
    }

    pub fn nodes(&self) -> &[f64] {
        self.basis.nodes()
    }

    pub fn basis(&self) -> &BarycentricBasis {
        &self.basis
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    /// 1-norm condition number of the collocation matrix.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// `u_N(x)` for `x` in `[-1, 1]`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::OutsideDomain(x));
        }
        self.basis.interpolate(&self.nodal_values, x)
    }

    /// `max |u_N - reference|` over `samples` equispaced points including `-1` and `1`.
    pub fn linf_error<R: Fn(f64) -> f64>(&self, reference: R, samples: usize) -> Result<f64> {
        if samples < 2 {
            return Err(Error::Contract(
                "L-infinity sampling needs at least 2 points".into(),
            ));
        }
        let mut worst = 0.0_f64;
        for k in 0..samples {
            let x = uniform_point(k, samples);
            let err = (self.evaluate(x)? - reference(x)).abs();
            worst = worst.max(err);
        }
        Ok(worst)
    }

    /// `(int_{-1}^{1} (u_N - reference)^2 dx)^(1/2)` with a `quad_degree`-point
    /// Gauss-Legendre rule.
    pub fn l2_error<R: Fn(f64) -> f64>(&self, reference: R, quad_degree: usize) -> Result<f64> {
        if quad_degree < self.nodal_values.len() {
            return Err(Error::Contract(format!(
                "L2 quadrature needs at least N + 1 = {} points, got {quad_degree}",
                self.nodal_values.len()
            )));
        }
        let rule = gauss_rule(JacobiParams::legendre(), quad_degree)?;
        let mut sum = 0.0;
        for (x, w) in rule.iter() {
            let d = self.evaluate(x)? - reference(x);
            sum += w * d * d;
        }
        Ok(sum.sqrt())
    }
}

/// `k`-th of `samples` equispaced points on `[-1, 1]`, endpoints exact.
pub fn uniform_point(k: usize, samples: usize) -> f64 {
    if k + 1 == samples {
        1.0
    } else {
        -1.0 + 2.0 * k as f64 / (samples - 1) as f64
    }
}

/// Assemble and solve in one call.
pub fn solve_problem(problem: &Problem) -> Result<SpectralSolution> {
    solve(&assemble(problem)?)
}

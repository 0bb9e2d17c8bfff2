use crate::error::{Error, Result};

/// Distance below which an evaluation point is treated as a node.
const NODE_SNAP: f64 = 1e-14;

/// Lagrange basis `{h_k}` on a fixed set of nodes, stored as barycentric weights.
///
/// Weights are `1 / prod_{j != k} (x_k - x_j)` scaled by a common positive factor
/// so that the largest has unit magnitude; the second barycentric formula is
/// invariant under that scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricBasis {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl BarycentricBasis {
    /// Builds the basis for strictly increasing, distinct `nodes`.
    pub fn new(nodes: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::DegenerateGrid { index: 0 });
        }
        if let Some(i) = nodes
            .windows(2)
            .position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::DegenerateGrid { index: i + 1 });
        }
        let n = nodes.len();
        // log|1/prod| and the sign; nodes sorted, so the sign is (-1)^(#nodes to the right).
        let log_mags: Vec<f64> = (0..n)
            .map(|k| {
                -nodes
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &xj)| (nodes[k] - xj).abs().ln())
                    .sum::<f64>()
            })
            .collect();
        let shift = log_mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights = log_mags
            .iter()
            .enumerate()
            .map(|(k, &lm)| {
                let sign = if (n - 1 - k).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                sign * (lm - shift).exp()
            })
            .collect();
        Ok(Self {
            nodes: nodes.to_vec(),
            weights,
        })
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

    fn node_at(&self, x: f64) -> Option<usize> {
        self.nodes
            .iter()
            .position(|&xk| (x - xk).abs() <= NODE_SNAP)
    }

    /// `sum_k values[k] h_k(x)` by the second barycentric formula.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Result<f64> {
        if values.len() != self.nodes.len() {
            return Err(Error::Shape {
                expected: self.nodes.len(),
                found: values.len(),
            });
        }
        if let Some(k) = self.node_at(x) {
            return Ok(values[k]);
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xk, &wk), &vk) in self.nodes.iter().zip(&self.weights).zip(values) {
            let t = wk / (x - xk);
            num += t * vk;
            den += t;
        }
        Ok(num / den)
    }

    /// All basis values `h_k(x)`, `k = 0..len`.
    pub fn basis_row(&self, x: f64) -> Vec<f64> {
        let mut row = vec![0.0; self.nodes.len()];
        self.basis_row_into(x, &mut row);
        row
    }

    /// Writes `h_k(x)` into `row`, which must have `len()` entries.
    pub fn basis_row_into(&self, x: f64, row: &mut [f64]) {
        debug_assert_eq!(row.len(), self.nodes.len());
        if let Some(k) = self.node_at(x) {
            row.fill(0.0);
            row[k] = 1.0;
            return;
        }
        let mut den = 0.0;
        for ((r, &xk), &wk) in row.iter_mut().zip(&self.nodes).zip(&self.weights) {
            *r = wk / (x - xk);
            den += *r;
        }
        for r in row.iter_mut() {
            *r /= den;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{gauss_lobatto_rule, JacobiParams};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn assert_proportional(got: &[f64], expected: &[f64]) {
        let scale = got[0] / expected[0];
        for (g, e) in got.iter().zip(expected) {
            assert_abs_diff_eq!(*g, scale * e, epsilon = 1e-13 * scale.abs());
        }
    }

    #[test]
    fn two_and_three_point_weights() {
        let b = BarycentricBasis::new(&[-1.0, 1.0]).unwrap();
        assert_proportional(b.weights(), &[-1.0, 1.0]);
        let b = BarycentricBasis::new(&[-1.0, 0.0, 1.0]).unwrap();
        assert_proportional(b.weights(), &[1.0, -2.0, 1.0]);
    }

    fn product_weights(nodes: &[f64]) -> Vec<f64> {
        (0..nodes.len())
            .map(|k| {
                1.0 / nodes
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &xj)| nodes[k] - xj)
                    .product::<f64>()
            })
            .collect()
    }

    #[test]
    fn chebyshev_lobatto_weights() {
        let nodes: Vec<f64> = (0..=8).rev().map(|k| (PI * k as f64 / 8.0).cos()).collect();
        let basis = BarycentricBasis::new(&nodes).unwrap();
        let closed: Vec<f64> = (0..=8)
            .map(|k| {
                let half = if k == 0 || k == 8 { 0.5 } else { 1.0 };
                if k % 2 == 0 {
                    half
                } else {
                    -half
                }
            })
            .collect();
        assert_proportional(basis.weights(), &closed);
        assert_proportional(&product_weights(&nodes), &closed);
    }

    #[test]
    fn duplicate_nodes_are_rejected() {
        assert_eq!(
            BarycentricBasis::new(&[-1.0, 0.2, 0.2, 1.0]),
            Err(Error::DegenerateGrid { index: 2 })
        );
        assert!(BarycentricBasis::new(&[]).is_err());
    }

    #[test]
    fn partition_of_unity_and_linear_reproduction() {
        let rule = gauss_lobatto_rule(JacobiParams::legendre(), 11).unwrap();
        let basis = BarycentricBasis::new(rule.nodes()).unwrap();
        let ones = vec![1.0; basis.len()];
        for &x in &[-0.99, -0.3, 0.0, 0.37, 0.8] {
            assert_abs_diff_eq!(basis.interpolate(&ones, x).unwrap(), 1.0, epsilon = 1e-14);
        }
        let lin = rule.nodes().to_vec();
        assert_abs_diff_eq!(
            basis.interpolate(&lin, 0.37).unwrap(),
            0.37,
            epsilon = 1e-14
        );
    }

    #[test]
    fn exponential_on_legendre_lobatto() {
        let rule = gauss_lobatto_rule(JacobiParams::legendre(), 11).unwrap();
        assert_eq!(rule.len(), 12);
        let basis = BarycentricBasis::new(rule.nodes()).unwrap();
        let values: Vec<f64> = rule.nodes().iter().map(|x| x.exp()).collect();
        assert_abs_diff_eq!(
            basis.interpolate(&values, 0.5).unwrap(),
            0.5f64.exp(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn length_mismatch_is_a_shape_error() {
        let basis = BarycentricBasis::new(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            basis.interpolate(&[1.0, 2.0], 0.1),
            Err(Error::Shape {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn basis_row_quadratic_closed_form() {
        let basis = BarycentricBasis::new(&[-1.0, 0.0, 1.0]).unwrap();
        let row = basis.basis_row(0.25);
        assert_abs_diff_eq!(row[0], -0.093_75, epsilon = 1e-15);
        assert_abs_diff_eq!(row[1], 0.937_5, epsilon = 1e-15);
        assert_abs_diff_eq!(row[2], 0.156_25, epsilon = 1e-15);
    }

    #[test]
    fn basis_row_is_cardinal_at_nodes() {
        let rule = gauss_lobatto_rule(JacobiParams::chebyshev(), 16).unwrap();
        let basis = BarycentricBasis::new(rule.nodes()).unwrap();
        for (j, &x) in rule.nodes().iter().enumerate() {
            let row = basis.basis_row(x);
            for (k, &h) in row.iter().enumerate() {
                assert_eq!(h, if k == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn large_clustered_grid_does_not_overflow() {
        let rule = gauss_lobatto_rule(JacobiParams::legendre(), 200).unwrap();
        let basis = BarycentricBasis::new(rule.nodes()).unwrap();
        assert!(basis.weights().iter().all(|w| w.is_finite() && *w != 0.0));
        let row = basis.basis_row(0.123);
        assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}

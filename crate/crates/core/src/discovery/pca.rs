use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::returns::ReturnsMatrix;
use crate::error::{Error, Result};

/// Tickers as points in the space of their leading principal components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub tickers: Vec<String>,
    /// One `k`-vector per ticker.
    pub coordinates: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
}

impl Embedding {
    pub fn dims(&self) -> usize {
        self.explained_variance.len()
    }
}

/// Eigendecomposition of the `n × n` covariance `X Xᵀ / T` of the
/// standardized ticker rows `X`.
///
/// Ticker `i` is placed at `(v_i1 √λ_1, …, v_ik √λ_k)`, which is the
/// projection of its return row onto the `k` leading unit directions, scaled
/// by `1/√T`. Each eigenvector is oriented so that its largest-magnitude
/// entry (first one on ties) is positive.
pub fn pca_reduce(m: &ReturnsMatrix, variance_target: f64, max_dims: usize) -> Result<Embedding> {
    if !(0.0..=1.0).contains(&variance_target) {
        return Err(Error::Parameter(format!("variance_target must lie in [0, 1], got {variance_target}")));
    }
    if max_dims == 0 {
        return Err(Error::Parameter("max_dims must be >= 1".into()));
    }
    let n = m.n_tickers();
    let t = m.n_returns();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    if t < 2 {
        return Err(Error::TooShort { needed: 3, got: t + 1 });
    }
    let x = DMatrix::from_fn(n, t, |i, j| m.rows[i][j]);
    let cov = (&x * x.transpose()) / t as f64;
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j].max(0.0)).collect();
    let total: f64 = values.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Degenerate("covariance of returns has rank 0".into()));
    }
    let rank = values.iter().filter(|&&v| v > 1e-10 * values[0]).count();
    let ratios: Vec<f64> = values.iter().map(|v| v / total).collect();

    let mut k = 1;
    let mut cumulative = ratios[0];
    while cumulative < variance_target - 1e-12 && k < n {
        cumulative += ratios[k];
        k += 1;
    }
    let k = k.min(max_dims).min(rank).min(t - 1).max(1);

    let mut coordinates = vec![Vec::with_capacity(k); n];
    for (c, &j) in order.iter().take(k).enumerate() {
        let v = eig.eigenvectors.column(j);
        let pivot = (0..n).fold(0, |best, i| if v[i].abs() > v[best].abs() { i } else { best });
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        let scale = sign * values[c].sqrt();
        for (i, row) in coordinates.iter_mut().enumerate() {
            row.push(v[i] * scale);
        }
    }
    Ok(Embedding { tickers: m.tickers.clone(), coordinates, explained_variance: ratios[..k].to_vec() })
}

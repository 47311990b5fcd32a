//! OPTICS ordering with ξ-steep cluster extraction.
//!
//! The ordering, the reachability rounding and the ξ extraction (including
//! predecessor correction and the terminal `+inf` sentinel on the
//! reachability plot) follow scikit-learn's `OPTICS(cluster_method="xi")`
//! with `max_eps = inf` and `min_cluster_size = min_samples`, so labels agree
//! with it point for point.

use serde::{Deserialize, Serialize};

use super::pca::Embedding;
use crate::error::{Error, Result};

pub const NOISE: i32 = -1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterLabels {
    pub tickers: Vec<String>,
    /// `NOISE` or a cluster id in `0..n_clusters`.
    pub labels: Vec<i32>,
    /// Visit order of the points.
    pub ordering: Vec<usize>,
    /// Reachability distance per point (`inf` for the first point of each region).
    pub reachability: Vec<f64>,
    pub core_distances: Vec<f64>,
}

impl ClusterLabels {
    pub fn n_clusters(&self) -> usize {
        self.labels.iter().copied().max().map_or(0, |m| (m + 1).max(0) as usize)
    }

    pub fn members(&self, cluster: i32) -> Vec<&str> {
        self.tickers
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == cluster)
            .map(|(t, _)| t.as_str())
            .collect()
    }
}

// numpy.around(x, 15)
fn round15(x: f64) -> f64 {
    if x.is_finite() {
        (x * 1e15).round_ties_even() / 1e15
    } else {
        x
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn optics_cluster(e: &Embedding, min_samples: usize, xi: f64) -> Result<ClusterLabels> {
    if min_samples < 2 {
        return Err(Error::Parameter(format!("min_samples must be >= 2, got {min_samples}")));
    }
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Parameter(format!("xi must lie in (0, 1), got {xi}")));
    }
    let n = e.coordinates.len();
    if n < min_samples {
        return Ok(ClusterLabels {
            tickers: e.tickers.clone(),
            labels: vec![NOISE; n],
            ordering: (0..n).collect(),
            reachability: vec![f64::INFINITY; n],
            core_distances: vec![f64::INFINITY; n],
        });
    }
    let pts = &e.coordinates;
    let dist: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| euclidean(&pts[i], &pts[j])).collect()).collect();

    // Distance to the min_samples-th nearest neighbour, the point itself included.
    let core: Vec<f64> = dist
        .iter()
        .map(|row| {
            let mut d = row.clone();
            d.sort_by(f64::total_cmp);
            round15(d[min_samples - 1])
        })
        .collect();

    let mut reach = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut ordering = Vec::with_capacity(n);
    for _ in 0..n {
        let mut point = usize::MAX;
        for i in (0..n).filter(|&i| !done[i]) {
            if point == usize::MAX || reach[i] < reach[point] {
                point = i;
            }
        }
        done[point] = true;
        ordering.push(point);
        for j in (0..n).filter(|&j| !done[j]) {
            let r = round15(dist[point][j].max(core[point]));
            if r < reach[j] {
                reach[j] = r;
                pred[j] = Some(point);
            }
        }
    }

    let mut plot: Vec<f64> = ordering.iter().map(|&i| reach[i]).collect();
    plot.push(f64::INFINITY);
    let pred_plot: Vec<Option<usize>> = ordering.iter().map(|&i| pred[i]).collect();
    let clusters = xi_clusters(&plot, &pred_plot, &ordering, xi, min_samples, min_samples);

    let mut by_position = vec![NOISE; n];
    let mut next = 0;
    for (s, t) in clusters {
        if by_position[s..=t].iter().all(|&l| l == NOISE) {
            by_position[s..=t].iter_mut().for_each(|l| *l = next);
            next += 1;
        }
    }
    let mut labels = vec![NOISE; n];
    for (pos, &point) in ordering.iter().enumerate() {
        labels[point] = by_position[pos];
    }
    Ok(ClusterLabels { tickers: e.tickers.clone(), labels, ordering, reachability: reach, core_distances: core })
}

struct SteepDown {
    start: usize,
    end: usize,
    mib: f64,
}

fn update_filter_sdas(sdas: Vec<SteepDown>, mib: f64, xi_c: f64, plot: &[f64]) -> Vec<SteepDown> {
    if mib.is_infinite() {
        return Vec::new();
    }
    sdas.into_iter()
        .filter(|d| mib <= plot[d.start] * xi_c)
        .map(|d| SteepDown { mib: d.mib.max(mib), ..d })
        .collect()
}

// Grows a steep region while at most `min_samples` consecutive non-steep,
// non-reversing points separate steep ones.
fn extend_region(steep: &[bool], reverse: &[bool], start: usize, min_samples: usize) -> usize {
    let mut non_xward = 0;
    let mut end = start;
    for i in start..steep.len() {
        if steep[i] {
            non_xward = 0;
            end = i;
        } else if !reverse[i] {
            non_xward += 1;
            if non_xward > min_samples {
                break;
            }
        } else {
            return end;
        }
    }
    end
}

fn correct_predecessor(
    plot: &[f64],
    pred_plot: &[Option<usize>],
    ordering: &[usize],
    s: usize,
    mut e: usize,
) -> Option<(usize, usize)> {
    while s < e {
        if plot[s] > plot[e] {
            return Some((s, e));
        }
        if let Some(p) = pred_plot[e] {
            if ordering[s..e].contains(&p) {
                return Some((s, e));
            }
        }
        e -= 1;
    }
    None
}

/// Candidate clusters as inclusive ranges of ordering positions, innermost first.
fn xi_clusters(
    plot: &[f64],
    pred_plot: &[Option<usize>],
    ordering: &[usize],
    xi: f64,
    min_samples: usize,
    min_cluster_size: usize,
) -> Vec<(usize, usize)> {
    let xi_c = 1.0 - xi;
    let n = plot.len() - 1;
    let ratio: Vec<f64> = (0..n).map(|i| plot[i] / plot[i + 1]).collect();
    let steep_up: Vec<bool> = ratio.iter().map(|&r| r <= xi_c).collect();
    let steep_down: Vec<bool> = ratio.iter().map(|&r| r >= 1.0 / xi_c).collect();
    let down: Vec<bool> = ratio.iter().map(|&r| r > 1.0).collect();
    let up: Vec<bool> = ratio.iter().map(|&r| r < 1.0).collect();

    let mut sdas: Vec<SteepDown> = Vec::new();
    let mut clusters = Vec::new();
    let mut index = 0;
    let mut mib = 0.0f64;
    for steep_index in (0..n).filter(|&i| steep_up[i] || steep_down[i]) {
        if steep_index < index {
            continue;
        }
        mib = plot[index..=steep_index].iter().fold(mib, |m, &v| m.max(v));
        sdas = update_filter_sdas(sdas, mib, xi_c, plot);
        if steep_down[steep_index] {
            let end = extend_region(&steep_down, &up, steep_index, min_samples);
            sdas.push(SteepDown { start: steep_index, end, mib: 0.0 });
            index = end + 1;
            mib = plot[index];
            continue;
        }
        let u_start = steep_index;
        let u_end = extend_region(&steep_up, &down, u_start, min_samples);
        index = u_end + 1;
        mib = plot[index];

        let mut found = Vec::new();
        for d in &sdas {
            let mut c_start = d.start;
            let mut c_end = u_end;
            if plot[c_end + 1] * xi_c < d.mib {
                continue;
            }
            let d_max = plot[d.start];
            if d_max * xi_c >= plot[c_end + 1] {
                while plot[c_start + 1] > plot[c_end + 1] && c_start < d.end {
                    c_start += 1;
                }
            } else if plot[c_end + 1] * xi_c >= d_max {
                while c_end > u_start && plot[c_end - 1] > d_max {
                    c_end -= 1;
                }
            }
            let Some((s, e)) = correct_predecessor(plot, pred_plot, ordering, c_start, c_end) else {
                continue;
            };
            if e - s + 1 < min_cluster_size || s > d.end || e < u_start {
                continue;
            }
            found.push((s, e));
        }
        found.reverse();
        clusters.extend(found);
    }
    clusters
}

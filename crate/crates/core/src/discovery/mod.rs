//! Pair discovery: standardized returns, PCA embedding, OPTICS clustering,
//! intra-cluster pair enumeration and statistical scoring.

mod optics;
mod pairs;
mod pca;
mod returns;

pub use optics::{optics_cluster, ClusterLabels, NOISE};
pub use pairs::{enumerate_pairs, filter_pairs, score_pair, PairCandidate, PairStats, SelectionCriteria};
pub use pca::{pca_reduce, Embedding};
pub use returns::{build_returns_matrix, ReturnsMatrix};

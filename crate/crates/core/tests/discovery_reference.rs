//! PCA against a frozen numpy eigendecomposition and OPTICS against frozen
//! scikit-learn runs on identical point sets.

use std::collections::BTreeMap;

use esgpairs::discovery::{build_returns_matrix, optics_cluster, pca_reduce, Embedding};
use esgpairs::synth::{generate_market, SynthConfig};

#[test]
fn pca_matches_numpy_up_to_sign() {
    let m = generate_market(&SynthConfig { seed: 11, n_days: 251, ..Default::default() }).unwrap();
    let r = build_returns_matrix(&m.prices).unwrap();
    let e = pca_reduce(&r, 1.0, 10).unwrap();
    assert_eq!(e.dims(), 10);

    let mut explained = [0.0; 10];
    let mut coords: BTreeMap<(String, usize), f64> = BTreeMap::new();
    for line in include_str!("fixtures/pca_reference.csv").lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let c: usize = f[1].parse().unwrap();
        let v: f64 = f[2].parse().unwrap();
        if f[0] == "<explained>" {
            explained[c] = v;
        } else {
            coords.insert((f[0].to_string(), c), v);
        }
    }
    for c in 0..10 {
        assert!((e.explained_variance[c] - explained[c]).abs() < 1e-10, "component {c}");
        let reference: Vec<f64> = e.tickers.iter().map(|t| coords[&(t.clone(), c)]).collect();
        let ours: Vec<f64> = e.coordinates.iter().map(|row| row[c]).collect();
        let dot: f64 = ours.iter().zip(&reference).map(|(a, b)| a * b).sum();
        let sign = dot.signum();
        for (a, b) in ours.iter().zip(&reference) {
            assert!((a - sign * b).abs() < 1e-8, "component {c}: {a} vs {b}");
        }
    }
}

struct Run {
    order: Vec<usize>,
    reachability: Vec<f64>,
    labels: Vec<i32>,
}

fn reference_runs() -> BTreeMap<(String, usize, String), Run> {
    let mut runs: BTreeMap<(String, usize, String), Run> = BTreeMap::new();
    for line in include_str!("fixtures/optics_reference.csv").lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let run = runs
            .entry((f[0].to_string(), f[1].parse().unwrap(), f[2].to_string()))
            .or_insert(Run { order: vec![], reachability: vec![], labels: vec![] });
        run.order.push(f[4].parse().unwrap());
        run.reachability.push(f[5].parse().unwrap());
        run.labels.push(f[6].parse().unwrap());
    }
    runs
}

fn point_sets() -> BTreeMap<String, Vec<Vec<f64>>> {
    let mut sets: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for line in include_str!("fixtures/optics_points.csv").lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        sets.entry(f[0].to_string()).or_default().push(f[2].split(';').map(|v| v.parse().unwrap()).collect());
    }
    sets
}

#[test]
fn optics_matches_scikit_learn() {
    let sets = point_sets();
    let runs = reference_runs();
    assert_eq!(runs.len(), 3 * sets.len());
    for ((name, min_samples, xi), reference) in &runs {
        let points = &sets[name];
        let e = Embedding {
            tickers: (0..points.len()).map(|i| format!("P{i:03}")).collect(),
            coordinates: points.clone(),
            explained_variance: vec![0.0; points[0].len()],
        };
        let l = optics_cluster(&e, *min_samples, xi.parse().unwrap()).unwrap();
        let ctx = format!("{name} min_samples={min_samples} xi={xi}");
        assert_eq!(l.ordering, reference.order, "{ctx}");
        for (a, b) in l.reachability.iter().zip(&reference.reachability) {
            assert!(a == b || (a - b).abs() < 1e-12 * b.abs().max(1.0), "{ctx}: {a} vs {b}");
        }
        assert_eq!(l.labels, reference.labels, "{ctx}");
    }
}

#[test]
fn lattice_blobs_form_two_clean_clusters() {
    let points = &point_sets()["lattice_blobs"];
    let e = Embedding {
        tickers: (0..points.len()).map(|i| format!("P{i:03}")).collect(),
        coordinates: points.clone(),
        explained_variance: vec![0.5, 0.5],
    };
    let l = optics_cluster(&e, 3, 0.05).unwrap();
    assert_eq!(l.n_clusters(), 2);
    assert!(l.labels.iter().all(|&x| x >= 0));
    assert!(l.labels[..10].iter().all(|&x| x == l.labels[0]));
    assert!(l.labels[10..].iter().all(|&x| x == l.labels[10]));
}

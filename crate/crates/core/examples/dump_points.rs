//! Writes the inputs behind the PCA and OPTICS reference fixtures.
//!
//! `cargo run -p esgpairs --example dump_points -- prices > /tmp/pca_prices.csv`
//! `cargo run -p esgpairs --example dump_points -- points > /tmp/points.csv`

use esgpairs::discovery::{build_returns_matrix, pca_reduce};
use esgpairs::synth::{generate_market, white_noise, SynthConfig};

fn blob(center: &[f64], n: usize, spread: f64, seed: u64) -> Vec<Vec<f64>> {
    let d = center.len();
    let noise = white_noise(n * d, spread, seed);
    (0..n).map(|i| (0..d).map(|j| center[j] + noise[i * d + j]).collect()).collect()
}

fn point_sets() -> Vec<(String, Vec<Vec<f64>>)> {
    let mut sets = Vec::new();
    let lattice: Vec<Vec<f64>> = (0..20)
        .map(|i| {
            let offset = if i < 10 { 0.0 } else { 20.0 };
            vec![offset + (i % 5) as f64 * 0.1, offset + ((i % 10) / 5) as f64 * 0.1]
        })
        .collect();
    sets.push(("lattice_blobs".to_string(), lattice));
    let mut two = blob(&[0.0, 0.0], 10, 0.3, 1);
    two.extend(blob(&[20.0, 20.0], 10, 0.3, 2));
    sets.push(("two_blobs".to_string(), two));
    let mut three = blob(&[0.0, 0.0, 0.0], 12, 0.2, 3);
    three.extend(blob(&[5.0, 0.0, 0.0], 8, 1.0, 4));
    three.extend(blob(&[0.0, 9.0, 3.0], 6, 0.5, 5));
    three.extend(blob(&[30.0, -10.0, 4.0], 3, 4.0, 6));
    sets.push(("mixed_density".to_string(), three));
    sets.push(("uniform".to_string(), blob(&[0.0; 4], 30, 1.0, 7)));
    for seed in 0..6 {
        let m = generate_market(&SynthConfig { seed, ..Default::default() }).unwrap();
        let e = pca_reduce(&build_returns_matrix(&m.prices).unwrap(), 0.9, 10).unwrap();
        sets.push((format!("market_{seed}"), e.coordinates));
    }
    sets
}

fn main() {
    match std::env::args().nth(1).as_deref() {
        Some("prices") => {
            let m = generate_market(&SynthConfig { seed: 11, n_days: 251, ..Default::default() }).unwrap();
            m.prices.write_csv(std::io::stdout()).unwrap();
        }
        Some("points") => {
            println!("set,index,coords");
            for (name, pts) in point_sets() {
                for (i, p) in pts.iter().enumerate() {
                    let coords: Vec<String> = p.iter().map(|v| format!("{v:e}")).collect();
                    println!("{name},{i},{}", coords.join(";"));
                }
            }
        }
        _ => eprintln!("usage: dump_points prices|points"),
    }
}

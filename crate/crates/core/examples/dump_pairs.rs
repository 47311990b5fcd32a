//! Writes the seeded pairs behind the Engle-Granger reference fixture as CSV
//! on stdout (`kind,seed,index,y,x`).
//!
//! `cargo run -p esgpairs --example dump_pairs > /tmp/pairs.csv`

use esgpairs::synth::{ar1, random_walk};

fn main() {
    println!("kind,seed,index,y,x");
    for seed in 0..20u64 {
        let x: Vec<f64> = random_walk(750, 1.0, seed).iter().map(|v| v + 100.0).collect();
        let noise = ar1(0.7, 750, 1.0, seed + 10_000);
        for (i, (xv, u)) in x.iter().zip(&noise).enumerate() {
            println!("planted,{seed},{i},{:e},{xv:e}", 2.0 * xv + u);
        }
        let y = random_walk(750, 1.0, seed + 20_000);
        let x = random_walk(750, 1.0, seed + 30_000);
        for (i, (yv, xv)) in y.iter().zip(&x).enumerate() {
            println!("independent,{seed},{i},{yv:e},{xv:e}");
        }
    }
}

//! Writes the seeded series behind the ADF reference fixture as CSV on
//! stdout (`case,seed,index,value`).
//!
//! `cargo run -p esgpairs --example dump_series > /tmp/series.csv`

use esgpairs::synth::{ar1, random_walk, white_noise};

fn main() {
    println!("case,seed,index,value");
    for seed in 0..100u64 {
        let cases = [
            ("white_noise", white_noise(1000, 1.0, seed)),
            ("ar1", ar1(0.5, 1000, 1.0, seed)),
            ("random_walk", random_walk(1000, 1.0, seed)),
        ];
        for (case, series) in cases {
            for (i, v) in series.iter().enumerate() {
                println!("{case},{seed},{i},{v:e}");
            }
        }
    }
}

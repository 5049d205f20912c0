//! Upper and lower bounds on the minimum Rényi output entropy, written as CSV.
//!
//! `cargo run --example bound_curves -- 1.0 bounds.csv`

use bosonic_minent::bounds::{figure_data, linear_grid, DEFAULT_K_MAX};
use bosonic_minent::cli::bounds_csv;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1.0);
    let curve = figure_data(n, &linear_grid(0.2, 12.0, 200), None, DEFAULT_K_MAX)?;
    let csv = bounds_csv(&curve);
    match args.next() {
        Some(path) => std::fs::write(&path, csv)?,
        None => {
            for line in csv.lines().step_by(20) {
                println!("{line}");
            }
        }
    }
    Ok(())
}

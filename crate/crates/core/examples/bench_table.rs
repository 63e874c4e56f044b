//! Time all six methods and print the component breakdown table.
//! Build with `--release` for meaningful numbers.

use vecnormal::bench::{bench_all, render, TableFormat};

fn main() {
    let reports = bench_all(1_000_000, 3);
    print!("{}", render(&reports, TableFormat::Table));
}

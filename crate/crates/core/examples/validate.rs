//! Run the full gate suite at a reduced sample size and print the table.

use vecnormal::statcheck::{selftest, SelftestConfig};

fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let reports = selftest(&SelftestConfig {
        n,
        ..SelftestConfig::default()
    });
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{failed} of {} gates failed", reports.len());
}

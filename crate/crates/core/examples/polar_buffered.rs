//! The polar method rejects about 21% of candidate pairs, so the number of
//! deviates produced per round is random. A small buffer makes any sequence
//! of fill sizes return exactly the same stream.

use vecnormal::method::{Method, NormalParams};
use vecnormal::polar::{Polar, PolarVariant};

fn main() {
    let mut batch = Polar::new(PolarVariant::P2, NormalParams::standard(), 7);
    let mut all = vec![0.0; 10_000];
    batch.fill(&mut all);

    let mut pieces = Polar::new(PolarVariant::P2, NormalParams::standard(), 7);
    let mut got = Vec::new();
    for k in [1, 2, 3, 5, 8, 13, 21, 34, 55, 89].iter().cycle().take(300) {
        let mut buf = vec![0.0; *k];
        pieces.fill(&mut buf);
        got.extend(buf);
    }
    got.truncate(all.len());
    println!(
        "{}: odd-sized fills match one big fill: {}",
        Method::P2,
        got == all[..got.len()]
    );

    let (accepted, proposed) = batch.acceptance_counts();
    println!(
        "accepted {accepted} of {proposed} candidate pairs ({:.4}, pi/4 = {:.4})",
        accepted as f64 / proposed as f64,
        std::f64::consts::FRAC_PI_4
    );
    println!("buffered deviates waiting: {}", batch.buffer().len());
}

//! The ratio-of-uniforms method with and without its quick accept/reject
//! bounds: the output is identical, but most logarithms are skipped.

use vecnormal::method::NormalParams;
use vecnormal::ratio::{acceptance_probability, Ratio};
use vecnormal::uniform::UniformSource;

fn main() {
    let n = 1_000_000;
    let mut fast = Ratio::new(NormalParams::standard(), 99);
    let mut plain = Ratio::new(NormalParams::standard(), 99);
    plain.set_pretests(false);

    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    fast.fill(&mut a);
    plain.fill(&mut b);

    let c = fast.counters();
    println!("identical output: {}", a == b);
    println!(
        "candidates {}: quick accept {}, quick reject {}, logarithms {} ({:.2}%)",
        c.candidates,
        c.quick_accepts,
        c.quick_rejects,
        c.exact_tests,
        100.0 * c.exact_tests as f64 / c.candidates as f64
    );
    println!(
        "uniforms per deviate {:.4} (theory {:.4})",
        fast.stream().draws() as f64 / n as f64,
        2.0 / acceptance_probability()
    );
}

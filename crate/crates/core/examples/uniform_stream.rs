//! Draw uniforms from the lagged-Fibonacci stream and check they look uniform.

use vecnormal::statcheck::ks_uniform;
use vecnormal::uniform::{UniformSource, UniformStream};

fn main() {
    let mut stream = UniformStream::new(42);
    let mut u = vec![0.0; 1_000_000];
    stream.fill_uniform(&mut u);

    println!("first values: {:?}", &u[..4]);
    println!("draws so far: {}", stream.draws());
    let mean = u.iter().sum::<f64>() / u.len() as f64;
    println!("mean {mean:.6} (expect 0.5)");
    let ks = ks_uniform(&u).expect("enough samples");
    println!(
        "KS D = {:.3e}, critical {:.3e}, pass = {}",
        ks.statistic, ks.critical_value_at_alpha, ks.pass
    );
}

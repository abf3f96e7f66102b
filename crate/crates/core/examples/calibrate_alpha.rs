//! Pilot for the constant `B` in the bicriteria multiplier
//! `α = B · ln(m)² · ln(1/δ) / (ε (1 − ρ))`.
//!
//! Runs the private greedy cover on random instances (seeds disjoint from
//! the test suite), divides each solution size by `ln(m)² ln(1/δ) / (ε (1 − ρ))
//! · OPT` and prints the largest ratio. The frozen default is this value
//! rounded up to two significant digits.
//!
//!     cargo run --release -p dppc-core --example calibrate_alpha

use dppc::greedy_cover::partial_set_cover_greedy;
use dppc::mechanisms::child_seed;
use dppc::oracle::{exact_partial_cover, gen_random_set_system};
use dppc::{CoverRequirement, NoiseSource, PrivacyBudget};

const PILOT_SEED: u64 = 0x9e37_79b9;
const INSTANCES: u64 = 30;
const RUNS: u64 = 20;

fn main() -> dppc::Result<()> {
    let (n, m, density) = (60, 12, 0.2);
    let rho = CoverRequirement::new(0.6)?;
    let budget = PrivacyBudget::new(2.0, 1e-6)?;
    let ln_m = (m as f64).ln();
    let factor = ln_m * ln_m * (1.0 / budget.delta()).ln() / (budget.epsilon() * (1.0 - rho.rho()));
    let mut worst = 0.0f64;
    let mut ratios = Vec::new();
    for i in 0..INSTANCES {
        let system = gen_random_set_system(n, m, density, child_seed(PILOT_SEED, i))?;
        let opt = exact_partial_cover(&system, rho)?.opt_value;
        for r in 0..RUNS {
            let mut noise = NoiseSource::seeded(child_seed(child_seed(PILOT_SEED, i), r + 1));
            let out = partial_set_cover_greedy(&system, rho, budget, &mut noise)?;
            let ratio = out.solution.k as f64 / (factor * opt as f64);
            worst = worst.max(ratio);
            ratios.push(out.solution.k as f64 / opt as f64);
        }
    }
    ratios.sort_by(f64::total_cmp);
    println!("formula factor       {factor:.3}");
    println!("median k / OPT       {:.3}", ratios[ratios.len() / 2]);
    println!("max k / (factor OPT) {worst:.5}");
    let digits = 10f64.powi(1 - worst.log10().floor() as i32);
    println!("frozen B             {}", (worst * digits).ceil() / digits);
    Ok(())
}

//! Differential-privacy primitives.
//!
//! Every randomised routine draws from a [`NoiseSource`]. A zero-noise
//! source turns each Laplace draw into 0 and each exponential-mechanism
//! choice into the first argmax, which reduces the private algorithms to
//! their deterministic skeletons for testing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{invalid, Result};
pub use crate::model::PrivacyBudget;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    Random,
    /// Laplace draws are 0, exponential choices are the first argmax.
    Zero,
}

/// Seedable randomness for the mechanisms. Single owner; use
/// [`NoiseSource::child`] to hand independent streams to parallel trials.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    seed: u64,
    mode: NoiseMode,
    rng: ChaCha20Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child stream `index` of `parent`:
/// `splitmix64(parent ^ splitmix64(index))`.
pub fn child_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index))
}

impl NoiseSource {
    pub fn seeded(seed: u64) -> Self {
        NoiseSource {
            seed,
            mode: NoiseMode::Random,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// The deterministic test source.
    pub fn zero_noise() -> Self {
        NoiseSource {
            seed: 0,
            mode: NoiseMode::Zero,
            rng: ChaCha20Rng::seed_from_u64(0),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    pub fn is_zero_noise(&self) -> bool {
        self.mode == NoiseMode::Zero
    }

    /// An independent source for trial `index`, in the same mode.
    pub fn child(&self, index: u64) -> NoiseSource {
        match self.mode {
            NoiseMode::Random => NoiseSource::seeded(child_seed(self.seed, index)),
            NoiseMode::Zero => NoiseSource::zero_noise(),
        }
    }

    /// Uniform draw in the open interval (0, 1).
    fn open_unit(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }
}

/// One draw from `Lap(scale)`, density proportional to `exp(-|x| / scale)`,
/// by inverting the CDF at a uniform draw.
pub fn laplace(scale: f64, noise: &mut NoiseSource) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return invalid(format!(
            "Laplace scale must be positive and finite, got {scale}"
        ));
    }
    if noise.is_zero_noise() {
        return Ok(0.0);
    }
    let u = noise.open_unit();
    Ok(if u < 0.5 {
        scale * (2.0 * u).ln()
    } else {
        -scale * (2.0 * (1.0 - u)).ln()
    })
}

/// Exponential mechanism: returns index `i` with probability proportional to
/// `exp(weight * scores[i])`.
///
/// `weight` is already folded: the textbook mechanism uses
/// `epsilon / (2 * sensitivity)`, the private greedy cover uses `epsilon'`
/// directly.
pub fn exponential_choice(scores: &[f64], weight: f64, noise: &mut NoiseSource) -> Result<usize> {
    if scores.is_empty() {
        return invalid("exponential mechanism needs at least one candidate");
    }
    if !(weight > 0.0 && weight.is_finite()) {
        return invalid(format!("weight must be positive and finite, got {weight}"));
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return invalid(format!("score {i} is not finite"));
    }
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if noise.is_zero_noise() {
        return Ok(scores
            .iter()
            .position(|&s| s == max)
            .expect("max is attained"));
    }
    let weights: Vec<f64> = scores.iter().map(|&s| (weight * (s - max)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut r = noise.open_unit() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            if r < w {
                return Ok(i);
            }
            r -= w;
            last = i;
        }
    }
    Ok(last)
}

/// Offline AboveThreshold over a nondecreasing sequence.
///
/// Draws `T̂ = threshold + Lap(2/ε)` once and `γ_i = f_i + Lap(4/ε)` per
/// index, and returns the 1-based position of the first `γ_i ≥ T̂`, or
/// `None` when no index crosses.
pub fn above_threshold_offline(
    values: &[usize],
    threshold: f64,
    epsilon: f64,
    noise: &mut NoiseSource,
) -> Result<Option<usize>> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return invalid(format!(
            "epsilon must be positive and finite, got {epsilon}"
        ));
    }
    if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
        return invalid(format!(
            "values must be nondecreasing (index {} decreases)",
            i + 1
        ));
    }
    let noisy_threshold = threshold + laplace(2.0 / epsilon, noise)?;
    for (i, &f) in values.iter().enumerate() {
        if f as f64 + laplace(4.0 / epsilon, noise)? >= noisy_threshold {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

/// Basic composition: component-wise sum.
pub fn compose(budgets: &[PrivacyBudget]) -> Result<PrivacyBudget> {
    if budgets.is_empty() {
        return invalid("nothing to compose");
    }
    let (e, d) = budgets
        .iter()
        .fold((0.0, 0.0), |(e, d), b| (e + b.epsilon(), d + b.delta()));
    Ok(PrivacyBudget::raw(e, d))
}

/// Record of every mechanism charge made during one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrivacyLedger {
    entries: Vec<(String, PrivacyBudget)>,
}

impl PrivacyLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, label: impl Into<String>, cost: PrivacyBudget) {
        self.entries.push((label.into(), cost));
    }

    pub fn absorb(&mut self, other: PrivacyLedger) {
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> &[(String, PrivacyBudget)] {
        &self.entries
    }

    /// Composed spend; `(0, 0)` for an empty ledger.
    pub fn total(&self) -> PrivacyBudget {
        let costs: Vec<PrivacyBudget> = self.entries.iter().map(|(_, b)| *b).collect();
        compose(&costs).unwrap_or(PrivacyBudget::raw(0.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_hooks() {
        let mut z = NoiseSource::zero_noise();
        assert_eq!(laplace(3.0, &mut z).unwrap(), 0.0);
        assert_eq!(
            exponential_choice(&[1.0, 5.0, 5.0], 1.0, &mut z).unwrap(),
            1
        );
    }

    #[test]
    fn laplace_rejects_bad_scale() {
        let mut r = NoiseSource::seeded(1);
        assert!(laplace(0.0, &mut r).is_err());
        assert!(laplace(-1.0, &mut r).is_err());
        assert!(laplace(f64::NAN, &mut r).is_err());
    }

    #[test]
    fn equal_seeds_equal_streams() {
        let mut a = NoiseSource::seeded(42);
        let mut b = NoiseSource::seeded(42);
        for _ in 0..100 {
            assert_eq!(laplace(1.0, &mut a).unwrap(), laplace(1.0, &mut b).unwrap());
        }
        let mut c = NoiseSource::seeded(43);
        assert_ne!(laplace(1.0, &mut a).unwrap(), laplace(1.0, &mut c).unwrap());
    }

    #[test]
    fn children_are_distinct_and_stable() {
        let p = NoiseSource::seeded(9);
        assert_eq!(p.child(3).seed(), child_seed(9, 3));
        assert_ne!(p.child(3).seed(), p.child(4).seed());
        assert!(NoiseSource::zero_noise().child(1).is_zero_noise());
    }

    #[test]
    fn exponential_choice_errors() {
        let mut r = NoiseSource::seeded(1);
        assert!(exponential_choice(&[], 1.0, &mut r).is_err());
        assert!(exponential_choice(&[1.0, f64::INFINITY], 1.0, &mut r).is_err());
        assert!(exponential_choice(&[1.0], 0.0, &mut r).is_err());
        assert_eq!(exponential_choice(&[7.0], 1.0, &mut r).unwrap(), 0);
    }

    #[test]
    fn exponential_choice_handles_huge_gaps() {
        let mut r = NoiseSource::seeded(5);
        for _ in 0..100 {
            assert_eq!(
                exponential_choice(&[0.0, 1e6, 0.0], 1.0, &mut r).unwrap(),
                1
            );
        }
    }

    #[test]
    fn above_threshold_deterministic_scan() {
        let mut z = NoiseSource::zero_noise();
        assert_eq!(
            above_threshold_offline(&[1, 2, 3], 2.0, 1.0, &mut z).unwrap(),
            Some(2)
        );
        assert_eq!(
            above_threshold_offline(&[1, 2, 3], 5.0, 1.0, &mut z).unwrap(),
            None
        );
        assert_eq!(
            above_threshold_offline(&[], 0.0, 1.0, &mut z).unwrap(),
            None
        );
        assert!(above_threshold_offline(&[2, 1], 0.0, 1.0, &mut z).is_err());
        assert!(above_threshold_offline(&[1], 0.0, 0.0, &mut z).is_err());
    }

    #[test]
    fn composition() {
        let one = PrivacyBudget::new(1.0, 0.0).unwrap();
        assert_eq!(compose(&[one]).unwrap(), one);
        let b = PrivacyBudget::new(1.0, 1e-6).unwrap();
        let c = compose(&[b, b]).unwrap();
        assert_eq!((c.epsilon(), c.delta()), (2.0, 2e-6));
        assert!(compose(&[]).is_err());
        assert_eq!(PrivacyLedger::new().total().epsilon(), 0.0);
    }

    #[test]
    fn ledger_over_rounds() {
        // log2(1/γ) rounds of (2ε′, δ′) with ε′ = ε / log2(1/γ)
        let (eps, delta, rounds) = (1.5, 1e-6, 10);
        let per = PrivacyBudget::new(eps / rounds as f64, delta / rounds as f64).unwrap();
        let mut ledger = PrivacyLedger::new();
        for r in 0..rounds {
            ledger.charge(
                format!("round {r}"),
                PrivacyBudget::raw(2.0 * per.epsilon(), per.delta()),
            );
        }
        let t = ledger.total();
        assert!((t.epsilon() - 2.0 * eps).abs() < 1e-12);
        assert!((t.delta() - delta).abs() < 1e-12);
    }
}

//! Partial Set Cover through private maximum coverage.
//!
//! [`dp_max_cover_expected`] is the private greedy for maximum coverage with
//! an even split of `ε₀ = ε / (2 ln(e/δ))` across its `k` picks.
//! [`dp_max_cover_amplified`] repeats it and keeps the best family through
//! the exponential mechanism, turning the guarantee in expectation into one
//! that holds with high probability. [`partial_cover_via_maxcov`] binary
//! searches the size of the optimum, covering the residual universe with
//! `t` amplified runs per guess and accepting a guess on a noisy count.

use fixedbitset::FixedBitSet;

use crate::error::{invalid, Error, Result};
use crate::mechanisms::{exponential_choice, laplace, NoiseSource, PrivacyLedger};
use crate::model::{CoverRequirement, PrivacyBudget, SetSystem};

/// `α` of the amplification argument.
pub const AMPLIFY_ALPHA: f64 = 0.5;

/// Approximation ratio targeted by the amplified routine; also the base of
/// `t` as `1 - 0.15 = 0.85`.
pub const AMPLIFIED_RATIO: f64 = 0.15;

/// `C = (1 - 1/e - α) ln(1 + α) / 2`.
pub fn amplification_constant() -> f64 {
    (1.0 - (-1.0f64).exp() - AMPLIFY_ALPHA) * (1.0 + AMPLIFY_ALPHA).ln() / 2.0
}

/// `T = ⌈ln n / ln(1 + α)⌉`, at least 1.
pub fn amplification_repeats(n: usize) -> usize {
    let t = ((n.max(1) as f64).ln() / (1.0 + AMPLIFY_ALPHA).ln()).ceil();
    (t as usize).max(1)
}

/// `ε₀ = ε / (2 ln(e/δ))`.
pub fn expected_epsilon0(budget: PrivacyBudget) -> f64 {
    budget.epsilon() / (2.0 * (1.0 - budget.delta().ln()))
}

/// `ε₀ = ε / (2 ln(e ln n / (δ ln(1 + α))))`, the scale appearing in the
/// amplified routine's size condition.
pub fn amplified_epsilon0(budget: PrivacyBudget, n: usize) -> f64 {
    let ln_n = (n as f64).ln();
    let arg = std::f64::consts::E * ln_n / (budget.delta() * (1.0 + AMPLIFY_ALPHA).ln());
    budget.epsilon() / (2.0 * arg.ln())
}

#[derive(Debug, Clone)]
pub struct MaxCoverOutcome {
    pub sets: Vec<usize>,
    /// Newly covered elements (all covered elements when run on a fresh
    /// universe).
    pub coverage: usize,
    pub ledger: PrivacyLedger,
}

fn check_max_cover_args(system: &SetSystem, k: usize, budget: PrivacyBudget) -> Result<()> {
    if k > system.m() {
        return invalid(format!(
            "k = {k} exceeds the number of sets ({})",
            system.m()
        ));
    }
    if budget.delta() <= 0.0 {
        return invalid("private maximum coverage needs delta > 0");
    }
    Ok(())
}

/// Private greedy over the sets marked `available`, starting from `covered`.
/// Returns the picks and the number of newly covered elements.
fn greedy_on_residual(
    system: &SetSystem,
    covered: &FixedBitSet,
    available: &[bool],
    k: usize,
    weight: f64,
    noise: &mut NoiseSource,
) -> Result<(Vec<usize>, usize)> {
    let mut pool: Vec<usize> = (0..system.m()).filter(|&s| available[s]).collect();
    let mut local = covered.clone();
    let before = local.count_ones(..);
    let mut picks = Vec::with_capacity(k);
    let mut scores = Vec::with_capacity(pool.len());
    for _ in 0..k.min(pool.len()) {
        scores.clear();
        scores.extend(
            pool.iter()
                .map(|&s| system.set(s).difference_count(&local) as f64),
        );
        let i = exponential_choice(&scores, weight, noise)?;
        let id = pool.remove(i);
        local.union_with(system.set(id));
        picks.push(id);
    }
    Ok((picks, local.count_ones(..) - before))
}

fn expected_on_residual(
    system: &SetSystem,
    covered: &FixedBitSet,
    available: &[bool],
    k: usize,
    budget: PrivacyBudget,
    noise: &mut NoiseSource,
) -> Result<MaxCoverOutcome> {
    let mut ledger = PrivacyLedger::new();
    if k == 0 {
        return Ok(MaxCoverOutcome {
            sets: Vec::new(),
            coverage: 0,
            ledger,
        });
    }
    let weight = expected_epsilon0(budget) / k as f64;
    let (sets, coverage) = greedy_on_residual(system, covered, available, k, weight, noise)?;
    ledger.charge("max cover", budget);
    Ok(MaxCoverOutcome {
        sets,
        coverage,
        ledger,
    })
}

fn amplified_on_residual(
    system: &SetSystem,
    covered: &FixedBitSet,
    available: &[bool],
    k: usize,
    budget: PrivacyBudget,
    noise: &mut NoiseSource,
) -> Result<MaxCoverOutcome> {
    let repeats = amplification_repeats(system.n());
    let per_repeat = budget.split(repeats);
    let mut ledger = PrivacyLedger::new();
    let mut candidates = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let run = expected_on_residual(system, covered, available, k, per_repeat, noise)?;
        ledger.absorb(run.ledger);
        candidates.push((run.sets, run.coverage));
    }
    // coverage has sensitivity 1: weight ε / 2
    let scores: Vec<f64> = candidates.iter().map(|(_, c)| *c as f64).collect();
    let best = exponential_choice(&scores, budget.epsilon() / 2.0, noise)?;
    ledger.charge(
        "max cover selection",
        PrivacyBudget::new(budget.epsilon(), 0.0)?,
    );
    let (sets, coverage) = candidates.swap_remove(best);
    Ok(MaxCoverOutcome {
        sets,
        coverage,
        ledger,
    })
}

/// Private maximum coverage with a guarantee in expectation.
/// Spends `budget`.
pub fn dp_max_cover_expected(
    system: &SetSystem,
    k: usize,
    budget: PrivacyBudget,
    noise: &mut NoiseSource,
) -> Result<MaxCoverOutcome> {
    check_max_cover_args(system, k, budget)?;
    let available = vec![true; system.m()];
    expected_on_residual(system, &system.empty_cover(), &available, k, budget, noise)
}

/// Private maximum coverage amplified to hold with high probability.
/// Spends `(2ε, δ)`: `T` repeats share `(ε, δ)` evenly and the final
/// selection costs `ε`.
pub fn dp_max_cover_amplified(
    system: &SetSystem,
    k: usize,
    budget: PrivacyBudget,
    noise: &mut NoiseSource,
) -> Result<MaxCoverOutcome> {
    check_max_cover_args(system, k, budget)?;
    let available = vec![true; system.m()];
    amplified_on_residual(system, &system.empty_cover(), &available, k, budget, noise)
}

/// Fixed parameters of one binary-search run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxCovPlan {
    pub n: usize,
    pub rho: CoverRequirement,
    pub budget: PrivacyBudget,
    /// Largest admissible guess, `⌊C (1 - ρ/2) n ε₀ / ln³ n⌋`.
    pub upper: usize,
    /// Amplified runs per guess, `⌈log_0.85(1 - ρ′)⌉` with `ρ′ = (ρ+1)/2`.
    pub rounds: usize,
    /// Binary-search steps, `⌈log₂(upper + 1)⌉`; every run takes exactly
    /// this many.
    pub steps: usize,
    /// Per-round `ε′ = ε / (rounds · steps)`.
    pub epsilon_prime: f64,
    /// Per-round `δ′ = δ / (rounds · steps)`.
    pub delta_prime: f64,
}

/// `⌈log_0.85(1 - ρ′)⌉` with `ρ′ = (ρ + 1) / 2`.
pub fn rounds_per_guess(rho: CoverRequirement) -> usize {
    let rho_prime = (rho.rho() + 1.0) / 2.0;
    let t = ((1.0 - rho_prime).ln() / (1.0 - AMPLIFIED_RATIO).ln()).ceil();
    (t as usize).max(1)
}

impl MaxCovPlan {
    pub fn new(n: usize, rho: CoverRequirement, budget: PrivacyBudget) -> Result<Self> {
        if n < 2 {
            return Err(Error::Regime("the max-coverage route needs n >= 2".into()));
        }
        if budget.delta() <= 0.0 {
            return invalid("the max-coverage route needs delta > 0");
        }
        let ln_n = (n as f64).ln();
        let eps0 = amplified_epsilon0(budget, n);
        let upper_real =
            amplification_constant() * (1.0 - rho.rho() / 2.0) * n as f64 * eps0 / ln_n.powi(3);
        if upper_real.is_nan() || upper_real < 1.0 {
            return Err(Error::Regime(format!(
                "largest admissible optimum guess is {upper_real:.3e} < 1 (n = {n}, eps = {}); \
                 use the greedy solver for this instance",
                budget.epsilon()
            )));
        }
        let upper = upper_real.floor() as usize;
        let rounds = rounds_per_guess(rho);
        let steps = (usize::BITS - upper.leading_zeros()) as usize; // ⌈log₂(upper + 1)⌉
        let slots = (rounds * steps) as f64;
        Ok(MaxCovPlan {
            n,
            rho,
            budget,
            upper,
            rounds,
            steps,
            epsilon_prime: budget.epsilon() / slots,
            delta_prime: budget.delta() / slots,
        })
    }
}

/// One evaluated guess of the optimum size.
#[derive(Debug, Clone)]
pub struct GuessRun {
    /// Size parameter actually used (the guess clamped to `upper`).
    pub guess: usize,
    pub sets: Vec<usize>,
    pub coverage: usize,
    /// `γ̂ = γ + ln(n)/ε′ + Lap(1/ε′)`.
    pub noisy_coverage: f64,
    pub accepted: bool,
    pub ledger: PrivacyLedger,
}

/// Runs `plan.rounds` amplified max-coverage calls with budget `guess` on the
/// shrinking residual instance and tests the noisy coverage against `ρn`.
///
/// Each call receives `(ε′/2, δ′)` so that it spends `(ε′, δ′)`; the noisy
/// count is charged `rounds · ε′`. A guess therefore spends
/// `(2ε/steps, δ/steps)`, or less when every set is taken before the last
/// round and the remaining calls are skipped.
pub fn evaluate_guess(
    system: &SetSystem,
    plan: &MaxCovPlan,
    guess: usize,
    noise: &mut NoiseSource,
) -> Result<GuessRun> {
    let guess = guess.clamp(1, plan.upper);
    let call_budget = PrivacyBudget::new(plan.epsilon_prime / 2.0, plan.delta_prime)?;
    let mut ledger = PrivacyLedger::new();
    let mut covered = system.empty_cover();
    let mut available = vec![true; system.m()];
    let mut sets = Vec::new();
    for _ in 0..plan.rounds {
        if !available.iter().any(|&a| a) {
            break;
        }
        let run = amplified_on_residual(system, &covered, &available, guess, call_budget, noise)?;
        ledger.absorb(run.ledger);
        for &s in &run.sets {
            available[s] = false;
            covered.union_with(system.set(s));
        }
        sets.extend(run.sets);
    }
    let coverage = covered.count_ones(..);
    let eps = plan.epsilon_prime;
    let noisy_coverage = coverage as f64 + (plan.n as f64).ln() / eps + laplace(1.0 / eps, noise)?;
    ledger.charge(
        "noisy coverage",
        PrivacyBudget::new(plan.rounds as f64 * eps, 0.0)?,
    );
    let accepted = noisy_coverage >= plan.rho.fraction_of(plan.n);
    Ok(GuessRun {
        guess,
        sets,
        coverage,
        noisy_coverage,
        accepted,
        ledger,
    })
}

#[derive(Debug, Clone)]
pub struct MaxCovCoverOutcome {
    /// The solution for the smallest accepted guess, or for the largest
    /// guess when none was accepted.
    pub sets: Vec<usize>,
    pub coverage: usize,
    /// Smallest accepted guess (clamped to `upper`).
    pub opt_guess: Option<usize>,
    pub plan: MaxCovPlan,
    /// Every evaluated guess in search order.
    pub trace: Vec<GuessRun>,
    pub ledger: PrivacyLedger,
}

/// Private pseudo-approximate Partial Set Cover by binary search over the
/// optimum size.
///
/// The search runs over `{1, …, 2^steps − 1}` with guesses above `upper`
/// evaluated at `upper`, so it always takes exactly `steps` evaluations and
/// spends exactly `(2ε, δ)`.
pub fn partial_cover_via_maxcov(
    system: &SetSystem,
    rho: CoverRequirement,
    budget: PrivacyBudget,
    noise: &mut NoiseSource,
) -> Result<MaxCovCoverOutcome> {
    if system.m() == 0 {
        return invalid("the set system has no sets");
    }
    let plan = MaxCovPlan::new(system.n(), rho, budget)?;
    // boundary search: lo is a rejected (or virtual) guess, hi an accepted one
    let (mut lo, mut hi) = (0usize, 1usize << plan.steps);
    let mut trace = Vec::with_capacity(plan.steps);
    let mut ledger = PrivacyLedger::new();
    let mut best: Option<usize> = None;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let run = evaluate_guess(system, &plan, mid, noise)?;
        ledger.absorb(run.ledger.clone());
        if run.accepted {
            hi = mid;
            best = Some(trace.len());
        } else {
            lo = mid;
        }
        trace.push(run);
    }
    let pick = best.unwrap_or_else(|| {
        // largest evaluated guess
        (0..trace.len())
            .max_by_key(|&i| trace[i].guess)
            .expect("at least one step")
    });
    let chosen = &trace[pick];
    Ok(MaxCovCoverOutcome {
        sets: chosen.sets.clone(),
        coverage: chosen.coverage,
        opt_guess: best.map(|i| trace[i].guess),
        plan,
        trace,
        ledger,
    })
}

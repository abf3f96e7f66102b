//! Private greedy Partial Set Cover.
//!
//! The solver orders all sets by repeatedly applying the exponential
//! mechanism to the marginal gains (weight `ε′ = ε / (2 ln(e/δ))`), then picks
//! the prefix length with offline AboveThreshold against
//! `T = ρn + 12 ln(m) / ε`. The permutation costs `(ε, δ)` and the threshold
//! `(ε, 0)`, so a run spends `(2ε, δ)`.

use log::debug;

use crate::error::{invalid, Result};
use crate::mechanisms::{above_threshold_offline, exponential_choice, NoiseSource, PrivacyLedger};
use crate::model::{CoverRequirement, PartialCoverSolution, PrivacyBudget, SetSystem};

/// Derived parameters of one solver run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyParams {
    budget: PrivacyBudget,
}

impl GreedyParams {
    /// Requires `δ > 0`; the permutation weight degenerates at `δ = 0`.
    pub fn new(budget: PrivacyBudget) -> Result<Self> {
        if budget.delta() <= 0.0 {
            return invalid("the private greedy permutation needs delta > 0");
        }
        Ok(GreedyParams { budget })
    }

    pub fn budget(&self) -> PrivacyBudget {
        self.budget
    }

    /// `ε′ = ε / (2 ln(e/δ))`.
    pub fn epsilon_prime(&self) -> f64 {
        self.budget.epsilon() / (2.0 * (1.0 - self.budget.delta().ln()))
    }

    /// `12 ln(m) / ε`.
    pub fn threshold_slack(&self, m: usize) -> f64 {
        12.0 * (m as f64).ln() / self.budget.epsilon()
    }

    /// `T = ρn + 12 ln(m) / ε`.
    pub fn threshold(&self, rho: CoverRequirement, n: usize, m: usize) -> f64 {
        rho.fraction_of(n) + self.threshold_slack(m)
    }

    /// Upper end of the coverage window, `ρn + 24 ln(m) / ε`.
    pub fn window_top(&self, rho: CoverRequirement, n: usize, m: usize) -> f64 {
        rho.fraction_of(n) + 2.0 * self.threshold_slack(m)
    }
}

/// Conditions under which a run is still performed but the utility
/// guarantee does not apply.
#[derive(Debug, Clone, PartialEq)]
pub enum GreedyWarning {
    /// `ε ∉ (0, 1)`.
    EpsilonOutsideGuarantee(f64),
    /// `δ ≥ 1/e`.
    DeltaTooLarge(f64),
    /// `ρn + 24 ln(m)/ε > n`: the coverage window cannot be met.
    WindowUnsatisfiable { window_top: f64, n: usize },
    /// Some elements belong to no set.
    Uncoverable { uncovered: usize },
}

impl std::fmt::Display for GreedyWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GreedyWarning::EpsilonOutsideGuarantee(e) => {
                write!(f, "epsilon {e} is outside the proven range (0, 1)")
            }
            GreedyWarning::DeltaTooLarge(d) => write!(f, "delta {d} is at least 1/e"),
            GreedyWarning::WindowUnsatisfiable { window_top, n } => {
                write!(
                    f,
                    "threshold window reaches {window_top:.2} but only {n} elements exist"
                )
            }
            GreedyWarning::Uncoverable { uncovered } => {
                write!(f, "{uncovered} elements belong to no set")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct GreedyCoverOutcome {
    pub solution: PartialCoverSolution,
    /// `|π_1 ∪ … ∪ π_k|`.
    pub coverage: usize,
    /// `f_i` for every prefix of the permutation.
    pub prefix_coverage: Vec<usize>,
    /// No index crossed the noisy threshold; `k = m` was returned.
    pub exhausted: bool,
    pub threshold: f64,
    pub warnings: Vec<GreedyWarning>,
    pub ledger: PrivacyLedger,
}

/// Orders all `m` sets, choosing each next set with probability
/// proportional to `exp(ε′ · |S \ covered|)`.
pub fn private_greedy_permutation(
    system: &SetSystem,
    epsilon_prime: f64,
    noise: &mut NoiseSource,
) -> Result<Vec<usize>> {
    let m = system.m();
    if m == 0 {
        return invalid("the set system has no sets");
    }
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut covered = system.empty_cover();
    let mut order = Vec::with_capacity(m);
    let mut saturated = false;
    let mut scores = Vec::with_capacity(m);
    while !remaining.is_empty() {
        scores.clear();
        if saturated {
            scores.resize(remaining.len(), 0.0);
        } else {
            scores.extend(
                remaining
                    .iter()
                    .map(|&s| system.set(s).difference_count(&covered) as f64),
            );
            saturated = scores.iter().all(|&g| g == 0.0);
        }
        let pick = exponential_choice(&scores, epsilon_prime, noise)?;
        let id = remaining.remove(pick);
        covered.union_with(system.set(id));
        order.push(id);
    }
    Ok(order)
}

/// Private Partial Set Cover by greedy permutation and private threshold.
///
/// When no prefix crosses the noisy threshold the whole permutation is
/// returned (`k = m`) with `exhausted` set.
pub fn partial_set_cover_greedy(
    system: &SetSystem,
    rho: CoverRequirement,
    budget: PrivacyBudget,
    noise: &mut NoiseSource,
) -> Result<GreedyCoverOutcome> {
    let params = GreedyParams::new(budget)?;
    let (n, m) = (system.n(), system.m());
    let mut warnings = Vec::new();
    if budget.epsilon() >= 1.0 {
        warnings.push(GreedyWarning::EpsilonOutsideGuarantee(budget.epsilon()));
    }
    if budget.delta() >= (-1.0f64).exp() {
        warnings.push(GreedyWarning::DeltaTooLarge(budget.delta()));
    }
    let window_top = params.window_top(rho, n, m);
    if window_top > n as f64 {
        warnings.push(GreedyWarning::WindowUnsatisfiable { window_top, n });
    }
    let uncovered = n - system.union_all().count_ones(..);
    if uncovered > 0 {
        warnings.push(GreedyWarning::Uncoverable { uncovered });
    }
    for w in &warnings {
        debug!("greedy partial cover: {w}");
    }

    let permutation = private_greedy_permutation(system, params.epsilon_prime(), noise)?;
    let prefix_coverage = system.prefix_coverage(&permutation)?;
    let threshold = params.threshold(rho, n, m);
    let crossing = above_threshold_offline(&prefix_coverage, threshold, budget.epsilon(), noise)?;
    let (k, exhausted) = match crossing {
        Some(k) => (k, false),
        None => (m, true),
    };

    let mut ledger = PrivacyLedger::new();
    ledger.charge("greedy permutation", budget);
    ledger.charge(
        "above threshold",
        PrivacyBudget::new(budget.epsilon(), 0.0)?,
    );

    Ok(GreedyCoverOutcome {
        coverage: prefix_coverage[k - 1],
        solution: PartialCoverSolution { permutation, k },
        prefix_coverage,
        exhausted,
        threshold,
        warnings,
        ledger,
    })
}

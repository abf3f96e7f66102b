//! Private facility location for k-supplier with outliers (mobile vaccine
//! clinics) by binary search on the radius.
//!
//! Each round guesses `R`, builds the radius set system and runs the private
//! greedy Partial Set Cover with `(ε′, δ′)`. A round whose cover needs more
//! than `α·k` facilities pushes the search outward. The answer is the cover
//! of the smallest accepted radius, chosen by post-processing.

use crate::error::{invalid, Result};
use crate::greedy_cover::partial_set_cover_greedy;
use crate::mechanisms::{NoiseSource, PrivacyLedger};
use crate::model::{CoverRequirement, FacilitySolution, PrivacyBudget, SetSystem, VaccInstance};
use crate::oracle::greedy_partial_cover;

/// Constant `B` in the theoretical multiplier
/// `α = B · ln(m)² · ln(1/δ′) / (ε′ (1 − ρ))`.
///
/// Frozen from the pilot in `examples/calibrate_alpha.rs`: the largest
/// observed ratio of solution size to `ln(m)² ln(1/δ) / (ε (1 − ρ)) · OPT`
/// over 30 random instances (n = 60, m = 12, density 0.2, ρ = 0.6, ε = 2,
/// δ = 1e-6, 20 runs each) was 0.0422, rounded up to 0.043.
pub const DEFAULT_ALPHA_CONSTANT: f64 = 0.043;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMode {
    /// `α = 1`: never open more than `k` facilities.
    Heuristic,
    /// The bicriteria multiplier with calibration constant `B`.
    Theoretical { constant: f64 },
}

impl AlphaMode {
    pub fn theoretical() -> Self {
        AlphaMode::Theoretical {
            constant: DEFAULT_ALPHA_CONSTANT,
        }
    }
}

/// Budget multiplier `α(ε′, δ′)`. `num_sets` is `m`, taken as a real so the
/// formula can be evaluated at non-integer points.
pub fn alpha_bound(
    epsilon_prime: f64,
    delta_prime: f64,
    num_sets: f64,
    rho: f64,
    mode: AlphaMode,
) -> f64 {
    match mode {
        AlphaMode::Heuristic => 1.0,
        AlphaMode::Theoretical { constant } => {
            let ln_m = num_sets.ln();
            constant * ln_m * ln_m * (1.0 / delta_prime).ln() / (epsilon_prime * (1.0 - rho))
        }
    }
}

/// Number of halvings of `[0, 1]` until its width is at most `gamma`,
/// i.e. `⌈log₂(1/γ)⌉`.
pub fn search_rounds(gamma: f64) -> usize {
    let (mut width, mut rounds) = (1.0f64, 0);
    while width > gamma {
        width /= 2.0;
        rounds += 1;
    }
    rounds
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClientCoverParams {
    pub k: usize,
    pub rho: CoverRequirement,
    pub gamma: f64,
    pub budget: PrivacyBudget,
    pub alpha_mode: AlphaMode,
}

impl ClientCoverParams {
    pub fn new(
        k: usize,
        rho: CoverRequirement,
        gamma: f64,
        budget: PrivacyBudget,
        alpha_mode: AlphaMode,
    ) -> Result<Self> {
        if k == 0 {
            return invalid("facility budget k must be at least 1");
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return invalid(format!("gamma must lie in (0, 1), got {gamma}"));
        }
        if let AlphaMode::Theoretical { constant } = alpha_mode {
            if !(constant > 0.0 && constant.is_finite()) {
                return invalid(format!("alpha constant must be positive, got {constant}"));
            }
        }
        Ok(ClientCoverParams {
            k,
            rho,
            gamma,
            budget,
            alpha_mode,
        })
    }

    pub fn rounds(&self) -> usize {
        search_rounds(self.gamma)
    }

    /// Per-round `(ε′, δ′)`: the budget split evenly over the rounds.
    pub fn round_budget(&self) -> PrivacyBudget {
        self.budget.split(self.rounds())
    }

    pub fn alpha(&self, num_locations: usize) -> f64 {
        let b = self.round_budget();
        alpha_bound(
            b.epsilon(),
            b.delta(),
            num_locations as f64,
            self.rho.rho(),
            self.alpha_mode,
        )
    }
}

/// One radius guess.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub radius: f64,
    /// `F_R`, ascending.
    pub facilities: Vec<usize>,
    pub accepted: bool,
    /// The partial-cover call found no threshold and returned every set.
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClientCoverResult {
    Solved(FacilitySolution),
    /// No round met `|F_R| ≤ α·k`; `best` is the round with the fewest
    /// facilities (smallest radius on ties).
    Infeasible {
        best: RoundRecord,
    },
}

#[derive(Debug, Clone)]
pub struct ClientCoverOutcome {
    pub result: ClientCoverResult,
    pub rounds: Vec<RoundRecord>,
    pub alpha: f64,
    pub ledger: PrivacyLedger,
}

impl ClientCoverOutcome {
    pub fn solution(&self) -> Option<&FacilitySolution> {
        match &self.result {
            ClientCoverResult::Solved(s) => Some(s),
            ClientCoverResult::Infeasible { .. } => None,
        }
    }
}

/// Shared binary search: `cover` returns `F_R` (or `None` when no cover
/// exists) and whether the call was exhausted.
fn radius_search<F>(
    instance: &VaccInstance,
    gamma: f64,
    limit: f64,
    mut cover: F,
) -> Result<(ClientCoverResult, Vec<RoundRecord>)>
where
    F: FnMut(&SetSystem) -> Result<(Option<Vec<usize>>, bool)>,
{
    let service = instance.service_distances();
    let (mut low, mut high) = (0.0f64, 1.0f64);
    let mut rounds = Vec::new();
    while high - low > gamma {
        let radius = (high + low) / 2.0;
        let system = service.radius_sets(radius);
        let (facilities, exhausted) = cover(&system)?;
        let accepted = facilities.as_ref().is_some_and(|f| f.len() as f64 <= limit);
        if accepted {
            high = radius;
        } else {
            low = radius;
        }
        let mut facilities = facilities.unwrap_or_default();
        facilities.sort_unstable();
        rounds.push(RoundRecord {
            radius,
            facilities,
            accepted,
            exhausted,
        });
    }
    let solved = rounds
        .iter()
        .filter(|r| r.accepted)
        .min_by(|a, b| a.radius.total_cmp(&b.radius));
    let result = match solved {
        Some(r) => ClientCoverResult::Solved(FacilitySolution {
            facilities: r.facilities.clone(),
            radius: r.radius,
            budget_multiplier_used: limit,
        }),
        None => {
            let best = rounds
                .iter()
                .filter(|r| !r.facilities.is_empty())
                .min_by(|a, b| {
                    a.facilities
                        .len()
                        .cmp(&b.facilities.len())
                        .then(a.radius.total_cmp(&b.radius))
                })
                .or(rounds.first())
                .cloned()
                .expect("gamma < 1 gives at least one round");
            ClientCoverResult::Infeasible { best }
        }
    };
    Ok((result, rounds))
}

/// Private bicriteria solver. Spends `(2ε, δ)`: each of the
/// `⌈log₂(1/γ)⌉` rounds runs the greedy cover with `(ε′, δ′)`, which costs
/// `(2ε′, δ′)`.
pub fn dp_client_cover(
    instance: &VaccInstance,
    params: &ClientCoverParams,
    noise: &mut NoiseSource,
) -> Result<ClientCoverOutcome> {
    let round_budget = params.round_budget();
    let alpha = params.alpha(instance.num_locations());
    let limit = alpha * params.k as f64;
    let mut ledger = PrivacyLedger::new();
    let (result, rounds) = radius_search(instance, params.gamma, limit, |system| {
        let out = partial_set_cover_greedy(system, params.rho, round_budget, noise)?;
        ledger.absorb(out.ledger);
        Ok((Some(out.solution.chosen().to_vec()), out.exhausted))
    })?;
    for r in &rounds {
        log::debug!(
            "radius {:.6}: |F_R| = {} {}",
            r.radius,
            r.facilities.len(),
            if r.accepted { "accepted" } else { "rejected" }
        );
    }
    Ok(ClientCoverOutcome {
        result,
        rounds,
        alpha,
        ledger,
    })
}

/// Non-private baseline: the same radius search with the classical greedy
/// partial cover and acceptance at `|F_R| ≤ k`.
pub fn baseline_client_cover(
    instance: &VaccInstance,
    k: usize,
    rho: CoverRequirement,
    gamma: f64,
) -> Result<ClientCoverOutcome> {
    if k == 0 {
        return invalid("facility budget k must be at least 1");
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("gamma must lie in (0, 1), got {gamma}"));
    }
    let (result, rounds) = radius_search(instance, gamma, k as f64, |system| {
        Ok((greedy_partial_cover(system, rho).ok(), false))
    })?;
    Ok(ClientCoverOutcome {
        result,
        rounds,
        alpha: 1.0,
        ledger: PrivacyLedger::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Metric;

    #[test]
    fn heuristic_alpha_is_one() {
        for (e, d, m, r) in [(0.1, 1e-6, 10.0, 0.5), (4.0, 1e-3, 2.0, 0.9)] {
            assert_eq!(alpha_bound(e, d, m, r, AlphaMode::Heuristic), 1.0);
        }
    }

    #[test]
    fn theoretical_alpha_formula() {
        let unit = AlphaMode::Theoretical { constant: 1.0 };
        let a = alpha_bound(0.5, 1e-4, std::f64::consts::E, 0.0, unit);
        assert!((a - 1e4f64.ln() / 0.5).abs() < 1e-9);
        let m = AlphaMode::theoretical();
        let x = alpha_bound(0.2, 1e-6, 40.0, 0.7, m);
        let y = alpha_bound(0.4, 1e-6, 40.0, 0.7, m);
        assert!((x / y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn round_counts() {
        assert_eq!(search_rounds(1.0 / 1024.0), 10);
        assert_eq!(search_rounds(0.3), 2);
        assert_eq!(search_rounds(0.5), 1);
        assert_eq!(search_rounds(0.001), 10);
    }

    #[test]
    fn params_validation() {
        let rho = CoverRequirement::new(0.5).unwrap();
        let b = PrivacyBudget::new(1.0, 1e-6).unwrap();
        assert!(ClientCoverParams::new(0, rho, 0.1, b, AlphaMode::Heuristic).is_err());
        assert!(ClientCoverParams::new(1, rho, 1.0, b, AlphaMode::Heuristic).is_err());
        assert!(ClientCoverParams::new(1, rho, 0.0, b, AlphaMode::Heuristic).is_err());
        assert!(
            ClientCoverParams::new(1, rho, 0.1, b, AlphaMode::Theoretical { constant: 0.0 })
                .is_err()
        );
    }

    #[test]
    fn everyone_at_one_location() {
        // a single location: the threshold slack vanishes (ln 1 = 0)
        let inst = VaccInstance::new(Metric::Points(vec![[0.0, 0.0]]), vec![vec![0]; 8]).unwrap();
        let rho = CoverRequirement::new(0.5).unwrap();
        let b = PrivacyBudget::new(1.0, 1e-6).unwrap();
        let p = ClientCoverParams::new(1, rho, 1.0 / 1024.0, b, AlphaMode::Heuristic).unwrap();
        let out = dp_client_cover(&inst, &p, &mut NoiseSource::zero_noise()).unwrap();
        let sol = out.solution().unwrap();
        assert_eq!(sol.facilities, vec![0]);
        assert!(sol.radius <= 1.0 / 1024.0);
        assert_eq!(out.rounds.len(), 10);
        assert_eq!(
            inst.objective_percentile(&sol.facilities, rho).unwrap(),
            0.0
        );
    }

    #[test]
    fn baseline_two_cluster() {
        let inst = crate::oracle::gen_two_cluster_line();
        let rho = CoverRequirement::new(0.9).unwrap();
        let out = baseline_client_cover(&inst, 2, rho, 1.0 / 1024.0).unwrap();
        let sol = out.solution().unwrap();
        assert!(sol.facilities.len() <= 2);
        let obj = inst.objective_percentile(&sol.facilities, rho).unwrap();
        assert!(obj <= sol.radius);
    }
}

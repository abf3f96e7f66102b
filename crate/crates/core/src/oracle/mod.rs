//! Non-private baselines and exhaustive oracles.

mod generators;

use fixedbitset::FixedBitSet;

use crate::error::{invalid, Error, Result};
use crate::model::{CoverRequirement, SetSystem, VaccInstance};

pub use generators::{
    gen_psc_to_vacc, gen_random_set_system, gen_star_lower_bound, gen_star_with_extra_edges,
    gen_synthetic_mobility, gen_two_cluster_line, MobilityParams,
};

/// Largest `m` accepted by [`exact_partial_cover`].
pub const EXACT_COVER_MAX_SETS: usize = 24;

/// Largest number of facility subsets enumerated by [`exact_client_cover`].
pub const EXACT_CLIENT_MAX_SUBSETS: u128 = 1_000_000;

/// An optimum and a witness attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<V> {
    pub opt_value: V,
    pub witness: Vec<usize>,
    pub nodes_explored: u64,
}

fn check_coverable(system: &SetSystem, target: usize) -> Result<()> {
    let reachable = system.union_all().count_ones(..);
    if reachable < target {
        return Err(Error::Uncoverable { target, reachable });
    }
    Ok(())
}

/// Classical greedy: repeatedly take the set covering the most uncovered
/// elements (smallest id on ties) until `⌈ρn⌉` elements are covered.
pub fn greedy_partial_cover(system: &SetSystem, rho: CoverRequirement) -> Result<Vec<usize>> {
    let target = rho.target(system.n());
    check_coverable(system, target)?;
    let mut covered = system.empty_cover();
    let mut used = vec![false; system.m()];
    let mut chosen = Vec::new();
    let mut count = 0;
    while count < target {
        let (best, gain) = (0..system.m())
            .filter(|&s| !used[s])
            .map(|s| (s, system.set(s).difference_count(&covered)))
            .fold(
                (usize::MAX, 0),
                |acc, (s, g)| if g > acc.1 { (s, g) } else { acc },
            );
        debug_assert!(gain > 0, "coverable target must leave a positive gain");
        used[best] = true;
        covered.union_with(system.set(best));
        count += gain;
        chosen.push(best);
    }
    Ok(chosen)
}

struct CoverSearch<'a> {
    system: &'a SetSystem,
    target: usize,
    nodes: u64,
    stack: Vec<usize>,
}

impl CoverSearch<'_> {
    /// Looks for `remaining` more sets with ids `>= from` reaching the target.
    fn dfs(&mut self, covered: &FixedBitSet, count: usize, from: usize, remaining: usize) -> bool {
        self.nodes += 1;
        if count >= self.target {
            return true;
        }
        let m = self.system.m();
        if remaining == 0 || m - from < remaining {
            return false;
        }
        let gains: Vec<usize> = (from..m)
            .map(|s| self.system.set(s).difference_count(covered))
            .collect();
        let mut top = gains.clone();
        top.sort_unstable_by(|a, b| b.cmp(a));
        if count + top.iter().take(remaining).sum::<usize>() < self.target {
            return false;
        }
        for s in from..m {
            let g = gains[s - from];
            if g == 0 {
                continue;
            }
            let mut next = covered.clone();
            next.union_with(self.system.set(s));
            self.stack.push(s);
            if self.dfs(&next, count + g, s + 1, remaining - 1) {
                return true;
            }
            self.stack.pop();
        }
        false
    }
}

/// Minimum number of sets covering `⌈ρn⌉` elements, with the
/// lexicographically smallest optimal family as witness.
///
/// Families are tried by increasing size; within a size, a depth-first
/// search in id order prunes branches whose best possible coverage (current
/// coverage plus the largest remaining gains) falls short.
pub fn exact_partial_cover(
    system: &SetSystem,
    rho: CoverRequirement,
) -> Result<OracleResult<usize>> {
    if system.m() > EXACT_COVER_MAX_SETS {
        return Err(Error::TooLarge(format!(
            "m = {} exceeds {EXACT_COVER_MAX_SETS}",
            system.m()
        )));
    }
    let target = rho.target(system.n());
    check_coverable(system, target)?;
    let mut search = CoverSearch {
        system,
        target,
        nodes: 0,
        stack: Vec::new(),
    };
    for size in 0..=system.m() {
        if search.dfs(&system.empty_cover(), 0, 0, size) {
            return Ok(OracleResult {
                opt_value: search.stack.len(),
                witness: search.stack,
                nodes_explored: search.nodes,
            });
        }
    }
    unreachable!("a coverable target is met by all sets")
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Smallest `⌈ρn⌉`-th service cost over all `k`-subsets of locations, with
/// the lexicographically first optimal subset as witness.
pub fn exact_client_cover(
    instance: &VaccInstance,
    k: usize,
    rho: CoverRequirement,
) -> Result<OracleResult<f64>> {
    let l = instance.num_locations();
    if k == 0 || k > l {
        return invalid(format!("k must lie in [1, {l}], got {k}"));
    }
    let count = binomial(l, k);
    if count > EXACT_CLIENT_MAX_SUBSETS {
        return Err(Error::TooLarge(format!(
            "C({l}, {k}) = {count} subsets exceeds {EXACT_CLIENT_MAX_SUBSETS}"
        )));
    }
    let service = instance.service_distances();
    let people = instance.num_people();
    if people == 0 {
        return Ok(OracleResult {
            opt_value: 0.0,
            witness: (0..k).collect(),
            nodes_explored: 0,
        });
    }
    let rank = rho.target(people).clamp(1, people) - 1;

    struct Walk<'a> {
        service: &'a crate::model::ServiceDistances,
        l: usize,
        k: usize,
        rank: usize,
        best: f64,
        best_set: Vec<usize>,
        stack: Vec<usize>,
        nodes: u64,
        scratch: Vec<f64>,
    }
    impl Walk<'_> {
        fn go(&mut self, costs: &[f64], from: usize) {
            if self.stack.len() == self.k {
                self.nodes += 1;
                self.scratch.clear();
                self.scratch.extend_from_slice(costs);
                let (_, v, _) = self
                    .scratch
                    .select_nth_unstable_by(self.rank, f64::total_cmp);
                if *v < self.best {
                    self.best = *v;
                    self.best_set = self.stack.clone();
                }
                return;
            }
            let left = self.k - self.stack.len();
            for j in from..=self.l - left {
                let next: Vec<f64> = costs
                    .iter()
                    .enumerate()
                    .map(|(p, &c)| c.min(self.service.get(p, j)))
                    .collect();
                self.stack.push(j);
                self.go(&next, j + 1);
                self.stack.pop();
            }
        }
    }

    let mut walk = Walk {
        service: &service,
        l,
        k,
        rank,
        best: f64::INFINITY,
        best_set: Vec::new(),
        stack: Vec::with_capacity(k),
        nodes: 0,
        scratch: Vec::with_capacity(people),
    };
    walk.go(&vec![f64::INFINITY; people], 0);
    Ok(OracleResult {
        opt_value: walk.best,
        witness: walk.best_set,
        nodes_explored: walk.nodes,
    })
}

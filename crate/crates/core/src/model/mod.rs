//! Data model: set systems, coverage accounting, privacy budgets and the
//! facility-location instance.

mod format;
mod vacc;

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{invalid, Error, Result};

pub use format::{parse_set_system, parse_vacc_instance, write_set_system, write_vacc_instance};
pub use vacc::{Metric, ServiceDistances, VaccInstance};

/// A universe of `n` elements and `m` subsets of it, stored as one bit set
/// per subset.
///
/// The elements are the private data; set ids are public.
#[derive(Clone, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    sets: Vec<FixedBitSet>,
}

impl fmt::Debug for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (i, s) in self.sets.iter().enumerate() {
            list.entry(&i, &s.ones().collect::<Vec<_>>());
        }
        list.finish()?;
        write!(f, " (n = {})", self.n)
    }
}

impl SetSystem {
    /// Builds a set system from explicit membership lists.
    ///
    /// Element ids must be `< n` and may not repeat within one set.
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut bits = Vec::with_capacity(sets.len());
        for (id, members) in sets.into_iter().enumerate() {
            let mut b = FixedBitSet::with_capacity(n);
            for e in members {
                if e >= n {
                    return Err(Error::Validation(format!(
                        "set {id}: element {e} out of range (n = {n})"
                    )));
                }
                if b.put(e) {
                    return Err(Error::Validation(format!(
                        "set {id}: duplicate element {e}"
                    )));
                }
            }
            bits.push(b);
        }
        Ok(SetSystem { n, sets: bits })
    }

    pub(crate) fn from_bitsets(n: usize, sets: Vec<FixedBitSet>) -> Self {
        debug_assert!(sets.iter().all(|s| s.len() == n));
        SetSystem { n, sets }
    }

    /// Number of universe elements.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of sets.
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, id: usize) -> &FixedBitSet {
        &self.sets[id]
    }

    pub fn sets(&self) -> &[FixedBitSet] {
        &self.sets
    }

    /// Elements of set `id`, ascending.
    pub fn members(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.sets[id].ones()
    }

    pub fn set_len(&self, id: usize) -> usize {
        self.sets[id].count_ones(..)
    }

    /// An empty coverage state sized for this universe.
    pub fn empty_cover(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.n)
    }

    /// Union of every set.
    pub fn union_all(&self) -> FixedBitSet {
        let mut u = self.empty_cover();
        for s in &self.sets {
            u.union_with(s);
        }
        u
    }

    /// True when every element belongs to at least one set.
    pub fn is_coverable(&self) -> bool {
        self.union_all().count_ones(..) == self.n
    }

    fn check_id(&self, id: usize) -> Result<()> {
        if id >= self.m() {
            return invalid(format!("set id {id} out of range (m = {})", self.m()));
        }
        Ok(())
    }

    /// Size of the union of the chosen sets. Duplicated ids are harmless.
    pub fn coverage_count(&self, chosen: &[usize]) -> Result<usize> {
        let mut covered = self.empty_cover();
        for &id in chosen {
            self.check_id(id)?;
            covered.union_with(&self.sets[id]);
        }
        Ok(covered.count_ones(..))
    }

    /// `|S \ covered|` for every set `S`, indexed by set id.
    pub fn marginal_gains(&self, covered: &FixedBitSet) -> Result<Vec<usize>> {
        if covered.len() != self.n {
            return invalid(format!(
                "coverage state has {} bits, universe has {}",
                covered.len(),
                self.n
            ));
        }
        Ok(self
            .sets
            .iter()
            .map(|s| s.difference_count(covered))
            .collect())
    }

    /// Coverage after each prefix of `order`: entry `i` is
    /// `|order[0] ∪ … ∪ order[i]|`.
    pub fn prefix_coverage(&self, order: &[usize]) -> Result<Vec<usize>> {
        let mut covered = self.empty_cover();
        let mut out = Vec::with_capacity(order.len());
        for &id in order {
            self.check_id(id)?;
            covered.union_with(&self.sets[id]);
            out.push(covered.count_ones(..));
        }
        Ok(out)
    }

    /// Returns the neighbouring instance obtained by removing or adding one
    /// universe element together with its memberships.
    ///
    /// Removal renumbers the elements above the removed id down by one. An
    /// added element receives id `n`.
    pub fn neighbor_perturb(&self, change: &Perturbation) -> Result<SetSystem> {
        match change {
            Perturbation::Remove(u) => {
                let u = *u;
                if u >= self.n {
                    return invalid(format!("cannot remove element {u}: n = {}", self.n));
                }
                let n = self.n - 1;
                let sets = self
                    .sets
                    .iter()
                    .map(|s| {
                        let mut b = FixedBitSet::with_capacity(n);
                        for e in s.ones() {
                            match e.cmp(&u) {
                                std::cmp::Ordering::Less => b.insert(e),
                                std::cmp::Ordering::Greater => b.insert(e - 1),
                                std::cmp::Ordering::Equal => {}
                            }
                        }
                        b
                    })
                    .collect();
                Ok(SetSystem { n, sets })
            }
            Perturbation::Add { member_of } => {
                let n = self.n + 1;
                let mut sets: Vec<FixedBitSet> = self
                    .sets
                    .iter()
                    .map(|s| {
                        let mut b = s.clone();
                        b.grow(n);
                        b
                    })
                    .collect();
                for &id in member_of {
                    self.check_id(id)?;
                    if sets[id].put(self.n) {
                        return invalid(format!("set {id} listed twice for the added element"));
                    }
                }
                Ok(SetSystem { n, sets })
            }
        }
    }
}

/// A change producing a neighbouring set system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perturbation {
    Remove(usize),
    /// Adds a fresh element belonging to the listed sets.
    Add {
        member_of: Vec<usize>,
    },
}

/// Fraction `rho` of the universe that must be covered, `0 < rho < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverRequirement(f64);

impl CoverRequirement {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return invalid(format!(
                "covering requirement must lie in (0, 1), got {rho}"
            ));
        }
        Ok(CoverRequirement(rho))
    }

    pub fn rho(self) -> f64 {
        self.0
    }

    /// `rho * n` as a real number (used by the private thresholds).
    pub fn fraction_of(self, n: usize) -> f64 {
        self.0 * n as f64
    }

    /// Element-count target `⌈rho·n⌉`. Products within 1e-9 of an integer
    /// are snapped first so that e.g. `0.6 * 60` gives 36, not 37.
    pub fn target(self, n: usize) -> usize {
        let x = self.fraction_of(n);
        let r = x.round();
        if (x - r).abs() <= 1e-9 * x.max(1.0) {
            r as usize
        } else {
            x.ceil() as usize
        }
    }
}

/// An `(epsilon, delta)` pair with `epsilon > 0` and `0 <= delta < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyBudget {
    epsilon: f64,
    delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return invalid(format!(
                "epsilon must be positive and finite, got {epsilon}"
            ));
        }
        if !(0.0..1.0).contains(&delta) {
            return invalid(format!("delta must lie in [0, 1), got {delta}"));
        }
        Ok(PrivacyBudget { epsilon, delta })
    }

    pub fn epsilon(self) -> f64 {
        self.epsilon
    }

    pub fn delta(self) -> f64 {
        self.delta
    }

    /// Splits the budget evenly over `parts` mechanisms.
    pub fn split(self, parts: usize) -> PrivacyBudget {
        let p = parts.max(1) as f64;
        PrivacyBudget {
            epsilon: self.epsilon / p,
            delta: self.delta / p,
        }
    }

    /// Unchecked constructor for sums, which may leave `[0, 1)` in delta.
    pub(crate) fn raw(epsilon: f64, delta: f64) -> PrivacyBudget {
        PrivacyBudget { epsilon, delta }
    }
}

impl fmt::Display for PrivacyBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.epsilon, self.delta)
    }
}

/// Output of the private greedy solver: a full permutation of set ids and
/// the number `k` of leading sets taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCoverSolution {
    pub permutation: Vec<usize>,
    pub k: usize,
}

impl PartialCoverSolution {
    /// The chosen sets `permutation[..k]`.
    pub fn chosen(&self) -> &[usize] {
        &self.permutation[..self.k]
    }
}

/// Facilities opened by a facility-location solver.
#[derive(Debug, Clone, PartialEq)]
pub struct FacilitySolution {
    /// Location ids, ascending.
    pub facilities: Vec<usize>,
    /// Radius guess at which these facilities were produced.
    pub radius: f64,
    /// Multiplier `α` applied to the budget `k` when accepting a radius.
    pub budget_multiplier_used: f64,
}

//! Brute-force oracles written independently of the library code paths.
#![allow(dead_code)]

use dppc::{SetSystem, VaccInstance};

/// Membership as plain vectors, read back through the public API.
pub fn membership(system: &SetSystem) -> Vec<Vec<usize>> {
    (0..system.m())
        .map(|s| system.members(s).collect())
        .collect()
}

/// `|⋃ chosen|` by scanning every element against every chosen set.
pub fn scan_coverage(sets: &[Vec<usize>], n: usize, chosen: &[usize]) -> usize {
    (0..n)
        .filter(|e| chosen.iter().any(|&s| sets[s].contains(e)))
        .count()
}

/// `|S \ covered|` per set by direct set difference.
pub fn scan_gains(sets: &[Vec<usize>], covered: &[bool]) -> Vec<usize> {
    sets.iter()
        .map(|s| s.iter().filter(|&&e| !covered[e]).count())
        .collect()
}

/// Smallest number of sets covering at least `target` elements, by plain
/// enumeration of all families of each size in turn. No pruning.
pub fn subset_min_cover(sets: &[Vec<usize>], n: usize, target: usize) -> Option<usize> {
    (0..=sets.len()).find(|&k| best_k_coverage(sets, n, k) >= target)
}

/// Largest coverage achievable with exactly `k` sets, over every
/// `k`-combination.
pub fn best_k_coverage(sets: &[Vec<usize>], n: usize, k: usize) -> usize {
    let m = sets.len();
    if k == 0 || k > m {
        return 0;
    }
    let words = n.div_ceil(64);
    let masks: Vec<Vec<u64>> = sets
        .iter()
        .map(|s| {
            let mut w = vec![0u64; words];
            for &e in s {
                w[e / 64] |= 1 << (e % 64);
            }
            w
        })
        .collect();
    let mut best = 0;
    let mut idx: Vec<usize> = (0..k).collect();
    let mut union = vec![0u64; words];
    loop {
        union.iter_mut().for_each(|w| *w = 0);
        for &i in &idx {
            for (u, w) in union.iter_mut().zip(&masks[i]) {
                *u |= w;
            }
        }
        best = best.max(union.iter().map(|w| w.count_ones() as usize).sum());
        // next k-combination in lexicographic order
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return best;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `d(S_p, j)` straight from the pairwise distances.
pub fn service_cost(instance: &VaccInstance, p: usize, j: usize) -> f64 {
    instance
        .visits(p)
        .iter()
        .map(|&a| instance.distance(a, j))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest `r` such that some `⌈ρn⌉` people all have cost at most `r`,
/// by enumerating every person subset of that size.
pub fn percentile_by_subsets(costs: &[f64], target: usize) -> f64 {
    let n = costs.len();
    assert!(n <= 16);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != target {
            continue;
        }
        let worst = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| costs[i])
            .fold(0.0, f64::max);
        best = best.min(worst);
    }
    best
}

/// `R*` over all `k`-subsets of locations by direct enumeration.
pub fn client_cover_by_enumeration(instance: &VaccInstance, k: usize, target: usize) -> f64 {
    let l = instance.num_locations();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << l) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut costs: Vec<f64> = (0..instance.num_people())
            .map(|p| {
                (0..l)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| service_cost(instance, p, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        costs.sort_by(f64::total_cmp);
        best = best.min(costs[target - 1]);
    }
    best
}

/// Full classical greedy order (most new elements first, smallest id on
/// ties) over plain vectors.
pub fn classical_greedy_order(sets: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut covered = vec![false; n];
    let mut left: Vec<usize> = (0..sets.len()).collect();
    let mut order = Vec::new();
    while !left.is_empty() {
        let gains = left
            .iter()
            .map(|&s| sets[s].iter().filter(|&&e| !covered[e]).count());
        let (pos, _) = gains
            .enumerate()
            .fold((0, None), |best, (i, g)| match best.1 {
                Some(b) if b >= g => best,
                _ => (i, Some(g)),
            });
        let s = left.remove(pos);
        for &e in &sets[s] {
            covered[e] = true;
        }
        order.push(s);
    }
    order
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

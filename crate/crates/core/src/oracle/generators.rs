//! Instance generators: random set systems, the lower-bound constructions
//! and synthetic mobility data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Error, Result};
use crate::model::{Metric, SetSystem, VaccInstance};

/// Random set system where each element joins each set with probability
/// `density`; elements left in no set are then placed in one uniformly
/// random set, so the result is always coverable.
pub fn gen_random_set_system(n: usize, m: usize, density: f64, seed: u64) -> Result<SetSystem> {
    if m == 0 && n > 0 {
        return invalid("cannot cover a non-empty universe with no sets");
    }
    if !(0.0..=1.0).contains(&density) {
        return invalid(format!("density must lie in [0, 1], got {density}"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut sets = vec![Vec::new(); m];
    let mut hit = vec![false; n];
    for set in sets.iter_mut() {
        for (e, h) in hit.iter_mut().enumerate() {
            if rng.random_bool(density) {
                set.push(e);
                *h = true;
            }
        }
    }
    for (e, h) in hit.iter().enumerate() {
        if !h {
            let s = rng.random_range(0..m);
            sets[s].push(e);
        }
    }
    for s in sets.iter_mut() {
        s.sort_unstable();
    }
    SetSystem::new(n, sets)
}

/// Partial vertex cover on two stars of `n/2` vertices whose centres are
/// joined by an edge. Universe = edges, one set per vertex.
///
/// Vertex 0 and 1 are the centres; 2..n/2+1 are leaves of 0, the rest leaves
/// of 1. Edge 0 is the centre edge.
pub fn gen_star_lower_bound(n: usize) -> Result<SetSystem> {
    gen_star_with_extra_edges(n, 0)
}

/// The star construction plus `extra` leaf-to-leaf edges across the stars
/// (leaf `i` of the first star to leaf `i` of the second).
pub fn gen_star_with_extra_edges(n: usize, extra: usize) -> Result<SetSystem> {
    if n < 4 || n % 2 == 1 {
        return invalid(format!("star construction needs an even n >= 4, got {n}"));
    }
    let leaves = n / 2 - 1;
    if extra > leaves {
        return invalid(format!(
            "at most {leaves} extra edges fit, asked for {extra}"
        ));
    }
    let mut edges = vec![(0, 1)];
    edges.extend((0..leaves).map(|i| (0, 2 + i)));
    edges.extend((0..leaves).map(|i| (1, 2 + leaves + i)));
    edges.extend((0..extra).map(|i| (2 + i, 2 + leaves + i)));
    let mut sets = vec![Vec::new(); n];
    for (id, &(a, b)) in edges.iter().enumerate() {
        sets[a].push(id);
        sets[b].push(id);
    }
    SetSystem::new(edges.len(), sets)
}

/// Facility instance whose radius-0 solutions are exactly the partial set
/// covers of `system`: one location per set on the line, one person per
/// element visiting the locations of the sets that contain it.
pub fn gen_psc_to_vacc(system: &SetSystem) -> Result<VaccInstance> {
    if system.m() == 0 {
        return invalid("set system has no sets");
    }
    let mut visits = vec![Vec::new(); system.n()];
    for s in 0..system.m() {
        for e in system.members(s) {
            visits[e].push(s);
        }
    }
    if let Some(e) = visits.iter().position(Vec::is_empty) {
        return Err(Error::Validation(format!("element {e} belongs to no set")));
    }
    let points = (0..system.m()).map(|i| [i as f64, 0.0]).collect();
    VaccInstance::new(Metric::Points(points), visits)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityParams {
    pub people: usize,
    pub locations: usize,
    pub clusters: usize,
    /// Standard deviation of locations around their cluster centre, in the
    /// same units as the 10×10 square holding the centres.
    pub spread: f64,
    pub seed: u64,
}

/// Probability that a visit stays in the person's home cluster.
const HOME_BIAS: f64 = 0.8;

/// Synthetic mobility data: cluster centres in a 10×10 square, locations
/// scattered around them round-robin, each person visiting 1 to 5 locations
/// mostly in one home cluster.
///
/// When every location coincides, two unvisited sentinel locations one unit
/// apart are appended so the diameter is positive.
pub fn gen_synthetic_mobility(p: &MobilityParams) -> Result<VaccInstance> {
    if p.people == 0 || p.locations == 0 || p.clusters == 0 {
        return invalid("people, locations and clusters must all be positive");
    }
    if !(p.spread >= 0.0 && p.spread.is_finite()) {
        return invalid(format!("spread must be non-negative, got {}", p.spread));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(p.seed);
    let centres: Vec<[f64; 2]> = (0..p.clusters)
        .map(|_| [rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)])
        .collect();
    let jitter = Normal::new(0.0, 1.0).expect("unit normal");
    let mut points: Vec<[f64; 2]> = (0..p.locations)
        .map(|i| {
            let c = centres[i % p.clusters];
            [
                c[0] + p.spread * jitter.sample(&mut rng),
                c[1] + p.spread * jitter.sample(&mut rng),
            ]
        })
        .collect();

    let members: Vec<Vec<usize>> = (0..p.clusters)
        .map(|c| (c..p.locations).step_by(p.clusters).collect())
        .collect();
    let mut visits = Vec::with_capacity(p.people);
    for _ in 0..p.people {
        let home = rng.random_range(0..p.clusters);
        let want = rng.random_range(1..=5usize).min(p.locations);
        let mut v: Vec<usize> = Vec::with_capacity(want);
        for _ in 0..4 * want {
            if v.len() == want {
                break;
            }
            let pool = &members[home];
            let j = if !pool.is_empty() && rng.random_bool(HOME_BIAS) {
                pool[rng.random_range(0..pool.len())]
            } else {
                rng.random_range(0..p.locations)
            };
            if !v.contains(&j) {
                v.push(j);
            }
        }
        visits.push(v);
    }

    let first = points[0];
    if points.iter().all(|q| *q == first) {
        points.push(first);
        points.push([first[0] + 1.0, first[1]]);
    }
    VaccInstance::new(Metric::Points(points), visits)
}

/// Two clusters of three locations at the ends of a unit line with twelve
/// people each.
pub fn gen_two_cluster_line() -> VaccInstance {
    let xs = [0.0, 0.1, 0.2, 0.8, 0.9, 1.0];
    let patterns: [&[usize]; 6] = [&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2]];
    let mut visits = Vec::with_capacity(24);
    for offset in [0, 3] {
        for _ in 0..2 {
            for pat in patterns {
                visits.push(pat.iter().map(|j| j + offset).collect());
            }
        }
    }
    VaccInstance::new(
        Metric::Points(xs.iter().map(|&x| [x, 0.0]).collect()),
        visits,
    )
    .expect("fixture is valid")
}

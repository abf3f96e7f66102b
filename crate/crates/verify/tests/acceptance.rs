//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{
    best_k_coverage, classical_greedy_order, median, membership, scan_coverage, subset_min_cover,
};
use dppc::facility::{dp_client_cover, AlphaMode, ClientCoverParams, DEFAULT_ALPHA_CONSTANT};
use dppc::greedy_cover::{partial_set_cover_greedy, GreedyParams};
use dppc::maxcov_cover::{
    amplification_constant, amplified_epsilon0, dp_max_cover_amplified, dp_max_cover_expected,
    expected_epsilon0, partial_cover_via_maxcov,
};
use dppc::mechanisms::{child_seed, exponential_choice, laplace};
use dppc::model::{parse_set_system, Perturbation};
use dppc::oracle::{
    exact_client_cover, exact_partial_cover, gen_psc_to_vacc, gen_random_set_system,
    gen_star_lower_bound, gen_synthetic_mobility, gen_two_cluster_line, MobilityParams,
};
use dppc::{CoverRequirement, NoiseSource, PrivacyBudget, SetSystem};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rho(r: f64) -> CoverRequirement {
    CoverRequirement::new(r).unwrap()
}

fn budget(e: f64, d: f64) -> PrivacyBudget {
    PrivacyBudget::new(e, d).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/v1")
        .join(name)
}

fn coverage_window() -> Verdict {
    let (n, m, r, eps, delta) = (500, 100, rho(0.6), 1.0, 1e-6);
    let system = gen_random_set_system(n, m, 0.02, 1001).unwrap();
    let low = r.fraction_of(n);
    let high = low + 24.0 * (m as f64).ln() / eps;
    let runs = 500;
    let inside = (0..runs)
        .filter(|&t| {
            let mut noise = NoiseSource::seeded(child_seed(1002, t));
            let c = partial_set_cover_greedy(&system, r, budget(eps, delta), &mut noise)
                .unwrap()
                .coverage as f64;
            c >= low && c <= high
        })
        .count();
    let frac = inside as f64 / runs as f64;
    verdict(
        frac >= 0.9,
        format!("{frac:.3} of {runs} runs cover within [{low}, {high:.1}] (need >= 0.90)"),
    )
}

fn greedy_approximation() -> Verdict {
    let (n, m, r, eps, delta) = (60, 12, rho(0.6), 2.0, 1e-6f64);
    let ln_m = (m as f64).ln();
    let factor =
        DEFAULT_ALPHA_CONSTANT * ln_m * ln_m * (1.0 / delta).ln() / (eps * (1.0 - r.rho()));
    let mut ratios = Vec::new();
    for i in 0..30 {
        let system = gen_random_set_system(n, m, 0.2, child_seed(2001, i)).unwrap();
        let opt = subset_min_cover(&membership(&system), n, r.target(n)).unwrap();
        for t in 0..20 {
            let mut noise = NoiseSource::seeded(child_seed(child_seed(2002, i), t));
            let k = partial_set_cover_greedy(&system, r, budget(eps, delta), &mut noise)
                .unwrap()
                .solution
                .k;
            ratios.push(k as f64 / opt as f64);
        }
    }
    let med = median(&mut ratios);
    verdict(
        med <= factor,
        format!("median size / OPT = {med:.3}, bound B ln(m)^2 ln(1/delta) / (eps (1 - rho)) = {factor:.3} (B = {DEFAULT_ALPHA_CONSTANT})"),
    )
}

fn max_cover_expectation() -> Verdict {
    let (n, m, k, eps, delta) = (30, 12, 3, 4.0, 1e-6);
    let system = gen_random_set_system(n, m, 0.15, 3001).unwrap();
    let opt_k = best_k_coverage(&membership(&system), n, k) as f64;
    let eps0 = expected_epsilon0(budget(eps, delta));
    let bound = (1.0 - (-1.0f64).exp()) * opt_k - 2.0 * k as f64 * (n as f64).ln() / eps0;
    let runs = 500;
    let total: usize = (0..runs)
        .map(|t| {
            let mut noise = NoiseSource::seeded(child_seed(3002, t));
            dp_max_cover_expected(&system, k, budget(eps, delta), &mut noise)
                .unwrap()
                .coverage
        })
        .sum();
    let mean = total as f64 / runs as f64;
    verdict(
        mean >= bound,
        format!("mean coverage {mean:.2} vs bound {bound:.2} (OPT_k = {opt_k})"),
    )
}

fn amplification() -> Verdict {
    let (n, m, k, delta) = (30, 12, 3, 1e-6);
    let system = gen_random_set_system(n, m, 0.15, 3001).unwrap();
    let opt_k = best_k_coverage(&membership(&system), n, k) as f64;
    // smallest ε with k <= C ε₀ OPT_k / ln²(n); ε₀ is linear in ε
    let ln_n = (n as f64).ln();
    let eps0_per_eps = amplified_epsilon0(budget(1.0, delta), n);
    let eps = (k as f64 * ln_n * ln_n / (amplification_constant() * opt_k * eps0_per_eps)).ceil();
    let eps0 = amplified_epsilon0(budget(eps, delta), n);
    let in_regime = k as f64 <= amplification_constant() * eps0 / (ln_n * ln_n) * opt_k;
    let runs = 300;
    let good = (0..runs)
        .filter(|&t| {
            let mut noise = NoiseSource::seeded(child_seed(4001, t));
            let out = dp_max_cover_amplified(&system, k, budget(eps, delta), &mut noise).unwrap();
            out.coverage as f64 >= 0.15 * opt_k
        })
        .count();
    let frac = good as f64 / runs as f64;
    verdict(
        in_regime && frac >= 0.8,
        format!("{frac:.3} of {runs} runs cover >= 0.15 OPT_k (OPT_k = {opt_k}, eps = {eps} puts k in regime: {in_regime})"),
    )
}

fn client_cover_radius() -> Verdict {
    let instance = gen_two_cluster_line();
    let r = rho(0.9);
    let gamma = 1.0 / 1024.0;
    let star = exact_client_cover(&instance, 2, r).unwrap().opt_value;
    let params =
        ClientCoverParams::new(2, r, gamma, budget(4.0, 1e-6), AlphaMode::Heuristic).unwrap();
    let runs = 100;
    let mut solved = 0;
    let good = (0..runs)
        .filter(|&t| {
            let out = dp_client_cover(
                &instance,
                &params,
                &mut NoiseSource::seeded(child_seed(5001, t)),
            )
            .unwrap();
            out.solution().is_some_and(|s| {
                solved += 1;
                instance.objective_percentile(&s.facilities, r).unwrap() <= star + gamma
            })
        })
        .count();
    let frac = good as f64 / runs as f64;
    verdict(
        frac >= 0.8,
        format!("{frac:.3} of {runs} runs within R* + gamma (R* = {star}); {solved} runs found a feasible radius"),
    )
}

fn zero_noise_reductions() -> Verdict {
    let mut mismatches = 0;
    for i in 0..100 {
        let n = 20 + (i as usize % 5) * 10;
        let m = 5 + (i as usize % 7);
        let system = gen_random_set_system(n, m, 0.15, child_seed(6001, i)).unwrap();
        let r = rho(0.3 + 0.06 * (i % 10) as f64);
        let b = budget(0.5 + i as f64 * 0.1, 1e-6);
        let out = partial_set_cover_greedy(&system, r, b, &mut NoiseSource::zero_noise()).unwrap();
        let sets = membership(&system);
        let order = classical_greedy_order(&sets, n);
        let t = GreedyParams::new(b).unwrap().threshold(r, n, m);
        let k = (1..=m)
            .find(|&j| scan_coverage(&sets, n, &order[..j]) as f64 >= t)
            .unwrap_or(m);
        if out.solution.permutation != order || out.solution.k != k {
            mismatches += 1;
        }
    }
    let mut violations = 0;
    let mut accepted_total = 0;
    for seed in 0..20 {
        let instance = gen_synthetic_mobility(&MobilityParams {
            people: 300,
            locations: 8,
            clusters: 2,
            spread: 0.6,
            seed,
        })
        .unwrap();
        let params = ClientCoverParams::new(
            3,
            rho(0.6),
            1.0 / 256.0,
            budget(4.0, 1e-6),
            AlphaMode::Heuristic,
        )
        .unwrap();
        let out = dp_client_cover(&instance, &params, &mut NoiseSource::zero_noise()).unwrap();
        for a in out.rounds.iter().filter(|x| x.accepted) {
            accepted_total += 1;
            violations += out
                .rounds
                .iter()
                .filter(|b| b.radius > a.radius && !b.accepted)
                .count();
        }
    }
    verdict(
        mismatches == 0 && violations == 0 && accepted_total > 0,
        format!("{mismatches} greedy mismatches over 100 instances; {violations} up-closure violations over {accepted_total} accepted radii"),
    )
}

/// Every multiset of element membership patterns with `n` elements over `m`
/// sets, as set systems.
fn systems(n: usize, m: usize) -> Vec<SetSystem> {
    fn rec(n: usize, m: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<SetSystem>) {
        if acc.len() == n {
            let sets = (0..m)
                .map(|s| (0..n).filter(|&e| acc[e] >> s & 1 == 1).collect())
                .collect();
            out.push(SetSystem::new(n, sets).unwrap());
            return;
        }
        for p in min..1 << m {
            acc.push(p);
            rec(n, m, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, 0, &mut Vec::new(), &mut out);
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, m - 1);
            out.push(q);
        }
    }
    out
}

fn sensitivity() -> Verdict {
    let (mut pairs, mut worst_gain, mut worst_prefix) = (0u64, 0usize, 0usize);
    for m in 1..=4 {
        let perms = permutations(m);
        for n in 1..=6 {
            for big in systems(n, m) {
                let pattern = |e: usize| (0..m).map(|s| big.set(s).contains(e)).collect::<Vec<_>>();
                for u in 0..n {
                    // equal patterns give the same neighbour
                    if u > 0 && pattern(u) == pattern(u - 1) {
                        continue;
                    }
                    let small = big.neighbor_perturb(&Perturbation::Remove(u)).unwrap();
                    let member_of: Vec<usize> =
                        (0..m).filter(|&s| big.set(s).contains(u)).collect();
                    let regrown = small
                        .neighbor_perturb(&Perturbation::Add { member_of })
                        .unwrap();
                    for (x, y, moved) in [(&big, &small, Some(u)), (&regrown, &small, Some(n - 1))]
                    {
                        pairs += 1;
                        let mut cx = x.empty_cover();
                        let mut cy = y.empty_cover();
                        for state in 0u32..1 << n {
                            cx.clear();
                            cy.clear();
                            for e in (0..n).filter(|&e| state >> e & 1 == 1) {
                                cx.insert(e);
                                match moved {
                                    Some(v) if e == v => {}
                                    Some(v) if e > v => cy.insert(e - 1),
                                    _ => cy.insert(e),
                                }
                            }
                            let gx = x.marginal_gains(&cx).unwrap();
                            let gy = y.marginal_gains(&cy).unwrap();
                            for (a, b) in gx.iter().zip(&gy) {
                                worst_gain = worst_gain.max(a.abs_diff(*b));
                            }
                        }
                        for p in &perms {
                            let fx = x.prefix_coverage(p).unwrap();
                            let fy = y.prefix_coverage(p).unwrap();
                            for (a, b) in fx.iter().zip(&fy) {
                                worst_prefix = worst_prefix.max(a.abs_diff(*b));
                            }
                        }
                    }
                }
            }
        }
    }
    verdict(
        worst_gain <= 1 && worst_prefix <= 1,
        format!("{pairs} neighbour pairs; max gain difference {worst_gain}, max prefix-coverage difference {worst_prefix}"),
    )
}

fn mechanism_statistics() -> Verdict {
    let mut noise = NoiseSource::seeded(8001);
    let draws = 1_000_000;
    let (mut sum, mut tail) = (0.0, 0usize);
    let cut = 2.0 * 100f64.ln();
    for _ in 0..draws {
        let x = laplace(2.0, &mut noise).unwrap();
        sum += x;
        tail += (x.abs() > cut) as usize;
    }
    let mean = sum / draws as f64;
    let p_tail = tail as f64 / draws as f64;
    let laplace_ok = mean.abs() <= 0.02 && (p_tail - 0.01).abs() <= 0.003;

    let mut noise = NoiseSource::seeded(8002);
    let mut counts = [0usize; 2];
    for _ in 0..draws {
        counts[exponential_choice(&[0.0, 3.0], 1.0, &mut noise).unwrap()] += 1;
    }
    let ratio = counts[1] as f64 / counts[0] as f64;
    let ratio_ok = (ratio / 3f64.exp() - 1.0).abs() <= 0.05;

    let mut noise = NoiseSource::seeded(8003);
    let mut uniform = [0usize; 4];
    let samples = 100_000;
    for _ in 0..samples {
        uniform[exponential_choice(&[1.5; 4], 1.0, &mut noise).unwrap()] += 1;
    }
    let e = samples as f64 / 4.0;
    let chi2: f64 = uniform.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let uniform_ok = chi2 < 11.345;

    verdict(
        laplace_ok && ratio_ok && uniform_ok,
        format!(
            "Laplace mean {mean:.4}, tail {p_tail:.4}; choice ratio {ratio:.3} vs e^3 = {:.3}; uniform chi2 {chi2:.2}",
            3f64.exp()
        ),
    )
}

fn budget_ledgers() -> Verdict {
    let mut report = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, total: PrivacyBudget, eps: f64, delta: f64| {
        let de = (total.epsilon() - 2.0 * eps).abs();
        let dd = (total.delta() - delta).abs();
        ok &= de <= 1e-12 && dd <= 1e-12;
        report.push(format!(
            "{name} ({}, {}) err ({de:.1e}, {dd:.1e})",
            total.epsilon(),
            total.delta()
        ));
    };

    let system = gen_random_set_system(80, 15, 0.1, 9001).unwrap();
    let out = partial_set_cover_greedy(
        &system,
        rho(0.6),
        budget(0.7, 1e-6),
        &mut NoiseSource::seeded(9002),
    )
    .unwrap();
    check("greedy", out.ledger.total(), 0.7, 1e-6);

    let instance = gen_two_cluster_line();
    for gamma in [1.0 / 1024.0, 0.3] {
        let params =
            ClientCoverParams::new(2, rho(0.9), gamma, budget(4.0, 1e-6), AlphaMode::Heuristic)
                .unwrap();
        let out = dp_client_cover(&instance, &params, &mut NoiseSource::seeded(9003)).unwrap();
        check(
            &format!("client cover gamma={gamma}"),
            out.ledger.total(),
            4.0,
            1e-6,
        );
    }

    // the search needs n large enough for a guess of 1 to be admissible
    let n = 1_000_000;
    let sets: Vec<Vec<usize>> = (0..40)
        .map(|s| (s * n / 40..(s + 1) * n / 40).collect())
        .collect();
    let big = SetSystem::new(n, sets).unwrap();
    let out = partial_cover_via_maxcov(
        &big,
        rho(0.6),
        budget(8.0, 1e-6),
        &mut NoiseSource::seeded(9004),
    )
    .unwrap();
    check("max-coverage search", out.ledger.total(), 8.0, 1e-6);

    verdict(ok, report.join("; "))
}

fn lower_bound_fixtures() -> Verdict {
    let star_ok = (4..=20).step_by(2).all(|n| {
        let s = gen_star_lower_bound(n).unwrap();
        exact_partial_cover(&s, rho(0.5)).unwrap().opt_value == 1
    });
    let mut checked = 0;
    let mut broken = Vec::new();
    for m in 1..=10 {
        let name = format!("psc_m{m:02}.txt");
        let system = parse_set_system(&std::fs::read(fixture(&name)).unwrap()).unwrap();
        let instance = gen_psc_to_vacc(&system).unwrap();
        for r in [0.5, 0.7, 0.9] {
            let opt = exact_partial_cover(&system, rho(r)).unwrap().opt_value;
            for k in 1..=system.m() {
                checked += 1;
                let zero = exact_client_cover(&instance, k, rho(r)).unwrap().opt_value == 0.0;
                if zero != (k >= opt) {
                    broken.push(format!("{name} rho={r} k={k}"));
                }
            }
        }
    }
    verdict(
        star_ok && broken.is_empty(),
        format!("star opt = 1 for n in 4..=20: {star_ok}; {checked} reduction cases, mismatches {broken:?}"),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        (
            1,
            "coverage window",
            Duration::from_secs(60),
            coverage_window,
        ),
        (
            2,
            "greedy approximation",
            Duration::from_secs(120),
            greedy_approximation,
        ),
        (
            3,
            "max cover expectation",
            Duration::from_secs(60),
            max_cover_expectation,
        ),
        (
            4,
            "max cover amplification",
            Duration::from_secs(120),
            amplification,
        ),
        (
            5,
            "client cover radius",
            Duration::from_secs(60),
            client_cover_radius,
        ),
        (
            6,
            "zero-noise reductions",
            Duration::from_secs(30),
            zero_noise_reductions,
        ),
        (7, "sensitivity", Duration::from_secs(10), sensitivity),
        (
            8,
            "mechanism statistics",
            Duration::from_secs(60),
            mechanism_statistics,
        ),
        (9, "budget ledgers", Duration::from_secs(1), budget_ledgers),
        (
            10,
            "lower-bound fixtures",
            Duration::from_secs(30),
            lower_bound_fixtures,
        ),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let pass = v.pass && took < limit;
        println!(
            "criterion {id:>2} {name:<24} {} [{:.2}s / {}s] {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            v.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

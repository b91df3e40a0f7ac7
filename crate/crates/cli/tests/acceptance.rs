//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::path::{Path, PathBuf};
use std::process::Command;

use divergence_core::fixtures::{
    continuous_fixtures, discrete_corpus, discrete_fixtures, non_ac_fixtures, random_cell, random_non_ac_pair,
    random_partition, random_split, Fixture,
};
use divergence_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;
const ORDERS: [f64; 3] = [1.5, 2.0, 3.0];

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn fin(v: ExtendedReal) -> f64 {
    v.finite().unwrap_or(f64::NAN)
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn unit() -> ProbabilityMeasure {
    ProbabilityMeasure::uniform(0.0, 1.0).unwrap()
}

fn beta22() -> ProbabilityMeasure {
    ProbabilityMeasure::beta(2, 2).unwrap()
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_add(salt))
}

fn corpus() -> Vec<Fixture> {
    discrete_corpus(&mut rng(0), 200)
}

fn all_fixtures() -> Vec<Fixture> {
    let mut out = continuous_fixtures();
    out.extend(discrete_fixtures());
    out
}

fn union_base(f: &Fixture) -> ReferenceMeasure {
    f.p.base().union(f.r.base()).unwrap()
}

fn partition_value(f: &Fixture, part: &Partition, order: &OrderParam) -> f64 {
    let stats = partition_stats(&f.p, &f.r, part).unwrap();
    match order.order() {
        None => fin(partition_kl(&stats)),
        Some(a) => fin(partition_renyi(&stats, a).unwrap()),
    }
}

fn kl_and_renyi() -> Vec<OrderParam> {
    std::iter::once(OrderParam::kl())
        .chain(ORDERS.iter().map(|&a| OrderParam::renyi(a).unwrap()))
        .collect()
}

fn c1_discrete_oracle() -> Verdict {
    let cfg = RefinementConfig::default();
    let mut worst = 0.0f64;
    let mut not_singleton = 0;
    for f in corpus() {
        for order in kl_and_renyi() {
            let est = supremum_estimate(&f.p, &f.r, &order, &cfg).unwrap();
            if est.cells() != f.p.base().atoms().unwrap().len() {
                not_singleton += 1;
            }
            let direct = fin(divergence(&f.p, &f.r, &order, &quad()).unwrap());
            worst = worst.max((fin(est.lower_bound) - direct).abs());
        }
    }
    verdict(
        worst <= 1e-12 && not_singleton == 0,
        format!("200 pairs x 4 orders, max |sup - direct| = {worst:.3e}, non-singleton finals = {not_singleton}"),
    )
}

fn c2_simple_exactness() -> Verdict {
    let p = ProbabilityMeasure::uniform(0.0, 0.5).unwrap();
    let r = unit();
    let part = Partition::from_breakpoints(r.base(), &[0.5]).unwrap();
    let stats = partition_stats(&p, &r, &part).unwrap();
    let mut worst = 0.0f64;
    for a in [1.5, 2.0, 3.0, 5.0] {
        let v = fin(partition_renyi(&stats, a).unwrap());
        let oracle = fin(renyi_divergence(&p, &r, a, &quad()).unwrap());
        worst = worst.max((v - 2f64.ln()).abs()).max((v - oracle).abs());
    }
    verdict(worst <= 1e-12, format!("max deviation from ln 2 and oracle = {worst:.3e}"))
}

fn c3_beta_convergence() -> Verdict {
    let est = supremum_estimate(&beta22(), &unit(), &OrderParam::renyi(2.0).unwrap(), &RefinementConfig::default())
        .unwrap();
    let exact = 1.2f64.ln();
    let gap = exact - fin(est.lower_bound);
    let monotone = est
        .trace
        .steps
        .windows(2)
        .all(|w| w[1].partition_value.to_f64() >= w[0].partition_value.to_f64());
    verdict(
        (-1e-12..=1e-4).contains(&gap) && est.cells() <= 4096 && monotone,
        format!("gap to ln(6/5) = {gap:.3e} with {} cells, trace monotone = {monotone}", est.cells()),
    )
}

fn c4_holder() -> Verdict {
    let mut rng = rng(4);
    let mut fixtures = continuous_fixtures();
    fixtures.extend(discrete_fixtures());
    fixtures.extend(discrete_corpus(&mut rng, 20));
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let f = &fixtures[rng.gen_range(0..fixtures.len())];
        let cell = random_cell(&mut rng, &union_base(f));
        for a in ORDERS {
            let (lhs, rhs) = holder_cell_check(&f.p, &f.r, &cell, a, &quad()).unwrap();
            worst = worst.max(lhs - rhs);
            if lhs > rhs + 1e-9 {
                violations += 1;
            }
        }
    }
    // φ is constant on each of these regions
    let named = |name: &str| continuous_fixtures().into_iter().find(|f| f.name == name).unwrap();
    let flat = [
        (named("half-uniform"), Interval::new(0.0, 0.5)),
        (named("half-uniform"), Interval::new(0.5, 1.0)),
        (named("step-uniform"), Interval::new(0.0, 0.5)),
        (named("step-uniform"), Interval::new(0.5, 1.0)),
        (named("split-support"), Interval::new(2.0, 3.0)),
    ];
    let mut eq_worst = 0.0f64;
    for _ in 0..200 {
        let (f, region) = &flat[rng.gen_range(0..flat.len())];
        let (x, y) = (rng.gen_range(region.lo..region.hi), rng.gen_range(region.lo..region.hi));
        if x == y {
            continue;
        }
        let cell = Cell::interval(x.min(y), x.max(y));
        for a in ORDERS {
            let (lhs, rhs) = holder_cell_check(&f.p, &f.r, &cell, a, &quad()).unwrap();
            eq_worst = eq_worst.max((lhs - rhs).abs());
        }
    }
    verdict(
        violations == 0 && eq_worst <= 1e-10,
        format!("3000 checks, {violations} violations (max lhs - rhs = {worst:.3e}); constant-phi max |lhs - rhs| = {eq_worst:.3e}"),
    )
}

fn c5_lower_bound() -> Verdict {
    let mut rng = rng(5);
    let mut worst = f64::NEG_INFINITY;
    let fixtures = all_fixtures();
    for f in &fixtures {
        let base = union_base(f);
        let orders = kl_and_renyi();
        let oracles: Vec<f64> = orders
            .iter()
            .map(|o| fin(divergence(&f.p, &f.r, o, &quad()).unwrap()))
            .collect();
        for _ in 0..1000 {
            let part = random_partition(&mut rng, &base, 64);
            for (o, oracle) in orders.iter().zip(&oracles) {
                worst = worst.max(partition_value(f, &part, o) - oracle);
            }
        }
    }
    verdict(
        worst <= 1e-9,
        format!("{} fixtures x 1000 partitions x 4 orders, max excess over oracle = {worst:.3e}", fixtures.len()),
    )
}

fn c6_monotonicity() -> Verdict {
    let mut rng = rng(6);
    // discrete fixtures have too few atoms for twenty splits
    let fixtures = continuous_fixtures();
    let orders = kl_and_renyi();
    let mut worst_drop = 0.0f64;
    let mut steps = 0;
    for _ in 0..500 {
        let f = &fixtures[rng.gen_range(0..fixtures.len())];
        let mut part = Partition::trivial(&union_base(f));
        let mut prev: Vec<f64> = orders.iter().map(|o| partition_value(f, &part, o)).collect();
        for _ in 0..20 {
            let Some(next) = random_split(&mut rng, &part) else { break };
            let cur: Vec<f64> = orders.iter().map(|o| partition_value(f, &next, o)).collect();
            for (c, p) in cur.iter().zip(&prev) {
                worst_drop = worst_drop.max(p - c);
            }
            steps += 1;
            prev = cur;
            part = next;
        }
    }
    verdict(
        worst_drop <= 1e-12 && steps == 500 * 20,
        format!("500 chains, {steps} splits, max decrease = {worst_drop:.3e}"),
    )
}

fn c7_non_ac() -> Verdict {
    let mut rng = rng(7);
    let mut pairs = non_ac_fixtures();
    pairs.extend((0..20).map(|_| random_non_ac_pair(&mut rng, 12)));
    let mut bad = Vec::new();
    for f in &pairs {
        let est = supremum_estimate(&f.p, &f.r, &OrderParam::renyi(2.0).unwrap(), &RefinementConfig::default()).unwrap();
        let div = renyi_divergence(&f.p, &f.r, 2.0, &quad()).unwrap();
        let ok = match &est.witness {
            Some(w) => {
                let (pm, rm) = MeasurePair::new(&f.p, &f.r).unwrap().masses(w).unwrap();
                pm > 0.0 && rm == 0.0
            }
            None => false,
        };
        if !(ok && est.lower_bound == ExtendedReal::PosInf && div == ExtendedReal::PosInf) {
            bad.push(f.name.clone());
        }
    }
    verdict(bad.is_empty(), format!("{} pairs, failures: {bad:?}", pairs.len()))
}

fn c8_transform_limits_identities() -> Verdict {
    let mut fixtures = all_fixtures();
    fixtures.extend(corpus());
    let mut transform = 0.0f64;
    for f in &fixtures {
        for q in ORDERS {
            let ts = fin(tsallis_divergence(&f.p, &f.r, q, &quad()).unwrap());
            let via = fin(renyi_to_tsallis(renyi_divergence(&f.p, &f.r, q, &quad()).unwrap(), q).unwrap());
            transform = transform.max((ts - via).abs());
        }
    }
    let (mut lim3, mut lim4) = (0.0f64, 0.0f64);
    for f in corpus() {
        let kl = fin(kl_divergence(&f.p, &f.r, &quad()).unwrap());
        lim3 = lim3.max((fin(renyi_divergence(&f.p, &f.r, 1.001, &quad()).unwrap()) - kl).abs());
        lim4 = lim4.max((fin(renyi_divergence(&f.p, &f.r, 1.0001, &quad()).unwrap()) - kl).abs());
    }

    // identities with μ a probability measure: the entropy of P relative to μ
    // against the divergence of P from μ, as literally stated
    let (mut shannon, mut renyi_lit, mut tsallis_lit) = (0.0f64, 0.0f64, 0.0f64);
    let (mut renyi_neg, mut tsallis_neg) = (0.0f64, 0.0f64);
    for f in &fixtures {
        let s = fin(entropy_relative_to(&f.p, &f.r, &OrderParam::kl(), &quad()).unwrap());
        let i = fin(kl_divergence(&f.p, &f.r, &quad()).unwrap());
        shannon = shannon.max((s + i).abs());
        for a in ORDERS {
            for (order, lit, neg) in [
                (OrderParam::renyi(a).unwrap(), &mut renyi_lit, &mut renyi_neg),
                (OrderParam::tsallis(a).unwrap(), &mut tsallis_lit, &mut tsallis_neg),
            ] {
                let s = fin(entropy_relative_to(&f.p, &f.r, &order, &quad()).unwrap());
                let i = fin(divergence(&f.p, &f.r, &order, &quad()).unwrap());
                *lit = lit.max((s - i).abs());
                *neg = neg.max((s + i).abs());
            }
        }
    }
    let passed = transform <= 1e-10
        && lim3 <= 1e-2
        && lim4 <= 1e-3
        && shannon <= 1e-8
        && renyi_lit <= 1e-8
        && tsallis_lit <= 1e-8;
    verdict(
        passed,
        format!(
            "transform {transform:.3e}; |I_1.001 - KL| {lim3:.3e}; |I_1.0001 - KL| {lim4:.3e}; \
             S = -I {shannon:.3e}; S_a = I_a {renyi_lit:.3e}; S_q = I_q {tsallis_lit:.3e} \
             (with the sign of the Shannon case: S_a = -I_a {renyi_neg:.3e}, S_q = -I_q {tsallis_neg:.3e})"
        ),
    )
}

fn c9_quantization() -> Verdict {
    let fx = Fixture::new("beta22-uniform", beta22(), unit());
    let phi = rn_derivative(&fx.p, &fx.r).unwrap();
    let grid: Vec<f64> = (0..10_000).map(|i| i as f64 / 9_999.0).collect();
    let levels: Vec<SimpleFunction> = (1..=12).map(|n| quantize_rn_derivative(&phi, n).unwrap()).collect();
    let mut pointwise = 0.0f64;
    for n in 0..8 {
        for &x in &grid {
            let (a, b) = (levels[n].eval(x), levels[n + 1].eval(x));
            pointwise = pointwise.max(a - b).max(b - phi.at(x));
        }
    }
    let values: Vec<f64> = levels
        .iter()
        .map(|s| fin(simple_divergence(s, &fx.r, 2.0).unwrap()))
        .collect();
    let drop = values.windows(2).map(|w| w[0] - w[1]).fold(0.0f64, f64::max);
    let oracle = fin(renyi_divergence(&fx.p, &fx.r, 2.0, &quad()).unwrap());
    let gap12 = oracle - values[11];
    verdict(
        pointwise <= 0.0 && drop <= 0.0 && gap12.abs() <= 1e-4,
        format!("pointwise violation {pointwise:.3e}; max decrease in n {drop:.3e}; oracle - value at n=12 = {gap12:.3e}"),
    )
}

fn c10_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let run = |name: &str| -> Option<Vec<u8>> {
        let trace: PathBuf = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_divergence"))
            .args(["refine", "--family", "renyi", "--order", "2", "--p"])
            .arg(fixtures.join("beta22.json"))
            .arg("--r")
            .arg(fixtures.join("uniform01.json"))
            .arg("--trace")
            .arg(&trace)
            .output()
            .ok()?
            .status;
        status.success().then(|| std::fs::read(&trace).ok()).flatten()
    };
    match (run("a.csv"), run("b.csv")) {
        (Some(a), Some(b)) => verdict(a == b && !a.is_empty(), format!("{} and {} bytes, identical = {}", a.len(), b.len(), a == b)),
        _ => verdict(false, "refine did not produce a trace"),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("discrete oracle equivalence", c1_discrete_oracle),
        ("simple-ratio exactness", c2_simple_exactness),
        ("beta convergence fixture", c3_beta_convergence),
        ("cell inequality suite", c4_holder),
        ("lower-bound suite", c5_lower_bound),
        ("refinement monotonicity", c6_monotonicity),
        ("non-absolutely-continuous branch", c7_non_ac),
        ("transform, limits and identities", c8_transform_limits_identities),
        ("quantization machinery", c9_quantization),
        ("trace determinism", c10_determinism),
    ];
    let start = std::time::Instant::now();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("{} criterion {:>2} {name}: {}", if v.passed { "PASS" } else { "FAIL" }, i + 1, v.detail);
        if !v.passed {
            failed.push(i + 1);
        }
    }
    println!("acceptance finished in {:.1?}", start.elapsed());
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

//! Seeded property suites over the standard fixtures. Each property reports
//! its trial count and the largest violation seen; it passes when that
//! violation is within the property's tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divergence::{
    divergence, entropy_divergence_identity_check, renyi_divergence, renyi_to_tsallis, tsallis_divergence,
    tsallis_to_renyi, OrderParam,
};
use crate::engine::{supremum_estimate, RefinementConfig};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::fixtures::{
    continuous_fixtures, discrete_corpus, discrete_fixtures, non_ac_fixtures, random_cell, random_non_ac_pair,
    random_partition, random_split, Fixture,
};
use crate::io::{cell_to_json, measure_to_json, partition_to_json, JsonValue};
use crate::measure::{cell_mass, Cell, Interval};
use crate::partition::{holder_cell_check, partition_kl, partition_renyi, partition_stats, Partition};
use crate::quadrature::QuadratureConfig;
use crate::radon_nikodym::{check_absolute_continuity, rn_derivative, AbsoluteContinuity};
use crate::simple::{induced_measure, quantize_rn_derivative, simple_divergence, simple_divergence_mass_form};

pub const SUITE_NAMES: [&str; 9] = [
    "holder",
    "lower-bound",
    "monotonicity",
    "transform",
    "quantization",
    "identity",
    "limits",
    "non-ac",
    "discrete-optimality",
];

pub const ORDERS: [f64; 3] = [1.5, 2.0, 3.0];

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub trials: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub counterexample: Option<JsonValue>,
}

impl PropertyResult {
    fn new(name: &str, tolerance: f64) -> Self {
        PropertyResult {
            name: name.to_string(),
            trials: 0,
            max_violation: f64::NEG_INFINITY,
            tolerance,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.trials > 0 && self.max_violation <= self.tolerance
    }

    /// Records one trial; the first failing trial is kept as counterexample.
    fn record(&mut self, violation: f64, example: impl FnOnce() -> JsonValue) {
        self.trials += 1;
        let violation = if violation.is_nan() { f64::INFINITY } else { violation };
        if violation > self.max_violation {
            self.max_violation = violation;
        }
        if violation > self.tolerance && self.counterexample.is_none() {
            self.counterexample = Some(example());
        }
    }

    pub fn to_json(&self) -> JsonValue {
        JsonValue::object()
            .with("name", self.name.as_str())
            .with("trials", self.trials)
            .with("max_violation", self.max_violation)
            .with("tolerance", self.tolerance)
            .with("passed", self.passed())
            .with("counterexample", self.counterexample.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> JsonValue {
        JsonValue::object()
            .with("suite", self.suite.as_str())
            .with("seed", self.seed)
            .with("passed", self.passed())
            .with(
                "properties",
                JsonValue::Array(self.properties.iter().map(PropertyResult::to_json).collect()),
            )
    }
}

/// Inputs shared by the suites.
#[derive(Clone, Debug)]
pub struct SuiteContext {
    pub seed: u64,
    pub quadrature: QuadratureConfig,
    /// Pairs added to the standard fixtures.
    pub extra: Vec<Fixture>,
}

impl SuiteContext {
    pub fn new(seed: u64) -> Self {
        SuiteContext {
            seed,
            quadrature: QuadratureConfig::default(),
            extra: Vec::new(),
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn continuous(&self) -> Vec<Fixture> {
        let mut out = continuous_fixtures();
        out.extend(self.extra.iter().filter(|f| !f.p.is_discrete()).cloned());
        out
    }

    /// Hand-written pairs, any discrete extras and `count` random pairs.
    fn discrete(&self, count: usize) -> Vec<Fixture> {
        let mut out = discrete_fixtures();
        out.extend(self.extra.iter().filter(|f| f.p.is_discrete()).cloned());
        out.extend(discrete_corpus(&mut self.rng(0xD15C), count));
        out
    }
}

pub fn run_suite(name: &str, ctx: &SuiteContext) -> Result<SuiteReport> {
    let properties = match name {
        "holder" => holder(ctx)?,
        "lower-bound" => lower_bound(ctx)?,
        "monotonicity" => monotonicity(ctx)?,
        "transform" => transform(ctx)?,
        "quantization" => quantization(ctx)?,
        "identity" => identity(ctx)?,
        "limits" => limits(ctx)?,
        "non-ac" => non_ac(ctx)?,
        "discrete-optimality" => discrete_optimality(ctx)?,
        other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        seed: ctx.seed,
        properties,
    })
}

fn pair_json(f: &Fixture) -> JsonValue {
    JsonValue::object()
        .with("fixture", f.name.as_str())
        .with("p", measure_to_json(&f.p))
        .with("r", measure_to_json(&f.r))
}

fn fin(v: ExtendedReal) -> f64 {
    v.to_f64()
}

/// Cell inequality `P(E)^α/R(E)^{α−1} ≤ ∫_E φ^α dR` on random cells, and
/// equality where `φ` is constant on the cell.
fn holder(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let mut rng = ctx.rng(1);
    let mut fixtures = ctx.continuous();
    fixtures.extend(ctx.discrete(20));
    let mut ineq = PropertyResult::new("holder-inequality", 1e-9);
    for _ in 0..1000 {
        let f = &fixtures[rng.gen_range(0..fixtures.len())];
        let alpha = ORDERS[rng.gen_range(0..ORDERS.len())];
        let base = f.p.base().union(f.r.base())?;
        let cell = random_cell(&mut rng, &base);
        let (lhs, rhs) = holder_cell_check(&f.p, &f.r, &cell, alpha, &ctx.quadrature)?;
        ineq.record(lhs - rhs, || {
            pair_json(f)
                .with("cell", cell_to_json(&cell))
                .with("alpha", alpha)
                .with("lhs", lhs)
                .with("rhs", rhs)
        });
    }

    // cells inside a region where φ is constant
    let flat = [
        (fixtures.iter().find(|f| f.name == "half-uniform"), [Interval::new(0.0, 0.5), Interval::new(0.5, 1.0)]),
        (fixtures.iter().find(|f| f.name == "step-uniform"), [Interval::new(0.0, 0.5), Interval::new(0.5, 1.0)]),
        (fixtures.iter().find(|f| f.name == "split-support"), [Interval::new(2.0, 3.0), Interval::new(2.0, 3.0)]),
    ];
    let mut eq = PropertyResult::new("holder-equality", 1e-10);
    for _ in 0..200 {
        let (Some(f), regions) = &flat[rng.gen_range(0..flat.len())] else { continue };
        let region = regions[rng.gen_range(0..2)];
        let a = rng.gen_range(region.lo..region.hi);
        let b = rng.gen_range(region.lo..region.hi);
        if a == b {
            continue;
        }
        let cell = Cell::Intervals(vec![Interval::new(a.min(b), a.max(b))]);
        let alpha = ORDERS[rng.gen_range(0..ORDERS.len())];
        let (lhs, rhs) = holder_cell_check(&f.p, &f.r, &cell, alpha, &ctx.quadrature)?;
        eq.record((lhs - rhs).abs(), || {
            pair_json(f)
                .with("cell", cell_to_json(&cell))
                .with("alpha", alpha)
                .with("lhs", lhs)
                .with("rhs", rhs)
        });
    }
    // discrete: an atom cell has a single φ value
    for f in ctx.discrete(20) {
        let alpha = ORDERS[rng.gen_range(0..ORDERS.len())];
        let atoms = f.p.base().atoms().unwrap_or_default();
        let cell = Cell::Atoms(vec![atoms[rng.gen_range(0..atoms.len())].clone()]);
        let (lhs, rhs) = holder_cell_check(&f.p, &f.r, &cell, alpha, &ctx.quadrature)?;
        eq.record((lhs - rhs).abs(), || {
            pair_json(&f)
                .with("cell", cell_to_json(&cell))
                .with("alpha", alpha)
                .with("lhs", lhs)
                .with("rhs", rhs)
        });
    }
    Ok(vec![ineq, eq])
}

fn partition_value(f: &Fixture, partition: &Partition, order: &OrderParam) -> Result<f64> {
    let stats = partition_stats(&f.p, &f.r, partition)?;
    Ok(match order.order() {
        None => fin(partition_kl(&stats)),
        Some(a) => fin(partition_renyi(&stats, a)?),
    })
}

fn certified_orders() -> Result<Vec<OrderParam>> {
    let mut out = vec![OrderParam::kl()];
    for a in ORDERS {
        out.push(OrderParam::renyi(a)?);
    }
    Ok(out)
}

fn order_json(order: &OrderParam) -> JsonValue {
    JsonValue::object()
        .with("family", order.family().as_str())
        .with("order", order.order())
}

/// Random partitions never beat the integral value.
fn lower_bound(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let mut rng = ctx.rng(2);
    let mut fixtures = ctx.continuous();
    fixtures.extend(ctx.discrete(20));
    let orders = certified_orders()?;
    let mut prop = PropertyResult::new("partition-below-oracle", 1e-9);
    for f in &fixtures {
        let oracles = orders
            .iter()
            .map(|o| divergence(&f.p, &f.r, o, &ctx.quadrature).map(fin))
            .collect::<Result<Vec<_>>>()?;
        let base = f.p.base().union(f.r.base())?;
        for _ in 0..1000 {
            let partition = random_partition(&mut rng, &base, 16);
            for (order, oracle) in orders.iter().zip(&oracles) {
                let v = partition_value(f, &partition, order)?;
                prop.record(v - oracle, || {
                    pair_json(f)
                        .with("order", order_json(order))
                        .with("partition", partition_to_json(&partition))
                        .with("partition_value", v)
                        .with("oracle", *oracle)
                });
            }
        }
    }
    Ok(vec![prop])
}

/// Partition functionals along random split chains never decrease.
fn monotonicity(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let mut rng = ctx.rng(3);
    let mut fixtures = ctx.continuous();
    fixtures.extend(ctx.discrete(20));
    let orders = certified_orders()?;
    let mut prop = PropertyResult::new("refinement-monotone", 1e-12);
    for _ in 0..500 {
        let f = &fixtures[rng.gen_range(0..fixtures.len())];
        let base = f.p.base().union(f.r.base())?;
        let mut chain = vec![Partition::trivial(&base)];
        for _ in 0..20 {
            match random_split(&mut rng, chain.last().expect("nonempty chain")) {
                Some(next) => chain.push(next),
                None => break,
            }
        }
        for order in &orders {
            let values = chain
                .iter()
                .map(|p| partition_value(f, p, order))
                .collect::<Result<Vec<_>>>()?;
            for (i, w) in values.windows(2).enumerate() {
                prop.record(w[0] - w[1], || {
                    pair_json(f)
                        .with("order", order_json(order))
                        .with("coarse", partition_to_json(&chain[i]))
                        .with("fine", partition_to_json(&chain[i + 1]))
                        .with("coarse_value", w[0])
                        .with("fine_value", w[1])
                });
            }
        }
    }
    Ok(vec![prop])
}

/// Tsallis values against the transformed Rényi values, and the transform
/// round trip.
fn transform(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let mut fixtures = ctx.continuous();
    fixtures.extend(ctx.discrete(50));
    let mut consistency = PropertyResult::new("tsallis-from-renyi", 1e-10);
    let mut round_trip = PropertyResult::new("transform-round-trip", 1e-10);
    for f in &fixtures {
        for q in ORDERS {
            let renyi = renyi_divergence(&f.p, &f.r, q, &ctx.quadrature)?;
            let tsallis = tsallis_divergence(&f.p, &f.r, q, &ctx.quadrature)?;
            let via = renyi_to_tsallis(renyi, q)?;
            consistency.record((fin(tsallis) - fin(via)).abs(), || {
                pair_json(f)
                    .with("q", q)
                    .with("renyi", renyi)
                    .with("tsallis", tsallis)
                    .with("transformed", via)
            });
            let back = tsallis_to_renyi(via, q)?;
            round_trip.record((fin(back) - fin(renyi)).abs(), || {
                pair_json(f).with("q", q).with("renyi", renyi).with("round_trip", back)
            });
        }
    }
    Ok(vec![consistency, round_trip])
}

/// Dyadic quantization: pointwise monotonicity, monotone convergence of the
/// simple divergences, agreement of the integral and mass forms and
/// convergence of the induced measures.
fn quantization(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let mut rng = ctx.rng(5);
    let fixtures = ctx.continuous();

    let mut pointwise = PropertyResult::new("pointwise-monotone", 0.0);
    let mut forms = PropertyResult::new("two-form-equality", 1e-12);
    for f in &fixtures {
        let phi = rn_derivative(&f.p, &f.r)?;
        let base = phi.pair().base().clone();
        let ivs = base.intervals().unwrap_or_default().to_vec();
        let total: f64 = ivs.iter().map(Interval::len).sum();
        let grid: Vec<f64> = (0..10_000)
            .map(|i| {
                let mut u = (i as f64 + 0.5) / 10_000.0 * total;
                for iv in &ivs {
                    if u < iv.len() {
                        return iv.lo + u;
                    }
                    u -= iv.len();
                }
                ivs[ivs.len() - 1].hi
            })
            .collect();
        let levels = (1..=9)
            .map(|n| quantize_rn_derivative(&phi, n))
            .collect::<Result<Vec<_>>>()?;
        for n in 0..8 {
            let (s, t) = (&levels[n], &levels[n + 1]);
            let mut worst = f64::NEG_INFINITY;
            let mut at = 0.0;
            for &x in &grid {
                let v = (s.eval(x) - t.eval(x)).max(t.eval(x) - phi.at(x));
                if v > worst {
                    worst = v;
                    at = x;
                }
            }
            pointwise.record(worst, || {
                pair_json(f)
                    .with("n", n + 1)
                    .with("x", at)
                    .with("phi", phi.at(at))
                    .with("phi_n", s.eval(at))
                    .with("phi_n_plus_1", t.eval(at))
            });
        }
        for (n, s) in levels.iter().enumerate() {
            for alpha in ORDERS {
                let a = fin(simple_divergence(s, &f.r, alpha)?);
                let b = fin(simple_divergence_mass_form(s, &f.r, alpha)?);
                forms.record((a - b).abs(), || {
                    pair_json(f)
                        .with("n", n + 1)
                        .with("alpha", alpha)
                        .with("integral_form", a)
                        .with("mass_form", b)
                });
            }
        }
    }

    // the Beta(2,2) against uniform fixture at α = 2
    let beta = fixtures
        .iter()
        .find(|f| f.name == "beta22-uniform")
        .cloned()
        .unwrap_or_else(|| continuous_fixtures().swap_remove(0));
    let phi = rn_derivative(&beta.p, &beta.r)?;
    let oracle = fin(renyi_divergence(&beta.p, &beta.r, 2.0, &ctx.quadrature)?);
    let values = (1..=12)
        .map(|n| simple_divergence(&quantize_rn_derivative(&phi, n)?, &beta.r, 2.0).map(fin))
        .collect::<Result<Vec<_>>>()?;
    let mut monotone = PropertyResult::new("divergence-monotone-in-n", 1e-12);
    for (i, w) in values.windows(2).enumerate() {
        monotone.record(w[0] - w[1], || {
            pair_json(&beta).with("n", i + 1).with("v_n", w[0]).with("v_n_plus_1", w[1])
        });
    }
    let mut converge = PropertyResult::new("divergence-within-1e-4-at-n12", 1e-4);
    converge.record((values[11] - oracle).abs(), || {
        pair_json(&beta).with("alpha", 2.0).with("v_12", values[11]).with("oracle", oracle)
    });

    let s20 = quantize_rn_derivative(&phi, 20)?;
    let induced = induced_measure(&s20, &beta.r)?;
    let base = phi.pair().base().clone();
    let mut measure = PropertyResult::new("induced-measure-n20", 1e-6);
    for _ in 0..100 {
        let cell = random_cell(&mut rng, &base);
        let pn = induced.mass(&cell)?;
        let p = cell_mass(phi.pair().p(), &cell)?;
        measure.record((pn - p).abs(), || {
            pair_json(&beta).with("cell", cell_to_json(&cell)).with("p_n", pn).with("p", p)
        });
    }
    Ok(vec![pointwise, forms, monotone, converge, measure])
}

/// `S(P) = −I(P‖μ)` for Shannon/KL, Rényi and Tsallis, with `μ` a
/// probability measure.
fn identity(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let mut fixtures = ctx.continuous();
    fixtures.extend(ctx.discrete(50));
    let mut props = vec![
        PropertyResult::new("shannon-kl", 1e-8),
        PropertyResult::new("renyi", 1e-8),
        PropertyResult::new("tsallis", 1e-8),
    ];
    for f in &fixtures {
        let orders = [OrderParam::kl()]
            .into_iter()
            .chain(ORDERS.iter().map(|&a| OrderParam::renyi(a).expect("valid order")))
            .chain(ORDERS.iter().map(|&q| OrderParam::tsallis(q).expect("valid order")));
        for order in orders {
            let slot = match order.family() {
                crate::divergence::Family::Kl => 0,
                crate::divergence::Family::Renyi => 1,
                crate::divergence::Family::Tsallis => 2,
            };
            let residual = entropy_divergence_identity_check(&f.p, &f.r, &order, &ctx.quadrature)?;
            props[slot].record(residual, || {
                pair_json(f).with("order", order_json(&order)).with("residual", residual)
            });
        }
    }
    Ok(props)
}

/// Rényi divergences near order 1 approach KL.
fn limits(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let fixtures = ctx.discrete(200);
    let mut near = PropertyResult::new("renyi-1.001-vs-kl", 1e-2);
    let mut nearer = PropertyResult::new("renyi-1.0001-vs-kl", 1e-3);
    for f in &fixtures {
        let kl = fin(divergence(&f.p, &f.r, &OrderParam::kl(), &ctx.quadrature)?);
        for (prop, a) in [(&mut near, 1.001), (&mut nearer, 1.0001)] {
            let v = fin(renyi_divergence(&f.p, &f.r, a, &ctx.quadrature)?);
            prop.record((v - kl).abs(), || pair_json(f).with("alpha", a).with("renyi", v).with("kl", kl));
        }
    }
    Ok(vec![near, nearer])
}

/// Every non-absolutely-continuous pair yields `+∞` with a witness cell of
/// positive P-mass and zero R-mass.
fn non_ac(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let mut rng = ctx.rng(8);
    let mut fixtures = non_ac_fixtures();
    fixtures.extend((0..20).map(|_| random_non_ac_pair(&mut rng, 12)));
    let cfg = RefinementConfig {
        quadrature: ctx.quadrature,
        ..RefinementConfig::default()
    };
    let mut prop = PropertyResult::new("infinite-with-witness", 0.0);
    for f in &fixtures {
        let witness = match check_absolute_continuity(&f.p, &f.r)? {
            AbsoluteContinuity::Witness(w) => Some(w),
            AbsoluteContinuity::Continuous => None,
        };
        for order in certified_orders()? {
            let est = supremum_estimate(&f.p, &f.r, &order, &cfg)?;
            let direct = divergence(&f.p, &f.r, &order, &ctx.quadrature)?;
            let masses = match &witness {
                Some(w) => {
                    let base = f.p.base().union(f.r.base())?;
                    Some((cell_mass(&f.p.extend_to(&base)?, w)?, cell_mass(&f.r.extend_to(&base)?, w)?))
                }
                None => None,
            };
            let ok = est.lower_bound == ExtendedReal::PosInf
                && direct == ExtendedReal::PosInf
                && est.witness == witness
                && masses.is_some_and(|(pm, rm)| pm > 0.0 && rm == 0.0);
            prop.record(if ok { 0.0 } else { 1.0 }, || {
                pair_json(f)
                    .with("order", order_json(&order))
                    .with("lower_bound", est.lower_bound)
                    .with("direct", direct)
                    .with("witness", witness.as_ref().map(cell_to_json))
            });
        }
    }
    Ok(vec![prop])
}

/// On discrete pairs the engine ends at the singleton partition with the
/// direct-sum value.
fn discrete_optimality(ctx: &SuiteContext) -> Result<Vec<PropertyResult>> {
    let fixtures = ctx.discrete(200);
    let cfg = RefinementConfig {
        quadrature: ctx.quadrature,
        ..RefinementConfig::default()
    };
    let mut prop = PropertyResult::new("singleton-equals-direct-sum", 1e-12);
    for f in &fixtures {
        for order in certified_orders()? {
            let est = supremum_estimate(&f.p, &f.r, &order, &cfg)?;
            let direct = fin(divergence(&f.p, &f.r, &order, &ctx.quadrature)?);
            let singletons = est
                .trace
                .final_partition
                .cells()
                .iter()
                .all(|c| matches!(c, Cell::Atoms(ls) if ls.len() == 1));
            let err = if singletons { (fin(est.lower_bound) - direct).abs() } else { f64::INFINITY };
            prop.record(err, || {
                pair_json(f)
                    .with("order", order_json(&order))
                    .with("lower_bound", est.lower_bound)
                    .with("direct", direct)
                    .with("cells", est.cells())
            });
        }
    }
    Ok(vec![prop])
}

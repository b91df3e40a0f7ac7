use std::path::Path;

use divergence_core::fixtures::Fixture;
use divergence_core::io::{cell_to_json, load_measure, write_trace_csv, JsonValue};
use divergence_core::suites::{run_suite, SuiteContext, SUITE_NAMES};
use divergence_core::{
    divergence, entropy, run_order_sweep, supremum_estimate, CertifiedEstimate, Error, OrderParam,
    ProbabilityMeasure, QuadratureConfig, RefinementConfig, Result,
};

use crate::{Cli, Command, EngineArgs, OrderArgs, Outcome};

pub fn run(cli: Cli) -> Result<Outcome> {
    let quad = match cli.quad_tol {
        Some(tol) => QuadratureConfig::default().with_abs_tol(tol)?,
        None => QuadratureConfig::default(),
    };
    match cli.command {
        Command::Compute { pair, order } => {
            let order = order_param(&order)?;
            let p = load(pair.p.as_deref(), "--p")?;
            let base = JsonValue::object()
                .with("family", order.family().as_str())
                .with("order", order.order());
            let json = match pair.r {
                Some(r) => {
                    let r = load_measure(r)?;
                    base.with("value", divergence(&p, &r, &order, &quad)?)
                        .with("method", "quadrature")
                }
                None => base
                    .with("value", entropy(&p, &order, &quad)?)
                    .with("method", "quadrature")
                    .with("quantity", "entropy"),
            };
            Ok(Outcome { json, code: 0 })
        }
        Command::Refine {
            pair,
            order,
            engine,
            trace,
        } => {
            let order = order_param(&order)?;
            if let Some(a) = order.order() {
                if a <= 1.0 {
                    return Err(Error::OrderOutOfRange(a));
                }
            }
            let (p, r) = (load_measure(&pair.p)?, load_measure(&pair.r)?);
            let cfg = engine_config(&engine, quad)?;
            let est = supremum_estimate(&p, &r, &order, &cfg)?;
            if let Some(path) = trace {
                write_trace_csv(&est.trace, path)?;
            }
            Ok(Outcome {
                json: summary(&est)
                    .with("family", order.family().as_str())
                    .with("order", order.order()),
                code: 0,
            })
        }
        Command::Sweep {
            pair,
            family,
            orders,
            engine,
        } => {
            let mut orders = parse_orders(&orders)?;
            orders.sort_by(f64::total_cmp);
            let (p, r) = (load_measure(&pair.p)?, load_measure(&pair.r)?);
            let cfg = engine_config(&engine, quad)?;
            let rows = run_order_sweep(&p, &r, family, &orders, &cfg)?
                .iter()
                .map(|est| JsonValue::object().with("order", est.order.order()).merge(summary(est)))
                .collect();
            Ok(Outcome {
                json: JsonValue::object()
                    .with("family", family.as_str())
                    .with("rows", JsonValue::Array(rows)),
                code: 0,
            })
        }
        Command::Verify { suite, seed, pair } => {
            let mut ctx = SuiteContext::new(seed);
            ctx.quadrature = quad;
            match (pair.p, pair.r) {
                (Some(p), Some(r)) => {
                    let name = format!("{}|{}", p.display(), r.display());
                    ctx.extra.push(Fixture::new(name, load_measure(p)?, load_measure(r)?));
                }
                (None, None) => {}
                _ => return Err(Error::Parse("--p and --r must be given together".into())),
            }
            let names: Vec<&str> = if suite == "all" {
                SUITE_NAMES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            let mut first_failure = None;
            for name in names {
                let report = run_suite(name, &ctx)?;
                if first_failure.is_none() {
                    first_failure = report.properties.iter().find(|pr| !pr.passed()).map(|pr| {
                        JsonValue::object()
                            .with("suite", name)
                            .with("property", pr.name.as_str())
                            .with("counterexample", pr.counterexample.clone())
                    });
                }
                reports.push(report.to_json());
            }
            let passed = first_failure.is_none();
            let mut json = JsonValue::object()
                .with("seed", seed)
                .with("passed", passed)
                .with("suites", JsonValue::Array(reports));
            if let Some(f) = first_failure {
                json = json.with("first_failure", f);
            }
            Ok(Outcome {
                json,
                code: if passed { 0 } else { 1 },
            })
        }
    }
}

fn load(path: Option<&Path>, flag: &str) -> Result<ProbabilityMeasure> {
    load_measure(path.ok_or_else(|| Error::Parse(format!("{flag} is required")))?)
}

fn order_param(args: &OrderArgs) -> Result<OrderParam> {
    if args.family == divergence_core::Family::Kl && args.order.is_some() {
        return Err(Error::Parse("kl takes no --order".into()));
    }
    OrderParam::new(args.family, args.order)
}

fn engine_config(args: &EngineArgs, quadrature: QuadratureConfig) -> Result<RefinementConfig> {
    let mut cfg = RefinementConfig {
        quadrature,
        ..RefinementConfig::default()
    };
    if let Some(tol) = args.tol {
        cfg.rel_gap_tol = tol;
    }
    if let Some(m) = args.max_cells {
        cfg.max_cells = m;
    }
    if let Some(s) = args.strategy {
        cfg.split_strategy = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn summary(est: &CertifiedEstimate) -> JsonValue {
    JsonValue::object()
        .with("lower_bound", est.lower_bound)
        .with("oracle", est.oracle)
        .with("gap", est.gap)
        .with("converged", est.converged)
        .with("cells", est.cells())
        .with("stop_reason", est.stop_reason.as_str())
        .with("witness", est.witness.as_ref().map(cell_to_json))
}

/// `START:STEP:END` with both ends included. Values are rounded to the
/// decimals written in the input, so `1.1:0.1:1.3` yields `1.3` rather than
/// `1.3000000000000003`.
pub fn parse_orders(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("orders must look like START:STEP:END, got {spec:?}"));
    let fields: Vec<&str> = spec.split(':').map(str::trim).collect();
    let parts: Vec<f64> = fields
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, step, end] = parts[..] else {
        return Err(bad());
    };
    if !(start.is_finite() && end.is_finite() && step > 0.0 && step.is_finite() && end >= start) {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000 {
        return Err(Error::InvalidConfig(format!("{count} orders requested, at most 10000")));
    }
    let decimals = fields
        .iter()
        .map(|s| match (s.contains(['e', 'E']), s.split_once('.')) {
            (true, _) => None,
            (false, Some((_, frac))) => Some(frac.len()),
            (false, None) => Some(0),
        })
        .try_fold(0usize, |acc, d| d.map(|d| acc.max(d)))
        .filter(|&d| d <= 15);
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            match decimals {
                Some(d) => {
                    let scale = 10f64.powi(d as i32);
                    (v * scale).round() / scale
                }
                None => v,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_include_both_ends() {
        assert_eq!(parse_orders("1.1:0.1:1.5").unwrap(), vec![1.1, 1.2, 1.3, 1.4, 1.5]);
        assert_eq!(parse_orders("2:1:2").unwrap(), vec![2.0]);
        assert_eq!(parse_orders("1.5:0.5:3").unwrap(), vec![1.5, 2.0, 2.5, 3.0]);
        assert_eq!(parse_orders("1.1:0.1:3.0").unwrap().len(), 20);
        assert_eq!(parse_orders("1.1:0.1:3.0").unwrap()[19], 3.0);
    }

    #[test]
    fn malformed_orders_are_rejected() {
        for s in ["", "1:2", "a:b:c", "2:0:3", "3:1:2", "1:-1:3"] {
            assert!(parse_orders(s).is_err(), "{s}");
        }
    }
}

use clap::{Args, Subcommand};
use serde_json::{json, Value};
use tplab_core::delta::{delta, delta_at_origin, delta_diagonal, Route, RouteResult};
use tplab_core::hp::Real;
use tplab_core::Error;

use super::{alpha, real, rel, Res};
use crate::error::CliError;
use crate::output::{dec, num, obj, rat, Report, Table};
use crate::Ctx;

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct DeltaArgs {
    #[command(subcommand)]
    sub: Option<Sub>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// fd, wronskian, schur, lascoux, asm, or all for the cross-route table.
    #[arg(long, default_value = "all")]
    route: String,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// The limit at (1, 0+): sf(n−1)² U_1 ⋯ U_n.
    Origin {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
    },
    /// The value on the diagonal x = y.
    Diagonal {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
    },
}

fn route_json(r: &RouteResult) -> Value {
    obj([
        ("route", json!(r.route.name())),
        ("value", num(&r.value)),
        ("error_estimate", num(&r.error_estimate)),
        (
            "meta",
            serde_json::to_value(&r.meta).expect("route metadata serializes"),
        ),
    ])
}

fn missing(name: &str) -> CliError {
    CliError::usage(format!(
        "delta needs --{name} (or a subcommand: origin, diagonal)"
    ))
}

pub fn run(ctx: &Ctx, args: DeltaArgs) -> Res<Report> {
    match args.sub {
        Some(Sub::Origin { alpha: a, n }) => {
            let a = alpha(ctx, &a)?;
            let v = delta_at_origin(&a, n)?;
            return Ok(Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(n)),
                ("value", num(&v)),
                ("sign", json!(v.cmp0().map_or(0, |o| o as i8))),
            ])));
        }
        Some(Sub::Diagonal { alpha: a, n, x }) => {
            let a = alpha(ctx, &a)?;
            let x = real(ctx, &x)?;
            let v = delta_diagonal(&a, n, &x)?;
            return Ok(Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(n)),
                ("x", num(&x)),
                ("value", num(&v)),
            ])));
        }
        None => {}
    }
    let a = alpha(ctx, args.alpha.as_deref().ok_or_else(|| missing("alpha"))?)?;
    let n = args.n.ok_or_else(|| missing("n"))?;
    let x = real(ctx, args.x.as_deref().ok_or_else(|| missing("x"))?)?;
    let y = real(ctx, args.y.as_deref().ok_or_else(|| missing("y"))?)?;
    let head = |rest: Vec<(&'static str, Value)>| {
        let mut v = obj([
            ("alpha", rat(a.rational())),
            ("n", json!(n)),
            ("x", num(&x)),
            ("y", num(&y)),
        ]);
        for (k, x) in rest {
            v[k] = x;
        }
        v
    };
    if args.route != "all" {
        let route: Route = args.route.parse()?;
        let r = delta(&a, n, &x, &y, route)?;
        let mut t = Table::with_header(&["route", "value", "error_estimate"]);
        t.push(vec![
            route.name().into(),
            dec(&r.value),
            dec(&r.error_estimate),
        ]);
        return Ok(Report::new(head(vec![("result", route_json(&r))])).table(t));
    }
    cross_route(ctx, head, |route| delta(&a, n, &x, &y, route))
}

/// Every route side by side; exact routes are compared pairwise against the
/// tolerance, the others against their own error estimates.
fn cross_route(
    ctx: &Ctx,
    head: impl Fn(Vec<(&'static str, Value)>) -> Value,
    eval: impl Fn(Route) -> tplab_core::Result<RouteResult>,
) -> Res<Report> {
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    for route in Route::ALL {
        match eval(route) {
            Ok(r) => results.push(r),
            Err(e @ Error::CapExceeded { .. }) => skipped.push(obj([
                ("route", json!(route.name())),
                ("reason", json!(e.to_string())),
            ])),
            Err(e) => return Err(e.into()),
        }
    }
    let exact: Vec<&RouteResult> = results.iter().filter(|r| r.route.is_exact()).collect();
    let mut max_exact = Real::new(ctx.prec);
    for (i, a) in exact.iter().enumerate() {
        for b in &exact[i + 1..] {
            let d = rel(&a.value, &b.value);
            if d > max_exact {
                max_exact = d;
            }
        }
    }
    let reference = exact.first().map(|r| r.value.clone());
    let mut t = Table::with_header(&["route", "value", "error_estimate", "diff_to_reference"]);
    let mut rows = Vec::new();
    let mut estimate_failures = Vec::new();
    for r in &results {
        let diff = reference
            .as_ref()
            .map(|v| Real::with_val(ctx.prec, &r.value - v).abs());
        if let (false, Some(d)) = (r.route.is_exact(), &diff) {
            if *d > r.error_estimate {
                estimate_failures.push(r.route.name());
            }
        }
        t.push(vec![
            r.route.name().into(),
            dec(&r.value),
            dec(&r.error_estimate),
            diff.as_ref().map(dec).unwrap_or_default(),
        ]);
        let mut row = route_json(r);
        row["diff_to_reference"] = diff.as_ref().map(num).unwrap_or(Value::Null);
        rows.push(row);
    }
    let exact_ok = max_exact <= ctx.tol;
    let report = Report::new(head(vec![
        ("routes", Value::Array(rows)),
        ("skipped", Value::Array(skipped)),
        ("max_exact_rel_diff", num(&max_exact)),
        ("tol", num(&ctx.tol)),
        ("agree", json!(exact_ok && estimate_failures.is_empty())),
    ]))
    .table(t);
    Ok(if !exact_ok {
        report.violated_if(true, "exact routes disagree beyond tolerance")
    } else {
        report.violated_if(
            !estimate_failures.is_empty(),
            format!(
                "routes outside their error estimate: {}",
                estimate_failures.join(", ")
            ),
        )
    })
}

use clap::{Subcommand, ValueEnum};
use serde_json::{json, Value};
use tplab_core::kernel::{
    borchardt_check, cauchy_double_alternant, det_kernel_matrix, eval_kernel,
    gram_determinant_escalated, tp_scan, ScanMode, TpScanConfig,
};
use tplab_core::AlphaParam;

use super::{alpha, real, rel, tuple, Res};
use crate::output::{num, obj, rat, Report, Table};
use crate::Ctx;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    LogUniform,
    Clustered,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// K_α(x, y).
    Eval {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// det[K_α(x_i, y_j)] for increasing tuples.
    Det {
        #[arg(long)]
        alpha: String,
        /// Comma-separated, e.g. `1,2,3`.
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
    },
    /// det[K_α(x_i, x_j)], escalating precision until the sign settles.
    Gram {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        xs: String,
    },
    /// Seeded random search for negative minors.
    TpScan {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Mode::LogUniform)]
        mode: Mode,
        /// Natural-log range for the coordinates.
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        log_lo: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        log_hi: f64,
        /// Base-2 log range of the cluster spacing (clustered mode).
        #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
        eps_lo: f64,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        eps_hi: f64,
    },
    /// Borchardt: det[1/(x+y)²] against det[1/(x+y)]·perm[1/(x+y)].
    Borchardt {
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
    },
    /// Cauchy's double alternant against det[K_{1/2}(x_i, y_j)].
    Cauchy {
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
    },
}

fn identity(
    lhs_name: &str,
    lhs: &rug::Float,
    rhs_name: &str,
    rhs: &rug::Float,
    ctx: &Ctx,
) -> Report {
    let d = rel(lhs, rhs);
    let holds = d <= ctx.tol;
    Report::new(obj([
        (lhs_name, num(lhs)),
        (rhs_name, num(rhs)),
        ("rel_diff", num(&d)),
        ("tol", num(&ctx.tol)),
        ("holds", json!(holds)),
    ]))
    .violated_if(
        !holds,
        format!("{lhs_name} and {rhs_name} differ beyond tolerance"),
    )
}

fn tuple_json(t: &tplab_core::kernel::PointTuple) -> Value {
    Value::Array(t.values().iter().map(num).collect())
}

fn tuple_cell(t: &tplab_core::kernel::PointTuple) -> String {
    t.values()
        .iter()
        .map(crate::output::dec)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(ctx: &Ctx, cmd: Cmd) -> Res<Report> {
    Ok(match cmd {
        Cmd::Eval { alpha: a, x, y } => {
            let a = alpha(ctx, &a)?;
            let (x, y) = (real(ctx, &x)?, real(ctx, &y)?);
            let v = eval_kernel(&a, &x, &y)?;
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("x", num(&x)),
                ("y", num(&y)),
                ("value", num(&v)),
            ]))
        }
        Cmd::Det { alpha: a, xs, ys } => {
            let a = alpha(ctx, &a)?;
            let (x, y) = (tuple(ctx, &xs)?, tuple(ctx, &ys)?);
            let v = det_kernel_matrix(&a, &x, &y)?;
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(x.len())),
                ("xs", tuple_json(&x)),
                ("ys", tuple_json(&y)),
                ("value", num(&v)),
            ]))
        }
        Cmd::Gram { alpha: a, xs } => {
            let a = alpha(ctx, &a)?;
            let x = tuple(ctx, &xs)?;
            let (v, used) = gram_determinant_escalated(&a, &x);
            let positive = v > 0;
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("xs", tuple_json(&x)),
                ("value", num(&v)),
                ("precision_used", json!(used)),
                ("positive", json!(positive)),
            ]))
            .violated_if(!positive, "Gram determinant is not positive")
        }
        Cmd::TpScan {
            alpha: a,
            max_order,
            samples,
            mode,
            log_lo,
            log_hi,
            eps_lo,
            eps_hi,
        } => {
            let a = alpha(ctx, &a)?;
            let cfg = TpScanConfig {
                max_order,
                samples_per_order: samples,
                seed: ctx.seed,
                log_range: (log_lo, log_hi),
                mode: match mode {
                    Mode::LogUniform => ScanMode::LogUniform,
                    Mode::Clustered => ScanMode::Clustered,
                },
                eps_log2: (eps_lo, eps_hi),
            };
            tp_scan_report(&a, &cfg)?
        }
        Cmd::Borchardt { xs, ys } => {
            let (x, y) = (tuple(ctx, &xs)?, tuple(ctx, &ys)?);
            let c = borchardt_check(&x, &y)?;
            identity("lhs", &c.lhs, "rhs", &c.rhs, ctx)
        }
        Cmd::Cauchy { xs, ys } => {
            let (x, y) = (tuple(ctx, &xs)?, tuple(ctx, &ys)?);
            let closed = cauchy_double_alternant(&x, &y)?;
            let half = AlphaParam::from_ratio(1, 2, ctx.prec)?;
            let det = det_kernel_matrix(&half, &x, &y)?;
            identity("closed_form", &closed, "determinant", &det, ctx)
        }
    })
}

fn tp_scan_report(a: &AlphaParam, cfg: &TpScanConfig) -> Res<Report> {
    let r = tp_scan(a, cfg)?;
    let orders: Vec<Value> = r
        .sign_pattern
        .iter()
        .map(|s| {
            obj([
                ("order", json!(s.order)),
                ("min_minor", num(&s.min_minor)),
                ("negatives", json!(s.negatives)),
                ("witness_x", tuple_json(&s.witness_x)),
                ("witness_y", tuple_json(&s.witness_y)),
            ])
        })
        .collect();
    let mut t = Table::with_header(&["order", "min_minor", "negatives", "witness_x", "witness_y"]);
    for s in &r.sign_pattern {
        t.push(vec![
            s.order.to_string(),
            crate::output::dec(&s.min_minor),
            s.negatives.to_string(),
            tuple_cell(&s.witness_x),
            tuple_cell(&s.witness_y),
        ]);
    }
    let expected_tp = a.is_zero() || a.is_unit_fraction();
    let all_positive = r.all_positive();
    let header = obj([
        ("seed", json!(cfg.seed)),
        ("mode", json!(r.mode)),
        ("max_order", json!(cfg.max_order)),
        ("samples_per_order", json!(cfg.samples_per_order)),
        ("log_range", json!([cfg.log_range.0, cfg.log_range.1])),
        ("eps_log2", json!([cfg.eps_log2.0, cfg.eps_log2.1])),
    ]);
    Ok(Report::new(obj([
        ("alpha", rat(a.rational())),
        ("scan", header),
        ("min_minor", num(&r.min_minor)),
        ("witness_x", tuple_json(&r.witness_x)),
        ("witness_y", tuple_json(&r.witness_y)),
        ("all_positive", json!(all_positive)),
        ("orders", Value::Array(orders)),
    ]))
    .table(t)
    .violated_if(
        expected_tp && !all_positive,
        "negative minor found at an α where total positivity holds",
    ))
}

use clap::{Args, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::{json, Value};
use tplab_core::conjecture::{
    alpha_grid, band_matrix, c_coefficients, check_tp_with, f_n0_closed, f_nk, min_cell,
    scan_conjecture1, scan_theorem, transform_factor, FnkSample, MinorWitness, XyGrid,
};
use tplab_core::delta::Route;
use tplab_core::hp;

use super::{alpha, real, rel, Res};
use crate::output::{dec, int, num, nums, obj, rat, Report, Table};
use crate::Ctx;

#[derive(Args, Debug)]
pub struct AlphaRange {
    #[arg(long, default_value = "0")]
    alpha_lo: String,
    #[arg(long)]
    alpha_hi: String,
    /// Number of subintervals; the grid has steps+1 exact rationals.
    #[arg(long, default_value_t = 10)]
    steps: u32,
}

impl AlphaRange {
    fn grid(&self) -> Res<Vec<Rational>> {
        let lo = hp::parse_rational(&self.alpha_lo)?;
        let hi = hp::parse_rational(&self.alpha_hi)?;
        Ok(alpha_grid(&lo, &hi, self.steps))
    }

    fn spec(&self) -> Value {
        obj([
            ("alpha_lo", json!(self.alpha_lo)),
            ("alpha_hi", json!(self.alpha_hi)),
            ("steps", json!(self.steps)),
        ])
    }
}

/// `count × count` log-spaced (x, y) pairs in `[lo, hi]²`.
#[derive(Args, Debug)]
pub struct PointGrid {
    #[arg(long, default_value_t = 5)]
    grid_count: usize,
    #[arg(long, default_value_t = 0.1)]
    grid_lo: f64,
    #[arg(long, default_value_t = 10.0)]
    grid_hi: f64,
}

impl PointGrid {
    fn grid(&self) -> Res<XyGrid> {
        Ok(XyGrid::log_square(
            self.grid_count,
            self.grid_lo,
            self.grid_hi,
        )?)
    }

    fn spec(&self) -> Value {
        obj([
            ("kind", json!("log-square")),
            ("count", json!(self.grid_count)),
            ("lo", json!(self.grid_lo)),
            ("hi", json!(self.grid_hi)),
        ])
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExactRoute {
    Asm,
    Lascoux,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// F_{n,k}(x, y) by grouped ASM enumeration.
    Fnk {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// F_{n,0} by enumeration against its product formula.
    Fn0 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Coefficients c_i of (Q̄^{2n} − Q^{2n}) / (Q̄² − Q²) in x^i y^{2n−2−i}.
    Cvec {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
    },
    /// The n × (2n−1) band matrix, symbolic or evaluated at --alpha.
    Band {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Every minor of the evaluated band matrix up to --max-order.
    CheckTp {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_order: Option<usize>,
        /// Recompute near-zero minors at twice the precision.
        #[arg(long)]
        rigorous: bool,
    },
    /// Sign of every F_{n,k} over an α range and a point grid.
    Scan1 {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        alphas: AlphaRange,
        #[command(flatten)]
        points: PointGrid,
    },
    /// Sign of the derivative determinant over an α range and a point grid,
    /// with origin witnesses above 1/n.
    ScanTheorem {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        alphas: AlphaRange,
        #[command(flatten)]
        points: PointGrid,
        #[arg(long, value_enum, default_value_t = ExactRoute::Lascoux)]
        route: ExactRoute,
    },
}

fn minor_json(w: &MinorWitness) -> Value {
    obj([
        (
            "rows",
            json!(w.rows.iter().map(|r| r + 1).collect::<Vec<_>>()),
        ),
        (
            "cols",
            json!(w.cols.iter().map(|c| c + 1).collect::<Vec<_>>()),
        ),
        ("value", num(&w.value)),
    ])
}

fn sample_json(s: &FnkSample) -> Value {
    obj([
        ("alpha", rat(&s.alpha)),
        ("k", json!(s.k)),
        ("x", json!(s.x)),
        ("y", json!(s.y)),
        ("value", num(&s.value)),
    ])
}

pub fn run(ctx: &Ctx, cmd: Cmd) -> Res<Report> {
    Ok(match cmd {
        Cmd::Fnk {
            alpha: a,
            n,
            k,
            x,
            y,
        } => {
            let a = alpha(ctx, &a)?;
            let (x, y) = (real(ctx, &x)?, real(ctx, &y)?);
            let f = f_nk(&a, n, k, &x, &y)?;
            let expected = *a.rational() <= Rational::from((1, n as u32));
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(n)),
                ("k", json!(k)),
                ("x", num(&x)),
                ("y", num(&y)),
                ("value", num(&f.value)),
                ("imag_residue", num(&f.imag_residue)),
                ("imag_ratio", num(&f.imag_ratio())),
            ]))
            .violated_if(expected && f.value < 0, "F_{n,k} negative for α ≤ 1/n")
        }
        Cmd::Fn0 { alpha: a, n, x, y } => {
            let a = alpha(ctx, &a)?;
            let (x, y) = (real(ctx, &x)?, real(ctx, &y)?);
            let direct = f_nk(&a, n, 0, &x, &y)?;
            let closed = f_n0_closed(&a, n, &x, &y)?;
            let d = rel(&direct.value, &closed);
            let holds = d <= ctx.tol;
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(n)),
                ("x", num(&x)),
                ("y", num(&y)),
                ("enumerated", num(&direct.value)),
                ("closed_form", num(&closed)),
                ("rel_diff", num(&d)),
                ("tol", num(&ctx.tol)),
                ("holds", json!(holds)),
            ]))
            .violated_if(!holds, "F_{n,0} differs from its product formula")
        }
        Cmd::Cvec { alpha: a, n } => {
            let a = alpha(ctx, &a)?;
            let c = c_coefficients(&a, n)?;
            let expected = *a.rational() <= Rational::from((1, n as u32));
            let positive = c.iter().all(|v| *v > 0);
            let mut t = Table::with_header(&["i", "c"]);
            for (i, v) in c.iter().enumerate() {
                t.push(vec![i.to_string(), dec(v)]);
            }
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(n)),
                ("c", nums(&c)),
                ("all_positive", json!(positive)),
            ]))
            .table(t)
            .violated_if(expected && !positive, "non-positive c_i for α ≤ 1/n")
        }
        Cmd::Band { n, alpha: a } => {
            let b = band_matrix(n)?;
            let symbolic: Vec<Vec<String>> = b
                .entries()
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect())
                .collect();
            let mut doc = obj([
                ("n", json!(n)),
                ("rows", json!(b.rows())),
                ("cols", json!(b.cols())),
                ("entries", json!(symbolic)),
                ("persymmetric", json!(b.is_persymmetric())),
                ("banded", json!(b.is_banded())),
                ("transform_factor", int(&transform_factor(n))),
            ]);
            let rows = match &a {
                Some(s) => {
                    let a = alpha(ctx, s)?;
                    let m = b.evaluate(&a);
                    doc["alpha"] = rat(a.rational());
                    doc["evaluated"] = Value::Array(m.iter().map(|r| nums(r)).collect());
                    m.iter().map(|r| r.iter().map(dec).collect()).collect()
                }
                None => symbolic,
            };
            Report::new(doc).table(Table { header: None, rows })
        }
        Cmd::CheckTp {
            alpha: a,
            n,
            max_order,
            rigorous,
        } => {
            let a = alpha(ctx, &a)?;
            let b = band_matrix(n)?;
            let order = max_order.unwrap_or(n);
            let r = check_tp_with(
                |p| b.evaluate(&a.with_prec(p)),
                ctx.prec,
                order,
                &ctx.tol,
                rigorous,
            )?;
            let per_order: Vec<Value> = r
                .per_order
                .iter()
                .map(|o| {
                    obj([
                        ("order", json!(o.order)),
                        ("minors", json!(o.minors)),
                        ("below_tol", json!(o.below_tol)),
                        ("min", minor_json(&o.min)),
                    ])
                })
                .collect();
            let mut t = Table::with_header(&["order", "minors", "below_tol", "min_minor"]);
            for o in &r.per_order {
                t.push(vec![
                    o.order.to_string(),
                    o.minors.to_string(),
                    o.below_tol.to_string(),
                    dec(&o.min.value),
                ]);
            }
            let expected = *a.rational() < Rational::from((1, n as u32));
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(n)),
                ("max_order", json!(r.max_order)),
                ("tol", num(&r.tol)),
                ("minors", json!(r.minors)),
                ("below_tol", json!(r.below_tol)),
                ("rechecked", json!(r.rechecked)),
                ("min", minor_json(&r.min)),
                ("per_order", Value::Array(per_order)),
                ("is_tp", json!(r.is_tp())),
            ]))
            .table(t)
            .violated_if(expected && !r.is_tp(), "negative band minor for α < 1/n")
        }
        Cmd::Scan1 { n, alphas, points } => {
            let r = scan_conjecture1(n, &alphas.grid()?, &points.grid()?, ctx.prec)?;
            let decomp: Vec<Value> = r
                .decompositions
                .iter()
                .map(|(l, v)| obj([("label", json!(l)), ("max_rel_diff", num(v))]))
                .collect();
            let found = !r.counterexamples.is_empty();
            Report::new(obj([
                ("n", json!(n)),
                ("alpha_grid", alphas.spec()),
                ("point_grid", points.spec()),
                (
                    "alphas_scanned",
                    json!(r
                        .alphas_scanned
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()),
                ),
                (
                    "alphas_skipped",
                    json!(r
                        .alphas_skipped
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()),
                ),
                ("points", json!(r.points)),
                ("evaluations", json!(r.evaluations)),
                (
                    "min",
                    r.min.as_ref().map(sample_json).unwrap_or(Value::Null),
                ),
                (
                    "counterexamples",
                    Value::Array(r.counterexamples.iter().map(sample_json).collect()),
                ),
                ("max_imag_ratio", num(&r.max_imag_ratio)),
                ("decompositions", Value::Array(decomp)),
            ]))
            .violated_if(found, "negative F_{n,k} found for α ≤ 1/n")
        }
        Cmd::ScanTheorem {
            n,
            alphas,
            points,
            route,
        } => {
            let route = match route {
                ExactRoute::Asm => Route::Asm,
                ExactRoute::Lascoux => Route::Lascoux,
            };
            let r = scan_theorem(n, &alphas.grid()?, &points.grid()?, route, ctx.prec)?;
            let mut t = Table::with_header(&["alpha", "x", "y", "value", "sign"]);
            for c in &r.cells {
                t.push(vec![
                    c.alpha.to_string(),
                    c.x.to_string(),
                    c.y.to_string(),
                    dec(&c.value),
                    c.sign.to_string(),
                ]);
            }
            let cell = |c: &tplab_core::conjecture::HeatCell| {
                obj([
                    ("alpha", rat(&c.alpha)),
                    ("x", json!(c.x)),
                    ("y", json!(c.y)),
                    ("value", num(&c.value)),
                    ("sign", json!(c.sign)),
                ])
            };
            let witness = |w: &tplab_core::conjecture::OriginWitness| {
                obj([
                    ("alpha", rat(&w.alpha)),
                    ("order", json!(w.order)),
                    ("value", num(&w.value)),
                ])
            };
            let holds = r.holds();
            Report::new(obj([
                ("n", json!(n)),
                ("route", json!(r.route.name())),
                ("alpha_grid", alphas.spec()),
                ("point_grid", points.spec()),
                ("threshold", rat(&r.threshold)),
                ("cells", json!(r.cells.len())),
                ("min", min_cell(&r.cells).map(cell).unwrap_or(Value::Null)),
                (
                    "violations",
                    Value::Array(r.violations.iter().map(cell).collect()),
                ),
                (
                    "origin_witnesses",
                    Value::Array(r.origin_witnesses.iter().map(witness).collect()),
                ),
                (
                    "failed_witnesses",
                    Value::Array(r.failed_witnesses.iter().map(witness).collect()),
                ),
                ("holds", json!(holds)),
            ]))
            .table(t)
            .violated_if(
                !holds,
                "positivity violated below the threshold or witness not negative",
            )
        }
    })
}

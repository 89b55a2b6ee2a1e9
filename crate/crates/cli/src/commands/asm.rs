use clap::Subcommand;
use serde_json::{json, Value};
use tplab_core::asm::{
    asm_count, enumerate_asm, group_by_stats, ik_direct, ik_propp_sum, z_nk_poly,
};

use super::{complex, tuple, Res};
use crate::output::{cnum, int, num, obj, Report, Table};
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Number of n×n alternating sign matrices.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// (id, μ, ν, I, J) for every n×n ASM in enumeration order.
    Stats {
        #[arg(long)]
        n: usize,
        /// Include the matrices themselves (JSON only).
        #[arg(long)]
        matrices: bool,
    },
    /// Σ_{μ(A)=k} x^{ν(A)} with integer coefficients.
    Znk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
    },
    /// Number of ASMs for each (μ, ν).
    Group {
        #[arg(long)]
        n: usize,
    },
    /// Izergin–Korepin determinant: closed form against the Propp sum.
    IkCheck {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        q_re: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        q_im: String,
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
    },
}

pub fn run(ctx: &Ctx, cmd: Cmd) -> Res<Report> {
    Ok(match cmd {
        Cmd::Count { n } => {
            let count = asm_count(n)?;
            Report::new(obj([("n", json!(n)), ("count", json!(count))]))
        }
        Cmd::Stats { n, matrices } => {
            let mut rows = Vec::new();
            let mut t = Table::with_header(&["id", "mu", "nu", "inv", "j"]);
            for (id, a) in enumerate_asm(n)?.enumerate() {
                let s = a.stats();
                t.push(vec![
                    id.to_string(),
                    s.mu.to_string(),
                    s.nu.to_string(),
                    s.inv.to_string(),
                    s.j.to_string(),
                ]);
                let mut row = obj([
                    ("id", json!(id)),
                    ("mu", json!(s.mu)),
                    ("nu", json!(s.nu)),
                    ("inv", json!(s.inv)),
                    ("j", json!(s.j)),
                ]);
                if matrices {
                    let m: Vec<Vec<i8>> = a.rows().map(|r| r.to_vec()).collect();
                    row["matrix"] = json!(m);
                }
                rows.push(row);
            }
            Report::new(obj([
                ("n", json!(n)),
                ("count", json!(rows.len())),
                ("matrices", Value::Array(rows)),
            ]))
            .table(t)
        }
        Cmd::Znk { n, k } => {
            let p = z_nk_poly(n, k)?;
            let mut t = Table::with_header(&["degree", "coeff"]);
            for (d, c) in p.coeffs().iter().enumerate() {
                t.push(vec![d.to_string(), c.to_string()]);
            }
            Report::new(obj([
                ("n", json!(n)),
                ("k", json!(k)),
                ("coeffs", Value::Array(p.coeffs().iter().map(int).collect())),
                ("poly", json!(p.to_string())),
            ]))
            .table(t)
        }
        Cmd::Group { n } => {
            let g = group_by_stats(n)?;
            let mut t = Table::with_header(&["mu", "nu", "count"]);
            let mut classes = Vec::new();
            for (&(mu, nu), &c) in &g.counts {
                t.push(vec![mu.to_string(), nu.to_string(), c.to_string()]);
                classes.push(obj([
                    ("mu", json!(mu)),
                    ("nu", json!(nu)),
                    ("count", json!(c)),
                ]));
            }
            Report::new(obj([
                ("n", json!(n)),
                ("total", json!(g.total())),
                ("classes", Value::Array(classes)),
            ]))
            .table(t)
        }
        Cmd::IkCheck { q_re, q_im, xs, ys } => {
            let q = complex(ctx, &q_re, &q_im)?;
            let (x, y) = (tuple(ctx, &xs)?, tuple(ctx, &ys)?);
            let direct = ik_direct(&q, &x, &y)?;
            let propp = ik_propp_sum(&q, &x, &y)?;
            let d = direct.rel_diff(&propp);
            let holds = d <= ctx.tol;
            Report::new(obj([
                ("q", cnum(&q)),
                ("n", json!(x.len())),
                ("direct", cnum(&direct)),
                ("propp_sum", cnum(&propp)),
                ("rel_diff", num(&d)),
                ("tol", num(&ctx.tol)),
                ("holds", json!(holds)),
            ]))
            .violated_if(!holds, "Izergin–Korepin determinant and Propp sum differ")
        }
    })
}

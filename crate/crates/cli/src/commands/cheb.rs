use clap::Subcommand;
use serde_json::json;
use tplab_core::chebyshev::{cheb_u, q_factorial, v_product};

use super::{alpha, complex, Res};
use crate::output::{cnum, num, obj, rat, Report};
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// U_k = sin(kπα)/sin(πα).
    U {
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// V_n = U_1 U_2 ⋯ U_n.
    V {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u32,
    },
    /// ∏_{i=1}^n (1 + q + … + q^{i−1}); q from --alpha (q = e^{2πiα}) or
    /// from --q-re/--q-im.
    Qfact {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with_all = ["q_re", "q_im"])]
        alpha: Option<String>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        q_re: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        q_im: String,
    },
}

pub fn run(ctx: &Ctx, cmd: Cmd) -> Res<Report> {
    Ok(match cmd {
        Cmd::U { alpha: a, k } => {
            let a = alpha(ctx, &a)?;
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("k", json!(k)),
                ("value", num(&cheb_u(&a, k))),
            ]))
        }
        Cmd::V { alpha: a, n } => {
            let a = alpha(ctx, &a)?;
            let v = v_product(&a, n)?;
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("n", json!(n)),
                ("value", num(&v)),
            ]))
        }
        Cmd::Qfact {
            n,
            alpha: a,
            q_re,
            q_im,
        } => {
            let q = match &a {
                Some(s) => alpha(ctx, s)?.q().clone(),
                None => complex(ctx, &q_re, &q_im)?,
            };
            let v = q_factorial(&q, n)?;
            Report::new(obj([("n", json!(n)), ("q", cnum(&q)), ("value", cnum(&v))]))
        }
    })
}

use clap::Subcommand;
use serde_json::json;
use tplab_core::kernel::{eval_logistic, logistic_mgf_check};

use super::{alpha, real, rel, Res};
use crate::output::{num, obj, rat, Report};
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// g_α(x) = sin(πα) / (2πα(cosh x + cos πα)).
    Eval {
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Quadrature of ∫e^{sx} g_α(x) dx against sin(παs)/(α sin(πs)).
    MgfCheck {
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Accepted relative gap between quadrature and closed form.
        #[arg(long, default_value_t = 1e-6)]
        rel_tol: f64,
    },
}

pub fn run(ctx: &Ctx, cmd: Cmd) -> Res<Report> {
    Ok(match cmd {
        Cmd::Eval { alpha: a, x } => {
            let a = alpha(ctx, &a)?;
            let x = real(ctx, &x)?;
            let v = eval_logistic(&a, &x);
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("x", num(&x)),
                ("value", num(&v)),
            ]))
        }
        Cmd::MgfCheck {
            alpha: a,
            s,
            rel_tol,
        } => {
            let a = alpha(ctx, &a)?;
            let s = real(ctx, &s)?;
            let c = logistic_mgf_check(&a, &s)?;
            let d = rel(&c.numeric, &c.closed);
            let holds = d.to_f64() <= rel_tol;
            Report::new(obj([
                ("alpha", rat(a.rational())),
                ("s", num(&s)),
                ("numeric", num(&c.numeric)),
                ("closed", num(&c.closed)),
                ("rel_diff", num(&d)),
                ("rel_tol", json!(rel_tol)),
                ("truncation", json!(c.truncation)),
                ("evaluations", json!(c.evaluations)),
                ("holds", json!(holds)),
            ]))
            .violated_if(!holds, "quadrature and closed form disagree")
        }
    })
}

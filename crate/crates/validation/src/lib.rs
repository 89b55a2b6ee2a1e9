//! Pass/fail bookkeeping for the acceptance run.
//!
//! Each criterion is a function filling a [`Criterion`] with sub-checks. The
//! runner prints one line per criterion, the failed sub-checks under it, and
//! a summary; the process fails if any criterion does.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Default)]
pub struct Criterion {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
    /// Largest `err / tol` seen by [`Criterion::within`].
    worst: f64,
}

impl Criterion {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// `err ≤ tol`; NaN fails.
    pub fn within(&mut self, err: f64, tol: f64, what: impl FnOnce() -> String) {
        let ratio = err / tol;
        if ratio > self.worst || ratio.is_nan() {
            self.worst = ratio;
        }
        self.check(err <= tol, || {
            format!("{} (error {err:.3e}, tolerance {tol:.0e})", what())
        });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }
}

pub type CriterionFn = fn(&mut Criterion);

/// Runs the criteria whose numbers appear among the command-line arguments
/// (all of them when none do).
pub fn run(criteria: &[(u32, &str, CriterionFn)]) -> ExitCode {
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    panic::set_hook(Box::new(|_| {}));
    let mut passed = 0;
    let mut ran = 0;
    for &(id, title, f) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let mut c = Criterion::default();
        if let Err(payload) = panic::catch_unwind(AssertUnwindSafe(|| f(&mut c))) {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "non-string panic".into());
            c.failures.push(format!("panicked: {msg}"));
        }
        let ok = c.passed();
        passed += ok as usize;
        let worst = if c.worst > 0.0 {
            format!(", worst error/tolerance {:.1e}", c.worst)
        } else {
            String::new()
        };
        println!(
            "criterion {id:02} {}  {title}  [{} checks, {} failed{worst}, {:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            c.checks,
            c.failures.len(),
            start.elapsed().as_secs_f64()
        );
        for f in c.failures.iter().take(24) {
            println!("    fail: {f}");
        }
        if c.failures.len() > 24 {
            println!("    … {} more", c.failures.len() - 24);
        }
        for n in &c.notes {
            println!("    note: {n}");
        }
    }
    println!("acceptance: {passed} of {ran} criteria passed");
    if passed == ran {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

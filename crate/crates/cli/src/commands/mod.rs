mod audits;
mod quantizer;
mod sweep;

pub use audits::{audit_model, audit_symbols, audit_weight, boundary_samples};
pub use quantizer::audit_wick;
pub use sweep::run_sweep;

use std::ops::BitAnd;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl BitAnd for Verdict {
    type Output = Verdict;
    fn bitand(self, rhs: Verdict) -> Verdict {
        Verdict::from_pass(self == Verdict::Pass && rhs == Verdict::Pass)
    }
}

pub(crate) fn pass_cell(ok: bool) -> &'static str {
    if ok {
        "true"
    } else {
        "false"
    }
}

pub(crate) const SKIPPED: &str = "skipped";

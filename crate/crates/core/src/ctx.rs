use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Execution settings shared by the bounded searches: width caps, enumeration
/// budgets and a cooperative cancellation flag.
#[derive(Clone, Debug)]
pub struct Ctx {
    /// Upper bound on certificate widths. `None` selects each operation's default.
    pub width_cap: Option<usize>,
    /// Upper bound on the number of candidates an exhaustive search may visit.
    pub budget: u64,
    /// Largest order accepted by the brute-force isomorphism test.
    pub iso_bound: usize,
    cancel: Option<Arc<AtomicBool>>,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx {
            width_cap: None,
            budget: 50_000_000,
            iso_bound: 24,
            cancel: None,
        }
    }
}

impl Ctx {
    pub fn with_width_cap(mut self, cap: usize) -> Self {
        self.width_cap = Some(cap);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    /// The cap to use when an operation's default would be `default`.
    pub fn cap_or(&self, default: usize) -> usize {
        self.width_cap.unwrap_or(default)
    }

    pub fn checkpoint(&self) -> Result<()> {
        match &self.cancel {
            Some(flag) if flag.load(Ordering::Relaxed) => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }
}

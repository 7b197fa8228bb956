//! Resource caps and cooperative cancellation for the enumerative operations.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Cooperative cancellation token. Long enumerations poll it and abort with a
/// resource error once it has been triggered.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Caps for the brute-force paths. Every limit is overridable; the defaults
/// keep each operation interactive on small inputs.
#[derive(Clone, Debug)]
pub struct Config {
    /// Largest monoid a syntactic-monoid or product construction may build.
    pub monoid_cap: usize,
    /// Largest derived alphabet (|Sigma|^s) a stable stamp may build.
    pub alphabet_cap: usize,
    /// Largest host monoid accepted by the brute-force division test.
    pub division_cap: usize,
    /// Largest number of words an exhaustive enumeration may visit.
    pub enumeration_cap: u64,
    /// Largest mask length for exhaustive safety checking of a completion set.
    pub safety_cap: usize,
    /// Seed for every sampled (non-exhaustive) check.
    pub seed: u64,
    pub cancel: CancelToken,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            monoid_cap: 64,
            alphabet_cap: 4096,
            division_cap: 12,
            enumeration_cap: 2_000_000,
            safety_cap: 12,
            seed: 0,
            cancel: CancelToken::new(),
        }
    }
}

impl Config {
    /// Bail out if the token was triggered. Enumerations call this every few
    /// thousand steps.
    pub fn check_cancelled(&self) -> Result<()> {
        if self.cancel.is_cancelled() {
            Err(Error::resource("operation cancelled"))
        } else {
            Ok(())
        }
    }
}

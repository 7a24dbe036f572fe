//! Enumeration budget: an upper limit on the number of visited candidates.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 200_000_000;
pub const BUDGET_ENV: &str = "GKSIEGEL_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        assert!(limit > 0, "budget must be positive");
        Self { limit }
    }

    /// The default budget, overridden by `GKSIEGEL_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => match v.trim().parse::<u64>() {
                Ok(n) if n > 0 => Ok(Self::new(n)),
                _ => Err(Error::invalid(format!("{BUDGET_ENV} must be a positive integer, got {v:?}"))),
            },
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Accepts `needed` visits (`None` = overflow) or fails with a budget error.
    pub fn check(&self, needed: Option<u128>) -> Result<()> {
        match needed {
            Some(v) if v <= self.limit as u128 => Ok(()),
            Some(v) => Err(Error::Budget { needed: v.to_string(), budget: self.limit }),
            None => Err(self.exceeded_by("more than 2^128")),
        }
    }

    pub fn exceeded_by(&self, needed: &str) -> Error {
        Error::Budget { needed: needed.to_string(), budget: self.limit }
    }
}

//! Monte Carlo simulation of the layered random code: superposition
//! codebook forest, bin selection by joint typicality, exhaustive typicality
//! decoding at both receivers, and an empirical covering experiment.
//!
//! Typicality is letter typicality with slack `epsilon`. At desk-scale
//! blocklengths it is fragile: every positive-probability joint symbol must
//! appear with a count close to `n * P(a)`, so typical sets are often empty
//! or tiny unless the joint law has a small support.

mod covering;
mod engine;
mod forest;
mod order;
mod report;
mod typical;


use thiserror::Error;

use crate::channel::ChannelSpec;
use crate::pmf::{FactorizationSpec, JointPmf, PmfError};
use crate::region::{BinRates, RatePoint, RATE_NAMES};

pub use covering::{covering_experiment, covering_thresholds, scaled_bins, CoveringReport, CoveringSetup};
pub use engine::{decode, encode, label, wrong_roles, DecodeLabel, Decoded, EncodeOutput, EncodingEvents, Engine, Messages};
pub use forest::{CodebookForest, CLOUDS};
pub use order::LambdaOrder;
pub use report::{run_trial, run_trials, trial_rng, SimReport, SimSummary, TrialOutcome};
pub use typical::{is_typical, TypicalityParams};

/// Variable order used by the simulator's reference joint.
pub const SIM_VARS: [&str; 13] = [
    "W0", "U0", "V0", "W1", "U1", "V1", "W2", "U2", "V2", "X1", "X2", "Y1", "Y2",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("blocklength must lie in [1, 65536], got {0}")]
    BadBlocklength(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {symbol} out of range for {var}")]
    SymbolOutOfRange { var: String, symbol: usize },
    #[error("{what} needs {needed} entries, above the budget of {cap} (set INGMS_BUDGET to raise it)")]
    BudgetExceeded { what: String, needed: u128, cap: u64 },
    #[error("number of trials must be positive")]
    NoTrials,
    #[error("message index out of range")]
    MessageOutOfRange,
    #[error("no typical premise found after {0} draws")]
    NoTypicalPremise(usize),
    #[error("bad budget setting: {0}")]
    BadBudget(String),
    #[error(transparent)]
    Pmf(#[from] PmfError),
}

/// Caps on codebook and decoder-scan sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Codewords per layer.
    pub codewords: u64,
    /// Index tuples per decoder scan.
    pub scan: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            codewords: 1 << 16,
            scan: 1 << 22,
        }
    }
}

impl Budget {
    pub const ENV: &'static str = "INGMS_BUDGET";

    /// Accepts `N` (both caps) or `codewords=N,scan=M` (either part optional).
    pub fn parse(text: &str) -> Result<Self, SimError> {
        let bad = || SimError::BadBudget(text.to_string());
        let mut b = Self::default();
        let text = text.trim();
        if let Ok(v) = text.parse::<u64>() {
            return Ok(Self {
                codewords: v,
                scan: v,
            });
        }
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "codewords" => b.codewords = v,
                "scan" => b.scan = v,
                _ => return Err(bad()),
            }
        }
        Ok(b)
    }

    /// Defaults, overridden by `INGMS_BUDGET` when set.
    pub fn from_env() -> Result<Self, SimError> {
        match std::env::var(Self::ENV) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    pub(crate) fn check(&self, what: &str, needed: u128, cap: u64) -> Result<(), SimError> {
        if needed > u128::from(cap) {
            Err(SimError::BudgetExceeded {
                what: what.to_string(),
                needed,
                cap,
            })
        } else {
            Ok(())
        }
    }
}

/// `ceil(2^{n r})`, with a little slack so integral exponents stay exact.
pub fn codebook_size(n: usize, r: f64) -> u128 {
    let e = n as f64 * r;
    if e >= 120.0 {
        return u128::MAX;
    }
    (e.exp2() - 1e-9).ceil().max(1.0) as u128
}

/// Message and bin counts per index axis, in [`RATE_NAMES`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes {
    pub messages: [usize; 9],
    /// Bin counts; the common-common axis is never binned.
    pub bins: [usize; 9],
}

impl Sizes {
    pub fn new(n: usize, rates: &RatePoint, bins: &BinRates, budget: &Budget) -> Result<Self, SimError> {
        let mut messages = [1; 9];
        let mut bs = [1; 9];
        for (k, name) in RATE_NAMES.iter().enumerate() {
            let m = codebook_size(n, rates.get(name));
            let b = if k == 0 {
                1
            } else {
                codebook_size(n, bins.get(&name.replacen('R', "B", 1)))
            };
            budget.check(&format!("axis {name}"), m.saturating_mul(b), budget.codewords)?;
            messages[k] = m as usize;
            bs[k] = b as usize;
        }
        Ok(Self { messages, bins: bs })
    }

    /// Combined (message, bin) count of axis `k`.
    pub fn axis(&self, k: usize) -> usize {
        self.messages[k] * self.bins[k]
    }

    pub fn join(&self, k: usize, m: usize, b: usize) -> usize {
        m * self.bins[k] + b
    }

    pub fn message(&self, k: usize, j: usize) -> usize {
        j / self.bins[k]
    }

    pub fn bin(&self, k: usize, j: usize) -> usize {
        j % self.bins[k]
    }
}

/// Everything a simulation run needs.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub rates: RatePoint,
    pub bins: BinRates,
    pub typ: TypicalityParams,
    /// Joint law of all auxiliaries, inputs and outputs, in [`SIM_VARS`] order.
    pub joint: JointPmf,
    pub channel: ChannelSpec,
    /// May be zero, which yields an empty report.
    pub trials: usize,
    pub seed: u64,
    pub ord2: LambdaOrder,
    pub ord3: LambdaOrder,
    pub budget: Budget,
}

impl SimConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rates: RatePoint,
        bins: BinRates,
        typ: TypicalityParams,
        factorization: &FactorizationSpec,
        channel: ChannelSpec,
        trials: usize,
        seed: u64,
    ) -> Result<Self, SimError> {
        let joint = factorization.build_joint(&channel)?;
        Self::from_joint(rates, bins, typ, joint, channel, trials, seed)
    }

    /// `joint` must contain every name in [`SIM_VARS`], with `Y1, Y2` driven
    /// by `channel`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_joint(
        rates: RatePoint,
        bins: BinRates,
        typ: TypicalityParams,
        joint: JointPmf,
        channel: ChannelSpec,
        trials: usize,
        seed: u64,
    ) -> Result<Self, SimError> {
        let joint = joint.marginalize(&SIM_VARS)?.reorder(&SIM_VARS)?;
        let cfg = Self {
            rates,
            bins,
            typ,
            joint,
            channel,
            trials,
            seed,
            ord2: LambdaOrder::default(),
            ord3: LambdaOrder::default(),
            budget: Budget::from_env()?,
        };
        cfg.sizes()?;
        Ok(cfg)
    }

    pub fn sizes(&self) -> Result<Sizes, SimError> {
        Sizes::new(self.typ.n, &self.rates, &self.bins, &self.budget)
    }
}

//! Independent trials, and their CSV and JSON reports.

use std::collections::BTreeMap;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::round_sig;
use crate::region::{Rx, BIN_NAMES, RATE_NAMES};

use super::engine::{decode, encode, label, DecodeLabel, Engine, Messages};
use super::{SimConfig, SimError};

/// What happened in one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: usize,
    /// `E1e..E4e`.
    pub encoding: [bool; 4],
    pub rx1: DecodeLabel,
    pub rx2: DecodeLabel,
}

impl TrialOutcome {
    pub fn is_error(&self) -> bool {
        self.rx1.is_error() || self.rx2.is_error()
    }
}

/// Random source of trial `trial`: the run seed selects the key, the trial
/// number the stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs one trial: fresh forest, uniform messages, encoding, channel, and
/// decoding at both receivers.
pub fn run_trial(engine: &Engine, seed: u64, trial: usize) -> Result<TrialOutcome, SimError> {
    let mut rng = trial_rng(seed, trial);
    let forest = engine.generate_forest(&mut rng)?;
    let msgs = Messages::random(&engine.sizes, &mut rng);
    let enc = encode(engine, &forest, &msgs, &mut rng)?;
    let (y1, y2) = engine.transmit(&enc.x1, &enc.x2, &mut rng);
    let d1 = decode(engine, &forest, &y1, Rx::One)?;
    let d2 = decode(engine, &forest, &y2, Rx::Two)?;
    Ok(TrialOutcome {
        trial,
        encoding: enc.events.as_array(),
        rx1: label(&d1, &enc.j9, Rx::One, &engine.sizes),
        rx2: label(&d2, &enc.j9, Rx::Two, &engine.sizes),
    })
}

/// Aggregate counts and rates of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub n: usize,
    pub epsilon: f64,
    /// Whether `epsilon < p_min` of the reference joint.
    pub epsilon_below_p_min: bool,
    pub trials: usize,
    pub seed: u64,
    pub rates: BTreeMap<String, f64>,
    pub bins: BTreeMap<String, f64>,
    pub message_counts: BTreeMap<String, usize>,
    pub bin_counts: BTreeMap<String, usize>,
    pub encoding_events: BTreeMap<String, usize>,
    pub rx1_errors: usize,
    pub rx2_errors: usize,
    pub total_errors: usize,
    pub rx1_error_rate: f64,
    pub rx2_error_rate: f64,
    pub total_error_rate: f64,
    pub rx1_stderr: f64,
    pub rx2_stderr: f64,
    pub total_stderr: f64,
    pub rx1_labels: BTreeMap<String, usize>,
    pub rx2_labels: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub outcomes: Vec<TrialOutcome>,
    pub summary: SimSummary,
}

fn rate_and_se(count: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 0.0);
    }
    let p = count as f64 / trials as f64;
    (round_sig(p, 12), round_sig((p * (1.0 - p) / trials as f64).sqrt(), 12))
}

/// Runs every trial (in parallel; results are ordered by trial number and
/// do not depend on scheduling).
pub fn run_trials(cfg: &SimConfig) -> Result<SimReport, SimError> {
    let engine = Engine::new(cfg)?;
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(&engine, cfg.seed, t))
        .collect::<Result<_, _>>()?;
    Ok(summarize(cfg, &engine, outcomes))
}

fn summarize(cfg: &SimConfig, engine: &Engine, outcomes: Vec<TrialOutcome>) -> SimReport {
    let t = outcomes.len();
    let count = |f: &dyn Fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let rx1_errors = count(&|o| o.rx1.is_error());
    let rx2_errors = count(&|o| o.rx2.is_error());
    let total_errors = count(&|o| o.is_error());
    let mut encoding_events = BTreeMap::new();
    for k in 0..4 {
        encoding_events.insert(format!("E{}e", k + 1), count(&|o| o.encoding[k]));
    }
    let hist = |f: &dyn Fn(&TrialOutcome) -> DecodeLabel| {
        let mut h = BTreeMap::new();
        for o in &outcomes {
            *h.entry(f(o).to_string()).or_insert(0) += 1;
        }
        h
    };
    let (r1, s1) = rate_and_se(rx1_errors, t);
    let (r2, s2) = rate_and_se(rx2_errors, t);
    let (rt, st) = rate_and_se(total_errors, t);
    let sz = &engine.sizes;
    let summary = SimSummary {
        n: cfg.typ.n,
        epsilon: cfg.typ.epsilon,
        epsilon_below_p_min: cfg.typ.below_p_min(&cfg.joint),
        trials: t,
        seed: cfg.seed,
        rates: RATE_NAMES.iter().map(|r| (r.to_string(), cfg.rates.get(r))).collect(),
        bins: BIN_NAMES.iter().map(|b| (b.to_string(), cfg.bins.get(b))).collect(),
        message_counts: RATE_NAMES
            .iter()
            .enumerate()
            .map(|(k, r)| (r.to_string(), sz.messages[k]))
            .collect(),
        bin_counts: BIN_NAMES
            .iter()
            .enumerate()
            .map(|(k, b)| (b.to_string(), sz.bins[k + 1]))
            .collect(),
        encoding_events,
        rx1_errors,
        rx2_errors,
        total_errors,
        rx1_error_rate: r1,
        rx2_error_rate: r2,
        total_error_rate: rt,
        rx1_stderr: s1,
        rx2_stderr: s2,
        total_stderr: st,
        rx1_labels: hist(&|o| o.rx1),
        rx2_labels: hist(&|o| o.rx2),
    };
    SimReport { outcomes, summary }
}

impl SimReport {
    /// One row per trial: `trial,E1e,E2e,E3e,E4e,rx1_label,rx2_label`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["trial", "E1e", "E2e", "E3e", "E4e", "rx1_label", "rx2_label"])?;
        for o in &self.outcomes {
            let mut rec = vec![o.trial.to_string()];
            rec.extend(o.encoding.iter().map(|&e| u8::from(e).to_string()));
            rec.push(o.rx1.to_string());
            rec.push(o.rx2.to_string());
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }
}

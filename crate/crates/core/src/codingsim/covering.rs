//! Empirical check of the multivariate covering step: given a typical
//! `(w0, u0, v0)`, does some `(W1, U1, V1)` codeword triple among the bins
//! complete a jointly typical tuple?

use rand::Rng;
use serde::Serialize;

use crate::format::round_sig;
use crate::pmf::{Info, JointPmf};

use super::forest::CondSampler;
use super::report::trial_rng;
use super::typical::Checker;
use super::{codebook_size, Budget, SimError, TypicalityParams};

const COVER_VARS: [&str; 6] = ["W0", "U0", "V0", "W1", "U1", "V1"];
/// Draws allowed when sampling the typical premise.
const PREMISE_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone)]
pub struct CoveringSetup {
    /// Law of `W0, U0, V0, W1, U1, V1`; a missing `W0` is taken as constant.
    pub joint: JointPmf,
    /// Bin rates `(B0, B1, B2)` of the `W1`, `U1` and `V1` codebooks.
    pub bins: [f64; 3],
    /// Blocklength and the slack of the covering test.
    pub typ: TypicalityParams,
    /// Slack of the premise, below `typ.epsilon`.
    pub epsilon1: f64,
    pub trials: usize,
    pub seed: u64,
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringReport {
    pub trials: usize,
    pub no_cover: usize,
    pub no_cover_rate: f64,
    pub stderr: f64,
    /// Thresholds on `B0`, `B0+B1`, `B0+B2`, `B0+B1+B2`.
    pub thresholds: [f64; 4],
    pub bins: [f64; 3],
    pub codebook_sizes: [usize; 3],
}

fn normalize(joint: &JointPmf) -> Result<JointPmf, SimError> {
    let j = if joint.contains("W0") {
        joint.clone()
    } else {
        let mut vars = vec![("W0".to_string(), 1)];
        vars.extend(joint.vars().iter().cloned());
        JointPmf::new(vars, joint.probs().to_vec())?
    };
    Ok(j.marginalize(&COVER_VARS)?.reorder(&COVER_VARS)?)
}

/// Lower bounds on `B0`, `B0+B1`, `B0+B2` and `B0+B1+B2` for covering,
/// all conditioned on `W0`.
pub fn covering_thresholds(joint: &JointPmf) -> Result<[f64; 4], SimError> {
    let j = normalize(joint)?;
    let info = Info::new(&j);
    let mi = |a: &[&str], b: &[&str], g: &[&str]| info.mi(a, b, g);
    let t0 = mi(&["U0", "V0"], &["W1"], &["W0"])?;
    let a = mi(&["V0"], &["U1"], &["W0", "U0", "W1"])?;
    let b = mi(&["U0"], &["V1"], &["W0", "V0", "W1"])?;
    let c = mi(&["U0", "U1"], &["V1"], &["W0", "V0", "W1"])?;
    Ok([t0, t0 + a, t0 + b, t0 + a + c])
}

/// The smallest bin triple meeting `thresholds` (filling `B0` first, then
/// `B1` and `B2`, splitting any remaining sum deficit evenly), times `factor`.
pub fn scaled_bins(thresholds: [f64; 4], factor: f64) -> [f64; 3] {
    let b0 = thresholds[0].max(0.0);
    let mut b1 = (thresholds[1] - b0).max(0.0);
    let mut b2 = (thresholds[2] - b0).max(0.0);
    let deficit = thresholds[3] - (b0 + b1 + b2);
    if deficit > 0.0 {
        b1 += deficit / 2.0;
        b2 += deficit / 2.0;
    }
    [b0 * factor, b1 * factor, b2 * factor]
}

/// Fraction of trials in which no codeword triple covers the premise.
pub fn covering_experiment(setup: &CoveringSetup) -> Result<CoveringReport, SimError> {
    if setup.trials == 0 {
        return Err(SimError::NoTrials);
    }
    if !(setup.epsilon1 > 0.0 && setup.epsilon1 < setup.typ.epsilon) {
        return Err(SimError::BadEpsilon(setup.epsilon1));
    }
    let j = normalize(&setup.joint)?;
    let n = setup.typ.n;
    let sizes = setup.bins.map(|b| codebook_size(n, b));
    let b = &setup.budget;
    b.check("W1 codebook", sizes[0], b.codewords)?;
    b.check("U1 codebook", sizes[0].saturating_mul(sizes[1]), b.codewords)?;
    b.check("V1 codebook", sizes[0].saturating_mul(sizes[2]), b.codewords)?;
    let sizes = sizes.map(|s| s as usize);

    let typ1 = TypicalityParams::new(setup.epsilon1, n)?;
    let premise = Checker::from_joint(&j, 0b111, typ1);
    let base = CondSampler::new(&j, &[], 0);
    let u0s = CondSampler::new(&j, &[0], 1);
    let v0s = CondSampler::new(&j, &[0, 1], 2);
    let w1s = CondSampler::new(&j, &[0], 3);
    let u1s = CondSampler::new(&j, &[0, 1, 3], 4);
    let v1s = CondSampler::new(&j, &[0, 2, 3], 5);
    let typ = setup.typ;
    let cw = Checker::from_joint(&j, 0b1111, typ);
    let cu = Checker::from_joint(&j, 0b11111, typ);
    let cv = Checker::from_joint(&j, 0b101111, typ);
    let call = Checker::from_joint(&j, 0b111111, typ);

    let mut no_cover = 0;
    for trial in 0..setup.trials {
        let mut rng = trial_rng(setup.seed, trial);
        let mut scratch = Vec::new();
        let (mut w0, mut u0, mut v0) = (Vec::new(), Vec::new(), Vec::new());
        let mut ok = false;
        for _ in 0..PREMISE_ATTEMPTS {
            w0.clear();
            u0.clear();
            v0.clear();
            base.sample(&[], n, &mut rng, &mut w0);
            u0s.sample(&[&w0], n, &mut rng, &mut u0);
            v0s.sample(&[&w0, &u0], n, &mut rng, &mut v0);
            if premise.check(&[&w0, &u0, &v0], &mut scratch) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(SimError::NoTypicalPremise(PREMISE_ATTEMPTS));
        }
        if !covered(&mut rng, n, sizes, [&w0, &u0, &v0], [&w1s, &u1s, &v1s], [&cw, &cu, &cv, &call], &mut scratch) {
            no_cover += 1;
        }
    }
    let p = no_cover as f64 / setup.trials as f64;
    Ok(CoveringReport {
        trials: setup.trials,
        no_cover,
        no_cover_rate: round_sig(p, 12),
        stderr: round_sig((p * (1.0 - p) / setup.trials as f64).sqrt(), 12),
        thresholds: covering_thresholds(&j)?.map(|t| round_sig(t, 12)),
        bins: setup.bins,
        codebook_sizes: sizes,
    })
}

/// Draws the codebooks lazily (a `W1` codeword's satellites are drawn only
/// when it is itself typical with the premise, which leaves the law of the
/// outcome unchanged) and reports whether any triple is typical.
#[allow(clippy::too_many_arguments)]
fn covered<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    sizes: [usize; 3],
    premise: [&[u8]; 3],
    samplers: [&CondSampler; 3],
    checkers: [&Checker; 4],
    scratch: &mut Vec<u32>,
) -> bool {
    let [w0, u0, v0] = premise;
    let mut w1 = Vec::with_capacity(n);
    for _ in 0..sizes[0] {
        w1.clear();
        samplers[0].sample(&[w0], n, rng, &mut w1);
        if !checkers[0].check(&[w0, u0, v0, &w1], scratch) {
            continue;
        }
        let mut us = Vec::new();
        for _ in 0..sizes[1] {
            let mut u1 = Vec::with_capacity(n);
            samplers[1].sample(&[w0, u0, &w1], n, rng, &mut u1);
            if checkers[1].check(&[w0, u0, v0, &w1, &u1], scratch) {
                us.push(u1);
            }
        }
        let mut vs = Vec::new();
        for _ in 0..sizes[2] {
            let mut v1 = Vec::with_capacity(n);
            samplers[2].sample(&[w0, v0, &w1], n, rng, &mut v1);
            if checkers[2].check(&[w0, u0, v0, &w1, &v1], scratch) {
                vs.push(v1);
            }
        }
        for u1 in &us {
            for v1 in &vs {
                if checkers[3].check(&[w0, u0, v0, &w1, u1, v1], scratch) {
                    return true;
                }
            }
        }
    }
    false
}

//! The subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ingms_core::codingsim::{covering_experiment, covering_thresholds, run_trials, scaled_bins, CoveringSetup};
use ingms_core::diagnostics::run_checks;
use ingms_core::format::{fmt_sig, round_sig};
use ingms_core::region::{
    enlarge, hk_region, ingms_project, ingms_system, mac_common_region, marton_region, orthogonal_capacity,
    RATE_NAMES,
};
use ingms_core::{BinRates, Budget, LambdaOrder, LinSys, RatePoint, SimConfig, TypicalityParams};
use serde::Serialize;

use crate::inputs::{complete, constants, ingms_joint, joint_for, load_channel, load_factorization, Kind};

/// What was run, with which inputs, written next to every output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub params: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunManifest {
    fn new(command: &str, inputs: &[Option<&PathBuf>], seed: Option<u64>, out: Option<&PathBuf>) -> Self {
        RunManifest {
            command: command.into(),
            inputs: inputs.iter().flatten().map(|p| (*p).clone()).collect(),
            params: BTreeMap::new(),
            seed,
            out: out.cloned(),
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    fn write(&self, stem: &Path) -> Result<()> {
        write_file(&with_suffix(stem, ".manifest.json"), &serde_json::to_string_pretty(self)?)
    }
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub struct RegionArgs<'a> {
    pub channel: &'a PathBuf,
    pub factorization: Option<&'a PathBuf>,
    pub kind: Kind,
    pub enlarge: bool,
}

fn build_region(a: &RegionArgs, member: bool) -> Result<(LinSys, Vec<crate::inputs::Constant>)> {
    let ch = load_channel(a.channel)?;
    let f = a.factorization.map(|p| load_factorization(p)).transpose()?;
    let j = joint_for(a.kind, f, &ch)?;
    if a.enlarge && !matches!(a.kind, Kind::Ingms | Kind::IngmsProjected) {
        bail!("--enlarge applies only to the ingms kinds");
    }
    let sys = match a.kind {
        Kind::Ingms if !member => {
            let s = ingms_system(&j)?;
            if a.enlarge {
                enlarge(&s)?
            } else {
                s
            }
        }
        Kind::Ingms | Kind::IngmsProjected => {
            let s = ingms_project(&j)?.remove_redundant();
            if a.enlarge {
                enlarge(&s)?.remove_redundant()
            } else {
                s
            }
        }
        Kind::Mac => mac_common_region(&j)?,
        Kind::Marton => marton_region(&j)?,
        Kind::Orthogonal => orthogonal_capacity(&j)?,
        Kind::Hk => hk_region(&j)?,
    };
    let mut consts = constants(a.kind, &j)?;
    for c in &mut consts {
        c.value = round_sig(c.value, 12);
    }
    Ok((sys, consts))
}

pub fn region(a: RegionArgs, out: Option<&PathBuf>) -> Result<()> {
    let (sys, consts) = build_region(&a, false)?;
    let text = sys.to_string();
    let json = serde_json::to_string_pretty(&consts)?;
    match out {
        Some(stem) => {
            write_file(&with_suffix(stem, ".txt"), &text)?;
            write_file(&with_suffix(stem, ".constants.json"), &json)?;
            RunManifest::new("region", &[Some(a.channel), a.factorization], None, out)
                .param("kind", serde_json::to_value(a.kind)?.as_str().unwrap_or_default())
                .param("enlarge", a.enlarge)
                .write(stem)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn rate_names(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Mac | Kind::Marton => &["R0", "R1", "R2"],
        Kind::Hk => &["R1", "R2"],
        _ => &RATE_NAMES,
    }
}

fn parse_rates(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut m = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').with_context(|| format!("expected NAME=VALUE, got {item:?}"))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            bail!("unknown rate {k:?} (expected one of {})", allowed.join(", "));
        }
        let v: f64 = v.trim().parse().with_context(|| format!("bad number in {item:?}"))?;
        if !(v.is_finite() && v >= 0.0) {
            bail!("rate {k} must be finite and nonnegative");
        }
        m.insert(k.to_string(), v);
    }
    Ok(m)
}

/// Prints `true` or `false`; on `false` also the first violated row.
pub fn member(a: RegionArgs, rates: &str) -> Result<bool> {
    let point = parse_rates(rates, rate_names(a.kind))?;
    let (sys, _) = build_region(&a, true)?;
    let value = |n: &str| Some(point.get(n).copied().unwrap_or(0.0));
    let violated = sys.violations(value, 1e-9)?;
    match violated.first() {
        None => println!("true"),
        Some((row, by)) => {
            println!("false");
            println!("violated: {row}  (exceeded by {})", fmt_sig(*by, 12));
        }
    }
    Ok(violated.is_empty())
}

pub struct SimulateArgs<'a> {
    pub channel: &'a PathBuf,
    pub factorization: &'a PathBuf,
    pub rates: &'a str,
    pub bins: &'a str,
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub order: LambdaOrder,
}

pub fn simulate(a: SimulateArgs, out: Option<&PathBuf>) -> Result<()> {
    let ch = load_channel(a.channel)?;
    let j = ingms_joint(load_factorization(a.factorization)?, &ch)?;
    let mut cfg = SimConfig::from_joint(
        RatePoint::parse(a.rates)?,
        BinRates::parse(a.bins)?,
        TypicalityParams::new(a.epsilon, a.n)?,
        j,
        ch,
        a.trials,
        a.seed,
    )?;
    cfg.ord2 = a.order;
    cfg.ord3 = a.order;
    let report = run_trials(&cfg)?;
    let summary = report.summary_json();
    if let Some(stem) = out {
        let path = with_suffix(stem, ".csv");
        let file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        report.write_csv(file)?;
        write_file(&with_suffix(stem, ".json"), &summary)?;
        RunManifest::new("simulate", &[Some(a.channel), Some(a.factorization)], Some(a.seed), out)
            .param("rates", a.rates)
            .param("bins", a.bins)
            .param("n", a.n)
            .param("epsilon", a.epsilon)
            .param("trials", a.trials)
            .param("order", format!("{:?}", a.order).to_lowercase())
            .param("budget", format!("{:?}", cfg.budget))
            .write(stem)?;
    }
    println!("{summary}");
    Ok(())
}

pub struct CoveringArgs<'a> {
    pub factorization: &'a PathBuf,
    pub bins: Option<&'a str>,
    pub scale: Option<f64>,
    pub n: usize,
    pub epsilon: f64,
    pub epsilon1: Option<f64>,
    pub trials: usize,
    pub seed: u64,
}

const COVER_BINS: [&str; 3] = ["B10", "B11", "B12"];

pub fn covering(a: CoveringArgs, out: Option<&PathBuf>) -> Result<()> {
    let f = complete(load_factorization(a.factorization)?, &crate::inputs::AUXILIARIES[..6]);
    let joint = f.build()?;
    let thresholds = covering_thresholds(&joint)?;
    let bins = match (a.bins, a.scale) {
        (Some(_), Some(_)) => bail!("give either --bins or --scale"),
        (Some(text), None) => {
            let m = parse_rates(text, &COVER_BINS)?;
            COVER_BINS.map(|b| m.get(b).copied().unwrap_or(0.0))
        }
        (None, Some(s)) => scaled_bins(thresholds, s),
        (None, None) => scaled_bins(thresholds, 1.0),
    };
    let setup = CoveringSetup {
        joint,
        bins,
        typ: TypicalityParams::new(a.epsilon, a.n)?,
        epsilon1: a.epsilon1.unwrap_or(0.9 * a.epsilon),
        trials: a.trials,
        seed: a.seed,
        budget: Budget::from_env()?,
    };
    let report = covering_experiment(&setup)?;
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(stem) = out {
        write_file(&with_suffix(stem, ".json"), &json)?;
        RunManifest::new("covering", &[Some(a.factorization)], Some(a.seed), out)
            .param("bins", format!("{bins:?}"))
            .param("n", a.n)
            .param("epsilon", a.epsilon)
            .param("epsilon1", setup.epsilon1)
            .param("trials", a.trials)
            .write(stem)?;
    }
    println!("{json}");
    Ok(())
}

/// Runs every diagnostic suite; returns whether all passed.
pub fn check(seed: u64, out: Option<&PathBuf>) -> Result<bool> {
    let reports = run_checks(seed);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.summary_line());
        text.push('\n');
        for d in &r.details {
            text.push_str("  ");
            text.push_str(d);
            text.push('\n');
        }
    }
    print!("{text}");
    if let Some(stem) = out {
        write_file(&with_suffix(stem, ".txt"), &text)?;
        RunManifest::new("check", &[], Some(seed), out).write(stem)?;
    }
    Ok(reports.iter().all(|r| r.passed))
}

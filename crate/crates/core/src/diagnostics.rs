//! Self-checks behind the `check` command: identities that must hold
//! exactly, and agreement between the general region and its classical
//! special cases on random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fme::{equivalent, LinSys};
use crate::format::fmt_sig;
use crate::random::{
    random_channel, random_dist, random_ingms_joint, random_marton_law, random_orthogonal_channel,
    random_sharp_bc, random_sharp_mac,
};
use crate::region::{
    compare_bounds, hk_ingms_joint, hk_joint, hk_region, hk_via_ingms, mac_common_region,
    mac_ingms_joint, mac_joint, mac_via_ingms, marton_ingms_joint, marton_joint, marton_region,
    marton_via_ingms, orthogonal_capacity_constants, orthogonal_direct_constants,
    orthogonal_ingms_joint, orthogonal_joint, OrthogonalInputs, RegionError,
};

/// Tolerance of the exact identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Membership slack on grid points.
const GRID_TOL: f64 = 1e-9;
/// Draws allowed when looking for a broadcast law with a nonempty region.
const MARTON_ATTEMPTS: usize = 1000;

/// Outcome of one diagnostic suite.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Largest deviation seen (for agreement checks, the fraction of
    /// disagreeing points).
    pub max_deviation: f64,
    pub details: Vec<String>,
}

impl CheckReport {
    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: max deviation {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            fmt_sig(self.max_deviation, 12)
        )
    }
}

fn rows<R: Rng + ?Sized>(rng: &mut R, count: usize, k: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| random_dist(rng, k)).collect()
}

/// The general decoding constants of the embedded orthogonal network equal
/// the orthogonal capacity constants.
pub fn check_orthogonal_identity(laws: usize, seed: u64) -> Result<CheckReport, RegionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for k in 0..laws {
        let o = random_orthogonal_channel(&mut rng, 2, 2, 2);
        let d = OrthogonalInputs::random(&mut rng, 2, &o);
        let cap = orthogonal_capacity_constants(&orthogonal_joint(&d, &o)?)?;
        let direct = orthogonal_direct_constants(&orthogonal_ingms_joint(&d, &o)?)?;
        let dev = cap
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        details.push(format!("law {k}: max |delta| {}", fmt_sig(dev, 12)));
    }
    Ok(CheckReport {
        name: "orthogonal identity".into(),
        passed: worst < IDENTITY_TOL,
        max_deviation: worst,
        details,
    })
}

/// Every printed decoding bound against the general superposition rule.
/// Deltas are reported as computed; the check fails only if a bound cannot
/// be evaluated.
pub fn check_bound_deltas(joints: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    let mut passed = true;
    for k in 0..joints {
        let j = random_ingms_joint(&mut rng);
        match compare_bounds(&j) {
            Ok(cmp) => {
                for c in cmp {
                    worst = worst.max(c.delta().abs());
                    details.push(format!(
                        "joint {k} E{}@{}: printed {} general {} delta {}",
                        c.event,
                        c.rx.output(),
                        fmt_sig(c.printed, 12),
                        fmt_sig(c.general, 12),
                        fmt_sig(c.delta(), 12)
                    ));
                }
            }
            Err(e) => {
                passed = false;
                details.push(format!("joint {k}: {e}"));
            }
        }
    }
    CheckReport {
        name: "printed bounds vs general rule".into(),
        passed,
        max_deviation: worst,
        details,
    }
}

/// Grid points `{0, step, ..., hi}^3` where membership in `a` and `b` differs.
fn grid_disagreements(a: &LinSys, b: &LinSys, step: f64, hi: f64) -> (usize, usize, usize) {
    let k = (hi / step).round() as usize;
    let (mut total, mut inside, mut differ) = (0, 0, 0);
    for i in 0..=k {
        for j in 0..=k {
            for l in 0..=k {
                let v = [i as f64 * step, j as f64 * step, l as f64 * step];
                let value = |n: &str| match n {
                    "R0" => Some(v[0]),
                    "R1" => Some(v[1]),
                    "R2" => Some(v[2]),
                    _ => None,
                };
                let x = a.satisfied_by(value, GRID_TOL).expect("grid covers every rate");
                let y = b.satisfied_by(value, GRID_TOL).expect("grid covers every rate");
                total += 1;
                inside += usize::from(x);
                differ += usize::from(x != y);
            }
        }
    }
    (total, inside, differ)
}

fn agreement_report(name: &str, results: Vec<(String, usize, usize, usize, bool)>) -> CheckReport {
    let (mut total, mut differ) = (0, 0);
    let mut passed = true;
    let details = results
        .into_iter()
        .map(|(who, t, inside, d, eq)| {
            total += t;
            differ += d;
            passed &= d == 0 && eq;
            format!("{who}: {inside}/{t} points inside, {d} disagreements, rows equivalent: {eq}")
        })
        .collect();
    CheckReport {
        name: name.into(),
        passed,
        max_deviation: if total == 0 { 0.0 } else { differ as f64 / total as f64 },
        details,
    }
}

/// The general region on a multiple-access embedding against the
/// multiple-access region with a common message.
pub fn check_mac_grid(macs: usize, step: f64, hi: f64, seed: u64) -> Result<CheckReport, RegionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    for k in 0..macs {
        let ch = random_sharp_mac(&mut rng);
        let pw = random_dist(&mut rng, 2);
        let (p1, p2) = (rows(&mut rng, 2, 2), rows(&mut rng, 2, 2));
        let direct = mac_common_region(&mac_joint(&pw, &p1, &p2, &ch)?)?;
        let general = mac_via_ingms(&mac_ingms_joint(&pw, &p1, &p2, &ch)?)?;
        let (t, inside, d) = grid_disagreements(&direct, &general, step, hi);
        results.push((format!("mac {k}"), t, inside, d, equivalent(&direct, &general)));
    }
    Ok(agreement_report("multiple-access specialization", results))
}

/// The general region on a broadcast embedding against Marton's region.
/// Laws whose Marton region is empty are redrawn.
pub fn check_marton_grid(bcs: usize, step: f64, hi: f64, seed: u64) -> Result<CheckReport, RegionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    for k in 0..bcs {
        let mut found = None;
        for _ in 0..MARTON_ATTEMPTS {
            let (pwuv, px) = random_marton_law(&mut rng);
            let ch = random_sharp_bc(&mut rng);
            let m = marton_region(&marton_joint((2, 2, 2), &pwuv, &px, &ch)?)?;
            if m.is_feasible() {
                found = Some((pwuv, px, ch, m));
                break;
            }
        }
        let (pwuv, px, ch, direct) = found.ok_or_else(|| {
            RegionError::NoInstance(format!("no nonempty broadcast law in {MARTON_ATTEMPTS} draws"))
        })?;
        let general = marton_via_ingms(&marton_ingms_joint((2, 2, 2), &pwuv, &px, &ch)?)?;
        let (t, inside, d) = grid_disagreements(&direct, &general, step, hi);
        results.push((format!("bc {k}"), t, inside, d, equivalent(&direct, &general)));
    }
    Ok(agreement_report("broadcast specialization", results))
}

/// The interference-channel region against the general pipeline, on random
/// points scaled to the region.
pub fn check_hk_points(channels: usize, points: usize, seed: u64) -> Result<CheckReport, RegionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    for k in 0..channels {
        let ch = random_channel(&mut rng, 2, 2, 2, 2);
        let pq = random_dist(&mut rng, 2);
        let (p1, p2) = (rows(&mut rng, 2, 4), rows(&mut rng, 2, 4));
        let direct = hk_region(&hk_joint(&pq, &p1, &p2, (2, 2), &ch)?)?;
        let general = hk_via_ingms(&hk_ingms_joint(&pq, &p1, &p2, (2, 2), &ch)?)?;
        let scale = direct
            .rows()
            .iter()
            .map(|r| r.rhs)
            .fold(0.0, f64::max)
            .max(0.05)
            * 1.2;
        let (mut inside, mut d) = (0, 0);
        for _ in 0..points {
            let v = [rng.gen_range(0.0..scale), rng.gen_range(0.0..scale)];
            let value = |n: &str| match n {
                "R1" => Some(v[0]),
                "R2" => Some(v[1]),
                _ => None,
            };
            let x = direct.satisfied_by(value, GRID_TOL).expect("point covers every rate");
            let y = general.satisfied_by(value, GRID_TOL).expect("point covers every rate");
            inside += usize::from(x);
            d += usize::from(x != y);
        }
        results.push((format!("channel {k}"), points, inside, d, equivalent(&direct, &general)));
    }
    Ok(agreement_report("interference-channel specialization", results))
}

/// Every suite with its default size.
pub fn run_checks(seed: u64) -> Vec<CheckReport> {
    let wrap = |name: &str, r: Result<CheckReport, RegionError>| {
        r.unwrap_or_else(|e| CheckReport {
            name: name.into(),
            passed: false,
            max_deviation: f64::NAN,
            details: vec![format!("error: {e}")],
        })
    };
    vec![
        wrap("orthogonal identity", check_orthogonal_identity(20, seed)),
        check_bound_deltas(10, seed.wrapping_add(1)),
        wrap("multiple-access specialization", check_mac_grid(5, 0.05, 2.0, seed.wrapping_add(2))),
        wrap("broadcast specialization", check_marton_grid(5, 0.05, 2.0, seed.wrapping_add(3))),
        wrap("interference-channel specialization", check_hk_points(3, 100, seed.wrapping_add(4))),
    ]
}

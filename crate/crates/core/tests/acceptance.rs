//! Acceptance criteria A1-A9. Each test prints one PASS/FAIL line.

use std::io::Write;
use std::time::Instant;

use ingms_core::codingsim::{
    covering_experiment, covering_thresholds, run_trials, scaled_bins, Budget, CoveringSetup, SimConfig,
    TypicalityParams,
};
use ingms_core::diagnostics::{
    check_bound_deltas, check_hk_points, check_mac_grid, check_marton_grid, check_orthogonal_identity,
};
use ingms_core::format::fmt_sig;
use ingms_core::pmf::{FactorizationSpec, Info, JointPmf};
use ingms_core::random::{random_ingms_factorization, random_joint};
use ingms_core::region::{
    compare_bounds, orthogonal_capacity_constants, orthogonal_ingms_joint, orthogonal_joint, OrthogonalInputs,
};
use ingms_core::{BinRates, CondTable, LinIneq, LinSys, OrthogonalChannelSpec, RatePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Written to stderr directly so the line shows without `--nocapture`.
fn verdict(id: &str, pass: bool, msg: &str) {
    let line = format!("{id} {}: {msg}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{id} failed: {msg}");
}

#[test]
fn a1_orthogonal_direct_part_identity() {
    let t = Instant::now();
    let r = check_orthogonal_identity(20, 101).unwrap();
    let pass = r.max_deviation < 1e-9 && r.details.len() == 20;
    verdict(
        "A1",
        pass,
        &format!("20 laws, max |delta| {} ({:.1?})", fmt_sig(r.max_deviation, 12), t.elapsed()),
    );
}

#[test]
fn a2_mac_specialization_grid() {
    let t = Instant::now();
    let r = check_mac_grid(5, 0.05, 2.0, 202).unwrap();
    for d in &r.details {
        println!("  {d}");
    }
    verdict(
        "A2",
        r.passed,
        &format!("5 MACs, 41^3 grid, disagreement fraction {} ({:.1?})", r.max_deviation, t.elapsed()),
    );
}

#[test]
fn a3_marton_specialization_grid() {
    let t = Instant::now();
    let r = check_marton_grid(5, 0.05, 2.0, 303).unwrap();
    for d in &r.details {
        println!("  {d}");
    }
    verdict(
        "A3",
        r.passed,
        &format!("5 BCs, 41^3 grid, disagreement fraction {} ({:.1?})", r.max_deviation, t.elapsed()),
    );
}

#[test]
fn a4_hk_pipeline_equivalence() {
    let t = Instant::now();
    let r = check_hk_points(3, 100, 404).unwrap();
    for d in &r.details {
        println!("  {d}");
    }
    verdict(
        "A4",
        r.passed,
        &format!("3 channels x 100 points, disagreement fraction {} ({:.1?})", r.max_deviation, t.elapsed()),
    );
}

/// Integer search for `t` in `[-80, 80]^n` with `sum c_k t_k <= floor(8 rhs)`,
/// i.e. the grid of step 1/8 on `[-10, 10]`. Bounds are propagated row by
/// row and the widest domain is split in half.
fn grid_point(rows: &[(Vec<i64>, i64)], lo: Vec<i64>, hi: Vec<i64>, nodes: &mut u64) -> Option<Vec<i64>> {
    *nodes += 1;
    let (mut lo, mut hi) = (lo, hi);
    loop {
        let mut changed = false;
        for (c, r) in rows {
            let min_sum: i64 = c
                .iter()
                .zip(lo.iter().zip(&hi))
                .map(|(&a, (&l, &h))| (a * l).min(a * h))
                .sum();
            if min_sum > *r {
                return None;
            }
            for k in 0..c.len() {
                let a = c[k];
                if a == 0 {
                    continue;
                }
                let rest = min_sum - (a * lo[k]).min(a * hi[k]);
                let room = r - rest;
                if a > 0 {
                    let b = room.div_euclid(a);
                    if b < hi[k] {
                        hi[k] = b;
                        changed = true;
                    }
                } else {
                    let b = -room.div_euclid(-a);
                    if b > lo[k] {
                        lo[k] = b;
                        changed = true;
                    }
                }
                if lo[k] > hi[k] {
                    return None;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let k = (0..lo.len()).max_by_key(|&k| hi[k] - lo[k]).unwrap();
    if hi[k] == lo[k] {
        return Some(lo);
    }
    let mid = lo[k] + (hi[k] - lo[k]) / 2;
    let mut h1 = hi.clone();
    h1[k] = mid;
    if let Some(p) = grid_point(rows, lo.clone(), h1, nodes) {
        return Some(p);
    }
    let mut l2 = lo;
    l2[k] = mid + 1;
    grid_point(rows, l2, hi, nodes)
}

#[test]
fn a5_fm_against_grid_oracle() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut violations, mut grid_feasible, mut fm_feasible) = (0, 0, 0);
    let mut nodes = 0u64;
    for _ in 0..200 {
        let nv = rng.gen_range(1..=5);
        let nr = rng.gen_range(1..=8);
        let names: Vec<String> = (0..nv).map(|i| format!("x{i}")).collect();
        let mut sys = LinSys::with_vars(&names);
        let mut rows = Vec::new();
        for _ in 0..nr {
            let c: Vec<i64> = (0..nv).map(|_| rng.gen_range(-3..=3)).collect();
            let rhs = rng.gen_range(-20..=20) as f64 / 4.0;
            let terms: Vec<(String, i64)> = names.iter().cloned().zip(c.iter().copied()).collect();
            sys.push(LinIneq::le(&terms, rhs));
            rows.push((c, (8.0 * rhs + 1e-9).floor() as i64));
        }
        let fm = sys.is_feasible();
        let grid = grid_point(&rows, vec![-80; nv], vec![80; nv], &mut nodes);
        if let Some(p) = &grid {
            for (c, r) in &rows {
                assert!(c.iter().zip(p).map(|(a, b)| a * b).sum::<i64>() <= *r);
            }
        }
        fm_feasible += usize::from(fm);
        grid_feasible += usize::from(grid.is_some());
        if grid.is_some() && !fm {
            violations += 1;
        }
    }
    verdict(
        "A5",
        violations == 0,
        &format!(
            "200 systems, {grid_feasible} grid-feasible, {fm_feasible} FM-feasible, {violations} violations, {nodes} search nodes ({:.1?})",
            t.elapsed()
        ),
    );
}

fn copy_law() -> JointPmf {
    // U0, V0 uniform and independent; U1 copies V0, V1 copies U0.
    FactorizationSpec::new()
        .constants(&["W0", "W1"])
        .marginal("U0", &[0.5, 0.5])
        .marginal("V0", &[0.5, 0.5])
        .identify("U1", "V0")
        .identify("V1", "U0")
        .build()
        .unwrap()
}

fn xor_law() -> JointPmf {
    // W1 = U0 xor V0, U1 copies V0, V1 copies U0.
    FactorizationSpec::new()
        .constant("W0")
        .marginal("U0", &[0.5, 0.5])
        .marginal("V0", &[0.5, 0.5])
        .function("W1", 2, &["U0", "V0"], |v| v[0] ^ v[1])
        .identify("U1", "V0")
        .identify("V1", "U0")
        .build()
        .unwrap()
}

#[test]
fn a6_covering_empirics() {
    let t = Instant::now();
    let eps2 = 0.24;
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, law) in [("copy", copy_law()), ("xor", xor_law())] {
        let th = covering_thresholds(&law).unwrap();
        for (factor, want_below) in [(1.2, true), (0.5, false)] {
            let bins = scaled_bins(th, factor);
            let r = covering_experiment(&CoveringSetup {
                joint: law.clone(),
                bins,
                typ: TypicalityParams::new(eps2, 10).unwrap(),
                epsilon1: 0.9 * eps2,
                trials: 500,
                seed: 606,
                budget: Budget::default(),
            })
            .unwrap();
            let ok = if want_below {
                r.no_cover_rate < 0.2
            } else {
                r.no_cover_rate > 0.8
            };
            pass &= ok;
            parts.push(format!(
                "{name} x{factor}: thresholds {:?} bins {:?} no-cover {}",
                th.map(|x| fmt_sig(x, 6)),
                bins.map(|x| fmt_sig(x, 6)),
                r.no_cover_rate
            ));
        }
    }
    verdict("A6", pass, &format!("n=10, 500 trials each; {} ({:.1?})", parts.join("; "), t.elapsed()));
}

fn clean_orthogonal() -> (OrthogonalInputs, OrthogonalChannelSpec) {
    let table = CondTable::from_fn(2, 2, 4, |a, b, y| f64::from(u8::from(y == 2 * a + b))).unwrap();
    let o = OrthogonalChannelSpec::new(table.clone(), table).unwrap();
    let u = vec![vec![0.5, 0.5]];
    let d = OrthogonalInputs {
        pw: vec![1.0],
        pxa1: u.clone(),
        pxa2: u.clone(),
        pxb1: u.clone(),
        pxb2: u,
    };
    (d, o)
}

fn orthogonal_sim(rates: &[(&str, f64)], seed: u64) -> ingms_core::codingsim::SimReport {
    let (d, o) = clean_orthogonal();
    let cfg = SimConfig::from_joint(
        RatePoint::new(rates).unwrap(),
        BinRates::zero(),
        TypicalityParams::new(TypicalityParams::DEFAULT_EPSILON, 8).unwrap(),
        orthogonal_ingms_joint(&d, &o).unwrap(),
        o.compose(),
        200,
        seed,
    )
    .unwrap();
    run_trials(&cfg).unwrap()
}

#[test]
fn a7_end_to_end_coding() {
    let t = Instant::now();
    let (d, o) = clean_orthogonal();
    let c = orthogonal_capacity_constants(&orthogonal_joint(&d, &o).unwrap()).unwrap();
    // Single-rate bounds: R11 <= c[0], R21 <= c[1] at Y1; R12 <= c[4], R22 <= c[5] at Y2.
    let half = [("R11", 0.5 * c[0]), ("R21", 0.5 * c[1]), ("R12", 0.5 * c[4]), ("R22", 0.5 * c[5])];
    let low = orthogonal_sim(&half, 707);
    let again = orthogonal_sim(&half, 707);
    let mut over = half;
    over[0].1 = 1.25 * c[0];
    let high = orthogonal_sim(&over, 708);
    let s = &low.summary;
    println!("  at 50%: labels rx1 {:?} rx2 {:?}, encoding {:?}", s.rx1_labels, s.rx2_labels, s.encoding_events);
    let p1 = s.total_error_rate <= 0.05;
    let p2 = high.summary.total_error_rate >= 0.5;
    let p3 = low.outcomes == again.outcomes;
    verdict(
        "A7",
        p1 && p2 && p3,
        &format!(
            "n=8, 200 trials: error at 50% of bounds {} (need <= 0.05: {}), error at 125% of R11 bound {} (need >= 0.5: {}), deterministic: {} ({:.1?})",
            s.total_error_rate,
            p1,
            high.summary.total_error_rate,
            p2,
            p3,
            t.elapsed()
        ),
    );
}

fn brute_entropy(j: &JointPmf, vars: &[&str]) -> f64 {
    if vars.is_empty() {
        return 0.0;
    }
    j.marginalize(vars)
        .unwrap()
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

#[test]
fn a8_information_measures() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst: f64 = 0.0;
    let mut negative = 0;
    let names = ["A", "B", "C", "D", "E"];
    for _ in 0..100 {
        let vars: Vec<(&str, usize)> = names.iter().map(|n| (*n, rng.gen_range(1..=3))).collect();
        let j = random_joint(&mut rng, &vars);
        let info = Info::new(&j);
        // Random disjoint A, B, C from a random labelling of the five variables.
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        for n in names {
            match rng.gen_range(0..4) {
                0 => a.push(n),
                1 => b.push(n),
                2 => c.push(n),
                _ => {}
            }
        }
        if a.is_empty() {
            a.push("A");
            b.retain(|x| *x != "A");
            c.retain(|x| *x != "A");
        }
        let ab: Vec<&str> = a.iter().chain(&b).copied().collect();
        let ac: Vec<&str> = a.iter().chain(&c).copied().collect();
        let abc: Vec<&str> = ab.iter().chain(&c).copied().collect();
        let bc: Vec<&str> = b.iter().chain(&c).copied().collect();
        let h_ab_c = info.entropy(&ab, &c).unwrap();
        let chain = info.entropy(&a, &c).unwrap() + info.entropy(&b, &ac).unwrap();
        let brute = brute_entropy(&j, &abc) - brute_entropy(&j, &c);
        let mi = info.mi(&a, &b, &c).unwrap();
        let mi_brute = brute_entropy(&j, &ac) + brute_entropy(&j, &bc) - brute_entropy(&j, &abc) - brute_entropy(&j, &c);
        worst = worst.max((h_ab_c - chain).abs()).max((h_ab_c - brute).abs()).max((mi - mi_brute).abs());
        if mi < -1e-9 || h_ab_c < -1e-9 {
            negative += 1;
        }
    }
    let mut ci_worst: f64 = 0.0;
    for _ in 0..100 {
        let j = random_ingms_factorization(&mut rng).build().unwrap();
        let info = Info::new(&j);
        let v = info
            .mi(&["W1", "U1", "V1", "X1"], &["W2", "U2", "V2", "X2"], &["W0", "U0", "V0"])
            .unwrap();
        ci_worst = ci_worst.max(v.abs());
    }
    let pass = worst < 1e-9 && negative == 0 && ci_worst < 1e-9;
    verdict(
        "A8",
        pass,
        &format!(
            "100 joints: chain-rule/brute max |delta| {}, negative measures {negative}; 100 factorized laws: max transmitter dependence {} ({:.1?})",
            fmt_sig(worst, 12),
            fmt_sig(ci_worst, 12),
            t.elapsed()
        ),
    );
}

#[test]
fn a9_diagnostic_transparency() {
    let t = Instant::now();
    let r = check_bound_deltas(10, 909);
    // Replay the same joints and confirm every delta is printed as computed.
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut mismatched = 0;
    let mut lines = r.details.iter();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let j = ingms_core::random::random_ingms_joint(&mut rng);
        for c in compare_bounds(&j).unwrap() {
            worst = worst.max(c.delta().abs());
            let line = lines.next().map(String::as_str).unwrap_or("");
            if !line.ends_with(&format!("delta {}", fmt_sig(c.delta(), 12))) {
                mismatched += 1;
            }
        }
    }
    let pass = r.passed && r.details.len() == 260 && mismatched == 0 && r.max_deviation == worst;
    verdict(
        "A9",
        pass,
        &format!(
            "10 joints, {} bound lines, max |delta| {}, {mismatched} altered ({:.1?})",
            r.details.len(),
            fmt_sig(r.max_deviation, 12),
            t.elapsed()
        ),
    );
}

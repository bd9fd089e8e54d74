use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::channel::{ChannelSpec, CondTable, OrthogonalChannelSpec};
use crate::fme::equivalent;
use crate::pmf::FactorizationSpec;
use crate::random::{random_ingms_joint, random_orthogonal_channel};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Entropy of a set of variables straight from the marginalized table.
fn brute_h(j: &JointPmf, names: &[&str]) -> f64 {
    if names.is_empty() {
        return 0.0;
    }
    j.marginalize(names)
        .unwrap()
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

fn brute_mi(j: &JointPmf, a: &[&str], b: &[&str], g: &[&str]) -> f64 {
    fn cat<'a>(x: &[&'a str], y: &[&'a str]) -> Vec<&'a str> {
        [x, y].concat()
    }
    brute_h(j, &cat(a, g)) + brute_h(j, &cat(b, g)) - brute_h(j, g) - brute_h(j, &cat(&cat(a, b), g))
}

fn clean_table() -> CondTable {
    CondTable::from_fn(2, 2, 4, |a, b, y| if y == 2 * a + b { 1.0 } else { 0.0 }).unwrap()
}

fn clean_orthogonal() -> (OrthogonalInputs, OrthogonalChannelSpec) {
    let o = OrthogonalChannelSpec::new(clean_table(), clean_table()).unwrap();
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

/// `Y1 = (X1, X2)` noiselessly with `U1 = X1`, `U2 = X2` uniform bits.
fn noiseless_pair_joint() -> JointPmf {
    let ch = ChannelSpec::deterministic(2, 2, 4, 1, |a, b| (2 * a + b, 0)).unwrap();
    FactorizationSpec::new()
        .constants(&["W0", "U0", "V0", "W1", "V1", "W2", "V2"])
        .marginal("X1", &[0.5, 0.5])
        .marginal("X2", &[0.5, 0.5])
        .identify("U1", "X1")
        .identify("U2", "X2")
        .build_joint(&ch)
        .unwrap()
}

fn all_constant_joint() -> JointPmf {
    let ch = ChannelSpec::deterministic(2, 2, 4, 4, |a, b| (2 * a + b, 2 * a + b)).unwrap();
    FactorizationSpec::new()
        .constants(&AUX_NAMES)
        .marginal("X1", &[0.5, 0.5])
        .marginal("X2", &[0.5, 0.5])
        .build_joint(&ch)
        .unwrap()
}

fn point(vals: &[(&str, f64)]) -> RatePoint {
    RatePoint::new(vals).unwrap()
}

#[test]
fn rate_point_parsing() {
    let p = RatePoint::parse("R11=0.5, R21=1").unwrap();
    assert_eq!(p.get("R11"), 0.5);
    assert_eq!(p.get("R00"), 0.0);
    assert!(matches!(RatePoint::parse("R33=1"), Err(RegionError::UnknownRate(_))));
    assert!(matches!(RatePoint::parse("R11=-1"), Err(RegionError::NegativeRate { .. })));
    assert!(matches!(BinRates::parse("B00=1"), Err(RegionError::UnknownRate(_))));
    assert_eq!(BinRates::parse("B01=0.25").unwrap().get("B01"), 0.25);
}

#[test]
fn receiver_two_swaps_the_private_branch() {
    assert_eq!(Role::C1.var(Rx::One), "U1");
    assert_eq!(Role::C1.var(Rx::Two), "V1");
    assert_eq!(Role::C0.rate(Rx::Two), "R02");
    assert_eq!(Role::C2.bin(Rx::One).as_deref(), Some("B21"));
    assert_eq!(Role::W0.bin(Rx::One), None);
    assert_eq!(bound_expression(1, Rx::Two), "I(V1;Y2|W0,V0,W1,W2,V2) + theta5@Y2 + theta7@Y2");
}

#[test]
fn theta_terms_vanish_for_independent_auxiliaries() {
    let mut f = FactorizationSpec::new().marginal("W0", &[0.3, 0.7]);
    for (k, n) in AUX_NAMES.iter().enumerate().skip(1) {
        let p = 0.1 + 0.08 * k as f64;
        f = f.marginal(n, &[p, 1.0 - p]);
    }
    let f = f
        .function("X1", 2, &["U1", "V1"], |v| v[0] ^ v[1])
        .function("X2", 2, &["U2", "V2"], |v| v[0] & v[1]);
    let j = f.build_joint(&crate::random::random_channel(&mut ChaCha8Rng::seed_from_u64(1), 2, 2, 2, 2)).unwrap();
    for rx in Rx::BOTH {
        let t = theta_terms(&j, rx).unwrap();
        for k in 1..=7 {
            assert!(t.get(k).abs() < 1e-12, "theta{k} = {}", t.get(k));
        }
    }
}

#[test]
fn theta_one_is_a_full_bit_when_u0_copies_w1() {
    let ch = ChannelSpec::deterministic(1, 1, 1, 1, |_, _| (0, 0)).unwrap();
    let j = FactorizationSpec::new()
        .constants(&["W0", "V0", "U1", "V1", "W2", "U2", "V2", "X1", "X2"])
        .marginal("U0", &[0.5, 0.5])
        .identify("W1", "U0")
        .build_joint(&ch)
        .unwrap();
    assert!(close(theta_terms(&j, Rx::One).unwrap().get(1), 1.0, 1e-12));
    assert!(close(theta_terms(&j, Rx::Two).unwrap().get(1), 0.0, 1e-12));
}

#[test]
fn theta_terms_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let j = random_ingms_joint(&mut rng);
        let t = theta_terms(&j, Rx::One).unwrap();
        assert!(close(t.get(3), brute_mi(&j, &["W1"], &["W2"], &["W0", "U0"]), 1e-9));
        assert!(close(t.get(4), brute_mi(&j, &["U0"], &["W1", "W2"], &["W0"]), 1e-9));
        assert!(close(t.get(7), brute_mi(&j, &["U1"], &["U2"], &["W0", "U0", "W1", "W2"]), 1e-9));
        let t2 = theta_terms(&j, Rx::Two).unwrap();
        assert!(close(t2.get(6), brute_mi(&j, &["V2"], &["W1"], &["W0", "V0", "W2"]), 1e-9));
    }
}

#[test]
fn missing_variable_is_reported() {
    let j = JointPmf::single("W0", vec![1.0]).unwrap();
    assert!(matches!(theta_terms(&j, Rx::One), Err(RegionError::MissingVariable(_))));
    assert!(matches!(ingms_system(&j), Err(RegionError::MissingVariable(_))));
}

#[test]
fn decoding_bounds_vanish_for_a_useless_channel() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = crate::random::random_ingms_factorization(&mut rng);
    let ch = ChannelSpec::deterministic(2, 2, 1, 1, |_, _| (0, 0)).unwrap();
    let mut g = FactorizationSpec::new();
    for n in AUX_NAMES {
        let p = 0.2 + 0.05 * n.as_bytes()[1] as f64 % 0.5;
        g = g.marginal(n, &[p, 1.0 - p]);
    }
    let g = g.function("X1", 2, &["U1"], |v| v[0]).function("X2", 2, &["V2"], |v| v[0]);
    let j = g.build_joint(&ch).unwrap();
    for rx in Rx::BOTH {
        let b = decoding_bounds(&j, rx).unwrap();
        for k in 1..=13 {
            assert!(b.get(k).abs() < 1e-12);
        }
    }
    // A useless channel still leaves the correlation terms of a dependent law.
    let j = f.build_joint(&ch).unwrap();
    let b = decoding_bounds(&j, Rx::One).unwrap();
    let t = theta_terms(&j, Rx::One).unwrap();
    assert!(close(b.get(1), t.get(5) + t.get(7), 1e-12));
}

#[test]
fn noiseless_pair_bounds() {
    let j = noiseless_pair_joint();
    let b = decoding_bounds(&j, Rx::One).unwrap();
    assert!(close(b.get(1), 1.0, 1e-12));
    assert!(close(b.get(3), 2.0, 1e-12));
    assert!(close(b.get(13), 2.0, 1e-12));
}

#[test]
fn event_eight_carries_theta_four_and_event_nine_does_not() {
    assert!(EVENTS[7].thetas.contains(&4));
    assert!(!EVENTS[8].thetas.contains(&4));
    let j = random_ingms_joint(&mut ChaCha8Rng::seed_from_u64(8));
    let info = Info::new(&j);
    let b = decoding_bounds(&j, Rx::One).unwrap();
    let t = theta_terms(&j, Rx::One).unwrap();
    let base = brute_mi(&j, &["U0", "U1", "U2"], &["Y1"], &["W0", "W1", "W2"]);
    assert!(close(b.get(8), base + t.get(4) + t.get(5) + t.get(6) + t.get(7), 1e-9));
    let base9 = info
        .mi(&["W1", "U1", "W2", "U2"], &["Y1"], &["W0", "U0"])
        .unwrap();
    assert!(close(b.get(9), base9 + t.get(1) + t.get(2) + t.get(3) + t.get(5) + t.get(6) + t.get(7), 1e-9));
}

#[test]
fn general_rule_matches_printed_bounds() {
    let j = random_ingms_joint(&mut ChaCha8Rng::seed_from_u64(9));
    for rx in Rx::BOTH {
        let printed = decoding_bounds(&j, rx).unwrap();
        for (k, e) in EVENTS.iter().enumerate() {
            let g = decoding_bounds_general(&j, rx, e.wrong).unwrap();
            assert!(close(g, printed.get(k + 1), 1e-9), "E{} at {:?}", k + 1, rx);
        }
    }
    for c in compare_bounds(&j).unwrap() {
        assert!(c.delta().abs() < 1e-9);
    }
}

#[test]
fn general_rule_rejects_bad_patterns() {
    let j = random_ingms_joint(&mut ChaCha8Rng::seed_from_u64(10));
    assert_eq!(decoding_bounds_general(&j, Rx::One, &[]), Err(RegionError::EmptyPattern));
    assert!(matches!(
        decoding_bounds_general(&j, Rx::One, &[Role::W0]),
        Err(RegionError::NotDagClosed(..))
    ));
    assert!(matches!(
        decoding_bounds_general(&j, Rx::Two, &[Role::C0, Role::C1]),
        Err(RegionError::NotDagClosed(..))
    ));
    assert_eq!(event_index(&[Role::C2, Role::C1]), Some(3));
    assert_eq!(event_index(&[Role::W0]), None);
}

#[test]
fn every_closed_pattern_is_an_event() {
    let mut closed = 0;
    for mask in 1u32..64 {
        let wrong: Vec<Role> = Role::ALL.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, r)| *r).collect();
        let ok = Role::ALL
            .iter()
            .all(|s| s.clouds().iter().all(|c| !wrong.contains(c) || wrong.contains(s)));
        if ok {
            closed += 1;
            assert!(event_index(&wrong).is_some(), "{wrong:?}");
        }
    }
    assert_eq!(closed, 13);
}

#[test]
fn system_has_nine_bin_rows_and_twenty_six_decoding_rows() {
    let sys = ingms_system(&random_ingms_joint(&mut ChaCha8Rng::seed_from_u64(11))).unwrap();
    assert_eq!(sys.len(), 35);
    let decoding = sys
        .ineqs()
        .filter(|r| r.label.as_deref().is_some_and(|l| l.starts_with('E')))
        .count();
    assert_eq!(decoding, 26);
    assert_eq!(sys.vars().len(), 17);
}

#[test]
fn constant_auxiliaries_force_zero_rates() {
    let j = all_constant_joint();
    let p = ingms_project(&j).unwrap();
    assert!(contains(&p, &RatePoint::zero()));
    assert!(ingms_membership(&j, &RatePoint::zero()).unwrap());
    for r in RATE_NAMES {
        assert!(!contains(&p, &point(&[(r, 1e-3)])), "{r}");
        assert!(!ingms_membership(&j, &point(&[(r, 1e-3)])).unwrap());
    }
}

#[test]
fn noiseless_orthogonal_membership() {
    let (d, o) = clean_orthogonal();
    let j = orthogonal_ingms_joint(&d, &o).unwrap();
    assert!(ingms_membership(&j, &RatePoint::zero()).unwrap());
    assert!(ingms_membership(&j, &point(&[("R11", 1.0), ("R21", 1.0)])).unwrap());
    assert!(!ingms_membership(&j, &point(&[("R11", 1.5)])).unwrap());
    assert!(!ingms_membership(&j, &point(&[("R11", 1.0), ("R21", 1.01)])).unwrap());
}

#[test]
fn projection_agrees_with_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let o = random_orthogonal_channel(&mut rng, 2, 2, 2);
    let d = OrthogonalInputs::random(&mut rng, 2, &o);
    let j = orthogonal_ingms_joint(&d, &o).unwrap();
    let p = ingms_project(&j).unwrap();
    let scale = orthogonal_direct_constants(&j).unwrap().into_iter().fold(0.0, f64::max);
    let (mut inside, mut outside) = (0, 0);
    for _ in 0..100 {
        let mut r = RatePoint::zero();
        for n in RATE_NAMES {
            if rng.gen_bool(0.4) {
                r.set(n, rng.gen_range(0.0..scale * 0.6)).unwrap();
            }
        }
        let m = ingms_membership(&j, &r).unwrap();
        assert_eq!(m, contains(&p, &r), "{r}");
        if m {
            inside += 1
        } else {
            outside += 1
        }
    }
    assert!(inside > 0 && outside > 0, "{inside} inside, {outside} outside");
}

#[test]
fn enlarging_a_sum_row_changes_nothing() {
    let mut s = LinSys::with_vars(&RATE_NAMES);
    s.push(LinIneq::sum_le(&["R00", "R01"], 0.7));
    for r in RATE_NAMES {
        s.push(LinIneq::nonneg(r));
    }
    let e = enlarge(&s).unwrap();
    assert!(equivalent(&s, &e));
}

#[test]
fn enlarging_moves_private_rate_into_the_common_one() {
    let mut s = LinSys::with_vars(&RATE_NAMES);
    s.push(LinIneq::sum_le(&["R00"], 1.0));
    s.push(LinIneq::sum_le(&["R01"], 0.0));
    s.push(LinIneq::sum_le(&["R02"], 0.0));
    for r in RATE_NAMES {
        s.push(LinIneq::nonneg(r));
    }
    let e = enlarge(&s).unwrap();
    assert!(contains(&e, &point(&[("R01", 0.6), ("R02", 0.4)])));
    assert!(!contains(&e, &point(&[("R01", 0.6), ("R02", 0.5)])));
    assert!(!contains(&e, &point(&[("R00", 0.5), ("R01", 0.6)])));
    assert!(contains(&e, &point(&[("R11", 0.1)])));
}

#[test]
fn enlargement_contains_the_original() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let o = random_orthogonal_channel(&mut rng, 2, 2, 2);
    let d = OrthogonalInputs::random(&mut rng, 2, &o);
    let p = ingms_project(&orthogonal_ingms_joint(&d, &o).unwrap()).unwrap().remove_redundant();
    let e = enlarge(&p).unwrap();
    let mut members = 0;
    for _ in 0..2000 {
        let mut r = RatePoint::zero();
        for n in RATE_NAMES {
            if rng.gen_bool(0.3) {
                r.set(n, rng.gen_range(0.0..0.4)).unwrap();
            }
        }
        if contains(&p, &r) {
            members += 1;
            assert!(contains(&e, &r), "{r}");
        }
    }
    assert!(members > 20, "{members}");
}

#[test]
fn redundancy_removal_keeps_the_projected_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let o = random_orthogonal_channel(&mut rng, 2, 2, 2);
    let d = OrthogonalInputs::random(&mut rng, 1, &o);
    let p = ingms_project(&orthogonal_ingms_joint(&d, &o).unwrap()).unwrap();
    let r = p.remove_redundant();
    assert!(r.len() < p.len());
    for row in p.ineqs() {
        assert!(crate::fme::implies(&r, &row), "{row:?}");
    }
}

#[test]
fn empty_fixed_law_region_is_reported_as_empty() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = ingms_project(&random_ingms_joint(&mut rng)).unwrap();
    assert!(!p.is_feasible());
    let r = p.remove_redundant();
    assert_eq!(r.len(), 1);
    assert!(r.infeasibility_witness().is_some());
    assert!(enlarge(&r).unwrap().infeasibility_witness().is_some());
}

#[test]
fn binary_adder_mac_sum_rate() {
    let ch = CondTable::from_fn(2, 2, 3, |a, b, y| if y == a + b { 1.0 } else { 0.0 }).unwrap();
    let u = vec![vec![0.5, 0.5]];
    let m = mac_common_region(&mac_joint(&[1.0], &u, &u, &ch).unwrap()).unwrap();
    let rhs: Vec<f64> = m.rows().iter().take(4).map(|r| r.rhs).collect();
    assert!(close(rhs[0], 1.0, 1e-12));
    assert!(close(rhs[1], 1.0, 1e-12));
    assert!(close(rhs[2], 1.5, 1e-12));
    assert!(close(rhs[3], 1.5, 1e-12));
}

#[test]
fn useless_mac_has_zero_bounds() {
    let ch = CondTable::from_fn(2, 2, 2, |_, _, _| 0.5).unwrap();
    let u = vec![vec![0.3, 0.7], vec![0.6, 0.4]];
    let m = mac_common_region(&mac_joint(&[0.5, 0.5], &u, &u, &ch).unwrap()).unwrap();
    assert!(m.rows().iter().all(|r| r.rhs.abs() < 1e-12));
}

#[test]
fn mac_embedding_projects_to_the_mac_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let ch = crate::random::random_sharp_mac(&mut rng);
    let pw = crate::random::random_dist(&mut rng, 2);
    let p1: Vec<Vec<f64>> = (0..2).map(|_| crate::random::random_dist(&mut rng, 2)).collect();
    let p2: Vec<Vec<f64>> = (0..2).map(|_| crate::random::random_dist(&mut rng, 2)).collect();
    let mac = mac_common_region(&mac_joint(&pw, &p1, &p2, &ch).unwrap()).unwrap();
    let j = mac_ingms_joint(&pw, &p1, &p2, &ch).unwrap();
    let e = enlarge(&ingms_project(&j).unwrap().remove_redundant()).unwrap();
    let e = e
        .substitute_all(&[("R01", 0.0), ("R02", 0.0), ("R11", 0.0), ("R12", 0.0), ("R21", 0.0), ("R22", 0.0)])
        .unwrap()
        .rename("R00", "R0")
        .unwrap()
        .rename("R10", "R1")
        .unwrap()
        .rename("R20", "R2")
        .unwrap();
    assert!(equivalent(&e, &mac));
}

fn clean_bc() -> ChannelSpec {
    ChannelSpec::deterministic(2, 1, 2, 2, |x, _| (x, x)).unwrap()
}

#[test]
fn marton_identical_auxiliaries_on_a_clean_channel() {
    let mut pwuv = vec![0.0; 8];
    pwuv[0] = 0.5;
    pwuv[7] = 0.5;
    let px: Vec<Vec<f64>> = (0..8).map(|i| if i >> 2 == 0 { vec![1.0, 0.0] } else { vec![0.0, 1.0] }).collect();
    let m = marton_region(&marton_joint((2, 2, 2), &pwuv, &px, &clean_bc()).unwrap()).unwrap();
    let at = |r0: f64| m.satisfied_by(|n| Some(if n == "R0" { r0 } else { 0.0 }), 1e-9).unwrap();
    assert!(at(1.0));
    assert!(!at(1.01));
}

#[test]
fn marton_penalty_vanishes_for_independent_u_v() {
    let (pu, pv) = ([0.3, 0.7], [0.6, 0.4]);
    let pwuv: Vec<f64> = (0..8).map(|i| 0.5 * pu[(i >> 1) & 1] * pv[i & 1]).collect();
    let px: Vec<Vec<f64>> = (0..8).map(|i| if ((i >> 1) ^ i) & 1 == 0 { vec![0.9, 0.1] } else { vec![0.2, 0.8] }).collect();
    let ch = crate::random::random_sharp_bc(&mut ChaCha8Rng::seed_from_u64(16));
    let j = marton_joint((2, 2, 2), &pwuv, &px, &ch).unwrap();
    let info = Info::new(&j);
    assert!(info.mi(&["U"], &["V"], &["W"]).unwrap() < 1e-12);
    let m = marton_region(&j).unwrap();
    let iwu1 = info.mi(&["W", "U"], &["Y1"], &[]).unwrap();
    let iv2 = info.mi(&["V"], &["Y2"], &["W"]).unwrap();
    assert!(close(m.rows()[2].rhs, iwu1 + iv2, 1e-12));
}

#[test]
fn marton_embedding_gives_the_five_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    loop {
        let (pwuv, px) = crate::random::random_marton_law(&mut rng);
        let ch = crate::random::random_sharp_bc(&mut rng);
        let m = marton_region(&marton_joint((2, 2, 2), &pwuv, &px, &ch).unwrap()).unwrap();
        if !m.is_feasible() {
            continue;
        }
        let j = marton_ingms_joint((2, 2, 2), &pwuv, &px, &ch).unwrap();
        let e = enlarge(&ingms_project(&j).unwrap().remove_redundant()).unwrap();
        let e = e
            .substitute_all(&[("R10", 0.0), ("R11", 0.0), ("R12", 0.0), ("R20", 0.0), ("R21", 0.0), ("R22", 0.0)])
            .unwrap()
            .rename("R00", "R0")
            .unwrap()
            .rename("R01", "R1")
            .unwrap()
            .rename("R02", "R2")
            .unwrap();
        assert!(equivalent(&e, &m));
        break;
    }
}

#[test]
fn clean_orthogonal_capacity() {
    let (d, o) = clean_orthogonal();
    let c = orthogonal_capacity_constants(&orthogonal_joint(&d, &o).unwrap()).unwrap();
    for (got, want) in c.iter().zip([1.0, 1.0, 2.0, 2.0, 1.0, 1.0, 2.0, 2.0]) {
        assert!(close(*got, want, 1e-12));
    }
    let sys = orthogonal_capacity(&orthogonal_joint(&d, &o).unwrap()).unwrap();
    assert!(contains(&sys, &point(&[("R10", 0.5), ("R11", 0.5), ("R21", 1.0)])));
    assert!(!contains(&sys, &point(&[("R10", 0.5), ("R11", 0.6)])));
}

#[test]
fn orthogonal_private_bounds_collapse_when_w_drives_everything() {
    let o = OrthogonalChannelSpec::new(clean_table(), clean_table()).unwrap();
    let det = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let d = OrthogonalInputs {
        pw: vec![0.5, 0.5],
        pxa1: det.clone(),
        pxa2: det.clone(),
        pxb1: det.clone(),
        pxb2: det,
    };
    let c = orthogonal_capacity_constants(&orthogonal_joint(&d, &o).unwrap()).unwrap();
    for k in [0, 1, 2, 4, 5, 6] {
        assert!(c[k].abs() < 1e-12);
    }
    assert!(close(c[3], 1.0, 1e-12));
    assert!(close(c[7], 1.0, 1e-12));
}

#[test]
fn orthogonal_direct_part_equals_capacity_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..3 {
        let o = random_orthogonal_channel(&mut rng, 2, 2, 2);
        let d = OrthogonalInputs::random(&mut rng, 2, &o);
        let cap = orthogonal_capacity_constants(&orthogonal_joint(&d, &o).unwrap()).unwrap();
        let dir = orthogonal_direct_constants(&orthogonal_ingms_joint(&d, &o).unwrap()).unwrap();
        for (a, b) in cap.iter().zip(dir) {
            assert!(close(*a, b, 1e-9), "{a} vs {b}");
        }
    }
}

#[test]
fn interference_free_hk_is_a_rectangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let t1 = crate::random::random_cond_table(&mut rng, 2, 1, 2);
    let t2 = crate::random::random_cond_table(&mut rng, 1, 2, 2);
    let ch = ChannelSpec::from_fn(2, 2, 2, 2, |a, b, c, d| t1.get(a, 0, c) * t2.get(0, b, d)).unwrap();
    let (px1, px2) = (vec![vec![0.4, 0.6]], vec![vec![0.7, 0.3]]);
    let j = hk_joint(&[1.0], &px1, &px2, (1, 1), &ch).unwrap();
    let info = Info::new(&j);
    let mut rect = LinSys::with_vars(&["R1", "R2"]);
    rect.push(LinIneq::sum_le(&["R1"], info.mi(&["X1"], &["Y1"], &[]).unwrap()));
    rect.push(LinIneq::sum_le(&["R2"], info.mi(&["X2"], &["Y2"], &[]).unwrap()));
    rect.push(LinIneq::nonneg("R1"));
    rect.push(LinIneq::nonneg("R2"));
    assert!(equivalent(&hk_region(&j).unwrap(), &rect));
}

#[test]
fn hk_rows_follow_the_split_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let ch = crate::random::random_channel(&mut rng, 2, 2, 2, 2);
    let p: Vec<Vec<f64>> = (0..2).map(|_| crate::random::random_dist(&mut rng, 4)).collect();
    let j = hk_joint(&[0.5, 0.5], &p, &p, (2, 2), &ch).unwrap();
    let rows = hk_rows(&j).unwrap();
    assert_eq!(rows.len(), 10);
    let labels: Vec<&str> = rows.iter().map(|r| r.label.as_deref().unwrap()).collect();
    assert_eq!(
        labels,
        ["E1@Y1", "E4@Y1", "E5@Y1", "E7@Y1", "E9@Y1", "E2@Y2", "E5@Y2", "E4@Y2", "E6@Y2", "E9@Y2"]
    );
    let info = Info::new(&j);
    assert!(close(rows[0].rhs, info.mi(&["X1"], &["Y1"], &["W1", "W2", "Q"]).unwrap(), 1e-12));
    assert!(close(rows[9].rhs, info.mi(&["W1", "W2", "X2"], &["Y2"], &["Q"]).unwrap(), 1e-12));
}

#[test]
fn hk_pipeline_matches_direct_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let ch = crate::random::random_channel(&mut rng, 2, 2, 2, 2);
    let pq = crate::random::random_dist(&mut rng, 2);
    let p1: Vec<Vec<f64>> = (0..2).map(|_| crate::random::random_dist(&mut rng, 4)).collect();
    let p2: Vec<Vec<f64>> = (0..2).map(|_| crate::random::random_dist(&mut rng, 4)).collect();
    let h = hk_region(&hk_joint(&pq, &p1, &p2, (2, 2), &ch).unwrap()).unwrap();
    let g = hk_via_ingms(&hk_ingms_joint(&pq, &p1, &p2, (2, 2), &ch).unwrap()).unwrap();
    assert!(equivalent(&h, &g));
}

#[test]
fn constants_cover_every_row() {
    let j = random_ingms_joint(&mut ChaCha8Rng::seed_from_u64(22));
    let c = ingms_constants(&j).unwrap();
    assert_eq!(c.len(), 9 + 2 * 7 + 2 * 13);
    assert!(c.iter().any(|(n, e, _)| n == "T[B01+B02]" && e == "I(U0;V0|W0)"));
}

fn orthogonal_projection(seed: u64) -> (JointPmf, LinSys) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = random_orthogonal_channel(&mut rng, 2, 2, 2);
    let d = OrthogonalInputs::random(&mut rng, 2, &o);
    let j = orthogonal_ingms_joint(&d, &o).unwrap();
    let p = ingms_project(&j).unwrap().remove_redundant();
    (j, p)
}

fn sample_member(rng: &mut ChaCha8Rng, p: &LinSys, hi: f64) -> RatePoint {
    loop {
        let mut r = RatePoint::zero();
        for n in RATE_NAMES {
            if rng.gen_bool(0.5) {
                r.set(n, rng.gen_range(0.0..hi)).unwrap();
            }
        }
        if contains(p, &r) {
            return r;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn projected_region_is_convex(seed in 0u64..1000) {
        let (j, p) = orthogonal_projection(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let a = sample_member(&mut rng, &p, 0.3);
            let b = sample_member(&mut rng, &p, 0.3);
            let vals: Vec<(&str, f64)> = RATE_NAMES.iter().map(|n| (*n, 0.5 * (a.get(n) + b.get(n)))).collect();
            let mid = point(&vals);
            prop_assert!(contains(&p, &mid));
            prop_assert!(ingms_membership(&j, &mid).unwrap());
        }
    }

    #[test]
    fn projected_region_is_monotone(seed in 0u64..1000) {
        let (j, p) = orthogonal_projection(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..10 {
            let a = sample_member(&mut rng, &p, 0.3);
            let vals: Vec<(&str, f64)> = RATE_NAMES.iter().map(|n| (*n, a.get(n) * rng.gen_range(0.0..1.0))).collect();
            let q = point(&vals);
            prop_assert!(contains(&p, &q));
            prop_assert!(ingms_membership(&j, &q).unwrap());
        }
    }
}

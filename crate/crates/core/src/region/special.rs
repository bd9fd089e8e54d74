//! Classical special cases and the joints that embed them in the general network.

use crate::channel::{ChannelSpec, CondTable, OrthogonalChannelSpec};
use crate::fme::{LinIneq, LinSys};
use crate::pmf::{FactorizationSpec, Info, JointPmf};

use super::{decoding_bounds_with, enlarge, event_label, ingms_project, ingms_system, RegionError, Rx, BIN_NAMES};

fn s(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn mi(info: &Info, a: &[&str], b: &[&str], g: &[&str]) -> Result<f64, RegionError> {
    super::mi(info, &s(a), &s(b), &s(g))
}

fn rows_of(k: usize, table: &[Vec<f64>]) -> impl Fn(&[usize]) -> Vec<f64> + '_ {
    move |v| table[v[0]][..k].to_vec()
}

/// Joint of `W, X1, X2, Y` for a two-user multiple-access channel with a
/// common message: `P_W P_{X1|W} P_{X2|W} P_{Y|X1,X2}`.
pub fn mac_joint(
    pw: &[f64],
    px1_w: &[Vec<f64>],
    px2_w: &[Vec<f64>],
    ch: &CondTable,
) -> Result<JointPmf, RegionError> {
    let f = FactorizationSpec::new()
        .marginal("W", pw)
        .conditional("X1", ch.x1, &["W"], rows_of(ch.x1, px1_w))
        .conditional("X2", ch.x2, &["W"], rows_of(ch.x2, px2_w))
        .conditional("Y", ch.y, &["X1", "X2"], |v| ch.row(v[0], v[1]).to_vec());
    Ok(f.build()?)
}

/// Capacity region of the multiple-access channel with a common message at a
/// fixed input law, over `R0, R1, R2`.
pub fn mac_common_region(j: &JointPmf) -> Result<LinSys, RegionError> {
    let info = Info::new(j);
    let mut sys = LinSys::with_vars(&["R0", "R1", "R2"]);
    sys.push(LinIneq::sum_le(&["R1"], mi(&info, &["X1"], &["Y"], &["X2", "W"])?).labelled("R1"));
    sys.push(LinIneq::sum_le(&["R2"], mi(&info, &["X2"], &["Y"], &["X1", "W"])?).labelled("R2"));
    sys.push(LinIneq::sum_le(&["R1", "R2"], mi(&info, &["X1", "X2"], &["Y"], &["W"])?).labelled("R1+R2"));
    sys.push(LinIneq::sum_le(&["R0", "R1", "R2"], mi(&info, &["X1", "X2"], &["Y"], &[])?).labelled("R0+R1+R2"));
    for r in ["R0", "R1", "R2"] {
        sys.push(LinIneq::nonneg(r));
    }
    Ok(sys)
}

/// The multiple-access channel embedded in the network: `W0` carries the
/// common message, `W1 = X1` and `W2 = X2` carry the two private messages
/// (rates `R10`, `R20`), every other auxiliary is constant and both
/// receivers see the same output.
pub fn mac_ingms_joint(
    pw: &[f64],
    px1_w: &[Vec<f64>],
    px2_w: &[Vec<f64>],
    ch: &CondTable,
) -> Result<JointPmf, RegionError> {
    let f = FactorizationSpec::new()
        .constants(&["U0", "V0", "U1", "V1", "U2", "V2"])
        .marginal("W0", pw)
        .conditional("X1", ch.x1, &["W0"], rows_of(ch.x1, px1_w))
        .conditional("X2", ch.x2, &["W0"], rows_of(ch.x2, px2_w))
        .identify("W1", "X1")
        .identify("W2", "X2");
    Ok(f.build_joint(&ChannelSpec::shared_output(ch)?)?)
}

/// Projected, enlarged general region restricted to the three message
/// rates `keep` (all other rates zero), renamed to `R0, R1, R2`.
fn restrict(j: &JointPmf, keep: [&str; 3]) -> Result<LinSys, RegionError> {
    let e = enlarge(&ingms_project(j)?.remove_redundant())?;
    let zeros: Vec<(&str, f64)> = super::RATE_NAMES
        .iter()
        .filter(|r| !keep.contains(r))
        .map(|r| (*r, 0.0))
        .collect();
    let mut e = e.substitute_all(&zeros)?;
    for (from, to) in keep.iter().zip(["R0", "R1", "R2"]) {
        e = e.rename(from, to)?;
    }
    Ok(e)
}

/// The general region on a multiple-access embedding (see [`mac_ingms_joint`]),
/// over `R0, R1, R2`.
pub fn mac_via_ingms(j: &JointPmf) -> Result<LinSys, RegionError> {
    restrict(j, ["R00", "R10", "R20"])
}

/// Joint of `W, U, V, X1, Y1, Y2` for a broadcast channel driven by `X1`
/// (the channel's second input must be a singleton).
pub fn marton_joint(
    sizes: (usize, usize, usize),
    pwuv: &[f64],
    px_wuv: &[Vec<f64>],
    ch: &ChannelSpec,
) -> Result<JointPmf, RegionError> {
    let (w, u, v) = sizes;
    let x = ch.x1.size();
    let f = FactorizationSpec::new()
        .constant("X2")
        .factor(crate::pmf::Factor {
            targets: vec![("W".into(), w), ("U".into(), u), ("V".into(), v)],
            given: vec![],
            table: vec![pwuv.to_vec()],
        })
        .conditional("X1", x, &["W", "U", "V"], |g| px_wuv[(g[0] * u + g[1]) * v + g[2]].clone());
    Ok(f.build_joint(ch)?)
}

/// Marton's inner bound with a common message at a fixed law, over `R0, R1, R2`.
pub fn marton_region(j: &JointPmf) -> Result<LinSys, RegionError> {
    let info = Info::new(j);
    let iwu1 = mi(&info, &["W", "U"], &["Y1"], &[])?;
    let iwv2 = mi(&info, &["W", "V"], &["Y2"], &[])?;
    let iu1 = mi(&info, &["U"], &["Y1"], &["W"])?;
    let iv2 = mi(&info, &["V"], &["Y2"], &["W"])?;
    let iuv = mi(&info, &["U"], &["V"], &["W"])?;
    let mut sys = LinSys::with_vars(&["R0", "R1", "R2"]);
    sys.push(LinIneq::sum_le(&["R0", "R1"], iwu1).labelled("R0+R1"));
    sys.push(LinIneq::sum_le(&["R0", "R2"], iwv2).labelled("R0+R2"));
    sys.push(LinIneq::sum_le(&["R0", "R1", "R2"], iwu1 + iv2 - iuv).labelled("R0+R1+R2 (a)"));
    sys.push(LinIneq::sum_le(&["R0", "R1", "R2"], iu1 + iwv2 - iuv).labelled("R0+R1+R2 (b)"));
    sys.push(LinIneq::le(&[("R0", 2), ("R1", 1), ("R2", 1)], iwu1 + iwv2 - iuv).labelled("2R0+R1+R2"));
    for r in ["R0", "R1", "R2"] {
        sys.push(LinIneq::nonneg(r));
    }
    Ok(sys)
}

/// The broadcast channel embedded in the network: only the triple
/// `(W0, U0, V0) = (W, U, V)` carries messages; transmitter 2 is silent.
pub fn marton_ingms_joint(
    sizes: (usize, usize, usize),
    pwuv: &[f64],
    px_wuv: &[Vec<f64>],
    ch: &ChannelSpec,
) -> Result<JointPmf, RegionError> {
    let (w, u, v) = sizes;
    let x = ch.x1.size();
    let f = FactorizationSpec::new()
        .constants(&["W1", "U1", "V1", "W2", "U2", "V2", "X2"])
        .factor(crate::pmf::Factor {
            targets: vec![("W0".into(), w), ("U0".into(), u), ("V0".into(), v)],
            given: vec![],
            table: vec![pwuv.to_vec()],
        })
        .conditional("X1", x, &["W0", "U0", "V0"], |g| px_wuv[(g[0] * u + g[1]) * v + g[2]].clone());
    Ok(f.build_joint(ch)?)
}

/// The general region on a broadcast embedding (see [`marton_ingms_joint`]),
/// over `R0, R1, R2`.
pub fn marton_via_ingms(j: &JointPmf) -> Result<LinSys, RegionError> {
    restrict(j, ["R00", "R01", "R02"])
}

/// Input law for an orthogonal network: a time-sharing variable `W` and the
/// four sub-inputs drawn independently given `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalInputs {
    pub pw: Vec<f64>,
    pub pxa1: Vec<Vec<f64>>,
    pub pxa2: Vec<Vec<f64>>,
    pub pxb1: Vec<Vec<f64>>,
    pub pxb2: Vec<Vec<f64>>,
}

impl OrthogonalInputs {
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, w: usize, o: &OrthogonalChannelSpec) -> Self {
        use crate::random::random_dist;
        let mut rows = |k: usize| (0..w).map(|_| random_dist(rng, k)).collect::<Vec<_>>();
        let (pxa1, pxa2, pxb1, pxb2) = (rows(o.xa1()), rows(o.xa2()), rows(o.xb1()), rows(o.xb2()));
        OrthogonalInputs {
            pw: random_dist(rng, w),
            pxa1,
            pxa2,
            pxb1,
            pxb2,
        }
    }
}

/// Joint of `W, XA1, XA2, XB1, XB2, Y1, Y2` for an orthogonal network.
pub fn orthogonal_joint(d: &OrthogonalInputs, o: &OrthogonalChannelSpec) -> Result<JointPmf, RegionError> {
    let f = FactorizationSpec::new()
        .marginal("W", &d.pw)
        .conditional("XA1", o.xa1(), &["W"], rows_of(o.xa1(), &d.pxa1))
        .conditional("XA2", o.xa2(), &["W"], rows_of(o.xa2(), &d.pxa2))
        .conditional("XB1", o.xb1(), &["W"], rows_of(o.xb1(), &d.pxb1))
        .conditional("XB2", o.xb2(), &["W"], rows_of(o.xb2(), &d.pxb2))
        .conditional("Y1", o.law_a.y, &["XA1", "XA2"], |v| o.law_a.row(v[0], v[1]).to_vec())
        .conditional("Y2", o.law_b.y, &["XB1", "XB2"], |v| o.law_b.row(v[0], v[1]).to_vec());
    Ok(f.build()?)
}

/// The eight right-hand sides of the orthogonal capacity region, receiver 1 first.
pub fn orthogonal_capacity_constants(j: &JointPmf) -> Result<[f64; 8], RegionError> {
    let info = Info::new(j);
    Ok([
        mi(&info, &["XA1"], &["Y1"], &["XA2", "W"])?,
        mi(&info, &["XA2"], &["Y1"], &["XA1", "W"])?,
        mi(&info, &["XA1", "XA2"], &["Y1"], &["W"])?,
        mi(&info, &["XA1", "XA2"], &["Y1"], &[])?,
        mi(&info, &["XB1"], &["Y2"], &["XB2", "W"])?,
        mi(&info, &["XB2"], &["Y2"], &["XB1", "W"])?,
        mi(&info, &["XB1", "XB2"], &["Y2"], &["W"])?,
        mi(&info, &["XB1", "XB2"], &["Y2"], &[])?,
    ])
}

/// Rate sums of the orthogonal capacity rows, in the order of the constants.
pub const ORTHOGONAL_ROWS: [&[&str]; 8] = [
    &["R10", "R11"],
    &["R20", "R21"],
    &["R10", "R11", "R20", "R21"],
    &["R00", "R01", "R10", "R11", "R20", "R21"],
    &["R10", "R12"],
    &["R20", "R22"],
    &["R10", "R12", "R20", "R22"],
    &["R00", "R02", "R10", "R12", "R20", "R22"],
];

/// Capacity region of the orthogonal network at a fixed input law, over all nine rates.
pub fn orthogonal_capacity(j: &JointPmf) -> Result<LinSys, RegionError> {
    let c = orthogonal_capacity_constants(j)?;
    let mut sys = LinSys::with_vars(&super::RATE_NAMES);
    for (names, rhs) in ORTHOGONAL_ROWS.iter().zip(c) {
        sys.push(LinIneq::sum_le(names, rhs).labelled(&names.join("+")));
    }
    for r in super::RATE_NAMES {
        sys.push(LinIneq::nonneg(r));
    }
    Ok(sys)
}

/// The orthogonal network embedded in the general one: `U0` and `V0` are
/// independent copies of the time-sharing law, `U1, U2` are the `A`
/// sub-inputs, `V1, V2` the `B` sub-inputs, and the `W` layers are constant.
pub fn orthogonal_ingms_joint(d: &OrthogonalInputs, o: &OrthogonalChannelSpec) -> Result<JointPmf, RegionError> {
    let (xb1, xb2) = (o.xb1(), o.xb2());
    let f = FactorizationSpec::new()
        .constants(&["W0", "W1", "W2"])
        .marginal("U0", &d.pw)
        .marginal("V0", &d.pw)
        .conditional("XA1", o.xa1(), &["U0"], rows_of(o.xa1(), &d.pxa1))
        .conditional("XB1", xb1, &["V0"], rows_of(xb1, &d.pxb1))
        .function("X1", o.xa1() * xb1, &["XA1", "XB1"], |v| v[0] * xb1 + v[1])
        .conditional("XA2", o.xa2(), &["U0"], rows_of(o.xa2(), &d.pxa2))
        .conditional("XB2", xb2, &["V0"], rows_of(xb2, &d.pxb2))
        .function("X2", o.xa2() * xb2, &["XA2", "XB2"], |v| v[0] * xb2 + v[1])
        .identify("U1", "XA1")
        .identify("V1", "XB1")
        .identify("U2", "XA2")
        .identify("V2", "XB2");
    Ok(f.build_joint(&o.compose())?)
}

/// The eight constants of the embedded orthogonal region, read off the
/// general decoding bounds (events 4, 5, 9 and 13 at each receiver).
pub fn orthogonal_direct_constants(j: &JointPmf) -> Result<[f64; 8], RegionError> {
    let info = Info::new(j);
    let b1 = decoding_bounds_with(&info, Rx::One)?;
    let b2 = decoding_bounds_with(&info, Rx::Two)?;
    Ok([
        b1.get(4),
        b1.get(5),
        b1.get(9),
        b1.get(13),
        b2.get(4),
        b2.get(5),
        b2.get(9),
        b2.get(13),
    ])
}

/// Joint of `Q, W1, X1, W2, X2` with `U1 = X1`, `V2 = X2`, plus both outputs,
/// for the two-user interference channel.
pub fn hk_joint(
    pq: &[f64],
    pw1x1_q: &[Vec<f64>],
    pw2x2_q: &[Vec<f64>],
    sizes: (usize, usize),
    ch: &ChannelSpec,
) -> Result<JointPmf, RegionError> {
    Ok(hk_factorization(pq, pw1x1_q, pw2x2_q, sizes, ch, "Q").build_joint(ch)?)
}

fn hk_factorization(
    pq: &[f64],
    pw1x1_q: &[Vec<f64>],
    pw2x2_q: &[Vec<f64>],
    (w1, w2): (usize, usize),
    ch: &ChannelSpec,
    q: &str,
) -> FactorizationSpec {
    use crate::pmf::Factor;
    let pair = |w: &str, x: &str, ws: usize, xs: usize, t: &[Vec<f64>]| Factor {
        targets: vec![(w.into(), ws), (x.into(), xs)],
        given: vec![q.into()],
        table: t.to_vec(),
    };
    FactorizationSpec::new()
        .marginal(q, pq)
        .factor(pair("W1", "X1", w1, ch.x1.size(), pw1x1_q))
        .factor(pair("W2", "X2", w2, ch.x2.size(), pw2x2_q))
        .identify("U1", "X1")
        .identify("V2", "X2")
}

/// The ten rate-split rows for the interference channel, over `R10, R11, R20, R22`,
/// labelled by the network event they come from.
pub fn hk_rows(j: &JointPmf) -> Result<Vec<LinIneq>, RegionError> {
    let info = Info::new(j);
    let row = |names: &[&str], rhs: f64, label: &str| LinIneq::sum_le(names, rhs).labelled(label);
    Ok(vec![
        row(&["R11"], mi(&info, &["U1"], &["Y1"], &["W1", "W2", "Q"])?, "E1@Y1"),
        row(&["R10", "R11"], mi(&info, &["W1", "U1"], &["Y1"], &["W2", "Q"])?, "E4@Y1"),
        row(&["R20"], mi(&info, &["W2"], &["Y1"], &["W1", "U1", "Q"])?, "E5@Y1"),
        row(&["R11", "R20"], mi(&info, &["U1", "W2"], &["Y1"], &["W1", "Q"])?, "E7@Y1"),
        row(&["R10", "R11", "R20"], mi(&info, &["W1", "U1", "W2"], &["Y1"], &["Q"])?, "E9@Y1"),
        row(&["R22"], mi(&info, &["V2"], &["Y2"], &["W1", "W2", "Q"])?, "E2@Y2"),
        row(&["R20", "R22"], mi(&info, &["W2", "V2"], &["Y2"], &["W1", "Q"])?, "E5@Y2"),
        row(&["R10"], mi(&info, &["W1"], &["Y2"], &["W2", "V2", "Q"])?, "E4@Y2"),
        row(&["R10", "R22"], mi(&info, &["W1", "V2"], &["Y2"], &["W2", "Q"])?, "E6@Y2"),
        row(&["R10", "R20", "R22"], mi(&info, &["W1", "W2", "V2"], &["Y2"], &["Q"])?, "E9@Y2"),
    ])
}

/// Rows that only pay for decoding the other user's common part.
pub const HK_DROPPED: [&str; 2] = ["E5@Y1", "E4@Y2"];

fn split_and_project(mut sys: LinSys) -> Result<LinSys, RegionError> {
    for r in ["R10", "R11", "R20", "R22"] {
        sys.push(LinIneq::nonneg(r));
    }
    sys.push_eq(&[("R1", 1), ("R10", -1), ("R11", -1)], 0.0, "R1=R10+R11");
    sys.push_eq(&[("R2", 1), ("R20", -1), ("R22", -1)], 0.0, "R2=R20+R22");
    Ok(sys.project_out(&["R10", "R11", "R20", "R22"])?)
}

/// Han-Kobayashi region at a fixed law, over `R1, R2`.
pub fn hk_region(j: &JointPmf) -> Result<LinSys, RegionError> {
    let sys = LinSys::from_rows(
        hk_rows(j)?
            .into_iter()
            .filter(|r| !HK_DROPPED.contains(&r.label.as_deref().unwrap_or(""))),
    );
    split_and_project(sys)
}

/// The interference channel embedded in the network: `W0 = Q`, `U1 = X1`,
/// `V2 = X2`, and `U0, V0, V1, U2` constant.
pub fn hk_ingms_joint(
    pq: &[f64],
    pw1x1_q: &[Vec<f64>],
    pw2x2_q: &[Vec<f64>],
    sizes: (usize, usize),
    ch: &ChannelSpec,
) -> Result<JointPmf, RegionError> {
    let f = hk_factorization(pq, pw1x1_q, pw2x2_q, sizes, ch, "W0").constants(&["U0", "V0", "V1", "U2"]);
    Ok(f.build_joint(ch)?)
}

/// Runs the general system through the interference-channel reduction:
/// zero the unused rates, drop the two cost rows, project out bins, then
/// resum the split rates.
pub fn hk_via_ingms(j: &JointPmf) -> Result<LinSys, RegionError> {
    let mut sys = ingms_system(j)?;
    for label in HK_DROPPED {
        debug_assert!(label == event_label(5, Rx::One) || label == event_label(4, Rx::Two));
        sys.remove_labelled(label);
    }
    let mut sys = sys.substitute_all(&[("R00", 0.0), ("R01", 0.0), ("R02", 0.0), ("R12", 0.0), ("R21", 0.0)])?;
    for b in BIN_NAMES {
        sys.push(LinIneq::nonneg(b));
    }
    let sys = sys.project_out(&BIN_NAMES)?;
    split_and_project(sys)
}

//! Rate regions as linear systems: the general network region with binning,
//! its projection onto message rates, the common-to-private enlargement, and
//! the classical special cases.

mod special;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::fme::{FmeError, LinIneq, LinSys};
use crate::pmf::{Info, JointPmf, PmfError};

pub use special::{
    hk_ingms_joint, hk_joint, hk_region, hk_rows, hk_via_ingms, mac_common_region, mac_ingms_joint,
    mac_joint, mac_via_ingms, marton_ingms_joint, marton_joint, marton_region, marton_via_ingms, orthogonal_capacity,
    orthogonal_capacity_constants, orthogonal_direct_constants, orthogonal_ingms_joint,
    orthogonal_joint, OrthogonalInputs, HK_DROPPED, ORTHOGONAL_ROWS,
};

/// The nine message rates, in index order.
pub const RATE_NAMES: [&str; 9] = ["R00", "R01", "R02", "R10", "R11", "R12", "R20", "R21", "R22"];
/// The eight bin rates (the common-common message is never binned).
pub const BIN_NAMES: [&str; 8] = ["B01", "B02", "B10", "B11", "B12", "B20", "B21", "B22"];
/// The nine auxiliaries `W_i, U_i, V_i`.
pub const AUX_NAMES: [&str; 9] = ["W0", "U0", "V0", "W1", "U1", "V1", "W2", "U2", "V2"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("joint is missing variable {0}")]
    MissingVariable(String),
    #[error("error pattern is not closed under superposition: {0} is wrong but its satellite {1} is not")]
    NotDagClosed(String, String),
    #[error("error pattern is empty")]
    EmptyPattern,
    #[error("negative rate {name} = {value}")]
    NegativeRate { name: String, value: f64 },
    #[error("unknown rate name {0}")]
    UnknownRate(String),
    #[error(transparent)]
    Pmf(#[from] PmfError),
    #[error(transparent)]
    Fme(#[from] FmeError),
    #[error(transparent)]
    Channel(#[from] crate::channel::ChannelError),
    #[error("no suitable instance: {0}")]
    NoInstance(String),
}

impl RegionError {
    fn from_pmf(e: PmfError) -> Self {
        match e {
            PmfError::UnknownVariable(v) => RegionError::MissingVariable(v),
            other => RegionError::Pmf(other),
        }
    }
}

fn mi(info: &Info, a: &[String], b: &[String], g: &[String]) -> Result<f64, RegionError> {
    info.mi(a, b, g).map_err(RegionError::from_pmf)
}

/// A non-negative value for each named rate; unnamed rates are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatePoint {
    r: BTreeMap<String, f64>,
}

impl RatePoint {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new<S: AsRef<str>>(values: &[(S, f64)]) -> Result<Self, RegionError> {
        let mut p = Self::zero();
        for (n, v) in values {
            p.set(n.as_ref(), *v)?;
        }
        Ok(p)
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), RegionError> {
        if !RATE_NAMES.contains(&name) {
            return Err(RegionError::UnknownRate(name.to_string()));
        }
        if value < 0.0 || value.is_nan() {
            return Err(RegionError::NegativeRate {
                name: name.to_string(),
                value,
            });
        }
        self.r.insert(name.to_string(), value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> f64 {
        self.r.get(name).copied().unwrap_or(0.0)
    }

    /// Parses `R11=0.5,R21=1`.
    pub fn parse(text: &str) -> Result<Self, RegionError> {
        let mut p = Self::zero();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| RegionError::UnknownRate(item.to_string()))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| RegionError::UnknownRate(item.to_string()))?;
            p.set(k.trim(), v)?;
        }
        Ok(p)
    }

    pub fn as_vec(&self) -> [f64; 9] {
        RATE_NAMES.map(|n| self.get(n))
    }
}

impl fmt::Display for RatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.r.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Bin rates keyed like [`BIN_NAMES`]; unnamed bins are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinRates {
    b: BTreeMap<String, f64>,
}

impl BinRates {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new<S: AsRef<str>>(values: &[(S, f64)]) -> Result<Self, RegionError> {
        let mut b = Self::zero();
        for (n, v) in values {
            let n = n.as_ref();
            if !BIN_NAMES.contains(&n) {
                return Err(RegionError::UnknownRate(n.to_string()));
            }
            if *v < 0.0 || v.is_nan() {
                return Err(RegionError::NegativeRate {
                    name: n.to_string(),
                    value: *v,
                });
            }
            b.b.insert(n.to_string(), *v);
        }
        Ok(b)
    }

    pub fn parse(text: &str) -> Result<Self, RegionError> {
        let mut pairs = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| RegionError::UnknownRate(item.to_string()))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| RegionError::UnknownRate(item.to_string()))?;
            pairs.push((k.trim().to_string(), v));
        }
        Self::new(&pairs)
    }

    pub fn get(&self, name: &str) -> f64 {
        self.b.get(name).copied().unwrap_or(0.0)
    }
}

/// Which receiver a quantity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rx {
    One,
    Two,
}

impl Rx {
    pub const BOTH: [Rx; 2] = [Rx::One, Rx::Two];

    pub fn index(self) -> usize {
        match self {
            Rx::One => 1,
            Rx::Two => 2,
        }
    }

    pub fn output(self) -> &'static str {
        match self {
            Rx::One => "Y1",
            Rx::Two => "Y2",
        }
    }

    /// Private auxiliary letter: receiver 1 decodes the `U` branch, receiver 2 the `V` branch.
    pub fn letter(self) -> char {
        match self {
            Rx::One => 'U',
            Rx::Two => 'V',
        }
    }
}

/// The six codewords a receiver decodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    W0,
    C0,
    W1,
    C1,
    W2,
    C2,
}

impl Role {
    pub const ALL: [Role; 6] = [Role::W0, Role::C0, Role::W1, Role::C1, Role::W2, Role::C2];

    pub fn var(self, rx: Rx) -> String {
        let l = rx.letter();
        match self {
            Role::W0 => "W0".into(),
            Role::C0 => format!("{l}0"),
            Role::W1 => "W1".into(),
            Role::C1 => format!("{l}1"),
            Role::W2 => "W2".into(),
            Role::C2 => format!("{l}2"),
        }
    }

    /// Message rate carried by the codeword at this receiver.
    pub fn rate(self, rx: Rx) -> String {
        let c = rx.index();
        match self {
            Role::W0 => "R00".into(),
            Role::C0 => format!("R0{c}"),
            Role::W1 => "R10".into(),
            Role::C1 => format!("R1{c}"),
            Role::W2 => "R20".into(),
            Role::C2 => format!("R2{c}"),
        }
    }

    /// Bin rate attached to the codeword, if it is binned.
    pub fn bin(self, rx: Rx) -> Option<String> {
        match self {
            Role::W0 => None,
            _ => Some(format!("B{}", &self.rate(rx)[1..])),
        }
    }

    /// Cloud centers of this codeword in the superposition structure.
    pub fn clouds(self) -> &'static [Role] {
        match self {
            Role::W0 => &[],
            Role::C0 | Role::W1 | Role::W2 => &[Role::W0],
            Role::C1 => &[Role::W0, Role::C0, Role::W1],
            Role::C2 => &[Role::W0, Role::C0, Role::W2],
        }
    }
}

/// One decoding error event: the wrongly decoded codewords and the
/// correlation terms added to its bound.
#[derive(Debug, Clone, Copy)]
pub struct ErrorEvent {
    pub wrong: &'static [Role],
    pub thetas: &'static [usize],
}

use Role::*;

/// The thirteen nonempty error patterns in decoding order.
pub const EVENTS: [ErrorEvent; 13] = [
    ErrorEvent { wrong: &[C1], thetas: &[5, 7] },
    ErrorEvent { wrong: &[C2], thetas: &[6, 7] },
    ErrorEvent { wrong: &[C1, C2], thetas: &[5, 6, 7] },
    ErrorEvent { wrong: &[W1, C1], thetas: &[1, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[W2, C2], thetas: &[2, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[W1, C1, C2], thetas: &[1, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[C1, W2, C2], thetas: &[2, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[C0, C1, C2], thetas: &[4, 5, 6, 7] },
    ErrorEvent { wrong: &[W1, C1, W2, C2], thetas: &[1, 2, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[C0, W1, C1, C2], thetas: &[1, 2, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[C0, C1, W2, C2], thetas: &[1, 2, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[C0, W1, C1, W2, C2], thetas: &[1, 2, 3, 5, 6, 7] },
    ErrorEvent { wrong: &[W0, C0, W1, C1, W2, C2], thetas: &[1, 2, 3, 5, 6, 7] },
];

impl ErrorEvent {
    pub fn correct(&self) -> Vec<Role> {
        Role::ALL
            .into_iter()
            .filter(|r| !self.wrong.contains(r))
            .collect()
    }

    /// Effective-rate sum on the left of the bound: messages plus bins.
    pub fn terms(&self, rx: Rx) -> Vec<(String, i64)> {
        let mut t = Vec::new();
        for r in self.wrong {
            t.push((r.rate(rx), 1));
            if let Some(b) = r.bin(rx) {
                t.push((b, 1));
            }
        }
        t
    }
}

/// The event whose wrong set equals `wrong` (any order), numbered from 1.
pub fn event_index(wrong: &[Role]) -> Option<usize> {
    let mut w = wrong.to_vec();
    w.sort();
    w.dedup();
    EVENTS.iter().position(|e| e.wrong == w.as_slice()).map(|k| k + 1)
}

fn vars(rx: Rx, roles: &[Role]) -> Vec<String> {
    roles.iter().map(|r| r.var(rx)).collect()
}

fn need(j: &JointPmf, names: &[&str]) -> Result<(), RegionError> {
    for n in names {
        if !j.contains(n) {
            return Err(RegionError::MissingVariable(n.to_string()));
        }
    }
    Ok(())
}

fn need_rx(j: &JointPmf, rx: Rx) -> Result<(), RegionError> {
    let mut names: Vec<String> = Role::ALL.iter().map(|r| r.var(rx)).collect();
    names.push(rx.output().to_string());
    need(j, &names.iter().map(String::as_str).collect::<Vec<_>>())
}

/// The seven correlation terms `theta^1..theta^7` of one receiver (index 0 unused).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaTerms(pub [f64; 8]);

impl ThetaTerms {
    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }
}

pub fn theta_terms(j: &JointPmf, rx: Rx) -> Result<ThetaTerms, RegionError> {
    theta_terms_with(&Info::new(j), rx)
}

fn theta_terms_with(info: &Info, rx: Rx) -> Result<ThetaTerms, RegionError> {
    need_rx(info.joint(), rx)?;
    let v = |rs: &[Role]| vars(rx, rs);
    let t = [
        0.0,
        mi(info, &v(&[C0]), &v(&[W1]), &v(&[W0]))?,
        mi(info, &v(&[C0]), &v(&[W2]), &v(&[W0]))?,
        mi(info, &v(&[W1]), &v(&[W2]), &v(&[W0, C0]))?,
        mi(info, &v(&[C0]), &v(&[W1, W2]), &v(&[W0]))?,
        mi(info, &v(&[C1]), &v(&[W2]), &v(&[W0, C0, W1]))?,
        mi(info, &v(&[C2]), &v(&[W1]), &v(&[W0, C0, W2]))?,
        mi(info, &v(&[C1]), &v(&[C2]), &v(&[W0, C0, W1, W2]))?,
    ];
    Ok(ThetaTerms(t))
}

/// The thirteen decoding bounds of one receiver (index 0 unused).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodingBounds(pub [f64; 14]);

impl DecodingBounds {
    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }
}

pub fn decoding_bounds(j: &JointPmf, rx: Rx) -> Result<DecodingBounds, RegionError> {
    decoding_bounds_with(&Info::new(j), rx)
}

fn decoding_bounds_with(info: &Info, rx: Rx) -> Result<DecodingBounds, RegionError> {
    let th = theta_terms_with(info, rx)?;
    let y = vec![rx.output().to_string()];
    let mut out = [0.0; 14];
    for (k, e) in EVENTS.iter().enumerate() {
        let base = mi(info, &vars(rx, e.wrong), &y, &vars(rx, &e.correct()))?;
        out[k + 1] = base + e.thetas.iter().map(|&t| th.get(t)).sum::<f64>();
    }
    Ok(DecodingBounds(out))
}

/// Human-readable definition of bound `k` at receiver `rx`.
pub fn bound_expression(k: usize, rx: Rx) -> String {
    let e = &EVENTS[k - 1];
    let y = rx.output();
    let wrong = vars(rx, e.wrong).join(",");
    let given = vars(rx, &e.correct()).join(",");
    let mi = if given.is_empty() {
        format!("I({wrong};{y})")
    } else {
        format!("I({wrong};{y}|{given})")
    };
    let th: Vec<String> = e.thetas.iter().map(|t| format!("theta{t}@{y}")).collect();
    format!("{mi} + {}", th.join(" + "))
}

/// Human-readable definition of `theta^k` at receiver `rx`.
pub fn theta_expression(k: usize, rx: Rx) -> String {
    let v = |rs: &[Role]| vars(rx, rs).join(",");
    let (a, b, g) = match k {
        1 => (v(&[C0]), v(&[W1]), v(&[W0])),
        2 => (v(&[C0]), v(&[W2]), v(&[W0])),
        3 => (v(&[W1]), v(&[W2]), v(&[W0, C0])),
        4 => (v(&[C0]), v(&[W1, W2]), v(&[W0])),
        5 => (v(&[C1]), v(&[W2]), v(&[W0, C0, W1])),
        6 => (v(&[C2]), v(&[W1]), v(&[W0, C0, W2])),
        7 => (v(&[C1]), v(&[C2]), v(&[W0, C0, W1, W2])),
        _ => panic!("theta index {k} out of range"),
    };
    format!("I({a};{b}|{g})")
}

/// Bound for an arbitrary error pattern from the superposition structure:
/// the sum over wrong codewords of their entropy given their cloud centers,
/// minus the entropy of all wrong codewords given the correct ones and the output.
pub fn decoding_bounds_general(j: &JointPmf, rx: Rx, wrong: &[Role]) -> Result<f64, RegionError> {
    decoding_bounds_general_with(&Info::new(j), rx, wrong)
}

fn decoding_bounds_general_with(info: &Info, rx: Rx, wrong: &[Role]) -> Result<f64, RegionError> {
    need_rx(info.joint(), rx)?;
    if wrong.is_empty() {
        return Err(RegionError::EmptyPattern);
    }
    for &sat in &Role::ALL {
        for c in sat.clouds() {
            if wrong.contains(c) && !wrong.contains(&sat) {
                return Err(RegionError::NotDagClosed(c.var(rx), sat.var(rx)));
            }
        }
    }
    let mut total = 0.0;
    for &a in wrong {
        total += info
            .entropy(&[a.var(rx)], &vars(rx, a.clouds()))
            .map_err(RegionError::from_pmf)?;
    }
    let correct: Vec<Role> = Role::ALL
        .into_iter()
        .filter(|r| !wrong.contains(r))
        .collect();
    let mut given = vars(rx, &correct);
    given.push(rx.output().to_string());
    total -= info
        .entropy(&vars(rx, wrong), &given)
        .map_err(RegionError::from_pmf)?;
    Ok(total)
}

/// Per-event comparison of the printed bounds and the general rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundComparison {
    pub rx: Rx,
    pub event: usize,
    pub printed: f64,
    pub general: f64,
}

impl BoundComparison {
    pub fn delta(&self) -> f64 {
        self.printed - self.general
    }
}

pub fn compare_bounds(j: &JointPmf) -> Result<Vec<BoundComparison>, RegionError> {
    let info = Info::new(j);
    let mut out = Vec::new();
    for rx in Rx::BOTH {
        let printed = decoding_bounds_with(&info, rx)?;
        for (k, e) in EVENTS.iter().enumerate() {
            out.push(BoundComparison {
                rx,
                event: k + 1,
                printed: printed.get(k + 1),
                general: decoding_bounds_general_with(&info, rx, e.wrong)?,
            });
        }
    }
    Ok(out)
}

/// Lower bounds on the bins of one transmitter's triple, or of the common triple (`i = 0`).
struct BinThresholds {
    rows: Vec<(Vec<&'static str>, f64, String)>,
}

fn bin_thresholds(info: &Info) -> Result<BinThresholds, RegionError> {
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut rows = vec![(
        vec!["B01", "B02"],
        mi(info, &s(&["U0"]), &s(&["V0"]), &s(&["W0"]))?,
        "I(U0;V0|W0)".to_string(),
    )];
    for i in 1..=2 {
        let (w, u, v) = (format!("W{i}"), format!("U{i}"), format!("V{i}"));
        let t = mi(info, &s(&["U0", "V0"]), &[w.clone()], &s(&["W0"]))?;
        let a = mi(info, &s(&["V0"]), &[u.clone()], &[s(&["W0", "U0"]), vec![w.clone()]].concat())?;
        let b = mi(info, &s(&["U0"]), &[v.clone()], &[s(&["W0", "V0"]), vec![w.clone()]].concat())?;
        let c = mi(
            info,
            &[s(&["U0"]), vec![u.clone()]].concat(),
            &[v.clone()],
            &[s(&["W0", "V0"]), vec![w.clone()]].concat(),
        )?;
        let (bi0, bi1, bi2) = bin_triple(i);
        let tn = format!("I(U0,V0;{w}|W0)");
        rows.push((vec![bi0], t, tn.clone()));
        rows.push((vec![bi0, bi1], t + a, format!("{tn} + I(V0;{u}|W0,U0,{w})")));
        rows.push((vec![bi0, bi2], t + b, format!("{tn} + I(U0;{v}|W0,V0,{w})")));
        rows.push((
            vec![bi0, bi1, bi2],
            t + a + c,
            format!("{tn} + I(V0;{u}|W0,U0,{w}) + I(U0,{u};{v}|W0,V0,{w})"),
        ));
    }
    Ok(BinThresholds { rows })
}

fn bin_triple(i: usize) -> (&'static str, &'static str, &'static str) {
    match i {
        1 => ("B10", "B11", "B12"),
        _ => ("B20", "B21", "B22"),
    }
}

/// The full system over message and bin rates: nine bin lower bounds
/// followed by thirteen decoding bounds per receiver. Nonnegativity rows are
/// not included.
pub fn ingms_system(j: &JointPmf) -> Result<LinSys, RegionError> {
    let info = Info::new(j);
    let mut sys = LinSys::with_vars(&[&RATE_NAMES[..], &BIN_NAMES[..]].concat());
    for (bins, t, _) in bin_thresholds(&info)?.rows {
        let terms: Vec<(&str, i64)> = bins.iter().map(|b| (*b, 1)).collect();
        let label = bins.join("+");
        sys.push(LinIneq::ge(&terms, t).labelled(&label));
    }
    for rx in Rx::BOTH {
        let bounds = decoding_bounds_with(&info, rx)?;
        for (k, e) in EVENTS.iter().enumerate() {
            sys.push(LinIneq::le(&e.terms(rx), bounds.get(k + 1)).labelled(&event_label(k + 1, rx)));
        }
    }
    Ok(sys)
}

/// Label carried by the decoding row of event `k` at receiver `rx`.
pub fn event_label(k: usize, rx: Rx) -> String {
    format!("E{k}@{}", rx.output())
}

fn with_nonneg(mut sys: LinSys, names: &[&str]) -> LinSys {
    for n in names {
        sys.push(LinIneq::nonneg(n));
    }
    sys
}

/// Named constants behind the system, for audit output.
pub fn ingms_constants(j: &JointPmf) -> Result<Vec<(String, String, f64)>, RegionError> {
    let info = Info::new(j);
    let mut out = Vec::new();
    for (bins, t, expr) in bin_thresholds(&info)?.rows {
        out.push((format!("T[{}]", bins.join("+")), expr, t));
    }
    for rx in Rx::BOTH {
        let th = theta_terms_with(&info, rx)?;
        for k in 1..=7 {
            out.push((format!("theta{k}@{}", rx.output()), theta_expression(k, rx), th.get(k)));
        }
        let b = decoding_bounds_with(&info, rx)?;
        for k in 1..=13 {
            out.push((format!("iE{k}@{}", rx.output()), bound_expression(k, rx), b.get(k)));
        }
    }
    Ok(out)
}

/// Does some choice of nonnegative bins make `p` satisfy the system?
pub fn ingms_membership(j: &JointPmf, p: &RatePoint) -> Result<bool, RegionError> {
    let sys = with_nonneg(ingms_system(j)?, &BIN_NAMES);
    membership_in(&sys, p)
}

/// Fixes the rates of `p` in a system over rates and bins and decides feasibility.
pub fn membership_in(sys: &LinSys, p: &RatePoint) -> Result<bool, RegionError> {
    let values: Vec<(&str, f64)> = RATE_NAMES
        .iter()
        .filter(|n| sys.has_var(n))
        .map(|n| (*n, p.get(n)))
        .collect();
    Ok(sys.substitute_all(&values)?.is_feasible())
}

/// Membership in a system over rate names only (tolerance 1e-9).
pub fn contains(sys: &LinSys, p: &RatePoint) -> bool {
    sys.satisfied_by(|n| Some(p.get(n)), 1e-9)
        .expect("every variable has a value")
}

/// The region over message rates: bins projected out, all rates nonnegative.
pub fn ingms_project(j: &JointPmf) -> Result<LinSys, RegionError> {
    let sys = with_nonneg(ingms_system(j)?, &[&RATE_NAMES[..], &BIN_NAMES[..]].concat());
    Ok(sys.project_out(&BIN_NAMES)?)
}

/// Transfer variables used by [`enlarge`], per message triple.
pub fn transfer_names(i: usize) -> (String, String) {
    (format!("P{i}1"), format!("P{i}2"))
}

/// Adds the common-to-private transfers: `r` is in the result if moving
/// nonnegative amounts from each `R_i0` back out of `R_i1` and `R_i2` lands
/// in `sys`. All rates stay nonnegative.
pub fn enlarge(sys: &LinSys) -> Result<LinSys, RegionError> {
    let mut s = sys.clone();
    for n in RATE_NAMES {
        s.add_var(n);
    }
    let mut pis = Vec::new();
    for i in 0..3 {
        let (r0, r1, r2) = (format!("R{i}0"), format!("R{i}1"), format!("R{i}2"));
        let (p1, p2) = transfer_names(i);
        s = s.substitute_expr(&r0, &[(r0.as_str(), 1), (p1.as_str(), 1), (p2.as_str(), 1)])?;
        s = s.substitute_expr(&r1, &[(r1.as_str(), 1), (p1.as_str(), -1)])?;
        s = s.substitute_expr(&r2, &[(r2.as_str(), 1), (p2.as_str(), -1)])?;
        s.push(LinIneq::nonneg(&p1));
        s.push(LinIneq::nonneg(&p2));
        s.push(LinIneq::le(&[(r1.as_str(), -1), (p1.as_str(), 1)], 0.0).labelled(&format!("{r1}-{p1}>=0")));
        s.push(LinIneq::le(&[(r2.as_str(), -1), (p2.as_str(), 1)], 0.0).labelled(&format!("{r2}-{p2}>=0")));
        pis.push(p1);
        pis.push(p2);
    }
    for n in RATE_NAMES {
        s.push(LinIneq::nonneg(n));
    }
    Ok(s.project_out(&pis)?)
}


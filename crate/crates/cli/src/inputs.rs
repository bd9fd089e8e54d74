//! Input files and the per-kind joint laws built from them.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use ingms_core::{ChannelSpec, FactorizationSpec, Info, JointPmf, Output};
use serde::Serialize;

/// Region selector of `region` and `member`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Full system over message and bin rates.
    Ingms,
    /// Bins projected out.
    IngmsProjected,
    /// Multiple-access channel with a common message (`W, X1, X2`).
    Mac,
    /// Broadcast channel driven by `X1` (`W, U, V, X1`).
    Marton,
    /// Orthogonal network (`W, XA1, XA2, XB1, XB2`).
    Orthogonal,
    /// Interference channel (`Q, W1, X1, W2, X2`).
    Hk,
}

pub const AUXILIARIES: [&str; 9] = ["W0", "U0", "V0", "W1", "U1", "V1", "W2", "U2", "V2"];

fn read(path: &Path, what: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {what} file {}", path.display()))
}

pub fn load_channel(path: &Path) -> Result<ChannelSpec> {
    ChannelSpec::from_json(&read(path, "channel")?).with_context(|| format!("parsing channel file {}", path.display()))
}

pub fn load_factorization(path: &Path) -> Result<FactorizationSpec> {
    FactorizationSpec::from_json(&read(path, "factorization")?)
        .with_context(|| format!("parsing factorization file {}", path.display()))
}

/// Declares every listed variable the factorization leaves out as a constant.
pub fn complete(mut f: FactorizationSpec, names: &[&str]) -> FactorizationSpec {
    for n in names {
        if f.size_of(n).is_none() {
            f = f.constant(n);
        }
    }
    f
}

fn require(f: &FactorizationSpec, names: &[&str]) -> Result<()> {
    for n in names {
        if f.size_of(n).is_none() {
            bail!("factorization does not declare {n}");
        }
    }
    Ok(())
}

/// Joint of the general network: unlisted auxiliaries are constant.
pub fn ingms_joint(f: FactorizationSpec, ch: &ChannelSpec) -> Result<JointPmf> {
    Ok(complete(f, &AUXILIARIES).build_joint(ch)?)
}

/// Builds the joint law that region `kind` is evaluated on.
pub fn joint_for(kind: Kind, f: Option<FactorizationSpec>, ch: &ChannelSpec) -> Result<JointPmf> {
    if kind == Kind::Orthogonal {
        return orthogonal_joint(f, ch);
    }
    let f = f.context("--factorization is required for this kind")?;
    match kind {
        Kind::Ingms | Kind::IngmsProjected => ingms_joint(f, ch),
        Kind::Mac => {
            let f = complete(f, &["W"]);
            require(&f, &["X1", "X2"])?;
            let m = ch.marginal(Output::Y1);
            Ok(f.conditional("Y", m.y, &["X1", "X2"], |v| m.row(v[0], v[1]).to_vec()).build()?)
        }
        Kind::Marton => {
            let f = complete(f, &["W", "U", "V", "X2"]);
            Ok(f.build_joint(ch)?)
        }
        Kind::Hk => {
            let mut f = complete(f, &["Q", "W1", "W2"]);
            require(&f, &["X1", "X2"])?;
            for (alias, src) in [("U1", "X1"), ("V2", "X2")] {
                if f.size_of(alias).is_none() {
                    f = f.identify(alias, src);
                }
            }
            Ok(f.build_joint(ch)?)
        }
        Kind::Orthogonal => unreachable!(),
    }
}

/// Without a factorization the sub-inputs are uniform and `W` is constant.
fn orthogonal_joint(f: Option<FactorizationSpec>, ch: &ChannelSpec) -> Result<JointPmf> {
    let o = ch.orthogonal().context("--kind orthogonal needs an orthogonal channel file")?;
    let uniform = |k: usize| vec![1.0 / k as f64; k];
    let f = match f {
        Some(f) => complete(f, &["W"]),
        None => FactorizationSpec::new()
            .constant("W")
            .marginal("XA1", &uniform(o.xa1()))
            .marginal("XA2", &uniform(o.xa2()))
            .marginal("XB1", &uniform(o.xb1()))
            .marginal("XB2", &uniform(o.xb2())),
    };
    require(&f, &["XA1", "XA2", "XB1", "XB2"])?;
    let (a, b) = (o.law_a.clone(), o.law_b.clone());
    Ok(f
        .conditional("Y1", a.y, &["XA1", "XA2"], |v| a.row(v[0], v[1]).to_vec())
        .conditional("Y2", b.y, &["XB1", "XB2"], |v| b.row(v[0], v[1]).to_vec())
        .build()?)
}

/// One named constant of a region, with the expression that defines it.
#[derive(Debug, Clone, Serialize)]
pub struct Constant {
    pub name: String,
    pub expression: String,
    pub value: f64,
}

type Term = (&'static str, &'static [&'static str], &'static [&'static str], &'static [&'static str]);

const MAC_TERMS: [Term; 4] = [
    ("R1", &["X1"], &["Y"], &["X2", "W"]),
    ("R2", &["X2"], &["Y"], &["X1", "W"]),
    ("R1+R2", &["X1", "X2"], &["Y"], &["W"]),
    ("R0+R1+R2", &["X1", "X2"], &["Y"], &[]),
];

const MARTON_TERMS: [Term; 5] = [
    ("I(W,U;Y1)", &["W", "U"], &["Y1"], &[]),
    ("I(W,V;Y2)", &["W", "V"], &["Y2"], &[]),
    ("I(U;Y1|W)", &["U"], &["Y1"], &["W"]),
    ("I(V;Y2|W)", &["V"], &["Y2"], &["W"]),
    ("I(U;V|W)", &["U"], &["V"], &["W"]),
];

const ORTHOGONAL_TERMS: [Term; 8] = [
    ("R10+R11", &["XA1"], &["Y1"], &["XA2", "W"]),
    ("R20+R21", &["XA2"], &["Y1"], &["XA1", "W"]),
    ("R10+R11+R20+R21", &["XA1", "XA2"], &["Y1"], &["W"]),
    ("R00+R01+R10+R11+R20+R21", &["XA1", "XA2"], &["Y1"], &[]),
    ("R10+R12", &["XB1"], &["Y2"], &["XB2", "W"]),
    ("R20+R22", &["XB2"], &["Y2"], &["XB1", "W"]),
    ("R10+R12+R20+R22", &["XB1", "XB2"], &["Y2"], &["W"]),
    ("R00+R02+R10+R12+R20+R22", &["XB1", "XB2"], &["Y2"], &[]),
];

const HK_TERMS: [Term; 10] = [
    ("E1@Y1", &["U1"], &["Y1"], &["W1", "W2", "Q"]),
    ("E4@Y1", &["W1", "U1"], &["Y1"], &["W2", "Q"]),
    ("E5@Y1", &["W2"], &["Y1"], &["W1", "U1", "Q"]),
    ("E7@Y1", &["U1", "W2"], &["Y1"], &["W1", "Q"]),
    ("E9@Y1", &["W1", "U1", "W2"], &["Y1"], &["Q"]),
    ("E2@Y2", &["V2"], &["Y2"], &["W1", "W2", "Q"]),
    ("E5@Y2", &["W2", "V2"], &["Y2"], &["W1", "Q"]),
    ("E4@Y2", &["W1"], &["Y2"], &["W2", "V2", "Q"]),
    ("E6@Y2", &["W1", "V2"], &["Y2"], &["W2", "Q"]),
    ("E9@Y2", &["W1", "W2", "V2"], &["Y2"], &["Q"]),
];

fn mi_expression(a: &[&str], b: &[&str], g: &[&str]) -> String {
    if g.is_empty() {
        format!("I({};{})", a.join(","), b.join(","))
    } else {
        format!("I({};{}|{})", a.join(","), b.join(","), g.join(","))
    }
}

fn evaluate(j: &JointPmf, terms: &[Term]) -> Result<Vec<Constant>> {
    let info = Info::new(j);
    terms
        .iter()
        .map(|(name, a, b, g)| {
            Ok(Constant {
                name: name.to_string(),
                expression: mi_expression(a, b, g),
                value: info.mi(a, b, g)?,
            })
        })
        .collect()
}

/// The information quantities behind region `kind` at law `j`.
pub fn constants(kind: Kind, j: &JointPmf) -> Result<Vec<Constant>> {
    match kind {
        Kind::Ingms | Kind::IngmsProjected => Ok(ingms_core::region::ingms_constants(j)?
            .into_iter()
            .map(|(name, expression, value)| Constant { name, expression, value })
            .collect()),
        Kind::Mac => evaluate(j, &MAC_TERMS),
        Kind::Marton => evaluate(j, &MARTON_TERMS),
        Kind::Orthogonal => evaluate(j, &ORTHOGONAL_TERMS),
        Kind::Hk => evaluate(j, &HK_TERMS),
    }
}

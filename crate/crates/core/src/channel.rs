//! Discrete memoryless two-transmitter/two-receiver channels.
//!
//! A [`ChannelSpec`] stores the conditional law `P(y1, y2 | x1, x2)` as a dense
//! array in `[x1][x2][y1][y2]` order. The orthogonal subclass, where each
//! receiver only sees its own pair of sub-inputs, is described by
//! [`OrthogonalChannelSpec`] and turned into a general spec with
//! [`OrthogonalChannelSpec::compose`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on conditional row sums.
pub const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("negative probability {value} at index {index:?}")]
    NegativeProbability { index: Vec<usize>, value: f64 },
    #[error("conditional row {index:?} sums to {sum}, expected 1")]
    RowSumNotOne { index: Vec<usize>, sum: f64 },
    #[error("law has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("malformed channel file: {0}")]
    Parse(String),
}

/// Range set of a discrete random variable: symbols `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self, ChannelError> {
        if size == 0 {
            Err(ChannelError::EmptyAlphabet)
        } else {
            Ok(Alphabet(size))
        }
    }

    pub const fn binary() -> Self {
        Alphabet(2)
    }

    pub const fn singleton() -> Self {
        Alphabet(1)
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = ChannelError;
    fn try_from(v: usize) -> Result<Self, Self::Error> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.0
    }
}

/// Which receiver's output to keep when marginalizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Y1,
    Y2,
}

/// A single-output conditional law `P(y | x1, x2)`, indexed `[x1][x2][y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondTable {
    pub x1: usize,
    pub x2: usize,
    pub y: usize,
    pub probs: Vec<f64>,
}

impl CondTable {
    pub fn new(x1: usize, x2: usize, y: usize, probs: Vec<f64>) -> Result<Self, ChannelError> {
        let t = CondTable { x1, x2, y, probs };
        t.validate()?;
        Ok(t)
    }

    /// Build from a closure giving each probability.
    pub fn from_fn(
        x1: usize,
        x2: usize,
        y: usize,
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self, ChannelError> {
        let mut probs = Vec::with_capacity(x1 * x2 * y);
        for a in 0..x1 {
            for b in 0..x2 {
                for c in 0..y {
                    probs.push(f(a, b, c));
                }
            }
        }
        Self::new(x1, x2, y, probs)
    }

    #[inline]
    pub fn get(&self, x1: usize, x2: usize, y: usize) -> f64 {
        self.probs[(x1 * self.x2 + x2) * self.y + y]
    }

    pub fn row(&self, x1: usize, x2: usize) -> &[f64] {
        let start = (x1 * self.x2 + x2) * self.y;
        &self.probs[start..start + self.y]
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        check_rows(&self.probs, &[self.x1, self.x2], self.y)
    }
}

/// Conditional law of the memoryless network.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub x1: Alphabet,
    pub x2: Alphabet,
    pub y1: Alphabet,
    pub y2: Alphabet,
    law: Vec<f64>,
    /// Set when the channel was composed from orthogonal sub-channels.
    orthogonal: Option<Box<OrthogonalChannelSpec>>,
}

impl ChannelSpec {
    /// Construct and validate a channel from a flat `[x1][x2][y1][y2]` array.
    pub fn new(
        x1: Alphabet,
        x2: Alphabet,
        y1: Alphabet,
        y2: Alphabet,
        law: Vec<f64>,
    ) -> Result<Self, ChannelError> {
        let spec = Self::new_unchecked(x1, x2, y1, y2, law)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Construct without checking probabilities (shape is still checked).
    pub fn new_unchecked(
        x1: Alphabet,
        x2: Alphabet,
        y1: Alphabet,
        y2: Alphabet,
        law: Vec<f64>,
    ) -> Result<Self, ChannelError> {
        let expected = x1.size() * x2.size() * y1.size() * y2.size();
        if law.len() != expected {
            return Err(ChannelError::ShapeMismatch {
                expected,
                got: law.len(),
            });
        }
        Ok(ChannelSpec {
            x1,
            x2,
            y1,
            y2,
            law,
            orthogonal: None,
        })
    }

    pub fn from_fn(
        x1: usize,
        x2: usize,
        y1: usize,
        y2: usize,
        f: impl Fn(usize, usize, usize, usize) -> f64,
    ) -> Result<Self, ChannelError> {
        let mut law = Vec::with_capacity(x1 * x2 * y1 * y2);
        for a in 0..x1 {
            for b in 0..x2 {
                for c in 0..y1 {
                    for d in 0..y2 {
                        law.push(f(a, b, c, d));
                    }
                }
            }
        }
        ChannelSpec::new(
            Alphabet::new(x1)?,
            Alphabet::new(x2)?,
            Alphabet::new(y1)?,
            Alphabet::new(y2)?,
            law,
        )
    }

    /// Channel whose outputs are a deterministic function of the inputs.
    pub fn deterministic(
        x1: usize,
        x2: usize,
        y1: usize,
        y2: usize,
        g: impl Fn(usize, usize) -> (usize, usize),
    ) -> Result<Self, ChannelError> {
        Self::from_fn(x1, x2, y1, y2, |a, b, c, d| {
            if g(a, b) == (c, d) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Both receivers observe the same output drawn from `table`.
    pub fn shared_output(table: &CondTable) -> Result<Self, ChannelError> {
        Self::from_fn(table.x1, table.x2, table.y, table.y, |a, b, c, d| {
            if c == d {
                table.get(a, b, c)
            } else {
                0.0
            }
        })
    }

    /// Receivers observe independent outputs given the inputs.
    pub fn product(t1: &CondTable, t2: &CondTable) -> Result<Self, ChannelError> {
        if (t1.x1, t1.x2) != (t2.x1, t2.x2) {
            return Err(ChannelError::ShapeMismatch {
                expected: t1.x1 * t1.x2,
                got: t2.x1 * t2.x2,
            });
        }
        Self::from_fn(t1.x1, t1.x2, t1.y, t2.y, |a, b, c, d| {
            t1.get(a, b, c) * t2.get(a, b, d)
        })
    }

    #[inline]
    pub fn get(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> f64 {
        let (s2, t1, t2) = (self.x2.size(), self.y1.size(), self.y2.size());
        self.law[((x1 * s2 + x2) * t1 + y1) * t2 + y2]
    }

    /// The `(y1, y2)` row for fixed inputs, flattened as `y1 * |Y2| + y2`.
    pub fn row(&self, x1: usize, x2: usize) -> &[f64] {
        let w = self.y1.size() * self.y2.size();
        let start = (x1 * self.x2.size() + x2) * w;
        &self.law[start..start + w]
    }

    pub fn law(&self) -> &[f64] {
        &self.law
    }

    /// The orthogonal factors, if this channel was composed from them.
    pub fn orthogonal(&self) -> Option<&OrthogonalChannelSpec> {
        self.orthogonal.as_deref()
    }

    /// Checks non-negativity and unit row sums.
    pub fn validate(&self) -> Result<(), ChannelError> {
        check_rows(
            &self.law,
            &[self.x1.size(), self.x2.size()],
            self.y1.size() * self.y2.size(),
        )
    }

    /// Sums out the other receiver's output.
    pub fn marginal(&self, output: Output) -> CondTable {
        if let Some(o) = &self.orthogonal {
            return o.lift(output);
        }
        let (s1, s2) = (self.x1.size(), self.x2.size());
        let (t1, t2) = (self.y1.size(), self.y2.size());
        let ty = match output {
            Output::Y1 => t1,
            Output::Y2 => t2,
        };
        let mut probs = vec![0.0; s1 * s2 * ty];
        for a in 0..s1 {
            for b in 0..s2 {
                let base = (a * s2 + b) * ty;
                for c in 0..t1 {
                    for d in 0..t2 {
                        let y = if output == Output::Y1 { c } else { d };
                        probs[base + y] += self.get(a, b, c, d);
                    }
                }
            }
        }
        CondTable {
            x1: s1,
            x2: s2,
            y: ty,
            probs,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ChannelError> {
        let file: ChannelFile =
            serde_json::from_str(text).map_err(|e| ChannelError::Parse(e.to_string()))?;
        file.into_spec()
    }

    pub fn to_json(&self) -> String {
        let law: Vec<Vec<Vec<Vec<f64>>>> = (0..self.x1.size())
            .map(|a| {
                (0..self.x2.size())
                    .map(|b| {
                        (0..self.y1.size())
                            .map(|c| (0..self.y2.size()).map(|d| self.get(a, b, c, d)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({
            "x1": self.x1.size(),
            "x2": self.x2.size(),
            "y1": self.y1.size(),
            "y2": self.y2.size(),
            "law": law,
        })
        .to_string()
    }
}

/// Channel that splits into `P(y1 | xA1, xA2) * P(y2 | xB1, xB2)`.
///
/// Transmitter `i` sends the pair `(xAi, xBi)`, encoded as the single symbol
/// `xAi * |X_Bi| + xBi`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalChannelSpec {
    /// `P(y1 | xA1, xA2)`.
    pub law_a: CondTable,
    /// `P(y2 | xB1, xB2)`.
    pub law_b: CondTable,
}

impl OrthogonalChannelSpec {
    pub fn new(law_a: CondTable, law_b: CondTable) -> Result<Self, ChannelError> {
        law_a.validate()?;
        law_b.validate()?;
        Ok(OrthogonalChannelSpec { law_a, law_b })
    }

    pub fn xa1(&self) -> usize {
        self.law_a.x1
    }
    pub fn xa2(&self) -> usize {
        self.law_a.x2
    }
    pub fn xb1(&self) -> usize {
        self.law_b.x1
    }
    pub fn xb2(&self) -> usize {
        self.law_b.x2
    }

    /// Pair encoding of transmitter 1's symbol.
    pub fn encode_x1(&self, xa: usize, xb: usize) -> usize {
        xa * self.xb1() + xb
    }

    pub fn encode_x2(&self, xa: usize, xb: usize) -> usize {
        xa * self.xb2() + xb
    }

    /// One receiver's law expressed over the paired input alphabets.
    pub fn lift(&self, output: Output) -> CondTable {
        let (b1, b2) = (self.xb1(), self.xb2());
        let (s1, s2) = (self.xa1() * b1, self.xa2() * b2);
        let t = match output {
            Output::Y1 => &self.law_a,
            Output::Y2 => &self.law_b,
        };
        let mut probs = Vec::with_capacity(s1 * s2 * t.y);
        for x1 in 0..s1 {
            for x2 in 0..s2 {
                let row = match output {
                    Output::Y1 => t.row(x1 / b1, x2 / b2),
                    Output::Y2 => t.row(x1 % b1, x2 % b2),
                };
                probs.extend_from_slice(row);
            }
        }
        CondTable {
            x1: s1,
            x2: s2,
            y: t.y,
            probs,
        }
    }

    /// The equivalent general channel over the product input alphabets.
    pub fn compose(&self) -> ChannelSpec {
        let (a1, a2, b1, b2) = (self.xa1(), self.xa2(), self.xb1(), self.xb2());
        let (t1, t2) = (self.law_a.y, self.law_b.y);
        let mut law = vec![0.0; a1 * b1 * a2 * b2 * t1 * t2];
        let s2 = a2 * b2;
        for x1 in 0..a1 * b1 {
            let (xa1, xb1) = (x1 / b1, x1 % b1);
            for x2 in 0..s2 {
                let (xa2, xb2) = (x2 / b2, x2 % b2);
                for c in 0..t1 {
                    let pa = self.law_a.get(xa1, xa2, c);
                    for d in 0..t2 {
                        law[((x1 * s2 + x2) * t1 + c) * t2 + d] = pa * self.law_b.get(xb1, xb2, d);
                    }
                }
            }
        }
        ChannelSpec {
            x1: Alphabet(a1 * b1),
            x2: Alphabet(s2),
            y1: Alphabet(t1),
            y2: Alphabet(t2),
            law,
            orthogonal: Some(Box::new(self.clone())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ChannelError> {
        let file: ChannelFile =
            serde_json::from_str(text).map_err(|e| ChannelError::Parse(e.to_string()))?;
        match file {
            ChannelFile::Orthogonal { orthogonal } => orthogonal.into_spec(),
            ChannelFile::General { .. } => Err(ChannelError::Parse(
                "expected an \"orthogonal\" channel".into(),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "orthogonal": {
                "lawA": nested3(&self.law_a),
                "lawB": nested3(&self.law_b),
            }
        })
        .to_string()
    }
}

fn nested3(t: &CondTable) -> Vec<Vec<Vec<f64>>> {
    (0..t.x1)
        .map(|a| (0..t.x2).map(|b| t.row(a, b).to_vec()).collect())
        .collect()
}

/// Either form of the channel input file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ChannelFile {
    Orthogonal {
        orthogonal: OrthogonalFile,
    },
    General {
        x1: usize,
        x2: usize,
        y1: usize,
        y2: usize,
        law: Vec<Vec<Vec<Vec<f64>>>>,
    },
}

#[derive(Debug, Deserialize)]
pub struct OrthogonalFile {
    #[serde(rename = "lawA")]
    law_a: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "lawB")]
    law_b: Vec<Vec<Vec<f64>>>,
}

impl OrthogonalFile {
    fn into_spec(self) -> Result<OrthogonalChannelSpec, ChannelError> {
        OrthogonalChannelSpec::new(table3(self.law_a)?, table3(self.law_b)?)
    }
}

fn table3(v: Vec<Vec<Vec<f64>>>) -> Result<CondTable, ChannelError> {
    let x1 = v.len();
    let x2 = v.first().map_or(0, Vec::len);
    let y = v.first().and_then(|r| r.first()).map_or(0, Vec::len);
    if x1 == 0 || x2 == 0 || y == 0 {
        return Err(ChannelError::EmptyAlphabet);
    }
    let mut probs = Vec::with_capacity(x1 * x2 * y);
    for r in v {
        if r.len() != x2 {
            return Err(ChannelError::Parse("ragged law array".into()));
        }
        for row in r {
            if row.len() != y {
                return Err(ChannelError::Parse("ragged law array".into()));
            }
            probs.extend(row);
        }
    }
    CondTable::new(x1, x2, y, probs)
}

impl ChannelFile {
    /// The general channel described by the file; orthogonal files are composed.
    pub fn into_spec(self) -> Result<ChannelSpec, ChannelError> {
        match self {
            ChannelFile::Orthogonal { orthogonal } => Ok(orthogonal.into_spec()?.compose()),
            ChannelFile::General {
                x1,
                x2,
                y1,
                y2,
                law,
            } => {
                let mut flat = Vec::with_capacity(x1 * x2 * y1 * y2);
                let ragged = || ChannelError::Parse("law shape does not match alphabets".into());
                if law.len() != x1 {
                    return Err(ragged());
                }
                for a in law {
                    if a.len() != x2 {
                        return Err(ragged());
                    }
                    for b in a {
                        if b.len() != y1 {
                            return Err(ragged());
                        }
                        for c in b {
                            if c.len() != y2 {
                                return Err(ragged());
                            }
                            flat.extend(c);
                        }
                    }
                }
                ChannelSpec::new(
                    Alphabet::new(x1)?,
                    Alphabet::new(x2)?,
                    Alphabet::new(y1)?,
                    Alphabet::new(y2)?,
                    flat,
                )
            }
        }
    }
}

/// Checks rows of width `width` over the row grid `dims`, reporting the first failure.
fn check_rows(probs: &[f64], dims: &[usize], width: usize) -> Result<(), ChannelError> {
    let rows: usize = dims.iter().product();
    if probs.len() != rows * width {
        return Err(ChannelError::ShapeMismatch {
            expected: rows * width,
            got: probs.len(),
        });
    }
    for r in 0..rows {
        let row = &probs[r * width..(r + 1) * width];
        let index = unflatten(r, dims);
        for (k, &p) in row.iter().enumerate() {
            if p < 0.0 || p.is_nan() {
                let mut idx = index.clone();
                idx.push(k);
                return Err(ChannelError::NegativeProbability { index: idx, value: p });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(ChannelError::RowSumNotOne { index, sum });
        }
    }
    Ok(())
}

fn unflatten(mut r: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (i, &d) in dims.iter().enumerate().rev() {
        out[i] = r % d;
        r /= d;
    }
    out
}

//! Dense discrete joint distributions over named variables, and the
//! information measures computed from them (all in bits).

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::ChannelSpec;

/// Largest joint table the crate will materialize.
pub const MAX_CELLS: usize = 1 << 24;
/// Tolerance on the total mass of a joint.
pub const MASS_TOL: f64 = 1e-10;
/// Tolerance on conditional-table rows inside a factorization.
pub const FACTOR_TOL: f64 = 1e-9;
/// Negative information values smaller than this in magnitude are rounding noise.
pub const CLIP_TOL: f64 = 1e-9;

pub type VarName = String;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PmfError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("variable {0} declared twice")]
    DuplicateVariable(String),
    #[error("factor {factor} conditions on {var}, which no earlier factor defines")]
    BadTopologicalOrder { factor: usize, var: String },
    #[error("alphabet mismatch for {var}: expected {expected}, got {got}")]
    AlphabetMismatch {
        var: String,
        expected: usize,
        got: usize,
    },
    #[error("factor {factor} row {row} sums to {sum}")]
    FactorNotNormalized { factor: usize, row: usize, sum: f64 },
    #[error("factor {factor} has {got} rows/columns, expected {expected}")]
    FactorShape {
        factor: usize,
        expected: usize,
        got: usize,
    },
    #[error("negative probability {0}")]
    NegativeProbability(f64),
    #[error("total mass {0} is not 1")]
    NotNormalized(f64),
    #[error("joint would need {0} cells, above the cap of 2^24")]
    TooLarge(usize),
    #[error("variable sets overlap on {0}")]
    NotDisjoint(String),
    #[error("information measure evaluated to {0}, below rounding tolerance")]
    InternalConsistency(f64),
    #[error("malformed factorization file: {0}")]
    Parse(String),
}

/// A joint law over an ordered list of named variables.
///
/// Cells are stored row-major with the last variable varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    vars: Vec<(VarName, usize)>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(vars: Vec<(VarName, usize)>, probs: Vec<f64>) -> Result<Self, PmfError> {
        let mut seen = HashSet::new();
        for (v, s) in &vars {
            if !seen.insert(v.as_str()) {
                return Err(PmfError::DuplicateVariable(v.clone()));
            }
            if *s == 0 {
                return Err(PmfError::AlphabetMismatch {
                    var: v.clone(),
                    expected: 1,
                    got: 0,
                });
            }
        }
        let cells = cell_count(vars.iter().map(|v| v.1))?;
        if probs.len() != cells {
            return Err(PmfError::AlphabetMismatch {
                var: "<table>".into(),
                expected: cells,
                got: probs.len(),
            });
        }
        if let Some(&p) = probs.iter().find(|p| **p < 0.0 || p.is_nan()) {
            return Err(PmfError::NegativeProbability(p));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(PmfError::NotNormalized(total));
        }
        Ok(JointPmf { vars, probs })
    }

    /// A single variable with the given marginal.
    pub fn single(name: &str, probs: Vec<f64>) -> Result<Self, PmfError> {
        JointPmf::new(vec![(name.to_string(), probs.len())], probs)
    }

    pub fn vars(&self) -> &[(VarName, usize)] {
        &self.vars
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.0.as_str())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v.0 == name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PmfError> {
        self.vars
            .iter()
            .position(|v| v.0 == name)
            .ok_or_else(|| PmfError::UnknownVariable(name.to_string()))
    }

    pub fn alphabet(&self, name: &str) -> Result<usize, PmfError> {
        Ok(self.vars[self.index_of(name)?].1)
    }

    /// Smallest positive cell probability.
    pub fn p_min(&self) -> f64 {
        self.probs
            .iter()
            .copied()
            .filter(|&p| p > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mask_of<S: AsRef<str>>(&self, names: &[S]) -> Result<u64, PmfError> {
        let mut m = 0u64;
        for n in names {
            m |= 1 << self.index_of(n.as_ref())?;
        }
        Ok(m)
    }

    /// Dense marginal table over the variables selected by `mask`, in joint order.
    pub fn marginal_table(&self, mask: u64) -> Vec<f64> {
        let sizes: Vec<usize> = self.vars.iter().map(|v| v.1).collect();
        let nv = sizes.len();
        let mut stride = vec![0usize; nv];
        let mut s = 1usize;
        for v in (0..nv).rev() {
            if mask >> v & 1 == 1 {
                stride[v] = s;
                s *= sizes[v];
            }
        }
        let mut out = vec![0.0; s];
        let mut digits = vec![0usize; nv];
        let mut oi = 0usize;
        for &p in &self.probs {
            out[oi] += p;
            for v in (0..nv).rev() {
                digits[v] += 1;
                oi += stride[v];
                if digits[v] < sizes[v] {
                    break;
                }
                oi -= stride[v] * sizes[v];
                digits[v] = 0;
            }
        }
        out
    }

    /// Law of the variables in `keep`, preserving their order in this joint.
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<JointPmf, PmfError> {
        let mask = self.mask_of(keep)?;
        let vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect();
        Ok(JointPmf {
            vars,
            probs: self.marginal_table(mask),
        })
    }

    /// Reorders variables to the given order (which must be a permutation).
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<JointPmf, PmfError> {
        if order.len() != self.vars.len() {
            return Err(PmfError::UnknownVariable("<reorder needs all variables>".into()));
        }
        let idx: Vec<usize> = order
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<_, _>>()?;
        let sizes: Vec<usize> = self.vars.iter().map(|v| v.1).collect();
        let mut out_stride = vec![0usize; sizes.len()];
        let mut s = 1;
        for &i in idx.iter().rev() {
            out_stride[i] = s;
            s *= sizes[i];
        }
        let mut probs = vec![0.0; self.probs.len()];
        let mut digits = vec![0usize; sizes.len()];
        let mut oi = 0;
        for &p in &self.probs {
            probs[oi] = p;
            for v in (0..sizes.len()).rev() {
                digits[v] += 1;
                oi += out_stride[v];
                if digits[v] < sizes[v] {
                    break;
                }
                oi -= out_stride[v] * sizes[v];
                digits[v] = 0;
            }
        }
        Ok(JointPmf {
            vars: idx.iter().map(|&i| self.vars[i].clone()).collect(),
            probs,
        })
    }

    /// `H(A | G)` in bits.
    pub fn entropy<S: AsRef<str>>(&self, a: &[S], given: &[S]) -> Result<f64, PmfError> {
        Info::new(self).entropy(a, given)
    }

    /// `I(A; B | G)` in bits.
    pub fn mutual_information<S: AsRef<str>>(
        &self,
        a: &[S],
        b: &[S],
        given: &[S],
    ) -> Result<f64, PmfError> {
        Info::new(self).mi(a, b, given)
    }
}

fn cell_count(sizes: impl Iterator<Item = usize>) -> Result<usize, PmfError> {
    let mut cells = 1usize;
    for s in sizes {
        cells = cells.saturating_mul(s);
        if cells > MAX_CELLS {
            return Err(PmfError::TooLarge(cells));
        }
    }
    Ok(cells)
}

fn plogp_sum(table: &[f64]) -> f64 {
    -table
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

fn clip(v: f64) -> Result<f64, PmfError> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -CLIP_TOL {
        Ok(0.0)
    } else {
        Err(PmfError::InternalConsistency(v))
    }
}

/// Entropy evaluator with a per-subset cache.
///
/// Region assembly asks for the same marginal entropies many times; this
/// keeps each one to a single pass over the joint.
pub struct Info<'a> {
    joint: &'a JointPmf,
    cache: RefCell<HashMap<u64, f64>>,
}

impl<'a> Info<'a> {
    pub fn new(joint: &'a JointPmf) -> Self {
        Info {
            joint,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn joint(&self) -> &JointPmf {
        self.joint
    }

    /// Joint entropy of the variable subset `mask`.
    pub fn h_mask(&self, mask: u64) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        if let Some(&h) = self.cache.borrow().get(&mask) {
            return h;
        }
        let h = plogp_sum(&self.joint.marginal_table(mask));
        self.cache.borrow_mut().insert(mask, h);
        h
    }

    fn disjoint<S: AsRef<str>>(&self, sets: &[&[S]]) -> Result<Vec<u64>, PmfError> {
        let mut seen = 0u64;
        let mut out = Vec::with_capacity(sets.len());
        for set in sets {
            let mut m = 0u64;
            for n in set.iter() {
                let i = self.joint.index_of(n.as_ref())?;
                if (seen | m) >> i & 1 == 1 {
                    return Err(PmfError::NotDisjoint(n.as_ref().to_string()));
                }
                m |= 1 << i;
            }
            seen |= m;
            out.push(m);
        }
        Ok(out)
    }

    pub fn entropy<S: AsRef<str>>(&self, a: &[S], given: &[S]) -> Result<f64, PmfError> {
        let m = self.disjoint(&[a, given])?;
        clip(self.h_mask(m[0] | m[1]) - self.h_mask(m[1]))
    }

    pub fn mi<S: AsRef<str>>(&self, a: &[S], b: &[S], given: &[S]) -> Result<f64, PmfError> {
        let m = self.disjoint(&[a, b, given])?;
        Ok(self.mi_mask(m[0], m[1], m[2]))
            .and_then(clip)
    }

    /// Unclipped `I(A;B|G)` over masks; callers that accept sets must check disjointness.
    pub fn mi_mask(&self, a: u64, b: u64, g: u64) -> f64 {
        self.h_mask(a | g) + self.h_mask(b | g) - self.h_mask(a | b | g) - self.h_mask(g)
    }
}

/// One conditional factor `P(targets | given)`.
///
/// `table` has one row per joint value of `given` (mixed radix, last given
/// variable fastest) and one column per joint value of `targets` in the same
/// layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub targets: Vec<(VarName, usize)>,
    #[serde(default)]
    pub given: Vec<VarName>,
    pub table: Vec<Vec<f64>>,
}

/// Ordered product of conditional factors, plus aliases and pinned constants.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FactorizationSpec {
    pub factors: Vec<Factor>,
    /// `(alias, source)`: the alias is a copy of the source variable.
    #[serde(default)]
    pub identify: Vec<(VarName, VarName)>,
    /// Variables pinned to the singleton alphabet.
    #[serde(default)]
    pub constants: Vec<VarName>,
}

impl FactorizationSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_json(text: &str) -> Result<Self, PmfError> {
        serde_json::from_str(text).map_err(|e| PmfError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("factorization serializes")
    }

    pub fn constant(mut self, name: &str) -> Self {
        self.constants.push(name.to_string());
        self
    }

    pub fn constants<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.constants
            .extend(names.iter().map(|s| s.as_ref().to_string()));
        self
    }

    pub fn identify(mut self, alias: &str, source: &str) -> Self {
        self.identify.push((alias.to_string(), source.to_string()));
        self
    }

    pub fn factor(mut self, f: Factor) -> Self {
        self.factors.push(f);
        self
    }

    /// Unconditional marginal of one variable.
    pub fn marginal(self, name: &str, probs: &[f64]) -> Self {
        self.factor(Factor {
            targets: vec![(name.to_string(), probs.len())],
            given: vec![],
            table: vec![probs.to_vec()],
        })
    }

    /// Alphabet of an already-declared variable (constant, factor target, or alias).
    pub fn size_of(&self, name: &str) -> Option<usize> {
        if self.constants.iter().any(|c| c == name) {
            return Some(1);
        }
        for f in &self.factors {
            if let Some(t) = f.targets.iter().find(|t| t.0 == name) {
                return Some(t.1);
            }
        }
        self.identify
            .iter()
            .find(|(a, _)| a == name)
            .and_then(|(_, s)| self.size_of(s))
    }

    /// Adds `P(target | given)` where each row is produced by `row(given values)`.
    ///
    /// # Panics
    /// If a conditioning variable has not been declared yet.
    pub fn conditional(
        self,
        target: &str,
        size: usize,
        given: &[&str],
        row: impl Fn(&[usize]) -> Vec<f64>,
    ) -> Self {
        let sizes: Vec<usize> = given
            .iter()
            .map(|g| {
                self.size_of(g)
                    .unwrap_or_else(|| panic!("{g} must be declared before {target}"))
            })
            .collect();
        let table = mixed_radix(&sizes).map(|vals| row(&vals)).collect();
        self.factor(Factor {
            targets: vec![(target.to_string(), size)],
            given: given.iter().map(|s| s.to_string()).collect(),
            table,
        })
    }

    /// Adds `target = f(given)` as a one-hot conditional.
    pub fn function(
        self,
        target: &str,
        size: usize,
        given: &[&str],
        f: impl Fn(&[usize]) -> usize,
    ) -> Self {
        self.conditional(target, size, given, |vals| {
            let mut r = vec![0.0; size];
            r[f(vals)] = 1.0;
            r
        })
    }

    /// Materializes the joint law of every declared variable.
    pub fn build(&self) -> Result<JointPmf, PmfError> {
        let mut vars: Vec<(VarName, usize)> = Vec::new();
        let mut probs = vec![1.0];
        let declare = |vars: &Vec<(VarName, usize)>, name: &str| -> Result<(), PmfError> {
            if vars.iter().any(|v| v.0 == name) {
                Err(PmfError::DuplicateVariable(name.to_string()))
            } else {
                Ok(())
            }
        };
        for c in &self.constants {
            declare(&vars, c)?;
            vars.push((c.clone(), 1));
        }
        for (fi, f) in self.factors.iter().enumerate() {
            let given_idx: Vec<usize> = f
                .given
                .iter()
                .map(|g| {
                    vars.iter()
                        .position(|v| &v.0 == g)
                        .ok_or_else(|| PmfError::BadTopologicalOrder {
                            factor: fi,
                            var: g.clone(),
                        })
                })
                .collect::<Result<_, _>>()?;
            for t in &f.targets {
                declare(&vars, &t.0)?;
                if t.1 == 0 {
                    return Err(PmfError::AlphabetMismatch {
                        var: t.0.clone(),
                        expected: 1,
                        got: 0,
                    });
                }
            }
            let rows: usize = given_idx.iter().map(|&i| vars[i].1).product();
            let width = cell_count(f.targets.iter().map(|t| t.1))?;
            if f.table.len() != rows {
                return Err(PmfError::FactorShape {
                    factor: fi,
                    expected: rows,
                    got: f.table.len(),
                });
            }
            for (r, row) in f.table.iter().enumerate() {
                if row.len() != width {
                    return Err(PmfError::FactorShape {
                        factor: fi,
                        expected: width,
                        got: row.len(),
                    });
                }
                if let Some(&p) = row.iter().find(|p| **p < 0.0 || p.is_nan()) {
                    return Err(PmfError::NegativeProbability(p));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > FACTOR_TOL {
                    return Err(PmfError::FactorNotNormalized {
                        factor: fi,
                        row: r,
                        sum,
                    });
                }
            }
            cell_count(vars.iter().map(|v| v.1).chain(std::iter::once(width)))?;
            probs = extend(&vars, &probs, width, |digits| {
                let mut r = 0;
                for &i in &given_idx {
                    r = r * vars[i].1 + digits[i];
                }
                &f.table[r][..]
            });
            vars.extend(f.targets.iter().cloned());
        }
        for (alias, source) in &self.identify {
            declare(&vars, alias)?;
            let si = vars
                .iter()
                .position(|v| &v.0 == source)
                .ok_or_else(|| PmfError::UnknownVariable(source.clone()))?;
            let size = vars[si].1;
            cell_count(vars.iter().map(|v| v.1).chain(std::iter::once(size)))?;
            let onehots: Vec<Vec<f64>> = (0..size)
                .map(|k| (0..size).map(|j| f64::from(u8::from(j == k))).collect())
                .collect();
            probs = extend(&vars, &probs, size, |digits| &onehots[digits[si]][..]);
            vars.push((alias.clone(), size));
        }
        JointPmf::new(vars, probs)
    }

    /// Joint law of the factorization followed by the channel, which appends
    /// `Y1` and `Y2` driven by `X1` and `X2`.
    pub fn build_joint(&self, ch: &ChannelSpec) -> Result<JointPmf, PmfError> {
        let base = self.build()?;
        attach_channel(&base, ch)
    }
}

/// Appends `Y1, Y2` to a joint that contains `X1, X2`.
pub fn attach_channel(base: &JointPmf, ch: &ChannelSpec) -> Result<JointPmf, PmfError> {
    for (name, want) in [("X1", ch.x1.size()), ("X2", ch.x2.size())] {
        let got = base.alphabet(name)?;
        if got != want {
            return Err(PmfError::AlphabetMismatch {
                var: name.to_string(),
                expected: want,
                got,
            });
        }
    }
    for y in ["Y1", "Y2"] {
        if base.contains(y) {
            return Err(PmfError::DuplicateVariable(y.to_string()));
        }
    }
    let (i1, i2) = (base.index_of("X1")?, base.index_of("X2")?);
    let width = ch.y1.size() * ch.y2.size();
    cell_count(base.vars.iter().map(|v| v.1).chain(std::iter::once(width)))?;
    let probs = extend(&base.vars, &base.probs, width, |d| ch.row(d[i1], d[i2]));
    let mut vars = base.vars.clone();
    vars.push(("Y1".into(), ch.y1.size()));
    vars.push(("Y2".into(), ch.y2.size()));
    JointPmf::new(vars, probs)
}

/// Multiplies every cell by a row of new trailing values chosen from the cell's digits.
fn extend<'t>(
    vars: &[(VarName, usize)],
    probs: &[f64],
    width: usize,
    row: impl Fn(&[usize]) -> &'t [f64],
) -> Vec<f64> {
    let sizes: Vec<usize> = vars.iter().map(|v| v.1).collect();
    let mut out = Vec::with_capacity(probs.len() * width);
    let mut digits = vec![0usize; sizes.len()];
    for &p in probs {
        let r = row(&digits);
        out.extend(r.iter().map(|q| p * q));
        for v in (0..sizes.len()).rev() {
            digits[v] += 1;
            if digits[v] < sizes[v] {
                break;
            }
            digits[v] = 0;
        }
    }
    out
}

/// All tuples of a mixed-radix range, last position fastest.
pub fn mixed_radix(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = sizes.iter().product();
    (0..total).map(move |mut k| {
        let mut v = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            v[i] = k % sizes[i];
            k /= sizes[i];
        }
        v
    })
}

/// Binary entropy function in bits.
pub fn h2(p: f64) -> f64 {
    plogp_sum(&[p, 1.0 - p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelSpec;

    const AUX: [&str; 9] = ["W0", "U0", "V0", "W1", "U1", "V1", "W2", "U2", "V2"];

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn constants_with_uniform_inputs_over_noiseless_channel() {
        let f = FactorizationSpec::new()
            .constants(&AUX)
            .marginal("X1", &[0.5, 0.5])
            .marginal("X2", &[0.5, 0.5]);
        let ch = ChannelSpec::deterministic(2, 2, 2, 2, |a, b| (a, b)).unwrap();
        let j = f.build_joint(&ch).unwrap();
        assert_eq!(j.vars().len(), 13);
        let xy = j.marginalize(&["X1", "X2", "Y1", "Y2"]).unwrap();
        for (k, &p) in xy.probs().iter().enumerate() {
            let (x1, x2, y1, y2) = (k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1);
            let want = if (x1, x2) == (y1, y2) { 0.25 } else { 0.0 };
            assert_eq!(p, want);
        }
    }

    #[test]
    fn eq10_shape_gives_conditional_independence() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let j = crate::random::random_ingms_joint(&mut rng);
        let mi = j
            .mutual_information(&["X1", "W1", "U1", "V1"], &["X2", "W2", "U2", "V2"], &[
                "W0", "U0", "V0",
            ])
            .unwrap();
        assert!(mi.abs() < 1e-12, "{mi}");
    }

    #[test]
    fn copies_of_uniform_bit_have_one_bit() {
        let f = FactorizationSpec::new()
            .constants(&["W1", "U1", "V1", "W2", "U2", "V2", "X1", "X2"])
            .marginal("W0", &[0.5, 0.5])
            .identify("U0", "W0")
            .identify("V0", "W0");
        let j = f.build().unwrap();
        close(j.entropy(&["W0", "U0", "V0"], &[]).unwrap(), 1.0, 1e-15);
    }

    #[test]
    fn bad_topological_order() {
        let f = FactorizationSpec::new().factor(Factor {
            targets: vec![("U0".into(), 2)],
            given: vec!["W0".into()],
            table: vec![vec![0.5, 0.5]; 2],
        });
        assert!(matches!(
            f.build(),
            Err(PmfError::BadTopologicalOrder { factor: 0, .. })
        ));
    }

    #[test]
    fn unnormalized_factor() {
        let f = FactorizationSpec::new().marginal("W0", &[0.5, 0.6]);
        assert!(matches!(
            f.build(),
            Err(PmfError::FactorNotNormalized { factor: 0, row: 0, .. })
        ));
    }

    #[test]
    fn channel_alphabet_mismatch() {
        let f = FactorizationSpec::new()
            .marginal("X1", &[0.5, 0.5])
            .marginal("X2", &[1.0 / 3.0; 3]);
        let ch = ChannelSpec::deterministic(2, 2, 2, 2, |a, b| (a, b)).unwrap();
        assert!(matches!(
            f.build_joint(&ch),
            Err(PmfError::AlphabetMismatch { ref var, expected: 2, got: 3 }) if var == "X2"
        ));
    }

    #[test]
    fn too_large_joint() {
        let mut f = FactorizationSpec::new();
        for i in 0..13 {
            f = f.marginal(&format!("A{i}"), &[0.25; 4]);
        }
        assert!(matches!(f.build(), Err(PmfError::TooLarge(_))));
    }

    #[test]
    fn marginalize_identity_and_empty() {
        let j = JointPmf::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        assert_eq!(j.marginalize(&["A", "B"]).unwrap(), j);
        let none: [&str; 0] = [];
        let s = j.marginalize(&none).unwrap();
        assert_eq!(s.probs(), &[1.0]);
        assert!(matches!(
            j.marginalize(&["C"]),
            Err(PmfError::UnknownVariable(_))
        ));
    }

    #[test]
    fn marginalize_product_matches_brute_force() {
        let pa = [0.2, 0.5, 0.3];
        let pb = [0.6, 0.4];
        let j = FactorizationSpec::new()
            .marginal("A", &pa)
            .marginal("B", &pb)
            .build()
            .unwrap();
        let m = j.marginalize(&["A"]).unwrap();
        for a in 0..3 {
            let brute: f64 = (0..2).map(|b| j.probs()[a * 2 + b]).sum();
            close(m.probs()[a], brute, 1e-15);
            close(m.probs()[a], pa[a], 1e-15);
        }
        let mb = j.marginalize(&["B"]).unwrap();
        close(mb.probs()[0], 0.6, 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let u = JointPmf::single("A", vec![0.5, 0.5]).unwrap();
        close(u.entropy(&["A"], &[]).unwrap(), 1.0, 1e-15);
        let d = JointPmf::single("A", vec![0.0, 1.0]).unwrap();
        assert_eq!(d.entropy(&["A"], &[]).unwrap(), 0.0);
        // -(0.25 log 0.25 + 0.75 log 0.75) = 0.5 + 0.75*0.415037... = 0.811278124...
        let oracle = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        let b = JointPmf::single("A", vec![0.25, 0.75]).unwrap();
        close(b.entropy(&["A"], &[]).unwrap(), oracle, 1e-12);
        close(oracle, 0.811_278_124_459_132_8, 1e-9);
    }

    #[test]
    fn mutual_information_examples() {
        let ind = FactorizationSpec::new()
            .marginal("A", &[0.3, 0.7])
            .marginal("B", &[0.5, 0.5])
            .build()
            .unwrap();
        close(ind.mutual_information(&["A"], &["B"], &[]).unwrap(), 0.0, 1e-12);
        let copy = FactorizationSpec::new()
            .marginal("A", &[0.5, 0.5])
            .identify("B", "A")
            .build()
            .unwrap();
        close(copy.mutual_information(&["A"], &["B"], &[]).unwrap(), 1.0, 1e-15);
        let bsc = FactorizationSpec::new()
            .marginal("A", &[0.5, 0.5])
            .conditional("B", 2, &["A"], |a| {
                if a[0] == 0 {
                    vec![0.89, 0.11]
                } else {
                    vec![0.11, 0.89]
                }
            })
            .build()
            .unwrap();
        let oracle = 1.0 - h2(0.11);
        close(bsc.mutual_information(&["A"], &["B"], &[]).unwrap(), oracle, 1e-12);
        close(oracle, 0.5002, 1e-3);
    }

    #[test]
    fn overlapping_sets_rejected() {
        let j = JointPmf::single("A", vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            j.mutual_information(&["A"], &["A"], &[]),
            Err(PmfError::NotDisjoint(_))
        ));
    }

    #[test]
    fn reorder_is_a_permutation() {
        let j = JointPmf::new(
            vec![("A".into(), 2), ("B".into(), 3)],
            vec![0.1, 0.2, 0.05, 0.15, 0.3, 0.2],
        )
        .unwrap();
        let r = j.reorder(&["B", "A"]).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                assert_eq!(r.probs()[b * 2 + a], j.probs()[a * 3 + b]);
            }
        }
    }

    #[test]
    fn factorization_json_round_trip() {
        let f = FactorizationSpec::new()
            .constant("W0")
            .marginal("X1", &[0.5, 0.5])
            .function("X2", 2, &["X1"], |v| 1 - v[0])
            .identify("U1", "X1");
        let back = FactorizationSpec::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;

        fn random_joint(seed: u64) -> JointPmf {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            crate::random::random_joint(&mut rng, &[("A", 2), ("B", 3), ("C", 2), ("G", 2)])
        }

        proptest! {
            #[test]
            fn chain_rule(seed in any::<u64>()) {
                let j = random_joint(seed);
                let lhs = j.mutual_information(&["A"], &["B", "C"], &["G"]).unwrap();
                let r1 = j.mutual_information(&["A"], &["B"], &["G"]).unwrap();
                let r2 = j.mutual_information(&["A"], &["C"], &["B", "G"]).unwrap();
                prop_assert!((lhs - r1 - r2).abs() < 1e-9);
            }

            #[test]
            fn nonnegative(seed in any::<u64>()) {
                let j = random_joint(seed);
                prop_assert!(j.entropy(&["A", "B"], &["C"]).unwrap() >= -1e-12);
                prop_assert!(j.mutual_information(&["A"], &["C"], &["B", "G"]).unwrap() >= -1e-12);
            }
        }
    }
}

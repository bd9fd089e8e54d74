//! Letter typicality: every joint symbol's empirical frequency lies within
//! a relative `epsilon` of its reference probability.

use crate::pmf::JointPmf;

use super::SimError;

/// Typicality slack and blocklength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityParams {
    pub epsilon: f64,
    pub n: usize,
}

impl TypicalityParams {
    pub const DEFAULT_EPSILON: f64 = 0.25;

    pub fn new(epsilon: f64, n: usize) -> Result<Self, SimError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(SimError::BadEpsilon(epsilon));
        }
        if n == 0 || n > 1 << 16 {
            return Err(SimError::BadBlocklength(n));
        }
        Ok(Self { epsilon, n })
    }

    /// True when `epsilon < p_min(reference)`, the regime the error analysis
    /// assumes. Small blocklengths often need a larger slack, so this is
    /// reported rather than enforced.
    pub fn below_p_min(&self, reference: &JointPmf) -> bool {
        self.epsilon < reference.p_min()
    }
}

/// Allowed count range per joint symbol of a fixed reference table.
#[derive(Debug, Clone)]
pub(crate) struct Checker {
    n: usize,
    /// `(lo, hi)` per cell; zero-probability cells get `(0, 0)`.
    bounds: Vec<(u32, u32)>,
    /// Cells with positive probability.
    support: Vec<u32>,
    /// Mixed-radix strides of the sequences, in the order they are passed.
    strides: Vec<usize>,
    /// False when no count vector can satisfy every bound at this `n`.
    feasible: bool,
}

impl Checker {
    /// `sizes` are the alphabets of the passed sequences, `table` the
    /// reference law over them (row-major, last fastest).
    pub(crate) fn new(sizes: &[usize], table: &[f64], typ: TypicalityParams) -> Self {
        let mut strides = vec![0; sizes.len()];
        let mut s = 1;
        for i in (0..sizes.len()).rev() {
            strides[i] = s;
            s *= sizes[i];
        }
        debug_assert_eq!(s, table.len());
        let n = typ.n as f64;
        let mut bounds = Vec::with_capacity(table.len());
        let mut support = Vec::new();
        let (mut lo_sum, mut hi_sum) = (0u64, 0u64);
        for (k, &p) in table.iter().enumerate() {
            if p > 0.0 {
                let lo = (n * p * (1.0 - typ.epsilon) - 1e-9).ceil().max(0.0) as u32;
                let hi = (n * p * (1.0 + typ.epsilon) + 1e-9).floor() as u32;
                bounds.push((lo, hi));
                support.push(k as u32);
                lo_sum += u64::from(lo);
                hi_sum += u64::from(hi.min(typ.n as u32));
            } else {
                bounds.push((0, 0));
            }
        }
        let nn = typ.n as u64;
        let feasible = support.iter().all(|&k| {
            let (lo, hi) = bounds[k as usize];
            lo <= hi
        }) && lo_sum <= nn
            && nn <= hi_sum;
        Self {
            n: typ.n,
            bounds,
            support,
            strides,
            feasible,
        }
    }

    pub(crate) fn from_joint(joint: &JointPmf, mask: u64, typ: TypicalityParams) -> Self {
        let sizes: Vec<usize> = joint
            .vars()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v.1)
            .collect();
        Self::new(&sizes, &joint.marginal_table(mask), typ)
    }

    /// `scratch` must be all zeros on entry and is left all zeros.
    pub(crate) fn check(&self, seqs: &[&[u8]], scratch: &mut Vec<u32>) -> bool {
        if !self.feasible {
            return false;
        }
        if scratch.len() < self.bounds.len() {
            scratch.resize(self.bounds.len(), 0);
        }
        let mut ok = true;
        let mut filled = 0;
        for i in 0..self.n {
            let mut a = 0;
            for (s, &st) in seqs.iter().zip(&self.strides) {
                a += s[i] as usize * st;
            }
            scratch[a] += 1;
            filled = i + 1;
            if scratch[a] > self.bounds[a].1 {
                ok = false;
                break;
            }
        }
        if ok {
            ok = self.support.iter().all(|&k| {
                let c = scratch[k as usize];
                c >= self.bounds[k as usize].0
            });
        }
        for i in 0..filled {
            let mut a = 0;
            for (s, &st) in seqs.iter().zip(&self.strides) {
                a += s[i] as usize * st;
            }
            scratch[a] = 0;
        }
        ok
    }
}

/// Whether `seqs` (one per variable of `reference`, in its order) are
/// jointly letter typical.
pub fn is_typical(
    seqs: &[&[u8]],
    reference: &JointPmf,
    typ: TypicalityParams,
) -> Result<bool, SimError> {
    if seqs.len() != reference.vars().len() {
        return Err(SimError::LengthMismatch {
            expected: reference.vars().len(),
            got: seqs.len(),
        });
    }
    for s in seqs {
        if s.len() != typ.n {
            return Err(SimError::LengthMismatch {
                expected: typ.n,
                got: s.len(),
            });
        }
    }
    for (s, v) in seqs.iter().zip(reference.vars()) {
        if let Some(&bad) = s.iter().find(|&&x| x as usize >= v.1) {
            return Err(SimError::SymbolOutOfRange {
                var: v.0.clone(),
                symbol: bad as usize,
            });
        }
    }
    let sizes: Vec<usize> = reference.vars().iter().map(|v| v.1).collect();
    let c = Checker::new(&sizes, reference.probs(), typ);
    Ok(c.check(seqs, &mut Vec::new()))
}

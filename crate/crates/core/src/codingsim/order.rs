//! Total orders on bin-index tuples used to pick the designated bins.

use serde::{Deserialize, Serialize};

/// Rule ranking index tuples; the encoder takes the smallest typical tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaOrder {
    /// First coordinate most significant.
    #[default]
    Lex,
    /// Last coordinate most significant.
    Colex,
}

impl LambdaOrder {
    /// Position of `t` in the order restricted to the box `dims` (0-based).
    pub fn rank(self, t: &[usize], dims: &[usize]) -> u64 {
        debug_assert_eq!(t.len(), dims.len());
        let idx: Vec<usize> = match self {
            LambdaOrder::Lex => (0..t.len()).collect(),
            LambdaOrder::Colex => (0..t.len()).rev().collect(),
        };
        idx.iter()
            .fold(0u64, |r, &i| r * dims[i] as u64 + t[i] as u64)
    }

    /// Inverse of [`LambdaOrder::rank`].
    pub fn unrank(self, mut r: u64, dims: &[usize]) -> Vec<usize> {
        let mut t = vec![0; dims.len()];
        let idx: Vec<usize> = match self {
            LambdaOrder::Lex => (0..dims.len()).rev().collect(),
            LambdaOrder::Colex => (0..dims.len()).collect(),
        };
        for i in idx {
            t[i] = (r % dims[i] as u64) as usize;
            r /= dims[i] as u64;
        }
        t
    }

    /// Smallest tuple among `candidates`, or `None` if there are none.
    pub fn min<'a>(self, candidates: &'a [Vec<usize>], dims: &[usize]) -> Option<&'a Vec<usize>> {
        candidates.iter().min_by_key(|t| self.rank(t, dims))
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lex" => Some(LambdaOrder::Lex),
            "colex" => Some(LambdaOrder::Colex),
            _ => None,
        }
    }
}

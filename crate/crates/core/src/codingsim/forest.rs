//! The superposition codebook forest.

use rand::Rng;

use crate::pmf::JointPmf;

use super::{Budget, SimError, Sizes};

/// Index axes (positions in the rate list) of each auxiliary layer.
pub(crate) const AXES: [&[usize]; 9] = [
    &[0],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[0, 1, 3, 4],
    &[0, 2, 3, 5],
    &[0, 6],
    &[0, 1, 6, 7],
    &[0, 2, 6, 8],
];

/// Cloud centers of each layer (layer indices), the edges of the
/// superposition graph.
pub const CLOUDS: [&[usize]; 9] = [
    &[],
    &[0],
    &[0],
    &[0],
    &[0, 1, 3],
    &[0, 2, 3],
    &[0],
    &[0, 1, 6],
    &[0, 2, 6],
];

/// Sampler for one variable given others, drawn symbol by symbol.
#[derive(Debug, Clone)]
pub(crate) struct CondSampler {
    /// Cumulative rows, one per parent configuration.
    cdf: Vec<Vec<f64>>,
    parent_sizes: Vec<usize>,
}

impl CondSampler {
    /// `parents` are variable positions in `joint`, ascending, all before `child`.
    /// Parent configurations of zero mass get a uniform row.
    pub(crate) fn new(joint: &JointPmf, parents: &[usize], child: usize) -> Self {
        debug_assert!(parents.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(parents.iter().all(|&p| p < child));
        let vars = joint.vars();
        let mut mask = 1u64 << child;
        for &p in parents {
            mask |= 1 << p;
        }
        let table = joint.marginal_table(mask);
        let k = vars[child].1;
        let cdf = table
            .chunks(k)
            .map(|row| {
                let total: f64 = row.iter().sum();
                let mut acc = 0.0;
                let mut c: Vec<f64> = if total > 0.0 {
                    row.iter()
                        .map(|p| {
                            acc += p / total;
                            acc
                        })
                        .collect()
                } else {
                    (1..=k).map(|i| i as f64 / k as f64).collect()
                };
                *c.last_mut().unwrap() = f64::INFINITY;
                c
            })
            .collect();
        Self {
            cdf,
            parent_sizes: parents.iter().map(|&p| vars[p].1).collect(),
        }
    }

    /// One draw per position, given parent sequences in `parents` order.
    pub(crate) fn sample<R: Rng + ?Sized>(&self, parents: &[&[u8]], n: usize, rng: &mut R, out: &mut Vec<u8>) {
        for i in 0..n {
            let mut r = 0;
            for (s, &sz) in parents.iter().zip(&self.parent_sizes) {
                r = r * sz + s[i] as usize;
            }
            let u: f64 = rng.gen();
            let row = &self.cdf[r];
            out.push(row.iter().position(|&c| u < c).unwrap() as u8);
        }
    }
}

/// One layer of codewords, stored flat in row-major index order.
#[derive(Debug, Clone)]
pub struct Layer {
    pub dims: Vec<usize>,
    data: Vec<u8>,
}

impl Layer {
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Codewords of the nine auxiliary layers.
#[derive(Debug, Clone)]
pub struct CodebookForest {
    pub n: usize,
    pub sizes: Sizes,
    layers: Vec<Layer>,
}

impl CodebookForest {
    /// Draws every layer given its cloud centers. `samplers[l]` generates
    /// layer `l` from the layers in `CLOUDS[l]`.
    pub(crate) fn generate<R: Rng + ?Sized>(
        n: usize,
        sizes: &Sizes,
        samplers: &[CondSampler],
        budget: &Budget,
        rng: &mut R,
    ) -> Result<Self, SimError> {
        let mut layers: Vec<Layer> = Vec::with_capacity(9);
        for l in 0..9 {
            let dims: Vec<usize> = AXES[l].iter().map(|&k| sizes.axis(k)).collect();
            let count: u128 = dims.iter().map(|&d| d as u128).product();
            budget.check(&format!("layer {}", super::SIM_VARS[l]), count, budget.codewords)?;
            let mut data = Vec::with_capacity(count as usize * n);
            let mut j9 = [0usize; 9];
            for flat in 0..count as usize {
                let mut rest = flat;
                for (&k, &d) in AXES[l].iter().zip(&dims).rev() {
                    j9[k] = rest % d;
                    rest /= d;
                }
                let parents: Vec<&[u8]> = CLOUDS[l]
                    .iter()
                    .map(|&p| seq_in(&layers[p], AXES[p], &j9, n))
                    .collect();
                samplers[l].sample(&parents, n, rng, &mut data);
            }
            layers.push(Layer { dims, data });
        }
        Ok(Self {
            n,
            sizes: sizes.clone(),
            layers,
        })
    }

    /// Codeword of layer `l` at the full index vector `j9` (only the layer's
    /// own axes are read).
    pub fn codeword(&self, l: usize, j9: &[usize; 9]) -> &[u8] {
        seq_in(&self.layers[l], AXES[l], j9, self.n)
    }

    pub fn layer(&self, l: usize) -> &Layer {
        &self.layers[l]
    }

    /// Overwrites one codeword; used to build degenerate test cases.
    pub fn set_codeword(&mut self, l: usize, j9: &[usize; 9], seq: &[u8]) {
        let n = self.n;
        let off = offset(&self.layers[l], AXES[l], j9) * n;
        self.layers[l].data[off..off + n].copy_from_slice(seq);
    }
}

fn offset(layer: &Layer, axes: &[usize], j9: &[usize; 9]) -> usize {
    axes.iter()
        .zip(&layer.dims)
        .fold(0, |o, (&k, &d)| o * d + j9[k])
}

fn seq_in<'a>(layer: &'a Layer, axes: &[usize], j9: &[usize; 9], n: usize) -> &'a [u8] {
    let off = offset(layer, axes, j9) * n;
    &layer.data[off..off + n]
}

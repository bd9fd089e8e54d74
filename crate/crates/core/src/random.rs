//! Random instances for tests, diagnostics and benchmarks.

use rand::Rng;

use crate::channel::{Alphabet, ChannelSpec, CondTable, OrthogonalChannelSpec};
use crate::pmf::{Factor, FactorizationSpec, JointPmf};

/// A point drawn uniformly from the probability simplex on `k` symbols.
pub fn random_dist<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

pub fn random_cond_table<R: Rng + ?Sized>(rng: &mut R, x1: usize, x2: usize, y: usize) -> CondTable {
    let probs = (0..x1 * x2).flat_map(|_| random_dist(rng, y)).collect();
    CondTable::new(x1, x2, y, probs).expect("simplex rows are valid")
}

/// A channel with independent uniformly-random rows over `(y1, y2)`.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    x1: usize,
    x2: usize,
    y1: usize,
    y2: usize,
) -> ChannelSpec {
    let law = (0..x1 * x2).flat_map(|_| random_dist(rng, y1 * y2)).collect();
    let a = |n| Alphabet::new(n).expect("nonzero alphabet");
    ChannelSpec::new(a(x1), a(x2), a(y1), a(y2), law).expect("simplex rows are valid")
}

/// Orthogonal channel with `|XA1| = |XA2| = a`, `|XB1| = |XB2| = b` and both
/// outputs of size `y`.
pub fn random_orthogonal_channel<R: Rng + ?Sized>(
    rng: &mut R,
    a: usize,
    b: usize,
    y: usize,
) -> OrthogonalChannelSpec {
    let law_a = random_cond_table(rng, a, a, y);
    let law_b = random_cond_table(rng, b, b, y);
    OrthogonalChannelSpec::new(law_a, law_b).expect("random tables are valid")
}

/// A joint with no structure over the given variables.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, vars: &[(&str, usize)]) -> JointPmf {
    let cells: usize = vars.iter().map(|v| v.1).product();
    JointPmf::new(
        vars.iter().map(|(n, s)| (n.to_string(), *s)).collect(),
        random_dist(rng, cells),
    )
    .expect("random joint is valid")
}

fn random_factor<R: Rng + ?Sized>(
    rng: &mut R,
    targets: &[&str],
    given: &[&str],
    size: usize,
) -> Factor {
    let rows = size.pow(given.len() as u32);
    let width = size.pow(targets.len() as u32);
    Factor {
        targets: targets.iter().map(|t| (t.to_string(), size)).collect(),
        given: given.iter().map(|g| g.to_string()).collect(),
        table: (0..rows).map(|_| random_dist(rng, width)).collect(),
    }
}

/// A random factorization of the two-transmitter shape: a common triple
/// `(W0,U0,V0)`, then each transmitter's auxiliaries and input drawn
/// conditionally independently given that triple. All alphabets are binary.
pub fn random_ingms_factorization<R: Rng + ?Sized>(rng: &mut R) -> FactorizationSpec {
    let common = ["W0", "U0", "V0"];
    FactorizationSpec::new()
        .factor(random_factor(rng, &common, &[], 2))
        .factor(random_factor(rng, &["W1", "U1", "V1", "X1"], &common, 2))
        .factor(random_factor(rng, &["W2", "U2", "V2", "X2"], &common, 2))
}

/// A random binary joint of all auxiliaries, inputs and outputs.
pub fn random_ingms_joint<R: Rng + ?Sized>(rng: &mut R) -> JointPmf {
    let f = random_ingms_factorization(rng);
    let ch = random_channel(rng, 2, 2, 2, 2);
    f.build_joint(&ch).expect("random factorization is valid")
}

/// A distribution close to a point mass: a random symbol keeps at least
/// 70% of the mass and the rest is spread uniformly at random.
pub fn random_sharp_dist<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let delta = rng.gen_range(0.0..0.3);
    let peak = rng.gen_range(0..k);
    let mut d: Vec<f64> = random_dist(rng, k).into_iter().map(|x| delta * x).collect();
    d[peak] += 1.0 - delta;
    d
}

/// A binary broadcast channel `P(y1, y2 | x)` with near-deterministic rows,
/// as a [`ChannelSpec`] whose second input is a singleton.
pub fn random_sharp_bc<R: Rng + ?Sized>(rng: &mut R) -> ChannelSpec {
    let law = (0..2).flat_map(|_| random_sharp_dist(rng, 4)).collect();
    let a = |n| Alphabet::new(n).expect("nonzero alphabet");
    ChannelSpec::new(a(2), a(1), a(2), a(2), law).expect("simplex rows are valid")
}

/// A binary single-output two-input channel with near-deterministic rows.
pub fn random_sharp_mac<R: Rng + ?Sized>(rng: &mut R) -> CondTable {
    let probs = (0..4).flat_map(|_| random_sharp_dist(rng, 2)).collect();
    CondTable::new(2, 2, 2, probs).expect("simplex rows are valid")
}

/// A binary law of `(W, U, V)` mixing a conditionally independent part
/// with a small unstructured part, and a near-deterministic `P(x|w,u,v)`.
pub fn random_marton_law<R: Rng + ?Sized>(rng: &mut R) -> (Vec<f64>, Vec<Vec<f64>>) {
    let pw = random_dist(rng, 2);
    let pu: Vec<Vec<f64>> = (0..2).map(|_| random_dist(rng, 2)).collect();
    let pv: Vec<Vec<f64>> = (0..2).map(|_| random_dist(rng, 2)).collect();
    let noise = random_dist(rng, 8);
    let lambda = rng.gen_range(0.0..0.3);
    let pwuv = (0..8)
        .map(|i| {
            let (w, u, v) = (i >> 2, (i >> 1) & 1, i & 1);
            (1.0 - lambda) * pw[w] * pu[w][u] * pv[w][v] + lambda * noise[i]
        })
        .collect();
    let px = (0..8).map(|_| random_sharp_dist(rng, 2)).collect();
    (pwuv, px)
}

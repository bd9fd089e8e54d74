//! Fixed instances shared by the benches.

use ingms_core::codingsim::SimConfig;
use ingms_core::random::random_ingms_joint;
use ingms_core::region::{orthogonal_ingms_joint, OrthogonalInputs};
use ingms_core::{BinRates, CondTable, FactorizationSpec, JointPmf, OrthogonalChannelSpec, RatePoint, TypicalityParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random law of the general network, fixed by `seed`.
pub fn ingms_joint(seed: u64) -> JointPmf {
    random_ingms_joint(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Two clean binary sub-channels with uniform sub-inputs.
pub fn clean_orthogonal_config(n: usize, trials: usize) -> SimConfig {
    let table = CondTable::from_fn(2, 2, 4, |a, b, y| f64::from(u8::from(y == 2 * a + b))).unwrap();
    let o = OrthogonalChannelSpec::new(table.clone(), table).unwrap();
    let u = vec![vec![0.5, 0.5]];
    let d = OrthogonalInputs {
        pw: vec![1.0],
        pxa1: u.clone(),
        pxa2: u.clone(),
        pxb1: u.clone(),
        pxb2: u,
    };
    let rates = RatePoint::new(&[("R11", 0.5), ("R21", 0.5), ("R12", 0.5), ("R22", 0.5)]).unwrap();
    SimConfig::from_joint(
        rates,
        BinRates::zero(),
        TypicalityParams::new(0.75, n).unwrap(),
        orthogonal_ingms_joint(&d, &o).unwrap(),
        o.compose(),
        trials,
        1,
    )
    .unwrap()
}

/// `U0, V0` uniform, `U1 = V0`, `V1 = U0`.
pub fn copy_law() -> JointPmf {
    FactorizationSpec::new()
        .constants(&["W0", "W1"])
        .marginal("U0", &[0.5, 0.5])
        .marginal("V0", &[0.5, 0.5])
        .identify("U1", "V0")
        .identify("V1", "U0")
        .build()
        .unwrap()
}

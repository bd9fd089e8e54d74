//! Rate regions and random-coding simulation for two-transmitter,
//! two-receiver interference networks with general message sets.

pub mod channel;
pub mod codingsim;
pub mod diagnostics;
pub mod fme;
pub mod format;
pub mod pmf;
pub mod random;
pub mod region;

pub use channel::{Alphabet, ChannelError, ChannelSpec, CondTable, OrthogonalChannelSpec, Output};
pub use fme::{FmeError, LinIneq, LinSys};
pub use pmf::{Factor, FactorizationSpec, Info, JointPmf, PmfError};
pub use region::{BinRates, RatePoint, RegionError, Role, Rx};
pub use codingsim::{Budget, LambdaOrder, SimConfig, SimError, TypicalityParams};

//! Exact Minkowski arithmetic on finite unions of closed rational intervals.
//!
//! The crate substitutes compact sets into power series with certified
//! Hausdorff-distance enclosures, builds the grid covers that bound Hausdorff
//! capacity of such images, and issues gap-chain certificates proving that an
//! image contains an interval.

pub mod boxcount;
pub mod certificate;
pub mod cover;
pub mod error;
pub mod experiments;
pub mod interval;
pub mod io;
pub mod random;
pub mod rng;
pub mod scalar;
pub mod series;
pub mod set;

pub use error::{Error, Result};
pub use interval::Interval;
pub use scalar::Scalar;
pub use series::PowerSeries;
pub use set::CompactSet;

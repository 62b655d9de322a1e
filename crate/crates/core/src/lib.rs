pub mod analysis;
pub mod asymptotics;
pub mod dispersion;
pub mod error;
pub mod exact;
pub mod fdtd;
pub mod specfun;

pub use dispersion::{Dispersion, SourceSpec};
pub use error::{Error, Result};

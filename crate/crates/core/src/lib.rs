pub mod bench;
pub mod cli;
pub mod error;
pub mod flat;
pub mod fourier;
pub mod gallery;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod outer;
pub mod samples;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::RankTol;
pub use tensor::{ScalarKind, Tensor3};

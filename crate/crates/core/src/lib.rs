pub mod asm;
pub mod chebyshev;
pub mod conjecture;
pub mod delta;
pub mod error;
pub mod hp;
pub mod kernel;
pub mod linalg;

pub use chebyshev::AlphaParam;
pub use error::{Error, Result};
pub use hp::{Complex, Real};

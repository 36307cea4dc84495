pub mod calculus;
pub mod entropy;
pub mod error;
pub mod hyperbolic;
pub mod probability;
pub mod rng;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use hyperbolic::{HypOrdering, Hyperbolic, HyperbolicInterval, ZeroPowZero};
pub use rng::SeededRng;

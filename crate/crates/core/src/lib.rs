pub mod ascover;
pub mod error;
pub mod gf;
pub mod laurent;
pub mod moduli;
pub mod par;
pub mod ramfilt;
pub mod rational;
pub mod tower;

pub use error::{Error, Result};
pub use par::Execution;
pub use rational::Rational;

pub mod brauer;
pub mod character;
pub mod congruence;
pub mod cyclotomic;
pub mod error;
pub mod group_ring;
pub mod logdet;
pub mod group;
pub mod modp;

pub use error::{Error, Result};

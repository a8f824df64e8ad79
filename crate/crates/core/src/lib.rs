//! Exact intersection numbers on moduli spaces of curves.

pub mod cache;
pub mod cli;
pub mod descendent;
pub mod error;
pub mod exact;
pub mod fabering;
pub mod hodge;
pub mod memo;
pub mod mocktheta;
pub mod npoint;
pub mod wpvolumes;
pub mod poly;
pub mod reference;
pub mod rspin;

pub use error::{Error, Result};
pub use exact::{MultiIndex, Partition, Rational};

//! Exact and high-precision verification of hypergeometric identities.

pub mod exactnum;
pub mod realnum;
pub mod hyper;
pub mod identities;
pub mod verify;

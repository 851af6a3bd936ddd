//! Euler characteristics of finite categories, computed exactly.

pub mod corpus;
pub mod euler;
pub mod exactalg;
pub mod fincat;
pub mod format;
pub mod nerve;
pub mod simplex;
pub mod subdivision;
pub mod verify;

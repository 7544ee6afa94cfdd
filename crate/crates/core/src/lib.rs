//! Weber-function toolkit: exact q-series, Weber modular polynomials,
//! supersingular isogeny graphs over F_{p^2}, Hecke sieves, explicit
//! 2-isogeny chains and Weber/Fermat curve models.

pub mod error;
pub mod exactnum;
pub mod linalg;
pub mod modarith;
pub mod qseries;
pub mod modpoly;
pub mod gf;
pub mod curves;
pub mod chains;
pub mod models;
pub mod weberaction;
pub mod ssgraph;
pub mod hecke;
pub mod util;

pub use error::{Error, Result};

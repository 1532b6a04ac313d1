//! Numerical toolkit for the n-Cauchy-Fueter operator on `H^n`, monogenic
//! hulls, the twistor correspondence and the Penrose transform.

pub mod cf;
pub mod cp1;
pub mod domain;
pub mod error;
pub mod fd;
pub mod field;
pub mod hull;
pub mod penrose;
pub mod quadrature;
pub mod quat;
pub mod sampling;
pub mod sphere;
pub mod twistor;
pub mod verify;

pub use error::{Error, Result};
pub use quat::{BiquaternionPoint, CMatrix, Quaternion, QuatVec, C64};

//! Exact arithmetic for the class-sum algebra of finite general linear groups.
//!
//! The crate is layered bottom-up:
//!
//! - [`field`]: `F_q` for `q = p^e` with table-driven arithmetic
//! - [`poly`]: polynomials over `F_q`, irreducibility, companion blocks
//! - [`matrix`]: dense matrices, rank, characteristic polynomial, conjugators
//! - [`gltype`]: conjugacy types, modified types, centralizer orders
//! - [`classcalc`]: class enumeration and structure constants of class sums
//! - [`stablecenter`]: closed-form predictions and polynomial fitting
//! - [`store`]: a line-oriented cache of computed expansions
//! - [`verify`]: self-check suites comparing independent computations

pub mod classcalc;
pub mod error;
pub mod field;
pub mod gltype;
pub mod matrix;
pub mod poly;
pub mod stablecenter;
pub mod store;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use gltype::{GlType, Partition, Role};
pub use matrix::Matrix;
pub use poly::Poly;

//! Exact computations with dormant opers, their Witt-vector analogues and
//! the local theory of differential operators in positive characteristic.
//!
//! Modules build on each other in order: [`rings`] supplies coefficient
//! arithmetic, [`rootdata`] the Lie-theoretic combinatorics, [`elliptic`]
//! the base curves, [`opers`] the characteristic-`p` classification,
//! [`dop_local`] the level-`N` local models and [`witt_opers`] the lifts to
//! `W_N(F_p)`.

pub mod dop_local;
pub mod elliptic;
pub mod opers;
pub mod rings;
pub mod rootdata;
pub mod witt_opers;

//! Divisibility sequences laboratory.
//!
//! Exact generation, budgeted factorization and finite checks for three
//! families of divisibility sequences:
//!
//! * `a^n - b^n` over the integers ([`cycloseq`]),
//! * `a(t)^n - 1` over `F_q[t]` ([`ffpoly`]),
//! * elliptic denominator and division-polynomial sequences over `Q`
//!   ([`ecdiv`]).
//!
//! Everything rests on [`arith`]: arbitrary-precision integers and a
//! factorization engine with explicit budget semantics.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod cycloseq;
pub mod ecdiv;
pub mod ffpoly;

pub use num_bigint::{BigInt, BigUint};

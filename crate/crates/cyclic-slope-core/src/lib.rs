#![no_std]
#![doc = include_str!("../README.md")]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod cluster;
pub mod examples;
pub mod fibration;
pub mod fixed_points;
pub mod invariants;
pub mod rational;
pub mod resolution;

pub use fibration::{
    derive_r, lambda_lower, lambda_upper, slope_constants, FibrationParams, LowerBound,
    ParamError, SlopeConstants, UpperCase,
};
pub use rational::Rational;

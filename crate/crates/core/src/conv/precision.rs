use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Floating-point type an engine computes in.
pub trait Real:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;

    /// Round-to-nearest conversion from `f64`.
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
}

impl Real for f32 {
    const ZERO: Self = 0.0;

    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn abs(self) -> Self {
        f32::abs(self)
    }
}

impl Real for f64 {
    const ZERO: Self = 0.0;

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Which precision each stage runs in.
///
/// * `F32All`: transform matrices rounded to `f32`, all arithmetic in `f32`.
/// * `MixedTransformF64HadamardF32`: transforms and accumulation in `f64`,
///   only the element-wise product in `f32`; data stored as `f32`.
/// * `F64All`: everything in `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecisionMode {
    F32All,
    MixedTransformF64HadamardF32,
    F64All,
}

impl PrecisionMode {
    pub const ALL: [PrecisionMode; 3] = [
        PrecisionMode::F32All,
        PrecisionMode::MixedTransformF64HadamardF32,
        PrecisionMode::F64All,
    ];

    /// Whether inputs and outputs are stored as `f32`.
    pub fn stores_f32(self) -> bool {
        !matches!(self, PrecisionMode::F64All)
    }

    /// Rounds a value to the storage precision.
    pub fn store(self, v: f64) -> f64 {
        if self.stores_f32() {
            v as f32 as f64
        } else {
            v
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PrecisionMode::F32All => "f32",
            PrecisionMode::MixedTransformF64HadamardF32 => "mixed",
            PrecisionMode::F64All => "f64",
        }
    }
}

impl FromStr for PrecisionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "f32" | "f32all" | "f32_all" => Ok(PrecisionMode::F32All),
            "mixed" | "mixed_transform_f64_hadamard_f32" => Ok(PrecisionMode::MixedTransformF64HadamardF32),
            "f64" | "f64all" | "f64_all" => Ok(PrecisionMode::F64All),
            _ => Err(Error::Parse(format!("unknown precision mode `{s}`"))),
        }
    }
}

impl std::fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

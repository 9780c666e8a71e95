use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexKind {
    Abs,
    Square,
    Fourth,
    Exp,
    Relu,
    Softplus,
}

impl ConvexKind {
    pub const ALL: [ConvexKind; 6] = [
        ConvexKind::Abs,
        ConvexKind::Square,
        ConvexKind::Fourth,
        ConvexKind::Exp,
        ConvexKind::Relu,
        ConvexKind::Softplus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConvexKind::Abs => "abs",
            ConvexKind::Square => "square",
            ConvexKind::Fourth => "fourth",
            ConvexKind::Exp => "exp",
            ConvexKind::Relu => "relu",
            ConvexKind::Softplus => "softplus",
        }
    }

    fn base(self, x: f64) -> f64 {
        match self {
            ConvexKind::Abs => x.abs(),
            ConvexKind::Square => x * x,
            ConvexKind::Fourth => {
                let s = x * x;
                s * s
            }
            ConvexKind::Exp => x.exp(),
            ConvexKind::Relu => x.max(0.0),
            // log(1 + e^x) without overflow.
            ConvexKind::Softplus => x.max(0.0) + (-x.abs()).exp().ln_1p(),
        }
    }
}

/// `f(x) = scale * g(x - shift)` for a catalog function `g`; convex on the
/// whole real line for any `shift` and `scale >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexFunction {
    pub kind: ConvexKind,
    pub shift: f64,
    pub scale: f64,
}

impl ConvexFunction {
    pub fn new(kind: ConvexKind) -> Self {
        Self {
            kind,
            shift: 0.0,
            scale: 1.0,
        }
    }

    pub fn with_params(kind: ConvexKind, shift: f64, scale: f64) -> Result<Self> {
        if !(shift.is_finite() && scale.is_finite() && scale >= 0.0) {
            return Err(Error::Parameter(format!(
                "need finite shift and scale >= 0, got {shift}, {scale}"
            )));
        }
        Ok(Self { kind, shift, scale })
    }

    pub fn catalog() -> Vec<ConvexFunction> {
        ConvexKind::ALL.into_iter().map(Self::new).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.scale * self.kind.base(x - self.shift)
    }
}

impl From<ConvexKind> for ConvexFunction {
    fn from(kind: ConvexKind) -> Self {
        Self::new(kind)
    }
}

impl fmt::Display for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0.0 && self.scale == 1.0 {
            f.write_str(self.kind.name())
        } else {
            write!(f, "{}*{}(x-{})", self.scale, self.kind.name(), self.shift)
        }
    }
}

impl FromStr for ConvexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConvexKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown convex function `{s}`")))
    }
}

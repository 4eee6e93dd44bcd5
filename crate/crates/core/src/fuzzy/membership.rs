use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-linear membership function. Evaluation outside the vertex span
/// returns the degree of the nearest end vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipFunction {
    vertices: Vec<(f64, f64)>,
}

impl MembershipFunction {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Config("membership function needs at least 2 vertices".into()));
        }
        for pair in vertices.windows(2) {
            if !(pair[0].0 < pair[1].0) {
                return Err(Error::Config(format!(
                    "membership x values must be strictly increasing, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if vertices
            .iter()
            .any(|&(x, d)| !x.is_finite() || !(0.0..=1.0).contains(&d))
        {
            return Err(Error::Config("membership degrees must lie in [0, 1]".into()));
        }
        let peak = vertices.iter().map(|v| v.1).fold(0.0, f64::max);
        if (peak - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "membership function must peak at degree 1, peaks at {peak}"
            )));
        }
        Ok(Self { vertices })
    }

    /// Rescales degrees so the maximum is exactly one.
    pub fn normalized(vertices: Vec<(f64, f64)>) -> Result<Self> {
        let peak = vertices.iter().map(|v| v.1).fold(0.0, f64::max);
        if !(peak > 0.0) {
            return Err(Error::Config("membership function is identically zero".into()));
        }
        Self::new(vertices.into_iter().map(|(x, d)| (x, d / peak)).collect())
    }

    /// Triangle with feet `a`, `c` and apex `b`. A foot that coincides with
    /// the apex becomes a shoulder (degree 1 beyond it).
    pub fn triangle(a: f64, b: f64, c: f64) -> Result<Self> {
        let vertices = match (a == b, b == c) {
            (true, true) => return Err(Error::Config("degenerate triangle".into())),
            (true, false) => vec![(b, 1.0), (c, 0.0)],
            (false, true) => vec![(a, 0.0), (b, 1.0)],
            (false, false) => vec![(a, 0.0), (b, 1.0), (c, 0.0)],
        };
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn eval(&self, x: f64) -> f64 {
        let v = &self.vertices;
        if x <= v[0].0 {
            return v[0].1;
        }
        let last = v[v.len() - 1];
        if x >= last.0 {
            return last.1;
        }
        // first vertex with abscissa > x; guaranteed in 1..len
        let i = v.partition_point(|&(vx, _)| vx <= x);
        let (x0, d0) = v[i - 1];
        let (x1, d1) = v[i];
        d0 + (d1 - d0) * (x - x0) / (x1 - x0)
    }

    /// Abscissa of the first vertex with the maximum degree.
    pub fn peak(&self) -> f64 {
        self.vertices
            .iter()
            .fold(
                (f64::NAN, f64::NEG_INFINITY),
                |best, &(x, d)| if d > best.1 { (x, d) } else { best },
            )
            .0
    }

    pub fn max_degree(&self) -> f64 {
        self.vertices.iter().map(|v| v.1).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Saliency,
    Edge,
    Intensity,
}

impl Variable {
    pub const ALL: [Variable; 3] = [Variable::Saliency, Variable::Edge, Variable::Intensity];

    pub fn as_str(self) -> &'static str {
        match self {
            Variable::Saliency => "saliency",
            Variable::Edge => "edge",
            Variable::Intensity => "intensity",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "saliency" => Ok(Variable::Saliency),
            "edge" | "edge_concentration" | "edge-concentration" => Ok(Variable::Edge),
            "intensity" => Ok(Variable::Intensity),
            other => Err(Error::Config(format!("unknown fuzzy variable {other:?}"))),
        }
    }
}

/// Linguistic input level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Low = 0,
    Medium = 1,
    High = 2,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Medium, Level::High];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Linguistic output level of the importance map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutputLevel {
    VL = 0,
    L = 1,
    M = 2,
    H = 3,
    VH = 4,
}

impl OutputLevel {
    pub const ALL: [OutputLevel; 5] = [
        OutputLevel::VL,
        OutputLevel::L,
        OutputLevel::M,
        OutputLevel::H,
        OutputLevel::VH,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

/// Three membership functions (low, medium, high) of one input feature.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable {
    pub variable: Variable,
    pub levels: [MembershipFunction; 3],
}

impl FuzzyVariable {
    pub fn degrees(&self, x: f64) -> [f64; 3] {
        [self.levels[0].eval(x), self.levels[1].eval(x), self.levels[2].eval(x)]
    }

    pub fn level(&self, level: Level) -> &MembershipFunction {
        &self.levels[level.index()]
    }
}

/// Triangular low/medium/high partition of `[0, 1]`.
pub fn default_memberships(variable: &str) -> Result<[MembershipFunction; 3]> {
    variable.parse::<Variable>()?;
    Ok(triangular_partition())
}

pub(crate) fn triangular_partition() -> [MembershipFunction; 3] {
    [
        MembershipFunction::triangle(0.0, 0.0, 0.5).expect("static triangle"),
        MembershipFunction::triangle(0.0, 0.5, 1.0).expect("static triangle"),
        MembershipFunction::triangle(0.5, 1.0, 1.0).expect("static triangle"),
    ]
}

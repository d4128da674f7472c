use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{bad_shape, Error, Result};
use crate::point::{Point, PointSet};

/// Instantiated points closer than this make a template degenerate.
pub const DEGENERATE_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// `-p`
    Neg,
    /// `p`
    Pos,
    /// `-1/p`
    NegRecip,
    /// `1/p`
    Recip,
}

/// One position of a [`FamilyTemplate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slot {
    Fixed(Point),
    Param(Param, Form),
}

impl Slot {
    pub const fn fixed(v: f64) -> Self {
        Slot::Fixed(Point::Finite(v))
    }

    fn value(self, c: f64, d: Option<f64>) -> Result<Point> {
        let (param, form) = match self {
            Slot::Fixed(p) => return Ok(p),
            Slot::Param(param, form) => (param, form),
        };
        let p = match param {
            Param::C => c,
            Param::D => d.ok_or_else(|| bad_shape("template has d slots but no d was given"))?,
        };
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::NonPositiveC(p));
        }
        Ok(Point::Finite(match form {
            Form::Neg => -p,
            Form::Pos => p,
            Form::NegRecip => -1.0 / p,
            Form::Recip => 1.0 / p,
        }))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (param, form) = match self {
            Slot::Fixed(Point::Finite(v)) => return write!(f, "{v}"),
            Slot::Fixed(Point::Infinity) => return f.write_str("inf"),
            Slot::Param(param, form) => (param, form),
        };
        let p = match param {
            Param::C => 'c',
            Param::D => 'd',
        };
        match form {
            Form::Neg => write!(f, "-{p}"),
            Form::Pos => write!(f, "{p}"),
            Form::NegRecip => write!(f, "-1/{p}"),
            Form::Recip => write!(f, "1/{p}"),
        }
    }
}

impl FromStr for Slot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let param = match t.to_ascii_lowercase().as_str() {
            "c" => Some((Param::C, Form::Pos)),
            "-c" => Some((Param::C, Form::Neg)),
            "1/c" => Some((Param::C, Form::Recip)),
            "-1/c" => Some((Param::C, Form::NegRecip)),
            "d" => Some((Param::D, Form::Pos)),
            "-d" => Some((Param::D, Form::Neg)),
            "1/d" => Some((Param::D, Form::Recip)),
            "-1/d" => Some((Param::D, Form::NegRecip)),
            _ => None,
        };
        if let Some((p, f)) = param {
            return Ok(Slot::Param(p, f));
        }
        Ok(Slot::Fixed(t.parse()?))
    }
}

/// The symmetric one-parameter family, in the order used for subsets.
pub const C_FAMILY: [Slot; 4] = [
    Slot::Param(Param::C, Form::NegRecip),
    Slot::Param(Param::C, Form::Neg),
    Slot::Param(Param::C, Form::Pos),
    Slot::Param(Param::C, Form::Recip),
];

/// The same family in the second parameter.
pub const D_FAMILY: [Slot; 4] = [
    Slot::Param(Param::D, Form::NegRecip),
    Slot::Param(Param::D, Form::Neg),
    Slot::Param(Param::D, Form::Pos),
    Slot::Param(Param::D, Form::Recip),
];

/// A point list with slots expressed in the parameters `c` and `d`, e.g.
/// `0,-1/c,-c,c,1/c,inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTemplate {
    slots: Vec<Slot>,
}

impl FamilyTemplate {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        if slots.is_empty() {
            return Err(bad_shape("empty template"));
        }
        Ok(Self { slots })
    }

    /// `{0, -1/c, -c, c, 1/c, inf}`
    pub fn symmetric() -> Self {
        let mut slots = vec![Slot::fixed(0.0)];
        slots.extend(C_FAMILY);
        slots.push(Slot::Fixed(Point::Infinity));
        Self { slots }
    }

    /// `{0, -1/c, -c, c, 1/c, -1/d, -d, d, 1/d, inf}`
    pub fn symmetric_2() -> Self {
        let mut slots = vec![Slot::fixed(0.0)];
        slots.extend(C_FAMILY);
        slots.extend(D_FAMILY);
        slots.push(Slot::Fixed(Point::Infinity));
        Self { slots }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Number of points `n`.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn uses(&self, param: Param) -> bool {
        self.slots.iter().any(|s| matches!(s, Slot::Param(p, _) if *p == param))
    }

    /// Substitutes `c` (and `d`) and builds the canonical point set for
    /// `F(n - k + 1, k)`. Coincident points give `DegenerateFamily`.
    pub fn instantiate(&self, k: usize, c: f64, d: Option<f64>) -> Result<PointSet> {
        if k == 0 || self.len() < k {
            return Err(bad_shape(format!("{} points cannot serve a kernel of {k}", self.len())));
        }
        let points = self.slots.iter().map(|s| s.value(c, d)).collect::<Result<Vec<_>>>()?;
        let mut finite: Vec<f64> = points.iter().filter_map(Point::finite).collect();
        finite.sort_by(f64::total_cmp);
        if let Some(w) = finite.windows(2).find(|w| w[1] - w[0] < DEGENERATE_GAP) {
            return Err(Error::DegenerateFamily(format!(
                "{self} at c = {c}{} repeats {}",
                d.map(|d| format!(", d = {d}")).unwrap_or_default(),
                w[0]
            )));
        }
        PointSet::new(points, self.len() - k + 1, k)
    }
}

impl fmt::Display for FamilyTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let slots = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Slot>>>()?;
        Self::new(slots)
    }
}

impl Serialize for FamilyTemplate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

//! Interpolation points and validated point sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{bad_shape, Error, Result};

/// Finite points closer than this trigger a warning (but are accepted).
pub const NEAR_DUPLICATE_GAP: f64 = 1e-9;

/// A real interpolation point, or the formal point at infinity used by the
/// modified Toom-Cook construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(f64),
    Infinity,
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Point::Finite(v) => Some(v),
            Point::Infinity => None,
        }
    }
}

impl From<f64> for Point {
    fn from(v: f64) -> Self {
        Point::Finite(v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{:?}` on f64 prints the shortest round-tripping form.
            Point::Finite(v) => write!(f, "{v:?}"),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Point::Infinity),
            _ => {
                let bad = || Error::Parse(format!("invalid point `{s}`"));
                // simple fractions such as `-1/2` are accepted
                let v: f64 = match s.split_once('/') {
                    Some((num, den)) => {
                        num.trim().parse::<f64>().map_err(|_| bad())? / den.trim().parse::<f64>().map_err(|_| bad())?
                    }
                    None => s.parse().map_err(|_| bad())?,
                };
                if !v.is_finite() {
                    return Err(Error::Parse(format!("non-finite point `{s}`")));
                }
                Ok(Point::Finite(v))
            }
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Point::Finite(v) => s.serialize_f64(v),
            Point::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Point::Finite(v)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Parse a comma separated point list such as `-1,0,1,inf`.
pub fn parse_point_list(s: &str) -> Result<Vec<Point>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// The `n = m + k - 1` points of an `F(m, k)` algorithm.
///
/// Finite points are pairwise distinct and at most one infinity is present,
/// stored last.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    m: usize,
    k: usize,
    points: Vec<Point>,
}

impl PointSet {
    /// Builds a point set in canonical order: finite points ascending, then
    /// infinity.
    pub fn new(points: Vec<Point>, m: usize, k: usize) -> Result<Self> {
        let infinities = points.iter().filter(|p| p.is_infinity()).count();
        if infinities > 1 {
            return Err(Error::DuplicatePoints(f64::INFINITY));
        }
        let mut finite: Vec<f64> = points.iter().filter_map(Point::finite).collect();
        finite.sort_by(f64::total_cmp);
        let mut ordered: Vec<Point> = finite.into_iter().map(Point::Finite).collect();
        if infinities == 1 {
            ordered.push(Point::Infinity);
        }
        Self::from_ordered(ordered, m, k)
    }

    /// Builds a point set keeping the caller's order. Infinity, if present,
    /// must already be last.
    pub fn from_ordered(points: Vec<Point>, m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(bad_shape(format!("F({m},{k}) needs m, k >= 1")));
        }
        if points.len() != m + k - 1 {
            return Err(bad_shape(format!(
                "F({m},{k}) needs {} points, got {}",
                m + k - 1,
                points.len()
            )));
        }
        if let Some(pos) = points.iter().position(Point::is_infinity) {
            if pos != points.len() - 1 {
                return Err(Error::InfinityNotLast);
            }
        }
        let finite: Vec<f64> = points.iter().filter_map(Point::finite).collect();
        if let Some(v) = finite.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("non-finite point {v}")));
        }
        for (i, a) in finite.iter().enumerate() {
            for b in &finite[i + 1..] {
                if a == b {
                    return Err(Error::DuplicatePoints(*a));
                }
                if (a - b).abs() < NEAR_DUPLICATE_GAP {
                    log::warn!("near-duplicate interpolation points {a} and {b}");
                }
            }
        }
        Ok(Self { m, k, points })
    }

    /// Parses `-1,0,1,inf` style lists.
    pub fn parse(list: &str, m: usize, k: usize) -> Result<Self> {
        Self::new(parse_point_list(list)?, m, k)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Total point count, `m + k - 1`.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn has_infinity(&self) -> bool {
        self.points.last().is_some_and(Point::is_infinity)
    }

    pub fn finite_values(&self) -> Vec<f64> {
        self.points.iter().filter_map(Point::finite).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            m: usize,
            k: usize,
            points: Vec<Point>,
        }
        let doc: Doc = serde_json::from_str(s)?;
        Self::from_ordered(doc.points, doc.m, doc.k)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.points {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_sorts_and_moves_infinity_last() {
        let set = PointSet::new(vec![Point::Infinity, 1.0.into(), (-1.0).into(), 0.0.into()], 2, 3).unwrap();
        assert_eq!(set.to_string(), "-1.0 0.0 1.0 inf");
        assert!(set.has_infinity());
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(matches!(
            PointSet::parse("1,1,0,inf", 2, 3),
            Err(Error::DuplicatePoints(_))
        ));
        assert!(matches!(PointSet::parse("1,0,inf", 2, 3), Err(Error::BadShape(_))));
        assert!(matches!(
            PointSet::from_ordered(vec![0.0.into(), Point::Infinity, 1.0.into(), (-1.0).into()], 2, 3),
            Err(Error::InfinityNotLast)
        ));
        assert!(PointSet::parse("0,1,inf,inf", 2, 3).is_err());
        assert!(PointSet::parse("0,1,x,inf", 2, 3).is_err());
    }

    #[test]
    fn fractions_parse() {
        let set = PointSet::parse("0, -1/2, 2, inf", 2, 3).unwrap();
        assert_eq!(set.to_string(), "-0.5 0.0 2.0 inf");
        assert!(PointSet::parse("0,1/0,2,inf", 2, 3).is_err());
        assert!(PointSet::parse("0,1/x,2,inf", 2, 3).is_err());
    }

    #[test]
    fn near_duplicates_are_allowed() {
        assert!(PointSet::parse("0,1,1.0000000000001,inf", 2, 3).is_ok());
    }

    #[test]
    fn json_round_trip_keeps_full_precision() {
        let c = 1.829_f64;
        let set = PointSet::new(
            vec![
                0.0.into(),
                c.into(),
                (-c).into(),
                (1.0 / c).into(),
                (-1.0 / c).into(),
                Point::Infinity,
            ],
            4,
            3,
        )
        .unwrap();
        let json = set.to_json().unwrap();
        assert!(json.contains("\"inf\""));
        assert_eq!(PointSet::from_json(&json).unwrap(), set);
    }
}

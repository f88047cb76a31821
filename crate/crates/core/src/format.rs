//! The on-disk drawing format: JSON with exact coordinate strings.
//!
//! Coordinates are written as "p/q" fractions or plain integers — never
//! floats, so exactness survives the file boundary. Arcs are optional;
//! a missing arc means the straight segment between its endpoints.

use crate::drawing::{Drawing, StructuralError, VertexId};
use crate::geometry::{GeometryError, Point, Polyline, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DrawingFileV1 {
    pub format_version: u32,
    pub vertices: Vec<VertexRec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arcs: Vec<ArcRec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexRec {
    pub id: u32,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcRec {
    pub u: u32,
    pub v: u32,
    pub points: Vec<[String; 2]>,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("unsupported format_version {0}, expected 1")]
    BadVersion(u32),
    #[error("malformed coordinate {0:?}")]
    BadNumber(String),
    #[error("arc ({0}, {1}) listed twice")]
    DuplicateArc(u32, u32),
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Accepts "p/q", integers, and terminating decimals ("-2.75").
pub fn parse_rational(s: &str) -> Result<Rational, FormatError> {
    let bad = || FormatError::BadNumber(s.to_string());
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int_part = BigInt::from_str(if int.is_empty() || int == "-" {
            "0"
        } else {
            int
        })
        .map_err(|_| bad())?;
        let frac_num = BigInt::from_str(frac).map_err(|_| bad())?;
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let negative = s.starts_with('-');
        let abs = Rational::from_integer(int_part.abs()) + Rational::new(frac_num, scale);
        return Ok(if negative { -abs } else { abs });
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Integers print bare; everything else prints as "p/q" in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_drawing(file: &DrawingFileV1) -> Result<Drawing, FormatError> {
    if file.format_version != 1 {
        return Err(FormatError::BadVersion(file.format_version));
    }
    let mut points: BTreeMap<u32, Point> = BTreeMap::new();
    let mut vertices = Vec::with_capacity(file.vertices.len());
    for rec in &file.vertices {
        let p = Point::new(parse_rational(&rec.x)?, parse_rational(&rec.y)?);
        // Duplicate ids surface later as a structural error.
        points.entry(rec.id).or_insert_with(|| p.clone());
        vertices.push((VertexId(rec.id), p));
    }
    let mut arcs: BTreeMap<(VertexId, VertexId), Polyline> = BTreeMap::new();
    for rec in &file.arcs {
        let key = if rec.u <= rec.v {
            (VertexId(rec.u), VertexId(rec.v))
        } else {
            (VertexId(rec.v), VertexId(rec.u))
        };
        let mut pts = Vec::with_capacity(rec.points.len());
        for [x, y] in &rec.points {
            pts.push(Point::new(parse_rational(x)?, parse_rational(y)?));
        }
        if arcs.insert(key, Polyline::new(pts)?).is_some() {
            return Err(FormatError::DuplicateArc(rec.u, rec.v));
        }
    }
    // Fill in the straight default for every unlisted pair.
    let ids: Vec<u32> = file.vertices.iter().map(|v| v.id).collect();
    for (a, &i) in ids.iter().enumerate() {
        for &j in &ids[(a + 1)..] {
            if i == j {
                // Duplicate ids; leave it to the structural check below.
                continue;
            }
            let key = if i <= j {
                (VertexId(i), VertexId(j))
            } else {
                (VertexId(j), VertexId(i))
            };
            if !arcs.contains_key(&key) {
                let (Some(p), Some(q)) = (points.get(&key.0 .0), points.get(&key.1 .0)) else {
                    continue;
                };
                arcs.insert(key, Polyline::segment(p.clone(), q.clone())?);
            }
        }
    }
    Ok(Drawing::new(vertices, arcs)?)
}

pub fn from_drawing(d: &Drawing) -> DrawingFileV1 {
    let vertices = d
        .vertices()
        .iter()
        .map(|(id, p)| VertexRec {
            id: id.0,
            x: format_rational(&p.x),
            y: format_rational(&p.y),
        })
        .collect();
    // Straight arcs are the default; only bent ones are written out.
    let arcs = d
        .arc_pairs()
        .filter(|(_, poly)| poly.points().len() > 2)
        .map(|((u, v), poly)| ArcRec {
            u: u.0,
            v: v.0,
            points: poly
                .points()
                .iter()
                .map(|p| [format_rational(&p.x), format_rational(&p.y)])
                .collect(),
        })
        .collect();
    DrawingFileV1 {
        format_version: 1,
        vertices,
        arcs,
    }
}

pub fn to_json(d: &Drawing) -> String {
    let mut s = serde_json::to_string_pretty(&from_drawing(d)).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> Result<Drawing, FormatError> {
    let file: DrawingFileV1 = serde_json::from_str(s)?;
    to_drawing(&file)
}

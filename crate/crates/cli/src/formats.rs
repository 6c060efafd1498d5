//! JSON and CSV interchange formats.
//!
//! Floats are written with the shortest round-trip decimal form, so readers
//! should parse values rather than compare text.

use std::io::Write;

use fockorder_core::{ComplexGrid, OrderParameter, OrderedPoly};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("ordering parameter must be finite, got {0}")]
    BadOrder(f64),
    #[error("term ({p}, {q}) has a non-finite coefficient")]
    BadCoefficient { p: u32, q: u32 },
}

/// `{"order": s, "terms": [{"p", "q", "re", "im"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub order: f64,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub p: u32,
    pub q: u32,
    pub re: f64,
    pub im: f64,
}

impl From<&OrderedPoly<f64>> for PolyDoc {
    fn from(poly: &OrderedPoly<f64>) -> Self {
        Self {
            order: poly.order().value(),
            terms: poly.terms().map(|(p, q, c)| TermDoc { p, q, re: c.re, im: c.im }).collect(),
        }
    }
}

impl PolyDoc {
    pub fn to_poly(&self) -> Result<OrderedPoly<f64>, FormatError> {
        if !self.order.is_finite() {
            return Err(FormatError::BadOrder(self.order));
        }
        if let Some(t) = self.terms.iter().find(|t| !(t.re.is_finite() && t.im.is_finite())) {
            return Err(FormatError::BadCoefficient { p: t.p, q: t.q });
        }
        Ok(OrderedPoly::from_terms(
            OrderParameter::new(self.order),
            self.terms.iter().map(|t| (t.p, t.q, Complex64::new(t.re, t.im))),
        ))
    }
}

pub fn parse_poly(text: &str) -> Result<OrderedPoly<f64>, FormatError> {
    serde_json::from_str::<PolyDoc>(text)?.to_poly()
}

pub fn poly_to_json(poly: &OrderedPoly<f64>) -> String {
    let mut out = serde_json::to_string_pretty(&PolyDoc::from(poly)).expect("plain data serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridValue {
    pub x: f64,
    pub y: f64,
    pub re: f64,
    pub im: f64,
}

/// `{"L": half_width, "N": points, "values": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDoc {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub points: usize,
    pub values: Vec<GridValue>,
}

fn grid_values(grid: &ComplexGrid) -> impl Iterator<Item = GridValue> + '_ {
    grid.values.iter().enumerate().map(|(k, v)| {
        let (x, y) = grid.coords(k);
        GridValue { x, y, re: v.re, im: v.im }
    })
}

impl From<&ComplexGrid> for GridDoc {
    fn from(grid: &ComplexGrid) -> Self {
        Self { half_width: grid.half_width, points: grid.points, values: grid_values(grid).collect() }
    }
}

/// Header `x,y,re,im`, then one row per node in grid order.
pub fn write_grid_csv<W: Write>(grid: &ComplexGrid, out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    for v in grid_values(grid) {
        w.serialize(v)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_grid_json<W: Write>(grid: &ComplexGrid, mut out: W) -> Result<(), FormatError> {
    serde_json::to_writer(&mut out, &GridDoc::from(grid))?;
    out.write_all(b"\n")?;
    Ok(())
}

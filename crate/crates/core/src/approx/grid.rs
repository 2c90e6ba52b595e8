use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::expr::{Compiled, Expr};
use crate::format::{fmt17, Float17};

use super::ApproxError;

/// Uniform rectangular grid with inclusive end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub const DEFAULT_N: usize = 200;

    pub fn new(
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self, ApproxError> {
        if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
            return Err(ApproxError::InvalidGrid("bounds must be finite".into()));
        }
        if x0 >= x1 || y0 >= y1 {
            return Err(ApproxError::InvalidGrid("need x0 < x1 and y0 < y1".into()));
        }
        if nx < 2 || ny < 2 {
            return Err(ApproxError::InvalidGrid(
                "need at least 2 samples per axis".into(),
            ));
        }
        Ok(GridSpec {
            x0,
            x1,
            y0,
            y1,
            nx,
            ny,
        })
    }

    /// `[lo, hi]^2` with the default sample count.
    pub fn square(lo: f64, hi: f64) -> Result<Self, ApproxError> {
        GridSpec::new(lo, hi, lo, hi, Self::DEFAULT_N, Self::DEFAULT_N)
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            return self.x1;
        }
        self.x0 + (self.x1 - self.x0) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            return self.y1;
        }
        self.y0 + (self.y1 - self.y0) * j as f64 / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FromStr for GridSpec {
    type Err = ApproxError;

    /// `x0,x1,y0,y1` or `x0,x1,y0,y1,nx,ny`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = |m: &str| ApproxError::InvalidGrid(format!("{m} in `{s}`"));
        if parts.len() != 4 && parts.len() != 6 {
            return Err(bad("expected x0,x1,y0,y1[,nx,ny]"));
        }
        let mut b = [0.0; 4];
        for (slot, p) in b.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| bad("bad bound"))?;
        }
        let (nx, ny) = if parts.len() == 6 {
            (
                parts[4].parse().map_err(|_| bad("bad count"))?,
                parts[5].parse().map_err(|_| bad("bad count"))?,
            )
        } else {
            (Self::DEFAULT_N, Self::DEFAULT_N)
        };
        GridSpec::new(b[0], b[1], b[2], b[3], nx, ny)
    }
}

#[derive(Serialize)]
struct GridJson {
    x0: Float17,
    x1: Float17,
    y0: Float17,
    y1: Float17,
    nx: usize,
    ny: usize,
}

impl Serialize for GridSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GridJson {
            x0: Float17(self.x0),
            x1: Float17(self.x1),
            y0: Float17(self.y0),
            y1: Float17(self.y1),
            nx: self.nx,
            ny: self.ny,
        }
        .serialize(s)
    }
}

/// Samples of an expression; `values[i * ny + j]` is the value at
/// `(x_i, y_j)`, NaN where evaluation fails or is not finite.
#[derive(Debug, Clone)]
pub struct GridField {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub source: Expr,
}

/// Norms of the absolute values over non-NaN samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSummary {
    pub max_abs: f64,
    pub min_abs: f64,
    pub mean_abs: f64,
    pub argmax: (f64, f64),
    pub nan_count: usize,
    pub grid: GridSpec,
}

#[derive(Serialize)]
struct SummaryJson {
    max_abs: Float17,
    min_abs: Float17,
    mean_abs: Float17,
    argmax: [Float17; 2],
    nan_count: usize,
    grid: GridSpec,
}

impl Serialize for FieldSummary {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SummaryJson {
            max_abs: Float17(self.max_abs),
            min_abs: Float17(self.min_abs),
            mean_abs: Float17(self.mean_abs),
            argmax: [Float17(self.argmax.0), Float17(self.argmax.1)],
            nan_count: self.nan_count,
            grid: self.grid,
        }
        .serialize(s)
    }
}

fn point_value(e: &Compiled, x: f64, y: f64) -> f64 {
    match e.eval(x, y) {
        Ok(v) if v.is_finite() => v,
        _ => f64::NAN,
    }
}

/// Evaluates `e` at every grid point, rows in parallel.
pub fn sample(e: &Expr, spec: &GridSpec) -> GridField {
    // unbound parameters fail at every point
    let compiled = Compiled::new(e, &Default::default()).ok();
    let compiled = compiled.as_ref();
    let values: Vec<f64> = (0..spec.nx)
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = spec.x(i);
            (0..spec.ny).map(move |j| compiled.map_or(f64::NAN, |c| point_value(c, x, spec.y(j))))
        })
        .collect();
    GridField {
        spec: *spec,
        values,
        source: e.clone(),
    }
}

impl GridField {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.ny + j]
    }

    /// Sequential reduction in row-major order.
    pub fn summary(&self) -> FieldSummary {
        let mut max_abs = f64::NAN;
        let mut min_abs = f64::NAN;
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut argmax = (f64::NAN, f64::NAN);
        for i in 0..self.spec.nx {
            for j in 0..self.spec.ny {
                let v = self.get(i, j).abs();
                if v.is_nan() {
                    continue;
                }
                if max_abs.is_nan() || v > max_abs {
                    max_abs = v;
                    argmax = (self.spec.x(i), self.spec.y(j));
                }
                if min_abs.is_nan() || v < min_abs {
                    min_abs = v;
                }
                sum += v;
                count += 1;
            }
        }
        FieldSummary {
            max_abs,
            min_abs,
            mean_abs: if count == 0 {
                f64::NAN
            } else {
                sum / count as f64
            },
            argmax,
            nan_count: self.values.len() - count,
            grid: self.spec,
        }
    }

    /// CSV with header `x,y,value`, row-major, 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "y", "value"])?;
        for i in 0..self.spec.nx {
            let x = fmt17(self.spec.x(i));
            for j in 0..self.spec.ny {
                out.write_record([x.as_str(), &fmt17(self.spec.y(j)), &fmt17(self.get(i, j))])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

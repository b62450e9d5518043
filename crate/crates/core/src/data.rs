use crate::error::{Error, Result};

/// Paired sample `(X_i, Y_i)` with row-major inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Dataset {
    pub fn new(dim: usize, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != dim * y.len() {
            return Err(Error::Shape(format!(
                "{} input values for {} responses of dimension {}",
                x.len(),
                y.len(),
                dim
            )));
        }
        Ok(Self { dim, x, y })
    }

    pub fn from_rows(rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.len() != y.len() {
            return Err(Error::Shape(format!("{} rows for {} responses", rows.len(), y.len())));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Dimension { expected: dim, got: bad.len() });
        }
        Ok(Self { dim, x: rows.concat(), y })
    }

    pub(crate) fn with_capacity(dim: usize, n: usize) -> Self {
        Self { dim, x: Vec::with_capacity(dim * n), y: Vec::with_capacity(n) }
    }

    pub(crate) fn push(&mut self, x: &[f64], y: f64) {
        debug_assert_eq!(x.len(), self.dim);
        self.x.extend_from_slice(x);
        self.y.push(y);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.x[i * self.dim..(i + 1) * self.dim]
    }

    pub fn y(&self, i: usize) -> f64 {
        self.y[i]
    }

    pub fn responses(&self) -> &[f64] {
        &self.y
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        (0..self.len()).map(move |i| (self.x(i), self.y[i]))
    }
}

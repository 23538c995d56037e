//! Dense row-major complex matrices.

use crate::ComplexValue;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexValue>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Builds a matrix from row-major data. Returns `None` if the length
    /// does not match `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<ComplexValue>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Self { rows, cols, data })
    }

    /// Builds a matrix from a list of equal-length rows.
    pub fn from_rows(rows: &[Vec<ComplexValue>]) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let data = rows.iter().flatten().copied().collect();
        Some(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[ComplexValue] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [ComplexValue] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[ComplexValue]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn get(&self, i: usize, j: usize) -> ComplexValue {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ComplexValue) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[ComplexValue] {
        &self.data
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[CMatrix]) -> Option<Self> {
        let cols = parts.first()?.cols;
        if parts.iter().any(|p| p.cols != cols) {
            return None;
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let data = parts.iter().flat_map(|p| p.data.iter().copied()).collect();
        Some(Self { rows, cols, data })
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(parts: &[CMatrix]) -> Option<Self> {
        let rows = parts.first()?.rows;
        if parts.iter().any(|p| p.rows != rows) {
            return None;
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for p in parts {
                data.extend_from_slice(p.row(i));
            }
        }
        Some(Self { rows, cols, data })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Replaces every imaginary part by `+0.0`.
    pub fn clear_imag(&mut self) {
        for z in &mut self.data {
            z.im = 0.0;
        }
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

/// Standard Hermitian inner product `Σ x_l · conj(y_l)`.
pub fn inner(x: &[ComplexValue], y: &[ComplexValue]) -> ComplexValue {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
}

/// Squared Euclidean norm.
pub fn norm_sq(x: &[ComplexValue]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

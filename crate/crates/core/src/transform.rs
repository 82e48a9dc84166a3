//! The grouped feature transform: an implicit `M x |I|` matrix bound to a
//! data set, materialized block-by-block (dense for cosine, sparse for haar)
//! and supporting forward and adjoint products.
//!
//! Products combine per-block partial results in layout order, so parallel
//! and sequential evaluation are bit-identical.

use crate::basis::{haar_factor, CosineNormalization};
use crate::error::{Error, Result};
use crate::indexsets::{AnovaSubset, GroupedIndexSet, TermSet};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One materialized block of the feature matrix.
#[derive(Debug, Clone)]
enum Block {
    /// Row-major `m x cols`.
    Dense { cols: usize, data: Vec<f64> },
    /// Fixed number of nonzeros per row (one per wavelet level vector);
    /// column indices are block-local.
    Sparse {
        cols: usize,
        stride: usize,
        col_idx: Vec<u32>,
        values: Vec<f64>,
    },
}

impl Block {
    fn cols(&self) -> usize {
        match self {
            Block::Dense { cols, .. } => *cols,
            Block::Sparse { cols, .. } => *cols,
        }
    }

    fn nnz_in_row(&self, row: usize) -> usize {
        match self {
            Block::Dense { cols, .. } => *cols,
            Block::Sparse { stride, values, .. } => values
                [row * stride..(row + 1) * stride]
                .iter()
                .filter(|v| **v != 0.0)
                .count(),
        }
    }
}

/// A grouped feature matrix bound to one set of input points.
#[derive(Debug, Clone)]
pub struct FeatureTransform {
    set: GroupedIndexSet,
    norm: CosineNormalization,
    m: usize,
    blocks: Vec<Block>,
}

impl FeatureTransform {
    /// Materializes the transform for `points` (row-major `m x d`).
    ///
    /// Cosine points must lie in the basis domain; the error names the
    /// offending row. Haar points wrap periodically.
    pub fn build(
        points: &[f64],
        m: usize,
        set: &GroupedIndexSet,
        norm: CosineNormalization,
    ) -> Result<Self> {
        let d = set.d();
        if points.len() != m * d {
            return Err(Error::invalid(format!(
                "points buffer has {} entries, expected {m} x {d}",
                points.len()
            )));
        }
        let domain = set.basis().domain(d);
        for r in 0..m {
            domain.check_point(&points[r * d..(r + 1) * d], Some(r))?;
        }
        let blocks = map_blocks(set.terms(), |term| build_block(points, m, d, term, norm));
        Ok(Self {
            set: set.clone(),
            norm,
            m,
            blocks,
        })
    }

    pub fn set(&self) -> &GroupedIndexSet {
        &self.set
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.set.cardinality()
    }

    pub fn normalization(&self) -> CosineNormalization {
        self.norm
    }

    /// Forward product `Phi f`: length-`m` vector of per-point sums over
    /// blocks in layout order.
    pub fn apply(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check_coeff_len(coeffs)?;
        let mut out = vec![0.0; self.m];
        #[cfg(feature = "parallel")]
        {
            out.par_iter_mut()
                .enumerate()
                .for_each(|(r, o)| *o = self.row_dot(r, coeffs));
        }
        #[cfg(not(feature = "parallel"))]
        {
            for (r, o) in out.iter_mut().enumerate() {
                *o = self.row_dot(r, coeffs);
            }
        }
        Ok(out)
    }

    /// Reference sequential forward product; bit-identical to [`apply`].
    ///
    /// [`apply`]: FeatureTransform::apply
    pub fn apply_sequential(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check_coeff_len(coeffs)?;
        Ok((0..self.m).map(|r| self.row_dot(r, coeffs)).collect())
    }

    /// Adjoint product `Phi^T v`: length-`|I|` vector, one segment per block.
    pub fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_rhs_len(v)?;
        let mut out = vec![0.0; self.cols()];
        let segments = split_segments(&mut out, &self.block_lens());
        #[cfg(feature = "parallel")]
        {
            segments
                .into_par_iter()
                .zip(self.blocks.par_iter())
                .for_each(|(seg, block)| self.block_transpose(block, v, seg));
        }
        #[cfg(not(feature = "parallel"))]
        {
            for (seg, block) in segments.into_iter().zip(&self.blocks) {
                self.block_transpose(block, v, seg);
            }
        }
        Ok(out)
    }

    /// Reference sequential adjoint product; bit-identical to
    /// [`apply_transpose`].
    ///
    /// [`apply_transpose`]: FeatureTransform::apply_transpose
    pub fn apply_transpose_sequential(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_rhs_len(v)?;
        let mut out = vec![0.0; self.cols()];
        let segments = split_segments(&mut out, &self.block_lens());
        for (seg, block) in segments.into_iter().zip(&self.blocks) {
            self.block_transpose(block, v, seg);
        }
        Ok(out)
    }

    /// Explicit dense copy of one subset's block (`m x block_len`).
    pub fn dense_block(&self, subset: &AnovaSubset) -> Result<Vec<f64>> {
        let pos = self
            .set
            .terms()
            .binary_search_by(|t| t.subset().cmp(subset))
            .map_err(|_| Error::SubsetNotFound(subset.to_string()))?;
        match &self.blocks[pos] {
            Block::Dense { cols, data } => {
                debug_assert_eq!(data.len(), self.m * cols);
                Ok(data.clone())
            }
            Block::Sparse {
                cols,
                stride,
                col_idx,
                values,
            } => {
                let mut out = vec![0.0; self.m * cols];
                for r in 0..self.m {
                    for t in r * stride..(r + 1) * stride {
                        out[r * cols + col_idx[t] as usize] += values[t];
                    }
                }
                Ok(out)
            }
        }
    }

    /// Stored nonzeros in one row of one block (dense blocks count columns).
    pub fn row_nnz(&self, subset: &AnovaSubset, row: usize) -> Result<usize> {
        let pos = self
            .set
            .terms()
            .binary_search_by(|t| t.subset().cmp(subset))
            .map_err(|_| Error::SubsetNotFound(subset.to_string()))?;
        Ok(self.blocks[pos].nnz_in_row(row))
    }

    fn block_lens(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.cols()).collect()
    }

    fn check_coeff_len(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.cols() {
            return Err(Error::invalid(format!(
                "coefficient vector has length {}, index set has cardinality {}",
                coeffs.len(),
                self.cols()
            )));
        }
        Ok(())
    }

    fn check_rhs_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.m {
            return Err(Error::invalid(format!(
                "vector has length {}, transform has {} rows",
                v.len(),
                self.m
            )));
        }
        Ok(())
    }

    fn row_dot(&self, r: usize, coeffs: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (block, &off) in self.blocks.iter().zip(self.set.offsets()) {
            match block {
                Block::Dense { cols, data } => {
                    let row = &data[r * cols..(r + 1) * cols];
                    let seg = &coeffs[off..off + cols];
                    let mut s = 0.0;
                    for (a, b) in row.iter().zip(seg) {
                        s += a * b;
                    }
                    acc += s;
                }
                Block::Sparse {
                    stride,
                    col_idx,
                    values,
                    ..
                } => {
                    let lo = r * stride;
                    let mut s = 0.0;
                    for t in lo..lo + stride {
                        s += values[t] * coeffs[off + col_idx[t] as usize];
                    }
                    acc += s;
                }
            }
        }
        acc
    }

    fn block_transpose(&self, block: &Block, v: &[f64], seg: &mut [f64]) {
        match block {
            Block::Dense { cols, data } => {
                for (r, &vr) in v.iter().enumerate() {
                    if vr == 0.0 {
                        continue;
                    }
                    let row = &data[r * cols..(r + 1) * cols];
                    for (o, a) in seg.iter_mut().zip(row) {
                        *o += a * vr;
                    }
                }
            }
            Block::Sparse {
                stride,
                col_idx,
                values,
                ..
            } => {
                for (r, &vr) in v.iter().enumerate() {
                    if vr == 0.0 {
                        continue;
                    }
                    for t in r * stride..(r + 1) * stride {
                        seg[col_idx[t] as usize] += values[t] * vr;
                    }
                }
            }
        }
    }
}

fn map_blocks<F>(terms: &[TermSet], f: F) -> Vec<Block>
where
    F: Fn(&TermSet) -> Block + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        terms.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        terms.iter().map(f).collect()
    }
}

fn build_block(
    points: &[f64],
    m: usize,
    d: usize,
    term: &TermSet,
    norm: CosineNormalization,
) -> Block {
    match term {
        TermSet::Cosine(t) => {
            let dims = t.subset().dims();
            let cols = t.cardinality();
            let scale = norm.per_dim().powi(dims.len() as i32);
            // per-dim strides of the lexicographic layout
            let radii: Vec<usize> = t.bandwidth().iter().map(|&n| (n - 1) as usize).collect();
            let mut strides = vec![1usize; radii.len()];
            for i in (0..radii.len().saturating_sub(1)).rev() {
                strides[i] = strides[i + 1] * radii[i + 1];
            }
            let mut data = vec![0.0; m * cols];
            let mut tables: Vec<Vec<f64>> = radii.iter().map(|&r| vec![0.0; r]).collect();
            for r in 0..m {
                let x = &points[r * d..(r + 1) * d];
                for (i, &dim) in dims.iter().enumerate() {
                    let xi = x[(dim - 1) as usize];
                    for (ki, slot) in tables[i].iter_mut().enumerate() {
                        *slot =
                            (2.0 * std::f64::consts::PI * (ki as f64 + 1.0) * xi).cos();
                    }
                }
                let row = &mut data[r * cols..(r + 1) * cols];
                for (c, slot) in row.iter_mut().enumerate() {
                    let mut v = scale;
                    for i in 0..radii.len() {
                        let digit = (c / strides[i]) % radii[i];
                        v *= tables[i][digit];
                    }
                    *slot = v;
                }
            }
            Block::Dense { cols, data }
        }
        TermSet::Wavelet(t) => {
            let dims = t.subset().dims();
            let cols = t.cardinality();
            let levels = t.levels();
            let offsets = t.level_offsets();
            let stride = levels.len();
            let mut col_idx = vec![0u32; m * stride];
            let mut values = vec![0.0; m * stride];
            for r in 0..m {
                let x = &points[r * d..(r + 1) * d];
                for (li, j) in levels.iter().enumerate() {
                    let mut val = 1.0;
                    let mut rank = 0usize;
                    for (i, &dim) in dims.iter().enumerate() {
                        let xi = x[(dim - 1) as usize];
                        let ji = j[i];
                        let pow = 1usize << ji;
                        let mut tpos = (xi + 0.5).rem_euclid(1.0);
                        if tpos >= 1.0 {
                            tpos = 0.0;
                        }
                        let scaled = tpos * pow as f64;
                        let cell = (scaled.floor() as usize).min(pow - 1);
                        rank = rank * pow + cell;
                        val *= haar_factor(xi, ji, cell as u32);
                    }
                    let slot = r * stride + li;
                    col_idx[slot] = (offsets[li] + rank) as u32;
                    values[slot] = val;
                }
            }
            Block::Sparse {
                cols,
                stride,
                col_idx,
                values,
            }
        }
    }
}

fn split_segments<'a>(buf: &'a mut [f64], lens: &[usize]) -> Vec<&'a mut [f64]> {
    let mut out = Vec::with_capacity(lens.len());
    let mut rest = buf;
    for &len in lens {
        let (seg, tail) = rest.split_at_mut(len);
        out.push(seg);
        rest = tail;
    }
    out
}

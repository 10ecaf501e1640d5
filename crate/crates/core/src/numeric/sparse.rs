//! Symmetric sparse matrices: CSR storage, reverse Cuthill–McKee ordering,
//! and an envelope (profile) Cholesky factorization.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Compressed sparse row matrix holding the full (both triangles) pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from (row, col, value) triplets. Duplicates are summed
    /// in insertion order, so the result depends only on the triplet sequence.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::new();
        let mut vals: Vec<f64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(pos) => self.vals[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// Row sums, accumulating off-diagonal entries in column order and then
    /// adding the diagonal.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let off: f64 = self.row(i).filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
                off + self.get(i, i)
            })
            .collect()
    }

    /// Overwrites every diagonal entry with minus the off-diagonal row sum
    /// (same summation order as [`CsrMatrix::row_sums`]).
    pub fn zero_row_sums(&mut self) {
        for i in 0..self.n {
            let range = self.row_ptr[i]..self.row_ptr[i + 1];
            let mut off = 0.0;
            let mut diag_pos = None;
            for p in range {
                if self.cols[p] == i {
                    diag_pos = Some(p);
                } else {
                    off += self.vals[p];
                }
            }
            if let Some(p) = diag_pos {
                self.vals[p] = -off;
            }
        }
    }

    /// `self + alpha * other`; both must share the same pattern.
    pub fn add_scaled(&self, alpha: f64, other: &CsrMatrix) -> Result<CsrMatrix> {
        if self.row_ptr != other.row_ptr || self.cols != other.cols {
            return Err(Error::InvalidInput("sparsity patterns differ".into()));
        }
        let vals = self.vals.iter().zip(&other.vals).map(|(a, b)| a + alpha * b).collect();
        Ok(CsrMatrix {
            n: self.n,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals,
        })
    }

    /// Reverse Cuthill–McKee permutation: `perm[new] = old`.
    pub fn reverse_cuthill_mckee(&self) -> Vec<usize> {
        let n = self.n;
        let degree: Vec<usize> = (0..n).map(|i| self.row_ptr[i + 1] - self.row_ptr[i]).collect();
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let seed = (0..n)
                .filter(|&i| !visited[i])
                .min_by_key(|&i| degree[i])
                .expect("unvisited node");
            let start = self.pseudo_peripheral(seed, &degree);
            let mut queue = VecDeque::from([start]);
            visited[start] = true;
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut next: Vec<usize> = self
                    .row(v)
                    .map(|(j, _)| j)
                    .filter(|&j| !visited[j])
                    .collect();
                next.sort_by_key(|&j| (degree[j], j));
                for j in next {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order.reverse();
        order
    }

    fn bfs_levels(&self, start: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.n];
        level[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let lv = level[v].unwrap();
            for (j, _) in self.row(v) {
                if level[j].is_none() {
                    level[j] = Some(lv + 1);
                    queue.push_back(j);
                }
            }
        }
        level
    }

    fn pseudo_peripheral(&self, seed: usize, degree: &[usize]) -> usize {
        let mut node = seed;
        let mut eccentricity = 0;
        loop {
            let levels = self.bfs_levels(node);
            let depth = levels.iter().flatten().copied().max().unwrap_or(0);
            if depth <= eccentricity {
                return node;
            }
            eccentricity = depth;
            node = (0..self.n)
                .filter(|&i| levels[i] == Some(depth))
                .min_by_key(|&i| (degree[i], i))
                .unwrap();
        }
    }
}

/// Cholesky factor L (A = L Lᵀ) of a permuted SPD matrix in envelope storage.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors `P A Pᵀ` where `perm[new] = old`.
    pub fn factor(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.dim();
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let first: Vec<usize> = (0..n)
            .map(|i| a.row(perm[i]).map(|(j, _)| inverse[j]).min().unwrap_or(i).min(i))
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut data = vec![0.0; start[n]];
        for i in 0..n {
            for (j_old, v) in a.row(perm[i]) {
                let j = inverse[j_old];
                if j <= i {
                    data[start[i] + j - first[i]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let (head, tail) = data.split_at_mut(start[i]);
                let row_j = &head[start[j]..start[j + 1]];
                let row_i = &mut tail[..i - fi + 1];
                let dot: f64 = row_i[lo - fi..j - fi]
                    .iter()
                    .zip(&row_j[lo - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                row_i[j - fi] = (row_i[j - fi] - dot) / row_j[j - fj];
            }
            let row_i = &mut data[start[i]..start[i + 1]];
            let (off, diag) = row_i.split_at_mut(i - fi);
            let d = diag[0] - off.iter().map(|x| x * x).sum::<f64>();
            if !(d > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "matrix is not positive definite (pivot {d:e} at row {i})"
                )));
            }
            diag[0] = d.sqrt();
        }
        Ok(Self {
            perm,
            first,
            start,
            data,
        })
    }

    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (yj, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yj -= l * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

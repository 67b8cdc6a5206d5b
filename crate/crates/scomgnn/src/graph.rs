//! Item graph construction and the sparse/dense matrix kernels everything
//! else is built on.
//!
//! The graph is undirected and simple: raw edge lists are cleaned (self-loops
//! dropped, duplicates collapsed) once at build time, and the adjacency is
//! stored in CSR form with sorted column indices so that every downstream
//! floating-point reduction runs in a fixed order.

use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph over items `0..num_nodes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemGraph {
    pub num_nodes: usize,
    /// Canonical edge list, each pair stored as `(min, max)`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// CSR adjacency: neighbors of `i` are `col_indices[row_offsets[i]..row_offsets[i+1]]`.
    pub row_offsets: Vec<usize>,
    pub col_indices: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl ItemGraph {
    /// Neighbors of `i`, sorted ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.col_indices[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    /// True if `i` and `j` are adjacent. Binary search on the sorted row.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&j).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

/// Real matrix in CSR layout. Column indices are strictly increasing within
/// each row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub row_offsets: Vec<usize>,
    pub col_indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseMatrix {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entry `(i, j)`, zero if not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let lo = self.row_offsets[i];
        let hi = self.row_offsets[i + 1];
        match self.col_indices[lo..hi].binary_search(&j) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    /// Sparse matrix-vector product `self * x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut y = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0.0;
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            y[i] = acc;
        }
        y
    }

    /// Max absolute asymmetry `max |S - S^T|`; 0 for structurally missing pairs
    /// means both sides are absent.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.col_indices[k];
                let d = (self.values[k] - self.get(j, i)).abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Dense copy, row-major. Intended for small probes and tests.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                *m.get_mut(i, self.col_indices[k]) = self.values[k];
            }
        }
        m
    }
}

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        DenseMatrix { rows: r, cols: c, data }
    }

    /// Identity matrix.
    pub fn eye(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` copied out.
    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Dense product `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let out_row = out.row_mut(i);
                for (j, &b) in orow.iter().enumerate() {
                    out_row[j] += a * b;
                }
            }
        }
        out
    }

    /// Dense product `self^T * other`.
    pub fn transpose_matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows, "transpose_matmul dimension mismatch");
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for r in 0..self.rows {
            let arow = self.row(r);
            let brow = other.row(r);
            for (i, &a) in arow.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = out.row_mut(i);
                for (j, &b) in brow.iter().enumerate() {
                    out_row[j] += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn add_assign(&mut self, other: &DenseMatrix) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Build the item graph from a raw edge list.
///
/// Self-loops are dropped, duplicate edges (in either orientation) are
/// collapsed, and the CSR rows come out sorted. Ids at or beyond `num_nodes`
/// are rejected, naming the offending pair.
pub fn build_graph(edge_pairs: &[(usize, usize)], num_nodes: usize) -> Result<ItemGraph> {
    let mut canonical: Vec<(usize, usize)> = Vec::with_capacity(edge_pairs.len());
    for &(a, b) in edge_pairs {
        if a >= num_nodes || b >= num_nodes {
            return Err(Error::InvalidInput(format!(
                "edge ({a}, {b}) references a node outside 0..{num_nodes}"
            )));
        }
        if a == b {
            continue; // self-loop
        }
        canonical.push((a.min(b), a.max(b)));
    }
    canonical.sort_unstable();
    canonical.dedup();

    let mut degrees = vec![0usize; num_nodes];
    for &(a, b) in &canonical {
        degrees[a] += 1;
        degrees[b] += 1;
    }
    let mut row_offsets = vec![0usize; num_nodes + 1];
    for i in 0..num_nodes {
        row_offsets[i + 1] = row_offsets[i] + degrees[i];
    }
    let mut col_indices = vec![0usize; 2 * canonical.len()];
    let mut cursor = row_offsets.clone();
    for &(a, b) in &canonical {
        col_indices[cursor[a]] = b;
        cursor[a] += 1;
        col_indices[cursor[b]] = a;
        cursor[b] += 1;
    }
    // Canonical edges are sorted by (min, max), which fills each row in
    // ascending column order already; assert rather than re-sort.
    debug_assert!((0..num_nodes)
        .all(|i| col_indices[row_offsets[i]..row_offsets[i + 1]].windows(2).all(|w| w[0] < w[1])));

    Ok(ItemGraph {
        num_nodes,
        edges: canonical,
        row_offsets,
        col_indices,
        degrees,
    })
}

/// Normalized adjacency `D^{-1/2} A D^{-1/2}`. Rows of isolated nodes are
/// empty: the `D^{-1/2}` entry for a degree-0 node is taken as 0.
pub fn normalized_adjacency(g: &ItemGraph) -> SparseMatrix {
    let inv_sqrt: Vec<f64> = g
        .degrees
        .iter()
        .map(|&d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() })
        .collect();
    let mut values = Vec::with_capacity(g.col_indices.len());
    for i in 0..g.num_nodes {
        for &j in g.neighbors(i) {
            values.push(inv_sqrt[i] * inv_sqrt[j]);
        }
    }
    SparseMatrix {
        rows: g.num_nodes,
        cols: g.num_nodes,
        row_offsets: g.row_offsets.clone(),
        col_indices: g.col_indices.clone(),
        values,
    }
}

/// Normalized Laplacian `L = I - D^{-1/2} A D^{-1/2}`, with an explicit unit
/// diagonal for every node (isolated nodes get a bare identity row).
pub fn normalized_laplacian(g: &ItemGraph) -> SparseMatrix {
    let adj = normalized_adjacency(g);
    let n = g.num_nodes;
    let mut row_offsets = Vec::with_capacity(n + 1);
    let mut col_indices = Vec::with_capacity(adj.nnz() + n);
    let mut values = Vec::with_capacity(adj.nnz() + n);
    row_offsets.push(0);
    for i in 0..n {
        let lo = adj.row_offsets[i];
        let hi = adj.row_offsets[i + 1];
        let mut diag_placed = false;
        for k in lo..hi {
            let j = adj.col_indices[k];
            if j > i && !diag_placed {
                col_indices.push(i);
                values.push(1.0);
                diag_placed = true;
            }
            col_indices.push(j);
            values.push(-adj.values[k]);
        }
        if !diag_placed {
            col_indices.push(i);
            values.push(1.0);
        }
        row_offsets.push(col_indices.len());
    }
    SparseMatrix {
        rows: n,
        cols: n,
        row_offsets,
        col_indices,
        values,
    }
}

/// Sparse-dense product `S * H`. Runtime is proportional to `nnz(S) * H.cols`.
pub fn spmm(s: &SparseMatrix, h: &DenseMatrix) -> Result<DenseMatrix> {
    if s.cols != h.rows {
        return Err(Error::InvalidInput(format!(
            "spmm shape mismatch: ({} x {}) * ({} x {})",
            s.rows, s.cols, h.rows, h.cols
        )));
    }
    let mut out = DenseMatrix::zeros(s.rows, h.cols);
    for i in 0..s.rows {
        for k in s.row_offsets[i]..s.row_offsets[i + 1] {
            let v = s.values[k];
            let hrow = h.row(s.col_indices[k]);
            let orow = out.row_mut(i);
            for (j, &x) in hrow.iter().enumerate() {
                orow[j] += v * x;
            }
        }
    }
    Ok(out)
}

/// Read an edge list: one edge per line, two integer ids separated by a tab
/// (any run of whitespace is accepted), `#` lines ignored.
pub fn load_edge_list(path: &Path) -> Result<Vec<(usize, usize)>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = std::io::BufReader::new(file);
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                msg: "expected two node ids".into(),
            })?
            .parse::<usize>()
            .map_err(|_| Error::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                msg: "node id is not a non-negative integer".into(),
            })
        };
        let a = parse(it.next())?;
        let b = parse(it.next())?;
        if it.next().is_some() {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                msg: "trailing tokens after the two node ids".into(),
            });
        }
        edges.push((a, b));
    }
    Ok(edges)
}

/// Write an edge list in the same format `load_edge_list` reads.
pub fn save_edge_list(g: &ItemGraph, path: &Path) -> Result<()> {
    use std::io::Write;
    let mut out = String::new();
    for &(a, b) in &g.edges {
        out.push_str(&format!("{a}\t{b}\n"));
    }
    let mut file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    file.write_all(out.as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Distinct node ids of `g` with no edge to `i` (excluding `i` itself).
pub fn non_neighbor_count(g: &ItemGraph, i: usize) -> usize {
    g.num_nodes - 1 - g.degrees[i]
}

/// Adjacency of the union of several edge lists, used for pool exclusion.
pub fn union_graph(parts: &[&[(usize, usize)]], num_nodes: usize) -> Result<ItemGraph> {
    let mut all: Vec<(usize, usize)> = Vec::new();
    let mut seen = HashSet::new();
    for part in parts {
        for &e in *part {
            if seen.insert((e.0.min(e.1), e.0.max(e.1))) {
                all.push(e);
            }
        }
    }
    build_graph(&all, num_nodes)
}

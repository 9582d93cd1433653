//! Dense matrices over the scalar field and exact elimination.

use crate::scalars::Scalar;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn diag(d: &[Scalar]) -> Mat {
        let n = d.len();
        let mut m = Mat::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        if c.is_one() {
            return self.clone();
        }
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.neg()).collect() }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let (r, c) = (self.rows, o.cols);
        let rows: Vec<Vec<Scalar>> = (0..r)
            .into_par_iter()
            .map(|i| {
                let mut acc = vec![Scalar::zero(); c];
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, slot) in acc.iter_mut().enumerate() {
                        let b = o.get(k, j);
                        if !b.is_zero() {
                            *slot = &*slot + &(a * b);
                        }
                    }
                }
                acc
            })
            .collect();
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product; basis index `(i, j) ↦ i * dim(o) + j`.
    pub fn kron(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            m.set(i * o.rows + k, j * o.cols + l, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn commutator(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, e: u32) -> Mat {
        let mut r = Mat::identity(self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Submatrix from row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self.clone()).pivots.len()
    }

    /// Basis of the right kernel, as columns.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        Echelon::new(self.clone()).kernel()
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let e = Echelon::new_limited(aug, n);
        if e.pivots.len() < n || e.pivots.iter().enumerate().any(|(k, &p)| p != k) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| e.m.get(i, n + j).clone()))
    }

    /// Solve `self · x = b` for one particular solution.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let n = self.cols;
        let mut aug = Mat::zeros(self.rows, n + 1);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let e = Echelon::new_limited(aug, n);
        for r in e.pivots.len()..self.rows {
            if !e.m.get(r, n).is_zero() {
                return None;
            }
        }
        let mut x = vec![Scalar::zero(); n];
        for (r, &p) in e.pivots.iter().enumerate() {
            x[p] = e.m.get(r, n).clone();
        }
        Some(x)
    }

    /// Solve `self · X = B` column by column.
    pub fn solve_mat(&self, b: &Mat) -> Option<Mat> {
        let n = self.cols;
        let mut aug = Mat::zeros(self.rows, n + b.cols);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..b.cols {
                aug.set(i, n + j, b.get(i, j).clone());
            }
        }
        let e = Echelon::new_limited(aug, n);
        for r in e.pivots.len()..self.rows {
            for j in 0..b.cols {
                if !e.m.get(r, n + j).is_zero() {
                    return None;
                }
            }
        }
        let mut x = Mat::zeros(n, b.cols);
        for (r, &p) in e.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, e.m.get(r, n + j).clone());
            }
        }
        Some(x)
    }

    pub fn direct_sum(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form.
pub struct Echelon {
    pub m: Mat,
    pub pivots: Vec<usize>,
}

fn pick_pivot(m: &Mat, start: usize, col: usize) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for r in start..m.rows {
        let x = m.get(r, col);
        if x.is_zero() {
            continue;
        }
        let w = x.total_terms();
        if best.is_none_or(|(_, bw)| w < bw) {
            best = Some((r, w));
            if w <= 2 && x.is_monomial() {
                break;
            }
        }
    }
    best.map(|b| b.0)
}

impl Echelon {
    pub fn new(m: Mat) -> Echelon {
        let c = m.cols;
        Echelon::new_limited(m, c)
    }

    /// Eliminate only in the first `limit` columns.
    pub fn new_limited(mut m: Mat, limit: usize) -> Echelon {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..limit {
            if r >= m.rows {
                break;
            }
            let Some(p) = pick_pivot(&m, r, col) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, col).inv().unwrap();
            for j in col..m.cols {
                let v = m.get(r, j);
                if !v.is_zero() {
                    let nv = v * &inv;
                    m.set(r, j, nv);
                }
            }
            let cols = m.cols;
            let prow: Vec<Scalar> = m.row(r).to_vec();
            let nz: Vec<usize> = (col..cols).filter(|&j| !prow[j].is_zero()).collect();
            let rows = m.rows;
            let data = &mut m.data;
            data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                if i == r || i >= rows {
                    return;
                }
                let f = row[col].clone();
                if f.is_zero() {
                    return;
                }
                for &j in &nz {
                    row[j] = &row[j] - &(&f * &prow[j]);
                }
            });
            pivots.push(col);
            r += 1;
        }
        Echelon { m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let n = self.m.cols;
        let piv: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in (0..n).filter(|j| !piv.contains(j)) {
            let mut v = vec![Scalar::zero(); n];
            v[free] = Scalar::one();
            for (r, &p) in self.pivots.iter().enumerate() {
                v[p] = self.m.get(r, free).neg();
            }
            out.push(v);
        }
        out
    }
}

/// Polynomial in `t` with matrix coefficients, truncated at `order`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SerMat {
    pub coeffs: Vec<Mat>,
}

impl SerMat {
    pub fn constant(m: Mat, order: usize) -> SerMat {
        let (r, c) = (m.rows(), m.cols());
        let mut coeffs = vec![Mat::zeros(r, c); order];
        coeffs[0] = m;
        SerMat { coeffs }
    }

    pub fn zeros(r: usize, c: usize, order: usize) -> SerMat {
        SerMat { coeffs: vec![Mat::zeros(r, c); order] }
    }

    /// `m t^k`.
    pub fn monomial(m: Mat, k: usize, order: usize) -> SerMat {
        let mut s = SerMat::zeros(m.rows(), m.cols(), order);
        if k < order {
            s.coeffs[k] = m;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn rows(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.coeffs[0].cols()
    }

    pub fn add(&self, o: &SerMat) -> SerMat {
        assert_eq!(self.order(), o.order(), "series order mismatch");
        SerMat { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &SerMat) -> SerMat {
        assert_eq!(self.order(), o.order(), "series order mismatch");
        SerMat { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn mul(&self, o: &SerMat) -> SerMat {
        assert_eq!(self.order(), o.order(), "series order mismatch");
        let n = self.order();
        let mut out = SerMat::zeros(self.rows(), o.cols(), n);
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SerMat {
        SerMat { coeffs: self.coeffs.iter().map(|m| m.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|m| m.is_zero())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> SerMat {
        let n = self.order();
        let mut out = SerMat::zeros(self.rows(), self.cols(), n);
        for i in 0..n.saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i].clone();
        }
        out
    }

    /// Substitution `t ↦ u t`.
    pub fn scale_t(&self, u: &Scalar) -> SerMat {
        let mut p = Scalar::one();
        let mut coeffs = Vec::with_capacity(self.order());
        for m in &self.coeffs {
            coeffs.push(m.scale(&p));
            p = &p * u;
        }
        SerMat { coeffs }
    }

    pub fn truncate(&self, order: usize) -> SerMat {
        let mut c = self.coeffs.clone();
        c.resize(order, Mat::zeros(self.rows(), self.cols()));
        SerMat { coeffs: c }
    }

    pub fn kron(&self, o: &SerMat) -> SerMat {
        let n = self.order();
        let mut out = SerMat::zeros(self.rows() * o.rows(), self.cols() * o.cols(), n);
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].kron(&o.coeffs[j]));
            }
        }
        out
    }

    /// The `A_n`-linear map as a block lower-triangular matrix on the flattened
    /// space `⊕_k V t^k` (block `k` holds the `t^k` component).
    pub fn flatten(&self) -> Mat {
        let n = self.order();
        let (r, c) = (self.rows(), self.cols());
        let mut m = Mat::zeros(n * r, n * c);
        for k in 0..n {
            for j in 0..n - k {
                let blk = &self.coeffs[k];
                for a in 0..r {
                    for b in 0..c {
                        let v = blk.get(a, b);
                        if !v.is_zero() {
                            m.set((j + k) * r + a, j * c + b, v.clone());
                        }
                    }
                }
            }
        }
        m
    }

    /// Inverse when the constant term is invertible.
    pub fn inverse(&self) -> Option<SerMat> {
        let n = self.order();
        let c0i = self.coeffs[0].inverse()?;
        let mut out = SerMat::zeros(self.rows(), self.cols(), n);
        out.coeffs[0] = c0i.clone();
        for k in 1..n {
            let mut s = Mat::zeros(self.rows(), self.cols());
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&out.coeffs[k - j]));
                }
            }
            out.coeffs[k] = c0i.mul(&s).neg();
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::sc;

    fn m(rows: &[&[&str]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|x| sc(x)).collect()).collect())
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[&["qt", "1"], &["1", "qt"]]);
        let ai = a.inverse().unwrap();
        assert!(a.mul(&ai).is_identity());
        let x = a.solve(&[sc("1"), sc("0")]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![sc("1"), sc("0")]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&["1", "qt"], &["z", "z*qt"]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn series_inverse() {
        let s = SerMat { coeffs: vec![Mat::identity(2), m(&[&["0", "1"], &["0", "0"]]), Mat::zeros(2, 2)] };
        let si = s.inverse().unwrap();
        let p = s.mul(&si);
        assert!(p.coeffs[0].is_identity() && p.coeffs[1].is_zero() && p.coeffs[2].is_zero());
        assert!(s.flatten().mul(&si.flatten()).is_identity());
    }
}

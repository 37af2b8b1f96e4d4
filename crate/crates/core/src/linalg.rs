//! Dense exact linear algebra over a [`Field`]. Matrices are row-major and do
//! not carry their field; every operation takes it explicitly.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::{self, Poly};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Fe::ONE;
        }
        m
    }

    pub fn scalar(n: usize, c: Fe) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> Fe) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vec<Fe>]) -> Mat {
        let mut m = Mat::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for i in 0..n {
                m.data[i * cols.len() + j] = c[i];
            }
        }
        m
    }

    pub fn from_u32(rows: usize, cols: usize, v: &[u32]) -> Mat {
        assert_eq!(v.len(), rows * cols);
        Mat {
            rows,
            cols,
            data: v.iter().map(|&x| Fe(x)).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(f: &Field, rows: usize, cols: usize, rng: &mut R) -> Mat {
        Mat::from_fn(rows, cols, |_, _| f.random(rng))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Fe] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn map(&self, g: impl Fn(Fe) -> Fe) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| g(x)).collect(),
        }
    }

    pub fn add(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "add shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "sub shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &Field, c: Fe) -> Mat {
        self.map(|x| f.mul(x, c))
    }

    pub fn neg(&self, f: &Field) -> Mat {
        self.map(|x| f.neg(x))
    }

    /// `self += c * o`.
    pub fn axpy(&mut self, f: &Field, c: Fe, o: &Mat) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        f.axpy(&mut self.data, c, &o.data);
    }

    pub fn mul(&self, f: &Field, o: &Mat) -> Mat {
        assert_eq!(
            self.cols, o.rows,
            "mul shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, o.rows, o.cols
        );
        let mut out = Mat::zeros(self.rows, o.cols);
        if o.cols == 0 {
            return out;
        }
        for i in 0..self.rows {
            let arow = &self.data[i * self.cols..(i + 1) * self.cols];
            let orow = &mut out.data[i * o.cols..(i + 1) * o.cols];
            for (l, &a) in arow.iter().enumerate() {
                if !a.is_zero() {
                    f.axpy(orow, a, &o.data[l * o.cols..(l + 1) * o.cols]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &Field, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| f.dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &Field, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![Fe::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if !c.is_zero() {
                f.axpy(&mut out, c, self.row(i));
            }
        }
        out
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut out = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        out
    }

    pub fn kron(&self, f: &Field, o: &Mat) -> Mat {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut out = Mat::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    let dst = (i * o.rows + k) * c + j * o.cols;
                    f.axpy(&mut out.data[dst..dst + o.cols], a, o.row(k));
                }
            }
        }
        out
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        let cols = self.cols + o.cols;
        let mut out = Mat::zeros(self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(o.row(i));
        }
        out
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Mat {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hcat(rows: usize, parts: &[Mat]) -> Mat {
        parts.iter().fold(Mat::zeros(rows, 0), |acc, m| acc.hstack(m))
    }

    pub fn vcat(cols: usize, parts: &[Mat]) -> Mat {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Mat { rows, cols, data }
    }

    pub fn block_diag(parts: &[Mat]) -> Mat {
        let r: usize = parts.iter().map(|m| m.rows).sum();
        let c: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.set_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Mat) {
        for i in 0..m.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + m.cols].copy_from_slice(m.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(rows, cols);
        for i in 0..rows {
            let src = (r0 + i) * self.cols + c0;
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form; pivots chosen at the first non-zero entry.
    pub fn rref(&self, f: &Field) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let cols = m.cols;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.data[i * cols + c].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    m.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.data[r * cols + c]);
            f.scale_slice(&mut m.data[r * cols + c..(r + 1) * cols], inv);
            let (head, tail) = m.data.split_at_mut(r * cols);
            let (prow, rest) = tail.split_at_mut(cols);
            let prow = &prow[c..];
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let row = if i < r {
                    &mut head[i * cols..(i + 1) * cols]
                } else {
                    &mut rest[(i - r - 1) * cols..(i - r) * cols]
                };
                let x = row[c];
                if !x.is_zero() {
                    f.axpy(&mut row[c..], f.neg(x), prow);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * cols);
        m.rows = r;
        Echelon { mat: m, pivots }
    }

    /// Row echelon form (not reduced); cheaper when only rank or pivots matter.
    pub fn echelon(&self, f: &Field) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let cols = m.cols;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.data[i * cols + c].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    m.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.data[r * cols + c]);
            f.scale_slice(&mut m.data[r * cols + c..(r + 1) * cols], inv);
            let (head, tail) = m.data.split_at_mut((r + 1) * cols);
            let prow = &head[r * cols + c..];
            for i in 0..m.rows - r - 1 {
                let row = &mut tail[i * cols..(i + 1) * cols];
                let x = row[c];
                if !x.is_zero() {
                    f.axpy(&mut row[c..], f.neg(x), prow);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * cols);
        m.rows = r;
        Echelon { mat: m, pivots }
    }

    pub fn rank(&self, f: &Field) -> usize {
        if self.rows <= self.cols {
            self.echelon(f).pivots.len()
        } else {
            self.transpose().echelon(f).pivots.len()
        }
    }

    /// Basis of the right kernel `{x : A x = 0}` as columns of an `cols x k` matrix.
    pub fn kernel(&self, f: &Field) -> Mat {
        let e = self.rref(f);
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &c in &e.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut k = Mat::zeros(n, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, Fe::ONE);
            for (r, &pc) in e.pivots.iter().enumerate() {
                let v = e.mat.get(r, fc);
                if !v.is_zero() {
                    k.set(pc, j, f.neg(v));
                }
            }
        }
        k
    }

    /// Basis of the left kernel `{y : y A = 0}` as rows.
    pub fn left_kernel(&self, f: &Field) -> Mat {
        self.transpose().kernel(f).transpose()
    }

    /// Column space basis: the pivot columns of `self`.
    pub fn col_space(&self, f: &Field) -> Mat {
        let e = self.echelon(f);
        self.select_cols(&e.pivots)
    }

    /// Some `X` with `self * X = b`, or `None`.
    pub fn solve(&self, f: &Field, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "solve shape mismatch");
        let aug = self.hstack(b);
        let e = aug.rref(f);
        let n = self.cols;
        if e.pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = Mat::zeros(n, b.cols);
        for (r, &pc) in e.pivots.iter().enumerate() {
            x.row_mut(pc).copy_from_slice(&e.mat.row(r)[n..]);
        }
        Some(x)
    }

    pub fn inverse(&self, f: &Field) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let e = self.hstack(&Mat::identity(n)).rref(f);
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(e.mat.block(0, n, n, n))
    }

    pub fn det(&self, f: &Field) -> Fe {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Fe::ZERO;
            };
            if piv != c {
                for j in 0..n {
                    let t = a.get(c, j);
                    a.set(c, j, a.get(piv, j));
                    a.set(piv, j, t);
                }
                det = f.neg(det);
            }
            let d = a.get(c, c);
            det = f.mul(det, d);
            let inv = f.inv(d);
            let pivot_row = a.row(c).to_vec();
            for r in c + 1..n {
                let x = a.get(r, c);
                if !x.is_zero() {
                    f.axpy(a.row_mut(r), f.neg(f.mul(x, inv)), &pivot_row);
                }
            }
        }
        det
    }

    pub fn trace(&self, f: &Field) -> Fe {
        (0..self.rows.min(self.cols)).fold(Fe::ZERO, |s, i| f.add(s, self.get(i, i)))
    }

    /// Minimal polynomial (monic, ascending) via Krylov sequences.
    pub fn min_poly(&self, f: &Field) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut result: Poly = vec![Fe::ONE];
        let mut span = Basis::new(n);
        for s in 0..n {
            let mut e = vec![Fe::ZERO; n];
            e[s] = Fe::ONE;
            if span.contains(f, &e) {
                continue;
            }
            let (local, krylov) = local_min_poly(f, self, e);
            for v in krylov {
                span.insert(f, v);
            }
            let g = poly::gcd(f, &result, &local);
            result = poly::divrem(f, &poly::mul(f, &result, &local), &g).0;
            if span.dim() == n {
                break;
            }
        }
        poly::monic(f, &result)
    }

    pub fn eval_poly(&self, f: &Field, p: &[Fe]) -> Mat {
        let n = self.rows;
        let mut out = Mat::zeros(n, n);
        for &c in p.iter().rev() {
            out = out.mul(f, self);
            for i in 0..n {
                let v = out.get(i, i);
                out.set(i, i, f.add(v, c));
            }
        }
        out
    }
}

fn local_min_poly(f: &Field, a: &Mat, v: Vec<Fe>) -> (Poly, Vec<Vec<Fe>>) {
    let n = a.rows;
    let mut krylov: Vec<Vec<Fe>> = Vec::new();
    // rows: reduced vectors with their expression in the krylov basis
    let mut reduced: Vec<(usize, Vec<Fe>, Vec<Fe>)> = Vec::new();
    let mut cur = v;
    loop {
        let d = krylov.len();
        let mut w = cur.clone();
        let mut coeff = vec![Fe::ZERO; d + 1];
        coeff[d] = Fe::ONE;
        for (piv, rv, rc) in &reduced {
            let x = w[*piv];
            if !x.is_zero() {
                let nx = f.neg(x);
                f.axpy(&mut w, nx, rv);
                f.axpy(&mut coeff[..rc.len()], nx, rc);
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => {
                return (poly::monic(f, &coeff), krylov);
            }
            Some(piv) => {
                let inv = f.inv(w[piv]);
                f.scale_slice(&mut w, inv);
                f.scale_slice(&mut coeff, inv);
                reduced.push((piv, w, coeff));
                krylov.push(cur.clone());
                cur = a.mul_vec(f, &cur);
                if krylov.len() > n {
                    unreachable!("krylov sequence longer than dimension");
                }
            }
        }
    }
}

/// Incrementally maintained echelon basis of a subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct Basis {
    n: usize,
    rows: Vec<(usize, Vec<Fe>)>,
}

impl Basis {
    pub fn new(n: usize) -> Basis {
        Basis { n, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn reduce(&self, f: &Field, v: &mut [Fe]) {
        for (piv, r) in &self.rows {
            let x = v[*piv];
            if !x.is_zero() {
                f.axpy(v, f.neg(x), r);
            }
        }
    }

    pub fn contains(&self, f: &Field, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Insert `v`; returns whether the dimension grew.
    pub fn insert(&mut self, f: &Field, v: Vec<Fe>) -> bool {
        let mut w = v;
        self.reduce(f, &mut w);
        match w.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(piv) => {
                let inv = f.inv(w[piv]);
                f.scale_slice(&mut w, inv);
                for (_, r) in self.rows.iter_mut() {
                    let x = r[piv];
                    if !x.is_zero() {
                        f.axpy(r, f.neg(x), &w);
                    }
                }
                self.rows.push((piv, w));
                true
            }
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Basis vectors as columns of an `n x dim` matrix.
    pub fn to_cols(&self) -> Mat {
        let vs: Vec<Vec<Fe>> = self.rows.iter().map(|(_, r)| r.clone()).collect();
        Mat::from_cols(self.n, &vs)
    }
}

/// Column indices (standard basis vectors) completing the column space of
/// `sub` to the whole space, chosen greedily in index order.
pub fn complement_coords(f: &Field, sub: &Mat) -> Vec<usize> {
    let e = sub.transpose().rref(f);
    let mut is_pivot = vec![false; sub.rows];
    for &c in &e.pivots {
        is_pivot[c] = true;
    }
    (0..sub.rows).filter(|&i| !is_pivot[i]).collect()
}

/// Left inverse data for a full-column-rank matrix `b` (n x d): returns rows
/// `r` with `b.select_rows(r)` invertible, and that inverse.
pub fn left_inverse(f: &Field, b: &Mat) -> Result<(Vec<usize>, Mat)> {
    let e = b.transpose().echelon(f);
    if e.pivots.len() < b.cols {
        return Err(Error::Singular);
    }
    let rows = e.pivots.clone();
    let sq = b.select_rows(&rows);
    Ok((rows, sq.inverse(f)?))
}

/// Coordinates of the columns of `v` in the basis given by the columns of `b`
/// (which must be independent and contain them).
pub fn coords_in(f: &Field, b: &Mat, v: &Mat) -> Result<Mat> {
    b.solve(f, v)
        .ok_or_else(|| Error::InvalidArgument("vector outside span".into()))
}

//! Dense matrices over `F_q` with one byte per entry.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::gltype::type_of;
use crate::poly::Poly;

/// Random invertibility probes before falling back to exhaustive search.
pub const DEFAULT_CONJUGATOR_RETRIES: usize = 64;

/// Solution spaces up to this many elements are scanned exhaustively.
pub const EXHAUSTIVE_SCAN_LIMIT: u64 = 1 << 20;

/// Row-major matrix of field-element codes.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            write!(f, "{}", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|e| e.code()).collect(),
        })
    }

    /// Wraps raw codes; the caller guarantees they are valid for the field in use.
    pub fn from_codes(rows: usize, cols: usize, data: Vec<u8>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Diagonal matrix.
    pub fn diag(entries: &[Elem]) -> Matrix {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.code();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Canonical byte encoding (row-major codes).
    #[inline]
    pub fn bytes(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        Elem(self.data[i * self.cols + j])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v.code();
    }

    fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.data[i * self.cols + j] == (i == j) as u8))
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        mul_into(
            &self.data,
            &other.data,
            &mut out.data,
            self.rows,
            self.cols,
            other.cols,
            field,
        );
        Ok(out)
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(Elem, Elem) -> Elem) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| op(Elem(a), Elem(b)).code())
                .collect(),
        })
    }

    pub fn add(&self, other: &Matrix, field: &Field) -> Result<Matrix> {
        self.zip_with(other, |a, b| field.add(a, b))
    }

    pub fn sub(&self, other: &Matrix, field: &Field) -> Result<Matrix> {
        self.zip_with(other, |a, b| field.sub(a, b))
    }

    pub fn scale(&self, c: Elem, field: &Field) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| field.mul(Elem(a), c).code()).collect(),
        }
    }

    /// `self - I`.
    pub fn minus_identity(&self, field: &Field) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = field.sub(m.get(i, i), Elem::ONE);
            m.set(i, i, v);
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Diagonal sum of square blocks.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * m + c0 + j] = b.data[i * b.cols + j];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copy of the `rows x cols` submatrix starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.data[(r0 + i) * self.cols + c0 + j];
            }
        }
        out
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut buf = self.data.clone();
        rank_in_place(&mut buf, self.rows, self.cols, field)
    }

    pub fn kernel_dim(&self, field: &Field) -> usize {
        self.cols - self.rank(field)
    }

    pub fn is_invertible(&self, field: &Field) -> bool {
        self.is_square() && self.rank(field) == self.rows
    }

    pub fn det(&self, field: &Field) -> Result<Elem> {
        self.check_square()?;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Elem::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return Ok(Elem::ZERO);
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = field.neg(det);
            }
            let p = Elem(a[col * n + col]);
            det = field.mul(det, p);
            let pinv = field.inv_nz(p);
            for r in col + 1..n {
                let f = field.mul(Elem(a[r * n + col]), pinv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = field.sub(Elem(a[r * n + j]), field.mul(f, Elem(a[col * n + j])));
                    a[r * n + j] = v.code();
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        self.check_square()?;
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        if inverse_into(&self.data, &mut out.data, n, field) {
            Ok(out)
        } else {
            Err(Error::Singular)
        }
    }

    /// `det(tI - A)` via reduction to upper Hessenberg form.
    pub fn char_poly(&self, field: &Field) -> Result<Poly> {
        self.check_square()?;
        Ok(char_poly_codes(&self.data, self.rows, field))
    }

    /// Basis of the right null space `{v : A v = 0}`.
    pub fn nullspace(&self, field: &Field) -> Vec<Vec<Elem>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
            let inv = field.inv_nz(Elem(a[r * cols + c]));
            for j in 0..cols {
                a[r * cols + j] = field.mul(Elem(a[r * cols + j]), inv).code();
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = Elem(a[i * cols + c]);
                if f.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let v = field.sub(Elem(a[i * cols + j]), field.mul(f, Elem(a[r * cols + j])));
                    a[i * cols + j] = v.code();
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; cols];
                v[fc] = Elem::ONE;
                for (pr, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(Elem(a[pr * cols + fc]));
                }
                v
            })
            .collect()
    }

    /// Basis (as matrices) of `{X : X A = B X}`.
    pub fn intertwiners(a: &Matrix, b: &Matrix, field: &Field) -> Result<Vec<Matrix>> {
        // X is n x m with X A = B X, A m x m, B n x n.
        a.check_square()?;
        b.check_square()?;
        let (m, n) = (a.rows, b.rows);
        let unknowns = n * m;
        let mut sys = Matrix::zeros(unknowns, unknowns);
        for i in 0..n {
            for j in 0..m {
                let row = i * m + j;
                // (X A)_{ij} = sum_k X_{ik} A_{kj}
                for k in 0..m {
                    let col = i * m + k;
                    let v = field.add(sys.get(row, col), a.get(k, j));
                    sys.set(row, col, v);
                }
                // -(B X)_{ij} = -sum_k B_{ik} X_{kj}
                for k in 0..n {
                    let col = k * m + j;
                    let v = field.sub(sys.get(row, col), b.get(i, k));
                    sys.set(row, col, v);
                }
            }
        }
        Ok(sys
            .nullspace(field)
            .into_iter()
            .map(|v| Matrix {
                rows: n,
                cols: m,
                data: v.iter().map(|e| e.code()).collect(),
            })
            .collect())
    }

    /// Parses `"2,0;0,1"`.
    pub fn parse(text: &str, field: &Field) -> Result<Matrix> {
        let mut rows = Vec::new();
        let mut offset = 0;
        for row in text.split(';') {
            let mut entries = Vec::new();
            let mut col_off = offset;
            for entry in row.split(',') {
                let e = field
                    .parse(entry)
                    .map_err(|_| Error::parse(text, col_off, "a field element"))?;
                entries.push(e);
                col_off += entry.len() + 1;
            }
            rows.push(entries);
            offset += row.len() + 1;
        }
        Matrix::from_rows(&rows).map_err(|_| Error::parse(text, 0, "rows of equal length"))
    }

    pub fn format(&self, field: &Field) -> String {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| field.format(self.get(i, j)))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, field: &Field, rng: &mut R) -> Matrix {
        let q = field.q();
        Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.gen_range(0..q) as u8).collect(),
        }
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, field: &Field, rng: &mut R) -> Matrix {
        loop {
            let m = Matrix::random(n, n, field, rng);
            if m.is_invertible(field) {
                return m;
            }
        }
    }
}

/// Searches for an invertible `X` with `X A X^-1 = B`.
///
/// Returns `Ok(None)` only when non-conjugacy is proven: differing
/// characteristic polynomials or types, or an exhausted scan of the full
/// solution space. A conjugate pair whose solution space is too large to scan
/// and where sampling failed is reported as [`Error::Inconclusive`].
pub fn conjugator<R: Rng + ?Sized>(
    a: &Matrix,
    b: &Matrix,
    field: &Field,
    rng: &mut R,
    retries: usize,
) -> Result<Option<Matrix>> {
    a.check_square()?;
    b.check_square()?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch("conjugator of different sizes".into()));
    }
    if a.char_poly(field)? != b.char_poly(field)? {
        return Ok(None);
    }
    let basis = Matrix::intertwiners(a, b, field)?;
    let dim = basis.len();
    let n = a.rows;
    let combine = |coeffs: &[Elem]| -> Matrix {
        let mut x = Matrix::zeros(n, n);
        for (c, m) in coeffs.iter().zip(&basis) {
            if c.is_zero() {
                continue;
            }
            for (xv, &mv) in x.data.iter_mut().zip(&m.data) {
                *xv = field.add(Elem(*xv), field.mul(*c, Elem(mv))).code();
            }
        }
        x
    };
    let q = field.q();
    for _ in 0..retries {
        let coeffs: Vec<Elem> = (0..dim).map(|_| Elem(rng.gen_range(0..q) as u8)).collect();
        let x = combine(&coeffs);
        if x.is_invertible(field) {
            return Ok(Some(x));
        }
    }
    let space = (q as u64).checked_pow(dim as u32);
    if space.is_some_and(|s| s <= EXHAUSTIVE_SCAN_LIMIT) {
        let mut coeffs = vec![Elem::ZERO; dim];
        loop {
            let x = combine(&coeffs);
            if x.is_invertible(field) {
                return Ok(Some(x));
            }
            // odometer
            let mut k = 0;
            loop {
                if k == dim {
                    return Ok(None);
                }
                let next = coeffs[k].code() as u32 + 1;
                if next < q {
                    coeffs[k] = Elem(next as u8);
                    break;
                }
                coeffs[k] = Elem::ZERO;
                k += 1;
            }
        }
    }
    if type_of(a, field)? != type_of(b, field)? {
        return Ok(None);
    }
    Err(Error::Inconclusive {
        tries: retries,
        dim,
    })
}

// ---------------------------------------------------------------------------
// Byte-level kernels shared with the counting engine.
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn mul_into(
    a: &[u8],
    b: &[u8],
    out: &mut [u8],
    rows: usize,
    inner: usize,
    cols: usize,
    field: &Field,
) {
    let (add, mul, _, _, q) = field.tables();
    for i in 0..rows {
        let orow = &mut out[i * cols..(i + 1) * cols];
        orow.fill(0);
        for k in 0..inner {
            let aik = a[i * inner + k] as usize;
            if aik == 0 {
                continue;
            }
            let mrow = &mul[aik * q..(aik + 1) * q];
            let brow = &b[k * cols..(k + 1) * cols];
            for (o, &bkj) in orow.iter_mut().zip(brow) {
                *o = add[*o as usize * q + mrow[bkj as usize] as usize];
            }
        }
    }
}

/// Row-echelon rank; destroys `buf`.
pub(crate) fn rank_in_place(buf: &mut [u8], rows: usize, cols: usize, field: &Field) -> usize {
    let (add, mul, neg, inv, q) = field.tables();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| buf[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in c..cols {
                buf.swap(piv * cols + j, rank * cols + j);
            }
        }
        let pinv = inv[buf[rank * cols + c] as usize] as usize;
        for r in rank + 1..rows {
            let x = buf[r * cols + c] as usize;
            if x == 0 {
                continue;
            }
            // row_r -= (x / pivot) * row_rank
            let f = neg[mul[x * q + pinv] as usize] as usize;
            let mrow = &mul[f * q..(f + 1) * q];
            for j in c..cols {
                let v = buf[rank * cols + j] as usize;
                let idx = r * cols + j;
                buf[idx] = add[buf[idx] as usize * q + mrow[v] as usize];
            }
        }
        rank += 1;
    }
    rank
}

/// Gauss-Jordan into `out`; returns false when singular.
pub(crate) fn inverse_into(a: &[u8], out: &mut [u8], n: usize, field: &Field) -> bool {
    let (add, mul, neg, inv, q) = field.tables();
    let w = 2 * n;
    let mut aug = vec![0u8; n * w];
    for i in 0..n {
        aug[i * w..i * w + n].copy_from_slice(&a[i * n..(i + 1) * n]);
        aug[i * w + n + i] = 1;
    }
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| aug[r * w + c] != 0) else {
            return false;
        };
        if piv != c {
            for j in 0..w {
                aug.swap(piv * w + j, c * w + j);
            }
        }
        let pinv = inv[aug[c * w + c] as usize] as usize;
        for j in 0..w {
            let idx = c * w + j;
            aug[idx] = mul[aug[idx] as usize * q + pinv];
        }
        for r in 0..n {
            if r == c {
                continue;
            }
            let x = aug[r * w + c] as usize;
            if x == 0 {
                continue;
            }
            let f = neg[x] as usize;
            let mrow = &mul[f * q..(f + 1) * q];
            for j in 0..w {
                let v = aug[c * w + j] as usize;
                let idx = r * w + j;
                aug[idx] = add[aug[idx] as usize * q + mrow[v] as usize];
            }
        }
    }
    for i in 0..n {
        out[i * n..(i + 1) * n].copy_from_slice(&aug[i * w + n..(i + 1) * w]);
    }
    true
}

/// Characteristic polynomial of an `n x n` code matrix.
pub(crate) fn char_poly_codes(a: &[u8], n: usize, field: &Field) -> Poly {
    let mut h: Vec<Elem> = a.iter().map(|&c| Elem(c)).collect();
    let at = |i: usize, j: usize| i * n + j;
    // Similarity reduction to upper Hessenberg form.
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[at(i, m - 1)].is_zero()) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                h.swap(at(i, j), at(m, j));
            }
            for r in 0..n {
                h.swap(at(r, i), at(r, m));
            }
        }
        let tinv = field.inv_nz(h[at(m, m - 1)]);
        for j in m + 1..n {
            let u = field.mul(h[at(j, m - 1)], tinv);
            if u.is_zero() {
                continue;
            }
            for c in 0..n {
                h[at(j, c)] = field.sub(h[at(j, c)], field.mul(u, h[at(m, c)]));
            }
            for r in 0..n {
                h[at(r, m)] = field.add(h[at(r, m)], field.mul(u, h[at(r, j)]));
            }
        }
    }
    // p_k = (t - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<Elem>> = vec![vec![Elem::ONE]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![Elem::ZERO; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = field.add(next[d + 1], c);
            next[d] = field.sub(next[d], field.mul(h[at(k, k)], c));
        }
        let mut prod = Elem::ONE;
        for i in (0..k).rev() {
            prod = field.mul(prod, h[at(i + 1, i)]);
            if prod.is_zero() {
                break;
            }
            let coef = field.mul(h[at(i, k)], prod);
            if coef.is_zero() {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = field.sub(next[d], field.mul(coef, c));
            }
        }
        polys.push(next);
    }
    Poly::from_coeffs(polys.pop().unwrap())
}

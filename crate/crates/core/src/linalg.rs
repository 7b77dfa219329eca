//! Dense linear algebra over F_q and Smith normal form over F_q[T].

use crate::apoly::APoly;
use crate::field::{Base, FqElem, Gf};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FqElem>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![FqElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FqElem::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, o: &Self, f: &Gf<Base>) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, o: &Self, f: &Gf<Base>) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add(m.get(i, j), f.mul(a, o.get(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// `T·I − M` as a matrix over F_q[T].
    pub fn characteristic_matrix(&self, f: &Gf<Base>) -> PolyMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = PolyMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut e = APoly::constant(f.neg(self.get(i, j)));
                if i == j {
                    e = e.add(&APoly::x(), f);
                }
                m.set(i, j, e);
            }
        }
        m
    }
}

/// Outcome of solving a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    None,
    Unique(Vec<FqElem>),
    Multiple,
}

/// Solves `A x = b` by Gauss–Jordan elimination.
pub fn solve(a: &FqMatrix, b: &[FqElem], f: &Gf<Base>) -> Solution {
    assert_eq!(a.rows, b.len());
    let (rows, cols) = (a.rows, a.cols);
    // augmented matrix
    let mut m: Vec<Vec<FqElem>> = (0..rows)
        .map(|i| {
            let mut r: Vec<FqElem> = (0..cols).map(|j| a.get(i, j)).collect();
            r.push(b[i]);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c];
                for j in c..=cols {
                    let v = f.sub(m[i][j], f.mul(factor, m[r][j]));
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::None;
    }
    if pivots.len() < cols {
        return Solution::Multiple;
    }
    let mut x = vec![FqElem::ZERO; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Solution::Unique(x)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<APoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![APoly::zero(); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &APoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: APoly) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    // row[dst] -= k * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, k: &APoly, f: &Gf<Base>) {
        for j in 0..self.cols {
            let v = self.get(dst, j).sub(&k.mul(self.get(src, j), f), f);
            self.set(dst, j, v);
        }
    }

    // col[dst] -= k * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, k: &APoly, f: &Gf<Base>) {
        for i in 0..self.rows {
            let v = self.get(i, dst).sub(&k.mul(self.get(i, src), f), f);
            self.set(i, dst, v);
        }
    }

    /// Diagonal of the Smith normal form, made monic, in divisibility order.
    /// Zero diagonal entries (rank deficiency) are returned as zero polynomials.
    pub fn smith_diagonal(mut self, f: &Gf<Base>) -> Vec<APoly> {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            loop {
                // pivot: nonzero entry of least degree in the trailing block
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        let e = self.get(i, j);
                        if !e.is_zero()
                            && best.is_none_or(|(bi, bj)| e.deg() < self.get(bi, bj).deg())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return self.diagonal(n, f);
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.get(t, t).clone();
                let mut dirty = false;
                for i in t + 1..self.rows {
                    let (quo, rem) = self.get(i, t).divrem(&pivot, f).expect("nonzero pivot");
                    if !quo.is_zero() {
                        self.row_axpy(i, t, &quo, f);
                    }
                    dirty |= !rem.is_zero();
                }
                for j in t + 1..self.cols {
                    let (quo, rem) = self.get(t, j).divrem(&pivot, f).expect("nonzero pivot");
                    if !quo.is_zero() {
                        self.col_axpy(j, t, &quo, f);
                    }
                    dirty |= !rem.is_zero();
                }
                if dirty {
                    continue;
                }
                // the pivot must divide the whole trailing block
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !pivot.divides(self.get(i, j), f)));
                match bad {
                    Some(i) => {
                        for j in t..self.cols {
                            let v = self.get(t, j).add(self.get(i, j), f);
                            self.set(t, j, v);
                        }
                    }
                    None => break,
                }
            }
        }
        self.diagonal(n, f)
    }

    fn diagonal(&self, n: usize, f: &Gf<Base>) -> Vec<APoly> {
        (0..n)
            .map(|i| {
                let e = self.get(i, i);
                if e.is_zero() {
                    e.clone()
                } else {
                    e.monic(f).expect("nonzero")
                }
            })
            .collect()
    }
}

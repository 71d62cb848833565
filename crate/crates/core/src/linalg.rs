//! Dense linear algebra over a [`GaloisField`]: row reduction, rank,
//! nullspaces and products.

use alloc::vec;
use alloc::vec::Vec;

use crate::gf::GaloisField;

/// Row-major matrix of field element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn map_entries(&self, f: impl Fn(u32) -> u32) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix, field: &GaloisField) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let slot = &mut out.data[i * other.cols + j];
                        *slot = field.add(*slot, field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, field: &GaloisField) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32, field: &GaloisField) -> Matrix {
        self.map_entries(|x| field.mul(c, x))
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, field: &GaloisField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = field.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.get(row, c);
                self.set(row, c, field.mul(v, inv));
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = field.neg(factor);
                for c in col..self.cols {
                    let v = self.get(row, c);
                    if v != 0 {
                        let cur = self.get(r, c);
                        self.set(r, c, field.add(cur, field.mul(neg, v)));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &GaloisField) -> usize {
        self.clone().rref(field).len()
    }

    pub fn is_invertible(&self, field: &GaloisField) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }

    /// Basis of `{ v : self · v = 0 }`, one vector per free column, in
    /// increasing free-column order.
    pub fn nullspace(&self, field: &GaloisField) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self, field: &GaloisField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c));
            }
        }
        Some(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32], field: &GaloisField) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }
}

/// `[n choose k]_Q`, the number of `k`-dimensional subspaces of `F_Q^n`.
pub fn gaussian_binomial(n: usize, k: usize, order: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = order as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(q.saturating_pow((n - i) as u32) - 1);
        den = den.saturating_mul(q.saturating_pow((i + 1) as u32) - 1);
    }
    if num == u128::MAX || den == u128::MAX {
        return u128::MAX;
    }
    num / den
}

/// A subspace of `F_Q^n` given by its reduced echelon basis (one row per
/// basis vector), with pivot and non-pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonSubspace {
    pub basis: Matrix,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
}

impl EchelonSubspace {
    /// Reduces `v` modulo the subspace in place and returns the coordinates
    /// of the removed part (`v[pivot_j]` before reduction).
    pub fn reduce(&self, v: &mut [u32], field: &GaloisField) -> Vec<u32> {
        let coords: Vec<u32> = self.pivots.iter().map(|&p| v[p]).collect();
        for (j, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let neg = field.neg(c);
            for (slot, &b) in v.iter_mut().zip(self.basis.row(j)) {
                if b != 0 {
                    *slot = field.add(*slot, field.mul(neg, b));
                }
            }
        }
        coords
    }
}

/// Every `k`-dimensional subspace of `F_Q^n`, ordered by pivot set and then
/// by the free entries in enumeration order.
pub fn subspaces(n: usize, k: usize, order: u32) -> Vec<EchelonSubspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        // positions (row, col) that can be filled freely
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| free.iter().filter(move |&&c| c > p).map(move |&c| (r, c)))
            .collect();
        let total = (order as u64).pow(slots.len() as u32);
        for idx in 0..total {
            let mut m = Matrix::zeros(k, n);
            for (r, &p) in pivots.iter().enumerate() {
                m.set(r, p, 1);
            }
            let mut rest = idx;
            for &(r, c) in slots.iter().rev() {
                m.set(r, c, (rest % order as u64) as u32);
                rest /= order as u64;
            }
            out.push(EchelonSubspace {
                basis: m,
                pivots: pivots.clone(),
                free: free.clone(),
            });
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_nullspace_over_gf3() {
        let f = GaloisField::make(3, 1).unwrap();
        // x + y + z = 0, x + 2y = 0
        let m = Matrix::from_vec(2, 3, vec![1, 1, 1, 1, 2, 0]);
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(m.apply(v, &f).iter().all(|&x| x == 0));
        }
        assert_eq!(m.rank(&f), 2);
    }

    #[test]
    fn identity_is_invertible_and_zero_is_not() {
        let f = GaloisField::make(2, 2).unwrap();
        assert!(Matrix::identity(3).is_invertible(&f));
        assert!(!Matrix::zeros(2, 2).is_invertible(&f));
        let a = Matrix::from_vec(2, 2, vec![1, 2, 3, 1]);
        let prod = a.mul(&Matrix::identity(2), &f);
        assert_eq!(prod, a);
        if let Some(inv) = a.inverse(&f) {
            assert_eq!(a.mul(&inv, &f), Matrix::identity(2));
        } else {
            assert!(!a.is_invertible(&f));
        }
        assert!(Matrix::zeros(2, 2).inverse(&f).is_none());
    }

    #[test]
    fn nullspace_dimension_is_cols_minus_rank() {
        let f = GaloisField::make(5, 1).unwrap();
        let m = Matrix::from_vec(3, 4, vec![1, 2, 3, 4, 2, 4, 1, 3, 0, 0, 0, 0]);
        assert_eq!(m.nullspace(&f).len(), 4 - m.rank(&f));
    }
    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for (q, n) in [(2u32, 4usize), (3, 3), (4, 2)] {
            let f = GaloisField::make(
                match q { 4 => 2, x => x as u64 },
                if q == 4 { 2 } else { 1 },
            )
            .unwrap();
            for k in 0..=n {
                let subs = subspaces(n, k, q);
                assert_eq!(subs.len() as u128, gaussian_binomial(n, k, q as u64));
                // pairwise distinct row spaces: echelon forms are unique
                let mut seen: Vec<_> = subs.iter().map(|s| s.basis.clone()).collect();
                seen.sort();
                seen.dedup();
                assert_eq!(seen.len(), subs.len());
                for s in &subs {
                    let mut b = s.basis.clone();
                    assert_eq!(b.rref(&f), s.pivots);
                    assert_eq!(b, s.basis);
                }
            }
        }
        assert_eq!(gaussian_binomial(2, 1, 2), 3);
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
    }

    #[test]
    fn reduce_gives_coordinates() {
        let f = GaloisField::make(3, 1).unwrap();
        let s = &subspaces(3, 2, 3)[5];
        let mut v = vec![0u32; 3];
        for (j, &c) in [2u32, 1].iter().enumerate() {
            for (x, &b) in s.basis.row(j).iter().enumerate() {
                v[x] = f.add(v[x], f.mul(c, b));
            }
        }
        let coords = s.reduce(&mut v, &f);
        assert_eq!(coords, vec![2, 1]);
        assert!(v.iter().all(|&x| x == 0));
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{AlgebraError, Result};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntegerMatrix {
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntegerMatrix::from_big_rows(big, rows.first().map_or(0, |r| r.len()))
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntegerMatrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntegerMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = IntegerMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Entrywise canonical residues mod `m`.
    pub fn reduce_mod(&self, m: u64) -> IntegerMatrix {
        let mb = BigInt::from(m);
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mod_floor(&mb)).collect(),
        }
    }

    /// Stacks the rows of `other` below those of `self`.
    pub fn vstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.cols, "vstack column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntegerMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let t = s * q;
                self.data[dst * self.cols + j] -= t;
            }
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let t = s * q;
                self.data[i * self.cols + dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    /// Replaces rows (r, s) by (x r + y s, u r + v s).
    fn combine_rows(&mut self, r: usize, s: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for j in 0..self.cols {
            let a = self.data[r * self.cols + j].clone();
            let b = self.data[s * self.cols + j].clone();
            if a.is_zero() && b.is_zero() {
                continue;
            }
            self.data[r * self.cols + j] = x * &a + y * &b;
            self.data[s * self.cols + j] = u * &a + v * &b;
        }
    }

    /// Row Hermite normal form.
    pub fn hnf(&self) -> IntegerMatrix {
        self.hnf_with_transform().0
    }

    /// Returns `(H, U)` with `U` unimodular, `U * self = H`, and `H` in row
    /// Hermite normal form: echelon, positive pivots, entries above each
    /// pivot in `[0, pivot)`, zero rows last.
    pub fn hnf_with_transform(&self) -> (IntegerMatrix, IntegerMatrix) {
        let m = self.rows;
        let mut h = self.clone();
        let mut u = IntegerMatrix::identity(m);
        let mut row = 0;
        for col in 0..self.cols {
            if row == m {
                break;
            }
            for i in row + 1..m {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let a = h.get(row, col).clone();
                let b = h.get(i, col).clone();
                let eg = a.extended_gcd(&b);
                let (mut g, mut x, mut y) = (eg.gcd, eg.x, eg.y);
                if g.is_negative() {
                    g = -g;
                    x = -x;
                    y = -y;
                }
                let bu = -(&b / &g);
                let av = &a / &g;
                h.combine_rows(row, i, &x, &y, &bu, &av);
                u.combine_rows(row, i, &x, &y, &bu, &av);
            }
            if h.get(row, col).is_zero() {
                continue;
            }
            if h.get(row, col).is_negative() {
                h.negate_row(row);
                u.negate_row(row);
            }
            let pivot = h.get(row, col).clone();
            for i in 0..row {
                let q = h.get(i, col).div_floor(&pivot);
                h.row_axpy(i, row, &q);
                u.row_axpy(i, row, &q);
            }
            row += 1;
        }
        (h, u)
    }

    /// Pivot columns of an echelon matrix, one per nonzero row.
    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.rows)
            .filter_map(|i| self.row(i).iter().position(|x| !x.is_zero()))
            .collect()
    }

    pub fn rank(&self) -> usize {
        let h = self.hnf();
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    /// Nonzero Smith invariants `d_1 | d_2 | ...`, computed by direct
    /// row and column elimination.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut out = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = a.get(i, j);
                    if !x.is_zero()
                        && best.map_or(true, |(bi, bj)| x.abs() < a.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap_rows(t, bi);
            a.swap_cols(t, bj);
            loop {
                let p = a.get(t, t).clone();
                let mut dirty = false;
                for i in t + 1..m {
                    let q = a.get(i, t).div_floor(&p);
                    a.row_axpy(i, t, &q);
                    if !a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    let q = a.get(t, j).div_floor(&p);
                    a.col_axpy(j, t, &q);
                    if !a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder appeared; move it to the pivot slot
                    let mut best = (t, t);
                    for i in t..m {
                        let x = a.get(i, t);
                        if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                            best = (i, t);
                        }
                    }
                    for j in t..n {
                        let x = a.get(t, j);
                        if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                            best = (t, j);
                        }
                    }
                    a.swap_rows(t, best.0);
                    a.swap_cols(t, best.1);
                    continue;
                }
                // divisibility of the trailing block by the pivot
                let mut offender = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if !a.get(i, j).is_zero() && !(a.get(i, j) % &p).is_zero() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        a.row_axpy(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            out.push(a.get(t, t).abs());
            t += 1;
        }
        out
    }

    /// Rank of the reduction mod a prime `p`.
    pub fn rank_mod_p(&self, p: u64) -> usize {
        let rows = self.to_u64_rows(p);
        super::modp::row_reduce(rows, self.cols, p).1.len()
    }

    /// Basis of `{v in F_p^cols : self * v = 0}` as lifts in `[0, p)`.
    pub fn kernel_mod_p(&self, p: u64) -> Vec<Vec<u64>> {
        super::modp::kernel(self.to_u64_rows(p), self.cols, p)
    }

    pub(crate) fn to_u64_rows(&self, p: u64) -> Vec<Vec<u64>> {
        let pb = BigInt::from(p);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.mod_floor(&pb).to_u64().unwrap())
                    .collect()
            })
            .collect()
    }

    /// An integer row vector `x` with `x · A = b`, if one exists.
    pub fn solve_left(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.cols, "vector length");
        let (h, u) = self.hnf_with_transform();
        let mut rest = b.to_vec();
        let mut x = vec![BigInt::zero(); self.rows];
        for (k, &pc) in h.pivot_columns().iter().enumerate() {
            let (q, r) = rest[pc].div_rem(h.get(k, pc));
            if !r.is_zero() {
                return None;
            }
            if q.is_zero() {
                continue;
            }
            for (j, v) in h.row(k).iter().enumerate() {
                if !v.is_zero() {
                    rest[j] -= &q * v;
                }
            }
            for (t, v) in u.row(k).iter().enumerate() {
                if !v.is_zero() {
                    x[t] += &q * v;
                }
            }
        }
        if rest.iter().all(|v| v.is_zero()) {
            Some(x)
        } else {
            None
        }
    }

    /// Basis (as rows) of the integer kernel `{y : self * y = 0}`. The
    /// result is saturated.
    pub fn integer_kernel(&self) -> IntegerMatrix {
        let (h, u) = self.transpose().hnf_with_transform();
        let rows: Vec<Vec<BigInt>> = (0..h.rows)
            .filter(|&i| h.row(i).iter().all(|x| x.is_zero()))
            .map(|i| u.row_vec(i))
            .collect();
        IntegerMatrix::from_big_rows(rows, self.cols)
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_hnf(h: &IntegerMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            match h.row(i).iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last_pivot.map_or(false, |l| c <= l) {
                        return false;
                    }
                    let p = h.get(i, c);
                    if !p.is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        let x = h.get(k, c);
                        if x.is_negative() || x >= p {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn identity_and_diagonal() {
        let i = IntegerMatrix::identity(3);
        assert_eq!(i.hnf(), i);
        let d = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(d.hnf(), d);
    }

    #[test]
    fn transform_is_recorded() {
        let a = IntegerMatrix::from_rows(&[vec![4, 6, 2], vec![3, -1, 5], vec![7, 5, 7]]);
        let (h, u) = a.hnf_with_transform();
        assert!(is_hnf(&h));
        assert_eq!(u.try_mul(&a).unwrap(), h);
        // third row is the sum of the first two
        assert!(h.row(2).iter().all(|x| x.is_zero()));
        assert_eq!(u.smith_invariants(), vec![BigInt::one(); 3]);
    }

    #[test]
    fn smith_of_small_matrices() {
        let a = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(
            a.smith_invariants(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        let z = IntegerMatrix::zeros(2, 3);
        assert!(z.smith_invariants().is_empty());
    }

    #[test]
    fn kernels() {
        let a = IntegerMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = a.integer_kernel();
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            assert!(a.mul_vec(k.row(i)).iter().all(|x| x.is_zero()));
        }
        let km = IntegerMatrix::from_rows(&[vec![1, 1]]).kernel_mod_p(2);
        assert_eq!(km, vec![vec![1, 1]]);
        assert_eq!(IntegerMatrix::from_rows(&[vec![2, 4]]).rank_mod_p(2), 0);
    }
}

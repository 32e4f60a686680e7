//! Exact Gaussian elimination over `F_q`.
//!
//! The dense routines reduce column by column, taking the first row with a
//! nonzero entry as pivot, and produce the reduced row echelon form. The
//! packed routines only compute ranks and are used by the smoothness test.

use crate::field::{Field, FieldElement};

/// A dense row-major matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<FieldElement>], cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            m.data[r * cols..(r + 1) * cols].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Reduces `m` in place to reduced row echelon form; returns pivot columns.
pub fn rref(field: &Field, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, pr);
        let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
        for c in col..m.cols {
            let v = field.mul(m.get(row, c), inv);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if factor.is_zero() {
                continue;
            }
            for c in col..m.cols {
                let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(field, &mut work).len()
}

/// Rank and a kernel basis (one vector per free column, read off the RREF).
pub fn rank_kernel(field: &Field, m: &Matrix) -> (usize, Vec<Vec<FieldElement>>) {
    let mut work = m.clone();
    let pivots = rref(field, &mut work);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let kernel = (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![FieldElement::ZERO; m.cols];
            v[free] = FieldElement::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(work.get(r, free));
            }
            v
        })
        .collect();
    (pivots.len(), kernel)
}

/// Rank over `F_2` of rows packed as bit masks.
pub fn rank_gf2(rows: &mut [u128]) -> usize {
    let mut rank = 0;
    for col in 0..128 {
        let bit = 1u128 << col;
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot = rows[rank];
        for r in rows[rank + 1..].iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A bitsliced row over `F_3`: `nz` marks nonzero entries and `two` marks
/// the entries equal to 2 (always a subset of `nz`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Gf3Row {
    pub nz: u128,
    pub two: u128,
}

impl Gf3Row {
    #[inline]
    pub fn set(&mut self, col: usize, v: u8) {
        let bit = 1u128 << col;
        self.nz &= !bit;
        self.two &= !bit;
        match v % 3 {
            1 => self.nz |= bit,
            2 => {
                self.nz |= bit;
                self.two |= bit;
            }
            _ => {}
        }
    }

    #[inline]
    pub fn get(&self, col: usize) -> u8 {
        let bit = 1u128 << col;
        match (self.nz & bit != 0, self.two & bit != 0) {
            (false, _) => 0,
            (true, false) => 1,
            (true, true) => 2,
        }
    }

    #[inline]
    pub fn add(self, o: Gf3Row) -> Gf3Row {
        let both = self.nz & o.nz;
        let same = both & !(self.two ^ o.two);
        let nz = (self.nz ^ o.nz) | same;
        let two = (self.two & !o.nz) | (o.two & !self.nz) | (same & !self.two);
        Gf3Row { nz, two }
    }

    #[inline]
    pub fn neg(self) -> Gf3Row {
        Gf3Row { nz: self.nz, two: self.two ^ self.nz }
    }
}

/// Rank over `F_3` of bitsliced rows.
pub fn rank_gf3(rows: &mut [Gf3Row]) -> usize {
    let mut rank = 0;
    for col in 0..128 {
        let bit = 1u128 << col;
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r].nz & bit != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot = rows[rank];
        let neg = pivot.neg();
        let sign = pivot.two & bit;
        for r in rows[rank + 1..].iter_mut() {
            if r.nz & bit != 0 {
                *r = if r.two & bit == sign { r.add(neg) } else { r.add(pivot) };
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of a row-major matrix of raw codes, destroying it.
pub fn rank_codes(field: &Field, data: &mut [u16], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if pr != rank {
            for c in col..cols {
                data.swap(rank * cols + c, pr * cols + c);
            }
        }
        let inv = field.inv(FieldElement(data[rank * cols + col])).unwrap();
        for c in col..cols {
            data[rank * cols + c] = field.mul(FieldElement(data[rank * cols + c]), inv).0;
        }
        for r in rank + 1..rows {
            let factor = FieldElement(data[r * cols + col]);
            if factor.is_zero() {
                continue;
            }
            let nf = field.neg(factor);
            for c in col..cols {
                let pv = FieldElement(data[rank * cols + c]);
                if pv.is_zero() {
                    continue;
                }
                let cur = FieldElement(data[r * cols + c]);
                data[r * cols + c] = field.add(cur, field.mul(nf, pv)).0;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

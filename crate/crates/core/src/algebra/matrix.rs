//! Dense matrices over localized rings. Zero-sized blocks are allowed; the
//! rank-two case of the construction degenerates several blocks to empty.

use alloc::vec::Vec;
use core::fmt;

use super::loc::LocElem;
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixL {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<LocElem>,
}

impl MatrixL {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        MatrixL { rows, cols, nvars, data: (0..rows * cols).map(|_| LocElem::zero(nvars)).collect() }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.set(i, i, LocElem::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<LocElem>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for e in row {
                if e.nvars() != nvars {
                    return Err(Error::ArityMismatch { left: nvars, right: e.nvars() });
                }
                data.push(e);
            }
        }
        Ok(MatrixL { rows: r, cols: c, nvars, data })
    }

    pub fn column(entries: Vec<LocElem>, nvars: usize) -> Self {
        MatrixL { rows: entries.len(), cols: 1, nvars, data: entries }
    }

    pub fn row_vector(entries: Vec<LocElem>, nvars: usize) -> Self {
        MatrixL { rows: 1, cols: entries.len(), nvars, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &LocElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LocElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &LocElem> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> Vec<LocElem> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<LocElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<LocElem>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LocElem::is_zero)
    }

    pub fn mul(&self, other: &MatrixL) -> Result<MatrixL, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatrixL::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LocElem::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &MatrixL, f: impl Fn(&LocElem, &LocElem) -> LocElem) -> Result<MatrixL, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(MatrixL { rows: self.rows, cols: self.cols, nvars: self.nvars, data })
    }

    pub fn add(&self, other: &MatrixL) -> Result<MatrixL, Error> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &MatrixL) -> Result<MatrixL, Error> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &LocElem) -> MatrixL {
        MatrixL {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self.data.iter().map(|e| e * c).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&LocElem) -> LocElem) -> MatrixL {
        MatrixL { rows: self.rows, cols: self.cols, nvars: self.nvars, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> MatrixL {
        let mut out = MatrixL::zeros(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Removes row `t` (0-based).
    pub fn delete_row(&self, t: usize) -> MatrixL {
        let rows = (0..self.rows).filter(|&i| i != t).map(|i| self.row(i)).collect::<Vec<_>>();
        let mut m = MatrixL::from_rows(self.nvars, rows).expect("rectangular");
        if m.rows == 0 {
            m.cols = self.cols;
        }
        m
    }

    /// Removes column `t` (0-based).
    pub fn delete_col(&self, t: usize) -> MatrixL {
        self.transpose().delete_row(t).transpose()
    }

    pub fn submatrix(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> MatrixL {
        let mut out = MatrixL::zeros(rows.len(), cols.len(), self.nvars);
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &MatrixL, bottom: &MatrixL) -> Result<MatrixL, Error> {
        if top.cols != bottom.cols {
            return Err(Error::DimensionMismatch("vstack column count".into()));
        }
        let mut data = top.data.clone();
        data.extend(bottom.data.iter().cloned());
        Ok(MatrixL { rows: top.rows + bottom.rows, cols: top.cols, nvars: top.nvars, data })
    }

    pub fn hstack(left: &MatrixL, right: &MatrixL) -> Result<MatrixL, Error> {
        Ok(MatrixL::vstack(&left.transpose(), &right.transpose())?.transpose())
    }

    /// 2x2 block assembly `[[a, b], [c, d]]`.
    pub fn blocks(a: &MatrixL, b: &MatrixL, c: &MatrixL, d: &MatrixL) -> Result<MatrixL, Error> {
        let top = MatrixL::hstack(a, b)?;
        let bottom = MatrixL::hstack(c, d)?;
        MatrixL::vstack(&top, &bottom)
    }

    fn check_square(&self) -> Result<(), Error> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(alloc::format!("{}x{} is not square", self.rows, self.cols)))
        }
    }

    /// Determinant by cofactor expansion; the empty matrix has determinant 1.
    pub fn det(&self) -> Result<LocElem, Error> {
        self.check_square()?;
        Ok(self.det_unchecked())
    }

    fn det_unchecked(&self) -> LocElem {
        let n = self.rows;
        match n {
            0 => LocElem::one(self.nvars),
            1 => self.get(0, 0).clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            _ => {
                // expand along the row with the most zeros
                let best = (0..n)
                    .max_by_key(|&i| (0..n).filter(|&j| self.get(i, j).is_zero()).count())
                    .unwrap_or(0);
                let mut acc = LocElem::zero(self.nvars);
                for j in 0..n {
                    let a = self.get(best, j);
                    if a.is_zero() {
                        continue;
                    }
                    let minor = self.delete_row(best).delete_col(j).det_unchecked();
                    let term = a * &minor;
                    acc = if (best + j) % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Transposed cofactor matrix, so that `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> Result<MatrixL, Error> {
        self.check_square()?;
        let n = self.rows;
        let mut out = MatrixL::zeros(n, n, self.nvars);
        if n == 1 {
            out.set(0, 0, LocElem::one(self.nvars));
            return Ok(out);
        }
        for i in 0..n {
            for j in 0..n {
                let minor = self.delete_row(i).delete_col(j).det_unchecked();
                let c = if (i + j) % 2 == 0 { minor } else { -minor };
                out.set(j, i, c);
            }
        }
        Ok(out)
    }

    /// Inverse given the inverse of the determinant.
    pub fn inverse_with(&self, det_inv: &LocElem) -> Result<MatrixL, Error> {
        Ok(self.adjugate()?.scale(det_inv))
    }

    /// Maximal minors of an `r x (r-1)` matrix: one per deleted row.
    pub fn maximal_minors(&self) -> Vec<LocElem> {
        if self.rows != self.cols + 1 {
            return Vec::new();
        }
        (0..self.rows).map(|i| self.delete_row(i).det_unchecked()).collect()
    }
}

impl fmt::Display for MatrixL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<alloc::string::String> = self.row(i).iter().map(|e| alloc::format!("{}", e)).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;

    fn v(k: usize) -> LocElem {
        LocElem::from_poly(Poly::var(4, k))
    }

    #[test]
    fn identity_det() {
        for n in 0..4 {
            assert_eq!(MatrixL::identity(n, 4).det().unwrap(), LocElem::one(4));
        }
    }

    #[test]
    fn diagonal_det() {
        let a3 = LocElem::new(Poly::var(4, 3), [(Poly::var(4, 2), 1)]);
        let z = LocElem::zero(4);
        let m = MatrixL::from_rows(4, alloc::vec![alloc::vec![a3.clone(), z.clone()], alloc::vec![z, a3.clone()]]).unwrap();
        assert_eq!(m.det().unwrap(), &a3 * &a3);
    }

    #[test]
    fn adjugate_closed_form() {
        let m = MatrixL::from_rows(4, alloc::vec![alloc::vec![v(0), v(1)], alloc::vec![v(2), v(3)]]).unwrap();
        let adj = m.adjugate().unwrap();
        let expect = MatrixL::from_rows(4, alloc::vec![alloc::vec![v(3), -v(1)], alloc::vec![-v(2), v(0)]]).unwrap();
        assert_eq!(adj, expect);
        let prod = m.mul(&adj).unwrap();
        assert_eq!(prod, MatrixL::identity(2, 4).scale(&m.det().unwrap()));
    }

    #[test]
    fn dimension_mismatch() {
        let a = MatrixL::zeros(2, 3, 1);
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch(_))));
        assert!(matches!(a.det(), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn empty_blocks() {
        let e = MatrixL::zeros(0, 1, 2);
        let col = MatrixL::column(alloc::vec![LocElem::one(2), LocElem::zero(2)], 2);
        let stacked = MatrixL::vstack(&e, &col).unwrap();
        assert_eq!(stacked.rows(), 2);
        assert_eq!(MatrixL::identity(1, 2).delete_row(0).cols(), 1);
    }
}

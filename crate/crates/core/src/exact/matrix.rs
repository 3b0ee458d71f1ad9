use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::Int;
use crate::error::{Error, Result};

/// Dense integer matrix, row-major. Rows are read as generators of a lattice.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Int::one();
        }
        m
    }

    /// Builds a matrix from explicit rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Int>>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(IMatrix {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.cols + j]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.row_vecs()
            .into_iter()
            .map(|r| r.iter().map(|v| v.to_i64().expect("entry fits i64")).collect())
            .collect()
    }

    /// Stack `other` below `self`.
    pub fn stack(&self, other: &IMatrix) -> Result<IMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Pivot (last nonzero column, value) of each row. Meaningful on HNF output.
    pub fn pivots(&self) -> Vec<(usize, Int)> {
        (0..self.rows)
            .filter_map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .rev()
                    .find(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
            })
            .collect()
    }

    /// Pivot value per column of an HNF matrix; `None` where no row pivots.
    pub fn pivot_profile(&self) -> Vec<Option<Int>> {
        let mut out = vec![None; self.cols];
        for (c, v) in self.pivots() {
            out[c] = Some(v);
        }
        out
    }

    pub fn hnf(&self) -> IMatrix {
        hnf(self)
    }

    /// Whether `v` lies in the row lattice. `self` must be in HNF.
    pub fn hnf_contains(&self, v: &[Int]) -> bool {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut v = v.to_vec();
        let pivots = self.pivots();
        let mut by_col: Vec<Option<usize>> = vec![None; self.cols];
        for (i, (c, _)) in pivots.iter().enumerate() {
            by_col[*c] = Some(i);
        }
        for col in (0..self.cols).rev() {
            if v[col].is_zero() {
                continue;
            }
            let Some(i) = by_col[col] else {
                return false;
            };
            let p = &pivots[i].1;
            let (q, r) = v[col].div_rem(p);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in v.iter_mut().zip(self.row(i)) {
                *x -= &q * y;
            }
        }
        true
    }

    /// Whether every row of `self` lies in the row lattice of `other`.
    pub fn is_sublattice_of(&self, other: &IMatrix) -> Result<bool> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: other.cols,
                found: self.cols,
            });
        }
        let h = other.hnf();
        Ok((0..self.rows).all(|i| h.hnf_contains(self.row(i))))
    }

    /// Absolute determinant of the lattice (product of HNF pivots) when it has
    /// full rank, `None` otherwise.
    pub fn lattice_det(&self) -> Option<Int> {
        let h = self.hnf();
        if h.rows != self.cols {
            return None;
        }
        Some(h.pivots().into_iter().fold(Int::one(), |a, (_, p)| a * p))
    }

    /// Pads every row with zeros up to `cols` columns.
    pub fn extend_cols(&self, cols: usize) -> IMatrix {
        assert!(cols >= self.cols);
        let mut rows = self.row_vecs();
        for r in &mut rows {
            r.resize(cols, Int::zero());
        }
        IMatrix::from_rows(cols, rows).expect("uniform rows")
    }
}

/// Serialized as a list of rows, entries as decimal strings.
impl Serialize for IMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl fmt::Debug for IMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Canonical row-style Hermite normal form.
///
/// Each output row's pivot is its last nonzero entry; rows are sorted by pivot
/// column, pivots are positive, and the entries of later rows in a pivot's
/// column lie in `[0, pivot)`. The result is lower-triangular in the sense
/// that row `i` vanishes past its pivot. Zero rows are dropped.
pub fn hnf(m: &IMatrix) -> IMatrix {
    let cols = m.cols;
    let mut pool: Vec<Vec<Int>> = m
        .row_vecs()
        .into_iter()
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut echelon: Vec<(usize, Vec<Int>)> = Vec::new();

    for col in (0..cols).rev() {
        loop {
            let mut live: Vec<usize> = (0..pool.len())
                .filter(|&i| !pool[i][col].is_zero())
                .collect();
            if live.len() <= 1 {
                break;
            }
            live.sort_by(|&a, &b| pool[a][col].abs().cmp(&pool[b][col].abs()));
            let p = live[0];
            let prow = pool[p].clone();
            for &i in &live[1..] {
                let q = pool[i][col].div_floor(&prow[col]);
                if q.is_zero() {
                    continue;
                }
                for (x, y) in pool[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(i) = (0..pool.len()).find(|&i| !pool[i][col].is_zero()) {
            let mut row = pool.swap_remove(i);
            if row[col].is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            echelon.push((col, row));
        }
        pool.retain(|r| r.iter().any(|v| !v.is_zero()));
    }

    echelon.reverse();
    for j in 1..echelon.len() {
        for i in (0..j).rev() {
            let (c, ref prow) = echelon[i];
            let q = echelon[j].1[c].div_floor(&prow[c]);
            if q.is_zero() {
                continue;
            }
            let prow = prow.clone();
            for (x, y) in echelon[j].1.iter_mut().zip(&prow) {
                *x -= &q * y;
            }
        }
    }

    IMatrix::from_rows(cols, echelon.into_iter().map(|(_, r)| r).collect())
        .expect("rows keep their width")
}

/// True iff the two row lattices coincide.
pub fn lattice_equal(a: &IMatrix, b: &IMatrix) -> Result<bool> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            found: b.cols,
        });
    }
    Ok(hnf(a) == hnf(b))
}

/// HNF basis of `{c in Z^n : row . c = 0 (mod modulus) for every row}`.
///
/// `conditions` has one linear form per row over `n` columns. The lattice is
/// read off from the HNF of `[I_n | C^T ; 0 | modulus * I_m]`: rows whose
/// congruence block vanishes are exactly the solutions.
pub fn congruence_lattice(conditions: &IMatrix, modulus: &Int) -> IMatrix {
    let n = conditions.cols;
    let m = conditions.rows;
    let modulus = modulus.abs();
    let width = n + m;
    let mut rows = Vec::with_capacity(n + m);
    for i in 0..n {
        let mut r = vec![Int::zero(); width];
        r[i] = Int::one();
        for j in 0..m {
            r[n + j] = conditions.get(j, i).clone();
        }
        rows.push(r);
    }
    if !modulus.is_zero() {
        for j in 0..m {
            let mut r = vec![Int::zero(); width];
            r[n + j] = modulus.clone();
            rows.push(r);
        }
    }
    let big = hnf(&IMatrix::from_rows(width, rows).expect("uniform rows"));
    let kept: Vec<Vec<Int>> = (0..big.rows)
        .filter(|&i| big.row(i)[n..].iter().all(|v| v.is_zero()))
        .map(|i| big.row(i)[..n].to_vec())
        .collect();
    IMatrix::from_rows(n, kept).expect("uniform rows")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IMatrix {
        IMatrix::from_i64(cols, rows).unwrap()
    }

    #[test]
    fn already_hnf() {
        let a = m(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(hnf(&a), a);
    }

    #[test]
    fn two_by_two_example() {
        // Oracle: every small combination of the generators, to locate (1,0)
        // and (0,2) in the lattice, and the determinant -2.
        let gens = [[1i64, 2], [3, 4]];
        let mut seen = std::collections::HashSet::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                seen.insert((a * gens[0][0] + b * gens[1][0], a * gens[0][1] + b * gens[1][1]));
            }
        }
        assert!(seen.contains(&(1, 0)) && seen.contains(&(0, 2)));
        assert!(!seen.contains(&(0, 1)));
        let h = hnf(&m(2, &[&[1, 2], &[3, 4]]));
        assert_eq!(h, m(2, &[&[1, 0], &[0, 2]]));
        assert_eq!(m(2, &[&[1, 2], &[3, 4]]).lattice_det(), Some(Int::from(2)));
    }

    #[test]
    fn zero_rows_dropped() {
        let h = hnf(&m(2, &[&[0, 0]]));
        assert_eq!(h.rows(), 0);
        assert_eq!(h.cols(), 2);
    }

    #[test]
    fn lattice_equality_examples() {
        assert!(lattice_equal(&m(1, &[&[2]]), &m(1, &[&[-2]])).unwrap());
        assert!(!lattice_equal(&m(1, &[&[1]]), &m(1, &[&[2]])).unwrap());
        let a = m(2, &[&[2, 0], &[0, 2], &[1, 1]]);
        let b = m(2, &[&[1, 1], &[0, 2], &[2, 0], &[3, 3]]);
        assert!(lattice_equal(&a, &b).unwrap());
        assert!(matches!(
            lattice_equal(&m(1, &[&[1]]), &m(2, &[&[1, 0]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reduction_below_pivots() {
        let h = hnf(&m(3, &[&[4, 0, 0], &[7, 3, 0], &[5, 9, 2]]));
        let piv = h.pivots();
        for (i, (c, p)) in piv.iter().enumerate() {
            assert!(p > &Int::zero());
            for j in i + 1..h.rows() {
                let e = h.get(j, *c);
                assert!(e >= &Int::zero() && e < p);
            }
        }
    }

    #[test]
    fn congruence_lattice_mod_two() {
        // c0 + c1 = 0 (mod 2)
        let l = congruence_lattice(&m(2, &[&[1, 1]]), &Int::from(2));
        assert_eq!(l, m(2, &[&[2, 0], &[1, 1]]));
    }

    fn small_matrix() -> impl Strategy<Value = IMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..10, r * c).prop_map(move |v| {
                IMatrix::new(r, c, v.into_iter().map(Int::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn hnf_idempotent(a in small_matrix()) {
            let h = hnf(&a);
            prop_assert_eq!(hnf(&h), h);
        }

        #[test]
        fn hnf_preserves_row_lattice(a in small_matrix()) {
            let h = hnf(&a);
            for i in 0..a.rows() {
                prop_assert!(h.hnf_contains(a.row(i)));
            }
            let ha = hnf(&a);
            prop_assert!(h.is_sublattice_of(&a).unwrap());
            prop_assert_eq!(ha, h);
        }

        #[test]
        fn hnf_preserves_abs_det(v in proptest::collection::vec(-9i64..10, 9)) {
            let a = IMatrix::new(3, 3, v.iter().map(|&x| Int::from(x)).collect()).unwrap();
            let det = v[0] * (v[4] * v[8] - v[5] * v[7]) - v[1] * (v[3] * v[8] - v[5] * v[6])
                + v[2] * (v[3] * v[7] - v[4] * v[6]);
            match a.lattice_det() {
                Some(d) => prop_assert_eq!(d, Int::from(det.abs())),
                None => prop_assert_eq!(det, 0),
            }
        }
    }
}

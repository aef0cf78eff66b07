use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// A dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    /// Appends a row; used for lattice-membership queries.
    pub fn with_extra_row(&self, row: &[i64]) -> IntMatrix {
        assert_eq!(row.len(), self.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        IntMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        }
    }
}

/// Invariant factors of an integer matrix: the nonzero diagonal of the Smith
/// normal form, `factors[0] | factors[1] | ...`; `rank` is their count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snf {
    pub factors: Vec<u128>,
    pub rank: usize,
}

/// Exact Smith normal form. Entries are reduced in `i128`; if an
/// intermediate value would overflow, the whole computation restarts in
/// arbitrary precision.
pub fn smith_normal_form(m: &IntMatrix) -> Result<Snf> {
    if let Some(factors) = snf_i128(m) {
        let rank = factors.len();
        return Ok(Snf { factors, rank });
    }
    let mut out = Vec::new();
    for f in snf_bigint(m) {
        let (_, digits) = f.to_u64_digits();
        let value = match digits.as_slice() {
            [] => 0,
            [d] => u128::from(*d),
            [lo, hi] => u128::from(*lo) | (u128::from(*hi) << 64),
            _ => {
                return Err(Error::Resource {
                    what: "invariant factor magnitude".into(),
                    cap: usize::MAX,
                    reached: usize::MAX,
                })
            }
        };
        out.push(value);
    }
    let rank = out.len();
    Ok(Snf { factors: out, rank })
}

/// True iff `row` lies in the lattice spanned by the rows of `m`. Decided by
/// comparing invariant factors before and after adjoining the row: for
/// nested lattices, equal quotients force equality.
pub fn row_in_lattice(m: &IntMatrix, row: &[i64]) -> Result<bool> {
    let base = smith_normal_form(m)?;
    let extended = smith_normal_form(&m.with_extra_row(row))?;
    Ok(base == extended)
}

fn snf_i128(m: &IntMatrix) -> Option<Vec<u128>> {
    let mut a: Vec<Vec<i128>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| i128::from(m.get(i, j))).collect())
        .collect();
    let factors = reduce(&mut a, m.rows, m.cols, &I128Ops)?;
    factors.into_iter().map(|f| u128::try_from(f).ok()).collect()
}

fn snf_bigint(m: &IntMatrix) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| BigInt::from(m.get(i, j))).collect())
        .collect();
    reduce(&mut a, m.rows, m.cols, &BigOps).expect("bigint arithmetic cannot overflow")
}

/// Minimal arithmetic surface needed by the reduction, so the same routine
/// runs checked in `i128` and unchecked in `BigInt`.
trait RingOps<T> {
    fn is_zero(&self, x: &T) -> bool;
    fn abs(&self, x: &T) -> T;
    fn neg(&self, x: &T) -> T;
    fn div_floor_quotient(&self, a: &T, b: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> Option<T>;
    fn sub(&self, a: &T, b: &T) -> Option<T>;
    fn rem_is_zero(&self, a: &T, b: &T) -> bool;
    fn lt_abs(&self, a: &T, b: &T) -> bool;
}

struct I128Ops;
impl RingOps<i128> for I128Ops {
    fn is_zero(&self, x: &i128) -> bool {
        *x == 0
    }
    fn abs(&self, x: &i128) -> i128 {
        x.abs()
    }
    fn neg(&self, x: &i128) -> i128 {
        -x
    }
    fn div_floor_quotient(&self, a: &i128, b: &i128) -> i128 {
        // rounded toward zero; fine for the elimination step
        a / b
    }
    fn mul(&self, a: &i128, b: &i128) -> Option<i128> {
        a.checked_mul(*b)
    }
    fn sub(&self, a: &i128, b: &i128) -> Option<i128> {
        a.checked_sub(*b)
    }
    fn rem_is_zero(&self, a: &i128, b: &i128) -> bool {
        a % b == 0
    }
    fn lt_abs(&self, a: &i128, b: &i128) -> bool {
        a.abs() < b.abs()
    }
}

struct BigOps;
impl RingOps<BigInt> for BigOps {
    fn is_zero(&self, x: &BigInt) -> bool {
        *x == BigInt::from(0)
    }
    fn abs(&self, x: &BigInt) -> BigInt {
        if *x < BigInt::from(0) {
            -x.clone()
        } else {
            x.clone()
        }
    }
    fn neg(&self, x: &BigInt) -> BigInt {
        -x.clone()
    }
    fn div_floor_quotient(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a / b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a * b)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - b)
    }
    fn rem_is_zero(&self, a: &BigInt, b: &BigInt) -> bool {
        (a % b) == BigInt::from(0)
    }
    fn lt_abs(&self, a: &BigInt, b: &BigInt) -> bool {
        self.abs(a) < self.abs(b)
    }
}

/// Diagonalizes by repeated smallest-pivot elimination, then repairs the
/// divisibility chain. Returns the nonzero diagonal, or None on overflow.
fn reduce<T: Clone>(
    a: &mut Vec<Vec<T>>,
    rows: usize,
    cols: usize,
    ops: &impl RingOps<T>,
) -> Option<Vec<T>> {
    let mut diag: Vec<T> = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the working submatrix becomes the pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !ops.is_zero(&a[i][j])
                    && pivot.map_or(true, |(pi, pj)| ops.lt_abs(&a[i][j], &a[pi][pj]))
                {
                    pivot = Some((i, j));
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        // clear row and column t
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..rows {
                if ops.is_zero(&a[i][t]) {
                    continue;
                }
                let q = ops.div_floor_quotient(&a[i][t], &a[t][t]);
                if !ops.is_zero(&q) {
                    for j in t..cols {
                        let prod = ops.mul(&q, &a[t][j])?;
                        a[i][j] = ops.sub(&a[i][j], &prod)?;
                    }
                }
                if !ops.is_zero(&a[i][t]) {
                    // remainder smaller than pivot: swap it up and restart
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if ops.is_zero(&a[t][j]) {
                    continue;
                }
                let q = ops.div_floor_quotient(&a[t][j], &a[t][t]);
                if !ops.is_zero(&q) {
                    for i in t..rows {
                        let prod = ops.mul(&q, &a[i][t])?;
                        a[i][j] = ops.sub(&a[i][j], &prod)?;
                    }
                }
                if !ops.is_zero(&a[t][j]) {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the rest of the submatrix; if not, absorb the
            // offending row and re-eliminate
            'divcheck: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !ops.is_zero(&a[i][j]) && !ops.rem_is_zero(&a[i][j], &a[t][t]) {
                        for jj in t..cols {
                            let sum = ops.sub(&a[t][jj], &ops.neg(&a[i][jj]))?;
                            a[t][jj] = sum;
                        }
                        dirty = true;
                        break 'divcheck;
                    }
                }
            }
        }
        diag.push(ops.abs(&a[t][t]));
        t += 1;
    }
    Some(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_of(rows: Vec<Vec<i64>>) -> Vec<u128> {
        smith_normal_form(&IntMatrix::from_rows(rows)).unwrap().factors
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = IntMatrix::zeros(3, 4);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.rank, 0);
        assert!(s.factors.is_empty());
    }

    #[test]
    fn identity_matrix() {
        assert_eq!(
            snf_of(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            vec![1, 1, 1]
        );
    }

    #[test]
    fn diag_two_three_gives_one_six() {
        assert_eq!(snf_of(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn known_textbook_matrix() {
        // SNF of [[2,4,4],[-6,6,12],[10,4,16]] is diag(2,2,156)
        assert_eq!(
            snf_of(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]),
            vec![2, 2, 156]
        );
    }

    #[test]
    fn divisibility_chain_holds() {
        let s = snf_of(vec![vec![6, 0], vec![0, 4], vec![2, 2]]);
        for w in s.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn rank_of_dependent_rows() {
        let s = smith_normal_form(&IntMatrix::from_rows(vec![
            vec![1, 2, 3],
            vec![2, 4, 6],
            vec![0, 1, 1],
        ]))
        .unwrap();
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn lattice_membership() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        assert!(row_in_lattice(&m, &[2, 3]).unwrap());
        assert!(row_in_lattice(&m, &[4, 0]).unwrap());
        assert!(!row_in_lattice(&m, &[1, 0]).unwrap());
        assert!(!row_in_lattice(&m, &[0, 1]).unwrap());
    }

    #[test]
    fn big_entries_fall_back_cleanly() {
        // entries near the i64 limit force the bigint path through the
        // intermediate products
        let big = i64::MAX / 2;
        let s = smith_normal_form(&IntMatrix::from_rows(vec![
            vec![big, 1],
            vec![3, big],
        ]))
        .unwrap();
        assert_eq!(s.rank, 2);
    }
}

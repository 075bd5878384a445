//! Integer-lattice routines: Hermite form, Smith form, saturated kernels
//! and exact linear solves over Z.

use super::ExactMatrix;
use crate::scalar::{CoeffRing, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row Hermite normal form: echelon shape, positive pivots, entries above a
/// pivot reduced into [0, pivot). Unique per row lattice, so it doubles as
/// a canonical form for lattice bases. Zero rows are dropped.
pub fn hnf_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        loop {
            // pivot: first row (from r on) of minimal nonzero |entry| in col
            let mut best: Option<(usize, BigInt)> = None;
            for (i, row) in rows.iter().enumerate().skip(r) {
                let v = row[col].abs();
                if v.is_zero() {
                    continue;
                }
                match &best {
                    Some((_, b)) if *b <= v => {}
                    _ => best = Some((i, v)),
                }
            }
            let Some((pi, _)) = best else { break };
            rows.swap(r, pi);
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                if !q.is_zero() {
                    for j in 0..ncols {
                        let s = &q * &rows[r][j];
                        rows[i][j] -= s;
                    }
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            // reduce entries above the pivot into [0, pivot)
            for i in 0..r {
                let q = rows[i][col].div_floor(&rows[r][col]);
                if !q.is_zero() {
                    for j in 0..ncols {
                        let s = &q * &rows[r][j];
                        rows[i][j] -= s;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Z-basis of the right kernel of an integer matrix. Kernels of maps
/// between free Z-modules are saturated, and the HNF at the end makes the
/// basis canonical.
pub fn integer_kernel(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    assert!(matches!(m.ring(), CoeffRing::Z), "integer kernel requires ring Z");
    let (nrows, ncols) = (m.nrows(), m.ncols());
    // row-reduce [M^T | I]; rows whose M^T block vanishes carry a kernel basis
    let mt = m.transpose().to_bigint_rows();
    let mut aug: Vec<Vec<BigInt>> = Vec::with_capacity(ncols);
    for (i, row) in mt.into_iter().enumerate() {
        let mut a = row;
        a.extend((0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        aug.push(a);
    }
    let reduced = hnf_rows_full(aug, nrows);
    let mut kernel = Vec::new();
    for row in reduced {
        if row[..nrows].iter().all(Zero::is_zero) {
            kernel.push(row[nrows..].to_vec());
        }
    }
    hnf_rows(kernel)
}

/// HNF restricted to the first `lead` columns, keeping zero rows (their
/// tails carry the kernel data in `integer_kernel`).
fn hnf_rows_full(mut rows: Vec<Vec<BigInt>>, lead: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for col in 0..lead {
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for (i, row) in rows.iter().enumerate().skip(r) {
                let v = row[col].abs();
                if v.is_zero() {
                    continue;
                }
                match &best {
                    Some((_, b)) if *b <= v => {}
                    _ => best = Some((i, v)),
                }
            }
            let Some((pi, _)) = best else { break };
            rows.swap(r, pi);
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                if !q.is_zero() {
                    let pivot_row = rows[r].clone();
                    for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * p;
                    }
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            r += 1;
        }
    }
    rows
}

/// Smith normal form data: U * M * V = D with U, V unimodular and the
/// diagonal of D nonnegative in divisibility order.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n)
            .map(|i| self.d[(i, i)].as_int().expect("Z entry").clone())
            .collect()
    }
}

/// Elimination with the pivot chosen as the first minimal nonzero absolute
/// value in a row-major scan; arbitrary-precision throughout.
pub fn smith_normal_form(m: &ExactMatrix) -> SmithForm {
    assert!(matches!(m.ring(), CoeffRing::Z), "SNF requires ring Z");
    let (nrows, ncols) = (m.nrows(), m.ncols());
    let mut a = m.to_bigint_rows();
    let mut u = bigint_identity(nrows);
    let mut v = bigint_identity(ncols);

    let mut k = 0;
    while k < nrows.min(ncols) {
        let Some((pi, pj)) = find_pivot(&a, k) else { break };
        swap_rows(&mut a, k, pi);
        swap_rows(&mut u, k, pi);
        swap_cols(&mut a, k, pj);
        swap_cols(&mut v, k, pj);
        loop {
            // clear column k below and row k to the right
            let mut clean = true;
            for i in k + 1..nrows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = rounded_quotient(&a[i][k], &a[k][k]);
                row_sub(&mut a, i, k, &q);
                row_sub(&mut u, i, k, &q);
                if !a[i][k].is_zero() {
                    // remainder smaller than pivot: swap up and restart
                    swap_rows(&mut a, k, i);
                    swap_rows(&mut u, k, i);
                    clean = false;
                }
            }
            for j in k + 1..ncols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = rounded_quotient(&a[k][j], &a[k][k]);
                col_sub(&mut a, j, k, &q);
                col_sub(&mut v, j, k, &q);
                if !a[k][j].is_zero() {
                    swap_cols(&mut a, k, j);
                    swap_cols(&mut v, k, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the remaining submatrix
            let mut offender = None;
            'scan: for i in k + 1..nrows {
                for j in k + 1..ncols {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // add the offending row to the pivot row and re-clear
                    let add: Vec<BigInt> = a[i].clone();
                    for (x, y) in a[k].iter_mut().zip(&add) {
                        *x += y;
                    }
                    let addu: Vec<BigInt> = u[i].clone();
                    for (x, y) in u[k].iter_mut().zip(&addu) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -&*x;
            }
            for x in u[k].iter_mut() {
                *x = -&*x;
            }
        }
        k += 1;
    }

    SmithForm {
        u: rows_to_matrix(u),
        d: rows_to_matrix(a),
        v: rows_to_matrix(v),
    }
}

/// Solve B x = target over Z. `None` when no integral solution exists.
pub fn solve_integer(b: &ExactMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.nrows(), target.len());
    let snf = smith_normal_form(b);
    // B = U^{-1} D V^{-1}; solve D y = U t, then x = V y
    let ut: Vec<BigInt> = (0..b.nrows())
        .map(|i| {
            (0..b.nrows())
                .map(|j| snf.u[(i, j)].as_int().unwrap() * &target[j])
                .sum()
        })
        .collect();
    let mut y = vec![BigInt::zero(); b.ncols()];
    let diag = snf.diagonal();
    for (i, t) in ut.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !t.is_zero() {
                return None;
            }
        } else {
            let (q, r) = t.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let x: Vec<BigInt> = (0..b.ncols())
        .map(|i| {
            (0..b.ncols())
                .map(|j| snf.v[(i, j)].as_int().unwrap() * &y[j])
                .sum()
        })
        .collect();
    Some(x)
}

/// Inverse of a matrix with determinant +-1, computed over Q; entries are
/// integral by unimodularity.
pub fn inverse_unimodular(m: &ExactMatrix) -> ExactMatrix {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut aug = ExactMatrix::zero(CoeffRing::Q, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = CoeffRing::Q.normalize(m[(i, j)].clone());
        }
        aug[(i, n + i)] = CoeffRing::Q.one();
    }
    let (r, pivots) = aug.rref();
    assert_eq!(pivots.len(), n, "matrix is singular");
    let mut inv = ExactMatrix::zero(CoeffRing::Z, n, n);
    for i in 0..n {
        for j in 0..n {
            let q = r[(i, n + j)].to_rational();
            assert!(q.is_integer(), "inverse is not integral");
            inv[(i, j)] = Scalar::Int(q.to_integer());
        }
    }
    inv
}

fn bigint_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>) -> ExactMatrix {
    ExactMatrix::from_rows(
        CoeffRing::Z,
        rows.into_iter()
            .map(|r| r.into_iter().map(Scalar::Int).collect())
            .collect(),
    )
}

fn find_pivot(a: &[Vec<BigInt>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().skip(k) {
            if x.is_zero() {
                continue;
            }
            let v = x.abs();
            match &best {
                Some((_, _, b)) if *b <= v => {}
                _ => best = Some((i, j, v)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Quotient rounding toward the nearest integer keeps remainders at most
/// half the pivot, bounding coefficient growth.
fn rounded_quotient(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * two))
}

fn swap_rows(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn row_sub(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[source].clone();
    for (x, y) in a[target].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

fn col_sub(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let s = q * &row[source];
        row[target] -= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn integer_kernel_of_6_2() {
        let m = ExactMatrix::from_i64(CoeffRing::Z, &[&[6, 2]]);
        assert_eq!(integer_kernel(&m), vec![big(&[1, -3])]);
    }

    #[test]
    fn integer_kernel_of_identity_and_zero() {
        let id = ExactMatrix::identity(CoeffRing::Z, 2);
        assert!(integer_kernel(&id).is_empty());
        let z = ExactMatrix::zero(CoeffRing::Z, 2, 2);
        assert_eq!(integer_kernel(&z), vec![big(&[1, 0]), big(&[0, 1])]);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = ExactMatrix::from_i64(CoeffRing::Z, &[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), big(&[1, 6]));
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_single_entries() {
        for v in [5i64, 0] {
            let m = ExactMatrix::from_i64(CoeffRing::Z, &[&[v]]);
            let snf = smith_normal_form(&m);
            assert_eq!(snf.diagonal(), big(&[v]));
        }
    }

    #[test]
    fn solve_integer_roundtrip() {
        let b = ExactMatrix::from_i64(CoeffRing::Z, &[&[2, 1], &[0, 3], &[1, 0]]);
        let target = big(&[7, 9, 2]); // x = (2, 3)
        assert_eq!(solve_integer(&b, &target), Some(big(&[2, 3])));
        let no = big(&[1, 1, 1]);
        assert_eq!(solve_integer(&b, &no), None);
    }

    #[test]
    fn hnf_is_canonical() {
        let rows = vec![big(&[4, 6]), big(&[2, 2])];
        let h = hnf_rows(rows);
        assert_eq!(h, vec![big(&[2, 0]), big(&[0, 2])]);
    }
}

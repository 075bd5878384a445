use crate::scalar::{CoeffRing, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Dense matrix of exact scalars over Z, Q or F_p (row-major storage).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: CoeffRing,
    nrows: usize,
    ncols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zero(ring: CoeffRing, nrows: usize, ncols: usize) -> ExactMatrix {
        ExactMatrix {
            ring,
            nrows,
            ncols,
            data: vec![ring.zero(); nrows * ncols],
        }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zero(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: CoeffRing, rows: Vec<Vec<Scalar>>) -> ExactMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            for s in row {
                data.push(ring.normalize(s));
            }
        }
        ExactMatrix {
            ring,
            nrows,
            ncols,
            data,
        }
    }

    pub fn from_columns(ring: CoeffRing, ncols_hint: usize, cols: Vec<Vec<Scalar>>) -> ExactMatrix {
        if cols.is_empty() {
            return ExactMatrix::zero(ring, ncols_hint, 0);
        }
        let nrows = cols[0].len();
        let ncols = cols.len();
        let mut m = ExactMatrix::zero(ring, nrows, ncols);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), nrows, "ragged columns");
            for (i, s) in col.into_iter().enumerate() {
                m[(i, j)] = ring.normalize(s);
            }
        }
        m
    }

    pub fn from_i64(ring: CoeffRing, rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            ring,
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(ring, v)).collect())
                .collect(),
        )
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zero(self.ring, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn to_bigint_rows(&self) -> Vec<Vec<BigInt>> {
        assert!(matches!(self.ring, CoeffRing::Z), "integer rows require ring Z");
        (0..self.nrows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|s| s.as_int().expect("Z entry").clone())
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.ncols, other.nrows);
        assert_eq!(self.ring, other.ring);
        let mut out = ExactMatrix::zero(self.ring, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let prod = self.ring.mul(&self[(i, k)], &other[(k, j)]);
                    out[(i, j)] = self.ring.add(&out[(i, j)], &prod);
                }
            }
        }
        out
    }

    /// Reduced row echelon form (field rings only); returns the pivot
    /// columns alongside.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        assert!(self.ring.is_field(), "rref requires a field");
        let ring = self.ring;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..m.ncols {
            if r == m.nrows {
                break;
            }
            let Some(pi) = (r..m.nrows).find(|&i| !m[(i, j)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pi);
            let inv = ring.inverse(&m[(r, j)]).expect("field inverse");
            for jj in j..m.ncols {
                m[(r, jj)] = ring.mul(&m[(r, jj)], &inv);
            }
            for i in 0..m.nrows {
                if i != r && !m[(i, j)].is_zero() {
                    let factor = m[(i, j)].clone();
                    for jj in j..m.ncols {
                        let sub = ring.mul(&factor, &m[(r, jj)]);
                        m[(i, jj)] = ring.sub(&m[(i, jj)], &sub);
                    }
                }
            }
            pivots.push(j);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        match self.ring {
            CoeffRing::Z => self.to_ring(CoeffRing::Q).rref().1.len(),
            _ => self.rref().1.len(),
        }
    }

    pub fn to_ring(&self, ring: CoeffRing) -> ExactMatrix {
        let mut out = ExactMatrix::zero(ring, self.nrows, self.ncols);
        for (i, s) in self.data.iter().enumerate() {
            out.data[i] = ring.normalize(s.clone());
        }
        out
    }

    /// Echelon-form basis of the right kernel over a field. Over Q each
    /// vector is scaled integral-primitive with positive first nonzero
    /// entry; over F_p the free coordinate carries a 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let ring = self.ring;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; self.ncols];
        for (pi, &pj) in pivots.iter().enumerate() {
            pivot_of_col[pj] = Some(pi);
        }
        for j in 0..self.ncols {
            if pivot_of_col[j].is_some() {
                continue;
            }
            let mut v = vec![ring.zero(); self.ncols];
            v[j] = ring.one();
            for (pi, &pj) in pivots.iter().enumerate() {
                v[pj] = ring.neg(&r[(pi, j)]);
            }
            if matches!(ring, CoeffRing::Q) {
                v = canonicalize_rational_vector(v);
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.ncols + j]
    }
}

/// Clear denominators, divide by the content and make the first nonzero
/// entry positive.
pub fn canonicalize_rational_vector(v: Vec<Scalar>) -> Vec<Scalar> {
    let mut lcm = BigInt::from(1);
    for s in &v {
        let r = s.to_rational();
        lcm = lcm.lcm(r.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|s| (s.to_rational() * BigInt::from(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if !gcd.is_zero() {
        for x in &mut ints {
            *x = &*x / &gcd;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -&*x;
            }
        }
    }
    ints.into_iter()
        .map(|x| Scalar::Rat(num_rational::BigRational::from(x)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_unit_is_empty() {
        let m = ExactMatrix::from_i64(CoeffRing::Q, &[&[3]]);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_three_mod_three() {
        let m = ExactMatrix::from_i64(CoeffRing::Fp(3), &[&[3]]);
        let basis = m.kernel_basis();
        assert_eq!(basis, vec![vec![Scalar::from_i64(CoeffRing::Fp(3), 1)]]);
    }

    #[test]
    fn kernel_of_6_2_over_q() {
        let m = ExactMatrix::from_i64(CoeffRing::Q, &[&[6, 2]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        let ints: Vec<String> = basis[0].iter().map(|s| s.to_string()).collect();
        assert_eq!(ints, vec!["1", "-3"]);
    }

    #[test]
    fn rank_plus_nullity() {
        let m = ExactMatrix::from_i64(CoeffRing::Q, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank() + m.kernel_basis().len(), m.ncols());
        assert_eq!(m.rank(), 1);
    }
}

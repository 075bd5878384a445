use super::{GeneratorTable, Parity};
use std::cmp::Ordering;

/// Exponent vector indexed by a [`GeneratorTable`]; exponents of odd
/// generators are restricted to {0, 1}. The cohomological degree is
/// computed from the table at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    pub fn new(table: &GeneratorTable, exps: Vec<u16>) -> Monomial {
        assert_eq!(exps.len(), table.len(), "exponent vector length mismatch");
        let mut degree = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            let g = table.gen(i);
            if matches!(g.parity, Parity::Odd) {
                assert!(e <= 1, "odd generator {} with exponent {e}", g.name);
            }
            degree += g.degree * e as u32;
        }
        Monomial { exps, degree }
    }

    pub fn one(table: &GeneratorTable) -> Monomial {
        Monomial {
            exps: vec![0; table.len()],
            degree: 0,
        }
    }

    pub fn generator(table: &GeneratorTable, idx: usize) -> Monomial {
        let mut exps = vec![0; table.len()];
        exps[idx] = 1;
        Monomial::new(table, exps)
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Product of two monomials over the same table. Returns `None` when an
    /// odd generator occurs in both factors (the product is zero); otherwise
    /// the normal-form monomial together with the Koszul sign picked up by
    /// sorting the odd factors into table order.
    pub fn mul(&self, other: &Monomial, table: &GeneratorTable) -> Option<(Monomial, i8)> {
        let n = self.exps.len();
        let mut exps = Vec::with_capacity(n);
        // number of pairs (i in self, j in other) of odd generators with i > j
        let mut inversions = 0u64;
        let mut odd_left_above = 0u64; // odd gens of self at index > current
        for i in 0..n {
            if matches!(table.gen(i).parity, Parity::Odd) && self.exps[i] == 1 {
                odd_left_above += 1;
            }
        }
        for j in 0..n {
            let odd = matches!(table.gen(j).parity, Parity::Odd);
            if odd && self.exps[j] == 1 {
                odd_left_above -= 1;
            }
            if odd && other.exps[j] == 1 {
                if self.exps[j] == 1 {
                    return None;
                }
                inversions += odd_left_above;
            }
            exps.push(self.exps[j] + other.exps[j]);
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((
            Monomial {
                exps,
                degree: self.degree + other.degree,
            },
            sign,
        ))
    }

    /// Divide out one power of generator `i`; caller guarantees exp > 0.
    pub fn divide_gen(&self, table: &GeneratorTable, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        assert!(exps[i] > 0);
        exps[i] -= 1;
        Monomial {
            exps,
            degree: self.degree - table.gen(i).degree,
        }
    }
}

/// Graded-lexicographic order: compare total cohomological degree first,
/// then exponent vectors lexicographically (earlier generator more
/// significant, larger exponent greater).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Parity::*;

    #[test]
    fn odd_square_is_zero() {
        let t = GeneratorTable::new(vec![("a", 1, Odd), ("b", 1, Odd)]);
        let a = Monomial::generator(&t, 0);
        assert!(a.mul(&a, &t).is_none());
    }

    #[test]
    fn koszul_sign_on_transposition() {
        let t = GeneratorTable::new(vec![("a", 1, Odd), ("b", 1, Odd)]);
        let a = Monomial::generator(&t, 0);
        let b = Monomial::generator(&t, 1);
        let (ab, s1) = a.mul(&b, &t).unwrap();
        let (ba, s2) = b.mul(&a, &t).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(s1, 1);
        assert_eq!(s2, -1);
    }

    #[test]
    fn graded_lex_order() {
        let t = GeneratorTable::new(vec![("s1", 2, Even), ("s2", 4, Even)]);
        let s1sq = Monomial::new(&t, vec![2, 0]);
        let s2 = Monomial::new(&t, vec![0, 1]);
        // same degree 4; s1^2 is lex-greater
        assert!(s1sq > s2);
        let s1 = Monomial::new(&t, vec![1, 0]);
        assert!(s1 < s2);
    }
}

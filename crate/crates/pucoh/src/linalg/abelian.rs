use super::{integer_kernel, smith_normal_form, ExactMatrix};
use crate::scalar::{CoeffRing, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Isomorphism type of a finitely generated abelian group in canonical
/// form: free rank plus invariant factors >= 2 in a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupType {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl AbelianGroupType {
    pub fn free(rank: usize) -> AbelianGroupType {
        AbelianGroupType {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

impl fmt::Display for AbelianGroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Isomorphism type of (L + T)/T inside Z^n / T, where T is the column
/// span of `relations` and L is spanned by `generators`.
///
/// The subgroup is the image of Z^k -> Z^n/T sending e_i to the i-th
/// generator; its kernel is the projection of the integer kernel of the
/// stacked matrix [G | R], and the quotient type falls out of one SNF.
pub fn subquotient_invariants(relations: &ExactMatrix, generators: &[Vec<BigInt>]) -> AbelianGroupType {
    let n = relations.nrows();
    let k = generators.len();
    if k == 0 {
        return AbelianGroupType::free(0);
    }
    for g in generators {
        assert_eq!(g.len(), n, "generator length mismatch");
    }
    let m = relations.ncols();
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(k + m);
    for g in generators {
        cols.push(g.iter().cloned().map(Scalar::Int).collect());
    }
    for j in 0..m {
        cols.push((0..n).map(|i| relations[(i, j)].clone()).collect());
    }
    let stacked = ExactMatrix::from_columns(CoeffRing::Z, n, cols);
    let kernel = integer_kernel(&stacked);
    // relation lattice for Z^k / N, N = projections of kernel vectors
    let proj: Vec<Vec<Scalar>> = kernel
        .iter()
        .map(|v| v[..k].iter().cloned().map(Scalar::Int).collect())
        .collect();
    let nmat = ExactMatrix::from_columns(CoeffRing::Z, k, proj);
    quotient_type(k, &nmat)
}

/// Type of Z^rank / (column span of `relations`).
pub fn quotient_type(rank: usize, relations: &ExactMatrix) -> AbelianGroupType {
    if relations.ncols() == 0 {
        return AbelianGroupType::free(rank);
    }
    assert_eq!(relations.nrows(), rank);
    let snf = smith_normal_form(relations);
    let mut invariant_factors = Vec::new();
    let mut nonzero = 0;
    for d in snf.diagonal() {
        if d.is_zero() {
            continue;
        }
        nonzero += 1;
        if !d.is_one() {
            invariant_factors.push(d);
        }
    }
    AbelianGroupType {
        free_rank: rank - nonzero,
        invariant_factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn multiple_of_z_is_free() {
        // ambient Z, no relations, generator (3): 3Z = Z
        let rel = ExactMatrix::zero(CoeffRing::Z, 1, 0);
        let t = subquotient_invariants(&rel, &[big(&[3])]);
        assert_eq!(t, AbelianGroupType::free(1));
    }

    #[test]
    fn generator_of_z_mod_3() {
        let rel = ExactMatrix::from_i64(CoeffRing::Z, &[&[3]]);
        let t = subquotient_invariants(&rel, &[big(&[1])]);
        assert_eq!(t.free_rank, 0);
        assert_eq!(t.invariant_factors, big(&[3]));
        assert_eq!(t.to_string(), "Z/3");
    }

    #[test]
    fn z_plus_z_mod_3() {
        // ambient Z + Z/3 with both unit vectors as generators
        let rel = ExactMatrix::from_i64(CoeffRing::Z, &[&[0], &[3]]);
        let t = subquotient_invariants(&rel, &[big(&[1, 0]), big(&[0, 1])]);
        assert_eq!(t.free_rank, 1);
        assert_eq!(t.invariant_factors, big(&[3]));
        assert_eq!(t.to_string(), "Z+Z/3");
    }

    #[test]
    fn invariance_under_generator_moves() {
        let rel = ExactMatrix::from_i64(CoeffRing::Z, &[&[4, 0], &[0, 6]]);
        let gens = vec![big(&[2, 0]), big(&[0, 3])];
        let base = subquotient_invariants(&rel, &gens);
        // permute
        let permuted = subquotient_invariants(&rel, &[gens[1].clone(), gens[0].clone()]);
        assert_eq!(base, permuted);
        // add a Z-combination of one generator to another
        let mixed = vec![big(&[2, 0]), big(&[2 * 5, 3])];
        assert_eq!(base, subquotient_invariants(&rel, &mixed));
    }
}

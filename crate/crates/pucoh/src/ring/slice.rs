use super::{GeneratorTable, Monomial, Parity, Polynomial};
use crate::scalar::{CoeffRing, Scalar};
use std::collections::HashMap;
use std::sync::Arc;

/// Ordered monomial basis of one cohomological degree, with conversion
/// between polynomials and coordinate vectors. Monomials are listed in
/// ascending graded-lex order, which fixes the column convention of every
/// matrix built from a slice.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    table: Arc<GeneratorTable>,
    ring: CoeffRing,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeSlice {
    pub fn enumerate(table: &Arc<GeneratorTable>, ring: CoeffRing, degree: u32) -> DegreeSlice {
        let mut monomials = Vec::new();
        let mut exps = vec![0u16; table.len()];
        collect(table, 0, degree, &mut exps, &mut monomials);
        monomials.sort();
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        DegreeSlice {
            table: table.clone(),
            ring,
            degree,
            monomials,
            index,
        }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial_poly(&self, i: usize) -> Polynomial {
        Polynomial::from_terms(&self.table, self.ring, [(self.monomials[i].clone(), self.ring.one())])
    }

    /// Coordinates of a polynomial supported in this degree.
    pub fn coords(&self, p: &Polynomial) -> Vec<Scalar> {
        let mut v = vec![self.ring.zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            let i = *self
                .index
                .get(m)
                .unwrap_or_else(|| panic!("monomial of degree {} outside slice {}", m.degree(), self.degree));
            v[i] = self.ring.normalize(c.clone());
        }
        v
    }

    pub fn poly(&self, coords: &[Scalar]) -> Polynomial {
        assert_eq!(coords.len(), self.monomials.len());
        Polynomial::from_terms(
            &self.table,
            self.ring,
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| (self.monomials[i].clone(), c.clone())),
        )
    }
}

fn collect(table: &GeneratorTable, i: usize, remaining: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
    if i == table.len() {
        if remaining == 0 {
            out.push(Monomial::new(table, exps.clone()));
        }
        return;
    }
    let g = table.gen(i);
    let max = if g.degree == 0 {
        0
    } else {
        match g.parity {
            Parity::Odd => u16::from(remaining >= g.degree),
            Parity::Even => (remaining / g.degree) as u16,
        }
    };
    for e in 0..=max {
        exps[i] = e;
        collect(table, i + 1, remaining - g.degree * e as u32, exps, out);
    }
    exps[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Parity::*;

    #[test]
    fn sigma_weight_slices() {
        let t = GeneratorTable::new(vec![("s1", 2, Even), ("s2", 4, Even), ("s3", 6, Even)]);
        // degree 12 = weight 6: s1^6, s1^4 s2, s1^2 s2^2, s2^3, s1^3 s3,
        // s1 s2 s3, s3^2
        let s = DegreeSlice::enumerate(&t, CoeffRing::Z, 12);
        assert_eq!(s.dim(), 7);
        // ascending order, round trip through coords
        let p = s.monomial_poly(3);
        assert_eq!(s.poly(&s.coords(&p)), p);
    }

    #[test]
    fn odd_generators_enumerate_once() {
        let t = GeneratorTable::new(vec![("xi", 2, Even), ("a", 1, Odd), ("b", 1, Odd)]);
        // degree 2: xi, ab
        let s = DegreeSlice::enumerate(&t, CoeffRing::Fp(3), 2);
        assert_eq!(s.dim(), 2);
        // degree 3: xi*a, xi*b
        let s3 = DegreeSlice::enumerate(&t, CoeffRing::Fp(3), 3);
        assert_eq!(s3.dim(), 2);
    }
}

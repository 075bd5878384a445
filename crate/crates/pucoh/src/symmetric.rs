//! Symmetric-polynomial toolkit: the elementary symmetric basis, conversion
//! between t-variables and sigma-variables, the derivation nabla in both
//! bases, and the discriminant delta.
//!
//! Degrees are cohomological throughout: t_i has degree 2 and sigma_i
//! degree 2i, so delta = prod_{i != j} (t_i - t_j) is homogeneous of degree
//! 2(n^2 - n).

use crate::error::{Error, Result};
use crate::ring::{Derivation, GeneratorTable, Monomial, Parity, Polynomial, Substitution};
use crate::scalar::{CoeffRing, Scalar};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Fixed alphabet for one number of variables: t_1..t_n (degree 2) and
/// s_1..s_n (degree 2i). Owns a memo of sigma-monomial expansions because
/// basis conversion hits the same products over and over.
pub struct SigmaContext {
    n: usize,
    t_table: Arc<GeneratorTable>,
    sigma_table: Arc<GeneratorTable>,
    expansions: Mutex<HashMap<Vec<u16>, Polynomial>>,
    delta_memo: Mutex<Option<Polynomial>>,
}

impl SigmaContext {
    pub fn new(n: usize) -> SigmaContext {
        assert!(n >= 1, "need at least one variable");
        let t_names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let s_names: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
        let t_table = GeneratorTable::new(t_names.iter().map(|s| (s.as_str(), 2, Parity::Even)).collect());
        let sigma_table = GeneratorTable::new(
            s_names
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_str(), 2 * (i as u32 + 1), Parity::Even))
                .collect(),
        );
        SigmaContext {
            n,
            t_table,
            sigma_table,
            expansions: Mutex::new(HashMap::new()),
            delta_memo: Mutex::new(None),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_table(&self) -> &Arc<GeneratorTable> {
        &self.t_table
    }

    pub fn sigma_table(&self) -> &Arc<GeneratorTable> {
        &self.sigma_table
    }

    /// The k-th elementary symmetric polynomial in the t-variables;
    /// sigma_0 = 1.
    pub fn elementary_symmetric(&self, k: usize) -> Result<Polynomial> {
        if k > self.n {
            return Err(Error::OutOfRange(format!("k = {k} exceeds n = {}", self.n)));
        }
        let ring = CoeffRing::Z;
        let mut p = Polynomial::zero(&self.t_table, ring);
        let mut stack = vec![0u16; self.n];
        squarefree_monomials(self.n, k, 0, &mut stack, &mut |exps| {
            p.add_term(Monomial::new(&self.t_table, exps.to_vec()), ring.one());
        });
        Ok(p)
    }

    /// Is f invariant under the transposition (1 2) and the cycle
    /// (1 2 ... n)? Those two generate the symmetric group.
    pub fn is_symmetric(&self, f: &Polynomial) -> bool {
        if self.n == 1 {
            return true;
        }
        let ring = f.ring();
        let mut transposition = Substitution::endo(&self.t_table, ring);
        let mut cycle = Substitution::endo(&self.t_table, ring);
        for i in 0..self.n {
            let swap = match i {
                0 => 1,
                1 => 0,
                _ => i,
            };
            transposition.set(i, Polynomial::generator(&self.t_table, ring, swap));
            cycle.set(i, Polynomial::generator(&self.t_table, ring, (i + 1) % self.n));
        }
        let ft = f.substitute(&transposition).expect("permutation substitution");
        let fc = f.substitute(&cycle).expect("permutation substitution");
        ft == *f && fc == *f
    }

    /// Expansion of a sigma-monomial (given by its exponent vector) into
    /// t-variables, memoized.
    fn expand_sigma_monomial(&self, exps: &[u16], ring: CoeffRing) -> Polynomial {
        let cached = {
            let memo = self.expansions.lock().unwrap();
            memo.get(exps).cloned()
        };
        let base = match cached {
            Some(p) => p,
            None => {
                let p = match exps.iter().rposition(|&e| e > 0) {
                    None => Polynomial::one(&self.t_table, CoeffRing::Z),
                    Some(i) => {
                        let mut smaller = exps.to_vec();
                        smaller[i] -= 1;
                        let rest = self.expand_sigma_monomial(&smaller, CoeffRing::Z);
                        rest.mul(&self.elementary_symmetric(i + 1).unwrap()).unwrap()
                    }
                };
                self.expansions.lock().unwrap().insert(exps.to_vec(), p.clone());
                p
            }
        };
        base.to_ring(ring)
    }

    /// Express a symmetric polynomial in the elementary symmetric basis by
    /// repeated leading-term subtraction.
    pub fn t_to_sigma(&self, f: &Polynomial) -> Result<Polynomial> {
        if !self.is_symmetric(f) {
            return Err(Error::NotSymmetric);
        }
        let ring = f.ring();
        let mut result = Polynomial::zero(&self.sigma_table, ring);
        let mut rem = f.clone();
        while let Some(lead) = rem.leading_monomial().cloned() {
            let lambda = lead.exps();
            debug_assert!(
                lambda.windows(2).all(|w| w[0] >= w[1]),
                "leading monomial of a symmetric polynomial must be weakly decreasing"
            );
            let mut sigma_exps = vec![0u16; self.n];
            for i in 0..self.n {
                let next = if i + 1 < self.n { lambda[i + 1] } else { 0 };
                sigma_exps[i] = lambda[i] - next;
            }
            let c = rem.coeff(&lead);
            result.add_term(Monomial::new(&self.sigma_table, sigma_exps.clone()), c.clone());
            let expansion = self.expand_sigma_monomial(&sigma_exps, ring);
            rem = rem.sub(&expansion.scale(&c))?;
        }
        Ok(result)
    }

    /// Substitute each sigma_i by its expansion in t-variables.
    pub fn sigma_to_t(&self, g: &Polynomial) -> Polynomial {
        let ring = g.ring();
        let mut out = Polynomial::zero(&self.t_table, ring);
        for (m, c) in g.terms() {
            let expansion = self.expand_sigma_monomial(m.exps(), ring);
            out = out.add(&expansion.scale(c)).unwrap();
        }
        out
    }

    /// The derivation sum of d/dt_i on t-polynomials.
    pub fn nabla_t(&self, f: &Polynomial) -> Polynomial {
        let ring = f.ring();
        let mut d = Derivation::new(&self.t_table, false);
        for i in 0..self.n {
            d.set(i, Polynomial::one(&self.t_table, ring));
        }
        f.apply_derivation(&d).expect("same table")
    }

    /// The same derivation in the sigma basis: sigma_k -> (n-k+1) sigma_{k-1}.
    pub fn nabla_sigma(&self, f: &Polynomial) -> Polynomial {
        let ring = f.ring();
        let mut d = Derivation::new(&self.sigma_table, false);
        for k in 1..=self.n {
            let coeff = Scalar::from_i64(ring, (self.n - k + 1) as i64);
            let image = if k == 1 {
                Polynomial::constant(&self.sigma_table, ring, coeff)
            } else {
                Polynomial::generator(&self.sigma_table, ring, k - 2).scale(&coeff)
            };
            d.set(k - 1, image);
        }
        f.apply_derivation(&d).expect("same table")
    }

    /// The discriminant prod_{i != j} (t_i - t_j) expressed in the sigma
    /// basis; computed once per context and cached (it is the most
    /// expensive single polynomial at n = 5).
    pub fn delta_sigma(&self) -> Polynomial {
        if let Some(p) = self.delta_memo.lock().unwrap().clone() {
            return p;
        }
        let p = self.t_to_sigma(&self.delta_t()).expect("delta is symmetric");
        *self.delta_memo.lock().unwrap() = Some(p.clone());
        p
    }

    /// Seed the delta memo from a cache (callers must pass the genuine
    /// delta; debug builds verify).
    pub fn set_delta_sigma(&self, p: Polynomial) {
        debug_assert_eq!(p.homogeneous_degree(), Some(2 * (self.n * self.n - self.n) as u32));
        *self.delta_memo.lock().unwrap() = Some(p);
    }

    /// prod_{i != j} (t_i - t_j) = (-1)^{n(n-1)/2} * Vandermonde^2.
    pub fn delta_t(&self) -> Polynomial {
        let ring = CoeffRing::Z;
        let mut vandermonde = Polynomial::one(&self.t_table, ring);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let ti = Polynomial::generator(&self.t_table, ring, i);
                let tj = Polynomial::generator(&self.t_table, ring, j);
                vandermonde = vandermonde.mul(&ti.sub(&tj).unwrap()).unwrap();
            }
        }
        let mut delta = vandermonde.mul(&vandermonde).unwrap();
        if (self.n * (self.n - 1) / 2) % 2 == 1 {
            delta = delta.neg();
        }
        delta
    }
}

fn squarefree_monomials(n: usize, k: usize, start: usize, stack: &mut Vec<u16>, emit: &mut impl FnMut(&[u16])) {
    if k == 0 {
        emit(stack);
        return;
    }
    if start + k > n {
        return;
    }
    for i in start..=(n - k) {
        stack[i] = 1;
        squarefree_monomials(n, k - 1, i + 1, stack, emit);
        stack[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_t(ctx: &SigmaContext, s: &str) -> Polynomial {
        crate::ring::parse(ctx.t_table(), CoeffRing::Z, s).unwrap()
    }

    fn parse_sigma(ctx: &SigmaContext, s: &str) -> Polynomial {
        crate::ring::parse(ctx.sigma_table(), CoeffRing::Z, s).unwrap()
    }

    #[test]
    fn elementary_symmetric_basics() {
        let ctx = SigmaContext::new(3);
        assert_eq!(ctx.elementary_symmetric(0).unwrap().to_string(), "1");
        assert_eq!(
            ctx.elementary_symmetric(2).unwrap(),
            parse_t(&ctx, "1*t1*t2 + 1*t1*t3 + 1*t2*t3")
        );
        let ctx2 = SigmaContext::new(2);
        assert_eq!(ctx2.elementary_symmetric(2).unwrap(), {
            let t = ctx2.t_table();
            Polynomial::from_terms(t, CoeffRing::Z, [(Monomial::new(t, vec![1, 1]), CoeffRing::Z.one())])
        });
        assert!(ctx.elementary_symmetric(4).is_err());
    }

    #[test]
    fn t_to_sigma_on_elementary() {
        let ctx = SigmaContext::new(3);
        let e2 = ctx.elementary_symmetric(2).unwrap();
        assert_eq!(ctx.t_to_sigma(&e2).unwrap(), parse_sigma(&ctx, "1*s2"));
    }

    #[test]
    fn t_to_sigma_power_sums() {
        let ctx = SigmaContext::new(3);
        // t1^2 + t2^2 + t3^2 = s1^2 - 2 s2
        let p2 = parse_t(&ctx, "1*t1^2 + 1*t2^2 + 1*t3^2");
        assert_eq!(ctx.t_to_sigma(&p2).unwrap(), parse_sigma(&ctx, "1*s1^2 + -2*s2"));
        // t1^3 + t2^3 + t3^3 = s1^3 - 3 s1 s2 + 3 s3
        let p3 = parse_t(&ctx, "1*t1^3 + 1*t2^3 + 1*t3^3");
        assert_eq!(
            ctx.t_to_sigma(&p3).unwrap(),
            parse_sigma(&ctx, "1*s1^3 + -3*s1*s2 + 3*s3")
        );
    }

    #[test]
    fn t_to_sigma_rejects_nonsymmetric() {
        let ctx = SigmaContext::new(3);
        let f = parse_t(&ctx, "1*t1");
        assert!(matches!(ctx.t_to_sigma(&f), Err(Error::NotSymmetric)));
    }

    #[test]
    fn sigma_roundtrip() {
        let ctx = SigmaContext::new(3);
        let g = parse_sigma(&ctx, "2*s1^2*s3 + -5*s2^3 + 7*s3");
        let back = ctx.t_to_sigma(&ctx.sigma_to_t(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn nabla_sigma_values() {
        let ctx = SigmaContext::new(3);
        let s2 = parse_sigma(&ctx, "1*s2");
        assert_eq!(ctx.nabla_sigma(&s2), parse_sigma(&ctx, "2*s1"));
        let one = Polynomial::one(ctx.sigma_table(), CoeffRing::Z);
        assert!(ctx.nabla_sigma(&one).is_zero());
        // gamma_3 = 27 s3 - 9 s1 s2 + 2 s1^3 is killed
        let gamma3 = parse_sigma(&ctx, "2*s1^3 + -9*s1*s2 + 27*s3");
        assert!(ctx.nabla_sigma(&gamma3).is_zero());
    }

    #[test]
    fn nabla_commutes_with_basis_conversion() {
        let ctx = SigmaContext::new(3);
        let g = parse_sigma(&ctx, "1*s1*s2 + 4*s3 + -2*s1^3");
        let lhs = ctx.nabla_sigma(&g);
        let rhs = ctx.t_to_sigma(&ctx.nabla_t(&ctx.sigma_to_t(&g))).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_n2() {
        let ctx = SigmaContext::new(2);
        assert_eq!(ctx.delta_sigma(), parse_sigma(&ctx, "-1*s1^2 + 4*s2"));
    }

    #[test]
    fn delta_n3_matches_classical_formula() {
        let ctx = SigmaContext::new(3);
        let expect = parse_sigma(&ctx, "4*s1^3*s3 + -1*s1^2*s2^2 + -18*s1*s2*s3 + 4*s2^3 + 27*s3^2");
        assert_eq!(ctx.delta_sigma(), expect);
        // mod 3 reduction
        let mod3 = ctx.delta_sigma().to_ring(CoeffRing::Fp(3));
        let expect3 = expect.to_ring(CoeffRing::Fp(3));
        assert_eq!(mod3, expect3);
        assert_eq!(mod3.num_terms(), 3);
    }

    #[test]
    fn delta_in_kernel_and_degree() {
        for n in 2..=4 {
            let ctx = SigmaContext::new(n);
            let delta = ctx.delta_sigma();
            assert_eq!(delta.homogeneous_degree(), Some(2 * (n * n - n) as u32));
            assert!(ctx.nabla_sigma(&delta).is_zero());
        }
    }
}

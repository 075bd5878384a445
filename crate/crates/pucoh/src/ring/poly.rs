use super::{check_same_table, GeneratorTable, Monomial, Parity};
use crate::error::{Error, Result};
use crate::scalar::{CoeffRing, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Sparse polynomial in a graded-commutative algebra. Zero coefficients are
/// never stored; F_p coefficients are canonical representatives in [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    table: Arc<GeneratorTable>,
    ring: CoeffRing,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(table: &Arc<GeneratorTable>, ring: CoeffRing) -> Polynomial {
        Polynomial {
            table: table.clone(),
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<GeneratorTable>, ring: CoeffRing, c: Scalar) -> Polynomial {
        let mut p = Polynomial::zero(table, ring);
        p.add_term(Monomial::one(table), c);
        p
    }

    pub fn one(table: &Arc<GeneratorTable>, ring: CoeffRing) -> Polynomial {
        Polynomial::constant(table, ring, ring.one())
    }

    pub fn generator(table: &Arc<GeneratorTable>, ring: CoeffRing, idx: usize) -> Polynomial {
        let mut p = Polynomial::zero(table, ring);
        p.add_term(Monomial::generator(table, idx), ring.one());
        p
    }

    pub fn generator_by_name(table: &Arc<GeneratorTable>, ring: CoeffRing, name: &str) -> Polynomial {
        let idx = table
            .index_of(name)
            .unwrap_or_else(|| panic!("no generator named {name}"));
        Polynomial::generator(table, ring, idx)
    }

    pub fn from_terms(
        table: &Arc<GeneratorTable>,
        ring: CoeffRing,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(table, ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// Accumulate `c * m` into the term map, dropping the entry if the
    /// coefficient cancels to zero.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        let c = self.ring.normalize(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.ring.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Polynomial::zero(&self.table, self.ring);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let c = self.ring.normalize(c.clone());
        let mut out = Polynomial::zero(&self.table, self.ring);
        if c.is_zero() {
            return out;
        }
        for (m, k) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(k, &c));
        }
        out
    }

    /// Graded-commutative product. Odd generators anticommute and square to
    /// zero; the Koszul sign of each monomial product is folded into the
    /// coefficient.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = Polynomial::zero(&self.table, self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb, &self.table) {
                    let mut c = self.ring.mul(ca, cb);
                    if sign < 0 {
                        c = self.ring.neg(&c);
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut out = Polynomial::one(&self.table, self.ring);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `None` for the zero polynomial or an inhomogeneous one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|m| m.degree() == d).then_some(d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// The slice of `self` in one cohomological degree.
    pub fn homogeneous_part(&self, degree: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.table, self.ring);
        for (m, c) in &self.terms {
            if m.degree() == degree {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Convert coefficients into another ring (mod-p reduction, Z -> Q, ...).
    pub fn to_ring(&self, ring: CoeffRing) -> Polynomial {
        let mut out = Polynomial::zero(&self.table, ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Re-express this polynomial in a table that contains every generator
    /// of the current one under the same name.
    pub fn into_table(&self, table: &Arc<GeneratorTable>) -> Polynomial {
        let map: Vec<usize> = self
            .table
            .gens()
            .iter()
            .map(|g| {
                table
                    .index_of(&g.name)
                    .unwrap_or_else(|| panic!("target table lacks generator {}", g.name))
            })
            .collect();
        let mut out = Polynomial::zero(table, self.ring);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; table.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[map[i]] = e;
            }
            out.add_term(Monomial::new(table, exps), c.clone());
        }
        out
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        check_same_table(&self.table, &other.table)?;
        if self.ring != other.ring {
            return Err(Error::TableMismatch {
                left: self.ring.name(),
                right: other.ring.name(),
            });
        }
        Ok(())
    }

    /// Ring-homomorphism extension of generator images. Every generator
    /// appearing in `self` must have an image, homogeneous of the same
    /// degree and parity (the zero polynomial is allowed everywhere).
    pub fn substitute(&self, sub: &Substitution) -> Result<Polynomial> {
        for (i, g) in self.table.gens().iter().enumerate() {
            if self.terms.keys().all(|m| m.exp(i) == 0) {
                continue;
            }
            let img = sub.images[i].as_ref().ok_or_else(|| {
                Error::Substitution(format!("no image for generator {}", g.name))
            })?;
            if !img.is_zero() {
                match img.homogeneous_degree() {
                    Some(d) if d == g.degree => {}
                    _ => {
                        return Err(Error::Substitution(format!(
                            "image of {} is not homogeneous of degree {}",
                            g.name, g.degree
                        )))
                    }
                }
                let odd = matches!(g.parity, Parity::Odd);
                if odd != (g.degree % 2 == 1) {
                    return Err(Error::Substitution(format!("parity mismatch for {}", g.name)));
                }
            }
        }
        let mut out = Polynomial::zero(&sub.table, sub.ring);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(&sub.table, sub.ring, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = sub.images[i].as_ref().unwrap();
                for _ in 0..e {
                    acc = acc.mul(img)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Leibniz extension of a map on generators. With the even rule,
    /// d(uv) = d(u)v + u d(v); with the odd rule the second summand picks up
    /// (-1)^{deg u}.
    pub fn apply_derivation(&self, d: &Derivation) -> Result<Polynomial> {
        let mut out = Polynomial::zero(&self.table, self.ring);
        for (m, c) in &self.terms {
            let dm = self.derive_monomial(m, d)?;
            out = out.add(&dm.scale(c))?;
        }
        Ok(out)
    }

    fn derive_monomial(&self, m: &Monomial, d: &Derivation) -> Result<Polynomial> {
        // Split m = g^e * rest at the first present generator and recurse:
        // D(g^e rest) = D(g^e) rest  (+/-)  g^e D(rest),
        // with D(g^e) = e g^{e-1} D(g).
        let table = &self.table;
        let Some(i) = m.exps().iter().position(|&e| e > 0) else {
            return Ok(Polynomial::zero(table, self.ring));
        };
        let e = m.exp(i);
        let mut head_exps = vec![0u16; table.len()];
        head_exps[i] = e;
        let head = Monomial::new(table, head_exps);
        let mut rest_exps = m.exps().to_vec();
        rest_exps[i] = 0;
        let rest = Monomial::new(table, rest_exps);
        let rest_poly = Polynomial::from_terms(table, self.ring, [(rest.clone(), self.ring.one())]);

        // D(g^e) = e g^{e-1} D(g)
        let mut dg_term = match &d.images[i] {
            Some(img) => {
                let mut pow_exps = vec![0u16; table.len()];
                pow_exps[i] = e - 1;
                let pow = Polynomial::from_terms(
                    table,
                    self.ring,
                    [(Monomial::new(table, pow_exps), Scalar::from_i64(self.ring, e as i64))],
                );
                pow.mul(img)?
            }
            None => Polynomial::zero(table, self.ring),
        };
        dg_term = dg_term.mul(&rest_poly)?;

        let mut tail = self.derive_monomial(&rest, d)?;
        if tail.is_zero() {
            return Ok(dg_term);
        }
        let head_poly = Polynomial::from_terms(table, self.ring, [(head.clone(), self.ring.one())]);
        tail = head_poly.mul(&tail)?;
        if d.odd && head.degree() % 2 == 1 {
            tail = tail.neg();
        }
        dg_term.add(&tail)
    }
}

/// Generator images defining a ring homomorphism into a (possibly
/// different) target algebra.
pub struct Substitution {
    pub table: Arc<GeneratorTable>,
    pub ring: CoeffRing,
    /// indexed by the source table; `None` = generator may not appear
    pub images: Vec<Option<Polynomial>>,
}

impl Substitution {
    pub fn new(source: &Arc<GeneratorTable>, target: &Arc<GeneratorTable>, ring: CoeffRing) -> Substitution {
        Substitution {
            table: target.clone(),
            ring,
            images: vec![None; source.len()],
        }
    }

    pub fn endo(table: &Arc<GeneratorTable>, ring: CoeffRing) -> Substitution {
        Substitution::new(table, table, ring)
    }

    pub fn set(&mut self, idx: usize, image: Polynomial) -> &mut Self {
        self.images[idx] = Some(image);
        self
    }
}

/// A derivation: generator images in the same algebra plus the sign rule.
pub struct Derivation {
    pub images: Vec<Option<Polynomial>>,
    pub odd: bool,
}

impl Derivation {
    pub fn new(table: &Arc<GeneratorTable>, odd: bool) -> Derivation {
        Derivation {
            images: vec![None; table.len()],
            odd,
        }
    }

    pub fn set(&mut self, idx: usize, image: Polynomial) -> &mut Self {
        self.images[idx] = Some(image);
        self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::parse::serialize(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Parity::*;

    fn gamma_table() -> Arc<GeneratorTable> {
        GeneratorTable::new(vec![("xi", 2, Even), ("eta", 2, Even), ("a", 1, Odd), ("b", 1, Odd)])
    }

    #[test]
    fn exterior_square_vanishes() {
        let t = gamma_table();
        let a = Polynomial::generator_by_name(&t, CoeffRing::Fp(3), "a");
        assert!(a.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn mui_relation_ys() {
        // (xi b - eta a) * (ab) = 0
        let t = gamma_table();
        let r = CoeffRing::Fp(3);
        let xi = Polynomial::generator_by_name(&t, r, "xi");
        let eta = Polynomial::generator_by_name(&t, r, "eta");
        let a = Polynomial::generator_by_name(&t, r, "a");
        let b = Polynomial::generator_by_name(&t, r, "b");
        let s = xi.mul(&b).unwrap().sub(&eta.mul(&a).unwrap()).unwrap();
        let y = a.mul(&b).unwrap();
        assert!(s.mul(&y).unwrap().is_zero());
    }

    #[test]
    fn mui_relation_fy_plus_sz() {
        let t = gamma_table();
        let r = CoeffRing::Fp(3);
        let p = 3u32;
        let xi = Polynomial::generator_by_name(&t, r, "xi");
        let eta = Polynomial::generator_by_name(&t, r, "eta");
        let a = Polynomial::generator_by_name(&t, r, "a");
        let b = Polynomial::generator_by_name(&t, r, "b");
        let s = xi.mul(&b).unwrap().sub(&eta.mul(&a).unwrap()).unwrap();
        let y = a.mul(&b).unwrap();
        let z = xi.pow(p).unwrap().mul(&b).unwrap().sub(&eta.pow(p).unwrap().mul(&a).unwrap()).unwrap();
        let f = xi.pow(p).unwrap().mul(&eta).unwrap().sub(&eta.pow(p).unwrap().mul(&xi).unwrap()).unwrap();
        let fy_sz = f.mul(&y).unwrap().add(&s.mul(&z).unwrap()).unwrap();
        assert!(fy_sz.is_zero());
    }

    #[test]
    fn substitution_unipotent_fixes_y() {
        // a -> a, b -> a + b fixes y = ab
        let t = gamma_table();
        let r = CoeffRing::Fp(3);
        let a = Polynomial::generator_by_name(&t, r, "a");
        let b = Polynomial::generator_by_name(&t, r, "b");
        let y = a.mul(&b).unwrap();
        let mut sub = Substitution::endo(&t, r);
        sub.set(2, a.clone());
        sub.set(3, a.add(&b).unwrap());
        assert_eq!(y.substitute(&sub).unwrap(), y);
    }

    #[test]
    fn substitution_rejects_degree_mismatch() {
        let t = gamma_table();
        let r = CoeffRing::Fp(3);
        let xi = Polynomial::generator_by_name(&t, r, "xi");
        let a = Polynomial::generator_by_name(&t, r, "a");
        let mut sub = Substitution::endo(&t, r);
        sub.set(2, xi); // a has degree 1, xi degree 2
        assert!(matches!(a.substitute(&sub), Err(Error::Substitution(_))));
    }

    #[test]
    fn even_derivation_product_rule() {
        // d = sum of partials on t1 t2 t3
        let t = GeneratorTable::new(vec![("t1", 2, Even), ("t2", 2, Even), ("t3", 2, Even)]);
        let r = CoeffRing::Z;
        let mut d = Derivation::new(&t, false);
        for i in 0..3 {
            d.set(i, Polynomial::one(&t, r));
        }
        let m = Polynomial::from_terms(&t, r, [(Monomial::new(&t, vec![1, 1, 1]), r.one())]);
        let dm = m.apply_derivation(&d).unwrap();
        let expect = Polynomial::from_terms(
            &t,
            r,
            [
                (Monomial::new(&t, vec![1, 1, 0]), r.one()),
                (Monomial::new(&t, vec![1, 0, 1]), r.one()),
                (Monomial::new(&t, vec![0, 1, 1]), r.one()),
            ],
        );
        assert_eq!(dm, expect);
    }

    #[test]
    fn odd_derivation_bockstein_on_y() {
        let t = gamma_table();
        let r = CoeffRing::Fp(3);
        let xi = Polynomial::generator_by_name(&t, r, "xi");
        let eta = Polynomial::generator_by_name(&t, r, "eta");
        let a = Polynomial::generator_by_name(&t, r, "a");
        let b = Polynomial::generator_by_name(&t, r, "b");
        let mut beta = Derivation::new(&t, true);
        beta.set(2, xi.clone());
        beta.set(3, eta.clone());
        let y = a.mul(&b).unwrap();
        let s = y.apply_derivation(&beta).unwrap();
        let expect = xi.mul(&b).unwrap().sub(&eta.mul(&a).unwrap()).unwrap();
        assert_eq!(s, expect);
        // beta . beta = 0
        assert!(s.apply_derivation(&beta).unwrap().is_zero());
    }
}

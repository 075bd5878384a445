//! Sparse graded-commutative polynomials with exact coefficients.
//!
//! A [`GeneratorTable`] fixes the generator alphabet: each generator has a
//! name, a cohomological degree and a parity. Odd generators anticommute
//! among themselves and square to zero (Koszul sign rule); even generators
//! are free polynomial variables. The table order is the monomial order.

mod monomial;
mod parse;
mod poly;
mod slice;

pub use monomial::Monomial;
pub use parse::{parse, serialize};
pub use poly::{Derivation, Polynomial, Substitution};
pub use slice::DegreeSlice;

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub parity: Parity,
}

/// Ordered list of generators; the order is fixed for the lifetime of the
/// table and defines the monomial order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct GeneratorTable {
    gens: Vec<Generator>,
}

impl GeneratorTable {
    pub fn new(gens: Vec<(&str, u32, Parity)>) -> Arc<GeneratorTable> {
        let gens: Vec<Generator> = gens
            .into_iter()
            .map(|(name, degree, parity)| Generator {
                name: name.to_string(),
                degree,
                parity,
            })
            .collect();
        for (i, g) in gens.iter().enumerate() {
            assert!(
                gens[..i].iter().all(|h| h.name != g.name),
                "duplicate generator name {}",
                g.name
            );
            match g.parity {
                Parity::Odd => assert!(g.degree % 2 == 1, "odd generator {} must have odd degree", g.name),
                Parity::Even => assert!(g.degree % 2 == 0, "even generator {} must have even degree", g.name),
            }
        }
        Arc::new(GeneratorTable { gens })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// FNV-1a hash of the table contents; stable across runs, used by the
    /// cache layer to invalidate entries written against another alphabet.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut feed = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for g in &self.gens {
            feed(g.name.as_bytes());
            feed(&g.degree.to_le_bytes());
            feed(&[matches!(g.parity, Parity::Odd) as u8]);
        }
        h
    }
}

impl fmt::Display for GeneratorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        write!(f, "[{}]", names.join(","))
    }
}

pub(crate) fn check_same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::TableMismatch {
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

//! Degreewise computation of the kernel ring K_n, the weighted evaluation
//! theta, the ideal I_p, minimal generators of K_n, and the zero-column
//! cross-check against the d_3 differential.

use crate::cache::CacheDir;
use crate::error::{Error, Result};
use crate::linalg::{
    integer_kernel, inverse_unimodular, smith_normal_form, solve_integer, AbelianGroupType,
    ExactMatrix,
};
use crate::par;
use crate::report::{DegreeRow, VerifyReport};
use crate::ring::{DegreeSlice, GeneratorTable, Parity, Polynomial};
use crate::scalar::{CoeffRing, Scalar};
use crate::symmetric::SigmaContext;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;
use std::sync::Arc;

/// One degree of K_n: a saturated Z-basis in sigma-coordinates. Every basis
/// element is killed by nabla, and the basis generates the full kernel
/// lattice of its degree.
#[derive(Clone, Debug)]
pub struct KSlice {
    pub n: usize,
    pub degree: usize,
    pub basis: Vec<Polynomial>,
}

impl KSlice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// One degree of I_p = ker(theta) inside K_p, with the index of the
/// sublattice (1 when theta vanishes on the whole slice, p otherwise).
#[derive(Clone, Debug)]
pub struct ISlice {
    pub p: usize,
    pub degree: usize,
    pub basis: Vec<Polynomial>,
    pub index: usize,
}

impl ISlice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Value of theta on a homogeneous class of degree 2d: an integer for
/// d = 0, a residue mod p (canonical in [0, p)) times eta^d otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaValue {
    pub eta_power: usize,
    pub residue: BigInt,
}

impl ThetaValue {
    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }
}

impl fmt::Display for ThetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residue.is_zero() {
            write!(f, "0")
        } else if self.eta_power == 0 {
            write!(f, "{}", self.residue)
        } else if self.eta_power == 1 {
            write!(f, "{}*eta", self.residue)
        } else {
            write!(f, "{}*eta^{}", self.residue, self.eta_power)
        }
    }
}

/// New generators of K_n in one degree: representatives of a minimal
/// generating set of the quotient of the degree slice by the sublattice of
/// decomposables (products of lower-degree kernel elements).
#[derive(Clone, Debug)]
pub struct KGenerators {
    pub degree: usize,
    pub generators: Vec<Polynomial>,
    /// isomorphism type of (slice lattice) / (decomposable sublattice)
    pub quotient: AbelianGroupType,
}

pub struct Kernels {
    n: usize,
    sigma: Arc<SigmaContext>,
    cache: Option<CacheDir>,
    theta_values: Vec<BigInt>,
}

impl Kernels {
    pub fn new(n: usize) -> Kernels {
        Kernels::build(n, None)
    }

    pub fn with_cache(n: usize, cache: CacheDir) -> Kernels {
        Kernels::build(n, Some(cache))
    }

    fn build(n: usize, cache: Option<CacheDir>) -> Kernels {
        let sigma = Arc::new(SigmaContext::new(n));
        // theta(sigma_k) = e_k(1, 2, ..., n); exact integers
        let mut elem = vec![BigInt::from(1)];
        for i in 1..=n {
            let mut next = vec![BigInt::zero(); elem.len() + 1];
            for (k, v) in elem.iter().enumerate() {
                next[k] += v;
                next[k + 1] += v * BigInt::from(i);
            }
            elem = next;
        }
        Kernels {
            n,
            sigma,
            cache,
            theta_values: elem,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &SigmaContext {
        &self.sigma
    }

    pub fn cache(&self) -> Option<&CacheDir> {
        self.cache.as_ref()
    }

    /// The discriminant in sigma-coordinates, going through the disk cache
    /// when one is attached.
    pub fn delta(&self) -> Polynomial {
        let degree = 2 * (self.n * self.n - self.n);
        let table = self.sigma.sigma_table();
        let polys = CacheDir::cached(
            self.cache.as_ref(),
            "delta",
            self.n,
            degree,
            CoeffRing::Z,
            table,
            || vec![self.sigma.delta_sigma()],
        );
        let delta = polys.into_iter().next().expect("delta payload");
        self.sigma.set_delta_sigma(delta.clone());
        delta
    }

    /// Saturated Z-basis of the kernel of nabla in one cohomological
    /// degree, canonical via Hermite form.
    pub fn k_basis(&self, degree: usize) -> KSlice {
        let table = self.sigma.sigma_table();
        let basis = CacheDir::cached(
            self.cache.as_ref(),
            "k",
            self.n,
            degree,
            CoeffRing::Z,
            table,
            || self.compute_k_basis(degree),
        );
        KSlice {
            n: self.n,
            degree,
            basis,
        }
    }

    fn compute_k_basis(&self, degree: usize) -> Vec<Polynomial> {
        let ring = CoeffRing::Z;
        let table = self.sigma.sigma_table();
        let source = DegreeSlice::enumerate(table, ring, degree as u32);
        if source.dim() == 0 {
            return Vec::new();
        }
        if degree == 0 {
            return vec![Polynomial::one(table, ring)];
        }
        let target = DegreeSlice::enumerate(table, ring, degree as u32 - 2);
        let cols: Vec<Vec<Scalar>> = (0..source.dim())
            .map(|j| target.coords(&self.sigma.nabla_sigma(&source.monomial_poly(j))))
            .collect();
        let matrix = ExactMatrix::from_columns(ring, target.dim(), cols);
        integer_kernel(&matrix)
            .into_iter()
            .map(|v| source.poly(&v.into_iter().map(Scalar::Int).collect::<Vec<_>>()))
            .collect()
    }

    /// Ranks of K_n in even degrees 0, 2, ..., max_degree.
    pub fn k_hilbert(&self, max_degree: usize) -> Vec<(usize, usize)> {
        let degrees: Vec<usize> = (0..=max_degree / 2).map(|d| 2 * d).collect();
        let ranks = par::scan(&degrees, |d| self.k_basis(d).rank());
        degrees.into_iter().zip(ranks).collect()
    }

    /// Monomial count of Q[c_2, ..., c_n] in one cohomological degree:
    /// partitions of degree/2 into parts from {2, ..., n}.
    pub fn expected_k_rank(n: usize, degree: usize) -> usize {
        if degree % 2 != 0 {
            return 0;
        }
        let w = degree / 2;
        let mut count = vec![0usize; w + 1];
        count[0] = 1;
        for part in 2..=n {
            for total in part..=w {
                count[total] += count[total - part];
            }
        }
        count[w]
    }

    /// theta on a homogeneous polynomial in t- or sigma-variables:
    /// substitute t_i -> i (so sigma_k -> e_k(1..n)), collect, and reduce
    /// the eta^d coefficient mod n in positive degrees.
    pub fn theta_eval(&self, f: &Polynomial) -> Result<ThetaValue> {
        let gen_value = |idx: usize| -> BigInt {
            if Arc::ptr_eq(f.table(), self.sigma.sigma_table()) || f.table() == self.sigma.sigma_table() {
                self.theta_values[idx + 1].clone()
            } else if Arc::ptr_eq(f.table(), self.sigma.t_table()) || f.table() == self.sigma.t_table() {
                BigInt::from(idx + 1)
            } else {
                panic!("theta is defined on t- or sigma-polynomials")
            }
        };
        if f.is_zero() {
            return Ok(ThetaValue {
                eta_power: 0,
                residue: BigInt::zero(),
            });
        }
        let degree = f.homogeneous_degree().ok_or(Error::Inhomogeneous)? as usize;
        debug_assert!(degree % 2 == 0);
        let d = degree / 2;
        let mut total = BigInt::zero();
        for (m, c) in f.terms() {
            let mut term = c.as_int().expect("integral coefficients").clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term *= gen_value(i);
                }
            }
            total += term;
        }
        if d > 0 {
            let p = BigInt::from(self.n);
            total %= &p;
            if total.is_negative() {
                total += &p;
            }
        }
        Ok(ThetaValue {
            eta_power: d,
            residue: total,
        })
    }

    /// The sublattice of the K-slice killed by theta, with its index
    /// (1 when theta vanishes on the slice, p otherwise; the sublattice
    /// always has full rank).
    pub fn i_basis(&self, degree: usize) -> ISlice {
        let table = self.sigma.sigma_table();
        let k = self.k_basis(degree);
        let basis = CacheDir::cached(
            self.cache.as_ref(),
            "i",
            self.n,
            degree,
            CoeffRing::Z,
            table,
            || self.compute_i_basis(&k),
        );
        let index = if degree == 0
            || k.basis
                .iter()
                .all(|b| self.theta_eval(b).expect("homogeneous basis").is_zero())
        {
            1
        } else {
            self.n
        };
        ISlice {
            p: self.n,
            degree,
            basis,
            index,
        }
    }

    fn compute_i_basis(&self, k: &KSlice) -> Vec<Polynomial> {
        if k.degree == 0 {
            // theta is injective on constants
            return Vec::new();
        }
        let residues: Vec<BigInt> = k
            .basis
            .iter()
            .map(|b| self.theta_eval(b).expect("homogeneous basis").residue)
            .collect();
        if residues.iter().all(Zero::is_zero) {
            return k.basis.clone();
        }
        // kernel of x -> residues . x mod p, as a sublattice of Z^rank
        let r = k.rank();
        let mut row: Vec<Scalar> = residues.into_iter().map(Scalar::Int).collect();
        row.push(Scalar::Int(BigInt::from(self.n)));
        let m = ExactMatrix::from_rows(CoeffRing::Z, vec![row]);
        let lattice: Vec<Vec<BigInt>> = integer_kernel(&m)
            .into_iter()
            .map(|v| v[..r].to_vec())
            .collect();
        let lattice = crate::linalg::hnf_rows(lattice);
        lattice
            .iter()
            .map(|coords| self.combine(&k.basis, coords))
            .collect()
    }

    fn combine(&self, basis: &[Polynomial], coords: &[BigInt]) -> Polynomial {
        let table = self.sigma.sigma_table();
        let mut acc = Polynomial::zero(table, CoeffRing::Z);
        for (b, c) in basis.iter().zip(coords) {
            acc = acc.add(&b.scale(&Scalar::Int(c.clone()))).unwrap();
        }
        acc
    }

    /// Whether theta hits anything on each even degree slice of K.
    pub fn theta_image_profile(&self, max_degree: usize) -> Vec<(usize, bool)> {
        let degrees: Vec<usize> = (0..=max_degree / 2).map(|d| 2 * d).collect();
        let full = par::scan(&degrees, |deg| {
            let k = self.k_basis(deg);
            k.basis
                .iter()
                .any(|b| !self.theta_eval(b).expect("homogeneous basis").is_zero())
        });
        degrees.into_iter().zip(full).collect()
    }

    /// Check the image profile of theta on K_p against the subring
    /// generated by theta(delta): nonzero exactly in degrees divisible by
    /// 2(p^2 - p). Also checks that delta itself evaluates to -eta^{p^2-p}.
    pub fn verify_theta_profile(&self, max_degree: usize) -> VerifyReport {
        let p = self.n;
        let period = p * p - p;
        let mut report = VerifyReport::new(format!("theta-profile p={p} max-deg={max_degree}"));
        report.note(format!(
            "image of theta on K_{p} is the subring generated by theta(delta) = -eta^{period}: \
             full exactly in degrees 0 mod {}",
            2 * period
        ));
        let delta_theta = self.theta_eval(&self.delta()).expect("delta homogeneous");
        let minus_one = BigInt::from(p as i64 - 1);
        report.push(DegreeRow::new(
            2 * period,
            format!("theta(delta)={delta_theta}"),
            format!("{minus_one}*eta^{period}"),
            delta_theta.eta_power == period && delta_theta.residue == minus_one,
        ));
        for (degree, full) in self.theta_image_profile(max_degree) {
            let w = degree / 2;
            let expect_full = w % period == 0;
            let show = |b: bool| if b { "full" } else { "0" };
            report.push(DegreeRow::new(degree, show(full), show(expect_full), full == expect_full));
        }
        report
    }

    /// Z-coordinates of a kernel polynomial in the slice basis; `None`
    /// when the polynomial is not in the lattice.
    pub fn k_coords(&self, degree: usize, poly: &Polynomial) -> Option<Vec<BigInt>> {
        let slice = DegreeSlice::enumerate(self.sigma.sigma_table(), CoeffRing::Z, degree as u32);
        let k = self.k_basis(degree);
        if k.rank() == 0 {
            return poly.is_zero().then_some(Vec::new());
        }
        let cols: Vec<Vec<Scalar>> = k.basis.iter().map(|b| slice.coords(b)).collect();
        let b = ExactMatrix::from_columns(CoeffRing::Z, slice.dim(), cols);
        let target: Vec<BigInt> = slice
            .coords(poly)
            .into_iter()
            .map(|s| s.as_int().expect("Z coefficients").clone())
            .collect();
        solve_integer(&b, &target)
    }

    /// Decomposable sublattice of one K-slice, in K-basis coordinates:
    /// spanned by products of lower-degree kernel basis elements.
    pub fn decomposable_coords(&self, degree: usize) -> Vec<Vec<BigInt>> {
        let mut cols = Vec::new();
        let mut e = 2;
        while 2 * e <= degree {
            let left = self.k_basis(e);
            let right = self.k_basis(degree - e);
            for a in &left.basis {
                for b in &right.basis {
                    let prod = a.mul(b).expect("same table");
                    let coords = self
                        .k_coords(degree, &prod)
                        .expect("product of kernel elements stays in the kernel lattice");
                    cols.push(coords);
                }
            }
            e += 2;
        }
        cols
    }

    /// Degreewise minimal generators of K_n as a Z-algebra, through
    /// max_degree: in each degree the quotient of the kernel lattice by the
    /// decomposable sublattice is computed exactly, and representatives are
    /// read off the Smith transform.
    pub fn k_generators(&self, max_degree: usize) -> Vec<KGenerators> {
        let mut out = Vec::new();
        for degree in (2..=max_degree).step_by(2) {
            let k = self.k_basis(degree);
            let r = k.rank();
            if r == 0 {
                out.push(KGenerators {
                    degree,
                    generators: Vec::new(),
                    quotient: AbelianGroupType::free(0),
                });
                continue;
            }
            let decomp = self.decomposable_coords(degree);
            let n_mat = ExactMatrix::from_columns(
                CoeffRing::Z,
                r,
                decomp
                    .into_iter()
                    .map(|v| v.into_iter().map(Scalar::Int).collect())
                    .collect(),
            );
            let (generators, quotient) = if n_mat.ncols() == 0 {
                (k.basis.clone(), AbelianGroupType::free(r))
            } else {
                let snf = smith_normal_form(&n_mat);
                let diag = snf.diagonal();
                let u_inv = inverse_unimodular(&snf.u);
                let mut gens = Vec::new();
                let mut factors = Vec::new();
                let mut free = 0;
                for i in 0..r {
                    let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
                    if d == BigInt::from(1) {
                        continue;
                    }
                    if d.is_zero() {
                        free += 1;
                    } else {
                        factors.push(d);
                    }
                    let coords: Vec<BigInt> = (0..r)
                        .map(|j| u_inv[(j, i)].as_int().unwrap().clone())
                        .collect();
                    gens.push(self.combine(&k.basis, &coords));
                }
                (
                    gens,
                    AbelianGroupType {
                        free_rank: free,
                        invariant_factors: factors,
                    },
                )
            };
            out.push(KGenerators {
                degree,
                generators,
                quotient,
            });
        }
        out
    }

    /// Recompute the kernel of f -> nabla(f) x on the zero column (the d_3
    /// differential into the x-line) and check it coincides with k_basis
    /// degree by degree.
    pub fn e4_zero_column_check(&self, max_degree: usize) -> VerifyReport {
        let mut report = VerifyReport::new(format!("e4-zero-column n={} max-deg={max_degree}", self.n));
        let ring = CoeffRing::Z;
        let sigma_table = self.sigma.sigma_table();
        let mut gens: Vec<(&str, u32, Parity)> = sigma_table
            .gens()
            .iter()
            .map(|g| (g.name.as_str(), g.degree, g.parity))
            .collect();
        gens.push(("x", 3, Parity::Odd));
        let ext = GeneratorTable::new(gens);
        let x = Polynomial::generator_by_name(&ext, ring, "x");
        for degree in (0..=max_degree).step_by(2) {
            let source = DegreeSlice::enumerate(sigma_table, ring, degree as u32);
            if source.dim() == 0 {
                continue;
            }
            let kernel = if degree == 0 {
                vec![vec![BigInt::from(1)]]
            } else {
                let target = DegreeSlice::enumerate(&ext, ring, degree as u32 + 1);
                let cols: Vec<Vec<Scalar>> = (0..source.dim())
                    .map(|j| {
                        let image = self
                            .sigma
                            .nabla_sigma(&source.monomial_poly(j))
                            .into_table(&ext)
                            .mul(&x)
                            .expect("same table");
                        target.coords(&image)
                    })
                    .collect();
                let matrix = ExactMatrix::from_columns(ring, target.dim(), cols);
                integer_kernel(&matrix)
            };
            let d3_slice: Vec<Polynomial> = kernel
                .into_iter()
                .map(|v| source.poly(&v.into_iter().map(Scalar::Int).collect::<Vec<_>>()))
                .collect();
            let k = self.k_basis(degree);
            report.push(DegreeRow::new(
                degree,
                format!("d3-kernel rank {}", d3_slice.len()),
                format!("K rank {}", k.rank()),
                d3_slice == k.basis,
            ));
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse;

    fn sigma_poly(k: &Kernels, s: &str) -> Polynomial {
        parse(k.sigma().sigma_table(), CoeffRing::Z, s).unwrap()
    }

    #[test]
    fn k3_small_degrees() {
        let k = Kernels::new(3);
        assert_eq!(k.k_basis(0).basis, vec![Polynomial::one(k.sigma().sigma_table(), CoeffRing::Z)]);
        assert_eq!(k.k_basis(2).rank(), 0);
        let deg4 = k.k_basis(4);
        assert_eq!(deg4.rank(), 1);
        // gamma_2 = 3 s2 - s1^2 up to sign; Hermite pivot convention makes
        // the s2 coefficient positive
        assert_eq!(deg4.basis[0], sigma_poly(&k, "-1*s1^2 + 3*s2"));
        assert_eq!(k.k_basis(12).rank(), 2);
    }

    #[test]
    fn k_hilbert_matches_monomial_count() {
        for n in 2..=4 {
            let k = Kernels::new(n);
            for (degree, rank) in k.k_hilbert(16) {
                assert_eq!(rank, Kernels::expected_k_rank(n, degree), "n={n} degree={degree}");
            }
        }
    }

    #[test]
    fn expected_rank_examples() {
        // Q[c2, c3]: degrees 0,2,4,6,8,10,12 -> 1,0,1,1,1,1,2
        let got: Vec<usize> = (0..=6).map(|d| Kernels::expected_k_rank(3, 2 * d)).collect();
        assert_eq!(got, vec![1, 0, 1, 1, 1, 1, 2]);
        // Q[c2]: rank 1 exactly in degrees divisible by 4
        let got2: Vec<usize> = (0..=4).map(|d| Kernels::expected_k_rank(2, 2 * d)).collect();
        assert_eq!(got2, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn theta_values_p3() {
        let k = Kernels::new(3);
        let s1 = sigma_poly(&k, "1*s1");
        let v = k.theta_eval(&s1).unwrap();
        assert!(v.is_zero()); // (1+2+3) = 6 = 0 mod 3
        let s2 = sigma_poly(&k, "1*s2");
        let v = k.theta_eval(&s2).unwrap();
        assert_eq!(v.residue, BigInt::from(2)); // 11 = 2 mod 3
        assert_eq!(v.eta_power, 2);
        let delta = k.delta();
        let v = k.theta_eval(&delta).unwrap();
        assert_eq!(v.eta_power, 6);
        assert_eq!(v.residue, BigInt::from(2)); // -eta^6
    }

    #[test]
    fn theta_rejects_inhomogeneous() {
        let k = Kernels::new(3);
        let f = sigma_poly(&k, "1*s1 + 1*s2");
        assert!(matches!(k.theta_eval(&f), Err(Error::Inhomogeneous)));
    }

    #[test]
    fn theta_is_multiplicative() {
        let k = Kernels::new(3);
        let f = sigma_poly(&k, "1*s1^2 + 2*s2");
        let g = sigma_poly(&k, "1*s3 + 5*s1*s2");
        let fg = f.mul(&g).unwrap();
        let vf = k.theta_eval(&f).unwrap();
        let vg = k.theta_eval(&g).unwrap();
        let vfg = k.theta_eval(&fg).unwrap();
        assert_eq!(vfg.eta_power, vf.eta_power + vg.eta_power);
        assert_eq!(vfg.residue, (vf.residue * vg.residue) % BigInt::from(3));
    }

    #[test]
    fn i_slices_p3() {
        let k = Kernels::new(3);
        let i0 = k.i_basis(0);
        assert_eq!((i0.rank(), i0.index), (0, 1));
        // degree 4: theta(gamma_2) = 6 - 36 = -30 = 0 mod 3, so I = K
        let i4 = k.i_basis(4);
        assert_eq!((i4.rank(), i4.index), (1, 1));
        // degree 12: theta hits -eta^6 via delta, so the kernel has index 3
        let i12 = k.i_basis(12);
        assert_eq!((i12.rank(), i12.index), (2, 3));
        for b in &i12.basis {
            assert!(k.theta_eval(b).unwrap().is_zero());
        }
        // mod-p reduction of a saturated-in-K sublattice of index p loses
        // one dimension exactly when the index is p
        let delta = k.delta();
        assert!(k.k_coords(12, &delta).is_some());
    }

    #[test]
    fn theta_image_profile_p3() {
        let k = Kernels::new(3);
        let profile = k.theta_image_profile(24);
        let full: Vec<usize> = profile.iter().filter(|(_, f)| *f).map(|(d, _)| *d).collect();
        // subring generated by theta(delta): degrees 0, 12, 24 only
        assert_eq!(full, vec![0, 12, 24]);
        let report = k.verify_theta_profile(24);
        assert!(report.passed(), "{}", report.to_table());
    }

    #[test]
    fn k_generators_n3() {
        let k = Kernels::new(3);
        let gens = k.k_generators(12);
        let counts: Vec<(usize, usize)> = gens.iter().map(|g| (g.degree, g.generators.len())).collect();
        assert_eq!(
            counts,
            vec![(2, 0), (4, 1), (6, 1), (8, 0), (10, 0), (12, 1)]
        );
        // degree 12: K/decomposables is cyclic of order 27, generated by
        // the class of delta
        let g12 = &gens[5];
        assert_eq!(g12.quotient.free_rank, 0);
        assert_eq!(g12.quotient.invariant_factors, vec![BigInt::from(27)]);
    }

    #[test]
    fn k_generators_n2() {
        let k = Kernels::new(2);
        let gens = k.k_generators(20);
        for g in gens {
            let expect = usize::from(g.degree == 4);
            assert_eq!(g.generators.len(), expect, "degree {}", g.degree);
        }
    }

    #[test]
    fn e4_zero_column_small() {
        for n in 3..=5 {
            let k = Kernels::new(n);
            let report = k.e4_zero_column_check(12);
            assert!(report.passed(), "{}", report.to_table());
        }
    }
}

//! Image subrings and presented quotients.
//!
//! The mod-p side builds the subring R of H*(BU(p);F_p) x H*(BGamma;F_p)
//! generated by (rho(I_p), 0), (0,s), (0,z), (0,f), (c_1,y), (delta,-h),
//! the subring L_p generated by K_p mod p and c_1, and the presented
//! quotient of L_p (x) Q_p; it certifies degree by degree that the
//! generator map Phi is well defined, kills the relations, and matches
//! dimensions against R. The integral side does the same for R_0 and the
//! quotient of K_p (x) Z[x_{2p+2}] (x) Lambda[x_3], comparing finitely
//! generated abelian group types computed through Smith normal form.

use crate::cache::CacheDir;
use crate::gamma::{GammaIntegral, GammaModP};
use crate::kernels::Kernels;
use crate::linalg::{quotient_type, subquotient_invariants, AbelianGroupType, ExactMatrix};
use crate::report::{DegreeRow, VerifyReport};
use crate::ring::{DegreeSlice, GeneratorTable, Monomial, Parity, Polynomial};
use crate::scalar::{CoeffRing, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A pair (u, v) with u on the BU(p) side and v on the BGamma side; the
/// ambient target of the restriction maps. Both components are homogeneous
/// of the same degree (or zero).
#[derive(Clone, Debug, PartialEq)]
pub struct ProductElement {
    pub left: Polynomial,
    pub right: Polynomial,
}

// ---------------------------------------------------------------------------
// echelon spans with carried payloads

trait RowOps: Clone {
    fn scale_by(&self, ring: CoeffRing, c: &Scalar) -> Self;
    /// self - c * other
    fn sub_scaled(&self, ring: CoeffRing, other: &Self, c: &Scalar) -> Self;
}

impl RowOps for () {
    fn scale_by(&self, _: CoeffRing, _: &Scalar) -> Self {}
    fn sub_scaled(&self, _: CoeffRing, _: &Self, _: &Scalar) -> Self {}
}

impl RowOps for ProductElement {
    fn scale_by(&self, _: CoeffRing, c: &Scalar) -> Self {
        ProductElement {
            left: self.left.scale(c),
            right: self.right.scale(c),
        }
    }

    fn sub_scaled(&self, _: CoeffRing, other: &Self, c: &Scalar) -> Self {
        ProductElement {
            left: self.left.sub(&other.left.scale(c)).unwrap(),
            right: self.right.sub(&other.right.scale(c)).unwrap(),
        }
    }
}

#[derive(Clone)]
struct LRow {
    poly: Polynomial,
    image: ProductElement,
}

impl RowOps for LRow {
    fn scale_by(&self, ring: CoeffRing, c: &Scalar) -> Self {
        LRow {
            poly: self.poly.scale(c),
            image: self.image.scale_by(ring, c),
        }
    }

    fn sub_scaled(&self, ring: CoeffRing, other: &Self, c: &Scalar) -> Self {
        LRow {
            poly: self.poly.sub(&other.poly.scale(c)).unwrap(),
            image: self.image.sub_scaled(ring, &other.image, c),
        }
    }
}

/// Reduced echelon span over a field with a payload column; payloads follow
/// every row operation, so a stored payload is always the image of its row
/// vector under the linear map the span represents.
struct Graph<P> {
    ring: CoeffRing,
    rows: Vec<(usize, Vec<Scalar>, P)>,
}

impl<P: RowOps> Graph<P> {
    fn new(ring: CoeffRing) -> Graph<P> {
        Graph { ring, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn payloads(&self) -> impl Iterator<Item = &P> {
        self.rows.iter().map(|(_, _, p)| p)
    }

    /// Insert a vector; `Some(residual payload)` signals that the vector is
    /// already in the span (callers inspect the residual to detect
    /// inconsistent images).
    fn insert(&mut self, mut v: Vec<Scalar>, mut payload: P) -> Option<P> {
        for (pivot, row, rp) in &self.rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = self.ring.sub(x, &self.ring.mul(&c, r));
            }
            payload = payload.sub_scaled(self.ring, rp, &c);
        }
        let Some(j) = v.iter().position(|x| !x.is_zero()) else {
            return Some(payload);
        };
        let inv = self.ring.inverse(&v[j]).expect("field pivot");
        for x in v.iter_mut() {
            *x = self.ring.mul(x, &inv);
        }
        payload = payload.scale_by(self.ring, &inv);
        // keep the span reduced so one forward pass reduces any vector
        for (_, row, rp) in self.rows.iter_mut() {
            let c = row[j].clone();
            if c.is_zero() {
                continue;
            }
            for (x, nv) in row.iter_mut().zip(&v) {
                *x = self.ring.sub(x, &self.ring.mul(&c, nv));
            }
            *rp = rp.sub_scaled(self.ring, &payload, &c);
        }
        let at = self.rows.partition_point(|(pj, _, _)| *pj < j);
        self.rows.insert(at, (j, v, payload));
        None
    }

    /// Image of a vector under the span's linear map; `None` when the
    /// vector is outside the span.
    fn apply(&self, mut v: Vec<Scalar>, zero: P) -> Option<P> {
        let mut acc = zero;
        for (pivot, row, rp) in &self.rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = self.ring.sub(x, &self.ring.mul(&c, r));
            }
            let neg = self.ring.neg(&c);
            acc = acc.sub_scaled(self.ring, rp, &neg);
        }
        v.iter().all(Scalar::is_zero).then_some(acc)
    }
}

// ---------------------------------------------------------------------------

pub struct Presentations {
    p: u32,
    kernels: Kernels,
    gamma: GammaModP,
    gamma_int: GammaIntegral,
    /// x_3, x_{2p+1}, x_{2p+2} (the Q_p alphabet)
    x_table: Arc<GeneratorTable>,
    /// c-alphabet joined with the Q_p alphabet
    full_table: Arc<GeneratorTable>,
    /// x_3, x_{2p+2} (the integral alphabet)
    x_table_int: Arc<GeneratorTable>,
}

impl Presentations {
    pub fn new(p: u32) -> Presentations {
        Presentations::build(p, None)
    }

    pub fn with_cache(p: u32, cache: CacheDir) -> Presentations {
        Presentations::build(p, Some(cache))
    }

    fn build(p: u32, cache: Option<CacheDir>) -> Presentations {
        let kernels = match cache {
            Some(c) => Kernels::with_cache(p as usize, c),
            None => Kernels::new(p as usize),
        };
        let gamma = GammaModP::new(p);
        let gamma_int = GammaIntegral::new(p);
        let xz = format!("x{}", 2 * p + 1);
        let xf = format!("x{}", 2 * p + 2);
        let x_table = GeneratorTable::new(vec![
            ("x3", 3, Parity::Odd),
            (xz.as_str(), 2 * p + 1, Parity::Odd),
            (xf.as_str(), 2 * p + 2, Parity::Even),
        ]);
        let mut full_gens: Vec<(String, u32, Parity)> = kernels
            .sigma()
            .sigma_table()
            .gens()
            .iter()
            .map(|g| (g.name.clone(), g.degree, g.parity))
            .collect();
        full_gens.push(("x3".to_string(), 3, Parity::Odd));
        full_gens.push((xz.clone(), 2 * p + 1, Parity::Odd));
        full_gens.push((xf.clone(), 2 * p + 2, Parity::Even));
        let full_table =
            GeneratorTable::new(full_gens.iter().map(|(n, d, pa)| (n.as_str(), *d, *pa)).collect());
        let x_table_int =
            GeneratorTable::new(vec![("x3", 3, Parity::Odd), (xf.as_str(), 2 * p + 2, Parity::Even)]);
        Presentations {
            p,
            kernels,
            gamma,
            gamma_int,
            x_table,
            full_table,
            x_table_int,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn kernels(&self) -> &Kernels {
        &self.kernels
    }

    pub fn gamma(&self) -> &GammaModP {
        &self.gamma
    }

    pub fn gamma_integral(&self) -> &GammaIntegral {
        &self.gamma_int
    }

    fn fp(&self) -> CoeffRing {
        CoeffRing::Fp(self.p)
    }

    fn c_table(&self) -> &Arc<GeneratorTable> {
        self.kernels.sigma().sigma_table()
    }

    // -- mod-p pairs ---------------------------------------------------------

    pub fn pair_zero(&self) -> ProductElement {
        ProductElement {
            left: Polynomial::zero(self.c_table(), self.fp()),
            right: Polynomial::zero(self.gamma.table(), self.fp()),
        }
    }

    pub fn pair_one(&self) -> ProductElement {
        ProductElement {
            left: Polynomial::one(self.c_table(), self.fp()),
            right: Polynomial::one(self.gamma.table(), self.fp()),
        }
    }

    pub fn pair_mul(&self, a: &ProductElement, b: &ProductElement) -> ProductElement {
        ProductElement {
            left: a.left.mul(&b.left).unwrap(),
            right: a.right.mul(&b.right).unwrap(),
        }
    }

    pub fn pair_add(&self, a: &ProductElement, b: &ProductElement) -> ProductElement {
        ProductElement {
            left: a.left.add(&b.left).unwrap(),
            right: a.right.add(&b.right).unwrap(),
        }
    }

    fn pair_is_zero(e: &ProductElement) -> bool {
        e.left.is_zero() && e.right.is_zero()
    }

    fn pair_coords(e: &ProductElement, cs: &DegreeSlice, gs: &DegreeSlice) -> Vec<Scalar> {
        let mut v = cs.coords(&e.left);
        v.extend(gs.coords(&e.right));
        v
    }

    /// mod-p reduction of the ideal I_p in one degree: reductions of the
    /// saturated integral basis, zero reductions dropped.
    pub fn i_basis_mod_p(&self, degree: usize) -> Vec<Polynomial> {
        self.kernels
            .i_basis(degree)
            .basis
            .iter()
            .map(|b| b.to_ring(self.fp()))
            .filter(|b| !b.is_zero())
            .collect()
    }

    fn k_basis_mod_p(&self, degree: usize) -> Vec<Polynomial> {
        self.kernels
            .k_basis(degree)
            .basis
            .iter()
            .map(|b| b.to_ring(self.fp()))
            .filter(|b| !b.is_zero())
            .collect()
    }

    /// Generator images x_3 -> (0,s), x_{2p+1} -> (0,z), x_{2p+2} -> (0,f),
    /// indexed like the x alphabet.
    fn phi_x(&self, idx: usize) -> ProductElement {
        let right = match idx {
            0 => self.gamma.s.clone(),
            1 => self.gamma.z.clone(),
            2 => self.gamma.f.clone(),
            _ => unreachable!(),
        };
        ProductElement {
            left: Polynomial::zero(self.c_table(), self.fp()),
            right,
        }
    }

    fn phi_x_monomial(&self, m: &Monomial) -> ProductElement {
        let mut acc = self.pair_one();
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                acc = self.pair_mul(&acc, &self.phi_x(i));
            }
        }
        acc
    }

    fn c1_image(&self) -> ProductElement {
        ProductElement {
            left: Polynomial::generator(self.c_table(), self.fp(), 0),
            right: self.gamma.y.clone(),
        }
    }

    fn delta_image(&self) -> ProductElement {
        ProductElement {
            left: self.kernels.delta().to_ring(self.fp()),
            right: self.gamma.h.neg(),
        }
    }

    // -- L_p -----------------------------------------------------------------

    /// Degreewise echelon bases of L_p, the subring of F_p[c_1..c_p]
    /// generated by K_p mod p and c_1 (index = degree).
    pub fn l_slices(&self, max_degree: usize) -> Vec<Vec<Polynomial>> {
        let fp = self.fp();
        let mut bases: Vec<Vec<Polynomial>> = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let slice = DegreeSlice::enumerate(self.c_table(), fp, d as u32);
            let mut graph: Graph<()> = Graph::new(fp);
            let mut inserted: Vec<Polynomial> = Vec::new();
            if slice.dim() > 0 {
                let mut candidates: Vec<Polynomial> = Vec::new();
                if d == 0 {
                    candidates.push(Polynomial::one(self.c_table(), fp));
                }
                if d == 2 {
                    candidates.push(Polynomial::generator(self.c_table(), fp, 0));
                }
                candidates.extend(self.k_basis_mod_p(d));
                for e in 1..d {
                    if e > d - e {
                        break;
                    }
                    for a in &bases[e] {
                        for b in &bases[d - e] {
                            candidates.push(a.mul(b).unwrap());
                        }
                    }
                }
                for cand in candidates {
                    if !cand.is_zero() && graph.insert(slice.coords(&cand), ()).is_none() {
                        inserted.push(cand);
                    }
                }
            }
            bases.push(inserted);
        }
        bases
    }

    // -- R --------------------------------------------------------------------

    /// Degreewise echelon bases of the subring R in ambient product
    /// coordinates (index = degree).
    pub fn subring_r_slices(&self, max_degree: usize) -> Vec<Vec<ProductElement>> {
        let fp = self.fp();
        let p = self.p as usize;
        let mut out: Vec<Vec<ProductElement>> = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let cs = DegreeSlice::enumerate(self.c_table(), fp, d as u32);
            let gs = DegreeSlice::enumerate(self.gamma.table(), fp, d as u32);
            let mut graph: Graph<ProductElement> = Graph::new(fp);
            let mut candidates: Vec<ProductElement> = Vec::new();
            if d == 0 {
                candidates.push(self.pair_one());
            }
            for u in self.i_basis_mod_p(d) {
                candidates.push(ProductElement {
                    left: u,
                    right: Polynomial::zero(self.gamma.table(), fp),
                });
            }
            if d == 2 {
                candidates.push(self.c1_image());
            }
            if d == 3 {
                candidates.push(self.phi_x(0));
            }
            if d == 2 * p + 1 {
                candidates.push(self.phi_x(1));
            }
            if d == 2 * p + 2 {
                candidates.push(self.phi_x(2));
            }
            if d == 2 * p * p - 2 * p {
                candidates.push(self.delta_image());
            }
            for e in 1..d {
                if e > d - e {
                    break;
                }
                for a in &out[e] {
                    for b in &out[d - e] {
                        candidates.push(self.pair_mul(a, b));
                    }
                }
            }
            for cand in candidates {
                if !Self::pair_is_zero(&cand) {
                    let coords = Self::pair_coords(&cand, &cs, &gs);
                    graph.insert(coords, cand);
                }
            }
            out.push(graph.payloads().cloned().collect());
        }
        out
    }

    // -- mod-p presented quotient ---------------------------------------------

    /// Relation generators of the mod-p presentation, as polynomials in the
    /// combined (c, x) alphabet, paired with their images under the
    /// generator map.
    fn main_relations(&self, max_degree: usize) -> Vec<(Polynomial, ProductElement)> {
        let fp = self.fp();
        let t = &self.full_table;
        let c1 = Polynomial::generator(t, fp, 0);
        let x3 = Polynomial::generator_by_name(t, fp, &self.x_table.gen(0).name);
        let xz = Polynomial::generator_by_name(t, fp, &self.x_table.gen(1).name);
        let xf = Polynomial::generator_by_name(t, fp, &self.x_table.gen(2).name);
        let c1_img = self.c1_image();
        let mut rels: Vec<(Polynomial, ProductElement)> = vec![
            (c1.mul(&x3).unwrap(), self.pair_mul(&c1_img, &self.phi_x(0))),
            (c1.mul(&xz).unwrap(), self.pair_mul(&c1_img, &self.phi_x(1))),
            (
                c1.mul(&xf).unwrap().add(&x3.mul(&xz).unwrap()).unwrap(),
                self.pair_add(
                    &self.pair_mul(&c1_img, &self.phi_x(2)),
                    &self.pair_mul(&self.phi_x(0), &self.phi_x(1)),
                ),
            ),
        ];
        for e in (0..=max_degree).step_by(2) {
            for u in self.i_basis_mod_p(e) {
                let u_full = u.into_table(t);
                let u_img = ProductElement {
                    left: u.clone(),
                    right: Polynomial::zero(self.gamma.table(), fp),
                };
                for (xi, xgen) in [(0usize, &x3), (1, &xz), (2, &xf)] {
                    let xdeg = self.x_table.gen(xi).degree as usize;
                    if e + xdeg <= max_degree {
                        rels.push((u_full.mul(xgen).unwrap(), self.pair_mul(&u_img, &self.phi_x(xi))));
                    }
                }
            }
        }
        rels
    }

    /// Spanning elements of the degree-d slice of L_p (x) Q_p: every
    /// L-basis polynomial times every x-monomial of complementary degree,
    /// with an optional image for each L row.
    fn spanning_at(
        &self,
        d: usize,
        l_polys: &[Vec<Polynomial>],
        l_images: Option<&[Vec<ProductElement>]>,
    ) -> Vec<(Polynomial, Option<ProductElement>)> {
        let fp = self.fp();
        let mut out = Vec::new();
        for e in (0..=d).step_by(2) {
            if l_polys[e].is_empty() {
                continue;
            }
            let xs = DegreeSlice::enumerate(&self.x_table, fp, (d - e) as u32);
            for (li, lp) in l_polys[e].iter().enumerate() {
                let lp_full = lp.into_table(&self.full_table);
                for xm in xs.monomials() {
                    let xpoly = Polynomial::from_terms(&self.x_table, fp, [(xm.clone(), fp.one())])
                        .into_table(&self.full_table);
                    let poly = lp_full.mul(&xpoly).unwrap();
                    if poly.is_zero() {
                        continue;
                    }
                    let image = l_images
                        .map(|imgs| self.pair_mul(&imgs[e][li], &self.phi_x_monomial(xm)));
                    out.push((poly, image));
                }
            }
        }
        out
    }

    /// Hilbert function of the presented quotient (L_p (x) Q_p) / ideal,
    /// one entry per degree 0..=max_degree.
    pub fn main_quotient_dims(&self, max_degree: usize) -> Vec<usize> {
        let l = self.l_slices(max_degree);
        let relations = self.main_relations(max_degree);
        let fp = self.fp();
        (0..=max_degree)
            .map(|d| {
                let slice = DegreeSlice::enumerate(&self.full_table, fp, d as u32);
                if slice.dim() == 0 {
                    return 0;
                }
                let mut ambient: Graph<()> = Graph::new(fp);
                for (poly, _) in self.spanning_at(d, &l, None) {
                    ambient.insert(slice.coords(&poly), ());
                }
                let mut ideal: Graph<()> = Graph::new(fp);
                for (r, _) in &relations {
                    let rd = r.homogeneous_degree().expect("homogeneous relation") as usize;
                    if rd > d {
                        continue;
                    }
                    for (mono, _) in self.spanning_at(d - rd, &l, None) {
                        let prod = r.mul(&mono).unwrap();
                        if !prod.is_zero() {
                            ideal.insert(slice.coords(&prod), ());
                        }
                    }
                }
                ambient.rank() - ideal.rank()
            })
            .collect()
    }

    /// Full degreewise verification of the mod-p formula: the generator map
    /// is well defined on L_p (x) Q_p, kills every relation, surjects onto
    /// R, and dim quotient = dim R in every degree through max_degree.
    pub fn verify_main(&self, max_degree: usize, seed: u64) -> VerifyReport {
        let fp = self.fp();
        let p = self.p as usize;
        let mut report = VerifyReport::new(format!("main p={p} max-deg={max_degree}"));
        report.note(format!(
            "generator images: x3->(0,s) x{}->(0,z) x{}->(0,f) c1->(c1,y) delta->(delta,-h); \
             sign of h pinned by restriction to the tau axis; verified through degree {max_degree}",
            2 * p + 1,
            2 * p + 2,
        ));
        report.note(format!("ring-map sample seed: {seed}"));

        // L with carried images, seeded by c1, rho(I_p) and delta
        let mut l_graphs: Vec<Graph<LRow>> = Vec::with_capacity(max_degree + 1);
        let mut well_defined = true;
        let mut generated = true;
        for d in 0..=max_degree {
            let slice = DegreeSlice::enumerate(self.c_table(), fp, d as u32);
            let mut graph: Graph<LRow> = Graph::new(fp);
            if slice.dim() > 0 {
                let mut candidates: Vec<LRow> = Vec::new();
                if d == 0 {
                    candidates.push(LRow {
                        poly: Polynomial::one(self.c_table(), fp),
                        image: self.pair_one(),
                    });
                }
                if d == 2 {
                    candidates.push(LRow {
                        poly: Polynomial::generator(self.c_table(), fp, 0),
                        image: self.c1_image(),
                    });
                }
                for u in self.i_basis_mod_p(d) {
                    candidates.push(LRow {
                        image: ProductElement {
                            left: u.clone(),
                            right: Polynomial::zero(self.gamma.table(), fp),
                        },
                        poly: u,
                    });
                }
                if d == 2 * p * p - 2 * p {
                    candidates.push(LRow {
                        poly: self.kernels.delta().to_ring(fp),
                        image: self.delta_image(),
                    });
                }
                for e in 1..d {
                    if e > d - e {
                        break;
                    }
                    let left_rows: Vec<LRow> = l_graphs[e].payloads().cloned().collect();
                    let right_rows: Vec<LRow> = l_graphs[d - e].payloads().cloned().collect();
                    for a in &left_rows {
                        for b in &right_rows {
                            candidates.push(LRow {
                                poly: a.poly.mul(&b.poly).unwrap(),
                                image: self.pair_mul(&a.image, &b.image),
                            });
                        }
                    }
                }
                for cand in candidates {
                    if cand.poly.is_zero() {
                        if !Self::pair_is_zero(&cand.image) {
                            well_defined = false;
                        }
                        continue;
                    }
                    if let Some(residual) = graph.insert(slice.coords(&cand.poly), cand) {
                        if !Self::pair_is_zero(&residual.image) {
                            well_defined = false;
                        }
                    }
                }
                // the subring generated by I_p and delta (with c1) must
                // contain K_p mod p
                for k in self.k_basis_mod_p(d) {
                    let zero = LRow {
                        poly: Polynomial::zero(self.c_table(), fp),
                        image: self.pair_zero(),
                    };
                    if graph.apply(slice.coords(&k), zero).is_none() {
                        generated = false;
                    }
                }
            }
            l_graphs.push(graph);
        }
        report.push(DegreeRow::new(0, "Phi well-defined on L_p", "yes", well_defined));
        report.push(DegreeRow::new(0, "K_p inside <I_p, delta, c1>", "yes", generated));

        let l_bases: Vec<Vec<Polynomial>> = l_graphs
            .iter()
            .map(|g| g.payloads().map(|r| r.poly.clone()).collect())
            .collect();
        let l_images: Vec<Vec<ProductElement>> = l_graphs
            .iter()
            .map(|g| g.payloads().map(|r| r.image.clone()).collect())
            .collect();
        let l_public = self.l_slices(max_degree);
        let seedings_agree = (0..=max_degree).all(|d| l_public[d].len() == l_bases[d].len());
        report.push(DegreeRow::new(0, "L_p closure seedings agree", "yes", seedings_agree));

        let r_slices = self.subring_r_slices(max_degree);
        let relations = self.main_relations(max_degree);

        // ambient graphs with images, one per degree
        let mut ambient_graphs: Vec<Graph<ProductElement>> = Vec::with_capacity(max_degree + 1);
        let mut spanning_sets: Vec<Vec<(Polynomial, ProductElement)>> = Vec::with_capacity(max_degree + 1);
        let mut phi_defined = true;
        for d in 0..=max_degree {
            let slice = DegreeSlice::enumerate(&self.full_table, fp, d as u32);
            let mut graph: Graph<ProductElement> = Graph::new(fp);
            let mut spanning = Vec::new();
            for (poly, image) in self.spanning_at(d, &l_bases, Some(&l_images)) {
                let image = image.expect("images requested");
                if let Some(residual) = graph.insert(slice.coords(&poly), image.clone()) {
                    if !Self::pair_is_zero(&residual) {
                        phi_defined = false;
                    }
                }
                spanning.push((poly, image));
            }
            ambient_graphs.push(graph);
            spanning_sets.push(spanning);
        }
        report.push(DegreeRow::new(0, "Phi well-defined on L_p(x)Q_p", "yes", phi_defined));

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sample_ok = true;

        for d in 0..=max_degree {
            let slice = DegreeSlice::enumerate(&self.full_table, fp, d as u32);
            let cs = DegreeSlice::enumerate(self.c_table(), fp, d as u32);
            let gs = DegreeSlice::enumerate(self.gamma.table(), fp, d as u32);
            let ambient = &ambient_graphs[d];
            let mut relations_die = true;
            let mut ideal: Graph<()> = Graph::new(fp);
            for (r, _) in &relations {
                let rd = r.homogeneous_degree().expect("homogeneous relation") as usize;
                if rd > d {
                    continue;
                }
                for (mono, _) in self.spanning_at(d - rd, &l_bases, None) {
                    let prod = r.mul(&mono).unwrap();
                    if prod.is_zero() {
                        continue;
                    }
                    let coords = slice.coords(&prod);
                    ideal.insert(coords.clone(), ());
                    match ambient.apply(coords, self.pair_zero()) {
                        Some(img) => {
                            if !Self::pair_is_zero(&img) {
                                relations_die = false;
                            }
                        }
                        None => relations_die = false,
                    }
                }
            }
            let quotient_dim = ambient.rank() - ideal.rank();

            // surjectivity: the span of Phi-images equals the R slice
            let mut image_span: Graph<()> = Graph::new(fp);
            for (_, img) in &spanning_sets[d] {
                if !Self::pair_is_zero(img) {
                    image_span.insert(Self::pair_coords(img, &cs, &gs), ());
                }
            }
            let image_rank = image_span.rank();
            let mut joint = image_span;
            for r in &r_slices[d] {
                joint.insert(Self::pair_coords(r, &cs, &gs), ());
            }
            let surjective = image_rank == r_slices[d].len() && joint.rank() == image_rank;

            if spanning_sets[d].len() >= 2 {
                for _ in 0..2 {
                    let i = rng.gen_range(0..spanning_sets[d].len());
                    let j = rng.gen_range(0..spanning_sets[d].len());
                    let (pu, iu) = &spanning_sets[d][i];
                    let (pv, iv) = &spanning_sets[d][j];
                    let prod = pu.mul(pv).unwrap();
                    let pd = 2 * d;
                    if pd > max_degree {
                        continue;
                    }
                    let pslice = DegreeSlice::enumerate(&self.full_table, fp, pd as u32);
                    let coords = if prod.is_zero() {
                        vec![fp.zero(); pslice.dim()]
                    } else {
                        pslice.coords(&prod)
                    };
                    match ambient_graphs[pd].apply(coords, self.pair_zero()) {
                        Some(img) => {
                            if img != self.pair_mul(iu, iv) {
                                sample_ok = false;
                            }
                        }
                        None => sample_ok = false,
                    }
                }
            }

            let ok = relations_die && surjective && quotient_dim == r_slices[d].len();
            report.push(DegreeRow::new(d, r_slices[d].len(), quotient_dim, ok));
        }
        report.push(DegreeRow::new(0, "Phi multiplicative on samples", "yes", sample_ok));
        report
    }

    // -- integral pairs ---------------------------------------------------------

    pub fn zpair_zero(&self) -> ProductElement {
        ProductElement {
            left: Polynomial::zero(self.c_table(), CoeffRing::Z),
            right: Polynomial::zero(self.gamma_int.table(), CoeffRing::Z),
        }
    }

    pub fn zpair_one(&self) -> ProductElement {
        ProductElement {
            left: Polynomial::one(self.c_table(), CoeffRing::Z),
            right: Polynomial::one(self.gamma_int.table(), CoeffRing::Z),
        }
    }

    fn zpair_normalize(&self, e: ProductElement) -> ProductElement {
        ProductElement {
            left: e.left,
            right: self.gamma_int.normalize(&e.right),
        }
    }

    pub fn zpair_mul(&self, a: &ProductElement, b: &ProductElement) -> ProductElement {
        ProductElement {
            left: a.left.mul(&b.left).unwrap(),
            right: self.gamma_int.mul(&a.right, &b.right),
        }
    }

    fn zpair_sub_scaled(&self, a: &ProductElement, b: &ProductElement, q: &BigInt) -> ProductElement {
        let c = Scalar::Int(q.clone());
        self.zpair_normalize(ProductElement {
            left: a.left.sub(&b.left.scale(&c)).unwrap(),
            right: a.right.sub(&b.right.scale(&c)).unwrap(),
        })
    }

    fn zpair_neg(&self, a: &ProductElement) -> ProductElement {
        self.zpair_normalize(ProductElement {
            left: a.left.neg(),
            right: a.right.neg(),
        })
    }

    fn zpair_coords(&self, e: &ProductElement, cs: &DegreeSlice, gs: &DegreeSlice) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = cs
            .coords(&e.left)
            .into_iter()
            .map(|s| s.as_int().expect("Z coefficients").clone())
            .collect();
        v.extend(
            gs.coords(&e.right)
                .into_iter()
                .map(|s| s.as_int().expect("Z coefficients").clone()),
        );
        v
    }

    /// Hermite reduction of integral generator rows with their ring
    /// elements carried along. Row coordinates agree with their elements
    /// modulo the torsion relations, which is what the subgroup
    /// computations need. Rows reduced to zero coordinates are dropped.
    fn hnf_with_elems(
        &self,
        mut rows: Vec<(Vec<BigInt>, ProductElement)>,
    ) -> Vec<(Vec<BigInt>, ProductElement)> {
        let ncols = rows.first().map_or(0, |r| r.0.len());
        let mut r = 0;
        for col in 0..ncols {
            loop {
                let mut best: Option<(usize, BigInt)> = None;
                for (i, row) in rows.iter().enumerate().skip(r) {
                    let v = row.0[col].abs();
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
                if rows[r].0[col].is_negative() {
                    for x in rows[r].0.iter_mut() {
                        *x = -&*x;
                    }
                    rows[r].1 = self.zpair_neg(&rows[r].1);
                }
                let mut done = true;
                for i in r + 1..rows.len() {
                    if rows[i].0[col].is_zero() {
                        continue;
                    }
                    let q = rows[i].0[col].div_floor(&rows[r].0[col]);
                    if !q.is_zero() {
                        let (pivot_coords, pivot_elem) = rows[r].clone();
                        for (x, y) in rows[i].0.iter_mut().zip(&pivot_coords) {
                            *x -= &q * y;
                        }
                        rows[i].1 = self.zpair_sub_scaled(&rows[i].1, &pivot_elem, &q);
                    }
                    if !rows[i].0[col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if r < rows.len() && !rows[r].0[col].is_zero() {
                for i in 0..r {
                    let q = rows[i].0[col].div_floor(&rows[r].0[col]);
                    if !q.is_zero() {
                        let (pivot_coords, pivot_elem) = rows[r].clone();
                        for (x, y) in rows[i].0.iter_mut().zip(&pivot_coords) {
                            *x -= &q * y;
                        }
                        rows[i].1 = self.zpair_sub_scaled(&rows[i].1, &pivot_elem, &q);
                    }
                }
                r += 1;
            }
        }
        rows.truncate(r);
        rows
    }

    fn torsion_relations(&self, degree: usize, n_left: usize, n_right: usize) -> ExactMatrix {
        let n = n_left + n_right;
        if degree == 0 {
            return ExactMatrix::zero(CoeffRing::Z, n, 0);
        }
        let mut m = ExactMatrix::zero(CoeffRing::Z, n, n_right);
        for j in 0..n_right {
            m[(n_left + j, j)] = Scalar::from_i64(CoeffRing::Z, self.p as i64);
        }
        m
    }

    /// Degreewise generators and isomorphism types of the integral image
    /// subring R_0, generated by (I_p, 0), (0,s), (0,f) and (delta,-h).
    pub fn subring_r0_slices(&self, max_degree: usize) -> Vec<(AbelianGroupType, Vec<ProductElement>)> {
        let p = self.p as usize;
        let mut out: Vec<(AbelianGroupType, Vec<ProductElement>)> = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let cs = DegreeSlice::enumerate(self.c_table(), CoeffRing::Z, d as u32);
            let gs = DegreeSlice::enumerate(self.gamma_int.table(), CoeffRing::Z, d as u32);
            let (n_left, n_right) = (cs.dim(), gs.dim());
            let mut elems: Vec<ProductElement> = Vec::new();
            if d == 0 {
                elems.push(self.zpair_one());
            }
            for u in self.kernels.i_basis(d).basis {
                elems.push(ProductElement {
                    left: u,
                    right: Polynomial::zero(self.gamma_int.table(), CoeffRing::Z),
                });
            }
            if d == 3 {
                elems.push(ProductElement {
                    left: Polynomial::zero(self.c_table(), CoeffRing::Z),
                    right: self.gamma_int.s.clone(),
                });
            }
            if d == 2 * p + 2 {
                elems.push(ProductElement {
                    left: Polynomial::zero(self.c_table(), CoeffRing::Z),
                    right: self.gamma_int.f.clone(),
                });
            }
            if d == 2 * p * p - 2 * p {
                elems.push(ProductElement {
                    left: self.kernels.delta(),
                    right: self.gamma_int.normalize(&self.gamma_int.h.neg()),
                });
            }
            for e in 1..d {
                if e > d - e {
                    break;
                }
                let (_, left) = &out[e];
                let (_, right) = &out[d - e];
                for a in left {
                    for b in right {
                        elems.push(self.zpair_mul(a, b));
                    }
                }
            }
            let mut rows: Vec<(Vec<BigInt>, ProductElement)> = elems
                .into_iter()
                .map(|e| (self.zpair_coords(&e, &cs, &gs), e))
                .collect();
            if d > 0 {
                for j in 0..n_right {
                    let mut v = vec![BigInt::zero(); n_left + n_right];
                    v[n_left + j] = BigInt::from(self.p);
                    rows.push((v, self.zpair_zero()));
                }
            }
            let reduced = self.hnf_with_elems(rows);
            let generators: Vec<(Vec<BigInt>, ProductElement)> = reduced
                .into_iter()
                .filter(|(_, e)| !Self::pair_is_zero(e))
                .collect();
            let relations = self.torsion_relations(d, n_left, n_right);
            let group = subquotient_invariants(
                &relations,
                &generators.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>(),
            );
            out.push((group, generators.into_iter().map(|(_, e)| e).collect()));
        }
        out
    }

    /// Degreewise isomorphism types of the presented integral quotient
    /// K_p (x) Z[x_{2p+2}] (x) Lambda[x_3] / (p x_{2p+2}, p x_3,
    /// I_p x_{2p+2}, I_p x_3), computed as cokernels via Smith normal form.
    pub fn vistoli_quotient_types(&self, max_degree: usize) -> Vec<AbelianGroupType> {
        let p = self.p as usize;
        let xf_deg = 2 * p + 2;
        (0..=max_degree)
            .map(|d| {
                // ambient basis: (K-degree e, K-basis index, x-monomial)
                let mut basis: Vec<(usize, usize, Monomial)> = Vec::new();
                for e in (0..=d).step_by(2) {
                    let rank = self.kernels.k_basis(e).rank();
                    if rank == 0 {
                        continue;
                    }
                    let xs = DegreeSlice::enumerate(&self.x_table_int, CoeffRing::Z, (d - e) as u32);
                    for ki in 0..rank {
                        for xm in xs.monomials() {
                            basis.push((e, ki, xm.clone()));
                        }
                    }
                }
                if basis.is_empty() {
                    return AbelianGroupType::free(0);
                }
                let index_of = |e: usize, ki: usize, xm: &Monomial| -> usize {
                    basis
                        .iter()
                        .position(|(be, bk, bm)| *be == e && *bk == ki && bm == xm)
                        .expect("ambient basis element")
                };
                let mut columns: Vec<Vec<Scalar>> = Vec::new();
                let mut push_column = |entries: Vec<(usize, BigInt)>| {
                    let mut col = vec![CoeffRing::Z.zero(); basis.len()];
                    for (i, v) in entries {
                        col[i] = Scalar::Int(v);
                    }
                    columns.push(col);
                };
                // p x_{2p+2} and p x_3 times every ambient basis element
                for (xgen, xdeg) in [(1usize, xf_deg), (0, 3)] {
                    if d < xdeg {
                        continue;
                    }
                    for (e, ki, xm) in basis.iter().filter(|(e, _, xm)| e + xm.degree() as usize == d - xdeg)
                    {
                        let xg = Monomial::generator(&self.x_table_int, if xgen == 1 { 1 } else { 0 });
                        if let Some((m, sign)) = xg.mul(xm, &self.x_table_int) {
                            let v = BigInt::from(self.p as i64 * sign as i64);
                            push_column(vec![(index_of(*e, *ki, &m), v)]);
                        }
                    }
                }
                // I_{e0} x_{2p+2} and I_{e0} x_3 times every ambient basis element
                for (xidx, xdeg) in [(1usize, xf_deg), (0, 3)] {
                    for e0 in (2..=d.saturating_sub(xdeg)).step_by(2) {
                        let i0 = self.kernels.i_basis(e0);
                        if i0.rank() == 0 {
                            continue;
                        }
                        let rest = d - xdeg - e0;
                        for (e, ki, xm) in basis.iter().filter(|(e, _, xm)| e + xm.degree() as usize == rest)
                        {
                            let xg = Monomial::generator(&self.x_table_int, xidx);
                            let Some((m, sign)) = xg.mul(xm, &self.x_table_int) else {
                                continue;
                            };
                            let target_deg = e0 + e;
                            let kb = self.kernels.k_basis(*e).basis[*ki].clone();
                            for u0 in &i0.basis {
                                let prod = u0.mul(&kb).unwrap();
                                let coords = self
                                    .kernels
                                    .k_coords(target_deg, &prod)
                                    .expect("product of kernel elements stays in the kernel lattice");
                                let entries: Vec<(usize, BigInt)> = coords
                                    .into_iter()
                                    .enumerate()
                                    .filter(|(_, c)| !c.is_zero())
                                    .map(|(j, c)| {
                                        (index_of(target_deg, j, &m), c * BigInt::from(sign as i64))
                                    })
                                    .collect();
                                if !entries.is_empty() {
                                    push_column(entries);
                                }
                            }
                        }
                    }
                }
                let matrix = ExactMatrix::from_columns(CoeffRing::Z, basis.len(), columns);
                quotient_type(basis.len(), &matrix)
            })
            .collect()
    }

    /// Degreewise verification of the integral formula: the generator map
    /// kills the four relation families, and R_0 and the presented quotient
    /// have equal abelian group types in every degree through max_degree.
    pub fn verify_vistoli(&self, max_degree: usize) -> VerifyReport {
        let p = self.p as usize;
        let mut report = VerifyReport::new(format!("vistoli p={p} max-deg={max_degree}"));
        report.note(format!(
            "generator images: x3->(0,s) x{}->(0,f) I_p:u->(u,0) delta->(delta,-h); \
             verified through degree {max_degree}",
            2 * p + 2
        ));
        // relation kills, computed concretely in the product ring
        let ps = self.zpair_normalize(ProductElement {
            left: Polynomial::zero(self.c_table(), CoeffRing::Z),
            right: self.gamma_int.s.scale(&Scalar::from_i64(CoeffRing::Z, p as i64)),
        });
        let pf = self.zpair_normalize(ProductElement {
            left: Polynomial::zero(self.c_table(), CoeffRing::Z),
            right: self.gamma_int.f.scale(&Scalar::from_i64(CoeffRing::Z, p as i64)),
        });
        report.push(DegreeRow::new(3, "p*(0,s)", "0", Self::pair_is_zero(&ps)));
        report.push(DegreeRow::new(2 * p + 2, "p*(0,f)", "0", Self::pair_is_zero(&pf)));
        let mut ix_dead = true;
        for e in (2..=max_degree).step_by(2) {
            for u in self.kernels.i_basis(e).basis {
                let iu = ProductElement {
                    left: u,
                    right: Polynomial::zero(self.gamma_int.table(), CoeffRing::Z),
                };
                let s_img = ProductElement {
                    left: Polynomial::zero(self.c_table(), CoeffRing::Z),
                    right: self.gamma_int.s.clone(),
                };
                let f_img = ProductElement {
                    left: Polynomial::zero(self.c_table(), CoeffRing::Z),
                    right: self.gamma_int.f.clone(),
                };
                if !Self::pair_is_zero(&self.zpair_mul(&iu, &s_img))
                    || !Self::pair_is_zero(&self.zpair_mul(&iu, &f_img))
                {
                    ix_dead = false;
                }
            }
        }
        report.push(DegreeRow::new(0, "(I_p,0)*(0,s) and (I_p,0)*(0,f)", "0", ix_dead));

        let r0 = self.subring_r0_slices(max_degree);
        let quotient = self.vistoli_quotient_types(max_degree);
        for d in 0..=max_degree {
            let (lhs, _) = &r0[d];
            let rhs = &quotient[d];
            report.push(DegreeRow::new(d, lhs, rhs, lhs == rhs));
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_slices_p3_low_degrees() {
        let pr = Presentations::new(3);
        let l = pr.l_slices(8);
        let dims: Vec<usize> = l.iter().map(Vec::len).collect();
        // degrees 0..8: 1, 0, 1, 0, 1, 0, 1, 0, 1 (powers of c1 only below 12)
        assert_eq!(dims, vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
        // degree 4 is spanned by c1^2 (gamma_2 = -c1^2 mod 3)
        let d4 = &l[4];
        assert_eq!(d4[0].to_string(), "1*s1^2");
    }

    #[test]
    fn r_slices_p3_low_degrees() {
        let pr = Presentations::new(3);
        let r = pr.subring_r_slices(12);
        let dims: Vec<usize> = r.iter().map(Vec::len).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 1, 0, 1, 1, 2, 0, 2, 1, 2]);
        // degree 5 dies because (c1,y)(0,s) = (0, ys) = 0
        let d2 = &r[2];
        assert_eq!(d2.len(), 1);
        assert!(!d2[0].left.is_zero() && !d2[0].right.is_zero());
    }

    #[test]
    fn quotient_dims_match_r_p3() {
        let pr = Presentations::new(3);
        let dims = pr.main_quotient_dims(12);
        let r: Vec<usize> = pr.subring_r_slices(12).iter().map(Vec::len).collect();
        assert_eq!(dims, r);
        assert_eq!(dims[3], 1);
        assert_eq!(dims[5], 0);
    }

    #[test]
    fn verify_main_p3_through_16() {
        let pr = Presentations::new(3);
        let report = pr.verify_main(16, 7);
        assert!(report.passed(), "{}", report.to_table());
    }

    #[test]
    fn r0_types_p3() {
        let pr = Presentations::new(3);
        let r0 = pr.subring_r0_slices(8);
        let shown: Vec<String> = r0.iter().map(|(t, _)| t.to_string()).collect();
        assert_eq!(shown[0], "Z");
        assert_eq!(shown[3], "Z/3");
        assert_eq!(shown[4], "Z");
        assert_eq!(shown[7], "0");
        assert_eq!(shown[8], "Z+Z/3");
    }

    #[test]
    fn vistoli_quotient_types_p3() {
        let pr = Presentations::new(3);
        let q = pr.vistoli_quotient_types(8);
        let shown: Vec<String> = q.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, vec!["Z", "0", "0", "Z/3", "Z", "0", "Z", "0", "Z+Z/3"]);
    }

    #[test]
    fn verify_vistoli_p3_through_12() {
        let pr = Presentations::new(3);
        let report = pr.verify_vistoli(12);
        assert!(report.passed(), "{}", report.to_table());
    }

    #[test]
    fn closure_is_stable_p3() {
        let pr = Presentations::new(3);
        let max = 10;
        let r = pr.subring_r_slices(max);
        let fp = CoeffRing::Fp(3);
        for d in 2..=max {
            let cs = DegreeSlice::enumerate(pr.c_table(), fp, d as u32);
            let gs = DegreeSlice::enumerate(pr.gamma.table(), fp, d as u32);
            let mut span: Graph<()> = Graph::new(fp);
            for e in &r[d] {
                span.insert(Presentations::pair_coords(e, &cs, &gs), ());
            }
            for e in 1..d {
                for a in &r[e] {
                    for b in &r[d - e] {
                        let prod = pr.pair_mul(a, b);
                        if !Presentations::pair_is_zero(&prod) {
                            let reinserted = span.insert(Presentations::pair_coords(&prod, &cs, &gs), ());
                            assert!(reinserted.is_some(), "closure not stable at degree {d}");
                        }
                    }
                }
            }
        }
    }
}

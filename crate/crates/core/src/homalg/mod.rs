//! Homological algebra of Z/2-graded finitely presented right modules over a
//! [`CategoryRing`].
//!
//! Ext is computed from a free resolution `F_*` of the first argument. By
//! the Yoneda lemma a map out of a free module is determined by the images
//! of the entry units, so `Hom(F_n, N)` is the direct sum of the values
//! `N(H_j, e_j)` and the cochain differentials are actions of the ring
//! elements recorded by the resolution.

mod module;

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;

pub use module::{yoneda, AbGroup, Degree, FreeModule, GradedModule, ModuleMap};

use crate::error::Result;
use crate::intmat::{self, preimage, solve, zero_vec, Int, Lattice, Matrix};
use crate::normalform::CategoryRing;
use module::check_same_ring;

/// Invariant factors of a group, `0` standing for `Z`.
pub type Invariants = Vec<Int>;

/// `Ext^n(M, Σ^d N)` for `d = 0, 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtResult {
    pub n: usize,
    pub degrees: [Invariants; 2],
}

impl ExtResult {
    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(Vec::is_empty)
    }
}

impl fmt::Display for ExtResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ext^{}: degree 0: {}; degree 1: {}",
            self.n,
            intmat::format_invariants(&self.degrees[0]),
            intmat::format_invariants(&self.degrees[1])
        )
    }
}

/// Degree-preserving maps `M -> N` as an abelian group with explicit
/// generators, one per invariant factor.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub invariants: Invariants,
    pub generators: Vec<ModuleMap>,
}

/// The group `lattice / sub` for `sub ⊆ lattice`, via coordinates in the
/// lattice basis. Returns invariants and generators in ambient coordinates.
fn subquotient(lattice: &Lattice, sub: &[Vec<Int>]) -> (Invariants, Vec<Vec<Int>>) {
    let basis = lattice.basis();
    let coords: Vec<Vec<Int>> = sub
        .iter()
        .map(|v| lattice.coordinates(v).expect("sublattice lies in the lattice"))
        .collect();
    let q = intmat::quotient(basis.len(), &coords);
    let gens = q
        .generators
        .iter()
        .map(|c| {
            let mut v = zero_vec(lattice.dim());
            for (ci, b) in c.iter().zip(&basis) {
                intmat::axpy(&mut v, ci, b);
            }
            v
        })
        .collect();
    (q.invariants, gens)
}

pub fn hom_module(m: &Arc<GradedModule>, n: &Arc<GradedModule>) -> Result<HomGroup> {
    check_same_ring(m.ring(), n.ring())?;
    let ring = m.ring().clone();
    let objects = ring.object_count();
    // unknown F_{x,e}[r, c] at offset[x][e] + r * dim M(x, e) + c
    let mut offset = vec![[0usize; 2]; objects];
    let mut nvars = 0;
    for x in 0..objects {
        for e in 0..2 {
            offset[x][e] = nvars;
            nvars += n.dim(x, e) * m.dim(x, e);
        }
    }
    let var = |x: usize, e: usize, r: usize, c: usize| offset[x][e] + r * m.dim(x, e) + c;

    // constraint blocks: each is dim N(x, e) rows taken modulo N's relations
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut rels: Vec<(usize, usize, usize)> = Vec::new(); // (first row, object, degree)
    let mut push_block = |block: Vec<Vec<Int>>, x: usize, e: usize, rows: &mut Vec<Vec<Int>>| {
        rels.push((rows.len(), x, e));
        rows.extend(block);
    };
    for x in 0..objects {
        for e in 0..2 {
            for rho in m.value(x, e).relation_basis() {
                let block = (0..n.dim(x, e))
                    .map(|r| {
                        let mut row = zero_vec(nvars);
                        for (c, v) in rho.iter().enumerate() {
                            row[var(x, e, r, c)] += v;
                        }
                        row
                    })
                    .collect();
                push_block(block, x, e, &mut rows);
            }
        }
    }
    for (g, sym) in ring.presentation().generators.iter().enumerate() {
        if sym.is_identity() {
            continue;
        }
        let (x, y) = (sym.source, sym.target);
        for e in 0..2 {
            let am = m.generator_action(g, e);
            let an = n.generator_action(g, e);
            for j in 0..m.dim(y, e) {
                // F_x (A^M e_j) - A^N (F_y e_j)
                let block = (0..n.dim(x, e))
                    .map(|r| {
                        let mut row = zero_vec(nvars);
                        for c in 0..m.dim(x, e) {
                            row[var(x, e, r, c)] += &am[(c, j)];
                        }
                        for s in 0..n.dim(y, e) {
                            row[var(y, e, s, j)] -= &an[(r, s)];
                        }
                        row
                    })
                    .collect();
                push_block(block, x, e, &mut rows);
            }
        }
    }
    let height = rows.len();
    let constraint = Matrix::from_rows(height, nvars, rows);
    let mut sub = Vec::new();
    for &(start, x, e) in &rels {
        for lam in n.value(x, e).relation_basis() {
            let mut v = zero_vec(height);
            v[start..start + lam.len()].clone_from_slice(&lam);
            sub.push(v);
        }
    }
    let maps = preimage(&constraint, &sub);

    let mut null = Vec::new();
    for x in 0..objects {
        for e in 0..2 {
            for lam in n.value(x, e).relation_basis() {
                for c in 0..m.dim(x, e) {
                    let mut v = zero_vec(nvars);
                    for (r, l) in lam.iter().enumerate() {
                        v[var(x, e, r, c)] = l.clone();
                    }
                    null.push(v);
                }
            }
        }
    }
    let (invariants, gens) = subquotient(&maps, &null);
    let generators = gens
        .into_iter()
        .map(|v| {
            let matrices = (0..objects)
                .map(|x| {
                    [0, 1].map(|e| {
                        let (rr, cc) = (n.dim(x, e), m.dim(x, e));
                        let start = offset[x][e];
                        Matrix::from_rows(rr, cc, (0..rr).map(|r| v[start + r * cc..start + (r + 1) * cc].to_vec()).collect())
                    })
                })
                .collect();
            ModuleMap::new_unchecked(m.clone(), n.clone(), matrices)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomGroup { invariants, generators })
}

/// Surjection from a free module onto `M`.
#[derive(Clone, Debug)]
pub struct FreeCover {
    pub free: FreeModule,
    pub map: ModuleMap,
    /// Generator index in `M(H_j, e_j)` hit by the unit of each entry.
    pub generators: Vec<usize>,
}

/// Submodule of `m` generated by the listed `(object, degree, generator)`
/// elements, as lattices (including the relations) per object and degree.
fn generated_lattices(m: &GradedModule, gens: &[(usize, Degree, usize)]) -> Vec<[Lattice; 2]> {
    let ring = m.ring();
    (0..ring.object_count())
        .map(|y| {
            [0, 1].map(|e| {
                let dim = m.dim(y, e);
                let mut vs: Vec<Vec<Int>> = m.value(y, e).relation_basis();
                for &(x, d, j) in gens {
                    if d != e {
                        continue;
                    }
                    for b in ring.pair_range(y, x) {
                        vs.push(m.action(b, e).column(j));
                    }
                }
                Lattice::from_generators(dim, vs)
            })
        })
        .collect()
}

fn generates_element(m: &GradedModule, gens: &[(usize, Degree, usize)], target: (usize, Degree, usize)) -> bool {
    let (x, e, j) = target;
    let ring = m.ring();
    let mut vs: Vec<Vec<Int>> = m.value(x, e).relation_basis();
    for &(h, d, i) in gens {
        if d != e {
            continue;
        }
        for b in ring.pair_range(x, h) {
            vs.push(m.action(b, e).column(i));
        }
    }
    let lat = Lattice::from_generators(m.dim(x, e), vs);
    lat.contains(&intmat::unit_vec(m.dim(x, e), j))
}

/// A free cover built from the listed generators of the values of `M`.
///
/// Generators already in the submodule generated by earlier ones are
/// skipped, and a second pass drops any kept generator that the others
/// generate, so representable modules are covered by a single entry.
pub fn free_cover(m: &Arc<GradedModule>) -> Result<FreeCover> {
    let ring = m.ring().clone();
    let n = ring.object_count();
    // larger objects first: their generators tend to generate the others
    let candidates: Vec<(usize, Degree, usize)> = (0..n)
        .rev()
        .flat_map(|x| (0..2).flat_map(move |e| (0..m.dim(x, e)).map(move |j| (x, e, j))))
        .filter(|&(x, e, j)| !m.value(x, e).is_zero(&intmat::unit_vec(m.dim(x, e), j)))
        .collect();
    let mut kept: Vec<(usize, Degree, usize)> = Vec::new();
    let mut lattices = generated_lattices(m, &kept);
    for &c in &candidates {
        let (x, e, j) = c;
        if lattices[x][e].contains(&intmat::unit_vec(m.dim(x, e), j)) {
            continue;
        }
        kept.push(c);
        lattices = generated_lattices(m, &kept);
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<_> = kept.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, c)| *c).collect();
        if generates_element(m, &others, kept[i]) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    let free = FreeModule::new(ring.clone(), kept.iter().map(|&(x, e, _)| (x, e)).collect());
    let matrices = (0..n)
        .map(|y| {
            [0, 1].map(|e| {
                let mut columns = Vec::new();
                for &(x, _, g) in kept.iter().filter(|c| c.1 == e) {
                    for b in ring.pair_range(y, x) {
                        columns.push(m.action(b, e).column(g));
                    }
                }
                Matrix::from_columns(m.dim(y, e), &columns)
            })
        })
        .collect();
    let map = ModuleMap::new_unchecked(free.module().clone(), m.clone(), matrices)?;
    Ok(FreeCover { free, map, generators: kept.iter().map(|c| c.2).collect() })
}

/// Kernel of a module map, with its inclusion into the source.
pub fn kernel(f: &ModuleMap) -> Result<(Arc<GradedModule>, ModuleMap)> {
    let m = f.source().clone();
    let target = f.target().clone();
    let ring = m.ring().clone();
    let n = ring.object_count();
    let lattices: Vec<[Lattice; 2]> = (0..n)
        .into_par_iter()
        .map(|x| [0, 1].map(|e| preimage(f.matrix(x, e), &target.value(x, e).relation_basis())))
        .collect();
    let mut values = Vec::with_capacity(n);
    for (x, pair) in lattices.iter().enumerate() {
        values.push([0, 1].map(|e| {
            let lat = &pair[e];
            let names = (0..lat.rank()).map(|i| format!("k{i}")).collect();
            let relations: Vec<Vec<Int>> = m
                .value(x, e)
                .relation_basis()
                .iter()
                .map(|r| lat.coordinates(r).expect("relations lie in the kernel"))
                .collect();
            AbGroup::new(names, relations).expect("coordinates fit")
        }));
    }
    let actions = ring
        .basis()
        .iter()
        .enumerate()
        .map(|(b, basis)| {
            [0, 1].map(|e| {
                let (lx, ly) = (&lattices[basis.source][e], &lattices[basis.target][e]);
                let columns: Vec<Vec<Int>> = ly
                    .basis()
                    .iter()
                    .map(|v| lx.coordinates(&m.action(b, e).mul_vec(v)).expect("kernel is a submodule"))
                    .collect();
                Matrix::from_columns(lx.rank(), &columns)
            })
        })
        .collect();
    let k = Arc::new(GradedModule::new_unchecked(ring.clone(), values, actions)?);
    let inclusion = (0..n)
        .map(|x| [0, 1].map(|e| Matrix::from_columns(m.dim(x, e), &lattices[x][e].basis())))
        .collect();
    let iota = ModuleMap::new_unchecked(k.clone(), m, inclusion)?;
    Ok((k, iota))
}

/// A free resolution `... -> F_1 -> F_0 -> M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub module: Arc<GradedModule>,
    pub free: Vec<FreeModule>,
    pub augmentation: ModuleMap,
    /// `differentials[n - 1]` is `d_n: F_n -> F_{n-1}`.
    pub differentials: Vec<ModuleMap>,
    /// `images[n - 1][k]` is `d_n(1_{H_k})` in `F_{n-1}(H_k, e_k)`.
    pub images: Vec<Vec<Vec<Int>>>,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differentials.is_empty()
    }
}

pub fn free_resolution(m: &Arc<GradedModule>, length: usize) -> Result<Resolution> {
    let cover = free_cover(m)?;
    let mut free = vec![cover.free.clone()];
    let augmentation = cover.map.clone();
    let mut differentials = Vec::new();
    let mut images = Vec::new();
    let mut current = cover.map;
    for _ in 0..length {
        let (k, iota) = kernel(&current)?;
        let next = free_cover(&k)?;
        let d = next.map.then(&iota)?;
        let imgs = next
            .free
            .entries()
            .iter()
            .zip(&next.generators)
            .map(|(&(h, e), &g)| iota.matrix(h, e).column(g))
            .collect();
        free.push(next.free.clone());
        differentials.push(d);
        images.push(imgs);
        current = next.map;
    }
    Ok(Resolution { module: m.clone(), free, augmentation, differentials, images })
}

/// The cochain group `Hom(F, Σ^d N) = ⊕_j N(H_j, e_j + d)`.
fn cochain_group(f: &FreeModule, n: &GradedModule, d: Degree) -> (Vec<std::ops::Range<usize>>, AbGroup) {
    let mut ranges = Vec::new();
    let mut groups = Vec::new();
    let mut at = 0;
    for &(h, e) in f.entries() {
        let g = n.value(h, (e + d) % 2);
        ranges.push(at..at + g.dim());
        at += g.dim();
        groups.push(g);
    }
    (ranges, AbGroup::direct_sum(&groups))
}

/// The cochain differential `Hom(F_{k}, N) -> Hom(F_{k+1}, N)` dual to `d_{k+1}`.
fn cochain_differential(res: &Resolution, k: usize, n: &GradedModule, d: Degree) -> Matrix {
    let (fk, fk1) = (&res.free[k], &res.free[k + 1]);
    let (src_ranges, src) = cochain_group(fk, n, d);
    let (dst_ranges, dst) = cochain_group(fk1, n, d);
    let mut out = Matrix::zeros(dst.dim(), src.dim());
    for (l, &(hl, el)) in fk1.entries().iter().enumerate() {
        let image = &res.images[k][l];
        for (j, &(_, ej)) in fk.entries().iter().enumerate() {
            if ej != el {
                continue;
            }
            let u = fk.component(hl, j, image);
            if u.is_zero() {
                continue;
            }
            let a = n.element_action(&u, (el + d) % 2);
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    out[(dst_ranges[l].start + r, src_ranges[j].start + c)] = a[(r, c)].clone();
                }
            }
        }
    }
    out
}

/// Cohomology at `Hom(F_k, Σ^d N)` of the cochain complex of a resolution.
fn cohomology(res: &Resolution, k: usize, n: &GradedModule, d: Degree) -> Invariants {
    let (_, group) = cochain_group(&res.free[k], n, d);
    let (_, next) = cochain_group(&res.free[k + 1], n, d);
    let dout = cochain_differential(res, k, n, d);
    let cocycles = preimage(&dout, &next.relation_basis());
    let mut boundaries = group.relation_basis();
    if k > 0 {
        let din = cochain_differential(res, k - 1, n, d);
        boundaries.extend((0..din.cols()).map(|j| din.column(j)));
    }
    subquotient(&cocycles, &boundaries).0
}

/// `Ext^k(M, Σ^d N)` for `d = 0, 1`.
pub fn ext(m: &Arc<GradedModule>, n: &Arc<GradedModule>, k: usize) -> Result<ExtResult> {
    check_same_ring(m.ring(), n.ring())?;
    let res = free_resolution(m, k + 1)?;
    Ok(ext_from_resolution(&res, n, k))
}

pub fn ext_from_resolution(res: &Resolution, n: &GradedModule, k: usize) -> ExtResult {
    assert!(res.len() > k, "resolution too short for Ext^{k}");
    ExtResult { n: k, degrees: [0, 1].map(|d| cohomology(res, k, n, d)) }
}

/// Whether `M` is projective: the canonical cover `F -> M` with kernel
/// `K -> F` splits, decided as the existence of a retraction `F -> K`.
pub fn is_projective(m: &Arc<GradedModule>) -> Result<bool> {
    let cover = free_cover(m)?;
    let (k, iota) = kernel(&cover.map)?;
    Ok(has_retraction(&cover.free, &k, &iota))
}

/// Whether some module map `ρ: F -> K` satisfies `ρ ∘ ι = id_K`.
///
/// `ρ` is determined by the images `y_j ∈ K(H_j, e_j)` of the entry units;
/// the condition is an affine integer system in the `y_j` and auxiliary
/// relation multipliers.
fn has_retraction(f: &FreeModule, k: &GradedModule, iota: &ModuleMap) -> bool {
    let ring = k.ring();
    let entries = f.entries();
    let mut y_offset = Vec::with_capacity(entries.len());
    let mut ny = 0;
    for &(h, e) in entries {
        y_offset.push(ny);
        ny += k.dim(h, e);
    }
    // one block of equations per generator g of K(x, e): Σ_j A^K(u_j) y_j ≡ g
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut rhs: Vec<Int> = Vec::new();
    let mut aux: Vec<(usize, Vec<Int>)> = Vec::new(); // (first row, relation vector)
    for x in 0..ring.object_count() {
        for e in 0..2 {
            let kd = k.dim(x, e);
            let rel = k.value(x, e).relation_basis();
            for g in 0..kd {
                let image = iota.matrix(x, e).column(g);
                let start = rows.len();
                let mut block = vec![zero_vec(ny); kd];
                for (j, &(_, ej)) in entries.iter().enumerate() {
                    if ej != e {
                        continue;
                    }
                    let u = f.component(x, j, &image);
                    if u.is_zero() {
                        continue;
                    }
                    let a = k.element_action(&u, e);
                    for r in 0..kd {
                        for c in 0..a.cols() {
                            block[r][y_offset[j] + c] += &a[(r, c)];
                        }
                    }
                }
                rows.extend(block);
                rhs.extend(intmat::unit_vec(kd, g));
                for lam in &rel {
                    aux.push((start, lam.clone()));
                }
            }
        }
    }
    if rows.is_empty() {
        return true;
    }
    let height = rows.len();
    let width = ny + aux.len();
    let mut full = Matrix::zeros(height, width);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            full[(i, j)] = v.clone();
        }
    }
    for (a, (start, lam)) in aux.iter().enumerate() {
        for (r, v) in lam.iter().enumerate() {
            full[(start + r, ny + a)] = -v.clone();
        }
    }
    solve(&full, &rhs).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveDimension {
    Exactly(usize),
    AboveCap(usize),
}

impl fmt::Display for ProjectiveDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveDimension::Exactly(n) => write!(f, "{n}"),
            ProjectiveDimension::AboveCap(cap) => write!(f, "> {cap}"),
        }
    }
}

/// The least `n <= cap` whose `n`-th syzygy is projective.
pub fn projective_dimension(m: &Arc<GradedModule>, cap: usize) -> Result<ProjectiveDimension> {
    let mut current = m.clone();
    for n in 0..=cap {
        let cover = free_cover(&current)?;
        let (k, iota) = kernel(&cover.map)?;
        if has_retraction(&cover.free, &k, &iota) {
            return Ok(ProjectiveDimension::Exactly(n));
        }
        current = k;
    }
    Ok(ProjectiveDimension::AboveCap(cap))
}

/// The two end terms of the universal coefficient sequence for `M`, `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UctTerms {
    pub hom: ExtResult,
    pub ext1_shifted: ExtResult,
    /// Whether `M` has projective dimension at most one, so that the terms
    /// assemble into a short exact sequence.
    pub pd_check: bool,
}

pub fn uct_terms(m: &Arc<GradedModule>, n: &Arc<GradedModule>) -> Result<UctTerms> {
    check_same_ring(m.ring(), n.ring())?;
    let hom = ext(m, n, 0)?;
    let ext1_shifted = ext(&Arc::new(m.suspend()), n, 1)?;
    let pd_check = matches!(projective_dimension(m, 1)?, ProjectiveDimension::Exactly(_));
    Ok(UctTerms { hom, ext1_shifted, pd_check })
}

/// A cyclic module `Hom(-, H) / <b>` for a basis monomial `b: X -> H`.
#[derive(Clone, Debug)]
pub struct CyclicQuotient {
    pub object: usize,
    pub basis: usize,
    pub module: Arc<GradedModule>,
}

/// All quotients of degree-0 representable modules by one basis monomial.
pub fn cyclic_quotients(ring: &Arc<CategoryRing>) -> Result<Vec<CyclicQuotient>> {
    let mut out = Vec::new();
    for h in 0..ring.object_count() {
        let p = FreeModule::new(ring.clone(), vec![(h, 0)]);
        for x in 0..ring.object_count() {
            for b in ring.pair_range(x, h) {
                let mut v = zero_vec(p.module().dim(x, 0));
                v[ring.local_index(b)] = Int::one();
                let module = Arc::new(p.module().quotient_by(&[(x, 0, v)])?);
                out.push(CyclicQuotient { object: h, basis: b, module });
            }
        }
    }
    Ok(out)
}

/// Projective dimensions of all cyclic quotients, in enumeration order.
pub fn cyclic_quotient_dimensions(
    ring: &Arc<CategoryRing>,
    cap: usize,
) -> Result<Vec<(CyclicQuotient, ProjectiveDimension)>> {
    cyclic_quotients(ring)?
        .into_par_iter()
        .map(|q| {
            let pd = projective_dimension(&q.module, cap)?;
            Ok((q, pd))
        })
        .collect()
}

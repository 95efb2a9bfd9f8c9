//! Finitely presented abelian groups, graded right modules over a category
//! ring, free modules and module maps.

use std::ops::Range;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::SubgroupId;
use crate::intmat::{self, is_zero_vec, zero_vec, Int, Lattice, Matrix};
use crate::normalform::{CategoryRing, RingElement};
use crate::serial::{self, JsonInt};

/// A Z/2 degree, `0` or `1`.
pub type Degree = usize;

/// `Z^n / span(relations)` on named generators.
#[derive(Clone, Debug)]
pub struct AbGroup {
    names: Vec<String>,
    relations: Vec<Vec<Int>>,
    lattice: Lattice,
}

impl PartialEq for AbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.relations == other.relations
    }
}

impl Eq for AbGroup {}

impl AbGroup {
    pub fn new(names: Vec<String>, relations: Vec<Vec<Int>>) -> Result<Self> {
        if let Some(r) = relations.iter().find(|r| r.len() != names.len()) {
            return Err(Error::MalformedModule(format!(
                "relation of length {} on {} generators",
                r.len(),
                names.len()
            )));
        }
        let lattice = Lattice::from_generators(names.len(), relations.iter().cloned());
        Ok(AbGroup { names, relations, lattice })
    }

    pub fn free(names: Vec<String>) -> Self {
        let n = names.len();
        AbGroup { names, relations: Vec::new(), lattice: Lattice::new(n) }
    }

    pub fn zero() -> Self {
        Self::free(Vec::new())
    }

    /// `Z/order` on one generator; order 0 gives `Z`.
    pub fn cyclic(name: &str, order: i64) -> Self {
        let relations = if order == 0 { vec![] } else { vec![vec![Int::from(order)]] };
        AbGroup::new(vec![name.to_string()], relations).expect("one generator")
    }

    /// Direct sum of cyclic groups with the given orders (0 for `Z`).
    pub fn from_orders(prefix: &str, orders: &[i64]) -> Self {
        let n = orders.len();
        let names = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let relations = orders
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(i, &o)| {
                let mut r = zero_vec(n);
                r[i] = Int::from(o);
                r
            })
            .collect();
        AbGroup::new(names, relations).expect("well-formed relations")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[Vec<Int>] {
        &self.relations
    }

    /// Hermite basis of the relation lattice.
    pub fn relation_basis(&self) -> Vec<Vec<Int>> {
        self.lattice.basis()
    }

    pub fn relation_lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        let mut w = v.to_vec();
        self.lattice.reduce(&mut w);
        w
    }

    pub fn is_zero(&self, v: &[Int]) -> bool {
        self.lattice.contains(v)
    }

    /// Invariant factors, `0` standing for `Z`.
    pub fn invariants(&self) -> Vec<Int> {
        intmat::quotient(self.dim(), &self.relations).invariants
    }

    pub fn is_trivial(&self) -> bool {
        self.lattice.rank() == self.dim()
            && self.lattice.basis_refs().all(|(p, v)| v[p].is_one())
    }

    pub fn direct_sum(groups: &[&AbGroup]) -> AbGroup {
        let n: usize = groups.iter().map(|g| g.dim()).sum();
        let mut names = Vec::with_capacity(n);
        let mut relations = Vec::new();
        let mut offset = 0;
        for g in groups {
            names.extend(g.names.iter().cloned());
            for r in &g.relations {
                let mut v = zero_vec(n);
                v[offset..offset + g.dim()].clone_from_slice(r);
                relations.push(v);
            }
            offset += g.dim();
        }
        AbGroup::new(names, relations).expect("block relations")
    }

    fn with_relations(&self, extra: impl IntoIterator<Item = Vec<Int>>) -> AbGroup {
        let mut relations = self.relations.clone();
        relations.extend(extra.into_iter().filter(|v| !is_zero_vec(v)));
        AbGroup::new(self.names.clone(), relations).expect("same dimension")
    }
}

/// A Z/2-graded right module over a [`CategoryRing`], concentrated in ring
/// degree 0.
///
/// For a basis monomial `b: X -> Y` and a degree `e`, `action(b, e)` is the
/// matrix of `M(Y, e) -> M(X, e)` (columns are images of the generators of
/// `M(Y, e)`).
#[derive(Clone, Debug)]
pub struct GradedModule {
    ring: Arc<CategoryRing>,
    values: Vec<[AbGroup; 2]>,
    actions: Vec<[Matrix; 2]>,
}

impl PartialEq for GradedModule {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.values == other.values && self.actions == other.actions
    }
}

pub(crate) fn same_ring(a: &Arc<CategoryRing>, b: &Arc<CategoryRing>) -> bool {
    Arc::ptr_eq(a, b) || a.content_hash() == b.content_hash()
}

pub(crate) fn check_same_ring(a: &Arc<CategoryRing>, b: &Arc<CategoryRing>) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

impl GradedModule {
    /// Builds and validates a module.
    pub fn new(ring: Arc<CategoryRing>, values: Vec<[AbGroup; 2]>, actions: Vec<[Matrix; 2]>) -> Result<Self> {
        let m = Self::new_unchecked(ring, values, actions)?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        ring: Arc<CategoryRing>,
        values: Vec<[AbGroup; 2]>,
        actions: Vec<[Matrix; 2]>,
    ) -> Result<Self> {
        if values.len() != ring.object_count() {
            return Err(Error::MalformedModule(format!(
                "{} values for {} objects",
                values.len(),
                ring.object_count()
            )));
        }
        if actions.len() != ring.total_rank() {
            return Err(Error::MalformedModule(format!(
                "{} actions for {} basis monomials",
                actions.len(),
                ring.total_rank()
            )));
        }
        for (b, basis) in ring.basis().iter().enumerate() {
            for e in 0..2 {
                let shape = (values[basis.source][e].dim(), values[basis.target][e].dim());
                let a = &actions[b][e];
                if (a.rows(), a.cols()) != shape {
                    return Err(Error::MalformedModule(format!(
                        "action of basis monomial {b} in degree {e} has shape {}x{}, expected {}x{}",
                        a.rows(),
                        a.cols(),
                        shape.0,
                        shape.1
                    )));
                }
            }
        }
        Ok(GradedModule { ring, values, actions })
    }

    pub fn zero(ring: Arc<CategoryRing>) -> Self {
        let n = ring.object_count();
        let values = vec![[AbGroup::zero(), AbGroup::zero()]; n];
        let actions = vec![[Matrix::zeros(0, 0), Matrix::zeros(0, 0)]; ring.total_rank()];
        GradedModule { ring, values, actions }
    }

    /// A module over a ring with a single object and basis `{1}`, i.e. a
    /// Z/2-graded abelian group.
    pub fn abelian(ring: Arc<CategoryRing>, even: AbGroup, odd: AbGroup) -> Result<Self> {
        if ring.object_count() != 1 || ring.total_rank() != 1 {
            return Err(Error::MalformedModule("graded abelian groups need the ring Z".into()));
        }
        let actions = vec![[Matrix::identity(even.dim()), Matrix::identity(odd.dim())]];
        GradedModule::new(ring, vec![[even, odd]], actions)
    }

    pub fn ring(&self) -> &Arc<CategoryRing> {
        &self.ring
    }

    pub fn value(&self, object: usize, degree: Degree) -> &AbGroup {
        &self.values[object][degree]
    }

    pub fn dim(&self, object: usize, degree: Degree) -> usize {
        self.values[object][degree].dim()
    }

    pub fn action(&self, basis: usize, degree: Degree) -> &Matrix {
        &self.actions[basis][degree]
    }

    /// The action of a ring element `X -> Y`, a matrix `M(Y) -> M(X)`.
    pub fn element_action(&self, r: &RingElement, degree: Degree) -> Matrix {
        let mut out = Matrix::zeros(self.dim(r.source, degree), self.dim(r.target, degree));
        let range = self.ring.pair_range(r.source, r.target);
        for (c, b) in r.coefficients.iter().zip(range) {
            if !c.is_zero() {
                out.add_scaled(c, &self.actions[b][degree]);
            }
        }
        out
    }

    pub fn generator_action(&self, g: usize, degree: Degree) -> Matrix {
        self.element_action(self.ring.generator_image(g), degree)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(AbGroup::is_trivial)
    }

    /// Re-checks well-definedness, unit laws, torsion compatibility and
    /// functoriality on every composable pair of basis monomials.
    pub fn validate(&self) -> Result<()> {
        let ring = &self.ring;
        let bad = |m: String| Err(Error::MalformedModule(m));
        for (b, basis) in ring.basis().iter().enumerate() {
            for e in 0..2 {
                let a = &self.actions[b][e];
                let (src, tgt) = (&self.values[basis.source][e], &self.values[basis.target][e]);
                for r in tgt.relations() {
                    if !src.is_zero(&a.mul_vec(r)) {
                        return bad(format!("action of basis monomial {b} in degree {e} does not respect relations"));
                    }
                }
                if basis.word.is_empty() {
                    for j in 0..a.cols() {
                        let mut col = a.column(j);
                        col[j] -= Int::one();
                        if !src.is_zero(&col) {
                            return bad(format!("identity of object {} does not act as the identity", basis.source));
                        }
                    }
                }
                if let Some(n) = &basis.torsion {
                    for j in 0..a.cols() {
                        let col: Vec<Int> = a.column(j).iter().map(|x| x * n).collect();
                        if !src.is_zero(&col) {
                            return bad(format!("basis monomial {b} has order {n} but its action does not"));
                        }
                    }
                }
            }
        }
        // A_{b' ∘ b} = A_b A_{b'} for b: X -> Y, b': Y -> Z
        for (b, bb) in ring.basis().iter().enumerate() {
            for z in 0..ring.object_count() {
                for b2 in ring.pair_range(bb.target, z) {
                    let composite = ring.then(&ring.basis_element(b), &ring.basis_element(b2));
                    for e in 0..2 {
                        let lhs = self.element_action(&composite, e);
                        let rhs = self.actions[b][e].mul(&self.actions[b2][e]);
                        let diff = lhs.sub(&rhs);
                        let src = &self.values[bb.source][e];
                        if (0..diff.cols()).any(|j| !src.is_zero(&diff.column(j))) {
                            return Err(Error::NotFunctorial { first: b, second: b2 });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Swaps the two degrees at every object.
    pub fn suspend(&self) -> Self {
        GradedModule {
            ring: self.ring.clone(),
            values: self.values.iter().map(|[a, b]| [b.clone(), a.clone()]).collect(),
            actions: self.actions.iter().map(|[a, b]| [b.clone(), a.clone()]).collect(),
        }
    }

    pub fn direct_sum(modules: &[&GradedModule]) -> Result<Self> {
        let Some(first) = modules.first() else {
            return Err(Error::MalformedModule("empty direct sum has no ring".into()));
        };
        let ring = first.ring.clone();
        for m in modules {
            check_same_ring(&ring, &m.ring)?;
        }
        let values = (0..ring.object_count())
            .map(|x| {
                [0, 1].map(|e| AbGroup::direct_sum(&modules.iter().map(|m| m.value(x, e)).collect::<Vec<_>>()))
            })
            .collect();
        let actions = (0..ring.total_rank())
            .map(|b| [0, 1].map(|e| block_diagonal(&modules.iter().map(|m| m.action(b, e)).collect::<Vec<_>>())))
            .collect();
        Ok(GradedModule { ring, values, actions })
    }

    /// The quotient by the submodule generated by the given elements
    /// `(object, degree, coordinates)`.
    pub fn quotient_by(&self, elements: &[(usize, Degree, Vec<Int>)]) -> Result<Self> {
        let ring = &self.ring;
        let mut values = self.values.clone();
        for (x, e, v) in elements {
            if *x >= ring.object_count() || *e > 1 || v.len() != self.dim(*x, *e) {
                return Err(Error::MalformedModule("quotient element does not fit the module".into()));
            }
        }
        for (y, value) in values.iter_mut().enumerate() {
            for (e, group) in value.iter_mut().enumerate() {
                let extra: Vec<Vec<Int>> = elements
                    .iter()
                    .filter(|(_, d, _)| *d == e)
                    .flat_map(|(x, _, v)| ring.pair_range(y, *x).map(move |b| self.actions[b][e].mul_vec(v)))
                    .collect();
                *group = group.with_relations(extra);
            }
        }
        Ok(GradedModule { ring: ring.clone(), values, actions: self.actions.clone() })
    }

    pub fn to_json(&self) -> String {
        serial::canonical_json(&ModuleFile::from(self))
    }

    /// Parses and validates a module defined over `ring`.
    pub fn from_json(s: &str, ring: Arc<CategoryRing>) -> Result<Self> {
        let f: ModuleFile = serde_json::from_str(s)?;
        f.into_module(ring)
    }

    /// The ring hash a module file refers to, without parsing the rest.
    pub fn ring_hash_of(s: &str) -> Result<String> {
        #[derive(Deserialize)]
        struct Header {
            ring_hash: String,
        }
        Ok(serde_json::from_str::<Header>(s)?.ring_hash)
    }
}

fn block_diagonal(blocks: &[&Matrix]) -> Matrix {
    let rows = blocks.iter().map(|m| m.rows()).sum();
    let cols = blocks.iter().map(|m| m.cols()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for m in blocks {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(r0 + i, c0 + j)] = m[(i, j)].clone();
            }
        }
        r0 += m.rows();
        c0 += m.cols();
    }
    out
}

/// A direct sum of representable modules `Hom(-, H)` placed in degree `e`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    entries: Vec<(usize, Degree)>,
    module: Arc<GradedModule>,
}

impl FreeModule {
    pub fn new(ring: Arc<CategoryRing>, entries: Vec<(usize, Degree)>) -> Self {
        let n = ring.object_count();
        let values = (0..n)
            .map(|x| {
                [0, 1].map(|e| {
                    let names = entries
                        .iter()
                        .enumerate()
                        .filter(|(_, (_, d))| *d == e)
                        .flat_map(|(j, &(h, _))| {
                            let ring = &ring;
                            ring.pair_range(x, h)
                                .map(move |b| format!("{j}:{}", ring.presentation().word_name(&ring.basis()[b].word)))
                        })
                        .collect();
                    AbGroup::free(names)
                })
            })
            .collect::<Vec<_>>();
        let actions = ring
            .basis()
            .iter()
            .enumerate()
            .map(|(b, basis)| {
                [0, 1].map(|e| {
                    let (x, y) = (basis.source, basis.target);
                    let mut a = Matrix::zeros(values[x][e].dim(), values[y][e].dim());
                    let (mut r0, mut c0) = (0, 0);
                    for &(h, d) in &entries {
                        if d != e {
                            continue;
                        }
                        for (j, u) in ring.pair_range(y, h).enumerate() {
                            for (i, c) in ring.structure_constants(b, u).expect("composable").iter().enumerate() {
                                a[(r0 + i, c0 + j)] = c.clone();
                            }
                        }
                        r0 += ring.pair_rank(x, h);
                        c0 += ring.pair_rank(y, h);
                    }
                    a
                })
            })
            .collect();
        let module = GradedModule { ring, values, actions };
        FreeModule { entries, module: Arc::new(module) }
    }

    pub fn entries(&self) -> &[(usize, Degree)] {
        &self.entries
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn ring(&self) -> &Arc<CategoryRing> {
        self.module.ring()
    }

    /// Coordinate ranges of the entries of degree `degree` inside the value
    /// at `(object, degree)`.
    pub fn blocks(&self, object: usize, degree: Degree) -> Vec<(usize, Range<usize>)> {
        let ring = self.ring();
        let mut offset = 0;
        let mut out = Vec::new();
        for (j, &(h, d)) in self.entries.iter().enumerate() {
            if d != degree {
                continue;
            }
            let len = ring.pair_rank(object, h);
            out.push((j, offset..offset + len));
            offset += len;
        }
        out
    }

    pub fn block(&self, object: usize, entry: usize) -> Range<usize> {
        let degree = self.entries[entry].1;
        self.blocks(object, degree).into_iter().find(|(j, _)| *j == entry).expect("entry").1
    }

    /// Coordinates of the unit `1_H` of entry `j` in the value at `(H, e)`.
    pub fn unit(&self, entry: usize) -> Vec<Int> {
        let (h, e) = self.entries[entry];
        let ring = self.ring();
        let mut v = zero_vec(self.module.dim(h, e));
        let block = self.block(h, entry);
        let local = ring.local_index(ring.unit_index(h));
        v[block.start + local] = Int::one();
        v
    }

    /// The ring element `X -> H_j` recorded by block `j` of a vector in the
    /// value at `(X, e_j)`.
    pub fn component(&self, object: usize, entry: usize, v: &[Int]) -> RingElement {
        let block = self.block(object, entry);
        RingElement { source: object, target: self.entries[entry].0, coefficients: v[block].to_vec() }
    }
}

/// Representable module `Hom(-, H)` in degree `e`.
pub fn yoneda(ring: &Arc<CategoryRing>, h: SubgroupId, degree: Degree) -> Result<FreeModule> {
    let x = ring.object_index(h)?;
    Ok(FreeModule::new(ring.clone(), vec![(x, degree.min(1))]))
}

/// A degree-preserving map of graded modules, one matrix per object and degree.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    matrices: Vec<[Matrix; 2]>,
}

impl ModuleMap {
    pub fn new(source: Arc<GradedModule>, target: Arc<GradedModule>, matrices: Vec<[Matrix; 2]>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, matrices)?;
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        matrices: Vec<[Matrix; 2]>,
    ) -> Result<Self> {
        check_same_ring(source.ring(), target.ring())?;
        let n = source.ring().object_count();
        if matrices.len() != n {
            return Err(Error::MalformedModule("one matrix pair per object expected".into()));
        }
        for (x, pair) in matrices.iter().enumerate() {
            for (e, m) in pair.iter().enumerate() {
                if (m.rows(), m.cols()) != (target.dim(x, e), source.dim(x, e)) {
                    return Err(Error::MalformedModule(format!("map matrix at object {x}, degree {e} has the wrong shape")));
                }
            }
        }
        Ok(ModuleMap { source, target, matrices })
    }

    pub fn zero(source: Arc<GradedModule>, target: Arc<GradedModule>) -> Result<Self> {
        let n = source.ring().object_count();
        let matrices = (0..n).map(|x| [0, 1].map(|e| Matrix::zeros(target.dim(x, e), source.dim(x, e)))).collect();
        Self::new_unchecked(source, target, matrices)
    }

    pub fn identity(m: Arc<GradedModule>) -> Self {
        let n = m.ring().object_count();
        let matrices = (0..n).map(|x| [0, 1].map(|e| Matrix::identity(m.dim(x, e)))).collect();
        ModuleMap { source: m.clone(), target: m, matrices }
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn matrix(&self, object: usize, degree: Degree) -> &Matrix {
        &self.matrices[object][degree]
    }

    pub fn apply(&self, object: usize, degree: Degree, v: &[Int]) -> Vec<Int> {
        self.matrices[object][degree].mul_vec(v)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &ModuleMap) -> Result<ModuleMap> {
        let matrices = self
            .matrices
            .iter()
            .zip(&after.matrices)
            .map(|(f, g)| [0, 1].map(|e| g[e].mul(&f[e])))
            .collect();
        ModuleMap::new_unchecked(self.source.clone(), after.target.clone(), matrices)
    }

    /// Whether every component lands in the relations of the target.
    pub fn is_zero(&self) -> bool {
        self.matrices.iter().enumerate().all(|(x, pair)| {
            pair.iter().enumerate().all(|(e, m)| (0..m.cols()).all(|j| self.target.value(x, e).is_zero(&m.column(j))))
        })
    }

    /// Checks well-definedness on the source relations and naturality with
    /// respect to every ring generator.
    pub fn validate(&self) -> Result<()> {
        let ring = self.source.ring().clone();
        let bad = |m: String| Err(Error::MalformedModule(m));
        for x in 0..ring.object_count() {
            for e in 0..2 {
                for r in self.source.value(x, e).relations() {
                    if !self.target.value(x, e).is_zero(&self.apply(x, e, r)) {
                        return bad(format!("map is not well defined at object {x}, degree {e}"));
                    }
                }
            }
        }
        for (g, sym) in ring.presentation().generators.iter().enumerate() {
            if sym.is_identity() {
                continue;
            }
            let (x, y) = (sym.source, sym.target);
            for e in 0..2 {
                let lhs = self.matrices[x][e].mul(&self.source.generator_action(g, e));
                let rhs = self.target.generator_action(g, e).mul(&self.matrices[y][e]);
                let diff = lhs.sub(&rhs);
                if (0..diff.cols()).any(|j| !self.target.value(x, e).is_zero(&diff.column(j))) {
                    return bad(format!(
                        "map does not commute with {} in degree {e}",
                        ring.presentation().generator_name(g)
                    ));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct ModuleFile {
    format_version: u32,
    ring_hash: String,
    values: Vec<ValueRecord>,
    /// Actions of non-identity basis monomials `b: X -> Y` on nonzero
    /// values, as `dim M(X) x dim M(Y)` matrices.
    actions: Vec<ActionRecord>,
}

#[derive(Serialize, Deserialize)]
struct ValueRecord {
    object: u64,
    degree: usize,
    generators: Vec<String>,
    relations: Vec<Vec<JsonInt>>,
}

#[derive(Serialize, Deserialize)]
struct ActionRecord {
    basis: usize,
    degree: usize,
    matrix: Vec<Vec<JsonInt>>,
}

impl From<&GradedModule> for ModuleFile {
    fn from(m: &GradedModule) -> Self {
        let ring = &m.ring;
        let mut values = Vec::new();
        for (x, obj) in ring.objects().iter().enumerate() {
            for e in 0..2 {
                let g = m.value(x, e);
                values.push(ValueRecord {
                    object: obj.0,
                    degree: e,
                    generators: g.names.clone(),
                    relations: g.relations.iter().map(|r| serial::to_json_ints(r)).collect(),
                });
            }
        }
        let mut actions = Vec::new();
        for e in 0..2 {
            for (b, basis) in ring.basis().iter().enumerate() {
                let a = m.action(b, e);
                if basis.word.is_empty() || a.rows() == 0 || a.cols() == 0 {
                    continue;
                }
                actions.push(ActionRecord {
                    basis: b,
                    degree: e,
                    matrix: a.to_rows().iter().map(|r| serial::to_json_ints(r)).collect(),
                });
            }
        }
        ModuleFile { format_version: serial::FORMAT_VERSION, ring_hash: ring.content_hash(), values, actions }
    }
}

impl ModuleFile {
    fn into_module(self, ring: Arc<CategoryRing>) -> Result<GradedModule> {
        if self.format_version != serial::FORMAT_VERSION {
            return Err(Error::FormatVersion(self.format_version));
        }
        if self.ring_hash != ring.content_hash() {
            return Err(Error::RingMismatch);
        }
        let bad = |m: String| Error::MalformedModule(m);
        let n = ring.object_count();
        let mut values: Vec<[Option<AbGroup>; 2]> = vec![[None, None]; n];
        for v in self.values {
            let x = ring.object_index(SubgroupId(v.object))?;
            if v.degree > 1 {
                return Err(bad(format!("degree {} is not 0 or 1", v.degree)));
            }
            if values[x][v.degree].is_some() {
                return Err(bad(format!("value at object {}, degree {} given twice", v.object, v.degree)));
            }
            let relations = v.relations.into_iter().map(serial::from_json_ints).collect();
            values[x][v.degree] = Some(AbGroup::new(v.generators, relations)?);
        }
        let values: Vec<[AbGroup; 2]> = values
            .into_iter()
            .map(|[a, b]| [a.unwrap_or_else(AbGroup::zero), b.unwrap_or_else(AbGroup::zero)])
            .collect();
        let mut actions: Vec<[Option<Matrix>; 2]> = vec![[None, None]; ring.total_rank()];
        for a in self.actions {
            let basis = ring.basis().get(a.basis).ok_or_else(|| bad(format!("basis index {} out of range", a.basis)))?;
            if a.degree > 1 {
                return Err(bad(format!("degree {} is not 0 or 1", a.degree)));
            }
            let (rows, cols) = (values[basis.source][a.degree].dim(), values[basis.target][a.degree].dim());
            if a.matrix.len() != rows || a.matrix.iter().any(|r| r.len() != cols) {
                return Err(bad(format!("action of basis monomial {} in degree {} has the wrong shape", a.basis, a.degree)));
            }
            if actions[a.basis][a.degree].is_some() {
                return Err(bad(format!("action of basis monomial {} in degree {} given twice", a.basis, a.degree)));
            }
            let entries = a.matrix.into_iter().map(serial::from_json_ints).collect();
            actions[a.basis][a.degree] = Some(Matrix::from_rows(rows, cols, entries));
        }
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(b, pair)| {
                let basis = &ring.basis()[b];
                let mut out = [Matrix::zeros(0, 0), Matrix::zeros(0, 0)];
                for (e, a) in pair.into_iter().enumerate() {
                    let (rows, cols) = (values[basis.source][e].dim(), values[basis.target][e].dim());
                    out[e] = match a {
                        Some(m) => m,
                        None if basis.word.is_empty() => Matrix::identity(rows),
                        None if rows == 0 || cols == 0 => Matrix::zeros(rows, cols),
                        None => return Err(bad(format!("action of basis monomial {b} in degree {e} missing"))),
                    };
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        GradedModule::new(ring, values, actions)
    }
}

//! Completion of a presentation into a concrete category ring.
//!
//! For a length bound `B` every composable word of length at most `B` is
//! enumerated per object pair, every relation is padded on both sides by
//! words keeping the total length within `B`, and the resulting integer row
//! space is brought into Hermite normal form with columns ordered by the
//! monomial order (length, then generator enumeration). Columns without a
//! unit pivot are the normal words.
//!
//! A bound is *closed* when there is a core length `h` with
//! `max(2h, h + 1) <= B` such that no normal word has length in
//! `(h, max(2h, h + 1)]`. Then every word of length `h + 1` reduces into the
//! span of the core (normal words of length `<= h`), so the core spans the
//! ring, and all products of core words reduce inside the bound. Completion
//! stops once `window` consecutive closed bounds agree on ranks and torsion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::SubgroupId;
use crate::intmat::Int;
use crate::presentation::{Combination, PresentationFile, RingPresentation, Word};
use crate::serial::{self, JsonInt};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionOptions {
    pub max_len: usize,
    pub window: usize,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions { max_len: 10, window: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
    pub word: Word,
    /// `Some(n)` when the slot has additive order `n`.
    pub torsion: Option<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionMeta {
    pub max_len: usize,
    pub window: usize,
    /// The length bound at which the returned ring was read off.
    pub bound: usize,
    /// Longest basis monomial length admitted by the closure certificate.
    pub core_length: usize,
}

/// An element of the `(source, target)` component, in that component's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub source: usize,
    pub target: usize,
    pub coefficients: Vec<Int>,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct CategoryRing {
    presentation: RingPresentation,
    generator_ranks: Vec<usize>,
    basis: Vec<BasisElement>,
    pair_ranges: Vec<Range<usize>>,
    /// `(u, v)` with `u: X -> Y`, `v: Y -> Z` maps to the coordinates of
    /// `v ∘ u` in the basis of `(X, Z)`.
    table: BTreeMap<(usize, usize), Vec<Int>>,
    generator_images: Vec<RingElement>,
    units: Vec<usize>,
    meta: CompletionMeta,
}

type Path = Vec<u16>;

/// Per-pair state at one length bound.
struct PairSpace {
    source: usize,
    target: usize,
    words: Vec<Path>,
    index: HashMap<Path, u32>,
    /// Fully reduced pivot rows keyed by leading column; rows are sparse,
    /// sorted by descending column.
    pivots: BTreeMap<u32, Vec<(u32, Int)>>,
}

impl PairSpace {
    fn pivot_coefficient(&self, col: u32) -> Option<&Int> {
        self.pivots.get(&col).map(|r| &r[0].1)
    }

    /// Normal words: no pivot, or a non-unit (torsion) pivot.
    fn is_normal(&self, col: u32) -> bool {
        self.pivot_coefficient(col).is_none_or(|p| !p.is_one())
    }
}

/// Ranks and torsion per object pair: the data compared across bounds.
type Signature = Vec<(usize, Vec<Int>)>;

struct BoundResult {
    pairs: Vec<PairSpace>,
    core_length: usize,
    signature: Signature,
}

fn sub_scaled(row: &[(u32, Int)], q: &Int, other: &[(u32, Int)]) -> Vec<(u32, Int)> {
    // row - q * other, both sorted by descending column
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j >= other.len() || (i < row.len() && row[i].0 > other[j].0);
        let take_other = i >= row.len() || (j < other.len() && other[j].0 > row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            out.push((other[j].0, -(q * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - q * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn combine(a: &[(u32, Int)], ca: &Int, b: &[(u32, Int)], cb: &Int) -> Vec<(u32, Int)> {
    // ca * a + cb * b
    let scaled: Vec<(u32, Int)> = a.iter().map(|(c, x)| (*c, ca * x)).filter(|(_, x)| !x.is_zero()).collect();
    sub_scaled(&scaled, &-cb.clone(), b)
}

fn negate_if_needed(row: &mut [(u32, Int)]) {
    if row[0].1.is_negative() {
        for t in row.iter_mut() {
            t.1 = -std::mem::take(&mut t.1);
        }
    }
}

/// Inserts a row into an echelon family keyed by leading column, keeping
/// the row lattice unchanged (gcd steps on clashing non-divisible leads).
fn insert_row(pivots: &mut BTreeMap<u32, Vec<(u32, Int)>>, mut row: Vec<(u32, Int)>) {
    loop {
        if row.is_empty() {
            return;
        }
        let lead = row[0].0;
        match pivots.get_mut(&lead) {
            None => {
                negate_if_needed(&mut row);
                pivots.insert(lead, row);
                return;
            }
            Some(p) => {
                let (pc, rc) = (p[0].1.clone(), row[0].1.clone());
                let (q, r) = rc.div_rem(&pc);
                if r.is_zero() {
                    row = sub_scaled(&row, &q, p);
                } else {
                    let e = pc.extended_gcd(&rc);
                    let mut new_p = combine(p, &e.x, &row, &e.y);
                    negate_if_needed(&mut new_p);
                    let other = combine(p, &(&rc / &e.gcd), &row, &-(&pc / &e.gcd));
                    *p = new_p;
                    row = other;
                }
            }
        }
    }
}

/// Brings every pivot row's tail into canonical reduced form.
fn reduce_tails(pivots: &mut BTreeMap<u32, Vec<(u32, Int)>>) {
    let cols: Vec<u32> = pivots.keys().copied().collect();
    for col in cols {
        let row = pivots.remove(&col).expect("pivot");
        let lead = row[0].clone();
        let mut acc: BTreeMap<u32, Int> = row[1..].iter().cloned().collect();
        let mut out = vec![lead];
        while let Some((c, x)) = acc.pop_last() {
            match pivots.get(&c) {
                Some(pr) if c < col => {
                    let p = &pr[0].1;
                    let q = if p.is_one() { x.clone() } else { x.div_floor(p) };
                    let rem = &x - &q * p;
                    if !rem.is_zero() {
                        out.push((c, rem));
                    }
                    if !q.is_zero() {
                        for (c2, x2) in &pr[1..] {
                            let e = acc.entry(*c2).or_insert_with(Int::zero);
                            *e -= &q * x2;
                            if e.is_zero() {
                                acc.remove(c2);
                            }
                        }
                    }
                }
                _ => out.push((c, x)),
            }
        }
        pivots.insert(col, out);
    }
}

struct Engine<'a> {
    p: &'a RingPresentation,
    ranks: Vec<usize>,
    relations: Vec<(usize, usize, usize, Vec<(Path, Int)>)>,
}

impl<'a> Engine<'a> {
    fn new(p: &'a RingPresentation) -> Self {
        assert!(p.generators.len() < u16::MAX as usize, "too many generators");
        let ranks = p.generator_ranks();
        let relations = p
            .relations
            .iter()
            .filter_map(|r| {
                let d = r.difference().canonical();
                let (s, t) = d.endpoints()?;
                let terms = d
                    .terms
                    .iter()
                    .map(|t| (t.word.path.iter().map(|&g| g as u16).collect(), t.coefficient.clone()))
                    .collect();
                Some((s, t, r.max_len(), terms))
            })
            .collect();
        Engine { p, ranks, relations }
    }

    fn objects(&self) -> usize {
        self.p.objects.len()
    }

    fn order_key(&self, path: &[u16]) -> (usize, Vec<usize>) {
        (path.len(), path.iter().map(|&g| self.ranks[g as usize]).collect())
    }

    /// All words of length `<= bound`, per (source, target), in monomial order.
    fn enumerate(&self, bound: usize) -> Vec<Vec<Path>> {
        let n = self.objects();
        let mut out: Vec<Vec<Path>> = vec![Vec::new(); n * n];
        let mut out_edges: Vec<Vec<(u16, usize)>> = vec![Vec::new(); n];
        for (i, g) in self.p.generators.iter().enumerate() {
            if !g.is_identity() {
                out_edges[g.source].push((i as u16, g.target));
            }
        }
        for s in 0..n {
            let mut frontier: Vec<(Path, usize)> = vec![(Vec::new(), s)];
            for len in 0..=bound {
                for (path, at) in &frontier {
                    out[s * n + at].push(path.clone());
                }
                if len == bound {
                    break;
                }
                let mut next = Vec::new();
                for (path, at) in &frontier {
                    for &(g, t) in &out_edges[*at] {
                        let mut q = path.clone();
                        q.push(g);
                        next.push((q, t));
                    }
                }
                frontier = next;
            }
        }
        for words in &mut out {
            words.sort_by_cached_key(|w| self.order_key(w));
        }
        out
    }

    fn run_bound(&self, bound: usize) -> Result<Option<BoundResult>> {
        let n = self.objects();
        let all = self.enumerate(bound);
        let pairs: Vec<PairSpace> = (0..n * n)
            .into_par_iter()
            .map(|pi| self.reduce_pair(pi / n, pi % n, bound, &all))
            .collect();

        for (x, pair) in pairs.iter().enumerate().filter(|(i, _)| i / n == i % n) {
            // the identity word is column 0 of each diagonal pair
            if let Some(p) = pair.pivot_coefficient(0) {
                if p.is_one() {
                    return Err(Error::InconsistentPresentation { object: self.p.objects[x / n].0 });
                }
            }
        }
        for pair in &pairs {
            for (col, row) in &pair.pivots {
                if !row[0].1.is_one() && row.len() > 1 {
                    let word = Word {
                        source: pair.source,
                        target: pair.target,
                        path: pair.words[*col as usize].iter().map(|&g| g as usize).collect(),
                    };
                    return Err(Error::NonMonomialTorsion { word: self.p.word_name(&word) });
                }
            }
        }

        let mut normal_lengths = vec![false; bound + 1];
        for pair in &pairs {
            for (i, w) in pair.words.iter().enumerate() {
                if pair.is_normal(i as u32) {
                    normal_lengths[w.len()] = true;
                }
            }
        }
        let core_length = (0..=bound).find(|&h| {
            let upper = (2 * h).max(h + 1);
            upper <= bound && !normal_lengths[h + 1..=upper].iter().any(|&b| b)
        });
        let Some(core_length) = core_length else {
            return Ok(None);
        };
        let signature = pairs
            .iter()
            .map(|pair| {
                let mut rank = 0;
                let mut torsion = Vec::new();
                for (i, w) in pair.words.iter().enumerate() {
                    if w.len() <= core_length && pair.is_normal(i as u32) {
                        rank += 1;
                        if let Some(p) = pair.pivot_coefficient(i as u32) {
                            torsion.push(p.clone());
                        }
                    }
                }
                (rank, torsion)
            })
            .collect();
        Ok(Some(BoundResult { pairs, core_length, signature }))
    }

    fn reduce_pair(&self, x: usize, y: usize, bound: usize, all: &[Vec<Path>]) -> PairSpace {
        let n = self.objects();
        let words = all[x * n + y].clone();
        let index: HashMap<Path, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut pivots = BTreeMap::new();
        for (s, t, len, terms) in &self.relations {
            if *len > bound {
                continue;
            }
            let slack = bound - len;
            for u in all[x * n + s].iter().take_while(|u| u.len() <= slack) {
                for v in all[t * n + y].iter().take_while(|v| u.len() + v.len() <= slack) {
                    let mut row: Vec<(u32, Int)> = terms
                        .iter()
                        .map(|(w, c)| {
                            let mut key = Vec::with_capacity(u.len() + w.len() + v.len());
                            key.extend_from_slice(u);
                            key.extend_from_slice(w);
                            key.extend_from_slice(v);
                            (index[&key], c.clone())
                        })
                        .collect();
                    row.sort_by(|a, b| b.0.cmp(&a.0));
                    insert_row(&mut pivots, row);
                }
            }
        }
        reduce_tails(&mut pivots);
        PairSpace { source: x, target: y, words, index, pivots }
    }
}

/// Completes a presentation into a [`CategoryRing`].
pub fn complete(p: &RingPresentation, options: CompletionOptions) -> Result<CategoryRing> {
    p.validate()?;
    let engine = Engine::new(p);
    let window = options.window.max(1);
    let mut history: Vec<Option<Signature>> = Vec::new();
    let mut trajectory = Vec::new();
    for bound in 1..=options.max_len {
        let result = engine.run_bound(bound)?;
        match &result {
            Some(r) => {
                let total: usize = r.signature.iter().map(|(rk, _)| rk).sum();
                trajectory.push(format!("B={bound}: rank {total} (core length {})", r.core_length));
            }
            None => trajectory.push(format!("B={bound}: not closed")),
        }
        history.push(result.as_ref().map(|r| r.signature.clone()));
        let tail = &history[history.len().saturating_sub(window)..];
        let stable = tail.len() == window && tail.iter().all(|s| s.is_some() && *s == tail[0]);
        if stable {
            let r = result.expect("closed bound");
            return Ok(assemble(&engine, r, CompletionMeta {
                max_len: options.max_len,
                window: options.window,
                bound,
                core_length: 0,
            }));
        }
    }
    Err(Error::NotStabilized { max_len: options.max_len, trajectory: trajectory.join("; ") })
}

fn assemble(engine: &Engine, r: BoundResult, mut meta: CompletionMeta) -> CategoryRing {
    let p = engine.p;
    let n = engine.objects();
    let h = r.core_length;
    meta.core_length = h;

    // core words per pair, and the map from pair column to core slot
    let mut basis = Vec::new();
    let mut pair_ranges = Vec::with_capacity(n * n);
    let mut slot_of: Vec<HashMap<u32, usize>> = Vec::with_capacity(n * n);
    for pair in &r.pairs {
        let start = basis.len();
        let mut slots = HashMap::new();
        for (i, w) in pair.words.iter().enumerate() {
            if w.len() <= h && pair.is_normal(i as u32) {
                slots.insert(i as u32, basis.len() - start);
                basis.push(BasisElement {
                    source: pair.source,
                    target: pair.target,
                    word: Word {
                        source: pair.source,
                        target: pair.target,
                        path: w.iter().map(|&g| g as usize).collect(),
                    },
                    torsion: pair.pivot_coefficient(i as u32).cloned(),
                });
            }
        }
        pair_ranges.push(start..basis.len());
        slot_of.push(slots);
    }

    let normal_form = |pi: usize, path: &Path| -> Vec<Int> {
        let pair = &r.pairs[pi];
        let slots = &slot_of[pi];
        let mut out = vec![Int::zero(); pair_ranges[pi].len()];
        let col = pair.index[path];
        match pair.pivots.get(&col) {
            Some(row) if row[0].1.is_one() => {
                for (c, x) in &row[1..] {
                    out[slots[c]] -= x;
                }
            }
            _ => out[slots[&col]] = Int::one(),
        }
        out
    };

    let generator_images = p
        .generators
        .iter()
        .enumerate()
        .map(|(g, sym)| {
            let pi = sym.source * n + sym.target;
            let path: Path = if sym.is_identity() { vec![] } else { vec![g as u16] };
            RingElement { source: sym.source, target: sym.target, coefficients: normal_form(pi, &path) }
        })
        .collect();

    let mut table = BTreeMap::new();
    for (ui, u) in basis.iter().enumerate() {
        for y in 0..n {
            if y != u.target {
                continue;
            }
            for z in 0..n {
                for vi in pair_ranges[y * n + z].clone() {
                    let v = &basis[vi];
                    let path: Path = u.word.path.iter().chain(&v.word.path).map(|&g| g as u16).collect();
                    table.insert((ui, vi), normal_form(u.source * n + z, &path));
                }
            }
        }
    }
    let units = (0..n)
        .map(|x| {
            let range = pair_ranges[x * n + x].clone();
            range.clone().find(|&i| basis[i].word.is_empty()).expect("identity survives completion")
        })
        .collect();

    CategoryRing {
        presentation: p.clone(),
        generator_ranks: engine.ranks.clone(),
        basis,
        pair_ranges,
        table,
        generator_images,
        units,
        meta,
    }
}

impl CategoryRing {
    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn meta(&self) -> &CompletionMeta {
        &self.meta
    }

    pub fn object_count(&self) -> usize {
        self.presentation.objects.len()
    }

    pub fn objects(&self) -> &[SubgroupId] {
        &self.presentation.objects
    }

    pub fn object_index(&self, h: SubgroupId) -> Result<usize> {
        self.presentation.object_index(h).ok_or(Error::UnknownObject(h.0))
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Global basis indices of the `(source, target)` component.
    pub fn pair_range(&self, source: usize, target: usize) -> Range<usize> {
        self.pair_ranges[source * self.object_count() + target].clone()
    }

    pub fn pair_rank(&self, source: usize, target: usize) -> usize {
        self.pair_range(source, target).len()
    }

    /// Position of a global basis index inside its component.
    pub fn local_index(&self, global: usize) -> usize {
        let b = &self.basis[global];
        global - self.pair_range(b.source, b.target).start
    }

    pub fn unit_index(&self, object: usize) -> usize {
        self.units[object]
    }

    pub fn total_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn has_torsion(&self) -> bool {
        self.basis.iter().any(|b| b.torsion.is_some())
    }

    /// Rank and torsion moduli of the component `(x, y)`.
    pub fn rank(&self, x: SubgroupId, y: SubgroupId) -> Result<(usize, Vec<Int>)> {
        let (xi, yi) = (self.object_index(x)?, self.object_index(y)?);
        let range = self.pair_range(xi, yi);
        let torsion = self.basis[range.clone()].iter().filter_map(|b| b.torsion.clone()).collect();
        Ok((range.len(), torsion))
    }

    pub fn zero(&self, source: usize, target: usize) -> RingElement {
        RingElement { source, target, coefficients: vec![Int::zero(); self.pair_rank(source, target)] }
    }

    pub fn unit(&self, object: usize) -> RingElement {
        self.basis_element(self.units[object])
    }

    pub fn basis_element(&self, global: usize) -> RingElement {
        let b = &self.basis[global];
        let mut e = self.zero(b.source, b.target);
        e.coefficients[self.local_index(global)] = Int::one();
        e
    }

    pub fn generator_image(&self, g: usize) -> &RingElement {
        &self.generator_images[g]
    }

    /// `v ∘ u` for basis indices `u: X -> Y`, `v: Y -> Z`.
    pub fn structure_constants(&self, u: usize, v: usize) -> Option<&[Int]> {
        self.table.get(&(u, v)).map(Vec::as_slice)
    }

    pub fn table_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<Int>)> {
        self.table.iter()
    }

    /// Overwrites one structure constant vector. Intended for fault injection
    /// in verification tests.
    pub fn set_structure_constants(&mut self, u: usize, v: usize, coefficients: Vec<Int>) {
        self.table.insert((u, v), coefficients);
    }

    fn reduce_torsion(&self, e: &mut RingElement) {
        let range = self.pair_range(e.source, e.target);
        for (c, b) in e.coefficients.iter_mut().zip(&self.basis[range]) {
            if let Some(n) = &b.torsion {
                *c = c.mod_floor(n);
            }
        }
    }

    /// `first` followed by `second`, i.e. the composite `second ∘ first`.
    pub fn then(&self, first: &RingElement, second: &RingElement) -> RingElement {
        assert_eq!(first.target, second.source, "ring elements are not composable");
        let (x, y, z) = (first.source, first.target, second.target);
        let mut out = self.zero(x, z);
        let ru = self.pair_range(x, y);
        let rv = self.pair_range(y, z);
        for (a, u) in first.coefficients.iter().zip(ru) {
            if a.is_zero() {
                continue;
            }
            for (b, v) in second.coefficients.iter().zip(rv.clone()) {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, c) in out.coefficients.iter_mut().zip(&self.table[&(u, v)]) {
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        self.reduce_torsion(&mut out);
        out
    }

    /// The composite `outer ∘ inner`.
    pub fn compose(&self, outer: &RingElement, inner: &RingElement) -> RingElement {
        self.then(inner, outer)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        assert_eq!((a.source, a.target), (b.source, b.target), "ring elements are not parallel");
        let mut out = a.clone();
        for (o, x) in out.coefficients.iter_mut().zip(&b.coefficients) {
            *o += x;
        }
        self.reduce_torsion(&mut out);
        out
    }

    pub fn scale(&self, a: &RingElement, c: &Int) -> RingElement {
        let mut out = a.clone();
        out.coefficients.iter_mut().for_each(|x| *x *= c);
        self.reduce_torsion(&mut out);
        out
    }

    pub fn word_element(&self, w: &Word) -> RingElement {
        let mut acc = self.unit(w.source);
        for &g in &w.path {
            acc = self.then(&acc, &self.generator_images[g]);
        }
        acc
    }

    /// The image of a combination of parallel words in the basis.
    pub fn normal_form(&self, c: &Combination) -> Result<RingElement> {
        let Some((s, t)) = c.endpoints() else {
            return Err(Error::NotParallel("empty combination has no endpoints".into()));
        };
        let mut acc = self.zero(s, t);
        for term in &c.terms {
            if (term.word.source, term.word.target) != (s, t) {
                return Err(Error::NotParallel(self.presentation.combination_name(c)));
            }
            let e = self.word_element(&term.word);
            acc = self.add(&acc, &self.scale(&e, &term.coefficient));
        }
        Ok(acc)
    }

    pub fn element_name(&self, e: &RingElement) -> String {
        let range = self.pair_range(e.source, e.target);
        let terms: Vec<String> = e
            .coefficients
            .iter()
            .zip(&self.basis[range])
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, b)| {
                let w = self.presentation.word_name(&b.word);
                if c.is_one() {
                    w
                } else {
                    format!("{c}*{w}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn to_json(&self) -> String {
        serial::canonical_json(&RingFile::from(self))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: RingFile = serde_json::from_str(s)?;
        f.into_ring()
    }

    /// SHA-256 of the canonical serialization; modules refer to rings by it.
    pub fn content_hash(&self) -> String {
        serial::sha256_hex(self.to_json().as_bytes())
    }
}

impl fmt::Display for CategoryRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objs = self.objects();
        write!(f, "{:>8}", "")?;
        for y in objs {
            write!(f, "{:>8}", y.0)?;
        }
        writeln!(f)?;
        for (xi, x) in objs.iter().enumerate() {
            write!(f, "{:>8}", x.0)?;
            for yi in 0..objs.len() {
                write!(f, "{:>8}", self.pair_rank(xi, yi))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: Vec<String>,
    /// Torsion slots, listed separately so that they stand out.
    pub torsion: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks relations, unit laws, associativity on every composable basis
/// triple, and that structure constants respect the torsion moduli.
pub fn verify_ring(ring: &CategoryRing) -> VerifyReport {
    let mut report = VerifyReport::default();
    let p = &ring.presentation;
    for (i, r) in p.relations.iter().enumerate() {
        match ring.normal_form(&r.difference()) {
            Ok(e) if e.is_zero() => {}
            Ok(e) => report.failures.push(format!(
                "relation {i} ({}) {} = {} fails: difference {}",
                r.tag,
                p.combination_name(&r.left),
                p.combination_name(&r.right),
                ring.element_name(&e)
            )),
            Err(e) => report.failures.push(format!("relation {i} ({}): {e}", r.tag)),
        }
    }
    for (u, b) in ring.basis.iter().enumerate() {
        let e = ring.basis_element(u);
        if ring.then(&ring.unit(b.source), &e) != e || ring.then(&e, &ring.unit(b.target)) != e {
            report.failures.push(format!("unit law fails on basis element {u} ({})", p.word_name(&b.word)));
        }
        if let Some(n) = &b.torsion {
            report.torsion.push(format!("{} has order {n}", p.word_name(&b.word)));
        }
    }
    for ((u, v), c) in &ring.table {
        let (x, z) = (ring.basis[*u].source, ring.basis[*v].target);
        for (coef, b) in c.iter().zip(&ring.basis[ring.pair_range(x, z)]) {
            if let Some(n) = &b.torsion {
                if coef.is_negative() || coef >= n {
                    report.failures.push(format!("structure constants of ({u}, {v}) exceed torsion modulus {n}"));
                }
            }
        }
    }
    let n = ring.object_count();
    let fails: Vec<String> = (0..ring.basis.len())
        .into_par_iter()
        .flat_map_iter(|u| {
            let bu = &ring.basis[u];
            let eu = ring.basis_element(u);
            let mut out = Vec::new();
            for z in 0..n {
                for v in ring.pair_range(bu.target, z) {
                    let ev = ring.basis_element(v);
                    let uv = ring.then(&eu, &ev);
                    for w_obj in 0..n {
                        for w in ring.pair_range(z, w_obj) {
                            let ew = ring.basis_element(w);
                            let left = ring.then(&uv, &ew);
                            let right = ring.then(&eu, &ring.then(&ev, &ew));
                            if left != right {
                                out.push(format!(
                                    "associativity fails on triple ({u}, {v}, {w}) = ({}, {}, {})",
                                    ring.presentation.word_name(&bu.word),
                                    ring.presentation.word_name(&ring.basis[v].word),
                                    ring.presentation.word_name(&ring.basis[w].word)
                                ));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    report.failures.extend(fails);
    report
}

/// Compares `((w1 w2) w3)` with `(w1 (w2 w3))` on pseudo-random composable
/// word triples of length at most `max_len`, and returns the failing triples.
pub fn check_random_associativity(ring: &CategoryRing, seed: u64, count: usize, max_len: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = &ring.presentation.generators;
    let n = ring.object_count();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, g) in gens.iter().enumerate() {
        if !g.is_identity() {
            out_edges[g.source].push(i);
        }
    }
    let random_word = |rng: &mut ChaCha8Rng, from: usize| {
        let len = rng.gen_range(0..=max_len);
        let mut w = Word::identity(from);
        for _ in 0..len {
            let edges = &out_edges[w.target];
            if edges.is_empty() {
                break;
            }
            let g = edges[rng.gen_range(0..edges.len())];
            w.path.push(g);
            w.target = gens[g].target;
        }
        w
    };
    let mut failures = Vec::new();
    for _ in 0..count {
        let start = rng.gen_range(0..n);
        let w1 = random_word(&mut rng, start);
        let w2 = random_word(&mut rng, w1.target);
        let w3 = random_word(&mut rng, w2.target);
        let left = ring.then(&ring.word_element(&w1.then(&w2)), &ring.word_element(&w3));
        let right = ring.then(&ring.word_element(&w1), &ring.word_element(&w2.then(&w3)));
        if left != right {
            let p = &ring.presentation;
            failures.push(format!("({}) ({}) ({})", p.word_name(&w1), p.word_name(&w2), p.word_name(&w3)));
        }
    }
    failures
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct RingFile {
    format_version: u32,
    presentation: PresentationFile,
    completion: CompletionRecord,
    basis: Vec<BasisRecord>,
    generator_images: Vec<Vec<JsonInt>>,
    table: Vec<TableRecord>,
}

#[derive(Serialize, Deserialize)]
struct CompletionRecord {
    max_len: usize,
    window: usize,
    bound: usize,
    core_length: usize,
    /// Rank of each generator in the monomial order.
    generator_order: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct BasisRecord {
    source: u64,
    target: u64,
    /// Generator indices in application order; the identity of an object is
    /// the single index of its identity generator.
    word: Vec<usize>,
    torsion: Option<JsonInt>,
}

#[derive(Serialize, Deserialize)]
struct TableRecord {
    u: usize,
    v: usize,
    coefficients: Vec<JsonInt>,
}

impl From<&CategoryRing> for RingFile {
    fn from(r: &CategoryRing) -> Self {
        let p = &r.presentation;
        RingFile {
            format_version: serial::FORMAT_VERSION,
            presentation: PresentationFile::from(p),
            completion: CompletionRecord {
                max_len: r.meta.max_len,
                window: r.meta.window,
                bound: r.meta.bound,
                core_length: r.meta.core_length,
                generator_order: r.generator_ranks.clone(),
            },
            basis: r
                .basis
                .iter()
                .map(|b| BasisRecord {
                    source: p.objects[b.source].0,
                    target: p.objects[b.target].0,
                    word: if b.word.is_empty() {
                        vec![p.identity_generator(b.source).expect("identity generator")]
                    } else {
                        b.word.path.clone()
                    },
                    torsion: b.torsion.clone().map(JsonInt),
                })
                .collect(),
            generator_images: r.generator_images.iter().map(|e| serial::to_json_ints(&e.coefficients)).collect(),
            table: r
                .table
                .iter()
                .map(|((u, v), c)| TableRecord { u: *u, v: *v, coefficients: serial::to_json_ints(c) })
                .collect(),
        }
    }
}

impl RingFile {
    fn into_ring(self) -> Result<CategoryRing> {
        if self.format_version != serial::FORMAT_VERSION {
            return Err(Error::FormatVersion(self.format_version));
        }
        let bad = |m: String| Error::MalformedRing(m);
        let presentation = self.presentation.into_presentation()?;
        let p = &presentation;
        let n = p.objects.len();
        let obj = |h: u64| p.object_index(SubgroupId(h)).ok_or(Error::UnknownObject(h));

        let mut basis = Vec::with_capacity(self.basis.len());
        for b in self.basis {
            let (source, target) = (obj(b.source)?, obj(b.target)?);
            let word = match b.word.as_slice() {
                [g] if p.generators.get(*g).is_some_and(|s| s.is_identity()) => Word::identity(source),
                path => Word { source, target, path: path.to_vec() },
            };
            basis.push(BasisElement { source, target, word, torsion: b.torsion.map(|t| t.0) });
        }
        let mut pair_ranges = vec![0..0; n * n];
        let mut i = 0;
        for x in 0..n {
            for y in 0..n {
                let start = i;
                while i < basis.len() && (basis[i].source, basis[i].target) == (x, y) {
                    i += 1;
                }
                pair_ranges[x * n + y] = start..i;
            }
        }
        if i != basis.len() {
            return Err(bad("basis is not sorted by object pair".into()));
        }
        for b in &basis {
            let mut at = b.source;
            for &g in &b.word.path {
                let s = p.generators.get(g).ok_or_else(|| bad(format!("generator {g} out of range")))?;
                if s.source != at || s.is_identity() {
                    return Err(bad("basis word is not a composable path".into()));
                }
                at = s.target;
            }
            if at != b.target {
                return Err(bad("basis word does not end at its target".into()));
            }
        }
        let units = (0..n)
            .map(|x| {
                pair_ranges[x * n + x]
                    .clone()
                    .find(|&i| basis[i].word.is_empty())
                    .ok_or_else(|| bad(format!("object {} has no identity basis element", p.objects[x])))
            })
            .collect::<Result<Vec<_>>>()?;
        if self.generator_images.len() != p.generators.len() {
            return Err(bad("one generator image per generator expected".into()));
        }
        let generator_images = self
            .generator_images
            .into_iter()
            .zip(&p.generators)
            .map(|(c, g)| {
                let coefficients = serial::from_json_ints(c);
                if coefficients.len() != pair_ranges[g.source * n + g.target].len() {
                    return Err(bad(format!("generator image of {g} has the wrong length")));
                }
                Ok(RingElement { source: g.source, target: g.target, coefficients })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = BTreeMap::new();
        for t in self.table {
            let (bu, bv) = (
                basis.get(t.u).ok_or_else(|| bad(format!("table index {} out of range", t.u)))?,
                basis.get(t.v).ok_or_else(|| bad(format!("table index {} out of range", t.v)))?,
            );
            if bu.target != bv.source {
                return Err(bad(format!("table entry ({}, {}) is not composable", t.u, t.v)));
            }
            let coefficients = serial::from_json_ints(t.coefficients);
            if coefficients.len() != pair_ranges[bu.source * n + bv.target].len() {
                return Err(bad(format!("table entry ({}, {}) has the wrong length", t.u, t.v)));
            }
            table.insert((t.u, t.v), coefficients);
        }
        for (u, bu) in basis.iter().enumerate() {
            for y in 0..n {
                for v in pair_ranges[bu.target * n + y].clone() {
                    if !table.contains_key(&(u, v)) {
                        return Err(bad(format!("table entry ({u}, {v}) missing")));
                    }
                }
            }
        }
        let c = self.completion;
        if c.generator_order != p.generator_ranks() {
            return Err(bad("generator order does not match the presentation".into()));
        }
        Ok(CategoryRing {
            generator_ranks: c.generator_order,
            presentation,
            basis,
            pair_ranges,
            table,
            generator_images,
            units,
            meta: CompletionMeta { max_len: c.max_len, window: c.window, bound: c.bound, core_length: c.core_length },
        })
    }
}

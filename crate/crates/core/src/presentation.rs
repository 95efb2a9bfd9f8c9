//! Generators-and-relations presentations of the category ring `R^{C_k}`.
//!
//! Objects are the algebras `C(C_k/H)`, one per subgroup `H`, indexed by
//! position in increasing subgroup order. Words are paths in application
//! order: `path[0]` is applied first, so the composite `x∘y` is the path
//! `y` followed by `x`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    double_cosets, induce_character, restrict_character, subgroups, CharacterVector, CyclicGroup,
    GroupElement, SubgroupId,
};
use crate::intmat::{int, Int};
use crate::serial::{self, JsonInt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Identity,
    /// `r^H_L`
    Restriction { to: SubgroupId },
    /// `i^H_L`
    Induction { from: SubgroupId },
    /// `c_g^H`
    Conjugation { by: GroupElement },
    /// `m_chi^H` for the irreducible character with this index
    Multiplication { chi: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub kind: GeneratorKind,
    /// The subgroup `H` in the notation `r^H_L`, `i^H_L`, `c_g^H`, `m_chi^H`.
    pub subgroup: SubgroupId,
    pub source: usize,
    pub target: usize,
}

impl GeneratorSymbol {
    /// Position in the fixed generator enumeration: identities, conjugations,
    /// multiplications, restrictions, inductions, each by subgroup order.
    pub fn order_key(&self) -> (u8, u64, u64) {
        let h = self.subgroup.0;
        match self.kind {
            GeneratorKind::Identity => (0, h, 0),
            GeneratorKind::Conjugation { by } => (1, h, by.0),
            GeneratorKind::Multiplication { chi } => (2, h, chi),
            GeneratorKind::Restriction { to } => (3, h, to.0),
            GeneratorKind::Induction { from } => (4, h, from.0),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind == GeneratorKind::Identity
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.subgroup;
        match self.kind {
            GeneratorKind::Identity => write!(f, "1[{h}]"),
            GeneratorKind::Restriction { to } => write!(f, "r[{h},{to}]"),
            GeneratorKind::Induction { from } => write!(f, "i[{h},{from}]"),
            GeneratorKind::Conjugation { by } => write!(f, "c[{h},{by}]"),
            GeneratorKind::Multiplication { chi } => write!(f, "m[{h},chi{chi}]"),
        }
    }
}

/// A path in the generator quiver. The empty path is the identity of
/// `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub source: usize,
    pub target: usize,
    pub path: Vec<usize>,
}

impl Word {
    pub fn identity(object: usize) -> Self {
        Word { source: object, target: object, path: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    /// `self` followed by `next`, i.e. the composite `next ∘ self`.
    pub fn then(&self, next: &Word) -> Word {
        assert_eq!(self.target, next.source, "words are not composable");
        let mut path = self.path.clone();
        path.extend_from_slice(&next.path);
        Word { source: self.source, target: next.target, path }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Int,
    pub word: Word,
}

/// A Z-linear combination of parallel words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination {
    pub terms: Vec<Term>,
}

impl Combination {
    pub fn word(word: Word) -> Self {
        Combination { terms: vec![Term { coefficient: Int::one(), word }] }
    }

    pub fn scaled(mut self, c: &Int) -> Self {
        for t in &mut self.terms {
            t.coefficient *= c;
        }
        self
    }

    pub fn plus(mut self, other: Combination) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn minus(self, other: Combination) -> Self {
        self.plus(other.scaled(&int(-1)))
    }

    /// Bilinear path concatenation: `self` followed by `next`.
    pub fn then(&self, next: &Combination) -> Combination {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &next.terms {
                terms.push(Term { coefficient: &a.coefficient * &b.coefficient, word: a.word.then(&b.word) });
            }
        }
        Combination { terms }
    }

    /// Merges repeated words and drops zero terms; terms sorted by word.
    pub fn canonical(&self) -> Combination {
        let mut acc: BTreeMap<Word, Int> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry(t.word.clone()).or_insert_with(Int::zero) += &t.coefficient;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(word, coefficient)| Term { coefficient, word })
            .collect();
        Combination { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().terms.is_empty()
    }

    /// Shared `(source, target)` of all terms, if any.
    pub fn endpoints(&self) -> Option<(usize, usize)> {
        self.terms.first().map(|t| (t.word.source, t.word.target))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationEntry {
    pub left: Combination,
    pub right: Combination,
    /// Relation family that produced the entry: `ii` .. `xi` for built
    /// presentations, `1.1` .. `4.3` (family.clause) for the hand-written
    /// `C_4` presentation.
    pub tag: String,
}

impl RelationEntry {
    pub fn family(&self) -> &str {
        self.tag.split('.').next().unwrap_or("")
    }

    /// `left - right`.
    pub fn difference(&self) -> Combination {
        self.left.clone().minus(self.right.clone())
    }

    /// Length of the longest word on either side.
    pub fn max_len(&self) -> usize {
        self.left.terms.iter().chain(&self.right.terms).map(|t| t.word.len()).max().unwrap_or(0)
    }
}

/// Families emitted by [`build_presentation`], in order.
pub const MACKEY_FAMILIES: [&str; 11] = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    pub group: CyclicGroup,
    pub objects: Vec<SubgroupId>,
    pub generators: Vec<GeneratorSymbol>,
    pub relations: Vec<RelationEntry>,
}

impl RingPresentation {
    pub fn object_index(&self, h: SubgroupId) -> Option<usize> {
        self.objects.iter().position(|&o| o == h)
    }

    pub fn identity_generator(&self, object: usize) -> Option<usize> {
        self.generators.iter().position(|g| g.is_identity() && g.source == object)
    }

    /// Rank of each generator in the monomial order enumeration.
    pub fn generator_ranks(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.generators.len()).collect();
        idx.sort_by_key(|&i| self.generators[i].order_key());
        let mut ranks = vec![0; idx.len()];
        for (r, i) in idx.into_iter().enumerate() {
            ranks[i] = r;
        }
        ranks
    }

    pub fn generator_name(&self, g: usize) -> String {
        self.generators[g].to_string()
    }

    /// Renders a word in composition notation, e.g. `r[2,1] i[2,1]`.
    pub fn word_name(&self, w: &Word) -> String {
        if w.path.is_empty() {
            return format!("1[{}]", self.objects[w.source]);
        }
        w.path.iter().rev().map(|&g| self.generator_name(g)).collect::<Vec<_>>().join(" ")
    }

    pub fn combination_name(&self, c: &Combination) -> String {
        let c = c.canonical();
        if c.terms.is_empty() {
            return "0".into();
        }
        c.terms
            .iter()
            .map(|t| {
                if t.coefficient.is_one() {
                    self.word_name(&t.word)
                } else {
                    format!("{}*{}", t.coefficient, self.word_name(&t.word))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Number of relation entries per family tag prefix.
    pub fn family_counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for r in &self.relations {
            *m.entry(r.family().to_string()).or_insert(0) += 1;
        }
        m
    }

    /// Number of distinct clauses (full tags) per family.
    pub fn clause_counts(&self) -> BTreeMap<String, usize> {
        let mut seen: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
        for r in &self.relations {
            seen.entry(r.family().to_string()).or_default().insert(&r.tag);
        }
        seen.into_iter().map(|(k, v)| (k, v.len())).collect()
    }

    /// Mackey relation families that produced no (nontrivial) relation.
    pub fn empty_families(&self) -> Vec<&'static str> {
        let counts = self.family_counts();
        MACKEY_FAMILIES.iter().copied().filter(|f| !counts.contains_key(*f)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedPresentation(m));
        let n = self.objects.len();
        for (i, o) in self.objects.iter().enumerate() {
            if !self.group.order().is_multiple_of(o.0) {
                return bad(format!("object {o} is not a subgroup order"));
            }
            if i > 0 && self.objects[i - 1] >= *o {
                return bad("objects must be strictly increasing".into());
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.source >= n || g.target >= n {
                return bad(format!("generator {i} has an unknown endpoint"));
            }
        }
        for o in 0..n {
            if self.identity_generator(o).is_none() {
                return bad(format!("object {} has no identity generator", self.objects[o]));
            }
        }
        for (ri, r) in self.relations.iter().enumerate() {
            let mut ends = None;
            for t in r.left.terms.iter().chain(&r.right.terms) {
                self.check_word(&t.word).map_err(|m| Error::MalformedPresentation(format!("relation {ri}: {m}")))?;
                let e = (t.word.source, t.word.target);
                if *ends.get_or_insert(e) != e {
                    return bad(format!("relation {ri} ({}) is not parallel", r.tag));
                }
            }
            if ends.is_none() {
                return bad(format!("relation {ri} is empty"));
            }
        }
        Ok(())
    }

    fn check_word(&self, w: &Word) -> std::result::Result<(), String> {
        let n = self.objects.len();
        if w.source >= n || w.target >= n {
            return Err("word endpoint out of range".into());
        }
        let mut at = w.source;
        for &g in &w.path {
            let sym = self.generators.get(g).ok_or("generator index out of range")?;
            if sym.is_identity() {
                return Err("identity generator inside a path".into());
            }
            if sym.source != at {
                return Err(format!("path not composable at {sym}"));
            }
            at = sym.target;
        }
        if at != w.target {
            return Err("path does not end at the word's target".into());
        }
        Ok(())
    }

    /// Key used to match generators across presentations.
    pub fn generator_keys(&self) -> Vec<(u8, u64, u64)> {
        self.generators.iter().map(GeneratorSymbol::order_key).collect()
    }

    pub fn to_json(&self) -> String {
        serial::canonical_json(&PresentationFile::from(self))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: PresentationFile = serde_json::from_str(s)?;
        f.into_presentation()
    }
}

/// Counts generators of the minimized presentation of `R^{C_k}` directly:
/// one identity per subgroup, one conjugation per proper subgroup, one
/// multiplication per nontrivial subgroup, and one restriction and one
/// induction per maximal-subgroup pair `L ⊂ H`.
pub fn expected_generator_count(k: u64) -> usize {
    let subs = subgroups(k).expect("k >= 1");
    let mut n = 0;
    for &h in &subs {
        n += 1;
        n += usize::from(h.0 != k);
        n += usize::from(h.0 > 1);
        n += 2 * subs.iter().filter(|l| is_covering(**l, h)).count();
    }
    n
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|p| n.is_multiple_of(*p)).unwrap_or(n)
}

/// `l ⊂ h` with prime index.
fn is_covering(l: SubgroupId, h: SubgroupId) -> bool {
    l.0 < h.0 && h.0.is_multiple_of(l.0) && smallest_prime_factor(h.0 / l.0) == h.0 / l.0
}

struct Builder {
    group: CyclicGroup,
    objects: Vec<SubgroupId>,
    generators: Vec<GeneratorSymbol>,
    conj: HashMap<u64, usize>,
    mult: HashMap<u64, usize>,
    res: HashMap<(u64, u64), usize>,
    ind: HashMap<(u64, u64), usize>,
    relations: Vec<RelationEntry>,
    seen: BTreeSet<Vec<(Word, Int)>>,
}

impl Builder {
    fn new(group: CyclicGroup) -> Self {
        let k = group.order();
        let objects = subgroups(k).expect("positive order");
        let obj = |h: SubgroupId| objects.iter().position(|&o| o == h).expect("object");
        let mut gens = Vec::new();
        for &h in &objects {
            gens.push(GeneratorSymbol { kind: GeneratorKind::Identity, subgroup: h, source: obj(h), target: obj(h) });
        }
        for &h in &objects {
            if h.0 != k {
                let kind = GeneratorKind::Conjugation { by: GroupElement(1) };
                gens.push(GeneratorSymbol { kind, subgroup: h, source: obj(h), target: obj(h) });
            }
        }
        for &h in &objects {
            if h.0 > 1 {
                let kind = GeneratorKind::Multiplication { chi: 1 };
                gens.push(GeneratorSymbol { kind, subgroup: h, source: obj(h), target: obj(h) });
            }
        }
        for &h in &objects {
            for &l in objects.iter().filter(|&&l| is_covering(l, h)) {
                let kind = GeneratorKind::Restriction { to: l };
                gens.push(GeneratorSymbol { kind, subgroup: h, source: obj(h), target: obj(l) });
            }
        }
        for &h in &objects {
            for &l in objects.iter().filter(|&&l| is_covering(l, h)) {
                let kind = GeneratorKind::Induction { from: l };
                gens.push(GeneratorSymbol { kind, subgroup: h, source: obj(l), target: obj(h) });
            }
        }
        let mut b = Builder {
            group,
            objects,
            generators: gens,
            conj: HashMap::new(),
            mult: HashMap::new(),
            res: HashMap::new(),
            ind: HashMap::new(),
            relations: Vec::new(),
            seen: BTreeSet::new(),
        };
        for (i, g) in b.generators.iter().enumerate() {
            let h = g.subgroup.0;
            match g.kind {
                GeneratorKind::Identity => {}
                GeneratorKind::Conjugation { .. } => {
                    b.conj.insert(h, i);
                }
                GeneratorKind::Multiplication { .. } => {
                    b.mult.insert(h, i);
                }
                GeneratorKind::Restriction { to } => {
                    b.res.insert((h, to.0), i);
                }
                GeneratorKind::Induction { from } => {
                    b.ind.insert((h, from.0), i);
                }
            }
        }
        b
    }

    fn obj(&self, h: u64) -> usize {
        self.objects.iter().position(|o| o.0 == h).expect("object")
    }

    fn identity(&self, h: u64) -> Combination {
        Combination::word(Word::identity(self.obj(h)))
    }

    fn path(&self, source: u64, target: u64, path: Vec<usize>) -> Combination {
        Combination::word(Word { source: self.obj(source), target: self.obj(target), path })
    }

    /// The fixed maximal chain `h = c_0 ⊃ c_1 ⊃ ... ⊃ c_n = l`, dividing out the
    /// smallest remaining prime at each step.
    fn chain(&self, h: u64, l: u64) -> Vec<u64> {
        let mut out = vec![h];
        let mut cur = h;
        while cur != l {
            cur /= smallest_prime_factor(cur / l);
            out.push(cur);
        }
        out
    }

    /// `r^H_L` through the fixed chain.
    fn restriction(&self, h: u64, l: u64) -> Combination {
        let c = self.chain(h, l);
        let path = c.windows(2).map(|w| self.res[&(w[0], w[1])]).collect();
        self.path(h, l, path)
    }

    /// `i^H_L` through the fixed chain.
    fn induction(&self, h: u64, l: u64) -> Combination {
        let c = self.chain(h, l);
        let path = c.windows(2).rev().map(|w| self.ind[&(w[0], w[1])]).collect();
        self.path(l, h, path)
    }

    /// `c_g^H = (c_a^H)^j` with `j = g mod [C_k:H]`.
    fn conjugation(&self, h: u64, g: u64) -> Combination {
        let index = self.group.order() / h;
        let j = (g % index) as usize;
        let path = if j == 0 { vec![] } else { vec![self.conj[&h]; j] };
        self.path(h, h, path)
    }

    /// `m_chi^H = sum_j chi_j (m^H)^j` for the primitive `m^H`.
    fn multiplication(&self, chi: &CharacterVector) -> Combination {
        let h = chi.subgroup().0;
        let mut out = Combination::default();
        for j in 0..h {
            let c = chi.coefficient(j);
            if c.is_zero() {
                continue;
            }
            let path = if j == 0 { vec![] } else { vec![self.mult[&h]; j as usize] };
            out = out.plus(self.path(h, h, path).scaled(c));
        }
        out
    }

    fn emit(&mut self, tag: &str, left: Combination, right: Combination) {
        let diff = left.clone().minus(right.clone()).canonical();
        if diff.terms.is_empty() {
            return;
        }
        let sign = if diff.terms[0].coefficient.is_negative() { int(-1) } else { int(1) };
        let key: Vec<(Word, Int)> = diff.terms.iter().map(|t| (t.word.clone(), &t.coefficient * &sign)).collect();
        if self.seen.insert(key) {
            self.relations.push(RelationEntry { left: left.canonical(), right: right.canonical(), tag: tag.into() });
        }
    }

    fn subgroup_orders(&self) -> Vec<u64> {
        self.objects.iter().map(|o| o.0).collect()
    }

    fn build(mut self) -> RingPresentation {
        let k = self.group.order();
        let subs = self.subgroup_orders();
        let incl = |small: u64, big: u64| big.is_multiple_of(small);

        // (i) r^H_H = i^H_H = 1 holds by construction of the chains
        for &h in &subs {
            let one = self.identity(h);
            self.emit("i", self.restriction(h, h), one.clone());
            self.emit("i", self.induction(h, h), one);
        }
        // (ii) c_h^H = 1 for h in H, folded into the power relation c^[C_k:H] = 1
        for &h in &subs {
            if h != k {
                let power = self.path(h, h, vec![self.conj[&h]; (k / h) as usize]);
                self.emit("ii", power, self.identity(h));
            }
        }
        // (iii) transitivity of restriction and induction
        for &h in &subs {
            for &kk in subs.iter().filter(|&&x| incl(x, h)) {
                for &l in subs.iter().filter(|&&x| incl(x, kk)) {
                    let left = self.restriction(h, kk).then(&self.restriction(kk, l));
                    self.emit("iii", left, self.restriction(h, l));
                    let left = self.induction(kk, l).then(&self.induction(h, kk));
                    self.emit("iii", left, self.induction(h, l));
                }
            }
        }
        // (iv) c_g c_h = c_{hg}
        for &h in &subs {
            for g in 0..k {
                for x in 0..k {
                    let left = self.conjugation(h, x).then(&self.conjugation(h, g));
                    self.emit("iv", left, self.conjugation(h, (g + x) % k));
                }
            }
        }
        // (v) conjugation commutes with restriction and induction
        for &h in &subs {
            for &kk in subs.iter().filter(|&&x| incl(x, h) && x != h) {
                for g in 0..k {
                    let left = self.restriction(h, kk).then(&self.conjugation(kk, g));
                    let right = self.conjugation(h, g).then(&self.restriction(h, kk));
                    self.emit("v", left, right);
                    let left = self.conjugation(kk, g).then(&self.induction(h, kk));
                    let right = self.induction(h, kk).then(&self.conjugation(h, g));
                    self.emit("v", left, right);
                }
            }
        }
        // (vi) double coset formula r^H_K i^H_L = sum_g i^K_{L∩K} c_g r^L_{L∩K}
        for &h in &subs {
            for &l in subs.iter().filter(|&&x| incl(x, h)) {
                for &kk in subs.iter().filter(|&&x| incl(x, h)) {
                    let left = self.induction(h, l).then(&self.restriction(h, kk));
                    let lk = SubgroupId(l).intersect(SubgroupId(kk)).0;
                    let reps = double_cosets(&self.group, SubgroupId(l), SubgroupId(h), SubgroupId(kk))
                        .expect("subgroups of C_k");
                    let mut right = Combination::default();
                    for g in reps {
                        let term = self
                            .restriction(l, lk)
                            .then(&self.conjugation(lk, g.0))
                            .then(&self.induction(kk, lk));
                        right = right.plus(term);
                    }
                    self.emit("vi", left, right);
                }
            }
        }
        // (vii) m^H raised to |H| is the identity; multiplicativity and
        // additivity are folded into the expansion of m_chi
        for &h in &subs {
            if h > 1 {
                let power = self.path(h, h, vec![self.mult[&h]; h as usize]);
                self.emit("vii", power, self.identity(h));
            }
        }
        // (viii) m^L_{chi|L} r^H_L = r^H_L m^H_chi and (x) m^H_chi i^H_L = i^H_L m^L_{chi|L}
        for &h in &subs {
            for &l in subs.iter().filter(|&&x| incl(x, h)) {
                for j in 0..h {
                    let chi = CharacterVector::irreducible(SubgroupId(h), j);
                    let res = restrict_character(&chi, SubgroupId(l)).expect("inclusion");
                    let left = self.restriction(h, l).then(&self.multiplication(&res));
                    let right = self.multiplication(&chi).then(&self.restriction(h, l));
                    self.emit("viii", left, right);
                    let left = self.induction(h, l).then(&self.multiplication(&chi));
                    let right = self.multiplication(&res).then(&self.induction(h, l));
                    self.emit("x", left, right);
                }
            }
        }
        // (ix) c_g m_chi = m_chi c_g
        for &h in &subs {
            for j in 0..h {
                let chi = CharacterVector::irreducible(SubgroupId(h), j);
                for g in 0..k {
                    let left = self.multiplication(&chi).then(&self.conjugation(h, g));
                    let right = self.conjugation(h, g).then(&self.multiplication(&chi));
                    self.emit("ix", left, right);
                }
            }
        }
        // (xi) Frobenius: i^H_L m^L_chi r^H_L = m^H_{ind chi}
        for &h in &subs {
            for &l in subs.iter().filter(|&&x| incl(x, h) && x != h) {
                for j in 0..l {
                    let chi = CharacterVector::irreducible(SubgroupId(l), j);
                    let ind = induce_character(&chi, SubgroupId(h)).expect("inclusion");
                    let left = self
                        .restriction(h, l)
                        .then(&self.multiplication(&chi))
                        .then(&self.induction(h, l));
                    self.emit("xi", left, self.multiplication(&ind));
                }
            }
        }

        RingPresentation {
            group: self.group,
            objects: self.objects,
            generators: self.generators,
            relations: self.relations,
        }
    }
}

/// The presentation of `R^{C_k}` obtained by instantiating the Mackey,
/// multiplication and Frobenius relations over the minimized generator set.
pub fn build_presentation(k: u64) -> Result<RingPresentation> {
    let group = CyclicGroup::new(k)?;
    let p = Builder::new(group).build();
    p.validate()?;
    Ok(p)
}

/// The hand-written presentation of `R^{C_4}`: eleven generators and the
/// relation families (1)-(4). Family (0), vanishing of non-composable
/// products, is implicit in typed composition.
pub fn presentation_c4() -> RingPresentation {
    let group = CyclicGroup::new(4).expect("positive");
    let objects = vec![SubgroupId(1), SubgroupId(2), SubgroupId(4)];
    let sym = |kind, h: u64, source, target| GeneratorSymbol { kind, subgroup: SubgroupId(h), source, target };
    let a = GroupElement(1);
    let generators = vec![
        sym(GeneratorKind::Identity, 1, 0, 0),                                      // 0: 1_{C(C_4)}
        sym(GeneratorKind::Conjugation { by: a }, 1, 0, 0),                         // 1: c_a^{e}
        sym(GeneratorKind::Induction { from: SubgroupId(1) }, 2, 0, 1),            // 2: i^{<a^2>}_{e}
        sym(GeneratorKind::Restriction { to: SubgroupId(1) }, 2, 1, 0),            // 3: r^{<a^2>}_{e}
        sym(GeneratorKind::Identity, 2, 1, 1),                                      // 4: 1_{C(C_4/<a^2>)}
        sym(GeneratorKind::Conjugation { by: a }, 2, 1, 1),                         // 5: c_a^{<a^2>}
        sym(GeneratorKind::Multiplication { chi: 1 }, 2, 1, 1),                     // 6: m^{<a^2>}
        sym(GeneratorKind::Induction { from: SubgroupId(2) }, 4, 1, 2),            // 7: i^{C_4}_{<a^2>}
        sym(GeneratorKind::Restriction { to: SubgroupId(2) }, 4, 2, 1),            // 8: r^{C_4}_{<a^2>}
        sym(GeneratorKind::Identity, 4, 2, 2),                                      // 9: 1_C
        sym(GeneratorKind::Multiplication { chi: 1 }, 4, 2, 2),                     // 10: m_i^{C_4}
    ];
    let (c1, i12, r21, c2, m2, i24, r42, m4) = (1, 2, 3, 5, 6, 7, 8, 10);
    // composite x∘y∘z is the path [z, y, x]
    let comp = |seq: &[usize]| {
        let path: Vec<usize> = seq.iter().rev().copied().collect();
        let source = generators[*path.first().expect("nonempty")].source;
        let target = generators[*path.last().expect("nonempty")].target;
        Combination::word(Word { source, target, path })
    };
    let one = |o: usize| Combination::word(Word::identity(o));
    let rel = |tag: &str, left: Combination, right: Combination| RelationEntry { left, right, tag: tag.into() };

    let relations = vec![
        // (1) powers
        rel("1.1", comp(&[c1, c1, c1, c1]), one(0)),
        rel("1.2", comp(&[c2, c2]), one(1)),
        rel("1.2", comp(&[m2, m2]), one(1)),
        rel("1.3", comp(&[m4, m4, m4, m4]), one(2)),
        // (2) commutation
        rel("2.1", comp(&[r21, c2]), comp(&[c1, r21])),
        rel("2.2", comp(&[c2, r42]), comp(&[r42])),
        rel("2.3", comp(&[i12, c1]), comp(&[c2, i12])),
        rel("2.4", comp(&[i24, c2]), comp(&[i24])),
        rel("2.5", comp(&[m2, i12]), comp(&[i12])),
        rel("2.6", comp(&[r21, m2]), comp(&[r21])),
        rel("2.7", comp(&[m2, r42]), comp(&[r42, m4])),
        rel("2.8", comp(&[i24, m2]), comp(&[m4, i24])),
        rel("2.9", comp(&[c2, m2]), comp(&[m2, c2])),
        // (3) double cosets
        rel("3.1", comp(&[r21, i12]), one(0).plus(comp(&[c1, c1]))),
        rel("3.2", comp(&[r42, i24]), one(1).plus(comp(&[c2]))),
        // (4) Frobenius
        rel("4.1", comp(&[i12, r21]), one(1).plus(comp(&[m2]))),
        rel("4.2", comp(&[i24, r42]), one(2).plus(comp(&[m4, m4]))),
        rel("4.3", comp(&[i24, m2, r42]), comp(&[m4]).plus(comp(&[m4, m4, m4]))),
    ];
    RingPresentation { group, objects, generators, relations }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
pub(crate) struct PresentationFile {
    format_version: u32,
    group_order: u64,
    objects: Vec<u64>,
    generators: Vec<GeneratorRecord>,
    relations: Vec<RelationRecord>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorRecord {
    kind: String,
    #[serde(rename = "H")]
    h: u64,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none", default)]
    l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    g: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    chi: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    coefficient: JsonInt,
    /// Generator indices in application order; an identity word is the
    /// single index of its identity generator.
    word: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RelationRecord {
    tag: String,
    left: Vec<TermRecord>,
    right: Vec<TermRecord>,
}

impl From<&RingPresentation> for PresentationFile {
    fn from(p: &RingPresentation) -> Self {
        let generators = p
            .generators
            .iter()
            .map(|g| {
                let mut r = GeneratorRecord { kind: String::new(), h: g.subgroup.0, l: None, g: None, chi: None };
                r.kind = match g.kind {
                    GeneratorKind::Identity => "identity",
                    GeneratorKind::Restriction { to } => {
                        r.l = Some(to.0);
                        "restriction"
                    }
                    GeneratorKind::Induction { from } => {
                        r.l = Some(from.0);
                        "induction"
                    }
                    GeneratorKind::Conjugation { by } => {
                        r.g = Some(by.0);
                        "conjugation"
                    }
                    GeneratorKind::Multiplication { chi } => {
                        r.chi = Some(chi);
                        "multiplication"
                    }
                }
                .into();
                r
            })
            .collect();
        let terms = |c: &Combination| {
            c.terms
                .iter()
                .map(|t| TermRecord {
                    coefficient: JsonInt(t.coefficient.clone()),
                    word: if t.word.path.is_empty() {
                        vec![p.identity_generator(t.word.source).expect("identity generator")]
                    } else {
                        t.word.path.clone()
                    },
                })
                .collect()
        };
        PresentationFile {
            format_version: serial::FORMAT_VERSION,
            group_order: p.group.order(),
            objects: p.objects.iter().map(|o| o.0).collect(),
            generators,
            relations: p
                .relations
                .iter()
                .map(|r| RelationRecord { tag: r.tag.clone(), left: terms(&r.left), right: terms(&r.right) })
                .collect(),
        }
    }
}

impl PresentationFile {
    pub(crate) fn into_presentation(self) -> Result<RingPresentation> {
        if self.format_version != serial::FORMAT_VERSION {
            return Err(Error::FormatVersion(self.format_version));
        }
        let bad = |m: String| Error::MalformedPresentation(m);
        let group = CyclicGroup::new(self.group_order)?;
        let objects = self
            .objects
            .iter()
            .map(|&o| group.subgroup(o))
            .collect::<Result<Vec<_>>>()?;
        let obj = |h: u64| objects.iter().position(|o| o.0 == h).ok_or_else(|| bad(format!("unknown object {h}")));
        let mut generators = Vec::new();
        for r in &self.generators {
            let need = |x: Option<u64>, name: &str| x.ok_or_else(|| bad(format!("{} generator lacks {name}", r.kind)));
            let h = SubgroupId(r.h);
            let sym = match r.kind.as_str() {
                "identity" => GeneratorSymbol { kind: GeneratorKind::Identity, subgroup: h, source: obj(r.h)?, target: obj(r.h)? },
                "restriction" => {
                    let l = need(r.l, "L")?;
                    GeneratorSymbol { kind: GeneratorKind::Restriction { to: SubgroupId(l) }, subgroup: h, source: obj(r.h)?, target: obj(l)? }
                }
                "induction" => {
                    let l = need(r.l, "L")?;
                    GeneratorSymbol { kind: GeneratorKind::Induction { from: SubgroupId(l) }, subgroup: h, source: obj(l)?, target: obj(r.h)? }
                }
                "conjugation" => {
                    let g = need(r.g, "g")?;
                    GeneratorSymbol { kind: GeneratorKind::Conjugation { by: GroupElement(g) }, subgroup: h, source: obj(r.h)?, target: obj(r.h)? }
                }
                "multiplication" => {
                    let chi = need(r.chi, "chi")?;
                    GeneratorSymbol { kind: GeneratorKind::Multiplication { chi }, subgroup: h, source: obj(r.h)?, target: obj(r.h)? }
                }
                other => return Err(bad(format!("unknown generator kind {other:?}"))),
            };
            generators.push(sym);
        }
        let word = |w: &[usize]| -> Result<Word> {
            let first = *w.first().ok_or_else(|| bad("empty word".into()))?;
            let g0 = generators.get(first).ok_or_else(|| bad(format!("generator index {first} out of range")))?;
            if w.len() == 1 && g0.is_identity() {
                return Ok(Word::identity(g0.source));
            }
            let mut path = Vec::with_capacity(w.len());
            for &g in w {
                let s = generators.get(g).ok_or_else(|| bad(format!("generator index {g} out of range")))?;
                if s.is_identity() {
                    return Err(bad("identity generator inside a longer word".into()));
                }
                path.push(g);
            }
            let source = generators[path[0]].source;
            let target = generators[*path.last().expect("nonempty")].target;
            Ok(Word { source, target, path })
        };
        let terms = |ts: &[TermRecord]| -> Result<Combination> {
            let terms = ts
                .iter()
                .map(|t| Ok(Term { coefficient: t.coefficient.0.clone(), word: word(&t.word)? }))
                .collect::<Result<Vec<_>>>()?;
            Ok(Combination { terms })
        };
        let relations = self
            .relations
            .iter()
            .map(|r| Ok(RelationEntry { left: terms(&r.left)?, right: terms(&r.right)?, tag: r.tag.clone() }))
            .collect::<Result<Vec<_>>>()?;
        let p = RingPresentation { group, objects, generators, relations };
        p.validate()?;
        Ok(p)
    }
}

/// Outcome of [`presentations_equivalent`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Relations that fail to vanish in the other presentation's ring.
    pub failures: Vec<String>,
}

/// Matches generators by kind and subgroup data, completes both
/// presentations, and checks that every relation of each one vanishes in
/// the completed ring of the other.
pub fn presentations_equivalent(
    p: &RingPresentation,
    q: &RingPresentation,
    options: crate::normalform::CompletionOptions,
) -> Result<EquivalenceReport> {
    if p.group != q.group {
        return Err(Error::GeneratorMismatch(format!(
            "presentations of C_{} and C_{}",
            p.group.order(),
            q.group.order()
        )));
    }
    if p.objects != q.objects {
        return Err(Error::GeneratorMismatch("object lists differ".into()));
    }
    let (pk, qk) = (p.generator_keys(), q.generator_keys());
    let distinct = |keys: &[(u8, u64, u64)]| keys.iter().collect::<BTreeSet<_>>().len() == keys.len();
    if pk.len() != qk.len() || !distinct(&pk) || !distinct(&qk) {
        return Err(Error::GeneratorMismatch(format!("{} versus {} generators", pk.len(), qk.len())));
    }
    let position: HashMap<_, usize> = qk.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let p_to_q = pk
        .iter()
        .enumerate()
        .map(|(i, k)| {
            position
                .get(k)
                .copied()
                .ok_or_else(|| Error::GeneratorMismatch(format!("no counterpart for {}", p.generator_name(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut q_to_p = vec![0; p_to_q.len()];
    for (i, &j) in p_to_q.iter().enumerate() {
        q_to_p[j] = i;
    }
    let ring_p = crate::normalform::complete(p, options)?;
    let ring_q = crate::normalform::complete(q, options)?;
    let mut failures = Vec::new();
    for (from, ring, map, label) in [(p, &ring_q, &p_to_q, "first"), (q, &ring_p, &q_to_p, "second")] {
        for r in &from.relations {
            let mut d = r.difference();
            for t in &mut d.terms {
                t.word.path.iter_mut().for_each(|g| *g = map[*g]);
            }
            if !ring.normal_form(&d)?.is_zero() {
                failures.push(format!(
                    "relation {} of the {label} presentation: {} = {}",
                    r.tag,
                    from.combination_name(&r.left),
                    from.combination_name(&r.right)
                ));
            }
        }
    }
    Ok(EquivalenceReport { equivalent: failures.is_empty(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_generator_census() {
        let p = build_presentation(4).unwrap();
        assert_eq!(p.generators.len(), 11);
        assert_eq!(p.objects.len(), 3);
        let mut built = p.generator_keys();
        let mut oracle = presentation_c4().generator_keys();
        built.sort();
        oracle.sort();
        assert_eq!(built, oracle);
    }

    #[test]
    fn generator_counts_match_direct_count() {
        for k in 1..=12 {
            let p = build_presentation(k).unwrap();
            assert_eq!(p.generators.len(), expected_generator_count(k), "k = {k}");
        }
        assert_eq!(expected_generator_count(4), 11);
    }

    #[test]
    fn trivial_group_has_no_relations() {
        let p = build_presentation(1).unwrap();
        assert_eq!(p.generators.len(), 1);
        assert!(p.relations.is_empty());
        assert!(matches!(build_presentation(0), Err(Error::InvalidGroupOrder)));
    }

    #[test]
    fn c2_relations_are_the_hand_computed_ones() {
        let p = build_presentation(2).unwrap();
        let sided = |a: String, b: String| if a <= b { format!("{a} = {b}") } else { format!("{b} = {a}") };
        let names: BTreeSet<String> = p
            .relations
            .iter()
            .map(|r| sided(p.combination_name(&r.left), p.combination_name(&r.right)))
            .collect();
        let want: BTreeSet<String> = [
            "c[1,a] c[1,a] = 1[1]",
            "m[2,chi1] m[2,chi1] = 1[2]",
            "r[2,1] i[2,1] = 1[1] + c[1,a]",
            "i[2,1] r[2,1] = 1[2] + m[2,chi1]",
            "c[1,a] r[2,1] = r[2,1]",
            "i[2,1] c[1,a] = i[2,1]",
            "m[2,chi1] i[2,1] = i[2,1]",
            "r[2,1] m[2,chi1] = r[2,1]",
        ]
        .into_iter()
        .map(|s| {
            let (a, b) = s.split_once(" = ").unwrap();
            sided(a.to_string(), b.to_string())
        })
        .collect();
        assert_eq!(names, want);
    }

    #[test]
    fn c4_families_have_expected_clause_counts() {
        let p = presentation_c4();
        p.validate().unwrap();
        let clauses = p.clause_counts();
        assert_eq!(clauses["1"], 3);
        assert_eq!(clauses["2"], 9);
        assert_eq!(clauses["3"], 2);
        assert_eq!(clauses["4"], 3);
        assert_eq!(p.family_counts()["4"], 3);
    }

    #[test]
    fn json_round_trip() {
        for p in [presentation_c4(), build_presentation(6).unwrap()] {
            let s = p.to_json();
            let q = RingPresentation::from_json(&s).unwrap();
            assert_eq!(p, q);
            assert_eq!(s, q.to_json());
        }
    }

    #[test]
    fn every_relation_is_parallel() {
        for k in 1..=12 {
            build_presentation(k).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn equivalence_checks() {
        let opts = crate::normalform::CompletionOptions::default();
        let (b4, c4) = (build_presentation(4).unwrap(), presentation_c4());
        assert!(presentations_equivalent(&b4, &c4, opts).unwrap().equivalent);
        let b2 = build_presentation(2).unwrap();
        assert!(presentations_equivalent(&b2, &b2, opts).unwrap().equivalent);
        assert!(matches!(presentations_equivalent(&b2, &c4, opts), Err(Error::GeneratorMismatch(_))));

        // dropping a relation leaves a bigger ring
        let mut weak = c4.clone();
        weak.relations.retain(|r| r.tag != "3.1");
        let report = presentations_equivalent(&b4, &weak, opts);
        assert!(report.map(|r| !r.equivalent).unwrap_or(true));
    }
}

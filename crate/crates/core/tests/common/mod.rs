//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use catring::homalg::{AbGroup, GradedModule};
use catring::intmat::{Int, Matrix};
use catring::normalform::{complete, CategoryRing, CompletionOptions};
use catring::presentation::{build_presentation, RingPresentation};
use num_traits::{ToPrimitive, Zero};

static RINGS: [OnceLock<Arc<CategoryRing>>; 7] =
    [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// The completed ring for `k <= 6`, built once per test binary.
pub fn ring(k: u64) -> Arc<CategoryRing> {
    RINGS[k as usize]
        .get_or_init(|| Arc::new(complete(&build_presentation(k).unwrap(), CompletionOptions::default()).unwrap()))
        .clone()
}

/// Frozen output of [`fp_completion_oracle`] at bound + 2: ranks of
/// `Hom(X, Y)`, objects in increasing subgroup order.
pub const C2_RANKS: [[usize; 2]; 2] = [[2, 1], [1, 2]];
pub const C4_RANKS: [[usize; 3]; 3] = [[4, 2, 1], [2, 4, 2], [1, 2, 4]];

pub fn rank_table(ring: &CategoryRing) -> Vec<Vec<usize>> {
    let n = ring.object_count();
    (0..n).map(|x| (0..n).map(|y| ring.pair_rank(x, y)).collect()).collect()
}

// ---------------------------------------------------------------------------
// Completion oracle over F_p

const P: u64 = 1_000_003;

fn inv(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % P, P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % P;
        }
        base = base * base % P;
        e >>= 1;
    }
    acc
}

fn to_fp(c: &Int) -> u64 {
    let p = Int::from(P);
    let r = ((c % &p) + &p) % &p;
    r.to_u64().unwrap()
}

#[derive(Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Length up to which words span every component.
    pub core_length: usize,
    pub ranks: Vec<Vec<usize>>,
}

/// Brute-force ranks of the components of the ring presented by `p`:
/// all words up to `bound`, all relation instances padded within `bound`,
/// Gaussian elimination over `F_p` with columns ordered by word length.
/// The closure certificate is the least `h < bound` such that every word
/// of length `h + 1` reduces into the span of words of length at most `h`;
/// `None` when there is none.
pub fn fp_completion_oracle(p: &RingPresentation, bound: usize) -> Option<OracleResult> {
    let n = p.objects.len();
    let edges: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|x| {
            p.generators
                .iter()
                .enumerate()
                .filter(|(_, g)| !g.is_identity() && g.source == x)
                .map(|(i, g)| (i, g.target))
                .collect()
        })
        .collect();
    // words[x][y] in breadth-first order, hence sorted by length
    let mut words: Vec<Vec<Vec<Vec<usize>>>> = vec![vec![Vec::new(); n]; n];
    for x in 0..n {
        let mut layer = vec![(Vec::new(), x)];
        for len in 0..=bound {
            for (w, y) in &layer {
                words[x][*y].push(w.clone());
            }
            if len == bound {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|(w, y)| {
                    edges[*y].iter().map(move |&(g, t)| {
                        let mut v = w.clone();
                        v.push(g);
                        (v, t)
                    })
                })
                .collect();
        }
    }
    let relations: Vec<(usize, usize, usize, Vec<(Vec<usize>, u64)>)> = p
        .relations
        .iter()
        .filter_map(|r| {
            let d = r.difference();
            let (s, t) = d.endpoints()?;
            let terms = d.terms.iter().map(|t| (t.word.path.clone(), to_fp(&t.coefficient))).collect();
            Some((s, t, r.max_len(), terms))
        })
        .collect();

    // per pair: pivot table and word lengths
    let mut reduced: Vec<Vec<(HashMap<usize, Vec<(usize, u64)>>, Vec<usize>)>> = Vec::new();
    for x in 0..n {
        let mut row = Vec::new();
        for y in 0..n {
            let cols = &words[x][y];
            let index: HashMap<&Vec<usize>, usize> = cols.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
            for (s, t, len, terms) in &relations {
                if *len > bound {
                    continue;
                }
                for u in words[x][*s].iter().filter(|u| u.len() + len <= bound) {
                    for v in words[*t][y].iter().filter(|v| u.len() + v.len() + len <= bound) {
                        let mut r: HashMap<usize, u64> = HashMap::new();
                        for (w, c) in terms {
                            let key: Vec<usize> = u.iter().chain(w).chain(v).copied().collect();
                            let e = r.entry(index[&key]).or_insert(0);
                            *e = (*e + c) % P;
                        }
                        eliminate(&mut pivots, r);
                    }
                }
            }
            row.push((pivots, cols.iter().map(Vec::len).collect()));
        }
        reduced.push(row);
    }
    // every word of length h + 1, in every component, reduces into the span
    // of words of length <= h; by induction on length so does every longer word
    let closed = |h: usize| {
        reduced.iter().flatten().all(|(pivots, lengths)| {
            (0..lengths.len())
                .filter(|&i| lengths[i] == h + 1)
                .all(|i| reduce(pivots, HashMap::from([(i, 1)])).keys().all(|&c| lengths[c] <= h))
        })
    };
    let core_length = (0..bound).find(|&h| closed(h))?;
    let ranks = reduced
        .iter()
        .map(|row| {
            row.iter()
                .map(|(pivots, lengths)| {
                    (0..lengths.len()).filter(|&c| lengths[c] <= core_length && !pivots.contains_key(&c)).count()
                })
                .collect()
        })
        .collect();
    Some(OracleResult { core_length, ranks })
}

fn reduce(pivots: &HashMap<usize, Vec<(usize, u64)>>, mut row: HashMap<usize, u64>) -> HashMap<usize, u64> {
    let mut out = HashMap::new();
    while let Some(&lead) = row.keys().max() {
        let c = row.remove(&lead).unwrap();
        match pivots.get(&lead) {
            Some(p) => {
                for &(col, v) in &p[1..] {
                    let e = row.entry(col).or_insert(0);
                    *e = (*e + P - c * v % P) % P;
                    if *e == 0 {
                        row.remove(&col);
                    }
                }
            }
            None => {
                out.insert(lead, c);
            }
        }
    }
    out
}

fn eliminate(pivots: &mut HashMap<usize, Vec<(usize, u64)>>, row: HashMap<usize, u64>) {
    let mut row: HashMap<usize, u64> = row.into_iter().filter(|(_, c)| *c != 0).collect();
    loop {
        let Some(&lead) = row.keys().max() else { return };
        match pivots.get(&lead) {
            Some(p) => {
                let c = row[&lead];
                for &(col, v) in p {
                    let e = row.entry(col).or_insert(0);
                    *e = (*e + P - c * v % P) % P;
                    if *e == 0 {
                        row.remove(&col);
                    }
                }
            }
            None => {
                let scale = inv(row[&lead]);
                let mut r: Vec<(usize, u64)> = row.into_iter().map(|(c, v)| (c, v * scale % P)).collect();
                r.sort_by(|a, b| b.0.cmp(&a.0));
                pivots.insert(lead, r);
                return;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Finite abelian groups by enumeration

/// A group `Z^free + Z/t_1 + ...`, described as a list of cyclic orders
/// with `0` for `Z`.
pub fn split(orders: &[u64]) -> (usize, Vec<u64>) {
    (orders.iter().filter(|&&o| o == 0).count(), orders.iter().copied().filter(|&o| o > 1).collect())
}

fn elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &o in orders {
        out = out.into_iter().flat_map(|v| (0..o).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn scale(orders: &[u64], x: &[u64], n: u64) -> Vec<u64> {
    x.iter().zip(orders).map(|(a, o)| a * n % o).collect()
}

/// `|G[n]|` for `n = 1..=64`: determines a finite abelian group of exponent
/// dividing 64! up to isomorphism for the small groups used here.
pub type Profile = Vec<usize>;

const PROFILE_LEN: u64 = 64;

fn profile_of<T: Clone>(elems: &[T], is_zero_after: impl Fn(&T, u64) -> bool) -> Profile {
    (1..=PROFILE_LEN).map(|n| elems.iter().filter(|e| is_zero_after(e, n)).count()).collect()
}

fn product(a: &Profile, b: &Profile) -> Profile {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn trivial_profile() -> Profile {
    vec![1; PROFILE_LEN as usize]
}

/// Enumerated `Hom(A, B)` of finite groups.
fn hom_finite(a: &[u64], b: &[u64]) -> Profile {
    let belems = elements(b);
    // images of each generator of A: elements x of B with a_i x = 0
    let choices: Vec<Vec<Vec<u64>>> =
        a.iter().map(|&ai| belems.iter().filter(|x| scale(b, x, ai).iter().all(|&c| c == 0)).cloned().collect()).collect();
    let mut homs: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for c in &choices {
        homs = homs.into_iter().flat_map(|h| c.iter().map(move |x| [h.clone(), vec![x.clone()]].concat())).collect();
    }
    profile_of(&homs, |h, n| h.iter().all(|x| scale(b, x, n).iter().all(|&c| c == 0)))
}

/// Enumerated `B / aB`.
fn quotient_by_multiple(b: &[u64], a: u64) -> Profile {
    let belems = elements(b);
    let sub: std::collections::HashSet<Vec<u64>> = belems.iter().map(|x| scale(b, x, a)).collect();
    (1..=PROFILE_LEN)
        .map(|n| belems.iter().filter(|x| sub.contains(&scale(b, x, n))).count() / sub.len())
        .collect()
}

/// Free rank and torsion profile of `Hom(A, B)`.
pub fn hom_oracle(a: &[u64], b: &[u64]) -> (usize, Profile) {
    let ((fa, ta), (fb, tb)) = (split(a), split(b));
    let mut profile = hom_finite(&ta, &tb);
    for _ in 0..fa {
        profile = product(&profile, &elements_profile(&tb));
    }
    (fa * fb, profile)
}

fn elements_profile(b: &[u64]) -> Profile {
    let belems = elements(b);
    profile_of(&belems, |x, n| scale(b, x, n).iter().all(|&c| c == 0))
}

/// Free rank and torsion profile of `Ext^1(A, B)`.
pub fn ext_oracle(a: &[u64], b: &[u64]) -> (usize, Profile) {
    let ((_, ta), (fb, tb)) = (split(a), split(b));
    let mut profile = trivial_profile();
    for &ai in &ta {
        profile = product(&profile, &quotient_by_multiple(&tb, ai));
        // Ext(Z/a, Z) = Hom(Z/a, Q/Z), realized inside Z/a
        for _ in 0..fb {
            profile = product(&profile, &hom_finite(&[ai], &[ai]));
        }
    }
    (0, profile)
}

/// Free rank and profile of the group with the given invariant factors.
pub fn invariants_profile(inv: &[Int]) -> (usize, Profile) {
    let free = inv.iter().filter(|d| d.is_zero()).count();
    let finite: Vec<u64> = inv.iter().filter(|d| !d.is_zero()).map(|d| d.to_u64().unwrap()).collect();
    (free, elements_profile(&finite))
}

pub fn add_profiles(a: (usize, Profile), b: (usize, Profile)) -> (usize, Profile) {
    (a.0 + b.0, product(&a.1, &b.1))
}

pub fn graded(ring: &Arc<CategoryRing>, even: &[u64], odd: &[u64]) -> Arc<GradedModule> {
    let to_i = |v: &[u64]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
    Arc::new(
        GradedModule::abelian(ring.clone(), AbGroup::from_orders("x", &to_i(even)), AbGroup::from_orders("y", &to_i(odd)))
            .unwrap(),
    )
}

/// All finite abelian groups of order at most 8, and `Z`.
pub fn small_groups() -> Vec<Vec<u64>> {
    vec![
        vec![],
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![2, 4],
        vec![2, 2, 2],
        vec![0],
    ]
}

// ---------------------------------------------------------------------------
// Modules

/// The same module with the generators of every value listed in another
/// order (reversed), so that covers and resolutions are built differently.
pub fn reversed_generators(m: &GradedModule) -> GradedModule {
    let ring = m.ring().clone();
    let n = ring.object_count();
    let perm = |d: usize| -> Matrix {
        let mut p = Matrix::zeros(d, d);
        for i in 0..d {
            p[(i, d - 1 - i)] = Int::from(1);
        }
        p
    };
    let values: Vec<[AbGroup; 2]> = (0..n)
        .map(|x| {
            [0, 1].map(|e| {
                let g = m.value(x, e);
                let names = g.names().iter().rev().cloned().collect();
                let relations = g.relations().iter().map(|r| r.iter().rev().cloned().collect()).collect();
                AbGroup::new(names, relations).unwrap()
            })
        })
        .collect();
    let actions = (0..ring.total_rank())
        .map(|b| {
            let basis = &ring.basis()[b];
            [0, 1].map(|e| {
                let (ps, pt) = (perm(m.dim(basis.source, e)), perm(m.dim(basis.target, e)));
                ps.mul(m.action(b, e)).mul(&pt)
            })
        })
        .collect();
    GradedModule::new(ring, values, actions).unwrap()
}

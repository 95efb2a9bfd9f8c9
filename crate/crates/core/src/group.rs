//! Cyclic groups `C_k`: subgroups, double cosets, and restriction and
//! induction of (virtual) characters.
//!
//! Subgroups of `C_k = <a>` are classified by their order `d | k`; the
//! subgroup of order `d` is `<a^(k/d)>`. An irreducible character of the
//! order-`d` subgroup is an index `j mod d`, sending the subgroup generator to
//! `exp(2 pi i j / d)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::Int;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicGroup {
    order: u64,
}

impl CyclicGroup {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroupOrder);
        }
        Ok(CyclicGroup { order })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn subgroup(&self, order: u64) -> Result<SubgroupId> {
        if order == 0 || !self.order.is_multiple_of(order) {
            return Err(Error::NotASubgroup { order, group: self.order });
        }
        Ok(SubgroupId(order))
    }

    pub fn full(&self) -> SubgroupId {
        SubgroupId(self.order)
    }

    pub fn element(&self, residue: i64) -> GroupElement {
        GroupElement(residue.rem_euclid(self.order as i64) as u64)
    }

    /// Whether `g` lies in the subgroup `h`.
    pub fn contains(&self, h: SubgroupId, g: GroupElement) -> bool {
        g.0.is_multiple_of(self.order / h.0)
    }
}

/// A subgroup of `C_k`, named by its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubgroupId(pub u64);

impl SubgroupId {
    pub fn order(self) -> u64 {
        self.0
    }

    pub fn is_subgroup_of(self, other: SubgroupId) -> bool {
        other.0.is_multiple_of(self.0)
    }

    pub fn intersect(self, other: SubgroupId) -> SubgroupId {
        SubgroupId(self.0.gcd(&other.0))
    }

    /// The product subgroup `self * other`.
    pub fn join(self, other: SubgroupId) -> SubgroupId {
        SubgroupId(self.0.lcm(&other.0))
    }
}

impl fmt::Display for SubgroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `a^residue`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub u64);

impl GroupElement {
    pub fn residue(self) -> u64 {
        self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "e"),
            1 => write!(f, "a"),
            r => write!(f, "a^{r}"),
        }
    }
}

/// A virtual character of a subgroup, as integer multiplicities of the
/// irreducible characters `chi_0 .. chi_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterVector {
    subgroup: SubgroupId,
    coefficients: Vec<Int>,
}

impl CharacterVector {
    pub fn zero(subgroup: SubgroupId) -> Self {
        CharacterVector { subgroup, coefficients: vec![Int::zero(); subgroup.0 as usize] }
    }

    pub fn trivial(subgroup: SubgroupId) -> Self {
        Self::irreducible(subgroup, 0)
    }

    pub fn irreducible(subgroup: SubgroupId, index: u64) -> Self {
        let mut c = Self::zero(subgroup);
        c.coefficients[(index % subgroup.0) as usize] = Int::from(1);
        c
    }

    pub fn from_coefficients(subgroup: SubgroupId, coefficients: Vec<Int>) -> Result<Self> {
        if coefficients.len() as u64 != subgroup.0 {
            return Err(Error::CharacterLength { expected: subgroup.0, got: coefficients.len() });
        }
        Ok(CharacterVector { subgroup, coefficients })
    }

    pub fn subgroup(&self) -> SubgroupId {
        self.subgroup
    }

    pub fn coefficients(&self) -> &[Int] {
        &self.coefficients
    }

    pub fn coefficient(&self, index: u64) -> &Int {
        &self.coefficients[(index % self.subgroup.0) as usize]
    }

    /// Indices with nonzero multiplicity, ascending.
    pub fn support(&self) -> Vec<u64> {
        (0..self.subgroup.0).filter(|&j| !self.coefficients[j as usize].is_zero()).collect()
    }

    pub fn is_actual(&self) -> bool {
        self.coefficients.iter().all(|c| c >= &Int::zero())
    }

    pub fn add(&self, other: &CharacterVector) -> CharacterVector {
        assert_eq!(self.subgroup, other.subgroup, "characters of different subgroups");
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        CharacterVector { subgroup: self.subgroup, coefficients }
    }
}

impl fmt::Display for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .map(|j| {
                let c = &self.coefficients[j as usize];
                if c == &Int::from(1) {
                    format!("chi{j}")
                } else {
                    format!("{c}*chi{j}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// All subgroups of `C_k` in increasing order.
pub fn subgroups(k: u64) -> Result<Vec<SubgroupId>> {
    if k == 0 {
        return Err(Error::InvalidGroupOrder);
    }
    Ok((1..=k).filter(|d| k.is_multiple_of(*d)).map(SubgroupId).collect())
}

fn check_inclusion(small: SubgroupId, big: SubgroupId) -> Result<()> {
    if small.is_subgroup_of(big) {
        Ok(())
    } else {
        Err(Error::NotIncluded { small: small.0, big: big.0 })
    }
}

/// Restriction to `L`: the irreducible `j` of `H` restricts to `j mod |L|`.
pub fn restrict_character(chi: &CharacterVector, l: SubgroupId) -> Result<CharacterVector> {
    check_inclusion(l, chi.subgroup)?;
    let mut out = CharacterVector::zero(l);
    for (j, c) in chi.coefficients.iter().enumerate() {
        out.coefficients[j % l.0 as usize] += c;
    }
    Ok(out)
}

/// Induction to `H`: the irreducible `j` of `L` induces to the sum of the
/// `[H:L]` irreducibles `j + t|L|` of `H`.
pub fn induce_character(chi: &CharacterVector, h: SubgroupId) -> Result<CharacterVector> {
    let l = chi.subgroup;
    check_inclusion(l, h)?;
    let mut out = CharacterVector::zero(h);
    for (j, c) in chi.coefficients.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for t in 0..h.0 / l.0 {
            out.coefficients[j + (t * l.0) as usize] += c;
        }
    }
    Ok(out)
}

/// Minimal-residue representatives of `L \ H / K` inside `C_k`.
///
/// The group is abelian, so the double cosets are the cosets of `LK` in `H`.
pub fn double_cosets(
    group: &CyclicGroup,
    l: SubgroupId,
    h: SubgroupId,
    k: SubgroupId,
) -> Result<Vec<GroupElement>> {
    for s in [l, h, k] {
        group.subgroup(s.0)?;
    }
    check_inclusion(l, h)?;
    check_inclusion(k, h)?;
    let lk = l.join(k);
    let n = group.order();
    // H = <a^(n/|H|)>, LK = <a^(n/|LK|)>; coset reps are a^(t n/|H|), t < [H:LK]
    let step = n / h.0;
    Ok((0..h.0 / lk.0).map(|t| GroupElement(t * step)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> CyclicGroup {
        CyclicGroup::new(4).unwrap()
    }

    #[test]
    fn subgroup_enumeration() {
        let orders = |k| subgroups(k).unwrap().into_iter().map(|s| s.0).collect::<Vec<_>>();
        assert_eq!(orders(4), vec![1, 2, 4]);
        assert_eq!(orders(1), vec![1]);
        assert_eq!(orders(6), vec![1, 2, 3, 6]);
        assert!(matches!(subgroups(0), Err(Error::InvalidGroupOrder)));
    }

    #[test]
    fn c4_restrictions() {
        let (two, four) = (SubgroupId(2), SubgroupId(4));
        for j in [1, 3] {
            let r = restrict_character(&CharacterVector::irreducible(four, j), two).unwrap();
            assert_eq!(r, CharacterVector::irreducible(two, 1));
        }
        let r = restrict_character(&CharacterVector::trivial(four), SubgroupId(1)).unwrap();
        assert_eq!(r, CharacterVector::trivial(SubgroupId(1)));
        assert!(restrict_character(&CharacterVector::trivial(two), four).is_err());
    }

    #[test]
    fn c4_inductions() {
        let (one, two, four) = (SubgroupId(1), SubgroupId(2), SubgroupId(4));
        let ind = |chi: CharacterVector, h| induce_character(&chi, h).unwrap().support();
        assert_eq!(ind(CharacterVector::trivial(two), four), vec![0, 2]);
        assert_eq!(ind(CharacterVector::irreducible(two, 1), four), vec![1, 3]);
        assert_eq!(ind(CharacterVector::trivial(one), two), vec![0, 1]);
        assert!(induce_character(&CharacterVector::trivial(four), two).is_err());
    }

    #[test]
    fn c4_double_cosets() {
        let g = c4();
        let reps = |l, h, k| {
            double_cosets(&g, SubgroupId(l), SubgroupId(h), SubgroupId(k))
                .unwrap()
                .into_iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(reps(1, 2, 1), vec!["e", "a^2"]);
        assert_eq!(reps(2, 4, 2), vec!["e", "a"]);
        assert_eq!(reps(2, 2, 2), vec!["e"]);
        assert!(double_cosets(&g, SubgroupId(4), SubgroupId(2), SubgroupId(1)).is_err());
    }

    #[test]
    fn element_membership() {
        let g = c4();
        assert!(g.contains(SubgroupId(2), g.element(2)));
        assert!(!g.contains(SubgroupId(2), g.element(1)));
        assert!(g.contains(SubgroupId(4), g.element(3)));
        assert!(g.contains(SubgroupId(1), g.element(4)));
    }
}

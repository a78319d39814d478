use super::{
    abelianize, canonical_cyclic, commutator, coset_enumerate, inverse, reduce,
    tietze_simplify_tracked, AbelianInvariants, AbelianMap, CosetTable, Decision, Presentation,
    Word,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Certified identification of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupId {
    /// The group is abelian with these invariants (includes the trivial group).
    Abelian {
        invariants: AbelianInvariants,
    },
    /// Finite non-abelian group of the given order.
    Finite {
        order: u64,
    },
    /// Free group of rank at least 2.
    Free {
        rank: usize,
    },
    /// Only the abelianization is known.
    AbelianizationOnly {
        invariants: AbelianInvariants,
    },
    Unknown,
}

impl GroupId {
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupId::Abelian { invariants } => invariants.order(),
            GroupId::Finite { order } => Some(*order),
            _ => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(1)
    }

    /// Whether the identification is a full isomorphism type.
    pub fn is_certified(&self) -> bool {
        !matches!(self, GroupId::AbelianizationOnly { .. } | GroupId::Unknown)
    }

    pub fn cyclic(n: u64) -> GroupId {
        let torsion = if n == 1 { vec![] } else { vec![n] };
        GroupId::Abelian {
            invariants: AbelianInvariants { rank: 0, torsion },
        }
    }

    pub fn free_abelian(rank: usize) -> GroupId {
        GroupId::Abelian {
            invariants: AbelianInvariants {
                rank,
                torsion: vec![],
            },
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Abelian { invariants } => write!(f, "{invariants}"),
            GroupId::Finite { order } => write!(f, "finite of order {order}"),
            GroupId::Free { rank } => write!(f, "F{rank}"),
            GroupId::AbelianizationOnly { invariants } => {
                write!(f, "abelianization {invariants}, group unconfirmed")
            }
            GroupId::Unknown => write!(f, "unknown"),
        }
    }
}

/// Every pair of generators has its commutator among the relators.
fn has_all_commutators(p: &Presentation) -> bool {
    let rels: HashSet<Word> = p.relators.iter().map(|r| canonical_cyclic(r)).collect();
    let n = p.ngens() as i32;
    (1..=n).all(|i| (i + 1..=n).all(|j| rels.contains(&canonical_cyclic(&commutator(i, j)))))
}

/// Identifies the group, using coset enumeration bounded by `max_cosets`
/// when the abelianization is finite.
pub fn identify(p: &Presentation, max_cosets: usize) -> GroupId {
    let q = tietze_simplify_tracked(p).presentation;
    if q.ngens() == 0 {
        return GroupId::cyclic(1);
    }
    if q.relators.is_empty() {
        return if q.ngens() == 1 {
            GroupId::free_abelian(1)
        } else {
            GroupId::Free { rank: q.ngens() }
        };
    }
    let ab = abelianize(&q);
    if q.ngens() == 1 || has_all_commutators(&q) {
        return GroupId::Abelian { invariants: ab };
    }
    if ab.rank == 0 {
        if let Some(t) = coset_enumerate(&q, &[], max_cosets) {
            let order = t.index() as u64;
            return if Some(order) == ab.order() {
                GroupId::Abelian { invariants: ab }
            } else {
                GroupId::Finite { order }
            };
        }
    }
    GroupId::AbelianizationOnly { invariants: ab }
}

/// A group element in the normal form chosen by the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Word(Word),
    Abelian(Vec<BigInt>),
    Coset(u32),
}

#[derive(Clone, Debug)]
enum Kind {
    Free,
    Abelian(AbelianMap),
    Finite {
        table: CosetTable,
        perms: Vec<Vec<u32>>,
    },
}

/// Solves the word problem for groups that simplify to a free group, a
/// certified abelian group, or a finite group.
#[derive(Clone, Debug)]
pub struct ElementOracle {
    kind: Kind,
    images: Vec<Word>,
    inv_images: Vec<Word>,
}

impl ElementOracle {
    pub fn new(p: &Presentation, max_cosets: usize) -> Option<ElementOracle> {
        let s = tietze_simplify_tracked(p);
        let q = &s.presentation;
        let inv_images = s.images.iter().map(|w| inverse(w)).collect();
        let kind = if q.relators.is_empty() {
            Kind::Free
        } else if q.ngens() <= 1 || has_all_commutators(q) {
            Kind::Abelian(AbelianMap::new(q))
        } else if abelianize(q).rank > 0 {
            return None;
        } else {
            let table = coset_enumerate(q, &[], max_cosets)?;
            let perms = s
                .images
                .iter()
                .map(|w| {
                    (0..table.index())
                        .map(|c| table.trace(c, w) as u32)
                        .collect()
                })
                .collect();
            Kind::Finite { table, perms }
        };
        Some(ElementOracle {
            kind,
            images: s.images,
            inv_images,
        })
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            Kind::Free => Element::Word(Vec::new()),
            Kind::Abelian(m) => Element::Abelian(m.zero()),
            Kind::Finite { .. } => Element::Coset(0),
        }
    }

    /// Group order, when finite.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            Kind::Finite { table, .. } => Some(table.index()),
            Kind::Abelian(m) => m.invariants.order().map(|o| o as usize),
            Kind::Free => None,
        }
    }

    /// Right multiplication by a generator of the input presentation.
    pub fn mul_letter(&self, e: &Element, letter: i32) -> Element {
        let i = letter.unsigned_abs() as usize - 1;
        let img = if letter > 0 {
            &self.images[i]
        } else {
            &self.inv_images[i]
        };
        match (&self.kind, e) {
            (Kind::Free, Element::Word(w)) => {
                let mut v = w.clone();
                v.extend_from_slice(img);
                Element::Word(reduce(&v))
            }
            (Kind::Abelian(m), Element::Abelian(c)) => {
                Element::Abelian(img.iter().fold(c.clone(), |c, &x| m.step(&c, x)))
            }
            (Kind::Finite { table, perms }, Element::Coset(c)) => {
                if letter > 0 {
                    Element::Coset(perms[i][*c as usize])
                } else {
                    Element::Coset(table.trace(*c as usize, img) as u32)
                }
            }
            _ => panic!("element does not belong to this oracle"),
        }
    }

    pub fn eval(&self, w: &[i32]) -> Element {
        w.iter()
            .fold(self.identity(), |e, &x| self.mul_letter(&e, x))
    }

    pub fn is_trivial(&self, w: &[i32]) -> bool {
        self.eval(w) == self.identity()
    }
}

/// Decides triviality of `w`. "no" comes with a separating quotient
/// (abelianization or a coset action), "yes" with a normal form.
pub fn word_is_trivial(p: &Presentation, w: &[i32], max_cosets: usize) -> Decision {
    let w = reduce(w);
    if w.is_empty() {
        return Decision::Yes;
    }
    let am = AbelianMap::new(p);
    if !am.is_zero(&am.image(&w)) {
        return Decision::No;
    }
    if let Some(o) = ElementOracle::new(p, max_cosets) {
        return if o.is_trivial(&w) {
            Decision::Yes
        } else {
            Decision::No
        };
    }
    for g in 1..=p.ngens() as i32 {
        if let Some(t) = coset_enumerate(p, &[vec![g]], max_cosets) {
            if (0..t.index()).any(|c| t.trace(c, &w) != c) {
                return Decision::No;
            }
        }
    }
    Decision::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> String {
        identify(&Presentation::parse(s).unwrap(), 10_000).to_string()
    }

    #[test]
    fn identifies_small_groups() {
        assert_eq!(id("<g | g^2>"), "Z/2");
        assert_eq!(id("<g | g^4, g^6>"), "Z/2");
        assert_eq!(id("<a | >"), "Z");
        assert_eq!(id("<a,b | >"), "F2");
        assert_eq!(id("<a,b | ab>"), "Z");
        assert_eq!(id("<a,b | aba^-1b^-1>"), "Z^2");
        assert_eq!(id("<a,b | a^3, b^2, (ab)^2>"), "finite of order 6");
        assert_eq!(id("<a,b | a^2, b^2, (ab)^2>"), "Z/2 x Z/2");
        assert_eq!(
            id("<a,b | a^2, b^2>"),
            "abelianization Z/2 x Z/2, group unconfirmed"
        );
        assert_eq!(id("<a,b | >"), "F2");
        assert_eq!(id("<a | a>"), "1");
    }

    #[test]
    fn word_problem() {
        let p = Presentation::parse("<g | g^2>").unwrap();
        assert_eq!(word_is_trivial(&p, &[1, 1], 100), Decision::Yes);
        assert_eq!(word_is_trivial(&p, &[1], 100), Decision::No);
        let p = Presentation::parse("<a,b | aba^-1b^-1>").unwrap();
        assert_eq!(
            word_is_trivial(&p, &[1, 1, 2, -1, -1, -2], 100),
            Decision::Yes
        );
        let p = Presentation::parse("<a,b | a^3, b^2, (ab)^2>").unwrap();
        assert_eq!(word_is_trivial(&p, &[1, 2, 1, 2], 100), Decision::Yes);
        assert_eq!(
            word_is_trivial(&p, &[1, 2, -1, -2, 1, 2, -1, -2, 1, 2, -1, -2], 100),
            Decision::Yes
        );
        assert_eq!(word_is_trivial(&p, &[1, 2, -1, -2], 100), Decision::No);
        // Infinite dihedral group: (ab)^2 has no finite certificate here.
        let p = Presentation::parse("<a,b | a^2, b^2>").unwrap();
        assert_eq!(word_is_trivial(&p, &[1, 2, 1, 2], 100), Decision::Unknown);
    }

    #[test]
    fn oracle_normal_forms() {
        let p = Presentation::parse("<a,b,c | ab^-1, c>").unwrap();
        let o = ElementOracle::new(&p, 100).unwrap();
        assert!(o.is_trivial(&[1, -2]));
        assert!(o.is_trivial(&[3]));
        assert!(!o.is_trivial(&[1]));
        let p = Presentation::parse("<a,b | a^3, b^2, (ab)^2>").unwrap();
        let o = ElementOracle::new(&p, 100).unwrap();
        assert_eq!(o.order(), Some(6));
        assert!(o.is_trivial(&[2, 1, 2, 1]));
    }
}

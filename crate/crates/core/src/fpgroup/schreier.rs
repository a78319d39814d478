use super::{tietze_simplify, CosetTable, Presentation, Word};
use crate::error::{Error, Result};
use std::collections::VecDeque;

/// Reidemeister–Schreier: a presentation of the subgroup whose coset table
/// is `t`, on Schreier generators `s{coset}_{generator}`, Tietze-simplified.
pub fn subgroup_presentation(p: &Presentation, t: &CosetTable) -> Result<Presentation> {
    if t.ngens() != p.ngens() || t.index() == 0 {
        return Err(Error::Precondition(
            "coset table does not match presentation".into(),
        ));
    }
    let n = t.index();
    let k = p.ngens();
    let letters: Vec<i32> = (1..=k as i32).flat_map(|g| [g, -g]).collect();
    let mut seen = vec![false; n];
    let mut trivial = vec![vec![false; k + 1]; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for &x in &letters {
            let d = t.act(c, x);
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
                if x > 0 {
                    trivial[c][x as usize] = true;
                } else {
                    trivial[d][(-x) as usize] = true;
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Precondition("coset table is not connected".into()));
    }
    let mut index = vec![vec![0i32; k + 1]; n];
    let mut names = Vec::new();
    for c in 0..n {
        for g in 1..=k {
            if !trivial[c][g] {
                names.push(format!("s{c}_{}", p.generators[g - 1]));
                index[c][g] = names.len() as i32;
            }
        }
    }
    let mut rels = Vec::new();
    for r in &p.relators {
        for start in 0..n {
            let mut c = start;
            let mut w: Word = Vec::new();
            for &x in r {
                if x > 0 {
                    let s = index[c][x as usize];
                    if s != 0 {
                        w.push(s);
                    }
                    c = t.act(c, x);
                } else {
                    let d = t.act(c, x);
                    let s = index[d][(-x) as usize];
                    if s != 0 {
                        w.push(-s);
                    }
                    c = d;
                }
            }
            if c != start {
                return Err(Error::Precondition(
                    "relator does not close in coset table".into(),
                ));
            }
            rels.push(w);
        }
    }
    Ok(tietze_simplify(&Presentation {
        generators: names,
        relators: rels,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{abelianize, coset_enumerate, AbelianInvariants};

    fn sub(s: &str, h: &[Word]) -> Presentation {
        let p = Presentation::parse(s).unwrap();
        let t = coset_enumerate(&p, h, 1000).unwrap();
        subgroup_presentation(&p, &t).unwrap()
    }

    #[test]
    fn cyclic_subgroups() {
        let q = sub("<g | g^4>", &[vec![1, 1]]);
        assert_eq!(
            abelianize(&q),
            AbelianInvariants {
                rank: 0,
                torsion: vec![2]
            }
        );
        assert_eq!(q.ngens(), 1);
        let q = sub("<a | >", &[vec![1, 1]]);
        assert_eq!(q.to_string(), "<s1_a | >");
        let q = sub("<a | >", &[vec![1]]);
        assert_eq!(q.ngens(), 1);
        assert!(q.relators.is_empty());
    }

    #[test]
    fn commutator_subgroup_of_s3() {
        let q = sub("<a,b | a^3, b^2, (ab)^2>", &[vec![1]]);
        assert_eq!(
            abelianize(&q),
            AbelianInvariants {
                rank: 0,
                torsion: vec![3]
            }
        );
    }
}

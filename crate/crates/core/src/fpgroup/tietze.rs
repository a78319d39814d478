use super::{canonical_cyclic, cyclic_reduce, inverse, reduce, Presentation, Word};
use num_integer::Integer;

/// Result of a tracked simplification.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub presentation: Presentation,
    /// Image of each input generator as a word in the output generators.
    pub images: Vec<Word>,
    /// Input index (1-based) of each surviving generator.
    pub kept: Vec<usize>,
}

fn normalize(rels: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = rels
        .iter()
        .map(|r| canonical_cyclic(r))
        .filter(|r| !r.is_empty())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

fn substitute(w: &[i32], x: i32, repl: &[i32]) -> Word {
    let inv = inverse(repl);
    let mut out = Vec::with_capacity(w.len());
    for &y in w {
        if y == x {
            out.extend_from_slice(repl);
        } else if y == -x {
            out.extend_from_slice(&inv);
        } else {
            out.push(y);
        }
    }
    reduce(&out)
}

fn occurrences(w: &[i32], x: i32) -> usize {
    w.iter().filter(|&&y| y.abs() == x).count()
}

/// Expresses generator x from relator r (x occurring once) as a word.
fn solve_for(r: &[i32], x: i32) -> Word {
    let pos = r.iter().position(|&y| y.abs() == x).unwrap();
    // r rotated = x^e · rest, so x^e = rest⁻¹.
    let rest: Word = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
    if r[pos] > 0 {
        inverse(&rest)
    } else {
        rest
    }
}

/// Eliminates generators occurring exactly once in some relator while the
/// total relator length stays within that of the input. Deterministic.
pub fn tietze_simplify_tracked(p: &Presentation) -> Simplified {
    let n = p.ngens();
    let mut alive = vec![true; n + 1];
    alive[0] = false;
    let mut rels = normalize(&p.relators);
    let mut images: Vec<Word> = (1..=n as i32).map(|i| vec![i]).collect();
    let budget = rels.iter().map(|r| r.len()).sum::<usize>();
    loop {
        let total: usize = rels.iter().map(|r| r.len()).sum();
        // (new total, relator length, -generator) decides; ties impossible.
        let mut best: Option<((usize, usize, usize), usize, i32)> = None;
        for (ri, r) in rels.iter().enumerate() {
            let mut gens: Vec<i32> = r.iter().map(|y| y.abs()).collect();
            gens.sort_unstable();
            gens.dedup();
            for &x in gens.iter().rev() {
                if occurrences(r, x) != 1 {
                    continue;
                }
                let others: usize = rels
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != ri)
                    .map(|(_, s)| occurrences(s, x))
                    .sum();
                let new_total = (total + others * r.len()).saturating_sub(2 * others + r.len());
                let key = (new_total, r.len(), usize::MAX - x as usize);
                if best.map_or(true, |b| key < b.0) {
                    best = Some((key, ri, x));
                }
            }
        }
        let Some(((new_total, _, _), ri, x)) = best else {
            break;
        };
        if new_total > budget.max(total) {
            break;
        }
        let repl = solve_for(&rels[ri], x);
        rels.remove(ri);
        let next: Vec<Word> = rels.iter().map(|s| substitute(s, x, &repl)).collect();
        rels = normalize(&next);
        for img in images.iter_mut() {
            *img = substitute(img, x, &repl);
        }
        alive[x as usize] = false;
    }
    let kept: Vec<usize> = (1..=n).filter(|&i| alive[i]).collect();
    let mut renum = vec![0i32; n + 1];
    for (j, &i) in kept.iter().enumerate() {
        renum[i] = j as i32 + 1;
    }
    let rename = |w: &Word| -> Word {
        w.iter()
            .map(|&y| renum[y.unsigned_abs() as usize] * y.signum())
            .collect()
    };
    let mut rels: Vec<Word> = rels.iter().map(rename).collect();
    let images: Vec<Word> = images.iter().map(rename).collect();
    if kept.len() == 1 {
        let g = rels.iter().fold(0i64, |acc, r| {
            acc.gcd(&(r.iter().map(|&y| y.signum() as i64).sum::<i64>()))
        });
        rels = if g == 0 {
            Vec::new()
        } else {
            vec![vec![1; g as usize]]
        };
    }
    let rels = rels
        .into_iter()
        .map(|r| cyclic_reduce(&r))
        .filter(|r| !r.is_empty())
        .collect();
    let generators = kept.iter().map(|&i| p.generators[i - 1].clone()).collect();
    Simplified {
        presentation: Presentation {
            generators,
            relators: rels,
        },
        images,
        kept,
    }
}

pub fn tietze_simplify(p: &Presentation) -> Presentation {
    tietze_simplify_tracked(p).presentation
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::abelianize;

    fn simp(s: &str) -> String {
        tietze_simplify(&Presentation::parse(s).unwrap()).to_string()
    }

    #[test]
    fn eliminations() {
        assert_eq!(simp("<a,b | b>"), "<a | >");
        assert_eq!(simp("<a,b | ab>"), "<a | >");
        assert_eq!(simp("<g | g^4, g^6>"), "<g | g^2>");
        assert_eq!(simp("<a,b,c | abc, a^2>"), "<a,b | a^2>");
    }

    #[test]
    fn images_track_eliminated_generators() {
        let p = Presentation::parse("<a,b | ab^-1>").unwrap();
        let s = tietze_simplify_tracked(&p);
        assert_eq!(s.presentation.ngens(), 1);
        assert_eq!(s.images[0], s.images[1]);
    }

    #[test]
    fn abelianization_is_preserved() {
        for s in [
            "<a,b,c | abc, a^2b^3, c^5>",
            "<a,b | aba^-1b^-1, a^4b^2>",
            "<x,y,z | xy, yz, zx>",
        ] {
            let p = Presentation::parse(s).unwrap();
            assert_eq!(abelianize(&p), abelianize(&tietze_simplify(&p)), "{s}");
        }
    }
}

//! Todd–Coxeter coset enumeration, HLT strategy.
//!
//! Columns: generator i (0-based) uses column 2i, its inverse 2i+1.

use super::{Presentation, Word};

const NONE: u32 = u32::MAX;

fn col(letter: i32) -> usize {
    let i = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * i
    } else {
        2 * i + 1
    }
}

/// A complete coset table: `act(c, letter)` is the coset `c·letter`.
/// Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    rows: Vec<Vec<u32>>,
}

impl CosetTable {
    /// Builds a table from explicit permutations, one per generator
    /// (`perm[g][c] = c·g`). Fails if any entry is not a permutation.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Option<CosetTable> {
        let n = perms.first().map_or(1, |p| p.len());
        let mut rows = vec![vec![NONE; 2 * perms.len()]; n];
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n {
                return None;
            }
            for (c, &d) in p.iter().enumerate() {
                if d >= n || rows[d][2 * g + 1] != NONE {
                    return None;
                }
                rows[c][2 * g] = d as u32;
                rows[d][2 * g + 1] = c as u32;
            }
        }
        Some(CosetTable {
            ngens: perms.len(),
            rows,
        })
    }

    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn act(&self, c: usize, letter: i32) -> usize {
        self.rows[c][col(letter)] as usize
    }

    pub fn trace(&self, c: usize, w: &[i32]) -> usize {
        w.iter().fold(c, |c, &x| self.act(c, x))
    }

    /// Every relator fixes every coset and every subgroup generator
    /// fixes coset 0.
    pub fn is_consistent(&self, p: &Presentation, subgroup: &[Word]) -> bool {
        (0..self.index()).all(|c| p.relators.iter().all(|r| self.trace(c, r) == c))
            && subgroup.iter().all(|h| self.trace(0, h) == 0)
            && self.rows.iter().all(|r| r.iter().all(|&x| x != NONE))
    }
}

struct Enumerator<'a> {
    ncols: usize,
    table: Vec<Vec<u32>>,
    fwd: Vec<u32>,
    queue: Vec<u32>,
    cap: usize,
    rels: &'a [Word],
    overflow: bool,
}

impl<'a> Enumerator<'a> {
    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.fwd[r as usize] != r {
            r = self.fwd[r as usize];
        }
        let mut x = c;
        while self.fwd[x as usize] != r {
            let nx = self.fwd[x as usize];
            self.fwd[x as usize] = r;
            x = nx;
        }
        r
    }

    fn alive(&self, c: u32) -> bool {
        self.fwd[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> bool {
        if self.table.len() >= self.cap {
            self.overflow = true;
            return false;
        }
        let d = self.table.len() as u32;
        self.table.push(vec![NONE; self.ncols]);
        self.fwd.push(d);
        self.table[c as usize][x] = d;
        self.table[d as usize][x ^ 1] = c;
        true
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.fwd[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.table[g as usize][x];
                if d == NONE {
                    continue;
                }
                if self.table[d as usize][x ^ 1] == g {
                    self.table[d as usize][x ^ 1] = NONE;
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let tm = self.table[mu as usize][x];
                if tm != NONE {
                    let r = self.rep(tm);
                    self.merge(nu, r);
                } else {
                    let tn = self.table[nu as usize][x ^ 1];
                    if tn != NONE {
                        let r = self.rep(tn);
                        self.merge(mu, r);
                    } else {
                        self.table[mu as usize][x] = nu;
                        self.table[nu as usize][x ^ 1] = mu;
                    }
                }
            }
        }
    }

    /// Scans `w` from coset c, defining new cosets to complete the scan.
    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> bool {
        if w.is_empty() {
            return true;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f as usize][w[i]] != NONE {
                f = self.table[f as usize][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i as isize && self.table[b as usize][w[j as usize] ^ 1] != NONE {
                b = self.table[b as usize][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return true;
            } else if j == i as isize {
                self.table[f as usize][w[i]] = b;
                self.table[b as usize][w[i] ^ 1] = f;
                return true;
            } else if !self.define(f, w[i]) {
                return false;
            }
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup`. Returns
/// `None` when more than `max_cosets` cosets would be defined.
pub fn coset_enumerate(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
) -> Option<CosetTable> {
    let ncols = 2 * p.ngens();
    let to_cols = |w: &Word| -> Vec<usize> { w.iter().map(|&x| col(x)).collect() };
    let rels: Vec<Vec<usize>> = p.relators.iter().map(to_cols).collect();
    let subs: Vec<Vec<usize>> = subgroup.iter().map(to_cols).collect();
    let mut e = Enumerator {
        ncols,
        table: vec![vec![NONE; ncols]],
        fwd: vec![0],
        queue: Vec::new(),
        cap: max_cosets.max(1),
        rels: &p.relators,
        overflow: false,
    };
    let _ = e.rels;
    for h in &subs {
        if !e.scan_and_fill(0, h) {
            return None;
        }
    }
    let mut c = 0usize;
    while c < e.table.len() {
        if e.alive(c as u32) {
            for r in &rels {
                if !e.scan_and_fill(c as u32, r) {
                    return None;
                }
                if !e.alive(c as u32) {
                    break;
                }
            }
            if e.alive(c as u32) {
                for x in 0..ncols {
                    if e.table[c][x] == NONE && !e.define(c as u32, x) {
                        return None;
                    }
                }
            }
        }
        c += 1;
    }
    if e.overflow {
        return None;
    }
    // Compact live cosets in order.
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.alive(c as u32)).collect();
    let mut newid = vec![NONE; e.table.len()];
    for (i, &c) in live.iter().enumerate() {
        newid[c] = i as u32;
    }
    let mut rows = Vec::with_capacity(live.len());
    for &c in &live {
        let mut row = Vec::with_capacity(ncols);
        for x in 0..ncols {
            let d = e.table[c][x];
            if d == NONE {
                return None;
            }
            let d = e.rep(d);
            row.push(newid[d as usize]);
        }
        rows.push(row);
    }
    let t = CosetTable {
        ngens: p.ngens(),
        rows,
    };
    debug_assert!(t.is_consistent(p, subgroup));
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(s: &str, sub: &[Word], cap: usize) -> Option<usize> {
        let p = Presentation::parse(s).unwrap();
        let t = coset_enumerate(&p, sub, cap)?;
        assert!(t.is_consistent(&p, sub));
        Some(t.index())
    }

    #[test]
    fn small_indices() {
        assert_eq!(enumerate("<g | g^2>", &[], 10), Some(2));
        assert_eq!(enumerate("<a | >", &[], 1000), None);
        assert_eq!(
            enumerate("<a,b | a^2, b^2, (ab)^2>", &[vec![1]], 10),
            Some(2)
        );
        assert_eq!(enumerate("<a,b | a^3, b^2, (ab)^2>", &[], 100), Some(6));
        assert_eq!(enumerate("<a,b | a^2, b^3, (ab)^5>", &[], 1000), Some(60));
        assert_eq!(enumerate("<a | >", &[vec![1, 1, 1]], 100), Some(3));
        assert_eq!(enumerate("<a,b | ab, b>", &[], 10), Some(1));
    }

    #[test]
    fn permutation_tables() {
        let t = CosetTable::from_permutations(&[vec![1, 0]]).unwrap();
        assert_eq!(t.trace(0, &[1, 1]), 0);
        assert_eq!(t.act(1, -1), 0);
        assert!(CosetTable::from_permutations(&[vec![0, 0]]).is_none());
    }
}

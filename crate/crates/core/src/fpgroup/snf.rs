use super::{exponent_vector, Presentation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Smith normal form `U·A·V = D`.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal of D, length min(rows, cols); nonzero entries first,
    /// each dividing the next.
    pub diag: Vec<BigInt>,
    /// Row transform (rows × rows), when requested.
    pub u: Option<Vec<Vec<BigInt>>>,
    /// Column transform (cols × cols).
    pub v: Vec<Vec<BigInt>>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

struct Work {
    m: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

impl Work {
    // row_i += k·row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let t = &self.m[j][c] * k;
            self.m[i][c] += t;
        }
        if let Some(u) = self.u.as_mut() {
            for c in 0..self.rows {
                let t = &u[j][c] * k;
                u[i][c] += t;
            }
        }
    }

    // col_i += k·col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let t = &self.m[r][j] * k;
            self.m[r][i] += t;
        }
        for r in 0..self.cols {
            let t = &self.v[r][j] * k;
            self.v[r][i] += t;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.m.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.m.iter_mut() {
            r.swap(i, j);
        }
        for r in self.v.iter_mut() {
            r.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.m[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Moves the least nonzero |entry| among pivot row/column (or, when
    /// `whole`, the whole trailing block) to (t,t).
    fn pivot(&mut self, t: usize, whole: bool) -> bool {
        let mut best: Option<(BigInt, usize, usize)> = None;
        let consider =
            |a: &BigInt, i: usize, j: usize, best: &mut Option<(BigInt, usize, usize)>| {
                if !a.is_zero() && best.as_ref().map_or(true, |(b, _, _)| a.abs() < *b) {
                    *best = Some((a.abs(), i, j));
                }
            };
        if whole {
            for i in t..self.rows {
                for j in t..self.cols {
                    consider(&self.m[i][j], i, j, &mut best);
                }
            }
        } else {
            for i in t..self.rows {
                consider(&self.m[i][t], i, t, &mut best);
            }
            for j in t..self.cols {
                consider(&self.m[t][j], t, j, &mut best);
            }
        }
        match best {
            None => false,
            Some((_, i, j)) => {
                if i != t {
                    self.swap_rows(i, t);
                }
                if j != t {
                    self.swap_cols(j, t);
                }
                true
            }
        }
    }
}

/// Smith normal form over the integers. `want_u` also accumulates the
/// row transform, which costs rows² space.
pub fn smith_normal_form(a: &[Vec<BigInt>], cols: usize, want_u: bool) -> Snf {
    let rows = a.len();
    let mut w = Work {
        m: a.to_vec(),
        u: if want_u { Some(identity(rows)) } else { None },
        v: identity(cols),
        rows,
        cols,
    };
    let mut t = 0;
    while t < rows.min(cols) {
        if !w.pivot(t, true) {
            break;
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.m[i][t].is_zero() {
                    let q = -(&w.m[i][t] / &w.m[t][t]);
                    w.add_row(i, t, &q);
                    if !w.m[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.m[t][j].is_zero() {
                    let q = -(&w.m[t][j] / &w.m[t][t]);
                    w.add_col(j, t, &q);
                    if !w.m[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                w.pivot(t, false);
                continue;
            }
            let p = w.m[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.m[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.m[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| w.m[i][i].clone()).collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Snf {
        diag,
        u: w.u,
        v: w.v,
        rank,
    }
}

/// Matrix product helper used by checks.
pub fn mat_mul(
    a: &[Vec<BigInt>],
    b: &[Vec<BigInt>],
    inner: usize,
    cols: usize,
) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Checks `U·A·V = D` with D diagonal and the divisibility chain.
pub fn verify_snf(a: &[Vec<BigInt>], cols: usize, s: &Snf) -> bool {
    let Some(u) = s.u.as_ref() else { return false };
    let rows = a.len();
    let ua = mat_mul(u, a, rows, cols);
    let d = mat_mul(&ua, &s.v, cols, cols);
    for i in 0..rows {
        for j in 0..cols {
            let want = if i == j {
                s.diag[i].clone()
            } else {
                BigInt::zero()
            };
            if d[i][j] != want {
                return false;
            }
        }
    }
    let nz: Vec<&BigInt> = s.diag.iter().filter(|x| !x.is_zero()).collect();
    if s.diag.iter().skip(nz.len()).any(|x| !x.is_zero()) {
        return false;
    }
    nz.iter().all(|x| x.is_positive()) && nz.windows(2).all(|p| p[1].is_multiple_of(p[0]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn trivial() -> AbelianInvariants {
        AbelianInvariants {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

fn relator_matrix(p: &Presentation) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<i64>> = p
        .relators
        .iter()
        .map(|r| exponent_vector(r, p.ngens()))
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    rows.sort();
    rows.dedup();
    rows.into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Coordinates on the abelianization: a word's exponent vector x maps to
/// x·V, reduced modulo the invariant factors.
#[derive(Clone, Debug)]
pub struct AbelianMap {
    pub invariants: AbelianInvariants,
    v: Vec<Vec<BigInt>>,
    diag: Vec<BigInt>,
}

impl AbelianMap {
    pub fn new(p: &Presentation) -> AbelianMap {
        let n = p.ngens();
        let a = relator_matrix(p);
        let s = smith_normal_form(&a, n, false);
        let mut diag = vec![BigInt::zero(); n];
        for (i, d) in s.diag.iter().enumerate() {
            diag[i] = d.clone();
        }
        let torsion = diag
            .iter()
            .filter(|d| **d > BigInt::one())
            .map(|d| d.to_u64().expect("torsion coefficient exceeds u64"))
            .collect();
        AbelianMap {
            invariants: AbelianInvariants {
                rank: n - s.rank,
                torsion,
            },
            v: s.v,
            diag,
        }
    }

    /// Zero vector in coordinates.
    pub fn zero(&self) -> Vec<BigInt> {
        self.coords(&vec![0; self.v.len()])
    }

    /// Coordinates of an exponent vector.
    pub fn coords(&self, x: &[i64]) -> Vec<BigInt> {
        let n = self.v.len();
        let mut out = Vec::new();
        for j in 0..n {
            let mut y = BigInt::zero();
            for (i, &xi) in x.iter().enumerate() {
                if xi != 0 {
                    y += &self.v[i][j] * BigInt::from(xi);
                }
            }
            let d = &self.diag[j];
            if d.is_one() {
                continue;
            }
            out.push(if d.is_zero() { y } else { y.mod_floor(d) });
        }
        out
    }

    /// Adds generator `letter` (signed, 1-based) to coordinates.
    pub fn step(&self, c: &[BigInt], letter: i32) -> Vec<BigInt> {
        let n = self.v.len();
        let i = letter.unsigned_abs() as usize - 1;
        let mut out = Vec::with_capacity(c.len());
        let mut k = 0;
        for j in 0..n {
            let d = &self.diag[j];
            if d.is_one() {
                continue;
            }
            let y = if letter > 0 {
                &c[k] + &self.v[i][j]
            } else {
                &c[k] - &self.v[i][j]
            };
            out.push(if d.is_zero() { y } else { y.mod_floor(d) });
            k += 1;
        }
        out
    }

    pub fn image(&self, w: &[i32]) -> Vec<BigInt> {
        self.coords(&exponent_vector(w, self.v.len()))
    }

    pub fn is_zero(&self, c: &[BigInt]) -> bool {
        c.iter().all(|x| x.is_zero())
    }
}

pub fn abelianize(p: &Presentation) -> AbelianInvariants {
    AbelianMap::new(p).invariants
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_groups() {
        let ab = |s: &str| abelianize(&Presentation::parse(s).unwrap());
        assert_eq!(
            ab("<g | g^2>"),
            AbelianInvariants {
                rank: 0,
                torsion: vec![2]
            }
        );
        assert_eq!(
            ab("<a,b | >"),
            AbelianInvariants {
                rank: 2,
                torsion: vec![]
            }
        );
        assert_eq!(
            ab("<a,b | a^2b^2, a^4>"),
            AbelianInvariants {
                rank: 0,
                torsion: vec![2, 4]
            }
        );
        assert_eq!(ab("<a,b | a^2b^2, a^4>").to_string(), "Z/2 x Z/4");
    }

    #[test]
    fn transforms_multiply_out() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a, 3, true);
        assert!(verify_snf(&a, 3, &s));
        assert_eq!(
            s.diag,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    #[test]
    fn coordinates_detect_torsion() {
        let p = Presentation::parse("<a,b | a^2b^2, a^4>").unwrap();
        let am = AbelianMap::new(&p);
        assert!(am.is_zero(&am.image(&[1, 1, 2, 2])));
        assert!(!am.is_zero(&am.image(&[1])));
        let mut c = am.zero();
        for &x in &[1, 1, 1, 1] {
            c = am.step(&c, x);
        }
        assert!(am.is_zero(&c));
    }
}

//! Integer partitions and the combinatorics of strips and chains.
//!
//! Rows are 1-indexed in the mathematical sense; the accessor
//! [`Partition::part`] takes a 0-based row index and returns 0 past the end.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Partition {
    /// Validates and normalizes (trailing zeros are dropped).
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Builds from a slice known to be a partition. Panics otherwise.
    pub fn from_slice(parts: &[usize]) -> Self {
        Partition::new(parts.to_vec()).expect("not a partition")
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The rectangle `m^n`.
    pub fn rectangle(m: usize, n: usize) -> Self {
        if m == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![m; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// |λ|.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// λ_{i+1} (0-based row index), zero past the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.part(0);
        let parts = (1..=m).map(|j| self.parts.iter().take_while(|&&p| p >= j).count()).collect();
        Partition { parts }
    }

    /// n(λ) = Σ (i-1) λ_i.
    pub fn n_stat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, p)| i * p).sum()
    }

    /// n(λ') = Σ binom(λ_i, 2).
    pub fn n_conj(&self) -> usize {
        self.parts.iter().map(|p| p * p.saturating_sub(1) / 2).sum()
    }

    /// Diagram containment μ ⊂ λ (`self` is λ).
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.len() <= self.len() && mu.parts.iter().zip(&self.parts).all(|(m, l)| m <= l)
    }

    /// Boxes (i, j), 1-indexed, in row-major order.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
    }

    /// m^n − λ.
    pub fn complement(&self, m: usize, n: usize) -> Result<Partition> {
        if !Partition::rectangle(m, n).contains(self) {
            return Err(Error::Precondition(format!("{self} is not contained in {m}^{n}")));
        }
        Partition::new((1..=n).map(|i| m - self.part(n - i)).collect())
    }

    /// m^n + λ: add m to each of the first n rows.
    pub fn add_rows(&self, m: usize, n: usize) -> Result<Partition> {
        if self.len() > n {
            return Err(Error::Precondition(format!("ℓ({self}) > {n}")));
        }
        Partition::new((0..n).map(|i| m + self.part(i)).collect())
    }

    /// m^n · λ: n rows of length m stacked above λ.
    pub fn concat_cols(&self, m: usize, n: usize) -> Result<Partition> {
        if self.part(0) > m {
            return Err(Error::Precondition(format!("{self} has first part exceeding {m}")));
        }
        let mut parts = vec![m; n];
        parts.extend_from_slice(&self.parts);
        Partition::new(parts)
    }

    /// 2λ², with (2λ²)_i = 2 λ_{⌈i/2⌉}.
    pub fn double_square(&self) -> Partition {
        Partition { parts: self.parts.iter().flat_map(|&p| [2 * p, 2 * p]).collect() }
    }

    /// κ ≺ λ: λ/κ is a vertical strip (κ ⊂ λ ⊂ 1^N + κ).
    pub fn vertical_strip_over(&self, kappa: &Partition) -> bool {
        self.contains(kappa) && (0..self.len()).all(|i| self.part(i) <= kappa.part(i) + 1)
    }

    /// κ ≺' λ: λ/κ is a horizontal strip (λ_{i+1} ≤ κ_i ≤ λ_i).
    pub fn horizontal_strip_over(&self, kappa: &Partition) -> bool {
        kappa.len() <= self.len()
            && (0..self.len()).all(|i| self.part(i + 1) <= kappa.part(i) && kappa.part(i) <= self.part(i))
    }

    /// All κ with κ ≺' λ, in lexicographic order of their part sequences.
    pub fn horizontal_strips(&self) -> Vec<Partition> {
        let l = self.len();
        let mut out = Vec::new();
        let mut cur = vec![0usize; l];
        fn rec(lam: &Partition, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if i == cur.len() {
                out.push(Partition::new(cur.clone()).expect("interlacing gives a partition"));
                return;
            }
            for k in lam.part(i + 1)..=lam.part(i) {
                cur[i] = k;
                rec(lam, i + 1, cur, out);
            }
        }
        rec(self, 0, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Chains ∅ = λ⁽⁰⁾ ≺' λ⁽¹⁾ ≺' … ≺' λ⁽ⁿ⁾ = λ, lazily.
    pub fn chains(&self, n: usize) -> Chains {
        Chains::new(self.clone(), n)
    }

    /// All μ with κ ⊂ μ ⊂ λ (`self` is λ), lexicographically ordered.
    pub fn between(&self, kappa: &Partition) -> Vec<Partition> {
        if !self.contains(kappa) {
            return Vec::new();
        }
        let l = self.len();
        let mut out = Vec::new();
        let mut cur = vec![0usize; l];
        fn rec(lam: &Partition, kap: &Partition, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if i == cur.len() {
                out.push(Partition::new(cur.clone()).expect("decreasing by construction"));
                return;
            }
            let hi = if i == 0 { lam.part(0) } else { lam.part(i).min(cur[i - 1]) };
            for k in kap.part(i)..=hi {
                cur[i] = k;
                rec(lam, kap, i + 1, cur, out);
            }
        }
        rec(self, kappa, 0, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All μ ⊂ λ.
    pub fn subpartitions(&self) -> Vec<Partition> {
        self.between(&Partition::empty())
    }
}

/// Every partition of `size`, in lexicographic order.
pub fn partitions_of(size: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k);
            rec(rem - k, k, cur, out);
            cur.pop();
        }
    }
    rec(size, size, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Every partition with |λ| ≤ `max_size` and ℓ(λ) ≤ `max_len`.
pub fn partitions_up_to(max_size: usize, max_len: usize) -> Vec<Partition> {
    (0..=max_size).flat_map(partitions_of).filter(|p| p.len() <= max_len).collect()
}

/// Lazy depth-first enumeration of horizontal-strip chains.
pub struct Chains {
    n: usize,
    /// `stack[k]` holds the candidates for λ⁽ⁿ⁻ᵏ⁻¹⁾ and the next index to try.
    stack: Vec<(Vec<Partition>, usize)>,
    top: Partition,
    done: bool,
}

impl Chains {
    fn new(top: Partition, n: usize) -> Self {
        let done = top.len() > n;
        Chains { n, stack: Vec::new(), top, done }
    }

    fn candidates(kappa: &Partition, level: usize) -> Vec<Partition> {
        // Candidates for the partition at `level` sitting below `kappa`.
        kappa.horizontal_strips().into_iter().filter(|k| k.len() <= level).collect()
    }

    fn current(&self) -> Vec<Partition> {
        let mut chain: Vec<Partition> = self.stack.iter().map(|(c, i)| c[*i - 1].clone()).collect();
        chain.reverse();
        chain.push(self.top.clone());
        chain
    }
}

impl Iterator for Chains {
    type Item = Vec<Partition>;

    fn next(&mut self) -> Option<Vec<Partition>> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return if self.top.is_empty() { Some(vec![self.top.clone()]) } else { None };
        }
        if self.stack.is_empty() {
            self.stack.push((Chains::candidates(&self.top, self.n - 1), 0));
        }
        loop {
            let depth = self.stack.len();
            let level = self.n - depth;
            let Some((cands, idx)) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            if *idx >= cands.len() {
                self.stack.pop();
                if self.stack.is_empty() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            let pick = cands[*idx].clone();
            *idx += 1;
            if level == 0 {
                if pick.is_empty() {
                    return Some(self.current());
                }
                continue;
            }
            let below = Chains::candidates(&pick, level - 1);
            self.stack.push((below, 0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::from_slice(v)
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[]).conjugate(), p(&[]));
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(p(&[]).complement(2, 2).unwrap(), p(&[2, 2]));
        assert_eq!(p(&[2, 2]).complement(2, 2).unwrap(), p(&[]));
        assert_eq!(p(&[2, 1]).complement(2, 3).unwrap(), p(&[2, 1]));
        assert!(p(&[3]).complement(2, 2).is_err());
    }

    #[test]
    fn rectangle_operations() {
        assert_eq!(p(&[1]).add_rows(2, 2).unwrap(), p(&[3, 2]));
        assert_eq!(p(&[1]).concat_cols(2, 1).unwrap(), p(&[2, 1]));
        assert_eq!(p(&[2, 1]).double_square(), p(&[4, 4, 2, 2]));
        assert!(p(&[1, 1, 1]).add_rows(1, 2).is_err());
        assert!(p(&[3]).concat_cols(2, 1).is_err());
    }

    #[test]
    fn concat_is_conjugate_of_row_addition() {
        let lam = p(&[2, 1]);
        let direct = lam.concat_cols(3, 2).unwrap();
        let via = lam.conjugate().add_rows(2, 3).unwrap().conjugate();
        assert_eq!(direct, via);
    }

    #[test]
    fn strip_examples() {
        assert_eq!(p(&[]).horizontal_strips(), vec![p(&[])]);
        assert_eq!(p(&[1]).horizontal_strips(), vec![p(&[]), p(&[1])]);
        assert_eq!(p(&[2, 1]).horizontal_strips(), vec![p(&[1]), p(&[1, 1]), p(&[2]), p(&[2, 1])]);
    }

    #[test]
    fn chain_examples() {
        assert_eq!(p(&[1]).chains(1).count(), 1);
        let c: Vec<_> = p(&[1, 1]).chains(2).collect();
        assert_eq!(c, vec![vec![p(&[]), p(&[1]), p(&[1, 1])]]);
        assert_eq!(p(&[2, 1]).chains(2).count(), 2);
        assert_eq!(p(&[1, 1, 1]).chains(2).count(), 0);
        assert_eq!(p(&[]).chains(0).count(), 1);
        assert_eq!(p(&[]).chains(3).count(), 1);
    }

    #[test]
    fn statistics() {
        let lam = p(&[3, 2, 2]);
        assert_eq!(lam.size(), 7);
        assert_eq!(lam.n_stat(), 2 + 4);
        assert_eq!(lam.n_conj(), lam.conjugate().n_stat());
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(p(&[2, 1]).between(&p(&[1])).len(), 4);
    }
}

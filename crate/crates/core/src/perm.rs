//! Permutations of `{0..n-1}` stored as image vectors.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A permutation given by its image vector: `p.apply(i) == p.0[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation of `{0..n-1}` from disjoint cycles (0-based).
    /// Entries absent from every cycle are fixed points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Option<Self> {
        let mut img: Vec<Option<usize>> = vec![None; n];
        for cy in cycles {
            for (j, &a) in cy.iter().enumerate() {
                let b = cy[(j + 1) % cy.len()];
                if a >= n || b >= n || img[a].is_some() {
                    return None;
                }
                img[a] = Some(b);
            }
        }
        Some(Perm(
            img.into_iter()
                .enumerate()
                .map(|(i, x)| x.unwrap_or(i))
                .collect(),
        ))
    }

    pub fn is_valid(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n];
        for &x in &self.0 {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self.compose(other)` is the permutation `i -> self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// Cycles in canonical order: each starts at its least element,
    /// cycles sorted by that element. Fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cy = vec![start];
            seen[start] = true;
            let mut cur = self.0[start];
            while cur != start {
                seen[cur] = true;
                cy.push(cur);
                cur = self.0[cur];
            }
            out.push(cy);
        }
        out
    }

    /// Cycle notation with 1-based entries, fixed points omitted;
    /// `"()"` for the identity.
    pub fn cycle_string(&self) -> String {
        let mut s = String::new();
        for cy in self.cycles() {
            if cy.len() == 1 {
                continue;
            }
            s.push('(');
            for (j, a) in cy.iter().enumerate() {
                if j > 0 {
                    s.push(' ');
                }
                s.push_str(&(a + 1).to_string());
            }
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        assert_eq!(p.0, vec![1, 0, 2]);
        assert_eq!(p.cycle_string(), "(1 2)");
        assert_eq!(p.compose(&p.inverse()), Perm::identity(3));
    }

    #[test]
    fn from_cycles_rejects_repeats() {
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_none());
        assert!(Perm::from_cycles(2, &[vec![0, 5]]).is_none());
    }
}

//! Coset enumeration over the modular group presented as
//! `< s, t | s^2 = (st)^3 = 1 >`.

use crate::matrix::{Letter, Word};

/// Result of an enumeration attempt with a coset cap.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CosetResult {
    Index(u64),
    /// The cap was reached; the subgroup may have infinite index.
    Unbounded,
}

// Action labels: 0 = s (self-inverse), 1 = t, 2 = t^-1.
const NGEN: usize = 3;

fn inv(x: usize) -> usize {
    match x {
        0 => 0,
        1 => 2,
        _ => 1,
    }
}

fn letter_label(l: Letter) -> usize {
    match l {
        Letter::S => 0,
        Letter::T => 1,
        Letter::TInv => 2,
    }
}

struct Table {
    row: Vec<[Option<usize>; NGEN]>,
    parent: Vec<usize>,
    queue: Vec<(usize, usize)>,
    created: usize,
    cap: usize,
}

impl Table {
    fn new(cap: usize) -> Table {
        Table { row: vec![[None; NGEN]], parent: vec![0], queue: Vec::new(), created: 1, cap }
    }

    fn rep(&mut self, mut c: usize) -> usize {
        while self.parent[c] != c {
            self.parent[c] = self.parent[self.parent[c]];
            c = self.parent[c];
        }
        c
    }

    fn define(&mut self, a: usize, x: usize) -> Option<usize> {
        if self.created >= self.cap {
            return None;
        }
        let b = self.row.len();
        self.row.push([None; NGEN]);
        self.parent.push(b);
        self.created += 1;
        self.row[a][x] = Some(b);
        self.row[b][inv(x)] = Some(a);
        Some(b)
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            self.queue.push((ra, rb));
        }
    }

    fn set(&mut self, a: usize, x: usize, b: usize) {
        match self.row[a][x] {
            Some(c) => self.join(c, b),
            None => {
                self.row[a][x] = Some(b);
                match self.row[b][inv(x)] {
                    Some(c) => self.join(c, a),
                    None => self.row[b][inv(x)] = Some(a),
                }
            }
        }
    }

    fn process_coincidences(&mut self) {
        while let Some((a, b)) = self.queue.pop() {
            let (ra, rb) = (self.rep(a), self.rep(b));
            if ra == rb {
                continue;
            }
            let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[drop] = keep;
            for x in 0..NGEN {
                if let Some(c) = self.row[drop][x] {
                    self.row[drop][x] = None;
                    let rc = self.rep(c);
                    let rk = self.rep(keep);
                    self.set(rk, x, rc);
                }
            }
        }
    }

    /// Scans `word` from coset `c`, filling gaps by defining new
    /// cosets. Returns false when the cap is reached.
    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> bool {
        let mut f = self.rep(c);
        let mut i = 0;
        let mut b = self.rep(c);
        let mut j = word.len();
        loop {
            // Scan forward as far as the table is defined.
            while i < j {
                match self.row[f][word[i]] {
                    Some(n) => {
                        f = self.rep(n);
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                self.join(f, b);
                self.process_coincidences();
                return true;
            }
            // Scan backward.
            while j > i {
                match self.row[b][inv(word[j - 1])] {
                    Some(n) => {
                        b = self.rep(n);
                        j -= 1;
                    }
                    None => break,
                }
            }
            if i == j {
                self.join(f, b);
                self.process_coincidences();
                return true;
            }
            if i + 1 == j {
                // A single gap: fill it deductively.
                self.set(f, word[i], b);
                self.process_coincidences();
                return true;
            }
            match self.define(f, word[i]) {
                Some(n) => {
                    f = n;
                    i += 1;
                }
                None => return false,
            }
        }
    }

    fn live(&mut self) -> Vec<usize> {
        (0..self.row.len()).filter(|&c| self.parent[c] == c).collect()
    }
}

/// Computes the index of the subgroup generated by `subgroup` in the
/// modular group, or reports `Unbounded` when `cap` cosets are reached.
pub fn coset_enumeration(subgroup: &[Word], cap: usize) -> CosetResult {
    let relators: Vec<Vec<usize>> = vec![vec![0, 0], vec![0, 1, 0, 1, 0, 1]];
    let mut t = Table::new(cap.max(2));
    for w in subgroup {
        let labels: Vec<usize> = w.0.iter().map(|&l| letter_label(l)).collect();
        if !t.scan_and_fill(0, &labels) {
            return CosetResult::Unbounded;
        }
    }
    loop {
        let created_before = t.created;
        let live_before = t.live().len();
        let mut filled = false;
        let live = t.live();
        for c in live {
            let c = t.rep(c);
            if t.parent[c] != c {
                continue;
            }
            for r in &relators {
                if !t.scan_and_fill(c, r) {
                    return CosetResult::Unbounded;
                }
            }
            let c = t.rep(c);
            if t.parent[c] != c {
                continue;
            }
            for x in 0..NGEN {
                if t.row[c][x].is_none() {
                    match t.define(c, x) {
                        Some(_) => filled = true,
                        None => return CosetResult::Unbounded,
                    }
                }
            }
        }
        t.process_coincidences();
        if !filled && t.created == created_before && t.live().len() == live_before {
            break;
        }
    }
    CosetResult::Index(t.live().len() as u64)
}

//! Permutations of `{0..n}` and the small permutation groups they generate.
//!
//! Composition convention: `p.then(q)` applies `p` first, then `q`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from its image table, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// From 1-based cycles, e.g. `[[1, 2, 3]]` on `n` points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Option<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a == 0 || b == 0 || a > n || b > n {
                    return None;
                }
                img[a - 1] = b - 1;
            }
        }
        Perm::from_images(img)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Nontrivial cycles, each starting at its smallest element, 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.0[start];
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.0[j];
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(|c| c.len())
            .fold(1, num_integer::lcm)
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Product `gens[0].then(gens[1])...`, identity on `n` points when empty.
pub fn product(gens: &[Perm], n: usize) -> Perm {
    gens.iter().fold(Perm::identity(n), |acc, g| acc.then(g))
}

/// All elements of the group generated by `gens`, or `None` when it has
/// more than `cap` elements.
pub fn generate_group(gens: &[Perm], n: usize, cap: usize) -> Option<Vec<Perm>> {
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut order = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return None;
                }
                order.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Some(order)
}

/// Whether the group generated by `gens` acts transitively on `{0..n}`.
pub fn is_transitive(gens: &[Perm], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for g in gens {
            let j = g.apply(i);
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn is_abelian(gens: &[Perm]) -> bool {
    gens.iter()
        .all(|a| gens.iter().all(|b| a.then(b) == b.then(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation() {
        let p = Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(p.to_string(), "(1 2 3)");
        assert_eq!(Perm::identity(4).to_string(), "()");
        assert_eq!(p.order(), 3);
        assert!(p.then(&p.inverse()).is_identity());
    }

    #[test]
    fn composition_order() {
        let a = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![2, 3]]).unwrap();
        // 1 -> 2 under a, then 2 -> 3 under b
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(!is_abelian(&[a.clone(), b.clone()]));
        let g = generate_group(&[a, b], 3, 100).unwrap();
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn transitivity() {
        let a = Perm::from_cycles(4, &[vec![1, 2]]).unwrap();
        assert!(!is_transitive(std::slice::from_ref(&a), 4));
        let b = Perm::from_cycles(4, &[vec![2, 3, 4]]).unwrap();
        assert!(is_transitive(&[a, b], 4));
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_none());
        assert!(Perm::from_cycles(2, &[vec![1, 3]]).is_none());
    }
}

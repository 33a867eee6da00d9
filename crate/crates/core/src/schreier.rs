//! Reidemeister–Schreier data for a finite transitive right action of a free
//! group: a prefix-closed transversal, the Schreier generators of the point
//! stabilizer, and rewriting of words into those generators.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::words::{GroupWord, Letter};

#[derive(Clone, Debug)]
pub struct SchreierSystem {
    rank: usize,
    /// `action[g][p]` is the image of point `p` under generator `g`.
    action: Vec<Vec<u32>>,
    inverse_action: Vec<Vec<u32>>,
    transversal: Vec<GroupWord>,
    /// Indexed by `p * rank + g`: Schreier generator number of the edge, or
    /// `None` for tree edges.
    edge_index: Vec<Option<u32>>,
    /// `(point, generator)` of each Schreier generator.
    edges: Vec<(u32, u32)>,
}

impl SchreierSystem {
    /// `parent[p]` gives the tree edge `(q, g)` with `q·g = p`; `None` only at point 0.
    pub fn with_tree(action: Vec<Vec<u32>>, parent: &[Option<(u32, u32)>]) -> Result<Self> {
        let rank = action.len();
        let points = action.first().map_or(1, Vec::len);
        if parent.len() != points || parent[0].is_some() {
            return Err(Error::Invalid("spanning tree must be rooted at point 0".into()));
        }
        let mut inverse_action = vec![vec![0u32; points]; rank];
        for (g, perm) in action.iter().enumerate() {
            if perm.len() != points {
                return Err(Error::DimensionMismatch("ragged action table".into()));
            }
            let mut seen = vec![false; points];
            for (p, &q) in perm.iter().enumerate() {
                let q = q as usize;
                if q >= points || seen[q] {
                    return Err(Error::Invalid(format!("generator {g} does not act as a permutation")));
                }
                seen[q] = true;
                inverse_action[g][q] = p as u32;
            }
        }
        let mut is_tree = vec![false; points * rank];
        for (p, e) in parent.iter().enumerate().skip(1) {
            let (q, g) = e.ok_or_else(|| Error::Invalid(format!("point {p} has no parent")))?;
            if action[g as usize][q as usize] as usize != p {
                return Err(Error::Invalid(format!("tree edge into {p} is not an action edge")));
            }
            is_tree[q as usize * rank + g as usize] = true;
        }
        // Transversal words by walking up the tree; parents must be resolved first.
        let mut transversal: Vec<Option<GroupWord>> = vec![None; points];
        transversal[0] = Some(GroupWord::identity());
        for start in 0..points {
            let mut chain = Vec::new();
            let mut p = start;
            while transversal[p].is_none() {
                chain.push(p);
                let (q, _) = parent[p].expect("checked");
                p = q as usize;
                if chain.len() > points {
                    return Err(Error::Invalid("parent pointers contain a cycle".into()));
                }
            }
            for &c in chain.iter().rev() {
                let (q, g) = parent[c].expect("checked");
                let w = transversal[q as usize]
                    .as_ref()
                    .expect("parent resolved")
                    .mul(&GroupWord::generator(g));
                transversal[c] = Some(w);
            }
        }
        let transversal: Vec<GroupWord> = transversal.into_iter().map(|w| w.expect("resolved")).collect();
        let mut edge_index = vec![None; points * rank];
        let mut edges = Vec::new();
        for p in 0..points {
            for g in 0..rank {
                if !is_tree[p * rank + g] {
                    edge_index[p * rank + g] = Some(edges.len() as u32);
                    edges.push((p as u32, g as u32));
                }
            }
        }
        Ok(Self {
            rank,
            action,
            inverse_action,
            transversal,
            edge_index,
            edges,
        })
    }

    /// Breadth-first spanning tree using positive generators in index order.
    pub fn bfs(action: Vec<Vec<u32>>) -> Result<Self> {
        let points = action.first().map_or(1, Vec::len);
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; points];
        let mut seen = vec![false; points];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            for (g, perm) in action.iter().enumerate() {
                let q = perm[p] as usize;
                if !seen[q] {
                    seen[q] = true;
                    parent[q] = Some((p as u32, g as u32));
                    queue.push_back(q);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("action is not transitive".into()));
        }
        Self::with_tree(action, &parent)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> usize {
        self.transversal.len()
    }

    pub fn transversal(&self) -> &[GroupWord] {
        &self.transversal
    }

    pub fn generator_count(&self) -> usize {
        self.edges.len()
    }

    pub fn act(&self, p: usize, l: Letter) -> usize {
        let table = if l.inverse { &self.inverse_action } else { &self.action };
        table[l.generator as usize][p] as usize
    }

    /// Endpoint of the path of `w` starting at `p`.
    pub fn trace(&self, p: usize, w: &GroupWord) -> usize {
        w.letters().iter().fold(p, |q, &l| self.act(q, l))
    }

    /// Schreier generator `k` as a word: `t_p · x · t_{p·x}⁻¹`.
    pub fn generator_word(&self, k: usize) -> GroupWord {
        let (p, g) = self.edges[k];
        let q = self.action[g as usize][p as usize] as usize;
        self.transversal[p as usize]
            .mul(&GroupWord::generator(g))
            .mul(&self.transversal[q].inverse())
    }

    pub fn generator_words(&self) -> Vec<GroupWord> {
        (0..self.generator_count()).map(|k| self.generator_word(k)).collect()
    }

    /// Exponent vector over the Schreier generators of a word read from
    /// point 0, plus the point it ends at.
    pub fn rewrite(&self, w: &GroupWord) -> (Vec<i64>, usize) {
        let mut v = vec![0i64; self.edges.len()];
        let mut p = 0usize;
        for &l in w.letters() {
            let g = l.generator as usize;
            if l.inverse {
                let q = self.inverse_action[g][p] as usize;
                if let Some(k) = self.edge_index[q * self.rank + g] {
                    v[k as usize] -= 1;
                }
                p = q;
            } else {
                if let Some(k) = self.edge_index[p * self.rank + g] {
                    v[k as usize] += 1;
                }
                p = self.action[g][p] as usize;
            }
        }
        (v, p)
    }

    /// Rewriting as a word in the Schreier generators (signed 1-based indices).
    pub fn rewrite_word(&self, w: &GroupWord) -> (Vec<i32>, usize) {
        let mut out = Vec::new();
        let mut p = 0usize;
        for &l in w.letters() {
            let g = l.generator as usize;
            if l.inverse {
                let q = self.inverse_action[g][p] as usize;
                if let Some(k) = self.edge_index[q * self.rank + g] {
                    out.push(-(k as i32 + 1));
                }
                p = q;
            } else {
                if let Some(k) = self.edge_index[p * self.rank + g] {
                    out.push(k as i32 + 1);
                }
                p = self.action[g][p] as usize;
            }
        }
        (out, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// F₂ acting on Z/3 by x ↦ +1, y ↦ +1.
    fn cyclic_action() -> SchreierSystem {
        let shift: Vec<u32> = (0..3).map(|p| (p + 1) % 3).collect();
        SchreierSystem::bfs(vec![shift.clone(), shift]).unwrap()
    }

    #[test]
    fn generator_count_matches_schreier_formula() {
        let s = cyclic_action();
        // index·(rank − 1) + 1
        assert_eq!(s.generator_count(), 3 * (2 - 1) + 1);
        for w in s.generator_words() {
            assert_eq!(s.trace(0, &w), 0);
        }
    }

    #[test]
    fn rewriting_is_additive() {
        let s = cyclic_action();
        let x = GroupWord::generator(0);
        let y = GroupWord::generator(1);
        let u = x.pow(3);
        let v = x.mul(&y.inverse());
        let (ru, pu) = s.rewrite(&u);
        let (rv, pv) = s.rewrite(&v);
        assert_eq!((pu, pv), (0, 0));
        let (ruv, _) = s.rewrite(&u.mul(&v));
        let sum: Vec<i64> = ru.iter().zip(&rv).map(|(a, b)| a + b).collect();
        assert_eq!(ruv, sum);
        // rewriting a Schreier generator gives its own unit vector
        for k in 0..s.generator_count() {
            let (r, _) = s.rewrite(&s.generator_word(k));
            let mut e = vec![0; s.generator_count()];
            e[k] = 1;
            assert_eq!(r, e);
        }
    }

    #[test]
    fn rejects_bad_actions() {
        assert!(SchreierSystem::bfs(vec![vec![0, 0]]).is_err());
        assert!(SchreierSystem::bfs(vec![vec![0, 1]]).is_err());
    }
}

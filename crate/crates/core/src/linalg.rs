//! Exact linear algebra over ℚ: a dense affine solver and an incremental sparse
//! echelon form with optional bookkeeping of row combinations.

use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use num_traits::{One, Zero};

use crate::poly::Q;

/// Solution set of `A·z = b`: a particular solution (free variables set to 0)
/// and a basis of the null space of `A`.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Vec<Q>,
    pub kernel: Vec<Vec<Q>>,
}

/// Gaussian elimination on a dense system. `None` when inconsistent.
pub fn solve_affine(
    mut rows: Vec<Vec<Q>>,
    mut rhs: Vec<Q>,
    ncols: usize,
) -> Option<AffineSolution> {
    assert_eq!(rows.len(), rhs.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        rhs[r] *= &inv;
        let pivot_row = rows[r].clone();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let fct = rows[i][c].clone();
            for (dst, src) in rows[i][c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                *dst -= &fct * src;
            }
            let d = &fct * &rhs[r];
            rhs[i] -= d;
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut particular = vec![Q::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rhs[i].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Q::zero(); ncols];
            v[fc] = Q::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][fc].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

pub type SparseVec<K> = BTreeMap<K, Q>;

/// `a += c·b`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(a: &mut SparseVec<K>, c: &Q, b: &SparseVec<K>) {
    for (k, v) in b {
        let e = a.entry(k.clone()).or_insert_with(Q::zero);
        *e += c * v;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    vec: SparseVec<K>,
    comb: SparseVec<usize>,
}

/// Row echelon form built one vector at a time. Each stored row has leading
/// (smallest) key equal to its pivot with coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    track: bool,
}

/// Result of reducing a vector: what is left after eliminating all pivot keys,
/// and (when tracked) the labelled combination that was subtracted.
#[derive(Clone, Debug)]
pub struct Reduction<K> {
    pub residual: SparseVec<K>,
    pub combination: SparseVec<usize>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(track: bool) -> Self {
        Echelon {
            rows: BTreeMap::new(),
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    fn reduce_row(&self, mut vec: SparseVec<K>, mut comb: SparseVec<usize>) -> Row<K> {
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => vec.keys().find(|k| self.rows.contains_key(k)).cloned(),
                Some(c) => vec
                    .range((Excluded(c.clone()), Unbounded))
                    .map(|(k, _)| k)
                    .find(|k| self.rows.contains_key(k))
                    .cloned(),
            };
            let Some(k) = next else { break };
            let row = &self.rows[&k];
            let c = -vec[&k].clone();
            axpy(&mut vec, &c, &row.vec);
            if self.track {
                axpy(&mut comb, &c, &row.comb);
            }
            cursor = Some(k);
        }
        Row { vec, comb }
    }

    /// Expresses `v = residual + Σ combination[l]·generator_l`.
    pub fn reduce(&self, v: &SparseVec<K>) -> Reduction<K> {
        let row = self.reduce_row(v.clone(), SparseVec::new());
        Reduction {
            residual: row.vec,
            combination: row.comb.into_iter().map(|(l, c)| (l, -c)).collect(),
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce_row(v.clone(), SparseVec::new()).vec.is_empty()
    }

    /// Adds generator `label`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<K>, label: usize) -> bool {
        let mut comb = SparseVec::new();
        if self.track {
            comb.insert(label, Q::one());
        }
        let mut row = self.reduce_row(v, comb);
        let Some((k, lead)) = row.vec.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Q::one() / lead;
        for c in row.vec.values_mut() {
            *c *= &inv;
        }
        for c in row.comb.values_mut() {
            *c *= &inv;
        }
        self.rows.insert(k, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    #[test]
    fn affine_solution_with_kernel() {
        // z0 + z1 = 1, z1 + z2 = 1
        let rows = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let s = solve_affine(rows.clone(), vec![q(1), q(1)], 3).unwrap();
        assert_eq!(s.kernel.len(), 1);
        for (r, b) in rows.iter().zip([q(1), q(1)]) {
            let dot: Q = r.iter().zip(&s.particular).map(|(a, z)| a * z).sum();
            assert_eq!(dot, b);
            let dk: Q = r.iter().zip(&s.kernel[0]).map(|(a, z)| a * z).sum();
            assert!(dk.is_zero());
        }
        assert!(solve_affine(vec![vec![q(1)], vec![q(2)]], vec![q(1), q(1)], 1).is_none());
    }

    #[test]
    fn echelon_tracks_combinations() {
        let mut e: Echelon<u32> = Echelon::new(true);
        let v0: SparseVec<u32> = [(0, q(1)), (1, q(2))].into_iter().collect();
        let v1: SparseVec<u32> = [(1, q(1)), (2, q(1))].into_iter().collect();
        assert!(e.insert(v0.clone(), 10));
        assert!(e.insert(v1.clone(), 11));
        assert!(!e.insert(v0.clone(), 12));
        let target: SparseVec<u32> = [(0, q(3)), (1, q(7)), (2, qf(1, 1))].into_iter().collect();
        let red = e.reduce(&target);
        assert!(red.residual.is_empty());
        // 3·v0 + v1 = (3, 7, 1)
        assert_eq!(red.combination[&10], q(3));
        assert_eq!(red.combination[&11], q(1));
    }
}

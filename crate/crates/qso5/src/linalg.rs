//! Exact linear algebra over `Q(q)`: sparse row systems, reduced echelon
//! form, kernel bases and span dimensions. Pivot choice is deterministic:
//! columns left to right, candidate rows ranked by lowest numerator degree
//! of the pivot entry, ties by row index.

use std::collections::BTreeMap;

use crate::ratq::RatQ;

/// A sparse vector: nonzero entries keyed by column.
pub type SparseVec = BTreeMap<usize, RatQ>;

/// Build a sparse vector from `(column, coefficient)` pairs, dropping
/// zeros and merging duplicates.
pub fn sparse_vec(entries: impl IntoIterator<Item = (usize, RatQ)>) -> SparseVec {
    let mut v = SparseVec::new();
    for (col, c) in entries {
        if c.is_zero() {
            continue;
        }
        let sum = match v.get(&col) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            v.remove(&col);
        } else {
            v.insert(col, sum);
        }
    }
    v
}

/// A homogeneous linear system `A x = 0` with sparse rows.
#[derive(Clone, Debug, Default)]
pub struct LinSystem {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl LinSystem {
    pub fn new(ncols: usize) -> Self {
        LinSystem {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, row: SparseVec) {
        debug_assert!(row.keys().all(|&c| c < self.ncols));
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Residual `A v` of a candidate vector, for oracle checks.
    pub fn apply(&self, v: &SparseVec) -> Vec<RatQ> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = RatQ::zero();
                for (col, c) in row {
                    if let Some(x) = v.get(col) {
                        acc = &acc + &(c * x);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Reduced echelon data: pivot columns with their fully reduced rows.
struct Echelon {
    pivots: Vec<(usize, SparseVec)>,
}

fn echelonize(rows: &[SparseVec], ncols: usize) -> Echelon {
    let mut work: Vec<SparseVec> = rows.to_vec();
    let mut pivots: Vec<(usize, SparseVec)> = Vec::new();
    for col in 0..ncols {
        // pick the remaining row with the simplest nonzero entry here
        let mut best: Option<(usize, usize)> = None; // (complexity, row index)
        for (ri, row) in work.iter().enumerate() {
            if let Some(c) = row.get(&col) {
                let key = c.numerator().degree().unwrap_or(0);
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, ri));
                }
            }
        }
        let Some((_, ri)) = best else { continue };
        let mut pivot_row = work.swap_remove(ri);
        let inv = pivot_row.get(&col).unwrap().inv();
        for c in pivot_row.values_mut() {
            *c = &*c * &inv;
        }
        // eliminate from remaining rows and previous pivot rows
        for row in work
            .iter_mut()
            .chain(pivots.iter_mut().map(|(_, r)| r))
        {
            if let Some(f) = row.get(&col).cloned() {
                let mut updated = std::mem::take(row);
                for (pc, pv) in &pivot_row {
                    let delta = &f * pv;
                    let entry = match updated.get(pc) {
                        Some(old) => old - &delta,
                        None => -&delta,
                    };
                    if entry.is_zero() {
                        updated.remove(pc);
                    } else {
                        updated.insert(*pc, entry);
                    }
                }
                *row = updated;
            }
        }
        work.retain(|r| !r.is_empty());
        pivots.push((col, pivot_row));
    }
    Echelon { pivots }
}

/// Rank of the row span.
pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    echelonize(rows, ncols).pivots.len()
}

/// Basis of the kernel of the system, one vector per free column, in
/// reduced form (free coordinate set to 1).
pub fn kernel(sys: &LinSystem) -> Vec<SparseVec> {
    let ech = echelonize(&sys.rows, sys.ncols);
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(c, _)| c).collect();
    let mut basis = Vec::new();
    for free in 0..sys.ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = SparseVec::new();
        v.insert(free, RatQ::one());
        for (pc, prow) in &ech.pivots {
            if let Some(c) = prow.get(&free) {
                v.insert(*pc, -c);
            }
        }
        basis.push(v);
    }
    basis
}

/// `dim(span(a) ∩ span(b)) = rank(a) + rank(b) - rank(a ∪ b)`.
pub fn intersection_dim(a: &[SparseVec], b: &[SparseVec], ncols: usize) -> usize {
    let ra = rank(a, ncols);
    let rb = rank(b, ncols);
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    let rab = rank(&all, ncols);
    ra + rb - rab
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_has_trivial_kernel() {
        let mut sys = LinSystem::new(3);
        for i in 0..3 {
            sys.add_row(sparse_vec([(i, RatQ::one())]));
        }
        assert!(kernel(&sys).is_empty());
    }

    #[test]
    fn single_row_kernel() {
        // (1, q) -> basis {(-q, 1)}
        let mut sys = LinSystem::new(2);
        sys.add_row(sparse_vec([(0, RatQ::one()), (1, RatQ::q())]));
        let basis = kernel(&sys);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_eq!(v.get(&0), Some(&-&RatQ::q()));
        assert_eq!(v.get(&1), Some(&RatQ::one()));
    }

    #[test]
    fn random_system_kernel_residuals_vanish() {
        let mut rng = StdRng::seed_from_u64(5);
        let (nrows, ncols) = (12, 18);
        let mut sys = LinSystem::new(ncols);
        for _ in 0..nrows {
            let mut row = SparseVec::new();
            for col in 0..ncols {
                if rng.random_bool(0.3) {
                    let c = &RatQ::from_int(rng.random_range(-3..=3))
                        * &RatQ::q_pow(rng.random_range(0..=2));
                    if !c.is_zero() {
                        row.insert(col, c);
                    }
                }
            }
            sys.add_row(row);
        }
        let basis = kernel(&sys);
        let r = rank(sys.rows(), ncols);
        assert_eq!(basis.len(), ncols - r);
        for v in &basis {
            for residual in sys.apply(v) {
                assert!(residual.is_zero(), "kernel vector fails a row");
            }
        }
    }

    #[test]
    fn intersection_dims() {
        let e = |i: usize| sparse_vec([(i, RatQ::one())]);
        let a = vec![e(0), e(1)];
        let b = vec![e(1), e(2)];
        assert_eq!(intersection_dim(&a, &b, 3), 1);
        assert_eq!(intersection_dim(&a, &a, 3), 2);
        assert_eq!(intersection_dim(&a, &[e(2)], 3), 0);
    }
}

//! Rank of large, very sparse matrices over F2.
//!
//! Singleton rows and columns are peeled off first; neither kind of pivot
//! causes fill-in. What is left is reduced column by column with sparse
//! sorted index lists, switching to dense rows once it is small enough.

use alloc::vec;
use alloc::vec::Vec;

use crate::f2::{EchelonBasis, F2Vector};

const NONE: u32 = u32::MAX;
// Switch the core to dense rows below this many bits.
const DENSE_BITS: usize = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SparseRank {
    pub rank: usize,
    /// Rows chosen as pivots; the column space projects isomorphically onto them.
    pub pivot_rows: Vec<u32>,
}

/// `columns[c]` lists the rows holding a 1 in column `c`, each at most once.
pub(crate) fn sparse_rank(rows: usize, columns: &[Vec<u32>]) -> SparseRank {
    let ncols = columns.len();
    let mut row_entries: Vec<Vec<u32>> = vec![Vec::new(); rows];
    for (c, col) in columns.iter().enumerate() {
        for &r in col {
            row_entries[r as usize].push(c as u32);
        }
    }
    let mut col_count: Vec<u32> = columns.iter().map(|c| c.len() as u32).collect();
    let mut row_count: Vec<u32> = row_entries.iter().map(|r| r.len() as u32).collect();
    let mut col_alive = vec![true; ncols];
    let mut row_alive = vec![true; rows];
    let mut pivot_rows = Vec::new();

    // Entries are tagged: columns as 2c, rows as 2r + 1.
    let mut queue: Vec<u32> = Vec::new();
    for c in 0..ncols {
        if col_count[c] == 1 {
            queue.push(2 * c as u32);
        }
    }
    for r in 0..rows {
        if row_count[r] == 1 {
            queue.push(2 * r as u32 + 1);
        }
    }
    while let Some(tag) = queue.pop() {
        let idx = (tag >> 1) as usize;
        if tag & 1 == 0 {
            if !col_alive[idx] || col_count[idx] != 1 {
                continue;
            }
            let r = columns[idx]
                .iter()
                .copied()
                .find(|&r| row_alive[r as usize])
                .expect("live entry") as usize;
            col_alive[idx] = false;
            row_alive[r] = false;
            pivot_rows.push(r as u32);
            for &x in &row_entries[r] {
                let x = x as usize;
                if col_alive[x] {
                    col_count[x] -= 1;
                    if col_count[x] == 1 {
                        queue.push(2 * x as u32);
                    }
                }
            }
        } else {
            if !row_alive[idx] || row_count[idx] != 1 {
                continue;
            }
            let c = row_entries[idx]
                .iter()
                .copied()
                .find(|&c| col_alive[c as usize])
                .expect("live entry") as usize;
            row_alive[idx] = false;
            col_alive[c] = false;
            pivot_rows.push(idx as u32);
            for &y in &columns[c] {
                let y = y as usize;
                if row_alive[y] {
                    row_count[y] -= 1;
                    if row_count[y] == 1 {
                        queue.push(2 * y as u32 + 1);
                    }
                }
            }
        }
    }

    // Compress the core.
    let mut row_map = vec![NONE; rows];
    let mut row_back = Vec::new();
    for r in 0..rows {
        if row_alive[r] && row_count[r] > 0 {
            row_map[r] = row_back.len() as u32;
            row_back.push(r as u32);
        }
    }
    let mut core: Vec<Vec<u32>> = Vec::new();
    for c in 0..ncols {
        if col_alive[c] && col_count[c] > 0 {
            let mut col: Vec<u32> = columns[c]
                .iter()
                .filter_map(|&r| {
                    let m = row_map[r as usize];
                    (m != NONE).then_some(m)
                })
                .collect();
            col.sort_unstable();
            core.push(col);
        }
    }
    core.sort_by_key(Vec::len);
    let core_pivots = reduce_core(row_back.len(), core);
    pivot_rows.extend(core_pivots.into_iter().map(|r| row_back[r as usize]));
    SparseRank {
        rank: pivot_rows.len(),
        pivot_rows,
    }
}

// Pivot rows of the core, by sparse column reduction with a dense fallback.
fn reduce_core(rows: usize, core: Vec<Vec<u32>>) -> Vec<u32> {
    if rows == 0 || core.is_empty() {
        return Vec::new();
    }
    if rows.saturating_mul(rows.min(core.len())) <= DENSE_BITS && rows <= 4096 {
        return dense_pivots(rows, &core);
    }
    let mut pivot_of: Vec<u32> = vec![NONE; rows];
    let mut stored: Vec<Vec<u32>> = Vec::new();
    let mut out = Vec::new();
    let mut scratch = Vec::new();
    for mut col in core {
        while let Some(&low) = col.last() {
            let p = pivot_of[low as usize];
            if p == NONE {
                break;
            }
            xor_sorted(&col, &stored[p as usize], &mut scratch);
            core::mem::swap(&mut col, &mut scratch);
        }
        if let Some(&low) = col.last() {
            pivot_of[low as usize] = stored.len() as u32;
            stored.push(col);
            out.push(low);
        }
    }
    out
}

fn dense_pivots(rows: usize, core: &[Vec<u32>]) -> Vec<u32> {
    let mut ech = EchelonBasis::new(rows);
    for col in core {
        if ech.dim() == rows {
            break;
        }
        ech.insert(F2Vector::from_indices(rows, col.iter().map(|&r| r as usize)));
    }
    ech.pivots().iter().map(|&p| p as u32).collect()
}

fn xor_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::F2Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn to_dense(rows: usize, cols: &[Vec<u32>]) -> F2Matrix {
        let columns: Vec<F2Vector> = cols
            .iter()
            .map(|c| F2Vector::from_indices(rows, c.iter().map(|&r| r as usize)))
            .collect();
        F2Matrix::from_columns(rows, &columns).unwrap()
    }

    #[test]
    fn agrees_with_dense_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let rows = rng.gen_range(0..40);
            let ncols = rng.gen_range(0..50);
            let density = rng.gen_range(0.02..0.3);
            let cols: Vec<Vec<u32>> = (0..ncols)
                .map(|_| (0..rows as u32).filter(|_| rng.gen_bool(density)).collect())
                .collect();
            let dense = to_dense(rows, &cols);
            let got = sparse_rank(rows, &cols);
            assert_eq!(got.rank, dense.rank());
            // The column space projects isomorphically onto the pivot rows.
            let picked = dense.transpose().select_columns(
                &got.pivot_rows.iter().map(|&r| r as usize).collect::<Vec<_>>(),
            );
            assert_eq!(picked.rank(), got.rank);
        }
    }

    #[test]
    fn sparse_core_path() {
        // A long cycle has no singletons and exercises the sparse reduction.
        let n = 5000u32;
        let cols: Vec<Vec<u32>> = (0..n).map(|i| {
            let mut c = vec![i, (i + 1) % n];
            c.sort_unstable();
            c
        }).collect();
        let got = sparse_rank(n as usize, &cols);
        assert_eq!(got.rank, n as usize - 1);
    }
}

//! Exact Gaussian elimination over a table field.

use super::field::{Fe, Field};

/// Reduced row-echelon form in place; returns the pivot columns.
pub fn rref(f: &Field, rows: &mut Vec<Vec<Fe>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(factor, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    // rows beyond the rank are zero after elimination
    rows.truncate(pivots.len());
    pivots
}

pub fn rank(f: &Field, rows: &[Vec<Fe>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Rank of a list of fixed-size vectors.
pub fn rank_of<const N: usize>(f: &Field, rows: &[[Fe; N]]) -> usize {
    let m: Vec<Vec<Fe>> = rows.iter().map(|r| r.to_vec()).collect();
    rank(f, &m)
}

/// Basis of the right kernel `{x : M x = 0}`.
pub fn kernel(f: &Field, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Fe::ZERO; ncols];
            v[fc] = Fe::ONE;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// Express `target` as a combination of `basis` vectors, if possible.
pub fn solve_combination(f: &Field, basis: &[Vec<Fe>], target: &[Fe]) -> Option<Vec<Fe>> {
    // columns are the basis vectors; augmented with target
    let n = target.len();
    let k = basis.len();
    let mut rows: Vec<Vec<Fe>> = (0..n)
        .map(|i| {
            let mut row: Vec<Fe> = basis.iter().map(|b| b[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let pivots = rref(f, &mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Fe::ZERO; k];
    for (row, &pc) in rows.iter().zip(&pivots) {
        x[pc] = row[k];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    fn m(f: &Field, rows: &[&[i64]]) -> Vec<Vec<Fe>> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect()
    }

    #[test]
    fn identity_has_full_rank() {
        let f = field(7, 1).unwrap();
        let id = m(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(rank(&f, &id), 4);
        assert!(kernel(&f, &id, 4).is_empty());
    }

    #[test]
    fn coplanar_points_rank_three() {
        let f = field(7, 1).unwrap();
        // four points on the plane x3 = x0 + x1
        let pts = m(&f, &[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 0], &[1, 1, 5, 2]]);
        assert!(rank(&f, &pts) <= 3);
        let k = kernel(&f, &pts, 4);
        assert_eq!(k.len(), 1);
        for row in &pts {
            let dot = f.sum(row.iter().zip(&k[0]).map(|(&a, &b)| f.mul(a, b)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn combination_solver() {
        let f = field(5, 1).unwrap();
        let basis = m(&f, &[&[1, 0, 2], &[0, 1, 3]]);
        let t: Vec<Fe> = [2, 3, 2 * 2 + 3 * 3].iter().map(|&x| f.from_int(x)).collect();
        assert_eq!(solve_combination(&f, &basis, &t), Some(vec![Fe(2), Fe(3)]));
        assert_eq!(solve_combination(&f, &basis, &[Fe(0), Fe(0), Fe(1)]), None);
    }
}

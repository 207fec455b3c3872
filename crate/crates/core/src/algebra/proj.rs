//! Points and lines of projective space over a table field.

use super::field::{Embedding, Fe, Field};
use super::linalg;

/// A point of `P^{N-1}`, scaled so the first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint<const N: usize>(pub [Fe; N]);

impl<const N: usize> ProjPoint<N> {
    /// Canonical representative; `None` for the zero vector.
    pub fn new(f: &Field, mut v: [Fe; N]) -> Option<Self> {
        let lead = *v.iter().find(|c| !c.is_zero())?;
        if lead != Fe::ONE {
            let inv = f.inv(lead).unwrap();
            for c in v.iter_mut() {
                *c = f.mul(*c, inv);
            }
        }
        Some(ProjPoint(v))
    }

    pub fn coords(&self) -> &[Fe; N] {
        &self.0
    }

    pub fn map(&self, e: &Embedding) -> Self {
        // embeddings fix 1, so the image stays canonical
        ProjPoint(self.0.map(|c| e.map(c)))
    }

    /// Coordinate-wise preimage under `e`, if the point is defined over its source.
    pub fn descend(&self, e: &Embedding) -> Option<Self> {
        let mut out = [Fe::ZERO; N];
        for (o, &c) in out.iter_mut().zip(&self.0) {
            *o = e.preimage(c)?;
        }
        Some(ProjPoint(out))
    }

    /// Coordinate-wise `x -> x^{p^k}`.
    pub fn frobenius(&self, f: &Field, k: u32) -> Self {
        let e = (f.characteristic() as u64).pow(k);
        ProjPoint(self.0.map(|c| f.pow(c, e)))
    }
}

/// Every point of `P^{N-1}(F)`, in a fixed order.
pub fn all_points<const N: usize>(f: &Field) -> impl Iterator<Item = ProjPoint<N>> + '_ {
    let q = f.order() as u64;
    (0..N).rev().flat_map(move |lead| {
        // first nonzero coordinate at index N-1-lead, then free tail
        let pos = N - 1 - lead;
        let tail = N - 1 - pos;
        (0..q.pow(tail as u32)).map(move |mut idx| {
            let mut v = [Fe::ZERO; N];
            v[pos] = Fe::ONE;
            for c in v.iter_mut().skip(pos + 1) {
                *c = Fe((idx % q) as u32);
                idx /= q;
            }
            ProjPoint(v)
        })
    })
}

/// Number of points of `P^{N-1}(F_q)`.
pub fn point_count(q: u64, n: usize) -> u64 {
    (0..n as u32).map(|i| q.pow(i)).sum()
}

/// A line of `P^{N-1}`, stored as the reduced echelon basis of its 2-plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line<const N: usize> {
    rows: [[Fe; N]; 2],
}

impl<const N: usize> Line<N> {
    /// The line spanned by two vectors; `None` if they are dependent.
    pub fn through(f: &Field, a: &[Fe; N], b: &[Fe; N]) -> Option<Self> {
        let mut m = vec![a.to_vec(), b.to_vec()];
        if linalg::rref(f, &mut m).len() != 2 {
            return None;
        }
        let mut rows = [[Fe::ZERO; N]; 2];
        rows[0].copy_from_slice(&m[0]);
        rows[1].copy_from_slice(&m[1]);
        Some(Line { rows })
    }

    pub fn basis(&self) -> &[[Fe; N]; 2] {
        &self.rows
    }

    pub fn contains(&self, f: &Field, p: &[Fe; N]) -> bool {
        linalg::rank_of(f, &[self.rows[0], self.rows[1], *p]) == 2
    }

    /// Whether two lines share a point (including equal lines).
    pub fn meets(&self, f: &Field, other: &Line<N>) -> bool {
        linalg::rank_of(f, &[self.rows[0], self.rows[1], other.rows[0], other.rows[1]]) <= 3
    }

    /// The `q + 1` points of the line over `f`.
    pub fn points<'a>(&'a self, f: &'a Field) -> impl Iterator<Item = ProjPoint<N>> + 'a {
        let [a, b] = self.rows;
        std::iter::once(ProjPoint::new(f, b).unwrap()).chain(f.elements().map(move |t| {
            let mut v = a;
            for (x, &y) in v.iter_mut().zip(&b) {
                *x = f.add(*x, f.mul(t, y));
            }
            ProjPoint::new(f, v).unwrap()
        }))
    }

    pub fn map(&self, f_dst: &Field, e: &Embedding) -> Self {
        Line::through(f_dst, &self.rows[0].map(|c| e.map(c)), &self.rows[1].map(|c| e.map(c)))
            .expect("embedding preserves independence")
    }

    /// The same line over the source of `e`, if it is defined there. The
    /// reduced echelon basis of a Frobenius-stable line has subfield entries.
    pub fn descend(&self, e: &Embedding) -> Option<Self> {
        let mut rows = [[Fe::ZERO; N]; 2];
        for (r, src) in rows.iter_mut().zip(&self.rows) {
            for (x, &y) in r.iter_mut().zip(src) {
                *x = e.preimage(y)?;
            }
        }
        Some(Line { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;
    use std::collections::HashSet;

    #[test]
    fn enumerates_projective_space() {
        for &(p, n) in &[(2, 1), (3, 1), (2, 2)] {
            let f = field(p, n).unwrap();
            let pts: HashSet<ProjPoint<4>> = all_points::<4>(&f).collect();
            assert_eq!(pts.len() as u64, point_count(f.order() as u64, 4));
            for q in &pts {
                assert_eq!(ProjPoint::new(&f, q.0), Some(*q));
            }
        }
    }

    #[test]
    fn line_canonical_form_is_basis_independent() {
        let f = field(5, 1).unwrap();
        let a = [1, 2, 0, 3, 4].map(|x| f.from_int(x));
        let b = [0, 1, 1, 1, 0].map(|x| f.from_int(x));
        let c: [Fe; 5] = std::array::from_fn(|i| f.add(f.mul(Fe(2), a[i]), f.mul(Fe(3), b[i])));
        let l1 = Line::through(&f, &a, &b).unwrap();
        let l2 = Line::through(&f, &c, &b).unwrap();
        assert_eq!(l1, l2);
        assert!(l1.contains(&f, &c));
        assert_eq!(l1.points(&f).collect::<HashSet<_>>().len(), 6);
        assert!(Line::through(&f, &a, &a).is_none());
    }

    #[test]
    fn meeting_lines() {
        let f = field(3, 1).unwrap();
        let e = |i: usize| {
            let mut v = [Fe::ZERO; 5];
            v[i] = Fe::ONE;
            v
        };
        let l01 = Line::through(&f, &e(0), &e(1)).unwrap();
        let l12 = Line::through(&f, &e(1), &e(2)).unwrap();
        let l34 = Line::through(&f, &e(3), &e(4)).unwrap();
        assert!(l01.meets(&f, &l12));
        assert!(!l01.meets(&f, &l34));
        assert!(l01.meets(&f, &l01));
    }
}

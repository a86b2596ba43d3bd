use num_traits::{One, Zero};

use super::Rational;

/// Row space kept in reduced row echelon form, grown one vector at a time.
/// Two spans of the same ambient dimension are equal iff their `rows()` are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Span {
    dim: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<Rational>>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row).skip(p) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns `false` (and leaves the span unchanged) if `v` was
    /// already in it.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut().skip(p) {
            *x *= &inv;
        }
        debug_assert!(r[p].is_one());
        // Clear column p from the existing rows to stay fully reduced.
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r).skip(p) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    pub fn with(&self, v: &[Rational]) -> Self {
        let mut s = self.clone();
        s.insert(v);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat_vec;

    #[test]
    fn canonical_regardless_of_insertion_order() {
        let a = rat_vec(&[1, 2, 0, 3]);
        let b = rat_vec(&[0, 1, 1, 1]);
        let c = rat_vec(&[2, 5, 1, 7]);
        let mut s1 = Span::new(4);
        s1.insert(&a);
        s1.insert(&b);
        let mut s2 = Span::new(4);
        s2.insert(&c);
        s2.insert(&b);
        assert_eq!(s1, s2);
        assert!(!s2.insert(&a));
        assert_eq!(s2.rank(), 2);
        assert!(s1.contains(&c));
    }
}

//! Strict feasibility of homogeneous sign systems `G x > 0`.
//!
//! The question is answered with a bounded LP
//!
//! ```text
//! maximize t  s.t.  G x⁺ - G x⁻ >= t·1,  t <= 1,  0 <= x⁺, x⁻ <= 1,  t >= 0
//! ```
//!
//! which is feasible at the origin, so no phase-1 is needed. `G x > 0` has a
//! solution iff the optimum is positive; the search stops at the first basis
//! with `t > 0`. Pivots use Bland's rule and integer (Edmonds) pivoting, so
//! tableau entries stay integral and every division is exact. Arithmetic runs
//! in `i128` and restarts in `BigInt` if an intermediate overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rational::primitive;

trait PivotNum: Clone {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn small(v: i64) -> Self;
    fn to_big(&self) -> BigInt;
    fn sign(&self) -> i8;
    /// `(a*b - c*d) / det`, exact.
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, det: &Self) -> Option<Self>;
    /// Compares `a*b` with `c*d`.
    fn cmp_products(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Ordering>;
}

impl PivotNum for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        // Leave headroom so products of two entries cannot hide overflow.
        v.to_i128().filter(|x| x.unsigned_abs() < (1u128 << 62))
    }

    fn small(v: i64) -> Self {
        v as i128
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn sign(&self) -> i8 {
        self.signum() as i8
    }

    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, det: &Self) -> Option<Self> {
        let lhs = a.checked_mul(*b)?;
        let rhs = c.checked_mul(*d)?;
        let num = lhs.checked_sub(rhs)?;
        debug_assert_eq!(num % det, 0, "integer pivot division must be exact");
        num.checked_div(*det)
    }

    fn cmp_products(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Ordering> {
        Some(a.checked_mul(*b)?.cmp(&c.checked_mul(*d)?))
    }
}

impl PivotNum for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn small(v: i64) -> Self {
        BigInt::from(v)
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, det: &Self) -> Option<Self> {
        Some((a * b - c * d) / det)
    }

    fn cmp_products(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Ordering> {
        Some((a * b).cmp(&(c * d)))
    }
}

/// Returns a primitive integer `x` with `g · x > 0` for every row `g`, or
/// `None` if no such point exists. The answer is a pure function of the rows.
pub fn strictly_feasible(rows: &[Vec<BigInt>], dim: usize) -> Option<Vec<BigInt>> {
    debug_assert!(rows.iter().all(|r| r.len() == dim));
    if rows.is_empty() {
        return Some(vec![BigInt::zero(); dim]);
    }
    if dim == 0 {
        return None;
    }
    match solve::<i128>(rows, dim) {
        Ok(found) => found,
        Err(Overflow) => solve::<BigInt>(rows, dim).expect("BigInt arithmetic cannot overflow"),
    }
}

#[derive(Debug)]
struct Overflow;

fn solve<N: PivotNum>(rows: &[Vec<BigInt>], dim: usize) -> Result<Option<Vec<BigInt>>, Overflow> {
    let k = rows.len();
    let n_struct = 2 * dim + 1;
    let t_col = 2 * dim;
    let n_rows = k + 1 + 2 * dim;
    let n_cols = n_struct + n_rows;
    let rhs = n_cols;
    let zero = N::small(0);
    let one = N::small(1);

    // Constraint rows followed by the objective row.
    let mut tab: Vec<Vec<N>> = vec![vec![zero.clone(); n_cols + 1]; n_rows + 1];
    for (i, g) in rows.iter().enumerate() {
        for (j, v) in g.iter().enumerate() {
            let v = N::from_big(v).ok_or(Overflow)?;
            let neg = N::from_big(&-v.to_big()).ok_or(Overflow)?;
            tab[i][j] = neg;
            tab[i][dim + j] = v;
        }
        tab[i][t_col] = one.clone();
    }
    tab[k][t_col] = one.clone();
    tab[k][rhs] = one.clone();
    for j in 0..2 * dim {
        tab[k + 1 + j][j] = one.clone();
        tab[k + 1 + j][rhs] = one.clone();
    }
    for (i, row) in tab.iter_mut().enumerate().take(n_rows) {
        row[n_struct + i] = one.clone();
    }
    tab[n_rows][t_col] = N::small(-1);

    let mut basis: Vec<usize> = (0..n_rows).map(|i| n_struct + i).collect();
    let mut det = one.clone();

    loop {
        if let Some(r) = basis.iter().position(|&b| b == t_col) {
            if tab[r][rhs].sign() > 0 {
                return Ok(Some(extract(&tab, &basis, dim, rhs)));
            }
        }
        let Some(enter) = (0..n_cols).find(|&j| tab[n_rows][j].sign() < 0) else {
            return Ok(None);
        };
        let mut leave: Option<usize> = None;
        for i in 0..n_rows {
            if tab[i][enter].sign() <= 0 {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(best) => {
                    // rhs_i / a_i  vs  rhs_best / a_best
                    let ord = N::cmp_products(
                        &tab[i][rhs],
                        &tab[best][enter],
                        &tab[best][rhs],
                        &tab[i][enter],
                    )
                    .ok_or(Overflow)?;
                    match ord {
                        Ordering::Less => Some(i),
                        Ordering::Equal if basis[i] < basis[best] => Some(i),
                        _ => Some(best),
                    }
                }
            };
        }
        let r = leave.expect("objective is bounded by t <= 1");
        let p = tab[r][enter].clone();
        for i in 0..=n_rows {
            if i == r {
                continue;
            }
            let factor = tab[i][enter].clone();
            if factor.sign() == 0 {
                // (a*p - 0) / det
                for j in 0..=n_cols {
                    if tab[i][j].sign() != 0 {
                        tab[i][j] = N::cross(&tab[i][j], &p, &zero, &zero, &det).ok_or(Overflow)?;
                    }
                }
                continue;
            }
            for j in 0..=n_cols {
                tab[i][j] = N::cross(&tab[i][j], &p, &factor, &tab[r][j], &det).ok_or(Overflow)?;
            }
        }
        det = p;
        basis[r] = enter;
    }
}

fn extract<N: PivotNum>(tab: &[Vec<N>], basis: &[usize], dim: usize, rhs: usize) -> Vec<BigInt> {
    let mut x = vec![BigInt::zero(); dim];
    for (row, &var) in basis.iter().enumerate() {
        if var < dim {
            x[var] += tab[row][rhs].to_big();
        } else if var < 2 * dim {
            x[var - dim] -= tab[row][rhs].to_big();
        }
    }
    let x = primitive(x);
    debug_assert!(x.iter().any(|v| !v.is_zero()) || dim == 0);
    x
}

/// `true` if `g · x > 0` for every row.
pub fn satisfies_strictly(rows: &[Vec<BigInt>], x: &[BigInt]) -> bool {
    rows.iter().all(|g| {
        let s: BigInt = g.iter().zip(x).map(|(a, b)| a * b).sum();
        s.is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(data: &[&[i64]]) -> Vec<Vec<BigInt>> {
        data.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn single_halfspace() {
        let g = rows(&[&[1]]);
        let x = strictly_feasible(&g, 1).unwrap();
        assert_eq!(x, vec![BigInt::from(1)]);
    }

    #[test]
    fn opposite_halfspaces_are_infeasible() {
        assert!(strictly_feasible(&rows(&[&[1], &[-1]]), 1).is_none());
    }

    #[test]
    fn wedge_in_the_plane() {
        let g = rows(&[&[1, 1], &[1, -1], &[-1, 3]]);
        let x = strictly_feasible(&g, 2).unwrap();
        assert!(satisfies_strictly(&g, &x));
    }

    #[test]
    fn three_directions_surrounding_origin() {
        // x > 0, y > 0, -x - y > 0 is empty.
        assert!(strictly_feasible(&rows(&[&[1, 0], &[0, 1], &[-1, -1]]), 2).is_none());
    }

    #[test]
    fn bigint_path_agrees() {
        let g = rows(&[&[3, -2, 5], &[-1, 4, 1], &[2, 2, -7], &[0, 1, 1]]);
        let small = solve::<i128>(&g, 3).ok().unwrap();
        let big = solve::<BigInt>(&g, 3).ok().unwrap();
        assert_eq!(small, big);
    }

    #[test]
    fn huge_entries_fall_back_to_bigint() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 40);
        let g = vec![
            vec![big.clone(), BigInt::from(1)],
            vec![-big.clone(), BigInt::from(3)],
        ];
        let x = strictly_feasible(&g, 2).unwrap();
        assert!(satisfies_strictly(&g, &x));
    }
}

//! Exact rational arithmetic and linear algebra.

mod lp;
mod matrix;
pub mod rational;
pub mod span;

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use lp::{satisfies_strictly, strictly_feasible};
pub use matrix::RationalMatrix;
pub use rational::{
    dot, format_rational, integer_row, parse_rational, parse_rational_list, rat, rat_frac, rat_vec,
    Rational,
};

use crate::error::{Error, Result};

/// A strict sign. `Plus` sorts before `Minus`, matching the text form `+ < -`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(value: &Rational) -> Option<Sign> {
        if value.is_zero() {
            None
        } else if value.is_positive() {
            Some(Sign::Plus)
        } else {
            Some(Sign::Minus)
        }
    }

    pub fn of_int(value: &BigInt) -> Option<Sign> {
        if value.is_zero() {
            None
        } else if value.is_positive() {
            Some(Sign::Plus)
        } else {
            Some(Sign::Minus)
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }

    fn apply(self, v: &BigInt) -> BigInt {
        match self {
            Sign::Plus => v.clone(),
            Sign::Minus => -v,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Finds `x` with `sign(row_i · x) = signs_i` for every row, or `None` when
/// the open cone is empty. Deterministic for a fixed input.
pub fn find_interior_point(a: &RationalMatrix, signs: &[Sign]) -> Result<Option<Vec<Rational>>> {
    if signs.len() != a.rows() {
        return Err(Error::LengthMismatch {
            expected: a.rows(),
            got: signs.len(),
        });
    }
    let rows = signed_integer_rows(a, signs);
    Ok(strictly_feasible(&rows, a.cols())
        .map(|x| x.into_iter().map(Rational::from_integer).collect()))
}

/// Integer rows `signs_i · row_i`, each scaled by a positive factor.
pub fn signed_integer_rows(a: &RationalMatrix, signs: &[Sign]) -> Vec<Vec<BigInt>> {
    (0..a.rows())
        .map(|i| {
            integer_row(a.row(i))
                .iter()
                .map(|v| signs[i].apply(v))
                .collect()
        })
        .collect()
}

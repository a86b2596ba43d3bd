//! Normal systems (coefficient matrices whose every ≤ m rows are independent)
//! and the affine arrangements they carry.

use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::serde_rational;
use crate::linalg::{Rational, RationalMatrix};
use crate::subsets::MAX_N;

/// Attempts made by [`random_normal_system`] before giving up.
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

/// `n` normal vectors in `m`-space, stored exactly as given. Row `i` is the
/// normal of hyperplane `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalSystem {
    m: usize,
    coeffs: RationalMatrix,
}

impl NormalSystem {
    /// Checks shape and that every set of at most `m` rows is independent.
    /// The first dependent subset (by size, then lexicographically) is named
    /// in the error.
    pub fn validate(coeffs: RationalMatrix, m: usize) -> Result<Self> {
        let n = coeffs.rows();
        if m <= 1 || n <= m || n > MAX_N || coeffs.cols() != m {
            return Err(Error::BadShape { n, m });
        }
        for size in 1..=m {
            for subset in (0..n).combinations(size) {
                if coeffs.select_rows(&subset).rank() < size {
                    return Err(Error::DependentRows {
                        subset: subset.iter().map(|i| i + 1).collect(),
                    });
                }
            }
        }
        Ok(NormalSystem { m, coeffs })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let m = rows.first().map_or(0, |r| r.len());
        Self::validate(RationalMatrix::from_i64_rows(rows), m)
    }

    pub fn n(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &RationalMatrix {
        &self.coeffs
    }

    pub fn normal(&self, i: usize) -> &[Rational] {
        self.coeffs.row(i)
    }

    /// The system with hyperplane `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut order = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            order[p] = i;
        }
        NormalSystem {
            m: self.m,
            coeffs: self.coeffs.select_rows(&order),
        }
    }

    /// For planar systems: hyperplane indices sorted by the angle their lines
    /// make with the x-axis, in `[0, π)`. `None` when `m != 2`.
    pub fn angle_order(&self) -> Option<Vec<usize>> {
        if self.m != 2 {
            return None;
        }
        // Line a·x = b has direction (-a2, a1); fold into the upper half plane.
        let dirs: Vec<(Rational, Rational)> = (0..self.n())
            .map(|i| {
                let a = self.normal(i);
                let (dx, dy) = (-a[1].clone(), a[0].clone());
                if dy.is_negative() || (dy.is_zero() && dx.is_negative()) {
                    (-dx, -dy)
                } else {
                    (dx, dy)
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&i, &j| {
            let (ux, uy) = &dirs[i];
            let (vx, vy) = &dirs[j];
            let cross = ux * vy - uy * vx;
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        });
        Some(order)
    }

    /// The planar system relabelled so indices increase with angle.
    pub fn angle_sorted(&self) -> Option<Self> {
        let order = self.angle_order()?;
        Some(NormalSystem {
            m: self.m,
            coeffs: self.coeffs.select_rows(&order),
        })
    }

    pub fn to_file(&self) -> NormalSystemFile {
        NormalSystemFile {
            m: self.m,
            rows: self.coeffs.row_vecs(),
        }
    }
}

/// JSON form: `{"m": int, "rows": [["p/q", ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalSystemFile {
    pub m: usize,
    #[serde(with = "serde_rational::rows")]
    pub rows: Vec<Vec<Rational>>,
}

impl TryFrom<NormalSystemFile> for NormalSystem {
    type Error = Error;

    fn try_from(file: NormalSystemFile) -> Result<Self> {
        let coeffs = RationalMatrix::from_rows(file.m, file.rows)
            .map_err(|_| Error::BadShape { n: 0, m: file.m })?;
        NormalSystem::validate(coeffs, file.m)
    }
}

impl Serialize for NormalSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormalSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = NormalSystemFile::deserialize(d)?;
        NormalSystem::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// Result of [`random_normal_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledSystem {
    pub system: NormalSystem,
    /// Candidate matrices rejected before `system` was accepted.
    pub rejections: usize,
}

/// Integer normal system with entries uniform in `[-bound, bound]`, drawn
/// from a ChaCha8 stream seeded with `seed`; candidates are resampled until
/// they validate.
pub fn random_normal_system(n: usize, m: usize, seed: u64, bound: u32) -> Result<SampledSystem> {
    random_normal_system_with_limit(n, m, seed, bound, DEFAULT_MAX_ATTEMPTS)
}

pub fn random_normal_system_with_limit(
    n: usize,
    m: usize,
    seed: u64,
    bound: u32,
    max_attempts: usize,
) -> Result<SampledSystem> {
    if m <= 1 || n <= m || bound == 0 {
        return Err(Error::BadShape { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = i64::from(bound);
    for attempt in 0..max_attempts {
        let data: Vec<Rational> = (0..n * m)
            .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
            .collect();
        let coeffs = RationalMatrix::new(n, m, data)?;
        match NormalSystem::validate(coeffs, m) {
            Ok(system) => {
                return Ok(SampledSystem {
                    system,
                    rejections: attempt,
                })
            }
            Err(Error::DependentRows { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GivesUp {
        attempts: max_attempts,
    })
}

/// Affine arrangement `H_i = {x : a_i · x = b_i}` over a normal system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    system: NormalSystem,
    b: Vec<Rational>,
}

impl Arrangement {
    pub fn new(system: NormalSystem, b: Vec<Rational>) -> Result<Self> {
        if b.len() != system.n() {
            return Err(Error::LengthMismatch {
                expected: system.n(),
                got: b.len(),
            });
        }
        Ok(Arrangement { system, b })
    }

    pub fn system(&self) -> &NormalSystem {
        &self.system
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn m(&self) -> usize {
        self.system.m()
    }

    pub fn is_central(&self) -> bool {
        self.b.iter().all(|v| v.is_zero())
    }

    pub fn negated(&self) -> Self {
        Arrangement {
            system: self.system.clone(),
            b: self.b.iter().map(|v| -v).collect(),
        }
    }

    pub fn to_file(&self) -> ArrangementFile {
        ArrangementFile {
            m: self.m(),
            rows: self.system.coeffs.row_vecs(),
            b: self.b.clone(),
        }
    }
}

pub fn arrangement_from_b(ns: &NormalSystem, b: Vec<Rational>) -> Result<Arrangement> {
    Arrangement::new(ns.clone(), b)
}

/// JSON form: a normal system file plus `"b": ["p/q", ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub m: usize,
    #[serde(with = "serde_rational::rows")]
    pub rows: Vec<Vec<Rational>>,
    #[serde(with = "serde_rational::vec")]
    pub b: Vec<Rational>,
}

impl TryFrom<ArrangementFile> for Arrangement {
    type Error = Error;

    fn try_from(file: ArrangementFile) -> Result<Self> {
        let system = NormalSystem::try_from(NormalSystemFile {
            m: file.m,
            rows: file.rows,
        })?;
        Arrangement::new(system, file.b)
    }
}

/// Six lines with three perpendicular pairs (L1⊥L4, L2⊥L5, L3⊥L6) whose
/// slope coincidence `m2 = 1/m3` adds one more forced concurrency.
pub fn perpendicular_pairs_six_lines() -> NormalSystem {
    NormalSystem::from_i64_rows(&[&[1, 0], &[2, 3], &[3, 2], &[0, 1], &[3, -2], &[2, -3]])
        .expect("valid normal system")
}

/// Constant terms of the six-line arrangement over
/// [`perpendicular_pairs_six_lines`].
pub fn perpendicular_pairs_six_lines_b() -> Vec<Rational> {
    crate::linalg::rat_vec(&[0, -2, 3, 0, 5, 5])
}

/// Six lines with slopes 0, -1, -2, ∞, 1, 1/2: again three perpendicular
/// pairs.
pub fn alternate_slopes_six_lines() -> NormalSystem {
    NormalSystem::from_i64_rows(&[&[1, 0], &[1, 1], &[2, 1], &[0, 1], &[1, -1], &[1, -2]])
        .expect("valid normal system")
}

/// Falk's six planes in 3-space.
pub fn falk_six_planes() -> NormalSystem {
    NormalSystem::from_i64_rows(&[
        &[1, 0, 0],
        &[0, 1, 0],
        &[0, 0, 1],
        &[2, 2, 1],
        &[2, 3, 2],
        &[1, 2, 2],
    ])
    .expect("valid normal system")
}

pub fn falk_six_planes_b() -> Vec<Rational> {
    crate::linalg::rat_vec(&[0, 0, 0, 5, 2, 3])
}

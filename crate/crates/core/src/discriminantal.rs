//! The discriminantal (Manin–Schechtman) arrangement of a normal system.
//!
//! For each `(m+1)`-subset `S = {i_1 < … < i_{m+1}}` the hyperplane `M_S` in
//! `b`-space is the set of constant vectors for which the hyperplanes indexed
//! by `S` pass through a common point. Its normal is the cofactor expansion of
//!
//! ```text
//! det [ a_{i_k,1} … a_{i_k,m}  y_{i_k} ]_{k = 1..m+1} = 0
//! ```
//!
//! along the `y` column. Normals are kept exactly as expanded (no scaling, no
//! sign canonicalization), so sign vectors downstream are relative to this
//! orientation.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrency::SubsetCollection;
use crate::error::{Error, Result};
use crate::linalg::rational::serde_rational;
use crate::linalg::{dot, Rational, RationalMatrix, Sign};
use crate::normal_system::NormalSystem;
use crate::subsets::{members_of, Mask, Universe};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantalArrangement {
    universe: Universe,
    normals: RationalMatrix,
}

pub fn build(ns: &NormalSystem) -> DiscriminantalArrangement {
    DiscriminantalArrangement::build(ns)
}

impl DiscriminantalArrangement {
    pub fn build(ns: &NormalSystem) -> Self {
        let (n, m) = (ns.n(), ns.m());
        let universe = Universe::new(n, m);
        let rows: Vec<Vec<Rational>> = universe
            .masks()
            .par_iter()
            .map(|&s| cofactor_normal(ns, s))
            .collect();
        let normals = RationalMatrix::from_rows(n, rows).expect("rows have length n");
        DiscriminantalArrangement { universe, normals }
    }

    /// Builds directly from normals listed in lexicographic subset order.
    pub fn from_normals(n: usize, m: usize, normals: RationalMatrix) -> Result<Self> {
        let universe = Universe::new(n, m);
        if normals.rows() != universe.len() || normals.cols() != n {
            return Err(Error::LengthMismatch {
                expected: universe.len(),
                got: normals.rows(),
            });
        }
        Ok(DiscriminantalArrangement { universe, normals })
    }

    pub fn n(&self) -> usize {
        self.universe.n()
    }

    pub fn m(&self) -> usize {
        self.universe.m()
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn normals(&self) -> &RationalMatrix {
        &self.normals
    }

    pub fn normal(&self, idx: usize) -> &[Rational] {
        self.normals.row(idx)
    }

    pub fn subset(&self, idx: usize) -> Mask {
        self.universe.mask(idx)
    }

    /// Normal of `M_S` for a subset given as 1-based labels.
    pub fn normal_of(&self, labels: &[usize]) -> Option<&[Rational]> {
        let mask = labels_to_mask(labels)?;
        self.universe.index_of(mask).map(|i| self.normal(i))
    }

    /// `n - rank` of all normals: dimension of the common intersection.
    pub fn common_intersection_dim(&self) -> usize {
        self.n() - self.normals.rank()
    }

    /// Rank of the normals of the members of `d`.
    pub fn subset_rank(&self, d: &SubsetCollection) -> Result<usize> {
        if d.n() != self.n() || d.m() != self.m() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: d.n(),
            });
        }
        Ok(self.normals.select_rows(&d.indices_in(&self.universe)).rank())
    }

    /// Rank of the normals for explicitly listed 1-based subsets.
    pub fn subset_rank_of(&self, subsets: &[Vec<usize>]) -> Result<usize> {
        let idx = subsets
            .iter()
            .map(|s| self.index_of_labels(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.normals.select_rows(&idx).rank())
    }

    pub fn index_of_labels(&self, labels: &[usize]) -> Result<usize> {
        let bad = || Error::BadSubsetSize {
            subset: labels.to_vec(),
            expected: self.m() + 1,
        };
        let mask = labels_to_mask(labels).filter(|_| labels.iter().all(|&l| l <= self.n()));
        mask.and_then(|m| self.universe.index_of(m)).ok_or_else(bad)
    }

    /// Values of all functionals at `b`, in hyperplane order.
    pub fn evaluate(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        self.normals.mul_vec(b)
    }

    /// Sign of each functional at `b`; `Err` lists the vanishing hyperplanes.
    pub fn signs_at(&self, b: &[Rational]) -> Result<std::result::Result<Vec<Sign>, Vec<usize>>> {
        let values = self.evaluate(b)?;
        let zeros: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i)
            .collect();
        if !zeros.is_empty() {
            return Ok(Err(zeros));
        }
        Ok(Ok(values.iter().map(|v| Sign::of(v).unwrap()).collect()))
    }

    pub fn functional(&self, idx: usize, b: &[Rational]) -> Rational {
        dot(self.normal(idx), b)
    }

    pub fn to_file(&self) -> DiscriminantalFile {
        DiscriminantalFile {
            n: self.n(),
            m: self.m(),
            hyperplanes: (0..self.len())
                .map(|i| HyperplaneEntry {
                    subset: self.universe.labels(i),
                    normal: self.normal(i).to_vec(),
                })
                .collect(),
        }
    }
}

fn labels_to_mask(labels: &[usize]) -> Option<Mask> {
    labels.iter().try_fold(0 as Mask, |acc, &l| {
        if l == 0 || l > crate::subsets::MAX_N {
            None
        } else {
            Some(acc | (1 << (l - 1)))
        }
    })
}

/// Coefficient of `y_{i_k}` is `(-1)^(m+1+k) · det(rows of S without i_k)`
/// with `k` 1-based.
fn cofactor_normal(ns: &NormalSystem, subset: Mask) -> Vec<Rational> {
    let idx = members_of(subset);
    let m = ns.m();
    let mut normal = vec![Rational::zero(); ns.n()];
    for (k0, &i) in idx.iter().enumerate() {
        let minor: Vec<usize> = idx.iter().copied().filter(|&j| j != i).collect();
        let det = ns
            .coeffs()
            .select_rows(&minor)
            .determinant()
            .expect("minor is square");
        let k = k0 + 1;
        let sign = if (m + 1 + k) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        normal[i] = sign * det;
    }
    normal
}

/// JSON form, hyperplanes in lexicographic subset order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantalFile {
    pub n: usize,
    pub m: usize,
    pub hyperplanes: Vec<HyperplaneEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneEntry {
    pub subset: Vec<usize>,
    #[serde(with = "serde_rational::vec")]
    pub normal: Vec<Rational>,
}

impl TryFrom<DiscriminantalFile> for DiscriminantalArrangement {
    type Error = Error;

    fn try_from(file: DiscriminantalFile) -> Result<Self> {
        let universe = Universe::new(file.n, file.m);
        if file.hyperplanes.len() != universe.len() {
            return Err(Error::LengthMismatch {
                expected: universe.len(),
                got: file.hyperplanes.len(),
            });
        }
        for (i, h) in file.hyperplanes.iter().enumerate() {
            if h.subset != universe.labels(i) {
                return Err(Error::Parse(format!(
                    "hyperplane {} is out of lexicographic order",
                    i + 1
                )));
            }
        }
        let rows = file.hyperplanes.into_iter().map(|h| h.normal).collect();
        let normals = RationalMatrix::from_rows(file.n, rows)?;
        Ok(DiscriminantalArrangement { universe, normals })
    }
}

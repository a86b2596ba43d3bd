//! Chambers of the discriminantal arrangement as sign vectors with exact
//! witnesses, their antipodal classes, and classification of constant
//! vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discriminantal::DiscriminantalArrangement;
use crate::error::{Error, Result};
use crate::linalg::rational::serde_rational;
use crate::linalg::{integer_row, strictly_feasible, Rational, Sign};

/// Default cap on the number of chambers.
pub const DEFAULT_MAX_CHAMBERS: usize = 10_000;

/// One strict sign per hyperplane. Orders lexicographically with `+ < -`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| -*s).collect())
    }

    pub fn flipped(&self, k: usize) -> SignVector {
        let mut v = self.0.clone();
        v[k] = -v[k];
        SignVector(v)
    }

    /// Positions where the two vectors differ.
    pub fn differences(&self, other: &SignVector) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] != other.0[i]).collect()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| Sign::from_char(c).ok_or_else(|| Error::Parse(format!("bad sign {c:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    pub signs: SignVector,
    #[serde(with = "serde_rational::vec")]
    pub witness: Vec<Rational>,
    pub class: usize,
}

/// Every chamber, sorted by sign vector. Class ids number the antipodal
/// pairs in the order of their representative, the member starting with `+`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberCatalog {
    pub n: usize,
    pub m: usize,
    pub chambers: Vec<Chamber>,
}

impl ChamberCatalog {
    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.chambers.len() / 2
    }

    pub fn find(&self, signs: &SignVector) -> Option<usize> {
        self.chambers
            .binary_search_by(|c| c.signs.cmp(signs))
            .ok()
    }
}

/// A cell of an incrementally built arrangement: its signs against the rows
/// inserted so far and an interior point.
pub(crate) type Cell = (Vec<Sign>, Vec<BigInt>);

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All sign patterns `σ` over `rows` for which `σ_i row_i · x > 0` together
/// with `base_j · x > 0` is feasible, each with an interior point. `start`
/// must satisfy the base constraints strictly (or be zero if there are none).
pub(crate) fn enumerate_cells(
    rows: &[Vec<BigInt>],
    base: &[Vec<BigInt>],
    start: Vec<BigInt>,
    dim: usize,
    max_cells: usize,
) -> Result<Vec<Cell>> {
    let mut cells: Vec<Cell> = vec![(Vec::new(), start)];
    for g in rows {
        let next: Vec<Vec<Cell>> = cells
            .par_iter()
            .map(|(signs, w)| {
                let known = Sign::of_int(&dot_int(g, w));
                let mut out = Vec::with_capacity(2);
                for side in [Sign::Plus, Sign::Minus] {
                    let witness = if known == Some(side) {
                        Some(w.clone())
                    } else {
                        let system: Vec<Vec<BigInt>> = base
                            .iter()
                            .cloned()
                            .chain(signs.iter().zip(rows).map(|(s, r)| signed(*s, r)))
                            .chain(std::iter::once(signed(side, g)))
                            .collect();
                        strictly_feasible(&system, dim)
                    };
                    if let Some(x) = witness {
                        let mut s = signs.clone();
                        s.push(side);
                        out.push((s, x));
                    }
                }
                debug_assert!(!out.is_empty());
                out
            })
            .collect();
        cells = next.into_iter().flatten().collect();
        if cells.len() > max_cells {
            return Err(Error::TooLarge {
                what: "cells",
                size: cells.len() as u128,
                limit: max_cells as u128,
            });
        }
    }
    Ok(cells)
}

fn signed(s: Sign, row: &[BigInt]) -> Vec<BigInt> {
    match s {
        Sign::Plus => row.to_vec(),
        Sign::Minus => row.iter().map(|v| -v).collect(),
    }
}

/// Chamber catalog of `da`.
pub fn enumerate_chambers(da: &DiscriminantalArrangement) -> Result<ChamberCatalog> {
    enumerate_chambers_with_limit(da, DEFAULT_MAX_CHAMBERS)
}

pub fn enumerate_chambers_with_limit(
    da: &DiscriminantalArrangement,
    max_chambers: usize,
) -> Result<ChamberCatalog> {
    let n = da.n();
    // Restrict to the first independent set of columns: every functional
    // value is attained by a vector supported there.
    let (_, pivots) = da.normals().rref();
    let reduced = da.normals().select_cols(&pivots);
    let rows: Vec<Vec<BigInt>> = (0..reduced.rows())
        .map(|i| integer_row(reduced.row(i)))
        .collect();
    let dim = pivots.len();
    let cells = enumerate_cells(&rows, &[], vec![BigInt::zero(); dim], dim, max_chambers)?;
    let mut chambers: Vec<Chamber> = cells
        .into_iter()
        .map(|(signs, x)| {
            let mut witness = vec![Rational::zero(); n];
            for (v, &p) in x.into_iter().zip(&pivots) {
                witness[p] = Rational::from_integer(v);
            }
            Chamber {
                signs: SignVector(signs),
                witness,
                class: 0,
            }
        })
        .collect();
    chambers.sort_by(|a, b| a.signs.cmp(&b.signs));
    let mut catalog = ChamberCatalog {
        n,
        m: da.m(),
        chambers,
    };
    assign_classes(&mut catalog)?;
    Ok(catalog)
}

fn assign_classes(catalog: &mut ChamberCatalog) -> Result<()> {
    let classes = antipodal_classes(catalog)?;
    for class in classes {
        catalog.chambers[class.representative].class = class.id;
        catalog.chambers[class.antipode].class = class.id;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntipodalClass {
    pub id: usize,
    /// Catalog index of the member whose first sign is `+`.
    pub representative: usize,
    pub antipode: usize,
}

/// Pairs each chamber with its negation.
pub fn antipodal_classes(catalog: &ChamberCatalog) -> Result<Vec<AntipodalClass>> {
    let mut classes = Vec::with_capacity(catalog.len() / 2);
    for (i, c) in catalog.chambers.iter().enumerate() {
        let neg = c.signs.negated();
        let Some(j) = catalog.find(&neg) else {
            return Err(Error::UnpairedChamber(c.signs.to_string()));
        };
        if i == j {
            return Err(Error::UnpairedChamber(c.signs.to_string()));
        }
        if c.signs.0.first() != Some(&Sign::Minus) {
            classes.push(AntipodalClass {
                id: classes.len(),
                representative: i,
                antipode: j,
            });
        }
    }
    Ok(classes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Chamber { class: usize, signs: SignVector },
    /// 1-based subsets whose functional vanishes.
    OnWall { subsets: Vec<Vec<usize>> },
}

pub fn classify_b(
    da: &DiscriminantalArrangement,
    catalog: &ChamberCatalog,
    b: &[Rational],
) -> Result<Classification> {
    match da.signs_at(b)? {
        Err(zeros) => Ok(Classification::OnWall {
            subsets: zeros.into_iter().map(|i| da.universe().labels(i)).collect(),
        }),
        Ok(signs) => {
            let signs = SignVector(signs);
            let idx = catalog
                .find(&signs)
                .ok_or_else(|| Error::NotInCatalog(signs.to_string()))?;
            Ok(Classification::Chamber {
                class: catalog.chambers[idx].class,
                signs,
            })
        }
    }
}

/// An edge between chambers across one wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjacency {
    pub a: usize,
    pub b: usize,
    /// Index of the separating hyperplane.
    pub wall: usize,
}

/// Edges `a < b` between chambers separated by a single wall. The point
/// where the segment between the two witnesses meets the wall lies on every
/// other side strictly, which realizes the shared facet.
pub fn adjacency(da: &DiscriminantalArrangement, catalog: &ChamberCatalog) -> Vec<Adjacency> {
    let per_chamber: Vec<Vec<Adjacency>> = (0..catalog.len())
        .into_par_iter()
        .map(|a| {
            let ca = &catalog.chambers[a];
            (0..ca.signs.len())
                .filter_map(|k| {
                    let b = catalog.find(&ca.signs.flipped(k))?;
                    (a < b && facet_realized(da, &ca.witness, &catalog.chambers[b].witness, k))
                        .then_some(Adjacency { a, b, wall: k })
                })
                .collect()
        })
        .collect();
    per_chamber.into_iter().flatten().collect()
}

fn facet_realized(da: &DiscriminantalArrangement, p: &[Rational], q: &[Rational], k: usize) -> bool {
    let hp = da.functional(k, p);
    let hq = da.functional(k, q);
    if hp.is_zero() || hp.signum() == hq.signum() {
        return false;
    }
    // h_k(p + t (q - p)) = 0
    let t = &hp / (&hp - &hq);
    let point: Vec<Rational> = p
        .iter()
        .zip(q)
        .map(|(a, b)| a + &t * (b - a))
        .collect();
    (0..da.len()).all(|i| {
        let v = da.functional(i, &point);
        if i == k {
            v.is_zero()
        } else {
            Sign::of(&v) == Sign::of(&da.functional(i, p))
        }
    })
}

/// Neighbour lists derived from the edge list.
pub fn neighbours(catalog: &ChamberCatalog, edges: &[Adjacency]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); catalog.len()];
    for e in edges {
        out[e.a].push(e.b);
        out[e.b].push(e.a);
    }
    for list in &mut out {
        list.sort_unstable();
    }
    out
}

/// Checks every stored invariant of a catalog against `da`.
pub fn verify_catalog(da: &DiscriminantalArrangement, catalog: &ChamberCatalog) -> Result<()> {
    for c in &catalog.chambers {
        match da.signs_at(&c.witness)? {
            Ok(signs) if signs == c.signs.0 => {}
            _ => return Err(Error::NotInCatalog(c.signs.to_string())),
        }
    }
    let sorted = catalog
        .chambers
        .windows(2)
        .all(|w| w[0].signs.cmp(&w[1].signs) == Ordering::Less);
    if !sorted {
        return Err(Error::Parse("catalog is not sorted by sign vector".into()));
    }
    antipodal_classes(catalog).map(|_| ())
}

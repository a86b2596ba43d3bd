//! Characteristic polynomials of discriminantal arrangements.
//!
//! Three routes to the same polynomial:
//! - [`whitney_charpoly`] sums `(-1)^|B| x^(n - rank B)` over all subsets
//!   `B`, grouping subsets by their row space so each distinct span is
//!   carried once;
//! - [`poset_charpoly`] builds the intersection lattice and uses the Möbius
//!   function;
//! - [`combinatorial_charpoly`] runs the same Möbius recursion on the
//!   lattice of closed collections with combinatorial ranks, no matrices.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrency::{combinatorial_rank, enumerate_closed_collections};
use crate::discriminantal::DiscriminantalArrangement;
use crate::error::{Error, Result};
use crate::linalg::span::Span;
use crate::subsets::{binomial, Universe};

/// Largest arrangement accepted by [`whitney_charpoly`].
pub const WHITNEY_LIMIT: usize = 22;

/// Default cap on the number of flats built by [`poset_charpoly`].
pub const DEFAULT_MAX_FLATS: usize = 1_000_000;

/// Integer polynomial stored densely from the leading coefficient down.
///
/// Serializes as a list of coefficients; values outside `i64` become strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharPolynomial {
    coefficients: Vec<BigInt>,
}

impl CharPolynomial {
    /// `coefficients[0]` multiplies `x^degree`.
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.len() > 1 && coefficients[0].is_zero() {
            coefficients.remove(0);
        }
        if coefficients.is_empty() {
            coefficients.push(BigInt::zero());
        }
        CharPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// From `by_power[k]` = coefficient of `x^k`.
    fn from_powers(by_power: Vec<BigInt>) -> Self {
        Self::new(by_power.into_iter().rev().collect())
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Coefficient of `x^k`.
    pub fn coefficient(&self, k: usize) -> BigInt {
        if k > self.degree() {
            BigInt::zero()
        } else {
            self.coefficients[self.degree() - k].clone()
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Signs strictly alternate from the leading term down to the lowest
    /// nonzero term, with no gaps.
    pub fn has_alternating_signs(&self) -> bool {
        let low = (0..=self.degree())
            .find(|&k| !self.coefficient(k).is_zero())
            .unwrap_or(0);
        (low..=self.degree()).all(|k| {
            let c = self.coefficient(k);
            let expect_positive = (self.degree() - k) % 2 == 0;
            if expect_positive {
                c.is_positive()
            } else {
                c.is_negative()
            }
        })
    }

    /// Largest `j` with `x^j` dividing the polynomial.
    pub fn x_multiplicity(&self) -> usize {
        (0..=self.degree())
            .take_while(|&k| self.coefficient(k).is_zero())
            .count()
            .min(self.degree())
    }

    /// Quotient and remainder of division by `x - r`.
    pub fn divide_linear(&self, r: &BigInt) -> (CharPolynomial, BigInt) {
        let mut out = Vec::with_capacity(self.coefficients.len());
        let mut acc = BigInt::zero();
        for c in &self.coefficients {
            acc = acc * r + c;
            out.push(acc.clone());
        }
        let rem = out.pop().unwrap_or_default();
        (CharPolynomial::new(out), rem)
    }

    /// `x^m (x - 1)` divides the polynomial.
    pub fn divisible_by_x_pow_times_x_minus_one(&self, m: usize) -> bool {
        self.x_multiplicity() >= m && self.eval(&BigInt::one()).is_zero()
    }

    /// Factors out powers of `x` and integer linear factors; any remaining
    /// part is printed in parentheses.
    pub fn factored(&self) -> String {
        if self.coefficients.iter().all(|c| c.is_zero()) {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let k = self.x_multiplicity();
        let mut rest = CharPolynomial::new(self.coefficients[..=self.degree() - k].to_vec());
        if k == 1 {
            parts.push("x".into());
        } else if k > 1 {
            parts.push(format!("x^{k}"));
        }
        let mut roots: Vec<(BigInt, usize)> = Vec::new();
        'outer: while rest.degree() > 0 {
            let constant = rest.coefficient(0).abs();
            let lead = rest.coefficients[0].clone();
            if !lead.abs().is_one() {
                break;
            }
            let bound = constant.to_u64().unwrap_or(0);
            for d in 1..=bound {
                let d = BigInt::from(d);
                if !(&constant % &d).is_zero() {
                    continue;
                }
                for r in [d.clone(), -d] {
                    let (q, rem) = rest.divide_linear(&r);
                    if rem.is_zero() {
                        match roots.iter_mut().find(|(x, _)| *x == r) {
                            Some(e) => e.1 += 1,
                            None => roots.push((r, 1)),
                        }
                        rest = q;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        roots.sort();
        for (r, mult) in roots {
            let base = if r.is_negative() {
                format!("(x+{})", -r)
            } else {
                format!("(x-{r})")
            };
            parts.push(if mult > 1 { format!("{base}^{mult}") } else { base });
        }
        if rest.degree() > 0 {
            parts.push(format!("({rest})"));
        } else if !rest.coefficients[0].is_one() {
            parts.insert(0, rest.coefficients[0].to_string());
        }
        parts.join("")
    }
}

impl fmt::Display for CharPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() && d != 0 {
                continue;
            }
            let k = d - i;
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = !mag.is_one() || k == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Small(i64),
    Big(String),
}

impl Serialize for CharPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<Coefficient> = self
            .coefficients
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => Coefficient::Small(v),
                None => Coefficient::Big(c.to_string()),
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<Coefficient>::deserialize(d)?;
        let coefficients = list
            .into_iter()
            .map(|c| match c {
                Coefficient::Small(v) => Ok(BigInt::from(v)),
                Coefficient::Big(text) => text.parse::<BigInt>().map_err(serde::de::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CharPolynomial::new(coefficients))
    }
}

/// Subset-sum definition, with subsets grouped by row space.
pub fn whitney_charpoly(da: &DiscriminantalArrangement) -> Result<CharPolynomial> {
    whitney_charpoly_with_limit(da, 1 << WHITNEY_LIMIT)
}

/// As [`whitney_charpoly`], refusing arrangements with more than
/// `max_subsets` subsets.
pub fn whitney_charpoly_with_limit(
    da: &DiscriminantalArrangement,
    max_subsets: u128,
) -> Result<CharPolynomial> {
    let subsets = 1u128.checked_shl(da.len() as u32).unwrap_or(u128::MAX);
    if da.len() >= 128 || subsets > max_subsets {
        return Err(Error::TooLarge {
            what: "subsets for the subset sum",
            size: subsets,
            limit: max_subsets,
        });
    }
    let n = da.n();
    // Signed count of subsets processed so far, keyed by their span.
    let mut weights: HashMap<Span, BigInt> = HashMap::new();
    weights.insert(Span::new(n), BigInt::one());
    for h in 0..da.len() {
        let normal = da.normal(h);
        let additions: Vec<(Span, BigInt)> = weights
            .par_iter()
            .map(|(span, w)| (span.with(normal), -w.clone()))
            .collect();
        for (span, w) in additions {
            *weights.entry(span).or_default() += w;
        }
        weights.retain(|_, w| !w.is_zero());
    }
    let mut by_power = vec![BigInt::zero(); n + 1];
    for (span, w) in weights {
        by_power[n - span.rank()] += w;
    }
    Ok(CharPolynomial::from_powers(by_power))
}

/// A flat of the intersection lattice: the hyperplanes containing it.
struct Flat {
    members: FixedBitSet,
    span: Span,
}

/// Möbius recursion over the intersection lattice.
pub fn poset_charpoly(da: &DiscriminantalArrangement) -> Result<CharPolynomial> {
    poset_charpoly_with_limit(da, DEFAULT_MAX_FLATS)
}

pub fn poset_charpoly_with_limit(
    da: &DiscriminantalArrangement,
    max_flats: usize,
) -> Result<CharPolynomial> {
    let (n, e) = (da.n(), da.len());
    let mut levels: Vec<Vec<Flat>> = vec![vec![Flat {
        members: FixedBitSet::with_capacity(e),
        span: Span::new(n),
    }]];
    let mut total = 1usize;
    loop {
        let last = levels.last().unwrap();
        let children: Vec<(FixedBitSet, Span)> = last
            .par_iter()
            .flat_map_iter(|flat| {
                (0..e)
                    .filter(|&h| !flat.members.contains(h))
                    .map(|h| {
                        let span = flat.span.with(da.normal(h));
                        let mut members = FixedBitSet::with_capacity(e);
                        for g in 0..e {
                            if flat.members.contains(g) || span.contains(da.normal(g)) {
                                members.insert(g);
                            }
                        }
                        (members, span)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next: HashMap<FixedBitSet, Span> = HashMap::new();
        for (members, span) in children {
            next.entry(members).or_insert(span);
        }
        if next.is_empty() {
            break;
        }
        total += next.len();
        if total > max_flats {
            return Err(Error::TooLarge {
                what: "flats",
                size: total as u128,
                limit: max_flats as u128,
            });
        }
        let mut level: Vec<Flat> = next
            .into_iter()
            .map(|(members, span)| Flat { members, span })
            .collect();
        level.sort_by(|a, b| a.members.ones().cmp(b.members.ones()));
        levels.push(level);
    }
    let graded: Vec<Vec<FixedBitSet>> = levels
        .into_iter()
        .map(|l| l.into_iter().map(|f| f.members).collect())
        .collect();
    Ok(mobius_charpoly(n, &graded))
}

/// `χ = Σ μ(0, F) x^(n - rank F)` for a lattice graded by rank, level `r`
/// holding the flats of rank `r` as sets of atoms.
fn mobius_charpoly(n: usize, levels: &[Vec<FixedBitSet>]) -> CharPolynomial {
    let mut mu: Vec<Vec<BigInt>> = Vec::with_capacity(levels.len());
    for (r, level) in levels.iter().enumerate() {
        let values: Vec<BigInt> = if r == 0 {
            vec![BigInt::one(); level.len()]
        } else {
            level
                .par_iter()
                .map(|f| {
                    let below: BigInt = levels[..r]
                        .iter()
                        .zip(&mu)
                        .flat_map(|(lv, mv)| lv.iter().zip(mv))
                        .filter(|(g, _)| g.is_subset(f))
                        .map(|(_, m)| m.clone())
                        .sum();
                    -below
                })
                .collect()
        };
        mu.push(values);
    }
    let mut by_power = vec![BigInt::zero(); n + 1];
    for (r, values) in mu.iter().enumerate() {
        for v in values {
            by_power[n - r] += v;
        }
    }
    CharPolynomial::from_powers(by_power)
}

/// The polynomial shared by every concurrency-free system with these
/// parameters, from combinatorial ranks only.
pub fn combinatorial_charpoly(n: usize, m: usize) -> Result<CharPolynomial> {
    let universe = Universe::new(n, m);
    let flats = enumerate_closed_collections(n, m)?;
    let top = n - m;
    let mut levels: Vec<Vec<FixedBitSet>> = vec![Vec::new(); top + 1];
    levels[0].push(FixedBitSet::with_capacity(universe.len()));
    for d in &flats {
        let mut bits = FixedBitSet::with_capacity(universe.len());
        for i in d.indices_in(&universe) {
            bits.insert(i);
        }
        levels[combinatorial_rank(d)].push(bits);
    }
    while levels.last().is_some_and(|l| l.is_empty()) {
        levels.pop();
    }
    Ok(mobius_charpoly(n, &levels))
}

/// `(-1)^n χ(-1)`.
pub fn zaslavsky_regions(p: &CharPolynomial) -> BigInt {
    let v = p.eval(&BigInt::from(-1));
    if p.degree() % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Half the number of regions.
pub fn iso_class_count(p: &CharPolynomial) -> Result<BigInt> {
    let r = zaslavsky_regions(p);
    if (&r % 2u32).is_zero() {
        Ok(r / 2u32)
    } else {
        Err(Error::OddRegionCount(r.to_u64().unwrap_or(u64::MAX)))
    }
}

/// Number of hyperplanes, the negated `x^(n-1)` coefficient of any
/// discriminantal polynomial.
pub fn hyperplane_count(n: usize, m: usize) -> u128 {
    binomial(n, m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminantal::build;
    use crate::normal_system::{perpendicular_pairs_six_lines, NormalSystem};

    fn planar(rows: &[&[i64]]) -> DiscriminantalArrangement {
        build(&NormalSystem::from_i64_rows(rows).unwrap())
    }

    /// Literal `Σ_B (-1)^|B| x^(n - rank B)`.
    fn naive(da: &DiscriminantalArrangement) -> CharPolynomial {
        let (n, e) = (da.n(), da.len());
        let mut by_power = vec![BigInt::zero(); n + 1];
        for sel in 0u32..(1 << e) {
            let rows: Vec<usize> = (0..e).filter(|i| sel >> i & 1 == 1).collect();
            let r = da.normals().select_rows(&rows).rank();
            let sign = if rows.len() % 2 == 0 { 1 } else { -1 };
            by_power[n - r] += sign;
        }
        CharPolynomial::from_powers(by_power)
    }

    #[test]
    fn display_and_factoring() {
        let p = CharPolynomial::from_i64(&[1, -4, 3, 0, 0]);
        assert_eq!(p.to_string(), "x^4 - 4x^3 + 3x^2");
        assert_eq!(p.factored(), "x^2(x-1)(x-3)");
        let q = CharPolynomial::from_i64(&[1, -10, 30, -21, 0, 0]);
        assert_eq!(q.factored(), "x^2(x-1)(x^2 - 9x + 21)");
        assert_eq!(CharPolynomial::from_i64(&[-2, 0, 1]).to_string(), "-2x^2 + 1");
    }

    #[test]
    fn four_lines() {
        let da = planar(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 2]]);
        let expected = CharPolynomial::from_i64(&[1, -4, 3, 0, 0]);
        assert_eq!(whitney_charpoly(&da).unwrap(), expected);
        assert_eq!(poset_charpoly(&da).unwrap(), expected);
        assert_eq!(naive(&da), expected);
        assert_eq!(zaslavsky_regions(&expected), BigInt::from(8));
        assert_eq!(iso_class_count(&expected).unwrap(), BigInt::from(4));
    }

    #[test]
    fn five_lines_three_ways() {
        let da = planar(&[&[1, 0], &[2, 1], &[1, 3], &[0, 1], &[-1, 2]]);
        let expected = CharPolynomial::from_i64(&[1, -10, 30, -21, 0, 0]);
        assert_eq!(naive(&da), expected);
        assert_eq!(whitney_charpoly(&da).unwrap(), expected);
        assert_eq!(poset_charpoly(&da).unwrap(), expected);
        assert_eq!(combinatorial_charpoly(5, 2).unwrap(), expected);
        assert_eq!(zaslavsky_regions(&expected), BigInt::from(62));
    }

    #[test]
    fn whitney_refuses_large_inputs() {
        let ns = crate::normal_system::random_normal_system(7, 2, 1, 5).unwrap().system;
        assert!(matches!(
            whitney_charpoly(&build(&ns)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn perpendicular_pairs_agree_and_count() {
        let da = build(&perpendicular_pairs_six_lines());
        let w = whitney_charpoly(&da).unwrap();
        assert_eq!(poset_charpoly(&da).unwrap(), w);
        assert_eq!(zaslavsky_regions(&w), BigInt::from(884));
        assert!(w.has_alternating_signs());
        assert!(w.divisible_by_x_pow_times_x_minus_one(2));
    }

    #[test]
    fn json_coefficients() {
        let p = CharPolynomial::from_i64(&[1, -4, 3, 0, 0]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, "[1,-4,3,0,0]");
        assert_eq!(serde_json::from_str::<CharPolynomial>(&text).unwrap(), p);
        let big = CharPolynomial::new(vec![BigInt::one(), BigInt::from(u64::MAX)]);
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<CharPolynomial>(&text).unwrap(), big);
    }

    #[test]
    fn odd_region_count_is_an_error() {
        // x - 2 has (−1)^1 · (−3) = 3 regions.
        let p = CharPolynomial::from_i64(&[1, -2]);
        assert_eq!(iso_class_count(&p), Err(Error::OddRegionCount(3)));
    }

    #[test]
    fn flat_limit_is_enforced() {
        let da = planar(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 2]]);
        assert!(matches!(
            poset_charpoly_with_limit(&da, 3),
            Err(Error::TooLarge { .. })
        ));
    }
}

//! Geometry of an affine arrangement `a_i · x = b_i` in `m`-space.

use std::collections::HashSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chambers::{enumerate_cells, ChamberCatalog};
use crate::discriminantal::DiscriminantalArrangement;
use crate::error::{Error, Result};
use crate::linalg::rational::serde_rational;
use crate::linalg::{dot, find_interior_point, integer_row, Rational, RationalMatrix, Sign};
use crate::normal_system::{Arrangement, NormalSystem};
use crate::subsets::binomial;

/// Cap on regions built by [`regions`]; generous for any `n ≤ 32`, `m ≤ 3`.
pub const DEFAULT_MAX_REGIONS: usize = 1_000_000;

/// Errors with the first concurrent `(m+1)`-subset, if any.
pub fn check_generic(arr: &Arrangement) -> Result<()> {
    check_generic_with(&DiscriminantalArrangement::build(arr.system()), arr.b())
}

pub fn check_generic_with(da: &DiscriminantalArrangement, b: &[Rational]) -> Result<()> {
    match da.signs_at(b)? {
        Ok(_) => Ok(()),
        Err(zeros) => Err(Error::NotGeneric {
            subset: da.universe().labels(zeros[0]),
        }),
    }
}

/// Vertices along one line, in the order of the line's direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineOrder {
    /// 1-based indices of the hyperplanes cut out the line.
    pub line: Vec<usize>,
    #[serde(with = "serde_rational::vec")]
    pub direction: Vec<Rational>,
    /// Each vertex as the 1-based `m`-subset meeting there.
    pub vertices: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrderTable {
    pub lines: Vec<LineOrder>,
}

/// Orders of the vertices on each line `∩_{i∈A} H_i`, `|A| = m - 1`. The
/// direction is the line's direction vector scaled so its first nonzero
/// entry is 1.
pub fn vertex_orders(arr: &Arrangement) -> Result<VertexOrderTable> {
    check_generic(arr)?;
    Ok(vertex_orders_unchecked(arr))
}

fn vertex_orders_unchecked(arr: &Arrangement) -> VertexOrderTable {
    let ns = arr.system();
    let (n, m) = (ns.n(), ns.m());
    let lines = (0..n)
        .combinations(m - 1)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| line_order(ns, arr.b(), &a))
        .collect();
    VertexOrderTable { lines }
}

fn line_order(ns: &NormalSystem, b: &[Rational], a: &[usize]) -> LineOrder {
    let coeffs = ns.coeffs().select_rows(a);
    let basis = coeffs.nullspace_basis();
    debug_assert_eq!(basis.cols(), 1);
    let mut d = basis.column(0);
    let lead = d.iter().find(|v| !v.is_zero()).expect("nonzero direction").clone();
    for v in &mut d {
        *v /= &lead;
    }
    let rhs: Vec<Rational> = a.iter().map(|&i| b[i].clone()).collect();
    let p = coeffs
        .solve(&rhs)
        .expect("shapes agree")
        .expect("independent rows are consistent");
    let mut params: Vec<(Rational, usize)> = (0..ns.n())
        .filter(|j| !a.contains(j))
        .map(|j| {
            let aj = ns.normal(j);
            ((&b[j] - dot(aj, &p)) / dot(aj, &d), j)
        })
        .collect();
    params.sort();
    let vertices = params
        .into_iter()
        .map(|(_, j)| {
            let mut v: Vec<usize> = a.iter().copied().chain([j]).map(|i| i + 1).collect();
            v.sort_unstable();
            v
        })
        .collect();
    LineOrder {
        line: a.iter().map(|i| i + 1).collect(),
        direction: d,
        vertices,
    }
}

fn same_shape(a1: &Arrangement, a2: &Arrangement) -> Result<()> {
    if a1.n() != a2.n() || a1.m() != a2.m() {
        return Err(Error::WrongShape {
            n_required: a1.n(),
            m_required: a1.m(),
        });
    }
    Ok(())
}

/// Same vertex sequence on every line, each line read either way.
pub fn are_isomorphic_trivial(a1: &Arrangement, a2: &Arrangement) -> Result<bool> {
    same_shape(a1, a2)?;
    Ok(orders_match(&vertex_orders(a1)?, &vertex_orders(a2)?))
}

pub fn orders_match(t1: &VertexOrderTable, t2: &VertexOrderTable) -> bool {
    t1.lines.len() == t2.lines.len()
        && t1.lines.iter().zip(&t2.lines).all(|(l1, l2)| {
            l1.vertices == l2.vertices || l1.vertices.iter().eq(l2.vertices.iter().rev())
        })
}

/// A region as a sign vector over the affine hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub signs: Vec<Sign>,
    #[serde(with = "serde_rational::vec")]
    pub point: Vec<Rational>,
    pub bounded: bool,
}

/// All regions, sorted by sign vector.
pub fn regions(arr: &Arrangement) -> Result<Vec<Region>> {
    check_generic(arr)?;
    let ns = arr.system();
    let m = ns.m();
    // Homogenize: (x0, x) with x0 > 0, row i is (-b_i, a_i).
    let rows: Vec<Vec<BigInt>> = (0..ns.n())
        .map(|i| {
            let mut r = vec![-arr.b()[i].clone()];
            r.extend(ns.normal(i).iter().cloned());
            integer_row(&r)
        })
        .collect();
    let mut x0 = vec![BigInt::zero(); m + 1];
    x0[0] = BigInt::one();
    let cells = enumerate_cells(&rows, &[x0.clone()], x0, m + 1, DEFAULT_MAX_REGIONS)?;
    let mut out: Vec<Region> = cells
        .into_par_iter()
        .map(|(signs, x)| {
            let scale = Rational::from_integer(x[0].clone());
            let point = x[1..]
                .iter()
                .map(|v| Rational::from_integer(v.clone()) / &scale)
                .collect();
            let bounded = is_bounded(ns, &signs);
            Region {
                signs,
                point,
                bounded,
            }
        })
        .collect();
    out.sort_by(|a, b| a.signs.cmp(&b.signs));
    Ok(out)
}

/// The recession cone `{d : σ_i a_i · d ≥ 0}` is trivial iff some `y > 0`
/// has `Σ y_i σ_i a_i = 0`, since the normals span.
fn is_bounded(ns: &NormalSystem, signs: &[Sign]) -> bool {
    let rows = (0..ns.n())
        .map(|i| {
            ns.normal(i)
                .iter()
                .map(|v| if signs[i] == Sign::Minus { -v } else { v.clone() })
                .collect()
        })
        .collect();
    let g = RationalMatrix::from_rows(ns.m(), rows).expect("rows have length m");
    let null = g.transpose().nullspace_basis();
    let all_plus = vec![Sign::Plus; null.rows()];
    find_interior_point(&null, &all_plus)
        .expect("lengths agree")
        .is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionCensus {
    pub total: usize,
    pub bounded: usize,
    pub unbounded: usize,
}

impl RegionCensus {
    /// Counts every generic arrangement of `n` hyperplanes in `m`-space has.
    pub fn generic(n: usize, m: usize) -> RegionCensus {
        let total: u128 = (0..=m).map(|i| binomial(n, i)).sum();
        let bounded = if n == 0 { 0 } else { binomial(n - 1, m) };
        RegionCensus {
            total: total as usize,
            bounded: bounded as usize,
            unbounded: (total - bounded) as usize,
        }
    }
}

pub fn region_census(arr: &Arrangement) -> Result<RegionCensus> {
    let regions = regions(arr)?;
    let bounded = regions.iter().filter(|r| r.bounded).count();
    Ok(RegionCensus {
        total: regions.len(),
        bounded,
        unbounded: regions.len() - bounded,
    })
}

/// Triples of lines bounding a triangular region, as sorted 1-based labels.
pub fn simplex_signature(arr: &Arrangement) -> Result<Vec<Vec<usize>>> {
    if arr.m() != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            got: arr.m(),
        });
    }
    let regions = regions(arr)?;
    let present: HashSet<&[Sign]> = regions.iter().map(|r| r.signs.as_slice()).collect();
    let mut triangles: Vec<Vec<usize>> = regions
        .iter()
        .filter(|r| r.bounded)
        .filter_map(|r| {
            let facets: Vec<usize> = (0..r.signs.len())
                .filter(|&i| {
                    let mut s = r.signs.clone();
                    s[i] = -s[i];
                    present.contains(s.as_slice())
                })
                .map(|i| i + 1)
                .collect();
            (facets.len() == 3).then_some(facets)
        })
        .collect();
    triangles.sort();
    Ok(triangles)
}

/// For four lines: the pair whose lines share their middle vertex.
pub fn special_point(arr: &Arrangement) -> Result<[usize; 2]> {
    if arr.n() != 4 || arr.m() != 2 {
        return Err(Error::WrongShape {
            n_required: 4,
            m_required: 2,
        });
    }
    let table = vertex_orders(arr)?;
    let middles: Vec<&Vec<usize>> = table.lines.iter().map(|l| &l.vertices[1]).collect();
    let special = (0..4)
        .tuple_combinations()
        .find(|&(i, j)| {
            let pair = vec![i + 1, j + 1];
            *middles[i] == pair && *middles[j] == pair
        })
        .expect("a generic four-line arrangement has a special point");
    Ok([special.0 + 1, special.1 + 1])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSwap {
    pub line: Vec<usize>,
    pub before: Vec<Vec<usize>>,
    pub after: Vec<Vec<usize>>,
    /// The line lies in every hyperplane of the wall but one pair.
    pub expects_swap: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapReport {
    /// 1-based subset of the wall crossed.
    pub wall: Vec<usize>,
    pub lines: Vec<LineSwap>,
    pub passed: bool,
}

/// Crossing from chamber `from` to chamber `to` across the wall `M_S` must
/// swap the two adjacent vertices `A ∪ {j}`, `A ∪ {k}` on every line with
/// `A ⊂ S`, and leave every other line unchanged.
pub fn swap_check(
    ns: &NormalSystem,
    da: &DiscriminantalArrangement,
    catalog: &ChamberCatalog,
    from: usize,
    to: usize,
) -> Result<SwapReport> {
    let (c, d) = match (catalog.chambers.get(from), catalog.chambers.get(to)) {
        (Some(c), Some(d)) => (c, d),
        _ => return Err(Error::NotAdjacent(from, to)),
    };
    let diff = c.signs.differences(&d.signs);
    let [wall] = diff[..] else {
        return Err(Error::NotAdjacent(from, to));
    };
    let s = da.universe().labels(wall);
    let before = vertex_orders(&Arrangement::new(ns.clone(), c.witness.clone())?)?;
    let after = vertex_orders(&Arrangement::new(ns.clone(), d.witness.clone())?)?;
    let lines: Vec<LineSwap> = before
        .lines
        .iter()
        .zip(&after.lines)
        .map(|(lb, la)| {
            let expects_swap = lb.line.iter().all(|i| s.contains(i));
            let ok = if expects_swap {
                let moved: Vec<Vec<usize>> = s
                    .iter()
                    .filter(|i| !lb.line.contains(i))
                    .map(|&j| {
                        let mut v = lb.line.clone();
                        v.push(j);
                        v.sort_unstable();
                        v
                    })
                    .collect();
                is_adjacent_transposition(&lb.vertices, &la.vertices, &moved[0], &moved[1])
            } else {
                lb.vertices == la.vertices
            };
            LineSwap {
                line: lb.line.clone(),
                before: lb.vertices.clone(),
                after: la.vertices.clone(),
                expects_swap,
                ok,
            }
        })
        .collect();
    let passed = lines.iter().all(|l| l.ok);
    Ok(SwapReport {
        wall: s,
        lines,
        passed,
    })
}

fn is_adjacent_transposition(
    before: &[Vec<usize>],
    after: &[Vec<usize>],
    u: &[usize],
    v: &[usize],
) -> bool {
    let (Some(i), Some(j)) = (
        before.iter().position(|x| x == u),
        before.iter().position(|x| x == v),
    ) else {
        return false;
    };
    if i.abs_diff(j) != 1 {
        return false;
    }
    let mut swapped = before.to_vec();
    swapped.swap(i, j);
    swapped == after
}

/// Result of comparing the chamber classes of a catalog with the vertex
/// order oracle on every pair of witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub chambers: usize,
    pub classes: usize,
    pub pairs: usize,
    /// Catalog index pairs where class equality and the oracle disagree.
    pub mismatches: Vec<(usize, usize)>,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Vertex order tables of every chamber witness, in catalog order.
pub fn catalog_orders(ns: &NormalSystem, catalog: &ChamberCatalog) -> Result<Vec<VertexOrderTable>> {
    catalog
        .chambers
        .par_iter()
        .map(|c| vertex_orders(&Arrangement::new(ns.clone(), c.witness.clone())?))
        .collect()
}

pub fn cross_check(ns: &NormalSystem, catalog: &ChamberCatalog) -> Result<CrossCheck> {
    let tables = catalog_orders(ns, catalog)?;
    let k = catalog.len();
    let mismatches: Vec<(usize, usize)> = (0..k)
        .into_par_iter()
        .flat_map_iter(|i| {
            let tables = &tables;
            (i + 1..k).filter_map(move |j| {
                let same_class = catalog.chambers[i].class == catalog.chambers[j].class;
                (same_class != orders_match(&tables[i], &tables[j])).then_some((i, j))
            })
        })
        .collect();
    Ok(CrossCheck {
        chambers: k,
        classes: catalog.class_count(),
        pairs: k * k.saturating_sub(1) / 2,
        mismatches,
    })
}

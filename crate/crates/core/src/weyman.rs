//! Terms of the Weyman complex for a degree vector: Bott dimension rules,
//! Kunneth products, grouped enumeration for star/bipartite systems, and the
//! determinantality test.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::blocks::{binomial_usize, BlockStructure, Multidegree, PolySystem};
use crate::error::{Error, Result};
use crate::formulas::{classify_square, Classification};
use crate::scalar::Coeff;

/// Degree vector selecting a Weyman complex; negative entries allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    /// H^0: polynomials of degree `twist`.
    Primal,
    /// H^n: dual polynomials of degree `-(twist + n + 1)`.
    Dual,
}

/// One block's cohomology factor inside a summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyFactor {
    pub block: usize,
    pub twist: i64,
    pub r: usize,
    pub dim: usize,
    pub kind: FactorKind,
}

impl CohomologyFactor {
    /// Degree of the monomials realizing this factor (primal polynomials or
    /// dual polynomials).
    pub fn poly_degree(&self, n: usize) -> usize {
        match self.kind {
            FactorKind::Primal => self.twist as usize,
            FactorKind::Dual => (-self.twist - n as i64 - 1) as usize,
        }
    }
}

/// Bott rule on P^n with twist `a`: nonzero cohomology only at r = 0
/// (a >= 0, dimension C(a+n, n)) or r = n (a <= -n-1, dimension C(-a-1, n)).
pub fn bott_factor(n: usize, a: i64) -> Option<(usize, usize, FactorKind)> {
    if a >= 0 {
        Some((0, binomial_usize((a as usize) + n, n), FactorKind::Primal))
    } else if a < -(n as i64) {
        Some((n, binomial_usize((-a - 1) as usize, n), FactorKind::Dual))
    } else {
        None
    }
}

/// Which index subsets a summand gathers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WedgeSpec {
    /// Explicit subsets of {0..N}, each strictly increasing.
    Explicit(Vec<Vec<usize>>),
    /// Star grouping: s0 says whether 0 is in every subset, s[j] how many
    /// polynomials are drawn from the group attached to Y_j.
    GroupedStar { s0: bool, s: Vec<usize> },
    /// Bipartite grouping over edge groups (i, j).
    GroupedBipartite { s0: bool, s: Vec<Vec<usize>> },
}

/// How square-system polynomials are gathered into equal-support groups;
/// kept on the descriptor so bases can be expanded later.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Grouping {
    /// groups[j] lists the indices (into the overdetermined system) of the
    /// polynomials attached to Y_j.
    Star { groups: Vec<Vec<usize>> },
    /// groups[i][j] lists the polynomial indices on edge (X_i, Y_j).
    Bipartite { groups: Vec<Vec<Vec<usize>>> },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeymanSummand {
    pub v: i64,
    pub p: usize,
    pub factors: Vec<CohomologyFactor>,
    pub wedge: WedgeSpec,
    /// Number of subsets gathered by `wedge`.
    pub wedge_count: usize,
    /// factor dims x wedge_count.
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeymanComplexDescriptor {
    pub terms: BTreeMap<i64, Vec<WeymanSummand>>,
    pub grouping: Grouping,
}

impl WeymanComplexDescriptor {
    pub fn rank(&self, v: i64) -> usize {
        self.terms
            .get(&v)
            .map_or(0, |ss| ss.iter().map(|s| s.dim).sum())
    }

    pub fn nonzero_vs(&self) -> Vec<i64> {
        self.terms.keys().cloned().collect()
    }

    pub fn summands(&self, v: i64) -> &[WeymanSummand] {
        self.terms.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Expands a summand's wedge spec into explicit sorted subsets, in
    /// ascending lexicographic order.
    pub fn expand_wedge(&self, summand: &WeymanSummand) -> Vec<Vec<usize>> {
        let mut subsets = match (&summand.wedge, &self.grouping) {
            (WedgeSpec::Explicit(list), _) => list.clone(),
            (WedgeSpec::GroupedStar { s0, s }, Grouping::Star { groups }) => {
                expand_grouped(*s0, s, groups)
            }
            (WedgeSpec::GroupedBipartite { s0, s }, Grouping::Bipartite { groups }) => {
                let flat_s: Vec<usize> = s.iter().flatten().cloned().collect();
                let flat_g: Vec<Vec<usize>> = groups.iter().flatten().cloned().collect();
                expand_grouped(*s0, &flat_s, &flat_g)
            }
            _ => panic!("wedge spec does not match descriptor grouping"),
        };
        for sub in &mut subsets {
            sub.sort_unstable();
        }
        subsets.sort();
        subsets
    }
}

fn expand_grouped(s0: bool, s: &[usize], groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![if s0 { vec![0] } else { vec![] }];
    for (j, &count) in s.iter().enumerate() {
        let choices = combinations(&groups[j], count);
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for base in &acc {
            for ch in &choices {
                let mut sub = base.clone();
                sub.extend_from_slice(ch);
                next.push(sub);
            }
        }
        acc = next;
    }
    acc
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

const SUBSET_LIMIT: usize = 20;

/// All nonzero summands K_{v,p}(m) of the Weyman complex of the
/// overdetermined system. Star and bipartite systems are enumerated through
/// their per-group counts; other systems fall back to explicit subsets of
/// {0..N}, guarded at N <= 20.
pub fn complex_terms<T: Coeff>(
    system: &PolySystem<T>,
    m: &DegreeVector,
) -> Result<WeymanComplexDescriptor> {
    let s = &system.structure;
    if m.0.len() != s.q() {
        return Err(Error::ShapeMismatch(format!(
            "degree vector has {} entries, structure has {} blocks",
            m.0.len(),
            s.q()
        )));
    }
    let n = s.n();
    if system.polys.len() != n + 1 {
        return Err(Error::Arity {
            expected: n + 1,
            got: system.polys.len(),
        });
    }
    let degrees = system.degrees();
    let square: Vec<Multidegree> = degrees[1..].to_vec();
    match classify_square(s, &square) {
        Classification::Star(shape) => {
            let mut groups = vec![Vec::new(); s.b()];
            for (k, d) in square.iter().enumerate() {
                let j = star_group_of(s, d).expect("classified star");
                groups[j].push(k + 1);
            }
            debug_assert_eq!(
                groups.iter().map(Vec::len).collect::<Vec<_>>(),
                shape.e().to_vec()
            );
            grouped_complex(s, &degrees[0], m, &groups, GroupKind::Star)
        }
        Classification::Bipartite(_) => {
            let mut groups = vec![vec![Vec::new(); s.b()]; s.a()];
            for (k, d) in square.iter().enumerate() {
                let (i, j) = bipartite_group_of(s, d).expect("classified bipartite");
                groups[i][j].push(k + 1);
            }
            let flat: Vec<Vec<usize>> = groups.iter().flatten().cloned().collect();
            grouped_complex(s, &degrees[0], m, &flat, GroupKind::Bipartite(s.b()))
        }
        Classification::Generic => {
            if n > SUBSET_LIMIT {
                return Err(Error::TooLarge {
                    n,
                    limit: SUBSET_LIMIT,
                });
            }
            subset_complex(s, &degrees, m)
        }
    }
}

/// Explicit-subset enumeration regardless of shape recognition, guarded at
/// N <= 20. Same ranks as `complex_terms`; used as the brute-force route.
pub fn complex_terms_explicit<T: Coeff>(
    system: &PolySystem<T>,
    m: &DegreeVector,
) -> Result<WeymanComplexDescriptor> {
    let s = &system.structure;
    if m.0.len() != s.q() {
        return Err(Error::ShapeMismatch(format!(
            "degree vector has {} entries, structure has {} blocks",
            m.0.len(),
            s.q()
        )));
    }
    let n = s.n();
    if system.polys.len() != n + 1 {
        return Err(Error::Arity {
            expected: n + 1,
            got: system.polys.len(),
        });
    }
    if n > SUBSET_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: SUBSET_LIMIT,
        });
    }
    subset_complex(s, &system.degrees(), m)
}

fn star_group_of(s: &BlockStructure, d: &Multidegree) -> Option<usize> {
    let a = s.a();
    if d.0[..a].iter().any(|&e| e != 1) {
        return None;
    }
    let ys: Vec<usize> = (0..s.b()).filter(|&j| d.0[a + j] != 0).collect();
    match ys.as_slice() {
        [j] if d.0[a + j] == 1 => Some(*j),
        _ => None,
    }
}

fn bipartite_group_of(s: &BlockStructure, d: &Multidegree) -> Option<(usize, usize)> {
    let a = s.a();
    let xs: Vec<usize> = (0..a).filter(|&i| d.0[i] != 0).collect();
    let ys: Vec<usize> = (0..s.b()).filter(|&j| d.0[a + j] != 0).collect();
    match (xs.as_slice(), ys.as_slice()) {
        ([i], [j]) if d.0[*i] == 1 && d.0[a + j] == 1 => Some((*i, *j)),
        _ => None,
    }
}

enum GroupKind {
    Star,
    Bipartite(usize),
}

/// Enumerates summands over per-group counts (s0, s_1..s_G); all subsets
/// with the same counts share the degree sum, hence the twists.
fn grouped_complex(
    s: &BlockStructure,
    d0: &Multidegree,
    m: &DegreeVector,
    groups: &[Vec<usize>],
    kind: GroupKind,
) -> Result<WeymanComplexDescriptor> {
    let q = s.q();
    let group_degrees: Vec<Multidegree> = match &kind {
        GroupKind::Star => (0..groups.len())
            .map(|j| {
                let mut d = vec![1i64; s.a()];
                d.extend((0..s.b()).map(|l| (l == j) as i64));
                Multidegree::new(d)
            })
            .collect(),
        GroupKind::Bipartite(b) => (0..groups.len())
            .map(|g| {
                let (i, j) = (g / b, g % b);
                let mut d = vec![0i64; q];
                d[i] = 1;
                d[s.a() + j] = 1;
                Multidegree::new(d)
            })
            .collect(),
    };
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let mut terms: BTreeMap<i64, Vec<WeymanSummand>> = BTreeMap::new();
    let mut counts = vec![0usize; groups.len()];
    for s0 in [false, true] {
        counts.iter_mut().for_each(|c| *c = 0);
        loop {
            // twist = m - sum of chosen degrees
            let mut twist: Vec<i64> = m.0.clone();
            if s0 {
                for (t, &d) in twist.iter_mut().zip(&d0.0) {
                    *t -= d;
                }
            }
            for (g, &c) in counts.iter().enumerate() {
                for (t, &d) in twist.iter_mut().zip(&group_degrees[g].0) {
                    *t -= d * c as i64;
                }
            }
            let mut factors = Vec::with_capacity(q);
            let mut r_sum = 0usize;
            let mut dim_prod = 1usize;
            for (block, &a) in twist.iter().enumerate() {
                match bott_factor(s.block_dim(block), a) {
                    Some((r, dim, kind)) => {
                        r_sum += r;
                        dim_prod *= dim;
                        factors.push(CohomologyFactor {
                            block,
                            twist: a,
                            r,
                            dim,
                            kind,
                        });
                    }
                    None => {
                        factors.clear();
                        break;
                    }
                }
            }
            if !factors.is_empty() {
                let p = counts.iter().sum::<usize>() + s0 as usize;
                let v = p as i64 - r_sum as i64;
                let wedge_count: usize = counts
                    .iter()
                    .enumerate()
                    .map(|(g, &c)| binomial_usize(sizes[g], c))
                    .product();
                let wedge = match &kind {
                    GroupKind::Star => WedgeSpec::GroupedStar {
                        s0,
                        s: counts.clone(),
                    },
                    GroupKind::Bipartite(b) => WedgeSpec::GroupedBipartite {
                        s0,
                        s: counts.chunks(*b).map(<[usize]>::to_vec).collect(),
                    },
                };
                terms.entry(v).or_default().push(WeymanSummand {
                    v,
                    p,
                    factors,
                    wedge,
                    wedge_count,
                    dim: dim_prod * wedge_count,
                });
            }
            // next counts tuple
            let mut g = groups.len();
            loop {
                if g == 0 {
                    break;
                }
                g -= 1;
                if counts[g] < sizes[g] {
                    counts[g] += 1;
                    break;
                }
                counts[g] = 0;
            }
            if counts.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    let grouping = match kind {
        GroupKind::Star => Grouping::Star {
            groups: groups.to_vec(),
        },
        GroupKind::Bipartite(b) => Grouping::Bipartite {
            groups: groups.chunks(b).map(<[Vec<usize>]>::to_vec).collect(),
        },
    };
    Ok(WeymanComplexDescriptor { terms, grouping })
}

/// Explicit enumeration over all subsets of {0..N}; subsets sharing the
/// degree sum are gathered into one summand.
fn subset_complex(
    s: &BlockStructure,
    degrees: &[Multidegree],
    m: &DegreeVector,
) -> Result<WeymanComplexDescriptor> {
    let n1 = degrees.len();
    let mut by_sum: BTreeMap<(usize, Vec<i64>), Vec<Vec<usize>>> = BTreeMap::new();
    for mask in 0u32..(1u32 << n1) {
        let subset: Vec<usize> = (0..n1).filter(|&k| mask >> k & 1 == 1).collect();
        let mut sum = vec![0i64; s.q()];
        for &k in &subset {
            for (t, &d) in sum.iter_mut().zip(&degrees[k].0) {
                *t += d;
            }
        }
        by_sum.entry((subset.len(), sum)).or_default().push(subset);
    }
    let mut terms: BTreeMap<i64, Vec<WeymanSummand>> = BTreeMap::new();
    for ((p, sum), subsets) in by_sum {
        let twist: Vec<i64> = m.0.iter().zip(&sum).map(|(&mi, &si)| mi - si).collect();
        let mut factors = Vec::with_capacity(s.q());
        let mut r_sum = 0usize;
        let mut dim_prod = 1usize;
        let mut vanished = false;
        for (block, &a) in twist.iter().enumerate() {
            match bott_factor(s.block_dim(block), a) {
                Some((r, dim, kind)) => {
                    r_sum += r;
                    dim_prod *= dim;
                    factors.push(CohomologyFactor {
                        block,
                        twist: a,
                        r,
                        dim,
                        kind,
                    });
                }
                None => {
                    vanished = true;
                    break;
                }
            }
        }
        if vanished {
            continue;
        }
        let v = p as i64 - r_sum as i64;
        let wedge_count = subsets.len();
        terms.entry(v).or_default().push(WeymanSummand {
            v,
            p,
            factors,
            wedge: WedgeSpec::Explicit(subsets),
            wedge_count,
            dim: dim_prod * wedge_count,
        });
    }
    Ok(WeymanComplexDescriptor {
        terms,
        grouping: Grouping::None,
    })
}

/// A descriptor is determinantal when exactly K_1 and K_0 are nonzero with
/// equal ranks and each concentrated at a single p with p_1 = p_0 + 1.
pub fn is_determinantal(desc: &WeymanComplexDescriptor) -> bool {
    if desc.nonzero_vs() != vec![0, 1] {
        return false;
    }
    let single_p = |v: i64| -> Option<usize> {
        let ps: Vec<usize> = desc.summands(v).iter().map(|s| s.p).collect();
        match ps.split_first() {
            Some((&first, rest)) if rest.iter().all(|&p| p == first) => Some(first),
            _ => None,
        }
    };
    match (single_p(0), single_p(1)) {
        (Some(p0), Some(p1)) => p1 == p0 + 1 && desc.rank(0) == desc.rank(1),
        _ => false,
    }
}

/// Dual degree vector: sum of all multidegrees minus (n_1+1, ..., n_q+1)
/// minus m. Ranks satisfy rank_v(m) = rank_{1-v}(dual).
pub fn dual_degree_vector(
    m: &DegreeVector,
    degrees: &[Multidegree],
    structure: &BlockStructure,
) -> DegreeVector {
    let mut out = vec![0i64; structure.q()];
    for d in degrees {
        for (o, &e) in out.iter_mut().zip(&d.0) {
            *o += e;
        }
    }
    for (i, o) in out.iter_mut().enumerate() {
        *o -= structure.block_dim(i) as i64 + 1 + m.0[i];
    }
    DegreeVector(out)
}

/// Rank as exact integer for comparisons against Bezout-bound arithmetic.
pub fn rank_biguint(desc: &WeymanComplexDescriptor, v: i64) -> num::BigUint {
    desc.summands(v)
        .iter()
        .map(|s| {
            s.factors
                .iter()
                .fold(num::BigUint::from(s.wedge_count), |acc, f| {
                    acc * num::BigUint::from(f.dim)
                })
        })
        .fold(num::BigUint::from(0u32), |a, b| a + b)
}

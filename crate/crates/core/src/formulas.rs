//! Star and bipartite shapes: recognition, admissible f0 supports,
//! determinantal data, and the closed-form degree vectors, solution counts
//! and matrix sizes attached to them.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive};
use std::collections::BTreeSet;

use crate::blocks::{binomial, BlockStructure, Multidegree};
use crate::error::{Error, Result};
use crate::weyman::DegreeVector;

/// A square star multilinear shape: every polynomial is multilinear in all
/// X-blocks and exactly one Y-block; e[j] counts the polynomials on Y_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarShape {
    structure: BlockStructure,
    e: Vec<usize>,
}

impl StarShape {
    pub fn new(structure: BlockStructure, e: Vec<usize>) -> Result<Self> {
        if e.len() != structure.b() {
            return Err(Error::InvalidShape(
                "star shape needs one count per Y-block".into(),
            ));
        }
        if e.iter().sum::<usize>() != structure.n() {
            return Err(Error::InvalidShape(format!(
                "counts sum to {}, square size is {}",
                e.iter().sum::<usize>(),
                structure.n()
            )));
        }
        if e.iter().zip(structure.beta()).any(|(&ej, &bj)| ej < bj) {
            return Err(Error::InvalidShape("every E_j must be >= beta_j".into()));
        }
        Ok(StarShape { structure, e })
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn e(&self) -> &[usize] {
        &self.e
    }

    /// Multidegrees of the square system, group by group.
    pub fn square_degrees(&self) -> Vec<Multidegree> {
        let s = &self.structure;
        let mut out = Vec::with_capacity(s.n());
        for (j, &ej) in self.e.iter().enumerate() {
            let mut d = vec![1i64; s.a()];
            d.extend((0..s.b()).map(|l| (l == j) as i64));
            out.extend(std::iter::repeat_n(Multidegree::new(d), ej));
        }
        out
    }
}

/// A square bipartite bilinear shape: e[i][j] counts the polynomials
/// bilinear in (X_i, Y_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteShape {
    structure: BlockStructure,
    e: Vec<Vec<usize>>,
}

impl BipartiteShape {
    pub fn new(structure: BlockStructure, e: Vec<Vec<usize>>) -> Result<Self> {
        if e.len() != structure.a() || e.iter().any(|row| row.len() != structure.b()) {
            return Err(Error::InvalidShape(
                "bipartite counts must form an A x B matrix".into(),
            ));
        }
        let total: usize = e.iter().flatten().sum();
        if total != structure.n() {
            return Err(Error::InvalidShape(format!(
                "counts sum to {total}, square size is {}",
                structure.n()
            )));
        }
        for (i, row) in e.iter().enumerate() {
            if row.iter().sum::<usize>() < structure.alpha()[i] {
                return Err(Error::InvalidShape(format!(
                    "row sum of X_{} below alpha_{}",
                    i + 1,
                    i + 1
                )));
            }
        }
        for j in 0..structure.b() {
            let col: usize = e.iter().map(|row| row[j]).sum();
            if col < structure.beta()[j] {
                return Err(Error::InvalidShape(format!(
                    "column sum of Y_{} below beta_{}",
                    j + 1,
                    j + 1
                )));
            }
        }
        Ok(BipartiteShape { structure, e })
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn e(&self) -> &[Vec<usize>] {
        &self.e
    }

    pub fn square_degrees(&self) -> Vec<Multidegree> {
        let s = &self.structure;
        let mut out = Vec::with_capacity(s.n());
        for (i, row) in self.e.iter().enumerate() {
            for (j, &eij) in row.iter().enumerate() {
                let mut d = vec![0i64; s.q()];
                d[i] = 1;
                d[s.a() + j] = 1;
                out.extend(std::iter::repeat_n(Multidegree::new(d), eij));
            }
        }
        out
    }
}

/// Result of classifying a square system from its multidegrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Star(StarShape),
    Bipartite(BipartiteShape),
    Generic,
}

/// Classifies a square system's multidegrees as star, bipartite, or generic.
/// All indices are 0-based.
pub fn classify_square(structure: &BlockStructure, degrees: &[Multidegree]) -> Classification {
    if degrees.len() != structure.n() || degrees.iter().any(|d| d.0.len() != structure.q()) {
        return Classification::Generic;
    }
    let a = structure.a();
    let star_group = |d: &Multidegree| -> Option<usize> {
        if d.0[..a].iter().any(|&e| e != 1) {
            return None;
        }
        let ys: Vec<usize> = (a..d.0.len()).filter(|&l| d.0[l] != 0).collect();
        match ys.as_slice() {
            [l] if d.0[*l] == 1 => Some(*l - a),
            _ => None,
        }
    };
    if let Some(groups) = degrees.iter().map(star_group).collect::<Option<Vec<_>>>() {
        let mut e = vec![0usize; structure.b()];
        for j in groups {
            e[j] += 1;
        }
        if let Ok(shape) = StarShape::new(structure.clone(), e) {
            return Classification::Star(shape);
        }
    }
    let bi_group = |d: &Multidegree| -> Option<(usize, usize)> {
        let xs: Vec<usize> = (0..a).filter(|&i| d.0[i] != 0).collect();
        let ys: Vec<usize> = (a..d.0.len()).filter(|&l| d.0[l] != 0).collect();
        match (xs.as_slice(), ys.as_slice()) {
            ([i], [l]) if d.0[*i] == 1 && d.0[*l] == 1 => Some((*i, *l - a)),
            _ => None,
        }
    };
    if let Some(groups) = degrees.iter().map(bi_group).collect::<Option<Vec<_>>>() {
        let mut e = vec![vec![0usize; structure.b()]; a];
        for (i, j) in groups {
            e[i][j] += 1;
        }
        if let Ok(shape) = BipartiteShape::new(structure.clone(), e) {
            return Classification::Bipartite(shape);
        }
    }
    Classification::Generic
}

/// Admissible f0 supports. Star systems use the first four variants,
/// bipartite systems the last three. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F0Case {
    /// f0 multilinear in all X-blocks.
    CenterVertex,
    /// f0 linear in Y_j.
    OuterVertex(usize),
    /// f0 multilinear in all X-blocks and Y_j.
    Edge(usize),
    /// f0 multilinear in all X-blocks, Y_j1 and Y_j2.
    Triangle(usize, usize),
    /// f0 linear in X_i (bipartite).
    XOnly(usize),
    /// f0 linear in Y_j (bipartite).
    YOnly(usize),
    /// f0 bilinear in (X_i, Y_j) (bipartite).
    XY(usize, usize),
}

impl F0Case {
    pub fn d0(&self, structure: &BlockStructure) -> Result<Multidegree> {
        let (a, b) = (structure.a(), structure.b());
        let mut d = vec![0i64; structure.q()];
        let check_j = |j: usize| -> Result<()> {
            if j < b {
                Ok(())
            } else {
                Err(Error::InvalidData(format!("Y index {j} out of range")))
            }
        };
        let check_i = |i: usize| -> Result<()> {
            if i < a {
                Ok(())
            } else {
                Err(Error::InvalidData(format!("X index {i} out of range")))
            }
        };
        match *self {
            F0Case::CenterVertex => d[..a].fill(1),
            F0Case::OuterVertex(j) => {
                check_j(j)?;
                d[a + j] = 1;
            }
            F0Case::Edge(j) => {
                check_j(j)?;
                d[..a].fill(1);
                d[a + j] = 1;
            }
            F0Case::Triangle(j1, j2) => {
                check_j(j1)?;
                check_j(j2)?;
                if j1 == j2 {
                    return Err(Error::InvalidData("triangle needs two distinct Y-blocks".into()));
                }
                d[..a].fill(1);
                d[a + j1] = 1;
                d[a + j2] = 1;
            }
            F0Case::XOnly(i) => {
                check_i(i)?;
                d[i] = 1;
            }
            F0Case::YOnly(j) => {
                check_j(j)?;
                d[a + j] = 1;
            }
            F0Case::XY(i, j) => {
                check_i(i)?;
                check_j(j)?;
                d[i] = 1;
                d[a + j] = 1;
            }
        }
        Ok(Multidegree::new(d))
    }
}

/// True iff d0 solves the star admissibility inequalities: entries in
/// {0,1}, all X entries equal, and sum of Y entries <= 1 + d_{0,X}.
pub fn validate_star_d0(structure: &BlockStructure, d0: &Multidegree) -> bool {
    if d0.0.len() != structure.q() || d0.0.iter().any(|&e| !(0..=1).contains(&e)) {
        return false;
    }
    let a = structure.a();
    let dx = d0.0[..a].first().copied().unwrap_or(0);
    if d0.0[..a].iter().any(|&e| e != dx) {
        return false;
    }
    let sy: i64 = d0.0[a..].iter().sum();
    sy <= 1 + dx
}

/// True iff d0 solves the bipartite admissibility inequalities: entries in
/// {0,1}, at most one X entry and at most one Y entry set.
pub fn validate_bipartite_d0(structure: &BlockStructure, d0: &Multidegree) -> bool {
    if d0.0.len() != structure.q() || d0.0.iter().any(|&e| !(0..=1).contains(&e)) {
        return false;
    }
    let a = structure.a();
    d0.0[..a].iter().sum::<i64>() <= 1 && d0.0[a..].iter().sum::<i64>() <= 1
}

/// A triplet (P, D, c) plus permutation sigma parameterizing the star
/// determinantal formulas. P and D partition the Y-block indices (0-based);
/// sigma is a permutation of the X-block indices (`sigma[i]` is the 0-based
/// rank of block i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminantalData {
    pub p: BTreeSet<usize>,
    pub d: BTreeSet<usize>,
    pub c: usize,
    pub sigma: Vec<usize>,
}

impl DeterminantalData {
    pub fn new(p: BTreeSet<usize>, d: BTreeSet<usize>, c: usize, sigma: Vec<usize>) -> Self {
        DeterminantalData { p, d, c, sigma }
    }

    pub fn with_identity(p: BTreeSet<usize>, d: BTreeSet<usize>, c: usize, a: usize) -> Self {
        DeterminantalData {
            p,
            d,
            c,
            sigma: (0..a).collect(),
        }
    }

    /// The Sylvester data ({1..B}, {}, 0) with identity permutation.
    pub fn sylvester(structure: &BlockStructure) -> Self {
        DeterminantalData {
            p: (0..structure.b()).collect(),
            d: BTreeSet::new(),
            c: 0,
            sigma: (0..structure.a()).collect(),
        }
    }

    /// The dual data (D, P, A - c) with the reversed permutation.
    pub fn dual(&self, a: usize) -> Self {
        DeterminantalData {
            p: self.d.clone(),
            d: self.p.clone(),
            c: a - self.c,
            sigma: self.sigma.iter().map(|&r| a - 1 - r).collect(),
        }
    }

    fn validate(&self, structure: &BlockStructure, d0: &Multidegree) -> Result<()> {
        let (a, b) = (structure.a(), structure.b());
        let all: BTreeSet<usize> = (0..b).collect();
        if self.p.intersection(&self.d).count() != 0
            || self.p.union(&self.d).cloned().collect::<BTreeSet<_>>() != all
        {
            return Err(Error::InvalidData("P and D must partition the Y-blocks".into()));
        }
        let mut seen = vec![false; a];
        if self.sigma.len() != a || self.sigma.iter().any(|&r| r >= a || std::mem::replace(&mut seen[r], true)) {
            return Err(Error::InvalidData("sigma must be a permutation of the X-blocks".into()));
        }
        if !triplet_admissible(structure, d0, &self.p, &self.d, self.c) {
            return Err(Error::InvalidData(format!(
                "(P={:?}, D={:?}, c={}) is not determinantal data for d0={:?}",
                self.p, self.d, self.c, d0.0
            )));
        }
        Ok(())
    }
}

/// The case table deciding whether (P, D, c) is determinantal data for d0.
fn triplet_admissible(
    structure: &BlockStructure,
    d0: &Multidegree,
    p: &BTreeSet<usize>,
    d: &BTreeSet<usize>,
    c: usize,
) -> bool {
    let a = structure.a();
    if c > a {
        return false;
    }
    let sum_over = |set: &BTreeSet<usize>| -> i64 { set.iter().map(|&j| d0.0[a + j]).sum() };
    let sum_p = sum_over(p);
    let sum_d = sum_over(d);
    if sum_p > 1 || sum_d > 1 {
        return false;
    }
    let all_x_one = d0.0[..a].iter().all(|&e| e == 1);
    if all_x_one {
        return true;
    }
    // all X entries are zero for valid star d0
    (c == 0 && sum_p == 0) || (c == a && sum_d == 0)
}

/// All (P, D, c) triplets that are determinantal data for d0, by brute
/// force over the 2^B partitions and c in 0..=A.
pub fn enumerate_determinantal_data(
    shape: &StarShape,
    d0: &Multidegree,
) -> Result<Vec<(BTreeSet<usize>, BTreeSet<usize>, usize)>> {
    let s = shape.structure();
    if !validate_star_d0(s, d0) {
        return Err(Error::InvalidData(format!(
            "d0 = {:?} is not an admissible star support",
            d0.0
        )));
    }
    let (a, b) = (s.a(), s.b());
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << b) {
        let p: BTreeSet<usize> = (0..b).filter(|&j| mask >> j & 1 == 1).collect();
        let d: BTreeSet<usize> = (0..b).filter(|&j| mask >> j & 1 == 0).collect();
        for c in 0..=a {
            if triplet_admissible(s, d0, &p, &d, c) {
                out.push((p.clone(), d.clone(), c));
            }
        }
    }
    Ok(out)
}

/// Degree vector and cohomology offset omega of the star determinantal
/// formula for (d0, data).
pub fn star_degree_vector(
    shape: &StarShape,
    d0: &Multidegree,
    data: &DeterminantalData,
) -> Result<(DegreeVector, usize)> {
    let s = shape.structure();
    if !validate_star_d0(s, d0) {
        return Err(Error::InvalidData(format!(
            "d0 = {:?} is not an admissible star support",
            d0.0
        )));
    }
    data.validate(s, d0)?;
    let (a, alpha, beta) = (s.a(), s.alpha(), s.beta());
    let beta_d: i64 = data.d.iter().map(|&j| beta[j] as i64).sum();
    let mut m = vec![0i64; s.q()];
    for i in 0..a {
        let prefix: i64 = (0..a)
            .filter(|&k| data.sigma[k] < data.sigma[i])
            .map(|k| alpha[k] as i64)
            .sum();
        m[i] = if data.sigma[i] < data.c {
            beta_d + prefix - 1
        } else {
            beta_d + prefix + d0.0[i]
        };
    }
    for j in 0..s.b() {
        m[a + j] = if data.d.contains(&j) {
            -1
        } else {
            shape.e()[j] as i64 - beta[j] as i64 + d0.0[a + j]
        };
    }
    let omega = (0..a)
        .filter(|&i| data.sigma[i] < data.c)
        .map(|i| alpha[i])
        .sum::<usize>()
        + data.d.iter().map(|&j| beta[j]).sum::<usize>();
    Ok((DegreeVector(m), omega))
}

/// Degree vector of the bipartite determinantal formula:
/// m_{X_i} = sum_j E_{i,j} - alpha_i + d_{0,X_i}, m_{Y_j} = -1.
pub fn bipartite_degree_vector(shape: &BipartiteShape, d0: &Multidegree) -> Result<DegreeVector> {
    let s = shape.structure();
    if !validate_bipartite_d0(s, d0) {
        return Err(Error::InvalidData(format!(
            "d0 = {:?} is not an admissible bipartite support",
            d0.0
        )));
    }
    let a = s.a();
    let mut m = vec![0i64; s.q()];
    for i in 0..a {
        let row: i64 = shape.e()[i].iter().map(|&e| e as i64).sum();
        m[i] = row - s.alpha()[i] as i64 + d0.0[i];
    }
    for j in 0..s.b() {
        m[a + j] = -1;
    }
    Ok(DegreeVector(m))
}

/// Expected number of solutions of the square star system:
/// (sum alpha)! / prod alpha! * prod C(E_j, beta_j).
pub fn star_solution_count(shape: &StarShape) -> BigUint {
    let s = shape.structure();
    let sum_alpha: usize = s.alpha().iter().sum();
    let mut count = factorial(sum_alpha);
    for &ai in s.alpha() {
        count /= factorial(ai);
    }
    for (j, &ej) in shape.e().iter().enumerate() {
        count *= binomial(ej, s.beta()[j]);
    }
    count
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Matrix size (= resultant degree) of the star determinantal formula for
/// the given f0 case, from the closed form
/// Upsilon * (1 + d_{0,X} * sum(alpha) + (1 + sum(alpha)) * sum_j d_{0,Y_j} beta_j / (E_j - beta_j + 1)).
/// Evaluated in exact rationals; the fractions must cancel.
pub fn star_matrix_size(shape: &StarShape, case: &F0Case) -> Result<BigUint> {
    let s = shape.structure();
    let d0 = case.d0(s)?;
    if !validate_star_d0(s, &d0) {
        return Err(Error::InvalidData(format!("{case:?} is not a star f0 case")));
    }
    let a = s.a();
    let upsilon = BigRational::from_integer(BigInt::from(star_solution_count(shape)));
    let sum_alpha: i64 = s.alpha().iter().map(|&x| x as i64).sum();
    let dx = d0.0[..a].first().copied().unwrap_or(0);
    let mut total = BigRational::from_integer(BigInt::from(1 + dx * sum_alpha));
    for j in 0..s.b() {
        if d0.0[a + j] == 1 {
            let beta_j = s.beta()[j] as i64;
            let e_j = shape.e()[j] as i64;
            let frac = BigRational::new(BigInt::from(beta_j), BigInt::from(e_j - beta_j + 1));
            total += BigRational::from_integer(BigInt::from(1 + sum_alpha)) * frac;
        }
    }
    let size = upsilon * total;
    if !size.is_integer() || size.is_negative() {
        return Err(Error::InvalidShape(format!(
            "matrix size {size} is not a nonnegative integer"
        )));
    }
    Ok(size.to_integer().to_biguint().expect("nonnegative"))
}

pub fn biguint_to_usize(v: &BigUint) -> usize {
    v.to_usize().expect("value exceeds usize")
}

//! Variable-block layouts, multidegrees, monomial enumeration, and the
//! multihomogeneous Bezout machinery.
//!
//! A system lives on a product of projective spaces split into X-blocks and
//! Y-blocks. Block `X_i` has `alpha_i + 1` variables, block `Y_j` has
//! `beta_j + 1`. All counting here is exact.

use num::bigint::BigUint;
use num::traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// The variable-block layout: `A` X-blocks of projective dimensions `alpha`
/// and `B` Y-blocks of dimensions `beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    alpha: Vec<usize>,
    beta: Vec<usize>,
}

impl BlockStructure {
    pub fn new(alpha: Vec<usize>, beta: Vec<usize>) -> Result<Self> {
        if alpha.is_empty() && beta.is_empty() {
            return Err(Error::InvalidShape("need at least one block".into()));
        }
        if alpha.iter().chain(&beta).any(|&n| n == 0) {
            return Err(Error::InvalidShape(
                "block dimensions must be positive".into(),
            ));
        }
        Ok(BlockStructure { alpha, beta })
    }

    pub fn a(&self) -> usize {
        self.alpha.len()
    }

    pub fn b(&self) -> usize {
        self.beta.len()
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    /// Number of blocks, q = A + B.
    pub fn q(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    /// Square-system size N = sum(alpha) + sum(beta).
    pub fn n(&self) -> usize {
        self.alpha.iter().sum::<usize>() + self.beta.iter().sum::<usize>()
    }

    /// Projective dimension of block `i` in the order X_1..X_A, Y_1..Y_B.
    pub fn block_dim(&self, i: usize) -> usize {
        if i < self.alpha.len() {
            self.alpha[i]
        } else {
            self.beta[i - self.alpha.len()]
        }
    }

    pub fn block_dims(&self) -> Vec<usize> {
        (0..self.q()).map(|i| self.block_dim(i)).collect()
    }
}

/// Per-block degrees of one polynomial, ordered X_1..X_A, Y_1..Y_B.
/// Polynomial multidegrees are nonnegative; degree vectors selecting Weyman
/// complexes live in `weyman::DegreeVector` where negatives are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn new(entries: Vec<i64>) -> Self {
        Multidegree(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_structure(&self, s: &BlockStructure) -> Result<()> {
        if self.0.len() != s.q() {
            return Err(Error::ShapeMismatch(format!(
                "multidegree has {} entries, structure has {} blocks",
                self.0.len(),
                s.q()
            )));
        }
        Ok(())
    }
}

/// Exponents of one monomial, one tuple per block; block `i` contributes
/// `n_i + 1` nonnegative entries summing to the block degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExponentVector(pub Vec<Vec<u16>>);

impl ExponentVector {
    pub fn block(&self, i: usize) -> &[u16] {
        &self.0[i]
    }

    pub fn degree(&self) -> Multidegree {
        Multidegree(
            self.0
                .iter()
                .map(|b| b.iter().map(|&e| e as i64).sum())
                .collect(),
        )
    }
}

/// Sparse coefficient table; absent keys mean zero.
pub type CoeffTable<T> = BTreeMap<ExponentVector, T>;

/// One polynomial: a multidegree plus an optional coefficient table
/// (absent table = generic/symbolic coefficients).
#[derive(Clone, Debug)]
pub struct Poly<T> {
    pub degree: Multidegree,
    pub coeffs: Option<CoeffTable<T>>,
}

impl<T: Coeff> Poly<T> {
    pub fn symbolic(degree: Multidegree) -> Self {
        Poly {
            degree,
            coeffs: None,
        }
    }

    pub fn with_coeffs(degree: Multidegree, coeffs: CoeffTable<T>) -> Self {
        Poly {
            degree,
            coeffs: Some(coeffs),
        }
    }

    pub fn coeff(&self, key: &ExponentVector) -> T {
        self.coeffs
            .as_ref()
            .and_then(|t| t.get(key).cloned())
            .unwrap_or_else(T::zero)
    }
}

/// A polynomial system on a common block structure. For overdetermined
/// systems the distinguished polynomial f_0 sits at index 0.
#[derive(Clone, Debug)]
pub struct PolySystem<T> {
    pub structure: BlockStructure,
    pub polys: Vec<Poly<T>>,
}

impl<T: Coeff> PolySystem<T> {
    pub fn new(structure: BlockStructure, polys: Vec<Poly<T>>) -> Result<Self> {
        for p in &polys {
            p.degree.check_structure(&structure)?;
            if let Some(table) = &p.coeffs {
                for key in table.keys() {
                    if !exponent_matches(&structure, key, &p.degree) {
                        return Err(Error::ShapeMismatch(format!(
                            "coefficient key {key:?} not in the support of degree {:?}",
                            p.degree
                        )));
                    }
                }
            }
        }
        Ok(PolySystem { structure, polys })
    }

    pub fn degrees(&self) -> Vec<Multidegree> {
        self.polys.iter().map(|p| p.degree.clone()).collect()
    }

    pub fn is_numeric(&self) -> bool {
        self.polys.iter().all(|p| p.coeffs.is_some())
    }

    /// Scales every coefficient of polynomial `k` by `factor`.
    pub fn scale_poly(&self, k: usize, factor: &T) -> PolySystem<T> {
        let mut out = self.clone();
        if let Some(table) = &mut out.polys[k].coeffs {
            for v in table.values_mut() {
                *v = v.clone() * factor.clone();
            }
        }
        out
    }
}

fn exponent_matches(s: &BlockStructure, e: &ExponentVector, d: &Multidegree) -> bool {
    e.0.len() == s.q()
        && e.0
            .iter()
            .enumerate()
            .all(|(i, b)| b.len() == s.block_dim(i) + 1)
        && e.degree() == *d
}

/// All exponent tuples of length `vars` summing to `deg`, in the canonical
/// order: lexicographically descending, so the 0-indexed variable is most
/// significant. For degree 2 in two variables: (2,0), (1,1), (0,2).
fn block_monomials(deg: i64, vars: usize) -> Vec<Vec<u16>> {
    if deg < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; vars];
    fn rec(deg: u16, pos: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos + 1 == cur.len() {
            cur[pos] = deg;
            out.push(cur.clone());
            return;
        }
        for e in (0..=deg).rev() {
            cur[pos] = e;
            rec(deg - e, pos + 1, cur, out);
        }
    }
    rec(deg as u16, 0, &mut cur, &mut out);
    out
}

/// The monomial support A(d): every exponent vector of multidegree `d`, in
/// canonical order (block X_1 most significant). Empty if any entry of `d`
/// is negative.
pub fn monomial_basis(structure: &BlockStructure, d: &Multidegree) -> Result<Vec<ExponentVector>> {
    d.check_structure(structure)?;
    if d.0.iter().any(|&e| e < 0) {
        return Ok(Vec::new());
    }
    let per_block: Vec<Vec<Vec<u16>>> = d
        .0
        .iter()
        .enumerate()
        .map(|(i, &deg)| block_monomials(deg, structure.block_dim(i) + 1))
        .collect();
    let mut out = vec![ExponentVector(Vec::new())];
    for block in &per_block {
        let mut next = Vec::with_capacity(out.len() * block.len());
        for prefix in &out {
            for b in block {
                let mut e = prefix.clone();
                e.0.push(b.clone());
                next.push(e);
            }
        }
        out = next;
    }
    Ok(out)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial exceeds u128 range")
            / (i as u128 + 1);
    }
    usize::try_from(acc).expect("binomial exceeds usize range")
}

/// Dense polynomial in q variables truncated at the componentwise bound
/// `caps`; the carrier for Bezout-bound coefficient extraction.
struct Truncated {
    caps: Vec<usize>,
    strides: Vec<usize>,
    coeffs: Vec<BigUint>,
}

impl Truncated {
    fn one(caps: Vec<usize>) -> Self {
        let mut strides = vec![0; caps.len()];
        let mut acc = 1usize;
        for (i, &c) in caps.iter().enumerate().rev() {
            strides[i] = acc;
            acc *= c + 1;
        }
        let mut coeffs = vec![BigUint::zero(); acc];
        coeffs[0] = BigUint::one();
        Truncated {
            caps,
            strides,
            coeffs,
        }
    }

    /// Multiplies by the linear form sum_i form[i] * Z_i, truncating.
    fn mul_linear(&mut self, form: &[i64]) {
        let mut next = vec![BigUint::zero(); self.coeffs.len()];
        let mut exp = vec![0usize; self.caps.len()];
        for (idx, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                for (i, &f) in form.iter().enumerate() {
                    if f > 0 && exp[i] < self.caps[i] {
                        next[idx + self.strides[i]] += c * BigUint::from(f as u64);
                    }
                }
            }
            // advance the mixed-radix exponent counter
            for i in (0..exp.len()).rev() {
                if exp[i] < self.caps[i] {
                    exp[i] += 1;
                    break;
                }
                exp[i] = 0;
            }
        }
        self.coeffs = next;
    }

    fn top_coeff(&self) -> BigUint {
        self.coeffs.last().cloned().unwrap_or_else(BigUint::zero)
    }
}

/// Fast carrier over u128 with overflow detection; `None` means fall back
/// to arbitrary precision.
fn mhb_u128(caps: &[usize], degrees: &[Multidegree]) -> Option<u128> {
    let mut strides = vec![0usize; caps.len()];
    let mut total = 1usize;
    for (i, &c) in caps.iter().enumerate().rev() {
        strides[i] = total;
        total *= c + 1;
    }
    let mut cur = vec![0u128; total];
    cur[0] = 1;
    let mut next = vec![0u128; total];
    for d in degrees {
        next.iter_mut().for_each(|v| *v = 0);
        let mut exp = vec![0usize; caps.len()];
        for idx in 0..total {
            let c = cur[idx];
            if c != 0 {
                for (i, &f) in d.0.iter().enumerate() {
                    if f > 0 && exp[i] < caps[i] {
                        let slot = &mut next[idx + strides[i]];
                        *slot = slot.checked_add(c.checked_mul(f as u128)?)?;
                    }
                }
            }
            for i in (0..exp.len()).rev() {
                if exp[i] < caps[i] {
                    exp[i] += 1;
                    break;
                }
                exp[i] = 0;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur.last().copied()
}

/// Multihomogeneous Bezout bound of a square system: the coefficient of
/// `prod_i Z_i^{n_i}` in `prod_k (sum_i d_{k,i} Z_i)`, computed exactly
/// (u128 fast path, arbitrary precision on overflow).
pub fn mhb(structure: &BlockStructure, degrees: &[Multidegree]) -> Result<BigUint> {
    let n = structure.n();
    if degrees.len() != n {
        return Err(Error::Arity {
            expected: n,
            got: degrees.len(),
        });
    }
    for d in degrees {
        d.check_structure(structure)?;
        if d.0.iter().any(|&e| e < 0) {
            return Err(Error::ShapeMismatch(
                "mhb requires nonnegative multidegrees".into(),
            ));
        }
    }
    if let Some(v) = mhb_u128(&structure.block_dims(), degrees) {
        return Ok(BigUint::from(v));
    }
    let mut poly = Truncated::one(structure.block_dims());
    for d in degrees {
        poly.mul_linear(&d.0);
    }
    Ok(poly.top_coeff())
}

/// Per-polynomial and total degree of the resultant of an overdetermined
/// system: entry k is the Bezout bound of the other N degrees.
pub fn resultant_degree(
    structure: &BlockStructure,
    degrees: &[Multidegree],
) -> Result<(BigUint, Vec<BigUint>)> {
    let n = structure.n();
    if degrees.len() != n + 1 {
        return Err(Error::Arity {
            expected: n + 1,
            got: degrees.len(),
        });
    }
    // removing equal multidegrees gives equal bounds; compute once each
    let mut cache: BTreeMap<&Multidegree, BigUint> = BTreeMap::new();
    let mut per_poly = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let value = match cache.get(&degrees[k]) {
            Some(v) => v.clone(),
            None => {
                let rest: Vec<Multidegree> = degrees
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .map(|(_, d)| d.clone())
                    .collect();
                let v = mhb(structure, &rest)?;
                cache.insert(&degrees[k], v.clone());
                v
            }
        };
        per_poly.push(value);
    }
    let total = per_poly.iter().fold(BigUint::zero(), |a, b| a + b);
    Ok((total, per_poly))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn monomial_basis_one_block_degree_two() {
        let s = BlockStructure::new(vec![1], vec![]).unwrap();
        let basis = monomial_basis(&s, &Multidegree::new(vec![2])).unwrap();
        let exps: Vec<Vec<u16>> = basis.into_iter().map(|e| e.0[0].clone()).collect();
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn monomial_basis_negative_degree_is_empty() {
        let s = BlockStructure::new(vec![1, 1], vec![1]).unwrap();
        let basis = monomial_basis(&s, &Multidegree::new(vec![1, -1, 0])).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn monomial_basis_star_block_product() {
        let s = BlockStructure::new(vec![1, 1], vec![1, 1]).unwrap();
        let basis = monomial_basis(&s, &Multidegree::new(vec![1, 1, 1, 0])).unwrap();
        assert_eq!(basis.len(), 8);
    }

    #[test]
    fn monomial_basis_cardinality_formula() {
        let s = BlockStructure::new(vec![2], vec![1, 2]).unwrap();
        for d0 in 0..3i64 {
            for d1 in 0..3i64 {
                for d2 in 0..3i64 {
                    let d = Multidegree::new(vec![d0, d1, d2]);
                    let expect = binomial((d0 + 2) as usize, 2)
                        * binomial((d1 + 1) as usize, 1)
                        * binomial((d2 + 2) as usize, 2);
                    let basis = monomial_basis(&s, &d).unwrap();
                    assert_eq!(big(basis.len() as u64), expect);
                }
            }
        }
    }

    #[test]
    fn mhb_star_example() {
        let s = BlockStructure::new(vec![1, 1], vec![1, 1]).unwrap();
        let d1 = Multidegree::new(vec![1, 1, 1, 0]);
        let d2 = Multidegree::new(vec![1, 1, 0, 1]);
        let degrees = vec![d1.clone(), d1, d2.clone(), d2];
        assert_eq!(mhb(&s, &degrees).unwrap(), big(8));
    }

    #[test]
    fn mhb_two_parameter_shape() {
        let s = BlockStructure::new(vec![2], vec![1, 1]).unwrap();
        let d1 = Multidegree::new(vec![1, 1, 0]);
        let d2 = Multidegree::new(vec![1, 0, 1]);
        let degrees = vec![d1.clone(), d1, d2.clone(), d2];
        assert_eq!(mhb(&s, &degrees).unwrap(), big(4));
    }

    #[test]
    fn mhb_linear_forms() {
        let s = BlockStructure::new(vec![3], vec![]).unwrap();
        let degrees = vec![Multidegree::new(vec![1]); 3];
        assert_eq!(mhb(&s, &degrees).unwrap(), big(1));
    }

    #[test]
    fn mhb_wrong_count() {
        let s = BlockStructure::new(vec![1], vec![]).unwrap();
        assert!(matches!(
            mhb(&s, &vec![Multidegree::new(vec![1]); 3]),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn degree_length_mismatch_is_shape_error() {
        let s = BlockStructure::new(vec![1, 1], vec![1]).unwrap();
        assert!(matches!(
            monomial_basis(&s, &Multidegree::new(vec![1, 1])),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn mhb_symmetric_under_permutation() {
        let s = BlockStructure::new(vec![1], vec![1, 1]).unwrap();
        let ds = [
            Multidegree::new(vec![1, 1, 0]),
            Multidegree::new(vec![1, 0, 1]),
            Multidegree::new(vec![0, 1, 1]),
        ];
        let base = mhb(&s, &ds).unwrap();
        let perm = [ds[2].clone(), ds[0].clone(), ds[1].clone()];
        assert_eq!(mhb(&s, &perm).unwrap(), base);
    }

    #[test]
    fn resultant_degree_bilinear_forms() {
        // three (1,1)-forms on P1 x P1: total degree 6
        let s = BlockStructure::new(vec![1], vec![1]).unwrap();
        let degrees = vec![Multidegree::new(vec![1, 1]); 3];
        let (total, per) = resultant_degree(&s, &degrees).unwrap();
        assert_eq!(total, big(6));
        assert_eq!(per, vec![big(2), big(2), big(2)]);
    }

    #[test]
    fn resultant_degree_star_cases() {
        // alpha = (1,1), beta = (1,1), E = (2,2), four f0 supports
        let s = BlockStructure::new(vec![1, 1], vec![1, 1]).unwrap();
        let dy1 = Multidegree::new(vec![1, 1, 1, 0]);
        let dy2 = Multidegree::new(vec![1, 1, 0, 1]);
        let square = vec![dy1.clone(), dy1, dy2.clone(), dy2];
        let case = |d0: Vec<i64>| {
            let mut ds = vec![Multidegree::new(d0)];
            ds.extend(square.iter().cloned());
            resultant_degree(&s, &ds).unwrap().0
        };
        assert_eq!(case(vec![1, 1, 0, 0]), big(24)); // Center-Vertex
        assert_eq!(case(vec![0, 0, 1, 0]), big(20)); // Outer-Vertex
        assert_eq!(case(vec![1, 1, 1, 0]), big(36)); // Edge
        assert_eq!(case(vec![1, 1, 1, 1]), big(48)); // Triangle
    }

    #[test]
    fn resultant_degree_mep_shape() {
        let s = BlockStructure::new(vec![2], vec![1, 1]).unwrap();
        let d1 = Multidegree::new(vec![1, 1, 0]);
        let d2 = Multidegree::new(vec![1, 0, 1]);
        let degrees = vec![
            Multidegree::new(vec![1, 0, 0]),
            d1.clone(),
            d1,
            d2.clone(),
            d2,
        ];
        let (total, per) = resultant_degree(&s, &degrees).unwrap();
        assert_eq!(total, big(12));
        assert_eq!(per[0], big(4));
    }
}

//! Exact determinant evaluation for resultant tests and the eigenvalue
//! pipeline for multiparameter eigenvalue problems: bilinearize, build the
//! partitioned Sylvester-type matrix, take the Schur complement of C22,
//! eigensolve, and invert the monomial map.

pub mod eigen;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Zero};
use rand::Rng;
use std::collections::BTreeMap;

use crate::blocks::{
    monomial_basis, BlockStructure, CoeffTable, ExponentVector, Multidegree, Poly, PolySystem,
};
use crate::error::{Error, Result};
use crate::formulas::{DeterminantalData, F0Case, StarShape};
use crate::koszul::{assemble_delta1, BasisElement};
use crate::mat::Mat;
use crate::scalar::Coeff;
use crate::weyman::DegreeVector;

/// Exact determinant of a rational matrix by fraction-free Bareiss
/// elimination on the denominator-cleared integer matrix.
pub fn det_exact(m: &Mat<BigRational>) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.nrows;
    if n == 0 {
        return Ok(BigRational::one());
    }
    // clear denominators row by row, tracking the scale factor
    let mut denom = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for j in 0..n {
            lcm = lcm.lcm(m[(i, j)].denom());
        }
        a.push(
            (0..n)
                .map(|j| {
                    let e = &m[(i, j)];
                    e.numer() * (&lcm / e.denom())
                })
                .collect(),
        );
        denom *= lcm;
    }
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(swap) => {
                    a.swap(k, swap);
                    sign = -sign;
                }
                None => return Ok(BigRational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by the Sylvester identity
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det_int = a[n - 1][n - 1].clone() * BigInt::from(sign);
    Ok(BigRational::new(det_int, denom))
}

/// Exact characteristic polynomial coefficients c_0..c_n of a rational
/// matrix (det(xI - M) = sum c_k x^k) by the Faddeev-LeVerrier recurrence.
pub fn char_poly(m: &Mat<BigRational>) -> Result<Vec<BigRational>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.nrows;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut aux = Mat::<BigRational>::identity(n);
    for k in 1..=n {
        let prod = m.matmul(&aux);
        let trace = (0..n).fold(BigRational::zero(), |acc, i| acc + prod[(i, i)].clone());
        let c = -trace / BigRational::from_integer(BigInt::from(k as i64));
        coeffs[n - k] = c.clone();
        aux = prod;
        for i in 0..n {
            aux[(i, i)] += c.clone();
        }
    }
    Ok(coeffs)
}

/// Whether the resultant of a rational system vanishes: the exact
/// determinant of the Koszul matrix at a determinantal degree vector.
pub fn resultant_vanishes(system: &PolySystem<BigRational>, m: &DegreeVector) -> Result<bool> {
    let k = assemble_delta1(system, m)?;
    let dense = k.numeric_dense()?;
    Ok(det_exact(&dense)?.is_zero())
}

/// A multiparameter eigenvalue problem: for each t in 1..=alpha, the bundle
/// `(sum_j lambda_j M^{(t,j)}) v_t = 0` with matrices of size
/// (beta_t + 1) x (beta_t + 1), j ranging over 0..=alpha.
#[derive(Clone, Debug)]
pub struct MepInstance<T> {
    pub betas: Vec<usize>,
    /// matrices[t][j] is M^{(t+1, j)}.
    pub matrices: Vec<Vec<Mat<T>>>,
}

impl<T: Coeff> MepInstance<T> {
    pub fn new(betas: Vec<usize>, matrices: Vec<Vec<Mat<T>>>) -> Result<Self> {
        let alpha = betas.len();
        if alpha == 0 {
            return Err(Error::InvalidShape("MEP needs at least one parameter".into()));
        }
        if betas.contains(&0) {
            return Err(Error::InvalidShape("every beta_t must be positive".into()));
        }
        if matrices.len() != alpha {
            return Err(Error::InvalidShape(format!(
                "expected {alpha} matrix rows, got {}",
                matrices.len()
            )));
        }
        for (t, row) in matrices.iter().enumerate() {
            if row.len() != alpha + 1 {
                return Err(Error::InvalidShape(format!(
                    "equation {} needs {} matrices, got {}",
                    t + 1,
                    alpha + 1,
                    row.len()
                )));
            }
            for m in row {
                if m.nrows != betas[t] + 1 || m.ncols != betas[t] + 1 {
                    return Err(Error::InvalidShape(format!(
                        "equation {} expects ({} x {}) matrices",
                        t + 1,
                        betas[t] + 1,
                        betas[t] + 1
                    )));
                }
            }
        }
        Ok(MepInstance { betas, matrices })
    }

    pub fn alpha(&self) -> usize {
        self.betas.len()
    }

    /// Expected number of eigenpairs, prod (beta_t + 1).
    pub fn eigenpair_count(&self) -> usize {
        self.betas.iter().map(|&b| b + 1).product()
    }

    pub fn structure(&self) -> BlockStructure {
        BlockStructure::new(vec![self.alpha()], self.betas.clone()).expect("alpha >= 1")
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U + Copy) -> MepInstance<U> {
        MepInstance {
            betas: self.betas.clone(),
            matrices: self
                .matrices
                .iter()
                .map(|row| row.iter().map(|m| m.map(f)).collect())
                .collect(),
        }
    }
}

/// Exponent vector of the monomial x_j * y_{t, i_t} ... picking one variable
/// per listed block; `picks` maps block index to variable index.
fn unit_exponent(structure: &BlockStructure, picks: &BTreeMap<usize, usize>) -> ExponentVector {
    let mut blocks = Vec::with_capacity(structure.q());
    for b in 0..structure.q() {
        let mut e = vec![0u16; structure.block_dim(b) + 1];
        if let Some(&var) = picks.get(&b) {
            e[var] = 1;
        }
        blocks.push(e);
    }
    ExponentVector(blocks)
}

/// Bilinearization of the MEP: polynomials f_{t,l} = sum_{i,j}
/// M^{(t,j)}[l][i] x_j y_{t,i}, a star multilinear system with A = 1,
/// B = alpha and E_t = beta_t + 1.
pub fn mep_to_system<T: Coeff>(inst: &MepInstance<T>) -> PolySystem<T> {
    let structure = inst.structure();
    let alpha = inst.alpha();
    let mut polys = Vec::new();
    for t in 0..alpha {
        let bt = inst.betas[t];
        let mut degree = vec![0i64; structure.q()];
        degree[0] = 1;
        degree[1 + t] = 1;
        for l in 0..=bt {
            let mut table: CoeffTable<T> = BTreeMap::new();
            for j in 0..=alpha {
                for i in 0..=bt {
                    let v = inst.matrices[t][j][(l, i)].clone();
                    if v.is_zero() {
                        continue;
                    }
                    let key = unit_exponent(
                        &structure,
                        &BTreeMap::from([(0usize, j), (1 + t, i)]),
                    );
                    table.insert(key, v);
                }
            }
            polys.push(Poly::with_coeffs(Multidegree::new(degree.clone()), table));
        }
    }
    PolySystem::new(structure, polys).expect("bilinearization is well formed")
}

/// Inverse of `mep_to_system`: reads the matrices back off the coefficient
/// tables.
pub fn mep_from_system<T: Coeff>(system: &PolySystem<T>, betas: &[usize]) -> Result<MepInstance<T>> {
    let structure = &system.structure;
    let alpha = betas.len();
    let mut matrices: Vec<Vec<Mat<T>>> = (0..alpha)
        .map(|t| vec![Mat::zeros(betas[t] + 1, betas[t] + 1); alpha + 1])
        .collect();
    if system.polys.len() != structure.n() {
        return Err(Error::Arity {
            expected: structure.n(),
            got: system.polys.len(),
        });
    }
    let mut poly_iter = system.polys.iter();
    for (t, &bt) in betas.iter().enumerate() {
        for l in 0..=bt {
            let poly = poly_iter
                .next()
                .ok_or_else(|| Error::InvalidShape("too few polynomials".into()))?;
            let table = poly.coeffs.as_ref().ok_or(Error::MissingCoefficients)?;
            for (key, v) in table {
                let j = key.block(0).iter().position(|&e| e == 1).ok_or_else(|| {
                    Error::ShapeMismatch("monomial misses the parameter block".into())
                })?;
                let i = key
                    .block(1 + t)
                    .iter()
                    .position(|&e| e == 1)
                    .ok_or_else(|| Error::ShapeMismatch("monomial misses the vector block".into()))?;
                matrices[t][j][(l, i)] = v.clone();
            }
        }
    }
    MepInstance::new(betas.to_vec(), matrices)
}

/// The Sylvester-type resultant matrix of an affine MEP, partitioned so
/// that C22 pairs the rows Y^theta * f0 with the columns x_0 * Y^theta.
#[derive(Clone, Debug)]
pub struct PartitionedMatrix<T> {
    pub c11: Mat<T>,
    pub c12: Mat<T>,
    pub c21: Mat<T>,
    pub c22: Mat<T>,
    /// Column monomials of the "1" block (x_j with j >= 1 times Y^theta).
    pub outer_cols: Vec<ExponentVector>,
    /// Y^theta exponents pairing row k of [C21 C22] with column k of
    /// [C12; C22].
    pub theta: Vec<ExponentVector>,
    pub f0: Vec<T>,
}

impl<T: Coeff> PartitionedMatrix<T> {
    pub fn dim(&self) -> usize {
        self.c11.nrows + self.c22.nrows
    }

    pub fn count_nonzero(&self) -> usize {
        self.c11.count_nonzero()
            + self.c12.count_nonzero()
            + self.c21.count_nonzero()
            + self.c22.count_nonzero()
    }

    /// Schur complement C22 - C21 C11^{-1} C12; fails with `NotAffine` when
    /// C11 is singular.
    pub fn schur_complement(&self) -> Result<Mat<T>> {
        let x = self.c11.solve(&self.c12).map_err(|e| match e {
            Error::Singular => Error::NotAffine,
            other => other,
        })?;
        Ok(self.c22.sub(&self.c21.matmul(&x)))
    }

    /// Reassembled full matrix in block order [[C11 C12], [C21 C22]].
    pub fn full(&self) -> Mat<T> {
        let (n1, n2) = (self.c11.nrows, self.c22.nrows);
        Mat::from_fn(n1 + n2, n1 + n2, |i, j| match (i < n1, j < n1) {
            (true, true) => self.c11[(i, j)].clone(),
            (true, false) => self.c12[(i, j - n1)].clone(),
            (false, true) => self.c21[(i - n1, j)].clone(),
            (false, false) => self.c22[(i - n1, j - n1)].clone(),
        })
    }
}

fn is_f0_row(b: &BasisElement) -> bool {
    b.wedge == [0]
}

fn y_parts(b: &BasisElement) -> Vec<Vec<u16>> {
    b.parts[1..].iter().map(|p| p.exps.clone()).collect()
}

/// Builds the Sylvester-type Koszul matrix for the bilinearized MEP with
/// the degree vector (1, ..., 1) and reorders rows and columns to satisfy
/// the pairing invariant.
pub fn build_and_partition<T: Coeff>(
    inst: &MepInstance<T>,
    f0: &[T],
) -> Result<PartitionedMatrix<T>> {
    let alpha = inst.alpha();
    if f0.len() != alpha + 1 {
        return Err(Error::ShapeMismatch(format!(
            "f0 needs {} coefficients, got {}",
            alpha + 1,
            f0.len()
        )));
    }
    let mut system = mep_to_system(inst);
    let structure = system.structure.clone();
    // prepend f0, linear in the parameter block
    let mut d0 = vec![0i64; structure.q()];
    d0[0] = 1;
    let mut table: CoeffTable<T> = BTreeMap::new();
    for (j, c) in f0.iter().enumerate() {
        if !c.is_zero() {
            table.insert(unit_exponent(&structure, &BTreeMap::from([(0usize, j)])), c.clone());
        }
    }
    system
        .polys
        .insert(0, Poly::with_coeffs(Multidegree::new(d0.clone()), table));

    let shape = StarShape::new(structure.clone(), inst.betas.iter().map(|&b| b + 1).collect())?;
    let (m, _omega) = crate::formulas::star_degree_vector(
        &shape,
        &Multidegree::new(d0),
        &DeterminantalData::sylvester(&structure),
    )?;
    debug_assert!(m.0.iter().all(|&e| e == 1));

    let k = assemble_delta1(&system, &m)?;
    let dense = k.numeric_dense()?;
    let c = dense.transpose(); // rows: K1 elements, cols: K0 monomials

    // columns: K0 monomials x_j Y^theta; x_0 block goes last
    let mut outer_cols = Vec::new(); // (orig col, label)
    let mut x0_cols = Vec::new();
    for (idx, b) in k.row_basis.iter().enumerate() {
        let x_pick = b.parts[0].exps.iter().position(|&e| e == 1).expect("degree 1 in X");
        let label = ExponentVector(b.parts.iter().map(|p| p.exps.clone()).collect());
        if x_pick == 0 {
            x0_cols.push((idx, label));
        } else {
            outer_cols.push((idx, label));
        }
    }
    // rows: K1 elements; f0 rows go last, ordered like the x0 columns
    let mut outer_rows = Vec::new();
    let mut f0_rows = Vec::new();
    for (idx, b) in k.col_basis.iter().enumerate() {
        if is_f0_row(b) {
            f0_rows.push((idx, y_parts(b)));
        } else {
            outer_rows.push(idx);
        }
    }
    let theta_order: Vec<Vec<Vec<u16>>> = x0_cols
        .iter()
        .map(|(_, label)| label.0[1..].to_vec())
        .collect();
    f0_rows.sort_by_key(|(_, y)| {
        theta_order
            .iter()
            .position(|t| t == y)
            .expect("f0 row pairs with an x0 column")
    });
    let n2 = x0_cols.len();
    debug_assert_eq!(f0_rows.len(), n2);
    debug_assert_eq!(n2, inst.eigenpair_count());

    let row_order: Vec<usize> = outer_rows
        .iter()
        .cloned()
        .chain(f0_rows.iter().map(|&(idx, _)| idx))
        .collect();
    let col_order: Vec<usize> = outer_cols
        .iter()
        .map(|&(idx, _)| idx)
        .chain(x0_cols.iter().map(|&(idx, _)| idx))
        .collect();
    let n1 = outer_rows.len();
    debug_assert_eq!(n1, outer_cols.len());
    let reordered = c.submatrix(&row_order, &col_order);
    let idx: Vec<usize> = (0..n1 + n2).collect();
    Ok(PartitionedMatrix {
        c11: reordered.submatrix(&idx[..n1], &idx[..n1]),
        c12: reordered.submatrix(&idx[..n1], &idx[n1..]),
        c21: reordered.submatrix(&idx[n1..], &idx[..n1]),
        c22: reordered.submatrix(&idx[n1..], &idx[n1..]),
        outer_cols: outer_cols.into_iter().map(|(_, l)| l).collect(),
        theta: x0_cols.into_iter().map(|(_, l)| l).collect(),
        f0: f0.to_vec(),
    })
}

/// Eigenvalues and right eigenvectors of the Schur complement of C22; each
/// eigenvalue is f0/x0 evaluated at an eigenvalue of the MEP.
pub fn schur_eigen(pm: &PartitionedMatrix<f64>) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    let schur = pm.schur_complement()?;
    eigen::eig(&schur)
}

/// A recovered eigenpair: the eigenvalue tuple normalized to x_0 = 1, one
/// projective eigenvector per parameter block (pivot coordinate 1), and the
/// backward residual max_t ||(sum_j lambda_j M^(t,j)) v_t||_inf.
#[derive(Clone, Debug)]
pub struct MepEigenpair {
    pub lambda: Vec<Complex64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub residual: f64,
}

pub fn mep_residual(inst: &MepInstance<f64>, lambda: &[Complex64], vectors: &[Vec<Complex64>]) -> f64 {
    let alpha = inst.alpha();
    let mut worst = 0.0f64;
    for t in 0..alpha {
        let bt = inst.betas[t];
        for row in 0..=bt {
            let mut acc = Complex64::zero();
            for j in 0..=alpha {
                for i in 0..=bt {
                    acc += lambda[j] * inst.matrices[t][j][(row, i)] * vectors[t][i];
                }
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

const PIVOT_REL_TOL: f64 = 1e-8;

/// Extends a Schur eigenvector to the full monomial-evaluation vector
/// w = [-C11^{-1} C12 v; v] and inverts the monomial map: x_0 is normalized
/// to 1 through the v-block and each coordinate is a ratio of two w-entries
/// differing in one variable.
pub fn recover_coordinates(
    inst: &MepInstance<f64>,
    pm: &PartitionedMatrix<f64>,
    pair: &(Complex64, Vec<Complex64>),
) -> Result<MepEigenpair> {
    let (_, v) = pair;
    let alpha = inst.alpha();
    let s = pm.c11.solve(&pm.c12).map_err(|e| match e {
        Error::Singular => Error::NotAffine,
        other => other,
    })?;
    // w1 = -S v over complex entries
    let n1 = s.nrows;
    let w1: Vec<Complex64> = (0..n1)
        .map(|i| {
            let mut acc = Complex64::zero();
            for j in 0..s.ncols {
                acc += s[(i, j)] * v[j];
            }
            -acc
        })
        .collect();
    let wmax = w1
        .iter()
        .chain(v.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if wmax == 0.0 {
        return Err(Error::DegenerateEigenvector);
    }
    // pivot theta: the largest entry of the v block (x_0 Y^theta)
    let pivot = (0..v.len())
        .max_by(|&i, &j| v[i].norm().partial_cmp(&v[j].norm()).unwrap())
        .unwrap();
    if v[pivot].norm() <= PIVOT_REL_TOL * wmax {
        return Err(Error::DegenerateEigenvector);
    }
    let denom = v[pivot];
    let theta_star = &pm.theta[pivot];

    // full lookup from monomial exponents to w entries
    let mut lookup: BTreeMap<Vec<Vec<u16>>, Complex64> = BTreeMap::new();
    for (label, val) in pm.outer_cols.iter().zip(&w1) {
        lookup.insert(label.0.clone(), *val);
    }
    for (label, val) in pm.theta.iter().zip(v.iter()) {
        lookup.insert(label.0.clone(), *val);
    }

    let entry = |picks: &BTreeMap<usize, usize>| -> Complex64 {
        let key = unit_exponent(&inst.structure(), picks);
        lookup.get(&key.0).copied().expect("monomial present")
    };

    // theta picks per Y block
    let theta_picks: Vec<usize> = (0..alpha)
        .map(|t| {
            theta_star.0[1 + t]
                .iter()
                .position(|&e| e == 1)
                .expect("degree one")
        })
        .collect();
    let base_picks = |x_var: usize| -> BTreeMap<usize, usize> {
        let mut picks = BTreeMap::from([(0usize, x_var)]);
        for (t, &i) in theta_picks.iter().enumerate() {
            picks.insert(1 + t, i);
        }
        picks
    };

    let lambda: Vec<Complex64> = (0..=alpha)
        .map(|j| entry(&base_picks(j)) / denom)
        .collect();
    let mut vectors = Vec::with_capacity(alpha);
    for t in 0..alpha {
        let mut vec_t = Vec::with_capacity(inst.betas[t] + 1);
        for i in 0..=inst.betas[t] {
            let mut picks = base_picks(0);
            picks.insert(1 + t, i);
            vec_t.push(entry(&picks) / denom);
        }
        vectors.push(vec_t);
    }
    let residual = mep_residual(inst, &lambda, &vectors);
    Ok(MepEigenpair {
        lambda,
        vectors,
        residual,
    })
}

/// Options for the end-to-end MEP solve.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub seed: u64,
    /// Minimum relative gap between Schur eigenvalues.
    pub separation_tol: f64,
    pub max_f0_draws: usize,
    pub max_coordinate_changes: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            separation_tol: 1e-6,
            max_f0_draws: 8,
            max_coordinate_changes: 5,
        }
    }
}

fn min_gap(values: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Applies the linear change of coordinates x = G x' to the parameter
/// block: M'^{(t,l)} = sum_j G[j][l] M^{(t,j)}.
fn change_coordinates(inst: &MepInstance<f64>, g: &Mat<f64>) -> MepInstance<f64> {
    let alpha = inst.alpha();
    let matrices = (0..alpha)
        .map(|t| {
            (0..=alpha)
                .map(|l| {
                    let mut acc = Mat::zeros(inst.betas[t] + 1, inst.betas[t] + 1);
                    for j in 0..=alpha {
                        acc = acc.add(&inst.matrices[t][j].scale(&g[(j, l)]));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    MepInstance {
        betas: inst.betas.clone(),
        matrices,
    }
}

/// Algorithm: bilinearize, build and partition the Sylvester matrix, take
/// the Schur complement of C22, eigensolve, and recover coordinates. When
/// `f0` is absent, integer coefficients are drawn from [-1000, 1000] until
/// the spectrum separates; when C11 is singular, a random linear change of
/// the parameter coordinates is applied and the solve retried.
pub fn solve_mep(
    inst: &MepInstance<f64>,
    f0: Option<&[f64]>,
    opts: &SolveOptions,
) -> Result<Vec<MepEigenpair>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let alpha = inst.alpha();
    let mut transform: Option<Mat<f64>> = None;
    for attempt in 0..=opts.max_coordinate_changes {
        let (work, g) = match &transform {
            None => (inst.clone(), None),
            Some(g) => (change_coordinates(inst, g), Some(g.clone())),
        };
        let draws = if f0.is_some() { 1 } else { opts.max_f0_draws };
        let mut saw_affine = false;
        for _ in 0..draws {
            let f0_vec: Vec<f64> = match f0 {
                Some(c) => c.to_vec(),
                None => (0..=alpha).map(|_| rng.gen_range(-1000..=1000) as f64).collect(),
            };
            let pm = build_and_partition(&work, &f0_vec)?;
            let eigenpairs = match schur_eigen(&pm) {
                Ok(pairs) => pairs,
                Err(Error::NotAffine) => break,
                Err(other) => return Err(other),
            };
            saw_affine = true;
            let values: Vec<Complex64> = eigenpairs.iter().map(|(l, _)| *l).collect();
            let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if min_gap(&values) <= opts.separation_tol * (1.0 + scale) {
                continue; // clustered eigenvalues: redraw f0
            }
            let mut out = Vec::with_capacity(eigenpairs.len());
            for pair in &eigenpairs {
                let mut rec = recover_coordinates(&work, &pm, pair)?;
                if let Some(g) = &g {
                    // map back: lambda_orig = G lambda'
                    let lam: Vec<Complex64> = (0..=alpha)
                        .map(|j| {
                            (0..=alpha)
                                .map(|l| g[(j, l)] * rec.lambda[l])
                                .sum::<Complex64>()
                        })
                        .collect();
                    let scale = lam.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    if lam[0].norm() <= 1e-10 * scale {
                        return Err(Error::SingularMEP);
                    }
                    rec.lambda = lam.iter().map(|z| z / lam[0]).collect();
                    rec.residual = mep_residual(inst, &rec.lambda, &rec.vectors);
                }
                out.push(rec);
            }
            return Ok(out);
        }
        if saw_affine {
            // the instance is affine but every f0 kept the spectrum clustered
            return Err(Error::MultiplicityUnsupported);
        }
        if attempt < opts.max_coordinate_changes {
            let g = random_invertible(alpha + 1, &mut rng);
            transform = Some(g);
        }
    }
    Err(Error::SingularMEP)
}

fn random_invertible(n: usize, rng: &mut impl Rng) -> Mat<f64> {
    loop {
        let g = Mat::from_fn(n, n, |_, _| rng.gen_range(-5i32..=5) as f64);
        if g.solve(&Mat::identity(n)).is_ok() {
            return g;
        }
    }
}

/// Atkinson's operator-determinant matrices for a two-parameter problem,
/// from the 2x2 Laplace expansion with Kronecker products. Used as a
/// cross-check oracle: eigenvalues of Delta_0^{-1} Delta_i are the i-th
/// eigenvalue coordinates.
pub fn atkinson_delta_2ep(inst: &MepInstance<f64>) -> Result<(Mat<f64>, Mat<f64>, Mat<f64>)> {
    if inst.alpha() != 2 {
        return Err(Error::Unsupported(
            "Atkinson Delta oracle is implemented for alpha = 2 only".into(),
        ));
    }
    let a1 = &inst.matrices[0][0];
    let b1 = &inst.matrices[0][1];
    let c1 = &inst.matrices[0][2];
    let a2 = &inst.matrices[1][0];
    let b2 = &inst.matrices[1][1];
    let c2 = &inst.matrices[1][2];
    let d0 = kron(b1, c2).sub(&kron(c1, b2));
    let d1 = kron(c1, a2).sub(&kron(a1, c2));
    let d2 = kron(a1, b2).sub(&kron(b1, a2));
    Ok((d0, d1, d2))
}

pub fn kron(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
    Mat::from_fn(a.nrows * b.nrows, a.ncols * b.ncols, |i, j| {
        a[(i / b.nrows, j / b.ncols)] * b[(i % b.nrows, j % b.ncols)]
    })
}

/// A projective point with small nonzero integer coordinates in every
/// block; every monomial evaluation at such a point is nonzero.
pub fn random_point(structure: &BlockStructure, rng: &mut impl Rng) -> Vec<Vec<BigRational>> {
    (0..structure.q())
        .map(|b| {
            (0..=structure.block_dim(b))
                .map(|_| {
                    let mut v = 0i64;
                    while v == 0 {
                        v = rng.gen_range(-3..=3);
                    }
                    <BigRational as Coeff>::from_i64(v)
                })
                .collect()
        })
        .collect()
}

fn eval_monomial(point: &[Vec<BigRational>], key: &ExponentVector) -> BigRational {
    let mut acc = BigRational::one();
    for (block, exps) in key.0.iter().enumerate() {
        for (var, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                acc *= point[block][var].clone();
            }
        }
    }
    acc
}

/// Builds a system of the given multidegrees whose polynomials all vanish
/// at a common random rational point: all but one coefficient per
/// polynomial are random small integers and the last is solved from
/// f_k(p) = 0.
pub fn construct_vanishing_system(
    structure: &BlockStructure,
    degrees: &[Multidegree],
    rng: &mut impl Rng,
) -> Result<(PolySystem<BigRational>, Vec<Vec<BigRational>>)> {
    let point = random_point(structure, rng);
    let mut polys = Vec::with_capacity(degrees.len());
    for d in degrees {
        let support = monomial_basis(structure, d)?;
        if support.len() < 2 {
            return Err(Error::InvalidShape(
                "vanishing construction needs at least two monomials".into(),
            ));
        }
        let mut table: CoeffTable<BigRational> = BTreeMap::new();
        let mut acc = BigRational::zero();
        for key in &support[..support.len() - 1] {
            let c = <BigRational as Coeff>::from_i64(rng.gen_range(-9..=9));
            acc += c.clone() * eval_monomial(&point, key);
            table.insert(key.clone(), c);
        }
        let last = &support[support.len() - 1];
        let last_val = eval_monomial(&point, last);
        // nonzero because every point coordinate is nonzero
        table.insert(last.clone(), -acc / last_val);
        polys.push(Poly::with_coeffs(d.clone(), table));
    }
    Ok((PolySystem::new(structure.clone(), polys)?, point))
}

/// A system of the given multidegrees with uniformly random small integer
/// coefficients.
pub fn random_system(
    structure: &BlockStructure,
    degrees: &[Multidegree],
    rng: &mut impl Rng,
) -> Result<PolySystem<BigRational>> {
    let mut polys = Vec::with_capacity(degrees.len());
    for d in degrees {
        let support = monomial_basis(structure, d)?;
        let table: CoeffTable<BigRational> = support
            .into_iter()
            .map(|key| (key, <BigRational as Coeff>::from_i64(rng.gen_range(-9..=9))))
            .collect();
        polys.push(Poly::with_coeffs(d.clone(), table));
    }
    PolySystem::new(structure.clone(), polys)
}

/// f0 support helper for MEP tests: center-vertex degree on the MEP shape.
pub fn mep_d0(structure: &BlockStructure) -> Multidegree {
    F0Case::CenterVertex
        .d0(structure)
        .expect("center vertex is always valid")
}

//! Explicit tensor bases for K_1 and K_0 and the Koszul matrix of
//! delta_1(m) = sum_k mu_{F_k} (x) Delta_k, whose entries are signed input
//! coefficients.

use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, HashMap};

use crate::blocks::{monomial_basis, BlockStructure, ExponentVector, Multidegree, Poly, PolySystem};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::Coeff;
use crate::weyman::{
    complex_terms, is_determinantal, DegreeVector, FactorKind, WeymanComplexDescriptor,
    WeymanSummand,
};

/// One block's contribution to a basis element: primal monomials x^e or
/// dual monomials @x^e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Part {
    pub kind: FactorKind,
    pub exps: Vec<u16>,
}

/// A tensor-basis element: one part per block plus a wedge index set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub wedge: Vec<usize>,
    pub parts: Vec<Part>,
}

/// One symbolic term of a matrix entry: sign * coefficient(poly, monomial).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryTerm {
    pub poly: usize,
    pub monomial: ExponentVector,
    pub sign: i8,
}

/// Sparse matrix of delta_1 with rows indexed by K_0 and columns by K_1.
#[derive(Clone, Debug)]
pub struct KoszulMatrix<T> {
    pub structure: BlockStructure,
    pub row_basis: Vec<BasisElement>,
    pub col_basis: Vec<BasisElement>,
    pub entries: BTreeMap<(usize, usize), Vec<EntryTerm>>,
    pub numeric: Option<BTreeMap<(usize, usize), T>>,
}

impl<T: Coeff> KoszulMatrix<T> {
    pub fn nrows(&self) -> usize {
        self.row_basis.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_basis.len()
    }

    pub fn numeric_dense(&self) -> Result<Mat<T>> {
        let numeric = self.numeric.as_ref().ok_or(Error::MissingCoefficients)?;
        let mut m = Mat::zeros(self.nrows(), self.ncols());
        for (&(r, c), v) in numeric {
            m[(r, c)] = v.clone();
        }
        Ok(m)
    }

    /// Labeled JSON export: bases plus symbolic entries, and numeric values
    /// when instantiated.
    pub fn to_labeled_json(&self, fmt_value: impl Fn(&T) -> serde_json::Value) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(&(r, c), terms)| {
                let mut obj = json!({
                    "row": r,
                    "col": c,
                    "terms": terms,
                });
                if let Some(numeric) = &self.numeric {
                    if let Some(v) = numeric.get(&(r, c)) {
                        obj["value"] = fmt_value(v);
                    }
                }
                obj
            })
            .collect();
        json!({
            "nrows": self.nrows(),
            "ncols": self.ncols(),
            "row_basis": self.row_basis,
            "col_basis": self.col_basis,
            "entries": entries,
        })
    }

    /// Coordinate export of the numeric instantiation: one "row col value"
    /// line per nonzero, 1-indexed.
    pub fn to_coo(&self, fmt_value: impl Fn(&T) -> String) -> Result<String> {
        let numeric = self.numeric.as_ref().ok_or(Error::MissingCoefficients)?;
        let mut out = String::new();
        for (&(r, c), v) in numeric {
            if !v.is_zero() {
                out.push_str(&format!("{} {} {}\n", r + 1, c + 1, fmt_value(v)));
            }
        }
        Ok(out)
    }
}

/// The signed contraction removing e_k from a strictly increasing wedge
/// tuple; absent when k is not a member.
pub fn inner_derivative(k: usize, wedge: &[usize]) -> Option<(Vec<usize>, i8)> {
    let t = wedge.iter().position(|&j| j == k)?;
    let mut rest = wedge.to_vec();
    rest.remove(t);
    let sign = if t % 2 == 0 { 1 } else { -1 };
    Some((rest, sign))
}

/// The monomial part of mu: primal blocks multiply exponents, dual blocks
/// subtract them; a dual exponent going negative kills the term.
pub fn mu_target(parts: &[Part], gamma: &ExponentVector) -> Option<Vec<Part>> {
    let mut out = Vec::with_capacity(parts.len());
    for (part, g) in parts.iter().zip(&gamma.0) {
        debug_assert_eq!(part.exps.len(), g.len());
        let mut exps = Vec::with_capacity(part.exps.len());
        match part.kind {
            FactorKind::Primal => {
                for (&e, &ge) in part.exps.iter().zip(g) {
                    exps.push(e + ge);
                }
            }
            FactorKind::Dual => {
                for (&e, &ge) in part.exps.iter().zip(g) {
                    if e < ge {
                        return None;
                    }
                    exps.push(e - ge);
                }
            }
        }
        out.push(Part {
            kind: part.kind,
            exps,
        });
    }
    Some(out)
}

/// Applies mu_{f} to a wedge-free basis element, returning the image as a
/// combination of target elements. Requires a coefficient table.
pub fn mu_apply<T: Coeff>(
    poly: &Poly<T>,
    parts: &[Part],
) -> Result<Vec<(Vec<Part>, T)>> {
    let table = poly.coeffs.as_ref().ok_or(Error::MissingCoefficients)?;
    let mut out = Vec::new();
    for (gamma, c) in table {
        if c.is_zero() {
            continue;
        }
        if let Some(target) = mu_target(parts, gamma) {
            out.push((target, c.clone()));
        }
    }
    Ok(out)
}

/// The ordered basis of one Weyman summand: wedge subsets ascending
/// lexicographically, then per-block monomials in canonical order.
pub fn enumerate_basis(
    structure: &BlockStructure,
    desc: &WeymanComplexDescriptor,
    summand: &WeymanSummand,
) -> Vec<BasisElement> {
    let subsets = desc.expand_wedge(summand);
    let per_block: Vec<Vec<Vec<u16>>> = summand
        .factors
        .iter()
        .map(|f| {
            let n = structure.block_dim(f.block);
            let deg = f.poly_degree(n) as i64;
            let d = Multidegree::new(vec![deg]);
            // reuse block-level enumeration through a single-block structure
            let s1 = BlockStructure::new(vec![n], vec![]).expect("block dim >= 1");
            monomial_basis(&s1, &d)
                .expect("single block")
                .into_iter()
                .map(|e| e.0.into_iter().next().unwrap())
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(summand.dim);
    for wedge in subsets {
        let mut partials: Vec<Vec<Part>> = vec![Vec::new()];
        for (f, monos) in summand.factors.iter().zip(&per_block) {
            let mut next = Vec::with_capacity(partials.len() * monos.len());
            for prefix in &partials {
                for m in monos {
                    let mut p = prefix.clone();
                    p.push(Part {
                        kind: f.kind,
                        exps: m.clone(),
                    });
                    next.push(p);
                }
            }
            partials = next;
        }
        for parts in partials {
            out.push(BasisElement {
                wedge: wedge.clone(),
                parts,
            });
        }
    }
    debug_assert_eq!(out.len(), summand.dim);
    out
}

fn basis_of_v(
    structure: &BlockStructure,
    desc: &WeymanComplexDescriptor,
    v: i64,
) -> Vec<BasisElement> {
    desc.summands(v)
        .iter()
        .flat_map(|s| enumerate_basis(structure, desc, s))
        .collect()
}

type RowKey = (Vec<usize>, Vec<Vec<u16>>);

fn row_key(b: &BasisElement) -> RowKey {
    (
        b.wedge.clone(),
        b.parts.iter().map(|p| p.exps.clone()).collect(),
    )
}

/// Assembles the Koszul matrix of delta_1(m). Symbolic entries are always
/// produced; the numeric instantiation is filled when every polynomial
/// carries coefficients.
pub fn assemble_delta1<T: Coeff>(
    system: &PolySystem<T>,
    m: &DegreeVector,
) -> Result<KoszulMatrix<T>> {
    let desc = complex_terms(system, m)?;
    if !is_determinantal(&desc) {
        return Err(Error::DeterminantalityError(format!(
            "degree vector {:?} does not give a two-term complex (ranks at v = {:?})",
            m.0,
            desc.nonzero_vs()
        )));
    }
    let structure = system.structure.clone();
    let row_basis = basis_of_v(&structure, &desc, 0);
    let col_basis = basis_of_v(&structure, &desc, 1);
    let row_index: HashMap<RowKey, usize> = row_basis
        .iter()
        .enumerate()
        .map(|(i, b)| (row_key(b), i))
        .collect();
    let numeric_mode = system.is_numeric();
    let mut entries: BTreeMap<(usize, usize), Vec<EntryTerm>> = BTreeMap::new();
    let mut numeric: BTreeMap<(usize, usize), T> = BTreeMap::new();
    for (c, col) in col_basis.iter().enumerate() {
        for &k in &col.wedge {
            let (rest, sign) = inner_derivative(k, &col.wedge).expect("k is a member");
            let support = monomial_basis(&structure, &system.polys[k].degree)?;
            for gamma in support {
                let Some(target) = mu_target(&col.parts, &gamma) else {
                    continue;
                };
                let key = (
                    rest.clone(),
                    target.iter().map(|p| p.exps.clone()).collect::<Vec<_>>(),
                );
                let r = *row_index
                    .get(&key)
                    .unwrap_or_else(|| panic!("image element missing from K_0 basis: {key:?}"));
                if numeric_mode {
                    let c_val = system.polys[k].coeff(&gamma);
                    if !c_val.is_zero() {
                        let signed = if sign > 0 { c_val } else { -c_val };
                        let slot = numeric.entry((r, c)).or_insert_with(T::zero);
                        *slot += signed;
                    }
                }
                entries.entry((r, c)).or_default().push(EntryTerm {
                    poly: k,
                    monomial: gamma,
                    sign,
                });
            }
        }
    }
    numeric.retain(|_, v| !v.is_zero());
    Ok(KoszulMatrix {
        structure,
        row_basis,
        col_basis,
        entries,
        numeric: if numeric_mode { Some(numeric) } else { None },
    })
}

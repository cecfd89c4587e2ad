//! On-disk document formats: polynomial systems and MEP instances as JSON,
//! with rationals as "p/q" strings and floats as JSON numbers.

use std::collections::BTreeMap;

use koszul_core::blocks::{
    BlockStructure, CoeffTable, ExponentVector, Multidegree, Poly, PolySystem,
};
use koszul_core::error::{Error, Result};
use koszul_core::mat::Mat;
use koszul_core::scalar::{format_rational, parse_rational};
use koszul_core::solver::MepInstance;
use num::rational::BigRational;
use num::traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Rational,
    Float64,
}

impl clap::ValueEnum for Arithmetic {
    fn value_variants<'a>() -> &'a [Self] {
        &[Arithmetic::Rational, Arithmetic::Float64]
    }
    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(match self {
            Arithmetic::Rational => clap::builder::PossibleValue::new("rational"),
            Arithmetic::Float64 => clap::builder::PossibleValue::new("float64"),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlocksDoc {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeDoc {
    #[serde(rename = "X")]
    pub x: Vec<i64>,
    #[serde(rename = "Y")]
    pub y: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub multidegree: DegreeDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<BTreeMap<String, Value>>,
}

/// A polynomial system document. Polynomial 0 is f_0 when the system is
/// overdetermined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub blocks: BlocksDoc,
    pub arithmetic: Arithmetic,
    pub polynomials: Vec<PolyDoc>,
}

/// An MEP document: beta sizes and the bundle matrices keyed "M_t_j" with
/// t in 1..=alpha and j in 0..=alpha.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MepDocument {
    pub alpha: usize,
    pub beta: Vec<usize>,
    pub matrices: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f0: Option<Vec<f64>>,
}

/// Canonical monomial key: per-block exponent lists joined as
/// "X1:[e0,e1];X2:[...];Y1:[...]".
pub fn format_monomial_key(structure: &BlockStructure, e: &ExponentVector) -> String {
    let a = structure.a();
    let mut parts = Vec::with_capacity(structure.q());
    for (b, exps) in e.0.iter().enumerate() {
        let name = if b < a {
            format!("X{}", b + 1)
        } else {
            format!("Y{}", b - a + 1)
        };
        let list = exps
            .iter()
            .map(u16::to_string)
            .collect::<Vec<_>>()
            .join(",");
        parts.push(format!("{name}:[{list}]"));
    }
    parts.join(";")
}

pub fn parse_monomial_key(structure: &BlockStructure, key: &str) -> Result<ExponentVector> {
    let a = structure.a();
    let mut blocks: Vec<Option<Vec<u16>>> = vec![None; structure.q()];
    for part in key.split(';') {
        let (name, list) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad monomial key segment {part:?}")))?;
        let idx = match name.as_bytes().first() {
            Some(b'X') => name[1..]
                .parse::<usize>()
                .ok()
                .and_then(|i| i.checked_sub(1))
                .filter(|&i| i < a),
            Some(b'Y') => name[1..]
                .parse::<usize>()
                .ok()
                .and_then(|j| j.checked_sub(1))
                .map(|j| a + j)
                .filter(|&j| j < structure.q()),
            _ => None,
        }
        .ok_or_else(|| Error::Parse(format!("unknown block {name:?} in monomial key")))?;
        let inner = list
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad exponent list {list:?}")))?;
        let exps = inner
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<u16>()
                    .map_err(|_| Error::Parse(format!("bad exponent {v:?}")))
            })
            .collect::<Result<Vec<u16>>>()?;
        if exps.len() != structure.block_dim(idx) + 1 {
            return Err(Error::Parse(format!(
                "block {name} expects {} exponents",
                structure.block_dim(idx) + 1
            )));
        }
        if blocks[idx].replace(exps).is_some() {
            return Err(Error::Parse(format!("duplicate block {name} in key")));
        }
    }
    let blocks = blocks
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::Parse(format!("missing block {i} in monomial key"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentVector(blocks))
}

impl SystemDocument {
    pub fn structure(&self) -> Result<BlockStructure> {
        BlockStructure::new(self.blocks.alpha.clone(), self.blocks.beta.clone())
    }

    fn degree(&self, doc: &DegreeDoc) -> Result<Multidegree> {
        if doc.x.len() != self.blocks.alpha.len() || doc.y.len() != self.blocks.beta.len() {
            return Err(Error::Parse(
                "multidegree does not match the block layout".into(),
            ));
        }
        let mut entries = doc.x.clone();
        entries.extend(doc.y.iter().cloned());
        Ok(Multidegree::new(entries))
    }

    pub fn degrees(&self) -> Result<Vec<Multidegree>> {
        self.polynomials
            .iter()
            .map(|p| self.degree(&p.multidegree))
            .collect()
    }

    pub fn to_rational_system(&self) -> Result<PolySystem<BigRational>> {
        if self.arithmetic != Arithmetic::Rational {
            return Err(Error::Parse(
                "document is not in rational arithmetic".into(),
            ));
        }
        self.to_system(|v| match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => {
                Ok(BigRational::from_integer(n.as_i64().unwrap().into()))
            }
            other => Err(Error::Parse(format!(
                "rational coefficients must be strings, got {other}"
            ))),
        })
    }

    pub fn to_f64_system(&self) -> Result<PolySystem<f64>> {
        if self.arithmetic != Arithmetic::Float64 {
            return Err(Error::Parse("document is not in float64 arithmetic".into()));
        }
        self.to_system(|v| {
            v.as_f64()
                .ok_or_else(|| Error::Parse(format!("float coefficients must be numbers, got {v}")))
        })
    }

    fn to_system<T: koszul_core::scalar::Coeff>(
        &self,
        parse: impl Fn(&Value) -> Result<T>,
    ) -> Result<PolySystem<T>> {
        let structure = self.structure()?;
        let mut polys = Vec::with_capacity(self.polynomials.len());
        for p in &self.polynomials {
            let degree = self.degree(&p.multidegree)?;
            let coeffs = match &p.coefficients {
                None => None,
                Some(map) => {
                    let mut table: CoeffTable<T> = BTreeMap::new();
                    for (key, value) in map {
                        table.insert(parse_monomial_key(&structure, key)?, parse(value)?);
                    }
                    Some(table)
                }
            };
            polys.push(Poly { degree, coeffs });
        }
        PolySystem::new(structure, polys)
    }

    pub fn from_rational_system(system: &PolySystem<BigRational>) -> Self {
        Self::from_system(system, Arithmetic::Rational, |v| {
            Value::String(format_rational(v))
        })
    }

    pub fn from_f64_system(system: &PolySystem<f64>) -> Self {
        Self::from_system(system, Arithmetic::Float64, |v| {
            serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or(Value::Null)
        })
    }

    fn from_system<T: koszul_core::scalar::Coeff>(
        system: &PolySystem<T>,
        arithmetic: Arithmetic,
        fmt: impl Fn(&T) -> Value,
    ) -> Self {
        let s = &system.structure;
        let a = s.a();
        let polynomials = system
            .polys
            .iter()
            .map(|p| PolyDoc {
                multidegree: DegreeDoc {
                    x: p.degree.0[..a].to_vec(),
                    y: p.degree.0[a..].to_vec(),
                },
                coefficients: p.coeffs.as_ref().map(|table| {
                    table
                        .iter()
                        .map(|(k, v)| (format_monomial_key(s, k), fmt(v)))
                        .collect()
                }),
            })
            .collect();
        SystemDocument {
            blocks: BlocksDoc {
                alpha: s.alpha().to_vec(),
                beta: s.beta().to_vec(),
            },
            arithmetic,
            polynomials,
        }
    }
}

impl MepDocument {
    pub fn to_instance_f64(&self) -> Result<MepInstance<f64>> {
        self.to_instance(Ok)
    }

    pub fn to_instance_rational(&self) -> Result<MepInstance<BigRational>> {
        self.to_instance(|v| {
            if v.fract() != 0.0 || v.abs() > 2f64.powi(52) {
                return Err(Error::Parse(format!(
                    "rational MEP matrices must have integer entries, got {v}"
                )));
            }
            Ok(BigRational::from_integer((v as i64).into()))
        })
    }

    fn to_instance<T: koszul_core::scalar::Coeff>(
        &self,
        conv: impl Fn(f64) -> Result<T>,
    ) -> Result<MepInstance<T>> {
        if self.beta.len() != self.alpha {
            return Err(Error::Parse(format!(
                "beta lists {} sizes but alpha = {}",
                self.beta.len(),
                self.alpha
            )));
        }
        let mut matrices = Vec::with_capacity(self.alpha);
        for t in 1..=self.alpha {
            let mut row = Vec::with_capacity(self.alpha + 1);
            for j in 0..=self.alpha {
                let key = format!("M_{t}_{j}");
                let m = self
                    .matrices
                    .get(&key)
                    .ok_or_else(|| Error::Parse(format!("missing matrix {key}")))?;
                let size = self.beta[t - 1] + 1;
                if m.len() != size || m.iter().any(|r| r.len() != size) {
                    return Err(Error::Parse(format!("matrix {key} must be {size} x {size}")));
                }
                let mut mat = Mat::zeros(size, size);
                for (i, r) in m.iter().enumerate() {
                    for (l, &v) in r.iter().enumerate() {
                        mat[(i, l)] = conv(v)?;
                    }
                }
                row.push(mat);
            }
            matrices.push(row);
        }
        if let Some(f0) = &self.f0 {
            if f0.len() != self.alpha + 1 {
                return Err(Error::Parse(format!(
                    "f0 needs {} coefficients",
                    self.alpha + 1
                )));
            }
        }
        MepInstance::new(self.beta.clone(), matrices)
    }

    pub fn from_instance(inst: &MepInstance<f64>, f0: Option<Vec<f64>>) -> Self {
        let alpha = inst.alpha();
        let mut matrices = BTreeMap::new();
        for t in 1..=alpha {
            for j in 0..=alpha {
                let m = &inst.matrices[t - 1][j];
                let rows: Vec<Vec<f64>> = (0..m.nrows)
                    .map(|i| (0..m.ncols).map(|l| m[(i, l)]).collect())
                    .collect();
                matrices.insert(format!("M_{t}_{j}"), rows);
            }
        }
        MepDocument {
            alpha,
            beta: inst.betas.clone(),
            matrices,
            f0,
        }
    }
}

/// Exact integer rendered as a JSON number when it fits, else a string.
pub fn biguint_value(v: &num::BigUint) -> Value {
    match v.to_u64() {
        Some(n) if n < (1u64 << 53) => Value::from(n),
        _ => Value::String(v.to_string()),
    }
}

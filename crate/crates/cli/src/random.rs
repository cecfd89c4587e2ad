//! Seeded random instance generators for star, bipartite, and MEP
//! documents.

use koszul_core::blocks::{BlockStructure, Multidegree, Poly, PolySystem};
use koszul_core::error::{Error, Result};
use koszul_core::formulas::{BipartiteShape, F0Case, StarShape};
use koszul_core::mat::Mat;
use koszul_core::solver::{construct_vanishing_system, random_system, MepInstance};
use num::rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::docs::{Arithmetic, MepDocument, SystemDocument};

pub struct SystemSpec {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    /// Star counts (length B) or bipartite counts (A rows of length B).
    pub counts: Vec<Vec<usize>>,
    pub star: bool,
    pub f0_case: Option<F0Case>,
    pub arithmetic: Arithmetic,
    pub vanishing: bool,
}

fn degrees_for(spec: &SystemSpec, structure: &BlockStructure) -> Result<Vec<Multidegree>> {
    let square = if spec.star {
        if spec.counts.len() != 1 {
            return Err(Error::Parse("star counts must be a single list".into()));
        }
        StarShape::new(structure.clone(), spec.counts[0].clone())?.square_degrees()
    } else {
        BipartiteShape::new(structure.clone(), spec.counts.clone())?.square_degrees()
    };
    let mut degrees = Vec::new();
    if let Some(case) = &spec.f0_case {
        let d0 = case.d0(structure)?;
        let valid = if spec.star {
            koszul_core::formulas::validate_star_d0(structure, &d0)
        } else {
            koszul_core::formulas::validate_bipartite_d0(structure, &d0)
        };
        if !valid {
            return Err(Error::InvalidData(format!(
                "{case:?} is not admissible for this shape"
            )));
        }
        degrees.push(d0);
    }
    degrees.extend(square);
    Ok(degrees)
}

pub fn random_system_document(spec: &SystemSpec, rng: &mut ChaCha8Rng) -> Result<SystemDocument> {
    let structure = BlockStructure::new(spec.alpha.clone(), spec.beta.clone())?;
    let degrees = degrees_for(spec, &structure)?;
    if spec.vanishing {
        if spec.arithmetic != Arithmetic::Rational {
            return Err(Error::Parse(
                "vanishing construction requires rational arithmetic".into(),
            ));
        }
        let (sys, _) = construct_vanishing_system(&structure, &degrees, rng)?;
        return Ok(SystemDocument::from_rational_system(&sys));
    }
    match spec.arithmetic {
        Arithmetic::Rational => {
            let sys = random_system(&structure, &degrees, rng)?;
            Ok(SystemDocument::from_rational_system(&sys))
        }
        Arithmetic::Float64 => {
            let sys: PolySystem<BigRational> = random_system(&structure, &degrees, rng)?;
            let polys = sys
                .polys
                .iter()
                .map(|p| Poly {
                    degree: p.degree.clone(),
                    coeffs: p.coeffs.as_ref().map(|t| {
                        t.iter()
                            .map(|(k, v)| {
                                (k.clone(), num::ToPrimitive::to_f64(v).unwrap_or(0.0))
                            })
                            .collect()
                    }),
                })
                .collect();
            let sys64 = PolySystem::new(structure, polys)?;
            Ok(SystemDocument::from_f64_system(&sys64))
        }
    }
}

pub fn random_mep_document(
    betas: &[usize],
    with_f0: bool,
    rng: &mut ChaCha8Rng,
) -> Result<MepDocument> {
    let alpha = betas.len();
    let matrices: Vec<Vec<Mat<f64>>> = betas
        .iter()
        .map(|&b| {
            (0..=alpha)
                .map(|_| Mat::from_fn(b + 1, b + 1, |_, _| rng.gen_range(-9i32..=9) as f64))
                .collect()
        })
        .collect();
    let inst = MepInstance::new(betas.to_vec(), matrices)?;
    let f0 = with_f0
        .then(|| (0..=alpha).map(|_| rng.gen_range(-1000i32..=1000) as f64).collect());
    Ok(MepDocument::from_instance(&inst, f0))
}

//! Regenerates the golden fixture documents under fixtures/.
//!
//! Run with: cargo run -p koszul-cli --example gen_fixtures

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use koszul_cli::docs::{Arithmetic, MepDocument, SystemDocument};
use koszul_cli::random::{random_system_document, SystemSpec};
use koszul_core::blocks::{BlockStructure, Multidegree, Poly, PolySystem};
use koszul_core::formulas::F0Case;
use koszul_core::mat::Mat;
use koszul_core::solver::{mep_to_system, MepInstance};
use num::rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn mat_i64(rows: [[i64; 2]; 2]) -> Mat<f64> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect())
}

fn two_parameter_instance() -> MepInstance<f64> {
    MepInstance::new(
        vec![1, 1],
        vec![
            vec![
                mat_i64([[-7, -3], [-8, -2]]),
                mat_i64([[12, 2], [13, 1]]),
                mat_i64([[-7, -1], [-7, -1]]),
            ],
            vec![
                mat_i64([[-11, -3], [4, 1]]),
                mat_i64([[7, -1], [1, 2]]),
                mat_i64([[-4, 0], [-1, -1]]),
            ],
        ],
    )
    .unwrap()
}

fn write(path: &Path, value: &impl serde::Serialize) {
    let text = serde_json::to_string_pretty(value).unwrap();
    fs::write(path, text + "\n").unwrap();
    println!("wrote {}", path.display());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    fs::create_dir_all(&dir).unwrap();

    // three symbolic (1,1)-forms on P1 x P1
    let s = BlockStructure::new(vec![1], vec![1]).unwrap();
    let bilinear = PolySystem::<BigRational>::new(
        s,
        (0..3)
            .map(|_| Poly::symbolic(Multidegree::new(vec![1, 1])))
            .collect(),
    )
    .unwrap();
    write(
        &dir.join("bilinear_p1p1.json"),
        &SystemDocument::from_rational_system(&bilinear),
    );

    // star shape alpha = (1,1), beta = (1,1), E = (2,2), f0 center-vertex
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let star = random_system_document(
        &SystemSpec {
            alpha: vec![1, 1],
            beta: vec![1, 1],
            counts: vec![vec![2, 2]],
            star: true,
            f0_case: Some(F0Case::CenterVertex),
            arithmetic: Arithmetic::Rational,
            vanishing: false,
        },
        &mut rng,
    )
    .unwrap();
    write(&dir.join("star_a2b2.json"), &star);

    // bipartite shape alpha = (1,2), beta = (1,2), E = [[1,2],[1,2]],
    // f0 bilinear in (X1, Y1)
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let bi = random_system_document(
        &SystemSpec {
            alpha: vec![1, 2],
            beta: vec![1, 2],
            counts: vec![vec![1, 2], vec![1, 2]],
            star: false,
            f0_case: Some(F0Case::XY(0, 0)),
            arithmetic: Arithmetic::Rational,
            vanishing: false,
        },
        &mut rng,
    )
    .unwrap();
    write(&dir.join("bipartite_a12b12.json"), &bi);

    // the worked two-parameter instance and its bilinearization
    let inst = two_parameter_instance();
    write(
        &dir.join("mep_2ep.json"),
        &MepDocument::from_instance(&inst, Some(vec![-1.0, 5.0, -3.0])),
    );

    let rational = inst.map(|&v| rat(v as i64));
    let mut system = mep_to_system(&rational);
    let mut f0_table: BTreeMap<_, _> = BTreeMap::new();
    for (j, c) in [-1i64, 5, -3].into_iter().enumerate() {
        let mut x = vec![0u16; 3];
        x[j] = 1;
        f0_table.insert(
            koszul_core::blocks::ExponentVector(vec![x, vec![0, 0], vec![0, 0]]),
            rat(c),
        );
    }
    system.polys.insert(
        0,
        Poly::with_coeffs(Multidegree::new(vec![1, 0, 0]), f0_table),
    );
    write(
        &dir.join("mep_2ep_system.json"),
        &SystemDocument::from_rational_system(&system),
    );
}

//! Built-in scenario set used by the test suite and shipped as examples.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{normal_matrix, CorpusKind};
use crate::extmath::{ExtCard, INF};
use crate::operators::ComplexMatrix;
use crate::theorems::EXAMPLES;

use super::scenario::{AtomSpec, Command, CorpusSpec, EntrySpec, KindSpec, Params, Scenario};

/// Region whose 16x16 cell centers include every point of `{0, .., 3} + {-2, .., 1}i`
/// at quarter steps.
const INTEGER_REGION: [f64; 4] = [-0.125, 3.875, -2.125, 1.875];
const UNIT_REGION: [f64; 4] = [-1.5, 1.5, -1.5, 1.5];

fn s(kind: &str) -> EntrySpec {
    EntrySpec::Structured(KindSpec::named(kind))
}

fn diagonal(atoms: &[([f64; 2], ExtCard)], acc: &[[f64; 2]]) -> EntrySpec {
    let mut k = KindSpec::named("diagonal");
    k.atoms = atoms.iter().map(|&(value, multiplicity)| AtomSpec { value, multiplicity }).collect();
    k.accumulation_points = acc.to_vec();
    EntrySpec::Structured(k)
}

fn scaled(c: [f64; 2], inner: &str) -> EntrySpec {
    let mut k = KindSpec::named("scalar_multiple");
    k.scalar = Some(c);
    k.of = Some(Box::new(KindSpec::named(inner)));
    EntrySpec::Structured(k)
}

fn normal(rng: &mut ChaCha8Rng, eig: &[(f64, f64)]) -> EntrySpec {
    let eig: Vec<Complex64> = eig.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    EntrySpec::dense(&normal_matrix(rng, &eig))
}

fn scan(name: &str, family: &str, tuple: Vec<EntrySpec>, region: [f64; 4], res: usize) -> Scenario {
    Scenario {
        name: name.into(),
        command: Command::Scan,
        family: Some(family.into()),
        tuple: Some(tuple),
        params: Params { region: Some(region), resolution: [res, res], ..Params::default() },
    }
}

/// Ten scan scenarios covering every spectral family; the two dense ones put
/// all eigenvalues on cell centers.
pub fn scan_scenarios() -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let dense_triple = vec![
        normal(&mut rng, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]),
        normal(&mut rng, &[(1.0, 0.0), (3.0, 0.0)]),
        normal(&mut rng, &[(0.0, 0.0), (2.0, -1.0), (2.0, -1.0)]),
    ];
    let dense_pair = vec![
        normal(&mut rng, &[(0.0, 0.0), (1.0, 1.0)]),
        normal(&mut rng, &[(1.0, 1.0), (3.0, -2.0), (0.0, 0.0)]),
    ];
    vec![
        scan("shift_pair_spec", "spec", vec![s("unilateral_shift"), s("backward_shift")], UNIT_REGION, 32),
        scan("shift_pair_left_spec", "left_spec", vec![s("unilateral_shift"), s("backward_shift")], UNIT_REGION, 32),
        scan(
            "accumulating_right_spec",
            "right_spec",
            vec![s("unilateral_shift"), diagonal(&[], &[[0.5, 0.0]]), s("backward_shift")],
            UNIT_REGION,
            32,
        ),
        scan(
            "atoms_left_weyl",
            "left_weyl_spec",
            vec![s("unilateral_shift"), diagonal(&[([0.5, 0.0], INF)], &[[-0.5, 0.0]])],
            UNIT_REGION,
            32,
        ),
        scan(
            "scaled_right_weyl",
            "right_weyl_spec",
            vec![scaled([2.0, 0.0], "unilateral_shift"), diagonal(&[([0.0, 0.0], INF)], &[]), s("backward_shift")],
            [-2.5, 2.5, -2.5, 2.5],
            32,
        ),
        scan(
            "identity_left_ess",
            "left_ess_spec",
            vec![s("backward_shift"), s("identity"), s("unilateral_shift")],
            UNIT_REGION,
            32,
        ),
        scan("zero_right_ess", "right_ess_spec", vec![s("unilateral_shift"), s("zero"), s("backward_shift")], UNIT_REGION, 32),
        scan(
            "mixed_ess",
            "ess_spec",
            vec![
                s("unilateral_shift"),
                diagonal(&[([0.5, 0.5], INF), ([-0.5, 0.0], ExtCard::Finite(2))], &[[0.0, 0.0]]),
                s("backward_shift"),
            ],
            UNIT_REGION,
            32,
        ),
        scan("dense_triple_spec", "spec", dense_triple, INTEGER_REGION, 16),
        scan("dense_pair_spec", "spec", dense_pair, INTEGER_REGION, 16),
    ]
}

/// Scan scenarios plus one or more scenarios for every other command.
pub fn sample_scenarios() -> Vec<Scenario> {
    let identity = EntrySpec::dense(&ComplexMatrix::identity(2));
    let zero = EntrySpec::dense(&ComplexMatrix::zeros(2, 2));
    let mut out = vec![
        Scenario {
            name: "shift_pair_analyze".into(),
            command: Command::Analyze,
            family: Some("invertible".into()),
            tuple: Some(vec![s("unilateral_shift"), s("backward_shift")]),
            params: Params::default(),
        },
        Scenario {
            name: "weyl_deficiency_analyze".into(),
            command: Command::Analyze,
            family: Some("left_weyl".into()),
            tuple: Some(vec![
                EntrySpec::Structured(KindSpec { dim: Some(INF), ..KindSpec::named("isometry") }),
                diagonal(&[([0.0, 0.0], INF)], &[]),
            ]),
            params: Params::default(),
        },
        Scenario {
            name: "zero_identity_complete".into(),
            command: Command::Complete,
            family: Some("left".into()),
            tuple: Some(vec![zero.clone(), identity.clone()]),
            params: Params::default(),
        },
        Scenario {
            name: "identity_zero_complete".into(),
            command: Command::Complete,
            family: Some("left".into()),
            tuple: Some(vec![identity, zero]),
            params: Params::default(),
        },
        Scenario {
            name: "left_corpus_verify".into(),
            command: Command::Verify,
            family: Some("left".into()),
            tuple: None,
            params: Params { corpus: Some(CorpusSpec { kind: CorpusKind::Left, count: 500 }), ..Params::default() },
        },
    ];
    out.extend(EXAMPLES.iter().map(|ex| Scenario {
        name: format!("{ex}_certify"),
        command: Command::Certify,
        family: None,
        tuple: None,
        params: Params { example: Some(ex.to_string()), ..Params::default() },
    }));
    out.extend(scan_scenarios());
    out
}

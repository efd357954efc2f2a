//! Shared fixtures for the CLI and acceptance tests: a small smoke-test
//! CSV and a deterministic benchmark-scale dataset generator.
//!
//! The benchmark labels follow real single-bond energetics: a base value
//! per element pair, strengthened by sp2/sp hybridization, weakened by
//! heteroatom neighbors, plus heteroscedastic noise that grows away from
//! the 90 kcal/mol center (dense mid-range, noisy extremes).

use bondbench_core::chem::{self, FeatureVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::Path;

pub fn write_smoke_csv(path: &Path) {
    let rows = [
        ("CC", 0, "C-C", 83.2),
        ("CC", 1, "C-H", 99.1),
        ("CC", 4, "C-H", 98.7),
        ("CCC", 0, "C-C", 84.0),
        ("CCC", 3, "C-H", 98.9),
        ("CCO", 1, "O-C", 85.3),
        ("CCO", 7, "O-H", 104.9),
        ("CO", 0, "O-C", 86.1),
        ("CO", 4, "O-H", 105.2),
        ("CN", 0, "N-C", 79.4),
        ("CN", 4, "N-H", 99.5),
        ("CCN", 1, "N-C", 78.8),
        ("C", 0, "C-H", 99.3),
        ("C", 1, "C-H", 99.0),
        ("CCCC", 1, "C-C", 82.9),
        ("CCCC", 5, "C-H", 98.4),
        ("CC(C)C", 1, "C-C", 84.4),
        ("CC(C)C", 4, "C-H", 96.5),
        ("OCCO", 1, "C-C", 81.9),
        ("OCCO", 3, "O-H", 104.1),
        ("CCS", 1, "S-C", 69.8),
        ("CCS", 7, "S-H", 87.0),
        ("CCCl", 1, "Cl-C", 80.9),
        ("CCBr", 1, "Br-C", 67.5),
        ("CCCCC", 2, "C-C", 83.6),
        ("CCCCC", 7, "C-H", 98.8),
        ("CCOC", 1, "O-C", 84.8),
        ("CCOC", 2, "O-C", 84.2),
        ("NCCN", 1, "C-C", 80.5),
        ("NCCN", 4, "N-H", 99.2),
    ];
    let mut out = String::from("smiles,bond_index,bond_type,bde\n");
    for (s, i, t, b) in rows {
        let _ = writeln!(out, "{s},{i},{t},{b}");
    }
    // one malformed SMILES row to exercise the rejection log
    out.push_str("C(,0,C-C,85.0\n");
    std::fs::write(path, out).unwrap();
}

/// Approximate homolytic single-bond energies by element pair (z_a >= z_b).
fn base_bde(z_a: u32, z_b: u32) -> f64 {
    match (z_a, z_b) {
        (6, 1) => 99.0,   // C-H
        (6, 6) => 84.0,   // C-C
        (7, 1) => 97.0,   // N-H
        (7, 6) => 76.0,   // C-N
        (7, 7) => 55.0,   // N-N
        (8, 1) => 106.0,  // O-H
        (8, 6) => 86.0,   // C-O
        (8, 7) => 58.0,   // N-O
        (8, 8) => 47.0,   // O-O
        (9, 6) => 113.0,  // C-F
        (16, 1) => 87.0,  // S-H
        (16, 6) => 70.0,  // C-S
        (17, 6) => 81.0,  // C-Cl
        (35, 6) => 68.0,  // C-Br
        (53, 6) => 55.0,  // C-I
        _ => 80.0,
    }
}

/// Ground-truth label as a function of the six descriptors only, so the
/// task is learnable from the features every model sees.
pub fn true_bde(f: &FeatureVector) -> f64 {
    let mut v = base_bde(f.z_a as u32, f.z_b as u32);
    if f.z_b == 1.0 {
        // X-H bonds strengthen with unsaturation of the heavy partner
        if f.hyb_a == 2.0 {
            v += 12.0;
        } else if f.hyb_a == 1.0 {
            v += 16.0;
        }
    } else if f.hyb_a == 2.0 || f.hyb_b == 2.0 {
        v += 4.0;
    }
    // alpha heteroatoms/carbons weaken the bond
    v - 1.5 * f.env
}

/// Noise scale grows quadratically away from the mid-range center.
pub fn noise_sigma(base: f64) -> f64 {
    10.0 + 8.0 * ((base - 90.0) / 35.0).powi(2)
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Molecule library with repetition weights. Rare-bond molecules carry
/// higher weights so every class keeps a workable presence; the overall
/// distribution stays mid-range heavy.
const LIBRARY: &[(&str, usize)] = &[
    // alkanes
    ("C", 1), ("CC", 1), ("CCC", 1), ("CCCC", 1), ("CC(C)C", 1),
    ("CCCCC", 1), ("CC(C)(C)C", 1), ("CCCCCC", 1), ("C1CCCCC1", 1),
    ("C1CCCC1", 1), ("CC(C)CC", 1),
    // alcohols and ethers
    ("CO", 1), ("CCO", 1), ("CCCO", 1), ("CC(C)O", 1), ("OCCO", 1),
    ("CC(O)C", 1), ("CCCCO", 1), ("COC", 1), ("CCOC", 1), ("CCOCC", 1),
    ("C1CCOC1", 1), ("OCC(O)CO", 1),
    // amines
    ("CN", 1), ("CCN", 1), ("CCCN", 1), ("CN(C)C", 1), ("NCCN", 1),
    ("CC(C)N", 1), ("NCCO", 1),
    // carbonyl-containing (the C=O bond itself is not labeled)
    ("CC=O", 1), ("CCC=O", 1), ("CC(=O)C", 1), ("CC(=O)O", 1),
    ("CC(=O)OC", 1), ("CC(=O)N", 1),
    // aromatics (aryl C-H is labeled; ring bonds are not)
    ("c1ccccc1", 1), ("Cc1ccccc1", 1), ("CCc1ccccc1", 1),
    ("c1ccc(O)cc1", 1), ("c1ccc(N)cc1", 1), ("Cc1ccc(C)cc1", 1),
    ("c1ccncc1", 1), ("Cc1ccco1", 1),
    // alkenes and alkynes (terminal alkyne C-H is the high extreme)
    ("C=C", 1), ("CC=C", 1), ("CC=CC", 1), ("CC(=C)C", 1), ("C=CCO", 1),
    ("C=CCC", 1), ("C#C", 4), ("CC#C", 4), ("CC#CC", 1), ("CC#N", 2),
    ("C=CC=C", 1),
    // halides
    ("CF", 2), ("CCF", 2), ("FC(F)F", 1), ("FCCF", 1), ("CCCF", 1),
    ("CCl", 2), ("CCCl", 2), ("ClCCCl", 1), ("CC(C)Cl", 2),
    ("CBr", 2), ("CCBr", 2), ("CCCBr", 2), ("CC(C)Br", 2), ("BrCCBr", 1),
    ("CI", 3), ("CCI", 3), ("CCCI", 3), ("CC(C)I", 3),
    // sulfur
    ("CS", 3), ("CCS", 3), ("CSC", 1), ("CCSC", 1), ("CCCS", 3),
    // weak-bond extremes
    ("OO", 4), ("COO", 4), ("CCOO", 4), ("COOC", 4), ("CC(C)OO", 4),
    ("CCOOC", 4), ("CCOOCC", 4), ("NN", 2), ("CNN", 2), ("CNNC", 2),
    ("CCNN", 2), ("CC(C)NN", 2), ("CN(C)NC", 2), ("NO", 3), ("CON", 3),
    ("CCON", 3), ("CC(C)ON", 3),
];

/// Generate the benchmark CSV: every single (order-1) bond of every
/// library molecule, `weight * copies` times with independent noise.
/// Returns the number of rows written.
pub fn generate_benchmark_csv(path: &Path, copies: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("smiles,bond_index,bond_type,bde\n");
    let mut n = 0usize;
    for _ in 0..copies {
        for (smiles, weight) in LIBRARY {
            let mol = chem::parse_smiles(smiles).unwrap_or_else(|e| panic!("{smiles}: {e}"));
            for _ in 0..*weight {
                for bond_index in 0..mol.bond_count() {
                    let features = chem::bond_features(&mol, bond_index).unwrap();
                    if features.bond_order != 1.0 {
                        continue; // only single bonds carry labels
                    }
                    let label = chem::bond_class(&mol, bond_index).unwrap();
                    let base = true_bde(&features);
                    let bde = (base + noise_sigma(base) * standard_normal(&mut rng))
                        .clamp(35.0, 129.5);
                    let _ = writeln!(out, "{smiles},{bond_index},{label},{bde:.4}");
                    n += 1;
                }
            }
        }
    }
    std::fs::write(path, out).unwrap();
    n
}

//! Molecular graphs from a SMILES subset, plus the bond descriptors fed to
//! the regression models: atomic numbers, hybridization codes, bond order,
//! and heteroatom-neighbor counts.

mod smiles;

pub use smiles::{parse_smiles, ParseError, ParseErrorKind};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChemError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bond index {index} out of range: molecule has {count} bonds")]
    BadBondIndex { index: usize, count: usize },
    #[error("no bond between atoms {a} and {b}")]
    NoSuchBond { a: usize, b: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Numeric encoding used in feature vectors; aromatic sits between
    /// single and double.
    pub fn as_feature(self) -> f64 {
        match self {
            BondOrder::Single => 1.0,
            BondOrder::Aromatic => 1.5,
            BondOrder::Double => 2.0,
            BondOrder::Triple => 3.0,
        }
    }

    fn label_separator(self) -> char {
        match self {
            BondOrder::Single => '-',
            BondOrder::Aromatic => ':',
            BondOrder::Double => '=',
            BondOrder::Triple => '#',
        }
    }
}

#[derive(Clone, Debug)]
pub struct Atom {
    pub symbol: String,
    pub atomic_number: u8,
    pub aromatic: bool,
    pub formal_charge: i8,
    /// Hydrogen count: explicit (bracket atoms) or computed by the valence
    /// rule (organic subset).
    pub h_count: u8,
    /// True when `h_count` was stated in the input rather than derived.
    pub explicit_h: bool,
    /// Byte offset of the atom token in the source string.
    pub offset: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

/// Molecular graph with hydrogens materialized as real atoms.
///
/// Atom order: heavy atoms in parse order, then hydrogens grouped by their
/// heavy atom. Bond order: heavy-atom bonds in parse order (a bond is
/// created at the position where it completes), then H bonds grouped by
/// heavy-atom index. `bond_index` fields in datasets refer to this order.
#[derive(Clone, Debug)]
pub struct MolGraph {
    pub atoms: Vec<Atom>,
    pub bonds: Vec<Bond>,
    pub n_heavy_atoms: usize,
    pub n_heavy_bonds: usize,
    pub ring_atoms: Vec<bool>,
    pub ring_bonds: Vec<bool>,
}

impl MolGraph {
    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// Find the bond joining two atom indices, in either order.
    pub fn find_bond(&self, a: usize, b: usize) -> Option<usize> {
        self.bonds
            .iter()
            .position(|bond| (bond.a == a && bond.b == b) || (bond.a == b && bond.b == a))
    }

    /// Distinct neighbors of `atom` over all bonds.
    fn neighbors(&self, atom: usize) -> impl Iterator<Item = usize> + '_ {
        self.bonds.iter().filter_map(move |b| {
            if b.a == atom {
                Some(b.b)
            } else if b.b == atom {
                Some(b.a)
            } else {
                None
            }
        })
    }
}

/// Hybridization code: sp = 1, sp2 = 2, sp3 = 3.
///
/// sp when the atom has a triple bond or at least two double bonds; sp2
/// when aromatic or carrying exactly one double bond; sp3 otherwise.
pub fn assign_hybridization(mol: &MolGraph, atom: usize) -> u8 {
    let mut doubles = 0;
    let mut triples = 0;
    for b in &mol.bonds {
        if b.a == atom || b.b == atom {
            match b.order {
                BondOrder::Double => doubles += 1,
                BondOrder::Triple => triples += 1,
                _ => {}
            }
        }
    }
    if triples >= 1 || doubles >= 2 {
        1
    } else if mol.atoms[atom].aromatic || doubles == 1 {
        2
    } else {
        3
    }
}

/// One curated bond with its target energy in kcal/mol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondRecord {
    pub smiles: String,
    pub bond_index: usize,
    pub bond_type: String,
    pub bde: f64,
}

/// The 6-entry descriptor: endpoint atomic numbers, endpoint hybridization
/// codes, bond order, and the count of C/O/N atoms bonded to either
/// endpoint (the endpoints themselves excluded).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub z_a: f64,
    pub z_b: f64,
    pub hyb_a: f64,
    pub hyb_b: f64,
    pub bond_order: f64,
    pub env: f64,
}

pub const N_FEATURES: usize = 6;

impl FeatureVector {
    pub fn to_array(self) -> [f64; N_FEATURES] {
        [
            self.z_a,
            self.z_b,
            self.hyb_a,
            self.hyb_b,
            self.bond_order,
            self.env,
        ]
    }
}

/// Features of one bond in an already-parsed molecule. Endpoint order is
/// normalized so that z_a >= z_b, ties broken by hyb_a >= hyb_b.
pub fn bond_features(mol: &MolGraph, bond_index: usize) -> Result<FeatureVector, ChemError> {
    let bond = mol.bonds.get(bond_index).ok_or(ChemError::BadBondIndex {
        index: bond_index,
        count: mol.bonds.len(),
    })?;
    let (a, b) = (bond.a, bond.b);
    let mut z_a = mol.atoms[a].atomic_number as f64;
    let mut z_b = mol.atoms[b].atomic_number as f64;
    let mut hyb_a = assign_hybridization(mol, a) as f64;
    let mut hyb_b = assign_hybridization(mol, b) as f64;
    if (z_a, hyb_a) < (z_b, hyb_b) {
        std::mem::swap(&mut z_a, &mut z_b);
        std::mem::swap(&mut hyb_a, &mut hyb_b);
    }

    let mut seen = Vec::new();
    for endpoint in [a, b] {
        for n in mol.neighbors(endpoint) {
            if n == a || n == b || seen.contains(&n) {
                continue;
            }
            if matches!(mol.atoms[n].atomic_number, 6 | 7 | 8) {
                seen.push(n);
            }
        }
    }

    Ok(FeatureVector {
        z_a,
        z_b,
        hyb_a,
        hyb_b,
        bond_order: bond.order.as_feature(),
        env: seen.len() as f64,
    })
}

/// Class label for one bond in a parsed molecule: element symbols sorted
/// by atomic number descending, joined by the bond-order separator, e.g.
/// "C-H", "O=C", "C:C".
pub fn bond_class(mol: &MolGraph, bond_index: usize) -> Result<String, ChemError> {
    let bond = mol.bonds.get(bond_index).ok_or(ChemError::BadBondIndex {
        index: bond_index,
        count: mol.bonds.len(),
    })?;
    let (mut first, mut second) = (&mol.atoms[bond.a], &mol.atoms[bond.b]);
    if first.atomic_number < second.atomic_number {
        std::mem::swap(&mut first, &mut second);
    }
    Ok(format!(
        "{}{}{}",
        first.symbol,
        bond.order.label_separator(),
        second.symbol
    ))
}

/// Parse the record's molecule and extract the feature vector for its bond.
pub fn extract_features(record: &BondRecord) -> Result<FeatureVector, ChemError> {
    let mol = parse_smiles(&record.smiles)?;
    bond_features(&mol, record.bond_index)
}

/// Parse the record's molecule and classify its bond.
pub fn classify_bond(record: &BondRecord) -> Result<String, ChemError> {
    let mol = parse_smiles(&record.smiles)?;
    bond_class(&mol, record.bond_index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(smiles: &str, bond_index: usize) -> BondRecord {
        BondRecord {
            smiles: smiles.into(),
            bond_index,
            bond_type: String::new(),
            bde: 100.0,
        }
    }

    #[test]
    fn hybridization_rules() {
        let nitrile = parse_smiles("C#N").unwrap();
        assert_eq!(assign_hybridization(&nitrile, 0), 1);
        assert_eq!(assign_hybridization(&nitrile, 1), 1);

        let benzene = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(assign_hybridization(&benzene, 0), 2);

        let methane = parse_smiles("C").unwrap();
        assert_eq!(assign_hybridization(&methane, 0), 3);

        let allene = parse_smiles("C=C=C").unwrap();
        assert_eq!(assign_hybridization(&allene, 1), 1); // two doubles -> sp
        assert_eq!(assign_hybridization(&allene, 0), 2);
    }

    #[test]
    fn ethane_cc_features() {
        // bond 0 is the parsed C-C bond
        let f = extract_features(&record("CC", 0)).unwrap();
        assert_eq!(f.to_array(), [6.0, 6.0, 3.0, 3.0, 1.0, 0.0]);
    }

    #[test]
    fn ethane_ch_features() {
        // heavy bonds: 1 (C-C), then H bonds: atom0's hydrogens at 1..4
        let f = extract_features(&record("CC", 1)).unwrap();
        assert_eq!(f.to_array(), [6.0, 1.0, 3.0, 3.0, 1.0, 1.0]);
    }

    #[test]
    fn formaldehyde_co_features() {
        let f = extract_features(&record("C=O", 0)).unwrap();
        assert_eq!(f.to_array(), [8.0, 6.0, 2.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn feature_endpoint_order_normalized() {
        // same bond reached from either direction gives the same vector:
        // "CO" bond 0 is C-O; "OC" bond 0 is O-C
        let a = extract_features(&record("CO", 0)).unwrap();
        let b = extract_features(&record("OC", 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.z_a, 8.0);
    }

    #[test]
    fn env_counts_distinct_neighbors() {
        // propane C-C bond: endpoints are atoms 0,1; neighbor carbon 2
        // counts once, hydrogens do not count
        let f = extract_features(&record("CCC", 0)).unwrap();
        assert_eq!(f.env, 1.0);
        // glycol C-C: two oxygens, one per endpoint
        let m = parse_smiles("OCCO").unwrap();
        let idx = m.find_bond(1, 2).unwrap();
        let f = bond_features(&m, idx).unwrap();
        assert_eq!(f.env, 2.0);
    }

    #[test]
    fn classify_labels() {
        assert_eq!(classify_bond(&record("CC", 0)).unwrap(), "C-C");
        assert_eq!(classify_bond(&record("C=O", 0)).unwrap(), "O=C");
        // methane bond 0 is a C-H bond
        assert_eq!(classify_bond(&record("C", 0)).unwrap(), "C-H");
        let benzene = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(bond_class(&benzene, 0).unwrap(), "C:C");
        let nitrile = parse_smiles("C#N").unwrap();
        assert_eq!(bond_class(&nitrile, 0).unwrap(), "N#C");
    }

    #[test]
    fn bad_bond_index() {
        let err = extract_features(&record("C", 10)).unwrap_err();
        assert!(matches!(
            err,
            ChemError::BadBondIndex {
                index: 10,
                count: 4
            }
        ));
    }

    #[test]
    fn features_total_on_valid_corpus() {
        let corpus = ["CCO", "c1ccccc1", "CC(=O)O", "C#N", "FC(F)F", "C1CCOC1"];
        for s in corpus {
            let m = parse_smiles(s).unwrap();
            for i in 0..m.bond_count() {
                let f = bond_features(&m, i).unwrap();
                assert!(f.to_array().iter().all(|v| v.is_finite()), "{s} bond {i}");
                assert!(matches!(f.hyb_a as u8, 1..=3));
                assert!(matches!(f.hyb_b as u8, 1..=3));
            }
        }
    }

    #[test]
    fn hybridization_depends_only_on_bond_multiset() {
        // two different molecules where an atom has the same bond-order
        // multiset produce the same code
        let a = parse_smiles("CC=O").unwrap(); // carbonyl C: 1 single + 1 double (+H)
        let b = parse_smiles("OC=C").unwrap(); // vinyl C: same multiset shape
        assert_eq!(assign_hybridization(&a, 1), assign_hybridization(&b, 1));
    }
}

//! Restricted SMILES parser: organic-subset and bracket atoms, aromatic
//! lowercase forms, explicit bonds, branches, and ring closures. No
//! stereochemistry, no isotopes, no disconnected fragments.

use super::{Atom, Bond, BondOrder, MolGraph};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unbalanced parenthesis")]
    UnbalancedParen,
    #[error("unmatched ring closure {0}")]
    UnmatchedRingClosure(u16),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    #[error("unsupported token: {0}")]
    Unsupported(String),
    #[error("valence violation on {symbol}: bond order sum {total}")]
    ValenceViolation { symbol: String, total: u32 },
    #[error("bond has no preceding atom")]
    DanglingBond,
    #[error("ring closure bond orders disagree")]
    RingBondMismatch,
    #[error("aromatic bond between non-aromatic atoms")]
    AromaticBondOutsideRing,
    #[error("empty input")]
    Empty,
}

/// Parse failure with the byte offset it was detected at.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

fn err<T>(offset: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { offset, kind })
}

pub(super) fn atomic_number(symbol: &str) -> Option<u8> {
    Some(match symbol {
        "H" => 1,
        "B" => 5,
        "C" => 6,
        "N" => 7,
        "O" => 8,
        "F" => 9,
        "P" => 15,
        "S" => 16,
        "Cl" => 17,
        "Br" => 35,
        "I" => 53,
        _ => return None,
    })
}

/// Standard valence alternatives, smallest first.
fn standard_valences(symbol: &str) -> &'static [u32] {
    match symbol {
        "H" | "F" | "Cl" | "Br" | "I" => &[1],
        "O" => &[2],
        "B" | "N" => &[3],
        "C" => &[4],
        "P" => &[3, 5],
        "S" => &[2, 4, 6],
        _ => &[],
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    branch_stack: Vec<usize>,
    ring_open: HashMap<u16, (usize, Option<BondOrder>)>,
    prev: Option<usize>,
    pending_bond: Option<(BondOrder, usize)>,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Self {
            bytes: input.as_bytes(),
            pos: 0,
            atoms: Vec::new(),
            bonds: Vec::new(),
            branch_stack: Vec::new(),
            ring_open: HashMap::new(),
            prev: None,
            pending_bond: None,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn add_atom(&mut self, atom: Atom) -> Result<(), ParseError> {
        let idx = self.atoms.len();
        let aromatic_new = atom.aromatic;
        self.atoms.push(atom);
        if let Some(prev) = self.prev {
            let order = match self.pending_bond.take() {
                Some((order, at)) => {
                    if order == BondOrder::Aromatic
                        && !(self.atoms[prev].aromatic && aromatic_new)
                    {
                        return err(at, ParseErrorKind::AromaticBondOutsideRing);
                    }
                    order
                }
                None => {
                    if self.atoms[prev].aromatic && aromatic_new {
                        BondOrder::Aromatic
                    } else {
                        BondOrder::Single
                    }
                }
            };
            self.bonds.push(Bond {
                a: prev,
                b: idx,
                order,
            });
        } else if let Some((_, at)) = self.pending_bond.take() {
            return err(at, ParseErrorKind::DanglingBond);
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn ring_closure(&mut self, key: u16, at: usize) -> Result<(), ParseError> {
        let Some(prev) = self.prev else {
            return err(at, ParseErrorKind::DanglingBond);
        };
        let pending = self.pending_bond.take().map(|(o, _)| o);
        if let Some((other, opening_bond)) = self.ring_open.remove(&key) {
            if other == prev {
                return err(at, ParseErrorKind::UnmatchedRingClosure(key));
            }
            let order = match (opening_bond, pending) {
                (Some(a), Some(b)) if a != b => {
                    return err(at, ParseErrorKind::RingBondMismatch)
                }
                (Some(o), _) | (None, Some(o)) => o,
                (None, None) => {
                    if self.atoms[other].aromatic && self.atoms[prev].aromatic {
                        BondOrder::Aromatic
                    } else {
                        BondOrder::Single
                    }
                }
            };
            if order == BondOrder::Aromatic
                && !(self.atoms[other].aromatic && self.atoms[prev].aromatic)
            {
                return err(at, ParseErrorKind::AromaticBondOutsideRing);
            }
            self.bonds.push(Bond {
                a: other,
                b: prev,
                order,
            });
        } else {
            self.ring_open.insert(key, (prev, pending));
        }
        Ok(())
    }

    fn parse_bracket(&mut self) -> Result<Atom, ParseError> {
        let open = self.pos;
        self.pos += 1; // consume '['
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            return err(self.pos, ParseErrorKind::Unsupported("isotope".into()));
        }
        // element symbol, possibly aromatic lowercase
        let (symbol, aromatic) = match self.peek() {
            Some(b @ b'A'..=b'Z') => {
                self.pos += 1;
                let mut sym = (b as char).to_string();
                if let Some(low @ b'a'..=b'z') = self.peek() {
                    let two = format!("{}{}", b as char, low as char);
                    if atomic_number(&two).is_some() {
                        self.pos += 1;
                        sym = two;
                    }
                }
                (sym, false)
            }
            Some(b @ b'a'..=b'z') if b"bcnops".contains(&b) => {
                self.pos += 1;
                ((b as char).to_ascii_uppercase().to_string(), true)
            }
            Some(c) => return err(self.pos, ParseErrorKind::UnknownSymbol(c as char)),
            None => return err(self.pos, ParseErrorKind::Unsupported("unclosed bracket".into())),
        };
        let Some(z) = atomic_number(&symbol) else {
            return err(open + 1, ParseErrorKind::UnknownSymbol(symbol.chars().next().unwrap()));
        };
        if self.peek() == Some(b'@') {
            return err(self.pos, ParseErrorKind::Unsupported("stereochemistry".into()));
        }
        // explicit hydrogens
        let mut explicit_h: u8 = 0;
        if self.peek() == Some(b'H') && symbol != "H" {
            self.pos += 1;
            explicit_h = 1;
            if let Some(d @ b'0'..=b'9') = self.peek() {
                self.pos += 1;
                explicit_h = d - b'0';
            }
        }
        // charge
        let mut charge: i8 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let unit: i8 = if sign == b'+' { 1 } else { -1 };
            self.pos += 1;
            charge = unit;
            if let Some(d @ b'1'..=b'9') = self.peek() {
                self.pos += 1;
                charge = unit * (d - b'0') as i8;
            } else {
                while self.peek() == Some(sign) {
                    self.pos += 1;
                    charge += unit;
                }
            }
        }
        if self.peek() != Some(b']') {
            let at = self.pos.min(self.bytes.len());
            return match self.peek() {
                Some(c) => err(at, ParseErrorKind::UnknownSymbol(c as char)),
                None => err(at, ParseErrorKind::Unsupported("unclosed bracket".into())),
            };
        }
        self.pos += 1;
        Ok(Atom {
            symbol,
            atomic_number: z,
            aromatic,
            formal_charge: charge,
            h_count: explicit_h,
            explicit_h: true,
            offset: open,
        })
    }

    fn run(mut self) -> Result<MolGraph, ParseError> {
        if self.bytes.is_empty() {
            return err(0, ParseErrorKind::Empty);
        }
        while let Some(b) = self.peek() {
            let at = self.pos;
            match b {
                b'(' => {
                    let Some(prev) = self.prev else {
                        return err(at, ParseErrorKind::UnbalancedParen);
                    };
                    self.branch_stack.push(prev);
                    self.pos += 1;
                }
                b')' => {
                    let Some(ret) = self.branch_stack.pop() else {
                        return err(at, ParseErrorKind::UnbalancedParen);
                    };
                    self.prev = Some(ret);
                    self.pos += 1;
                }
                b'-' => {
                    self.pending_bond = Some((BondOrder::Single, at));
                    self.pos += 1;
                }
                b'=' => {
                    self.pending_bond = Some((BondOrder::Double, at));
                    self.pos += 1;
                }
                b'#' => {
                    self.pending_bond = Some((BondOrder::Triple, at));
                    self.pos += 1;
                }
                b':' => {
                    self.pending_bond = Some((BondOrder::Aromatic, at));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    self.pos += 1;
                    self.ring_closure((b - b'0') as u16, at)?;
                }
                b'%' => {
                    self.pos += 1;
                    let d1 = self.peek();
                    self.pos += 1;
                    let d2 = self.peek();
                    let (Some(d1 @ b'0'..=b'9'), Some(d2 @ b'0'..=b'9')) = (d1, d2) else {
                        return err(at, ParseErrorKind::Unsupported("%ring number".into()));
                    };
                    self.pos += 1;
                    let key = ((d1 - b'0') as u16) * 10 + (d2 - b'0') as u16;
                    self.ring_closure(key, at)?;
                }
                b'[' => {
                    let atom = self.parse_bracket()?;
                    self.add_atom(atom)?;
                }
                b'A'..=b'Z' => {
                    self.pos += 1;
                    let mut sym = (b as char).to_string();
                    if let Some(low @ b'a'..=b'z') = self.peek() {
                        let two = format!("{}{}", b as char, low as char);
                        if atomic_number(&two).is_some() {
                            self.pos += 1;
                            sym = two;
                        }
                    }
                    // organic subset excludes bare H
                    let organic = matches!(
                        sym.as_str(),
                        "B" | "C" | "N" | "O" | "P" | "S" | "F" | "Cl" | "Br" | "I"
                    );
                    if !organic {
                        return err(at, ParseErrorKind::UnknownSymbol(b as char));
                    }
                    let z = atomic_number(&sym).unwrap();
                    self.add_atom(Atom {
                        symbol: sym,
                        atomic_number: z,
                        aromatic: false,
                        formal_charge: 0,
                        h_count: 0,
                        explicit_h: false,
                        offset: at,
                    })?;
                }
                b'a'..=b'z' if b"bcnops".contains(&b) => {
                    self.pos += 1;
                    let sym = (b as char).to_ascii_uppercase().to_string();
                    let z = atomic_number(&sym).unwrap();
                    self.add_atom(Atom {
                        symbol: sym,
                        atomic_number: z,
                        aromatic: true,
                        formal_charge: 0,
                        h_count: 0,
                        explicit_h: false,
                        offset: at,
                    })?;
                }
                other => return err(at, ParseErrorKind::UnknownSymbol(other as char)),
            }
        }
        let end = self.bytes.len();
        if !self.branch_stack.is_empty() {
            return err(end, ParseErrorKind::UnbalancedParen);
        }
        if let Some(key) = self.ring_open.keys().min().copied() {
            return err(end, ParseErrorKind::UnmatchedRingClosure(key));
        }
        if self.atoms.is_empty() {
            return err(0, ParseErrorKind::Empty);
        }
        finalize(self.atoms, self.bonds)
    }
}

/// Compute implicit hydrogens, materialize H atoms/bonds, and mark rings.
fn finalize(mut atoms: Vec<Atom>, mut bonds: Vec<Bond>) -> Result<MolGraph, ParseError> {
    let n_heavy_atoms = atoms.len();
    let n_heavy_bonds = bonds.len();

    // sigma + pi accounting for the valence rule: aromatic bonds count 1
    // toward the sigma framework; aromatic C/N/B/P contribute one pi bond,
    // aromatic O/S donate a lone pair instead.
    for i in 0..n_heavy_atoms {
        if atoms[i].explicit_h {
            continue; // bracket atoms carry their stated hydrogen count
        }
        let mut total: u32 = 0;
        let mut any_aromatic = false;
        for b in &bonds[..n_heavy_bonds] {
            if b.a == i || b.b == i {
                total += match b.order {
                    BondOrder::Single => 1,
                    BondOrder::Double => 2,
                    BondOrder::Triple => 3,
                    BondOrder::Aromatic => {
                        any_aromatic = true;
                        1
                    }
                };
            }
        }
        if atoms[i].aromatic && any_aromatic && matches!(atoms[i].symbol.as_str(), "C" | "N" | "B" | "P")
        {
            total += 1;
        }
        let valences = standard_valences(&atoms[i].symbol);
        let Some(v) = valences.iter().find(|v| **v >= total) else {
            return err(
                atoms[i].offset,
                ParseErrorKind::ValenceViolation {
                    symbol: atoms[i].symbol.clone(),
                    total,
                },
            );
        };
        atoms[i].h_count = (v - total) as u8;
    }

    // ring perception: bridges found by DFS low-link over heavy bonds
    let ring_bond_flags = find_ring_bonds(n_heavy_atoms, &bonds[..n_heavy_bonds]);
    let mut ring_atoms = vec![false; n_heavy_atoms];
    for (bi, b) in bonds[..n_heavy_bonds].iter().enumerate() {
        if ring_bond_flags[bi] {
            ring_atoms[b.a] = true;
            ring_atoms[b.b] = true;
        }
    }

    // aromatic atoms must sit in a ring of aromatic bonds
    for (i, atom) in atoms.iter().enumerate().take(n_heavy_atoms) {
        if atom.aromatic {
            let in_aromatic_ring = bonds[..n_heavy_bonds]
                .iter()
                .any(|b| (b.a == i || b.b == i) && b.order == BondOrder::Aromatic);
            if !in_aromatic_ring {
                return err(atom.offset, ParseErrorKind::AromaticBondOutsideRing);
            }
        }
    }

    // materialize hydrogens, grouped by heavy-atom index
    for i in 0..n_heavy_atoms {
        for _ in 0..atoms[i].h_count {
            let h_idx = atoms.len();
            atoms.push(Atom {
                symbol: "H".into(),
                atomic_number: 1,
                aromatic: false,
                formal_charge: 0,
                h_count: 0,
                explicit_h: true,
                offset: atoms[i].offset,
            });
            bonds.push(Bond {
                a: i,
                b: h_idx,
                order: BondOrder::Single,
            });
        }
    }

    let mut ring_bonds = ring_bond_flags;
    ring_bonds.resize(bonds.len(), false);
    ring_atoms.resize(atoms.len(), false);

    Ok(MolGraph {
        atoms,
        bonds,
        n_heavy_atoms,
        n_heavy_bonds,
        ring_atoms,
        ring_bonds,
    })
}

/// Flag bonds that participate in a cycle (i.e. are not bridges).
fn find_ring_bonds(n_atoms: usize, bonds: &[Bond]) -> Vec<bool> {
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_atoms];
    for (bi, b) in bonds.iter().enumerate() {
        adjacency[b.a].push((b.b, bi));
        adjacency[b.b].push((b.a, bi));
    }
    let mut visited = vec![false; n_atoms];
    let mut disc = vec![0usize; n_atoms];
    let mut low = vec![0usize; n_atoms];
    let mut is_bridge = vec![false; bonds.len()];
    let mut timer = 1usize;

    // iterative DFS to keep deep chains off the call stack
    for start in 0..n_atoms {
        if visited[start] {
            continue;
        }
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(start, None, 0)];
        visited[start] = true;
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        while let Some(&mut (u, in_edge, ref mut child)) = stack.last_mut() {
            if *child < adjacency[u].len() {
                let (v, edge) = adjacency[u][*child];
                *child += 1;
                if Some(edge) == in_edge {
                    continue;
                }
                if visited[v] {
                    low[u] = low[u].min(disc[v]);
                } else {
                    visited[v] = true;
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, Some(edge), 0));
                }
            } else {
                stack.pop();
                if let Some(&mut (parent, _, _)) = stack.last_mut() {
                    low[parent] = low[parent].min(low[u]);
                    if let Some(edge) = in_edge {
                        if low[u] > disc[parent] {
                            is_bridge[edge] = true;
                        }
                    }
                }
            }
        }
    }
    is_bridge.iter().map(|b| !b).collect()
}

/// Parse a SMILES string into a molecular graph with materialized
/// hydrogens and ring flags.
pub fn parse_smiles(input: &str) -> Result<MolGraph, ParseError> {
    Parser::new(input).run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn methane() {
        let m = parse_smiles("C").unwrap();
        assert_eq!(m.n_heavy_atoms, 1);
        assert_eq!(m.atoms[0].h_count, 4);
        assert_eq!(m.atoms.len(), 5);
        assert_eq!(m.bonds.len(), 4);
    }

    #[test]
    fn formaldehyde() {
        let m = parse_smiles("C=O").unwrap();
        assert_eq!(m.n_heavy_atoms, 2);
        assert_eq!(m.bonds[0].order, BondOrder::Double);
        assert_eq!(m.atoms[0].h_count, 2);
        assert_eq!(m.atoms[1].h_count, 0);
    }

    #[test]
    fn benzene() {
        let m = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(m.n_heavy_atoms, 6);
        assert_eq!(m.n_heavy_bonds, 6);
        assert!(m.bonds[..6].iter().all(|b| b.order == BondOrder::Aromatic));
        assert!(m.atoms[..6].iter().all(|a| a.aromatic && a.h_count == 1));
        assert!(m.ring_bonds[..6].iter().all(|r| *r));
    }

    #[test]
    fn unclosed_paren_reports_end_offset() {
        let e = parse_smiles("C(").unwrap_err();
        assert_eq!(e.offset, 2);
        assert_eq!(e.kind, ParseErrorKind::UnbalancedParen);
    }

    #[test]
    fn stray_close_paren() {
        let e = parse_smiles("C)C").unwrap_err();
        assert_eq!(e.offset, 1);
        assert_eq!(e.kind, ParseErrorKind::UnbalancedParen);
    }

    #[test]
    fn unmatched_ring() {
        let e = parse_smiles("C1CC").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(e.kind, ParseErrorKind::UnmatchedRingClosure(1));
    }

    #[test]
    fn unknown_symbol() {
        let e = parse_smiles("CXC").unwrap_err();
        assert_eq!(e.offset, 1);
        assert!(matches!(e.kind, ParseErrorKind::UnknownSymbol('X')));
    }

    #[test]
    fn stereochemistry_rejected() {
        assert!(parse_smiles("C/C=C/C").is_err());
        let e = parse_smiles("[C@H](N)C").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Unsupported(_)));
    }

    #[test]
    fn isotope_rejected() {
        let e = parse_smiles("[13C]").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Unsupported(_)));
    }

    #[test]
    fn valence_violation() {
        let e = parse_smiles("C(C)(C)(C)(C)C").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ValenceViolation { .. }));
        assert_eq!(e.offset, 0);
    }

    #[test]
    fn bracket_atoms() {
        let m = parse_smiles("[NH4+]").unwrap();
        assert_eq!(m.atoms[0].formal_charge, 1);
        assert_eq!(m.atoms[0].h_count, 4);
        assert_eq!(m.atoms.len(), 5);

        let m = parse_smiles("[O-]C").unwrap();
        assert_eq!(m.atoms[0].formal_charge, -1);
        assert_eq!(m.atoms[0].h_count, 0);

        let m = parse_smiles("c1cc[nH]c1").unwrap();
        assert_eq!(m.atoms[3].h_count, 1);
        assert!(m.atoms[3].aromatic);
    }

    #[test]
    fn two_letter_elements() {
        let m = parse_smiles("ClCBr").unwrap();
        assert_eq!(m.atoms[0].symbol, "Cl");
        assert_eq!(m.atoms[2].symbol, "Br");
        assert_eq!(m.atoms[1].h_count, 2);
    }

    #[test]
    fn percent_ring_closure() {
        let a = parse_smiles("C%12CCCCC%12").unwrap();
        let b = parse_smiles("C1CCCCC1").unwrap();
        assert_eq!(a.n_heavy_bonds, b.n_heavy_bonds);
        assert_eq!(a.bonds[..6].len(), 6);
    }

    #[test]
    fn explicit_ring_bond_order() {
        let m = parse_smiles("C=1CCCCC=1").unwrap();
        assert!(m.bonds[..m.n_heavy_bonds]
            .iter()
            .any(|b| b.order == BondOrder::Double));
        assert!(parse_smiles("C=1CCCCC#1").is_err());
    }

    #[test]
    fn aromatic_bond_requires_aromatic_atoms() {
        let e = parse_smiles("C:C").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::AromaticBondOutsideRing);
    }

    #[test]
    fn lone_aromatic_atom_rejected() {
        assert!(parse_smiles("c").is_err());
        assert!(parse_smiles("cC").is_err());
    }

    #[test]
    fn heteroaromatics() {
        // furan oxygen and thiophene sulfur carry no implicit H
        let furan = parse_smiles("o1cccc1").unwrap();
        assert_eq!(furan.atoms[0].h_count, 0);
        let pyridine = parse_smiles("n1ccccc1").unwrap();
        assert_eq!(pyridine.atoms[0].h_count, 0);
        let thiophene = parse_smiles("s1cccc1").unwrap();
        assert_eq!(thiophene.atoms[0].h_count, 0);
    }

    #[test]
    fn fused_rings() {
        let naphthalene = parse_smiles("c1ccc2ccccc2c1").unwrap();
        assert_eq!(naphthalene.n_heavy_atoms, 10);
        assert_eq!(naphthalene.n_heavy_bonds, 11);
        let n_h: u32 = naphthalene.atoms[..10].iter().map(|a| a.h_count as u32).sum();
        assert_eq!(n_h, 8);
    }

    #[test]
    fn dot_is_rejected() {
        assert!(parse_smiles("C.C").is_err());
    }

    #[test]
    fn hand_corpus_parses_valence_consistent() {
        let corpus = [
            "C", "CC", "CCC", "CCCC", "CC(C)C", "CCO", "CCN", "CC=O", "C=C",
            "C#C", "C#N", "CO", "OCCO", "CC(=O)O", "CC(=O)C", "c1ccccc1",
            "Cc1ccccc1", "c1ccc(O)cc1", "c1ccncc1", "CCS", "CSC", "CCl",
            "CBr", "CI", "CF", "FC(F)F", "C1CCCCC1", "C1CCOC1", "NCCO",
            "OO", "CON", "CCOC(=O)C", "c1cc[nH]c1", "N#CC",
        ];
        for s in corpus {
            let m = parse_smiles(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            // every heavy-atom bond-order sum + hydrogens matches one of the
            // standard valences
            for i in 0..m.n_heavy_atoms {
                if m.atoms[i].explicit_h || m.atoms[i].formal_charge != 0 {
                    continue;
                }
                let mut total = 0.0f64;
                for b in &m.bonds {
                    if b.a == i || b.b == i {
                        total += match b.order {
                            BondOrder::Single => 1.0,
                            BondOrder::Double => 2.0,
                            BondOrder::Triple => 3.0,
                            BondOrder::Aromatic => 1.5,
                        };
                    }
                }
                let sym = m.atoms[i].symbol.as_str();
                let ok = standard_valences(sym)
                    .iter()
                    .any(|v| (total - *v as f64).abs() <= 0.5 + 1e-9);
                assert!(ok, "{s}: atom {i} ({sym}) bond sum {total}");
            }
        }
    }
}

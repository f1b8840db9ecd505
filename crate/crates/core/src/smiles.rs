//! SMILES parsing and atom inventories.
//!
//! Covers the organic subset (B C N O P S F Cl Br I plus bare H), bracket
//! atoms with isotope/charge/explicit hydrogens, bond symbols `- = # :`,
//! branches, ring closures `1`-`9` and `%nn`, aromatic lowercase atoms, and
//! disconnected components (`.`). Stereo markers (`/ \ @ @@`) are accepted
//! and discarded: the downstream encoding uses composition only.
//!
//! Implicit hydrogens follow the usual valence model: the bond-order sum
//! (aromatic bonds count 1.5) is matched against the element's allowed
//! valences and the deficit is filled with hydrogens. Aromatic atoms use the
//! single aromatic valence and never overflow (the ring system absorbs the
//! excess); aliphatic atoms exceeding every allowed valence are reported.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::elements::{self, ElementError, ElementRecord};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    pub fn value(self) -> f64 {
        match self {
            BondOrder::Single => 1.0,
            BondOrder::Double => 2.0,
            BondOrder::Triple => 3.0,
            BondOrder::Aromatic => 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    /// Canonical element symbol ("C", "Cl", ...).
    pub symbol: String,
    /// Mass number when explicitly annotated ([2H], [13C]).
    pub isotope: Option<u32>,
    pub charge: i32,
    pub aromatic: bool,
    /// Some(n) for bracket atoms: they carry exactly n hydrogens and never
    /// gain implicit ones.
    pub explicit_h: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MolecularGraph {
    pub atoms: Vec<Atom>,
    pub bonds: Vec<Bond>,
}

impl MolecularGraph {
    /// Sum of bond-order values incident to atom `i`.
    fn bond_order_sum(&self, i: usize) -> f64 {
        self.bonds
            .iter()
            .filter(|b| b.a == i || b.b == i)
            .map(|b| b.order.value())
            .sum()
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.symbol != "H").count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SmilesError {
    EmptyInput,
    UnknownElement { symbol: String, pos: usize },
    UnclosedBracket { pos: usize },
    UnclosedBranch { pos: usize },
    UnmatchedBranchClose { pos: usize },
    UnmatchedRingClosure { digit: u16, pos: usize },
    DanglingBond { pos: usize },
    InvalidCharacter { ch: char, pos: usize },
}

impl fmt::Display for SmilesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmilesError::EmptyInput => write!(f, "empty SMILES string"),
            SmilesError::UnknownElement { symbol, pos } => {
                write!(f, "unknown element '{symbol}' at position {pos}")
            }
            SmilesError::UnclosedBracket { pos } => {
                write!(f, "bracket atom opened at position {pos} is never closed")
            }
            SmilesError::UnclosedBranch { pos } => {
                write!(f, "branch opened at position {pos} is never closed")
            }
            SmilesError::UnmatchedBranchClose { pos } => {
                write!(f, "')' at position {pos} has no matching '('")
            }
            SmilesError::UnmatchedRingClosure { digit, pos } => {
                write!(f, "ring closure {digit} at position {pos} is unmatched")
            }
            SmilesError::DanglingBond { pos } => {
                write!(f, "bond at position {pos} has no atom to attach to")
            }
            SmilesError::InvalidCharacter { ch, pos } => {
                write!(f, "unexpected character '{ch}' at position {pos}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SmilesError {}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    graph: MolecularGraph,
    prev: Option<usize>,
    pending_bond: Option<(BondOrder, usize)>,
    branch_stack: Vec<(Option<usize>, usize)>,
    ring_open: BTreeMap<u16, (usize, Option<BondOrder>, usize)>,
}

impl<'a> Parser<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Parser {
            bytes,
            pos: 0,
            graph: MolecularGraph::default(),
            prev: None,
            pending_bond: None,
            branch_stack: Vec::new(),
            ring_open: BTreeMap::new(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self, max_len: usize) -> Option<u32> {
        let start = self.pos;
        while self.pos - start < max_len && self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let mut v: u32 = 0;
        for &b in &self.bytes[start..self.pos] {
            v = v * 10 + (b - b'0') as u32;
        }
        Some(v)
    }

    fn push_atom(&mut self, atom: Atom, atom_pos: usize) -> Result<(), SmilesError> {
        if !elements::is_element(&atom.symbol) {
            return Err(SmilesError::UnknownElement {
                symbol: atom.symbol,
                pos: atom_pos,
            });
        }
        let idx = self.graph.atoms.len();
        let aromatic_new = atom.aromatic;
        self.graph.atoms.push(atom);
        if let Some(prev) = self.prev {
            let order = match self.pending_bond.take() {
                Some((o, _)) => o,
                None => {
                    if aromatic_new && self.graph.atoms[prev].aromatic {
                        BondOrder::Aromatic
                    } else {
                        BondOrder::Single
                    }
                }
            };
            self.graph.bonds.push(Bond { a: prev, b: idx, order });
        } else if let Some((_, pos)) = self.pending_bond.take() {
            return Err(SmilesError::DanglingBond { pos });
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn ring_closure(&mut self, digit: u16, pos: usize) -> Result<(), SmilesError> {
        let Some(current) = self.prev else {
            return Err(SmilesError::DanglingBond { pos });
        };
        let pending = self.pending_bond.take().map(|(o, _)| o);
        match self.ring_open.remove(&digit) {
            Some((open_atom, open_bond, open_pos)) => {
                if open_atom == current {
                    return Err(SmilesError::UnmatchedRingClosure { digit, pos: open_pos });
                }
                let order = match (open_bond, pending) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(SmilesError::DanglingBond { pos });
                    }
                    (Some(a), _) => a,
                    (None, Some(b)) => b,
                    (None, None) => {
                        if self.graph.atoms[open_atom].aromatic
                            && self.graph.atoms[current].aromatic
                        {
                            BondOrder::Aromatic
                        } else {
                            BondOrder::Single
                        }
                    }
                };
                self.graph.bonds.push(Bond {
                    a: open_atom,
                    b: current,
                    order,
                });
            }
            None => {
                self.ring_open.insert(digit, (current, pending, pos));
            }
        }
        Ok(())
    }

    /// Parse the interior of a bracket atom; `open_pos` is the '[' position.
    fn bracket_atom(&mut self, open_pos: usize) -> Result<(), SmilesError> {
        let isotope = self.digits(3);
        let sym_pos = self.pos;
        let (symbol, aromatic) = match self.peek() {
            Some(b) if b.is_ascii_uppercase() => {
                self.pos += 1;
                let mut sym = String::new();
                sym.push(b as char);
                if let Some(lo) = self.peek() {
                    if lo.is_ascii_lowercase() {
                        let mut two = sym.clone();
                        two.push(lo as char);
                        // take the two-letter form when it is an element, or
                        // when the one-letter form is not (so the unknown
                        // symbol is reported in full)
                        if elements::is_element(&two) || !elements::is_element(&sym) {
                            self.pos += 1;
                            sym = two;
                        }
                    }
                }
                (sym, false)
            }
            Some(b) if b.is_ascii_lowercase() => {
                self.pos += 1;
                let two: Option<&str> = match (b, self.peek()) {
                    (b's', Some(b'e')) => Some("Se"),
                    (b'a', Some(b's')) => Some("As"),
                    (b't', Some(b'e')) => Some("Te"),
                    _ => None,
                };
                if let Some(two) = two {
                    self.pos += 1;
                    (String::from(two), true)
                } else {
                    match b {
                        b'b' => (String::from("B"), true),
                        b'c' => (String::from("C"), true),
                        b'n' => (String::from("N"), true),
                        b'o' => (String::from("O"), true),
                        b'p' => (String::from("P"), true),
                        b's' => (String::from("S"), true),
                        _ => {
                            return Err(SmilesError::InvalidCharacter {
                                ch: b as char,
                                pos: sym_pos,
                            })
                        }
                    }
                }
            }
            Some(b) => {
                return Err(SmilesError::InvalidCharacter {
                    ch: b as char,
                    pos: self.pos,
                })
            }
            None => return Err(SmilesError::UnclosedBracket { pos: open_pos }),
        };
        // chirality markers, discarded
        if self.eat(b'@') {
            self.eat(b'@');
            if self
                .peek()
                .is_some_and(|b| b.is_ascii_uppercase() && b != b'H')
            {
                let save = self.pos;
                let first = self.bump();
                let second = self.bump();
                match (first, second) {
                    (Some(_), Some(c)) if c.is_ascii_uppercase() => {
                        self.digits(2);
                    }
                    _ => self.pos = save,
                }
            }
        }
        let mut explicit_h = 0u32;
        if self.eat(b'H') {
            explicit_h = self.digits(2).unwrap_or(1);
        }
        let mut charge = 0i32;
        if self.eat(b'+') {
            charge = 1;
            if let Some(n) = self.digits(2) {
                charge = n as i32;
            } else {
                while self.eat(b'+') {
                    charge += 1;
                }
            }
        } else if self.eat(b'-') {
            charge = -1;
            if let Some(n) = self.digits(2) {
                charge = -(n as i32);
            } else {
                while self.eat(b'-') {
                    charge -= 1;
                }
            }
        }
        if self.eat(b':') {
            // atom class, discarded
            if self.digits(4).is_none() {
                return Err(SmilesError::InvalidCharacter {
                    ch: ':',
                    pos: self.pos,
                });
            }
        }
        match self.bump() {
            Some(b']') => {}
            Some(b) => {
                return Err(SmilesError::InvalidCharacter {
                    ch: b as char,
                    pos: self.pos - 1,
                })
            }
            None => return Err(SmilesError::UnclosedBracket { pos: open_pos }),
        }
        self.push_atom(
            Atom {
                symbol,
                isotope,
                charge,
                aromatic,
                explicit_h: Some(explicit_h),
            },
            sym_pos,
        )
    }

    fn organic_atom(&mut self, symbol: &str, aromatic: bool, pos: usize) -> Result<(), SmilesError> {
        self.push_atom(
            Atom {
                symbol: String::from(symbol),
                isotope: None,
                charge: 0,
                aromatic,
                explicit_h: None,
            },
            pos,
        )
    }

    fn run(mut self) -> Result<MolecularGraph, SmilesError> {
        while let Some(b) = self.peek() {
            let pos = self.pos;
            match b {
                b'[' => {
                    self.pos += 1;
                    self.bracket_atom(pos)?;
                }
                b'B' => {
                    self.pos += 1;
                    if self.eat(b'r') {
                        self.organic_atom("Br", false, pos)?;
                    } else {
                        self.organic_atom("B", false, pos)?;
                    }
                }
                b'C' => {
                    self.pos += 1;
                    if self.eat(b'l') {
                        self.organic_atom("Cl", false, pos)?;
                    } else {
                        self.organic_atom("C", false, pos)?;
                    }
                }
                b'N' | b'O' | b'P' | b'S' | b'F' | b'I' | b'H' => {
                    self.pos += 1;
                    let sym = [b];
                    self.organic_atom(core::str::from_utf8(&sym).unwrap(), false, pos)?;
                }
                b'b' | b'c' | b'n' | b'o' | b'p' | b's' => {
                    self.pos += 1;
                    let sym = [b.to_ascii_uppercase()];
                    self.organic_atom(core::str::from_utf8(&sym).unwrap(), true, pos)?;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    self.pos += 1;
                    if self.pending_bond.is_some() || self.prev.is_none() {
                        return Err(SmilesError::DanglingBond { pos });
                    }
                    let order = match b {
                        b'=' => BondOrder::Double,
                        b'#' => BondOrder::Triple,
                        b':' => BondOrder::Aromatic,
                        // stereo slashes degrade to single bonds
                        _ => BondOrder::Single,
                    };
                    self.pending_bond = Some((order, pos));
                }
                b'(' => {
                    self.pos += 1;
                    if self.pending_bond.is_some() {
                        return Err(SmilesError::DanglingBond { pos });
                    }
                    if self.prev.is_none() {
                        return Err(SmilesError::InvalidCharacter { ch: '(', pos });
                    }
                    self.branch_stack.push((self.prev, pos));
                }
                b')' => {
                    self.pos += 1;
                    if self.pending_bond.is_some() {
                        return Err(SmilesError::DanglingBond { pos });
                    }
                    match self.branch_stack.pop() {
                        Some((saved, _)) => self.prev = saved,
                        None => return Err(SmilesError::UnmatchedBranchClose { pos }),
                    }
                }
                b'1'..=b'9' => {
                    self.pos += 1;
                    self.ring_closure((b - b'0') as u16, pos)?;
                }
                b'%' => {
                    self.pos += 1;
                    match self.digits(2) {
                        Some(n) if self.pos - pos == 3 => self.ring_closure(n as u16, pos)?,
                        _ => return Err(SmilesError::InvalidCharacter { ch: '%', pos }),
                    }
                }
                b'.' => {
                    self.pos += 1;
                    if self.pending_bond.is_some() {
                        return Err(SmilesError::DanglingBond { pos });
                    }
                    if self.prev.is_none() {
                        return Err(SmilesError::InvalidCharacter { ch: '.', pos });
                    }
                    self.prev = None;
                }
                other => {
                    return Err(SmilesError::InvalidCharacter {
                        ch: other as char,
                        pos,
                    })
                }
            }
        }
        if let Some((_, pos)) = self.pending_bond {
            return Err(SmilesError::DanglingBond { pos });
        }
        if let Some(&(_, pos)) = self.branch_stack.last() {
            return Err(SmilesError::UnclosedBranch { pos });
        }
        if let Some((&digit, &(_, _, pos))) = self.ring_open.iter().next() {
            return Err(SmilesError::UnmatchedRingClosure { digit, pos });
        }
        if self.graph.atoms.is_empty() {
            return Err(SmilesError::EmptyInput);
        }
        Ok(self.graph)
    }
}

/// Parse a SMILES string into a molecular graph.
pub fn parse(smiles: &str) -> Result<MolecularGraph, SmilesError> {
    let trimmed = smiles.trim();
    if trimmed.is_empty() {
        return Err(SmilesError::EmptyInput);
    }
    Parser::new(trimmed.as_bytes()).run()
}

/// Allowed valences; aromatic atoms use the single aromatic valence.
fn valences(symbol: &str, aromatic: bool) -> &'static [f64] {
    if aromatic {
        return match symbol {
            "B" => &[3.0],
            "C" => &[4.0],
            "N" | "P" | "As" => &[3.0],
            "O" | "S" | "Se" | "Te" => &[2.0],
            _ => &[],
        };
    }
    match symbol {
        "B" => &[3.0],
        "C" => &[4.0],
        "N" => &[3.0, 5.0],
        "O" => &[2.0],
        "P" => &[3.0, 5.0],
        "S" => &[2.0, 4.0, 6.0],
        "F" | "Cl" | "Br" | "I" | "H" => &[1.0],
        _ => &[],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InventoryError {
    /// Explicit bonds exceed every allowed valence of the element.
    ValenceOverflow { atom: usize, symbol: String, bond_order_sum: f64 },
    Element(ElementError),
}

impl fmt::Display for InventoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InventoryError::ValenceOverflow {
                atom,
                symbol,
                bond_order_sum,
            } => write!(
                f,
                "atom {atom} ({symbol}) has bond order sum {bond_order_sum} exceeding every allowed valence"
            ),
            InventoryError::Element(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InventoryError {}

impl From<ElementError> for InventoryError {
    fn from(e: ElementError) -> Self {
        InventoryError::Element(e)
    }
}

/// Composition of a molecule: element records with multiplicities, sorted by
/// (atomic number, neutron count, electron count) so that any two SMILES of
/// the same molecule yield identical inventories.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AtomInventory {
    entries: Vec<(ElementRecord, u32)>,
}

impl AtomInventory {
    pub fn from_records(records: impl IntoIterator<Item = ElementRecord>) -> Self {
        let mut counts: BTreeMap<(u32, u32, u32), (ElementRecord, u32)> = BTreeMap::new();
        for rec in records {
            counts
                .entry((rec.atomic_number, rec.neutron_count, rec.electron_count))
                .and_modify(|e| e.1 += 1)
                .or_insert((rec, 1));
        }
        AtomInventory {
            entries: counts.into_values().collect(),
        }
    }

    pub fn entries(&self) -> &[(ElementRecord, u32)] {
        &self.entries
    }

    /// Total atom count (heavy atoms plus hydrogens).
    pub fn total_atoms(&self) -> u32 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    /// Count for one (Z, N) pair, summed over charge states.
    pub fn count_of(&self, atomic_number: u32, neutron_count: u32) -> u32 {
        self.entries
            .iter()
            .filter(|(r, _)| r.atomic_number == atomic_number && r.neutron_count == neutron_count)
            .map(|&(_, c)| c)
            .sum()
    }

    /// Drop all hydrogen isotopes.
    pub fn without_hydrogens(&self) -> AtomInventory {
        AtomInventory {
            entries: self
                .entries
                .iter()
                .filter(|(r, _)| r.atomic_number != 1)
                .cloned()
                .collect(),
        }
    }

    /// Records repeated by multiplicity, in canonical order.
    pub fn expand(&self) -> Vec<ElementRecord> {
        let mut out = Vec::with_capacity(self.total_atoms() as usize);
        for &(rec, count) in &self.entries {
            for _ in 0..count {
                out.push(rec);
            }
        }
        out
    }
}

/// Count every atom of the molecule, including implicit hydrogens.
pub fn atom_inventory(graph: &MolecularGraph) -> Result<AtomInventory, InventoryError> {
    let mut records = Vec::new();
    let hydrogen = elements::lookup("H", None, 0)?;
    for (i, atom) in graph.atoms.iter().enumerate() {
        let record = elements::lookup(&atom.symbol, atom.isotope, atom.charge)?;
        records.push(record);
        let h_count = match atom.explicit_h {
            Some(h) => h,
            None => {
                let sum = graph.bond_order_sum(i);
                let allowed = valences(&atom.symbol, atom.aromatic);
                match allowed.iter().find(|&&v| v >= sum - 1e-9) {
                    Some(&v) => math::floor(v - sum + 1e-9) as u32,
                    None if atom.aromatic => 0,
                    None => {
                        return Err(InventoryError::ValenceOverflow {
                            atom: i,
                            symbol: atom.symbol.clone(),
                            bond_order_sum: sum,
                        })
                    }
                }
            }
        };
        for _ in 0..h_count {
            records.push(hydrogen);
        }
    }
    Ok(AtomInventory::from_records(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn water_is_one_oxygen() {
        let g = parse("O").unwrap();
        assert_eq!(g.atoms.len(), 1);
        assert!(g.bonds.is_empty());
        let inv = atom_inventory(&g).unwrap();
        assert_eq!(inv.count_of(8, 8), 1);
        assert_eq!(inv.count_of(1, 0), 2);
        assert_eq!(inv.total_atoms(), 3);
    }

    #[test]
    fn ethanol_graph() {
        let g = parse("CCO").unwrap();
        assert_eq!(g.atoms.len(), 3);
        assert_eq!(g.bonds.len(), 2);
        assert!(g.bonds.iter().all(|b| b.order == BondOrder::Single));
        let inv = atom_inventory(&g).unwrap();
        assert_eq!(inv.count_of(6, 6), 2);
        assert_eq!(inv.count_of(8, 8), 1);
        assert_eq!(inv.count_of(1, 0), 6);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(matches!(
            parse("C1CC1("),
            Err(SmilesError::UnclosedBranch { .. })
        ));
        assert!(matches!(parse(""), Err(SmilesError::EmptyInput)));
        assert!(matches!(parse("   "), Err(SmilesError::EmptyInput)));
        assert!(matches!(
            parse("C1CC"),
            Err(SmilesError::UnmatchedRingClosure { digit: 1, .. })
        ));
        assert!(matches!(parse("CC="), Err(SmilesError::DanglingBond { .. })));
        assert!(matches!(
            parse("C)C"),
            Err(SmilesError::UnmatchedBranchClose { .. })
        ));
        assert!(matches!(
            parse("[Xx]"),
            Err(SmilesError::UnknownElement { .. })
        ));
        assert!(matches!(
            parse("[CH4"),
            Err(SmilesError::UnclosedBracket { .. })
        ));
        assert!(matches!(
            parse("C$C"),
            Err(SmilesError::InvalidCharacter { ch: '$', .. })
        ));
    }

    #[test]
    fn benzene_aromatic_hydrogens() {
        let g = parse("c1ccccc1").unwrap();
        assert_eq!(g.atoms.len(), 6);
        assert_eq!(g.bonds.len(), 6);
        assert!(g.bonds.iter().all(|b| b.order == BondOrder::Aromatic));
        let inv = atom_inventory(&g).unwrap();
        assert_eq!(inv.count_of(6, 6), 6);
        assert_eq!(inv.count_of(1, 0), 6);
    }

    #[test]
    fn fused_aromatics_do_not_overflow() {
        // naphthalene: junction carbons carry bond order sum 4.5
        let inv = atom_inventory(&parse("c1ccc2ccccc2c1").unwrap()).unwrap();
        assert_eq!(inv.count_of(6, 6), 10);
        assert_eq!(inv.count_of(1, 0), 8);
    }

    #[test]
    fn heavy_water_brackets() {
        let g = parse("[2H]O[2H]").unwrap();
        let inv = atom_inventory(&g).unwrap();
        assert_eq!(inv.count_of(1, 1), 2);
        assert_eq!(inv.count_of(8, 8), 1);
        assert_eq!(inv.count_of(1, 0), 0);
        assert_eq!(inv.total_atoms(), 3);
    }

    #[test]
    fn bracket_charges_and_hydrogens() {
        let inv = atom_inventory(&parse("[NH4+]").unwrap()).unwrap();
        let entries = inv.entries();
        // N with 6 electrons (charge +1) and 4 hydrogens
        assert!(entries
            .iter()
            .any(|(r, c)| r.atomic_number == 7 && r.electron_count == 6 && *c == 1));
        assert_eq!(inv.count_of(1, 0), 4);
        let inv = atom_inventory(&parse("[O-]S(=O)(=O)[O-]").unwrap()).unwrap();
        assert_eq!(inv.count_of(8, 8), 4);
        assert_eq!(inv.count_of(16, 16), 1);
        assert_eq!(inv.count_of(1, 0), 0);
    }

    #[test]
    fn inventory_is_order_canonical() {
        let a = atom_inventory(&parse("CCO").unwrap()).unwrap();
        let b = atom_inventory(&parse("OCC").unwrap()).unwrap();
        assert_eq!(a, b);
        let c = atom_inventory(&parse("C(O)C").unwrap()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn valence_overflow_is_reported() {
        assert!(matches!(
            atom_inventory(&parse("C(C)(C)(C)(C)C").unwrap()),
            Err(InventoryError::ValenceOverflow { .. })
        ));
        // pentavalent nitrogen is fine
        let inv = atom_inventory(&parse("CN(=O)=O").unwrap()).unwrap();
        assert_eq!(inv.count_of(7, 7), 1);
        assert_eq!(inv.count_of(1, 0), 3);
    }

    #[test]
    fn stereo_markers_are_discarded() {
        let g = parse("N[C@@H](C)C(=O)O").unwrap();
        let inv = atom_inventory(&g).unwrap();
        // alanine: C3 H7 N O2
        assert_eq!(inv.count_of(6, 6), 3);
        assert_eq!(inv.count_of(1, 0), 7);
        assert_eq!(inv.count_of(7, 7), 1);
        assert_eq!(inv.count_of(8, 8), 2);
        let g = parse("F/C=C/F").unwrap();
        let inv = atom_inventory(&g).unwrap();
        assert_eq!(inv.count_of(9, 10), 2);
        assert_eq!(inv.count_of(1, 0), 2);
    }

    #[test]
    fn dot_separates_components() {
        let inv = atom_inventory(&parse("[Na+].[Cl-]").unwrap()).unwrap();
        assert_eq!(inv.total_atoms(), 2);
        assert_eq!(inv.count_of(11, 12), 1);
        assert_eq!(inv.count_of(17, 18), 1);
    }

    #[test]
    fn percent_ring_closures() {
        let g = parse("C%12CCCCC%12").unwrap();
        assert_eq!(g.atoms.len(), 6);
        assert_eq!(g.bonds.len(), 6);
    }

    #[test]
    fn ring_bond_orders_merge() {
        let g = parse("C=1CCCCC=1").unwrap();
        assert!(g.bonds.iter().any(|b| b.order == BondOrder::Double));
        assert!(matches!(
            parse("C=1CCCCC#1"),
            Err(SmilesError::DanglingBond { .. })
        ));
    }

    #[test]
    fn molecular_formula_corpus() {
        // (smiles, formula as [(Z, count)]) hand-checked
        let cases: &[(&str, &[(u32, u32)])] = &[
            ("C", &[(6, 1), (1, 4)]),
            ("CC", &[(6, 2), (1, 6)]),
            ("C=C", &[(6, 2), (1, 4)]),
            ("C#C", &[(6, 2), (1, 2)]),
            ("CO", &[(6, 1), (8, 1), (1, 4)]),
            ("C=O", &[(6, 1), (8, 1), (1, 2)]),
            ("CC(=O)O", &[(6, 2), (8, 2), (1, 4)]),
            ("N", &[(7, 1), (1, 3)]),
            ("C#N", &[(6, 1), (7, 1), (1, 1)]),
            ("CS", &[(6, 1), (16, 1), (1, 4)]),
            ("ClCCl", &[(6, 1), (17, 2), (1, 2)]),
            ("FC(F)(F)F", &[(6, 1), (9, 4)]),
            ("BrBr", &[(35, 2)]),
            ("II", &[(53, 2)]),
            ("c1ccccc1O", &[(6, 6), (8, 1), (1, 6)]),
            ("c1ccncc1", &[(6, 5), (7, 1), (1, 5)]),
            ("c1cc[nH]c1", &[(6, 4), (7, 1), (1, 5)]),
            ("c1ccoc1", &[(6, 4), (8, 1), (1, 4)]),
            ("C1CCCCC1", &[(6, 6), (1, 12)]),
            ("CC(C)C", &[(6, 4), (1, 10)]),
            ("OCC(O)CO", &[(6, 3), (8, 3), (1, 8)]),
            ("Cn1cnc2c1c(=O)n(C)c(=O)n2C", &[(6, 8), (7, 4), (8, 2), (1, 10)]),
        ];
        for (smiles, formula) in cases {
            let inv = atom_inventory(&parse(smiles).unwrap()).unwrap();
            let total: u32 = formula.iter().map(|&(_, c)| c).sum();
            assert_eq!(inv.total_atoms(), total, "total for {smiles}");
            for &(z, count) in *formula {
                let got: u32 = inv
                    .entries()
                    .iter()
                    .filter(|(r, _)| r.atomic_number == z)
                    .map(|&(_, c)| c)
                    .sum();
                assert_eq!(got, count, "Z={z} for {smiles}");
            }
        }
    }
}

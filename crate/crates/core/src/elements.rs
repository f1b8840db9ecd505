//! Embedded periodic-table data.
//!
//! Maps element symbols (plus optional explicit isotopes and charges) to
//! proton/neutron/electron counts. The table is compiled in from
//! `data/elements.csv`; the default neutron count is that of the most
//! abundant natural isotope (most stable isotope for elements without a
//! stable one), so every lookup is a deterministic integer triple.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use once_cell::race::OnceBox;

const ELEMENTS_CSV: &str = include_str!("../data/elements.csv");

/// Particle counts for one atom: protons (= Z), neutrons, electrons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ElementRecord {
    pub symbol: &'static str,
    pub atomic_number: u32,
    pub neutron_count: u32,
    pub electron_count: u32,
}

impl ElementRecord {
    /// Mass number of this record (protons + neutrons).
    pub fn mass_number(&self) -> u32 {
        self.atomic_number + self.neutron_count
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementError {
    UnknownElement(alloc::string::String),
    /// Mass number smaller than the atomic number.
    InvalidIsotope { symbol: &'static str, mass_number: u32 },
    /// Charge exceeds the proton count, leaving a negative electron count.
    NegativeElectrons { symbol: &'static str, charge: i32 },
}

impl fmt::Display for ElementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementError::UnknownElement(s) => write!(f, "unknown element symbol '{s}'"),
            ElementError::InvalidIsotope { symbol, mass_number } => {
                write!(f, "invalid isotope {mass_number}{symbol}: mass number below Z")
            }
            ElementError::NegativeElectrons { symbol, charge } => {
                write!(f, "charge {charge:+} on {symbol} exceeds its proton count")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ElementError {}

struct Table {
    /// (symbol, Z, default neutrons), ordered by Z.
    rows: Vec<(&'static str, u32, u32)>,
}

fn table() -> &'static Table {
    static TABLE: OnceBox<Table> = OnceBox::new();
    TABLE.get_or_init(|| {
        let mut rows = Vec::with_capacity(118);
        for line in ELEMENTS_CSV.lines().skip(1) {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split(',');
            let symbol = it.next().expect("symbol column");
            let z: u32 = it.next().expect("Z column").parse().expect("integer Z");
            let n: u32 = it
                .next()
                .expect("neutron column")
                .parse()
                .expect("integer neutron count");
            rows.push((symbol, z, n));
        }
        Box::new(Table { rows })
    })
}

/// Number of elements in the embedded table.
pub fn element_count() -> usize {
    table().rows.len()
}

/// All element symbols, ordered by atomic number.
pub fn symbols() -> impl Iterator<Item = &'static str> {
    table().rows.iter().map(|&(s, _, _)| s)
}

/// True if `symbol` names a known element (case-sensitive, e.g. "Cl").
pub fn is_element(symbol: &str) -> bool {
    table().rows.iter().any(|&(s, _, _)| s == symbol)
}

/// Resolve a symbol plus optional mass number and charge to particle counts.
///
/// Without an isotope annotation the default (most abundant) isotope is
/// used; the electron count is Z - charge.
pub fn lookup(symbol: &str, isotope: Option<u32>, charge: i32) -> Result<ElementRecord, ElementError> {
    let &(sym, z, default_n) = table()
        .rows
        .iter()
        .find(|&&(s, _, _)| s == symbol)
        .ok_or_else(|| ElementError::UnknownElement(alloc::string::String::from(symbol)))?;
    let neutrons = match isotope {
        Some(mass) => {
            if mass < z {
                return Err(ElementError::InvalidIsotope { symbol: sym, mass_number: mass });
            }
            mass - z
        }
        None => default_n,
    };
    let electrons = z as i64 - charge as i64;
    if electrons < 0 {
        return Err(ElementError::NegativeElectrons { symbol: sym, charge });
    }
    Ok(ElementRecord {
        symbol: sym,
        atomic_number: z,
        neutron_count: neutrons,
        electron_count: electrons as u32,
    })
}

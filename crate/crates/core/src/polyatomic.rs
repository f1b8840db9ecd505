//! Polyatomic complex assembly.
//!
//! Atoms are sorted into a canonical order (atomic number, neutron count,
//! electron count, coordinates, original index), each is built by the atomic
//! construction with its own derived random stream, consecutive atoms are
//! linked, and the per-atom matrices are accumulated as block direct sums.
//! Canonicalizing before gluing is what makes the encoding literally
//! invariant under re-indexing of the input atom list.
//!
//! `update_forces` fills the off-diagonal force blocks with Coulomb
//! energies (atomic units, nuclear point charges); `update_radial` computes
//! a radial distribution function histogram and writes per-pair g(r) values
//! into the off-diagonal radial blocks.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::RngCore;

use crate::atomic::{append_atom, AtomConfig, AtomSpec, AtomicError, ElectronCell};
use crate::complex::{CellId, Complex, ComplexError};
use crate::hash::Fnv1a;
use crate::linalg::{CMatrix, Matrix};
use crate::math;
use crate::rng;
use crate::smiles::AtomInventory;

#[derive(Debug, Clone, PartialEq)]
pub enum PolyatomicError {
    EmptySystem,
    CoordinateCountMismatch { expected: usize, got: usize },
    CoincidentAtoms { i: usize, j: usize },
    /// update_radial needs at least two atoms with coordinates.
    InsufficientAtoms,
    BadHistogramParams(&'static str),
    Atomic(AtomicError),
    Complex(ComplexError),
}

impl fmt::Display for PolyatomicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyatomicError::EmptySystem => write!(f, "atom list is empty"),
            PolyatomicError::CoordinateCountMismatch { expected, got } => {
                write!(f, "got {got} coordinates for {expected} atoms")
            }
            PolyatomicError::CoincidentAtoms { i, j } => {
                write!(f, "atoms {i} and {j} coincide; Coulomb energy is singular")
            }
            PolyatomicError::InsufficientAtoms => {
                write!(f, "radial distribution needs at least two atoms")
            }
            PolyatomicError::BadHistogramParams(msg) => write!(f, "bad histogram parameters: {msg}"),
            PolyatomicError::Atomic(e) => write!(f, "{e}"),
            PolyatomicError::Complex(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PolyatomicError {}

impl From<AtomicError> for PolyatomicError {
    fn from(e: AtomicError) -> Self {
        PolyatomicError::Atomic(e)
    }
}

impl From<ComplexError> for PolyatomicError {
    fn from(e: ComplexError) -> Self {
        PolyatomicError::Complex(e)
    }
}

/// Radial distribution function parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdfParams {
    pub r_max: f64,
    pub n_bins: usize,
    /// Monte-Carlo pair subsample size; 0 means use every pair.
    pub n_samples: usize,
    /// Cubic box side for periodic minimum-image distances.
    pub box_len: Option<f64>,
    /// Seed for the pair subsample.
    pub seed: u64,
}

impl Default for RdfParams {
    fn default() -> Self {
        RdfParams {
            r_max: 10.0,
            n_bins: 64,
            n_samples: 0,
            box_len: None,
            seed: 0,
        }
    }
}

/// g(r) histogram normalized by the ideal-gas shell density.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RdfHistogram {
    pub r_max: f64,
    pub counts: Vec<f64>,
    pub g: Vec<f64>,
}

impl RdfHistogram {
    pub fn n_bins(&self) -> usize {
        self.g.len()
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        let dr = self.r_max / self.n_bins() as f64;
        (k as f64 + 0.5) * dr
    }

    pub fn bin_of(&self, r: f64) -> Option<usize> {
        if !(r >= 0.0) || r >= self.r_max {
            return None;
        }
        let dr = self.r_max / self.n_bins() as f64;
        Some(((r / dr) as usize).min(self.n_bins() - 1))
    }
}

/// Algorithm 2 result: glued complex, per-atom electron blocks, and the
/// optional block force/radial matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyatomicComplex {
    pub complex: Complex,
    /// Electron descriptors accumulated per atom (the direct sum E).
    pub electron_blocks: Vec<Vec<ElectronCell>>,
    /// Block force matrix, present iff the force model was requested.
    pub force_matrix: Option<CMatrix>,
    /// Block radial matrix, present iff radial updates were requested.
    pub radial_matrix: Option<Matrix>,
    /// Atoms in the canonical order actually used.
    pub atom_order: Vec<AtomSpec>,
    /// Per-atom cell id spans in the glued complex.
    pub atom_cell_ranges: Vec<(CellId, CellId)>,
    /// Per-atom row offsets into the force matrix (nucleon blocks).
    pub nucleon_offsets: Vec<usize>,
    /// Per-atom row offsets into the radial matrix (electron blocks).
    pub electron_offsets: Vec<usize>,
    /// Coordinates in canonical atom order, when any were supplied or
    /// defaulted for update passes.
    pub coords: Option<Vec<[f64; 3]>>,
}

impl PolyatomicComplex {
    pub fn atom_count(&self) -> usize {
        self.atom_order.len()
    }

    /// Nuclear point charge per atom (Z), the default for Coulomb updates.
    pub fn nuclear_charges(&self) -> Vec<f64> {
        self.atom_order.iter().map(|s| s.protons as f64).collect()
    }

    /// Structural + matrix fingerprint (bit-stable across runs).
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.write(&self.complex.canonical_bytes());
        if let Some(f) = &self.force_matrix {
            for z in f.data() {
                h.write_u64(z.re.to_bits());
                h.write_u64(z.im.to_bits());
            }
        }
        if let Some(d) = &self.radial_matrix {
            for &v in d.data() {
                h.write_u64(v.to_bits());
            }
        }
        h.finish()
    }
}

/// Expand an inventory into atom specs (canonical order is preserved).
pub fn specs_from_inventory(inventory: &AtomInventory, include_hydrogens: bool) -> Vec<AtomSpec> {
    let inv = if include_hydrogens {
        inventory.clone()
    } else {
        inventory.without_hydrogens()
    };
    inv.expand().into_iter().map(AtomSpec::from).collect()
}

/// Default placeholder geometry: atom i at (i, 0, 0) atomic units. Not
/// physical; the stand-in when update passes need distances and no
/// coordinates were supplied.
pub fn default_coords(n: usize) -> Vec<[f64; 3]> {
    (0..n).map(|i| [i as f64, 0.0, 0.0]).collect()
}

fn canonical_order(atoms: &[AtomSpec], coords: Option<&[[f64; 3]]>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by(|&a, &b| {
        let ka = (atoms[a].protons, atoms[a].neutrons, atoms[a].electrons);
        let kb = (atoms[b].protons, atoms[b].neutrons, atoms[b].electrons);
        ka.cmp(&kb)
            .then_with(|| match coords {
                Some(cs) => {
                    let ca = cs[a].map(f64::to_bits);
                    let cb = cs[b].map(f64::to_bits);
                    ca.cmp(&cb)
                }
                None => core::cmp::Ordering::Equal,
            })
            .then(a.cmp(&b))
    });
    order
}

/// Algorithm 2: build a polyatomic complex from an atom list.
///
/// Atoms may be given in any order; construction canonicalizes. Coordinates,
/// when supplied, are matched to atoms by input position and travel with
/// them through the reordering.
pub fn build_polyatomic_complex(
    atoms: &[AtomSpec],
    using_radial: bool,
    using_force_model: bool,
    coords: Option<&[[f64; 3]]>,
    config: &AtomConfig,
    seed: u64,
) -> Result<PolyatomicComplex, PolyatomicError> {
    if atoms.is_empty() {
        return Err(PolyatomicError::EmptySystem);
    }
    if let Some(cs) = coords {
        if cs.len() != atoms.len() {
            return Err(PolyatomicError::CoordinateCountMismatch {
                expected: atoms.len(),
                got: cs.len(),
            });
        }
    }
    let order = canonical_order(atoms, coords);
    let atom_order: Vec<AtomSpec> = order.iter().map(|&i| atoms[i]).collect();
    let ordered_coords: Option<Vec<[f64; 3]>> =
        coords.map(|cs| order.iter().map(|&i| cs[i]).collect());

    let mut complex = Complex::new();
    let mut electron_blocks = Vec::with_capacity(atom_order.len());
    let mut atom_cell_ranges = Vec::with_capacity(atom_order.len());
    let mut nucleon_offsets = Vec::with_capacity(atom_order.len());
    let mut electron_offsets = Vec::with_capacity(atom_order.len());
    let mut force_blocks: Vec<CMatrix> = Vec::new();
    let mut radial_blocks: Vec<Matrix> = Vec::new();
    let mut next_id: u32 = 0;
    let mut nucleon_total = 0usize;
    let mut electron_total = 0usize;
    let mut prev_last: Option<CellId> = None;

    for (position, spec) in atom_order.iter().enumerate() {
        let mut stream = rng::derive(seed, position as u64);
        let (extended, parts) =
            append_atom(complex, spec, config, &mut stream, position as u32, next_id)?;
        complex = extended;
        next_id = parts.last_cell.0 + 1;
        // chain consecutive atom complexes
        if let Some(prev) = prev_last {
            complex.link(prev, parts.first_cell)?;
        }
        prev_last = Some(parts.last_cell);
        atom_cell_ranges.push((parts.first_cell, parts.last_cell));
        nucleon_offsets.push(nucleon_total);
        electron_offsets.push(electron_total);
        nucleon_total += parts.force_matrix.rows();
        electron_total += parts.radial_matrix.rows();
        if using_force_model {
            force_blocks.push(parts.force_matrix.clone());
        }
        if using_radial {
            radial_blocks.push(parts.radial_matrix.clone());
        }
        electron_blocks.push(parts.electrons);
    }

    let mut force_matrix = if using_force_model {
        let mut f = CMatrix::zeros(nucleon_total, nucleon_total);
        for (block, &off) in force_blocks.iter().zip(&nucleon_offsets) {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    f[(off + i, off + j)] = block[(i, j)];
                }
            }
        }
        Some(f)
    } else {
        None
    };
    let mut radial_matrix = if using_radial {
        let mut d = Matrix::zeros(electron_total, electron_total);
        for (block, &off) in radial_blocks.iter().zip(&electron_offsets) {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    d[(off + i, off + j)] = block[(i, j)];
                }
            }
        }
        Some(d)
    } else {
        None
    };

    let needs_geometry = using_force_model || using_radial;
    let effective_coords: Option<Vec<[f64; 3]>> = if needs_geometry {
        Some(ordered_coords.unwrap_or_else(|| default_coords(atom_order.len())))
    } else {
        ordered_coords
    };

    if using_force_model {
        let f = force_matrix.as_mut().expect("force matrix present");
        let charges: Vec<f64> = atom_order.iter().map(|s| s.protons as f64).collect();
        update_forces(
            f,
            &nucleon_offsets,
            effective_coords.as_deref().expect("coords present"),
            &charges,
        )?;
    }
    if using_radial && atom_order.len() >= 2 {
        let d = radial_matrix.as_mut().expect("radial matrix present");
        let coords = effective_coords.as_deref().expect("coords present");
        let span = max_pair_distance(coords);
        let params = RdfParams {
            r_max: if span > 0.0 { span * 1.01 } else { 1.0 },
            n_bins: 32,
            ..RdfParams::default()
        };
        update_radial(d, &electron_offsets, coords, &params)?;
    }

    Ok(PolyatomicComplex {
        complex,
        electron_blocks,
        force_matrix,
        radial_matrix,
        atom_order,
        atom_cell_ranges,
        nucleon_offsets,
        electron_offsets,
        coords: effective_coords,
    })
}

/// Convenience wrapper: encode a parsed molecule inventory.
pub fn from_inventory(
    inventory: &AtomInventory,
    include_hydrogens: bool,
    config: &AtomConfig,
    seed: u64,
) -> Result<PolyatomicComplex, PolyatomicError> {
    let specs = specs_from_inventory(inventory, include_hydrogens);
    build_polyatomic_complex(&specs, false, false, None, config, seed)
}

fn max_pair_distance(coords: &[[f64; 3]]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            worst = worst.max(math::dist(&coords[i], &coords[j]));
        }
    }
    worst
}

fn pair_distance(a: [f64; 3], b: [f64; 3], box_len: Option<f64>) -> f64 {
    match box_len {
        None => math::dist(&a, &b),
        Some(l) => {
            let mut acc = 0.0;
            for k in 0..3 {
                let mut d = a[k] - b[k];
                d -= l * math::round(d / l);
                acc += d * d;
            }
            math::sqrt(acc)
        }
    }
}

/// Fill off-diagonal force blocks with pairwise Coulomb energies
/// q_i q_j / r_ij (atomic units); diagonal blocks are left untouched.
pub fn update_forces(
    f: &mut CMatrix,
    nucleon_offsets: &[usize],
    coords: &[[f64; 3]],
    charges: &[f64],
) -> Result<(), PolyatomicError> {
    let n_atoms = nucleon_offsets.len();
    assert_eq!(coords.len(), n_atoms, "coords per atom");
    assert_eq!(charges.len(), n_atoms, "charge per atom");
    let rows = f.rows();
    let block_end = |i: usize| {
        if i + 1 < n_atoms {
            nucleon_offsets[i + 1]
        } else {
            rows
        }
    };
    for i in 0..n_atoms {
        for j in (i + 1)..n_atoms {
            let r = pair_distance(coords[i], coords[j], None);
            if r == 0.0 {
                return Err(PolyatomicError::CoincidentAtoms { i, j });
            }
            let v = Complex64::new(charges[i] * charges[j] / r, 0.0);
            for a in nucleon_offsets[i]..block_end(i) {
                for b in nucleon_offsets[j]..block_end(j) {
                    f[(a, b)] = v;
                    f[(b, a)] = v;
                }
            }
        }
    }
    Ok(())
}

/// Compute the radial distribution function over atom pairs and write
/// per-pair g(r_ij) into the off-diagonal radial blocks.
pub fn update_radial(
    d_e: &mut Matrix,
    electron_offsets: &[usize],
    coords: &[[f64; 3]],
    params: &RdfParams,
) -> Result<RdfHistogram, PolyatomicError> {
    let hist = rdf_histogram(coords, params)?;
    apply_pair_values(d_e, electron_offsets, coords, params.box_len, |r| {
        hist.bin_of(r).map(|k| hist.g[k]).unwrap_or(0.0)
    });
    Ok(hist)
}

/// Histogram-only part of the radial update.
///
/// Normalization is by the ideal-gas expectation: with N atoms in volume V
/// (the periodic box, or the r_max ball for open systems), an ideal gas puts
/// N(N-1)/2 * V_shell/V pairs in each shell.
pub fn rdf_histogram(coords: &[[f64; 3]], params: &RdfParams) -> Result<RdfHistogram, PolyatomicError> {
    let n = coords.len();
    if n < 2 {
        return Err(PolyatomicError::InsufficientAtoms);
    }
    if params.n_bins == 0 {
        return Err(PolyatomicError::BadHistogramParams("n_bins must be positive"));
    }
    if !(params.r_max > 0.0) {
        return Err(PolyatomicError::BadHistogramParams("r_max must be positive"));
    }
    if let Some(l) = params.box_len {
        if !(l > 0.0) {
            return Err(PolyatomicError::BadHistogramParams("box_len must be positive"));
        }
    }
    let n_bins = params.n_bins;
    let dr = params.r_max / n_bins as f64;
    let total_pairs = n * (n - 1) / 2;
    let mut counts = vec![0.0f64; n_bins];
    {
        let mut tally = |i: usize, j: usize, weight: f64| {
            let r = pair_distance(coords[i], coords[j], params.box_len);
            if r < params.r_max {
                let k = ((r / dr) as usize).min(n_bins - 1);
                counts[k] += weight;
            }
        };
        if params.n_samples == 0 || params.n_samples >= total_pairs {
            for i in 0..n {
                for j in (i + 1)..n {
                    tally(i, j, 1.0);
                }
            }
        } else {
            // Monte-Carlo pair subsample, reweighted to the full pair count
            let weight = total_pairs as f64 / params.n_samples as f64;
            let mut stream = rng::derive(params.seed, 0x7d0f);
            let mut drawn = 0usize;
            while drawn < params.n_samples {
                let i = (stream.next_u64() % n as u64) as usize;
                let j = (stream.next_u64() % n as u64) as usize;
                if i == j {
                    continue;
                }
                tally(i.min(j), i.max(j), weight);
                drawn += 1;
            }
        }
    }
    let volume = match params.box_len {
        Some(l) => l * l * l,
        None => 4.0 / 3.0 * core::f64::consts::PI * math::powi(params.r_max, 3),
    };
    let density_pairs = total_pairs as f64 / volume;
    let mut g = vec![0.0f64; n_bins];
    for k in 0..n_bins {
        let r_lo = k as f64 * dr;
        let r_hi = r_lo + dr;
        let shell = 4.0 / 3.0 * core::f64::consts::PI * (math::powi(r_hi, 3) - math::powi(r_lo, 3));
        let ideal = density_pairs * shell;
        g[k] = if ideal > 0.0 { counts[k] / ideal } else { 0.0 };
    }
    Ok(RdfHistogram {
        r_max: params.r_max,
        counts,
        g,
    })
}

/// Write externally supplied g(r) values (x-ray table) into the
/// off-diagonal electron blocks, nearest table radius wins.
pub fn apply_rdf_table(
    d_e: &mut Matrix,
    electron_offsets: &[usize],
    coords: &[[f64; 3]],
    table: &[(f64, f64)],
) {
    apply_pair_values(d_e, electron_offsets, coords, None, |r| {
        let mut best = 0.0;
        let mut best_gap = f64::INFINITY;
        for &(tr, tg) in table {
            let gap = math::abs(tr - r);
            if gap < best_gap {
                best_gap = gap;
                best = tg;
            }
        }
        best
    });
}

fn apply_pair_values(
    d_e: &mut Matrix,
    electron_offsets: &[usize],
    coords: &[[f64; 3]],
    box_len: Option<f64>,
    value: impl Fn(f64) -> f64,
) {
    let n_atoms = electron_offsets.len();
    let rows = d_e.rows();
    let block_end = |i: usize| {
        if i + 1 < n_atoms {
            electron_offsets[i + 1]
        } else {
            rows
        }
    };
    for i in 0..n_atoms.min(coords.len()) {
        for j in (i + 1)..n_atoms.min(coords.len()) {
            let r = pair_distance(coords[i], coords[j], box_len);
            let v = value(r);
            for a in electron_offsets[i]..block_end(i) {
                for b in electron_offsets[j]..block_end(j) {
                    d_e[(a, b)] = v;
                    d_e[(b, a)] = v;
                }
            }
        }
    }
}

//! Atomic complex construction.
//!
//! An atom with P protons, N neutrons, and E electrons becomes a complex
//! with one cell per particle (or one per dimension in 0..=d per particle in
//! range mode). Protons and neutrons are glued first, then electrons; cells
//! of the same kind are chained by links, and the proton, neutron, and
//! electron subcomplexes are linked top-to-head. Alongside the skeleton the
//! build returns the electron wavefunction list, a Hermitian force matrix
//! over the nucleons, and the electron radial-contribution matrix.
//!
//! All randomness (surface samples, force matrix) comes from the caller's
//! stream, so a (spec, config, seed) triple reproduces the complex bit for
//! bit.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::RngCore;

use crate::complex::{Cell, CellId, CellKind, CellOwner, Complex, ComplexError, GlueMap, PointCloud};
use crate::elements::ElementRecord;
use crate::hash::Fnv1a;
use crate::linalg::{CMatrix, Matrix};
use crate::math;
use crate::rng::Normal;

/// Particle counts for one atom to encode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AtomSpec {
    pub protons: u32,
    pub neutrons: u32,
    pub electrons: u32,
}

impl AtomSpec {
    pub fn new(protons: u32, neutrons: u32, electrons: u32) -> Self {
        AtomSpec {
            protons,
            neutrons,
            electrons,
        }
    }

    /// Total particle count K = P + N + E.
    pub fn particle_total(&self) -> u32 {
        self.protons + self.neutrons + self.electrons
    }
}

impl From<ElementRecord> for AtomSpec {
    fn from(r: ElementRecord) -> Self {
        AtomSpec {
            protons: r.atomic_number,
            neutrons: r.neutron_count,
            electrons: r.electron_count,
        }
    }
}

/// Radial wavefunction attached to an electron cell.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Wavefunction {
    /// 1s orbital psi(r) = exp(-z r / a0) / sqrt(pi (a0/z)^3), in units of
    /// the Bohr radius a0.
    HydrogenLike { a0: f64, z_eff: f64 },
}

impl Wavefunction {
    pub fn ground_state() -> Self {
        Wavefunction::HydrogenLike { a0: 1.0, z_eff: 1.0 }
    }

    pub fn amplitude(&self, r: f64) -> f64 {
        match *self {
            Wavefunction::HydrogenLike { a0, z_eff } => {
                let a = a0 / z_eff;
                math::exp(-r / a) / math::sqrt(core::f64::consts::PI * a * a * a)
            }
        }
    }

    /// Radial expectation <r> = int r |psi|^2 4 pi r^2 dr; 1.5 a0/z for 1s.
    pub fn radial_expectation(&self) -> f64 {
        match *self {
            Wavefunction::HydrogenLike { a0, z_eff } => 1.5 * a0 / z_eff,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ElectronCell {
    pub cell_id: CellId,
    pub wavefunction: Wavefunction,
}

/// How to initialize the nucleon force matrix D_F.
#[derive(Debug, Clone, PartialEq)]
pub enum ForceMatrixMode {
    /// Gaussian Unitary Ensemble: H = (G + G^H)/2 with i.i.d. standard
    /// complex Gaussian entries in G.
    Gue,
    /// Caller-provided matrix, validated Hermitian.
    Provided(CMatrix),
}

/// Construction parameters; defaults are dimension 3 for nucleons,
/// dimension 0 for electrons, and nuclear radii in femtometers.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomConfig {
    pub proton_dim: usize,
    pub neutron_dim: usize,
    pub electron_dim: usize,
    /// Some(d): every particle contributes cells at all dimensions 0..=d.
    pub dim_range: Option<usize>,
    pub samples_per_cell: usize,
    pub radius_p_fm: f64,
    pub radius_n_fm: f64,
    pub radius_e_fm: f64,
    pub force_matrix_mode: ForceMatrixMode,
    /// Scale each electron wavefunction by the owner's nuclear charge
    /// (hydrogen-like z_eff = Z) instead of the plain 1s default.
    pub scale_wavefunction_by_z: bool,
}

impl Default for AtomConfig {
    fn default() -> Self {
        AtomConfig {
            proton_dim: 3,
            neutron_dim: 3,
            electron_dim: 0,
            dim_range: None,
            samples_per_cell: 8,
            radius_p_fm: 1.0,
            radius_n_fm: 0.8,
            radius_e_fm: 2.8,
            force_matrix_mode: ForceMatrixMode::Gue,
            scale_wavefunction_by_z: false,
        }
    }
}

impl AtomConfig {
    fn dims_for(&self, kind: CellKind) -> Vec<usize> {
        match self.dim_range {
            Some(d) => (0..=d).collect(),
            None => {
                let d = match kind {
                    CellKind::Proton => self.proton_dim,
                    CellKind::Neutron => self.neutron_dim,
                    CellKind::Electron => self.electron_dim,
                    CellKind::AtomAggregate => 0,
                };
                vec![d]
            }
        }
    }

    fn radius_for(&self, kind: CellKind) -> f64 {
        match kind {
            CellKind::Proton => self.radius_p_fm,
            CellKind::Neutron => self.radius_n_fm,
            CellKind::Electron => self.radius_e_fm,
            CellKind::AtomAggregate => 0.0,
        }
    }

    /// Cells contributed per particle of the given kind.
    pub fn cells_per_particle(&self, kind: CellKind) -> usize {
        self.dims_for(kind).len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AtomicError {
    ZeroRadius,
    IndexOutOfRange { index: usize, len: usize },
    NonHermitianProvided { defect: f64 },
    ProvidedSizeMismatch { expected: usize, got: usize },
    InvalidRadius(f64),
    Complex(ComplexError),
}

impl fmt::Display for AtomicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicError::ZeroRadius => write!(f, "sphere radius must be positive"),
            AtomicError::IndexOutOfRange { index, len } => {
                write!(f, "electron index {index} out of range (len {len})")
            }
            AtomicError::NonHermitianProvided { defect } => {
                write!(f, "provided force matrix is not Hermitian (defect {defect:e})")
            }
            AtomicError::ProvidedSizeMismatch { expected, got } => {
                write!(f, "provided force matrix is {got}x{got}, expected {expected}x{expected}")
            }
            AtomicError::InvalidRadius(r) => write!(f, "radius {r} is not strictly positive"),
            AtomicError::Complex(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AtomicError {}

impl From<ComplexError> for AtomicError {
    fn from(e: ComplexError) -> Self {
        AtomicError::Complex(e)
    }
}

/// Uniform sample of `count` points on the sphere of the given radius in
/// R^{dim+1} (Gaussian-normalize method).
pub fn sample_sphere(
    dim: usize,
    radius: f64,
    count: usize,
    rng: &mut impl RngCore,
) -> Result<PointCloud, AtomicError> {
    if !(radius > 0.0) {
        return Err(AtomicError::ZeroRadius);
    }
    assert!(dim >= 1, "surface sampling needs dim >= 1");
    let ambient = dim + 1;
    let mut normal = Normal::new();
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let mut p;
        loop {
            p = (0..ambient).map(|_| normal.sample(rng)).collect::<Vec<f64>>();
            let n = math::norm(&p);
            if n > 1e-12 {
                for x in &mut p {
                    *x *= radius / n;
                }
                break;
            }
        }
        points.push(p);
    }
    Ok(PointCloud { points })
}

/// Initialize the nucleon force matrix.
pub fn init_force_matrix(
    size: usize,
    mode: &ForceMatrixMode,
    rng: &mut impl RngCore,
) -> Result<CMatrix, AtomicError> {
    match mode {
        ForceMatrixMode::Gue => {
            let mut normal = Normal::new();
            let mut g = CMatrix::zeros(size, size);
            for i in 0..size {
                for j in 0..size {
                    g[(i, j)] = normal.sample_complex(rng);
                }
            }
            let mut h = CMatrix::zeros(size, size);
            for i in 0..size {
                for j in 0..size {
                    let v = (g[(i, j)] + g[(j, i)].conj()) * Complex64::new(0.5, 0.0);
                    h[(i, j)] = v;
                }
            }
            Ok(h)
        }
        ForceMatrixMode::Provided(m) => {
            if m.rows() != size || m.cols() != size {
                return Err(AtomicError::ProvidedSizeMismatch {
                    expected: size,
                    got: m.rows(),
                });
            }
            let defect = m.max_hermitian_defect();
            if defect > 0.0 {
                return Err(AtomicError::NonHermitianProvided { defect });
            }
            Ok(m.clone())
        }
    }
}

/// Fill row/column `e` of the radial matrix with |<r>_e - <r>_j| against
/// every listed electron (diagonal stays 0).
pub fn update_distances(
    d_e: &mut Matrix,
    wavefunctions: &[Wavefunction],
    e: usize,
) -> Result<(), AtomicError> {
    if e >= wavefunctions.len() || e >= d_e.rows() {
        return Err(AtomicError::IndexOutOfRange {
            index: e,
            len: wavefunctions.len().min(d_e.rows()),
        });
    }
    let r_e = wavefunctions[e].radial_expectation();
    for (j, w) in wavefunctions.iter().enumerate() {
        if j == e {
            d_e[(e, e)] = 0.0;
            continue;
        }
        let v = math::abs(r_e - w.radial_expectation());
        d_e[(e, j)] = v;
        d_e[(j, e)] = v;
    }
    Ok(())
}

/// The tuple returned for one atom: glued skeleton, electron wavefunctions,
/// nucleon force matrix, electron radial matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicComplex {
    pub skeleton: Complex,
    pub electrons: Vec<ElectronCell>,
    pub force_matrix: CMatrix,
    pub radial_matrix: Matrix,
    pub spec: AtomSpec,
}

impl AtomicComplex {
    /// Stable fingerprint over the skeleton and both matrices.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.write(&self.skeleton.canonical_bytes());
        for z in self.force_matrix.data() {
            h.write_u64(z.re.to_bits());
            h.write_u64(z.im.to_bits());
        }
        for &v in self.radial_matrix.data() {
            h.write_u64(v.to_bits());
        }
        h.finish()
    }
}

/// Cells and matrices of one atom appended into a larger complex.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomParts {
    pub electrons: Vec<ElectronCell>,
    pub force_matrix: CMatrix,
    pub radial_matrix: Matrix,
    pub first_cell: CellId,
    pub last_cell: CellId,
    pub cell_count: usize,
}

/// Append one atom's cells to `complex` (Algorithm 1 body), starting ids at
/// `start_id` and tagging cells with `atom_index`.
pub fn append_atom(
    mut complex: Complex,
    spec: &AtomSpec,
    config: &AtomConfig,
    rng: &mut impl RngCore,
    atom_index: u32,
    start_id: u32,
) -> Result<(Complex, AtomParts), AtomicError> {
    for radius in [config.radius_p_fm, config.radius_n_fm, config.radius_e_fm] {
        if !(radius > 0.0) {
            return Err(AtomicError::InvalidRadius(radius));
        }
    }
    let owner = CellOwner {
        atomic_number: spec.protons,
        neutron_count: spec.neutrons,
        atom_index,
    };
    let mut next_id = start_id;
    let mut electrons = Vec::with_capacity(spec.electrons as usize);
    let mut kind_tops: Vec<CellId> = Vec::new(); // top cell of each nonempty kind chain
    let mut pending_links: Vec<(CellId, CellId)> = Vec::new();

    for (kind, count) in [
        (CellKind::Proton, spec.protons),
        (CellKind::Neutron, spec.neutrons),
        (CellKind::Electron, spec.electrons),
    ] {
        if count == 0 {
            continue;
        }
        let dims = config.dims_for(kind);
        let radius = config.radius_for(kind);
        let mut prev_top: Option<CellId> = None;
        for _ in 0..count {
            let mut tower_prev: Option<CellId> = None;
            let mut top = CellId(next_id);
            for &dim in &dims {
                let id = CellId(next_id);
                next_id += 1;
                let mut cell = Cell::new(id, dim, kind)
                    .with_radius(radius)
                    .with_owner(owner);
                if dim >= 1 {
                    // electron supports are open balls, so sample strictly
                    // inside the bound
                    let sample_radius = if kind == CellKind::Electron {
                        radius * (1.0 - 1e-8)
                    } else {
                        radius
                    };
                    cell = cell.with_payload(sample_sphere(
                        dim,
                        sample_radius,
                        config.samples_per_cell,
                        rng,
                    )?);
                }
                complex = complex.glue(cell, GlueMap::empty())?;
                if let Some(below) = tower_prev {
                    pending_links.push((id, below));
                }
                tower_prev = Some(id);
                top = id;
            }
            if kind == CellKind::Electron {
                let z_eff = if config.scale_wavefunction_by_z {
                    (spec.protons.max(1)) as f64
                } else {
                    1.0
                };
                electrons.push(ElectronCell {
                    cell_id: top,
                    wavefunction: Wavefunction::HydrogenLike { a0: 1.0, z_eff },
                });
            }
            if let Some(prev) = prev_top {
                pending_links.push((top, prev));
            }
            prev_top = Some(top);
        }
        if let Some(top) = prev_top {
            kind_tops.push(top);
        }
    }
    // cross-kind attachments: P -> N -> E (skipping empty kinds)
    for pair in kind_tops.windows(2) {
        pending_links.push((pair[0], pair[1]));
    }
    for (from, to) in pending_links {
        complex.link(from, to)?;
    }

    let nucleons = (spec.protons + spec.neutrons) as usize;
    let force_matrix = if nucleons > 0 {
        init_force_matrix(nucleons, &config.force_matrix_mode, rng)?
    } else {
        CMatrix::zeros(0, 0)
    };

    let e_count = spec.electrons as usize;
    let mut radial_matrix = Matrix::zeros(e_count, e_count);
    let wavefunctions: Vec<Wavefunction> = electrons.iter().map(|e| e.wavefunction).collect();
    for e in 0..e_count {
        update_distances(&mut radial_matrix, &wavefunctions[..=e], e)?;
    }

    let cell_count = complex.len();
    Ok((
        complex,
        AtomParts {
            electrons,
            force_matrix,
            radial_matrix,
            first_cell: CellId(start_id),
            last_cell: CellId(next_id.saturating_sub(1).max(start_id)),
            cell_count,
        },
    ))
}

/// Algorithm 1: build a standalone atomic complex.
pub fn build_atomic_complex(
    spec: &AtomSpec,
    config: &AtomConfig,
    rng: &mut impl RngCore,
) -> Result<AtomicComplex, AtomicError> {
    let (skeleton, parts) = append_atom(Complex::new(), spec, config, rng, 0, 0)?;
    Ok(AtomicComplex {
        skeleton,
        electrons: parts.electrons,
        force_matrix: parts.force_matrix,
        radial_matrix: parts.radial_matrix,
        spec: *spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive;

    #[test]
    fn sphere_samples_live_on_the_sphere() {
        let mut rng = derive(0, 0);
        let cloud = sample_sphere(1, 1.0, 4, &mut rng).unwrap();
        assert_eq!(cloud.points.len(), 4);
        for p in &cloud.points {
            assert_eq!(p.len(), 2);
            assert!((math::norm(p) - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            sample_sphere(2, 0.0, 1, &mut rng),
            Err(AtomicError::ZeroRadius)
        ));
    }

    #[test]
    fn sphere_samples_have_zero_mean() {
        let mut rng = derive(7, 0);
        let n = 1000;
        let cloud = sample_sphere(2, 0.8, n, &mut rng).unwrap();
        // per-coordinate sigma on S^2(r): r/sqrt(3); allow 3 sigma of the mean
        let sigma = 0.8 / math::sqrt(3.0);
        let bound = 3.0 * sigma / math::sqrt(n as f64);
        for axis in 0..3 {
            let mean: f64 = cloud.points.iter().map(|p| p[axis]).sum::<f64>() / n as f64;
            assert!(mean.abs() < bound, "axis {axis}: {mean} vs {bound}");
        }
    }

    #[test]
    fn sphere_ambient_dimension() {
        let mut rng = derive(3, 0);
        let cloud = sample_sphere(3, 1.0, 5, &mut rng).unwrap();
        assert!(cloud.points.iter().all(|p| p.len() == 4));
    }

    #[test]
    fn gue_is_exactly_hermitian_and_reproducible() {
        let mut rng = derive(11, 0);
        let h = init_force_matrix(5, &ForceMatrixMode::Gue, &mut rng).unwrap();
        assert_eq!(h.max_hermitian_defect(), 0.0);
        let mut rng2 = derive(11, 0);
        let h2 = init_force_matrix(5, &ForceMatrixMode::Gue, &mut rng2).unwrap();
        assert_eq!(h.data(), h2.data());
        // 1x1 GUE is a real Gaussian
        let mut rng3 = derive(11, 0);
        let one = init_force_matrix(1, &ForceMatrixMode::Gue, &mut rng3).unwrap();
        assert_eq!(one[(0, 0)].im, 0.0);
    }

    #[test]
    fn gue_spectrum_matches_semicircle_support() {
        let mut rng = derive(1234, 0);
        let n = 50;
        let h = init_force_matrix(n, &ForceMatrixMode::Gue, &mut rng).unwrap();
        let eig = h.hermitian_eigenvalues();
        let edge = 2.0 * math::sqrt(n as f64);
        let max = eig[0];
        let min = *eig.last().unwrap();
        // gross agreement: inside the support with finite-n slack, and the
        // extremes actually approach the edges
        assert!(max < edge * 1.15 && min > -edge * 1.15, "({min}, {max}) vs edge {edge}");
        assert!(max > edge * 0.7 && min < -edge * 0.7, "({min}, {max}) vs edge {edge}");
    }

    #[test]
    fn provided_mode_validates() {
        let mut rng = derive(0, 0);
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 1.0);
        m[(1, 0)] = Complex64::new(1.0, -1.0);
        assert!(init_force_matrix(2, &ForceMatrixMode::Provided(m.clone()), &mut rng).is_ok());
        m[(1, 0)] = Complex64::new(1.0, 1.0);
        assert!(matches!(
            init_force_matrix(2, &ForceMatrixMode::Provided(m.clone()), &mut rng),
            Err(AtomicError::NonHermitianProvided { .. })
        ));
        assert!(matches!(
            init_force_matrix(3, &ForceMatrixMode::Provided(m), &mut rng),
            Err(AtomicError::ProvidedSizeMismatch { .. })
        ));
    }

    #[test]
    fn ground_state_expectation_matches_quadrature() {
        let w = Wavefunction::ground_state();
        assert!((w.radial_expectation() - 1.5).abs() < 1e-12);
        // Simpson quadrature of r |psi|^2 4 pi r^2 over [0, 60]
        let steps = 40_000;
        let h = 60.0 / steps as f64;
        let f = |r: f64| {
            let a = w.amplitude(r);
            r * a * a * 4.0 * core::f64::consts::PI * r * r
        };
        let mut integral = f(0.0) + f(60.0);
        for i in 1..steps {
            let r = i as f64 * h;
            integral += f(r) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        integral *= h / 3.0;
        assert!((integral - w.radial_expectation()).abs() < 1e-6);
        // normalization of |psi|^2
        let g = |r: f64| {
            let a = w.amplitude(r);
            a * a * 4.0 * core::f64::consts::PI * r * r
        };
        let mut norm = g(0.0) + g(60.0);
        for i in 1..steps {
            let r = i as f64 * h;
            norm += g(r) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        norm *= h / 3.0;
        assert!((norm - 1.0).abs() < 1e-6, "norm {norm}");
    }

    #[test]
    fn radial_matrix_conventions() {
        let mut d = Matrix::zeros(1, 1);
        update_distances(&mut d, &[Wavefunction::ground_state()], 0).unwrap();
        assert_eq!(d[(0, 0)], 0.0);
        let mut d = Matrix::zeros(2, 2);
        let w = [Wavefunction::ground_state(), Wavefunction::ground_state()];
        update_distances(&mut d, &w, 0).unwrap();
        update_distances(&mut d, &w, 1).unwrap();
        assert_eq!(d[(0, 1)], 0.0);
        let w2 = [
            Wavefunction::ground_state(),
            Wavefunction::HydrogenLike { a0: 1.0, z_eff: 2.0 },
        ];
        update_distances(&mut d, &w2, 1).unwrap();
        assert!((d[(0, 1)] - 0.75).abs() < 1e-12);
        assert_eq!(d[(0, 1)], d[(1, 0)]);
        assert!(matches!(
            update_distances(&mut d, &w2, 5),
            Err(AtomicError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn deuterium_layout() {
        let spec = AtomSpec::new(1, 1, 1);
        let mut rng = derive(42, 0);
        let atom = build_atomic_complex(&spec, &AtomConfig::default(), &mut rng).unwrap();
        assert_eq!(atom.skeleton.len(), 3);
        assert_eq!(atom.skeleton.count_of_dim(3), 2);
        assert_eq!(atom.skeleton.count_of_dim(0), 1);
        let kinds: Vec<CellKind> = atom.skeleton.cells().iter().map(|c| c.kind).collect();
        assert_eq!(
            kinds,
            vec![CellKind::Proton, CellKind::Neutron, CellKind::Electron]
        );
        assert_eq!(atom.force_matrix.rows(), 2);
        assert_eq!(atom.radial_matrix.rows(), 1);
        assert_eq!(atom.electrons.len(), 1);
        assert!(atom.skeleton.is_closure_finite());
    }

    #[test]
    fn hydrogen_skips_the_neutron_loop() {
        let spec = AtomSpec::new(1, 0, 1);
        let mut rng = derive(42, 0);
        let atom = build_atomic_complex(&spec, &AtomConfig::default(), &mut rng).unwrap();
        assert_eq!(atom.skeleton.len(), 2);
        assert_eq!(atom.force_matrix.rows(), 1);
        assert!(atom
            .skeleton
            .cells()
            .iter()
            .all(|c| c.kind != CellKind::Neutron));
        // P links directly to E when N = 0
        assert_eq!(atom.skeleton.links().len(), 1);
    }

    #[test]
    fn range_mode_cell_counts() {
        let spec = AtomSpec::new(6, 6, 6);
        let config = AtomConfig {
            dim_range: Some(2),
            ..AtomConfig::default()
        };
        let mut rng = derive(1, 0);
        let atom = build_atomic_complex(&spec, &config, &mut rng).unwrap();
        // dims {0,1,2} per particle: 18 cells per kind
        for kind in [CellKind::Proton, CellKind::Neutron, CellKind::Electron] {
            let count = atom
                .skeleton
                .cells()
                .iter()
                .filter(|c| c.kind == kind)
                .count();
            assert_eq!(count, 18, "{kind:?}");
        }
        assert_eq!(atom.skeleton.len(), 54);
    }

    #[test]
    fn payload_bounds_hold() {
        let spec = AtomSpec::new(2, 2, 2);
        let config = AtomConfig {
            electron_dim: 2,
            ..AtomConfig::default()
        };
        let mut rng = derive(5, 0);
        let atom = build_atomic_complex(&spec, &config, &mut rng).unwrap();
        for cell in atom.skeleton.cells() {
            if let Some(cloud) = &cell.payload {
                for p in &cloud.points {
                    let r = math::norm(p);
                    match cell.kind {
                        CellKind::Electron => assert!(r < 2.8),
                        CellKind::Proton => assert!(r <= 1.0 * (1.0 + 1e-9)),
                        CellKind::Neutron => assert!(r <= 0.8 * (1.0 + 1e-9)),
                        CellKind::AtomAggregate => {}
                    }
                }
            }
        }
    }

    #[test]
    fn build_is_deterministic_and_seed_sensitive() {
        let spec = AtomSpec::new(3, 4, 3);
        let config = AtomConfig::default();
        let a = build_atomic_complex(&spec, &config, &mut derive(9, 0)).unwrap();
        let b = build_atomic_complex(&spec, &config, &mut derive(9, 0)).unwrap();
        assert_eq!(a.skeleton.canonical_bytes(), b.skeleton.canonical_bytes());
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = build_atomic_complex(&spec, &config, &mut derive(10, 0)).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn distinct_species_have_distinct_fingerprints() {
        let species = [
            AtomSpec::new(1, 0, 1), // H
            AtomSpec::new(1, 1, 1), // 2H
            AtomSpec::new(2, 2, 2), // He
            AtomSpec::new(6, 6, 6), // C
            AtomSpec::new(7, 7, 7), // N
            AtomSpec::new(8, 8, 8), // O
        ];
        let config = AtomConfig::default();
        let prints: Vec<u64> = species
            .iter()
            .map(|s| {
                build_atomic_complex(s, &config, &mut derive(0, 0))
                    .unwrap()
                    .fingerprint()
            })
            .collect();
        for i in 0..prints.len() {
            for j in (i + 1)..prints.len() {
                assert_ne!(prints[i], prints[j], "{i} vs {j}");
            }
        }
    }

    #[test]
    fn dimension_bound_respects_particle_total() {
        let spec = AtomSpec::new(1, 1, 1);
        let config = AtomConfig::default();
        let atom = build_atomic_complex(&spec, &config, &mut derive(0, 0)).unwrap();
        let max_dim = atom.skeleton.max_dim().unwrap();
        assert!(max_dim as u32 <= spec.particle_total());
    }
}

//! Fixed-shape real projections of polyatomic complexes.
//!
//! The fast projection treats all cells as disconnected: one row per cell
//! holding [kind, dim, radius, owner Z, owner N, mean point norm, per-axis
//! point means]. The deep projection keeps the same rows and appends a
//! connectivity block per cell: incidence degrees, link degree, and the top
//! eigenvalues of the Hodge Laplacian at the cell's dimension (zero-filled
//! when the spectrum is shorter). Neither projection uses the force or
//! radial matrices.
//!
//! Rows follow the canonical cell order, so projections of the same
//! molecule are bit-identical regardless of input atom order.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::complex::Complex;
use crate::hash::Fnv1a;
use crate::linalg::{symmetric_eigenvalues, Matrix};
use crate::math;
use crate::polyatomic::PolyatomicComplex;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FeaturizerKind {
    Fast,
    Deep,
}

impl FeaturizerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FeaturizerKind::Fast => "fast",
            FeaturizerKind::Deep => "deep",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureMatrix {
    pub values: Matrix,
    pub schema_version: u32,
    pub featurizer: FeaturizerKind,
    pub config_hash: u64,
}

impl FeatureMatrix {
    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeaturizeError {
    EmptyBatch,
    /// A projected entry came out NaN or infinite.
    NonFiniteEntry { row: usize, col: usize },
    /// Laplacian spectrum computation produced non-finite values.
    EigenFailure { dim: usize },
}

impl fmt::Display for FeaturizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeaturizeError::EmptyBatch => write!(f, "empty feature batch"),
            FeaturizeError::NonFiniteEntry { row, col } => {
                write!(f, "non-finite feature entry at ({row}, {col})")
            }
            FeaturizeError::EigenFailure { dim } => {
                write!(f, "eigenvalue computation failed for dimension {dim}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FeaturizeError {}

fn config_hash(kind: FeaturizerKind, axis_cols: usize, m_spec: usize) -> u64 {
    let mut h = Fnv1a::new();
    h.write_u64(SCHEMA_VERSION as u64);
    h.write(&[match kind {
        FeaturizerKind::Fast => 1,
        FeaturizerKind::Deep => 2,
    }]);
    h.write_u64(axis_cols as u64);
    h.write_u64(m_spec as u64);
    h.finish()
}

/// Columns of the disconnected (fast) block for one cell.
fn fast_row(complex: &Complex, pos: usize, axis_cols: usize) -> Vec<f64> {
    let cell = &complex.cells()[pos];
    let mut row = Vec::with_capacity(6 + axis_cols);
    row.push(cell.kind.code() as f64);
    row.push(cell.dim as f64);
    row.push(cell.radius);
    match &cell.owner {
        Some(o) => {
            row.push(o.atomic_number as f64);
            row.push(o.neutron_count as f64);
        }
        None => {
            row.push(0.0);
            row.push(0.0);
        }
    }
    match &cell.payload {
        Some(cloud) if !cloud.points.is_empty() => {
            let n = cloud.points.len() as f64;
            let mean_norm = cloud.points.iter().map(|p| math::norm(p)).sum::<f64>() / n;
            row.push(mean_norm);
            for axis in 0..axis_cols {
                let mean = cloud
                    .points
                    .iter()
                    .map(|p| p.get(axis).copied().unwrap_or(0.0))
                    .sum::<f64>()
                    / n;
                row.push(mean);
            }
        }
        _ => {
            row.push(0.0);
            row.extend(core::iter::repeat(0.0).take(axis_cols));
        }
    }
    row
}

fn check_finite(values: &Matrix) -> Result<(), FeaturizeError> {
    for i in 0..values.rows() {
        for j in 0..values.cols() {
            if !values[(i, j)].is_finite() {
                return Err(FeaturizeError::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Fast Complex: disconnect all cells and project each to a real row.
pub fn fast_complex(p: &PolyatomicComplex) -> Result<FeatureMatrix, FeaturizeError> {
    let complex = &p.complex;
    let axis_cols = complex.max_dim().unwrap_or(0) + 1;
    let order = complex.id_order();
    let rows: Vec<Vec<f64>> = order
        .iter()
        .map(|&pos| fast_row(complex, pos, axis_cols))
        .collect();
    let values = Matrix::from_rows(&rows);
    check_finite(&values)?;
    Ok(FeatureMatrix {
        values,
        schema_version: SCHEMA_VERSION,
        featurizer: FeaturizerKind::Fast,
        config_hash: config_hash(FeaturizerKind::Fast, axis_cols, 0),
    })
}

/// Deep Complex: fast rows plus a per-cell connectivity block
/// [down degree, up degree, link degree, top m_spec eigenvalues of the
/// Laplacian at the cell's dimension].
pub fn deep_complex(p: &PolyatomicComplex, m_spec: usize) -> Result<FeatureMatrix, FeaturizeError> {
    let complex = &p.complex;
    let axis_cols = complex.max_dim().unwrap_or(0) + 1;
    let order = complex.id_order();
    let (down, up, links) = complex.degree_arrays();

    // one spectrum per dimension that actually has cells
    let mut spectra: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    if let Some(max_dim) = complex.max_dim() {
        for k in 0..=max_dim {
            if complex.count_of_dim(k) == 0 {
                continue;
            }
            let lap = complex
                .hodge_laplacian(k)
                .expect("dimension k has cells, weights default to 1");
            let mut eig = symmetric_eigenvalues(&lap);
            if eig.iter().any(|v| !v.is_finite()) {
                return Err(FeaturizeError::EigenFailure { dim: k });
            }
            eig.truncate(m_spec);
            eig.resize(m_spec, 0.0);
            spectra.insert(k, eig);
        }
    }

    let rows: Vec<Vec<f64>> = order
        .iter()
        .enumerate()
        .map(|(slot, &pos)| {
            let mut row = fast_row(complex, pos, axis_cols);
            row.push(down[slot] as f64);
            row.push(up[slot] as f64);
            row.push(links[slot] as f64);
            let dim = complex.cells()[pos].dim;
            row.extend_from_slice(&spectra[&dim]);
            row
        })
        .collect();
    let values = Matrix::from_rows(&rows);
    check_finite(&values)?;
    Ok(FeatureMatrix {
        values,
        schema_version: SCHEMA_VERSION,
        featurizer: FeaturizerKind::Deep,
        config_hash: config_hash(FeaturizerKind::Deep, axis_cols, m_spec),
    })
}

/// Pad every matrix with trailing zero rows/columns to a common shape.
pub fn zero_pad(batch: &[FeatureMatrix]) -> Result<Vec<FeatureMatrix>, FeaturizeError> {
    if batch.is_empty() {
        return Err(FeaturizeError::EmptyBatch);
    }
    let rows = batch.iter().map(FeatureMatrix::rows).max().unwrap();
    let cols = batch.iter().map(FeatureMatrix::cols).max().unwrap();
    Ok(batch
        .iter()
        .map(|m| {
            let mut padded = Matrix::zeros(rows, cols);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    padded[(i, j)] = m.values[(i, j)];
                }
            }
            FeatureMatrix {
                values: padded,
                schema_version: m.schema_version,
                featurizer: m.featurizer,
                config_hash: m.config_hash,
            }
        })
        .collect())
}

/// Row-major flattening for kernel consumption.
pub fn flatten(m: &FeatureMatrix) -> Vec<f64> {
    m.values.data().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::AtomConfig;
    use crate::complex::{Cell, CellId, CellKind, GlueMap};
    use crate::polyatomic::{build_polyatomic_complex, specs_from_inventory};
    use crate::smiles;
    use crate::atomic::AtomSpec;

    fn encode(smiles_str: &str, seed: u64) -> PolyatomicComplex {
        let inv = smiles::atom_inventory(&smiles::parse(smiles_str).unwrap()).unwrap();
        let specs = specs_from_inventory(&inv, true);
        build_polyatomic_complex(&specs, false, false, None, &AtomConfig::default(), seed).unwrap()
    }

    fn wrap(complex: Complex) -> PolyatomicComplex {
        PolyatomicComplex {
            complex,
            electron_blocks: vec![],
            force_matrix: None,
            radial_matrix: None,
            atom_order: vec![],
            atom_cell_ranges: vec![],
            nucleon_offsets: vec![],
            electron_offsets: vec![],
            coords: None,
        }
    }

    #[test]
    fn hydrogen_has_two_rows() {
        let p = build_polyatomic_complex(
            &[AtomSpec::new(1, 0, 1)],
            false,
            false,
            None,
            &AtomConfig::default(),
            0,
        )
        .unwrap();
        let f = fast_complex(&p).unwrap();
        assert_eq!(f.rows(), 2);
        // proton row: kind 1, dim 3, radius 1.0, Z 1, N 0
        assert_eq!(f.values[(0, 0)], 1.0);
        assert_eq!(f.values[(0, 1)], 3.0);
        assert_eq!(f.values[(0, 2)], 1.0);
        assert_eq!(f.values[(0, 3)], 1.0);
        assert_eq!(f.values[(0, 4)], 0.0);
        // mean point norm equals the proton radius
        assert!((f.values[(0, 5)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deuterium_inserts_a_neutron_row() {
        let config = AtomConfig::default();
        let h = build_polyatomic_complex(
            &[AtomSpec::new(1, 0, 1)],
            false,
            false,
            None,
            &config,
            42,
        )
        .unwrap();
        let d = build_polyatomic_complex(
            &[AtomSpec::new(1, 1, 1)],
            false,
            false,
            None,
            &config,
            42,
        )
        .unwrap();
        let fh = fast_complex(&h).unwrap();
        let fd = fast_complex(&d).unwrap();
        assert_eq!(fh.rows(), 2);
        assert_eq!(fd.rows(), 3);
        assert_eq!(fd.values[(1, 0)], CellKind::Neutron.code() as f64);
        // shared proton row: same sampled payload (same stream prefix); only
        // the owner isotope column (index 4) differs
        for col in 0..fh.cols() {
            if col == 4 {
                assert_ne!(fh.values[(0, col)], fd.values[(0, col)]);
            } else {
                assert_eq!(fh.values[(0, col)], fd.values[(0, col)], "col {col}");
            }
        }
    }

    #[test]
    fn input_order_does_not_change_features() {
        let inv = smiles::atom_inventory(&smiles::parse("NCCO").unwrap()).unwrap();
        let specs = specs_from_inventory(&inv, true);
        let mut shuffled = specs.clone();
        shuffled.reverse();
        let config = AtomConfig::default();
        let a = build_polyatomic_complex(&specs, false, false, None, &config, 5).unwrap();
        let b = build_polyatomic_complex(&shuffled, false, false, None, &config, 5).unwrap();
        assert_eq!(fast_complex(&a).unwrap(), fast_complex(&b).unwrap());
        assert_eq!(deep_complex(&a, 8).unwrap(), deep_complex(&b, 8).unwrap());
    }

    #[test]
    fn species_fingerprints_differ_pairwise() {
        let species: [(&str, AtomSpec); 6] = [
            ("H", AtomSpec::new(1, 0, 1)),
            ("2H", AtomSpec::new(1, 1, 1)),
            ("He", AtomSpec::new(2, 2, 2)),
            ("C", AtomSpec::new(6, 6, 6)),
            ("N", AtomSpec::new(7, 7, 7)),
            ("O", AtomSpec::new(8, 8, 8)),
        ];
        let config = AtomConfig::default();
        let feats: Vec<FeatureMatrix> = species
            .iter()
            .map(|(_, s)| {
                let p =
                    build_polyatomic_complex(&[*s], false, false, None, &config, 0).unwrap();
                fast_complex(&p).unwrap()
            })
            .collect();
        for i in 0..feats.len() {
            for j in (i + 1)..feats.len() {
                assert_ne!(feats[i], feats[j], "{} vs {}", species[i].0, species[j].0);
            }
        }
    }

    #[test]
    fn single_point_connectivity_is_zero() {
        let c = Complex::new()
            .glue(Cell::new(CellId(0), 0, CellKind::AtomAggregate), GlueMap::empty())
            .unwrap();
        let f = deep_complex(&wrap(c), 8).unwrap();
        assert_eq!(f.rows(), 1);
        let fast_cols = 6 + 1; // axis block is max_dim+1 = 1 wide
        for col in fast_cols..f.cols() {
            assert_eq!(f.values[(0, col)], 0.0);
        }
    }

    #[test]
    fn interval_spectrum_shows_up_in_deep_rows() {
        let c = Complex::new()
            .glue(Cell::new(CellId(0), 0, CellKind::AtomAggregate), GlueMap::empty())
            .unwrap()
            .glue(Cell::new(CellId(1), 0, CellKind::AtomAggregate), GlueMap::empty())
            .unwrap()
            .glue(
                Cell::new(CellId(2), 1, CellKind::AtomAggregate),
                GlueMap::with_signs(vec![(CellId(0), -1), (CellId(1), 1)]),
            )
            .unwrap();
        let f = deep_complex(&wrap(c), 4).unwrap();
        let fast_cols = 6 + 2;
        // vertex row: spectrum of Delta_0 = {2, 0} zero-filled
        let spec_start = fast_cols + 3;
        assert!((f.values[(0, spec_start)] - 2.0).abs() < 1e-10);
        assert_eq!(f.values[(0, spec_start + 1)], 0.0);
        // edge row: Delta_1 spectrum = {2}
        assert!((f.values[(2, spec_start)] - 2.0).abs() < 1e-10);
        // degrees: vertex 0 has up degree 1, edge has down degree 2
        assert_eq!(f.values[(0, fast_cols + 1)], 1.0);
        assert_eq!(f.values[(2, fast_cols)], 2.0);
    }

    #[test]
    fn disconnected_points_have_component_many_zero_eigenvalues() {
        let c = Complex::new()
            .glue(Cell::new(CellId(0), 0, CellKind::AtomAggregate), GlueMap::empty())
            .unwrap()
            .glue(Cell::new(CellId(1), 0, CellKind::AtomAggregate), GlueMap::empty())
            .unwrap();
        let lap = c.hodge_laplacian(0).unwrap();
        let eig = symmetric_eigenvalues(&lap);
        assert_eq!(eig.len(), 2);
        assert!(eig.iter().all(|v| v.abs() < 1e-12));
        let f = deep_complex(&wrap(c), 8).unwrap();
        assert_eq!(f.rows(), 2);
    }

    #[test]
    fn fast_block_is_a_prefix_of_deep() {
        let p = encode("CCO", 3);
        let fast = fast_complex(&p).unwrap();
        let deep = deep_complex(&p, 8).unwrap();
        assert_eq!(fast.rows(), deep.rows());
        assert!(deep.cols() > fast.cols());
        for i in 0..fast.rows() {
            for j in 0..fast.cols() {
                assert_eq!(fast.values[(i, j)], deep.values[(i, j)]);
            }
        }
    }

    #[test]
    fn zero_pad_unifies_shapes() {
        let a = encode("C", 0);
        let b = encode("CCO", 0);
        let fa = fast_complex(&a).unwrap();
        let fb = fast_complex(&b).unwrap();
        let rows_a = fa.rows();
        let padded = zero_pad(&[fa.clone(), fb.clone()]).unwrap();
        assert_eq!(padded[0].rows(), padded[1].rows());
        assert_eq!(padded[0].cols(), padded[1].cols());
        // original block embedded top-left, zeros after
        for i in 0..fa.rows() {
            for j in 0..fa.cols() {
                assert_eq!(padded[0].values[(i, j)], fa.values[(i, j)]);
            }
        }
        for i in rows_a..padded[0].rows() {
            for j in 0..padded[0].cols() {
                assert_eq!(padded[0].values[(i, j)], 0.0);
            }
        }
        // single-element batch unchanged
        let single = zero_pad(&[fb.clone()]).unwrap();
        assert_eq!(single[0], fb);
        assert!(matches!(zero_pad(&[]), Err(FeaturizeError::EmptyBatch)));
    }

    #[test]
    fn padding_preserves_inner_products() {
        let a = encode("CC", 1);
        let b = encode("CO", 1);
        let fa = fast_complex(&a).unwrap();
        let fb = fast_complex(&b).unwrap();
        let raw = math::dot(&flatten(&fa), &flatten(&fb));
        let padded = zero_pad(&[fa, fb]).unwrap();
        let after = math::dot(&flatten(&padded[0]), &flatten(&padded[1]));
        assert!((raw - after).abs() < 1e-9);
    }

    #[test]
    fn flatten_is_row_major() {
        let m = FeatureMatrix {
            values: Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]),
            schema_version: SCHEMA_VERSION,
            featurizer: FeaturizerKind::Fast,
            config_hash: 0,
        };
        assert_eq!(flatten(&m), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn features_are_finite_on_a_small_corpus() {
        for s in ["C", "CCO", "c1ccccc1", "CC(=O)Oc1ccccc1C(=O)O", "[Na+].[Cl-]"] {
            let p = encode(s, 7);
            let f = fast_complex(&p).unwrap();
            assert!(f.values.data().iter().all(|v| v.is_finite()), "{s}");
            let d = deep_complex(&p, 8).unwrap();
            assert!(d.values.data().iter().all(|v| v.is_finite()), "{s}");
        }
    }
}

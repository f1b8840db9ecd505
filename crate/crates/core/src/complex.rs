//! Finite CW-complex store.
//!
//! Cells carry a dimension, a kind, and an optional sampled point cloud;
//! attaching maps are stored combinatorially as signed target lists one
//! dimension down. Same-dimension attachments (chaining particles, atoms)
//! are recorded as `links` and do not enter the boundary matrices, which
//! keeps the chain complex exact (`B_k · B_{k+1} = 0`) by construction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::hash::Fnv1a;
use crate::linalg::Matrix;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellId(pub u32);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CellKind {
    Proton,
    Neutron,
    Electron,
    AtomAggregate,
}

impl CellKind {
    pub fn code(self) -> u8 {
        match self {
            CellKind::Proton => 1,
            CellKind::Neutron => 2,
            CellKind::Electron => 3,
            CellKind::AtomAggregate => 4,
        }
    }
}

/// Which atom a particle cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellOwner {
    pub atomic_number: u32,
    pub neutron_count: u32,
    /// Position of the atom in the canonical build order.
    pub atom_index: u32,
}

/// Sampled surface points; each point has `dim + 1` coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cell {
    pub id: CellId,
    pub dim: usize,
    pub kind: CellKind,
    /// Radius bound of the kind, in the unit the builder chose (fm here).
    pub radius: f64,
    pub owner: Option<CellOwner>,
    pub payload: Option<PointCloud>,
}

impl Cell {
    pub fn new(id: CellId, dim: usize, kind: CellKind) -> Self {
        Cell {
            id,
            dim,
            kind,
            radius: 0.0,
            owner: None,
            payload: None,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_owner(mut self, owner: CellOwner) -> Self {
        self.owner = Some(owner);
        self
    }

    pub fn with_payload(mut self, payload: PointCloud) -> Self {
        self.payload = Some(payload);
        self
    }
}

/// Combinatorial attaching map: signed incidences one dimension down plus an
/// optional point-correspondence dictionary (carried, never interpreted).
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GlueMap {
    pub targets: Vec<(CellId, i8)>,
    pub correspondence: Vec<(u32, CellId)>,
}

impl GlueMap {
    /// Degenerate attachment (append); the cell contributes no boundary.
    pub fn empty() -> Self {
        GlueMap::default()
    }

    pub fn with_signs(targets: Vec<(CellId, i8)>) -> Self {
        GlueMap {
            targets,
            correspondence: Vec::new(),
        }
    }

    /// Targets without explicit signs get alternating signs in increasing id
    /// order, starting at -1 (so a 1-cell on {v0, v1} bounds as v1 - v0).
    pub fn alternating(mut ids: Vec<CellId>) -> Self {
        ids.sort();
        let targets = ids
            .into_iter()
            .enumerate()
            .map(|(i, id)| (id, if i % 2 == 0 { -1i8 } else { 1i8 }))
            .collect();
        GlueMap {
            targets,
            correspondence: Vec::new(),
        }
    }
}

/// Same-dimension attachment record (particle chains, atom chains).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Link {
    pub from: CellId,
    pub to: CellId,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComplexError {
    DuplicateCellId(CellId),
    DanglingTarget(CellId),
    DuplicateTarget(CellId),
    DimensionMismatch {
        cell: CellId,
        target: CellId,
        cell_dim: usize,
        target_dim: usize,
    },
    /// A glue target carries a sign outside {-1, +1}.
    InvalidSign(CellId),
    /// Payload points violate the cell's radius bound.
    PayloadOutOfBounds(CellId),
    DimensionOutOfRange(usize),
    NonPositiveWeight { dim: usize, index: usize },
    WeightLengthMismatch { dim: usize, expected: usize, got: usize },
    UnknownCell(CellId),
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::DuplicateCellId(id) => write!(f, "cell id {id} already present"),
            ComplexError::DanglingTarget(id) => write!(f, "glue target {id} does not exist"),
            ComplexError::DuplicateTarget(id) => write!(f, "glue target {id} listed twice"),
            ComplexError::DimensionMismatch {
                cell,
                target,
                cell_dim,
                target_dim,
            } => write!(
                f,
                "cell {cell} (dim {cell_dim}) may only attach to dim {} cells; target {target} has dim {target_dim}",
                cell_dim.saturating_sub(1)
            ),
            ComplexError::InvalidSign(id) => write!(f, "target {id} has sign outside {{-1, +1}}"),
            ComplexError::PayloadOutOfBounds(id) => {
                write!(f, "payload of cell {id} violates its radius bound")
            }
            ComplexError::DimensionOutOfRange(k) => write!(f, "dimension {k} out of range"),
            ComplexError::NonPositiveWeight { dim, index } => {
                write!(f, "weight {index} for dimension {dim} is not strictly positive")
            }
            ComplexError::WeightLengthMismatch { dim, expected, got } => {
                write!(f, "weights for dimension {dim}: expected {expected} entries, got {got}")
            }
            ComplexError::UnknownCell(id) => write!(f, "cell {id} does not exist"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ComplexError {}

/// Sparse integer boundary matrix B_k; rows are (k-1)-cells, columns are
/// k-cells, both in increasing id order.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub row_ids: Vec<CellId>,
    pub col_ids: Vec<CellId>,
    /// (row index, column index, sign) triplets.
    pub entries: Vec<(usize, usize, i32)>,
}

impl BoundaryMatrix {
    pub fn rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows(), self.cols());
        for &(r, c, s) in &self.entries {
            m[(r, c)] = s as f64;
        }
        m
    }

    pub fn to_dense_int(&self) -> Vec<i64> {
        let mut m = vec![0i64; self.rows() * self.cols()];
        for &(r, c, s) in &self.entries {
            m[r * self.cols() + c] = s as i64;
        }
        m
    }

    /// Exact integer product B_k · B_{k+1}; `self` must be B_k and `next`
    /// B_{k+1} of the same complex.
    pub fn compose(&self, next: &BoundaryMatrix) -> Vec<i64> {
        assert_eq!(self.cols(), next.rows(), "boundary matrices do not chain");
        let mut out = vec![0i64; self.rows() * next.cols()];
        // index next's entries by row for the sparse product
        let mut by_row: BTreeMap<usize, Vec<(usize, i32)>> = BTreeMap::new();
        for &(r, c, s) in &next.entries {
            by_row.entry(r).or_default().push((c, s));
        }
        for &(r, mid, s1) in &self.entries {
            if let Some(row) = by_row.get(&mid) {
                for &(c, s2) in row {
                    out[r * next.cols() + c] += s1 as i64 * s2 as i64;
                }
            }
        }
        out
    }

    /// Rank over the rationals (entries are small integers, so f64 Gaussian
    /// elimination with a fixed pivot tolerance is exact).
    pub fn rank(&self) -> usize {
        let mut m = self.to_dense();
        let (rows, cols) = (m.rows(), m.cols());
        let mut rank = 0;
        let mut pivot_row = 0;
        for col in 0..cols {
            if pivot_row >= rows {
                break;
            }
            let mut best = pivot_row;
            for r in pivot_row..rows {
                if math::abs(m[(r, col)]) > math::abs(m[(best, col)]) {
                    best = r;
                }
            }
            if math::abs(m[(best, col)]) < 1e-9 {
                continue;
            }
            if best != pivot_row {
                for c in 0..cols {
                    let tmp = m[(pivot_row, c)];
                    m[(pivot_row, c)] = m[(best, c)];
                    m[(best, c)] = tmp;
                }
            }
            let pv = m[(pivot_row, col)];
            for r in (pivot_row + 1)..rows {
                let factor = m[(r, col)] / pv;
                if factor != 0.0 {
                    for c in col..cols {
                        let sub = factor * m[(pivot_row, c)];
                        m[(r, c)] -= sub;
                    }
                }
            }
            rank += 1;
            pivot_row += 1;
        }
        rank
    }
}

/// Finite CW-complex: cells grouped by dimension, combinatorial attaching
/// maps, same-dimension links, and per-dimension weight vectors.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Complex {
    cells: Vec<Cell>,
    glue_maps: Vec<GlueMap>,
    links: Vec<Link>,
    /// Explicit weights per dimension, aligned with id-sorted cells of that
    /// dimension; absent dimensions default to unit weights.
    weights: BTreeMap<usize, Vec<f64>>,
}

impl Complex {
    pub fn new() -> Self {
        Complex::default()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn glue_maps(&self) -> &[GlueMap] {
        &self.glue_maps
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Smallest id not yet in use (ids are dense when built through this).
    pub fn fresh_id(&self) -> CellId {
        CellId(self.cells.iter().map(|c| c.id.0 + 1).max().unwrap_or(0))
    }

    pub fn contains(&self, id: CellId) -> bool {
        self.position(id).is_some()
    }

    fn position(&self, id: CellId) -> Option<usize> {
        self.cells.iter().position(|c| c.id == id)
    }

    pub fn cell(&self, id: CellId) -> Option<&Cell> {
        self.position(id).map(|i| &self.cells[i])
    }

    pub fn glue_map_of(&self, id: CellId) -> Option<&GlueMap> {
        self.position(id).map(|i| &self.glue_maps[i])
    }

    /// Maximum cell dimension, or None for the empty complex.
    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// Indices (into `cells`) of k-cells, sorted by id.
    fn dim_positions(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.dim == k)
            .map(|(i, _)| i)
            .collect();
        idx.sort_by_key(|&i| self.cells[i].id);
        idx
    }

    pub fn cells_of_dim(&self, k: usize) -> Vec<&Cell> {
        self.dim_positions(k).into_iter().map(|i| &self.cells[i]).collect()
    }

    pub fn count_of_dim(&self, k: usize) -> usize {
        self.cells.iter().filter(|c| c.dim == k).count()
    }

    fn validate_payload(cell: &Cell) -> Result<(), ComplexError> {
        let Some(cloud) = &cell.payload else {
            return Ok(());
        };
        for p in &cloud.points {
            let r = math::norm(p);
            let ok = match cell.kind {
                // Electron supports are open balls; everything else closed.
                CellKind::Electron => r < cell.radius,
                _ => r <= cell.radius * (1.0 + 1e-9),
            };
            if !ok {
                return Err(ComplexError::PayloadOutOfBounds(cell.id));
            }
        }
        Ok(())
    }

    /// Attach a cell along its glue map, yielding the extended complex.
    pub fn glue(mut self, cell: Cell, map: GlueMap) -> Result<Self, ComplexError> {
        if self.contains(cell.id) {
            return Err(ComplexError::DuplicateCellId(cell.id));
        }
        let mut seen: Vec<CellId> = Vec::with_capacity(map.targets.len());
        for &(target, sign) in &map.targets {
            if sign != 1 && sign != -1 {
                return Err(ComplexError::InvalidSign(target));
            }
            if seen.contains(&target) {
                return Err(ComplexError::DuplicateTarget(target));
            }
            seen.push(target);
            let tcell = self
                .cell(target)
                .ok_or(ComplexError::DanglingTarget(target))?;
            if cell.dim == 0 || tcell.dim != cell.dim - 1 {
                return Err(ComplexError::DimensionMismatch {
                    cell: cell.id,
                    target,
                    cell_dim: cell.dim,
                    target_dim: tcell.dim,
                });
            }
        }
        Self::validate_payload(&cell)?;
        self.cells.push(cell);
        self.glue_maps.push(map);
        Ok(self)
    }

    /// Record a same-dimension (or cross-subcomplex) attachment.
    pub fn link(&mut self, from: CellId, to: CellId) -> Result<(), ComplexError> {
        if !self.contains(from) {
            return Err(ComplexError::UnknownCell(from));
        }
        if !self.contains(to) {
            return Err(ComplexError::UnknownCell(to));
        }
        self.links.push(Link { from, to });
        Ok(())
    }

    pub fn set_weights(&mut self, dim: usize, w: Vec<f64>) {
        self.weights.insert(dim, w);
    }

    fn weights_for(&self, dim: usize) -> Result<Vec<f64>, ComplexError> {
        let n = self.count_of_dim(dim);
        match self.weights.get(&dim) {
            Some(w) => {
                if w.len() != n {
                    return Err(ComplexError::WeightLengthMismatch {
                        dim,
                        expected: n,
                        got: w.len(),
                    });
                }
                for (i, &v) in w.iter().enumerate() {
                    if !(v > 0.0) {
                        return Err(ComplexError::NonPositiveWeight { dim, index: i });
                    }
                }
                Ok(w.clone())
            }
            None => Ok(vec![1.0; n]),
        }
    }

    /// Boundary matrix B_k for 1 <= k <= max dim.
    pub fn boundary_matrix(&self, k: usize) -> Result<BoundaryMatrix, ComplexError> {
        let max = self.max_dim().unwrap_or(0);
        if k < 1 || k > max {
            return Err(ComplexError::DimensionOutOfRange(k));
        }
        Ok(self.boundary_matrix_unchecked(k))
    }

    fn boundary_matrix_unchecked(&self, k: usize) -> BoundaryMatrix {
        let row_pos = self.dim_positions(k.wrapping_sub(1));
        let col_pos = self.dim_positions(k);
        let row_ids: Vec<CellId> = row_pos.iter().map(|&i| self.cells[i].id).collect();
        let col_ids: Vec<CellId> = col_pos.iter().map(|&i| self.cells[i].id).collect();
        let row_index: BTreeMap<CellId, usize> =
            row_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut entries = Vec::new();
        for (c, &pos) in col_pos.iter().enumerate() {
            for &(target, sign) in &self.glue_maps[pos].targets {
                let r = row_index[&target];
                entries.push((r, c, sign as i32));
            }
        }
        BoundaryMatrix {
            k,
            row_ids,
            col_ids,
            entries,
        }
    }

    /// Hodge Laplacian on k-cochains:
    /// B_k^T W_{k-1}^{-1} B_k W_k + W_k^{-1} B_{k+1} W_{k+1} B_{k+1}^T.
    /// With unit weights this is B_k^T B_k + B_{k+1} B_{k+1}^T.
    pub fn hodge_laplacian(&self, k: usize) -> Result<Matrix, ComplexError> {
        let max = self.max_dim().unwrap_or(0);
        if k > max {
            return Err(ComplexError::DimensionOutOfRange(k));
        }
        let n_k = self.count_of_dim(k);
        let w_k = self.weights_for(k)?;
        let mut lap = Matrix::zeros(n_k, n_k);
        if k >= 1 {
            let w_down = self.weights_for(k - 1)?;
            let b_k = self.boundary_matrix_unchecked(k).to_dense();
            // B_k^T W_{k-1}^{-1} B_k W_k
            let mut left = b_k.transpose();
            for i in 0..left.rows() {
                for j in 0..left.cols() {
                    left[(i, j)] /= w_down[j];
                }
            }
            let mut down = left.matmul(&b_k);
            for i in 0..down.rows() {
                for j in 0..down.cols() {
                    down[(i, j)] *= w_k[j];
                }
            }
            lap = lap.add(&down);
        }
        if k < max {
            let w_up = self.weights_for(k + 1)?;
            let b_up = self.boundary_matrix_unchecked(k + 1).to_dense();
            // W_k^{-1} B_{k+1} W_{k+1} B_{k+1}^T
            let mut mid = b_up.clone();
            for i in 0..mid.rows() {
                for j in 0..mid.cols() {
                    mid[(i, j)] *= w_up[j];
                }
            }
            let mut up = mid.matmul(&b_up.transpose());
            for i in 0..up.rows() {
                for j in 0..up.cols() {
                    up[(i, j)] /= w_k[i];
                }
            }
            lap = lap.add(&up);
        }
        Ok(lap)
    }

    /// Betti numbers b_0..b_maxdim via integer boundary ranks.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let Some(max) = self.max_dim() else {
            return Vec::new();
        };
        let mut ranks = vec![0usize; max + 2];
        for k in 1..=max {
            ranks[k] = self.boundary_matrix_unchecked(k).rank();
        }
        (0..=max)
            .map(|k| self.count_of_dim(k) - ranks[k] - ranks[k + 1])
            .collect()
    }

    /// Every cell's closure (transitive glue targets) is finite and present.
    pub fn is_closure_finite(&self) -> bool {
        for cell in &self.cells {
            let mut stack = vec![cell.id];
            let mut seen: Vec<CellId> = Vec::new();
            while let Some(id) = stack.pop() {
                if seen.contains(&id) {
                    continue;
                }
                seen.push(id);
                if seen.len() > self.cells.len() {
                    return false;
                }
                match self.glue_map_of(id) {
                    Some(map) => stack.extend(map.targets.iter().map(|&(t, _)| t)),
                    None => return false,
                }
            }
        }
        true
    }

    /// Per-cell degrees in id order: (down incidence, up incidence, links).
    pub fn degree_arrays(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let order = self.id_order();
        let slot: BTreeMap<CellId, usize> = order
            .iter()
            .enumerate()
            .map(|(i, &pos)| (self.cells[pos].id, i))
            .collect();
        let n = self.cells.len();
        let mut down = vec![0usize; n];
        let mut up = vec![0usize; n];
        let mut link_deg = vec![0usize; n];
        for (pos, map) in self.glue_maps.iter().enumerate() {
            let s = slot[&self.cells[pos].id];
            down[s] = map.targets.len();
            for &(t, _) in &map.targets {
                up[slot[&t]] += 1;
            }
        }
        for l in &self.links {
            link_deg[slot[&l.from]] += 1;
            link_deg[slot[&l.to]] += 1;
        }
        (down, up, link_deg)
    }

    /// Positions of cells sorted by id (the canonical traversal order).
    pub fn id_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cells.len()).collect();
        order.sort_by_key(|&i| self.cells[i].id);
        order
    }

    /// Canonical byte encoding of the full structure; equal bytes iff equal
    /// complexes (up to the canonical cell order).
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let order = self.id_order();
        out.extend_from_slice(&(self.cells.len() as u64).to_le_bytes());
        for &pos in &order {
            let cell = &self.cells[pos];
            out.extend_from_slice(&cell.id.0.to_le_bytes());
            out.extend_from_slice(&(cell.dim as u32).to_le_bytes());
            out.push(cell.kind.code());
            out.extend_from_slice(&cell.radius.to_bits().to_le_bytes());
            match &cell.owner {
                Some(o) => {
                    out.push(1);
                    out.extend_from_slice(&o.atomic_number.to_le_bytes());
                    out.extend_from_slice(&o.neutron_count.to_le_bytes());
                    out.extend_from_slice(&o.atom_index.to_le_bytes());
                }
                None => out.push(0),
            }
            match &cell.payload {
                Some(cloud) => {
                    out.extend_from_slice(&(cloud.points.len() as u32).to_le_bytes());
                    for p in &cloud.points {
                        out.extend_from_slice(&(p.len() as u32).to_le_bytes());
                        for &x in p {
                            out.extend_from_slice(&x.to_bits().to_le_bytes());
                        }
                    }
                }
                None => out.extend_from_slice(&u32::MAX.to_le_bytes()),
            }
            let map = &self.glue_maps[pos];
            out.extend_from_slice(&(map.targets.len() as u32).to_le_bytes());
            for &(t, s) in &map.targets {
                out.extend_from_slice(&t.0.to_le_bytes());
                out.push(s as u8);
            }
        }
        out.extend_from_slice(&(self.links.len() as u64).to_le_bytes());
        for l in &self.links {
            out.extend_from_slice(&l.from.0.to_le_bytes());
            out.extend_from_slice(&l.to.0.to_le_bytes());
        }
        for (dim, w) in &self.weights {
            out.extend_from_slice(&(*dim as u32).to_le_bytes());
            for &v in w {
                out.extend_from_slice(&v.to_bits().to_le_bytes());
            }
        }
        out
    }

    /// Stable structural fingerprint.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.write(&self.canonical_bytes());
        h.finish()
    }
}

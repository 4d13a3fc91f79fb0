//! Construction of the distance-d tetrahedral color code family.
//!
//! The codes live on the tetragonal-disphenoid honeycomb of the
//! body-centered cubic lattice: corner vertices at all-even integer triples,
//! center vertices at all-odd triples, and each cell a tetrahedron of two
//! nearest corners and two nearest centers. A code is carved out of the
//! honeycomb by four half-spaces with tetrahedral normals; the first vertex
//! layer beyond each cutting plane is single-colored, and every cut-off
//! vertex is replaced by the quasivertex of that facet.

use crate::gf2::{gf2_rank, BitMatrix};
use crate::lattice::{
    Chain, Color, DualLattice, EdgeId, VertexId, VertexInfo, DIM_EDGE, DIM_TETRA, DIM_VERTEX,
};
use serde::{Deserialize, Serialize};

/// The four tetrahedral facet normals; also the sweep directions.
pub const TETRA_AXES: [[i32; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

/// Pauli error species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorType {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "z")]
    Z,
}

impl std::fmt::Display for ErrorType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErrorType::X => write!(f, "x"),
            ErrorType::Z => write!(f, "z"),
        }
    }
}

impl std::str::FromStr for ErrorType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(ErrorType::X),
            "z" => Ok(ErrorType::Z),
            other => Err(format!("unknown error type {:?} (expected x or z)", other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub distance: u32,
}

impl CodeSpec {
    pub fn new(distance: u32) -> Result<CodeSpec, BuildError> {
        if distance < 3 || distance % 2 == 0 {
            return Err(BuildError::BadDistance(distance));
        }
        Ok(CodeSpec { distance })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("code distance must be an odd integer >= 3, got {0}")]
    BadDistance(u32),
    #[error("extent {0} is too small to contain any honeycomb cell")]
    ExtentTooSmall(i32),
    #[error("lattice construction failed: {0}")]
    Lattice(#[from] crate::lattice::LatticeError),
    #[error("code validation failed: {0}")]
    Validation(String),
}

/// Vertex color from the construction coloring. Corners (even coordinate
/// sum s) alternate r/g with s mod 4, centers (odd s) alternate y/b.
fn position_color(p: [i32; 3]) -> Color {
    let s = p[0] + p[1] + p[2];
    match s.rem_euclid(4) {
        0 => Color::R,
        1 => Color::Y,
        2 => Color::G,
        3 => Color::B,
        _ => unreachable!(),
    }
}

/// Enumerate honeycomb cells: for each corner edge (two corners two apart
/// along axis `i`) and each perpendicular center edge nearest to it, one
/// tetrahedron. `emit` receives the four vertex positions.
fn for_each_cell(corner_range: std::ops::RangeInclusive<i32>, mut emit: impl FnMut([[i32; 3]; 4])) {
    let lo = *corner_range.start();
    let hi = *corner_range.end();
    let mut p = [0i32; 3];
    for x in (lo..=hi).step_by(2) {
        for y in (lo..=hi).step_by(2) {
            for z in (lo..=hi).step_by(2) {
                p = [x, y, z];
                for axis in 0..3 {
                    let mut c2 = p;
                    c2[axis] += 2;
                    for (j_axis, k_axis) in [
                        ((axis + 1) % 3, (axis + 2) % 3),
                        ((axis + 2) % 3, (axis + 1) % 3),
                    ] {
                        for delta in [-1i32, 1] {
                            let mut b1 = p;
                            b1[axis] += 1;
                            b1[j_axis] -= 1;
                            b1[k_axis] += delta;
                            let mut b2 = p;
                            b2[axis] += 1;
                            b2[j_axis] += 1;
                            b2[k_axis] += delta;
                            emit([p, c2, b1, b2]);
                        }
                    }
                }
            }
        }
    }
    let _ = p;
}

/// Build the unbounded-boundary disphenoid honeycomb restricted to the box
/// `|coordinate| <= extent`. No quasivertices; every cell carries all four
/// colors.
pub fn build_honeycomb(extent: i32) -> Result<DualLattice, BuildError> {
    if extent < 2 {
        return Err(BuildError::ExtentTooSmall(extent));
    }
    let inside = |p: [i32; 3]| p.iter().all(|c| c.abs() <= extent);
    let mut cells: Vec<[[i32; 3]; 4]> = Vec::new();
    for_each_cell(-extent - 2..=extent, |vs| {
        if vs.iter().all(|&v| inside(v)) {
            cells.push(vs);
        }
    });
    if cells.is_empty() {
        return Err(BuildError::ExtentTooSmall(extent));
    }

    let mut positions: Vec<[i32; 3]> = cells.iter().flatten().copied().collect();
    positions.sort_unstable();
    positions.dedup();
    let index = |p: &[i32; 3]| positions.binary_search(p).unwrap() as VertexId;

    let vertices: Vec<VertexInfo> = positions
        .iter()
        .map(|&p| VertexInfo {
            color: position_color(p),
            is_quasi: false,
            position: p,
        })
        .collect();
    let tetras: Vec<[VertexId; 4]> = cells
        .iter()
        .map(|vs| {
            let mut t = [index(&vs[0]), index(&vs[1]), index(&vs[2]), index(&vs[3])];
            t.sort_unstable();
            t
        })
        .collect();
    Ok(DualLattice::from_tetrahedra(vertices, tetras)?)
}

/// Facet cutting offsets for the distance-d code: the code region is
/// `{ v : axis_f . v <= offset_f for all four facets f }`.
///
/// The base offsets (3, 2, 0, 1) are the smallest whole set with pairwise
/// distinct residues mod 4 (so the four first exterior layers carry four
/// distinct colors) that validates at d = 3 with the expected 15 qubits and
/// exhaustive distance 3. Growing every offset by 4 reproduces the same
/// boundary structure one lattice period further out, stepping the distance
/// by 2.
pub fn offsets_for_distance(d: u32) -> [i32; 4] {
    let grow = 2 * (d as i32 - 3);
    [3 + grow, 2 + grow, 0 + grow, 1 + grow]
}

/// The tetrahedral color code: a colored dual lattice plus stabilizer
/// supports. Qubits are tetrahedra; X stabilizers are the stars of real
/// (non-quasi) vertices; Z stabilizers are the tetrahedron sets of edges
/// with at least one real endpoint. The four pure-quasivertex edges of the
/// excluded boundary tetrahedron, like that tetrahedron itself, correspond
/// to no operator.
#[derive(Debug, Clone)]
pub struct TetrahedralCode {
    pub lattice: DualLattice,
    pub d: u32,
    pub n_qubits: usize,
    /// Qubit supports, one per real vertex (`x_stabilizer_vertices`).
    pub x_stabilizers: Vec<Vec<u32>>,
    pub x_stabilizer_vertices: Vec<VertexId>,
    /// Qubit supports, one per stabilizer edge (`z_stabilizer_edges`).
    pub z_stabilizers: Vec<Vec<u32>>,
    pub z_stabilizer_edges: Vec<EdgeId>,
    /// Packed mask of stabilizer edges over all lattice edges.
    z_stab_edge_mask: Vec<u64>,
    /// Packed mask of real vertices.
    real_vertex_mask: Vec<u64>,
}

impl TetrahedralCode {
    fn from_lattice(lattice: DualLattice, d: u32) -> TetrahedralCode {
        let n_qubits = lattice.tetra_count();
        let mut x_stabilizers = Vec::new();
        let mut x_stabilizer_vertices = Vec::new();
        let mut real_vertex_mask = vec![0u64; lattice.vertex_count().div_ceil(64).max(1)];
        for v in 0..lattice.vertex_count() as u32 {
            if lattice.is_quasi(v) {
                continue;
            }
            real_vertex_mask[v as usize / 64] |= 1u64 << (v % 64);
            x_stabilizer_vertices.push(v);
            x_stabilizers.push(lattice.star(v, DIM_TETRA).to_vec());
        }
        let mut z_stabilizers = Vec::new();
        let mut z_stabilizer_edges = Vec::new();
        let mut z_stab_edge_mask = vec![0u64; lattice.edge_count().div_ceil(64).max(1)];
        for e in 0..lattice.edge_count() as u32 {
            let [a, b] = lattice.edge_vertices(e);
            if lattice.is_quasi(a) && lattice.is_quasi(b) {
                continue;
            }
            z_stab_edge_mask[e as usize / 64] |= 1u64 << (e % 64);
            z_stabilizer_edges.push(e);
            z_stabilizers.push(lattice.edge_cofaces(e, DIM_TETRA).to_vec());
        }
        TetrahedralCode {
            lattice,
            d,
            n_qubits,
            x_stabilizers,
            x_stabilizer_vertices,
            z_stabilizers,
            z_stabilizer_edges,
            z_stab_edge_mask,
            real_vertex_mask,
        }
    }

    /// Both transversal logical operators act on every qubit.
    pub fn logical_support(&self) -> Chain {
        Chain::from_ids(DIM_TETRA, self.n_qubits, 0..self.n_qubits as u32)
    }

    /// Loop-like syndrome of an X error: the full mod-2 edge boundary of the
    /// error's tetrahedra. This is the decoder's input; it includes the four
    /// pure-quasivertex edges even though those carry no measurement.
    pub fn x_syndrome(&self, error: &Chain) -> Chain {
        assert_eq!(error.dim(), DIM_TETRA);
        self.lattice
            .boundary_project(error, DIM_EDGE)
            .expect("tetra chain projects to edges")
    }

    /// Point-like syndrome of a Z error: real vertices incident to an odd
    /// number of error tetrahedra. Quasivertices carry no X stabilizer and
    /// are filtered out.
    pub fn z_syndrome(&self, error: &Chain) -> Chain {
        assert_eq!(error.dim(), DIM_TETRA);
        let mut verts = self
            .lattice
            .boundary_project(error, DIM_VERTEX)
            .expect("tetra chain projects to vertices");
        verts.mask_words(&self.real_vertex_mask);
        verts
    }

    /// Does the residual commute with every opposite-type stabilizer
    /// generator? For X residuals only the stabilizer edges count; the
    /// pure-quasivertex edges are not measurements.
    pub fn syndrome_is_zero(&self, residual: &Chain, error_type: ErrorType) -> bool {
        match error_type {
            ErrorType::X => {
                let mut edges = self.x_syndrome(residual);
                edges.mask_words(&self.z_stab_edge_mask);
                edges.is_empty()
            }
            ErrorType::Z => self.z_syndrome(residual).is_empty(),
        }
    }

    /// Ratio of boundary qubits (tetrahedra touching a quasivertex) to bulk
    /// qubits.
    pub fn boundary_bulk_ratio(&self) -> BoundaryRatio {
        let mut boundary = 0usize;
        for t in 0..self.n_qubits as u32 {
            if self
                .lattice
                .tetra_vertices(t)
                .iter()
                .any(|&v| self.lattice.is_quasi(v))
            {
                boundary += 1;
            }
        }
        BoundaryRatio {
            boundary,
            bulk: self.n_qubits - boundary,
        }
    }
}

/// Boundary-to-bulk qubit counts; the ratio is +inf when no bulk qubit
/// exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRatio {
    pub boundary: usize,
    pub bulk: usize,
}

impl BoundaryRatio {
    pub fn value(&self) -> f64 {
        if self.bulk == 0 {
            f64::INFINITY
        } else {
            self.boundary as f64 / self.bulk as f64
        }
    }
}

/// Carve the distance-d code out of the honeycomb.
pub fn carve_tetrahedral_code(spec: CodeSpec) -> Result<TetrahedralCode, BuildError> {
    let code = carve_with_offsets(spec.distance, offsets_for_distance(spec.distance))?;
    validate_code(&code)?;
    Ok(code)
}

/// Carve with explicit facet offsets (no validation). Offsets must have
/// pairwise distinct residues mod 4 so each facet's first exterior layer is
/// single-colored with a distinct color.
pub fn carve_with_offsets(d: u32, offsets: [i32; 4]) -> Result<TetrahedralCode, BuildError> {
    {
        let mut res: Vec<i32> = offsets.iter().map(|m| m.rem_euclid(4)).collect();
        res.sort_unstable();
        res.dedup();
        if res.len() != 4 {
            return Err(BuildError::Validation(format!(
                "offsets {:?} do not have distinct residues mod 4",
                offsets
            )));
        }
    }
    let excess = |p: [i32; 3], f: usize| {
        let n = TETRA_AXES[f];
        n[0] * p[0] + n[1] * p[1] + n[2] * p[2] - offsets[f]
    };
    // Color sanity for the replacement rule: the facet color is the color of
    // the first exterior layer.
    let facet_color = |f: usize| -> Color {
        match (offsets[f] + 1).rem_euclid(4) {
            0 => Color::R,
            1 => Color::Y,
            2 => Color::G,
            3 => Color::B,
            _ => unreachable!(),
        }
    };

    let bound = offsets.iter().copied().max().unwrap() + 3;
    let mut kept: Vec<[KeptVertex; 4]> = Vec::new();
    for_each_cell(-bound..=bound, |vs| {
        let mut facet_exterior_counts = [0u8; 4];
        let mut out: [KeptVertex; 4] = [KeptVertex::Interior([0; 3]); 4];
        for (slot, &p) in vs.iter().enumerate() {
            let mut first_layer_facet = None;
            let mut exterior = false;
            for f in 0..4 {
                let ex = excess(p, f);
                if ex >= 1 {
                    exterior = true;
                    facet_exterior_counts[f] += 1;
                    if ex == 1 {
                        first_layer_facet = Some(f);
                    }
                }
            }
            out[slot] = if exterior {
                match first_layer_facet {
                    Some(f) => {
                        debug_assert_eq!(position_color(p), facet_color(f));
                        KeptVertex::Quasi(f as u8)
                    }
                    // Exterior but beyond the first layer of every facet it
                    // exceeds: not replaceable, cell dropped below.
                    None => KeptVertex::Unreplaceable,
                }
            } else {
                KeptVertex::Interior(p)
            };
        }
        let droppable = facet_exterior_counts.iter().any(|&c| c >= 2)
            || out.iter().any(|v| matches!(v, KeptVertex::Unreplaceable))
            || out.iter().all(|v| matches!(v, KeptVertex::Quasi(_)));
        if !droppable {
            kept.push(out);
        }
    });

    if kept.is_empty() {
        return Err(BuildError::Validation(format!(
            "offsets {:?} keep no cells",
            offsets
        )));
    }

    let mut interior_positions: Vec<[i32; 3]> = kept
        .iter()
        .flatten()
        .filter_map(|v| match v {
            KeptVertex::Interior(p) => Some(*p),
            _ => None,
        })
        .collect();
    interior_positions.sort_unstable();
    interior_positions.dedup();

    let n_interior = interior_positions.len() as u32;
    let mut vertices: Vec<VertexInfo> = interior_positions
        .iter()
        .map(|&p| VertexInfo {
            color: position_color(p),
            is_quasi: false,
            position: p,
        })
        .collect();
    for f in 0..4usize {
        let n = TETRA_AXES[f];
        let t = offsets[f] + 1;
        vertices.push(VertexInfo {
            color: facet_color(f),
            is_quasi: true,
            position: [n[0] * t, n[1] * t, n[2] * t],
        });
    }

    let tetras: Vec<[VertexId; 4]> = kept
        .iter()
        .map(|cell| {
            let mut t = [0u32; 4];
            for (k, v) in cell.iter().enumerate() {
                t[k] = match v {
                    KeptVertex::Interior(p) => {
                        interior_positions.binary_search(p).unwrap() as u32
                    }
                    KeptVertex::Quasi(f) => n_interior + *f as u32,
                    KeptVertex::Unreplaceable => unreachable!(),
                };
            }
            t
        })
        .collect();

    let lattice = DualLattice::from_tetrahedra(vertices, tetras)?;
    Ok(TetrahedralCode::from_lattice(lattice, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KeptVertex {
    Interior([i32; 3]),
    Quasi(u8),
    Unreplaceable,
}

/// Structural and algebraic validation: stabilizer supports are even and
/// nonempty, all stabilizer pairs commute, the code encodes exactly one
/// logical qubit, vertex links close exactly for real vertices, and the
/// transversal all-qubit operators are logical.
pub fn validate_code(code: &TetrahedralCode) -> Result<(), BuildError> {
    let n = code.n_qubits;
    if n % 2 == 0 {
        return Err(BuildError::Validation(format!(
            "qubit count {} is even; the transversal logicals require odd parity",
            n
        )));
    }
    for (i, s) in code.x_stabilizers.iter().enumerate() {
        if s.is_empty() || s.len() % 2 != 0 {
            return Err(BuildError::Validation(format!(
                "x stabilizer {} (vertex {}) has support of size {}",
                i, code.x_stabilizer_vertices[i], s.len()
            )));
        }
    }
    for (i, s) in code.z_stabilizers.iter().enumerate() {
        if s.is_empty() || s.len() % 2 != 0 {
            return Err(BuildError::Validation(format!(
                "z stabilizer {} (edge {}) has support of size {}",
                i, code.z_stabilizer_edges[i], s.len()
            )));
        }
    }

    // CSS commutation via packed row intersections.
    let hx = BitMatrix::from_supports(&code.x_stabilizers, n);
    let hz = BitMatrix::from_supports(&code.z_stabilizers, n);
    for xi in 0..hx.rows() {
        for zi in 0..hz.rows() {
            let parity: u32 = hx
                .row(xi)
                .iter()
                .zip(hz.row(zi))
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if parity % 2 != 0 {
                return Err(BuildError::Validation(format!(
                    "x stabilizer {} anticommutes with z stabilizer {}",
                    xi, zi
                )));
            }
        }
    }

    let k = n as i64 - gf2_rank(&hx) as i64 - gf2_rank(&hz) as i64;
    if k != 1 {
        return Err(BuildError::Validation(format!(
            "expected one logical qubit, rank computation gives k = {}",
            k
        )));
    }

    // Link closure: the star boundary of a real vertex is a closed surface;
    // a quasivertex's star boundary is a disc (it has rim edges).
    for v in 0..code.lattice.vertex_count() as u32 {
        let link = code.lattice.link_surface(v);
        if link.is_empty() {
            return Err(BuildError::Validation(format!(
                "vertex {} has an empty star",
                v
            )));
        }
        let mut edge_use: std::collections::HashMap<EdgeId, u8> = std::collections::HashMap::new();
        for &f in &link {
            for e in code.lattice.face_edge_ids(f) {
                *edge_use.entry(e).or_insert(0) += 1;
            }
        }
        let closed = edge_use.values().all(|&c| c == 2);
        let ok = edge_use.values().all(|&c| c == 1 || c == 2);
        if code.lattice.is_quasi(v) {
            if closed || !ok {
                return Err(BuildError::Validation(format!(
                    "quasivertex {} link is not a bounded surface",
                    v
                )));
            }
        } else if !closed {
            return Err(BuildError::Validation(format!(
                "real vertex {} link is not closed",
                v
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// code.json sidecar
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct CodeDocument {
    pub d: u32,
    pub n_qubits: usize,
    pub beta: BoundaryRatio,
    pub x_stabilizer_vertices: Vec<VertexId>,
    pub x_stabilizers: Vec<Vec<u32>>,
    pub z_stabilizer_edges: Vec<EdgeId>,
    pub z_stabilizers: Vec<Vec<u32>>,
    pub logical_x_support: Vec<u32>,
    pub logical_z_support: Vec<u32>,
}

impl TetrahedralCode {
    pub fn to_code_document(&self) -> CodeDocument {
        let all: Vec<u32> = (0..self.n_qubits as u32).collect();
        CodeDocument {
            d: self.d,
            n_qubits: self.n_qubits,
            beta: self.boundary_bulk_ratio(),
            x_stabilizer_vertices: self.x_stabilizer_vertices.clone(),
            x_stabilizers: self.x_stabilizers.clone(),
            z_stabilizer_edges: self.z_stabilizer_edges.clone(),
            z_stabilizers: self.z_stabilizers.clone(),
            logical_x_support: all.clone(),
            logical_z_support: all,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn honeycomb_contains_reference_cell() {
        let lat = build_honeycomb(3).unwrap();
        // The cell {(0,0,0),(2,0,0),(1,1,1),(1,-1,1)} with four distinct colors.
        let want = [[0, 0, 0], [2, 0, 0], [1, 1, 1], [1, -1, 1]];
        let mut colors = Vec::new();
        let found = (0..lat.tetra_count() as u32).any(|t| {
            let vs = lat.tetra_vertices(t);
            let mut ps: Vec<[i32; 3]> = vs.iter().map(|&v| lat.position(v)).collect();
            ps.sort_unstable();
            let mut want_sorted = want;
            want_sorted.sort_unstable();
            if ps == want_sorted {
                colors = vs.iter().map(|&v| lat.color(v)).collect();
                true
            } else {
                false
            }
        });
        assert!(found, "reference cell missing from honeycomb");
        colors.sort_unstable();
        colors.dedup();
        assert_eq!(colors.len(), 4);
    }

    #[test]
    fn honeycomb_coloring_formula_on_reference_cell() {
        assert_eq!(position_color([0, 0, 0]), Color::R);
        assert_eq!(position_color([2, 0, 0]), Color::G);
        assert_eq!(position_color([1, 1, 1]), Color::B);
        assert_eq!(position_color([1, -1, 1]), Color::Y);
    }

    #[test]
    fn honeycomb_interior_cell_degree_is_constant() {
        let extent = 5;
        let lat = build_honeycomb(extent).unwrap();
        let mut degrees = Vec::new();
        for v in 0..lat.vertex_count() as u32 {
            let p = lat.position(v);
            if p.iter().all(|c| c.abs() <= extent - 3) {
                degrees.push(lat.star(v, DIM_TETRA).len());
            }
        }
        assert!(!degrees.is_empty());
        // Both sublattices share one interior cell-degree; the honeycomb has
        // 24 disphenoids around every interior vertex.
        assert!(degrees.iter().all(|&d| d == degrees[0]));
        assert_eq!(degrees[0], 24);
    }

    #[test]
    fn extent_too_small_is_an_error() {
        assert!(matches!(
            build_honeycomb(0),
            Err(BuildError::ExtentTooSmall(_))
        ));
    }

    #[test]
    fn distance_spec_validation() {
        assert!(CodeSpec::new(3).is_ok());
        assert!(CodeSpec::new(4).is_err());
        assert!(CodeSpec::new(1).is_err());
    }
}

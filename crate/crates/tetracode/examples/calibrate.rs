//! Development aid: report structural statistics of carved codes across
//! distances and offset choices. Run with `cargo run -p tetracode
//! --example calibrate`.

use tetracode::code::{carve_with_offsets, offsets_for_distance, validate_code};
use tetracode::gf2::{gf2_rank, min_logical_weight, BitMatrix};
use tetracode::ErrorType;

fn main() {
    for d in [3u32, 5, 7, 9, 11] {
        let offsets = offsets_for_distance(d);
        match carve_with_offsets(d, offsets) {
            Ok(code) => {
                let valid = validate_code(&code);
                let hx = BitMatrix::from_supports(&code.x_stabilizers, code.n_qubits);
                let hz = BitMatrix::from_supports(&code.z_stabilizers, code.n_qubits);
                let (rx, rz) = (gf2_rank(&hx), gf2_rank(&hz));
                let beta = code.boundary_bulk_ratio();
                let quasi_stars: Vec<usize> = code
                    .lattice
                    .quasivertices()
                    .iter()
                    .map(|&q| code.lattice.star(q, 3).len())
                    .collect();
                let max_real_star = (0..code.lattice.vertex_count() as u32)
                    .filter(|&v| !code.lattice.is_quasi(v))
                    .map(|v| code.lattice.star(v, 3).len())
                    .max()
                    .unwrap();
                println!(
                    "d={:2} offsets={:?} n={:5} |Sx|={:4} |Sz|={:5} edges={:5} rx={:4} rz={:5} k={} beta={}/{}={:.3} quasi_stars={:?} max_real_star={} valid={:?}",
                    d,
                    offsets,
                    code.n_qubits,
                    code.x_stabilizers.len(),
                    code.z_stabilizers.len(),
                    code.lattice.edge_count(),
                    rx,
                    rz,
                    code.n_qubits as i64 - rx as i64 - rz as i64,
                    beta.boundary,
                    beta.bulk,
                    beta.value(),
                    quasi_stars,
                    max_real_star,
                    valid.err().map(|e| e.to_string()),
                );
                if d == 3 {
                    println!(
                        "   d=3 min logical weight: X={:?} Z={:?}",
                        min_logical_weight(&code, ErrorType::X, 4),
                        min_logical_weight(&code, ErrorType::Z, 4)
                    );
                }
            }
            Err(e) => println!("d={:2} offsets={:?} FAILED: {}", d, offsets, e),
        }
    }
}

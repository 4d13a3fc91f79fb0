//! Packed GF(2) linear algebra: rank, solving, and stabilizer-group
//! membership. This is the independent oracle the decoder tests are checked
//! against, so it deliberately shares no code with the decoding path.

use crate::code::{ErrorType, TetrahedralCode};
use crate::lattice::{Chain, DIM_TETRA};

/// Dense bit matrix over GF(2), one packed row per `words_per_row` u64 words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: matrix has {expected} columns/rows, vector has {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BitMatrix {
        let words_per_row = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Rows given as sorted-or-not lists of set column indices.
    pub fn from_supports<S: AsRef<[u32]>>(supports: &[S], cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(supports.len(), cols);
        for (r, s) in supports.iter().enumerate() {
            for &c in s.as_ref() {
                m.set(r, c as usize, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words_per_row + c / 64;
        if bit {
            self.data[w] |= 1u64 << (c % 64);
        } else {
            self.data[w] &= !(1u64 << (c % 64));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        let w = r * self.words_per_row + c / 64;
        (self.data[w] >> (c % 64)) & 1 == 1
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn xor_row_from(&mut self, dst: usize, src: usize) {
        self.xor_row_tail(dst, src, 0);
    }

    /// XOR `src` row into `dst`, skipping the first `from_word` words (known
    /// to be zero in both during forward elimination).
    fn xor_row_tail(&mut self, dst: usize, src: usize, from_word: usize) {
        let (a, b) = (dst * self.words_per_row, src * self.words_per_row);
        for k in from_word..self.words_per_row {
            let v = self.data[b + k];
            self.data[a + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.data.swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    /// Matrix-vector product over GF(2); `x` is a packed bit vector of
    /// length `cols`, the result has length `rows`.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.rows.div_ceil(64).max(1)];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row(r).iter().zip(x) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                out[r / 64] |= 1u64 << (r % 64);
            }
        }
        out
    }

    /// Rank over GF(2), computed on a scratch copy by plain forward
    /// elimination (no transform bookkeeping).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            let Some(src) = (pivot_row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let (w, b) = (col / 64, col % 64);
            for r in pivot_row + 1..m.rows {
                if (m.data[r * m.words_per_row + w] >> b) & 1 == 1 {
                    m.xor_row_tail(r, pivot_row, w);
                }
            }
            pivot_row += 1;
            if pivot_row == m.rows {
                break;
            }
        }
        pivot_row
    }
}

/// Row echelon form of a matrix `A`, with the row transform `R` recorded so
/// that `reduced = R * A`. Prepared once, then solves and row-space
/// membership queries are back-substitutions.
#[derive(Debug, Clone)]
pub struct Echelon {
    reduced: BitMatrix,
    transform: BitMatrix,
    pivot_cols: Vec<usize>,
}

impl Echelon {
    pub fn new(a: &BitMatrix) -> Echelon {
        let mut reduced = a.clone();
        let mut transform = BitMatrix::identity(a.rows);
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0;
        for col in 0..a.cols {
            let Some(src) = (pivot_row..a.rows).find(|&r| reduced.get(r, col)) else {
                continue;
            };
            reduced.swap_rows(pivot_row, src);
            transform.swap_rows(pivot_row, src);
            for r in 0..a.rows {
                if r != pivot_row && reduced.get(r, col) {
                    reduced.xor_row_from(r, pivot_row);
                    transform.xor_row_from(r, pivot_row);
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
            if pivot_row == a.rows {
                break;
            }
        }
        Echelon {
            reduced,
            transform,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Solve `A x = b` for packed `b` of length `A.rows`. Returns a packed
    /// solution of length `A.cols`, or `None` when `b` is outside the column
    /// space.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let rows = self.reduced.rows;
        debug_assert_eq!(b.len(), rows.div_ceil(64).max(1));
        let mut x = vec![0u64; self.reduced.cols.div_ceil(64).max(1)];
        for r in 0..rows {
            let mut acc = 0u64;
            for (a, v) in self.transform.row(r).iter().zip(b) {
                acc ^= a & v;
            }
            let y = acc.count_ones() % 2 == 1;
            if r < self.pivot_cols.len() {
                if y {
                    let c = self.pivot_cols[r];
                    x[c / 64] |= 1u64 << (c % 64);
                }
            } else if y {
                return None;
            }
        }
        Some(x)
    }

    /// Is the packed vector (length `A.cols`) a GF(2) combination of the
    /// rows of `A`?
    pub fn in_rowspace(&self, v: &[u64]) -> bool {
        let mut work = v.to_vec();
        debug_assert_eq!(work.len(), self.reduced.words_per_row);
        for (r, &col) in self.pivot_cols.iter().enumerate() {
            if (work[col / 64] >> (col % 64)) & 1 == 1 {
                for (w, a) in work.iter_mut().zip(self.reduced.row(r)) {
                    *w ^= a;
                }
            }
        }
        work.iter().all(|&w| w == 0)
    }
}

/// Solve `M x = b` with `b` given as set row indices; one-shot convenience
/// around [`Echelon`]. The solution is verified by re-multiplication.
pub fn gf2_solve(m: &BitMatrix, b: &[u64]) -> Result<Option<Vec<u64>>, Gf2Error> {
    let expected = m.rows().div_ceil(64).max(1);
    if b.len() != expected {
        return Err(Gf2Error::DimensionMismatch {
            expected: m.rows(),
            got: b.len() * 64,
        });
    }
    let ech = Echelon::new(m);
    let solution = ech.solve(b);
    if let Some(x) = &solution {
        debug_assert_eq!(&m.mul_vec(x), b, "gf2_solve produced a non-solution");
    }
    Ok(solution)
}

pub fn gf2_rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Classification of a residual Pauli operator relative to the code's
/// stabilizer group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipClass {
    /// In the stabilizer group: the residual acts trivially.
    Stabilizer,
    /// Commutes with every stabilizer but is not one: a logical operator.
    Logical,
    /// Anticommutes with some opposite-type stabilizer (nonzero syndrome).
    OutsideNormalizer,
}

/// Prepared membership oracle for one code: echelon forms of both
/// parity-check matrices, reusable across many queries.
pub struct MembershipOracle<'a> {
    code: &'a TetrahedralCode,
    ech_x: Echelon,
    ech_z: Echelon,
}

impl<'a> MembershipOracle<'a> {
    pub fn new(code: &'a TetrahedralCode) -> MembershipOracle<'a> {
        let n = code.n_qubits;
        MembershipOracle {
            code,
            ech_x: Echelon::new(&BitMatrix::from_supports(&code.x_stabilizers, n)),
            ech_z: Echelon::new(&BitMatrix::from_supports(&code.z_stabilizers, n)),
        }
    }

    /// Classify a residual of the given Pauli type (a set of qubits).
    pub fn classify(&self, residual: &Chain, error_type: ErrorType) -> MembershipClass {
        assert_eq!(residual.dim(), DIM_TETRA);
        if !self.code.syndrome_is_zero(residual, error_type) {
            return MembershipClass::OutsideNormalizer;
        }
        let ech = match error_type {
            ErrorType::X => &self.ech_x,
            ErrorType::Z => &self.ech_z,
        };
        if ech.in_rowspace(residual.words()) {
            MembershipClass::Stabilizer
        } else {
            MembershipClass::Logical
        }
    }
}

/// One-shot form of [`MembershipOracle::classify`].
pub fn stabilizer_membership(
    code: &TetrahedralCode,
    residual: &Chain,
    error_type: ErrorType,
) -> MembershipClass {
    MembershipOracle::new(code).classify(residual, error_type)
}

/// Report from the exhaustive minimum-logical-weight search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceReport {
    /// Minimum weight of a zero-syndrome logical found by exhaustion.
    Exact(usize),
    /// No logical of weight <= w_max exists.
    AtLeast(usize),
}

/// Exhaustively search supports of weight <= `w_max` for the minimum-weight
/// logical operator of the given type. Only sensible for small codes; the
/// d=3 code (15 qubits) is the intended domain.
pub fn min_logical_weight(
    code: &TetrahedralCode,
    error_type: ErrorType,
    w_max: usize,
) -> DistanceReport {
    let n = code.n_qubits;
    let oracle = MembershipOracle::new(code);
    for w in 1..=w_max.min(n) {
        let mut found = false;
        for_each_combination(n, w, |support| {
            let residual = Chain::from_ids(DIM_TETRA, n, support.iter().copied());
            if oracle.classify(&residual, error_type) == MembershipClass::Logical {
                found = true;
            }
            !found
        });
        if found {
            return DistanceReport::Exact(w);
        }
    }
    DistanceReport::AtLeast(w_max)
}

/// Visit every w-subset of 0..n in lexicographic order until the visitor
/// returns false.
pub(crate) fn for_each_combination(n: usize, w: usize, mut visit: impl FnMut(&[u32]) -> bool) {
    if w > n {
        return;
    }
    if w == 0 {
        visit(&[]);
        return;
    }
    let mut idx: Vec<u32> = (0..w as u32).collect();
    'outer: loop {
        if !visit(&idx) {
            return;
        }
        let mut i = w;
        while i > 0 {
            i -= 1;
            if idx[i] < (n - w + i) as u32 {
                idx[i] += 1;
                for j in i + 1..w {
                    idx[j] = idx[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rank_and_solve() {
        let m = BitMatrix::identity(3);
        assert_eq!(m.rank(), 3);
        let b = vec![0b101u64];
        let x = gf2_solve(&m, &b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn zero_matrix_rank() {
        let m = BitMatrix::zeros(4, 7);
        assert_eq!(m.rank(), 0);
        // b = 0 accepts x = 0.
        let x = gf2_solve(&m, &vec![0u64]).unwrap().unwrap();
        assert!(x.iter().all(|&w| w == 0));
        // Nonzero b is unsolvable.
        assert!(gf2_solve(&m, &vec![1u64]).unwrap().is_none());
    }

    #[test]
    fn random_systems_verify_by_multiplication() {
        // Deterministic xorshift so the fixture is stable.
        let mut state = 0x243f_6a88_85a3_08d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let (rows, cols) = (20, 30);
            let mut m = BitMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, next() & 1 == 1);
                }
            }
            // Build b from a known solution so it is always solvable.
            let x_true = vec![next(), 0u64];
            let x_true = vec![x_true[0] & ((1 << 30) - 1)];
            let b = m.mul_vec(&x_true);
            let x = gf2_solve(&m, &b).unwrap().expect("constructed to be solvable");
            assert_eq!(m.mul_vec(&x), b);
        }
    }

    #[test]
    fn rowspace_membership() {
        let mut m = BitMatrix::zeros(2, 4);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        let ech = Echelon::new(&m);
        assert!(ech.in_rowspace(&[0b0011])); // row 0
        assert!(ech.in_rowspace(&[0b0101])); // row 0 + row 1
        assert!(ech.in_rowspace(&[0b0000]));
        assert!(!ech.in_rowspace(&[0b1000]));
    }
}

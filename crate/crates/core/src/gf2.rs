//! Exact linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words; all elimination is xor-based.
//! Everything downstream (homology, page towers, the Tate oracle) reduces to
//! the operations here, so the emphasis is on exactness and determinism:
//! kernels and images are always returned as reduced-echelon bases with
//! pivots in increasing index order, and solves return the echelon-canonical
//! solution. Identical inputs yield bit-identical outputs across runs.

use std::fmt;

use thiserror::Error;

/// Errors from the linear algebra layer.
#[derive(Debug, Error)]
pub enum Gf2Error {
    /// An input had incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A subquotient containment contract was violated; the message names the
    /// offending basis vector.
    #[error("subquotient contract violated: {0}")]
    Contract(String),
}

// ---------------------------------------------------------------------------
// Gf2Vector
// ---------------------------------------------------------------------------

/// A vector over the two-element field, bit-packed into 64-bit words.
///
/// Bit `i` lives in `words[i / 64]` at position `i % 64`. Addition is
/// entrywise xor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    words: Vec<u64>,
    len: usize,
}

impl Gf2Vector {
    /// The zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// The standard basis vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i);
        v
    }

    /// A vector with ones exactly at the given indices.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i);
        }
        v
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.len
    }

    /// True if the vector has no entries.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// True if every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Entry `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Sets entry `i` to one.
    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    /// Flips entry `i`.
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range (len {})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Adds `other` into `self` (entrywise xor).
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor_assign: length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// The sum of two vectors.
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Index of the lowest set bit, or `None` for the zero vector.
    pub fn leading_index(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                let i = w * 64 + word.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
        }
        None
    }

    /// The parity of `self · other` (the GF(2) dot product).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot: length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    /// Indices of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let i = w * 64 + bits.trailing_zeros() as usize;
                if i < self.len {
                    out.push(i);
                }
                bits &= bits - 1;
            }
        }
        out
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Concatenates two vectors.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.support() {
            out.set(i);
        }
        for i in other.support() {
            out.set(self.len + i);
        }
        out
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({}; {:?})", self.len, self.support())
    }
}

/// Reduces `vectors` to a reduced-echelon basis of their span, pivots in
/// increasing index order, zero vectors dropped. Deterministic.
pub fn echelonize(vectors: Vec<Gf2Vector>) -> Vec<Gf2Vector> {
    // (pivot, vector), kept sorted by pivot and fully reduced against each
    // other: no row has a bit at another row's pivot.
    let mut rows: Vec<(usize, Gf2Vector)> = Vec::new();
    for mut v in vectors {
        loop {
            let Some(p) = v.leading_index() else { break };
            match rows.binary_search_by_key(&p, |(q, _)| *q) {
                Ok(k) => {
                    let row = rows[k].1.clone();
                    v.xor_assign(&row);
                }
                Err(k) => {
                    // v brings a new pivot. Clear the remaining existing
                    // pivots out of v (they all sit above p), then clear p
                    // out of the existing rows.
                    for (q, row) in rows.iter().skip(k) {
                        if v.get(*q) {
                            let row = row.clone();
                            v.xor_assign(&row);
                        }
                    }
                    for (_, row) in rows.iter_mut() {
                        if row.get(p) {
                            row.xor_assign(&v);
                        }
                    }
                    rows.insert(k, (p, v));
                    break;
                }
            }
        }
    }
    rows.into_iter().map(|(_, v)| v).collect()
}

/// Expresses `v` in an echelon basis, returning the coefficient vector, or
/// `None` if `v` is outside the span.
pub fn express_in_echelon(basis: &[Gf2Vector], v: &Gf2Vector) -> Option<Gf2Vector> {
    let mut coeffs = Gf2Vector::zeros(basis.len());
    let mut rem = v.clone();
    while let Some(p) = rem.leading_index() {
        let k = basis
            .binary_search_by_key(&p, |b| b.leading_index().expect("echelon basis has no zeros"))
            .ok()?;
        coeffs.set(k);
        rem.xor_assign(&basis[k]);
    }
    Some(coeffs)
}

// ---------------------------------------------------------------------------
// Gf2Matrix
// ---------------------------------------------------------------------------

/// A dense matrix over the two-element field, stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    row_bits: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_bits: (0..rows).map(|_| Gf2Vector::zeros(cols)).collect(),
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    /// Builds a matrix from its rows. Every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Gf2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self {
            rows: rows.len(),
            cols,
            row_bits: rows,
        }
    }

    /// Builds a matrix from its columns. Every column must have length `rows`.
    pub fn from_columns(rows: usize, columns: &[Gf2Vector]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in col.support() {
                m.set(i, j);
            }
        }
        m
    }

    /// Builds a matrix from a list of `(row, col)` positions of ones.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Self {
        let mut m = Self::zero(rows, cols);
        for &(i, j) in entries {
            m.set(i, j);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row_bits[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.row_bits[i].set(j);
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.row_bits[i].flip(j);
    }

    /// Row `i` as a vector of length `cols`.
    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.row_bits[i]
    }

    /// Column `j` as a vector of length `rows`.
    pub fn column(&self, j: usize) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i);
            }
        }
        v
    }

    /// All columns, left to right.
    pub fn columns(&self) -> Vec<Gf2Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// True if every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.row_bits.iter().all(Gf2Vector::is_zero)
    }

    /// Matrix-vector product `m · v`.
    pub fn mul_vector(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(
            v.len(),
            self.cols,
            "mul_vector: vector length {} does not match {} columns",
            v.len(),
            self.cols
        );
        let mut out = Gf2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.row_bits[i].dot(v) {
                out.set(i);
            }
        }
        out
    }

    /// Matrix product `self · rhs`.
    pub fn multiply(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, rhs.rows, "multiply: inner dimension mismatch");
        let cols = (0..rhs.cols)
            .map(|j| self.mul_vector(&rhs.column(j)))
            .collect::<Vec<_>>();
        Gf2Matrix::from_columns(self.rows, &cols)
    }

    /// Entrywise sum (xor) of two matrices of the same shape.
    pub fn add(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        let rows = self
            .row_bits
            .iter()
            .zip(&rhs.row_bits)
            .map(|(a, b)| a.xor(b))
            .collect();
        Gf2Matrix::from_rows(self.cols, rows)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_bits[i].support() {
                t.set(j, i);
            }
        }
        t
    }

    /// Stacks `self` on top of `other` (they must agree on column count).
    pub fn vstack(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.cols, "vstack: column count mismatch");
        let mut rows = self.row_bits.clone();
        rows.extend(other.row_bits.iter().cloned());
        Gf2Matrix::from_rows(self.cols, rows)
    }

    /// The dimension of the row space, computed by row elimination.
    pub fn rank(&self) -> usize {
        echelonize(self.row_bits.clone()).len()
    }

    /// The rank computed by the column-reduction algorithm with a pivot map,
    /// processing columns left to right and cancelling equal lowest bits.
    ///
    /// This is an independent code path from [`Gf2Matrix::rank`]; the two
    /// must always agree.
    pub fn column_rank(&self) -> usize {
        let mut pivot_of_row: Vec<Option<Gf2Vector>> = vec![None; self.rows];
        let mut rank = 0;
        for j in 0..self.cols {
            let mut col = self.column(j);
            while let Some(p) = col.leading_index() {
                match &pivot_of_row[p] {
                    Some(existing) => {
                        let existing = existing.clone();
                        col.xor_assign(&existing);
                    }
                    None => {
                        pivot_of_row[p] = Some(col);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    /// A reduced-echelon basis of the kernel `{v : m·v = 0}`, pivots in
    /// increasing index order. Deterministic.
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        let rref = echelonize(self.row_bits.clone());
        let pivots: Vec<usize> = rref
            .iter()
            .map(|r| r.leading_index().expect("echelon rows are nonzero"))
            .collect();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            // x_free = 1, all other free variables 0; pivot variables follow
            // from the reduced rows: x_p = sum of row entries at free columns.
            let mut v = Gf2Vector::zeros(self.cols);
            v.set(free);
            for (row, &p) in rref.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p);
                }
            }
            basis.push(v);
        }
        echelonize(basis)
    }

    /// A reduced-echelon basis of the column space. Deterministic.
    pub fn image_basis(&self) -> Vec<Gf2Vector> {
        echelonize(self.columns())
    }

    /// Solves `m·v = b`, returning the echelon-canonical solution (free
    /// variables set to zero) or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Gf2Vector) -> Result<Option<Gf2Vector>, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "solve: right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        // Augment each row with the corresponding entry of b and reduce.
        let augmented: Vec<Gf2Vector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row_bits[i].concat(&Gf2Vector::zeros(1));
                if b.get(i) {
                    r.set(self.cols);
                }
                r
            })
            .collect();
        let rref = echelonize(augmented);
        let mut solution = Gf2Vector::zeros(self.cols);
        for row in &rref {
            let p = row.leading_index().expect("echelon rows are nonzero");
            if p == self.cols {
                return Ok(None); // row (0 ... 0 | 1): inconsistent
            }
            if row.get(self.cols) {
                solution.set(p);
            }
        }
        Ok(Some(solution))
    }

    /// The matrix induced by `f` on the subquotients `Z_src/B_src →
    /// Z_dst/B_dst`, expressed in the canonical coset representative bases.
    ///
    /// Verifies the containments `B ⊆ Z` on both sides, `f(Z_src) ⊆ Z_dst`,
    /// and the well-definedness condition `f(B_src) ⊆ B_dst`, returning a
    /// contract error naming the offending basis vector when violated.
    pub fn induced_subquotient_map(
        f: &Gf2Matrix,
        z_src: &Subspace,
        b_src: &Subspace,
        z_dst: &Subspace,
        b_dst: &Subspace,
    ) -> Result<Gf2Matrix, Gf2Error> {
        if z_src.ambient() != f.cols || z_dst.ambient() != f.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "induced map: f is {}x{}, source ambient {}, target ambient {}",
                f.rows,
                f.cols,
                z_src.ambient(),
                z_dst.ambient()
            )));
        }
        let check_contained =
            |inner: &Subspace, outer: &Subspace, what: &str| -> Result<(), Gf2Error> {
                for v in inner.basis() {
                    if !outer.contains(v) {
                        return Err(Gf2Error::Contract(format!(
                            "{what}: basis vector with support {:?} not contained",
                            v.support()
                        )));
                    }
                }
                Ok(())
            };
        check_contained(b_src, z_src, "B_src ⊆ Z_src")?;
        check_contained(b_dst, z_dst, "B_dst ⊆ Z_dst")?;
        for v in z_src.basis() {
            if !z_dst.contains(&f.mul_vector(v)) {
                return Err(Gf2Error::Contract(format!(
                    "f(Z_src) ⊆ Z_dst: image of basis vector with support {:?} escapes",
                    v.support()
                )));
            }
        }
        for v in b_src.basis() {
            if !b_dst.contains(&f.mul_vector(v)) {
                return Err(Gf2Error::Contract(format!(
                    "f(B_src) ⊆ B_dst: image of basis vector with support {:?} escapes",
                    v.support()
                )));
            }
        }
        let reps_src = z_src.coset_representatives(b_src);
        let reps_dst = z_dst.coset_representatives(b_dst);
        let cols: Vec<Gf2Vector> = reps_src
            .iter()
            .map(|x| {
                quotient_coordinates(&reps_dst, b_dst, &f.mul_vector(x))
                    .expect("image verified to lie in Z_dst")
            })
            .collect();
        Ok(Gf2Matrix::from_columns(reps_dst.len(), &cols))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Coordinates of `v + B` in the echelon representative basis `reps` of a
/// quotient `Z/B`. Returns `None` when `v` is not in `Z = span(reps) + B`.
pub fn quotient_coordinates(
    reps: &[Gf2Vector],
    b: &Subspace,
    v: &Gf2Vector,
) -> Option<Gf2Vector> {
    express_in_echelon(reps, &b.reduce(v))
}

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

/// A subspace of `F₂^n`, stored as a reduced-echelon basis with pivots in
/// increasing index order. The representation is canonical: two equal
/// subspaces have identical bases.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Gf2Vector>,
}

impl Subspace {
    /// The zero subspace of `F₂^n`.
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    /// All of `F₂^n`.
    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| Gf2Vector::unit(ambient, i)).collect(),
        }
    }

    /// The span of the given vectors.
    pub fn span(ambient: usize, vectors: Vec<Gf2Vector>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "span: vector length mismatch");
        }
        Self {
            ambient,
            basis: echelonize(vectors),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The canonical reduced-echelon basis.
    pub fn basis(&self) -> &[Gf2Vector] {
        &self.basis
    }

    /// True if `v` lies in the subspace.
    pub fn contains(&self, v: &Gf2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// True if `other` is contained in `self`.
    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// The canonical representative of `v` modulo the subspace: eliminates
    /// every basis pivot from `v`. Linear in `v`, with kernel exactly `self`.
    pub fn reduce(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(v.len(), self.ambient, "reduce: vector length mismatch");
        let mut out = v.clone();
        for b in &self.basis {
            let p = b.leading_index().expect("echelon basis has no zeros");
            if out.get(p) {
                out.xor_assign(b);
            }
        }
        out
    }

    /// The sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "sum: ambient mismatch");
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, vecs)
    }

    /// The annihilator `{f : f·v = 0 for all v in self}` under the standard
    /// dot pairing, as a subspace of the same ambient space.
    pub fn annihilator(&self) -> Subspace {
        let m = Gf2Matrix::from_rows(self.ambient, self.basis.clone());
        Subspace {
            ambient: self.ambient,
            basis: m.kernel_basis(),
        }
    }

    /// A matrix whose kernel is exactly this subspace (rows form a basis of
    /// the annihilator). Used to turn membership into linear equations.
    pub fn annihilator_matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_rows(self.ambient, self.annihilator().basis)
    }

    /// Intersection of two subspaces of the same ambient space.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "intersection: ambient mismatch");
        // ann(V ∩ W) = ann(V) + ann(W), and the pairing is perfect.
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// The image `{m·v : v in self}` inside `F₂^rows`.
    pub fn image_under(&self, m: &Gf2Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "image_under: shape mismatch");
        Subspace::span(m.rows(), self.basis.iter().map(|v| m.mul_vector(v)).collect())
    }

    /// The preimage `{x : m·x in self}` inside `F₂^cols`.
    pub fn preimage_under(&self, m: &Gf2Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "preimage_under: shape mismatch");
        let constraints = self.annihilator_matrix().multiply(m);
        Subspace {
            ambient: m.cols(),
            basis: constraints.kernel_basis(),
        }
    }

    /// Canonical coset representatives for the quotient `self / sub`:
    /// the basis of `self` reduced modulo `sub` and re-echelonized. Each
    /// representative lies in `self`, and the list is empty iff `self ⊆ sub`.
    pub fn coset_representatives(&self, sub: &Subspace) -> Vec<Gf2Vector> {
        echelonize(self.basis.iter().map(|v| sub.reduce(v)).collect())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}; ", self.dim(), self.ambient)?;
        let supports: Vec<Vec<usize>> = self.basis.iter().map(Gf2Vector::support).collect();
        write!(f, "{supports:?})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(len: usize, support: &[usize]) -> Gf2Vector {
        Gf2Vector::from_support(len, support)
    }

    #[test]
    fn rank_identity() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
        assert_eq!(Gf2Matrix::identity(3).column_rank(), 3);
    }

    #[test]
    fn rank_all_ones_block() {
        let m = Gf2Matrix::from_entries(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.column_rank(), 1);
    }

    // (1+S) on the figure-eight A=0 sector with basis (a, x, e):
    // a ↦ e, x ↦ e, e ↦ 0. Expected values solved by hand from the 3×3
    // system: kernel {a+x, e}, image {e}, rank 1.
    fn fig8_one_plus_s() -> Gf2Matrix {
        // columns: (1+S)a = e, (1+S)x = e, (1+S)e = 0
        Gf2Matrix::from_entries(3, 3, &[(2, 0), (2, 1)])
    }

    #[test]
    fn rank_fig8_block() {
        assert_eq!(fig8_one_plus_s().rank(), 1);
        assert_eq!(fig8_one_plus_s().column_rank(), 1);
    }

    #[test]
    fn kernel_identity_empty() {
        assert!(Gf2Matrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_zero_full() {
        let basis = Gf2Matrix::zero(2, 2).kernel_basis();
        assert_eq!(basis, vec![vec_of(2, &[0]), vec_of(2, &[1])]);
    }

    #[test]
    fn kernel_fig8_block() {
        // Hand computation: v = (va, vx, ve) with (1+S)v = (va + vx)·e = 0,
        // so va = vx, giving basis {a+x, e}.
        let basis = fig8_one_plus_s().kernel_basis();
        assert_eq!(basis, vec![vec_of(3, &[0, 1]), vec_of(3, &[2])]);
    }

    #[test]
    fn image_identity_full() {
        let basis = Gf2Matrix::identity(2).image_basis();
        assert_eq!(basis, vec![vec_of(2, &[0]), vec_of(2, &[1])]);
    }

    #[test]
    fn image_zero_empty() {
        assert!(Gf2Matrix::zero(3, 2).image_basis().is_empty());
    }

    #[test]
    fn image_fig8_block() {
        assert_eq!(fig8_one_plus_s().image_basis(), vec![vec_of(3, &[2])]);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = vec_of(3, &[0, 2]);
        let x = Gf2Matrix::identity(3).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_zero_matrix_nonzero_rhs() {
        let m = Gf2Matrix::zero(2, 2);
        assert!(m.solve(&vec_of(2, &[0])).unwrap().is_none());
        // Zero rhs is solvable with the canonical zero solution.
        assert_eq!(m.solve(&Gf2Vector::zeros(2)).unwrap().unwrap(), Gf2Vector::zeros(2));
    }

    #[test]
    fn solve_underdetermined_canonical() {
        // [[1,1],[0,0]], b = (1,0). All four candidates checked by hand:
        // solutions are (1,0) and (0,1); the echelon-canonical one is (1,0).
        let m = Gf2Matrix::from_entries(2, 2, &[(0, 0), (0, 1)]);
        let x = m.solve(&vec_of(2, &[0])).unwrap().unwrap();
        assert_eq!(x, vec_of(2, &[0]));
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = Gf2Matrix::identity(2);
        assert!(matches!(
            m.solve(&Gf2Vector::zeros(3)),
            Err(Gf2Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn induced_map_identity_z_equals_b() {
        let z = Subspace::full(2);
        let m = Gf2Matrix::induced_subquotient_map(&Gf2Matrix::identity(2), &z, &z, &z, &z)
            .unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 0));
    }

    #[test]
    fn induced_map_zero_map() {
        let f = Gf2Matrix::zero(3, 3);
        let z = Subspace::full(3);
        let b = Subspace::zero(3);
        let m = Gf2Matrix::induced_subquotient_map(&f, &z, &b, &z, &b).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        assert!(m.is_zero());
    }

    #[test]
    fn induced_map_fig8_full_quotient() {
        let f = fig8_one_plus_s();
        let z = Subspace::full(3);
        let b = Subspace::zero(3);
        let m = Gf2Matrix::induced_subquotient_map(&f, &z, &b, &z, &b).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn induced_map_contract_violation() {
        // f = identity, B_src = span{e0}, B_dst = 0: f(B_src) ⊄ B_dst.
        let f = Gf2Matrix::identity(2);
        let z = Subspace::full(2);
        let b_src = Subspace::span(2, vec![vec_of(2, &[0])]);
        let b_dst = Subspace::zero(2);
        let err = Gf2Matrix::induced_subquotient_map(&f, &z, &b_src, &z, &b_dst).unwrap_err();
        assert!(matches!(err, Gf2Error::Contract(_)));
    }

    #[test]
    fn subspace_intersection_and_sum() {
        // span{e0+e1, e1+e2} ∩ span{e0, e1} = span{e0+e1}
        let v = Subspace::span(3, vec![vec_of(3, &[0, 1]), vec_of(3, &[1, 2])]);
        let w = Subspace::span(3, vec![vec_of(3, &[0]), vec_of(3, &[1])]);
        let i = v.intersection(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&vec_of(3, &[0, 1])));
        assert_eq!(v.sum(&w).dim(), 3);
    }

    #[test]
    fn subspace_preimage() {
        // m: e0 ↦ e0, e1 ↦ e0. Preimage of span{e0} is everything;
        // preimage of 0 is span{e0+e1}.
        let m = Gf2Matrix::from_entries(2, 2, &[(0, 0), (0, 1)]);
        assert_eq!(Subspace::span(2, vec![vec_of(2, &[0])]).preimage_under(&m).dim(), 2);
        let pre_zero = Subspace::zero(2).preimage_under(&m);
        assert_eq!(pre_zero.dim(), 1);
        assert!(pre_zero.contains(&vec_of(2, &[0, 1])));
    }

    #[test]
    fn coset_representatives_canonical() {
        let z = Subspace::full(3);
        let b = Subspace::span(3, vec![vec_of(3, &[2])]);
        let reps = z.coset_representatives(&b);
        assert_eq!(reps, vec![vec_of(3, &[0]), vec_of(3, &[1])]);
        let coords = quotient_coordinates(&reps, &b, &vec_of(3, &[0, 2])).unwrap();
        assert_eq!(coords, vec_of(2, &[0]));
    }

    #[test]
    fn empty_shapes() {
        let m = Gf2Matrix::zero(0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().len(), 3);
        assert!(m.image_basis().is_empty());
        let n = Gf2Matrix::zero(3, 0);
        assert_eq!(n.rank(), 0);
        assert!(n.kernel_basis().is_empty());
        assert!(n.image_basis().is_empty());
        // Solving the 0x3 system always succeeds with the zero solution.
        assert_eq!(m.solve(&Gf2Vector::zeros(0)).unwrap().unwrap(), Gf2Vector::zeros(3));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix(max: usize) -> impl Strategy<Value = Gf2Matrix> {
            (1..=max, 1..=max).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::bool::ANY, r * c).prop_map(move |bits| {
                    let mut m = Gf2Matrix::zero(r, c);
                    for (k, bit) in bits.into_iter().enumerate() {
                        if bit {
                            m.set(k / c, k % c);
                        }
                    }
                    m
                })
            })
        }

        proptest! {
            #[test]
            fn rank_transpose_and_rank_nullity(m in arb_matrix(9)) {
                let rank = m.rank();
                prop_assert_eq!(rank, m.transpose().rank());
                prop_assert_eq!(rank, m.column_rank());
                prop_assert_eq!(rank + m.kernel_basis().len(), m.cols());
                prop_assert_eq!(m.image_basis().len(), rank);
            }

            #[test]
            fn solve_roundtrip(m in arb_matrix(9), seed in proptest::collection::vec(proptest::bool::ANY, 9)) {
                let mut v = Gf2Vector::zeros(m.cols());
                for (i, bit) in seed.iter().take(m.cols()).enumerate() {
                    if *bit {
                        v.set(i);
                    }
                }
                let b = m.mul_vector(&v);
                let x = m.solve(&b).unwrap().expect("m·v = b is consistent by construction");
                prop_assert_eq!(m.mul_vector(&x), b);
            }

            #[test]
            fn kernel_vectors_are_killed(m in arb_matrix(9)) {
                for v in m.kernel_basis() {
                    prop_assert!(m.mul_vector(&v).is_zero());
                }
            }

            #[test]
            fn echelon_basis_independent(m in arb_matrix(9)) {
                let basis = m.image_basis();
                let dim = basis.len();
                prop_assert_eq!(Subspace::span(m.rows(), basis).dim(), dim);
            }
        }
    }
}

//! Dense linear algebra over GF(q): row reduction, rank, nullspace bases,
//! and column permutation/scaling maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{Field, FieldElement};

/// Dense row-major matrix over a single field.
#[derive(Clone)]
pub struct MatrixGF {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<u32>,
    pub field: Field,
}

impl MatrixGF {
    /// All-zero matrix.
    pub fn new(field: Field, rows: usize, cols: usize) -> Self {
        MatrixGF {
            rows,
            cols,
            entries: vec![0; rows * cols],
            field,
        }
    }

    /// Build from explicit rows of canonical element values.
    pub fn from_rows(field: Field, rows: Vec<Vec<u32>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &v in row {
                if v >= field.q {
                    return Err(Error::OutOfRange(format!(
                        "entry {} not a canonical element of a field of order {}",
                        v, field.q
                    )));
                }
                entries.push(v);
            }
        }
        Ok(MatrixGF {
            rows: nrows,
            cols: ncols,
            entries,
            field,
        })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = MatrixGF::new(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(r < self.rows && c < self.cols && v < self.field.q);
        self.entries[r * self.cols + c] = v;
    }

    /// Entry wrapped as a `FieldElement`.
    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        self.field.element(self.get(r, c))
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (head, tail) = self.entries.split_at_mut(b * self.cols);
        head[a * self.cols..(a + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// In-place reduced row echelon form. Pivots are chosen as the first
    /// nonzero entry scanning top-to-bottom within each column, columns
    /// left-to-right, so the result is deterministic. Returns the pivot
    /// column indices (their count is the rank).
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let field = self.field.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for c in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(r) = (pr..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(pr, r);
            let inv = field.inv(self.get(pr, c)).expect("pivot entry is nonzero");
            if inv != 1 {
                for j in c..self.cols {
                    let v = self.get(pr, j);
                    self.set(pr, j, field.mul(v, inv));
                }
            }
            for r2 in 0..self.rows {
                if r2 == pr {
                    continue;
                }
                let f = self.get(r2, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = field.mul(f, self.get(pr, j));
                    let v = field.sub(self.get(r2, j), sub);
                    self.set(r2, j, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    /// Rank via Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_reduce().len()
    }

    /// Basis of the right nullspace, one basis vector per row.
    /// The row count equals `cols - rank`.
    pub fn nullspace(&self) -> MatrixGF {
        let mut work = self.clone();
        let pivots = work.row_reduce();
        let is_pivot = {
            let mut flags = vec![false; self.cols];
            for &c in &pivots {
                flags[c] = true;
            }
            flags
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = MatrixGF::new(self.field.clone(), free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, 1);
            for (pi, &pc) in pivots.iter().enumerate() {
                let v = work.get(pi, fc);
                if v != 0 {
                    basis.set(bi, pc, self.field.neg(v));
                }
            }
        }
        basis
    }

    /// Result column `j` = `scalars[j] ·` (column `perm[j]` of `self`).
    pub fn apply_column_map(&self, map: &ColumnMap) -> Result<MatrixGF> {
        if map.perm.len() != self.cols || map.scalars.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "column map of size {} applied to a matrix with {} columns",
                map.perm.len(),
                self.cols
            )));
        }
        map.validate()?;
        let mut out = MatrixGF::new(self.field.clone(), self.rows, self.cols);
        for j in 0..self.cols {
            let src = map.perm[j];
            let s = map.scalars[j];
            for r in 0..self.rows {
                out.set(r, j, self.field.mul(s, self.get(r, src)));
            }
        }
        Ok(out)
    }

    /// Vertical concatenation: `self` on top of `bottom`.
    pub fn stack(&self, bottom: &MatrixGF) -> Result<MatrixGF> {
        if self.cols != bottom.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {}-column onto {}-column matrix",
                bottom.cols, self.cols
            )));
        }
        if !self.field.same_as(&bottom.field) {
            return Err(Error::MixedFields(self.field.q, bottom.field.q));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&bottom.entries);
        Ok(MatrixGF {
            rows: self.rows + bottom.rows,
            cols: self.cols,
            entries,
            field: self.field.clone(),
        })
    }

    /// Copy of the rectangular block with the given half-open ranges.
    pub fn submatrix(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> MatrixGF {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        let mut out = MatrixGF::new(self.field.clone(), rows.len(), cols.len());
        for (ri, r) in rows.clone().enumerate() {
            for (ci, c) in cols.clone().enumerate() {
                out.set(ri, ci, self.get(r, c));
            }
        }
        out
    }

    /// Matrix–vector product `self · v` (v as a column).
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} multiplied by a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = 0u32;
            for (a, b) in self.row(r).iter().zip(v) {
                if *a != 0 && *b != 0 {
                    acc = f.add(acc, f.mul(*a, *b));
                }
            }
            *o = acc;
        }
        Ok(out)
    }

    /// Plain-text serialization: header `q rows cols`, then one line of
    /// space-separated canonical entries per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.q, self.rows, self.cols);
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse the `to_text` format back into a matrix; the field is rebuilt
    /// from the order in the header.
    pub fn from_text(text: &str) -> Result<MatrixGF> {
        let mut tokens = text.split_whitespace();
        let mut next_num = |name: &str| -> Result<u64> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {name}")))?
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad {name}: {e}")))
        };
        let q = next_num("field order")?;
        let rows = next_num("row count")? as usize;
        let cols = next_num("column count")? as usize;
        let field = crate::galois::make_field_from_order(q)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows * cols {
            let v = tokens
                .next()
                .ok_or_else(|| {
                    Error::Parse(format!("expected {} entries, found {}", rows * cols, i))
                })?
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad entry: {e}")))?;
            if v >= q {
                return Err(Error::Parse(format!(
                    "entry {v} out of range for field of order {q}"
                )));
            }
            entries.push(v as u32);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after matrix entries".into()));
        }
        Ok(MatrixGF {
            rows,
            cols,
            entries,
            field,
        })
    }
}

impl PartialEq for MatrixGF {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.field.same_as(&other.field)
            && self.entries == other.entries
    }
}
impl Eq for MatrixGF {}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MatrixGF {}x{} over GF({})",
            self.rows, self.cols, self.field.q
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// A column permutation combined with nonzero column scalings.
/// Applying it to a parity-check matrix produces an equivalent code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnMap {
    /// `perm[j]` = source column placed at position `j`.
    pub perm: Vec<usize>,
    /// Nonzero scaling applied to each destination column.
    pub scalars: Vec<u32>,
}

impl ColumnMap {
    pub fn new(perm: Vec<usize>, scalars: Vec<u32>) -> Result<Self> {
        let map = ColumnMap { perm, scalars };
        map.validate()?;
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        ColumnMap {
            perm: (0..n).collect(),
            scalars: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.perm.len() != self.scalars.len() {
            return Err(Error::DimensionMismatch(
                "column map permutation and scalar lists differ in length".into(),
            ));
        }
        let n = self.perm.len();
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || seen[p] {
                return Err(Error::NotAPermutation);
            }
            seen[p] = true;
        }
        for (j, &s) in self.scalars.iter().enumerate() {
            if s == 0 {
                return Err(Error::ZeroScalar(j));
            }
        }
        Ok(())
    }

    /// The map that undoes this one:
    /// `apply_column_map(apply_column_map(M, self), self.inverse()) == M`.
    pub fn inverse(&self, field: &Field) -> Result<ColumnMap> {
        self.validate()?;
        let n = self.perm.len();
        let mut inv_perm = vec![0usize; n];
        for (j, &p) in self.perm.iter().enumerate() {
            inv_perm[p] = j;
        }
        let mut scalars = vec![0u32; n];
        for j in 0..n {
            scalars[j] = field.inv(self.scalars[inv_perm[j]])?;
        }
        Ok(ColumnMap {
            perm: inv_perm,
            scalars,
        })
    }

    /// Push a codeword of the mapped code back to the unmapped code: if
    /// `H' = apply_column_map(H, self)` and `H'·wᵀ = 0`, the returned vector
    /// `c` with `c[perm[j]] = scalars[j]·w[j]` satisfies `H·cᵀ = 0`.
    pub fn push_forward(&self, field: &Field, word: &[u32]) -> Result<Vec<u32>> {
        if word.len() != self.perm.len() {
            return Err(Error::DimensionMismatch(
                "word length does not match column map size".into(),
            ));
        }
        let mut out = vec![0u32; word.len()];
        for (j, &w) in word.iter().enumerate() {
            out[self.perm[j]] = field.mul(self.scalars[j], w);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;

    fn lcg(state: &mut u64) -> u64 {
        *state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        *state >> 17
    }

    fn random_matrix(field: &Field, rows: usize, cols: usize, state: &mut u64) -> MatrixGF {
        let mut m = MatrixGF::new(field.clone(), rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, (lcg(state) % field.q as u64) as u32);
            }
        }
        m
    }

    fn random_map(field: &Field, n: usize, state: &mut u64) -> ColumnMap {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (lcg(state) % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        let scalars = (0..n)
            .map(|_| 1 + (lcg(state) % (field.q as u64 - 1)) as u32)
            .collect();
        ColumnMap::new(perm, scalars).unwrap()
    }

    #[test]
    fn rank_of_identity_and_zero() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(MatrixGF::identity(f4.clone(), 4).rank(), 4);
        assert_eq!(MatrixGF::new(f4, 3, 5).rank(), 0);
    }

    #[test]
    fn nullspace_shapes() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let id = MatrixGF::identity(f4.clone(), 5);
        assert_eq!(id.nullspace().rows, 0);
        let zero_row = MatrixGF::new(f2, 1, 3);
        let ns = zero_row.nullspace();
        assert_eq!(ns.rows, 3);
        assert_eq!(ns.rank(), 3);
        // Random matrices: basis rows are solutions and are independent.
        let mut state = 42u64;
        for _ in 0..20 {
            let m = random_matrix(&f4, 3, 6, &mut state);
            let ns = m.nullspace();
            assert_eq!(ns.rows, 6 - m.rank());
            assert_eq!(ns.rank(), ns.rows);
            for r in 0..ns.rows {
                assert!(m.mul_vec(ns.row(r)).unwrap().iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn rank_plus_nullity_on_random_corpus() {
        let mut state = 7u64;
        for (p, m) in [(2, 1), (3, 1), (2, 2), (2, 3)] {
            let f = make_field(p, m).unwrap();
            for _ in 0..25 {
                let rows = 1 + (lcg(&mut state) % 5) as usize;
                let cols = 1 + (lcg(&mut state) % 7) as usize;
                let mat = random_matrix(&f, rows, cols, &mut state);
                assert_eq!(mat.rank() + mat.nullspace().rows, cols);
            }
        }
    }

    #[test]
    fn row_reduce_is_idempotent() {
        let f8 = make_field(2, 3).unwrap();
        let mut state = 99u64;
        for _ in 0..10 {
            let mut m = random_matrix(&f8, 4, 6, &mut state);
            m.row_reduce();
            let once = m.clone();
            m.row_reduce();
            assert_eq!(m, once);
        }
    }

    #[test]
    fn column_map_identity_and_rank_preservation() {
        let f4 = make_field(2, 2).unwrap();
        let mut state = 5u64;
        let m = random_matrix(&f4, 3, 6, &mut state);
        let id = ColumnMap::identity(6);
        assert_eq!(m.apply_column_map(&id).unwrap(), m);
        for _ in 0..10 {
            let map = random_map(&f4, 6, &mut state);
            let mapped = m.apply_column_map(&map).unwrap();
            assert_eq!(mapped.rank(), m.rank());
        }
    }

    #[test]
    fn column_map_inverse_round_trip() {
        let f8 = make_field(2, 3).unwrap();
        let mut state = 11u64;
        let m = random_matrix(&f8, 4, 7, &mut state);
        for _ in 0..10 {
            let map = random_map(&f8, 7, &mut state);
            let inv = map.inverse(&f8).unwrap();
            let round = m
                .apply_column_map(&map)
                .unwrap()
                .apply_column_map(&inv)
                .unwrap();
            assert_eq!(round, m);
            // push_forward sends nullspace words of the mapped matrix into
            // the nullspace of the original.
            let mapped = m.apply_column_map(&map).unwrap();
            let ns = mapped.nullspace();
            for r in 0..ns.rows {
                let c = map.push_forward(&f8, ns.row(r)).unwrap();
                assert!(m.mul_vec(&c).unwrap().iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn column_map_errors() {
        let f4 = make_field(2, 2).unwrap();
        assert!(matches!(
            ColumnMap::new(vec![0, 0, 1], vec![1, 1, 1]),
            Err(Error::NotAPermutation)
        ));
        assert!(matches!(
            ColumnMap::new(vec![0, 1, 3], vec![1, 1, 1]),
            Err(Error::NotAPermutation)
        ));
        assert!(matches!(
            ColumnMap::new(vec![0, 1, 2], vec![1, 0, 1]),
            Err(Error::ZeroScalar(1))
        ));
        let m = MatrixGF::new(f4, 2, 4);
        let small = ColumnMap::identity(3);
        assert!(matches!(
            m.apply_column_map(&small),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn stack_and_submatrix() {
        let f4 = make_field(2, 2).unwrap();
        let a = MatrixGF::from_rows(f4.clone(), vec![vec![1, 2, 3, 0]]).unwrap();
        let b = MatrixGF::from_rows(f4.clone(), vec![vec![0, 1, 0, 1], vec![2, 2, 2, 2]]).unwrap();
        let s = a.stack(&b).unwrap();
        assert_eq!(s.rows, 3);
        assert_eq!(s.row(0), &[1, 2, 3, 0]);
        assert_eq!(s.row(2), &[2, 2, 2, 2]);
        let sub = s.submatrix(1..3, 2..4);
        assert_eq!(sub.row(0), &[0, 1]);
        assert_eq!(sub.row(1), &[2, 2]);
        let short = MatrixGF::new(f4, 1, 3);
        assert!(matches!(s.stack(&short), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn text_round_trip_and_parse_errors() {
        let f8 = make_field(2, 3).unwrap();
        let mut state = 3u64;
        let m = random_matrix(&f8, 3, 5, &mut state);
        let text = m.to_text();
        assert!(text.starts_with("8 3 5\n"));
        let back = MatrixGF::from_text(&text).unwrap();
        assert_eq!(back, m);
        assert!(matches!(MatrixGF::from_text(""), Err(Error::Parse(_))));
        assert!(matches!(
            MatrixGF::from_text("8 1 2\n9 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            MatrixGF::from_text("8 1 2\n1\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            MatrixGF::from_text("8 1 2\n1 2 3\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            MatrixGF::from_text("12 1 2\n1 2\n"),
            Err(Error::NotPrimePower(12))
        ));
    }

    #[test]
    fn from_rows_validation() {
        let f4 = make_field(2, 2).unwrap();
        assert!(matches!(
            MatrixGF::from_rows(f4.clone(), vec![vec![1, 2], vec![3]]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            MatrixGF::from_rows(f4, vec![vec![1, 4]]),
            Err(Error::OutOfRange(_))
        ));
    }
}

//! Assembly of expander and LDPC parity-check matrices: block-diagonal
//! layers, graph-driven two-layer construction, seeded ensemble sampling,
//! and the truncated subcode used by the finite-length upper bound.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constituent::{rs_parity_check, ConstituentCode};
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::matrix::{ColumnMap, MatrixGF};
use crate::Rational;

/// Parameters of the general two-layer graph construction with per-vertex
/// constituent codes.
#[derive(Clone, Debug)]
pub struct ExpanderParams {
    pub field: Field,
    /// Degree of (code length at) each left vertex.
    pub delta1: usize,
    /// Degree of each right vertex.
    pub delta2: usize,
    /// Left vertex count.
    pub b1: usize,
    /// Right vertex count.
    pub b2: usize,
    /// One constituent per left vertex, each of length `delta1`.
    pub constituents1: Vec<ConstituentCode>,
    /// One constituent per right vertex, each of length `delta2`.
    pub constituents2: Vec<ConstituentCode>,
}

impl ExpanderParams {
    pub fn new(
        field: Field,
        delta1: usize,
        delta2: usize,
        b1: usize,
        b2: usize,
        constituents1: Vec<ConstituentCode>,
        constituents2: Vec<ConstituentCode>,
    ) -> Result<Self> {
        if b1 == 0 || b2 == 0 || b1 * delta1 != b2 * delta2 {
            return Err(Error::InvalidParameters(format!(
                "edge counts disagree: {b1}*{delta1} != {b2}*{delta2}"
            )));
        }
        if constituents1.len() != b1 || constituents2.len() != b2 {
            return Err(Error::InvalidParameters(
                "need one constituent code per vertex".into(),
            ));
        }
        for c in constituents1.iter() {
            if c.delta0 != delta1 {
                return Err(Error::InvalidParameters(
                    "left constituent length must equal the left degree".into(),
                ));
            }
        }
        for c in constituents2.iter() {
            if c.delta0 != delta2 {
                return Err(Error::InvalidParameters(
                    "right constituent length must equal the right degree".into(),
                ));
            }
        }
        Ok(ExpanderParams {
            field,
            delta1,
            delta2,
            b1,
            b2,
            constituents1,
            constituents2,
        })
    }

    /// Code length = number of edges.
    pub fn n(&self) -> usize {
        self.b1 * self.delta1
    }
}

/// `b` diagonal copies of `h0`, zeros elsewhere.
pub fn block_diagonal(h0: &MatrixGF, b: usize) -> MatrixGF {
    assert!(b >= 1, "need at least one block");
    let mut out = MatrixGF::new(h0.field.clone(), h0.rows * b, h0.cols * b);
    for blk in 0..b {
        for r in 0..h0.rows {
            for c in 0..h0.cols {
                let v = h0.get(r, c);
                if v != 0 {
                    out.set(blk * h0.rows + r, blk * h0.cols + c, v);
                }
            }
        }
    }
    out
}

/// Diagonal stacking of possibly different parity-check matrices, one per
/// vertex, in vertex order.
fn block_diagonal_mixed(codes: &[ConstituentCode], field: &Field) -> MatrixGF {
    let total_rows: usize = codes.iter().map(|c| c.h0.rows).sum();
    let total_cols: usize = codes.iter().map(|c| c.delta0).sum();
    let mut out = MatrixGF::new(field.clone(), total_rows, total_cols);
    let (mut r0, mut c0) = (0usize, 0usize);
    for code in codes {
        for r in 0..code.h0.rows {
            for c in 0..code.delta0 {
                let v = code.h0.get(r, c);
                if v != 0 {
                    out.set(r0 + r, c0 + c, v);
                }
            }
        }
        r0 += code.h0.rows;
        c0 += code.delta0;
    }
    out
}

/// Build the stacked two-layer parity-check matrix from explicit edge
/// orders. `edge_order_i[e]` is the slot (vertex-local position, counted
/// block by block) that edge `e` occupies in layer `i`; each order must be a
/// bijection on `0..n`.
pub fn assemble_expander(
    params: &ExpanderParams,
    edge_order1: &[usize],
    edge_order2: &[usize],
) -> Result<MatrixGF> {
    let n = params.n();
    if edge_order1.len() != n || edge_order2.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "edge orders must cover all {n} edges"
        )));
    }
    let layer1_base = block_diagonal_mixed(&params.constituents1, &params.field);
    let layer2_base = block_diagonal_mixed(&params.constituents2, &params.field);
    let map1 = ColumnMap::new(edge_order1.to_vec(), vec![1; n])?;
    let map2 = ColumnMap::new(edge_order2.to_vec(), vec![1; n])?;
    let layer1 = layer1_base.apply_column_map(&map1)?;
    let layer2 = layer2_base.apply_column_map(&map2)?;
    layer1.stack(&layer2)
}

/// Which random family a sample is drawn from. The expurgated family has no
/// constructive sampler; it enters only through its analytic spectrum
/// estimate in the bounds code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// Two layers of permuted block-diagonal Reed–Solomon checks.
    E1,
    /// The `ell`-layer generalization.
    E3,
}

/// Fully determined sampling recipe: every (spec, seed) pair names one code.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub field: Field,
    pub delta0: usize,
    pub k0: usize,
    /// Blocks per layer; code length is `delta0 * b`.
    pub b: usize,
    /// Layer count: fixed at 2 for E1.
    pub ell: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(
        kind: EnsembleKind,
        field: Field,
        delta0: usize,
        k0: usize,
        b: usize,
        ell: usize,
        seed: u64,
    ) -> Result<Self> {
        if kind == EnsembleKind::E1 && ell != 2 {
            return Err(Error::InvalidParameters(format!(
                "two-layer ensemble sampled with ell = {ell}"
            )));
        }
        if ell < 2 {
            return Err(Error::InvalidParameters("need at least two layers".into()));
        }
        if b < 1 {
            return Err(Error::InvalidParameters("need at least one block".into()));
        }
        if k0 < 1 || k0 >= delta0 || delta0 > field.q as usize {
            return Err(Error::InvalidParameters(format!(
                "no ({delta0}, {k0}) Reed-Solomon constituent over GF({})",
                field.q
            )));
        }
        Ok(EnsembleSpec {
            kind,
            field,
            delta0,
            k0,
            b,
            ell,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.delta0 * self.b
    }

    /// Constituent rate.
    pub fn r0(&self) -> Rational {
        Rational::new(self.k0 as i64, self.delta0 as i64)
    }

    /// `1 - ell*(1 - r0)`; the true rate of every sample is at least this
    /// (it may be negative, in which case it is a vacuous floor).
    pub fn design_rate(&self) -> Rational {
        Rational::from_integer(1)
            - Rational::from_integer(self.ell as i64) * (Rational::from_integer(1) - self.r0())
    }
}

/// One seeded draw: the stacked parity-check matrix plus the column maps
/// that produced each layer from the block-diagonal base.
#[derive(Clone, Debug)]
pub struct CodeSample {
    pub h: MatrixGF,
    pub maps: Vec<ColumnMap>,
    pub design_rate: Rational,
    pub spec: EnsembleSpec,
}

impl CodeSample {
    /// Rows contributed by each layer.
    pub fn rows_per_layer(&self) -> usize {
        self.spec.b * (self.spec.delta0 - self.spec.k0)
    }

    /// The `i`-th layer as its own matrix.
    pub fn layer(&self, i: usize) -> MatrixGF {
        let rpl = self.rows_per_layer();
        self.h.submatrix(i * rpl..(i + 1) * rpl, 0..self.h.cols)
    }
}

/// Draw one code from the ensemble: per layer, an independent uniform column
/// permutation (Fisher–Yates) and independent uniform nonzero scalars, all
/// from a stream cipher generator seeded by `spec.seed`.
pub fn sample(spec: &EnsembleSpec) -> Result<CodeSample> {
    let n = spec.n();
    let field = &spec.field;
    let constituent = rs_parity_check(field, spec.delta0, spec.k0)?;
    let base = block_diagonal(&constituent.h0, spec.b);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut maps = Vec::with_capacity(spec.ell);
    let mut h: Option<MatrixGF> = None;
    for _ in 0..spec.ell {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let scalars: Vec<u32> = (0..n).map(|_| rng.gen_range(1..field.q)).collect();
        let map = ColumnMap::new(perm, scalars)?;
        let layer = base.apply_column_map(&map)?;
        h = Some(match h {
            None => layer,
            Some(top) => top.stack(&layer)?,
        });
        maps.push(map);
    }
    Ok(CodeSample {
        h: h.expect("at least two layers"),
        maps,
        design_rate: spec.design_rate(),
        spec: spec.clone(),
    })
}

/// Parity-check matrix of the length-`b' * delta0` subcode obtained by
/// keeping only the last `b'` blocks of the first layer, after normalizing
/// the sample so that its first layer is exactly block-diagonal: the kept
/// rows of layer 1 are stacked with the last `b' * delta0` columns of the
/// re-permuted layer 2. Nullspace vectors, zero-padded on the left and
/// pushed back through the normalization, are codewords of the sample
/// (see [`embed_subcode_word`]).
pub fn truncated_subcode(sample: &CodeSample, b_prime: usize) -> Result<MatrixGF> {
    if sample.spec.ell != 2 || sample.maps.len() != 2 {
        return Err(Error::InvalidParameters(
            "subcode truncation is defined for two-layer samples".into(),
        ));
    }
    if b_prime < 1 || b_prime > sample.spec.b {
        return Err(Error::OutOfRange(format!(
            "block count {} outside [1, {}]",
            b_prime, sample.spec.b
        )));
    }
    let spec = &sample.spec;
    let n = spec.n();
    let check_rows = spec.delta0 - spec.k0;
    let inv0 = sample.maps[0].inverse(&spec.field)?;
    // Normalizing by the inverse of map 0 turns layer 1 back into the
    // block-diagonal base and re-permutes layer 2 consistently.
    let layer1 = sample.layer(0).apply_column_map(&inv0)?;
    let layer2 = sample.layer(1).apply_column_map(&inv0)?;
    let kept_cols = (spec.b - b_prime) * spec.delta0..n;
    let top = layer1.submatrix(
        (spec.b - b_prime) * check_rows..spec.b * check_rows,
        kept_cols.clone(),
    );
    let bottom = layer2.submatrix(0..layer2.rows, kept_cols);
    top.stack(&bottom)
}

/// Lift a codeword of the truncated subcode back into the sampled code:
/// left-pad with zeros to full length, then undo the normalization used by
/// [`truncated_subcode`]. The result satisfies `H c = 0` for the sample's
/// own parity-check matrix.
pub fn embed_subcode_word(sample: &CodeSample, b_prime: usize, word: &[u32]) -> Result<Vec<u32>> {
    let spec = &sample.spec;
    if b_prime < 1 || b_prime > spec.b {
        return Err(Error::OutOfRange(format!(
            "block count {} outside [1, {}]",
            b_prime, spec.b
        )));
    }
    let short = b_prime * spec.delta0;
    if word.len() != short {
        return Err(Error::DimensionMismatch(format!(
            "subcode word length {} != {}",
            word.len(),
            short
        )));
    }
    let n = spec.n();
    let mut padded = vec![0u32; n];
    padded[n - short..].copy_from_slice(word);
    let inv0 = sample.maps[0].inverse(&spec.field)?;
    inv0.push_forward(&spec.field, &padded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;

    fn e1_spec(field: &Field, delta0: usize, k0: usize, b: usize, seed: u64) -> EnsembleSpec {
        EnsembleSpec::new(EnsembleKind::E1, field.clone(), delta0, k0, b, 2, seed).unwrap()
    }

    #[test]
    fn block_diagonal_shapes_and_rank() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        let one = block_diagonal(&code.h0, 1);
        assert_eq!(one, code.h0);
        let two = block_diagonal(&code.h0, 2);
        assert_eq!((two.rows, two.cols), (4, 8));
        for r in 0..2 {
            for c in 4..8 {
                assert_eq!(two.get(r, c), 0, "off-diagonal block must be zero");
            }
        }
        for r in 2..4 {
            for c in 0..4 {
                assert_eq!(two.get(r, c), 0);
            }
        }
        assert_eq!(two.submatrix(0..2, 0..4), code.h0);
        assert_eq!(two.submatrix(2..4, 4..8), code.h0);
        let three = block_diagonal(&code.h0, 3);
        assert_eq!(three.rank(), 3 * code.h0.rank());
    }

    #[test]
    fn assemble_with_identity_orders_is_stacked_diagonals() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        let params = ExpanderParams::new(
            f4.clone(),
            4,
            4,
            2,
            2,
            vec![code.clone(), code.clone()],
            vec![code.clone(), code.clone()],
        )
        .unwrap();
        let ident: Vec<usize> = (0..8).collect();
        let h = assemble_expander(&params, &ident, &ident).unwrap();
        let diag = block_diagonal(&code.h0, 2);
        assert_eq!(h, diag.stack(&diag).unwrap());
        assert_eq!(h.rows, 8);
        let k = h.cols - h.rank();
        assert_eq!(k, 8 - diag.rank());
    }

    #[test]
    fn assemble_column_support_and_rate_floor() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        let params = ExpanderParams::new(
            f4.clone(),
            4,
            4,
            2,
            2,
            vec![code.clone(), code.clone()],
            vec![code.clone(), code.clone()],
        )
        .unwrap();
        // A fixed scrambled pair of edge orders.
        let order1 = vec![3usize, 6, 1, 4, 7, 0, 5, 2];
        let order2 = vec![5usize, 2, 7, 0, 3, 6, 1, 4];
        let h = assemble_expander(&params, &order1, &order2).unwrap();
        // Every column touches exactly one vertex (row block) per layer.
        for layer in 0..2 {
            for c in 0..8 {
                let mut vertices = std::collections::HashSet::new();
                for r in 0..4 {
                    if h.get(layer * 4 + r, c) != 0 {
                        vertices.insert(r / 2);
                    }
                }
                assert_eq!(vertices.len(), 1, "layer {layer} column {c}");
            }
        }
        // rate >= R1 + R2 - 1 = 0 here.
        let rate = Rational::new((h.cols - h.rank()) as i64, h.cols as i64);
        assert!(rate >= Rational::from_integer(0));
    }

    #[test]
    fn assemble_validation_errors() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        assert!(ExpanderParams::new(
            f4.clone(),
            4,
            4,
            2,
            3,
            vec![code.clone(); 2],
            vec![code.clone(); 3]
        )
        .is_err());
        let params = ExpanderParams::new(
            f4.clone(),
            4,
            4,
            2,
            2,
            vec![code.clone(); 2],
            vec![code.clone(); 2],
        )
        .unwrap();
        let short: Vec<usize> = (0..7).collect();
        let ident: Vec<usize> = (0..8).collect();
        assert!(assemble_expander(&params, &short, &ident).is_err());
        let repeated = vec![0usize; 8];
        assert!(matches!(
            assemble_expander(&params, &repeated, &ident),
            Err(Error::NotAPermutation)
        ));
    }

    #[test]
    fn sample_is_deterministic_and_shaped() {
        let f4 = make_field(2, 2).unwrap();
        let spec = e1_spec(&f4, 4, 2, 2, 7);
        let s1 = sample(&spec).unwrap();
        let s2 = sample(&spec).unwrap();
        assert_eq!(s1.h, s2.h);
        assert_eq!(s1.maps, s2.maps);
        assert_eq!((s1.h.rows, s1.h.cols), (8, 8));
        assert_eq!(s1.design_rate, Rational::from_integer(0));
        let other = sample(&e1_spec(&f4, 4, 2, 2, 8)).unwrap();
        assert_ne!(s1.h, other.h, "different seeds give different draws");
    }

    #[test]
    fn sample_layers_match_recorded_maps() {
        let f8 = make_field(2, 3).unwrap();
        let spec = EnsembleSpec::new(EnsembleKind::E3, f8.clone(), 8, 5, 2, 3, 41).unwrap();
        let s = sample(&spec).unwrap();
        assert_eq!(s.h.rows, 3 * 2 * 3);
        let constituent = rs_parity_check(&f8, 8, 5).unwrap();
        let base = block_diagonal(&constituent.h0, 2);
        for i in 0..3 {
            assert_eq!(s.layer(i), base.apply_column_map(&s.maps[i]).unwrap());
        }
        // Per layer, column supports partition into b blocks of size delta0.
        for i in 0..3 {
            let layer = s.layer(i);
            let mut block_cols = vec![0usize; 2];
            for c in 0..layer.cols {
                let mut blocks = std::collections::HashSet::new();
                for r in 0..layer.rows {
                    if layer.get(r, c) != 0 {
                        blocks.insert(r / 3);
                    }
                }
                assert_eq!(blocks.len(), 1);
                block_cols[*blocks.iter().next().unwrap()] += 1;
            }
            assert_eq!(block_cols, vec![8, 8]);
        }
    }

    #[test]
    fn sample_rate_floor_over_seeds() {
        let f4 = make_field(2, 2).unwrap();
        for seed in 0..20 {
            let s = sample(&e1_spec(&f4, 4, 3, 3, seed)).unwrap();
            let rate = Rational::new((s.h.cols - s.h.rank()) as i64, s.h.cols as i64);
            assert!(
                rate >= s.design_rate,
                "seed {seed}: {rate} < {}",
                s.design_rate
            );
        }
    }

    #[test]
    fn spec_validation() {
        let f4 = make_field(2, 2).unwrap();
        assert!(EnsembleSpec::new(EnsembleKind::E1, f4.clone(), 4, 2, 2, 3, 0).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::E3, f4.clone(), 4, 2, 2, 1, 0).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::E1, f4.clone(), 4, 0, 2, 2, 0).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::E1, f4.clone(), 5, 2, 2, 2, 0).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::E1, f4.clone(), 4, 2, 0, 2, 0).is_err());
    }

    #[test]
    fn subcode_full_width_keeps_the_code() {
        let f4 = make_field(2, 2).unwrap();
        let s = sample(&e1_spec(&f4, 4, 2, 2, 3)).unwrap();
        let sub = truncated_subcode(&s, 2).unwrap();
        assert_eq!((sub.rows, sub.cols), (8, 8));
        assert_eq!(sub.cols - sub.rank(), s.h.cols - s.h.rank());
        let ns = sub.nullspace();
        for r in 0..ns.rows {
            let c = embed_subcode_word(&s, 2, ns.row(r)).unwrap();
            assert!(s.h.mul_vec(&c).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn subcode_membership_across_seeds_and_widths() {
        let f4 = make_field(2, 2).unwrap();
        for seed in [1u64, 9, 23] {
            let s = sample(&e1_spec(&f4, 4, 3, 3, seed)).unwrap();
            for b_prime in 1..=3usize {
                let sub = truncated_subcode(&s, b_prime).unwrap();
                assert_eq!(sub.cols, 4 * b_prime);
                assert_eq!(sub.rows, b_prime + 3);
                let ns = sub.nullspace();
                for r in 0..ns.rows {
                    let c = embed_subcode_word(&s, b_prime, ns.row(r)).unwrap();
                    assert!(
                        s.h.mul_vec(&c).unwrap().iter().all(|&x| x == 0),
                        "seed {seed} b'={b_prime}"
                    );
                }
            }
        }
    }

    #[test]
    fn subcode_dimension_floor() {
        // dim >= b'*k0 - (R1 - R)*n with R the sample's true rate, i.e.
        // dim >= b'*k0 - (b*k0 - (n - rank H)).
        let f8 = make_field(2, 3).unwrap();
        for seed in [2u64, 5, 11, 17] {
            let s = sample(&e1_spec(&f8, 8, 5, 3, seed)).unwrap();
            let k = (s.h.cols - s.h.rank()) as i64;
            for b_prime in 1..=3i64 {
                let sub = truncated_subcode(&s, b_prime as usize).unwrap();
                let dim = (sub.cols - sub.rank()) as i64;
                let floor = b_prime * 5 - (3 * 5 - k);
                assert!(dim >= floor, "seed {seed} b'={b_prime}: {dim} < {floor}");
            }
        }
    }

    #[test]
    fn subcode_range_errors() {
        let f4 = make_field(2, 2).unwrap();
        let s = sample(&e1_spec(&f4, 4, 2, 2, 0)).unwrap();
        assert!(matches!(
            truncated_subcode(&s, 0),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            truncated_subcode(&s, 3),
            Err(Error::OutOfRange(_))
        ));
        assert!(embed_subcode_word(&s, 1, &[0, 0, 0]).is_err());
    }
}

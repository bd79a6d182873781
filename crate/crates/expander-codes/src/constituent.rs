//! Constituent codes placed at graph vertices: Reed–Solomon parity-check
//! construction, exact weight enumerators for desk-scale codes, and the
//! log-domain generating-function estimates used by the lower bounds.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::galois::Field;
use crate::matrix::MatrixGF;
use crate::Rational;

/// How a constituent code was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeFamily {
    ReedSolomon,
    /// Arbitrary user-supplied parity-check matrix.
    Explicit,
}

/// A short linear code with a full-rank parity-check matrix.
#[derive(Clone, Debug)]
pub struct ConstituentCode {
    /// Code length (vertex degree in the graph construction).
    pub delta0: usize,
    /// Code dimension.
    pub k0: usize,
    /// Full-rank parity-check matrix of shape `(delta0 - k0) x delta0`.
    pub h0: MatrixGF,
    pub family: CodeFamily,
}

impl ConstituentCode {
    /// Wrap an explicit parity-check matrix; the dimension is inferred as
    /// `cols - rows`. The matrix must have full row rank.
    pub fn explicit(h0: MatrixGF) -> Result<Self> {
        if h0.rows == 0 || h0.rows >= h0.cols {
            return Err(Error::InvalidParameters(format!(
                "parity-check shape {}x{} leaves no proper code",
                h0.rows, h0.cols
            )));
        }
        if h0.rank() != h0.rows {
            return Err(Error::InvalidParameters(
                "parity-check matrix must have full row rank".into(),
            ));
        }
        Ok(ConstituentCode {
            delta0: h0.cols,
            k0: h0.cols - h0.rows,
            h0,
            family: CodeFamily::Explicit,
        })
    }

    pub fn rate(&self) -> Rational {
        Rational::new(self.k0 as i64, self.delta0 as i64)
    }
}

/// Parity-check matrix of a `(delta0, k0)` Reed–Solomon code over the given
/// field, as the Vandermonde matrix `H[r][j] = a_j^r` on `delta0` distinct
/// evaluation points. Points are the canonical nonzero elements in increasing
/// order; when `delta0 = q` the zero element is appended as the last point.
/// The resulting code is MDS with minimum distance `delta0 - k0 + 1`.
pub fn rs_parity_check(field: &Field, delta0: usize, k0: usize) -> Result<ConstituentCode> {
    let q = field.q as usize;
    if delta0 > q {
        return Err(Error::OutOfRange(format!(
            "code length {} exceeds field order {}",
            delta0, q
        )));
    }
    if k0 < 1 || k0 >= delta0 {
        return Err(Error::OutOfRange(format!(
            "dimension {} outside [1, {}) for length {}",
            k0, delta0, delta0
        )));
    }
    let points: Vec<u32> = if delta0 == q {
        (1..field.q).chain(std::iter::once(0)).collect()
    } else {
        (1..=delta0 as u32).collect()
    };
    let rows = delta0 - k0;
    let mut h0 = MatrixGF::new(field.clone(), rows, delta0);
    for (j, &alpha) in points.iter().enumerate() {
        for r in 0..rows {
            h0.set(r, j, field.pow(alpha, r as i64)?);
        }
    }
    debug_assert_eq!(
        h0.rank(),
        rows,
        "Vandermonde rows on distinct points are independent"
    );
    Ok(ConstituentCode {
        delta0,
        k0,
        h0,
        family: CodeFamily::ReedSolomon,
    })
}

/// Which analytic coefficient family an estimate uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateKind {
    ReedSolomon,
    Expurgated,
}

/// Weight distribution of a code: exact integer counts from brute force, or
/// an analytic upper-bound estimate stored as natural-log coefficients
/// (`f64::NEG_INFINITY` marks a zero coefficient).
#[derive(Clone, Debug, PartialEq)]
pub enum WeightEnumerator {
    Exact(Vec<BigUint>),
    Analytic {
        log_coeffs: Vec<f64>,
        kind: EstimateKind,
    },
}

impl WeightEnumerator {
    /// Number of weights covered, i.e. code length + 1.
    pub fn len(&self) -> usize {
        match self {
            WeightEnumerator::Exact(a) => a.len(),
            WeightEnumerator::Analytic { log_coeffs, .. } => log_coeffs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn counts(&self) -> Option<&[BigUint]> {
        match self {
            WeightEnumerator::Exact(a) => Some(a),
            WeightEnumerator::Analytic { .. } => None,
        }
    }

    pub fn log_coeffs(&self) -> Option<&[f64]> {
        match self {
            WeightEnumerator::Exact(_) => None,
            WeightEnumerator::Analytic { log_coeffs, .. } => Some(log_coeffs),
        }
    }

    /// Smallest positive weight with a nonzero exact count; `None` when the
    /// code contains only the zero word (or for analytic estimates).
    pub fn min_distance(&self) -> Option<usize> {
        let counts = self.counts()?;
        (1..counts.len()).find(|&w| counts[w] != BigUint::from(0u32))
    }

    /// Total number of codewords (exact kind only).
    pub fn total(&self) -> Option<BigUint> {
        Some(self.counts()?.iter().sum())
    }
}

/// Brute-force weight counts of the code with the given nullspace basis,
/// over message indices `[start, start + count)` in odometer order.
/// Shared by the exact enumerators here and in the analysis code.
pub(crate) fn weight_counts_chunk(basis: &MatrixGF, start: u64, count: u64) -> Vec<u64> {
    let n = basis.cols;
    let k = basis.rows;
    let q = basis.field.q as u64;
    let field = basis.field.clone();
    let mut counts = vec![0u64; n + 1];
    if count == 0 {
        return counts;
    }

    // Small fields get a flat addition table; the hot loop is all adds.
    let add_table: Option<Vec<u32>> = if field.q <= 512 {
        let qs = field.q as usize;
        let mut t = vec![0u32; qs * qs];
        for a in 0..field.q {
            for b in 0..field.q {
                t[(a as usize) * qs + b as usize] = field.add(a, b);
            }
        }
        Some(t)
    } else {
        None
    };
    let qs = field.q as usize;
    let add = |a: u32, b: u32| -> u32 {
        match &add_table {
            Some(t) => t[(a as usize) * qs + b as usize],
            None => field.add(a, b),
        }
    };

    // Moving digit j from value d to d+1 (wrapping at q) shifts the word by
    // (e_{d+1} - e_d) * row_j, where e_i is the element with index i. The
    // transition scalar is never zero, so the update support is the row's.
    let trans_scalar = |d: u32| -> u32 {
        if (d as u64) + 1 == q {
            field.neg((q - 1) as u32)
        } else {
            field.sub(d + 1, d)
        }
    };
    let supports: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            basis
                .row(j)
                .iter()
                .enumerate()
                .filter(|(_, &g)| g != 0)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    // Precompute every transition row when that stays small; otherwise fall
    // back to one scalar multiplication per entry.
    let table_entries: u64 = supports.iter().map(|s| s.len() as u64 * q).sum();
    let steps: Option<Vec<Vec<Vec<u32>>>> = if field.q <= 512 && table_entries <= 1 << 22 {
        Some(
            (0..k)
                .map(|j| {
                    (0..field.q)
                        .map(|d| {
                            let s = trans_scalar(d);
                            supports[j]
                                .iter()
                                .map(|&idx| field.mul(s, basis.row(j)[idx]))
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };

    // Seed the odometer at `start`: digits base q, least significant first,
    // with digit value d meaning coefficient e_d on that row.
    let mut digits = vec![0u32; k];
    {
        let mut s = start;
        for d in digits.iter_mut() {
            *d = (s % q) as u32;
            s /= q;
        }
        debug_assert_eq!(s, 0, "start index exceeds message space");
    }
    let mut word = vec![0u32; n];
    for (j, &digit) in digits.iter().enumerate() {
        if digit != 0 {
            for (w, &g) in word.iter_mut().zip(basis.row(j)) {
                if g != 0 {
                    *w = field.add(*w, field.mul(digit, g));
                }
            }
        }
    }
    let mut weight = word.iter().filter(|&&x| x != 0).count();

    let mut remaining = count;
    loop {
        counts[weight] += 1;
        remaining -= 1;
        if remaining == 0 {
            break;
        }
        let mut j = 0;
        loop {
            match &steps {
                Some(t) => {
                    let deltas = &t[j][digits[j] as usize];
                    for (&idx, &dv) in supports[j].iter().zip(deltas) {
                        let old = word[idx];
                        let new = add(old, dv);
                        word[idx] = new;
                        weight += (new != 0) as usize;
                        weight -= (old != 0) as usize;
                    }
                }
                None => {
                    let s = trans_scalar(digits[j]);
                    let row = basis.row(j);
                    for &idx in &supports[j] {
                        let old = word[idx];
                        let new = field.add(old, field.mul(s, row[idx]));
                        word[idx] = new;
                        weight += (new != 0) as usize;
                        weight -= (old != 0) as usize;
                    }
                }
            }
            digits[j] += 1;
            if digits[j] as u64 == q {
                digits[j] = 0;
                j += 1;
                debug_assert!(j < k, "odometer overflow past the message space");
            } else {
                break;
            }
        }
    }
    counts
}

/// Guard that `q^k` stays within the brute-force budget `2^cap_log2`,
/// returning `q^k` on success.
pub(crate) fn enumeration_size(q: u64, k: usize, cap_log2: u32, what: &str) -> Result<u64> {
    let cap = 1u64 << cap_log2;
    let mut size = 1u64;
    for _ in 0..k {
        size = size
            .checked_mul(q)
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::TooLarge(format!("{what}: q^k exceeds 2^{cap_log2}")))?;
    }
    Ok(size)
}

/// Exact weight enumerator by enumerating all `q^k0` codewords through a
/// nullspace basis of the parity-check matrix. Requires `q^k0 <= 2^24`.
pub fn exact_weight_enumerator(code: &ConstituentCode) -> Result<WeightEnumerator> {
    let basis = code.h0.nullspace();
    debug_assert_eq!(basis.rows, code.k0);
    let size = enumeration_size(code.h0.field.q as u64, basis.rows, 24, "weight enumerator")?;
    let counts = weight_counts_chunk(&basis, 0, size);
    Ok(WeightEnumerator::Exact(
        counts.into_iter().map(BigUint::from).collect(),
    ))
}

/// Natural logs of factorials `0..=n`, by cumulative summation.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut lf = vec![0.0; n + 1];
    for i in 2..=n {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    lf
}

#[inline]
pub(crate) fn ln_binomial(lf: &[f64], n: usize, k: usize) -> f64 {
    lf[n] - lf[k] - lf[n - k]
}

fn integer_dimension(delta0: usize, r0: Rational) -> Result<i64> {
    let k = r0 * Rational::from_integer(delta0 as i64);
    if !k.is_integer() {
        return Err(Error::InvalidParameters(format!(
            "rate {} over length {} gives non-integer dimension",
            r0, delta0
        )));
    }
    Ok(k.to_integer())
}

/// Analytic weight-coefficient estimate for a `(delta0, r0*delta0)`
/// Reed–Solomon constituent: `c_0 = 1` and
/// `c_i = C(delta0, i) * (q-1)^(i-d0+1)` for `i >= d0 = delta0 - k0 + 1`,
/// stored as natural logs. Requires an integer dimension and
/// `delta0 <= q + 1`.
pub fn g0_estimate_rs(q: u64, delta0: usize, r0: Rational) -> Result<WeightEnumerator> {
    if delta0 as u64 > q + 1 {
        return Err(Error::OutOfRange(format!(
            "length {} exceeds q + 1 = {}",
            delta0,
            q + 1
        )));
    }
    let k0 = integer_dimension(delta0, r0)?;
    if k0 < 1 || k0 >= delta0 as i64 {
        return Err(Error::InvalidParameters(format!(
            "dimension {} outside [1, {})",
            k0, delta0
        )));
    }
    let d0 = delta0 - k0 as usize + 1;
    let lf = ln_factorials(delta0);
    let ln_qm1 = ((q - 1) as f64).ln();
    let mut log_coeffs = vec![f64::NEG_INFINITY; delta0 + 1];
    log_coeffs[0] = 0.0;
    for (i, lc) in log_coeffs.iter_mut().enumerate().skip(d0) {
        *lc = ln_binomial(&lf, delta0, i) + ((i - d0 + 1) as f64) * ln_qm1;
    }
    Ok(WeightEnumerator::Analytic {
        log_coeffs,
        kind: EstimateKind::ReedSolomon,
    })
}

/// Analytic weight-coefficient estimate for the expurgated random family:
/// `c_0 = 1` and `c_i = 2*delta0 * C(delta0, i) * (q-1)^i * q^(-delta0*(1-r0))`
/// for `i >= 1`, stored as natural logs. The dimension `r0*delta0` need not
/// be an integer here; the exponent is evaluated exactly as a rational.
pub fn g0_estimate_expurgated(q: u64, delta0: usize, r0: Rational) -> Result<WeightEnumerator> {
    if r0 <= Rational::from_integer(0) || r0 >= Rational::from_integer(1) {
        return Err(Error::InvalidParameters(format!(
            "rate {} outside (0, 1)",
            r0
        )));
    }
    let exponent = (Rational::from_integer(1) - r0) * Rational::from_integer(delta0 as i64);
    let shift = -(*exponent.numer() as f64) / (*exponent.denom() as f64) * (q as f64).ln();
    let lf = ln_factorials(delta0);
    let ln_qm1 = ((q - 1) as f64).ln();
    let ln_2d = (2.0 * delta0 as f64).ln();
    let mut log_coeffs = vec![f64::NEG_INFINITY; delta0 + 1];
    log_coeffs[0] = 0.0;
    for (i, lc) in log_coeffs.iter_mut().enumerate().skip(1) {
        *lc = ln_2d + ln_binomial(&lf, delta0, i) + (i as f64) * ln_qm1 + shift;
    }
    Ok(WeightEnumerator::Analytic {
        log_coeffs,
        kind: EstimateKind::Expurgated,
    })
}

/// `log( sum_i e^{log_coeffs[i] + i*t} )` over the finite coefficients.
/// Shared log-sum-exp core for generating-function evaluation.
pub(crate) fn lse_eval(log_coeffs: &[f64], t: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (i, &lc) in log_coeffs.iter().enumerate() {
        if lc > f64::NEG_INFINITY {
            let v = lc + (i as f64) * t;
            if v > best {
                best = v;
            }
        }
    }
    debug_assert!(best.is_finite(), "c_0 = 1 keeps the sum positive");
    // Terms 36 nats below the peak are under 2.4e-16 relative and are skipped.
    let mut sum = 0.0;
    for (i, &lc) in log_coeffs.iter().enumerate() {
        if lc > f64::NEG_INFINITY {
            let v = lc + (i as f64) * t;
            if v >= best - 36.0 {
                sum += (v - best).exp();
            }
        }
    }
    best + sum.ln()
}

/// `log( sum_i c_i * e^{i t} )` for an analytic enumerator, via log-sum-exp.
/// Monotone increasing and convex in `t`; tends to `log c_0 = 0` as
/// `t -> -inf`.
pub fn eval_log_g0(g: &WeightEnumerator, t: f64) -> Result<f64> {
    let Some(log_coeffs) = g.log_coeffs() else {
        return Err(Error::InvalidParameters(
            "generating-function evaluation needs an analytic enumerator".into(),
        ));
    };
    Ok(lse_eval(log_coeffs, t))
}

//! Exact desk-scale code analytics: dimension, minimum distance, full
//! weight enumerators, and the ensemble-average spectrum formula.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::constituent::{enumeration_size, weight_counts_chunk, WeightEnumerator};
use crate::error::{Error, Result};
use crate::exec;
use crate::matrix::MatrixGF;
use crate::Rational;

/// Everything brute force can say about one concrete code.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeReport {
    pub n: usize,
    pub k: usize,
    /// `None` when the code holds only the zero word.
    pub d_min: Option<usize>,
    pub enumerator: WeightEnumerator,
    pub rate: Rational,
}

impl CodeReport {
    /// Flat key-value block used by the command-line output.
    pub fn to_text(&self) -> String {
        let spectrum: Vec<String> = self
            .enumerator
            .counts()
            .expect("reports always carry exact counts")
            .iter()
            .map(|c| c.to_string())
            .collect();
        format!(
            "n = {}\nk = {}\nd_min = {}\nrate = {}\nspectrum = {}\n",
            self.n,
            self.k,
            self.d_min
                .map_or_else(|| "inf".to_string(), |d| d.to_string()),
            self.rate,
            spectrum.join(" ")
        )
    }
}

/// Exhaustively analyze the code with parity-check matrix `h`: exact
/// dimension, minimum distance, and weight enumerator, by enumerating all
/// `q^k` codewords through a nullspace basis. Requires `q^k <= 2^24`.
/// Enumeration is chunked over message-index ranges and merged, so the
/// result does not depend on the thread count.
pub fn analyze(h: &MatrixGF) -> Result<CodeReport> {
    let basis = h.nullspace();
    let n = h.cols;
    let k = basis.rows;
    let size = enumeration_size(h.field.q as u64, k, 24, "code analysis")?;
    let chunks = if size < 1 << 12 { 1u64 } else { 64 };
    let per = size / chunks;
    let extra = size % chunks;
    let starts: Vec<(u64, u64)> = (0..chunks)
        .map(|i| {
            let start = i * per + i.min(extra);
            let len = per + if i < extra { 1 } else { 0 };
            (start, len)
        })
        .collect();
    let partials = exec::map(starts, |(start, len)| {
        weight_counts_chunk(&basis, start, len)
    });
    let mut counts = vec![0u64; n + 1];
    for part in partials {
        for (acc, c) in counts.iter_mut().zip(part) {
            *acc += c;
        }
    }
    let d_min = (1..=n).find(|&w| counts[w] > 0);
    Ok(CodeReport {
        n,
        k,
        d_min,
        enumerator: WeightEnumerator::Exact(counts.into_iter().map(BigUint::from).collect()),
        rate: Rational::new(k as i64, n as i64),
    })
}

/// Weight enumerator of `b` disjoint copies of a code (the block-diagonal
/// layer): the `b`-fold self-convolution of the constituent enumerator.
pub fn layer_enumerator(constituent: &WeightEnumerator, b: usize) -> Result<WeightEnumerator> {
    let Some(a0) = constituent.counts() else {
        return Err(Error::InvalidParameters(
            "layer convolution needs an exact enumerator".into(),
        ));
    };
    if b < 1 {
        return Err(Error::InvalidParameters("need at least one block".into()));
    }
    let mut acc: Vec<BigUint> = a0.to_vec();
    for _ in 1..b {
        let mut next = vec![BigUint::zero(); acc.len() + a0.len() - 1];
        for (i, ai) in acc.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, aj) in a0.iter().enumerate() {
                if !aj.is_zero() {
                    next[i + j] += ai * aj;
                }
            }
        }
        acc = next;
    }
    Ok(WeightEnumerator::Exact(acc))
}

/// Ensemble-average number of weight-`w` codewords over `ell` independently
/// permuted and rescaled block-diagonal layers with per-layer enumerator
/// `a1`: `A1(w)^ell / ((q-1)^w * C(n, w))^(ell-1)`, evaluated exactly as a
/// big rational and returned as a float.
pub fn ensemble_average_spectrum(
    a1: &WeightEnumerator,
    n: usize,
    w: usize,
    q: u64,
    ell: usize,
) -> Result<f64> {
    let Some(counts) = a1.counts() else {
        return Err(Error::InvalidParameters(
            "average spectrum needs an exact layer enumerator".into(),
        ));
    };
    if w > n {
        return Err(Error::OutOfRange(format!("weight {w} exceeds length {n}")));
    }
    if ell < 2 {
        return Err(Error::InvalidParameters("need at least two layers".into()));
    }
    let a1w = counts.get(w).cloned().unwrap_or_else(BigUint::zero);
    if a1w.is_zero() {
        return Ok(0.0);
    }
    let numer = a1w.pow(ell as u32);
    let denom = (BigUint::from(q - 1).pow(w as u32)
        * num_integer::binomial(BigUint::from(n), BigUint::from(w)))
    .pow((ell - 1) as u32);
    let ratio = BigRational::new(BigInt::from(numer), BigInt::from(denom));
    ratio
        .to_f64()
        .ok_or_else(|| Error::TooLarge("average spectrum exceeds float range".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constituent::{exact_weight_enumerator, rs_parity_check};
    use crate::ensemble::{block_diagonal, sample, EnsembleKind, EnsembleSpec};
    use crate::galois::make_field;
    use crate::matrix::ColumnMap;

    #[test]
    fn analyze_rs_code() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        let report = analyze(&code.h0).unwrap();
        assert_eq!(report.n, 4);
        assert_eq!(report.k, 2);
        assert_eq!(report.d_min, Some(3));
        assert_eq!(report.rate, Rational::new(1, 2));
        let counts: Vec<u64> = report
            .enumerator
            .counts()
            .unwrap()
            .iter()
            .map(|c| c.to_u64().unwrap())
            .collect();
        assert_eq!(counts, vec![1, 0, 0, 12, 3]);
        assert_eq!(report.enumerator, exact_weight_enumerator(&code).unwrap());
    }

    #[test]
    fn analyze_trivial_code() {
        let f4 = make_field(2, 2).unwrap();
        let h = MatrixGF::identity(f4, 3);
        let report = analyze(&h).unwrap();
        assert_eq!(report.k, 0);
        assert_eq!(report.d_min, None);
        let counts = report.enumerator.counts().unwrap();
        assert_eq!(counts[0], BigUint::from(1u32));
        assert!(counts[1..].iter().all(|c| c.is_zero()));
        assert!(report.to_text().contains("d_min = inf"));
    }

    #[test]
    fn analyze_size_guard() {
        let f64f = make_field(2, 6).unwrap();
        let h = MatrixGF::new(f64f, 1, 6); // zero matrix: k = 6, 64^6 = 2^36
        assert!(matches!(analyze(&h), Err(Error::TooLarge(_))));
    }

    #[test]
    fn analyze_invariant_under_column_maps() {
        let f8 = make_field(2, 3).unwrap();
        let code = rs_parity_check(&f8, 6, 3).unwrap();
        let base = analyze(&code.h0).unwrap();
        let map = ColumnMap::new(vec![4, 2, 0, 5, 1, 3], vec![3, 1, 7, 2, 5, 4]).unwrap();
        let mapped = analyze(&code.h0.apply_column_map(&map).unwrap()).unwrap();
        assert_eq!(mapped.enumerator, base.enumerator);
        assert_eq!(mapped.k, base.k);
        assert_eq!(mapped.d_min, base.d_min);
    }

    #[test]
    fn analyze_report_text_shape() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        let text = analyze(&code.h0).unwrap().to_text();
        assert_eq!(
            text,
            "n = 4\nk = 2\nd_min = 3\nrate = 1/2\nspectrum = 1 0 0 12 3\n"
        );
    }

    #[test]
    fn layer_enumerator_by_hand() {
        let a = WeightEnumerator::Exact(vec![1u32.into(), 0u32.into(), 3u32.into()]);
        assert_eq!(layer_enumerator(&a, 1).unwrap(), a);
        let twice = layer_enumerator(&a, 2).unwrap();
        let counts: Vec<u64> = twice
            .counts()
            .unwrap()
            .iter()
            .map(|c| c.to_u64().unwrap())
            .collect();
        assert_eq!(counts, vec![1, 0, 6, 0, 9]);
    }

    #[test]
    fn layer_enumerator_matches_block_diagonal_brute_force() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        let single = exact_weight_enumerator(&code).unwrap();
        let by_convolution = layer_enumerator(&single, 2).unwrap();
        let by_enumeration = analyze(&block_diagonal(&code.h0, 2)).unwrap().enumerator;
        assert_eq!(by_convolution, by_enumeration);
    }

    #[test]
    fn average_spectrum_values() {
        let f4 = make_field(2, 2).unwrap();
        let code = rs_parity_check(&f4, 4, 2).unwrap();
        let a1 = layer_enumerator(&exact_weight_enumerator(&code).unwrap(), 2).unwrap();
        // A1(3) = 24; 24^2 / (3^3 * C(8,3)) = 576/1512.
        let v = ensemble_average_spectrum(&a1, 8, 3, 4, 2).unwrap();
        assert!((v - 576.0 / 1512.0).abs() < 1e-14);
        assert_eq!(ensemble_average_spectrum(&a1, 8, 0, 4, 2).unwrap(), 1.0);
        assert_eq!(ensemble_average_spectrum(&a1, 8, 1, 4, 2).unwrap(), 0.0);
        // Three layers: A1(w)^3 / (...)^2.
        let v3 = ensemble_average_spectrum(&a1, 8, 3, 4, 3).unwrap();
        assert!((v3 - 24.0f64.powi(3) / (27.0f64 * 56.0).powi(2)).abs() < 1e-14);
        assert!(ensemble_average_spectrum(&a1, 8, 9, 4, 2).is_err());
    }

    #[test]
    fn singleton_bound_on_samples() {
        let f8 = make_field(2, 3).unwrap();
        for seed in 0..8 {
            let spec = EnsembleSpec::new(EnsembleKind::E1, f8.clone(), 4, 2, 2, 2, seed).unwrap();
            let s = sample(&spec).unwrap();
            let report = analyze(&s.h).unwrap();
            if let Some(d) = report.d_min {
                assert!(d >= 1 && d <= report.n - report.k + 1, "seed {seed}");
            } else {
                assert_eq!(report.k, 0);
            }
        }
    }

    #[test]
    fn monte_carlo_mean_tracks_average_spectrum() {
        // 60 draws at q = 8: empirical mean per weight within 3 standard
        // errors of the exact ensemble average, plus an absolute slack of
        // 6*(q-1)/samples covering weights whose draws all coincide: counts
        // arrive in scalar orbits of size q-1, so a low-mean weight can
        // plausibly see zero hits across every draw, leaving the standard
        // error at zero without making the estimator deterministic.
        let f8 = make_field(2, 3).unwrap();
        let code = rs_parity_check(&f8, 4, 2).unwrap();
        let a1 = layer_enumerator(&exact_weight_enumerator(&code).unwrap(), 2).unwrap();
        let n = 8usize;
        let samples = 60usize;
        let mut sums = vec![0.0f64; n + 1];
        let mut sq_sums = vec![0.0f64; n + 1];
        for seed in 0..samples as u64 {
            let spec = EnsembleSpec::new(EnsembleKind::E1, f8.clone(), 4, 2, 2, 2, seed).unwrap();
            let s = sample(&spec).unwrap();
            let counts = analyze(&s.h).unwrap();
            for (w, c) in counts.enumerator.counts().unwrap().iter().enumerate() {
                let x = c.to_f64().unwrap();
                sums[w] += x;
                sq_sums[w] += x * x;
            }
        }
        for w in 1..=n {
            let mean = sums[w] / samples as f64;
            let var = (sq_sums[w] / samples as f64 - mean * mean).max(0.0);
            let se = (var / samples as f64).sqrt();
            let expected = ensemble_average_spectrum(&a1, n, w, 8, 2).unwrap();
            let slack = 3.0 * se + 6.0 * 7.0 / samples as f64;
            assert!(
                (mean - expected).abs() <= slack,
                "w={w}: |{mean} - {expected}| > {slack}"
            );
        }
    }
}

//! Verification suites: each draws seeded samples, checks an analytic claim
//! against exhaustive computation, prints one line per check, and reports
//! whether every check passed.

use anyhow::Result;
use expander_codes::{
    analyze, embed_subcode_word, ensemble_average_spectrum, exact_weight_enumerator,
    layer_enumerator, make_field_from_order, rs_parity_check, sample, truncated_subcode,
    upper_finite_with_rate, EnsembleKind, EnsembleSpec, Error, Rational,
};
use num_traits::ToPrimitive;

struct Tally {
    suite: &'static str,
    passed: usize,
    failed: usize,
}

impl Tally {
    fn new(suite: &'static str) -> Self {
        Tally {
            suite,
            passed: 0,
            failed: 0,
        }
    }

    fn check(&mut self, ok: bool, label: &str) {
        if ok {
            self.passed += 1;
            println!("ok {}: {label}", self.suite);
        } else {
            self.failed += 1;
            println!("FAIL {}: {label}", self.suite);
        }
    }

    fn finish(self) -> bool {
        println!(
            "suite {}: {} checks, {} failures",
            self.suite,
            self.passed + self.failed,
            self.failed
        );
        self.failed == 0
    }
}

/// Monte Carlo agreement between sampled weight spectra and the exact
/// ensemble average, weight by weight, within three standard errors plus an
/// absolute slack of 6*(q-1)/samples (counts arrive in scalar orbits of
/// size q-1, so low-mean weights can see zero hits across every draw).
pub fn spectrum(samples: usize) -> Result<bool> {
    let mut t = Tally::new("spectrum");
    let q = 4u64;
    let (delta0, k0, b, ell) = (4usize, 2usize, 2usize, 2usize);
    let field = make_field_from_order(q)?;
    let n = b * delta0;
    let constituent = rs_parity_check(&field, delta0, k0)?;
    let a1 = layer_enumerator(&exact_weight_enumerator(&constituent)?, b)?;

    let mut sums = vec![0.0f64; n + 1];
    let mut sq_sums = vec![0.0f64; n + 1];
    for seed in 0..samples as u64 {
        let spec = EnsembleSpec::new(EnsembleKind::E1, field.clone(), delta0, k0, b, ell, seed)?;
        let code = sample(&spec)?;
        let report = analyze(&code.h)?;
        for (w, c) in report
            .enumerator
            .counts()
            .expect("exhaustive spectrum")
            .iter()
            .enumerate()
        {
            let x = c.to_f64().expect("small counts");
            sums[w] += x;
            sq_sums[w] += x * x;
        }
    }
    for w in 1..=n {
        let mean = sums[w] / samples as f64;
        let var = (sq_sums[w] / samples as f64 - mean * mean).max(0.0);
        let se = (var / samples as f64).sqrt();
        let expected = ensemble_average_spectrum(&a1, n, w, q, ell)?;
        let band = 3.0 * se + 6.0 * (q - 1) as f64 / samples as f64;
        t.check(
            (mean - expected).abs() <= band,
            &format!("W={w} mean {mean:.4} vs average {expected:.4} (band {band:.4})"),
        );
    }
    Ok(t.finish())
}

/// Every sampled code keeps rate at least `1 - ell*(1 - k0/delta0)`.
pub fn rate(seeds: u64) -> Result<bool> {
    let mut t = Tally::new("rate");
    let configs: &[(u64, usize, usize, usize, usize)] = &[
        (4, 4, 3, 2, 2),
        (4, 4, 3, 3, 2),
        (8, 8, 5, 2, 2),
        (8, 4, 3, 2, 3),
        (9, 3, 2, 3, 2),
    ];
    for &(q, delta0, k0, b, ell) in configs {
        let field = make_field_from_order(q)?;
        let kind = if ell == 2 {
            EnsembleKind::E1
        } else {
            EnsembleKind::E3
        };
        let mut violations = 0usize;
        for seed in 0..seeds {
            let spec = EnsembleSpec::new(kind, field.clone(), delta0, k0, b, ell, seed)?;
            let code = sample(&spec)?;
            let report = analyze(&code.h)?;
            let true_rate = Rational::new(report.k as i64, report.n as i64);
            if true_rate < code.design_rate {
                violations += 1;
            }
        }
        t.check(
            violations == 0,
            &format!(
                "q={q} delta0={delta0} k0={k0} b={b} ell={ell}: {violations} rate violations in {seeds} draws"
            ),
        );
    }
    Ok(t.finish())
}

/// Exhaustive minimum distances of sampled codes respect both the Singleton
/// bound and the finite-length cap evaluated at the measured rate.
pub fn upper(seeds: u64) -> Result<bool> {
    let mut t = Tally::new("upper");
    let configs: &[(u64, usize, usize, usize)] = &[(4, 4, 3, 2), (8, 4, 3, 2), (8, 8, 5, 2)];
    for &(q, delta0, k0, b) in configs {
        let field = make_field_from_order(q)?;
        let r0 = Rational::new(k0 as i64, delta0 as i64);
        let mut checked = 0usize;
        let mut violations = 0usize;
        for seed in 0..seeds {
            let spec = EnsembleSpec::new(EnsembleKind::E1, field.clone(), delta0, k0, b, 2, seed)?;
            let code = sample(&spec)?;
            let report = analyze(&code.h)?;
            let Some(d_min) = report.d_min else { continue };
            if d_min > report.n - report.k + 1 {
                violations += 1;
            }
            match upper_finite_with_rate(q, r0, r0, delta0, b, report.rate) {
                Ok(bound) => {
                    checked += 1;
                    if (d_min as f64) > bound.absolute.expect("absolute cap") + 1e-9 {
                        violations += 1;
                    }
                }
                Err(Error::EmptyRange(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        t.check(
            violations == 0,
            &format!("q={q} delta0={delta0} k0={k0} b={b}: {checked} caps checked, {violations} violations"),
        );
    }
    Ok(t.finish())
}

/// Truncated subcodes embed into the full code (every nullspace basis word,
/// zero-padded and pushed through the first layer's map, satisfies the full
/// parity checks) and their dimension respects the guaranteed floor.
pub fn subcode(seeds: u64) -> Result<bool> {
    let mut t = Tally::new("subcode");
    let (q, delta0, k0, b) = (8u64, 4usize, 3usize, 3usize);
    let field = make_field_from_order(q)?;
    for seed in 0..seeds {
        let spec = EnsembleSpec::new(EnsembleKind::E1, field.clone(), delta0, k0, b, 2, seed)?;
        let code = sample(&spec)?;
        let n = spec.n();
        let full_k = n - code.h.clone().rank();
        for b_prime in 1..=b {
            let sub = truncated_subcode(&code, b_prime)?;
            let basis = sub.nullspace();
            let mut members = 0usize;
            for i in 0..basis.rows {
                let word = basis.row(i).to_vec();
                let embedded = embed_subcode_word(&code, b_prime, &word)?;
                let syndrome = code.h.mul_vec(&embedded)?;
                if syndrome.iter().all(|&x| x == 0) {
                    members += 1;
                }
            }
            let sub_k = basis.rows;
            let floor = (b_prime * k0) as i64 - (b * k0) as i64 + full_k as i64;
            let ok = members == sub_k && (sub_k as i64) >= floor;
            t.check(
                ok,
                &format!(
                    "seed={seed} b'={b_prime}: {members}/{sub_k} basis words embed, dim {sub_k} >= floor {floor}"
                ),
            );
        }
    }
    Ok(t.finish())
}

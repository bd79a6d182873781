//! The numerical core: q-ary entropy, the random-coding existence baseline,
//! the Plotkin-style expression, finite-length and asymptotic upper bounds
//! on relative minimum distance, and the three ensemble lower bounds with
//! their inner maximization, root finding, and parameter optimization.

use crate::constituent::{g0_estimate_expurgated, g0_estimate_rs, lse_eval, WeightEnumerator};
use crate::error::{Error, Result};
use crate::exec;
use crate::Rational;

/// Root-scan step in delta (below the 4-decimal table resolution).
const SCAN_STEP: f64 = 1e-4;
/// Root-scan origin: the functionals vanish identically at delta = 0, so a
/// "positive root" means the first crossing after this point.
const SCAN_START: f64 = 1e-6;
/// Bisection tolerance on roots.
const ROOT_TOL: f64 = 1e-9;
/// Width tolerance of the inner maximization over t = ln s.
const INNER_TOL: f64 = 1e-10;
/// Near-tie window for argmax disambiguation.
const TIE_TOL: f64 = 1e-9;

pub(crate) fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_rate_open(rate: Rational) -> Result<()> {
    if rate <= Rational::from_integer(0) || rate >= Rational::from_integer(1) {
        return Err(Error::OutOfRange(format!("rate {rate} outside (0, 1)")));
    }
    Ok(())
}

#[inline]
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// q-ary entropy `-d*log_q(d) - (1-d)*log_q(1-d)`, with the value 0 at both
/// endpoints by continuity.
pub fn entropy_q(delta: f64, q: u64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&delta));
    -(xlnx(delta) + xlnx(1.0 - delta)) / (q as f64).ln()
}

/// Which bound a result reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Vg,
    UpperFinite,
    UpperAsymptotic,
    LowerE1,
    LowerE2,
    LowerE3,
}

/// Where a bound was attained, when the notion applies.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Achiever {
    pub delta0: Option<usize>,
    pub ell: Option<usize>,
    /// Optimal generating-function argument of the inner maximization.
    pub s_star: Option<f64>,
    /// Minimizing block count of the finite-length bound.
    pub b_prime: Option<u64>,
    /// Subcode dimension floor used by the Plotkin term.
    pub k_tilde: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundResult {
    pub kind: BoundKind,
    /// Relative minimum distance.
    pub delta: f64,
    pub achiever: Achiever,
    /// Absolute distance in symbols, for finite-length bounds.
    pub absolute: Option<f64>,
}

/// Largest relative distance guaranteed to exist at the given rate: the
/// unique root of `h_q(delta) + delta*log_q(q-1) = 1 - R`, by bisection on
/// `[0, (q-1)/q]` to absolute tolerance 1e-9.
pub fn vg_bound(q: u64, rate: Rational) -> Result<BoundResult> {
    check_rate_open(rate)?;
    let r = ratio_f64(rate);
    let ln_ratio = ((q - 1) as f64).ln() / (q as f64).ln();
    let f = |d: f64| entropy_q(d, q) + d * ln_ratio - (1.0 - r);
    let mut lo = 0.0;
    let mut hi = (q - 1) as f64 / q as f64;
    debug_assert!(f(hi) > 0.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BoundResult {
        kind: BoundKind::Vg,
        delta: 0.5 * (lo + hi),
        achiever: Achiever::default(),
        absolute: None,
    })
}

/// `q^(k-1)*(q-1) / (q^k - 1) * n'`: the Plotkin-style distance cap for a
/// q-ary code of dimension at least `k_tilde` and length `n'`. Exact for
/// `k_tilde = 1` (where it equals `n'`); strictly decreasing in `k_tilde`
/// with limit `n'(q-1)/q`.
pub fn plotkin_term(k_tilde: u64, q: u64, n_prime: f64) -> Result<f64> {
    if k_tilde < 1 {
        return Err(Error::OutOfRange(
            "distance cap needs dimension >= 1".into(),
        ));
    }
    if k_tilde == 1 {
        return Ok(n_prime);
    }
    let ratio = if (k_tilde as f64) * (q as f64).log2() <= 53.0 {
        let qk = (q as u128).pow(k_tilde as u32) as f64;
        qk / (q as f64) * ((q - 1) as f64) / (qk - 1.0)
    } else {
        let inv = (-((k_tilde as f64) * (q as f64).ln())).exp();
        ((q - 1) as f64) / (q as f64) / (1.0 - inv)
    };
    Ok(ratio * n_prime)
}

/// Finite-length upper bound with the design rate `R = R1 + R2 - 1`, which
/// keeps every subcode dimension floor integral.
pub fn upper_finite(
    q: u64,
    r1: Rational,
    r2: Rational,
    delta1: usize,
    b1: usize,
) -> Result<BoundResult> {
    let design = r1 + r2 - Rational::from_integer(1);
    upper_finite_impl(q, r1, r2, delta1, b1, design)
}

/// Finite-length upper bound with an externally measured true rate (e.g.
/// from exhaustive analysis of a sampled code). The dimension floor
/// `b'*R1*Delta1 - (R1 - R)*n` is then floored to an integer, which only
/// loosens the cap and keeps it valid.
pub fn upper_finite_with_rate(
    q: u64,
    r1: Rational,
    r2: Rational,
    delta1: usize,
    b1: usize,
    rate: Rational,
) -> Result<BoundResult> {
    upper_finite_impl(q, r1, r2, delta1, b1, rate)
}

fn upper_finite_impl(
    q: u64,
    mut r1: Rational,
    mut r2: Rational,
    delta1: usize,
    b1: usize,
    rate: Rational,
) -> Result<BoundResult> {
    // The derivation assumes the first layer has the smaller rate. Swapping
    // the rate labels alone is enough because the callers here use the same
    // degree and block count on both sides.
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    check_rate_open(r1)?;
    check_rate_open(r2)?;
    if b1 < 1 || delta1 < 2 {
        return Err(Error::InvalidParameters("degenerate layer geometry".into()));
    }
    if rate > r1 {
        return Err(Error::InvalidParameters(format!(
            "rate {rate} exceeds the lower layer rate {r1}"
        )));
    }
    let k1 = r1 * Rational::from_integer(delta1 as i64);
    if !k1.is_integer() || k1 < Rational::from_integer(1) {
        return Err(Error::InvalidParameters(format!(
            "layer rate {r1} over degree {delta1} gives no integer dimension"
        )));
    }
    let n = (b1 * delta1) as i64;
    // (R1 - R) * n, kept exact.
    let gap = (r1 - rate) * Rational::from_integer(n);
    // Smallest b' making the dimension floor >= 1.
    let b_min = ((gap + Rational::from_integer(1)) / k1)
        .ceil()
        .to_integer()
        .max(1);
    if b_min > b1 as i64 {
        return Err(Error::EmptyRange(format!(
            "no admissible block count: need at least {b_min} of {b1} blocks"
        )));
    }
    let mut best: Option<(f64, i64, u64)> = None;
    for bp in b_min..=b1 as i64 {
        let k_tilde = (k1 * Rational::from_integer(bp) - gap).floor().to_integer();
        debug_assert!(k_tilde >= 1);
        let d = plotkin_term(k_tilde as u64, q, (bp as usize * delta1) as f64)?;
        if best.is_none_or(|(bd, _, _)| d < bd) {
            best = Some((d, bp, k_tilde as u64));
        }
    }
    let (d, bp, kt) = best.expect("range verified non-empty");
    Ok(BoundResult {
        kind: BoundKind::UpperFinite,
        delta: d / n as f64,
        achiever: Achiever {
            b_prime: Some(bp as u64),
            k_tilde: Some(kt),
            ..Achiever::default()
        },
        absolute: Some(d),
    })
}

/// Asymptotic upper bound `(q-1)/q * (1-R)/(1+R)`, evaluated as a reduced
/// exact fraction and converted with a single division.
pub fn upper_asymptotic(q: u64, rate: Rational) -> Result<BoundResult> {
    if rate < Rational::from_integer(0) || rate > Rational::from_integer(1) {
        return Err(Error::OutOfRange(format!("rate {rate} outside [0, 1]")));
    }
    let value = Rational::new((q - 1) as i64, q as i64) * (Rational::from_integer(1) - rate)
        / (Rational::from_integer(1) + rate);
    Ok(BoundResult {
        kind: BoundKind::UpperAsymptotic,
        delta: ratio_f64(value),
        achiever: Achiever::default(),
        absolute: None,
    })
}

/// Three `(t, f(t))` samples with the middle value at least as large as both
/// end values, certifying that a concave `f` peaks inside `[a, b]`.
type Bracket = ((f64, f64), (f64, f64), (f64, f64));

/// Expand around `t0` until a three-point bracket `(a, m, b)` with
/// `f(m) >= max(f(a), f(b))` certifies an interior maximum of the concave
/// function `f`.
fn bracket_max<F: Fn(f64) -> f64>(f: &F, t0: f64) -> Result<Bracket> {
    let (mut a, mut m, mut b) = (t0 - 1.0, t0, t0 + 1.0);
    let (mut fa, mut fm, mut fb) = (f(a), f(m), f(b));
    for _ in 0..200 {
        if fm >= fa && fm >= fb {
            return Ok(((a, fa), (m, fm), (b, fb)));
        }
        if fb > fm {
            a = m;
            fa = fm;
            m = b;
            fm = fb;
            b = m + 2.0 * (m - a);
            fb = f(b);
        } else {
            b = m;
            fb = fm;
            m = a;
            fm = fa;
            a = m - 2.0 * (b - m);
            fa = f(a);
        }
    }
    Err(Error::BracketFailure(format!(
        "no interior maximum found near t = {t0} (reached [{a}, {b}])"
    )))
}

/// Golden-section maximization of a concave function on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Maximize `phi(t) = delta*log_q(e^t) - (1/delta0)*log_q(g0(e^t))` over
/// `t = ln s`. The objective is concave (log-sum-exp convexity), so a
/// bracketed golden-section search converges to window width 1e-10.
/// Returns `(max value in base-q units, s* = e^{t*})`.
pub fn inner_max(g: &WeightEnumerator, delta: f64, delta0: usize, q: u64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange(format!("delta {delta} outside (0, 1)")));
    }
    let Some(coeffs) = g.log_coeffs() else {
        return Err(Error::InvalidParameters(
            "inner maximization needs an analytic enumerator".into(),
        ));
    };
    let ln_q = (q as f64).ln();
    let d0 = delta0 as f64;
    let phi = |t: f64| (delta * t - lse_eval(coeffs, t) / d0) / ln_q;
    let ((a, _), _, (b, _)) = bracket_max(&phi, 0.0)?;
    let (t, val) = golden_max(&phi, a, b, INNER_TOL);
    Ok((val, t.exp()))
}

/// Which exponent functional a lower bound uses: `F1` for two Reed–Solomon
/// layers, `F2` for two expurgated-random layers, `F3` for the
/// `ell`-layer Reed–Solomon generalization (whose `ell = 2` case coincides
/// with `F1` structurally).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FKind {
    F1,
    F2,
    F3,
}

impl FKind {
    pub fn bound_kind(self) -> BoundKind {
        match self {
            FKind::F1 => BoundKind::LowerE1,
            FKind::F2 => BoundKind::LowerE2,
            FKind::F3 => BoundKind::LowerE3,
        }
    }
}

/// Constituent rate induced by the overall rate: `1 - (1-R)/ell`.
pub fn layer_rate(rate: Rational, ell: usize) -> Rational {
    Rational::from_integer(1)
        - (Rational::from_integer(1) - rate) / Rational::from_integer(ell as i64)
}

fn g0_for(
    kind: FKind,
    q: u64,
    delta0: usize,
    rate: Rational,
    ell: usize,
) -> Result<WeightEnumerator> {
    if kind != FKind::F3 && ell != 2 {
        return Err(Error::InvalidParameters(format!(
            "two-layer functional evaluated with {ell} layers"
        )));
    }
    let r0 = layer_rate(rate, ell);
    match kind {
        FKind::F1 | FKind::F3 => g0_estimate_rs(q, delta0, r0),
        FKind::F2 => g0_estimate_expurgated(q, delta0, r0),
    }
}

fn f_from_parts(delta: f64, q: u64, ell: usize, inner: f64) -> f64 {
    let ln_ratio = ((q - 1) as f64).ln() / (q as f64).ln();
    let base = entropy_q(delta, q) + delta * ln_ratio;
    (ell as f64 - 1.0) * base + ell as f64 * inner
}

/// Evaluate the exponent functional in base-q units:
/// `(ell-1)*(h_q(delta) + delta*log_q(q-1)) + ell*inner_max(...)`.
pub fn eval_f(
    kind: FKind,
    delta: f64,
    delta0: usize,
    q: u64,
    rate: Rational,
    ell: usize,
) -> Result<f64> {
    check_rate_open(rate)?;
    let g = g0_for(kind, q, delta0, rate, ell)?;
    let (inner, _) = inner_max(&g, delta, delta0, q)?;
    Ok(f_from_parts(delta, q, ell, inner))
}

/// Sign-evaluation context for one fixed `(kind, q, rate, delta0, ell)`.
/// Root scanning needs only the sign of F at many deltas, which concavity
/// certificates usually decide after one or two generating-function
/// evaluations instead of a full inner maximization.
struct FScan<'a> {
    coeffs: &'a [f64],
    d0: f64,
    ell: f64,
    q: u64,
    ln_q: f64,
    ln_ratio: f64,
}

impl FScan<'_> {
    fn new(coeffs: &[f64], delta0: usize, ell: usize, q: u64) -> FScan<'_> {
        FScan {
            coeffs,
            d0: delta0 as f64,
            ell: ell as f64,
            q,
            ln_q: (q as f64).ln(),
            ln_ratio: ((q - 1) as f64).ln() / (q as f64).ln(),
        }
    }

    #[inline]
    fn phi(&self, delta: f64, t: f64) -> f64 {
        (delta * t - lse_eval(self.coeffs, t) / self.d0) / self.ln_q
    }

    fn base(&self, delta: f64) -> f64 {
        (self.ell - 1.0) * (entropy_q(delta, self.q) + delta * self.ln_ratio)
    }

    /// Decide `F(delta) > 0` without computing the inner maximum exactly:
    /// any sample of the concave objective is a lower bound on it, and a
    /// chord-slope envelope over a bracketing triple is an upper bound.
    /// Returns the decision and a refreshed maximizer hint.
    fn is_positive(&self, delta: f64, hint: f64) -> (bool, f64) {
        let base = self.base(delta);
        let ell = self.ell;
        let f = |t: f64| self.phi(delta, t);
        if base + ell * f(hint) > 0.0 {
            return (true, hint);
        }
        let Ok(((mut a, mut fa), (mut m, mut fm), (mut b, mut fb))) = bracket_max(&f, hint) else {
            // Concavity guarantees a bracket; treat failure as a sign of
            // deep negativity rather than crashing the scan.
            return (false, hint);
        };
        loop {
            if base + ell * fm > 0.0 {
                return (true, m);
            }
            let sl = ((fm - fa) / (m - a)).max(0.0);
            let sr = ((fb - fm) / (b - m)).min(0.0);
            let upper = fm + (sl * (b - m)).max(-sr * (m - a));
            if base + ell * upper < 0.0 {
                return (false, m);
            }
            if b - a < INNER_TOL {
                return (base + ell * fm >= 0.0, m);
            }
            // Shrink the wider side, keeping the interior point on top.
            if b - m > m - a {
                let x = m + 0.381_966_011_250_105_2 * (b - m);
                let fx = f(x);
                if fx > fm {
                    a = m;
                    fa = fm;
                    m = x;
                    fm = fx;
                } else {
                    b = x;
                    fb = fx;
                }
            } else {
                let x = m - 0.381_966_011_250_105_2 * (m - a);
                let fx = f(x);
                if fx > fm {
                    b = m;
                    fb = fm;
                    m = x;
                    fm = fx;
                } else {
                    a = x;
                    fa = fx;
                }
            }
        }
    }

    /// First positive root of `F`: scan from `SCAN_START` on a `SCAN_STEP`
    /// grid requiring positivity at the start, bisect the first sign change
    /// to 1e-9. `None` when F is not positive at the origin side or never
    /// changes sign before delta approaches 1.
    fn first_root(&self) -> Option<f64> {
        let mut hint = -5.0;
        let (pos, h) = self.is_positive(SCAN_START, hint);
        if !pos {
            return None;
        }
        hint = h;
        let mut prev = SCAN_START;
        let mut k = 1u64;
        loop {
            let delta = k as f64 * SCAN_STEP;
            if delta >= 1.0 - SCAN_STEP {
                return None;
            }
            let (pos, h) = self.is_positive(delta, hint);
            hint = h;
            if !pos {
                let (mut lo, mut hi) = (prev, delta);
                while hi - lo > ROOT_TOL {
                    let mid = 0.5 * (lo + hi);
                    let (p, h2) = self.is_positive(mid, hint);
                    hint = h2;
                    if p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Some(0.5 * (lo + hi));
            }
            prev = delta;
            k += 1;
        }
    }
}

/// Lower bound on relative distance from one `(delta0, ell)` operating
/// point: the first positive root of the exponent functional, or `None`
/// when the functional admits no such root (a valid outcome — the bound is
/// then simply unavailable at these parameters).
pub fn lower_bound_root(
    kind: FKind,
    q: u64,
    rate: Rational,
    delta0: usize,
    ell: usize,
) -> Result<Option<BoundResult>> {
    check_rate_open(rate)?;
    let g = g0_for(kind, q, delta0, rate, ell)?;
    let coeffs = g.log_coeffs().expect("estimates are analytic");
    let scan = FScan::new(coeffs, delta0, ell, q);
    let Some(root) = scan.first_root() else {
        return Ok(None);
    };
    let (_, s_star) = inner_max(&g, root, delta0, q)?;
    Ok(Some(BoundResult {
        kind: kind.bound_kind(),
        delta: root,
        achiever: Achiever {
            delta0: Some(delta0),
            ell: Some(ell),
            s_star: Some(s_star),
            ..Achiever::default()
        },
        absolute: None,
    }))
}

/// Admissibility of one `(delta0, ell)` operating point for a functional.
fn admissible(kind: FKind, q: u64, rate: Rational, delta0: usize, ell: usize) -> bool {
    if ell < 2 || delta0 < 2 {
        return false;
    }
    match kind {
        FKind::F2 => ell == 2,
        FKind::F1 | FKind::F3 => {
            if kind == FKind::F1 && ell != 2 {
                return false;
            }
            if delta0 as u64 > q + 1 {
                return false;
            }
            let k = layer_rate(rate, ell) * Rational::from_integer(delta0 as i64);
            k.is_integer()
                && k >= Rational::from_integer(1)
                && k < Rational::from_integer(delta0 as i64)
        }
    }
}

/// Maximize the lower-bound root over candidate lengths (and layer counts
/// for the multi-layer functional). Candidates failing the admissibility
/// rules (integer constituent dimension, `delta0 <= q+1` for Reed–Solomon
/// families) are filtered out first; an empty admissible set is an error.
/// Near-ties within 1e-9 resolve to the smallest `delta0`, then smallest
/// `ell`. Returns `None` only when no candidate has a root.
///
/// The search runs in two waves: a spread of candidates (always including
/// the largest length per layer count) is scanned fully in parallel, then
/// each remaining candidate is kept only if the functional is still
/// positive just below the incumbent — positivity there is necessary for
/// its root to beat the incumbent, and one sign evaluation is far cheaper
/// than a scan.
pub fn optimize_delta0(
    kind: FKind,
    q: u64,
    rate: Rational,
    delta0s: &[usize],
    ells: &[usize],
) -> Result<Option<BoundResult>> {
    check_rate_open(rate)?;
    let ells_eff: Vec<usize> = if kind == FKind::F3 {
        let mut e: Vec<usize> = ells.to_vec();
        e.sort_unstable();
        e.dedup();
        e
    } else {
        vec![2]
    };
    let mut sorted_deltas: Vec<usize> = delta0s.to_vec();
    sorted_deltas.sort_unstable();
    sorted_deltas.dedup();
    let mut cands: Vec<(usize, usize)> = Vec::new();
    for &ell in &ells_eff {
        for &d0 in &sorted_deltas {
            if admissible(kind, q, rate, d0, ell) {
                cands.push((d0, ell));
            }
        }
    }
    if cands.is_empty() {
        return Err(Error::EmptyCandidates(format!(
            "no admissible operating points at rate {rate}"
        )));
    }

    // Wave 1: per layer count, a spread of lengths including the largest.
    let mut wave1: Vec<(usize, usize)> = Vec::new();
    for &ell in &ells_eff {
        let of_ell: Vec<(usize, usize)> = cands.iter().copied().filter(|c| c.1 == ell).collect();
        if of_ell.is_empty() {
            continue;
        }
        let stride = (of_ell.len() / 4).max(1);
        let mut picked: Vec<(usize, usize)> = of_ell.iter().copied().step_by(stride).collect();
        picked.push(*of_ell.last().expect("non-empty"));
        wave1.extend(picked);
    }
    wave1.sort_unstable();
    wave1.dedup();

    // A `(delta0, ell)` operating point paired with its root-scan outcome.
    type ScanHit = ((usize, usize), Option<BoundResult>);
    let wave1_results: Vec<Result<ScanHit>> = exec::map(wave1.clone(), |cand| {
        lower_bound_root(kind, q, rate, cand.0, cand.1).map(|r| (cand, r))
    });
    let mut found: Vec<((usize, usize), BoundResult)> = Vec::new();
    for item in wave1_results {
        let (cand, res) = item?;
        if let Some(r) = res {
            found.push((cand, r));
        }
    }
    let mut best = found
        .iter()
        .map(|(_, r)| r.delta)
        .fold(f64::NEG_INFINITY, f64::max);

    // Wave 2: cheap rejection against the incumbent, full scan otherwise.
    for cand in cands {
        if wave1.binary_search(&cand).is_ok() {
            continue;
        }
        if best > f64::NEG_INFINITY {
            let g = g0_for(kind, q, cand.0, rate, cand.1)?;
            let coeffs = g.log_coeffs().expect("estimates are analytic");
            let scan = FScan::new(coeffs, cand.0, cand.1, q);
            let probe = best - TIE_TOL;
            debug_assert!(probe > 0.0);
            let (pos, _) = scan.is_positive(probe, -5.0);
            if !pos {
                // F <= 0 just below the incumbent means this candidate's
                // first root (if any) is below it too.
                continue;
            }
        }
        if let Some(r) = lower_bound_root(kind, q, rate, cand.0, cand.1)? {
            best = best.max(r.delta);
            found.push((cand, r));
        }
    }
    if found.is_empty() {
        return Ok(None);
    }
    let winner = found
        .iter()
        .filter(|(_, r)| r.delta >= best - TIE_TOL)
        .min_by_key(|(cand, _)| *cand)
        .expect("non-empty");
    Ok(Some(winner.1))
}

/// Default candidate lengths: multiples of the smallest length giving an
/// integer constituent dimension, up to `q + 1`, for the Reed–Solomon
/// functionals; multiples of 4 up to 1024 for the expurgated one.
pub fn default_delta0_grid(kind: FKind, q: u64, rate: Rational, ells: &[usize]) -> Vec<usize> {
    let mut set = std::collections::BTreeSet::new();
    match kind {
        FKind::F2 => {
            for d in (4..=1024usize).step_by(4) {
                set.insert(d);
            }
        }
        FKind::F1 => {
            insert_multiples(
                &mut set,
                *layer_rate(rate, 2).denom() as usize,
                (q + 1) as usize,
            );
        }
        FKind::F3 => {
            for &ell in ells {
                if ell >= 2 {
                    insert_multiples(
                        &mut set,
                        *layer_rate(rate, ell).denom() as usize,
                        (q + 1) as usize,
                    );
                }
            }
        }
    }
    set.into_iter().collect()
}

fn insert_multiples(set: &mut std::collections::BTreeSet<usize>, step: usize, cap: usize) {
    let mut d = step;
    while d <= cap {
        set.insert(d);
        d += step;
    }
}

/// Default layer-count range for the multi-layer functional.
pub fn default_ell_range() -> Vec<usize> {
    (2..=8).collect()
}

/// A self-contained bound request, as issued by the command-line front end.
#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub kind: BoundKind,
    pub q: u64,
    pub rate: Rational,
    pub delta0: Option<usize>,
    pub ell: Option<usize>,
}

impl BoundQuery {
    /// Evaluate the request. Lower-bound queries without a length optimize
    /// over the default grids; `None` means the bound has no positive root
    /// there. The finite-length upper bound needs explicit layer geometry
    /// and is not reachable through queries.
    pub fn evaluate(&self) -> Result<Option<BoundResult>> {
        match self.kind {
            BoundKind::Vg => Ok(Some(vg_bound(self.q, self.rate)?)),
            BoundKind::UpperAsymptotic => Ok(Some(upper_asymptotic(self.q, self.rate)?)),
            BoundKind::UpperFinite => Err(Error::InvalidParameters(
                "finite-length bound needs explicit layer geometry".into(),
            )),
            BoundKind::LowerE1 | BoundKind::LowerE2 | BoundKind::LowerE3 => {
                let fkind = match self.kind {
                    BoundKind::LowerE1 => FKind::F1,
                    BoundKind::LowerE2 => FKind::F2,
                    _ => FKind::F3,
                };
                match self.delta0 {
                    Some(d0) => {
                        let ell = if fkind == FKind::F3 {
                            self.ell.unwrap_or(2)
                        } else {
                            2
                        };
                        lower_bound_root(fkind, self.q, self.rate, d0, ell)
                    }
                    None => {
                        let ells: Vec<usize> = match (fkind, self.ell) {
                            (FKind::F3, Some(e)) => vec![e],
                            (FKind::F3, None) => default_ell_range(),
                            _ => vec![2],
                        };
                        let grid = default_delta0_grid(fkind, self.q, self.rate, &ells);
                        optimize_delta0(fkind, self.q, self.rate, &grid, &ells)
                    }
                }
            }
        }
    }
}

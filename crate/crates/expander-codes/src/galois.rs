//! Exact arithmetic in GF(p^m).
//!
//! Elements are canonical integers in `[0, q)`: the base-`p` digits of a
//! value are the coefficients of its polynomial representative (constant
//! term = least significant digit). Multiplication goes through discrete
//! exp/log tables when `q <= 2^16`, and falls back to reduced polynomial
//! arithmetic for larger fields (up to `q <= 2^20`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;
/// Orders up to this limit get precomputed exp/log tables.
const TABLE_LIMIT: u64 = 1 << 16;

/// Description of a finite field GF(p^m).
pub struct FieldSpec {
    /// Prime characteristic.
    pub p: u32,
    /// Extension degree.
    pub m: u32,
    /// Field order, `p^m`.
    pub q: u32,
    /// Monic irreducible reduction polynomial over GF(p), coefficients in
    /// ascending degree order (constant term first, leading `1` last).
    /// Empty when `m == 1`.
    pub reduction_poly: Vec<u32>,
    /// `exp_table[i] = g^i` for a fixed generator `g`, doubled in length so
    /// that `exp_table[log a + log b]` never needs a modular reduction.
    exp_table: Option<Vec<u32>>,
    /// `log_table[x]` = discrete log of nonzero `x` base `g`.
    log_table: Option<Vec<u32>>,
}

/// Shared handle to an immutable field description.
pub type Field = Arc<FieldSpec>;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn decode(value: u32, p: u32, len: usize) -> Vec<u32> {
    let mut v = value;
    let mut digits = vec![0u32; len];
    for d in digits.iter_mut() {
        *d = v % p;
        v /= p;
        if v == 0 {
            break;
        }
    }
    digits
}

fn encode(digits: &[u32], p: u32) -> u32 {
    let mut acc = 0u64;
    for &d in digits.iter().rev() {
        acc = acc * p as u64 + d as u64;
    }
    acc as u32
}

/// Remainder of monic-divisor polynomial division over GF(p); `f` is
/// modified in place and holds the remainder afterwards.
fn poly_rem_in_place(f: &mut [u64], g: &[u32], p: u64) {
    let dg = g.len() - 1;
    for d in (dg..f.len()).rev() {
        f[d] %= p;
        let c = f[d];
        if c == 0 {
            continue;
        }
        f[d] = 0;
        for j in 0..dg {
            // subtract c*g[j] at position d-dg+j, kept nonnegative mod p
            let sub = (c * g[j] as u64) % p;
            f[d - dg + j] = (f[d - dg + j] + p - sub) % p;
        }
    }
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    let pl = p as u64;
    // A polynomial of degree m with no divisor of degree <= m/2 is irreducible.
    for dv in 1..=(m / 2) {
        let count = (pl as u128).pow(dv as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(dv + 1);
            let mut v = low;
            for _ in 0..dv {
                g.push((v % pl as u128) as u32);
                v /= pl as u128;
            }
            g.push(1); // monic
            let mut f: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
            poly_rem_in_place(&mut f, &g, pl);
            if f.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `m`
/// over GF(p), comparing coefficient tuples from the highest degree down.
/// With the leading coefficient fixed at 1 this is the candidate whose lower
/// coefficients encode the smallest base-`p` integer.
fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    let pl = p as u128;
    let count = pl.pow(m);
    for low in 0..count {
        if low % pl == 0 {
            continue; // zero constant term: divisible by x
        }
        let mut poly = Vec::with_capacity(m as usize + 1);
        let mut v = low;
        for _ in 0..m {
            poly.push((v % pl) as u32);
            v /= pl;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

impl FieldSpec {
    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        debug_assert!(self.m >= 2);
        if a == 0 || b == 0 {
            return 0;
        }
        if self.p == 2 {
            // Bit-parallel carry-less multiply, then reduction by the
            // bitmask form of the reduction polynomial.
            let m = self.m as u64;
            let poly_bits: u64 = self
                .reduction_poly
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | ((c as u64) << i));
            let mut acc = 0u64;
            let mut aa = a as u64;
            let mut bb = b as u64;
            while bb != 0 {
                if bb & 1 != 0 {
                    acc ^= aa;
                }
                aa <<= 1;
                bb >>= 1;
            }
            let mut bit = 2 * m - 2;
            while bit >= m {
                if (acc >> bit) & 1 == 1 {
                    acc ^= poly_bits << (bit - m);
                }
                bit -= 1;
            }
            return acc as u32;
        }
        let m = self.m as usize;
        let da = decode(a, self.p, m);
        let db = decode(b, self.p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
        }
        poly_rem_in_place(&mut prod, &self.reduction_poly, self.p as u64);
        let digits: Vec<u32> = prod[..m]
            .iter()
            .map(|&c| (c % self.p as u64) as u32)
            .collect();
        encode(&digits, self.p)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        self.mul_poly(a, b)
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// Field addition.
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let m = self.m as usize;
        let da = decode(a, self.p, m);
        let db = decode(b, self.p, m);
        let digits: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        encode(&digits, self.p)
    }

    /// Additive inverse.
    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let m = self.m as usize;
        let da = decode(a, self.p, m);
        let digits: Vec<u32> = da
            .iter()
            .map(|&x| if x == 0 { 0 } else { self.p - x })
            .collect();
        encode(&digits, self.p)
    }

    /// Field subtraction.
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Field multiplication.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        if let (Some(exp), Some(log)) = (&self.exp_table, &self.log_table) {
            return exp[(log[a as usize] + log[b as usize]) as usize];
        }
        self.mul_raw(a, b)
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        if let (Some(exp), Some(log)) = (&self.exp_table, &self.log_table) {
            return Ok(exp[(self.q - 1 - log[a as usize]) as usize]);
        }
        Ok(self.pow_raw(a, self.q as u64 - 2))
    }

    /// Field division `a / b`.
    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Exponentiation with integer exponents of either sign.
    /// `pow(0, 0) = 1` by the empty-product convention.
    pub fn pow(&self, a: u32, e: i64) -> Result<u32> {
        debug_assert!(a < self.q);
        if a == 0 {
            return match e.signum() {
                0 => Ok(1),
                1 => Ok(0),
                _ => Err(Error::ZeroInverse),
            };
        }
        let group = (self.q - 1) as i64;
        let e_mod = e.rem_euclid(group) as u64;
        if let (Some(exp), Some(log)) = (&self.exp_table, &self.log_table) {
            let idx = (log[a as usize] as u64 * e_mod) % group as u64;
            return Ok(exp[idx as usize]);
        }
        Ok(self.pow_raw(a, e_mod))
    }

    /// Wrap a canonical value as an element of this field.
    pub fn element(self: &Arc<Self>, value: u32) -> FieldElement {
        assert!(
            value < self.q,
            "value {} out of range for field of order {}",
            value,
            self.q
        );
        FieldElement {
            value,
            field: Arc::clone(self),
        }
    }

    /// All canonical element values, `0..q`.
    pub fn values(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Structural identity: two specs describe the same field encoding.
    pub fn same_as(&self, other: &FieldSpec) -> bool {
        self.p == other.p && self.m == other.m && self.reduction_poly == other.reduction_poly
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("reduction_poly", &self.reduction_poly)
            .finish()
    }
}

/// Construct GF(p^m) with the lexicographically least irreducible reduction
/// polynomial, so element encodings are reproducible across runs and builds.
pub fn make_field(p: u32, m: u32) -> Result<Field> {
    if m == 0 {
        return Err(Error::BadDegree);
    }
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let mut q: u64 = 1;
    for _ in 0..m {
        q *= p as u64;
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p: p as u64, m });
        }
    }
    let reduction_poly = if m == 1 {
        Vec::new()
    } else {
        least_irreducible(p, m)
    };
    let mut spec = FieldSpec {
        p,
        m,
        q: q as u32,
        reduction_poly,
        exp_table: None,
        log_table: None,
    };
    if q <= TABLE_LIMIT {
        let (exp, log) = build_tables(&spec);
        spec.exp_table = Some(exp);
        spec.log_table = Some(log);
    }
    Ok(Arc::new(spec))
}

/// Construct the field of a given prime-power order.
pub fn make_field_from_order(q: u64) -> Result<Field> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    let p = factors[0];
    let mut m = 0u32;
    let mut acc = 1u64;
    while acc < q {
        acc *= p;
        m += 1;
    }
    if acc != q {
        return Err(Error::NotPrimePower(q));
    }
    make_field(p as u32, m)
}

fn build_tables(spec: &FieldSpec) -> (Vec<u32>, Vec<u32>) {
    let q = spec.q;
    let group = (q - 1) as u64;
    let g = if q == 2 {
        1
    } else {
        let factors = prime_factors(group);
        (2..q)
            .find(|&cand| factors.iter().all(|&r| spec.pow_raw(cand, group / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    };
    let mut exp = vec![0u32; 2 * group as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for i in 0..group as usize {
        exp[i] = cur;
        exp[i + group as usize] = cur;
        log[cur as usize] = i as u32;
        cur = spec.mul_raw(cur, g);
    }
    debug_assert_eq!(cur, 1, "generator order must divide q-1");
    (exp, log)
}

/// One element of a specific field.
#[derive(Clone)]
pub struct FieldElement {
    pub value: u32,
    pub field: Field,
}

impl FieldElement {
    fn ensure_same_field(&self, other: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields(self.field.q, other.field.q))
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.ensure_same_field(other)?;
        Ok(self.field.element(self.field.add(self.value, other.value)))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.ensure_same_field(other)?;
        Ok(self.field.element(self.field.sub(self.value, other.value)))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.ensure_same_field(other)?;
        Ok(self.field.element(self.field.mul(self.value, other.value)))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.ensure_same_field(other)?;
        Ok(self.field.element(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(self.field.element(self.field.pow(self.value, e)?))
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.same_as(&other.field)
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈GF({})", self.value, self.field.q)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! element_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs)
                    .expect("field element operation failed (mixed fields or zero divisor)")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

element_binop!(Add, add, checked_add);
element_binop!(Sub, sub, checked_sub);
element_binop!(Mul, mul, checked_mul);
element_binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.element(self.field.neg(self.value))
    }
}
impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

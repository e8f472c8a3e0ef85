//! Arithmetic in GF(p^m).
//!
//! Elements are stored as integers in `[0, q)` whose base-`p` digits are the
//! coefficients of the element in the polynomial basis, lowest degree first.
//! For `p = 2` bit `i` of the value is the coefficient of `x^i`.
//!
//! Multiplication goes through exp/log tables built against the smallest
//! primitive element. [`Field::mul_reduce`] multiplies by schoolbook
//! polynomial multiplication followed by reduction modulo the defining
//! polynomial and is kept as the reference implementation the tables are
//! checked against.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, RngCore};
use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Conventional primitive polynomials for GF(2^m), indexed by `m`.
/// Entry 8 is the usual Reed-Solomon polynomial x^8+x^4+x^3+x^2+1.
const BINARY_DEFAULT_MODULI: [u32; 17] = [
    0, 0x2, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B,
    0x4443, 0x8003, 0x1100B,
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field size {p}^{m} exceeds 2^16")]
    UnsupportedSize { p: u32, m: u32 },
    #[error("modulus must be monic of degree {expected} with coefficients below p")]
    BadModulus { expected: u32 },
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not an element of a field of size {q}")]
    NotInField { value: u64, q: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("cannot parse field spec `{0}`")]
    Parse(String),
}

/// A field element in polynomial-basis integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf(u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    /// Builds an element without checking it against a field. Prefer
    /// [`Field::elem`] for untrusted input.
    pub const fn from_raw(value: u16) -> Self {
        Gf(value)
    }

    pub const fn value(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    /// Coefficients of the defining polynomial, low degree first, length m+1.
    modulus: Vec<u32>,
    primitive: Gf,
    /// exp[i] = primitive^i for i in [0, 2(q-1)).
    exp: Vec<u16>,
    /// log[a] for a != 0.
    log: Vec<u32>,
}

/// A validated finite field GF(p^m). Cloning is cheap; all clones share the
/// same precomputed tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gf({}^{}, modulus={:#X})",
            self.0.p,
            self.0.m,
            self.modulus_value()
        )
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

fn digits(mut value: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((value % p as u64) as u32);
        value /= p as u64;
    }
    out
}

fn from_digits(coeffs: &[u32], p: u32) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Remainder of `num` modulo `den` over GF(p). `den` must be trimmed and
/// nonzero.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    trim(&mut r);
    let dd = den.len() - 1;
    let lead_inv = inv_mod_p(den[dd], p) as u64;
    while r.len() > dd {
        let shift = r.len() - 1 - dd;
        let factor = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
        for (i, &c) in den.iter().enumerate() {
            let sub = factor * c as u64 % p as u64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

/// Trial division against every monic polynomial of degree 1..=m/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = (modulus.len() - 1) as u32;
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg);
        for low in 0..count {
            let mut divisor = digits(low, p, deg as usize);
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^m) from the coefficient list of its defining polynomial,
    /// lowest degree first.
    pub fn new(p: u32, m: u32, modulus: &[u32]) -> Result<Self, GaloisError> {
        if !is_prime(p) {
            return Err(GaloisError::NotPrime(p));
        }
        if m == 0 {
            return Err(GaloisError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(GaloisError::UnsupportedSize { p, m })? as u32;
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 || modulus.iter().any(|&c| c >= p)
        {
            return Err(GaloisError::BadModulus { expected: m });
        }
        if !is_irreducible(modulus, p) {
            return Err(GaloisError::ReducibleModulus(format!(
                "{:#X}",
                from_digits(modulus, p)
            )));
        }

        let mut tables = Tables {
            p,
            m,
            q,
            modulus: modulus.to_vec(),
            primitive: Gf::ONE,
            exp: Vec::new(),
            log: Vec::new(),
        };
        tables.primitive = find_primitive(&tables);
        let order = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u32; q as usize];
        let mut x = Gf::ONE;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x.0;
            log[x.0 as usize] = i as u32;
            x = reduce_mul(&tables, x, tables.primitive);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        tables.exp = exp;
        tables.log = log;
        Ok(Field(Arc::new(tables)))
    }

    /// Builds a field from the integer encoding of its modulus (base-p digits
    /// are the coefficients), e.g. `Field::from_modulus(2, 8, 0x11D)`.
    pub fn from_modulus(p: u32, m: u32, modulus: u64) -> Result<Self, GaloisError> {
        if !is_prime(p) {
            return Err(GaloisError::NotPrime(p));
        }
        if (p as u64).checked_pow(m).is_none_or(|q| q > MAX_FIELD_SIZE) {
            return Err(GaloisError::UnsupportedSize { p, m });
        }
        let coeffs = digits(modulus, p, m as usize + 1);
        if from_digits(&coeffs, p) != modulus {
            return Err(GaloisError::BadModulus { expected: m });
        }
        Self::new(p, m, &coeffs)
    }

    /// GF(p^m) with a default modulus: the conventional primitive polynomial
    /// for binary fields, `x` for prime fields, and otherwise the smallest
    /// irreducible monic polynomial.
    pub fn with_default_modulus(p: u32, m: u32) -> Result<Self, GaloisError> {
        if p == 2 && (1..=16).contains(&m) {
            return Self::from_modulus(2, m, BINARY_DEFAULT_MODULI[m as usize] as u64);
        }
        if !is_prime(p) {
            return Err(GaloisError::NotPrime(p));
        }
        if m == 0 {
            return Err(GaloisError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(GaloisError::UnsupportedSize { p, m })?;
        if m == 1 {
            return Self::new(p, 1, &[0, 1]);
        }
        for low in 0..q {
            let mut coeffs = digits(low, p, m as usize);
            coeffs.push(1);
            if is_irreducible(&coeffs, p) {
                return Self::new(p, m, &coeffs);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// GF(256) with modulus x^8+x^4+x^3+x^2+1 (0x11D).
    pub fn gf256() -> Self {
        Self::from_modulus(2, 8, 0x11D).expect("0x11D is irreducible")
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn size(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Integer encoding of the modulus.
    pub fn modulus_value(&self) -> u64 {
        from_digits(&self.0.modulus, self.0.p)
    }

    /// Number of hex digits needed to print any element.
    pub fn hex_width(&self) -> usize {
        let bits = 32 - (self.0.q - 1).leading_zeros() as usize;
        bits.div_ceil(4).max(1)
    }

    pub fn elem(&self, value: u64) -> Result<Gf, GaloisError> {
        if value < self.0.q as u64 {
            Ok(Gf(value as u16))
        } else {
            Err(GaloisError::NotInField {
                value,
                q: self.0.q,
            })
        }
    }

    pub fn contains(&self, a: Gf) -> bool {
        (a.0 as u32) < self.0.q
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.0.q).map(|v| Gf(v as u16))
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        let p = self.0.p;
        if p == 2 {
            return Gf(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0 as u32, b.0 as u32);
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Gf(out as u16)
    }

    pub fn neg(&self, a: Gf) -> Gf {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0 as u32;
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        Gf(out as u16)
    }

    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        let t = &self.0;
        Gf(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplication by polynomial product and reduction modulo the defining
    /// polynomial. Independent of the exp/log tables.
    pub fn mul_reduce(&self, a: Gf, b: Gf) -> Gf {
        reduce_mul(&self.0, a, b)
    }

    pub fn inv(&self, a: Gf) -> Result<Gf, GaloisError> {
        if a.is_zero() {
            return Err(GaloisError::DivisionByZero);
        }
        let t = &self.0;
        let order = t.q - 1;
        Ok(Gf(t.exp[((order - t.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf, GaloisError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let t = &self.0;
        let order = (t.q - 1) as u64;
        let idx = (t.log[a.0 as usize] as u64 * (e % order)) % order;
        Gf(t.exp[idx as usize])
    }

    /// The smallest-valued element of multiplicative order q-1.
    pub fn primitive_element(&self) -> Gf {
        self.0.primitive
    }

    /// `primitive_element()^i`.
    pub fn alpha_pow(&self, i: u64) -> Gf {
        self.pow(self.0.primitive, i)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Gf) -> Result<u64, GaloisError> {
        if a.is_zero() {
            return Err(GaloisError::DivisionByZero);
        }
        let order = (self.0.q - 1) as u64;
        let mut ord = order;
        for r in distinct_prime_factors(order) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == Gf::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// Checked variants that validate operands against this field.
    pub fn try_add(&self, a: Gf, b: Gf) -> Result<Gf, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: Gf, b: Gf) -> Result<Gf, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    fn check(&self, a: Gf) -> Result<(), GaloisError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GaloisError::NotInField {
                value: a.0 as u64,
                q: self.0.q,
            })
        }
    }

    /// A uniformly random element. Power-of-two field sizes mask a single
    /// 32-bit draw; other sizes use rejection sampling.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> Gf {
        let q = self.0.q;
        if q.is_power_of_two() {
            Gf((rng.next_u32() & (q - 1)) as u16)
        } else {
            Gf(rng.gen_range(0..q) as u16)
        }
    }

    pub fn format_elem(&self, a: Gf) -> String {
        format!("{:0width$x}", a.0, width = self.hex_width())
    }

    pub fn parse_elem(&self, s: &str) -> Result<Gf, GaloisError> {
        let v = u64::from_str_radix(s.trim().trim_start_matches("0x"), 16)
            .map_err(|_| GaloisError::Parse(s.to_string()))?;
        self.elem(v)
    }
}

fn reduce_mul(t: &Tables, a: Gf, b: Gf) -> Gf {
    let m = t.m as usize;
    let p = t.p;
    let da = digits(a.0 as u64, p, m);
    let db = digits(b.0 as u64, p, m);
    let mut prod = vec![0u32; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let r = poly_rem(&prod, &t.modulus, p);
    Gf(from_digits(&r, p) as u16)
}

fn find_primitive(t: &Tables) -> Gf {
    let order = (t.q - 1) as u64;
    let factors = distinct_prime_factors(order);
    let pow = |a: Gf, mut e: u64| {
        let (mut base, mut acc) = (a, Gf::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = reduce_mul(t, acc, base);
            }
            base = reduce_mul(t, base, base);
            e >>= 1;
        }
        acc
    };
    (1..t.q)
        .map(|v| Gf(v as u16))
        .find(|&g| factors.iter().all(|&r| pow(g, order / r) != Gf::ONE))
        .expect("the multiplicative group of a finite field is cyclic")
}

/// Parses `gf(p^m, modulus=0x...)`, `gf(p^m)` or `gf(p)`.
impl FromStr for Field {
    type Err = GaloisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GaloisError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_ascii_lowercase();
        let body = lower
            .strip_prefix("gf(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(err)?;
        let (size, modulus) = match body.split_once(',') {
            Some((size, rest)) => {
                let value = rest.strip_prefix("modulus=").ok_or_else(err)?;
                let parsed = match value.strip_prefix("0x") {
                    Some(hex) => u64::from_str_radix(hex, 16),
                    None => value.parse(),
                }
                .map_err(|_| err())?;
                (size, Some(parsed))
            }
            None => (body, None),
        };
        let (p, m) = match size.split_once('^') {
            Some((p, m)) => (p.parse().map_err(|_| err())?, m.parse().map_err(|_| err())?),
            None => (size.parse().map_err(|_| err())?, 1),
        };
        match modulus {
            Some(modulus) => Field::from_modulus(p, m, modulus),
            None => Field::with_default_modulus(p, m),
        }
    }
}

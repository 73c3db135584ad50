//! Arithmetic in binary extension fields GF(2^m), m <= 16.
//!
//! A [`Field`] owns the modulus and log/antilog tables; a [`Fel`] is the bare
//! polynomial-basis bit-vector of an element and is only meaningful relative
//! to the field that produced it. Addition is exclusive-or and needs no field.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Lowest-weight, then lowest-value irreducible polynomial of each degree
/// 1..=16 with nonzero constant term. Index `m - 1`.
const DEFAULT_MODULI: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

/// An element of GF(2^m) in the polynomial basis; bit `i` is the coefficient
/// of `t^i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fel(u16);

impl Fel {
    pub const ZERO: Fel = Fel(0);
    pub const ONE: Fel = Fel(1);

    pub const fn from_bits(bits: u16) -> Fel {
        Fel(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub const fn is_one(self) -> bool {
        self.0 == 1
    }
}

// addition in characteristic 2 is exclusive-or
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Fel {
    type Output = Fel;

    #[inline]
    fn add(self, rhs: Fel) -> Fel {
        Fel(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Fel {
    #[inline]
    fn add_assign(&mut self, rhs: Fel) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Debug for Fel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Parses a hexadecimal bit-string, with or without a `0x` prefix.
pub fn parse_hex(s: &str) -> Result<u32> {
    let t = s.trim();
    let digits = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if digits.is_empty() {
        return Err(Error::Parse(format!("empty hex string {s:?}")));
    }
    u32::from_str_radix(digits, 16).map_err(|_| Error::Parse(format!("invalid hex string {s:?}")))
}

/// Formats a modulus (or any bit-string) the way moduli are accepted.
pub fn format_hex(bits: u32) -> String {
    format!("{bits:#x}")
}

/// Carry-less product of two GF(2) polynomials.
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shifted = a as u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= shifted;
        }
        b >>= 1;
        shifted <<= 1;
    }
    acc
}

/// Remainder of `a` modulo `b` over GF(2); `b` must be nonzero.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn is_irreducible(modulus: u32, m: u32) -> bool {
    for deg in 1..=m / 2 {
        for divisor in (1u64 << deg)..(1u64 << (deg + 1)) {
            if poly_rem(modulus as u64, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Reference multiplication by shift-and-reduce; used to build the tables.
fn mul_reference(a: u16, b: u16, modulus: u32) -> u16 {
    poly_rem(clmul(a as u32, b as u32), modulus as u64) as u16
}

/// The field GF(2^m) presented as GF(2)[t] / (modulus).
pub struct Field {
    degree: u32,
    modulus: u32,
    /// `exp[i] = g^i` for `i` in `0..2*(2^m - 1)`, doubled to skip a reduction.
    exp: Vec<u16>,
    /// Discrete logarithm to base `g`; `log[0]` is unused.
    log: Vec<u32>,
    generator: Fel,
}

impl Field {
    /// Builds GF(2^m) from an explicit modulus, rejecting reducible ones.
    pub fn new(degree: u32, modulus: u32) -> Result<Field> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::InvalidModulus(format!(
                "extension degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        if modulus >> degree != 1 {
            return Err(Error::InvalidModulus(format!(
                "{} is not a degree-{degree} polynomial",
                format_hex(modulus)
            )));
        }
        if !is_irreducible(modulus, degree) {
            return Err(Error::InvalidModulus(format!(
                "{} is reducible over GF(2)",
                format_hex(modulus)
            )));
        }

        let group = (1u32 << degree) - 1;
        let factors = prime_factors(group);
        let pow_ref = |base: u16, mut e: u32| {
            let mut acc = 1u16;
            let mut b = base;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_reference(acc, b, modulus);
                }
                b = mul_reference(b, b, modulus);
                e >>= 1;
            }
            acc
        };
        let generator = (1..=group)
            .map(|v| v as u16)
            .find(|&g| factors.iter().all(|&p| pow_ref(g, group / p) != 1))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * group as usize];
        let mut log = vec![0u32; 1usize << degree];
        let mut acc = 1u16;
        for i in 0..group as usize {
            exp[i] = acc;
            exp[i + group as usize] = acc;
            log[acc as usize] = i as u32;
            acc = mul_reference(acc, generator, modulus);
        }

        Ok(Field {
            degree,
            modulus,
            exp,
            log,
            generator: Fel(generator),
        })
    }

    /// GF(2^m) with the built-in default modulus.
    pub fn with_default_modulus(degree: u32) -> Result<Field> {
        let modulus = Self::default_modulus(degree).ok_or_else(|| {
            Error::InvalidModulus(format!("no default modulus for degree {degree}"))
        })?;
        Field::new(degree, modulus)
    }

    pub fn default_modulus(degree: u32) -> Option<u32> {
        match degree {
            1..=MAX_DEGREE => Some(DEFAULT_MODULI[degree as usize - 1]),
            _ => None,
        }
    }

    /// Extension degree `m` over GF(2).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> u32 {
        1 << self.degree
    }

    pub fn contains(&self, a: Fel) -> bool {
        (a.0 as u32) < self.size()
    }

    /// Wraps raw bits as an element, checking they fit the field.
    pub fn elem(&self, bits: u32) -> Result<Fel> {
        if bits < self.size() {
            Ok(Fel(bits as u16))
        } else {
            Err(Error::ForeignElement(format!(
                "{} does not lie in GF(2^{})",
                format_hex(bits),
                self.degree
            )))
        }
    }

    /// All elements in increasing bit-vector order.
    pub fn elements(&self) -> impl Iterator<Item = Fel> {
        (0..self.size()).map(|b| Fel(b as u16))
    }

    #[inline]
    pub fn mul(&self, a: Fel, b: Fel) -> Fel {
        if a.0 == 0 || b.0 == 0 {
            return Fel::ZERO;
        }
        Fel(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplication with an argument check, for values of unknown origin.
    pub fn checked_mul(&self, a: Fel, b: Fel) -> Result<Fel> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::ForeignElement(format!(
                "operands {a}, {b} are not both in GF(2^{})",
                self.degree
            )));
        }
        Ok(self.mul(a, b))
    }

    #[inline]
    pub fn square(&self, a: Fel) -> Fel {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fel, e: u64) -> Fel {
        if e == 0 {
            return Fel::ONE;
        }
        if a.is_zero() {
            return Fel::ZERO;
        }
        let group = self.size() as u64 - 1;
        let l = (self.log[a.0 as usize] as u64 * (e % group)) % group;
        Fel(self.exp[l as usize])
    }

    pub fn inv(&self, a: Fel) -> Result<Fel> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let group = self.size() - 1;
        let l = self.log[a.0 as usize];
        Ok(Fel(self.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, a: Fel, b: Fel) -> Result<Fel> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(2^k)`, the k-fold Frobenius.
    pub fn frobenius(&self, a: Fel, k: u32) -> Fel {
        (0..k % self.degree.max(1)).fold(a, |acc, _| self.square(acc))
    }

    /// The unique square root, `a^(2^(m-1))`.
    pub fn sqrt(&self, a: Fel) -> Fel {
        self.frobenius(a, self.degree - 1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fel) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let group = self.size() - 1;
        let l = self.log[a.0 as usize];
        Ok(group / gcd(group, l))
    }

    /// Smallest element (by bit value) of multiplicative order `2^m - 1`.
    pub fn mult_generator(&self) -> Fel {
        self.generator
    }

    /// Elements fixed by `a -> a^(2^n)`, i.e. the copy of GF(2^n) inside this
    /// field, sorted by bit value.
    pub fn subfield_elements(&self, n: u32) -> Result<Vec<Fel>> {
        self.check_subfield_degree(n)?;
        Ok(self
            .elements()
            .filter(|&a| self.frobenius(a, n) == a)
            .collect())
    }

    /// Smallest element of the subfield GF(2^n) generating its
    /// multiplicative group.
    pub fn subfield_generator(&self, n: u32) -> Result<Fel> {
        let target = (1u32 << n) - 1;
        for a in self.subfield_elements(n)? {
            if !a.is_zero() && self.multiplicative_order(a)? == target {
                return Ok(a);
            }
        }
        unreachable!("GF(2^{n})^* is cyclic")
    }

    pub fn in_subfield(&self, a: Fel, n: u32) -> bool {
        self.contains(a) && n > 0 && self.degree.is_multiple_of(n) && self.frobenius(a, n) == a
    }

    pub fn check_subfield_degree(&self, n: u32) -> Result<()> {
        if n == 0 || !self.degree.is_multiple_of(n) {
            return Err(Error::NotASubfield { n, m: self.degree });
        }
        Ok(())
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {}", self.degree, format_hex(self.modulus))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

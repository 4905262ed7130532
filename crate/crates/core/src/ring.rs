//! Coefficient rings.
//!
//! Rings are context objects: the element type carries no modulus, the ring
//! value does. This lets one code path serve ℤ, ℚ, ℤ/m and finite fields
//! whose characteristic is only known at run time.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

// `from_*` methods take the ring as context.
#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// 0 for rings of characteristic zero.
    fn characteristic(&self) -> u64;
    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Fields with a canonical representative for each class of `K^× / K^×²`.
pub trait SquareClasses: Field {
    fn square_class_rep(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

impl SquareClasses for Rationals {
    /// Square-free integer with sign.
    fn square_class_rep(&self, a: &BigRational) -> Result<BigRational> {
        let n = arith::integer_in_square_class(a);
        Ok(BigRational::from_integer(arith::squarefree_part(&n)?))
    }
}

/// ℤ/m for `2 ≤ m < 2^32`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegersMod {
    modulus: u64,
}

impl IntegersMod {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..1 << 32).contains(&modulus) {
            return Err(Error::InvalidArgument(format!("modulus {modulus} out of range")));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl Ring for IntegersMod {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.modulus
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap_or(0)
    }
    fn characteristic(&self) -> u64 {
        self.modulus
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Element of 𝔽_{p^e}: coefficients of a polynomial of degree `< e` in the
/// generator, lowest degree first.
pub type GfElem = Vec<u64>;

/// The finite field 𝔽_{p^e} = 𝔽_p[x]/(f) for a monic irreducible `f`.
///
/// Requires `p < 2^31` and `p^e < 2^40` so that elements can be indexed and
/// enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisField {
    p: u64,
    e: u32,
    /// Monic, lowest degree first, length `e + 1`.
    modulus: Vec<u64>,
}

impl GaloisField {
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// 𝔽_{p^e} with the lexicographically least monic irreducible modulus.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::check_params(p, e)?;
        if e == 1 {
            return Ok(Self { p, e, modulus: vec![0, 1] });
        }
        let count = p.pow(e);
        for idx in 0..count {
            let mut f = digits(idx, p, e as usize);
            f.push(1);
            if poly_is_irreducible(&f, p) {
                return Ok(Self { p, e, modulus: f });
            }
        }
        Err(Error::Internal(format!("no irreducible polynomial of degree {e} over F_{p}")))
    }

    /// 𝔽_{p^e} with an explicit modulus (monic, lowest degree first).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidArgument("modulus must be monic of degree ≥ 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        Self::check_params(p, e)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument("modulus coefficients must be reduced mod p".into()));
        }
        if !poly_is_irreducible(&modulus, p) {
            return Err(Error::InvalidArgument("modulus is not irreducible".into()));
        }
        Ok(Self { p, e, modulus })
    }

    fn check_params(p: u64, e: u32) -> Result<()> {
        if p >= 1 << 31 || !arith::is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not a supported prime")));
        }
        if e == 0 || (p as f64).powi(e as i32) >= (1u64 << 40) as f64 {
            return Err(Error::InvalidArgument(format!("field size {p}^{e} out of range")));
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// The element with base-p digit expansion `index`.
    pub fn element(&self, index: u64) -> GfElem {
        digits(index, self.p, self.e as usize)
    }

    pub fn index_of(&self, a: &GfElem) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn pow(&self, a: &GfElem, mut exp: u64) -> GfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Squares test; every element is a square in characteristic 2.
    pub fn is_square(&self, a: &GfElem) -> bool {
        if self.p == 2 || self.is_zero(a) {
            return true;
        }
        self.pow(a, (self.order() - 1) / 2) == self.one()
    }

    /// The non-square of least index (odd characteristic only).
    pub fn least_nonsquare(&self) -> Option<GfElem> {
        if self.p == 2 {
            return None;
        }
        (1..self.order()).map(|i| self.element(i)).find(|a| !self.is_square(a))
    }

    /// Absolute trace to the prime field, `Σ_{k<e} a^{p^k}`.
    pub fn trace(&self, a: &GfElem) -> u64 {
        let mut acc = self.zero();
        let mut term = a.clone();
        for _ in 0..self.e {
            acc = self.add(&acc, &term);
            term = self.pow(&term, self.p);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }

    /// Embeds an element of the prime field.
    pub fn constant(&self, c: u64) -> GfElem {
        let mut v = vec![0; self.e as usize];
        v[0] = c % self.p;
        v
    }
}

impl Ring for GaloisField {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        vec![0; self.e as usize]
    }
    fn one(&self) -> GfElem {
        self.constant(1)
    }
    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn neg(&self, a: &GfElem) -> GfElem {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }
    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let p = self.p;
        let e = self.e as usize;
        if e == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..e].iter().enumerate() {
                let t = c * m % p;
                prod[k - e + i] = (prod[k - e + i] + p - t) % p;
            }
            prod[k] = 0;
        }
        prod.truncate(e);
        prod
    }
    fn is_zero(&self, a: &GfElem) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn from_int(&self, n: &BigInt) -> GfElem {
        let c = n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap_or(0);
        self.constant(c)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn render(&self, a: &GfElem) -> String {
        if self.e == 1 {
            a[0].to_string()
        } else {
            format!("{a:?}")
        }
    }
}

impl Field for GaloisField {
    fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.e == 1 {
            return Some(vec![arith::pow_mod(a[0], self.p - 2, self.p)]);
        }
        Some(self.pow(a, self.order() - 2))
    }
}

impl SquareClasses for GaloisField {
    /// `1` or the least non-square; `1` always in characteristic 2.
    fn square_class_rep(&self, a: &GfElem) -> Result<GfElem> {
        if self.is_zero(a) {
            return Err(Error::Singular);
        }
        if self.is_square(a) {
            Ok(self.one())
        } else {
            Ok(self.least_nonsquare().expect("odd characteristic"))
        }
    }
}

fn digits(mut index: u64, p: u64, len: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(index % p);
        index /= p;
    }
    v
}

/// Remainder of `f` modulo the monic `g` over 𝔽_p.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (i, &gi) in g.iter().enumerate() {
                let t = c * gi % p;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut g = digits(idx, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Maps a rational into a finite field, if its denominator is invertible there.
pub fn rational_into_field(field: &GaloisField, x: &BigRational) -> Result<GfElem> {
    let r = arith::reduce_rational_mod(x, field.p())?;
    Ok(field.constant(r))
}

/// Maps a rational to an integer, if it is one.
pub fn rational_to_integer(x: &BigRational) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::Coefficients(format!("{x} is not an integer")))
    }
}

/// Sign of a nonzero rational.
pub fn is_positive(x: &BigRational) -> bool {
    x.is_positive()
}

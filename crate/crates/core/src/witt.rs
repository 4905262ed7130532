//! Witt groups of ℝ, finite fields, ℚ_p and ℚ through complete invariants.
//!
//! Classes over ℚ_p are stored as the (dimension, determinant, Hasse
//! invariant) of their anisotropic kernel, with determinant and Hasse
//! invariant computed from square-class representatives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::abelian::FgAbelianGroup;
use crate::arith;
use crate::error::{Error, Result};
use crate::forms::SymBilForm;
use crate::ring::{GaloisField, Rationals, Ring};

/// A completion of ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "R" => Ok(Place::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place {s}")))?;
                if !arith::is_prime(p) {
                    return Err(Error::InvalidArgument(format!("{p} is not prime")));
                }
                Ok(Place::Prime(p))
            }
        }
    }
}

/// Fields whose Witt groups are computed here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Q,
    R,
    Qp(u64),
    Fq(u64, u32),
}

impl FieldDesc {
    pub fn finite_field(&self) -> Result<GaloisField> {
        match *self {
            FieldDesc::Fq(p, e) => GaloisField::new(p, e),
            _ => Err(Error::InvalidArgument("not a finite field".into())),
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FieldDesc::Q => write!(f, "Q"),
            FieldDesc::R => write!(f, "R"),
            FieldDesc::Qp(p) => write!(f, "Q_{p}"),
            FieldDesc::Fq(p, 1) => write!(f, "F_{p}"),
            FieldDesc::Fq(p, e) => write!(f, "F_{p}^{e}"),
        }
    }
}

/// Accepts `Q`, `R`, `Q_p` (or `Qp`), `F_p`, `F_p^e` and `GF(p^e)`.
impl FromStr for FieldDesc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown field {s}"));
        let prime = |t: &str| -> Result<u64> {
            let p: u64 = t.parse().map_err(|_| bad())?;
            if arith::is_prime(p) {
                Ok(p)
            } else {
                Err(Error::InvalidArgument(format!("{p} is not prime")))
            }
        };
        let pe = |t: &str| -> Result<(u64, u32)> {
            match t.split_once('^') {
                Some((p, e)) => Ok((prime(p)?, e.parse().map_err(|_| bad())?)),
                None => Ok((prime(t)?, 1)),
            }
        };
        match s {
            "Q" | "ℚ" => return Ok(FieldDesc::Q),
            "R" | "ℝ" => return Ok(FieldDesc::R),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
            let (p, e) = pe(inner)?;
            return Ok(FieldDesc::Fq(p, e));
        }
        if let Some(t) = s.strip_prefix("Q_").or_else(|| s.strip_prefix('Q')) {
            return Ok(FieldDesc::Qp(prime(t)?));
        }
        if let Some(t) = s.strip_prefix("F_").or_else(|| s.strip_prefix('F')) {
            let (p, e) = pe(t)?;
            return Ok(FieldDesc::Fq(p, e));
        }
        Err(bad())
    }
}

// ---------------------------------------------------------------------------
// Hilbert symbols

fn mod8(u: &BigInt) -> u8 {
    u.mod_floor(&BigInt::from(8)).to_u8().expect("residue")
}

/// Hilbert symbol of two nonzero integers.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, place: Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = arith::split_valuation(a, 2);
            let (beta, v) = arith::split_valuation(b, 2);
            let (u8_, v8) = (mod8(&u), mod8(&v));
            let eps = |x: u8| ((x - 1) / 2) % 2;
            let omega = |x: u8| ((x as u32 * x as u32 - 1) / 8 % 2) as u8;
            let e = eps(u8_) * eps(v8) + (alpha % 2) as u8 * omega(v8) + (beta % 2) as u8 * omega(u8_);
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = arith::split_valuation(a, p);
            let (beta, v) = arith::split_valuation(b, p);
            let mut s: i8 = 1;
            if (alpha as u64 * beta as u64 * ((p - 1) / 2)) % 2 == 1 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= arith::legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= arith::legendre(&v, p);
            }
            s
        }
    }
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> i8 {
    hilbert_symbol_int(&arith::integer_in_square_class(a), &arith::integer_in_square_class(b), place)
}

/// `∏_{i<j} (aᵢ, aⱼ)_v`.
pub fn hasse_invariant(entries: &[BigRational], place: Place) -> i8 {
    let ints: Vec<BigInt> = entries.iter().map(arith::integer_in_square_class).collect();
    let mut s = 1;
    for i in 0..ints.len() {
        for j in i + 1..ints.len() {
            s *= hilbert_symbol_int(&ints[i], &ints[j], place);
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Square classes of ℚ_p

/// Representatives of `ℚ_p^× / ℚ_p^×²`: `{1, ns, p, p·ns}` for odd `p`
/// (with `ns` the least non-residue) and `{±1, ±2, ±5, ±10}` for `p = 2`.
pub fn local_square_classes(p: u64) -> Vec<i64> {
    if p == 2 {
        vec![1, -1, 2, -2, 5, -5, 10, -10]
    } else {
        let ns = arith::least_nonresidue(p) as i64;
        let p = p as i64;
        vec![1, ns, p, p * ns]
    }
}

/// The representative of the ℚ_p square class of a nonzero integer.
pub fn local_square_class_int(a: &BigInt, p: u64) -> i64 {
    let (v, u) = arith::split_valuation(a, p);
    let unit: i64 = if p == 2 {
        match mod8(&u) {
            1 => 1,
            3 => -5,
            5 => 5,
            7 => -1,
            _ => unreachable!("odd unit"),
        }
    } else if arith::legendre(&u, p) == 1 {
        1
    } else {
        arith::least_nonresidue(p) as i64
    };
    if v % 2 == 1 {
        unit * p as i64
    } else {
        unit
    }
}

pub fn local_square_class(a: &BigRational, p: u64) -> i64 {
    local_square_class_int(&arith::integer_in_square_class(a), p)
}

fn sq_mul(p: u64, a: i64, b: i64) -> i64 {
    local_square_class_int(&(BigInt::from(a) * BigInt::from(b)), p)
}

fn hilb(p: u64, a: i64, b: i64) -> i8 {
    hilbert_symbol_int(&BigInt::from(a), &BigInt::from(b), Place::Prime(p))
}

/// An element of W(ℚ_p): the anisotropic kernel's dimension, determinant
/// class and Hasse invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClass {
    pub p: u64,
    pub dim: u8,
    pub det: i64,
    pub hasse: i8,
}

impl LocalClass {
    pub fn zero(p: u64) -> Self {
        Self { p, dim: 0, det: 1, hasse: 1 }
    }

    /// Invariants of a (possibly isotropic) diagonal form, then reduced.
    pub fn from_diagonal(entries: &[BigRational], p: u64) -> Self {
        let classes: Vec<i64> = entries.iter().map(|a| local_square_class(a, p)).collect();
        Self::from_classes(&classes, p)
    }

    fn from_classes(classes: &[i64], p: u64) -> Self {
        let mut det = 1;
        let mut hasse = 1;
        for &a in classes {
            hasse *= hilb(p, det, a);
            det = sq_mul(p, det, a);
        }
        Self::reduce(p, classes.len(), det, hasse)
    }

    fn isotropic(p: u64, n: usize, d: i64, e: i8) -> bool {
        let minus_d = sq_mul(p, -1, d);
        match n {
            0 | 1 => false,
            2 => d == local_square_class_int(&BigInt::from(-1), p),
            3 => e == hilb(p, -1, minus_d),
            4 => d != 1 || e == hilb(p, -1, -1),
            _ => true,
        }
    }

    /// Splits off hyperbolic planes: `(n, d, ε) ↦ (n-2, -d, ε·(-1, -d))`.
    fn reduce(p: u64, mut n: usize, mut d: i64, mut e: i8) -> Self {
        while Self::isotropic(p, n, d, e) {
            let minus_d = sq_mul(p, -1, d);
            e *= hilb(p, -1, minus_d);
            d = minus_d;
            n -= 2;
        }
        Self { p, dim: n as u8, det: d, hasse: e }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "classes over different fields");
        let p = self.p;
        let n = self.dim as usize + other.dim as usize;
        let d = sq_mul(p, self.det, other.det);
        let e = self.hasse * other.hasse * hilb(p, self.det, other.det);
        Self::reduce(p, n, d, e)
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// `(-1)^{n(n-1)/2}·det`, the signed discriminant class.
    pub fn discriminant(&self) -> i64 {
        let n = self.dim as usize;
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            sq_mul(self.p, -1, self.det)
        } else {
            self.det
        }
    }

    /// A diagonal form over square-class representatives in this class.
    pub fn representative(&self) -> Vec<i64> {
        let reps = local_square_classes(self.p);
        let n = self.dim as usize;
        let mut idx = vec![0usize; n];
        loop {
            let classes: Vec<i64> = idx.iter().map(|&i| reps[i]).collect();
            if Self::from_classes(&classes, self.p) == *self {
                return classes;
            }
            let mut k = 0;
            loop {
                if k == n {
                    unreachable!("every anisotropic class has a diagonal representative");
                }
                idx[k] += 1;
                if idx[k] < reps.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// All elements of W(ℚ_p), from diagonal forms of rank ≤ 4 over square-class
/// representatives.
pub fn enumerate_local_witt(p: u64) -> Vec<LocalClass> {
    let reps = local_square_classes(p);
    let mut seen = BTreeSet::new();
    fn rec(p: u64, reps: &[i64], prefix: &mut Vec<i64>, seen: &mut BTreeSet<LocalClass>) {
        seen.insert(LocalClass::from_classes(prefix, p));
        if prefix.len() == 4 {
            return;
        }
        let start = prefix.last().map_or(0, |last| reps.iter().position(|r| r == last).unwrap());
        for i in start..reps.len() {
            prefix.push(reps[i]);
            rec(p, reps, prefix, seen);
            prefix.pop();
        }
    }
    rec(p, &reps, &mut Vec::new(), &mut seen);
    seen.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Finite fields

/// An element of W(𝔽_q): rank parity and, for odd `q`, whether the signed
/// discriminant is a non-square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteClass {
    pub p: u64,
    pub e: u32,
    pub parity: u8,
    pub nonsquare_disc: bool,
}

impl FiniteClass {
    pub fn zero(p: u64, e: u32) -> Self {
        Self { p, e, parity: 0, nonsquare_disc: false }
    }

    fn order(&self) -> u64 {
        self.p.pow(self.e)
    }

    fn minus_one_nonsquare(&self) -> bool {
        self.p != 2 && self.order() % 4 == 3
    }

    /// The class of `⟨a⟩` for a nonzero `a`.
    pub fn rank_one(field: &GaloisField, a: &[u64]) -> Self {
        Self {
            p: field.p(),
            e: field.degree(),
            parity: 1,
            nonsquare_disc: !field.is_square(&a.to_vec()),
        }
    }

    /// `d(f ⊕ g) = d(f)·d(g)·(-1)^{rs}` for rank parities `r`, `s`.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.e), (other.p, other.e), "classes over different fields");
        let twist = self.parity == 1 && other.parity == 1 && self.minus_one_nonsquare();
        Self {
            p: self.p,
            e: self.e,
            parity: (self.parity + other.parity) % 2,
            nonsquare_disc: self.nonsquare_disc ^ other.nonsquare_disc ^ twist,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parity == 0 && !self.nonsquare_disc
    }

    pub fn all(p: u64, e: u32) -> Vec<Self> {
        let discs: &[bool] = if p == 2 { &[false] } else { &[false, true] };
        let mut out = Vec::new();
        for parity in 0..2 {
            for &nonsquare_disc in discs {
                out.push(Self { p, e, parity, nonsquare_disc });
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Witt classes

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WittClass {
    Real { signature: i64 },
    Finite(FiniteClass),
    PAdic(LocalClass),
    /// Signature and the nonzero second residues; complete by Milnor's
    /// exact sequence.
    Rational { signature: i64, residues: BTreeMap<u64, FiniteClass> },
}

impl WittClass {
    pub fn field(&self) -> FieldDesc {
        match self {
            WittClass::Real { .. } => FieldDesc::R,
            WittClass::Finite(c) => FieldDesc::Fq(c.p, c.e),
            WittClass::PAdic(c) => FieldDesc::Qp(c.p),
            WittClass::Rational { .. } => FieldDesc::Q,
        }
    }

    pub fn zero(field: FieldDesc) -> Self {
        match field {
            FieldDesc::R => WittClass::Real { signature: 0 },
            FieldDesc::Fq(p, e) => WittClass::Finite(FiniteClass::zero(p, e)),
            FieldDesc::Qp(p) => WittClass::PAdic(LocalClass::zero(p)),
            FieldDesc::Q => WittClass::Rational { signature: 0, residues: BTreeMap::new() },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            WittClass::Real { signature } => *signature == 0,
            WittClass::Finite(c) => c.is_zero(),
            WittClass::PAdic(c) => c.is_zero(),
            WittClass::Rational { signature, residues } => *signature == 0 && residues.is_empty(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (WittClass::Real { signature: a }, WittClass::Real { signature: b }) => {
                Ok(WittClass::Real { signature: a + b })
            }
            (WittClass::Finite(a), WittClass::Finite(b)) if (a.p, a.e) == (b.p, b.e) => {
                Ok(WittClass::Finite(a.add(b)))
            }
            (WittClass::PAdic(a), WittClass::PAdic(b)) if a.p == b.p => Ok(WittClass::PAdic(a.add(b))),
            (
                WittClass::Rational { signature: s1, residues: r1 },
                WittClass::Rational { signature: s2, residues: r2 },
            ) => {
                let mut residues = r1.clone();
                for (p, c) in r2 {
                    let sum = residues.get(p).map_or(*c, |d| d.add(c));
                    if sum.is_zero() {
                        residues.remove(p);
                    } else {
                        residues.insert(*p, sum);
                    }
                }
                Ok(WittClass::Rational { signature: s1 + s2, residues })
            }
            _ => Err(Error::Coefficients("Witt classes over different fields".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        let invariants = match self {
            WittClass::Real { signature } => json!({"signature": signature}),
            WittClass::Finite(c) => {
                if c.p == 2 {
                    json!({"rank_mod_2": c.parity})
                } else {
                    json!({"rank_mod_2": c.parity, "disc": if c.nonsquare_disc { "nonsquare" } else { "square" }})
                }
            }
            WittClass::PAdic(c) => json!({
                "rank_mod_2": c.dim % 2,
                "disc": c.discriminant(),
                "hasse": c.hasse,
                "anisotropic_rank": c.dim,
            }),
            WittClass::Rational { signature, residues } => {
                let res: serde_json::Map<String, Value> = residues
                    .iter()
                    .map(|(p, c)| (p.to_string(), WittClass::Finite(*c).to_json()))
                    .collect();
                json!({"signature": signature, "residues": res})
            }
        };
        json!({"field": self.field().to_string(), "invariants": invariants})
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WittClass::Real { signature } => write!(f, "W(R): signature {signature}"),
            WittClass::Finite(c) if c.p == 2 => write!(f, "W({}): rank {} mod 2", self.field(), c.parity),
            WittClass::Finite(c) => write!(
                f,
                "W({}): rank {} mod 2, disc {}",
                self.field(),
                c.parity,
                if c.nonsquare_disc { "nonsquare" } else { "square" }
            ),
            WittClass::PAdic(c) => write!(
                f,
                "W(Q_{}): anisotropic rank {}, disc {}, Hasse {}",
                c.p,
                c.dim,
                c.discriminant(),
                c.hasse
            ),
            WittClass::Rational { signature, residues } => {
                write!(f, "W(Q): signature {signature}")?;
                for (p, c) in residues {
                    write!(f, "; ∂_{p} = [{}]", WittClass::Finite(*c))?;
                }
                Ok(())
            }
        }
    }
}

/// Witt class of a symmetric form over a finite field.
pub fn witt_class_finite(f: &SymBilForm<GaloisField>) -> Result<FiniteClass> {
    if f.epsilon() != 1 {
        return Err(Error::InvalidArgument("Witt classes are computed for symmetric forms".into()));
    }
    let field = f.ring();
    if !f.is_nondegenerate() {
        return Err(Error::Singular);
    }
    let parity = (f.rank() % 2) as u8;
    let nonsquare_disc = if field.p() == 2 { false } else { f.discriminant()? != field.one() };
    Ok(FiniteClass { p: field.p(), e: field.degree(), parity, nonsquare_disc })
}

/// Witt class of a symmetric form over ℚ in the Witt group of `field`.
///
/// For a finite field the Gram matrix is reduced modulo `p`, which needs
/// the entries to be `p`-integral.
pub fn witt_class(f: &SymBilForm<Rationals>, field: FieldDesc) -> Result<WittClass> {
    if f.epsilon() != 1 {
        return Err(Error::InvalidArgument("Witt classes are computed for symmetric forms".into()));
    }
    match field {
        FieldDesc::Fq(p, e) => {
            let gf = GaloisField::new(p, e)?;
            Ok(WittClass::Finite(witt_class_finite(&f.reduce_mod(&gf)?)?))
        }
        FieldDesc::R => Ok(WittClass::Real { signature: f.signature()? }),
        FieldDesc::Qp(p) => {
            let (entries, _) = f.diagonalize()?;
            Ok(WittClass::PAdic(LocalClass::from_diagonal(&entries, p)))
        }
        FieldDesc::Q => {
            let (signature, residues) = witt_q_decompose(f)?;
            Ok(WittClass::Rational { signature, residues })
        }
    }
}

pub fn witt_group_structure(field: FieldDesc) -> Result<FgAbelianGroup> {
    match field {
        FieldDesc::Q => Err(Error::RationalWittGroup),
        FieldDesc::R => Ok(FgAbelianGroup::free(1)),
        FieldDesc::Fq(p, e) => {
            GaloisField::new(p, e)?;
            let elems = FiniteClass::all(p, e);
            let orders: Vec<u64> = elems.iter().map(|c| element_order(c, |a, b| a.add(b), FiniteClass::is_zero)).collect();
            FgAbelianGroup::from_element_orders(&orders)
        }
        FieldDesc::Qp(p) => {
            let elems = enumerate_local_witt(p);
            let orders: Vec<u64> = elems.iter().map(|c| element_order(c, |a, b| a.add(b), LocalClass::is_zero)).collect();
            FgAbelianGroup::from_element_orders(&orders)
        }
    }
}

fn element_order<T: Clone>(x: &T, add: impl Fn(&T, &T) -> T, is_zero: impl Fn(&T) -> bool) -> u64 {
    let mut acc = x.clone();
    let mut k = 1;
    while !is_zero(&acc) {
        acc = add(&acc, x);
        k += 1;
    }
    k
}

/// Second residue `∂_p` of a diagonal form over ℚ with respect to the
/// uniformizer `π` (default `p`): `⟨π^{2k+1}u⟩ ↦ ⟨ū⟩`, `⟨π^{2k}u⟩ ↦ 0`.
pub fn second_residue(entries: &[BigRational], p: u64, uniformizer: Option<&BigRational>) -> Result<FiniteClass> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let default_pi = BigRational::from_integer(BigInt::from(p));
    let pi = uniformizer.unwrap_or(&default_pi);
    if pi.is_zero() || arith::rational_valuation(pi, p) != 1 {
        return Err(Error::InvalidArgument(format!("{pi} is not a uniformizer at {p}")));
    }
    let field = GaloisField::prime(p)?;
    let mut acc = FiniteClass::zero(p, 1);
    for a in entries {
        if a.is_zero() {
            return Err(Error::Singular);
        }
        let v = arith::rational_valuation(a, p);
        if v.rem_euclid(2) == 1 {
            let mut unit = a.clone();
            let k = v.unsigned_abs() as usize;
            let pik = num_traits::pow(pi.clone(), k);
            if v > 0 {
                unit /= pik;
            } else {
                unit *= pik;
            }
            let ubar = crate::ring::rational_into_field(&field, &unit)?;
            acc = acc.add(&FiniteClass::rank_one(&field, &ubar));
        }
    }
    Ok(acc)
}

/// Signature and all nonzero second residues of a form over ℚ.
pub fn witt_q_decompose(f: &SymBilForm<Rationals>) -> Result<(i64, BTreeMap<u64, FiniteClass>)> {
    let (entries, _) = f.diagonalize()?;
    let signature = entries.iter().map(|a| if a.is_positive() { 1 } else { -1 }).sum();
    let mut primes = BTreeSet::new();
    let mut reduced = Vec::with_capacity(entries.len());
    for a in &entries {
        let s = arith::squarefree_part(&arith::integer_in_square_class(a))?;
        primes.extend(arith::prime_divisors(&s)?);
        reduced.push(BigRational::from_integer(s));
    }
    let mut residues = BTreeMap::new();
    for p in primes {
        let c = second_residue(&reduced, p, None)?;
        if !c.is_zero() {
            residues.insert(p, c);
        }
    }
    Ok((signature, residues))
}

/// Kernel of `∂_p : W(ℚ_p) → W(𝔽_p)`, the image of W(ℤ_p).
pub fn integral_kernel_order(p: u64) -> Result<FgAbelianGroup> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let kernel: Vec<LocalClass> = enumerate_local_witt(p)
        .into_iter()
        .filter(|c| {
            let entries: Vec<BigRational> = c.representative().into_iter().map(|a| BigRational::from_integer(a.into())).collect();
            second_residue(&entries, p, None).map(|r| r.is_zero()).unwrap_or(false)
        })
        .collect();
    let orders: Vec<u64> = kernel.iter().map(|c| element_order(c, |a, b| a.add(b), LocalClass::is_zero)).collect();
    FgAbelianGroup::from_element_orders(&orders)
}

/// Every generator `⟨u⟩` of W(𝔽_p) arises as `∂_p⟨p·u⟩`.
pub fn residue_of_uniformizer_multiple(u: i64, p: u64) -> Result<FiniteClass> {
    let a = BigRational::from_integer(BigInt::from(u) * BigInt::from(p));
    second_residue(&[a], p, None)
}

/// The product of `(a, b)_v` over all places dividing `2ab` and ∞.
pub fn hilbert_product(a: &BigRational, b: &BigRational) -> Result<i8> {
    let ia = arith::integer_in_square_class(a);
    let ib = arith::integer_in_square_class(b);
    let mut places = BTreeSet::from([2u64]);
    places.extend(arith::prime_divisors(&ia)?);
    places.extend(arith::prime_divisors(&ib)?);
    let mut s = hilbert_symbol_int(&ia, &ib, Place::Infinity);
    for p in places {
        s *= hilbert_symbol_int(&ia, &ib, Place::Prime(p));
    }
    Ok(s)
}

/// Rationals from small integers.
pub fn rationals(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

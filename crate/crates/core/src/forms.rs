//! ε-symmetric bilinear and ε-quadratic forms given by Gram data.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::abelian::smith_normal_form;
use crate::error::{Error, Result};
use crate::linalg::{
    self, bilinear, block_sum, congruence, determinant, identity, int_determinant, Matrix,
};
use crate::ring::{Field, GaloisField, Integers, IntegersMod, Rationals, Ring, SquareClasses};

/// A coefficient domain with its JSON encoding.
pub trait Domain: Ring {
    fn domain_json(&self) -> Value;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(Error::Parse(format!("expected a number, got {v}"))),
    };
    let bad = || Error::Parse(format!("bad rational {s}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(&s).map_err(|_| bad())?)),
    }
}

fn big_json(n: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&n.to_string()).expect("integer literal"))
}

impl Domain for Rationals {
    fn domain_json(&self) -> Value {
        json!("Q")
    }
    fn elem_to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            big_json(&a.to_integer())
        } else {
            json!(a.to_string())
        }
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        parse_rational(v)
    }
}

impl Domain for Integers {
    fn domain_json(&self) -> Value {
        json!("Z")
    }
    fn elem_to_json(&self, a: &BigInt) -> Value {
        big_json(a)
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigInt> {
        let q = parse_rational(v)?;
        if !q.is_integer() {
            return Err(Error::Parse(format!("{q} is not an integer")));
        }
        Ok(q.to_integer())
    }
}

impl Domain for IntegersMod {
    fn domain_json(&self) -> Value {
        json!(format!("Z/{}", self.modulus()))
    }
    fn elem_to_json(&self, a: &u64) -> Value {
        json!(a)
    }
    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        let z = Integers.elem_from_json(v)?;
        Ok(self.from_int(&z))
    }
}

impl Domain for GaloisField {
    fn domain_json(&self) -> Value {
        if self.degree() == 1 {
            json!(format!("GF({})", self.p()))
        } else {
            json!({"finite_field": {"p": self.p(), "e": self.degree(), "modulus": self.modulus()}})
        }
    }
    fn elem_to_json(&self, a: &Vec<u64>) -> Value {
        if self.degree() == 1 {
            json!(a[0])
        } else {
            json!(a)
        }
    }
    fn elem_from_json(&self, v: &Value) -> Result<Vec<u64>> {
        match v {
            Value::Array(cs) => {
                if cs.len() > self.degree() as usize {
                    return Err(Error::Parse("too many coefficients".into()));
                }
                let mut out = self.zero();
                for (i, c) in cs.iter().enumerate() {
                    let z = Integers.elem_from_json(c)?;
                    out[i] = self.from_int(&z)[0];
                }
                Ok(out)
            }
            _ => {
                let q = parse_rational(v)?;
                crate::ring::rational_into_field(self, &q)
            }
        }
    }
}

/// The coefficient domains a form may live over.
#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientDomain {
    Rationals,
    Integers,
    FiniteField(GaloisField),
    IntegersMod(IntegersMod),
}

impl CoefficientDomain {
    pub fn to_json(&self) -> Value {
        match self {
            Self::Rationals => Rationals.domain_json(),
            Self::Integers => Integers.domain_json(),
            Self::FiniteField(f) => f.domain_json(),
            Self::IntegersMod(m) => m.domain_json(),
        }
    }

    /// Accepts `"Q"`, `"Z"`, `"GF(p)"`, `"GF(p^e)"`, `"Z/m"`, or the object
    /// forms `{"finite_field": {"p", "e", "modulus"?}}` and
    /// `{"integers_mod": m}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::from_str(s),
            Value::Object(o) => {
                if let Some(ff) = o.get("finite_field") {
                    let p = ff.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Parse("finite_field.p".into()))?;
                    let e = ff.get("e").and_then(Value::as_u64).unwrap_or(1) as u32;
                    let field = match ff.get("modulus") {
                        Some(m) => {
                            let coeffs: Vec<u64> = serde_json::from_value(m.clone())
                                .map_err(|e| Error::Parse(format!("modulus: {e}")))?;
                            let f = GaloisField::with_modulus(p, coeffs)?;
                            if f.degree() != e {
                                return Err(Error::Parse("modulus degree differs from e".into()));
                            }
                            f
                        }
                        None => GaloisField::new(p, e)?,
                    };
                    Ok(Self::FiniteField(field))
                } else if let Some(m) = o.get("integers_mod") {
                    let m = m.as_u64().ok_or_else(|| Error::Parse("integers_mod".into()))?;
                    Ok(Self::IntegersMod(IntegersMod::new(m)?))
                } else {
                    Err(Error::Parse(format!("unknown domain {v}")))
                }
            }
            _ => Err(Error::Parse(format!("unknown domain {v}"))),
        }
    }
}

impl FromStr for CoefficientDomain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad domain {s}")));
        match s {
            "Q" | "QQ" | "rationals" | "ℚ" => Ok(Self::Rationals),
            "Z" | "ZZ" | "integers" | "ℤ" => Ok(Self::Integers),
            _ => {
                if let Some(inner) = s.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
                    let (p, e) = match inner.split_once('^') {
                        Some((p, e)) => (num(p)?, num(e)? as u32),
                        None => (num(inner)?, 1),
                    };
                    Ok(Self::FiniteField(GaloisField::new(p, e)?))
                } else if let Some(m) = s.strip_prefix("Z/") {
                    Ok(Self::IntegersMod(IntegersMod::new(num(m)?)?))
                } else {
                    Err(Error::Parse(format!("unknown domain {s}")))
                }
            }
        }
    }
}

fn check_epsilon(epsilon: i8) -> Result<()> {
    if epsilon == 1 || epsilon == -1 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon must be ±1, got {epsilon}")))
    }
}

/// An ε-symmetric bilinear form `b(x, y) = xᵀ·G·y` with `Gᵀ = ε·G`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymBilForm<R: Ring> {
    ring: R,
    epsilon: i8,
    gram: Matrix<R::Elem>,
}

impl<R: Ring> SymBilForm<R> {
    pub fn new(ring: R, epsilon: i8, gram: Matrix<R::Elem>) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !gram.is_square() {
            return Err(Error::Dimension("Gram matrix must be square".into()));
        }
        if !linalg::is_symmetric_up_to(&ring, &gram, epsilon) {
            return Err(Error::InvalidArgument(format!("Gram matrix is not {epsilon}-symmetric")));
        }
        Ok(Self { ring, epsilon, gram })
    }

    pub fn symmetric(ring: R, gram: Matrix<R::Elem>) -> Result<Self> {
        Self::new(ring, 1, gram)
    }

    /// `⟨a₁, …, a_n⟩`.
    pub fn diagonal(ring: R, entries: &[R::Elem]) -> Self {
        let gram = linalg::diagonal(&ring, entries);
        Self { ring, epsilon: 1, gram }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn gram(&self) -> &Matrix<R::Elem> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn eval(&self, x: &[R::Elem], y: &[R::Elem]) -> R::Elem {
        bilinear(&self.ring, &self.gram, x, y)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring || self.epsilon != other.epsilon {
            return Err(Error::Coefficients("orthogonal sum of forms over different data".into()));
        }
        Ok(Self { ring: self.ring.clone(), epsilon: self.epsilon, gram: block_sum(&self.ring, &self.gram, &other.gram) })
    }

    /// The form `x ↦ -b(x, x)`.
    pub fn negate(&self) -> Self {
        Self { ring: self.ring.clone(), epsilon: self.epsilon, gram: self.gram.map(|x| self.ring.neg(x)) }
    }

    /// The form in the basis given by the columns of `u`: `uᵀ·G·u`.
    pub fn transform(&self, u: &Matrix<R::Elem>) -> Result<Self> {
        let gram = congruence(&self.ring, &self.gram, u)?;
        Ok(Self { ring: self.ring.clone(), epsilon: self.epsilon, gram })
    }

    /// Alternating: `ε = -1` with zero diagonal, or in characteristic 2
    /// symmetric with zero diagonal.
    pub fn is_alternating(&self) -> bool {
        let zero_diag = (0..self.rank()).all(|i| self.ring.is_zero(&self.gram[(i, i)]));
        zero_diag && (self.epsilon == -1 || self.ring.characteristic() == 2)
    }

    pub fn to_json(&self) -> Value
    where
        R: Domain,
    {
        json!({
            "domain": self.ring.domain_json(),
            "epsilon": self.epsilon,
            "gram": matrix_json(&self.ring, &self.gram),
        })
    }
}

fn matrix_json<R: Domain>(r: &R, m: &Matrix<R::Elem>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| r.elem_to_json(x)).collect()))
            .collect(),
    )
}

/// Parses a JSON list of rows over the given domain.
pub fn matrix_from_json<R: Domain>(r: &R, v: &Value) -> Result<Matrix<R::Elem>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
    let parsed = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix rows must be lists".into()))?
                .iter()
                .map(|x| r.elem_from_json(x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed).map_err(|e| Error::Parse(e.to_string()))
}

impl<F: Field> SymBilForm<F> {
    pub fn determinant(&self) -> ElemResult<F> {
        determinant(&self.ring, &self.gram)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.determinant().map(|d| !self.ring.is_zero(&d)).unwrap_or(false)
    }

    /// Symmetric Gaussian elimination: returns `(entries, change)` with
    /// `changeᵀ·G·change = diag(entries)`.
    ///
    /// Pivots on the first nonzero diagonal entry; when the remaining
    /// diagonal vanishes, adds the first basis vector pairing nontrivially
    /// with the current one to it.
    pub fn diagonalize(&self) -> Result<Diagonalization<F>> {
        let r = &self.ring;
        if r.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if self.epsilon != 1 {
            return Err(Error::InvalidArgument("diagonalization needs a symmetric form".into()));
        }
        let n = self.rank();
        let mut g = self.gram.clone();
        let mut c = identity(r, n);

        // v_dst += k·v_src, applied as a congruence.
        let add_vec = |g: &mut Matrix<F::Elem>, c: &mut Matrix<F::Elem>, dst: usize, src: usize, k: &F::Elem| {
            for j in 0..n {
                let t = r.mul(k, &g[(src, j)]);
                g[(dst, j)] = r.add(&g[(dst, j)], &t);
            }
            for i in 0..n {
                let t = r.mul(k, &g[(i, src)]);
                g[(i, dst)] = r.add(&g[(i, dst)], &t);
            }
            for i in 0..n {
                let t = r.mul(k, &c[(i, src)]);
                c[(i, dst)] = r.add(&c[(i, dst)], &t);
            }
        };

        for i in 0..n {
            match (i..n).find(|&j| !r.is_zero(&g[(j, j)])) {
                Some(j) => {
                    g.swap_rows(i, j);
                    g.swap_cols(i, j);
                    c.swap_cols(i, j);
                }
                None => {
                    let j = (i + 1..n).find(|&j| !r.is_zero(&g[(i, j)])).ok_or(Error::Singular)?;
                    add_vec(&mut g, &mut c, i, j, &r.one());
                }
            }
            let piv = g[(i, i)].clone();
            if r.is_zero(&piv) {
                return Err(Error::Singular);
            }
            let inv = r.inv(&piv).expect("nonzero pivot");
            for k in i + 1..n {
                if !r.is_zero(&g[(i, k)]) {
                    let q = r.neg(&r.mul(&g[(i, k)], &inv));
                    add_vec(&mut g, &mut c, k, i, &q);
                }
            }
        }
        Ok(((0..n).map(|i| g[(i, i)].clone()).collect(), c))
    }

    /// Basis `(e₁, f₁, e₂, f₂, …)` as columns, with `b(eᵢ, fᵢ) = 1` and all
    /// other pairings zero.
    pub fn symplectic_basis(&self) -> Result<Matrix<F::Elem>> {
        let r = &self.ring;
        let n = self.rank();
        if n % 2 == 1 || !self.is_alternating() {
            return Err(Error::NotAlternating);
        }
        let mut rest: Vec<Vec<F::Elem>> = identity(r, n).to_rows();
        let mut out: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
        while !rest.is_empty() {
            let e = rest.remove(0);
            let j = rest
                .iter()
                .position(|w| !r.is_zero(&self.eval(&e, w)))
                .ok_or(Error::Singular)?;
            let w = rest.remove(j);
            let inv = r.inv(&self.eval(&e, &w)).expect("nonzero pairing");
            let f: Vec<F::Elem> = w.iter().map(|x| r.mul(x, &inv)).collect();
            for w in rest.iter_mut() {
                let wf = self.eval(w, &f);
                let we = self.eval(w, &e);
                for k in 0..n {
                    let t = r.sub(&r.mul(&we, &f[k]), &r.mul(&wf, &e[k]));
                    w[k] = r.add(&w[k], &t);
                }
            }
            out.push(e);
            out.push(f);
        }
        Matrix::from_columns(n, &out)
    }
}

type ElemResult<F> = Result<<F as Ring>::Elem>;

/// Diagonal entries and the change of basis producing them.
pub type Diagonalization<F> = (Vec<<F as Ring>::Elem>, Matrix<<F as Ring>::Elem>);

impl<F: SquareClasses> SymBilForm<F> {
    /// `(-1)^{n(n-1)/2}·det`, as the canonical square-class representative.
    pub fn discriminant(&self) -> Result<F::Elem> {
        let r = &self.ring;
        let n = self.rank();
        let mut d = self.determinant()?;
        if r.is_zero(&d) {
            return Err(Error::Singular);
        }
        if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
            d = r.neg(&d);
        }
        r.square_class_rep(&d)
    }
}

impl SymBilForm<Rationals> {
    pub fn signature(&self) -> Result<i64> {
        let (entries, _) = self.diagonalize()?;
        Ok(entries.iter().map(|a| if a.is_positive() { 1 } else { -1 }).sum())
    }

    /// The Gram matrix reduced into a finite field of characteristic `p`.
    pub fn reduce_mod(&self, field: &GaloisField) -> Result<SymBilForm<GaloisField>> {
        let gram = self.gram.try_map(|x| crate::ring::rational_into_field(field, x))?;
        SymBilForm::new(field.clone(), self.epsilon, gram)
    }
}

impl SymBilForm<Integers> {
    pub fn to_rational(&self) -> SymBilForm<Rationals> {
        SymBilForm { ring: Rationals, epsilon: self.epsilon, gram: linalg::to_rational(&self.gram) }
    }

    pub fn determinant(&self) -> BigInt {
        int_determinant(&self.gram).expect("square")
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn signature(&self) -> Result<i64> {
        self.to_rational().signature()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| (&self.gram[(i, i)] % 2u32).is_zero())
    }
}

impl SymBilForm<IntegersMod> {
    /// Invertibility of the Gram matrix over ℤ/m.
    pub fn is_unimodular(&self) -> bool {
        let lifted = self.gram.map(|&x| BigInt::from(x));
        let det = int_determinant(&lifted).expect("square");
        let m = BigInt::from(self.ring.modulus());
        num_integer::Integer::gcd(&det, &m).is_one()
    }
}

/// An ε-quadratic form `q(x) = xᵀ·Q·x` with `Q` upper triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadForm<R: Ring> {
    ring: R,
    epsilon: i8,
    upper: Matrix<R::Elem>,
}

impl<R: Ring> QuadForm<R> {
    pub fn new(ring: R, epsilon: i8, upper: Matrix<R::Elem>) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !upper.is_square() {
            return Err(Error::Dimension("coefficient matrix must be square".into()));
        }
        for i in 0..upper.rows() {
            for j in 0..i {
                if !ring.is_zero(&upper[(i, j)]) {
                    return Err(Error::InvalidArgument("coefficient matrix must be upper triangular".into()));
                }
            }
        }
        Ok(Self { ring, epsilon, upper })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn upper(&self) -> &Matrix<R::Elem> {
        &self.upper
    }

    pub fn rank(&self) -> usize {
        self.upper.rows()
    }

    pub fn value(&self, x: &[R::Elem]) -> R::Elem {
        bilinear(&self.ring, &self.upper, x, x)
    }

    /// The ε-symmetric form with Gram matrix `Q + ε·Qᵀ`.
    pub fn polarization(&self) -> SymBilForm<R> {
        let r = &self.ring;
        let gram = Matrix::from_fn(self.rank(), self.rank(), |i, j| {
            let t = &self.upper[(j, i)];
            let t = if self.epsilon < 0 { r.neg(t) } else { t.clone() };
            r.add(&self.upper[(i, j)], &t)
        });
        SymBilForm { ring: r.clone(), epsilon: self.epsilon, gram }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring || self.epsilon != other.epsilon {
            return Err(Error::Coefficients("orthogonal sum of forms over different data".into()));
        }
        Ok(Self { ring: self.ring.clone(), epsilon: self.epsilon, upper: block_sum(&self.ring, &self.upper, &other.upper) })
    }

    /// The same quadratic form in the basis given by the columns of `u`,
    /// brought back to upper-triangular shape.
    pub fn transform(&self, u: &Matrix<R::Elem>) -> Result<Self> {
        let r = &self.ring;
        let full = congruence(r, &self.upper, u)?;
        let n = full.rows();
        let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                let t = &full[(j, i)];
                r.add(&full[(i, j)], &if self.epsilon < 0 { r.neg(t) } else { t.clone() })
            }
            std::cmp::Ordering::Equal => full[(i, i)].clone(),
            std::cmp::Ordering::Greater => r.zero(),
        });
        Ok(Self { ring: r.clone(), epsilon: self.epsilon, upper })
    }

    pub fn to_json(&self) -> Value
    where
        R: Domain,
    {
        json!({
            "domain": self.ring.domain_json(),
            "epsilon": self.epsilon,
            "upper": matrix_json(&self.ring, &self.upper),
        })
    }
}

impl QuadForm<GaloisField> {
    /// Arf invariant over 𝔽_{2^e}: `Tr(Σ q(eᵢ)·q(fᵢ))` for a symplectic basis
    /// of the polarization.
    pub fn arf_invariant(&self) -> Result<u8> {
        let f = &self.ring;
        if f.p() != 2 {
            return Err(Error::InvalidArgument("the Arf invariant needs characteristic 2".into()));
        }
        let pol = self.polarization();
        if !pol.is_nondegenerate() {
            return Err(Error::Singular);
        }
        let basis = pol.symplectic_basis()?;
        let mut acc = f.zero();
        for k in 0..self.rank() / 2 {
            let e = basis.column(2 * k);
            let g = basis.column(2 * k + 1);
            acc = f.add(&acc, &f.mul(&self.value(&e), &self.value(&g)));
        }
        Ok(f.trace(&acc) as u8)
    }
}

/// Outcome of a Lagrangian search.
#[derive(Clone, Debug, PartialEq)]
pub enum LagrangianSearch<E> {
    /// Basis of the Lagrangian as columns.
    Found(Matrix<E>),
    /// No Lagrangian exists.
    DoesNotExist,
    /// The box search over ℤ ran out without deciding.
    NotFoundWithinBound,
}

impl<E> LagrangianSearch<E> {
    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found(_))
    }
}

/// Nonzero vectors of 𝔽_q^n with leading nonzero coordinate 1, one per
/// line, in lexicographic order.
fn projective_points(f: &GaloisField, n: usize) -> impl Iterator<Item = Vec<Vec<u64>>> + '_ {
    let q = f.order();
    (0..n).flat_map(move |lead| {
        let tail = n - lead - 1;
        let count = q.pow(tail as u32);
        (0..count).map(move |idx| {
            let mut v = vec![f.zero(); n];
            v[lead] = f.one();
            let mut rest = idx;
            for k in (lead + 1..n).rev() {
                v[k] = f.element(rest % q);
                rest /= q;
            }
            v
        })
    })
}

/// `Σ cᵢ·bᵢ` for coordinates `c` in the basis `b`.
fn combine(f: &GaloisField, basis: &[Vec<Vec<u64>>], c: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = basis.first().map_or(0, |b| b.len());
    let mut v = vec![f.zero(); n];
    for (b, x) in basis.iter().zip(c) {
        if f.is_zero(x) {
            continue;
        }
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi = f.add(vi, &f.mul(x, bi));
        }
    }
    v
}

/// Splits off hyperbolic planes one at a time: the first isotropic point
/// of the current complement (lexicographic in its coordinates), a dual
/// vector, then the orthogonal complement of the plane. Witt cancellation
/// makes this exhaustive; for symmetric forms in characteristic 2 every
/// even-rank complement is metabolic anyway.
fn lagrangian_over_field(
    f: &GaloisField,
    n: usize,
    isotropic: impl Fn(&[Vec<u64>]) -> bool,
    pair: impl Fn(&[Vec<u64>], &[Vec<u64>]) -> Vec<u64>,
) -> Result<LagrangianSearch<Vec<u64>>> {
    if n % 2 == 1 {
        return Err(Error::OddRank(n));
    }
    let mut basis: Vec<Vec<Vec<u64>>> = (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
    let mut chosen: Vec<Vec<Vec<u64>>> = Vec::new();
    while !basis.is_empty() {
        let k = basis.len();
        let Some(v) = projective_points(f, k).map(|c| combine(f, &basis, &c)).find(|v| isotropic(v)) else {
            return Ok(LagrangianSearch::DoesNotExist);
        };
        let (j, s) = basis
            .iter()
            .enumerate()
            .map(|(j, b)| (j, pair(&v, b)))
            .find(|(_, s)| !f.is_zero(s))
            .ok_or_else(|| Error::Internal("degenerate complement".into()))?;
        let s_inv = f.inv(&s).expect("nonzero");
        let w: Vec<Vec<u64>> = basis[j].iter().map(|x| f.mul(x, &s_inv)).collect();
        let constraints = Matrix::from_fn(2, k, |r, c| if r == 0 { pair(&v, &basis[c]) } else { pair(&w, &basis[c]) });
        basis = linalg::kernel(f, &constraints).iter().map(|c| combine(f, &basis, c)).collect();
        if basis.len() != k - 2 {
            return Err(Error::Internal("hyperbolic plane did not split off".into()));
        }
        chosen.push(v);
    }
    Ok(LagrangianSearch::Found(Matrix::from_columns(n, &chosen)?))
}

impl SymBilForm<GaloisField> {
    pub fn find_strict_lagrangian(&self) -> Result<LagrangianSearch<Vec<u64>>> {
        if !self.is_nondegenerate() {
            return Err(Error::Singular);
        }
        let f = &self.ring;
        lagrangian_over_field(f, self.rank(), |v| f.is_zero(&self.eval(v, v)), |v, w| self.eval(v, w))
    }
}

impl QuadForm<GaloisField> {
    pub fn find_strict_lagrangian(&self) -> Result<LagrangianSearch<Vec<u64>>> {
        let pol = self.polarization();
        if !pol.is_nondegenerate() {
            return Err(Error::Singular);
        }
        let f = &self.ring;
        lagrangian_over_field(f, self.rank(), |v| f.is_zero(&self.value(v)), |v, w| pol.eval(v, w))
    }
}

/// Primitive vectors of `[-bound, bound]^n` with positive leading entry.
fn box_vectors(n: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(n as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut v = vec![0i64; n];
        for k in (0..n).rev() {
            v[k] = (rest % side) as i64 - bound;
            rest /= side;
        }
        let Some(lead) = v.iter().find(|&&x| x != 0) else { continue };
        if *lead < 0 {
            continue;
        }
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g == 1 {
            out.push(v.into_iter().map(BigInt::from).collect());
        }
    }
    out
}

/// All elementary divisors equal to 1: the columns span a direct summand
/// (resp. the rows map onto ℤ^rows).
fn all_unit_divisors(m: &Matrix<BigInt>) -> bool {
    let (_, d, _) = smith_normal_form(m);
    (0..m.rows().min(m.cols())).all(|i| d[(i, i)].is_one())
}

fn lagrangian_over_z(
    g: &SymBilForm<Integers>,
    bound: i64,
    isotropic: impl Fn(&[BigInt]) -> bool,
) -> Result<LagrangianSearch<BigInt>> {
    let n = g.rank();
    if n % 2 == 1 {
        return Err(Error::OddRank(n));
    }
    if bound < 0 {
        return Err(Error::InvalidArgument("search bound must be nonnegative".into()));
    }
    let det = g.determinant();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    if !det.abs().is_one() || (g.epsilon() == 1 && g.signature()? != 0) {
        return Ok(LagrangianSearch::DoesNotExist);
    }
    let m = n / 2;
    if m == 0 {
        return Ok(LagrangianSearch::Found(Matrix::filled(0, 0, BigInt::zero())));
    }
    let cands: Vec<Vec<BigInt>> = box_vectors(n, bound).into_iter().filter(|v| isotropic(v)).collect();

    fn dfs(
        g: &SymBilForm<Integers>,
        cands: &[Vec<BigInt>],
        start: usize,
        m: usize,
        chosen: &mut Vec<Vec<BigInt>>,
    ) -> Option<Matrix<BigInt>> {
        let n = g.rank();
        if chosen.len() == m {
            let l = Matrix::from_columns(n, chosen).expect("lengths");
            let dual_map = linalg::mul(&Integers, &l.transpose(), g.gram()).expect("dims");
            return (all_unit_divisors(&l) && all_unit_divisors(&dual_map)).then_some(l);
        }
        for (i, v) in cands.iter().enumerate().skip(start) {
            if chosen.iter().all(|w| g.eval(v, w).is_zero()) {
                chosen.push(v.clone());
                let l = Matrix::from_columns(n, chosen).expect("lengths");
                if all_unit_divisors(&l) {
                    if let Some(found) = dfs(g, cands, i + 1, m, chosen) {
                        return Some(found);
                    }
                }
                chosen.pop();
            }
        }
        None
    }

    Ok(match dfs(g, &cands, 0, m, &mut Vec::new()) {
        Some(l) => LagrangianSearch::Found(l),
        None => LagrangianSearch::NotFoundWithinBound,
    })
}

pub const DEFAULT_SEARCH_BOUND: i64 = 5;

impl SymBilForm<Integers> {
    /// Searches the box `[-bound, bound]^n` for a strict Lagrangian.
    ///
    /// Reports `DoesNotExist` only when the form is not unimodular or, for
    /// symmetric forms, has nonzero signature.
    pub fn find_strict_lagrangian(&self, bound: i64) -> Result<LagrangianSearch<BigInt>> {
        lagrangian_over_z(self, bound, |v| self.eval(v, v).is_zero())
    }
}

impl QuadForm<Integers> {
    pub fn find_strict_lagrangian(&self, bound: i64) -> Result<LagrangianSearch<BigInt>> {
        let pol = self.polarization();
        lagrangian_over_z(&pol, bound, |v| self.value(v).is_zero())
    }
}

/// Named forms.
#[derive(Clone, Debug, PartialEq)]
pub enum StandardKind {
    HyperbolicSym,
    HyperbolicSkew,
    HypQuadArf0,
    HypQuadArf1,
    E8,
    Diag(Vec<BigRational>),
    One(BigRational),
}

pub fn hyperbolic_sym<R: Ring>(r: &R) -> SymBilForm<R> {
    let gram = Matrix::from_fn(2, 2, |i, j| if i != j { r.one() } else { r.zero() });
    SymBilForm { ring: r.clone(), epsilon: 1, gram }
}

pub fn hyperbolic_skew<R: Ring>(r: &R) -> SymBilForm<R> {
    let gram = Matrix::from_rows(vec![vec![r.zero(), r.one()], vec![r.neg(&r.one()), r.zero()]]).expect("2x2");
    SymBilForm { ring: r.clone(), epsilon: -1, gram }
}

/// `q = xy`, skew-quadratic.
pub fn hyp_quad_arf0<R: Ring>(r: &R) -> QuadForm<R> {
    let upper = Matrix::from_rows(vec![vec![r.zero(), r.one()], vec![r.zero(), r.zero()]]).expect("2x2");
    QuadForm { ring: r.clone(), epsilon: -1, upper }
}

/// `q = x² + xy + y²`, skew-quadratic.
pub fn hyp_quad_arf1<R: Ring>(r: &R) -> QuadForm<R> {
    let upper = Matrix::from_rows(vec![vec![r.one(), r.one()], vec![r.zero(), r.one()]]).expect("2x2");
    QuadForm { ring: r.clone(), epsilon: -1, upper }
}

/// Dynkin diagram of E₈: a chain of seven nodes with the eighth node
/// attached to the fifth.
const E8_EDGES: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];

/// The E₈ Gram matrix: 2 on the diagonal, -1 on Dynkin edges.
pub fn e8<R: Ring>(r: &R) -> SymBilForm<R> {
    let two = r.from_i64(2);
    let minus_one = r.from_i64(-1);
    let gram = Matrix::from_fn(8, 8, |i, j| {
        if i == j {
            two.clone()
        } else if E8_EDGES.contains(&(i.min(j), i.max(j))) {
            minus_one.clone()
        } else {
            r.zero()
        }
    });
    SymBilForm { ring: r.clone(), epsilon: 1, gram }
}

/// The symmetric quadratic refinement of E₈: halved diagonal, doubled upper
/// triangle, so that `Q + Qᵀ` is the E₈ Gram matrix.
pub fn e8_quadratic<R: Ring>(r: &R) -> QuadForm<R> {
    let one = r.one();
    let minus_one = r.from_i64(-1);
    let upper = Matrix::from_fn(8, 8, |i, j| {
        if i == j {
            one.clone()
        } else if i < j && E8_EDGES.contains(&(i, j)) {
            minus_one.clone()
        } else {
            r.zero()
        }
    });
    QuadForm { ring: r.clone(), epsilon: 1, upper }
}

/// The diagonal quadratic form `Σ aᵢxᵢ²`.
pub fn diag_quadratic<R: Ring>(r: &R, entries: &[R::Elem], epsilon: i8) -> Result<QuadForm<R>> {
    check_epsilon(epsilon)?;
    if epsilon == -1 {
        // A diagonal Q has polarization Q - Qᵀ = 0.
        return Err(Error::DiagonalSkewQuadratic);
    }
    Ok(QuadForm { ring: r.clone(), epsilon, upper: linalg::diagonal(r, entries) })
}

/// Any form over any supported domain, as read from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyForm {
    SymQ(SymBilForm<Rationals>),
    SymZ(SymBilForm<Integers>),
    SymF(SymBilForm<GaloisField>),
    SymM(SymBilForm<IntegersMod>),
    QuadQ(QuadForm<Rationals>),
    QuadZ(QuadForm<Integers>),
    QuadF(QuadForm<GaloisField>),
    QuadM(QuadForm<IntegersMod>),
}

impl AnyForm {
    /// Parses `{"domain", "epsilon", "gram" | "upper"}`; a bare list of rows
    /// is read as a symmetric form over ℚ.
    pub fn from_json(v: &Value) -> Result<Self> {
        let (domain, epsilon, body, quad) = match v {
            Value::Array(_) => (CoefficientDomain::Rationals, 1, v, false),
            Value::Object(o) => {
                let domain = match o.get("domain") {
                    Some(d) => CoefficientDomain::from_json(d)?,
                    None => CoefficientDomain::Rationals,
                };
                let epsilon = match o.get("epsilon") {
                    None => 1,
                    Some(e) => e.as_i64().filter(|e| *e == 1 || *e == -1).ok_or_else(|| Error::Parse("epsilon must be 1 or -1".into()))? as i8,
                };
                match (o.get("gram"), o.get("upper")) {
                    (Some(g), None) => (domain, epsilon, g, false),
                    (None, Some(u)) => (domain, epsilon, u, true),
                    _ => return Err(Error::Parse("form needs exactly one of \"gram\" and \"upper\"".into())),
                }
            }
            _ => return Err(Error::Parse("form must be a JSON object or a list of rows".into())),
        };
        let wrap = |e: Error| match e {
            Error::InvalidArgument(m) | Error::Dimension(m) | Error::Coefficients(m) => Error::Parse(m),
            other => other,
        };
        let f = match (domain, quad) {
            (CoefficientDomain::Rationals, false) => Self::SymQ(SymBilForm::new(Rationals, epsilon, matrix_from_json(&Rationals, body)?).map_err(wrap)?),
            (CoefficientDomain::Integers, false) => Self::SymZ(SymBilForm::new(Integers, epsilon, matrix_from_json(&Integers, body)?).map_err(wrap)?),
            (CoefficientDomain::FiniteField(f), false) => {
                let m = matrix_from_json(&f, body)?;
                Self::SymF(SymBilForm::new(f, epsilon, m).map_err(wrap)?)
            }
            (CoefficientDomain::IntegersMod(r), false) => {
                let m = matrix_from_json(&r, body)?;
                Self::SymM(SymBilForm::new(r, epsilon, m).map_err(wrap)?)
            }
            (CoefficientDomain::Rationals, true) => Self::QuadQ(QuadForm::new(Rationals, epsilon, matrix_from_json(&Rationals, body)?).map_err(wrap)?),
            (CoefficientDomain::Integers, true) => Self::QuadZ(QuadForm::new(Integers, epsilon, matrix_from_json(&Integers, body)?).map_err(wrap)?),
            (CoefficientDomain::FiniteField(f), true) => {
                let m = matrix_from_json(&f, body)?;
                Self::QuadF(QuadForm::new(f, epsilon, m).map_err(wrap)?)
            }
            (CoefficientDomain::IntegersMod(r), true) => {
                let m = matrix_from_json(&r, body)?;
                Self::QuadM(QuadForm::new(r, epsilon, m).map_err(wrap)?)
            }
        };
        Ok(f)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::SymQ(f) => f.to_json(),
            Self::SymZ(f) => f.to_json(),
            Self::SymF(f) => f.to_json(),
            Self::SymM(f) => f.to_json(),
            Self::QuadQ(f) => f.to_json(),
            Self::QuadZ(f) => f.to_json(),
            Self::QuadF(f) => f.to_json(),
            Self::QuadM(f) => f.to_json(),
        }
    }

    /// The symmetric bilinear form over ℚ underlying a ℚ- or ℤ-form.
    pub fn as_rational_symmetric(&self) -> Result<SymBilForm<Rationals>> {
        match self {
            Self::SymQ(f) => Ok(f.clone()),
            Self::SymZ(f) => Ok(f.to_rational()),
            _ => Err(Error::Coefficients("expected a symmetric bilinear form over Q or Z".into())),
        }
    }
}

/// Builds a named form over a domain.
pub fn standard_form(kind: &StandardKind, domain: &CoefficientDomain) -> Result<AnyForm> {
    macro_rules! build {
        ($r:expr, $sym:ident, $quad:ident) => {{
            let r = $r;
            let conv = |x: &BigRational| -> Result<_> { r.elem_from_json(&json!(x.to_string())) };
            Ok(match kind {
                StandardKind::HyperbolicSym => AnyForm::$sym(hyperbolic_sym(&r)),
                StandardKind::HyperbolicSkew => AnyForm::$sym(hyperbolic_skew(&r)),
                StandardKind::HypQuadArf0 => AnyForm::$quad(hyp_quad_arf0(&r)),
                StandardKind::HypQuadArf1 => AnyForm::$quad(hyp_quad_arf1(&r)),
                StandardKind::E8 => AnyForm::$sym(e8(&r)),
                StandardKind::Diag(xs) => {
                    let es = xs.iter().map(conv).collect::<Result<Vec<_>>>()?;
                    AnyForm::$sym(SymBilForm::diagonal(r.clone(), &es))
                }
                StandardKind::One(a) => AnyForm::$sym(SymBilForm::diagonal(r.clone(), &[conv(a)?])),
            })
        }};
    }
    match domain {
        CoefficientDomain::Rationals => build!(Rationals, SymQ, QuadQ),
        CoefficientDomain::Integers => build!(Integers, SymZ, QuadZ),
        CoefficientDomain::FiniteField(f) => build!(f.clone(), SymF, QuadF),
        CoefficientDomain::IntegersMod(m) => build!(m.clone(), SymM, QuadM),
    }
}

/// Small integers embedded in a field.
pub fn field_ints(f: &GaloisField, xs: &[i64]) -> Vec<Vec<u64>> {
    xs.iter().map(|&x| f.from_i64(x)).collect()
}

/// Converts a small rational literal.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Square classes of the diagonal entries, for display.
pub fn square_classes<F: SquareClasses>(f: &F, entries: &[F::Elem]) -> Result<Vec<F::Elem>> {
    entries.iter().map(|a| f.square_class_rep(a)).collect()
}

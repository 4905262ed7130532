//! Finitely generated abelian groups in invariant-factor form.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{identity, IntMatrix, Matrix};
use crate::ring::Integers;

/// `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `2 ≤ d₁ | d₂ | … | d_k`.
///
/// Equality and hashing ignore the `conditional` flag: two values are equal
/// iff the groups are isomorphic.
#[derive(Clone, Debug, Default)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigUint>,
    conditional: bool,
}

impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }
}

impl Eq for FgAbelianGroup {}

impl Hash for FgAbelianGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.free_rank.hash(state);
        self.invariant_factors.hash(state);
    }
}

/// Rewrites a list of cyclic orders as an invariant-factor chain using only
/// gcd and lcm, so that huge orders never need to be factored.
fn normalize(orders: Vec<BigUint>) -> Vec<BigUint> {
    let mut a: Vec<BigUint> = orders.into_iter().filter(|d| !d.is_one()).collect();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let g = a[i].gcd(&a[j]);
            let l = &a[i] / &g * &a[j];
            a[i] = g;
            a[j] = l;
        }
    }
    a.retain(|d| !d.is_one());
    a
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, ..Self::default() }
    }

    /// `ℤ/n`; `n = 0` gives ℤ and `n = 1` the trivial group.
    pub fn cyclic(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n.is_zero() {
            Self::free(1)
        } else {
            Self::new(0, vec![n])
        }
    }

    /// The group `ℤ^free_rank ⊕ ⊕ ℤ/oᵢ` for arbitrary orders `oᵢ`; an order
    /// of 0 contributes a free summand.
    pub fn new(free_rank: usize, orders: Vec<BigUint>) -> Self {
        let zeros = orders.iter().filter(|d| d.is_zero()).count();
        let finite = orders.into_iter().filter(|d| !d.is_zero()).collect();
        Self { free_rank: free_rank + zeros, invariant_factors: normalize(finite), conditional: false }
    }

    pub fn from_u64s(free_rank: usize, orders: &[u64]) -> Self {
        Self::new(free_rank, orders.iter().map(|&d| BigUint::from(d)).collect())
    }

    /// `(ℤ/n)^k`.
    pub fn elementary(n: u64, k: usize) -> Self {
        Self::from_u64s(0, &vec![n; k])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn is_conditional(&self) -> bool {
        self.conditional
    }

    pub fn with_conditional(mut self, conditional: bool) -> Self {
        self.conditional = conditional;
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// The order, or `None` for an infinite group.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    pub fn torsion(&self) -> Self {
        Self { free_rank: 0, ..self.clone() }
    }

    /// The subgroup of elements of odd order.
    pub fn odd_torsion(&self) -> Self {
        let odd = self
            .invariant_factors
            .iter()
            .map(|d| {
                let tz = d.trailing_zeros().unwrap_or(0);
                d >> tz
            })
            .collect();
        Self::new(0, odd).with_conditional(self.conditional)
    }

    /// Primary decomposition `{p: [p^a, …]}`. Needs the orders to be
    /// factorable.
    pub fn primary_parts(&self) -> Result<BTreeMap<BigUint, Vec<BigUint>>> {
        let mut out: BTreeMap<BigUint, Vec<BigUint>> = BTreeMap::new();
        for d in &self.invariant_factors {
            for (p, e) in arith::factorize(d)? {
                out.entry(p.clone()).or_default().push(p.pow(e));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let torsion: Vec<Value> = self
            .invariant_factors
            .iter()
            .map(|d| Value::Number(serde_json::Number::from_str(&d.to_string()).expect("integer literal")))
            .collect();
        json!({"rank": self.free_rank, "torsion": torsion, "conditional": self.conditional})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("group must be a JSON object".into()))?;
        let rank = match obj.get("rank") {
            None => 0,
            Some(r) => r
                .as_u64()
                .ok_or_else(|| Error::Parse("rank must be a nonnegative integer".into()))?
                as usize,
        };
        let mut orders = Vec::new();
        if let Some(t) = obj.get("torsion") {
            let list = t.as_array().ok_or_else(|| Error::Parse("torsion must be a list".into()))?;
            for d in list {
                let s = match d {
                    Value::Number(n) => n.to_string(),
                    Value::String(s) => s.clone(),
                    _ => return Err(Error::Parse("torsion entries must be integers".into())),
                };
                let n = BigUint::from_str(&s).map_err(|_| Error::Parse(format!("bad order {s}")))?;
                if n.is_zero() {
                    return Err(Error::Parse("torsion orders must be positive".into()));
                }
                orders.push(n);
            }
        }
        let conditional = obj.get("conditional").and_then(Value::as_bool).unwrap_or(false);
        Ok(Self::new(rank, orders).with_conditional(conditional))
    }

    /// Structure of a finite abelian group from the list of its element
    /// orders (one entry per element).
    pub fn from_element_orders(orders: &[u64]) -> Result<Self> {
        let n = orders.len() as u64;
        if n == 0 {
            return Err(Error::InvalidArgument("a group has at least one element".into()));
        }
        let mut cyclic_orders: Vec<BigUint> = Vec::new();
        for p in arith::prime_divisors(&BigInt::from(n))? {
            // counts[j] = |G[p^j]|
            let mut counts = vec![1u64];
            let mut pj = 1u64;
            loop {
                pj *= p;
                let c = orders.iter().filter(|&&o| pj.is_multiple_of(o)).count() as u64;
                counts.push(c);
                if c == *counts.iter().rev().nth(1).unwrap() {
                    counts.pop();
                    break;
                }
            }
            // r[j] = number of cyclic factors of order ≥ p^j
            let logp = |mut x: u64| -> Result<u32> {
                let mut k = 0;
                while x > 1 {
                    if !x.is_multiple_of(p) {
                        return Err(Error::Internal("element orders do not form a group".into()));
                    }
                    x /= p;
                    k += 1;
                }
                Ok(k)
            };
            let mut r = Vec::new();
            for j in 1..counts.len() {
                r.push(logp(counts[j] / counts[j - 1])?);
            }
            r.push(0);
            for j in 0..r.len() - 1 {
                let exact = r[j].checked_sub(r[j + 1]).ok_or_else(|| {
                    Error::Internal("element orders do not form a group".into())
                })?;
                for _ in 0..exact {
                    cyclic_orders.push(BigUint::from(p).pow(j as u32 + 1));
                }
            }
        }
        let g = Self::new(0, cyclic_orders);
        if g.order() != Some(BigUint::from(n)) {
            return Err(Error::Internal("element orders do not form a group".into()));
        }
        Ok(g)
    }
}

pub fn direct_sum(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    let mut orders = a.invariant_factors.clone();
    orders.extend(b.invariant_factors.iter().cloned());
    FgAbelianGroup::new(a.free_rank + b.free_rank, orders)
        .with_conditional(a.conditional || b.conditional)
}

pub fn direct_sum_all<'a>(groups: impl IntoIterator<Item = &'a FgAbelianGroup>) -> FgAbelianGroup {
    groups.into_iter().fold(FgAbelianGroup::trivial(), |acc, g| direct_sum(&acc, g))
}

pub fn group_order(g: &FgAbelianGroup) -> Option<BigUint> {
    g.order()
}

/// Necessary condition for exactness of `0 → G₀ → G₁ → … → 0`: the
/// alternating product of the orders is 1.
pub fn exact_order_check(seq: &[FgAbelianGroup]) -> Result<bool> {
    let mut even = BigUint::one();
    let mut odd = BigUint::one();
    for (i, g) in seq.iter().enumerate() {
        let o = g.order().ok_or(Error::InfiniteGroup)?;
        if i % 2 == 0 {
            even *= o;
        } else {
            odd *= o;
        }
    }
    Ok(even == odd)
}

/// Smith normal form `u·m·v = d`.
///
/// Pivots on the nonzero entry of least absolute value, ties broken in
/// row-major order; the diagonal of `d` is nonnegative and forms a
/// divisibility chain, with zeros last.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let z = Integers;
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = identity(&z, rows);
    let mut v = identity(&z, cols);

    let row_axpy = |a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        for j in 0..a.cols() {
            let t = q * &a[(src, j)];
            a[(dst, j)] -= t;
        }
    };
    let col_axpy = |a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        for i in 0..a.rows() {
            let t = q * &a[(i, src)];
            a[(i, dst)] -= t;
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let piv = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = d[(i, t)].div_floor(&piv);
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = d[(t, j)].div_floor(&piv);
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the rest; otherwise fold an offending row in.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => {
                    if piv.is_negative() {
                        for j in 0..cols {
                            d[(t, j)] = -&d[(t, j)];
                        }
                        for j in 0..rows {
                            u[(t, j)] = -&u[(t, j)];
                        }
                    }
                    break;
                }
            }
        }
    }
    (u, d, v)
}

/// The group `ℤ^rows / (column span of m)`.
pub fn cokernel_group(m: &IntMatrix) -> FgAbelianGroup {
    let (_, d, _) = smith_normal_form(m);
    let k = m.rows().min(m.cols());
    let diag: Vec<BigUint> = (0..k)
        .map(|i| d[(i, i)].magnitude().clone())
        .filter(|x| !x.is_zero())
        .collect();
    FgAbelianGroup::new(m.rows() - diag.len(), diag)
}

/// A relation matrix with `rows` generators and no relations.
pub fn empty_relations(rows: usize) -> IntMatrix {
    Matrix::filled(rows, 0, BigInt::zero())
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Table notation: `ℤ ⊕ ℤ/2`, `(ℤ/2)³`, `ℤ/65520`, `0`.
///
/// Torsion is written by invariant factors, grouping repeats, which is how
/// the Grothendieck-Witt tables print cyclic groups such as ℤ/24.
impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            2 => parts.push("ℤ ⊕ ℤ".to_string()),
            r => parts.push(format!("ℤ{}", superscript(r))),
        }
        let mut i = 0;
        let t = &self.invariant_factors;
        while i < t.len() {
            let mut k = 1;
            while i + k < t.len() && t[i + k] == t[i] {
                k += 1;
            }
            if k == 1 {
                parts.push(format!("ℤ/{}", t[i]));
            } else {
                parts.push(format!("(ℤ/{}){}", t[i], superscript(k)));
            }
            i += k;
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Small orders as `u64`, for tests and enumeration code.
pub fn factors_u64(g: &FgAbelianGroup) -> Vec<u64> {
    g.invariant_factors.iter().filter_map(|d| d.to_u64()).collect()
}

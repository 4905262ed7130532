//! Lattices in rational forms, discriminant groups with their linking
//! forms, and dévissage of linking forms to residue-field Witt classes.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::abelian::{smith_normal_form, FgAbelianGroup};
use crate::arith;
use crate::error::{Error, Result};
use crate::forms::SymBilForm;
use crate::linalg::{self, identity, inverse, mul, to_integer, to_rational, IntMatrix, Matrix, RatMatrix};
use crate::ring::{GaloisField, Integers, Rationals, Ring};
use crate::witt::{witt_class_finite, FiniteClass};

/// A full-rank lattice `P ⊂ V`, spanned by the columns of `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalLattice {
    ambient: SymBilForm<Rationals>,
    basis: RatMatrix,
}

impl RationalLattice {
    pub fn new(ambient: SymBilForm<Rationals>, basis: RatMatrix) -> Result<Self> {
        if ambient.epsilon() != 1 {
            return Err(Error::InvalidArgument("lattices live in symmetric forms".into()));
        }
        if basis.rows() != ambient.rank() || basis.cols() != ambient.rank() {
            return Err(Error::Dimension("basis must be square of the ambient rank".into()));
        }
        inverse(&Rationals, &basis).map_err(|_| Error::InvalidArgument("basis is not invertible".into()))?;
        Ok(Self { ambient, basis })
    }

    /// The lattice spanned by the standard basis.
    pub fn standard(ambient: SymBilForm<Rationals>) -> Self {
        let n = ambient.rank();
        Self { ambient, basis: identity(&Rationals, n) }
    }

    pub fn ambient(&self) -> &SymBilForm<Rationals> {
        &self.ambient
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// Gram matrix of the restricted form, `Bᵀ·A·B`.
    pub fn gram(&self) -> RatMatrix {
        linalg::congruence(&Rationals, self.ambient.gram(), &self.basis).expect("square")
    }

    pub fn is_integral(&self) -> bool {
        self.gram().entries().all(|x| x.is_integer())
    }

    pub fn integer_gram(&self) -> Result<IntMatrix> {
        to_integer(&self.gram()).map_err(|_| Error::NotIntegral)
    }

    /// Same lattice, different basis: columns `B·u` for unimodular `u`.
    pub fn rebase(&self, u: &IntMatrix) -> Result<Self> {
        let basis = mul(&Rationals, &self.basis, &to_rational(u))?;
        Self::new(self.ambient.clone(), basis)
    }

    /// `P* = {v : b(v, P) ⊆ ℤ}`, with the dual basis `B·G_P⁻¹`.
    pub fn dual(&self) -> Result<Self> {
        let gi = inverse(&Rationals, &self.gram()).map_err(|_| Error::Singular)?;
        Ok(Self { ambient: self.ambient.clone(), basis: mul(&Rationals, &self.basis, &gi)? })
    }

    pub fn scaled(&self, k: &BigRational) -> Self {
        Self { ambient: self.ambient.clone(), basis: linalg::scale(&Rationals, k, &self.basis) }
    }

    /// Two lattices are equal iff each basis is an integral combination of
    /// the other.
    pub fn same_lattice(&self, other: &Self) -> bool {
        let Ok(inv) = inverse(&Rationals, &self.basis) else { return false };
        let Ok(t) = mul(&Rationals, &inv, &other.basis) else { return false };
        t.entries().all(|x| x.is_integer())
            && linalg::determinant(&Rationals, &t).map(|d| d.abs().is_one()).unwrap_or(false)
    }
}

pub fn dual_lattice(l: &RationalLattice) -> Result<RationalLattice> {
    l.dual()
}

pub fn is_integral_lattice(l: &RationalLattice) -> bool {
    l.is_integral()
}

/// A finite abelian group `⊕ ℤ/dᵢ` on chosen generators with a symmetric
/// `ℚ/ℤ`-valued pairing, stored as exact rationals in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionLinkingForm {
    group: FgAbelianGroup,
    orders: Vec<BigUint>,
    generators: Vec<Vec<BigRational>>,
    values: RatMatrix,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl TorsionLinkingForm {
    /// A linking form given by generator orders and pairing values.
    pub fn from_values(orders: Vec<BigUint>, values: RatMatrix) -> Result<Self> {
        let k = orders.len();
        if values.rows() != k || values.cols() != k {
            return Err(Error::Dimension("values must be k×k for k generators".into()));
        }
        if orders.iter().any(|d| d.is_zero()) {
            return Err(Error::InvalidArgument("generator orders must be positive".into()));
        }
        let values = values.map(frac);
        for i in 0..k {
            for j in 0..k {
                if values[(i, j)] != values[(j, i)] {
                    return Err(Error::InvalidArgument("linking values must be symmetric".into()));
                }
                let d = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, orders[i].clone()));
                if !(&d * &values[(i, j)]).is_integer() {
                    return Err(Error::InvalidArgument("linking value incompatible with generator order".into()));
                }
            }
        }
        let group = FgAbelianGroup::new(0, orders.clone());
        Ok(Self { group, orders, generators: Vec::new(), values })
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn orders(&self) -> &[BigUint] {
        &self.orders
    }

    /// Generators as vectors of the ambient space, when known.
    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    pub fn values(&self) -> &RatMatrix {
        &self.values
    }

    pub fn order(&self) -> BigUint {
        self.orders.iter().product()
    }

    pub fn to_json(&self) -> Value {
        let vals: Vec<Vec<String>> = self.values.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let orders: Vec<Value> =
            self.orders.iter().map(|d| Value::Number(serde_json::Number::from_str(&d.to_string()).expect("integer literal"))).collect();
        json!({"group": self.group.to_json(), "orders": orders, "values": vals})
    }
}

/// `L / R` for a lattice `L ⊂ ℤⁿ` (basis columns `lb`) containing the
/// columns of `rel`, with the pairing `c` on ℤⁿ. Generators of order 1 are
/// dropped.
fn subquotient(lb: &IntMatrix, rel: &IntMatrix, c: &RatMatrix) -> Result<(Vec<BigUint>, IntMatrix, RatMatrix)> {
    let lbi = inverse(&Rationals, &to_rational(lb))?;
    let x = to_integer(&mul(&Rationals, &lbi, &to_rational(rel))?)
        .map_err(|_| Error::Internal("relations outside the lattice".into()))?;
    let (u, d, _) = smith_normal_form(&x);
    let ui = to_integer(&inverse(&Rationals, &to_rational(&u))?)?;
    let m = lb.cols();
    let mut orders = Vec::new();
    let mut cols = Vec::new();
    for i in 0..m {
        let di = if i < d.cols() { d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            return Err(Error::Internal("quotient is not finite".into()));
        }
        if !di.is_one() {
            orders.push(di.magnitude().clone());
            cols.push(i);
        }
    }
    let gens_l = ui.select(&(0..m).collect::<Vec<_>>(), &cols);
    let gens = mul(&Integers, lb, &gens_l)?;
    let gq = to_rational(&gens);
    let vals = linalg::congruence(&Rationals, c, &gq)?.map(frac);
    Ok((orders, gens, vals))
}

/// The discriminant group `T = P*/P` of an integral lattice with its
/// linking form `c([v], [u]) = b(v, u) mod ℤ`.
pub fn torsion_linking_form(l: &RationalLattice) -> Result<TorsionLinkingForm> {
    let g = l.integer_gram()?;
    let n = g.rows();
    let gq = to_rational(&g);
    let gi = inverse(&Rationals, &gq).map_err(|_| Error::Singular)?;
    // In P*-coordinates P is spanned by the columns of G_P, and the pairing
    // on P* is G_P⁻¹.
    let (orders, gens, values) = subquotient(&identity(&Integers, n), &g, &gi)?;
    let dual_basis = mul(&Rationals, l.basis(), &gi)?;
    let generators = (0..gens.cols())
        .map(|j| mul(&Rationals, &dual_basis, &to_rational(&gens.select(&(0..n).collect::<Vec<_>>(), &[j]))).map(|v| v.column(0)))
        .collect::<Result<Vec<_>>>()?;
    let group = FgAbelianGroup::new(0, orders.clone());
    Ok(TorsionLinkingForm { group, orders, generators, values })
}

/// The `p`-primary part, on generators `(dᵢ/p^{aᵢ})·gᵢ`.
fn primary_part(t: &TorsionLinkingForm, p: u64) -> (Vec<u32>, RatMatrix) {
    let mut exps = Vec::new();
    let mut mults = Vec::new();
    let mut idx = Vec::new();
    for (i, d) in t.orders.iter().enumerate() {
        let (a, m) = arith::split_valuation(&BigInt::from_biguint(Sign::Plus, d.clone()), p);
        if a > 0 {
            exps.push(a);
            mults.push(BigRational::from_integer(m));
            idx.push(i);
        }
    }
    let k = idx.len();
    let vals = Matrix::from_fn(k, k, |i, j| frac(&(&mults[i] * &mults[j] * &t.values[(idx[i], idx[j])])));
    (exps, vals)
}

/// One sublagrangian step on `⊕ ℤ/p^{aᵢ}`: `x = p^{a_k - 1}·g_k` for the
/// first generator with `a_k ≥ 2`, replaced by `x^⊥/⟨x⟩`.
fn reduce_once(p: u64, exps: &[u32], c: &RatMatrix) -> Result<(Vec<u32>, RatMatrix)> {
    let k = exps.len();
    let kx = exps.iter().position(|&a| a >= 2).expect("non-elementary");
    let pb = BigInt::from(p);
    let ax = exps[kx];
    let x: Vec<BigInt> = (0..k).map(|i| if i == kx { pb.pow(ax - 1) } else { BigInt::zero() }).collect();
    let xq: Vec<BigRational> = x.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    if !frac(&linalg::bilinear(&Rationals, c, &xq, &xq)).is_zero() {
        return Err(Error::Internal("chosen vector is not isotropic".into()));
    }
    // c(x, e_j) = t_j / p mod 1
    let t: Vec<BigInt> = (0..k)
        .map(|j| {
            let v = BigRational::from_integer(pb.pow(ax)) * &c[(kx, j)];
            if !v.is_integer() {
                return Err(Error::Internal("linking value exceeds generator order".into()));
            }
            Ok(v.to_integer().mod_floor(&pb))
        })
        .collect::<Result<_>>()?;
    let lb: IntMatrix = match t.iter().position(|v| !v.is_zero()) {
        None => return Err(Error::Internal("degenerate linking form".into())),
        Some(j0) => {
            let inv = arith::mod_inverse(&t[j0], &pb).expect("unit mod p");
            Matrix::from_fn(k, k, |i, j| {
                if j == j0 {
                    if i == j0 { pb.clone() } else { BigInt::zero() }
                } else if i == j {
                    BigInt::one()
                } else if i == j0 {
                    -(&t[j] * &inv).mod_floor(&pb)
                } else {
                    BigInt::zero()
                }
            })
        }
    };
    let mut rel_cols: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { pb.pow(exps[i]) } else { BigInt::zero() }).collect())
        .collect();
    rel_cols.push(x);
    let rel = Matrix::from_columns(k, &rel_cols)?;
    let (orders, _, vals) = subquotient(&lb, &rel, c)?;
    let new_exps = orders
        .iter()
        .map(|d| {
            let (a, m) = arith::split_valuation(&BigInt::from_biguint(Sign::Plus, d.clone()), p);
            if m.is_one() {
                Ok(a)
            } else {
                Err(Error::Internal("subquotient left the p-primary part".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((new_exps, vals))
}

/// Witt class over 𝔽_p of the `p`-primary part of a linking form.
pub fn devissage_at(t: &TorsionLinkingForm, p: u64) -> Result<FiniteClass> {
    let (mut exps, mut c) = primary_part(t, p);
    while exps.iter().any(|&a| a >= 2) {
        if p == 2 {
            return Err(Error::DyadicDevissage);
        }
        (exps, c) = reduce_once(p, &exps, &c)?;
    }
    let field = GaloisField::prime(p)?;
    let pq = BigRational::from_integer(BigInt::from(p));
    let gram = c.try_map(|v| {
        let s = &pq * v;
        if !s.is_integer() {
            return Err(Error::Internal("elementary part has values outside (1/p)ℤ".into()));
        }
        Ok(field.from_int(&s.to_integer()))
    })?;
    let form = SymBilForm::symmetric(field, gram)?;
    witt_class_finite(&form)
}

/// Dévissage of `(T, c)` prime by prime, for every prime dividing `|T|`.
pub fn devissage_class(t: &TorsionLinkingForm) -> Result<BTreeMap<u64, FiniteClass>> {
    let n = BigInt::from_biguint(Sign::Plus, t.order());
    let mut out = BTreeMap::new();
    if n.is_one() {
        return Ok(out);
    }
    for p in arith::prime_divisors(&n)? {
        out.insert(p, devissage_at(t, p)?);
    }
    Ok(out)
}

/// The nonzero entries of a dévissage result.
pub fn nonzero_classes(m: &BTreeMap<u64, FiniteClass>) -> BTreeMap<u64, FiniteClass> {
    m.iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (*p, *c)).collect()
}

/// A canonical integral lattice: the standard lattice scaled by the lcm of
/// the Gram denominators, then greedily enlarged by `bᵢ/p` while the Gram
/// matrix stays integral.
pub fn integral_sublattice(ambient: &SymBilForm<Rationals>) -> Result<RationalLattice> {
    let s = ambient.gram().entries().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut l = RationalLattice::standard(ambient.clone()).scaled(&BigRational::from_integer(s));
    let n = ambient.rank();
    'outer: loop {
        let det = linalg::int_determinant(&l.integer_gram()?)?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        for p in arith::prime_divisors(&det)? {
            let inv_p = BigRational::new(BigInt::one(), BigInt::from(p));
            for i in 0..n {
                let mut basis = l.basis.clone();
                for r in 0..n {
                    basis[(r, i)] = &basis[(r, i)] * &inv_p;
                }
                let cand = RationalLattice { ambient: ambient.clone(), basis };
                if cand.is_integral() {
                    l = cand;
                    continue 'outer;
                }
            }
        }
        return Ok(l);
    }
}

/// `|det G_P|` as an unsigned integer.
pub fn gram_determinant(l: &RationalLattice) -> Result<BigUint> {
    Ok(linalg::int_determinant(&l.integer_gram()?)?.magnitude().clone())
}

/// Small helper for tests and the CLI: `u64` orders.
pub fn orders_u64(t: &TorsionLinkingForm) -> Vec<u64> {
    t.orders.iter().filter_map(|d| d.to_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::e8;
    use crate::linalg::rat_matrix;
    use crate::witt::{rationals, second_residue};

    fn diag(xs: &[i64]) -> SymBilForm<Rationals> {
        SymBilForm::diagonal(Rationals, &rationals(xs))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn duals() {
        let e = RationalLattice::standard(e8(&Integers).to_rational());
        assert!(e.dual().unwrap().same_lattice(&e));
        let two = RationalLattice::standard(diag(&[2]));
        assert_eq!(two.dual().unwrap().basis(), &Matrix::from_rows(vec![vec![q(1, 2)]]).unwrap());
        let l = RationalLattice::new(diag(&[1]), rat_matrix(&[&[2]])).unwrap();
        assert_eq!(l.dual().unwrap().basis(), &Matrix::from_rows(vec![vec![q(1, 2)]]).unwrap());
        assert!(l.dual().unwrap().dual().unwrap().same_lattice(&l));
    }

    #[test]
    fn integrality() {
        assert!(RationalLattice::standard(diag(&[2])).is_integral());
        let half = SymBilForm::diagonal(Rationals, &[q(1, 2)]);
        assert!(!RationalLattice::standard(half.clone()).is_integral());
        assert_eq!(torsion_linking_form(&RationalLattice::standard(half)), Err(Error::NotIntegral));
    }

    #[test]
    fn linking_forms() {
        let t = torsion_linking_form(&RationalLattice::standard(diag(&[2]))).unwrap();
        assert_eq!(orders_u64(&t), vec![2]);
        assert_eq!(t.values()[(0, 0)], q(1, 2));
        let t = torsion_linking_form(&RationalLattice::standard(e8(&Integers).to_rational())).unwrap();
        assert!(t.group().is_trivial());
        let t = torsion_linking_form(&RationalLattice::standard(diag(&[3, 3]))).unwrap();
        assert_eq!(orders_u64(&t), vec![3, 3]);
        assert_eq!(t.values(), &Matrix::from_rows(vec![vec![q(1, 3), q(0, 1)], vec![q(0, 1), q(1, 3)]]).unwrap());
    }

    #[test]
    fn devissage_examples() {
        let t = torsion_linking_form(&RationalLattice::standard(diag(&[2]))).unwrap();
        let d = devissage_class(&t).unwrap();
        assert_eq!(d[&2], second_residue(&rationals(&[2]), 2, None).unwrap());
        let zero = TorsionLinkingForm::from_values(vec![], Matrix::filled(0, 0, q(0, 1))).unwrap();
        assert!(devissage_class(&zero).unwrap().is_empty());
        let nine = TorsionLinkingForm::from_values(vec![9u32.into()], Matrix::from_rows(vec![vec![q(1, 9)]]).unwrap()).unwrap();
        let d = devissage_class(&nine).unwrap();
        assert!(d[&3].is_zero());
        let four = TorsionLinkingForm::from_values(vec![4u32.into()], Matrix::from_rows(vec![vec![q(1, 4)]]).unwrap()).unwrap();
        assert_eq!(devissage_class(&four), Err(Error::DyadicDevissage));
    }

    #[test]
    fn order_is_determinant() {
        let f = SymBilForm::symmetric(Rationals, rat_matrix(&[&[2, 1, 0], &[1, 4, 3], &[0, 3, 10]])).unwrap();
        let l = RationalLattice::standard(f);
        let t = torsion_linking_form(&l).unwrap();
        assert_eq!(t.order(), gram_determinant(&l).unwrap());
    }

    #[test]
    fn sublattice_is_maximal_for_diagonals() {
        let f = SymBilForm::diagonal(Rationals, &[q(18, 1), q(5, 3)]);
        let l = integral_sublattice(&f).unwrap();
        assert!(l.is_integral());
        let g = l.integer_gram().unwrap();
        // 18 → 2 (e/3), 5/3 → 15 (3e).
        assert_eq!(g, crate::linalg::int_matrix(&[&[2, 0], &[0, 15]]));
    }

    #[test]
    fn scaling_adds_metabolic_pieces() {
        let f = diag(&[3, 5, -7]);
        let base = RationalLattice::standard(f);
        let want = nonzero_classes(&devissage_class(&torsion_linking_form(&base).unwrap()).unwrap());
        for k in [3, 5, 9, 15] {
            let l = base.scaled(&q(k, 1));
            let got = nonzero_classes(&devissage_class(&torsion_linking_form(&l).unwrap()).unwrap());
            assert_eq!(got, want, "scaling by {k}");
        }
    }
}

//! Exact Bernoulli numbers, the numerators `c_n` and denominators `w_{2n}`
//! of `|B_{2n}/4n|`, and the K-groups of ℤ built from them.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abelian::FgAbelianGroup;
use crate::arith;
use crate::error::{Error, Result};

/// Indices `m = (n+2)/4` up to this bound have `(K_{4m-2})_odd` known to be
/// cyclic of order `c_m` without assuming Vandiver's conjecture.
pub const VANDIVER_VERIFIED_UP_TO: u64 = 5000;

/// Above this index the automatic method switches to tangent numbers.
pub const RECURRENCE_LIMIT: u64 = 2000;

pub const CACHE_ENV: &str = "GWCALC_BERNOULLI_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BernoulliMethod {
    /// `Σ_{k≤m} C(m+1,k)·B_k = 0`, solved for one index at a time.
    Recurrence,
    /// Integer tangent numbers, `B_{2n} = (-1)^{n-1}·2n·T_n / (4^n(4^n - 1))`.
    Tangent,
    Auto,
}

/// Append-only cache `2n ↦ B_{2n}`.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    method: BernoulliMethod,
    values: BTreeMap<u64, BigRational>,
    dirty: bool,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new(BernoulliMethod::Auto)
    }
}

impl BernoulliTable {
    pub fn new(method: BernoulliMethod) -> Self {
        Self { method, values: BTreeMap::new(), dirty: false }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `B_{2n}` for `two_n` even and positive.
    pub fn get(&mut self, two_n: u64) -> Result<BigRational> {
        check_index(two_n)?;
        if let Some(v) = self.values.get(&two_n) {
            return Ok(v.clone());
        }
        self.ensure(two_n / 2);
        Ok(self.values[&two_n].clone())
    }

    /// Fill every `B_{2j}` with `j ≤ n`.
    pub fn ensure(&mut self, n: u64) {
        let missing = (1..=n).any(|j| !self.values.contains_key(&(2 * j)));
        if !missing {
            return;
        }
        let method = match self.method {
            BernoulliMethod::Auto if 2 * n > RECURRENCE_LIMIT => BernoulliMethod::Tangent,
            BernoulliMethod::Auto => BernoulliMethod::Recurrence,
            m => m,
        };
        match method {
            BernoulliMethod::Tangent => {
                for (j, b) in tangent_bernoulli(n).into_iter().enumerate() {
                    self.values.entry(2 * (j as u64 + 1)).or_insert(b);
                }
            }
            _ => self.extend_by_recurrence(n),
        }
        self.dirty = true;
    }

    fn extend_by_recurrence(&mut self, n: u64) {
        // Common denominator of everything computed so far.
        let mut lcm = BigInt::from(2);
        for j in 1..=n {
            let m = 2 * j;
            if let Some(b) = self.values.get(&m) {
                lcm = lcm.lcm(b.denom());
                continue;
            }
            let np1 = BigInt::from(m + 1);
            // 1 - (m+1)/2, scaled by lcm.
            let mut sum: BigInt = &lcm - &lcm * &np1 / BigInt::from(2);
            let mut binom = BigInt::one();
            for k in 1..m {
                binom = binom * BigInt::from(m + 2 - k) / BigInt::from(k);
                if k % 2 == 0 {
                    let b = &self.values[&k];
                    sum += &binom * b.numer() * (&lcm / b.denom());
                }
            }
            let b = BigRational::new(-sum, &lcm * &np1);
            lcm = lcm.lcm(b.denom());
            self.values.insert(m, b);
        }
    }

    /// Merge rows of a CSV cache. Rows whose denominator fails the
    /// von Staudt–Clausen check are skipped.
    pub fn load_csv(&mut self, path: &Path) -> Result<usize> {
        let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut rdr = csv::Reader::from_reader(file);
        let mut merged = 0;
        for row in rdr.records() {
            let row = row.map_err(|e| Error::Parse(format!("bernoulli cache: {e}")))?;
            let (Some(idx), Some(val)) = (row.get(0), row.get(1)) else { continue };
            let Ok(two_n) = idx.trim().parse::<u64>() else { continue };
            let Ok(b) = val.trim().parse::<BigRational>() else { continue };
            if check_index(two_n).is_err() || b.denom() != &von_staudt_denominator(two_n) {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = self.values.entry(two_n) {
                e.insert(b);
                merged += 1;
            }
        }
        Ok(merged)
    }

    /// Write all rows to `path` through a temporary file in the same
    /// directory, renamed into place.
    pub fn save_csv(&mut self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::Io(e.to_string()))?;
        {
            let mut w = csv::Writer::from_writer(tmp.as_file());
            w.write_record(["two_n", "bernoulli", "c", "w"]).map_err(|e| Error::Io(e.to_string()))?;
            for (two_n, b) in &self.values {
                let (c, w_) = c_and_w(*two_n, b);
                w.write_record([two_n.to_string(), b.to_string(), c.to_string(), w_.to_string()])
                    .map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush().map_err(|e| Error::Io(e.to_string()))?;
        }
        tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
        self.dirty = false;
        Ok(())
    }
}

fn check_index(two_n: u64) -> Result<()> {
    if two_n == 0 || two_n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Bernoulli index must be even and positive, got {two_n}")));
    }
    Ok(())
}

/// Tangent numbers `T_1..T_n` by the in-place triangle, turned into
/// `B_2..B_{2n}`.
fn tangent_bernoulli(n: u64) -> Vec<BigRational> {
    let n = n as usize;
    if n == 0 {
        return Vec::new();
    }
    let mut t = vec![BigInt::zero(); n + 1];
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    (1..=n)
        .map(|j| {
            let four_j = BigInt::one() << (2 * j);
            let num = BigInt::from(2 * j) * &t[j];
            let b = BigRational::new(num, &four_j * (&four_j - 1u32));
            if j % 2 == 0 { -b } else { b }
        })
        .collect()
}

fn global() -> &'static Mutex<BernoulliTable> {
    static TABLE: OnceLock<Mutex<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = BernoulliTable::default();
        if let Some(p) = std::env::var_os(CACHE_ENV) {
            let _ = t.load_csv(Path::new(&p));
        }
        Mutex::new(t)
    })
}

/// Persist the shared table to `GWCALC_BERNOULLI_CACHE` if it is set and
/// new values were computed.
pub fn persist_global_cache() -> Result<()> {
    let Some(p) = std::env::var_os(CACHE_ENV) else { return Ok(()) };
    let mut t = global().lock().expect("bernoulli table poisoned");
    if !t.dirty {
        return Ok(());
    }
    let path = Path::new(&p);
    if path.exists() {
        t.load_csv(path)?;
    }
    t.save_csv(path)
}

pub fn bernoulli_number(two_n: u64) -> Result<BigRational> {
    global().lock().expect("bernoulli table poisoned").get(two_n)
}

/// Precompute `B_2..B_{2n}` in the shared table.
pub fn warm(n: u64) {
    global().lock().expect("bernoulli table poisoned").ensure(n);
}

fn c_and_w(two_n: u64, b: &BigRational) -> (BigUint, BigUint) {
    let q = b.abs() / BigRational::from_integer(BigInt::from(2 * two_n));
    (q.numer().magnitude().clone(), q.denom().magnitude().clone())
}

/// Numerator of `|B_{2n}/4n|`.
pub fn c_numerator(n: u64) -> Result<BigUint> {
    Ok(c_and_w(2 * n, &bernoulli_number(2 * n)?).0)
}

/// Denominator of `|B_{2n}/4n|`, indexed by `2n`.
pub fn w_denominator(two_n: u64) -> Result<BigUint> {
    Ok(c_and_w(two_n, &bernoulli_number(two_n)?).1)
}

/// `∏ p` over primes with `(p-1) | 2n`.
pub fn von_staudt_denominator(two_n: u64) -> BigInt {
    let mut d = BigInt::one();
    for p in arith::primes_up_to(two_n + 1) {
        if two_n.is_multiple_of(p - 1) {
            d *= p;
        }
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VonStaudtFailure {
    TwoAdicValuation { n: u64, w_valuation: u32, expected: u32 },
    Denominator { n: u64, found: BigInt, expected: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VonStaudtReport {
    pub n_max: u64,
    pub checked: u64,
    pub failure: Option<VonStaudtFailure>,
}

impl VonStaudtReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `v₂(w_{2n}) = v₂(8n)` and `denom B_{2n} = ∏_{(p-1)|2n} p` for
/// `n ≤ n_max`, stopping at the first failure.
pub fn von_staudt_checks(n_max: u64) -> Result<VonStaudtReport> {
    warm(n_max);
    let mut checked = 0;
    for n in 1..=n_max {
        let b = bernoulli_number(2 * n)?;
        let expected = von_staudt_denominator(2 * n);
        if b.denom() != &expected {
            let failure = VonStaudtFailure::Denominator { n, found: b.denom().clone(), expected };
            return Ok(VonStaudtReport { n_max, checked, failure: Some(failure) });
        }
        let w = BigInt::from_biguint(Sign::Plus, c_and_w(2 * n, &b).1);
        let w_valuation = arith::valuation(&w, 2);
        let expected = arith::valuation(&BigInt::from(8 * n), 2);
        if w_valuation != expected {
            let failure = VonStaudtFailure::TwoAdicValuation { n, w_valuation, expected };
            return Ok(VonStaudtReport { n_max, checked, failure: Some(failure) });
        }
        checked += 1;
    }
    Ok(VonStaudtReport { n_max, checked, failure: None })
}

/// Whether the odd part of `K_n(ℤ)`, `n = 4m - 2`, rests on Vandiver's
/// conjecture.
pub fn vandiver_conditional(n: u64, assume_vandiver: bool) -> bool {
    n % 4 == 2 && (n + 2) / 4 > VANDIVER_VERIFIED_UP_TO && !assume_vandiver
}

/// `K_n(ℤ)`, with the odd parts at `n ≡ 2, 6 (8)` taken cyclic.
pub fn k_group_z(n: u64, assume_vandiver: bool) -> Result<FgAbelianGroup> {
    let g = match n {
        0 => FgAbelianGroup::free(1),
        1 => FgAbelianGroup::cyclic(2u32),
        _ => match n % 8 {
            0 => FgAbelianGroup::trivial().with_conditional(!assume_vandiver),
            1 => FgAbelianGroup::from_u64s(1, &[2]),
            2 => {
                let c = c_numerator((n + 2) / 4)?;
                FgAbelianGroup::new(0, vec![BigUint::from(2u32), c]).with_conditional(vandiver_conditional(n, assume_vandiver))
            }
            3 => FgAbelianGroup::cyclic(w_denominator(n.div_ceil(2))? * 2u32),
            4 => FgAbelianGroup::trivial(),
            5 => FgAbelianGroup::free(1),
            6 => FgAbelianGroup::cyclic(c_numerator((n + 2) / 4)?).with_conditional(vandiver_conditional(n, assume_vandiver)),
            _ => FgAbelianGroup::cyclic(w_denominator(n.div_ceil(2))?),
        },
    };
    Ok(g)
}

/// The odd torsion of `K_n(ℤ)` for `n ≡ 2 (4)`, cyclic of order `c_{(n+2)/4}`.
pub fn k_odd_part(n: u64, assume_vandiver: bool) -> Result<FgAbelianGroup> {
    if n % 4 != 2 {
        return Ok(k_group_z(n, assume_vandiver)?.odd_torsion());
    }
    let c = c_numerator((n + 2) / 4)?;
    Ok(FgAbelianGroup::cyclic(c).with_conditional(vandiver_conditional(n, assume_vandiver)))
}

/// Rows `(2n, B_{2n}, c_n, w_{2n})` for `n = 1..=n_max`.
pub fn bernoulli_rows(n_max: u64) -> Result<Vec<(u64, BigRational, BigUint, BigUint)>> {
    warm(n_max);
    (1..=n_max)
        .map(|n| {
            let b = bernoulli_number(2 * n)?;
            let (c, w) = c_and_w(2 * n, &b);
            Ok((2 * n, b, c, w))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_number(2).unwrap(), q(1, 6));
        assert_eq!(bernoulli_number(4).unwrap(), q(-1, 30));
        assert_eq!(bernoulli_number(12).unwrap(), q(-691, 2730));
        assert!(bernoulli_number(3).is_err());
        assert!(bernoulli_number(0).is_err());
    }

    #[test]
    fn methods_agree() {
        let mut a = BernoulliTable::new(BernoulliMethod::Recurrence);
        let mut b = BernoulliTable::new(BernoulliMethod::Tangent);
        a.ensure(120);
        b.ensure(120);
        for j in 1..=120 {
            assert_eq!(a.get(2 * j).unwrap(), b.get(2 * j).unwrap(), "B_{}", 2 * j);
        }
    }

    #[test]
    fn incremental_extension() {
        let mut a = BernoulliTable::new(BernoulliMethod::Recurrence);
        a.ensure(5);
        a.ensure(20);
        let mut b = BernoulliTable::new(BernoulliMethod::Tangent);
        assert_eq!(a.get(40).unwrap(), b.get(40).unwrap());
    }

    #[test]
    fn c_and_w_examples() {
        assert_eq!(c_numerator(1).unwrap(), 1u32.into());
        assert_eq!(c_numerator(2).unwrap(), 1u32.into());
        assert_eq!(c_numerator(6).unwrap(), 691u32.into());
        assert_eq!(w_denominator(2).unwrap(), 24u32.into());
        assert_eq!(w_denominator(4).unwrap(), 240u32.into());
        assert_eq!(w_denominator(6).unwrap(), 504u32.into());
        assert_eq!(w_denominator(12).unwrap(), 65520u32.into());
    }

    #[test]
    fn k_groups() {
        assert_eq!(k_group_z(22, false).unwrap(), FgAbelianGroup::cyclic(691u32));
        assert_eq!(k_group_z(3, false).unwrap(), FgAbelianGroup::cyclic(48u32));
        assert_eq!(k_group_z(7, false).unwrap(), FgAbelianGroup::cyclic(240u32));
        assert_eq!(k_group_z(2, false).unwrap(), FgAbelianGroup::cyclic(2u32));
        assert_eq!(k_group_z(9, false).unwrap().to_string(), "ℤ ⊕ ℤ/2");
        assert!(!k_group_z(22, false).unwrap().is_conditional());
        assert!(k_group_z(8, false).unwrap().is_conditional());
        assert!(!k_group_z(8, true).unwrap().is_conditional());
    }

    #[test]
    fn vandiver_threshold() {
        assert!(!vandiver_conditional(4 * 5000 - 2, false));
        assert!(vandiver_conditional(4 * 5001 - 2, false));
        assert!(!vandiver_conditional(4 * 5001 - 2, true));
        assert!(!vandiver_conditional(4 * 5001 - 1, false));
    }

    #[test]
    fn von_staudt_small() {
        let r = von_staudt_checks(60).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checked, 60);
        assert_eq!(von_staudt_denominator(4), BigInt::from(30));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.csv");
        let mut a = BernoulliTable::new(BernoulliMethod::Recurrence);
        a.ensure(15);
        a.save_csv(&path).unwrap();
        let mut b = BernoulliTable::new(BernoulliMethod::Recurrence);
        assert_eq!(b.load_csv(&path).unwrap(), 15);
        assert_eq!(b.get(30).unwrap(), a.get(30).unwrap());
        // A corrupted row is rejected rather than trusted.
        std::fs::write(&path, "two_n,bernoulli,c,w\n12,-691/2731,1,1\n").unwrap();
        let mut c = BernoulliTable::new(BernoulliMethod::Recurrence);
        assert_eq!(c.load_csv(&path).unwrap(), 0);
    }
}

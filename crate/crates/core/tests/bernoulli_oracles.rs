use gwcalc::bernoulli::{bernoulli_number, c_numerator, k_group_z, von_staudt_checks, w_denominator, BernoulliMethod, BernoulliTable};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `B_0..B_max` straight from `Σ_{k=0}^{m} C(m+1,k)·B_k = 0` in plain
/// rationals, odd indices included.
fn naive_bernoulli(max: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=max {
        let mut binom = BigInt::one();
        let mut sum = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            sum += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-sum / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn vp(n: &BigUint, p: u64) -> u32 {
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

fn primes(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

#[test]
fn anchors() {
    assert_eq!(bernoulli_number(12).unwrap(), BigRational::new((-691).into(), 2730.into()));
    assert_eq!(c_numerator(6).unwrap(), BigUint::from(691u32));
    assert_eq!(w_denominator(12).unwrap(), BigUint::from(65520u32));
    assert_eq!(w_denominator(2).unwrap(), BigUint::from(24u32));
    assert_eq!(w_denominator(4).unwrap(), BigUint::from(240u32));
}

#[test]
fn matches_naive_recurrence() {
    let naive = naive_bernoulli(240);
    assert!(naive[3..].iter().step_by(2).all(Zero::is_zero));
    assert_eq!(naive[1], BigRational::new((-1).into(), 2.into()));
    for two_n in (2..=240u64).step_by(2) {
        assert_eq!(bernoulli_number(two_n).unwrap(), naive[two_n as usize], "B_{two_n}");
    }
}

#[test]
fn methods_agree() {
    let mut rec = BernoulliTable::new(BernoulliMethod::Recurrence);
    let mut tan = BernoulliTable::new(BernoulliMethod::Tangent);
    for two_n in (2..=300u64).step_by(2) {
        assert_eq!(rec.get(two_n).unwrap(), tan.get(two_n).unwrap(), "B_{two_n}");
    }
}

#[test]
fn c_and_w_reassemble_bernoulli() {
    for n in 1..=200u64 {
        let b = bernoulli_number(2 * n).unwrap();
        let c = BigInt::from(c_numerator(n).unwrap());
        let w = BigInt::from(w_denominator(2 * n).unwrap());
        assert_eq!(BigRational::new(c.clone(), w.clone()), b.abs() / BigRational::from_integer(BigInt::from(4 * n)));
        assert!(c.gcd(&w).is_one());
    }
}

#[test]
fn c_is_odd() {
    for n in 1..=500u64 {
        assert!(c_numerator(n).unwrap().bit(0), "c_{n} even");
    }
}

#[test]
fn w_prime_support() {
    for n in 1..=200u64 {
        let w = w_denominator(2 * n).unwrap();
        for p in primes(50) {
            assert_eq!((&w % p).is_zero(), (2 * n) % (p - 1) == 0, "p = {p}, 2n = {}", 2 * n);
        }
    }
}

#[test]
fn w_local_valuations() {
    // v_p(w_{2m}) = 1 + v_p(2m) at odd p with (p-1) | 2m, and v₂(w_{2m}) = v₂(8m).
    for m in 1..=150u64 {
        let w = w_denominator(2 * m).unwrap();
        let two_m = BigUint::from(2 * m);
        let mut rebuilt = BigUint::one();
        for p in primes(2 * m + 1) {
            let want = if p == 2 { vp(&BigUint::from(8 * m), 2) } else if (2 * m) % (p - 1) == 0 { 1 + vp(&two_m, p) } else { 0 };
            assert_eq!(vp(&w, p), want, "p = {p}, m = {m}");
            rebuilt *= BigUint::from(p).pow(want);
        }
        assert_eq!(rebuilt, w, "m = {m}");
    }
}

#[test]
fn von_staudt_to_500() {
    let report = von_staudt_checks(500).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.checked, 500);
}

#[test]
fn k_groups_of_integers() {
    let show = |n| k_group_z(n, false).unwrap().to_string();
    assert_eq!(show(0), "ℤ");
    assert_eq!(show(1), "ℤ/2");
    assert_eq!(show(3), "ℤ/48");
    assert_eq!(show(5), "ℤ");
    assert_eq!(show(7), "ℤ/240");
    assert_eq!(show(9), "ℤ ⊕ ℤ/2");
    assert_eq!(show(11), "ℤ/1008");
    assert_eq!(show(10), "ℤ/2");
    assert_eq!(show(22), "ℤ/691");
    assert_eq!(show(34), "ℤ/87734");
    assert_eq!(show(30), "ℤ/3617");
    assert!(!k_group_z(22, false).unwrap().is_conditional());
    assert!(k_group_z(8, false).unwrap().is_conditional());
    assert!(!k_group_z(8, true).unwrap().is_conditional());
}

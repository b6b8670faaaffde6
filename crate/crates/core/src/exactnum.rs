//! Exact nonnegative rational arithmetic, prime generation, and p-adic
//! valuations. Everything downstream (monoid elements, exponents, chain
//! values) lives on these types; there is no floating point anywhere.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("value must be nonnegative, got {0}")]
    Negative(String),
    #[error("subtraction underflow: {0} - {1} is negative")]
    Underflow(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse rational {0:?}: {1}")]
    Parse(String, String),
    #[error("denominator does not fit in 64 bits; refusing to factor")]
    DenominatorTooLarge,
}

/// Arbitrary-precision nonnegative rational, always held in lowest terms.
///
/// Reduction happens at construction; no operation ever stores an
/// unreduced value. Signed intermediates (differences) are handled by the
/// callers via [`Rat::checked_sub`], which refuses to go negative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(numer: u64, denom: u64) -> Result<Self, ExactError> {
        if denom == 0 {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rat(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self, ExactError> {
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let r = BigRational::new(numer, denom);
        if r.is_negative() {
            return Err(ExactError::Negative(r.to_string()));
        }
        Ok(Rat(r))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Numerator of the reduced form (nonnegative).
    pub fn numer(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    /// Denominator of the reduced form (always >= 1).
    pub fn denom(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    /// `self - other`, or `None` when the difference would be negative.
    pub fn checked_sub(&self, other: &Rat) -> Option<Rat> {
        if self.0 < other.0 {
            None
        } else {
            Some(Rat(&self.0 - &other.0))
        }
    }

    pub fn div_exact(&self, other: &Rat) -> Result<Rat, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rat(&self.0 / &other.0))
    }

    /// `k * self` for an integer count.
    pub fn scaled(&self, k: u64) -> Rat {
        Rat(&self.0 * BigRational::from_integer(BigInt::from(k)))
    }

    pub fn to_u64_if_integer(&self) -> Option<u64> {
        if self.0.is_integer() {
            self.0.numer().to_u64()
        } else {
            None
        }
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        Rat(&self.0 + &rhs.0)
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        Rat(&self.0 * &rhs.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({self})")
    }
}

impl FromStr for Rat {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = s.trim();
        let bad = |msg: &str| ExactError::Parse(s.to_string(), msg.to_string());
        let (num_s, den_s) = match raw.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (raw, "1"),
        };
        let numer = BigInt::from_str(num_s).map_err(|e| bad(&e.to_string()))?;
        let denom = BigInt::from_str(den_s).map_err(|e| bad(&e.to_string()))?;
        if denom.is_zero() {
            return Err(bad("zero denominator"));
        }
        if numer.is_negative() || denom.is_negative() {
            return Err(ExactError::Negative(raw.to_string()));
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin over the full u64 range.
///
/// Independent of the sieve cache, so it doubles as a cross-check on the
/// prime sequence (and catches deliberately corrupted tables in the
/// negative-control self test).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // n must be odd, composite, and not a prime power of interest below 2^20.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Prime-power factorization of a u64, sorted by prime.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5] {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut step = 0;
    while d <= 1 << 20 && d * d <= n {
        while n.is_multiple_of(d) {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += steps[step];
        step = (step + 1) % steps.len();
    }
    // What is left has no factor below 2^20; split it recursively.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            *out.entry(m).or_insert(0) += 1;
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    out
}

/// The exponent of the prime `p` in the factorization of a nonzero `q`
/// (negative when `p` divides the reduced denominator).
pub fn padic_valuation(q: &Rat, p: u64) -> Result<i64, ExactError> {
    if q.is_zero() {
        return Err(ExactError::ZeroValuation);
    }
    if !is_prime(p) {
        return Err(ExactError::NotPrime(p));
    }
    let big_p = BigUint::from(p);
    Ok(count_divisions(&q.numer(), &big_p) - count_divisions(&q.denom(), &big_p))
}

fn count_divisions(n: &BigUint, p: &BigUint) -> i64 {
    let mut count = 0i64;
    let mut m = n.clone();
    if m.is_zero() {
        return 0;
    }
    loop {
        let (div, rem) = m.div_rem(p);
        if rem.is_zero() {
            count += 1;
            m = div;
        } else {
            return count;
        }
    }
}

/// Prime-power factorization of the reduced denominator of `q`.
pub fn denominator_prime_powers(q: &Rat) -> Result<Vec<(u64, u32)>, ExactError> {
    let den = q.denom();
    let den64 = den.to_u64().ok_or(ExactError::DenominatorTooLarge)?;
    Ok(factor_u64(den64).into_iter().collect())
}

/// The largest prime dividing the reduced denominator of `q`, or `None`
/// when `q` is an integer.
pub fn largest_denominator_prime(q: &Rat) -> Result<Option<u64>, ExactError> {
    Ok(denominator_prime_powers(q)?.last().map(|&(p, _)| p))
}

struct SieveState {
    primes: Vec<u64>,
    limit: u64,
}

/// Growing cache of the prime sequence p_1 = 2, p_2 = 3, p_3 = 5, ...
///
/// Extension re-sieves to a doubled bound, so lookups are amortized cheap
/// and the cache only ever appends. Safe to share across threads.
///
/// `with_overrides` deliberately falsifies selected entries; it exists so
/// the self test can demonstrate that the verification suites catch a bad
/// prime table, and must never be used outside that negative control.
pub struct PrimeSeq {
    state: RwLock<SieveState>,
    overrides: BTreeMap<usize, u64>,
}

impl Default for PrimeSeq {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeSeq {
    pub fn new() -> Self {
        PrimeSeq {
            state: RwLock::new(SieveState {
                primes: Vec::new(),
                limit: 1,
            }),
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_overrides(overrides: BTreeMap<usize, u64>) -> Self {
        let mut seq = Self::new();
        seq.overrides = overrides;
        seq
    }

    pub fn is_tampered(&self) -> bool {
        !self.overrides.is_empty()
    }

    /// The i-th prime, 1-based: `nth(1) == 2`.
    pub fn nth(&self, i: usize) -> u64 {
        assert!(i >= 1, "prime indices are 1-based");
        if let Some(&v) = self.overrides.get(&i) {
            return v;
        }
        {
            let state = self.state.read().expect("prime cache poisoned");
            if i <= state.primes.len() {
                return state.primes[i - 1];
            }
        }
        let mut state = self.state.write().expect("prime cache poisoned");
        while state.primes.len() < i {
            let new_limit = (state.limit * 2).max(1 << 10);
            state.primes = sieve_upto(new_limit);
            state.limit = new_limit;
        }
        state.primes[i - 1]
    }

    /// First `n` primes as a vector.
    pub fn first(&self, n: usize) -> Vec<u64> {
        (1..=n).map(|i| self.nth(i)).collect()
    }
}

fn sieve_upto(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit];
    let mut primes = Vec::new();
    for n in 2..limit {
        if !composite[n] {
            primes.push(n as u64);
            let mut m = n * n;
            while m < limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

static SHARED: OnceLock<Arc<PrimeSeq>> = OnceLock::new();

/// Process-wide shared prime cache.
pub fn shared_primes() -> Arc<PrimeSeq> {
    SHARED.get_or_init(|| Arc::new(PrimeSeq::new())).clone()
}

/// The i-th prime from the shared cache.
pub fn nth_prime(i: usize) -> u64 {
    shared_primes().nth(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nth_prime_examples() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(2), 3);
        assert_eq!(nth_prime(3), 5);
        assert_eq!(nth_prime(4), 7);
        assert_eq!(nth_prime(25), 97);
    }

    /// Trial-division oracle, independent of both the sieve and the
    /// Miller-Rabin test used by the library.
    fn oracle_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn nth_prime_agrees_with_trial_division_oracle() {
        let seq = PrimeSeq::new();
        let mut expected = Vec::with_capacity(10_000);
        let mut n = 2u64;
        while expected.len() < 10_000 {
            if oracle_is_prime(n) {
                expected.push(n);
            }
            n += 1;
        }
        let got = seq.first(10_000);
        assert_eq!(got, expected);
        for w in got.windows(2) {
            assert!(w[0] < w[1], "prime sequence must be strictly increasing");
        }
    }

    #[test]
    fn overrides_corrupt_single_entries() {
        let seq = PrimeSeq::with_overrides(BTreeMap::from([(4, 9u64)]));
        assert_eq!(seq.nth(4), 9);
        assert_eq!(seq.nth(5), 11);
        assert!(seq.is_tampered());
    }

    #[test]
    fn padic_valuation_examples() {
        let q = Rat::new(5, 6).unwrap();
        assert_eq!(padic_valuation(&q, 2).unwrap(), -1);
        let q = Rat::new(9, 4).unwrap();
        assert_eq!(padic_valuation(&q, 3).unwrap(), 2);
        let q = Rat::one();
        assert_eq!(padic_valuation(&q, 7).unwrap(), 0);
        assert_eq!(
            padic_valuation(&Rat::zero(), 2),
            Err(ExactError::ZeroValuation)
        );
        assert_eq!(
            padic_valuation(&Rat::one(), 6),
            Err(ExactError::NotPrime(6))
        );
    }

    #[test]
    fn largest_denominator_prime_examples() {
        let q = Rat::new(5, 6).unwrap();
        assert_eq!(largest_denominator_prime(&q).unwrap(), Some(3));
        let q = Rat::new(41, 30).unwrap();
        assert_eq!(largest_denominator_prime(&q).unwrap(), Some(5));
        let q = Rat::from_integer(7);
        assert_eq!(largest_denominator_prime(&q).unwrap(), None);
    }

    #[test]
    fn rationals_reduce_at_construction() {
        let q = Rat::new(25, 30).unwrap();
        assert_eq!(q.to_string(), "5/6");
        assert_eq!(q, Rat::new(5, 6).unwrap());
        assert_eq!(Rat::new(14, 2).unwrap().to_string(), "7");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["5/6", "7", "0", "41/30", "1231/1249"] {
            let q: Rat = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        assert_eq!("25/30".parse::<Rat>().unwrap().to_string(), "5/6");
        assert!("-1/2".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn checked_sub_refuses_negative() {
        let a = Rat::new(1, 3).unwrap();
        let b = Rat::new(1, 2).unwrap();
        assert_eq!(a.checked_sub(&b), None);
        assert_eq!(b.checked_sub(&a).unwrap(), Rat::new(1, 6).unwrap());
    }

    #[test]
    fn factorization_reconstructs_value() {
        for n in [2u64, 60, 97, 1009 * 1013, 104729, 2 * 3 * 5 * 7 * 11 * 13] {
            let f = factor_u64(n);
            let back: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back, n);
            for p in f.keys() {
                assert!(is_prime(*p));
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn add_sub_round_trip(an in 0u64..1000, ad in 1u64..1000, bn in 0u64..1000, bd in 1u64..1000) {
            let a = Rat::new(an, ad).unwrap();
            let b = Rat::new(bn, bd).unwrap();
            let sum = &a + &b;
            proptest::prop_assert_eq!(sum.checked_sub(&b).unwrap(), a);
        }

        #[test]
        fn valuations_reconstruct_rational(n in 1u64..5000, d in 1u64..5000) {
            let q = Rat::new(n, d).unwrap();
            let mut primes: Vec<u64> = factor_u64(n).into_keys().collect();
            primes.extend(factor_u64(d).into_keys());
            primes.sort_unstable();
            primes.dedup();
            let mut back = BigRational::one();
            for p in primes {
                let v = padic_valuation(&q, p).unwrap();
                let pw = BigRational::from_integer(BigInt::from(p)).pow(v as i32);
                back *= pw;
            }
            proptest::prop_assert_eq!(&back, q.as_ratio());
        }

        #[test]
        fn mul_div_round_trip(an in 0u64..1000, ad in 1u64..1000, bn in 1u64..1000, bd in 1u64..1000) {
            let a = Rat::new(an, ad).unwrap();
            let b = Rat::new(bn, bd).unwrap();
            let product = &a * &b;
            proptest::prop_assert_eq!(product.div_exact(&b).unwrap(), a);
        }

        #[test]
        fn display_parse_round_trip(n in 0u64..100000, d in 1u64..100000) {
            let q = Rat::new(n, d).unwrap();
            let s = q.to_string();
            let back: Rat = s.parse().unwrap();
            proptest::prop_assert_eq!(back, q);
        }
    }
}

//! Brute-force oracle over finitely generated truncations of the monoid.
//!
//! Membership in the submonoid generated by the first n generators scales,
//! by the least common denominator, to an integer coin problem. The
//! dynamic program and the exhaustive enumeration here are deliberately
//! independent of the search strategy in [`crate::monoid`]; they are the
//! ground truth the property tests compare against.

use crate::exactnum::Rat;
use crate::monoid::{Certificate, GeneratorFamily};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

/// Default bound on the scaled DP target q·D.
pub const DEFAULT_DP_CAP: u64 = 10_000_000;

/// Default bound on how many certificates an enumeration returns.
pub const DEFAULT_ENUM_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("scaled target {required} exceeds the DP size cap {cap}")]
    Oversized { required: BigUint, cap: u64 },
    #[error("truncation wants {requested} generators but the family has {available}")]
    NotEnoughGenerators { requested: usize, available: usize },
    #[error("truncation must retain at least one generator")]
    EmptyTruncation,
    #[error("{generators} generators over scaled target {target} exceed the enumeration memory budget")]
    EnumerationTooLarge { generators: usize, target: u64 },
}

/// The finitely generated submonoid on the first `n` generators, with all
/// values scaled by D = lcm of the generator denominators so that
/// membership becomes integer representability.
pub struct Truncation {
    count: usize,
    denom_lcm: BigUint,
    scaled: Vec<BigUint>,
}

impl Truncation {
    pub fn new(family: &GeneratorFamily, n: usize) -> Result<Self, FactorError> {
        if n == 0 {
            return Err(FactorError::EmptyTruncation);
        }
        if let Some(len) = family.len() {
            if n > len {
                return Err(FactorError::NotEnoughGenerators {
                    requested: n,
                    available: len,
                });
            }
        }
        let gens: Vec<Rat> = (1..=n)
            .map(|i| family.generator(i).expect("index validated above"))
            .collect();
        let mut denom_lcm = BigUint::one();
        for g in &gens {
            denom_lcm = denom_lcm.lcm(&g.denom());
        }
        let scaled = gens
            .iter()
            .map(|g| (g.numer() * &denom_lcm) / g.denom())
            .collect();
        Ok(Truncation {
            count: n,
            denom_lcm,
            scaled,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.count
    }

    pub fn denominator_lcm(&self) -> &BigUint {
        &self.denom_lcm
    }

    pub fn scaled_generators(&self) -> &[BigUint] {
        &self.scaled
    }

    /// `q * D` when that is a nonnegative integer; `None` otherwise
    /// (in which case q is certainly not in the truncation).
    pub fn scaled_target(&self, q: &Rat) -> Option<BigUint> {
        let num = q.numer() * &self.denom_lcm;
        let (quot, rem) = num.div_rem(&q.denom());
        if rem.is_zero() {
            Some(quot)
        } else {
            None
        }
    }

    fn bounded_target(&self, q: &Rat, dp_cap: u64) -> Result<Option<u64>, FactorError> {
        let Some(big) = self.scaled_target(q) else {
            return Ok(None);
        };
        match big.to_u64() {
            Some(t) if t <= dp_cap => Ok(Some(t)),
            _ => Err(FactorError::Oversized {
                required: big,
                cap: dp_cap,
            }),
        }
    }

    /// Coins usable against a target `t`: (generator index - 1, scaled value).
    fn coins(&self, t: u64) -> Vec<(u32, u64)> {
        self.scaled
            .iter()
            .enumerate()
            .filter_map(|(j, c)| {
                c.to_u64()
                    .filter(|&c| c >= 1 && c <= t)
                    .map(|c| (j as u32, c))
            })
            .collect()
    }

    /// Exact membership of `q` in the truncation, with one certificate
    /// recovered by a smallest-index-first back-trace.
    pub fn oracle_membership(
        &self,
        q: &Rat,
        dp_cap: u64,
    ) -> Result<Option<Certificate>, FactorError> {
        if q.is_zero() {
            return Ok(Some(Certificate::new()));
        }
        let Some(t) = self.bounded_target(q, dp_cap)? else {
            return Ok(None);
        };
        let coins = self.coins(t);
        const UNREACHED: u32 = u32::MAX;
        let mut parent = vec![UNREACHED; t as usize + 1];
        for v in 1..=t as usize {
            for &(j, c) in &coins {
                let c = c as usize;
                if c <= v && (v == c || parent[v - c] != UNREACHED) {
                    parent[v] = j;
                    break;
                }
            }
        }
        if parent[t as usize] == UNREACHED {
            return Ok(None);
        }
        let mut cert = Certificate::new();
        let mut v = t as usize;
        while v > 0 {
            let j = parent[v];
            let (idx, coin) = coins[coins.binary_search_by_key(&j, |&(i, _)| i).unwrap()];
            cert.add(idx as usize + 1, 1);
            v -= coin as usize;
        }
        Ok(Some(cert))
    }

    /// All factorizations of `q` into generators of the truncation, in
    /// ascending lexicographic order of the count vector (k1, k2, ...).
    pub fn factorizations(
        &self,
        q: &Rat,
        cert_cap: usize,
        dp_cap: u64,
    ) -> Result<FactorizationSet, FactorError> {
        if q.is_zero() {
            return Ok(FactorizationSet {
                target: q.clone(),
                certificates: vec![Certificate::new()],
                complete: true,
            });
        }
        let Some(t) = self.bounded_target(q, dp_cap)? else {
            return Ok(FactorizationSet {
                target: q.clone(),
                certificates: Vec::new(),
                complete: true,
            });
        };
        let n = self.count;
        let words = t as usize / 64 + 1;
        if (n + 1).saturating_mul(words).saturating_mul(8) > 1 << 28 {
            return Err(FactorError::EnumerationTooLarge {
                generators: n,
                target: t,
            });
        }
        let coin_values: Vec<Option<u64>> = self
            .scaled
            .iter()
            .map(|c| c.to_u64().filter(|&c| c >= 1 && c <= t))
            .collect();

        // reach[j] = values representable with coins of index > j (0-based
        // j), i.e. the suffix starting at generator j+1.
        let mut reach = vec![BitRow::new(t as usize + 1); n + 1];
        reach[n].set(0);
        for j in (0..n).rev() {
            let mut row = reach[j + 1].clone();
            if let Some(c) = coin_values[j] {
                let c = c as usize;
                for v in c..=t as usize {
                    if row.get(v - c) {
                        row.set(v);
                    }
                }
            }
            reach[j] = row;
        }

        let mut certificates = Vec::new();
        let mut complete = true;
        let mut counts = vec![0u64; n];
        descend(
            0,
            t,
            &coin_values,
            &reach,
            &mut counts,
            &mut certificates,
            cert_cap,
            &mut complete,
        );
        Ok(FactorizationSet {
            target: q.clone(),
            certificates,
            complete,
        })
    }

    /// Reachability table over scaled values: `table[v]` is true when `v`
    /// is a sum of scaled generators. One table answers membership for
    /// every target up to `limit` at once.
    pub fn representable_table(&self, limit: u64, dp_cap: u64) -> Result<Vec<bool>, FactorError> {
        if limit > dp_cap {
            return Err(FactorError::Oversized {
                required: limit.into(),
                cap: dp_cap,
            });
        }
        let mut table = vec![false; limit as usize + 1];
        table[0] = true;
        for &(_, c) in &self.coins(limit) {
            let c = c as usize;
            for v in c..=limit as usize {
                if table[v - c] {
                    table[v] = true;
                }
            }
        }
        Ok(table)
    }

    /// Set of factorization lengths (sums of certificate counts) of `q`.
    /// Non-members yield the empty set; q = 0 yields {0}.
    pub fn length_set(
        &self,
        q: &Rat,
        cert_cap: usize,
        dp_cap: u64,
    ) -> Result<BTreeSet<u64>, FactorError> {
        Ok(self.factorizations(q, cert_cap, dp_cap)?.lengths())
    }
}

#[allow(clippy::too_many_arguments)]
fn descend(
    j: usize,
    rem: u64,
    coins: &[Option<u64>],
    reach: &[BitRow],
    counts: &mut Vec<u64>,
    out: &mut Vec<Certificate>,
    cert_cap: usize,
    complete: &mut bool,
) {
    if !*complete {
        return;
    }
    if !reach[j].get(rem as usize) {
        return;
    }
    if j == coins.len() {
        debug_assert_eq!(rem, 0);
        if out.len() == cert_cap {
            *complete = false;
            return;
        }
        let mut cert = Certificate::new();
        for (idx0, &k) in counts.iter().enumerate() {
            if k > 0 {
                cert.add(idx0 + 1, k);
            }
        }
        out.push(cert);
        return;
    }
    match coins[j] {
        None => {
            counts[j] = 0;
            descend(j + 1, rem, coins, reach, counts, out, cert_cap, complete);
        }
        Some(c) => {
            for k in 0..=rem / c {
                counts[j] = k;
                descend(
                    j + 1,
                    rem - k * c,
                    coins,
                    reach,
                    counts,
                    out,
                    cert_cap,
                    complete,
                );
                if !*complete {
                    break;
                }
            }
            counts[j] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationSet {
    pub target: Rat,
    pub certificates: Vec<Certificate>,
    pub complete: bool,
}

impl FactorizationSet {
    pub fn lengths(&self) -> BTreeSet<u64> {
        self.certificates
            .iter()
            .map(|c| c.total_length())
            .collect()
    }
}

#[derive(Clone)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(len: usize) -> Self {
        BitRow(vec![0; len / 64 + 1])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::PuiseuxMonoid;

    fn prime_pair_trunc(n: usize) -> Truncation {
        Truncation::new(&GeneratorFamily::prime_pair(), n).unwrap()
    }

    fn rat(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn cert(entries: &[(usize, u64)]) -> Certificate {
        let mut c = Certificate::new();
        for &(i, k) in entries {
            c.add(i, k);
        }
        c
    }

    #[test]
    fn scaling_matches_known_lcms() {
        let t2 = prime_pair_trunc(2);
        assert_eq!(t2.denominator_lcm(), &BigUint::from(210u32));
        let t4 = prime_pair_trunc(4);
        assert_eq!(t4.denominator_lcm(), &BigUint::from(30030u32));
        assert_eq!(
            t4.scaled_generators()
                .iter()
                .map(|c| c.to_u64().unwrap())
                .collect::<Vec<_>>(),
            vec![3003, 1430, 546, 330]
        );
    }

    #[test]
    fn oracle_membership_examples() {
        let t2 = prime_pair_trunc(2);
        let got = t2
            .oracle_membership(&rat("5/6"), DEFAULT_DP_CAP)
            .unwrap()
            .unwrap();
        assert_eq!(got, cert(&[(1, 5), (2, 7)]));
        assert_eq!(
            t2.oracle_membership(&rat("1/6"), DEFAULT_DP_CAP).unwrap(),
            None
        );
        assert_eq!(
            t2.oracle_membership(&Rat::zero(), DEFAULT_DP_CAP)
                .unwrap()
                .unwrap(),
            Certificate::new()
        );
    }

    #[test]
    fn oracle_certificates_reconstruct_target() {
        let monoid = PuiseuxMonoid::prime_pair();
        let t3 = prime_pair_trunc(3);
        for k in 0..=200u64 {
            let q = Rat::new(k, 30).unwrap();
            if let Some(c) = t3.oracle_membership(&q, DEFAULT_DP_CAP).unwrap() {
                assert_eq!(monoid.certificate_value(&c).unwrap(), q);
            }
        }
    }

    #[test]
    fn oversized_targets_are_refused_distinctly() {
        let t2 = prime_pair_trunc(2);
        let err = t2.oracle_membership(&rat("1000000"), 1000).unwrap_err();
        assert!(matches!(err, FactorError::Oversized { cap: 1000, .. }));
    }

    #[test]
    fn factorization_enumeration_examples() {
        let t3 = prime_pair_trunc(3);
        let fs = t3
            .factorizations(&rat("1/5"), DEFAULT_ENUM_CAP, DEFAULT_DP_CAP)
            .unwrap();
        assert!(fs.complete);
        // ascending lexicographic order of (k1, k2, k3)
        assert_eq!(fs.certificates, vec![cert(&[(3, 11)]), cert(&[(1, 2)])]);
        assert_eq!(
            fs.lengths().into_iter().collect::<Vec<_>>(),
            vec![2u64, 11]
        );

        let t2 = prime_pair_trunc(2);
        let fs = t2
            .factorizations(&rat("1/10"), DEFAULT_ENUM_CAP, DEFAULT_DP_CAP)
            .unwrap();
        assert!(fs.complete);
        assert_eq!(fs.certificates, vec![cert(&[(1, 1)])]);
        assert_eq!(fs.lengths().into_iter().collect::<Vec<_>>(), vec![1u64]);

        let fs = t3
            .factorizations(&rat("3/10"), DEFAULT_ENUM_CAP, DEFAULT_DP_CAP)
            .unwrap();
        assert!(fs.complete);
        assert_eq!(
            fs.certificates,
            vec![cert(&[(1, 1), (3, 11)]), cert(&[(1, 3)])]
        );
        assert_eq!(
            fs.lengths().into_iter().collect::<Vec<_>>(),
            vec![3u64, 12]
        );
    }

    #[test]
    fn length_set_of_a_lone_generator() {
        let t1 = prime_pair_trunc(1);
        let lengths = t1
            .length_set(&rat("1/10"), DEFAULT_ENUM_CAP, DEFAULT_DP_CAP)
            .unwrap();
        assert_eq!(lengths.into_iter().collect::<Vec<_>>(), vec![1u64]);
    }

    #[test]
    fn length_set_distinguishes_non_member_from_zero() {
        let t3 = prime_pair_trunc(3);
        let of_zero = t3
            .length_set(&Rat::zero(), DEFAULT_ENUM_CAP, DEFAULT_DP_CAP)
            .unwrap();
        assert_eq!(of_zero.into_iter().collect::<Vec<_>>(), vec![0u64]);
        let of_non_member = t3
            .length_set(&rat("1/6"), DEFAULT_ENUM_CAP, DEFAULT_DP_CAP)
            .unwrap();
        assert!(of_non_member.is_empty());
    }

    #[test]
    fn enumeration_cap_marks_incomplete() {
        let t1 = prime_pair_trunc(1);
        // 100/10: the only factorization is {1:100}; cap 0 forces truncation
        let fs = t1.factorizations(&rat("10"), 0, DEFAULT_DP_CAP).unwrap();
        assert!(!fs.complete);
        assert!(fs.certificates.is_empty());
    }

    #[test]
    fn dp_and_enumeration_agree_on_small_truncations() {
        for n in 1..=3usize {
            let trunc = prime_pair_trunc(n);
            let d = trunc.denominator_lcm().to_u64().unwrap();
            for k in 0..=2 * d {
                let q = Rat::from_big(k.into(), d.into()).unwrap();
                let dp = trunc.oracle_membership(&q, DEFAULT_DP_CAP).unwrap();
                let en = trunc.factorizations(&q, 1, DEFAULT_DP_CAP).unwrap();
                assert_eq!(
                    dp.is_some(),
                    !en.certificates.is_empty(),
                    "disagreement at n={n}, q={k}/{d}"
                );
            }
        }
    }

    #[test]
    fn membership_is_monotone_in_truncation_size() {
        let t2 = prime_pair_trunc(2);
        let t4 = prime_pair_trunc(4);
        for k in 0..=420u64 {
            let q = Rat::new(k, 210).unwrap();
            if t2.oracle_membership(&q, DEFAULT_DP_CAP).unwrap().is_some() {
                assert!(
                    t4.oracle_membership(&q, DEFAULT_DP_CAP).unwrap().is_some(),
                    "member at n=2 but not n=4: {q}"
                );
            }
        }
    }
}

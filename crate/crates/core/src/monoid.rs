//! The Puiseux monoid core: generator families, membership with
//! certificates, divisibility, atom verification, and the ascending chain
//! of principal ideals that never stabilizes.
//!
//! All positive verdicts carry certificates that reconstruct the queried
//! value exactly. Negative verdicts are returned only when they are sound
//! for the full monoid (a p-adic valuation obstruction, a negative
//! difference, or an exhausted finite family); everything else is
//! `Unknown` with the budget echoed.

use crate::exactnum::{
    denominator_prime_powers, is_prime, padic_valuation, shared_primes, ExactError, PrimeSeq, Rat,
};
use crate::factor::{FactorError, Truncation, DEFAULT_DP_CAP, DEFAULT_ENUM_CAP};
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonoidError {
    #[error("generator index {0} is out of range for this family")]
    IndexOutOfRange(usize),
    #[error("operation is defined only for the prime-pair family")]
    NotPrimePair,
    #[error("generator {0} is not strictly positive")]
    NonPositiveGenerator(String),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("0 is the unit of the monoid; it is neither an atom nor decomposable")]
    ZeroIsUnit,
    #[error("{value} is not in the monoid ({obstruction})")]
    NotInMonoid {
        value: String,
        obstruction: Obstruction,
    },
    #[error("atom verification failed at index {index}: {reason}")]
    AtomFalsified { index: usize, reason: String },
    #[error("chain verification failed at link {index}: {reason}")]
    ChainFalsified { index: usize, reason: String },
    #[error("invalid family config: {0}")]
    Config(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Finite multiset of generator indices with positive counts; witnesses
/// that sum(count_i * g_i) equals a target value.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Certificate {
    entries: BTreeMap<usize, u64>,
}

impl Certificate {
    pub fn new() -> Self {
        Certificate::default()
    }

    pub fn from_entries(
        entries: impl IntoIterator<Item = (usize, u64)>,
    ) -> Result<Self, MonoidError> {
        let mut cert = Certificate::new();
        for (i, k) in entries {
            if i == 0 {
                return Err(MonoidError::IndexOutOfRange(0));
            }
            if k == 0 {
                continue;
            }
            cert.add(i, k);
        }
        Ok(cert)
    }

    /// Accumulate `count` more copies of generator `index`.
    pub fn add(&mut self, index: usize, count: u64) {
        if count > 0 {
            *self.entries.entry(index).or_insert(0) += count;
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.entries.iter().map(|(&i, &k)| (i, k))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Number of atoms counted with multiplicity.
    pub fn total_length(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Split into two nonzero parts: a single repeated generator peels one
    /// copy off; several generators peel the whole lowest-index block.
    pub fn split(&self) -> Option<(Certificate, Certificate)> {
        if self.total_length() < 2 {
            return None;
        }
        let mut left = Certificate::new();
        let mut right = self.clone();
        let (&i, &k) = self.entries.iter().next().expect("nonempty");
        if self.support_size() == 1 {
            left.add(i, 1);
            right.entries.remove(&i);
            right.add(i, k - 1);
        } else {
            left.add(i, k);
            right.entries.remove(&i);
        }
        Some((left, right))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, (i, k)) in self.entries().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}:{k}")?;
        }
        write!(f, "}}")
    }
}

/// How far a search is allowed to look, echoed verbatim in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_index: usize,
    pub notes: Option<String>,
}

impl SearchBudget {
    pub fn new(max_index: usize) -> Self {
        assert!(max_index >= 1, "budgets explore at least one generator");
        SearchBudget {
            max_index,
            notes: None,
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = Some(notes.into());
        self
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(8)
    }
}

/// Why a query is certainly not a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// v_prime(q) is below the floor any generator combination can reach;
    /// sound for the full monoid, not just a truncation.
    Valuation { prime: u64, valuation: i64, floor: i64 },
    /// The queried difference is negative.
    ValueBound,
    /// A finite family was searched exhaustively.
    ExhaustiveSearch { max_index: usize },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Valuation {
                prime,
                valuation,
                floor,
            } => write!(
                f,
                "valuation obstruction at p={prime}: v={valuation} but no sum of generators goes below {floor}"
            ),
            Obstruction::ValueBound => write!(f, "value bound: the difference is negative"),
            Obstruction::ExhaustiveSearch { max_index } => {
                write!(f, "exhaustive search over all {max_index} generators")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MembershipOutcome {
    Member { certificate: Certificate },
    NotMember { obstruction: Obstruction },
    Unknown { budget: SearchBudget },
}

impl MembershipOutcome {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipOutcome::Member { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            MembershipOutcome::Member { certificate } => Some(certificate),
            _ => None,
        }
    }
}

/// Indexed family of positive rational generators.
#[derive(Clone)]
pub enum GeneratorFamily {
    /// g_i = 1/(p_i * p_(i+2)) over the prime sequence; infinite.
    PrimePair { primes: Arc<PrimeSeq> },
    /// An explicit finite list of positive rationals.
    ExplicitFinite { generators: Arc<Vec<Rat>> },
}

impl GeneratorFamily {
    pub fn prime_pair() -> Self {
        GeneratorFamily::PrimePair {
            primes: shared_primes(),
        }
    }

    pub fn prime_pair_with(primes: Arc<PrimeSeq>) -> Self {
        GeneratorFamily::PrimePair { primes }
    }

    pub fn explicit(generators: Vec<Rat>) -> Result<Self, MonoidError> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if g.is_zero() {
                return Err(MonoidError::NonPositiveGenerator(g.to_string()));
            }
            if !seen.insert(g.clone()) {
                return Err(MonoidError::DuplicateGenerator(g.to_string()));
            }
        }
        Ok(GeneratorFamily::ExplicitFinite {
            generators: Arc::new(generators),
        })
    }

    /// Loads `{"family": "prime-pair"}` or `{"generators": ["1/10", ...]}`.
    pub fn from_json_config(text: &str) -> Result<Self, MonoidError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| MonoidError::Config(e.to_string()))?;
        if let Some(fam) = value.get("family") {
            return match fam.as_str() {
                Some("prime-pair") => Ok(GeneratorFamily::prime_pair()),
                other => Err(MonoidError::Config(format!(
                    "unknown family {other:?}; expected \"prime-pair\""
                ))),
            };
        }
        if let Some(gens) = value.get("generators") {
            let arr = gens
                .as_array()
                .ok_or_else(|| MonoidError::Config("\"generators\" must be an array".into()))?;
            let mut parsed = Vec::with_capacity(arr.len());
            for item in arr {
                let s = item
                    .as_str()
                    .ok_or_else(|| MonoidError::Config("generators must be strings".into()))?;
                let q: Rat = s
                    .parse()
                    .map_err(|e: ExactError| MonoidError::Config(e.to_string()))?;
                parsed.push(q);
            }
            return GeneratorFamily::explicit(parsed);
        }
        Err(MonoidError::Config(
            "expected a \"family\" or \"generators\" key".into(),
        ))
    }

    /// The i-th generator (1-based).
    pub fn generator(&self, i: usize) -> Result<Rat, MonoidError> {
        if i == 0 {
            return Err(MonoidError::IndexOutOfRange(i));
        }
        match self {
            GeneratorFamily::PrimePair { primes } => {
                let den = BigUint::from(primes.nth(i)) * BigUint::from(primes.nth(i + 2));
                Ok(Rat::from_big(One::one(), den.into())
                    .expect("positive denominator"))
            }
            GeneratorFamily::ExplicitFinite { generators } => generators
                .get(i - 1)
                .cloned()
                .ok_or(MonoidError::IndexOutOfRange(i)),
        }
    }

    /// Number of generators, `None` for the infinite prime-pair family.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match self {
            GeneratorFamily::PrimePair { .. } => None,
            GeneratorFamily::ExplicitFinite { generators } => Some(generators.len()),
        }
    }

    pub fn is_prime_pair(&self) -> bool {
        matches!(self, GeneratorFamily::PrimePair { .. })
    }

    pub fn primes(&self) -> Option<&Arc<PrimeSeq>> {
        match self {
            GeneratorFamily::PrimePair { primes } => Some(primes),
            GeneratorFamily::ExplicitFinite { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GeneratorFamily::PrimePair { .. } => "prime-pair".to_string(),
            GeneratorFamily::ExplicitFinite { generators } => {
                format!("explicit({} generators)", generators.len())
            }
        }
    }
}

/// Proof trace for "the i-th prime-pair generator is an atom".
///
/// The two facts recorded are the whole argument: a proper decomposition
/// of g_i could only use generators of index strictly above i (all earlier
/// ones, and g_i itself, are too large), yet every generator above index i
/// has both denominator primes >= p_(i+1) > p_i, so no finite sum of them
/// carries p_i in its reduced denominator -- while v_(p_i)(g_i) = -1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomTrace {
    pub index: usize,
    pub value: Rat,
    pub base_prime: u64,
    pub partner_prime: u64,
    pub smaller_generators_checked: usize,
    pub min_denominator_prime_beyond: u64,
    pub required_valuation: i64,
}

impl fmt::Display for AtomTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g_{} = {} is an atom: the {} earlier generators all exceed it, \
             so a proper decomposition could only use indices > {}; every such \
             generator has denominator primes >= {} > {}, hence no sum of them \
             has {} in its reduced denominator, but v_{}(g_{}) = {}",
            self.index,
            self.value,
            self.smaller_generators_checked,
            self.index,
            self.min_denominator_prime_beyond,
            self.base_prime,
            self.base_prime,
            self.base_prime,
            self.index,
            self.required_valuation,
        )
    }
}

/// Why an element was certified as an atom.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum AtomBasis {
    /// The prime-pair denominator argument; sound for the full monoid.
    ValuationArgument { trace: AtomTrace },
    /// Every factorization of a finite family was enumerated.
    ExhaustiveSearch { max_index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AtomVerdict {
    Atom { basis: AtomBasis },
    /// A concrete split q = left + right into nonzero members.
    Composite {
        left: Certificate,
        right: Certificate,
    },
    Unknown { budget: SearchBudget },
}

/// One verified link of the ascending chain (c_i) subset (c_(i+1)).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainLinkReport {
    pub index: usize,
    pub element: Rat,
    pub successor: Rat,
    pub element_certificate: Certificate,
    pub successor_certificate: Certificate,
    pub inclusion_certificate: Certificate,
    pub strict: bool,
}

/// Aggregate of verified chain links 1..=length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainWitness {
    pub length: usize,
    pub all_strict: bool,
    pub statement: String,
    pub links: Vec<ChainLinkReport>,
}

/// The additive submonoid of the nonnegative rationals generated by a
/// [`GeneratorFamily`]; contains 0, and 0 is its only unit.
#[derive(Clone)]
pub struct PuiseuxMonoid {
    family: GeneratorFamily,
    dp_cap: u64,
}

impl PuiseuxMonoid {
    pub fn prime_pair() -> Self {
        PuiseuxMonoid::new(GeneratorFamily::prime_pair())
    }

    pub fn new(family: GeneratorFamily) -> Self {
        PuiseuxMonoid {
            family,
            dp_cap: DEFAULT_DP_CAP,
        }
    }

    /// Override the DP size cap (scaled targets above it are refused).
    pub fn with_dp_cap(mut self, cap: u64) -> Self {
        self.dp_cap = cap;
        self
    }

    pub fn family(&self) -> &GeneratorFamily {
        &self.family
    }

    pub fn dp_cap(&self) -> u64 {
        self.dp_cap
    }

    pub fn generator_value(&self, i: usize) -> Result<Rat, MonoidError> {
        self.family.generator(i)
    }

    /// Exact value sum(count_i * g_i) of a certificate.
    pub fn certificate_value(&self, cert: &Certificate) -> Result<Rat, MonoidError> {
        let mut acc = Rat::zero();
        for (i, k) in cert.entries() {
            acc = &acc + &self.generator_value(i)?.scaled(k);
        }
        Ok(acc)
    }

    /// The lowest p-adic valuation any sum of generators can attain.
    ///
    /// Sums only raise valuations: v_p(a + b) >= min(v_p(a), v_p(b)) and
    /// counts contribute nonnegatively, so min(0, min_j v_p(g_j)) is a
    /// floor for the whole monoid. For the prime-pair family every
    /// generator denominator is squarefree, so the floor is -1 at every
    /// prime.
    fn valuation_floor(&self, p: u64) -> i64 {
        match &self.family {
            GeneratorFamily::PrimePair { .. } => -1,
            GeneratorFamily::ExplicitFinite { generators } => generators
                .iter()
                .filter_map(|g| padic_valuation(g, p).ok())
                .min()
                .unwrap_or(0)
                .min(0),
        }
    }

    fn valuation_screen(&self, q: &Rat) -> Option<Obstruction> {
        if let Some(primes) = self.family.primes() {
            // A tampered table (negative-control hook) invalidates the
            // squarefree-denominator floor; skip the screen entirely.
            if primes.is_tampered() {
                return None;
            }
        }
        let factors = denominator_prime_powers(q).ok()?;
        for (p, e) in factors {
            let floor = self.valuation_floor(p);
            let v = -(e as i64);
            if v < floor {
                return Some(Obstruction::Valuation {
                    prime: p,
                    valuation: v,
                    floor,
                });
            }
        }
        None
    }

    /// Decide q in M under the budget: a full-monoid valuation screen,
    /// then a scan for single-generator multiples k*g_n (cheap, and the
    /// only route that reaches deep indices where scaled DP instances are
    /// astronomically oversized), then iterative deepening over the DP
    /// oracle. Negative answers are only returned when sound; otherwise
    /// Unknown.
    pub fn membership(&self, q: &Rat, budget: &SearchBudget) -> MembershipOutcome {
        if q.is_zero() {
            return MembershipOutcome::Member {
                certificate: Certificate::new(),
            };
        }
        if let Some(obstruction) = self.valuation_screen(q) {
            return MembershipOutcome::NotMember { obstruction };
        }
        let deepest = match self.family.len() {
            Some(len) => len.min(budget.max_index),
            None => budget.max_index,
        };
        for n in 1..=deepest {
            if let Ok(g) = self.generator_value(n) {
                if let Ok(ratio) = q.div_exact(&g) {
                    if let Some(k) = ratio.to_u64_if_integer() {
                        if k >= 1 {
                            let mut certificate = Certificate::new();
                            certificate.add(n, k);
                            return MembershipOutcome::Member { certificate };
                        }
                    }
                }
            }
        }
        let mut skipped_oversized = false;
        for n in 1..=deepest {
            if let Ok(trunc) = Truncation::new(&self.family, n) {
                match trunc.oracle_membership(q, self.dp_cap) {
                    Ok(Some(certificate)) => {
                        return MembershipOutcome::Member { certificate };
                    }
                    Ok(None) => {}
                    Err(FactorError::Oversized { .. }) => skipped_oversized = true,
                    Err(_) => {}
                }
            }
        }
        match self.family.len() {
            Some(len) if deepest == len && !skipped_oversized => MembershipOutcome::NotMember {
                obstruction: Obstruction::ExhaustiveSearch { max_index: len },
            },
            _ => MembershipOutcome::Unknown {
                budget: budget.clone(),
            },
        }
    }

    /// Does `a` divide `b` in M, i.e. is b - a in M? Negative differences
    /// are rejected by value bound; otherwise delegates to membership.
    pub fn divides(&self, a: &Rat, b: &Rat, budget: &SearchBudget) -> MembershipOutcome {
        match b.checked_sub(a) {
            None => MembershipOutcome::NotMember {
                obstruction: Obstruction::ValueBound,
            },
            Some(difference) => self.membership(&difference, budget),
        }
    }

    /// Verify that the i-th prime-pair generator is an atom, returning the
    /// proof trace; fails with a falsification report if any underlying
    /// fact about the prime table does not hold.
    pub fn is_atom_generator(&self, i: usize) -> Result<AtomTrace, MonoidError> {
        let primes = match &self.family {
            GeneratorFamily::PrimePair { primes } => primes,
            GeneratorFamily::ExplicitFinite { .. } => return Err(MonoidError::NotPrimePair),
        };
        if i == 0 {
            return Err(MonoidError::IndexOutOfRange(i));
        }
        let falsified = |reason: String| MonoidError::AtomFalsified { index: i, reason };
        let p = [primes.nth(i), primes.nth(i + 1), primes.nth(i + 2)];
        for (offset, &value) in p.iter().enumerate() {
            if !is_prime(value) {
                return Err(falsified(format!(
                    "prime table entry {} = {} is not prime",
                    i + offset,
                    value
                )));
            }
        }
        if !(p[0] < p[1] && p[1] < p[2]) {
            return Err(falsified(format!(
                "prime table is not strictly increasing at indices {}..={}: {:?}",
                i,
                i + 2,
                p
            )));
        }
        let value = self.generator_value(i)?;
        let mut smaller_generators_checked = 0;
        for j in 1..i {
            let g_j = self.generator_value(j)?;
            if g_j <= value {
                return Err(falsified(format!(
                    "generator g_{j} = {g_j} does not exceed g_{i} = {value}"
                )));
            }
            smaller_generators_checked += 1;
        }
        let required_valuation = padic_valuation(&value, p[0])?;
        if required_valuation != -1 {
            return Err(falsified(format!(
                "v_{}(g_{}) = {} instead of -1",
                p[0], i, required_valuation
            )));
        }
        Ok(AtomTrace {
            index: i,
            value,
            base_prime: p[0],
            partner_prime: p[2],
            smaller_generators_checked,
            min_denominator_prime_beyond: p[1],
            required_valuation,
        })
    }

    /// Atom test for an arbitrary member. `false` verdicts always carry an
    /// explicit split into two nonzero members; `true` verdicts rest on the
    /// valuation argument (prime-pair generators) or exhaustive enumeration
    /// (finite families). Non-members and 0 are rejected distinctly.
    pub fn is_atom(&self, q: &Rat, budget: &SearchBudget) -> Result<AtomVerdict, MonoidError> {
        if q.is_zero() {
            return Err(MonoidError::ZeroIsUnit);
        }
        match self.membership(q, budget) {
            MembershipOutcome::NotMember { obstruction } => Err(MonoidError::NotInMonoid {
                value: q.to_string(),
                obstruction,
            }),
            MembershipOutcome::Unknown { budget } => Ok(AtomVerdict::Unknown { budget }),
            MembershipOutcome::Member { certificate } => {
                if certificate.total_length() >= 2 {
                    let (left, right) = certificate.split().expect("length >= 2");
                    return Ok(AtomVerdict::Composite { left, right });
                }
                let (index, _) = certificate.entries().next().expect("nonzero member");
                match &self.family {
                    GeneratorFamily::PrimePair { .. } => Ok(AtomVerdict::Atom {
                        basis: AtomBasis::ValuationArgument {
                            trace: self.is_atom_generator(index)?,
                        },
                    }),
                    GeneratorFamily::ExplicitFinite { generators } => {
                        let n = generators.len();
                        let trunc = Truncation::new(&self.family, n)?;
                        let found = trunc.factorizations(q, DEFAULT_ENUM_CAP, self.dp_cap)?;
                        if let Some(split) = found
                            .certificates
                            .iter()
                            .find(|c| c.total_length() >= 2)
                            .and_then(|c| c.split())
                        {
                            Ok(AtomVerdict::Composite {
                                left: split.0,
                                right: split.1,
                            })
                        } else if found.complete {
                            Ok(AtomVerdict::Atom {
                                basis: AtomBasis::ExhaustiveSearch { max_index: n },
                            })
                        } else {
                            Ok(AtomVerdict::Unknown {
                                budget: budget.clone(),
                            })
                        }
                    }
                }
            }
        }
    }

    /// c_i = 1/p_i + 1/p_(i+1), the generator of the i-th principal ideal
    /// in the non-stationary chain. Prime-pair family only.
    pub fn chain_element(&self, i: usize) -> Result<Rat, MonoidError> {
        let primes = self
            .family
            .primes()
            .ok_or(MonoidError::NotPrimePair)?;
        if i == 0 {
            return Err(MonoidError::IndexOutOfRange(i));
        }
        let a = Rat::from_big(One::one(), primes.nth(i).into())?;
        let b = Rat::from_big(One::one(), primes.nth(i + 1).into())?;
        Ok(&a + &b)
    }

    /// Verify the inclusion (c_i) subset (c_(i+1)) with exact arithmetic:
    /// membership certificates for both elements, the inclusion certificate
    /// {i: p_(i+2) - p_i}, and strictness of the reverse direction.
    pub fn verify_chain_link(&self, i: usize) -> Result<ChainLinkReport, MonoidError> {
        let primes = self
            .family
            .primes()
            .ok_or(MonoidError::NotPrimePair)?
            .clone();
        if i == 0 {
            return Err(MonoidError::IndexOutOfRange(i));
        }
        let falsified = |reason: String| MonoidError::ChainFalsified { index: i, reason };
        let p: Vec<u64> = (0..5).map(|off| primes.nth(i + off)).collect();
        for (offset, &value) in p.iter().enumerate() {
            if !is_prime(value) {
                return Err(falsified(format!(
                    "prime table entry {} = {} is not prime",
                    i + offset,
                    value
                )));
            }
        }
        if !p.windows(2).all(|w| w[0] < w[1]) {
            return Err(falsified(format!(
                "prime table is not strictly increasing at indices {}..={}: {:?}",
                i,
                i + 4,
                p
            )));
        }

        let element = self.chain_element(i)?;
        let successor = self.chain_element(i + 1)?;

        // 1/p_i = p_(i+2) * g_i and 1/p_(i+1) = p_(i+3) * g_(i+1)
        let element_certificate = Certificate::from_entries([(i, p[2]), (i + 1, p[3])])?;
        if self.certificate_value(&element_certificate)? != element {
            return Err(falsified(format!(
                "certificate {element_certificate} does not reconstruct c_{i} = {element}"
            )));
        }
        let successor_certificate = Certificate::from_entries([(i + 1, p[3]), (i + 2, p[4])])?;
        if self.certificate_value(&successor_certificate)? != successor {
            return Err(falsified(format!(
                "certificate {successor_certificate} does not reconstruct c_{} = {successor}",
                i + 1
            )));
        }

        // c_i = c_(i+1) + (p_(i+2) - p_i) * g_i
        let inclusion_certificate = Certificate::from_entries([(i, p[2] - p[0])])?;
        let rebuilt = &successor + &self.certificate_value(&inclusion_certificate)?;
        if rebuilt != element {
            return Err(falsified(format!(
                "c_{} + {inclusion_certificate} = {rebuilt} differs from c_{i} = {element}",
                i + 1
            )));
        }

        let strict = matches!(
            self.divides(&element, &successor, &SearchBudget::new(1)),
            MembershipOutcome::NotMember {
                obstruction: Obstruction::ValueBound
            }
        );
        Ok(ChainLinkReport {
            index: i,
            element,
            successor,
            element_certificate,
            successor_certificate,
            inclusion_certificate,
            strict,
        })
    }

    /// Verify links 1..=n of the chain; the aggregate is a witness that
    /// the ascending chain of principal ideals does not stabilize within
    /// its first n steps.
    pub fn accp_witness(&self, n: usize) -> Result<ChainWitness, MonoidError> {
        let links: Vec<ChainLinkReport> = (1..=n)
            .map(|i| self.verify_chain_link(i))
            .collect::<Result<_, _>>()?;
        let all_strict = links.iter().all(|link| link.strict);
        let statement = if all_strict {
            format!(
                "all {n} inclusions (c_i) <= (c_(i+1)) are strict, so the ascending chain \
                 of principal ideals does not become stationary within its first {n} steps"
            )
        } else {
            format!("chain verification found a non-strict link among the first {n}")
        };
        Ok(ChainWitness {
            length: n,
            all_strict,
            statement,
            links,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::largest_denominator_prime;

    fn rat(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn cert(entries: &[(usize, u64)]) -> Certificate {
        Certificate::from_entries(entries.iter().copied()).unwrap()
    }

    fn monoid() -> PuiseuxMonoid {
        PuiseuxMonoid::prime_pair()
    }

    #[test]
    fn generator_values() {
        let m = monoid();
        assert_eq!(m.generator_value(1).unwrap(), rat("1/10"));
        assert_eq!(m.generator_value(2).unwrap(), rat("1/21"));
        assert_eq!(m.generator_value(3).unwrap(), rat("1/55"));
    }

    #[test]
    fn generator_values_strictly_decrease() {
        let m = monoid();
        let mut prev = m.generator_value(1).unwrap();
        for i in 2..=1000 {
            let g = m.generator_value(i).unwrap();
            assert!(g < prev, "g_{i} not smaller than g_{}", i - 1);
            prev = g;
        }
    }

    #[test]
    fn explicit_family_rejects_bad_generators() {
        assert!(matches!(
            GeneratorFamily::explicit(vec![rat("1/10"), Rat::zero()]),
            Err(MonoidError::NonPositiveGenerator(_))
        ));
        assert!(matches!(
            GeneratorFamily::explicit(vec![rat("1/10"), rat("2/20")]),
            Err(MonoidError::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn family_config_round_trip() {
        let fam = GeneratorFamily::from_json_config(r#"{"family": "prime-pair"}"#).unwrap();
        assert!(fam.is_prime_pair());
        let fam =
            GeneratorFamily::from_json_config(r#"{"generators": ["1/10", "1/21"]}"#).unwrap();
        assert_eq!(fam.len(), Some(2));
        assert_eq!(fam.generator(2).unwrap(), rat("1/21"));
        assert!(GeneratorFamily::from_json_config(r#"{"family": "unknown"}"#).is_err());
        assert!(GeneratorFamily::from_json_config(r#"{}"#).is_err());
    }

    #[test]
    fn certificate_value_examples() {
        let m = monoid();
        assert_eq!(
            m.certificate_value(&cert(&[(1, 5), (2, 7)])).unwrap(),
            rat("5/6")
        );
        assert_eq!(m.certificate_value(&Certificate::new()).unwrap(), Rat::zero());
        assert_eq!(m.certificate_value(&cert(&[(1, 10)])).unwrap(), Rat::one());
    }

    #[test]
    fn certificate_serialization_uses_string_keys() {
        let c = cert(&[(1, 5), (2, 7)]);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"1":5,"2":7}"#);
        let back: Certificate = serde_json::from_str(r#"{"1":5,"2":7}"#).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn membership_examples() {
        let m = monoid();
        let budget = SearchBudget::default();
        let outcome = m.membership(&rat("5/6"), &budget);
        assert_eq!(
            outcome,
            MembershipOutcome::Member {
                certificate: cert(&[(1, 5), (2, 7)])
            }
        );
        let outcome = m.membership(&rat("1/4"), &budget);
        assert_eq!(
            outcome,
            MembershipOutcome::NotMember {
                obstruction: Obstruction::Valuation {
                    prime: 2,
                    valuation: -2,
                    floor: -1
                }
            }
        );
        let outcome = m.membership(&rat("1/10"), &budget);
        assert_eq!(
            outcome,
            MembershipOutcome::Member {
                certificate: cert(&[(1, 1)])
            }
        );
        assert_eq!(
            m.membership(&Rat::zero(), &budget),
            MembershipOutcome::Member {
                certificate: Certificate::new()
            }
        );
    }

    #[test]
    fn membership_certificates_reconstruct_the_query() {
        let m = monoid();
        let budget = SearchBudget::default();
        for k in 0..=60u64 {
            let q = Rat::new(k, 30).unwrap();
            if let MembershipOutcome::Member { certificate } = m.membership(&q, &budget) {
                assert_eq!(m.certificate_value(&certificate).unwrap(), q);
            }
        }
    }

    #[test]
    fn membership_unknown_echoes_budget() {
        let m = monoid();
        let budget = SearchBudget::new(1).with_notes("starved");
        // 1/21 is g_2; with max_index = 1 the search cannot see it and the
        // valuation screen does not apply (denominator squarefree).
        let outcome = m.membership(&rat("1/21"), &budget);
        assert_eq!(outcome, MembershipOutcome::Unknown { budget });
    }

    #[test]
    fn explicit_family_membership_is_decidable() {
        let fam = GeneratorFamily::explicit(vec![rat("1/10"), rat("1/21")]).unwrap();
        let m = PuiseuxMonoid::new(fam);
        let budget = SearchBudget::default();
        assert!(m.membership(&rat("5/6"), &budget).is_member());
        assert_eq!(
            m.membership(&rat("1/6"), &budget),
            MembershipOutcome::NotMember {
                obstruction: Obstruction::ExhaustiveSearch { max_index: 2 }
            }
        );
        // 1/5 = 2 * (1/10) is a member; 1/49 overshoots the floor at 7 and
        // 1/11 needs a prime no generator carries at all
        assert_eq!(
            m.membership(&rat("1/5"), &budget),
            MembershipOutcome::Member {
                certificate: cert(&[(1, 2)])
            }
        );
        assert_eq!(
            m.membership(&rat("1/49"), &budget),
            MembershipOutcome::NotMember {
                obstruction: Obstruction::Valuation {
                    prime: 7,
                    valuation: -2,
                    floor: -1
                }
            }
        );
        assert_eq!(
            m.membership(&rat("1/11"), &budget),
            MembershipOutcome::NotMember {
                obstruction: Obstruction::Valuation {
                    prime: 11,
                    valuation: -1,
                    floor: 0
                }
            }
        );
    }

    #[test]
    fn divides_examples() {
        let m = monoid();
        let budget = SearchBudget::default();
        let c1 = rat("5/6");
        let c2 = rat("8/15");
        assert_eq!(
            m.divides(&c2, &c1, &budget),
            MembershipOutcome::Member {
                certificate: cert(&[(1, 3)])
            }
        );
        assert_eq!(
            m.divides(&c1, &c2, &budget),
            MembershipOutcome::NotMember {
                obstruction: Obstruction::ValueBound
            }
        );
        assert_eq!(
            m.divides(&Rat::zero(), &rat("1/10"), &budget),
            MembershipOutcome::Member {
                certificate: cert(&[(1, 1)])
            }
        );
    }

    #[test]
    fn divides_is_antisymmetric_on_samples() {
        let m = monoid();
        let budget = SearchBudget::default();
        let values = [Rat::zero(), rat("1/10"), rat("1/5"), rat("5/6"), rat("8/15")];
        for a in &values {
            for b in &values {
                let ab = m.divides(a, b, &budget).is_member();
                let ba = m.divides(b, a, &budget).is_member();
                if ab && ba {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn atom_generator_traces() {
        let m = monoid();
        let t1 = m.is_atom_generator(1).unwrap();
        assert_eq!(t1.base_prime, 2);
        assert_eq!(t1.partner_prime, 5);
        assert_eq!(t1.min_denominator_prime_beyond, 3);
        assert_eq!(t1.smaller_generators_checked, 0);
        let t7 = m.is_atom_generator(7).unwrap();
        assert_eq!(t7.base_prime, 17);
        assert_eq!(t7.partner_prime, 23);
        assert_eq!(t7.smaller_generators_checked, 6);
        assert!(m
            .is_atom_generator(2)
            .unwrap()
            .to_string()
            .contains("atom"));
    }

    #[test]
    fn atom_generator_rejects_explicit_families() {
        let fam = GeneratorFamily::explicit(vec![rat("1/10")]).unwrap();
        let m = PuiseuxMonoid::new(fam);
        assert!(matches!(
            m.is_atom_generator(1),
            Err(MonoidError::NotPrimePair)
        ));
    }

    #[test]
    fn corrupted_prime_table_is_caught() {
        let primes = Arc::new(PrimeSeq::with_overrides(
            [(4usize, 9u64)].into_iter().collect(),
        ));
        let m = PuiseuxMonoid::new(GeneratorFamily::prime_pair_with(primes));
        let err = m.is_atom_generator(2).unwrap_err();
        assert!(matches!(err, MonoidError::AtomFalsified { index: 2, .. }));
        let err = m.verify_chain_link(1).unwrap_err();
        assert!(matches!(err, MonoidError::ChainFalsified { index: 1, .. }));
    }

    #[test]
    fn is_atom_examples() {
        let m = monoid();
        let budget = SearchBudget::default();
        match m.is_atom(&rat("1/5"), &budget).unwrap() {
            AtomVerdict::Composite { left, right } => {
                assert_eq!(left, cert(&[(1, 1)]));
                assert_eq!(right, cert(&[(1, 1)]));
            }
            other => panic!("expected composite, got {other:?}"),
        }
        match m.is_atom(&rat("1/10"), &budget).unwrap() {
            AtomVerdict::Atom {
                basis: AtomBasis::ValuationArgument { trace },
            } => assert_eq!(trace.index, 1),
            other => panic!("expected atom, got {other:?}"),
        }
        match m.is_atom(&rat("5/6"), &budget).unwrap() {
            AtomVerdict::Composite { left, right } => {
                assert_eq!(left, cert(&[(1, 5)]));
                assert_eq!(right, cert(&[(2, 7)]));
                let sum = &m.certificate_value(&left).unwrap()
                    + &m.certificate_value(&right).unwrap();
                assert_eq!(sum, rat("5/6"));
            }
            other => panic!("expected composite, got {other:?}"),
        }
    }

    #[test]
    fn is_atom_rejects_zero_and_non_members() {
        let m = monoid();
        let budget = SearchBudget::default();
        assert!(matches!(
            m.is_atom(&Rat::zero(), &budget),
            Err(MonoidError::ZeroIsUnit)
        ));
        assert!(matches!(
            m.is_atom(&rat("1/4"), &budget),
            Err(MonoidError::NotInMonoid { .. })
        ));
    }

    #[test]
    fn is_atom_generator_matches_search_oracle_at_index_2() {
        let m = monoid();
        let trace = m.is_atom_generator(2).unwrap();
        assert_eq!(trace.value, rat("1/21"));
        match m.is_atom(&rat("1/21"), &SearchBudget::default()).unwrap() {
            AtomVerdict::Atom { .. } => {}
            other => panic!("search oracle disagrees: {other:?}"),
        }
    }

    #[test]
    fn chain_element_examples() {
        let m = monoid();
        assert_eq!(m.chain_element(1).unwrap(), rat("5/6"));
        assert_eq!(m.chain_element(2).unwrap(), rat("8/15"));
        assert_eq!(m.chain_element(3).unwrap(), rat("12/35"));
    }

    #[test]
    fn chain_link_examples() {
        let m = monoid();
        let link = m.verify_chain_link(1).unwrap();
        assert_eq!(link.inclusion_certificate, cert(&[(1, 3)]));
        assert_eq!(link.element_certificate, cert(&[(1, 5), (2, 7)]));
        assert!(link.strict);
        let link = m.verify_chain_link(2).unwrap();
        assert_eq!(link.inclusion_certificate, cert(&[(2, 4)]));
        assert!(link.strict);
        let link = m.verify_chain_link(3).unwrap();
        assert_eq!(link.inclusion_certificate, cert(&[(3, 6)]));
        assert!(link.strict);
    }

    #[test]
    fn accp_witness_aggregates_links() {
        let m = monoid();
        let w = m.accp_witness(3).unwrap();
        assert_eq!(w.length, 3);
        assert!(w.all_strict);
        assert_eq!(w.links.len(), 3);
        assert!(w.statement.contains("does not become stationary"));
        let w = m.accp_witness(1).unwrap();
        assert!(w.all_strict);
    }

    #[test]
    fn chain_identity_holds_exactly_up_to_200() {
        let m = monoid();
        let primes = shared_primes();
        for i in 1..=200usize {
            let c_i = m.chain_element(i).unwrap();
            let c_next = m.chain_element(i + 1).unwrap();
            let gap = primes.nth(i + 2) - primes.nth(i);
            let rebuilt = &c_next + &m.generator_value(i).unwrap().scaled(gap);
            assert_eq!(rebuilt, c_i, "identity fails at link {i}");
            assert!(c_next < c_i, "chain values must strictly decrease at {i}");
        }
    }

    #[test]
    fn valuation_rejections_confirmed_by_oracle_up_to_64() {
        let m = monoid();
        for q in ["1/4", "1/8", "1/9"] {
            let q = rat(q);
            assert!(matches!(
                m.membership(&q, &SearchBudget::default()),
                MembershipOutcome::NotMember {
                    obstruction: Obstruction::Valuation { .. }
                }
            ));
            for n in 1..=64usize {
                let trunc = Truncation::new(m.family(), n).unwrap();
                assert_eq!(
                    trunc.oracle_membership(&q, DEFAULT_DP_CAP).unwrap(),
                    None,
                    "oracle accepted {q} at truncation {n}"
                );
            }
        }
    }

    #[test]
    fn largest_denominator_prime_tracks_chain_elements() {
        // c_i = (p_i + p_(i+1)) / (p_i p_(i+1)); numerator is coprime to
        // both primes, so the reduced denominator keeps p_(i+1).
        let m = monoid();
        let primes = shared_primes();
        for i in 1..=50usize {
            let c = m.chain_element(i).unwrap();
            assert_eq!(
                largest_denominator_prime(&c).unwrap(),
                Some(primes.nth(i + 1))
            );
        }
    }
}

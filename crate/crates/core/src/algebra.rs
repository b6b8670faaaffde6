//! The monoid algebra F[X;M]: polynomial expressions with rational
//! exponents drawn from the monoid, over the rationals or a prime field.
//!
//! Arithmetic never checks exponent membership (M is closed under
//! addition, so polynomials built on certified exponents stay inside);
//! membership is verified where it matters, on the support of division
//! quotients and along lifted chains.

use crate::exactnum::{is_prime, powmod, ExactError, Rat};
use crate::monoid::{MembershipOutcome, MonoidError, PuiseuxMonoid, SearchBudget};
use crate::report::Status;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("coefficient fields differ: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{0} is not prime; coefficient fields have prime order")]
    NotPrime(u64),
    #[error("negative exponent {0}: exponents live in the nonnegative rationals")]
    NegativeExponent(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// The coefficient field: the rationals, or the prime field of order p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    /// Parses `q` or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Self, AlgebraError> {
        let s = s.trim();
        if s == "q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|e| AlgebraError::Parse {
                input: s.to_string(),
                reason: format!("bad field order: {e}"),
            })?;
            return FieldSpec::prime(p);
        }
        Err(AlgebraError::Parse {
            input: s.to_string(),
            reason: "expected \"q\" or \"fp:<p>\"".to_string(),
        })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// An element of the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Q(BigRational),
    Fp { modulus: u64, value: u64 },
}

impl Coeff {
    pub fn zero(field: &FieldSpec) -> Coeff {
        Coeff::from_integer(field, 0)
    }

    pub fn one(field: &FieldSpec) -> Coeff {
        Coeff::from_integer(field, 1)
    }

    pub fn from_integer(field: &FieldSpec, v: i64) -> Coeff {
        match field {
            FieldSpec::Rationals => Coeff::Q(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Coeff::Fp {
                modulus: *p,
                value: v.rem_euclid(*p as i64) as u64,
            },
        }
    }

    /// Parses `a` or `a/b` in the given field (residues mod p for F_p).
    pub fn parse(field: &FieldSpec, s: &str) -> Result<Coeff, AlgebraError> {
        let s = s.trim();
        let bad = |reason: String| AlgebraError::Parse {
            input: s.to_string(),
            reason,
        };
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num_s).map_err(|e| bad(e.to_string()))?;
        let den = BigInt::from_str(den_s).map_err(|e| bad(e.to_string()))?;
        if den.is_zero() {
            return Err(bad("zero denominator".to_string()));
        }
        match field {
            FieldSpec::Rationals => Ok(Coeff::Q(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let p_big = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = x.mod_floor(&p_big);
                    r.to_biguint().expect("nonnegative").try_into().unwrap()
                };
                let num = Coeff::Fp {
                    modulus: *p,
                    value: reduce(&num),
                };
                let den = Coeff::Fp {
                    modulus: *p,
                    value: reduce(&den),
                };
                if den.is_zero() {
                    return Err(bad(format!("denominator is 0 in F_{p}")));
                }
                Ok(num.div(&den))
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Coeff::Q(_) => FieldSpec::Rationals,
            Coeff::Fp { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(v) => v.is_zero(),
            Coeff::Fp { value, .. } => *value == 0,
        }
    }

    fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a + b),
            (Coeff::Fp { modulus, value: a }, Coeff::Fp { value: b, .. }) => Coeff::Fp {
                modulus: *modulus,
                value: (a + b) % modulus,
            },
            _ => unreachable!("field checked before arithmetic"),
        }
    }

    fn neg(&self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(-a),
            Coeff::Fp { modulus, value } => Coeff::Fp {
                modulus: *modulus,
                value: (modulus - value) % modulus,
            },
        }
    }

    fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a * b),
            (Coeff::Fp { modulus, value: a }, Coeff::Fp { value: b, .. }) => Coeff::Fp {
                modulus: *modulus,
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
            },
            _ => unreachable!("field checked before arithmetic"),
        }
    }

    fn div(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => {
                assert!(!b.is_zero(), "division by zero coefficient");
                Coeff::Q(a / b)
            }
            (Coeff::Fp { modulus, value: a }, Coeff::Fp { value: b, .. }) => {
                assert!(*b != 0, "division by zero coefficient");
                let inv = powmod(*b, modulus - 2, *modulus);
                Coeff::Fp {
                    modulus: *modulus,
                    value: ((*a as u128 * inv as u128) % *modulus as u128) as u64,
                }
            }
            _ => unreachable!("field checked before arithmetic"),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(v) => {
                if v.is_integer() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            Coeff::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exponent: Rat,
    pub coeff: Coeff,
}

/// Polynomial expression over F with exponents in the monoid: finitely
/// many (exponent, nonzero coefficient) pairs, exponents strictly
/// decreasing. The empty term list is the zero polynomial.
#[derive(Clone)]
pub struct MPoly {
    field: FieldSpec,
    monoid: PuiseuxMonoid,
    terms: Vec<Term>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.terms == other.terms
    }
}

impl MPoly {
    pub fn zero(monoid: &PuiseuxMonoid, field: &FieldSpec) -> MPoly {
        MPoly {
            field: field.clone(),
            monoid: monoid.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(monoid: &PuiseuxMonoid, field: &FieldSpec, c: Coeff) -> Result<MPoly, AlgebraError> {
        MPoly::from_terms(monoid, field, [(Rat::zero(), c)])
    }

    /// c * X^a; a zero coefficient yields the zero polynomial.
    pub fn monomial(
        monoid: &PuiseuxMonoid,
        field: &FieldSpec,
        c: Coeff,
        a: Rat,
    ) -> Result<MPoly, AlgebraError> {
        MPoly::from_terms(monoid, field, [(a, c)])
    }

    /// Canonicalize arbitrary (exponent, coefficient) pairs: like terms
    /// merge, zero coefficients drop, exponents sort strictly decreasing.
    pub fn from_terms(
        monoid: &PuiseuxMonoid,
        field: &FieldSpec,
        terms: impl IntoIterator<Item = (Rat, Coeff)>,
    ) -> Result<MPoly, AlgebraError> {
        let mut acc: BTreeMap<Rat, Coeff> = BTreeMap::new();
        for (exponent, coeff) in terms {
            let got = coeff.field();
            if &got != field {
                return Err(AlgebraError::FieldMismatch(field.to_string(), got.to_string()));
            }
            match acc.entry(exponent) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get().add(&coeff);
                    *e.get_mut() = sum;
                }
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponent, coeff)| Term { exponent, coeff })
            .collect();
        Ok(MPoly {
            field: field.clone(),
            monoid: monoid.clone(),
            terms,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn monoid(&self) -> &PuiseuxMonoid {
        &self.monoid
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Units of F[X;M] are exactly the nonzero constants.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].exponent.is_zero()
    }

    /// The largest exponent; the zero polynomial has none.
    pub fn degree(&self) -> Result<Rat, AlgebraError> {
        self.terms
            .first()
            .map(|t| t.exponent.clone())
            .ok_or(AlgebraError::ZeroPolynomial)
    }

    fn check_field(&self, other: &MPoly) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly, AlgebraError> {
        self.check_field(other)?;
        let all = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| (t.exponent.clone(), t.coeff.clone()));
        MPoly::from_terms(&self.monoid, &self.field, all)
    }

    pub fn neg(&self) -> MPoly {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = t.coeff.neg();
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly, AlgebraError> {
        self.check_field(other)?;
        let mut acc: Vec<(Rat, Coeff)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                acc.push((&a.exponent + &b.exponent, a.coeff.mul(&b.coeff)));
            }
        }
        MPoly::from_terms(&self.monoid, &self.field, acc)
    }

    pub fn scale(&self, c: &Coeff) -> Result<MPoly, AlgebraError> {
        let terms = self
            .terms
            .iter()
            .map(|t| (t.exponent.clone(), t.coeff.mul(c)));
        MPoly::from_terms(&self.monoid, &self.field, terms.collect::<Vec<_>>())
    }

    /// f and g are associates when f = u*g for a nonzero constant u.
    pub fn associates(&self, other: &MPoly) -> bool {
        if self.field != other.field {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let u = self.terms[0].coeff.div(&other.terms[0].coeff);
        self.terms.iter().zip(other.terms.iter()).all(|(a, b)| {
            a.exponent == b.exponent && a.coeff == b.coeff.mul(&u)
        })
    }

    /// Exact division in F[X;M].
    ///
    /// All exponents of f and g are embedded over their common denominator
    /// D, turning the problem into ordinary long division in the ambient
    /// single-variable ring. A dividend of strictly smaller degree would
    /// force a negative quotient exponent and is reported as such; a
    /// nonzero remainder is NotDivisible; otherwise every quotient
    /// exponent is checked for membership in M under the budget, and any
    /// failure or Unknown is surfaced in the outcome.
    pub fn divide_exact(
        &self,
        divisor: &MPoly,
        budget: &SearchBudget,
    ) -> Result<DivisionOutcome, AlgebraError> {
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        self.check_field(divisor)?;
        if self.is_zero() {
            return Ok(DivisionOutcome::Quotient {
                quotient: MPoly::zero(&self.monoid, &self.field),
                support: Vec::new(),
            });
        }
        if self.degree()? < divisor.degree()? {
            return Ok(DivisionOutcome::NegativeExponent);
        }

        // common-denominator embedding, computed per call
        let mut common = BigUint::one();
        for t in self.terms.iter().chain(divisor.terms.iter()) {
            common = common.lcm(&t.exponent.denom());
        }
        let embed = |poly: &MPoly| -> BTreeMap<BigUint, Coeff> {
            poly.terms
                .iter()
                .map(|t| {
                    let scaled = t.exponent.numer() * (&common / t.exponent.denom());
                    (scaled, t.coeff.clone())
                })
                .collect()
        };
        let divisor_embedded = embed(divisor);
        let (lead_exp, lead_coeff) = divisor_embedded
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
            .expect("nonzero divisor");

        let mut remainder = embed(self);
        let mut quotient: BTreeMap<BigUint, Coeff> = BTreeMap::new();
        while let Some((r_exp, r_coeff)) = remainder
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            if r_exp < lead_exp {
                break;
            }
            let q_exp = &r_exp - &lead_exp;
            let q_coeff = r_coeff.div(&lead_coeff);
            for (e, c) in &divisor_embedded {
                let target = e + &q_exp;
                let delta = q_coeff.mul(c);
                match remainder.entry(target) {
                    std::collections::btree_map::Entry::Vacant(entry) => {
                        entry.insert(delta.neg());
                    }
                    std::collections::btree_map::Entry::Occupied(mut entry) => {
                        let next = entry.get().sub(&delta);
                        if next.is_zero() {
                            entry.remove();
                        } else {
                            *entry.get_mut() = next;
                        }
                    }
                }
            }
            quotient.insert(q_exp, q_coeff);
        }
        if !remainder.is_empty() {
            return Ok(DivisionOutcome::NotDivisible);
        }

        let quotient_terms: Vec<(Rat, Coeff)> = quotient
            .into_iter()
            .map(|(e, c)| {
                let exponent = Rat::from_big(e.into(), BigInt::from(common.clone()))
                    .expect("nonnegative by construction");
                (exponent, c)
            })
            .collect();
        let quotient = MPoly::from_terms(&self.monoid, &self.field, quotient_terms)?;

        let mut support = Vec::with_capacity(quotient.terms.len());
        let mut all_member = true;
        for term in &quotient.terms {
            let outcome = self.monoid.membership(&term.exponent, budget);
            all_member &= outcome.is_member();
            support.push(SupportCheck {
                exponent: term.exponent.clone(),
                outcome,
            });
        }
        if all_member {
            Ok(DivisionOutcome::Quotient { quotient, support })
        } else {
            Ok(DivisionOutcome::SupportOutsideM { checks: support })
        }
    }

    /// Parse the text form: terms joined by `+`, each `c*X^(num/den)`,
    /// a bare `c` for exponent zero, or a bare `X^(...)` for coefficient
    /// one. Term order is arbitrary; the result is canonical.
    pub fn parse(
        monoid: &PuiseuxMonoid,
        field: &FieldSpec,
        input: &str,
    ) -> Result<MPoly, AlgebraError> {
        let bad = |reason: String| AlgebraError::Parse {
            input: input.to_string(),
            reason,
        };
        let mut terms = Vec::new();
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Err(bad("empty polynomial".to_string()));
        }
        for piece in trimmed.split('+') {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(bad("empty term".to_string()));
            }
            let (coeff_str, exp_str) = match piece.find("X^(") {
                Some(pos) => {
                    let inner = &piece[pos + 3..];
                    let close = inner
                        .find(')')
                        .ok_or_else(|| bad(format!("unclosed exponent in {piece:?}")))?;
                    let exponent = &inner[..close];
                    if !inner[close + 1..].trim().is_empty() {
                        return Err(bad(format!("trailing input after exponent in {piece:?}")));
                    }
                    let head = piece[..pos].trim().trim_end_matches('*').trim();
                    let coeff = if head.is_empty() { "1" } else { head };
                    (coeff, Some(exponent))
                }
                None => (piece, None),
            };
            let coeff = Coeff::parse(field, coeff_str)?;
            let exponent = match exp_str {
                Some(s) => s
                    .trim()
                    .parse::<Rat>()
                    .map_err(|e: ExactError| match e {
                        ExactError::Negative(v) => AlgebraError::NegativeExponent(v),
                        other => bad(other.to_string()),
                    })?,
                None => Rat::zero(),
            };
            terms.push((exponent, coeff));
        }
        MPoly::from_terms(monoid, field, terms)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, term) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            if term.exponent.is_zero() {
                write!(f, "{}", term.coeff)?;
            } else {
                write!(f, "{}*X^({})", term.coeff, term.exponent)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({self})", self.field)
    }
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Membership verdict for one exponent of a division quotient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportCheck {
    pub exponent: Rat,
    pub outcome: MembershipOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum DivisionOutcome {
    /// g*h = f exactly and every quotient exponent is a certified member.
    Quotient {
        quotient: MPoly,
        support: Vec<SupportCheck>,
    },
    NotDivisible,
    /// The division itself succeeded but some quotient exponent is not a
    /// certified member (NotMember and Unknown checks included verbatim).
    SupportOutsideM { checks: Vec<SupportCheck> },
    /// The dividend has strictly smaller degree than the divisor.
    NegativeExponent,
}

/// One lifted link: X^(a_i) divided by X^(a_(i+1)) in F[X;M].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftedLink {
    pub index: usize,
    pub from_exponent: Rat,
    pub to_exponent: Rat,
    pub quotient: MPoly,
    pub quotient_degree: Rat,
    pub degree_consistent: bool,
    pub strict: bool,
    pub support: Vec<SupportCheck>,
}

/// Outcome of lifting a divisibility chain from M into F[X;M].
#[derive(Clone, Debug, Serialize)]
pub struct DomainChainReport {
    pub length: usize,
    pub status: Status,
    pub all_strict: bool,
    pub failure: Option<String>,
    pub links: Vec<LiftedLink>,
}

/// Lift a chain of monoid elements to monomial ideals: each consecutive
/// pair must divide exactly, the quotient degree must account for the
/// exponent drop (a_i = a_(i+1) + beta_i), and a link is strict exactly
/// when the quotient is a non-unit. Any failed division falsifies the
/// report; Unknown support memberships leave it undetermined.
pub fn lift_chain(
    monoid: &PuiseuxMonoid,
    field: &FieldSpec,
    elements: &[Rat],
    budget: &SearchBudget,
) -> Result<DomainChainReport, AlgebraError> {
    let mut links = Vec::new();
    let mut status = Status::Verified;
    let mut failure = None;
    for (pos, pair) in elements.windows(2).enumerate() {
        let index = pos + 1;
        let one = Coeff::one(field);
        let from = MPoly::monomial(monoid, field, one.clone(), pair[0].clone())?;
        let to = MPoly::monomial(monoid, field, one, pair[1].clone())?;
        match from.divide_exact(&to, budget)? {
            DivisionOutcome::Quotient { quotient, support } => {
                let quotient_degree = quotient.degree()?;
                let degree_consistent = &pair[1] + &quotient_degree == pair[0];
                let strict = !quotient.is_unit();
                if !degree_consistent {
                    status = Status::Falsified;
                    failure = Some(format!(
                        "degree bookkeeping fails at link {index}: {} + {} != {}",
                        pair[1], quotient_degree, pair[0]
                    ));
                }
                links.push(LiftedLink {
                    index,
                    from_exponent: pair[0].clone(),
                    to_exponent: pair[1].clone(),
                    quotient,
                    quotient_degree,
                    degree_consistent,
                    strict,
                    support,
                });
                if failure.is_some() {
                    break;
                }
            }
            DivisionOutcome::SupportOutsideM { checks } => {
                let undetermined = checks
                    .iter()
                    .all(|c| matches!(c.outcome, MembershipOutcome::Unknown { .. } | MembershipOutcome::Member { .. }));
                if undetermined {
                    status = status.and(Status::Unknown);
                    failure.get_or_insert(format!(
                        "membership of the quotient support at link {index} is undetermined under the budget"
                    ));
                } else {
                    status = Status::Falsified;
                    failure = Some(format!(
                        "quotient support at link {index} leaves the monoid"
                    ));
                    break;
                }
            }
            DivisionOutcome::NotDivisible => {
                status = Status::Falsified;
                failure = Some(format!("X^({}) does not divide X^({})", pair[1], pair[0]));
                break;
            }
            DivisionOutcome::NegativeExponent => {
                status = Status::Falsified;
                failure = Some(format!(
                    "link {index} ascends: {} exceeds {}",
                    pair[1], pair[0]
                ));
                break;
            }
        }
    }
    let all_strict = !links.is_empty() && links.iter().all(|l| l.strict);
    Ok(DomainChainReport {
        length: elements.len().saturating_sub(1),
        status,
        all_strict,
        failure,
        links,
    })
}

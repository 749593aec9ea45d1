//! Measurement functions of the two-party model and the locality audit.
//!
//! Alice's outcome is the product `{−a_j β_j}{a_k β_k(λ)}` and Bob's is
//! `{b_j β_j(λ)}{b_k β_k}`, with the λ-dependent basis taken literally as
//! `β_k(λ) = λ β_k`. Both products are evaluated with the fixed cross sign.
//! The raw multivector is kept next to its ±1 classification so that any
//! failure of grade purity is reported rather than projected away.

use serde::Serialize;

use crate::algebra::{direction_bivector, geometric_product, CrossSign, EvenMultivector};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::scalar::Real;
use crate::stats::Moments;

/// The shared fair coin `λ ∈ {+1, −1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HiddenVariable {
    Plus,
    Minus,
}

impl HiddenVariable {
    pub const BOTH: [HiddenVariable; 2] = [HiddenVariable::Plus, HiddenVariable::Minus];

    #[inline]
    pub fn value<T: Real>(self) -> T {
        match self {
            HiddenVariable::Plus => T::one(),
            HiddenVariable::Minus => -T::one(),
        }
    }

    #[inline]
    pub fn sign(self) -> i8 {
        match self {
            HiddenVariable::Plus => 1,
            HiddenVariable::Minus => -1,
        }
    }
}

/// Classification of a raw outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Plus,
    Minus,
    NonScalar,
}

impl Outcome {
    pub fn sign(self) -> Option<i8> {
        match self {
            Outcome::Plus => Some(1),
            Outcome::Minus => Some(-1),
            Outcome::NonScalar => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Plus => "+1",
            Outcome::Minus => "-1",
            Outcome::NonScalar => "non-scalar",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementOutcome<T> {
    pub raw: EvenMultivector<T>,
    pub classified: Outcome,
    pub residual_norm: T,
}

impl<T: Real> MeasurementOutcome<T> {
    /// Dichotomic iff the bivector part vanishes and the scalar is ±1, both
    /// within the scalar tolerance.
    pub fn classify(raw: EvenMultivector<T>) -> Self {
        let tol = T::tolerance();
        let residual_norm = raw.bivector_norm();
        let s = raw.scalar_part();
        let classified = if residual_norm > tol || (s.abs() - T::one()).abs() > tol {
            Outcome::NonScalar
        } else if s > T::zero() {
            Outcome::Plus
        } else {
            Outcome::Minus
        };
        Self {
            raw,
            classified,
            residual_norm,
        }
    }

    /// The ±1 value, or an error carrying the offending raw parts.
    pub fn value(&self) -> Result<T> {
        match self.classified.sign() {
            Some(1) => Ok(T::one()),
            Some(_) => Ok(-T::one()),
            None => Err(Error::NonDichotomic {
                scalar: self.raw.scalar_part().as_f64(),
                residual_norm: self.residual_norm.as_f64(),
            }),
        }
    }
}

/// `A(a, λ) = {−a_j β_j}{λ a_k β_k}`.
pub fn measure_alice<T: Real>(a: &Direction<T>, lambda: HiddenVariable) -> MeasurementOutcome<T> {
    let ab = direction_bivector(a);
    let raw = geometric_product(&-ab, &(ab * lambda.value()), CrossSign::Plus);
    MeasurementOutcome::classify(raw)
}

/// `B(b, λ) = {λ b_j β_j}{b_k β_k}`.
pub fn measure_bob<T: Real>(b: &Direction<T>, lambda: HiddenVariable) -> MeasurementOutcome<T> {
    let bb = direction_bivector(b);
    let raw = geometric_product(&(bb * lambda.value()), &bb, CrossSign::Plus);
    MeasurementOutcome::classify(raw)
}

/// One joint trial: both parties measure with the same λ.
pub fn joint_trial<T: Real>(
    a: &Direction<T>,
    b: &Direction<T>,
    lambda: HiddenVariable,
) -> (MeasurementOutcome<T>, MeasurementOutcome<T>) {
    (measure_alice(a, lambda), measure_bob(b, lambda))
}

/// Marginal statistics of one party at one setting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marginal<T> {
    pub setting: Direction<T>,
    pub mean: T,
    pub standard_error: T,
    pub non_dichotomic: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport<T> {
    pub trials: u64,
    pub seed: u64,
    pub alice: Vec<Marginal<T>>,
    pub bob: Vec<Marginal<T>>,
    /// Trials in which Alice's raw outcome differed bitwise between two of
    /// Bob's settings (or Bob's between two of Alice's).
    pub alice_mismatches: u64,
    pub bob_mismatches: u64,
}

impl<T: Real> AuditReport<T> {
    pub fn parameter_independent(&self) -> bool {
        self.alice_mismatches == 0 && self.bob_mismatches == 0
    }
}

/// Runs `n` joint trials for every pair of settings and checks that each
/// party's raw outcome is bit-identical whatever the remote setting.
pub fn locality_audit<T: Real>(
    alice_settings: &[Direction<T>],
    bob_settings: &[Direction<T>],
    n: u64,
    seed: u64,
) -> Result<AuditReport<T>> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    if alice_settings.is_empty() || bob_settings.is_empty() {
        return Err(Error::NoSettings);
    }

    let mut alice_stats = vec![Moments::<T>::new(); alice_settings.len()];
    let mut bob_stats = vec![Moments::<T>::new(); bob_settings.len()];
    let mut alice_bad = vec![0u64; alice_settings.len()];
    let mut bob_bad = vec![0u64; bob_settings.len()];
    let mut alice_mismatches = 0u64;
    let mut bob_mismatches = 0u64;

    let mut alice_seen: Vec<Option<EvenMultivector<T>>> = vec![None; alice_settings.len()];
    let mut bob_seen: Vec<Option<EvenMultivector<T>>> = vec![None; bob_settings.len()];

    for lambda in RngStream::new(seed).draws(n) {
        alice_seen.iter_mut().for_each(|s| *s = None);
        bob_seen.iter_mut().for_each(|s| *s = None);
        let mut alice_diff = false;
        let mut bob_diff = false;

        for (i, a) in alice_settings.iter().enumerate() {
            for (j, b) in bob_settings.iter().enumerate() {
                let (oa, ob) = joint_trial(a, b, lambda);
                match alice_seen[i] {
                    None => {
                        alice_seen[i] = Some(oa.raw);
                        match oa.value() {
                            Ok(v) => alice_stats[i].push(v),
                            Err(_) => alice_bad[i] += 1,
                        }
                    }
                    Some(prev) => alice_diff |= !prev.bitwise_eq(&oa.raw),
                }
                match bob_seen[j] {
                    None => {
                        bob_seen[j] = Some(ob.raw);
                        match ob.value() {
                            Ok(v) => bob_stats[j].push(v),
                            Err(_) => bob_bad[j] += 1,
                        }
                    }
                    Some(prev) => bob_diff |= !prev.bitwise_eq(&ob.raw),
                }
            }
        }
        alice_mismatches += u64::from(alice_diff);
        bob_mismatches += u64::from(bob_diff);
    }

    let summarize = |settings: &[Direction<T>], stats: &[Moments<T>], bad: &[u64]| {
        settings
            .iter()
            .zip(stats)
            .zip(bad)
            .map(|((d, m), &nb)| Marginal {
                setting: *d,
                mean: m.mean(),
                standard_error: m.standard_error(),
                non_dichotomic: nb,
            })
            .collect::<Vec<_>>()
    };

    Ok(AuditReport {
        trials: n,
        seed,
        alice: summarize(alice_settings, &alice_stats, &alice_bad),
        bob: summarize(bob_settings, &bob_stats, &bob_bad),
        alice_mismatches,
        bob_mismatches,
    })
}

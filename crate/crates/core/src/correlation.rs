//! Grade-decomposed correlation of the two-party model.
//!
//! Each trial's outcome product `A B` is divided on the left by `−a_j β_j`
//! and on the right by `b_k β_k`:
//!
//! ```text
//! {a_j β_j} {A B} {−b_k β_k}
//! ```
//!
//! and the result is averaged over λ. Nothing is projected to a scalar: the
//! bivector part of the average is carried through as a residual.
//!
//! Two product conventions are available for the final bivector-bivector
//! product of the sandwich. `FixedBasis` uses the fixed cross sign
//! everywhere; `LambdaStructure` uses cross sign `σ = λ` for that product.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{direction_bivector, geometric_product, CrossSign, EvenMultivector};
use crate::direction::{norm3, Direction};
use crate::error::{Error, Result};
use crate::model::{measure_alice, measure_bob, HiddenVariable};
use crate::rng::RngStream;
use crate::scalar::Real;
use crate::stats::Moments;

/// Which product rule governs the final cross term of the sandwich.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProductConvention {
    FixedBasis,
    LambdaStructure,
}

impl ProductConvention {
    pub const BOTH: [ProductConvention; 2] = [
        ProductConvention::FixedBasis,
        ProductConvention::LambdaStructure,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ProductConvention::FixedBasis => "fixed",
            ProductConvention::LambdaStructure => "lambda",
        }
    }

    fn final_sign(self, lambda: HiddenVariable) -> CrossSign {
        match self {
            ProductConvention::FixedBasis => CrossSign::Plus,
            ProductConvention::LambdaStructure => CrossSign::from_lambda(lambda),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationReport<T> {
    pub scalar_estimate: T,
    pub bivector_residual: [T; 3],
    pub residual_norm: T,
    /// Trials averaged; 2 for the exact two-point average.
    pub n: u64,
    pub standard_error: T,
    /// Per-component standard error of the bivector residual.
    pub residual_standard_error: [T; 3],
    /// `None` for the unnormalized diagnostic.
    pub convention: Option<ProductConvention>,
    pub exact: bool,
    /// `−a·b`.
    pub target: T,
}

/// Trials per shard of the Monte Carlo estimator. Shards start at fixed stream
/// positions and are merged in index order, so the result does not depend on
/// how many threads run them.
pub const SHARD_TRIALS: u64 = 1 << 16;

/// `A(a, λ) B(b, λ)` as a multivector product.
pub fn pair_product<T: Real>(
    a: &Direction<T>,
    b: &Direction<T>,
    lambda: HiddenVariable,
) -> EvenMultivector<T> {
    geometric_product(
        &measure_alice(a, lambda).raw,
        &measure_bob(b, lambda).raw,
        CrossSign::Plus,
    )
}

/// `{a_j β_j} {A B} {−b_k β_k}`, with the last product taken under the cross
/// sign chosen by `convention`.
///
/// The two factors are the inverses of the divisors `−a_j β_j` and `b_k β_k`
/// for unit directions.
pub fn normalized_pair_value<T: Real>(
    a: &Direction<T>,
    b: &Direction<T>,
    lambda: HiddenVariable,
    convention: ProductConvention,
) -> EvenMultivector<T> {
    let left = direction_bivector(a);
    let right = -direction_bivector(b);
    let inner = geometric_product(&left, &pair_product(a, b, lambda), CrossSign::Plus);
    geometric_product(&inner, &right, convention.final_sign(lambda))
}

fn report_from<T: Real>(
    moments: &[Moments<T>; 4],
    convention: Option<ProductConvention>,
    exact: bool,
    target: T,
) -> CorrelationReport<T> {
    let bivector_residual = [moments[1].mean(), moments[2].mean(), moments[3].mean()];
    let (standard_error, residual_standard_error) = if exact {
        (T::zero(), [T::zero(); 3])
    } else {
        (
            moments[0].standard_error(),
            [
                moments[1].standard_error(),
                moments[2].standard_error(),
                moments[3].standard_error(),
            ],
        )
    };
    CorrelationReport {
        scalar_estimate: moments[0].mean(),
        bivector_residual,
        residual_norm: norm3(&bivector_residual),
        n: moments[0].count(),
        standard_error,
        residual_standard_error,
        convention,
        exact,
        target,
    }
}

fn push_value<T: Real>(acc: &mut [Moments<T>; 4], v: &EvenMultivector<T>) {
    let b = v.bivector_part();
    acc[0].push(v.scalar_part());
    acc[1].push(b[0]);
    acc[2].push(b[1]);
    acc[3].push(b[2]);
}

fn merge_all<T: Real>(parts: &[[Moments<T>; 4]]) -> [Moments<T>; 4] {
    parts.iter().fold([Moments::new(); 4], |acc, p| {
        [
            acc[0].merge(&p[0]),
            acc[1].merge(&p[1]),
            acc[2].merge(&p[2]),
            acc[3].merge(&p[3]),
        ]
    })
}

/// Exact average over the two equiprobable values of λ.
pub fn correlation_exact<T: Real>(
    a: &Direction<T>,
    b: &Direction<T>,
    convention: ProductConvention,
) -> CorrelationReport<T> {
    let mut acc = [Moments::new(); 4];
    for lambda in HiddenVariable::BOTH {
        push_value(&mut acc, &normalized_pair_value(a, b, lambda, convention));
    }
    report_from(&acc, Some(convention), true, -a.dot(b))
}

/// Shards `n` trials of `trial` over fixed stream positions and merges them.
fn sharded<T, F>(n: u64, seed: u64, trial: F) -> [Moments<T>; 4]
where
    T: Real,
    F: Fn(HiddenVariable, &mut [Moments<T>; 4]) + Sync,
{
    let shards = n.div_ceil(SHARD_TRIALS);
    let parts: Vec<[Moments<T>; 4]> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let start = k * SHARD_TRIALS;
            let len = SHARD_TRIALS.min(n - start);
            let mut acc = [Moments::new(); 4];
            for lambda in RngStream::at(seed, start).draws(len) {
                trial(lambda, &mut acc);
            }
            acc
        })
        .collect();
    merge_all(&parts)
}

/// Monte Carlo average of [`normalized_pair_value`] over `n` fair-coin draws.
pub fn correlation_mc<T: Real>(
    a: &Direction<T>,
    b: &Direction<T>,
    n: u64,
    seed: u64,
    convention: ProductConvention,
) -> Result<CorrelationReport<T>> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    let acc = sharded(n, seed, |lambda, acc| {
        push_value(acc, &normalized_pair_value(a, b, lambda, convention));
    });
    Ok(report_from(&acc, Some(convention), false, -a.dot(b)))
}

/// Average of the classified products `A · B` with no division at all.
pub fn naive_correlation<T: Real>(
    a: &Direction<T>,
    b: &Direction<T>,
    n: u64,
    seed: u64,
) -> Result<CorrelationReport<T>> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    let failure = std::sync::Mutex::new(None::<Error>);
    let acc = sharded(n, seed, |lambda, acc| {
        let va = measure_alice(a, lambda).value();
        let vb = measure_bob(b, lambda).value();
        match (va, vb) {
            (Ok(x), Ok(y)) => push_value(acc, &EvenMultivector::scalar(x * y)),
            (Err(e), _) | (_, Err(e)) => {
                let mut f = failure.lock().expect("poisoned");
                f.get_or_insert(e);
            }
        }
    });
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(report_from(&acc, None, false, -a.dot(b)))
}

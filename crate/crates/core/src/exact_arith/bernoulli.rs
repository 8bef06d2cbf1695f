use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// B_0..B_40 are filled on first use; larger indices extend the table on
/// demand.
const PRECOMPUTED: usize = 40;

fn table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(compute(PRECOMPUTED)))
}

/// Tangent numbers T_1..T_count by the in-place integer recurrence
/// T_j <- (j-k) T_{j-1} + (j-k+2) T_j.
fn tangent_numbers(count: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); count + 1];
    if count == 0 {
        return t;
    }
    t[1] = BigInt::one();
    for k in 2..=count {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=count {
        for j in k..=count {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    t
}

/// B_0..B_upto, using B_{2n} = (-1)^{n-1} 2n T_n / (4^n (4^n - 1)).
fn compute(upto: usize) -> Vec<Rational> {
    let half = upto / 2;
    let tangents = tangent_numbers(half);
    let mut values = vec![Rational::zero(); upto + 1];
    values[0] = Rational::one();
    if upto >= 1 {
        values[1] = Rational::new(BigInt::from(-1), BigInt::from(2));
    }
    for n in 1..=half {
        let four_n = BigInt::one() << (2 * n);
        let numer = &tangents[n] * (2 * n);
        let denom = &four_n * (&four_n - 1u32);
        let b = Rational::new(numer, denom);
        values[2 * n] = if n % 2 == 1 { b } else { -b };
    }
    values
}

/// The Bernoulli number B_m, with the convention B_1 = -1/2.
///
/// Everything downstream consumes even indices only, where both common
/// conventions agree. Values are exact and memoized; the table is shared
/// across threads.
pub fn bernoulli(m: usize) -> Rational {
    let lock = table();
    if let Some(b) = lock.read().expect("bernoulli table poisoned").get(m) {
        return b.clone();
    }
    let mut values = lock.write().expect("bernoulli table poisoned");
    if values.len() <= m {
        // grow geometrically so repeated extension stays quadratic overall
        *values = compute(m.max(2 * values.len()));
    }
    values[m].clone()
}

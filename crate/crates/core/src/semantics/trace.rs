use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, ratio, Rational};
use crate::error::{Error, Result};

/// Resampling limit for [`generate_trace_element`].
pub const MAX_SAMPLER_ATTEMPTS: u32 = 100;

/// An element `t` of the trace set of `(a, b)` with its certificate.
///
/// `witness` holds the coordinates of `w = z² / nrd(z)`, a quaternion of
/// reduced norm 1 whose reduced trace is `t`. In particular
/// `t² − 4a·w₂² − 4b·w₃² + 4ab·w₄² = 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSample {
    pub t: Rational,
    pub witness: [Rational; 4],
    pub z: [Rational; 4],
}

/// `x1² − a x2² − b x3² + ab x4²`.
pub fn reduced_norm(a: &Rational, b: &Rational, x: &[Rational; 4]) -> Rational {
    &x[0] * &x[0] - a * &x[1] * &x[1] - b * &x[2] * &x[2] + a * b * &x[3] * &x[3]
}

/// Trace element from a fixed quaternion `z = x1 + x2 α + x3 β + x4 αβ`.
///
/// Returns `None` when `nrd(z) = 0`.
pub fn trace_element_of(a: &Rational, b: &Rational, z: &[Rational; 4]) -> Option<TraceSample> {
    let n = reduced_norm(a, b, z);
    if n.is_zero() {
        return None;
    }
    let [x1, x2, x3, x4] = z;
    // z² = (x1² + a x2² + b x3² − ab x4²) + 2 x1 (x2 α + x3 β + x4 αβ)
    let s = x1 * x1 + a * x2 * x2 + b * x3 * x3 - a * b * x4 * x4;
    let two_x1 = x1 * rat(2);
    let witness = [
        &s / &n,
        &two_x1 * x2 / &n,
        &two_x1 * x3 / &n,
        &two_x1 * x4 / &n,
    ];
    let trace = &two_x1 * &two_x1 / &n - rat(2);
    debug_assert_eq!(trace, &witness[0] * rat(2));
    Some(TraceSample { t: trace, witness, z: z.clone() })
}

/// Samples `z` with small rational coordinates from a ChaCha stream seeded
/// by `seed` and returns its trace element. Deterministic per seed.
pub fn generate_trace_element(a: &Rational, b: &Rational, seed: u64) -> Result<TraceSample> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("quaternion parameter"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLER_ATTEMPTS {
        let z: [Rational; 4] =
            std::array::from_fn(|_| ratio(rng.gen_range(-30..=30), rng.gen_range(1..=12)));
        if let Some(sample) = trace_element_of(a, b, &z) {
            return Ok(sample);
        }
    }
    Err(Error::DegenerateSampler { attempts: MAX_SAMPLER_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: [i64; 4]) -> [Rational; 4] {
        v.map(rat)
    }

    fn on_conic(a: &Rational, b: &Rational, s: &TraceSample) -> bool {
        let [_, w2, w3, w4] = &s.witness;
        &s.t * &s.t - rat(4) * a * w2 * w2 - rat(4) * b * w3 * w3 + rat(4) * a * b * w4 * w4 == rat(4)
    }

    #[test]
    fn identity_quaternion() {
        let s = trace_element_of(&rat(3), &rat(5), &ints([1, 0, 0, 0])).unwrap();
        assert_eq!(s.t, rat(2));
        assert_eq!(s.witness, ints([1, 0, 0, 0]));
    }

    #[test]
    fn pure_alpha() {
        let (a, b) = (rat(3), rat(5));
        let s = trace_element_of(&a, &b, &ints([0, 1, 0, 0])).unwrap();
        assert_eq!(s.t, rat(-2));
        assert_eq!(s.witness, ints([-1, 0, 0, 0]));
        assert!(on_conic(&a, &b, &s));
    }

    #[test]
    fn degenerate_norm() {
        // nrd(1 + α) = 1 − a = 0 for a = 1
        assert!(trace_element_of(&rat(1), &rat(2), &ints([1, 1, 0, 0])).is_none());
    }

    #[test]
    fn samples_lie_on_conic_and_are_deterministic() {
        for (a, b) in [(rat(3), rat(5)), (ratio(-2, 7), rat(11)), (rat(1), rat(1))] {
            for seed in 0..200 {
                let s = generate_trace_element(&a, &b, seed).unwrap();
                assert!(on_conic(&a, &b, &s));
                assert_eq!(reduced_norm(&a, &b, &s.witness), rat(1));
                assert_eq!(s, generate_trace_element(&a, &b, seed).unwrap());
            }
        }
        assert!(generate_trace_element(&rat(0), &rat(1), 0).is_err());
    }
}

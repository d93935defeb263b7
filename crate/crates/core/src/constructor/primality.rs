//! Miller-Rabin primality testing on arbitrary-precision integers, plus the
//! small number theory needed by the code builders.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The first 13 primes. As Miller-Rabin bases they decide primality
/// deterministically for every `n < 3.317 * 10^24`.
const DETERMINISTIC_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn deterministic_limit() -> BigUint {
    "3317044064679887385961981".parse().unwrap()
}

/// Miller-Rabin test. Below `3.317 * 10^24` the fixed base set makes the
/// verdict exact; above it `rounds` bases are drawn from a ChaCha generator
/// seeded with `seed`.
pub fn is_probable_prime(n: &BigUint, rounds: usize, seed: u64) -> bool {
    if let Some(small) = n.to_u32() {
        if small < 2 {
            return false;
        }
        if DETERMINISTIC_BASES.contains(&small) {
            return true;
        }
    }
    if DETERMINISTIC_BASES.iter().any(|&b| (n % b).is_zero()) {
        return false;
    }

    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let witness = |base: &BigUint| -> bool {
        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    if *n < deterministic_limit() {
        return !DETERMINISTIC_BASES
            .iter()
            .any(|&b| witness(&BigUint::from(b)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    (0..rounds).all(|_| !witness(&rng.gen_biguint_range(&two, &n_minus_1)))
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigUint::from(n), 0, 0)
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = u128::from(m);
    let mut acc: u128 = 1 % m128;
    let mut b = u128::from(base % m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

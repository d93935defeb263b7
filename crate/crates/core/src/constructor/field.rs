//! Polynomials over `GF(p)` and the extension field `GF(p^k)`.
//!
//! Polynomials are coefficient vectors, lowest degree first, over a small
//! prime `p`. Extension-field elements are residues modulo a fixed monic
//! irreducible polynomial of degree `k`.

use serde::{Deserialize, Serialize};

use super::primality::{is_prime_u64, prime_factors};
use crate::error::{domain, Result};

/// Polynomial arithmetic over the prime field `GF(p)`.
pub mod poly {
    pub type Poly = Vec<u32>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        super::super::primality::pow_mod(u64::from(a), u64::from(p - 2), u64::from(p)) as u32
    }

    pub fn add(a: &[u32], b: &[u32], p: u32) -> Poly {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p64 = u64::from(p);
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % p64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn div_rem(a: &[u32], b: &[u32], p: u32) -> (Poly, Poly) {
        let db = degree(b).expect("division by the zero polynomial");
        let lead_inv = u64::from(inv_mod(b[db], p));
        let p64 = u64::from(p);
        let mut rem: Vec<u32> = trim(a.to_vec());
        let mut quot = vec![0u32; rem.len().saturating_sub(db).max(1)];
        while let Some(dr) = degree(&rem) {
            if dr < db {
                break;
            }
            let coef = (u64::from(rem[dr]) * lead_inv % p64) as u32;
            let shift = dr - db;
            quot[shift] = coef;
            for (i, &bc) in b[..=db].iter().enumerate() {
                let sub = (u64::from(coef) * u64::from(bc) % p64) as u32;
                rem[shift + i] = (rem[shift + i] + p - sub) % p;
            }
            rem = trim(rem);
        }
        (trim(quot), trim(rem))
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Poly {
        div_rem(a, b, p).1
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `base^exp mod m`.
    pub fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Poly {
        let mut acc = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            exp >>= 1;
        }
        acc
    }

    /// Evaluate at `z` by Horner's rule.
    pub fn eval(a: &[u32], z: u32, p: u32) -> u32 {
        let p64 = u64::from(p);
        a.iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * u64::from(z) + u64::from(c)) % p64) as u32
    }
}

/// Rabin's test: a monic `f` of degree `k` is irreducible over `GF(p)` iff
/// `x^(p^k) = x mod f` and `gcd(x^(p^(k/r)) - x, f) = 1` for every prime
/// `r | k`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(k) = poly::degree(f) else {
        return false;
    };
    if k == 0 {
        return false;
    }
    let x: poly::Poly = vec![0, 1];
    let frobenius = |times: usize| {
        let mut h = poly::rem(&x, f, p);
        for _ in 0..times {
            h = poly::pow_mod(&h, u64::from(p), f, p);
        }
        h
    };
    if poly::sub(&frobenius(k), &poly::rem(&x, f, p), p) != Vec::<u32>::new() {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|r| {
        let h = poly::sub(&frobenius(k / r as usize), &x, p);
        let g = poly::gcd(&h, f, p);
        poly::degree(&g) == Some(0)
    })
}

/// Element of `GF(p^k)`: `k` coefficients over `GF(p)`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// The field `GF(p^k) = GF(p)[x] / (m(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtField {
    p: u32,
    k: usize,
    /// Monic modulus of degree `k`, lowest degree first.
    modulus: Vec<u32>,
}

impl ExtField {
    /// Uses the least monic irreducible polynomial of degree `k`, ordering
    /// candidates by the base-`p` integer whose digits are their lower
    /// coefficients (constant term least significant).
    pub fn new(p: u32, k: usize) -> Result<Self> {
        if !is_prime_u64(u64::from(p)) {
            return Err(domain!("field characteristic {p} is not prime"));
        }
        if k == 0 {
            return Err(domain!("extension degree must be at least 1"));
        }
        let candidates = u64::from(p)
            .checked_pow(k as u32)
            .ok_or_else(|| domain!("GF({p}^{k}) is too large to search for a modulus"))?;
        for index in 0..candidates {
            let mut m = digits(index, p, k);
            m.push(1);
            if is_irreducible(&m, p) {
                return Ok(Self { p, k, modulus: m });
            }
        }
        unreachable!("irreducible polynomials of every degree exist")
    }

    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime_u64(u64::from(p)) {
            return Err(domain!("field characteristic {p} is not prime"));
        }
        let k = poly::degree(&modulus).ok_or_else(|| domain!("zero modulus"))?;
        if modulus[k] != 1 || !is_irreducible(&modulus, p) {
            return Err(domain!(
                "modulus must be monic and irreducible over GF({p})"
            ));
        }
        Ok(Self {
            p,
            k,
            modulus: modulus[..=k].to_vec(),
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Field size `p^k`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        u64::from(self.p).checked_pow(self.k as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.k],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.k || coeffs.iter().any(|&c| c >= self.p) {
            return Err(domain!(
                "expected {} coefficients in [0, {})",
                self.k,
                self.p
            ));
        }
        Ok(FieldElement {
            coeffs: coeffs.to_vec(),
        })
    }

    /// The element whose coefficients are the base-`p` digits of `index`.
    pub fn from_index(&self, index: u64) -> FieldElement {
        FieldElement {
            coeffs: digits(index, self.p, self.k),
        }
    }

    pub fn to_index(&self, e: &FieldElement) -> u64 {
        e.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * u64::from(self.p) + u64::from(c))
    }

    fn wrap(&self, poly: Vec<u32>) -> FieldElement {
        let mut coeffs = poly;
        coeffs.resize(self.k, 0);
        FieldElement { coeffs }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let prod = poly::mul(
            &poly::trim(a.coeffs.clone()),
            &poly::trim(b.coeffs.clone()),
            self.p,
        );
        self.wrap(poly::rem(&prod, &self.modulus, self.p))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(domain!("zero has no multiplicative inverse"));
        }
        let p = self.p;
        let (mut r0, mut r1) = (self.modulus.clone(), poly::trim(a.coeffs.clone()));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        while poly::degree(&r1).is_some() {
            let (q, r) = poly::div_rem(&r0, &r1, p);
            let s2 = poly::sub(&s0, &poly::mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant; scale s0 by its inverse.
        let c = poly::inv_mod(r0[0], p);
        let inv = poly::mul(&s0, &[c], p);
        Ok(self.wrap(poly::rem(&inv, &self.modulus, p)))
    }
}

fn digits(mut index: u64, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push((index % u64::from(p)) as u32);
        index /= u64::from(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn poly_basics() {
        // (z - 3)(z - 2) = z^2 + 2z + 6 over GF(7).
        assert_eq!(poly::mul(&[4, 1], &[5, 1], 7), vec![6, 2, 1]);
        let (q, r) = poly::div_rem(&[6, 2, 1], &[4, 1], 7);
        assert_eq!(q, vec![5, 1]);
        assert!(r.is_empty());
        assert_eq!(poly::eval(&[6, 2, 1], 3, 7), 0);
        assert_eq!(poly::gcd(&[6, 2, 1], &[4, 1], 7), vec![4, 1]);
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        // Monic quadratics and cubics over GF(3): irreducible iff no root.
        for p in [2u32, 3, 5] {
            for deg in 2..=3usize {
                for idx in 0..u64::from(p).pow(deg as u32) {
                    let mut f = digits(idx, p, deg);
                    f.push(1);
                    let has_root = (0..p).any(|z| poly::eval(&f, z, p) == 0);
                    assert_eq!(is_irreducible(&f, p), !has_root, "p={p} f={f:?}");
                }
            }
        }
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over GF(2): no root, reducible.
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
    }

    #[test]
    fn modulus_choice() {
        let f = ExtField::new(7, 4).unwrap();
        assert_eq!(f.order(), Some(2401));
        assert!(is_irreducible(f.modulus(), 7));
        // GF(2^8) gets x^8 + x^4 + x^3 + x + 1 (0x11b), the least such modulus.
        let f = ExtField::new(2, 8).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert!(ExtField::new(6, 2).is_err());
        assert!(ExtField::with_modulus(2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn field_axioms_spot_check() {
        let f = ExtField::new(7, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let order = f.order().unwrap();
        for _ in 0..500 {
            let a = f.from_index(rng.gen_range(0..order));
            let b = f.from_index(rng.gen_range(0..order));
            let c = f.from_index(rng.gen_range(0..order));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
            if !a.is_zero() {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
        }
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_full_order() {
        let f = ExtField::new(3, 3).unwrap();
        let order = f.order().unwrap();
        let has_generator = (1..order).any(|i| {
            let g = f.from_index(i);
            let mut x = g.clone();
            let mut n = 1;
            while x != f.one() {
                x = f.mul(&x, &g);
                n += 1;
            }
            n == order - 1
        });
        assert!(has_generator);
        for i in 0..order {
            assert_eq!(f.to_index(&f.from_index(i)), i);
        }
    }
}

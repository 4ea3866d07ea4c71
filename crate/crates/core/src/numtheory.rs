//! Primes, Chinese remaindering and guarded lcm arithmetic.
//!
//! Every construction in this crate leans on the same three facts: runs of
//! consecutive primes above a bound exist (prime number theorem), compatible
//! residue classes combine into a single class modulo the lcm, and lcm
//! values grow fast enough that they must be guarded. Moduli and witness
//! lengths are arbitrary precision throughout; machine words only appear
//! for cycle lengths, which are bounded by automaton sizes.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// A residue class `residue mod modulus` with `residue < modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    pub modulus: BigUint,
    pub residue: BigUint,
}

impl ResidueClass {
    /// Builds a class, reducing the residue into range. Panics on modulus 0.
    pub fn new(modulus: impl Into<BigUint>, residue: impl Into<BigUint>) -> Self {
        let modulus = modulus.into();
        assert!(!modulus.is_zero(), "residue class needs modulus >= 1");
        let residue = residue.into() % &modulus;
        ResidueClass { modulus, residue }
    }

    pub fn from_u64(modulus: u64, residue: u64) -> Self {
        Self::new(modulus, residue)
    }

    /// Does `value` lie in this class?
    pub fn contains(&self, value: &BigUint) -> bool {
        value % &self.modulus == self.residue
    }

    /// Smallest member of the class that is `>= lo`.
    pub fn smallest_at_least(&self, lo: &BigUint) -> BigUint {
        if &self.residue >= lo {
            return self.residue.clone();
        }
        let diff = lo - &self.residue;
        let steps = (&diff + &self.modulus - BigUint::one()) / &self.modulus;
        &self.residue + steps * &self.modulus
    }
}

/// The first `count` primes that are `>= lower_bound`, consecutive with no
/// gaps skipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeBasis {
    pub primes: Vec<u64>,
    pub lower_bound: u64,
    pub count: usize,
}

/// Deterministic trial-division primality; the sizes used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The first `count` primes `>= lower`.
pub fn first_primes_ge(count: usize, lower: u64) -> PrimeBasis {
    let mut primes = Vec::with_capacity(count);
    let mut n = lower.max(2);
    while primes.len() < count {
        if is_prime(n) {
            primes.push(n);
        }
        n += 1;
    }
    PrimeBasis {
        primes,
        lower_bound: lower,
        count,
    }
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in
/// increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// `lcm` on machine words, `None` on overflow.
pub fn lcm_u64_checked(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / a.gcd(&b)).checked_mul(b)
}

/// Combines one residue class into an accumulated class; `None` when they
/// disagree modulo the gcd of the moduli.
fn crt_pair(a: &ResidueClass, b: &ResidueClass) -> Option<ResidueClass> {
    let g = a.modulus.gcd(&b.modulus);
    let (ra, rb) = (&a.residue, &b.residue);
    let diff = BigInt::from(rb.clone()) - BigInt::from(ra.clone());
    if !(&diff % BigInt::from(g.clone())).is_zero() {
        return None;
    }
    // x = ra + a.modulus * t, with t = (diff / g) * inv(a.modulus / g) mod (b.modulus / g)
    let m1 = BigInt::from(a.modulus.clone());
    let m2g = BigInt::from(&b.modulus / &g);
    let e = (m1.clone() / BigInt::from(g.clone())).extended_gcd(&m2g);
    debug_assert!(e.gcd.is_one() || m2g.is_one());
    let t = if m2g.is_one() {
        BigInt::zero()
    } else {
        ((diff / BigInt::from(g.clone())) * e.x).mod_floor(&m2g)
    };
    let lcm = &a.modulus / &g * &b.modulus;
    let x = (BigInt::from(ra.clone()) + m1 * t).mod_floor(&BigInt::from(lcm.clone()));
    Some(ResidueClass {
        modulus: lcm,
        residue: x.to_biguint().expect("mod_floor of positive modulus"),
    })
}

/// Solves a non-empty system of residue classes: the unique class modulo
/// the lcm of the moduli satisfying all of them, or `None` when some pair
/// is incompatible.
pub fn crt_solve(classes: &[ResidueClass]) -> Option<ResidueClass> {
    let (first, rest) = classes.split_first()?;
    let mut acc = first.clone();
    for c in rest {
        acc = crt_pair(&acc, c)?;
    }
    Some(acc)
}

/// lcm of `values` if it stays `<= cap`, else `None`. All values must be
/// `>= 1`.
pub fn lcm_guarded(values: &[BigUint], cap: &BigUint) -> Option<BigUint> {
    let mut acc = BigUint::one();
    for v in values {
        assert!(!v.is_zero(), "lcm_guarded needs values >= 1");
        acc = acc.lcm(v);
        if &acc > cap {
            return None;
        }
    }
    Some(acc)
}

/// Convenience wrapper for machine-word inputs and caps.
pub fn lcm_guarded_u64(values: &[u64], cap: u64) -> Option<u64> {
    let vals: Vec<BigUint> = values.iter().map(|&v| BigUint::from(v)).collect();
    lcm_guarded(&vals, &BigUint::from(cap)).map(|b| b.to_u64().expect("below u64 cap"))
}

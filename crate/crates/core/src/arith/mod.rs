//! Exact rational arithmetic and elementary p-adic helpers.
//!
//! Elements of `Z_p` are plain [`Rational`]s whose denominator is prime to
//! `p`; nothing in this crate uses floating point.

mod hilbert;
mod matrix;

pub use hilbert::{hilbert_symbol, jacobi_symbol, kronecker_symbol, legendre_symbol};
pub use matrix::RatMatrix;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The `p`-adic valuation of a nonzero rational.
pub fn valuation(x: &Rational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::Domain("valuation of zero".into()));
    }
    Ok(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// `x / p^v(x)`, the unit part of `x` in `Q_p`.
pub fn unit_part(x: &Rational, p: u64) -> Result<Rational> {
    let v = valuation(x, p)?;
    Ok(x / pow_rat(p, v))
}

/// `p^e` for any integer exponent.
pub fn pow_rat(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Residue of `x` modulo `m`, defined when the denominator is prime to `m`.
pub fn residue(x: &Rational, m: u64) -> Result<u64> {
    let mb = BigInt::from(m);
    let num = x.numer().mod_floor(&mb).to_u64().unwrap();
    let den = x.denom().mod_floor(&mb).to_u64().unwrap();
    let inv = mod_inverse(den, m)
        .ok_or_else(|| Error::Domain(format!("denominator of {x} not invertible mod {m}")))?;
    Ok(((num as u128 * inv as u128) % m as u128) as u64)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Square class of a nonzero element of `Q_2`: `2^valuation * u` with
/// `u ≡ unit_mod8 (mod 8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitClass2 {
    pub valuation: i64,
    pub unit_mod8: u8,
}

impl UnitClass2 {
    /// Two square classes are equal in `Q_2*/(Q_2*)^2` iff the valuations
    /// agree mod 2 and the units agree mod 8.
    pub fn same_square_class(&self, other: &UnitClass2) -> bool {
        (self.valuation - other.valuation).rem_euclid(2) == 0 && self.unit_mod8 == other.unit_mod8
    }
}

pub fn square_class_mod8(x: &Rational) -> Result<UnitClass2> {
    let valuation = valuation(x, 2)?;
    let u = unit_part(x, 2)?;
    Ok(UnitClass2 {
        valuation,
        unit_mod8: residue(&u, 8)? as u8,
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
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

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// The primes dividing `2 * n`, ascending.
pub fn bad_primes(n: u64) -> Vec<u64> {
    prime_divisors(2 * n)
}

/// Rational with a `BigInt` numerator and denominator as `i64`s, when they fit.
pub fn to_i64_pair(x: &Rational) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}

pub fn is_integral_at(x: &Rational, p: u64) -> bool {
    x.is_zero() || valuation(x, p).map(|v| v >= 0).unwrap_or(false)
}

/// Format a rational as `n` or `n/d`.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `n` or `n/d` (optional sign, no whitespace).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() || d.is_negative() {
        return None;
    }
    Some(Rational::new(n, d))
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{residue, unit_part, valuation, Rational};
use crate::error::{Error, Result};

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let m128 = m as u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Quadratic residue symbol `(a/p)` for an odd prime `p`.
pub fn legendre_symbol(a: &BigInt, p: u64) -> i8 {
    debug_assert!(p % 2 == 1);
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi_symbol(a: i64, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for `n >= 1`.
pub fn kronecker_symbol(d: i64, n: u64) -> i8 {
    assert!(n >= 1);
    let mut n = n;
    let mut t = 1i8;
    while n.is_multiple_of(2) {
        n /= 2;
        t *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    t * jacobi_symbol(d, n)
}

/// Hilbert symbol `(a, b)_p` over `Q_p`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, p: u64) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("hilbert symbol of zero".into()));
    }
    let alpha = valuation(a, p)?;
    let beta = valuation(b, p)?;
    let u = unit_part(a, p)?;
    let v = unit_part(b, p)?;
    if p == 2 {
        let u = residue(&u, 8)?;
        let v = residue(&v, 8)?;
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(v)
            + (alpha.rem_euclid(2) as u64) * omega(v)
            + (beta.rem_euclid(2) as u64) * omega(u);
        return Ok(if e.is_multiple_of(2) { 1 } else { -1 });
    }
    let leg = |x: &Rational| -> Result<i8> {
        let r = residue(x, p)?;
        Ok(legendre_symbol(&BigInt::from(r), p))
    };
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && p % 4 == 3 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= leg(&u)?;
    }
    if alpha.rem_euclid(2) == 1 {
        s *= leg(&v)?;
    }
    Ok(s)
}

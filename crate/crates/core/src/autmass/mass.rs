//! Genus masses: from automorphism counts and from local densities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{bad_primes, factorize, int, kronecker_symbol, pow_rat, rat, Rational};
use crate::error::{Error, Result};
use crate::model::{discriminant_of, GenusRecord, QuadForm};

use super::aut::aut_order;
use super::density::local_density;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassValue {
    pub value: Rational,
}

/// Sum of `1/|Aut|` over the listed classes.
pub fn mass_from_aut(genus: &GenusRecord) -> Result<MassValue> {
    let mut value = Rational::zero();
    for f in &genus.forms {
        value += rat(1, aut_order(&f.form)? as i64);
    }
    Ok(MassValue { value })
}

/// Discriminant of `Q(√d)` for `d > 0`; `1` when `d` is a square.
pub fn fundamental_discriminant(d: u64) -> i64 {
    let core: u64 = factorize(d)
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    if core % 4 == 1 {
        core as i64
    } else {
        4 * core as i64
    }
}

fn character(f: i64, n: u64) -> i64 {
    if f == 1 {
        1
    } else {
        kronecker_symbol(f, n) as i64
    }
}

/// Generalized Bernoulli number `B_{2,χ}` for the character of
/// fundamental discriminant `f`.
pub fn bernoulli_2_chi(f: i64) -> Rational {
    if f == 1 {
        return rat(1, 6);
    }
    let fr = int(f);
    let mut sum = Rational::zero();
    for a in 1..=f {
        let c = character(f, a as u64);
        if c == 0 {
            continue;
        }
        let x = rat(a, f);
        sum += int(c) * (&x * &x - &x + rat(1, 6));
    }
    fr * sum
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// Mass of a rank 4 genus of discriminant `d` from its local densities at
/// the primes dividing `2d`.
pub fn siegel_mass_from_densities(d: u64, alphas: &BTreeMap<u64, Rational>) -> Result<Rational> {
    if d == 0 {
        return Err(Error::Degenerate);
    }
    let f = fundamental_discriminant(d);
    let s = rational_sqrt(&Rational::new(BigInt::from(d), BigInt::from(f)))
        .ok_or_else(|| Error::Domain(format!("{d}/{f} is not a square")))?;
    let mut mass = int(d as i64) * &s * &s * &s * bernoulli_2_chi(f) / int(6);
    for p in bad_primes(d) {
        let alpha = alphas
            .get(&p)
            .ok_or_else(|| Error::Domain(format!("missing density at p = {p}")))?;
        let euler = (Rational::one() - pow_rat(p, -2)) * (Rational::one() - int(character(f, p)) * pow_rat(p, -2));
        mass *= euler * int(2) / alpha;
    }
    Ok(mass)
}

pub fn siegel_mass_of_form(form: &QuadForm) -> Result<Rational> {
    let d = discriminant_of(form)?;
    let alphas = bad_primes(d)
        .into_iter()
        .map(|p| Ok((p, local_density(form, p)?)))
        .collect::<Result<_>>()?;
    siegel_mass_from_densities(d, &alphas)
}

/// Mass of the genus of the first listed form.
pub fn siegel_mass(genus: &GenusRecord) -> Result<MassValue> {
    let form = genus
        .first_form()
        .ok_or_else(|| Error::Domain(format!("genus {} has no forms", genus.label())))?;
    Ok(MassValue {
        value: siegel_mass_of_form(form)?,
    })
}

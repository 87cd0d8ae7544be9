//! Local densities from the Jordan splitting, and the appendix normalization.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{legendre_symbol, pow_rat, rat, RatMatrix, Rational};
use crate::error::{Error, Result};
use crate::model::{discriminant_of, QuadForm};
use crate::symbol::{symbol_2, symbol_odd_p, Constituent2};

/// Local density at one prime in both normalizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityValue {
    pub prime: u64,
    pub alpha: Rational,
    pub nipp_scaled: Rational,
}

/// Standard factor of one constituent of the given species.
fn species_factor(species: i64, p: u64) -> Rational {
    if species == 0 {
        return Rational::one();
    }
    let n = species.unsigned_abs() as i64;
    let s = (n + 1) / 2;
    let mut den = rat(2, 1);
    for k in 1..s {
        den *= Rational::one() - pow_rat(p, -2 * k);
    }
    if n % 2 == 0 {
        let eps = if species > 0 { 1 } else { -1 };
        den *= Rational::one() - pow_rat(p, -s) * rat(eps, 1);
    }
    den.recip()
}

fn cross_term(parts: &[(i64, usize)]) -> i64 {
    let mut ct = 0;
    for (j, &(sj, nj)) in parts.iter().enumerate() {
        for &(si, ni) in &parts[..j] {
            ct += (sj - si) * (ni * nj) as i64;
        }
    }
    ct
}

fn diagonal_product_odd(gram: &RatMatrix, p: u64) -> Result<(Rational, Vec<(i64, usize)>)> {
    let sym = symbol_odd_p(gram, p)?;
    let mut m = Rational::one();
    for e in &sym.entries {
        let n = e.dim as i64;
        let species = if n % 2 == 1 {
            n
        } else {
            let minus_one = if (n / 2) % 2 == 0 { 1 } else { -1 };
            let twist = legendre_symbol(&minus_one.into(), p) * e.sign;
            if twist == 1 { n } else { -n }
        };
        m *= species_factor(species, p);
    }
    let parts = sym.entries.iter().map(|e| (e.scale_exp, e.dim)).collect();
    Ok((m, parts))
}

fn diagonal_product_2(gram: &RatMatrix) -> Result<(Rational, Vec<(i64, usize)>)> {
    let sym = symbol_2(gram)?;
    let cs = &sym.constituents;
    let by_scale: BTreeMap<i64, &Constituent2> = cs.iter().map(|c| (c.scale_exp, c)).collect();
    let odd_at = |k: i64| by_scale.get(&k).is_some_and(|c| c.odd);
    let lo = cs.first().map_or(0, |c| c.scale_exp) - 1;
    let hi = cs.last().map_or(0, |c| c.scale_exp) + 1;
    let mut m = Rational::one();
    for k in lo..=hi {
        let (n, sign, odd, oddity) = match by_scale.get(&k) {
            Some(c) => (c.dim as i64, c.sign, c.odd, c.oddity as i64),
            None => (0, 1, false, 0),
        };
        let free = !odd_at(k - 1) && !odd_at(k + 1);
        let o = (oddity + if sign < 0 { 4 } else { 0 }).rem_euclid(8);
        let t = if !odd || n % 2 == 1 { n / 2 } else { n / 2 - 1 };
        let species = if free && matches!(o, 0 | 1 | 7) {
            2 * t
        } else if free && matches!(o, 3..=5) {
            -2 * t
        } else {
            2 * t + 1
        };
        m *= species_factor(species, 2);
    }
    let adjacent_odd = cs
        .windows(2)
        .filter(|w| w[0].odd && w[1].odd && w[0].scale_exp + 1 == w[1].scale_exp)
        .count() as i64;
    let even_dim: i64 = cs.iter().filter(|c| !c.odd).map(|c| c.dim as i64).sum();
    m *= pow_rat(2, adjacent_odd - even_dim);
    let parts = cs.iter().map(|c| (c.scale_exp, c.dim)).collect();
    Ok((m, parts))
}

/// Local density of the bilinear matrix `a` at `p`: the stable value of
/// `#{X mod p^r : XᵗaX ≡ a} / p^{r·n(n-1)/2}`.
pub fn local_density_gram(a: &RatMatrix, p: u64) -> Result<Rational> {
    if a.det().is_zero() {
        return Err(Error::Degenerate);
    }
    let n = a.dim() as i64;
    let (m, parts) = if p == 2 {
        diagonal_product_2(a)?
    } else {
        diagonal_product_odd(a, p)?
    };
    let v: i64 = parts.iter().map(|&(s, k)| s * k as i64).sum();
    let e = (n + 1) * v - cross_term(&parts);
    if e % 2 != 0 {
        return Err(Error::Domain(format!("odd density exponent {e} at p = {p}")));
    }
    Ok(pow_rat(p, e / 2) / m)
}

/// Local density of the even lattice with Gram matrix `2M`.
pub fn local_density(form: &QuadForm, p: u64) -> Result<Rational> {
    local_density_gram(&form.doubled_gram_matrix(), p)
}

/// Factor taking `local_density` to the appendix normalization.
pub fn nipp_calibration(_p: u64) -> Rational {
    rat(1, 2)
}

pub fn nipp_density(form: &QuadForm, p: u64) -> Result<Rational> {
    let d = discriminant_of(form)?;
    if (2 * d) % p != 0 {
        return Err(Error::Uncalibrated {
            prime: p,
            reason: format!("{p} does not divide 2*{d}; the appendix lists only such primes"),
        });
    }
    Ok(local_density(form, p)? * nipp_calibration(p))
}

pub fn density_value(form: &QuadForm, p: u64) -> Result<DensityValue> {
    let alpha = local_density(form, p)?;
    let nipp_scaled = nipp_density(form, p)?;
    Ok(DensityValue {
        prime: p,
        alpha,
        nipp_scaled,
    })
}

/// Observed ratios tabulated/alpha, grouped by prime.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CalibrationFit {
    pub ratios: BTreeMap<u64, BTreeMap<Rational, usize>>,
}

impl CalibrationFit {
    pub fn add(&mut self, p: u64, alpha: &Rational, tabulated: &Rational) {
        *self
            .ratios
            .entry(p)
            .or_default()
            .entry(tabulated / alpha)
            .or_insert(0) += 1;
    }

    /// The single ratio seen at `p`, if the samples agree.
    pub fn ratio(&self, p: u64) -> Option<&Rational> {
        let seen = self.ratios.get(&p)?;
        if seen.len() == 1 {
            seen.keys().next()
        } else {
            None
        }
    }

    /// Primes whose samples disagree with the frozen calibration, with the
    /// ratios observed there.
    pub fn deviations(&self) -> Vec<(u64, Rational, usize)> {
        let mut out = Vec::new();
        for (&p, seen) in &self.ratios {
            for (r, &count) in seen {
                if *r != nipp_calibration(p) {
                    out.push((p, r.clone(), count));
                }
            }
        }
        out
    }
}

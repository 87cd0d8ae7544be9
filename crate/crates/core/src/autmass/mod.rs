//! Automorphism groups, local densities and masses.

mod aut;
mod density;
mod mass;
mod oracle;

pub use aut::{aut_order, count_isometries_gram, is_isometric, short_vectors};
pub use density::{
    density_value, local_density, local_density_gram, nipp_calibration, nipp_density, CalibrationFit, DensityValue,
};
pub use mass::{
    bernoulli_2_chi, fundamental_discriminant, mass_from_aut, siegel_mass, siegel_mass_from_densities,
    siegel_mass_of_form, MassValue,
};
pub use oracle::{congruence_count_oracle, congruence_count_oracle_with_budget, oracle_budget, DEFAULT_ORACLE_BUDGET};

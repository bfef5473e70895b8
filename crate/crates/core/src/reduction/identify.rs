//! Identifications between the classical fields and the quantum ones.

use crate::error::{Error, Result};

/// `S_Q = ħ √(G_D/3) S̃`.
pub fn identify_phase(s_tilde: f64, g_d: f64, hbar: f64) -> f64 {
    hbar * (g_d / 3.0).sqrt() * s_tilde
}

/// `m² = (ħ²/6)(5Λ − 3R̂)`.
pub fn mass_squared_general(lambda: f64, ricci_scalar: f64, hbar: f64) -> f64 {
    hbar * hbar / 6.0 * (5.0 * lambda - 3.0 * ricci_scalar)
}

/// `m` from the general identification.
pub fn identify_mass_general(lambda: f64, ricci_scalar: f64, hbar: f64) -> Result<f64> {
    let m2 = mass_squared_general(lambda, ricci_scalar, hbar);
    if m2 < 0.0 {
        return Err(Error::TachyonicMass { m_squared: m2 });
    }
    Ok(m2.sqrt())
}

/// `m = ħ √(Λ/3)`, the general form after imposing `R̂ = Λ`.
pub fn identify_mass(lambda: f64, hbar: f64) -> Result<f64> {
    let m2 = hbar * hbar * lambda / 3.0;
    if m2 < 0.0 {
        return Err(Error::TachyonicMass { m_squared: m2 });
    }
    Ok(m2.sqrt())
}

/// Consistency of the trace equation with the `00` equation: `|R̂ − Λ|`.
pub fn cond00(ricci_scalar: f64, lambda: f64) -> f64 {
    (ricci_scalar - lambda).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_examples() {
        assert_eq!(identify_phase(0.0, 1.0, 1.0), 0.0);
        assert_eq!(identify_phase(2.0, 3.0, 1.0), 2.0);
        assert_eq!(identify_phase(1.0, 12.0, 2.0), 4.0);
    }

    #[test]
    fn mass_examples() {
        assert_eq!(identify_mass(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(identify_mass(3.0, 1.0).unwrap(), 1.0);
        assert_eq!(identify_mass_general(3.0, 3.0, 1.0).unwrap(), 1.0);
        assert!(matches!(identify_mass(-3.0, 1.0), Err(Error::TachyonicMass { .. })));
    }

    #[test]
    fn flat_background_forces_massless_sector() {
        assert_eq!(identify_mass_general(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(cond00(0.0, 1.0) > 0.5);
    }
}

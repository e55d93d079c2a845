//! The Schwarzian derivative `S(ρ) = ρ'''/ρ' − (3/2)(ρ''/ρ')²` on jets.

use crate::error::{Error, Result};
use crate::jet::Jet3;

/// Default threshold on `|ρ'|` below which the Schwarzian is undefined.
pub const DEFAULT_EPS_VELOCITY: f64 = 1e-10;

pub(crate) fn check_velocity(velocity: f64, eps: f64) -> Result<()> {
    if velocity.abs() > eps {
        Ok(())
    } else {
        Err(Error::VelocityVanishes { velocity, eps })
    }
}

/// Schwarzian of the germ carried by `j`.
pub fn schwarzian_jet(j: &Jet3) -> Result<f64> {
    schwarzian_jet_with(j, DEFAULT_EPS_VELOCITY)
}

pub fn schwarzian_jet_with(j: &Jet3, eps_velocity: f64) -> Result<f64> {
    check_velocity(j.f1, eps_velocity)?;
    let ratio = j.f2 / j.f1;
    Ok(j.f3 / j.f1 - 1.5 * ratio * ratio)
}

/// Residual of the cocycle identity `S(f∘g) = S(f)∘g · (g')² + S(g)`.
///
/// `outer` returns the jet of `f` at an arbitrary point; it is evaluated at
/// `g(x0)`.
pub fn schwarzian_compose_law_residual<F>(outer: F, g: &Jet3) -> Result<f64>
where
    F: Fn(f64) -> Jet3,
{
    let f_at_g = outer(g.f);
    let composed = Jet3::compose(&f_at_g, g);
    let lhs = schwarzian_jet(&composed)?;
    let rhs = schwarzian_jet(&f_at_g)? * g.f1 * g.f1 + schwarzian_jet(g)?;
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::Mobius;
    use approx::assert_relative_eq;

    #[test]
    fn affine_map_has_zero_schwarzian() {
        for x0 in [-3.0, 0.0, 1.7] {
            let j = Jet3::variable(x0) * 2.5 + 4.0;
            assert_eq!(schwarzian_jet(&j).unwrap(), 0.0);
        }
    }

    #[test]
    fn tangent_at_origin() {
        assert_relative_eq!(
            schwarzian_jet(&Jet3::new(0.0, 0.0, 1.0, 0.0, 2.0)).unwrap(),
            2.0
        );
    }

    #[test]
    fn exponential_gives_minus_half_rate_squared() {
        for x0 in [-1.0, 0.0, 0.8] {
            let j = (Jet3::variable(x0) * 2.0).exp();
            assert_relative_eq!(schwarzian_jet(&j).unwrap(), -2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn singular_velocity_is_reported() {
        let j = Jet3::new(0.0, 1.0, 1e-12, 1.0, 1.0);
        assert!(matches!(
            schwarzian_jet(&j),
            Err(Error::VelocityVanishes { .. })
        ));
        // a looser threshold accepts it
        assert!(schwarzian_jet_with(&j, 1e-14).is_ok());
    }

    #[test]
    fn mobius_outer_reduces_to_invariance() {
        let m = Mobius::new(2.0, -1.0, 0.5, 3.0).unwrap();
        let g = (Jet3::variable(0.2)).tan();
        let outer = |x: f64| m.apply_jet(&Jet3::variable(x)).unwrap();
        let res = schwarzian_compose_law_residual(outer, &g).unwrap();
        assert!(res < 1e-13, "residual {res}");
    }

    #[test]
    fn tan_of_doubled_argument() {
        let g = Jet3::variable(0.0) * 2.0;
        let composed = Jet3::compose(&Jet3::variable(g.f).tan(), &g);
        assert_relative_eq!(schwarzian_jet(&composed).unwrap(), 8.0, epsilon = 1e-14);
        let res = schwarzian_compose_law_residual(|x| Jet3::variable(x).tan(), &g).unwrap();
        assert!(res < 1e-14);
    }

    #[test]
    fn exp_of_exp() {
        // S(exp∘exp) at 0: h' = e, h'' = 2e, h''' = 5e so S = 5 − 6 = −1
        let g = Jet3::variable(0.0).exp();
        let composed = Jet3::compose(&Jet3::variable(g.f).exp(), &g);
        assert_relative_eq!(schwarzian_jet(&composed).unwrap(), -1.0, epsilon = 1e-14);
        let res = schwarzian_compose_law_residual(|x| Jet3::variable(x).exp(), &g).unwrap();
        assert!(res < 1e-14);
    }
}

//! Goldstone fields on the coset, their infinitesimal group action, and the
//! invariant Maurer–Cartan forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::schwarzian::{check_velocity, DEFAULT_EPS_VELOCITY};

/// Largest `|u|` accepted before `e^{±u}` is considered overflowed.
pub const MAX_EXPONENT: f64 = 700.0;

/// Fields `(ρ, s, u)` and their first time derivatives at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldstonePoint {
    pub t: f64,
    pub rho: f64,
    pub s: f64,
    pub u: f64,
    pub rho_dot: f64,
    pub s_dot: f64,
    pub u_dot: f64,
}

/// Infinitesimal parameters of `e^{iσH} e^{iαP} e^{iγK} e^{iβD}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupParams {
    pub sigma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl GroupParams {
    pub fn scaled(&self, k: f64) -> GroupParams {
        GroupParams {
            sigma: k * self.sigma,
            alpha: k * self.alpha,
            beta: k * self.beta,
            gamma: k * self.gamma,
        }
    }
}

/// Coefficients of `dt` in `g⁻¹dg = i(ω_H H + ω_P P + ω_K K + ω_D D)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCForms {
    pub omega_h: f64,
    pub omega_p: f64,
    pub omega_k: f64,
    pub omega_d: f64,
}

impl MCForms {
    pub fn as_array(&self) -> [f64; 4] {
        [self.omega_h, self.omega_p, self.omega_k, self.omega_d]
    }
}

/// First-order left action of the group on the coset fields.
///
/// Fields transform as scalars under the time shift (`ρ'(t') = ρ(t)`), so
/// `σ` only moves `t`; derivatives follow by differentiating the laws in `t`.
pub fn act_infinitesimal(g: &GroupParams, p: &GoldstonePoint) -> GoldstonePoint {
    let GroupParams {
        sigma,
        alpha,
        beta,
        gamma,
    } = *g;
    let GoldstonePoint {
        t,
        rho,
        s,
        u,
        rho_dot,
        s_dot,
        u_dot,
    } = *p;
    GoldstonePoint {
        t: t + sigma,
        rho: rho + alpha + beta * rho + gamma * rho * rho,
        s: s - beta * s + gamma * (1.0 - 2.0 * rho * s),
        u: u + beta + 2.0 * gamma * rho,
        rho_dot: rho_dot + beta * rho_dot + 2.0 * gamma * rho * rho_dot,
        s_dot: s_dot - beta * s_dot - 2.0 * gamma * (rho_dot * s + rho * s_dot),
        u_dot: u_dot + 2.0 * gamma * rho_dot,
    }
}

fn check_exponent(u: f64) -> Result<()> {
    if u.abs() > MAX_EXPONENT || !u.is_finite() {
        Err(Error::ExponentOverflow { u })
    } else {
        Ok(())
    }
}

pub fn maurer_cartan(p: &GoldstonePoint) -> Result<MCForms> {
    check_exponent(p.u)?;
    Ok(MCForms {
        omega_h: 1.0,
        omega_p: p.rho_dot * (-p.u).exp(),
        omega_k: p.u.exp() * (p.s_dot + p.s * p.s * p.rho_dot),
        omega_d: p.u_dot - 2.0 * p.s * p.rho_dot,
    })
}

/// `max |ω(g·p) − ω(p)|` over the four forms. Vanishes to first order in
/// the group parameters.
pub fn invariance_residual(g: &GroupParams, p: &GoldstonePoint) -> Result<f64> {
    let before = maurer_cartan(p)?.as_array();
    let after = maurer_cartan(&act_infinitesimal(g, p))?.as_array();
    Ok(before
        .iter()
        .zip(after)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Values of `u`, `s` and their derivatives fixed by `ω_P = μ ω_H` and
/// `ω_D = −2ν ω_H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedFields {
    pub u: f64,
    pub s: f64,
    pub s_dot: f64,
    pub u_dot: f64,
}

impl ConstrainedFields {
    /// Goldstone point built from the ρ-jet and these fields.
    pub fn goldstone_point(&self, rho: &Jet3) -> GoldstonePoint {
        GoldstonePoint {
            t: rho.x0,
            rho: rho.f,
            s: self.s,
            u: self.u,
            rho_dot: rho.f1,
            s_dot: self.s_dot,
            u_dot: self.u_dot,
        }
    }
}

/// Solves the inverse Higgs constraints for `u` and `s` in terms of `ρ`:
/// `e^{−u} = μ/ρ̇`, `s = ν/ρ̇ + ρ̈/(2ρ̇²)`.
pub fn impose_constraints(rho: &Jet3, mu: f64, nu: f64) -> Result<ConstrainedFields> {
    impose_constraints_with(rho, mu, nu, DEFAULT_EPS_VELOCITY)
}

pub fn impose_constraints_with(
    rho: &Jet3,
    mu: f64,
    nu: f64,
    eps_velocity: f64,
) -> Result<ConstrainedFields> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mu must be nonzero, got {mu}"
        )));
    }
    check_velocity(rho.f1, eps_velocity)?;
    let (v, a, j) = (rho.f1, rho.f2, rho.f3);
    let ratio = v / mu;
    if ratio <= 0.0 {
        return Err(Error::NegativeArgument { value: ratio });
    }
    let u = ratio.ln();
    check_exponent(u)?;
    Ok(ConstrainedFields {
        u,
        s: nu / v + a / (2.0 * v * v),
        u_dot: a / v,
        s_dot: -nu * a / (v * v) + j / (2.0 * v * v) - a * a / (v * v * v),
    })
}

/// `2μ ω_K − 2ν² ω_H` on the constraint surface; equals the Schwarzian of
/// the ρ-jet for every admissible `(μ, ν)`.
pub fn reduced_invariant(rho: &Jet3, mu: f64, nu: f64) -> Result<f64> {
    let fields = impose_constraints(rho, mu, nu)?;
    let forms = maurer_cartan(&fields.goldstone_point(rho))?;
    Ok(2.0 * mu * forms.omega_k - 2.0 * nu * nu * forms.omega_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarzian::schwarzian_jet;
    use approx::assert_relative_eq;

    fn point(rho: f64, s: f64, u: f64, rho_dot: f64, s_dot: f64, u_dot: f64) -> GoldstonePoint {
        GoldstonePoint {
            t: 0.3,
            rho,
            s,
            u,
            rho_dot,
            s_dot,
            u_dot,
        }
    }

    #[test]
    fn translation_shifts_rho_only() {
        let p = point(1.0, 0.5, 0.2, 1.5, -0.3, 0.7);
        let q = act_infinitesimal(
            &GroupParams {
                alpha: 0.01,
                ..Default::default()
            },
            &p,
        );
        assert_eq!(q.rho, 1.01);
        assert_eq!(
            (q.s, q.u, q.rho_dot, q.s_dot, q.u_dot),
            (p.s, p.u, p.rho_dot, p.s_dot, p.u_dot)
        );
    }

    #[test]
    fn dilatation_line() {
        let beta = 1e-3;
        let q = act_infinitesimal(
            &GroupParams {
                beta,
                ..Default::default()
            },
            &point(2.0, 1.0, 0.0, 1.0, 0.0, 0.0),
        );
        assert_relative_eq!(q.rho, 2.0 + 2.0 * beta);
        assert_relative_eq!(q.s, 1.0 - beta);
        assert_relative_eq!(q.u, beta);
    }

    #[test]
    fn special_conformal_line() {
        let gamma = 1e-3;
        let q = act_infinitesimal(
            &GroupParams {
                gamma,
                ..Default::default()
            },
            &point(1.0, 1.0, 0.4, 1.0, 0.0, 0.0),
        );
        assert_relative_eq!(q.rho, 1.0 + gamma);
        assert_relative_eq!(q.s, 1.0 - gamma);
        assert_relative_eq!(q.u, 0.4 + 2.0 * gamma);
    }

    #[test]
    fn time_shift_moves_t_only() {
        let p = point(1.0, 0.5, 0.2, 1.5, -0.3, 0.7);
        let q = act_infinitesimal(
            &GroupParams {
                sigma: 0.25,
                ..Default::default()
            },
            &p,
        );
        assert_eq!(q.t, p.t + 0.25);
        assert_eq!(q.rho, p.rho);
        assert_eq!(
            invariance_residual(
                &GroupParams {
                    sigma: 0.25,
                    ..Default::default()
                },
                &p
            )
            .unwrap(),
            0.0
        );
    }

    #[test]
    fn forms_by_substitution() {
        let f = maurer_cartan(&point(0.0, 0.0, 0.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(f.as_array(), [1.0, 1.0, 0.0, 0.0]);
        let f = maurer_cartan(&point(0.0, 1.0, 0.0, 2.0, 3.0, 4.0)).unwrap();
        assert_eq!(f.as_array(), [1.0, 2.0, 5.0, 0.0]);
        let f = maurer_cartan(&point(0.0, 0.0, 2f64.ln(), 2.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(f.omega_p, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn exponent_guard() {
        let p = point(0.0, 0.0, 701.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            maurer_cartan(&p),
            Err(Error::ExponentOverflow { .. })
        ));
        assert!(matches!(
            invariance_residual(&GroupParams::default(), &p),
            Err(Error::ExponentOverflow { .. })
        ));
    }

    #[test]
    fn identity_and_translation_are_exact() {
        let p = point(0.7, -0.4, 0.3, 1.3, 0.2, -0.5);
        assert_eq!(
            invariance_residual(&GroupParams::default(), &p).unwrap(),
            0.0
        );
        let alpha = GroupParams {
            alpha: 1e-3,
            ..Default::default()
        };
        assert_eq!(invariance_residual(&alpha, &p).unwrap(), 0.0);
    }

    #[test]
    fn dilatation_residual_is_second_order() {
        let p = point(0.7, -0.4, 0.3, 1.3, 0.2, -0.5);
        let g = GroupParams {
            beta: 1e-4,
            ..Default::default()
        };
        let r1 = invariance_residual(&g, &p).unwrap();
        let r2 = invariance_residual(&g.scaled(0.5), &p).unwrap();
        assert!(r1 <= 1e-7, "{r1}");
        let ratio = r1 / r2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn constraints_for_line_tan_exp() {
        let c = impose_constraints(&Jet3::variable(0.0), 1.0, 0.0).unwrap();
        assert_eq!((c.u, c.s), (0.0, 0.0));
        let tan = Jet3::variable(0.0).tan();
        let c = impose_constraints(&tan, 1.0, 0.0).unwrap();
        assert_eq!((c.u, c.s), (0.0, 0.0));
        assert_relative_eq!(c.s_dot, 1.0);
        let exp = Jet3::variable(0.0).exp();
        let c = impose_constraints(&exp, 1.0, 1.0).unwrap();
        assert_eq!(c.u, 0.0);
        assert_relative_eq!(c.s, 1.5);
    }

    #[test]
    fn constraint_errors() {
        let j = Jet3::variable(0.0);
        assert!(matches!(
            impose_constraints(&j, 0.0, 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            impose_constraints(&j, -1.0, 1.0),
            Err(Error::NegativeArgument { .. })
        ));
        let flat = Jet3::constant(0.0, 1.0);
        assert!(matches!(
            impose_constraints(&flat, 1.0, 1.0),
            Err(Error::VelocityVanishes { .. })
        ));
        // both signs negative is fine: e^u = ρ̇/μ > 0
        let back = Jet3::variable(0.0) * -2.0;
        assert_relative_eq!(impose_constraints(&back, -1.0, 0.0).unwrap().u, 2f64.ln());
    }

    #[test]
    fn constraints_fix_two_forms() {
        let rho = (Jet3::variable(0.4) * 1.3).exp() + Jet3::variable(0.4).sin();
        for (mu, nu) in [(1.0, 0.0), (0.5, -2.0), (3.0, 1.5)] {
            let c = impose_constraints(&rho, mu, nu).unwrap();
            let f = maurer_cartan(&c.goldstone_point(&rho)).unwrap();
            assert_relative_eq!(f.omega_p, mu, epsilon = 1e-12, max_relative = 1e-12);
            assert_relative_eq!(f.omega_d, -2.0 * nu, epsilon = 1e-12);
        }
    }

    #[test]
    fn reduction_reproduces_schwarzian() {
        assert_eq!(
            reduced_invariant(&Jet3::variable(1.0), 2.0, 0.5).unwrap(),
            0.0
        );
        let tan = Jet3::variable(0.0).tan();
        assert_relative_eq!(
            reduced_invariant(&tan, 1.0, 0.0).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            reduced_invariant(&tan, 2.0, 3.0).unwrap(),
            2.0,
            epsilon = 1e-13
        );
        let exp2 = (Jet3::variable(0.0) * 2.0).exp();
        assert_relative_eq!(
            reduced_invariant(&exp2, 1.0, 1.0).unwrap(),
            -2.0,
            epsilon = 1e-14
        );
        let j = Jet3::new(0.0, 0.3, 1.7, -0.9, 2.2);
        assert_relative_eq!(
            reduced_invariant(&j, -0.7 * -1.0, 2.5).unwrap(),
            schwarzian_jet(&j).unwrap(),
            epsilon = 1e-12
        );
    }
}

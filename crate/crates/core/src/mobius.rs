use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet3;

/// Default threshold below which `|c·ρ + d|` counts as a pole.
pub const DEFAULT_EPS_POLE: f64 = 1e-10;

/// Fractional linear map `x ↦ (a x + b) / (c x + d)` with `ad − bc ≠ 0`.
///
/// Stored unnormalized: `m` and `k·m` (k ≠ 0) act identically, so the
/// effective symmetry is GL(2,R)/Z₂. Use [`Mobius::normalize`] to pick the
/// representative with `det = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::DegenerateMobius { det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Equivalent matrix with `|det| = 1`.
    pub fn normalize(&self) -> Mobius {
        let k = self.det().abs().sqrt().recip();
        Mobius {
            a: k * self.a,
            b: k * self.b,
            c: k * self.c,
            d: k * self.d,
        }
    }

    /// Overall rescaling by `k ≠ 0`; acts identically on points.
    pub fn rescale(&self, k: f64) -> Result<Mobius> {
        Mobius::new(k * self.a, k * self.b, k * self.c, k * self.d)
    }

    /// Matrix product `self · other`, i.e. the map `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Result<Mobius> {
        Mobius::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        self.apply_with(x, DEFAULT_EPS_POLE)
    }

    pub fn apply_with(&self, x: f64, eps_pole: f64) -> Result<f64> {
        let den = self.c * x + self.d;
        check_pole(den, eps_pole)?;
        Ok((self.a * x + self.b) / den)
    }

    /// Jet of `t ↦ (a ρ(t) + b) / (c ρ(t) + d)` given the jet of `ρ`.
    pub fn apply_jet(&self, j: &Jet3) -> Result<Jet3> {
        self.apply_jet_with(j, DEFAULT_EPS_POLE)
    }

    pub fn apply_jet_with(&self, j: &Jet3, eps_pole: f64) -> Result<Jet3> {
        let den = self.c * j.f + self.d;
        check_pole(den, eps_pole)?;
        // derivatives of the map itself: M' = det/den², M'' = -2c det/den³,
        // M''' = 6c² det/den⁴
        let det = self.det();
        let r = 1.0 / den;
        let outer = [
            (self.a * j.f + self.b) * r,
            det * r * r,
            -2.0 * self.c * det * r * r * r,
            6.0 * self.c * self.c * det * r * r * r * r,
        ];
        Ok(j.map(outer))
    }
}

/// Jet of the Möbius image of `j`; see [`Mobius::apply_jet`].
pub fn mobius_apply(m: &Mobius, j: &Jet3) -> Result<Jet3> {
    m.apply_jet(j)
}

fn check_pole(den: f64, eps: f64) -> Result<()> {
    if den.abs() <= eps {
        Err(Error::PoleCrossing {
            denominator: den,
            eps,
        })
    } else {
        Ok(())
    }
}

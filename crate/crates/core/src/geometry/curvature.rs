//! Levi-Civita connection and curvature.
//!
//! Conventions:
//! `Γ^p_mn = ½ g^pq (∂_m g_qn + ∂_n g_qm − ∂_q g_mn)`,
//! `R^p_qmn = ∂_m Γ^p_nq − ∂_n Γ^p_mq + Γ^p_ma Γ^a_nq − Γ^p_na Γ^a_mq`,
//! `R_qn = R^p_qpn`, `R = g^qn R_qn`, `G_mn = R_mn − ½ g_mn R`.

use super::metric::{Coord4, Mat4, MetricField, MetricPoint, Tensor3, Tensor4, DIM, ZERO3, ZERO4};

/// `gamma[p][m][n] = Γ^p_mn`.
pub fn christoffel(mp: &MetricPoint) -> Tensor3 {
    let mut out = ZERO3;
    for p in 0..DIM {
        for m in 0..DIM {
            for n in m..DIM {
                let mut acc = 0.0;
                for q in 0..DIM {
                    let gi = mp.g_inv[p][q];
                    if gi != 0.0 {
                        acc += gi * (mp.dg[m][q][n] + mp.dg[n][q][m] - mp.dg[q][m][n]);
                    }
                }
                out[p][m][n] = 0.5 * acc;
                out[p][n][m] = 0.5 * acc;
            }
        }
    }
    out
}

/// `d[r][p][m][n] = ∂_r Γ^p_mn` from the closed-form first and second
/// metric derivatives.
pub fn christoffel_derivative(mp: &MetricPoint) -> Tensor4 {
    let dg_inv = mp.dg_inv();
    let mut out = ZERO4;
    for r in 0..DIM {
        for p in 0..DIM {
            for m in 0..DIM {
                for n in m..DIM {
                    let mut acc = 0.0;
                    for q in 0..DIM {
                        let first = mp.dg[m][q][n] + mp.dg[n][q][m] - mp.dg[q][m][n];
                        let second = mp.ddg[r][m][q][n] + mp.ddg[r][n][q][m] - mp.ddg[r][q][m][n];
                        acc += dg_inv[r][p][q] * first + mp.g_inv[p][q] * second;
                    }
                    out[r][p][m][n] = 0.5 * acc;
                    out[r][p][n][m] = 0.5 * acc;
                }
            }
        }
    }
    out
}

/// `∂_r Γ^p_mn` by central differences of the connection with step `h`,
/// Richardson-extrapolated from steps `h` and `h/2`.
pub fn christoffel_derivative_fd<M: MetricField + ?Sized>(
    field: &M,
    x: &Coord4,
    h: f64,
) -> Tensor4 {
    let central = |r: usize, step: f64| {
        let plus = christoffel(&field.metric_at(&x.shifted(r, step)));
        let minus = christoffel(&field.metric_at(&x.shifted(r, -step)));
        let mut d = ZERO3;
        for p in 0..DIM {
            for m in 0..DIM {
                for n in 0..DIM {
                    d[p][m][n] = (plus[p][m][n] - minus[p][m][n]) / (2.0 * step);
                }
            }
        }
        d
    };
    let mut out = ZERO4;
    for r in 0..DIM {
        let coarse = central(r, h);
        let fine = central(r, 0.5 * h);
        for p in 0..DIM {
            for m in 0..DIM {
                for n in 0..DIM {
                    out[r][p][m][n] = (4.0 * fine[p][m][n] - coarse[p][m][n]) / 3.0;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curvature {
    /// `riemann[p][q][m][n] = R^p_qmn`
    pub riemann: Tensor4,
    pub ricci: Mat4,
    pub scalar: f64,
    pub einstein: Mat4,
}

impl Curvature {
    pub fn from_connection(mp: &MetricPoint, gamma: &Tensor3, dgamma: &Tensor4) -> Self {
        let mut riemann = ZERO4;
        for p in 0..DIM {
            for q in 0..DIM {
                for m in 0..DIM {
                    for n in 0..DIM {
                        let mut acc = dgamma[m][p][n][q] - dgamma[n][p][m][q];
                        for a in 0..DIM {
                            acc +=
                                gamma[p][m][a] * gamma[a][n][q] - gamma[p][n][a] * gamma[a][m][q];
                        }
                        riemann[p][q][m][n] = acc;
                    }
                }
            }
        }
        let mut ricci = [[0.0; DIM]; DIM];
        for q in 0..DIM {
            for n in 0..DIM {
                ricci[q][n] = (0..DIM).map(|p| riemann[p][q][p][n]).sum();
            }
        }
        let scalar: f64 = (0..DIM)
            .flat_map(|q| (0..DIM).map(move |n| (q, n)))
            .map(|(q, n)| mp.g_inv[q][n] * ricci[q][n])
            .sum();
        let einstein = std::array::from_fn(|m| {
            std::array::from_fn(|n| ricci[m][n] - 0.5 * mp.g[m][n] * scalar)
        });
        Self {
            riemann,
            ricci,
            scalar,
            einstein,
        }
    }

    /// `R_pqmn = g_pa R^a_qmn`.
    pub fn riemann_lowered(&self, mp: &MetricPoint) -> Tensor4 {
        let mut out = ZERO4;
        for p in 0..DIM {
            for q in 0..DIM {
                for m in 0..DIM {
                    for n in 0..DIM {
                        out[p][q][m][n] = (0..DIM)
                            .map(|a| mp.g[p][a] * self.riemann[a][q][m][n])
                            .sum();
                    }
                }
            }
        }
        out
    }

    /// Largest violation of the algebraic Riemann identities: antisymmetry
    /// in each index pair, pair exchange symmetry, and the first Bianchi
    /// identity `R_pqmn + R_pmnq + R_pnqm = 0`.
    pub fn symmetry_residuals(&self, mp: &MetricPoint) -> RiemannSymmetry {
        let r = self.riemann_lowered(mp);
        let mut sym = RiemannSymmetry::default();
        for p in 0..DIM {
            for q in 0..DIM {
                for m in 0..DIM {
                    for n in 0..DIM {
                        let v = r[p][q][m][n];
                        sym.antisymmetry = sym
                            .antisymmetry
                            .max((v + r[p][q][n][m]).abs())
                            .max((v + r[q][p][m][n]).abs());
                        sym.pair_exchange = sym.pair_exchange.max((v - r[m][n][p][q]).abs());
                        sym.bianchi = sym.bianchi.max((v + r[p][m][n][q] + r[p][n][q][m]).abs());
                    }
                }
            }
        }
        sym
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RiemannSymmetry {
    pub antisymmetry: f64,
    pub pair_exchange: f64,
    pub bianchi: f64,
}

impl RiemannSymmetry {
    pub fn max(&self) -> f64 {
        self.antisymmetry.max(self.pair_exchange).max(self.bianchi)
    }
}

/// Curvature at `x` with closed-form connection derivatives.
pub fn curvature<M: MetricField + ?Sized>(field: &M, x: &Coord4) -> Curvature {
    let mp = field.metric_at(x);
    let gamma = christoffel(&mp);
    let dgamma = christoffel_derivative(&mp);
    Curvature::from_connection(&mp, &gamma, &dgamma)
}

/// Curvature at `x` with finite-difference connection derivatives.
pub fn curvature_fd<M: MetricField + ?Sized>(field: &M, x: &Coord4, h: f64) -> Curvature {
    let mp = field.metric_at(x);
    let gamma = christoffel(&mp);
    let dgamma = christoffel_derivative_fd(field, x, h);
    Curvature::from_connection(&mp, &gamma, &dgamma)
}

/// `∇_p g_mn` with `∂_p g_mn` taken by central differences of the metric;
/// vanishes for the Levi-Civita connection.
pub fn metric_compatibility_fd<M: MetricField + ?Sized>(field: &M, x: &Coord4, h: f64) -> f64 {
    let mp = field.metric_at(x);
    let gamma = christoffel(&mp);
    let mut worst = 0.0f64;
    for p in 0..DIM {
        let plus = field.metric_at(&x.shifted(p, h)).g;
        let minus = field.metric_at(&x.shifted(p, -h)).g;
        for m in 0..DIM {
            for n in 0..DIM {
                let mut cov = (plus[m][n] - minus[m][n]) / (2.0 * h);
                for a in 0..DIM {
                    cov -= gamma[a][p][m] * mp.g[a][n] + gamma[a][p][n] * mp.g[m][a];
                }
                worst = worst.max(cov.abs());
            }
        }
    }
    worst
}

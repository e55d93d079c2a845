//! SL(2,R)×R generators as first-order differential operators with exact
//! Gaussian-integer coefficients.
//!
//! `P = i∂_ρ`, `D = iρ∂_ρ`, `K = iρ²∂_ρ` act on the form of the field and
//! `H = i∂_t` on time. Brackets are evaluated both symbolically on the
//! coefficient polynomials and by acting on test monomials `t^m ρ^k`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub type Gaussian = Complex<i64>;

const I: Gaussian = Complex { re: 0, im: 1 };
const ZERO: Gaussian = Complex { re: 0, im: 0 };

/// Highest total degree of the test monomials used by [`bracket_check`].
pub const DEGREE_CAP: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorName {
    H,
    P,
    D,
    K,
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeneratorName::H => "H",
            GeneratorName::P => "P",
            GeneratorName::D => "D",
            GeneratorName::K => "K",
        };
        f.write_str(s)
    }
}

/// Vector field `time·∂_t + field(ρ)·∂_ρ`, with `time` constant and `field`
/// a polynomial in `ρ` stored lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    pub time: Gaussian,
    pub field: Vec<Gaussian>,
}

impl VectorField {
    fn trimmed(mut self) -> Self {
        while self.field.last() == Some(&ZERO) {
            self.field.pop();
        }
        self
    }

    pub fn scale(&self, k: Gaussian) -> VectorField {
        VectorField {
            time: self.time * k,
            field: self.field.iter().map(|c| c * k).collect(),
        }
        .trimmed()
    }

    /// Symbolic commutator. Since the time coefficients are constant and the
    /// field coefficients do not depend on `t`, only `A B' − B A'` survives.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let a = &self.field;
        let b = &other.field;
        let lhs = poly_mul(a, &poly_deriv(b));
        let rhs = poly_mul(b, &poly_deriv(a));
        VectorField {
            time: ZERO,
            field: poly_sub(&lhs, &rhs),
        }
        .trimmed()
    }

    /// Action on a bivariate polynomial in `(t, ρ)`.
    pub fn apply(&self, f: &Poly2) -> Poly2 {
        let mut out = Poly2::default();
        for (&(m, k), &c) in &f.terms {
            if m > 0 && self.time != ZERO {
                out.add_term(m - 1, k, self.time * c * i64::from(m));
            }
            if k > 0 {
                for (j, &a) in self.field.iter().enumerate() {
                    out.add_term(m, k - 1 + j as u32, a * c * i64::from(k));
                }
            }
        }
        out
    }
}

/// One of the four generators of SL(2,R)×R. The ρ-sector coefficient is an
/// integer polynomial (`P ↦ 1`, `D ↦ ρ`, `K ↦ ρ²`); the overall factor `i`
/// is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: GeneratorName,
    pub rho_coeffs: Vec<i64>,
    pub acts_on_time: bool,
}

impl Generator {
    pub fn new(name: GeneratorName) -> Self {
        let (rho_coeffs, acts_on_time) = match name {
            GeneratorName::H => (vec![], true),
            GeneratorName::P => (vec![1], false),
            GeneratorName::D => (vec![0, 1], false),
            GeneratorName::K => (vec![0, 0, 1], false),
        };
        Self {
            name,
            rho_coeffs,
            acts_on_time,
        }
    }

    /// The operator including its factor `i`.
    pub fn operator(&self) -> VectorField {
        VectorField {
            time: if self.acts_on_time { I } else { ZERO },
            field: self.rho_coeffs.iter().map(|&c| I * c).collect(),
        }
        .trimmed()
    }
}

/// Sparse bivariate polynomial `Σ c_{m,k} t^m ρ^k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Gaussian>,
}

impl Poly2 {
    pub fn monomial(t_pow: u32, rho_pow: u32) -> Self {
        let mut p = Poly2::default();
        p.add_term(t_pow, rho_pow, Complex::new(1, 0));
        p
    }

    fn add_term(&mut self, m: u32, k: u32, c: Gaussian) {
        if c == ZERO {
            return;
        }
        let entry = self.terms.entry((m, k)).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.terms.remove(&(m, k));
        }
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(m, k), &c) in &other.terms {
            out.add_term(m, k, -c);
        }
        out
    }

    /// Largest coefficient magnitude (L∞ over real and imaginary parts).
    pub fn max_abs(&self) -> i64 {
        self.terms
            .values()
            .map(|c| c.re.abs().max(c.im.abs()))
            .max()
            .unwrap_or(0)
    }
}

fn poly_deriv(p: &[Gaussian]) -> Vec<Gaussian> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as i64)
        .collect()
}

fn poly_mul(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(ZERO) - b.get(k).copied().unwrap_or(ZERO))
        .collect()
}

/// Commutator `[X, Y] f = X(Y f) − Y(X f)` evaluated on a test polynomial.
pub fn commutator_on(x: &VectorField, y: &VectorField, f: &Poly2) -> Poly2 {
    x.apply(&y.apply(f)).sub(&y.apply(&x.apply(f)))
}

/// One structure relation `[X, Y] = k·i·Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketRelation {
    pub left: GeneratorName,
    pub right: GeneratorName,
    /// `None` when the bracket must vanish.
    pub result: Option<(i64, GeneratorName)>,
    /// Max coefficient deviation, symbolic and on monomials combined.
    pub residual: i64,
}

impl BracketRelation {
    pub fn label(&self) -> String {
        match self.result {
            Some((1, z)) => format!("[{},{}]=i{}", self.left, self.right, z),
            Some((k, z)) => format!("[{},{}]={}i{}", self.left, self.right, k, z),
            None => format!("[{},{}]=0", self.left, self.right),
        }
    }
}

/// The relations `[P,D]=iP`, `[P,K]=2iD`, `[D,K]=iK` and `[H,·]=0`.
pub fn structure_relations() -> Vec<(GeneratorName, GeneratorName, Option<(i64, GeneratorName)>)> {
    use GeneratorName::*;
    vec![
        (P, D, Some((1, P))),
        (P, K, Some((2, D))),
        (D, K, Some((1, K))),
        (H, P, None),
        (H, D, None),
        (H, K, None),
    ]
}

fn relation_residual(
    left: GeneratorName,
    right: GeneratorName,
    result: Option<(i64, GeneratorName)>,
    degree_cap: u32,
) -> i64 {
    let x = Generator::new(left).operator();
    let y = Generator::new(right).operator();
    let expected = match result {
        Some((k, z)) => Generator::new(z).operator().scale(I * k),
        None => VectorField {
            time: ZERO,
            field: vec![],
        },
    };

    let symbolic = x.bracket(&y);
    let mut worst = (symbolic.time - expected.time)
        .re
        .abs()
        .max((symbolic.time - expected.time).im.abs());
    let diff = poly_sub(&symbolic.field, &expected.field);
    for c in diff {
        worst = worst.max(c.re.abs()).max(c.im.abs());
    }

    for total in 0..=degree_cap {
        for m in 0..=total {
            let f = Poly2::monomial(m, total - m);
            let got = commutator_on(&x, &y, &f);
            let want = expected.apply(&f);
            worst = worst.max(got.sub(&want).max_abs());
        }
    }
    worst
}

/// Evaluates every structure relation on the generators and returns them
/// with their residuals.
pub fn bracket_relations() -> Vec<BracketRelation> {
    bracket_relations_to_degree(DEGREE_CAP)
}

pub fn bracket_relations_to_degree(degree_cap: u32) -> Vec<BracketRelation> {
    structure_relations()
        .into_iter()
        .map(|(left, right, result)| BracketRelation {
            left,
            right,
            result,
            residual: relation_residual(left, right, result, degree_cap),
        })
        .collect()
}

/// Maximum deviation of the computed brackets from the SL(2,R)×R structure
/// relations. Integer arithmetic throughout, so the result is exactly 0.
pub fn bracket_check() -> f64 {
    bracket_relations()
        .iter()
        .map(|r| r.residual)
        .max()
        .unwrap_or(0) as f64
}

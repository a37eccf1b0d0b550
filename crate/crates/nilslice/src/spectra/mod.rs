//! Adjoint quotient data of slice points: spectral classes, the closed-form
//! characteristic polynomials, fiber equations, the target surfaces and the
//! Kleinian degenerations.

mod closed;
mod kleinian;

use serde::{Deserialize, Serialize};

use crate::kernel::{roots_exact, sort_complex, CPoly, ComplexF, KernelError, MPoly, Poly, QPoly, Ring};
use crate::liealg::{self, AlgebraKind, Family, GMatrix, LieError};
use crate::slices::{slice_point_variant, OrbitIndex, QCoords, SliceError, Variant};

pub use closed::{
    closed_form_charpoly, closed_form_numerator, closed_form_polys, fiber_polys, reduced_closed_form, y_constant, ClosedFormPolys,
    FiberPolys,
};
pub use kleinian::{kleinian_check, KleinianReport, SingularityType};

/// Default numeric tolerance for root finding and comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error("characteristic polynomial has the wrong parity for its kind")]
    ParityViolation,
    #[error("constant term and sign invariant disagree by {0:e}")]
    InconsistentSign(f64),
    #[error("normal form reduction failed; remaining equation {0}")]
    ReductionFailure(String),
    #[error("operation not defined for this kind")]
    WrongKind,
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Image of a point under χ composed with ε: the squared eigenvalues, plus
/// the sign invariant p for so(2m).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralClass {
    pub kind: AlgebraKind,
    /// Sorted by (re, im).
    pub mu: Vec<ComplexF>,
    pub p_sign: Option<ComplexF>,
    /// The monic reduced polynomial P = Π(t − μ_i), kept at full precision
    /// when the class was computed from a matrix.
    pub reduced: CPoly,
}

impl SpectralClass {
    pub fn from_mu(kind: AlgebraKind, mut mu: Vec<ComplexF>, p_sign: Option<ComplexF>) -> Self {
        sort_complex(&mut mu);
        let reduced = Poly::from_roots(&mu);
        SpectralClass { kind, mu, p_sign, reduced }
    }

    pub fn m(&self) -> usize {
        self.kind.m
    }

    /// μ ↦ r²μ, p ↦ r^m p: the image of λ_r.
    pub fn scaled(&self, r: ComplexF) -> Self {
        let r2 = r * r;
        SpectralClass::from_mu(
            self.kind,
            self.mu.iter().map(|x| x * r2).collect(),
            self.p_sign.map(|p| p * r.powi(self.kind.m as i32)),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct SpectralJson {
    kind: Family,
    m: usize,
    mu: Vec<[f64; 2]>,
    #[serde(rename = "pSign", skip_serializing_if = "Option::is_none", default)]
    p_sign: Option<[f64; 2]>,
}

impl Serialize for SpectralClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpectralJson {
            kind: self.kind.family,
            m: self.kind.m,
            mu: self.mu.iter().map(|z| [z.re, z.im]).collect(),
            p_sign: self.p_sign.map(|z| [z.re, z.im]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectralClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SpectralJson::deserialize(d)?;
        let kind = AlgebraKind::new(j.kind, j.m).map_err(serde::de::Error::custom)?;
        if j.mu.len() != j.m {
            return Err(serde::de::Error::custom("mu must have m entries"));
        }
        let mu = j.mu.iter().map(|[a, b]| ComplexF::new(*a, *b)).collect();
        Ok(SpectralClass::from_mu(kind, mu, j.p_sign.map(|[a, b]| ComplexF::new(a, b))))
    }
}

/// The reduced characteristic polynomial P with χ(t) = P(t²), or t·P(t²)
/// for so(2m+1), computed exactly.
pub fn reduced_charpoly(x: &GMatrix) -> Result<QPoly, SpectraError> {
    let chi = liealg::charpoly_exact(x);
    let chi = match x.kind.family {
        Family::B => chi.div_t().ok_or(SpectraError::ParityViolation)?,
        _ => chi,
    };
    chi.even_part().map_err(|_| SpectraError::ParityViolation)
}

pub fn spectral_class_of(x: &GMatrix) -> Result<SpectralClass, SpectraError> {
    let p = reduced_charpoly(x)?;
    let reduced = p.to_complex();
    let mu = roots_exact(&p, DEFAULT_TOL * 1e-3)?;
    let p_sign = match x.kind.family {
        Family::D => Some(liealg::p_invariant(x)?.to_complex()),
        _ => None,
    };
    Ok(SpectralClass { kind: x.kind, mu, p_sign, reduced })
}

/// Q_τ = (P + p²)/t, so that t·Q_τ − p² = P.
pub fn q_tau(tau: &SpectralClass, tol: f64) -> Result<CPoly, SpectraError> {
    if tau.kind.family != Family::D {
        return Err(SpectraError::WrongKind);
    }
    let p = tau.p_sign.unwrap_or_default();
    let c0 = tau.reduced.coeff(0);
    let gap = (c0 + p * p).norm();
    let scale = tau.reduced.max_abs_coeff().max(1.0);
    if gap > tol * scale {
        return Err(SpectraError::InconsistentSign(gap));
    }
    Ok(Poly::new(tau.reduced.coeffs().iter().skip(1).copied().collect()))
}

fn to_c(p: &QPoly) -> CPoly {
    p.to_complex()
}

/// Left minus right side of the kind's fiber equation at c, with τ numeric:
///
/// - sp:        P + Û² + tV̂² − ÂD̂
/// - so(2m):    Q + V̂² + tŴ² − 2pŴ − ÂD̂
/// - so(2m+1):  tP + Û² + tV̂² − â·d̂
pub fn fiber_residual(idx: OrbitIndex, c: &QCoords, tau: &SpectralClass) -> Result<CPoly, SpectraError> {
    let f = fiber_polys(idx, c)?;
    let (a, d, u, v) = (to_c(&f.a_hat), to_c(&f.d_hat), to_c(&f.u_hat), to_c(&f.v_hat));
    let t = CPoly::t_pow(1);
    let p_tau = &tau.reduced;
    let rhs = &a * &d;
    Ok(match idx.family() {
        Family::C => &(&(p_tau + &(&u * &u)) + &(&t * &(&v * &v))) - &rhs,
        Family::D => {
            let q = q_tau(tau, 1e-6)?;
            let p = tau.p_sign.unwrap_or_default();
            let (w, _) = crate::kernel::w_from_u(&u);
            let lhs = &(&(&q + &(&v * &v)) + &(&t * &(&w * &w))) - &w.scale(&(p * 2.0));
            &lhs - &rhs
        }
        Family::B => &(&(&(&t * p_tau) + &(&u * &u)) + &(&t * &(&v * &v))) - &rhs,
    })
}

/// Which surface a fiber embeds into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceFamily {
    /// {P(z) + u² + zv² = 0}
    SigmaC,
    /// {Q(z) + v² + zw² = 2p·w}
    GammaD,
    /// {zP(z) + u² + zv² = 0}
    SigmaB,
}

/// A surface in ℂ³ with coordinates (x₀, x₁, z); (u, v, z) for the Σ
/// surfaces and (v, w, z) for Γ.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSpec {
    pub family: SurfaceFamily,
    /// P_τ for Σ, Q_τ for Γ.
    pub coefficient: CPoly,
    pub p: Option<ComplexF>,
    /// Expanded defining equation in (x₀, x₁, z).
    pub equation: MPoly<ComplexF>,
}

impl SurfaceSpec {
    pub fn variable_names(&self) -> [&'static str; 3] {
        match self.family {
            SurfaceFamily::GammaD => ["v", "w", "z"],
            _ => ["u", "v", "z"],
        }
    }

    pub fn eval(&self, pt: [ComplexF; 3]) -> ComplexF {
        self.equation.eval(&pt)
    }

    /// |F(pt)| / max(1, Σ|terms|).
    pub fn relative_residual(&self, pt: [ComplexF; 3]) -> f64 {
        let scale = self.equation.abs_term_sum(&pt, |c| c.norm());
        self.eval(pt).norm() / scale.max(1.0)
    }
}

fn z_poly(p: &CPoly) -> MPoly<ComplexF> {
    p.coeffs()
        .iter()
        .enumerate()
        .fold(MPoly::zero(), |acc, (k, c)| acc + MPoly::monomial(*c, &[0, 0, k as u32]))
}

pub fn surface(tau: &SpectralClass) -> Result<SurfaceSpec, SpectraError> {
    surface_variant(tau, Variant::Corrected)
}

/// `Printed` differs only for Γ, where the linear term is p·w.
pub fn surface_variant(tau: &SpectralClass, variant: Variant) -> Result<SurfaceSpec, SpectraError> {
    let x0 = MPoly::<ComplexF>::var(0);
    let x1 = MPoly::<ComplexF>::var(1);
    let z = MPoly::<ComplexF>::var(2);
    let squares = x0.clone() * x0.clone() + z.clone() * x1.clone() * x1.clone();
    Ok(match tau.kind.family {
        Family::C => SurfaceSpec {
            family: SurfaceFamily::SigmaC,
            coefficient: tau.reduced.clone(),
            p: None,
            equation: z_poly(&tau.reduced) + squares,
        },
        Family::B => SurfaceSpec {
            family: SurfaceFamily::SigmaB,
            coefficient: tau.reduced.clone(),
            p: None,
            equation: z.clone() * z_poly(&tau.reduced) + squares,
        },
        Family::D => {
            let q = q_tau(tau, 1e-6)?;
            let p = tau.p_sign.unwrap_or_default();
            let lin = match variant {
                Variant::Corrected => p * 2.0,
                Variant::Printed => p,
            };
            SurfaceSpec {
                family: SurfaceFamily::GammaD,
                coefficient: q.clone(),
                p: Some(p),
                equation: z_poly(&q) + squares - MPoly::constant(lin) * x1,
            }
        }
    })
}

/// Regular locus: distinct μ, and for sp and so(2m+1) also nonzero μ.
pub fn is_regular(tau: &SpectralClass, tol: f64) -> bool {
    let mu = &tau.mu;
    let distinct = mu
        .iter()
        .enumerate()
        .all(|(i, a)| mu[i + 1..].iter().all(|b| (a - b).norm() > tol));
    let nonzero = tau.kind.family == Family::D || mu.iter().all(|x| x.norm() > tol);
    distinct && nonzero
}

/// Exact residual charpoly(S(c)) − closed form, both in the given reading.
pub fn charpoly_identity_check_variant(
    idx: OrbitIndex,
    c: &QCoords,
    variant: Variant,
) -> Result<QPoly, SpectraError> {
    let s = slice_point_variant(idx, c, variant)?;
    let chi = liealg::charpoly_exact(&s);
    Ok(&chi - &closed_form_charpoly(c, variant)?)
}

pub fn charpoly_identity_check(idx: OrbitIndex, c: &QCoords) -> Result<QPoly, SpectraError> {
    charpoly_identity_check_variant(idx, c, Variant::Corrected)
}

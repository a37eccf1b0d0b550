use crate::kernel::{uv_from_b, GaussianRational, MPoly, Poly, Ring};
use crate::liealg::Family;
use crate::slices::{OrbitIndex, SliceCoords, Variant};

use super::SpectraError;

/// The polynomials entering the characteristic polynomial identity.
///
/// For sp and so(2m) these are A, D, B. For so(2m+1) they are
/// a = t²A + (−1)ⁿa₀²/2, d̃ = t²D + 2(−1)^{m−n}d₀² and b̃ = a₀d₀ + tB, i.e.
/// the rational d and b multiplied by t² and t, with A, D, B the so(2m)
/// polynomials at n−1 kept in `inner`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormPolys<R: Ring> {
    pub a: Poly<R>,
    pub d: Poly<R>,
    pub b: Poly<R>,
    pub inner: Option<Box<ClosedFormPolys<R>>>,
}

fn sgn<R: Ring>(k: usize) -> R {
    R::from_int(if k.is_multiple_of(2) { 1 } else { -1 })
}

fn poly_from_terms<R: Ring>(terms: impl IntoIterator<Item = (R, usize)>) -> Poly<R> {
    let mut v: Vec<R> = Vec::new();
    for (c, k) in terms {
        if v.len() <= k {
            v.resize(k + 1, R::zero());
        }
        v[k] = v[k].clone() + c;
    }
    Poly::new(v)
}

fn a_poly<R: Ring>(n: usize, a: &[R]) -> Poly<R> {
    poly_from_terms(
        std::iter::once((R::one(), 2 * n)).chain((1..=n).map(|i| (sgn::<R>(i) * a[i - 1].clone(), 2 * (n - i)))),
    )
}

fn build<R: Ring>(c: &SliceCoords<R>, variant: Variant) -> ClosedFormPolys<R> {
    let idx = c.idx;
    let (m, n) = (idx.m(), idx.n);
    match idx.family() {
        Family::C => {
            let k = m - n;
            let d = poly_from_terms(
                std::iter::once((R::one(), 2 * k))
                    .chain((1..=k).map(|j| (sgn::<R>(j) * c.d[j - 1].clone(), 2 * (k - j)))),
            );
            let b = poly_from_terms(
                (1..=n)
                    .map(|i| (c.y[i - 1].clone(), i - 1))
                    .chain((1..=n).map(|i| (-(sgn::<R>(i - 1) * c.z[i - 1].clone()), n + i - 1))),
            );
            ClosedFormPolys { a: a_poly(n, &c.a), d, b, inner: None }
        }
        Family::D => {
            let k = m - n;
            let four = R::from_int(4);
            let d = poly_from_terms(
                (1..k).map(|j| (sgn::<R>(j - 1) * four.clone() * c.d[j - 1].clone(), 2 * (k - 1 - j))),
            );
            let b = poly_from_terms(
                (1..=n)
                    .map(|i| (c.y[i - 1].clone(), i - 1))
                    .chain((1..=n + 1).map(|i| (-(sgn::<R>(i - 1) * c.z[i - 1].clone()), n + i - 1)))
                    .chain(std::iter::once((-sgn::<R>(k), m))),
            );
            ClosedFormPolys { a: a_poly(n, &c.a), d, b, inner: None }
        }
        Family::B => {
            let inner = build(&c.d_part(), variant);
            let a0 = c.a0.clone().expect("shape checked");
            let d0 = c.d0.clone().expect("shape checked");
            let (ca, cd) = match variant {
                Variant::Corrected => (R::from_gaussian(&GaussianRational::ratio(1, 2)), R::from_int(2)),
                Variant::Printed => (R::one(), R::one()),
            };
            let t2 = Poly::t_pow(2);
            let a = &(&t2 * &inner.a) + &Poly::constant(sgn::<R>(n) * ca * a0.clone() * a0.clone());
            let d = &(&t2 * &inner.d) + &Poly::constant(sgn::<R>(m - n) * cd * d0.clone() * d0.clone());
            let b = &Poly::constant(a0 * d0) + &inner.b.shift(1);
            ClosedFormPolys { a, d, b, inner: Some(Box::new(inner)) }
        }
    }
}

/// A, D, B built coefficient by coefficient from the coordinates.
pub fn closed_form_polys<R: Ring>(c: &SliceCoords<R>) -> Result<ClosedFormPolys<R>, SpectraError> {
    c.check_shape(c.idx)?;
    Ok(build(c, Variant::Corrected))
}

/// Closed-form characteristic polynomial χ(t):
///
/// - sp:        A·D − (−1)^m B(t)B(−t)   (`Printed`: + instead of −)
/// - so(2m):    t²A·D + (−1)^m B(t)B(−t)
/// - so(2m+1):  (a·d̃ − (−1)^m b̃(t)b̃(−t))/t
pub fn closed_form_charpoly<R: Ring>(c: &SliceCoords<R>, variant: Variant) -> Result<Poly<R>, SpectraError> {
    c.check_shape(c.idx)?;
    let f = build(c, variant);
    let m = c.idx.m();
    let bb = &f.b * &f.b.reflect();
    Ok(match c.idx.family() {
        Family::C => {
            let s = match variant {
                Variant::Corrected => -sgn::<R>(m),
                Variant::Printed => sgn::<R>(m),
            };
            &(&f.a * &f.d) + &bb.scale(&s)
        }
        Family::D => &(&f.a * &f.d).shift(2) + &bb.scale(&sgn::<R>(m)),
        Family::B => closed_form_numerator(c, variant)?.div_t().ok_or(SpectraError::ParityViolation)?,
    })
}

/// t·χ(t) for so(2m+1), χ(t) otherwise; over inexact rings the division
/// by t is left to the caller.
pub fn closed_form_numerator<R: Ring>(c: &SliceCoords<R>, variant: Variant) -> Result<Poly<R>, SpectraError> {
    if c.idx.family() != Family::B {
        return closed_form_charpoly(c, variant);
    }
    c.check_shape(c.idx)?;
    let f = build(c, variant);
    let bb = &f.b * &f.b.reflect();
    Ok(&(&f.a * &f.d) - &bb.scale(&sgn::<R>(c.idx.m())))
}

/// The reduced closed form P with χ(t) = P(t²) (t·P(t²) for so(2m+1)).
pub fn reduced_closed_form<R: Ring>(c: &SliceCoords<R>) -> Result<Poly<R>, SpectraError> {
    let chi = closed_form_charpoly(c, Variant::Corrected)?;
    let chi = match c.idx.family() {
        Family::B => chi.div_t().ok_or(SpectraError::ParityViolation)?,
        _ => chi,
    };
    chi.even_part().map_err(|_| SpectraError::ParityViolation)
}

/// Â, D̂, Û, V̂ before any reduction modulo Â.
///
/// sp uses (U, V) from B with parameter m+1, so P + Û² + tV̂² = ÂD̂;
/// so(2m) uses m, so P + Û² + tV̂² = tÂD̂; so(2m+1) uses b̃ with m+1, so
/// tP + Û² + tV̂² = â·d̂.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPolys<R: Ring> {
    pub a_hat: Poly<R>,
    pub d_hat: Poly<R>,
    pub u_hat: Poly<R>,
    pub v_hat: Poly<R>,
}

pub fn fiber_polys<R: Ring>(idx: OrbitIndex, c: &SliceCoords<R>) -> Result<FiberPolys<R>, SpectraError> {
    c.check_shape(idx)?;
    let f = build(c, Variant::Corrected);
    let m = idx.m() as i64;
    let param = if idx.family() == Family::D { m } else { m + 1 };
    let (u, v) = uv_from_b(&f.b, param);
    let even = |p: &Poly<R>| p.even_part().map_err(|_| SpectraError::ParityViolation);
    Ok(FiberPolys { a_hat: even(&f.a)?, d_hat: even(&f.d)?, u_hat: even(&u)?, v_hat: even(&v)? })
}

/// For so(2m): the constant y of Û = tŴ − y is c·x_k for a single
/// coordinate x_k (y₁ when n ≥ 1, z₁ when n = 0). Returns (k, c), read off
/// symbolically.
pub fn y_constant(idx: OrbitIndex) -> Result<(usize, GaussianRational), SpectraError> {
    if idx.family() != Family::D {
        return Err(SpectraError::WrongKind);
    }
    let len = idx.shape().len();
    let vars: Vec<MPoly<GaussianRational>> = (0..len).map(MPoly::var).collect();
    let c = SliceCoords::from_flat(idx, vars)?;
    let f = fiber_polys(idx, &c)?;
    let y = -f.u_hat.coeff(0);
    let (coef, e) = y.as_monomial().ok_or(SpectraError::ReductionFailure(format!("{y:?}")))?;
    let k = e.iter().position(|&x| x == 1).filter(|_| e.iter().sum::<u32>() == 1);
    k.map(|k| (k, coef)).ok_or(SpectraError::ReductionFailure(format!("{y:?}")))
}

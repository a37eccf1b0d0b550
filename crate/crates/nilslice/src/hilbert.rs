//! Points of the Hilbert scheme attached to slice coordinates, through their
//! defining polynomials (Â, D̂, Û, V̂) and their Hilbert–Chow support.

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use crate::kernel::{
    multiset_distance, roots, sort_complex, w_from_u, CPoly, ComplexF, Field, GaussianRational, KernelError, Poly,
    Ring,
};
use crate::liealg::{p_invariant, Family};
use crate::slices::{slice_point, OrbitIndex, QCoords, SliceCoords};
use crate::spectra::{fiber_polys, reduced_charpoly, FiberPolys, SpectraError, SpectralClass};
use crate::transversality::ReducedMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HilbertError {
    #[error("support has a repeated point; interpolation skipped")]
    RepeatedSupport,
    #[error("operation needs kind B")]
    WrongKind,
    #[error("projection onto the fiber did not converge")]
    NonConvergence,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A Hilbert-scheme point by its polynomials. Û, V̂ (and Ŵ for so(2m)) are
/// reduced modulo Â; D̂ is the quotient of the fiber equation by Â.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealPoint {
    pub family: Family,
    #[serde(rename = "Ahat")]
    pub a_hat: CPoly,
    #[serde(rename = "Dhat")]
    pub d_hat: CPoly,
    #[serde(rename = "Uhat")]
    pub u_hat: CPoly,
    #[serde(rename = "Vhat")]
    pub v_hat: CPoly,
    #[serde(rename = "What", skip_serializing_if = "Option::is_none")]
    pub w_hat: Option<CPoly>,
    /// Largest coefficient of the remainder left when dividing by Â.
    #[serde(skip)]
    pub remainder: f64,
}

impl IdealPoint {
    pub fn n(&self) -> usize {
        self.a_hat.degree().unwrap_or(0)
    }

    /// Â monic of degree n, every other reduced polynomial of degree < n.
    pub fn degrees_ok(&self, n: usize) -> bool {
        let small = |p: &CPoly| p.degree().is_none_or(|d| d < n);
        self.a_hat.degree() == Some(n)
            && self.a_hat.leading() == Some(&ComplexF::new(1.0, 0.0))
            && small(&self.u_hat)
            && small(&self.v_hat)
            && self.w_hat.as_ref().is_none_or(small)
    }

    /// The two polynomials whose values at the roots of Â give the surface
    /// coordinates: (Û, V̂) for Σ, (V̂, Ŵ) for Γ.
    fn coordinate_polys(&self) -> (&CPoly, &CPoly) {
        match &self.w_hat {
            Some(w) => (&self.v_hat, w),
            None => (&self.u_hat, &self.v_hat),
        }
    }
}

struct Assembled<F: Field> {
    a: Poly<F>,
    d: Poly<F>,
    u: Poly<F>,
    v: Poly<F>,
    w: Option<Poly<F>>,
    rem: Poly<F>,
}

/// Reduces the fiber polynomials modulo Â and divides the fiber equation by
/// Â. `p_red` is the reduced characteristic polynomial P and `p` the sign
/// invariant (ignored outside so(2m)).
fn assemble<F: Field>(family: Family, f: FiberPolys<F>, p_red: &Poly<F>, p: &F) -> Assembled<F> {
    let a = f.a_hat;
    let t = Poly::<F>::t_pow(1);
    let rem = |q: &Poly<F>| q.div_rem_monic(&a).1;
    let v = rem(&f.v_hat);
    let two = F::from_int(2);
    let (u, w, lhs) = match family {
        Family::C | Family::B => {
            let u = rem(&f.u_hat);
            let base = if family == Family::B { &t * p_red } else { p_red.clone() };
            let lhs = &(&base + &(&u * &u)) + &(&t * &(&v * &v));
            (u, None, lhs)
        }
        Family::D => {
            let (w_full, y) = w_from_u(&f.u_hat);
            let w = rem(&w_full);
            let u = rem(&(&(&t * &w) - &Poly::constant(y)));
            let q = Poly::new(p_red.coeffs().iter().skip(1).cloned().collect());
            let lhs = &(&(&q + &(&v * &v)) + &(&t * &(&w * &w))) - &w.scale(&(two * p.clone()));
            (u, Some(w), lhs)
        }
    };
    let (d, r) = lhs.div_rem_monic(&a);
    Assembled { a, d, u, v, w, rem: r }
}

fn to_ideal(family: Family, x: Assembled<GaussianRational>) -> IdealPoint {
    IdealPoint {
        family,
        a_hat: x.a.to_complex(),
        d_hat: x.d.to_complex(),
        u_hat: x.u.to_complex(),
        v_hat: x.v.to_complex(),
        w_hat: x.w.map(|w| w.to_complex()),
        remainder: x.rem.to_complex().max_abs_coeff(),
    }
}

/// The point j(c), computed exactly. P comes from the exact characteristic
/// polynomial of the slice matrix, so a zero remainder certifies the fiber
/// equation at c.
pub fn ideal_point_from_coords(idx: OrbitIndex, c: &QCoords) -> Result<IdealPoint, HilbertError> {
    let s = slice_point(idx, c).map_err(SpectraError::from)?;
    let p_red = reduced_charpoly(&s)?;
    let p = match idx.family() {
        Family::D => p_invariant(&s).map_err(SpectraError::from)?,
        _ => GaussianRational::default(),
    };
    let f = fiber_polys(idx, c)?;
    Ok(to_ideal(idx.family(), assemble(idx.family(), f, &p_red, &p)))
}

/// The point j(c) for complex coordinates on the fiber over τ.
pub fn ideal_point_numeric(
    idx: OrbitIndex,
    c: &SliceCoords<ComplexF>,
    tau: &SpectralClass,
) -> Result<IdealPoint, HilbertError> {
    let f = fiber_polys(idx, c)?;
    let p = tau.p_sign.unwrap_or_default();
    let x = assemble(idx.family(), f, &tau.reduced, &p);
    Ok(IdealPoint {
        family: idx.family(),
        remainder: x.rem.max_abs_coeff(),
        a_hat: x.a,
        d_hat: x.d,
        u_hat: x.u,
        v_hat: x.v,
        w_hat: x.w,
    })
}

/// Hilbert–Chow image: the n points (x₀, x₁, z) with z a root of Â, counted
/// with multiplicity, sorted by z.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportPoints {
    pub points: Vec<[ComplexF; 3]>,
}

impl Serialize for SupportPoints {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[[f64; 2]; 3]> =
            self.points.iter().map(|p| [[p[0].re, p[0].im], [p[1].re, p[1].im], [p[2].re, p[2].im]]).collect();
        v.serialize(s)
    }
}

impl SupportPoints {
    pub fn z_values(&self) -> Vec<ComplexF> {
        self.points.iter().map(|p| p[2]).collect()
    }

    /// Largest distance between matched points of two supports, matching
    /// greedily on the full triples.
    pub fn distance(&self, other: &SupportPoints) -> f64 {
        if self.points.len() != other.points.len() {
            return f64::INFINITY;
        }
        let mut used = vec![false; other.points.len()];
        let mut worst: f64 = 0.0;
        for p in &self.points {
            let mut best = (f64::INFINITY, 0);
            for (j, q) in other.points.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let d = (0..3).map(|k| (p[k] - q[k]).norm()).fold(0.0, f64::max);
                if d < best.0 {
                    best = (d, j);
                }
            }
            used[best.1] = true;
            worst = worst.max(best.0);
        }
        worst
    }

    /// Minimum distance between distinct z-coordinates, ∞ for n ≤ 1.
    pub fn min_separation(&self) -> f64 {
        let z = self.z_values();
        let mut best = f64::INFINITY;
        for i in 0..z.len() {
            for j in (i + 1)..z.len() {
                best = best.min((z[i] - z[j]).norm());
            }
        }
        best
    }
}

pub fn support_points(ip: &IdealPoint, tol: f64) -> Result<SupportPoints, HilbertError> {
    if ip.n() == 0 {
        return Ok(SupportPoints { points: Vec::new() });
    }
    let mut z = roots(&ip.a_hat, tol)?;
    sort_complex(&mut z);
    let (f0, f1) = ip.coordinate_polys();
    Ok(SupportPoints { points: z.into_iter().map(|zk| [f0.eval(&zk), f1.eval(&zk), zk]).collect() })
}

/// Interpolant through (z_k, y_k) in coefficient form, built from the
/// barycentric weights w_k = 1/Π_{j≠k}(z_k − z_j). Also returns
/// Σ_k |w_k|·‖L/(t − z_k)‖_∞, a bound on the amplification of data errors.
pub fn barycentric_interpolate(z: &[ComplexF], y: &[ComplexF]) -> (CPoly, f64) {
    let l = CPoly::from_roots(z);
    let mut out = CPoly::zero();
    let mut cond = 0.0;
    for (k, zk) in z.iter().enumerate() {
        let w: ComplexF = z
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .fold(ComplexF::new(1.0, 0.0), |acc, (_, zj)| acc * (zk - zj))
            .inv();
        let (basis, _) = l.div_rem_monic(&CPoly::new(vec![-zk, ComplexF::new(1.0, 0.0)]));
        cond += w.norm() * basis.max_abs_coeff();
        out = &out + &basis.scale(&(w * y[k]));
    }
    (out, cond)
}

/// Rebuilds the ideal point from its support and τ: Â from the z's, the
/// coordinate polynomials by interpolation, D̂ by division.
pub fn round_trip(sp: &SupportPoints, tau: &SpectralClass, idx: OrbitIndex, tol: f64) -> Result<(IdealPoint, f64), HilbertError> {
    let n = sp.points.len();
    if sp.min_separation() < tol {
        return Err(HilbertError::RepeatedSupport);
    }
    let z = sp.z_values();
    let a = CPoly::from_roots(&z);
    let (f0, c0) = barycentric_interpolate(&z, &sp.points.iter().map(|p| p[0]).collect::<Vec<_>>());
    let (f1, c1) = barycentric_interpolate(&z, &sp.points.iter().map(|p| p[1]).collect::<Vec<_>>());
    let t = CPoly::t_pow(1);
    let p = tau.p_sign.unwrap_or_default();
    // Put the interpolants back into the shape of the fiber polynomials so
    // assemble() rebuilds D̂ the same way as the forward map.
    let fib = match idx.family() {
        Family::D => FiberPolys {
            a_hat: a,
            d_hat: CPoly::zero(),
            u_hat: &(&t * &f1) - &CPoly::constant(p),
            v_hat: f0,
        },
        _ => FiberPolys { a_hat: a, d_hat: CPoly::zero(), u_hat: f0, v_hat: f1 },
    };
    debug_assert_eq!(fib.a_hat.degree(), Some(n));
    let x = assemble(idx.family(), fib, &tau.reduced, &p);
    let ip = IdealPoint {
        family: idx.family(),
        remainder: x.rem.max_abs_coeff(),
        a_hat: x.a,
        d_hat: x.d,
        u_hat: x.u,
        v_hat: x.v,
        w_hat: x.w,
    };
    Ok((ip, c0.max(c1)))
}

/// Largest coefficient difference over all four (five) polynomials,
/// relative to max(1, largest coefficient).
pub fn ideal_point_distance(a: &IdealPoint, b: &IdealPoint) -> f64 {
    let pairs: Vec<(&CPoly, &CPoly)> = {
        let mut v = vec![(&a.a_hat, &b.a_hat), (&a.d_hat, &b.d_hat), (&a.u_hat, &b.u_hat), (&a.v_hat, &b.v_hat)];
        if let (Some(x), Some(y)) = (&a.w_hat, &b.w_hat) {
            v.push((x, y));
        }
        v
    };
    let scale = pairs.iter().map(|(x, _)| x.max_abs_coeff()).fold(1.0, f64::max);
    let diff = pairs.iter().map(|(x, y)| (*x - *y).max_abs_coeff()).fold(0.0, f64::max);
    diff / scale
}

/// (a₀, d₀) ↦ (−a₀, −d₀).
pub fn b_fiber_partner<R: Ring>(c: &SliceCoords<R>) -> Result<SliceCoords<R>, HilbertError> {
    if c.idx.family() != Family::B {
        return Err(HilbertError::WrongKind);
    }
    let mut out = c.clone();
    out.a0 = c.a0.clone().map(|x| -x);
    out.d0 = c.d0.clone().map(|x| -x);
    Ok(out)
}

/// Moves `start` onto the fiber through `base` by Newton iteration with
/// minimum-norm steps on the adjoint-quotient coordinates of `map`.
pub fn project_to_fiber(map: &ReducedMap, base: &[ComplexF], start: &[ComplexF]) -> Result<Vec<ComplexF>, HilbertError> {
    let target = map.eval(base);
    let scale = target.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut x = start.to_vec();
    for _ in 0..100 {
        let f: Vec<ComplexF> = map.eval(&x).iter().zip(&target).map(|(a, b)| a - b).collect();
        let err = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err < 1e-13 * scale {
            return Ok(x);
        }
        let j: DMatrix<ComplexF> = map.jacobian_at(&x);
        let step = j.svd(true, true).solve(&DVector::from_vec(f), 1e-14).map_err(|_| HilbertError::NonConvergence)?;
        for (xi, si) in x.iter_mut().zip(step.iter()) {
            *xi -= si;
        }
        if x.iter().any(|z| !z.is_finite()) {
            return Err(HilbertError::NonConvergence);
        }
    }
    Err(HilbertError::NonConvergence)
}

/// Distance between the z-projections of two supports.
pub fn support_z_distance(a: &SupportPoints, b: &SupportPoints) -> f64 {
    multiset_distance(&a.z_values(), &b.z_values())
}

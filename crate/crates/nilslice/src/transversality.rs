//! Exact transversality certificates and the numeric fiber Jacobian.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::kernel::{ComplexF, GaussianRational, MPoly, QMatrix};
use crate::liealg::{ad_matrix, coordinates, Family};
use crate::slices::{nilpotent_rep, tangent_basis, OrbitIndex, SliceCoords, SliceError, Variant};
use crate::spectra::{closed_form_numerator, fiber_polys, reduced_closed_form, SpectraError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalityCertificate {
    pub kind: Family,
    pub m: usize,
    pub n: usize,
    pub rank_ad: usize,
    pub dim_v: usize,
    pub rank_joint: usize,
    /// rank_joint = rank_ad + dim_v = dim 𝔤
    pub verdict: bool,
}

/// Ranks of [𝔤, X_n], of the slice directions V_n, and of both together,
/// by fraction-free elimination over ℚ(i).
pub fn transversality_certificate(idx: OrbitIndex) -> Result<TransversalityCertificate, SliceError> {
    transversality_certificate_variant(idx, Variant::Corrected)
}

pub fn transversality_certificate_variant(
    idx: OrbitIndex,
    variant: Variant,
) -> Result<TransversalityCertificate, SliceError> {
    let ad = ad_matrix(&nilpotent_rep(idx))?;
    let v_cols: Vec<Vec<GaussianRational>> = tangent_basis(idx, variant).iter().map(coordinates).collect();
    let v = QMatrix::from_columns(&v_cols);
    let rank_ad = ad.rank_bareiss();
    let dim_v = v.rank_bareiss();
    let rank_joint = ad.hstack(&v).rank_bareiss();
    let dim = idx.kind.dim();
    Ok(TransversalityCertificate {
        kind: idx.family(),
        m: idx.m(),
        n: idx.n,
        rank_ad,
        dim_v,
        rank_joint,
        verdict: rank_joint == rank_ad + dim_v && rank_joint == dim,
    })
}

type QM = MPoly<GaussianRational>;

/// Coordinates of the adjoint quotient as polynomials in the slice
/// coordinates, with their exact partials: the m non-leading coefficients of
/// the reduced characteristic polynomial, except that for so(2m) the constant
/// coefficient −p² is replaced by the sign invariant p itself.
#[derive(Clone, Debug)]
pub struct ReducedMap {
    pub idx: OrbitIndex,
    pub coeffs: Vec<QM>,
    pub jacobian: Vec<Vec<QM>>,
}

impl ReducedMap {
    pub fn new(idx: OrbitIndex) -> Result<Self, SpectraError> {
        let len = idx.shape().len();
        let vars: Vec<QM> = (0..len).map(QM::var).collect();
        let c = SliceCoords::from_flat(idx, vars)?;
        let p = reduced_closed_form(&c)?;
        let mut coeffs: Vec<QM> = (0..idx.m()).map(|k| p.coeff(k)).collect();
        if idx.family() == Family::D {
            coeffs[0] = -fiber_polys(idx, &c)?.u_hat.coeff(0);
        }
        let jacobian = coeffs.iter().map(|f| (0..len).map(|j| f.derivative(j)).collect()).collect();
        Ok(ReducedMap { idx, coeffs, jacobian })
    }

    pub fn num_coords(&self) -> usize {
        self.idx.shape().len()
    }

    pub fn eval(&self, x: &[ComplexF]) -> Vec<ComplexF> {
        self.coeffs.iter().map(|f| f.eval_with(x, GaussianRational::to_complex)).collect()
    }

    pub fn jacobian_at(&self, x: &[ComplexF]) -> DMatrix<ComplexF> {
        let rows = self.coeffs.len();
        let cols = self.num_coords();
        DMatrix::from_fn(rows, cols, |i, j| self.jacobian[i][j].eval_with(x, GaussianRational::to_complex))
    }
}

/// Number of singular values above tol·σ_max.
pub fn numeric_rank(j: &DMatrix<ComplexF>, tol: f64) -> usize {
    if j.is_empty() {
        return 0;
    }
    let sv = j.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Rank of the Jacobian of the reduced characteristic coefficients with
/// respect to the slice coordinates, at c.
pub fn fiber_jacobian_rank(map: &ReducedMap, c: &SliceCoords<ComplexF>, tol: f64) -> usize {
    numeric_rank(&map.jacobian_at(&c.to_flat()), tol)
}

/// The same coordinates evaluated directly from the closed form over ℂ,
/// independent of the symbolic expansion.
pub fn reduced_coeffs_numeric(idx: OrbitIndex, x: &[ComplexF]) -> Result<Vec<ComplexF>, SpectraError> {
    let c = SliceCoords::from_flat(idx, x.to_vec())?;
    let chi = closed_form_numerator(&c, Variant::Corrected)?;
    // so(2m+1) carries an extra factor t², so the surviving powers are even
    // from t² on; the rest cancel only up to rounding here
    let off = 2 * usize::from(idx.family() == Family::B);
    let deg = chi.degree().unwrap_or(0);
    let scale = (0..=deg).map(|k| chi.coeff(k).norm()).fold(1.0, f64::max);
    let stray = (0..=deg).filter(|&k| k % 2 == 1 || k < off).map(|k| chi.coeff(k).norm()).fold(0.0, f64::max);
    if stray > 1e-9 * scale {
        return Err(SpectraError::ParityViolation);
    }
    let mut out: Vec<ComplexF> = (0..idx.m()).map(|k| chi.coeff(2 * k + off)).collect();
    if idx.family() == Family::D {
        out[0] = -fiber_polys(idx, &c)?.u_hat.coeff(0);
    }
    Ok(out)
}

/// Largest difference between the symbolic Jacobian and central differences
/// with step h, relative to max(1, max |J|).
pub fn jacobian_fd_error(map: &ReducedMap, x: &[ComplexF], h: f64) -> Result<f64, SpectraError> {
    let j = map.jacobian_at(x);
    let scale = j.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    for col in 0..map.num_coords() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[col] += h;
        xm[col] -= h;
        let fp = reduced_coeffs_numeric(map.idx, &xp)?;
        let fm = reduced_coeffs_numeric(map.idx, &xm)?;
        for row in 0..fp.len() {
            let fd = (fp[row] - fm[row]) / (2.0 * h);
            worst = worst.max((fd - j[(row, col)]).norm());
        }
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(f: Family, m: usize, n: usize) -> OrbitIndex {
        OrbitIndex::new(f, m, n).unwrap()
    }

    #[test]
    fn sp_example_certificate() {
        let c = transversality_certificate(idx(Family::C, 4, 1)).unwrap();
        assert_eq!(c.dim_v, 6);
        assert_eq!(c.rank_ad, 36 - 6);
        assert!(c.verdict);
    }

    #[test]
    fn small_cells() {
        for i in [idx(Family::C, 2, 1), idx(Family::D, 3, 1), idx(Family::B, 3, 1)] {
            let c = transversality_certificate(i).unwrap();
            assert!(c.verdict, "{i}: {c:?}");
        }
    }

    #[test]
    fn printed_odd_slice_fails_for_n2() {
        let c = transversality_certificate_variant(idx(Family::B, 3, 2), Variant::Printed).unwrap();
        assert!(!c.verdict);
        assert!(transversality_certificate(idx(Family::B, 3, 2)).unwrap().verdict);
    }

    #[test]
    fn nilpotent_fiber_is_singular() {
        let i = idx(Family::C, 3, 1);
        let map = ReducedMap::new(i).unwrap();
        let zero = SliceCoords::<ComplexF>::zero(i);
        assert!(fiber_jacobian_rank(&map, &zero, 1e-8) < 3);
    }

    #[test]
    fn symbolic_matches_direct_evaluation() {
        let i = idx(Family::D, 4, 1);
        let map = ReducedMap::new(i).unwrap();
        let x: Vec<ComplexF> = (0..i.shape().len()).map(|k| ComplexF::new(0.3 * k as f64 - 0.7, 0.1)).collect();
        let a = map.eval(&x);
        let b = reduced_coeffs_numeric(i, &x).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-12);
        }
        assert!(jacobian_fd_error(&map, &x, 1e-5).unwrap() < 1e-6);
    }
}

use std::fmt;

use serde::{Serialize, Serializer};

use crate::kernel::{w_from_u, GaussianRational, MPoly, Poly, Ring};
use crate::liealg::{AlgebraKind, Family};
use crate::slices::{OrbitIndex, SliceCoords};

use super::{fiber_polys, y_constant, SpectraError};

type QM = MPoly<GaussianRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityType {
    A(usize),
    D(usize),
}

impl SingularityType {
    /// D₃ and A₃ are the same singularity.
    pub fn equivalent(&self, other: &SingularityType) -> bool {
        self.canonical() == other.canonical()
    }

    fn canonical(&self) -> SingularityType {
        match *self {
            SingularityType::D(3) => SingularityType::A(3),
            t => t,
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::A(k) => write!(f, "A{k}"),
            SingularityType::D(k) => write!(f, "D{k}"),
        }
    }
}

impl Serialize for SingularityType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KleinianReport {
    pub kind: Family,
    pub m: usize,
    pub expected: SingularityType,
    pub found: SingularityType,
    /// The reduced equation in the slice coordinates.
    pub normal_form: String,
    pub matches: bool,
}

/// Expected singularity of the n = 1 slice over τ = 0.
pub fn expected_type(kind: AlgebraKind) -> SingularityType {
    let m = kind.m;
    match kind.family {
        Family::C => SingularityType::D(m + 1),
        Family::D => SingularityType::D(m),
        Family::B => SingularityType::A(2 * m - 1),
    }
}

/// Defining equation of the n = 1 fiber over τ = 0 in three slice
/// coordinates. With Â = t − α the fiber is cut out by the fiber equation
/// evaluated at t = α, after D̂ is eliminated.
fn fiber_equation(idx: OrbitIndex) -> Result<QM, SpectraError> {
    let m = idx.m();
    let len = idx.shape().len();
    let vars: Vec<QM> = (0..len).map(QM::var).collect();
    let c = SliceCoords::from_flat(idx, vars)?;
    let f = fiber_polys(idx, &c)?;
    let alpha = -f.a_hat.coeff(0);
    let t_pow = |k: usize| alpha.pow(k as u32);
    let eval = |p: &Poly<QM>| p.eval(&alpha);
    Ok(match idx.family() {
        Family::C => t_pow(m) + eval(&f.u_hat).pow(2) + alpha.clone() * eval(&f.v_hat).pow(2),
        Family::B => t_pow(m + 1) + eval(&f.u_hat).pow(2) + alpha.clone() * eval(&f.v_hat).pow(2),
        Family::D => {
            // p = 0 over τ = 0, and y = p kills the coordinate carrying y.
            let (k, _) = y_constant(idx)?;
            let (w, _) = w_from_u(&f.u_hat);
            let g = t_pow(m - 1) + eval(&f.v_hat).pow(2) + alpha.clone() * eval(&w).pow(2);
            g.substitute(k, &QM::zero())
        }
    })
}

/// One pass of completing the square: for each x with F = αx² + βx + γ,
/// α a monomial dividing β, replace x by x − β/(2α).
fn complete_squares(mut f: QM) -> QM {
    loop {
        let mut progressed = false;
        for x in f.variables() {
            if f.degree_in(x) != 2 {
                continue;
            }
            let beta = f.coeff_in(x, 1);
            if beta.is_zero() {
                continue;
            }
            let Some((c, e)) = f.coeff_in(x, 2).as_monomial() else { continue };
            let Some(q) = beta.div_monomial(&e) else { continue };
            let shift = q.scale_inv(&(c * GaussianRational::from_int(2)));
            if shift.variables().contains(&x) {
                continue;
            }
            f = f.substitute(x, &(QM::var(x) - shift));
            progressed = true;
        }
        if !progressed {
            return f;
        }
    }
}

fn strip_content(f: QM) -> QM {
    let e = f.monomial_content();
    f.div_monomial(&e).expect("content divides")
}

/// Reads off A_{k−1} from c₁x² + c₂y² + c₃z^k, or D_{k+1} from
/// c₁x² + c₂z·y² + c₃z^k.
fn classify(f: &QM) -> Option<SingularityType> {
    let vars = f.variables();
    if vars.len() != 3 {
        return None;
    }
    for &z in &vars {
        let others: Vec<usize> = vars.iter().copied().filter(|&v| v != z).collect();
        let mut rest = f.clone();
        let mut z_weighted = 0;
        let mut ok = true;
        for &x in &others {
            if f.degree_in(x) != 2 || !f.coeff_in(x, 1).is_zero() {
                ok = false;
                break;
            }
            let Some((c, e)) = f.coeff_in(x, 2).as_monomial() else {
                ok = false;
                break;
            };
            let ez = e.get(z).copied().unwrap_or(0);
            if e.iter().sum::<u32>() != ez || ez > 1 {
                ok = false;
                break;
            }
            z_weighted += ez;
            let mut sq = e.clone();
            sq.resize(sq.len().max(x + 1), 0);
            sq[x] += 2;
            rest = rest - QM::monomial(c, &sq);
        }
        if !ok {
            continue;
        }
        let Some((_, e)) = rest.as_monomial() else { continue };
        let k = e.get(z).copied().unwrap_or(0) as usize;
        if e.iter().sum::<u32>() as usize != k || k < 2 {
            continue;
        }
        return match z_weighted {
            0 => Some(SingularityType::A(k - 1)),
            1 => Some(SingularityType::D(k + 1)),
            _ => None,
        };
    }
    None
}

/// Reduces the n = 1, τ = 0 fiber equation to a Kleinian normal form.
pub fn kleinian_check(kind: AlgebraKind) -> Result<KleinianReport, SpectraError> {
    let idx = OrbitIndex::new(kind.family, kind.m, 1)?;
    let names = idx.coord_names();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut f = strip_content(fiber_equation(idx)?);
    f = strip_content(complete_squares(f));
    let normal_form = f.fmt_with(&names);
    let found = classify(&f).ok_or_else(|| SpectraError::ReductionFailure(normal_form.clone()))?;
    let expected = expected_type(kind);
    Ok(KleinianReport {
        kind: kind.family,
        m: kind.m,
        expected,
        found,
        matches: found.equivalent(&expected),
        normal_form,
    })
}

//! Matrix realizations of sp(2m), so(2m), so(2m+1): root vectors, brackets,
//! membership, adjoint operators, exact characteristic polynomials and the
//! Pfaffian sign invariant.
//!
//! Matrix indices in root formulas are 1-based as in E_{i,j}; for so(2m+1)
//! the extra basis vector comes first, shifting both m-blocks by one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::kernel::{pfaffian, GaussianRational, KernelError, QMatrix, QPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// sp(2m)
    C,
    /// so(2m)
    D,
    /// so(2m+1)
    B,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::C, Family::D, Family::B];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::C => "C",
            Family::D => "D",
            Family::B => "B",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, LieError> {
        match s.trim() {
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "B" | "b" => Ok(Family::B),
            other => Err(LieError::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("root {0:?} is not a root of {1}")]
    InvalidRoot(RootLabel, AlgebraKind),
    #[error("operands belong to different algebras")]
    KindMismatch,
    #[error("matrix is not a member of {0}")]
    NotMember(AlgebraKind),
    #[error("rank must be positive")]
    InvalidRank,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("matrix has the wrong size for {0}")]
    WrongSize(AlgebraKind),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraKind {
    pub family: Family,
    pub m: usize,
}

impl AlgebraKind {
    pub fn new(family: Family, m: usize) -> Result<Self, LieError> {
        if m == 0 {
            return Err(LieError::InvalidRank);
        }
        Ok(AlgebraKind { family, m })
    }

    /// Matrix size N.
    pub fn size(&self) -> usize {
        match self.family {
            Family::B => 2 * self.m + 1,
            _ => 2 * self.m,
        }
    }

    pub fn dim(&self) -> usize {
        let m = self.m;
        match self.family {
            Family::D => m * (2 * m - 1),
            _ => m * (2 * m + 1),
        }
    }

    fn offset(&self) -> usize {
        usize::from(self.family == Family::B)
    }

    /// 0-based index of the i-th vector of the first block (i is 1-based).
    fn first(&self, i: usize) -> usize {
        self.offset() + i - 1
    }

    fn second(&self, i: usize) -> usize {
        self.offset() + self.m + i - 1
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.m)
    }
}

/// A root of one of the three root systems; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootLabel {
    /// e_i − e_j, i ≠ j
    Diff(usize, usize),
    /// e_i + e_j, i < j
    Sum(usize, usize),
    /// −e_i − e_j, i < j
    NegSum(usize, usize),
    /// 2e_i (type C)
    Double(usize),
    /// −2e_i (type C)
    NegDouble(usize),
    /// e_i (type B)
    Short(usize),
    /// −e_i (type B)
    NegShort(usize),
}

impl RootLabel {
    /// Coefficients in the basis e_1..e_m.
    pub fn weights(&self, m: usize) -> Vec<i64> {
        let mut w = vec![0i64; m];
        match *self {
            RootLabel::Diff(i, j) => {
                w[i - 1] += 1;
                w[j - 1] -= 1;
            }
            RootLabel::Sum(i, j) => {
                w[i - 1] += 1;
                w[j - 1] += 1;
            }
            RootLabel::NegSum(i, j) => {
                w[i - 1] -= 1;
                w[j - 1] -= 1;
            }
            RootLabel::Double(i) => w[i - 1] = 2,
            RootLabel::NegDouble(i) => w[i - 1] = -2,
            RootLabel::Short(i) => w[i - 1] = 1,
            RootLabel::NegShort(i) => w[i - 1] = -1,
        }
        w
    }

    pub fn negate(&self) -> RootLabel {
        match *self {
            RootLabel::Diff(i, j) => RootLabel::Diff(j, i),
            RootLabel::Sum(i, j) => RootLabel::NegSum(i, j),
            RootLabel::NegSum(i, j) => RootLabel::Sum(i, j),
            RootLabel::Double(i) => RootLabel::NegDouble(i),
            RootLabel::NegDouble(i) => RootLabel::Double(i),
            RootLabel::Short(i) => RootLabel::NegShort(i),
            RootLabel::NegShort(i) => RootLabel::Short(i),
        }
    }

    pub fn is_valid_for(&self, kind: AlgebraKind) -> bool {
        let m = kind.m;
        let ok = |i: usize| (1..=m).contains(&i);
        match *self {
            RootLabel::Diff(i, j) => ok(i) && ok(j) && i != j,
            RootLabel::Sum(i, j) | RootLabel::NegSum(i, j) => ok(i) && ok(j) && i < j,
            RootLabel::Double(i) | RootLabel::NegDouble(i) => kind.family == Family::C && ok(i),
            RootLabel::Short(i) | RootLabel::NegShort(i) => kind.family == Family::B && ok(i),
        }
    }

    /// Entry read off to recover this basis coefficient, and the entry's
    /// value in the root vector (always 1).
    fn pivot(&self, kind: AlgebraKind) -> (usize, usize) {
        let (f, s) = (|i| kind.first(i), |i| kind.second(i));
        match *self {
            RootLabel::Diff(i, j) => (f(i), f(j)),
            RootLabel::Sum(i, j) => (f(i), s(j)),
            RootLabel::NegSum(i, j) => (s(i), f(j)),
            RootLabel::Double(i) => (f(i), s(i)),
            RootLabel::NegDouble(i) => (s(i), f(i)),
            RootLabel::Short(i) => (0, s(i)),
            RootLabel::NegShort(i) => (0, f(i)),
        }
    }
}

/// Element of one of the matrix Lie algebras.
#[derive(Clone, PartialEq, Debug)]
pub struct GMatrix {
    pub kind: AlgebraKind,
    pub entries: QMatrix,
}

impl GMatrix {
    pub fn zero(kind: AlgebraKind) -> Self {
        GMatrix { kind, entries: QMatrix::zeros(kind.size(), kind.size()) }
    }

    pub fn new(kind: AlgebraKind, entries: QMatrix) -> Result<Self, LieError> {
        if entries.rows() != kind.size() || entries.cols() != kind.size() {
            return Err(LieError::WrongSize(kind));
        }
        Ok(GMatrix { kind, entries })
    }

    pub fn add(&self, o: &GMatrix) -> GMatrix {
        assert_eq!(self.kind, o.kind);
        GMatrix { kind: self.kind, entries: &self.entries + &o.entries }
    }

    pub fn sub(&self, o: &GMatrix) -> GMatrix {
        assert_eq!(self.kind, o.kind);
        GMatrix { kind: self.kind, entries: &self.entries - &o.entries }
    }

    pub fn scale(&self, c: &GaussianRational) -> GMatrix {
        GMatrix { kind: self.kind, entries: self.entries.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// Entry by 1-based indices.
    pub fn at(&self, i: usize, j: usize) -> &GaussianRational {
        self.entries.get(i - 1, j - 1)
    }
}

fn unit(kind: AlgebraKind, i: usize, j: usize) -> QMatrix {
    let mut e = QMatrix::zeros(kind.size(), kind.size());
    e.set(i, j, GaussianRational::from_int(1));
    e
}

/// X_α per the explicit E_{i,j} formulas of each family.
pub fn root_vector(kind: AlgebraKind, root: RootLabel) -> Result<GMatrix, LieError> {
    if !root.is_valid_for(kind) {
        return Err(LieError::InvalidRoot(root, kind));
    }
    let (f, s) = (|i| kind.first(i), |i| kind.second(i));
    let e = |a, b| unit(kind, a, b);
    let sym = kind.family == Family::C;
    let pm = |x: QMatrix, y: QMatrix| if sym { &x + &y } else { &x - &y };
    let entries = match root {
        RootLabel::Diff(i, j) => &e(f(i), f(j)) - &e(s(j), s(i)),
        RootLabel::Sum(i, j) => pm(e(f(i), s(j)), e(f(j), s(i))),
        RootLabel::NegSum(i, j) => pm(e(s(i), f(j)), e(s(j), f(i))),
        RootLabel::Double(i) => e(f(i), s(i)),
        RootLabel::NegDouble(i) => e(s(i), f(i)),
        RootLabel::Short(i) => &e(0, s(i)) - &e(f(i), 0),
        RootLabel::NegShort(i) => &e(0, f(i)) - &e(s(i), 0),
    };
    Ok(GMatrix { kind, entries })
}

/// Cartan basis element H_i = E_{i,i} − E_{i+m,i+m} (shifted for type B).
pub fn cartan_vector(kind: AlgebraKind, i: usize) -> GMatrix {
    let entries = &unit(kind, kind.first(i), kind.first(i)) - &unit(kind, kind.second(i), kind.second(i));
    GMatrix { kind, entries }
}

/// Element of 𝔥 with diagonal (x_1..x_m, −x_1..−x_m) (type B: leading 0).
pub fn cartan_element(kind: AlgebraKind, x: &[GaussianRational]) -> GMatrix {
    assert_eq!(x.len(), kind.m);
    x.iter()
        .enumerate()
        .fold(GMatrix::zero(kind), |acc, (k, xi)| acc.add(&cartan_vector(kind, k + 1).scale(xi)))
}

/// Positive roots in descending lexicographic order of their e-coefficients.
pub fn positive_roots(kind: AlgebraKind) -> Vec<RootLabel> {
    let m = kind.m;
    let mut roots = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            roots.push(RootLabel::Diff(i, j));
            roots.push(RootLabel::Sum(i, j));
        }
        match kind.family {
            Family::C => roots.push(RootLabel::Double(i)),
            Family::B => roots.push(RootLabel::Short(i)),
            Family::D => {}
        }
    }
    roots.sort_by_key(|r| std::cmp::Reverse(r.weights(m)));
    roots
}

/// Basis element of 𝔤 in the frozen order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    Root(RootLabel),
    Cartan(usize),
}

/// Ordered basis of 𝔤: positive root vectors (descending lexicographic),
/// then the negatives in the same order, then H_1..H_m.
pub fn basis(kind: AlgebraKind) -> Vec<BasisLabel> {
    let pos = positive_roots(kind);
    let mut b: Vec<BasisLabel> = pos.iter().map(|r| BasisLabel::Root(*r)).collect();
    b.extend(pos.iter().map(|r| BasisLabel::Root(r.negate())));
    b.extend((1..=kind.m).map(BasisLabel::Cartan));
    b
}

pub fn basis_matrix(kind: AlgebraKind, label: BasisLabel) -> GMatrix {
    match label {
        BasisLabel::Root(r) => root_vector(kind, r).expect("basis roots are valid"),
        BasisLabel::Cartan(i) => cartan_vector(kind, i),
    }
}

/// Coefficients of a member in the ordered basis. Each basis vector has an
/// entry equal to 1 where every other basis vector vanishes.
pub fn coordinates(x: &GMatrix) -> Vec<GaussianRational> {
    let kind = x.kind;
    basis(kind)
        .into_iter()
        .map(|b| {
            let (i, j) = match b {
                BasisLabel::Root(r) => r.pivot(kind),
                BasisLabel::Cartan(i) => (kind.first(i), kind.first(i)),
            };
            x.entries.get(i, j).clone()
        })
        .collect()
}

/// Invariant bilinear form Φ with MᵀΦ + ΦM = 0 on the whole algebra.
pub fn form(kind: AlgebraKind) -> QMatrix {
    let n = kind.size();
    let mut phi = QMatrix::zeros(n, n);
    let one = GaussianRational::from_int(1);
    let sign = if kind.family == Family::C { -one.clone() } else { one.clone() };
    for i in 1..=kind.m {
        phi.set(kind.first(i), kind.second(i), one.clone());
        phi.set(kind.second(i), kind.first(i), sign.clone());
    }
    if kind.family == Family::B {
        phi.set(0, 0, one);
    }
    phi
}

pub fn is_member(x: &GMatrix) -> bool {
    let phi = form(x.kind);
    let lhs = &(&x.entries.transpose() * &phi) + &(&phi * &x.entries);
    lhs.is_zero()
}

pub fn bracket(x: &GMatrix, y: &GMatrix) -> Result<GMatrix, LieError> {
    if x.kind != y.kind {
        return Err(LieError::KindMismatch);
    }
    let entries = &(&x.entries * &y.entries) - &(&y.entries * &x.entries);
    Ok(GMatrix { kind: x.kind, entries })
}

/// Matrix of Y ↦ [X, Y] in the ordered basis (column k is the image of the
/// k-th basis vector).
pub fn ad_matrix(x: &GMatrix) -> Result<QMatrix, LieError> {
    if !is_member(x) {
        return Err(LieError::NotMember(x.kind));
    }
    let cols: Vec<Vec<GaussianRational>> = basis(x.kind)
        .into_iter()
        .map(|b| coordinates(&bracket(x, &basis_matrix(x.kind, b)).expect("same kind")))
        .collect();
    Ok(QMatrix::from_columns(&cols))
}

pub fn charpoly_exact(x: &GMatrix) -> QPoly {
    x.entries.charpoly()
}

pub fn pfaffian_exact(m: &QMatrix) -> Result<GaussianRational, KernelError> {
    pfaffian(m)
}

/// exp(X) for nilpotent X as the finite exact series.
pub fn exp_nilpotent(x: &GMatrix) -> QMatrix {
    let n = x.kind.size();
    let mut term = QMatrix::identity(n);
    let mut acc = term.clone();
    for k in 1..=n {
        term = (&term * &x.entries).scale(&GaussianRational::ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
    }
    acc
}

/// Normalization of the type-D sign invariant: p(M) = c_m·Pf(Φ·M) with
/// p(diag(x, −x)) = i^{3−m}·Πx_i, so that p² = −P(0) for the reduced
/// characteristic polynomial P and p agrees with the constant y of the
/// fiber equation on every slice point.
pub fn p_calibration(m: usize) -> GaussianRational {
    let kind = AlgebraKind::new(Family::D, m).expect("m ≥ 1");
    let ones = vec![GaussianRational::from_int(1); m];
    let h = cartan_element(kind, &ones);
    let pf = pfaffian(&(&form(kind) * &h.entries)).expect("Φ·h is antisymmetric");
    GaussianRational::i_pow(3 - m as i64) / pf
}

/// The type-D sign invariant p of a member of so(2m).
pub fn p_invariant(x: &GMatrix) -> Result<GaussianRational, LieError> {
    if x.kind.family != Family::D {
        return Err(LieError::KindMismatch);
    }
    let pf = pfaffian(&(&form(x.kind) * &x.entries))?;
    Ok(p_calibration(x.kind.m) * pf)
}

#[derive(Serialize, Deserialize)]
struct GMatrixJson {
    kind: Family,
    m: usize,
    entries: Vec<Vec<GaussianRational>>,
}

impl Serialize for GMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GMatrixJson { kind: self.kind.family, m: self.kind.m, entries: self.entries.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GMatrixJson::deserialize(d)?;
        let kind = AlgebraKind::new(j.kind, j.m).map_err(serde::de::Error::custom)?;
        GMatrix::new(kind, QMatrix::from_rows(j.entries)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(f: Family, m: usize) -> AlgebraKind {
        AlgebraKind::new(f, m).unwrap()
    }

    fn e(k: AlgebraKind, i: usize, j: usize) -> QMatrix {
        unit(k, i - 1, j - 1)
    }

    #[test]
    fn root_vector_examples() {
        let c2 = kind(Family::C, 2);
        assert_eq!(root_vector(c2, RootLabel::Double(1)).unwrap().entries, e(c2, 1, 3));
        let d2 = kind(Family::D, 2);
        assert_eq!(root_vector(d2, RootLabel::Diff(1, 2)).unwrap().entries, &e(d2, 1, 2) - &e(d2, 4, 3));
        let b2 = kind(Family::B, 2);
        assert_eq!(root_vector(b2, RootLabel::Short(1)).unwrap().entries, &e(b2, 1, 4) - &e(b2, 2, 1));
    }

    #[test]
    fn invalid_roots_rejected() {
        let d3 = kind(Family::D, 3);
        assert!(matches!(root_vector(d3, RootLabel::Double(1)), Err(LieError::InvalidRoot(..))));
        assert!(root_vector(d3, RootLabel::Sum(2, 1)).is_err());
        assert!(root_vector(d3, RootLabel::Diff(1, 4)).is_err());
    }

    #[test]
    fn dimensions_match_basis() {
        for f in Family::ALL {
            for m in 1..=6 {
                let k = kind(f, m);
                assert_eq!(basis(k).len(), k.dim(), "{k}");
            }
        }
    }

    #[test]
    fn coordinates_recover_basis() {
        for f in Family::ALL {
            for m in 1..=4 {
                let k = kind(f, m);
                let b = basis(k);
                for (idx, lab) in b.iter().enumerate() {
                    let c = coordinates(&basis_matrix(k, *lab));
                    for (j, x) in c.iter().enumerate() {
                        assert_eq!(x.is_zero(), j != idx, "{k} {lab:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn non_member_detected() {
        let c2 = kind(Family::C, 2);
        assert!(!is_member(&GMatrix::new(c2, e(c2, 1, 1)).unwrap()));
        assert!(matches!(ad_matrix(&GMatrix::new(c2, e(c2, 1, 1)).unwrap()), Err(LieError::NotMember(_))));
    }

    #[test]
    fn sl2_relation() {
        let c3 = kind(Family::C, 3);
        let x = root_vector(c3, RootLabel::Diff(1, 2)).unwrap();
        let y = root_vector(c3, RootLabel::Diff(2, 1)).unwrap();
        let h = bracket(&x, &y).unwrap();
        assert!(h.entries.is_diagonal());
        assert!(bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn positive_roots_order() {
        let c2 = kind(Family::C, 2);
        assert_eq!(
            positive_roots(c2),
            vec![RootLabel::Double(1), RootLabel::Sum(1, 2), RootLabel::Diff(1, 2), RootLabel::Double(2)]
        );
    }

    #[test]
    fn p_on_cartan() {
        for m in 2..=6 {
            let k = kind(Family::D, m);
            let x: Vec<GaussianRational> = (1..=m as i64).map(GaussianRational::from_int).collect();
            let p = p_invariant(&cartan_element(k, &x)).unwrap();
            let prod: GaussianRational = x.iter().fold(GaussianRational::from_int(1), |a, b| a * b);
            assert_eq!(p, GaussianRational::i_pow(3 - m as i64) * prod);
        }
    }

    #[test]
    fn gmatrix_json() {
        let c1 = kind(Family::C, 1);
        let x = root_vector(c1, RootLabel::Double(1)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"kind":"C","m":1,"entries":[["0","1"],["0","0"]]}"#);
        let back: GMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}

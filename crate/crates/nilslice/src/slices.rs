//! Nilpotent representatives X_n of the two-row orbits, their JM triples,
//! the transverse slices S_n, and the λ-action on matrices and coordinates.

use serde::{Deserialize, Serialize};

use crate::kernel::{GaussianRational, QMatrix, Ring};
use crate::liealg::{
    self, bracket, coordinates, root_vector, AlgebraKind, Family, GMatrix, LieError, RootLabel,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SliceError {
    #[error("no slice for {0} with n = {1}")]
    InvalidIndex(AlgebraKind, usize),
    #[error("coordinate shape does not match the orbit index")]
    ShapeMismatch,
    #[error("H is not diagonal")]
    NonDiagonalH,
    #[error("diagonal of H has entries of different parity or non-integers")]
    OddWeight,
    #[error("scale r must be nonzero")]
    ZeroScale,
    #[error("Jacobson-Morozov system has no solution")]
    NoTriple,
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A two-row nilpotent orbit: partition [2(m−n), 2n] in sp(2m),
/// [2(m−n)−1, 2n+1] in so(2m), [2(m−n)−1, 2n+1, 1] in so(2m+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitIndex {
    pub kind: AlgebraKind,
    pub n: usize,
}

/// Coordinate counts (a, y, z, d) plus whether a₀, d₀ are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordShape {
    pub a: usize,
    pub y: usize,
    pub z: usize,
    pub d: usize,
    pub extra: bool,
}

impl CoordShape {
    pub fn len(&self) -> usize {
        self.a + self.y + self.z + self.d + if self.extra { 2 } else { 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl OrbitIndex {
    pub fn new(family: Family, m: usize, n: usize) -> Result<Self, SliceError> {
        let kind = AlgebraKind::new(family, m)?;
        let ok = match family {
            Family::C => 2 * n <= m,
            Family::D => m >= 2 && 2 * n + 1 <= m,
            Family::B => m >= 2 && n >= 1 && 2 * n - 1 <= m,
        };
        if !ok {
            return Err(SliceError::InvalidIndex(kind, n));
        }
        Ok(OrbitIndex { kind, n })
    }

    pub fn family(&self) -> Family {
        self.kind.family
    }

    pub fn m(&self) -> usize {
        self.kind.m
    }

    /// All valid n for the given family and rank, ascending.
    pub fn all(family: Family, m: usize) -> Vec<OrbitIndex> {
        (0..=m).filter_map(|n| OrbitIndex::new(family, m, n).ok()).collect()
    }

    /// The sp slice at n = m/2 uses the modified chart.
    pub fn is_modified(&self) -> bool {
        self.family() == Family::C && self.n >= 1 && 2 * self.n == self.m()
    }

    /// Codimension of the orbit, which equals the slice dimension.
    pub fn codim(&self) -> usize {
        self.m() + 2 * self.n
    }

    /// The so(2m) index whose slice is included into a type-B slice.
    pub fn d_part(&self) -> OrbitIndex {
        assert_eq!(self.family(), Family::B);
        OrbitIndex { kind: AlgebraKind { family: Family::D, m: self.m() }, n: self.n - 1 }
    }

    pub fn shape(&self) -> CoordShape {
        let (m, n) = (self.m(), self.n);
        match self.family() {
            Family::C => CoordShape { a: n, y: n, z: n, d: m - n, extra: false },
            Family::D => CoordShape { a: n, y: n, z: n + 1, d: m - n - 1, extra: false },
            Family::B => CoordShape { extra: true, ..self.d_part().shape() },
        }
    }

    /// Coordinate names in the frozen serialization order.
    pub fn coord_names(&self) -> Vec<String> {
        let s = self.shape();
        let mut v = Vec::new();
        for (p, k) in [("a", s.a), ("y", s.y), ("z", s.z), ("d", s.d)] {
            v.extend((1..=k).map(|i| format!("{p}{i}")));
        }
        if s.extra {
            v.push("a0".into());
            v.push("d0".into());
        }
        v
    }
}

impl std::fmt::Display for OrbitIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(m={}, n={})", self.family(), self.m(), self.n)
    }
}

/// Coordinates (a_i, y_i, z_i, d_j) and, for so(2m+1), a₀, d₀.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceCoords<R> {
    pub idx: OrbitIndex,
    pub a: Vec<R>,
    pub y: Vec<R>,
    pub z: Vec<R>,
    pub d: Vec<R>,
    pub a0: Option<R>,
    pub d0: Option<R>,
}

impl<R: Ring> SliceCoords<R> {
    pub fn zero(idx: OrbitIndex) -> Self {
        Self::from_flat(idx, vec![R::zero(); idx.shape().len()]).expect("length matches")
    }

    /// Builds coordinates from the flat order (a, y, z, d, a₀, d₀).
    pub fn from_flat(idx: OrbitIndex, v: Vec<R>) -> Result<Self, SliceError> {
        let s = idx.shape();
        if v.len() != s.len() {
            return Err(SliceError::ShapeMismatch);
        }
        let mut it = v.into_iter();
        let mut take = |k: usize| (&mut it).take(k).collect::<Vec<R>>();
        let a = take(s.a);
        let y = take(s.y);
        let z = take(s.z);
        let d = take(s.d);
        let (a0, d0) = if s.extra {
            let mut e = take(2).into_iter();
            (e.next(), e.next())
        } else {
            (None, None)
        };
        Ok(SliceCoords { idx, a, y, z, d, a0, d0 })
    }

    pub fn to_flat(&self) -> Vec<R> {
        let mut v: Vec<R> = Vec::new();
        v.extend(self.a.iter().cloned());
        v.extend(self.y.iter().cloned());
        v.extend(self.z.iter().cloned());
        v.extend(self.d.iter().cloned());
        v.extend(self.a0.iter().cloned());
        v.extend(self.d0.iter().cloned());
        v
    }

    pub fn check_shape(&self, idx: OrbitIndex) -> Result<(), SliceError> {
        let s = idx.shape();
        let ok = self.idx == idx
            && self.a.len() == s.a
            && self.y.len() == s.y
            && self.z.len() == s.z
            && self.d.len() == s.d
            && self.a0.is_some() == s.extra
            && self.d0.is_some() == s.extra;
        if ok {
            Ok(())
        } else {
            Err(SliceError::ShapeMismatch)
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SliceCoords<S> {
        SliceCoords {
            idx: self.idx,
            a: self.a.iter().map(&f).collect(),
            y: self.y.iter().map(&f).collect(),
            z: self.z.iter().map(&f).collect(),
            d: self.d.iter().map(&f).collect(),
            a0: self.a0.as_ref().map(&f),
            d0: self.d0.as_ref().map(&f),
        }
    }

    /// The so(2m) coordinates of a type-B tuple.
    pub fn d_part(&self) -> SliceCoords<R> {
        SliceCoords {
            idx: self.idx.d_part(),
            a: self.a.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
            d: self.d.clone(),
            a0: None,
            d0: None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoordsJson {
    kind: Family,
    m: usize,
    n: usize,
    a: Vec<GaussianRational>,
    y: Vec<GaussianRational>,
    z: Vec<GaussianRational>,
    d: Vec<GaussianRational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    a0: Option<GaussianRational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    d0: Option<GaussianRational>,
}

impl Serialize for SliceCoords<GaussianRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CoordsJson {
            kind: self.idx.family(),
            m: self.idx.m(),
            n: self.idx.n,
            a: self.a.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
            d: self.d.clone(),
            a0: self.a0.clone(),
            d0: self.d0.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SliceCoords<GaussianRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CoordsJson::deserialize(d)?;
        let idx = OrbitIndex::new(j.kind, j.m, j.n).map_err(serde::de::Error::custom)?;
        let c = SliceCoords { idx, a: j.a, y: j.y, z: j.z, d: j.d, a0: j.a0, d0: j.d0 };
        c.check_shape(idx).map_err(serde::de::Error::custom)?;
        Ok(c)
    }
}

pub type QCoords = SliceCoords<GaussianRational>;

fn rv(kind: AlgebraKind, r: RootLabel) -> GMatrix {
    root_vector(kind, r).expect("root valid by construction")
}

/// Embeds so(2m) into so(2m+1) as the lower-right block.
pub fn include_d_in_b(x: &GMatrix) -> GMatrix {
    assert_eq!(x.kind.family, Family::D);
    let kind = AlgebraKind { family: Family::B, m: x.kind.m };
    let n = x.kind.size();
    let entries = QMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i == 0 || j == 0 {
            GaussianRational::default()
        } else {
            x.entries.get(i - 1, j - 1).clone()
        }
    });
    GMatrix { kind, entries }
}

/// The nilpotent X_n (for so(2m+1), the image x_n of X_{n−1} ∈ so(2m)).
pub fn nilpotent_rep(idx: OrbitIndex) -> GMatrix {
    let (kind, m, n) = (idx.kind, idx.m(), idx.n);
    let k = m - n;
    let chains = |kind| {
        (1..m)
            .filter(|&i| i != k)
            .fold(GMatrix::zero(kind), |acc, i| acc.add(&rv(kind, RootLabel::Diff(i, i + 1))))
    };
    match idx.family() {
        Family::C => {
            let mut x = chains(kind);
            if k >= 1 {
                x = x.add(&rv(kind, RootLabel::Double(k)));
            }
            if n >= 1 {
                x = x.add(&rv(kind, RootLabel::Double(m)));
            }
            x
        }
        Family::D => {
            let mut x = chains(kind);
            if k >= 2 {
                x = x.add(&rv(kind, RootLabel::Sum(k - 1, k)));
            }
            if n >= 1 {
                x = x.add(&rv(kind, RootLabel::Sum(k, m)));
            }
            x
        }
        Family::B => include_d_in_b(&nilpotent_rep(idx.d_part())),
    }
}

fn add_to(x: &mut QMatrix, i: usize, j: usize, v: &GaussianRational) {
    if !v.is_zero() {
        x.add_at(i, j, v.clone());
    }
}

/// Which reading of a construction to use. `Printed` reproduces the
/// formulas as originally displayed and exists so tests can pin where they
/// fail; `Corrected` is what the rest of the crate uses.
///
/// For slices, `Printed` means the entry d₁ + z_n² in the n = m/2 sp chart
/// and a₀X_{−e₁} + d₀X_{−e_{m−n+1}} in so(2m+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Corrected,
    Printed,
}

/// The slice point S_n(c).
pub fn slice_point(idx: OrbitIndex, c: &QCoords) -> Result<GMatrix, SliceError> {
    slice_point_variant(idx, c, Variant::Corrected)
}

pub fn slice_point_variant(idx: OrbitIndex, c: &QCoords, variant: Variant) -> Result<GMatrix, SliceError> {
    c.check_shape(idx)?;
    Ok(match idx.family() {
        Family::C => sp_slice(idx, c, variant),
        Family::D => so_even_slice(idx, c),
        Family::B => so_odd_slice(idx, c, variant),
    })
}

fn sp_slice(idx: OrbitIndex, c: &QCoords, variant: Variant) -> GMatrix {
    let (m, n) = (idx.m(), idx.n);
    let k = m - n;
    let mut x = nilpotent_rep(idx);
    let mut lower = QMatrix::zeros(m, m);
    // symmetric block M, 1-based (i, j) ↦ lower[i−1][j−1]
    for i in 1..=k {
        add_to(&mut lower, i - 1, i - 1, &c.d[k - i]);
    }
    for i in (k + 1)..=m {
        add_to(&mut lower, i - 1, i - 1, &c.a[m - i]);
    }
    for j in 1..=n {
        add_to(&mut lower, 0, k + j - 1, &c.y[j - 1]);
        add_to(&mut lower, k + j - 1, 0, &c.y[j - 1]);
    }
    let zcol = if idx.is_modified() { n - 1 } else { n };
    for j in 1..=zcol {
        add_to(&mut lower, j, m - 1, &c.z[j - 1]);
        add_to(&mut lower, m - 1, j, &c.z[j - 1]);
    }
    if idx.is_modified() {
        let zn = &c.z[n - 1];
        let sq = zn * zn;
        let corr = match variant {
            Variant::Corrected => -sq,
            Variant::Printed => sq,
        };
        add_to(&mut lower, k - 1, k - 1, &corr);
    }
    for i in 0..m {
        for j in 0..m {
            add_to(&mut x.entries, m + i, j, &lower.get(i, j).clone());
        }
    }
    if idx.is_modified() {
        x = x.add(&rv(idx.kind, RootLabel::Diff(m, n)).scale(&c.z[n - 1]));
    }
    x
}

fn so_even_slice(idx: OrbitIndex, c: &QCoords) -> GMatrix {
    let (m, n) = (idx.m(), idx.n);
    let k = m - n;
    let mut x = nilpotent_rep(idx);
    let e = &mut x.entries;
    let zero = GaussianRational::default();
    // blocks: [0,k) | [k,m) | [m,m+k) | [m+k,2m)
    // M_{z,d}: row k of z_1..z_{n+1} plus d₁ just below the diagonal
    let mut mzd = vec![vec![zero.clone(); k]; k];
    for j in 0..=n {
        mzd[k - 1][j] = &mzd[k - 1][j] + &c.z[j];
    }
    if k >= 2 {
        mzd[k - 1][k - 2] = &mzd[k - 1][k - 2] + &c.d[0];
    }
    for r in 0..k {
        for s in 0..k {
            add_to(e, r, s, &-&mzd[r][s]);
            add_to(e, m + s, m + r, &mzd[r][s]);
        }
    }
    // M_d antisymmetric, (r, r+1) = d_{k−r}
    for r in 1..k {
        add_to(e, m + r - 1, r, &c.d[k - r - 1]);
        add_to(e, m + r, r - 1, &-&c.d[k - r - 1]);
    }
    // M_a antisymmetric, (r, r+1) = a_{n−r+1}
    for r in 1..n {
        add_to(e, m + k + r - 1, k + r, &c.a[n - r]);
        add_to(e, m + k + r, k + r - 1, &-&c.a[n - r]);
    }
    // M_y in the first row of its block, −M_yᵀ opposite
    for j in 0..n {
        add_to(e, m, k + j, &c.y[j]);
        add_to(e, m + k + j, 0, &-&c.y[j]);
    }
    if n >= 1 {
        add_to(e, k - 1, m - 1, &c.a[0]);
        add_to(e, 2 * m - 1, m + k - 1, &-&c.a[0]);
    }
    x
}

fn so_odd_slice(idx: OrbitIndex, c: &QCoords, variant: Variant) -> GMatrix {
    let (m, n) = (idx.m(), idx.n);
    let kind = idx.kind;
    let base = include_d_in_b(&so_even_slice(idx.d_part(), &c.d_part()));
    let a0 = c.a0.as_ref().expect("shape checked");
    let d0 = c.d0.as_ref().expect("shape checked");
    match variant {
        Variant::Corrected => {
            let partner = if n == 1 {
                rv(kind, RootLabel::Short(m))
            } else {
                rv(kind, RootLabel::NegShort(m - n + 2)).scale(&GaussianRational::from_int(-1))
            };
            base.add(&rv(kind, RootLabel::NegShort(1)).scale(d0)).add(&partner.scale(a0))
        }
        Variant::Printed => base
            .add(&rv(kind, RootLabel::NegShort(1)).scale(a0))
            .add(&rv(kind, RootLabel::NegShort(m - n + 1)).scale(d0)),
    }
}

/// Tangent vectors of the slice at X_n, one per coordinate, as the central
/// difference (S(e_k) − S(−e_k))/2; exact because S is at most quadratic in
/// each coordinate.
pub fn tangent_basis(idx: OrbitIndex, variant: Variant) -> Vec<GMatrix> {
    let len = idx.shape().len();
    let half = GaussianRational::ratio(1, 2);
    (0..len)
        .map(|k| {
            let unit = |s: i64| {
                let mut v = vec![GaussianRational::default(); len];
                v[k] = GaussianRational::from_int(s);
                SliceCoords::from_flat(idx, v).expect("length matches")
            };
            let plus = slice_point_variant(idx, &unit(1), variant).expect("shape");
            let minus = slice_point_variant(idx, &unit(-1), variant).expect("shape");
            plus.sub(&minus).scale(&half)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct JMTriple {
    pub h: GMatrix,
    pub nplus: GMatrix,
    pub nminus: GMatrix,
}

impl JMTriple {
    /// ([H,N⁺] − 2N⁺, [H,N⁻] + 2N⁻, [N⁺,N⁻] − H) all vanish.
    pub fn relations_hold(&self) -> bool {
        let two = GaussianRational::from_int(2);
        let r1 = bracket(&self.h, &self.nplus).unwrap().sub(&self.nplus.scale(&two));
        let r2 = bracket(&self.h, &self.nminus).unwrap().add(&self.nminus.scale(&two));
        let r3 = bracket(&self.nplus, &self.nminus).unwrap().sub(&self.h);
        r1.is_zero() && r2.is_zero() && r3.is_zero()
    }
}

fn diag_kind(kind: AlgebraKind, d: &[i64]) -> GMatrix {
    let v: Vec<GaussianRational> = d.iter().map(|&x| GaussianRational::from_int(x)).collect();
    GMatrix { kind, entries: QMatrix::diagonal(&v) }
}

/// The JM semisimple element H_n of the printed triples.
pub fn jm_h(idx: OrbitIndex) -> GMatrix {
    let (m, n) = (idx.m(), idx.n);
    let k = m - n;
    match idx.family() {
        Family::C => {
            let l = |k: usize| (1..=k).map(|i| (2 * (k - i) + 1) as i64).collect::<Vec<_>>();
            let first: Vec<i64> = l(k).into_iter().chain(l(n)).collect();
            let d: Vec<i64> = first.iter().copied().chain(first.iter().map(|x| -x)).collect();
            diag_kind(idx.kind, &d)
        }
        Family::D => {
            let alpha = (1..=k).map(|i| 2 * (k - i) as i64);
            let beta = (1..=n).map(|i| 2 * (n - i + 1) as i64);
            let first: Vec<i64> = alpha.chain(beta).collect();
            let d: Vec<i64> = first.iter().copied().chain(first.iter().map(|x| -x)).collect();
            diag_kind(idx.kind, &d)
        }
        Family::B => include_d_in_b(&jm_h(idx.d_part())),
    }
}

/// Solves [X, N⁻] = H for N⁻ in the span of the root vectors of H-weight −2.
pub fn solve_nminus(x: &GMatrix, h: &GMatrix) -> Result<GMatrix, SliceError> {
    let kind = x.kind;
    let two = GaussianRational::from_int(2);
    let candidates: Vec<GMatrix> = liealg::basis(kind)
        .into_iter()
        .map(|b| liealg::basis_matrix(kind, b))
        .filter(|b| bracket(h, b).unwrap().add(&b.scale(&two)).is_zero())
        .collect();
    let cols: Vec<Vec<GaussianRational>> =
        candidates.iter().map(|b| coordinates(&bracket(x, b).unwrap())).collect();
    if cols.is_empty() {
        return Err(SliceError::NoTriple);
    }
    let sys = QMatrix::from_columns(&cols);
    let sol = sys.solve(&coordinates(h)).ok_or(SliceError::NoTriple)?;
    Ok(candidates
        .iter()
        .zip(&sol)
        .fold(GMatrix::zero(kind), |acc, (b, s)| acc.add(&b.scale(s))))
}

/// Jacobson–Morozov triple from a nilpotent alone: H = [X, Y] for a solution
/// Y of [[X, Y], X] = 2X, then N⁻ from the linear system. Fallback only.
pub fn jm_from_nilpotent(x: &GMatrix) -> Result<JMTriple, SliceError> {
    let kind = x.kind;
    let basis: Vec<GMatrix> = liealg::basis(kind).into_iter().map(|b| liealg::basis_matrix(kind, b)).collect();
    let cols: Vec<Vec<GaussianRational>> = basis
        .iter()
        .map(|b| coordinates(&bracket(&bracket(x, b).unwrap(), x).unwrap()))
        .collect();
    let target = coordinates(&x.scale(&GaussianRational::from_int(2)));
    let y = QMatrix::from_columns(&cols).solve(&target).ok_or(SliceError::NoTriple)?;
    let ymat = basis.iter().zip(&y).fold(GMatrix::zero(kind), |acc, (b, s)| acc.add(&b.scale(s)));
    let h = bracket(x, &ymat).unwrap();
    // N⁻ with [X, N⁻] = H and [H, N⁻] = −2N⁻
    let n = basis.len();
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    let c1: Vec<Vec<GaussianRational>> = basis.iter().map(|b| coordinates(&bracket(x, b).unwrap())).collect();
    let two = GaussianRational::from_int(2);
    let c2: Vec<Vec<GaussianRational>> = basis
        .iter()
        .map(|b| coordinates(&bracket(&h, b).unwrap().add(&b.scale(&two))))
        .collect();
    for i in 0..n {
        rows.push((0..n).map(|j| c1[j][i].clone()).collect());
    }
    for i in 0..n {
        rows.push((0..n).map(|j| c2[j][i].clone()).collect());
    }
    let mut rhs = coordinates(&h);
    rhs.extend(std::iter::repeat_n(GaussianRational::default(), n));
    let sol = QMatrix::from_rows(rows).solve(&rhs).ok_or(SliceError::NoTriple)?;
    let nminus = basis.iter().zip(&sol).fold(GMatrix::zero(kind), |acc, (b, s)| acc.add(&b.scale(s)));
    let t = JMTriple { h, nplus: x.clone(), nminus };
    if t.relations_hold() {
        Ok(t)
    } else {
        Err(SliceError::NoTriple)
    }
}

fn printed_sp_nminus(idx: OrbitIndex) -> GMatrix {
    let (m, n) = (idx.m(), idx.n);
    let k = m - n;
    let mut e = QMatrix::zeros(2 * m, 2 * m);
    // m_k: subdiagonal (j+1, j) = j(2k − j), one block per Jordan chain
    for (off, size) in [(0, k), (k, n)] {
        for j in 1..size {
            let v = GaussianRational::from_int((j * (2 * size - j)) as i64);
            e.set(off + j, off + j - 1, v.clone());
            e.set(m + off + j - 1, m + off + j, -v);
        }
    }
    if k >= 1 {
        e.set(m + k - 1, k - 1, GaussianRational::from_int((k * k) as i64));
    }
    if n >= 1 {
        e.set(2 * m - 1, m - 1, GaussianRational::from_int((n * n) as i64));
    }
    GMatrix { kind: idx.kind, entries: e }
}

/// JM triple {H_n, X_n, N_n⁻}. sp uses the printed N⁻; so(2m) solves for
/// N⁻ given the diagonal H_n; so(2m+1) is the inclusion of the so(2m)
/// triple at n−1, with the linear fallback if that ever fails.
pub fn jm_triple(idx: OrbitIndex) -> Result<JMTriple, SliceError> {
    let x = nilpotent_rep(idx);
    let h = jm_h(idx);
    let nminus = match idx.family() {
        Family::C => printed_sp_nminus(idx),
        Family::D => solve_nminus(&x, &h)?,
        Family::B => include_d_in_b(&jm_triple(idx.d_part())?.nminus),
    };
    let t = JMTriple { h, nplus: x, nminus };
    if t.relations_hold() {
        Ok(t)
    } else {
        jm_from_nilpotent(&t.nplus)
    }
}

/// Diagonal of H as integers, checking the parity condition of the action.
fn h_weights(h: &GMatrix) -> Result<Vec<i64>, SliceError> {
    if !h.entries.is_diagonal() {
        return Err(SliceError::NonDiagonalH);
    }
    let mut w = Vec::new();
    for k in 0..h.entries.rows() {
        let x = h.entries.get(k, k);
        if !x.is_real() || !x.re().is_integer() {
            return Err(SliceError::OddWeight);
        }
        w.push(num_traits::ToPrimitive::to_i64(&x.re().to_integer()).ok_or(SliceError::OddWeight)?);
    }
    if w.iter().any(|x| (x - w[0]).rem_euclid(2) != 0) {
        return Err(SliceError::OddWeight);
    }
    Ok(w)
}

/// λ_r(Y) = r·Ad(r^{−H/2})Y, entrywise r^{1 + (h_j − h_i)/2}·Y_ij.
pub fn lambda_act_matrix(r: &GaussianRational, y: &GMatrix, h: &GMatrix) -> Result<GMatrix, SliceError> {
    if r.is_zero() {
        return Err(SliceError::ZeroScale);
    }
    let w = h_weights(h)?;
    let n = y.entries.rows();
    let entries = QMatrix::from_fn(n, n, |i, j| {
        let v = y.entries.get(i, j);
        if v.is_zero() {
            v.clone()
        } else {
            v * &r.powi(1 + (w[j] - w[i]) / 2)
        }
    });
    Ok(GMatrix { kind: y.kind, entries })
}

/// Weight of each coordinate under λ, read off the tangent directions: every
/// nonzero entry (i, j) of a direction must carry the same exponent
/// 1 + (h_j − h_i)/2.
pub fn coordinate_weights(idx: OrbitIndex) -> Result<Vec<i64>, SliceError> {
    let w = h_weights(&jm_h(idx))?;
    tangent_basis(idx, Variant::Corrected)
        .iter()
        .map(|v| {
            let n = v.entries.rows();
            let mut found: Option<i64> = None;
            for i in 0..n {
                for j in 0..n {
                    if v.entries.get(i, j).is_zero() {
                        continue;
                    }
                    let e = 1 + (w[j] - w[i]) / 2;
                    if found.is_some_and(|f| f != e) {
                        return Err(SliceError::OddWeight);
                    }
                    found = Some(e);
                }
            }
            found.ok_or(SliceError::ShapeMismatch)
        })
        .collect()
}

/// The sp weights as printed: a_i ↦ 2i, y_i ↦ m−i+1, z_i ↦ m+n−i+1, d_j ↦ 2j.
pub fn printed_sp_weights(idx: OrbitIndex) -> Vec<i64> {
    let (m, n) = (idx.m() as i64, idx.n as i64);
    let mut w: Vec<i64> = (1..=n).map(|i| 2 * i).collect();
    w.extend((1..=n).map(|i| m - i + 1));
    w.extend((1..=n).map(|i| m + n - i + 1));
    w.extend((1..=(m - n)).map(|j| 2 * j));
    w
}

/// The sp weights with the z exponent m−n−i+1 that homogeneity of B(t) forces.
pub fn corrected_sp_weights(idx: OrbitIndex) -> Vec<i64> {
    let (m, n) = (idx.m() as i64, idx.n as i64);
    let mut w = printed_sp_weights(idx);
    for i in 1..=n {
        w[(2 * n + i - 1) as usize] = m - n - i + 1;
    }
    w
}

/// λ_r on coordinates: c_k ↦ r^{w_k}·c_k with the computed weight table.
pub fn lambda_act_coords(idx: OrbitIndex, r: &GaussianRational, c: &QCoords) -> Result<QCoords, SliceError> {
    if r.is_zero() {
        return Err(SliceError::ZeroScale);
    }
    c.check_shape(idx)?;
    let w = coordinate_weights(idx)?;
    let flat: Vec<GaussianRational> = c.to_flat().iter().zip(&w).map(|(x, &e)| x * &r.powi(e)).collect();
    SliceCoords::from_flat(idx, flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn idx(f: Family, m: usize, n: usize) -> OrbitIndex {
        OrbitIndex::new(f, m, n).unwrap()
    }

    #[test]
    fn index_validity() {
        assert!(OrbitIndex::new(Family::C, 4, 2).is_ok());
        assert!(OrbitIndex::new(Family::C, 4, 3).is_err());
        assert!(OrbitIndex::new(Family::D, 5, 2).is_ok());
        assert!(OrbitIndex::new(Family::D, 4, 2).is_err());
        assert!(OrbitIndex::new(Family::B, 3, 2).is_ok());
        assert!(OrbitIndex::new(Family::B, 3, 0).is_err());
        assert!(OrbitIndex::new(Family::B, 2, 2).is_err());
        assert_eq!(OrbitIndex::all(Family::C, 6).len(), 4);
        assert_eq!(OrbitIndex::all(Family::D, 6).len(), 3);
        assert_eq!(OrbitIndex::all(Family::B, 6).len(), 3);
    }

    #[test]
    fn shapes() {
        assert_eq!(idx(Family::C, 4, 1).shape().len(), 6);
        assert_eq!(idx(Family::D, 5, 2).shape().len(), 9);
        let b = idx(Family::B, 5, 2);
        assert_eq!(b.shape().len(), b.codim());
        assert_eq!(b.coord_names(), vec!["a1", "y1", "z1", "z2", "d1", "d2", "d3", "a0", "d0"]);
    }

    #[test]
    fn flat_round_trip() {
        let i = idx(Family::B, 4, 2);
        let v: Vec<GaussianRational> = (1..=i.shape().len() as i64).map(q).collect();
        let c = SliceCoords::from_flat(i, v.clone()).unwrap();
        assert_eq!(c.a0, Some(q(7)));
        assert_eq!(c.to_flat(), v);
        assert!(SliceCoords::from_flat(i, vec![q(1)]).is_err());
    }

    #[test]
    fn principal_sp2() {
        let x = nilpotent_rep(idx(Family::C, 2, 0));
        assert_eq!(x.at(1, 2), &q(1));
        assert_eq!(x.at(2, 4), &q(1));
        assert_eq!(x.at(4, 3), &q(-1));
        assert_eq!(liealg::charpoly_exact(&x), crate::kernel::Poly::t_pow(4));
    }

    #[test]
    fn so6_orbit_rep_blocks() {
        // J₂ ⊕ J₁ with F₂ and E corners
        let x = nilpotent_rep(idx(Family::D, 3, 1));
        assert_eq!(x.at(1, 2), &q(1));
        assert_eq!(x.at(5, 4), &q(-1));
        assert_eq!(x.at(1, 5), &q(1));
        assert_eq!(x.at(2, 4), &q(-1));
        assert_eq!(x.at(2, 6), &q(1));
        assert_eq!(x.at(3, 5), &q(-1));
        assert!(liealg::is_member(&x));
    }

    #[test]
    fn zero_coords_give_rep() {
        for f in Family::ALL {
            for m in 1..=5 {
                for i in OrbitIndex::all(f, m) {
                    let s = slice_point(i, &SliceCoords::zero(i)).unwrap();
                    assert_eq!(s, nilpotent_rep(i), "{i}");
                }
            }
        }
    }

    #[test]
    fn sp_lower_block_display() {
        let i = idx(Family::C, 4, 1);
        let c = SliceCoords::from_flat(i, (1..=6).map(q).collect()).unwrap();
        // a₁=1, y₁=2, z₁=3, d=(4,5,6)
        let s = slice_point(i, &c).unwrap();
        assert_eq!(s.at(5, 1), &q(6));
        assert_eq!(s.at(6, 2), &q(5));
        assert_eq!(s.at(7, 3), &q(4));
        assert_eq!(s.at(8, 4), &q(1));
        assert_eq!(s.at(5, 4), &q(2));
        assert_eq!(s.at(8, 1), &q(2));
        assert_eq!(s.at(6, 4), &q(3));
        assert_eq!(s.at(8, 2), &q(3));
    }

    #[test]
    fn sp_modified_chart() {
        let i = idx(Family::C, 2, 1);
        assert!(i.is_modified());
        let c = SliceCoords::from_flat(i, vec![q(1), q(2), q(3), q(4)]).unwrap();
        let s = slice_point(i, &c).unwrap();
        let printed = slice_point_variant(i, &c, Variant::Printed).unwrap();
        assert_eq!(s.at(3, 1), &q(4 - 9));
        assert_eq!(printed.at(3, 1), &q(4 + 9));
        // extra term z₁X_{e₂−e₁} = z₁(E_{2,1} − E_{3,4})
        assert_eq!(s.at(2, 1), &q(3));
        assert_eq!(s.at(3, 4), &q(-3));
    }

    #[test]
    fn type_c_triple_relations() {
        let t = jm_triple(idx(Family::C, 4, 1)).unwrap();
        assert!(t.relations_hold());
        assert_eq!(t.nminus, printed_sp_nminus(idx(Family::C, 4, 1)));
    }

    #[test]
    fn type_d_h_blocks() {
        let i = idx(Family::D, 5, 1);
        let h = jm_h(i);
        let d: Vec<GaussianRational> = (0..10).map(|k| h.entries.get(k, k).clone()).collect();
        let expect: Vec<GaussianRational> = [6, 4, 2, 0, 2, -6, -4, -2, 0, -2].iter().map(|&x| q(x)).collect();
        assert_eq!(d, expect);
        assert!(jm_triple(i).unwrap().relations_hold());
    }

    #[test]
    fn fallback_solver_finds_a_triple() {
        let x = nilpotent_rep(idx(Family::C, 2, 1));
        let t = jm_from_nilpotent(&x).unwrap();
        assert!(t.relations_hold());
        assert!(matches!(jm_from_nilpotent(&GMatrix::zero(x.kind)), Ok(_) | Err(SliceError::NoTriple)));
    }

    #[test]
    fn lambda_trivial_and_fixed_point() {
        let i = idx(Family::C, 4, 1);
        let h = jm_h(i);
        let x = nilpotent_rep(i);
        assert_eq!(lambda_act_matrix(&q(3), &x, &h).unwrap(), x);
        let c = SliceCoords::from_flat(i, (1..=6).map(q).collect()).unwrap();
        let s = slice_point(i, &c).unwrap();
        assert_eq!(lambda_act_matrix(&q(1), &s, &h).unwrap(), s);
        assert_eq!(lambda_act_coords(i, &q(1), &c).unwrap(), c);
    }

    #[test]
    fn lambda_errors() {
        let i = idx(Family::C, 2, 0);
        let x = nilpotent_rep(i);
        assert_eq!(lambda_act_matrix(&q(2), &x, &x), Err(SliceError::NonDiagonalH));
        let odd = diag_kind(i.kind, &[1, 0, -1, 0]);
        assert_eq!(lambda_act_matrix(&q(2), &x, &odd), Err(SliceError::OddWeight));
        assert_eq!(lambda_act_matrix(&q(0), &x, &jm_h(i)), Err(SliceError::ZeroScale));
    }

    #[test]
    fn sp_weights_example() {
        // m=4, n=1, r=2: a₁→4a₁, y₁→16y₁, d_j→4^j d_j; z₁ scales by 8
        let i = idx(Family::C, 4, 1);
        assert_eq!(coordinate_weights(i).unwrap(), vec![2, 4, 3, 2, 4, 6]);
        assert_eq!(printed_sp_weights(i), vec![2, 4, 5, 2, 4, 6]);
        assert_eq!(corrected_sp_weights(i), coordinate_weights(i).unwrap());
    }

    #[test]
    fn coords_json() {
        let i = idx(Family::B, 2, 1);
        let c = SliceCoords::from_flat(i, vec![q(1), q(2), q(3), q(4)]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"kind":"B","m":2,"n":1,"a":[],"y":[],"z":["1"],"d":["2"],"a0":"3","d0":"4"}"#);
        let back: QCoords = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let c2 = SliceCoords::<GaussianRational>::zero(idx(Family::C, 2, 0));
        assert_eq!(serde_json::to_string(&c2).unwrap(), r#"{"kind":"C","m":2,"n":0,"a":[],"y":[],"z":[],"d":["0","0"]}"#);
    }
}

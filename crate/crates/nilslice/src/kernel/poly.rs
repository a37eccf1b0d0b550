use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{ComplexF, Field, GaussianRational, Ring};
use super::KernelError;

/// Dense univariate polynomial, `coeffs[k]` is the coefficient of t^k.
/// The zero polynomial has no coefficients; there is never a trailing zero.
#[derive(Clone, PartialEq)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

pub type QPoly = Poly<GaussianRational>;
pub type CPoly = Poly<ComplexF>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(R::one())
    }

    /// c·t^k
    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// The monic monomial t^k.
    pub fn t_pow(k: usize) -> Self {
        Poly::monomial(R::one(), k)
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| R::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == R::one())
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// q(−t).
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// t^k·q(t).
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// q(t)/t when the constant term vanishes.
    pub fn div_t(&self) -> Option<Self> {
        match self.coeffs.first() {
            None => Some(Poly::zero()),
            Some(c) if c.is_zero() => Some(Poly::new(self.coeffs[1..].to_vec())),
            Some(_) => None,
        }
    }

    /// q(t²).
    pub fn substitute_square(&self) -> Self {
        let mut v = vec![R::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[2 * k] = c.clone();
        }
        Poly::new(v)
    }

    /// The polynomial q̂ with q̂(t²) = q(t).
    pub fn even_part(&self) -> Result<Self, KernelError> {
        if let Some(k) = self.coeffs.iter().enumerate().position(|(k, c)| k % 2 == 1 && !c.is_zero()) {
            return Err(KernelError::OddCoefficient(k));
        }
        Ok(Poly::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * R::from_int(k as i64))
                .collect(),
        )
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Division with remainder by a monic divisor; valid over any ring.
    pub fn div_rem_monic(&self, a: &Self) -> (Self, Self) {
        assert!(a.is_monic(), "divisor must be monic");
        self.div_rem_by(a, |c| c)
    }

    fn div_rem_by(&self, a: &Self, lead_div: impl Fn(R) -> R) -> (Self, Self) {
        let da = a.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= da {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![R::zero(); r.len() - da];
        for k in (0..q.len()).rev() {
            let c = lead_div(r[k + da].clone());
            if c.is_zero() {
                continue;
            }
            for (j, aj) in a.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * aj.clone();
            }
            q[k] = c;
        }
        r.truncate(da);
        (Poly::new(q), Poly::new(r))
    }
}

impl<F: Field> Poly<F> {
    /// P = A·Q + R with deg R < deg A.
    pub fn divide_exact(&self, a: &Self) -> (Self, Self) {
        let lead = a.leading().expect("division by the zero polynomial").clone();
        self.div_rem_by(a, |c| c / lead.clone())
    }

    pub fn rem(&self, a: &Self) -> Self {
        self.divide_exact(a).1
    }

    /// Scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(F::one() / l.clone())),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free factors (a_k, k) with self = lead·Π a_k^k, each a_k monic
    /// and non-constant, k ascending.
    pub fn squarefree_factors(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut g = self.gcd(&self.derivative());
        let mut w = self.divide_exact(&g).0.monic();
        let mut k = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&g);
            let a = w.divide_exact(&y).0.monic();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, k));
            }
            g = g.divide_exact(&y).0;
            w = y;
            k += 1;
        }
        out
    }

    /// Monic polynomial with the given roots (with multiplicity).
    pub fn from_roots(roots: &[F]) -> Self {
        roots.iter().fold(Poly::one(), |acc, z| &acc * &Poly::new(vec![-z.clone(), F::one()]))
    }
}

impl QPoly {
    pub fn to_complex(&self) -> CPoly {
        self.map(|c| c.to_complex())
    }
}

impl CPoly {
    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// U, V with U = (i^{m−1}/2)(B(t)+B(−t)) and V = (i^m/(2t))(B(t)−B(−t)), so that
/// U² + t²V² = (−1)^{m−1}·B(t)B(−t). Both contain only even powers of t.
pub fn uv_from_b<R: Ring>(b: &Poly<R>, m: i64) -> (Poly<R>, Poly<R>) {
    let half = GaussianRational::ratio(1, 2);
    let cu = R::from_gaussian(&(GaussianRational::i_pow(m - 1) * &half));
    let cv = R::from_gaussian(&(GaussianRational::i_pow(m) * &half));
    let br = b.reflect();
    let u = (b + &br).scale(&cu);
    let v = (b - &br).div_t().expect("odd part is divisible by t").scale(&cv);
    (u, v)
}

/// Splits Û = t·Ŵ − y, returning (Ŵ, y).
pub fn w_from_u<R: Ring>(u_hat: &Poly<R>) -> (Poly<R>, R) {
    let y = -u_hat.coeff(0);
    let w = Poly::new(u_hat.coeffs.iter().skip(1).cloned().collect());
    (w, y)
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, o: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, o: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, o: &Poly<R>) -> Poly<R> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![R::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Poly::new(v)
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl<R: Ring> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $m(self, o: Poly<R>) -> Poly<R> {
                (&self).$m(&o)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        -&self
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<R: Ring + Serialize> Serialize for Poly<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de, R: Ring + Deserialize<'de>> Deserialize<'de> for Poly<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Poly::new(Vec::<R>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(cs: &[i64]) -> QPoly {
        Poly::from_ints(cs)
    }

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = qp(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(qp(&[0, 0]).is_zero());
        assert_eq!(qp(&[]).degree(), None);
    }

    #[test]
    fn even_part_examples() {
        assert_eq!(qp(&[2, 0, -3, 0, 1]).even_part().unwrap(), qp(&[2, -3, 1]));
        assert_eq!(qp(&[1]).even_part().unwrap(), qp(&[1]));
        assert_eq!(qp(&[1, 0, 0, 5]).even_part(), Err(KernelError::OddCoefficient(3)));
    }

    #[test]
    fn even_part_of_b_times_reflected_b() {
        // B = y₁ − z₁t with y₁ = 2, z₁ = 3
        let b = qp(&[2, -3]);
        let prod = &b * &b.reflect();
        assert_eq!(prod, qp(&[4, 0, -9]));
        assert_eq!(prod.even_part().unwrap(), qp(&[4, -9]));
    }

    #[test]
    fn uv_examples() {
        let y1 = q(5, 3);
        let (u, v) = uv_from_b(&QPoly::constant(y1.clone()), 4);
        assert_eq!(u, QPoly::constant(-GaussianRational::i() * y1));
        assert!(v.is_zero());
        let (u, v) = uv_from_b(&qp(&[0, 1]), 1);
        assert!(u.is_zero());
        assert_eq!(v, QPoly::constant(GaussianRational::i()));
    }

    #[test]
    fn w_from_u_examples() {
        let (w, y) = w_from_u(&qp(&[-5]));
        assert!(w.is_zero());
        assert_eq!(y, GaussianRational::from_int(5));
        let (w, y) = w_from_u(&qp(&[-1, 2, 1]));
        assert_eq!(w, qp(&[2, 1]));
        assert_eq!(y, GaussianRational::from_int(1));
    }

    #[test]
    fn divide_exact_examples() {
        let (qq, r) = qp(&[0, 0, 0, 1]).divide_exact(&qp(&[0, 1]));
        assert_eq!(qq, qp(&[0, 0, 1]));
        assert!(r.is_zero());
        let (qq, r) = qp(&[1, 0, 1]).divide_exact(&qp(&[-1, 1]));
        assert_eq!(qq, qp(&[1, 1]));
        assert_eq!(r, qp(&[2]));
    }

    #[test]
    fn divide_by_non_monic() {
        let a = Poly::new(vec![q(1, 2), q(3, 1)]);
        let p = qp(&[4, -1, 7, 2]);
        let (qq, r) = p.divide_exact(&a);
        assert_eq!(&(&a * &qq) + &r, p);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (t−1)²(t+2)·3
        let p = &(&qp(&[1, -2, 1]) * &qp(&[2, 1])) * &qp(&[3]);
        assert_eq!(p.gcd(&p.derivative()), qp(&[-1, 1]));
        assert_eq!(p.squarefree_factors(), vec![(qp(&[2, 1]), 1), (qp(&[-1, 1]), 2)]);
        let cube = &(&qp(&[0, 1]) * &qp(&[0, 1])) * &qp(&[0, 1]);
        assert_eq!(cube.squarefree_factors(), vec![(qp(&[0, 1]), 3)]);
        assert!(qp(&[5]).squarefree_factors().is_empty());
    }

    #[test]
    fn shift_and_div_t() {
        let p = qp(&[1, 2]);
        assert_eq!(p.shift(2), qp(&[0, 0, 1, 2]));
        assert_eq!(p.shift(2).div_t().unwrap(), qp(&[0, 1, 2]));
        assert!(p.div_t().is_none());
    }

    #[test]
    fn serialize_as_string_array() {
        let p = Poly::new(vec![q(1, 2), GaussianRational::i()]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["1/2","1*i"]"#);
        let back: QPoly = serde_json::from_str(r#"["1/2","1*i"]"#).unwrap();
        assert_eq!(back, p);
    }
}

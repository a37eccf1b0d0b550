use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Field, GaussianRational, Ring};

/// Exponent vector with trailing zeros trimmed, so the number of variables
/// never has to be fixed up front.
pub type Monomial = Vec<u32>;

fn trim(mut e: Monomial) -> Monomial {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    trim((0..n).map(|k| a.get(k).unwrap_or(&0) + b.get(k).unwrap_or(&0)).collect())
}

/// Sparse multivariate polynomial over a ring.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<R> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> MPoly<R> {
    pub fn constant(c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(R::one(), &unit(i, 1))
    }

    pub fn monomial(c: R, e: &[u32]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(e.to_vec()), c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.get(i).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Variables that occur with positive exponent.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|e| e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Coefficient of x_i^k as a polynomial in the other variables.
    pub fn coeff_in(&self, i: usize, k: u32) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            if e.get(i).copied().unwrap_or(0) == k {
                let mut e2 = e.clone();
                if i < e2.len() {
                    e2[i] = 0;
                }
                out.add_term(trim(e2), c.clone());
            }
        }
        out
    }

    /// The constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<R> {
        match self.terms.len() {
            0 => Some(R::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// The single term (c, e) of a monomial.
    pub fn as_monomial(&self) -> Option<(R, Monomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(e, c)| (c.clone(), e.clone()))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let k = e.get(i).copied().unwrap_or(0);
            if k > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(trim(e2), c.clone() * R::from_int(k as i64));
            }
        }
        out
    }

    /// Evaluates at a point after mapping coefficients into the target ring.
    pub fn eval_with<S: Ring>(&self, x: &[S], conv: impl Fn(&R) -> S) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = conv(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t * x[i].pow(k);
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn eval(&self, x: &[R]) -> R {
        self.eval_with(x, |c| c.clone())
    }

    /// Replaces x_i by the polynomial q.
    pub fn substitute(&self, i: usize, q: &MPoly<R>) -> Self {
        let deg = self.degree_in(i);
        let mut powers = vec![MPoly::one()];
        for k in 1..=deg as usize {
            powers.push(powers[k - 1].clone() * q.clone());
        }
        let mut out = MPoly::zero();
        for k in 0..=deg {
            let c = self.coeff_in(i, k);
            if !c.is_zero() {
                out = out + c * powers[k as usize].clone();
            }
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> MPoly<S> {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Vec::new() };
        let mut g = first.clone();
        for e in it {
            for (k, x) in g.iter_mut().enumerate() {
                *x = (*x).min(e.get(k).copied().unwrap_or(0));
            }
        }
        trim(g)
    }

    /// Divides every term by the monomial x^e, `None` unless exact.
    pub fn div_monomial(&self, e: &[u32]) -> Option<Self> {
        let mut out = MPoly::zero();
        for (f, c) in &self.terms {
            let mut g = f.clone();
            g.resize(g.len().max(e.len()), 0);
            for (k, &x) in e.iter().enumerate() {
                g[k] = g[k].checked_sub(x)?;
            }
            out.add_term(trim(g), c.clone());
        }
        Some(out)
    }

    /// Σ|c|·Π|x_i|^{e_i}, the scale against which a value is measured.
    pub fn abs_term_sum(&self, x: &[R], abs: impl Fn(&R) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().enumerate().fold(abs(c), |acc, (i, &k)| acc * abs(&x[i]).powi(k as i32))
            })
            .sum()
    }

    pub fn fmt_with(&self, names: &[&str]) -> String
    where
        R: fmt::Display,
    {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        let n = names.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}"));
                        if k == 1 {
                            n
                        } else {
                            format!("{n}^{k}")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else if *c == R::one() {
                    vars.join("*")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<F: Field> MPoly<F> {
    pub fn scale_inv(&self, c: &F) -> Self {
        let ci = c.inv();
        self.map(|x| x.clone() * ci.clone())
    }
}

fn unit(i: usize, k: u32) -> Monomial {
    let mut e = vec![0; i + 1];
    e[i] = k;
    e
}

impl<R: Ring> Ring for MPoly<R> {
    fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    fn one() -> Self {
        MPoly::constant(R::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_gaussian(x: &GaussianRational) -> Self {
        MPoly::constant(R::from_gaussian(x))
    }
}

impl<R: Ring> Add for MPoly<R> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (e, c) in o.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<R: Ring> Sub for MPoly<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<R: Ring> Neg for MPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        MPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<R: Ring> Mul for MPoly<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                out.add_term(mono_mul(e, f), c.clone() * d.clone());
            }
        }
        out
    }
}

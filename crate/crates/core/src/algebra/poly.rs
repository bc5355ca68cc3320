//! Sparse multivariate polynomials and their gcd.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Field, PrimeField, Rationals, Ring};
use super::multiindex::MultiIndex;
use super::series::{TruncatedSeries, WeilAlgebra};
use crate::error::{Error, Result};

/// A polynomial in `nvars` variables. Exponent vectors are ordered
/// lexicographically, so the last map entry is the lex-leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F::Elem>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        Polynomial {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn monomial(field: &F, exponents: Vec<u32>, c: F::Elem) -> Self {
        let mut p = Self::zero(field, exponents.len());
        if !field.is_zero(&c) {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn from_terms(
        field: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: F::Elem) {
        let f = &self.field;
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = f.add(old, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                if !f.is_zero(&c) {
                    self.terms.insert(e, c);
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F::Elem)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variables in it.
    pub fn as_constant(&self) -> Option<F::Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f, self.nvars);
        }
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), f.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.field, self.nvars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            out.add_term(e2, f.mul(c, &f.from_int(e[v] as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars);
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes polynomials (in a common variable set) for each variable.
    pub fn compose(&self, inner: &[Polynomial<F>]) -> Self {
        assert_eq!(inner.len(), self.nvars);
        let f = &self.field;
        let nv = inner.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(f, nv);
        for (e, c) in &self.terms {
            let mut t = Self::constant(f, nv, c.clone());
            for (p, &k) in inner.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&p.pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Taylor expansion at `point` in the shifted coordinates `t = z − point`,
    /// truncated to the algebra's order.
    pub fn to_series(
        &self,
        alg: &Arc<WeilAlgebra<F>>,
        point: &[F::Elem],
    ) -> Result<TruncatedSeries<F>> {
        if point.len() != self.nvars || alg.dim() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for a polynomial in {} variables expanded in {} variables",
                point.len(),
                self.nvars,
                alg.dim()
            )));
        }
        let shifted: Vec<TruncatedSeries<F>> = point
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut v = TruncatedSeries::variable(alg, i);
                v.set_coeff(&MultiIndex::zero(self.nvars), s.clone());
                v
            })
            .collect();
        let mut out = TruncatedSeries::zero(alg);
        for (e, c) in &self.terms {
            let mut t = TruncatedSeries::constant(alg, c.clone());
            for (x, &k) in shifted.iter().zip(e) {
                if k > 0 {
                    t = t.mul_unchecked(&x.pow(k));
                }
            }
            out = out.add_unchecked(&t);
        }
        Ok(out)
    }

    /// Maps coefficients into another field.
    pub fn map_field<G: Field>(
        &self,
        target: &G,
        mut f: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<Polynomial<G>> {
        let mut out = Polynomial::zero(target, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Multiplies by the inverse of the lex-leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field.inv(c).unwrap()),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let f = &self.field;
        let (ld, lc) = d.leading()?;
        let lc_inv = f.inv(lc)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(f, self.nvars);
        while let Some((lr, cr)) = rem.leading() {
            let e: Vec<u32> = lr
                .iter()
                .zip(ld)
                .map(|(a, b)| a.checked_sub(*b))
                .collect::<Option<_>>()?;
            let t = Self::monomial(f, e, f.mul(cr, &lc_inv));
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Coefficients as a polynomial in variable `v`, index = power of `v`.
    fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.field, self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    fn leading_coeff_in(&self, v: usize) -> Self {
        self.coeffs_in(v).pop().unwrap()
    }

    fn content_in(&self, v: usize) -> Self {
        self.coeffs_in(v)
            .iter()
            .fold(Self::zero(&self.field, self.nvars), |g, c| g.gcd(c))
    }

    fn pseudo_rem(&self, b: &Self, v: usize) -> Self {
        let db = b.degree_in(v).unwrap();
        let lb = b.leading_coeff_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v).unwrap() >= db {
            let dr = r.degree_in(v).unwrap();
            let lr = r.leading_coeff_in(v);
            let mut shift = vec![0; self.nvars];
            shift[v] = dr - db;
            let x = Self::monomial(&self.field, shift, self.field.one());
            r = lb.mul(&r).sub(&lr.mul(&x).mul(b));
        }
        r
    }

    /// Coefficients in `v` after substituting `point` for the other variables.
    fn specialize(&self, v: usize, point: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.degree_in(v).unwrap_or(0) as usize + 1];
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &k) in e.iter().enumerate() {
                if j != v && k > 0 {
                    t = f.mul(&t, &f.pow(&point[j], k));
                }
            }
            let slot = &mut out[e[v] as usize];
            *slot = f.add(slot, &t);
        }
        out
    }

    /// Proves `gcd = 1` when, for every variable occurring in both, some
    /// specialization of the others keeps both leading coefficients and has
    /// coprime univariate images. `false` means no proof was found.
    fn coprime_certificate(&self, other: &Self) -> bool {
        let f = &self.field;
        (0..self.nvars).all(|v| {
            let (da, db) = (
                self.degree_in(v).unwrap_or(0),
                other.degree_in(v).unwrap_or(0),
            );
            if da == 0 || db == 0 {
                return true;
            }
            (0..4u32).any(|attempt| {
                let point: Vec<F::Elem> = (0..self.nvars)
                    .map(|j| f.from_int(2 + (5 * j as i64 + 3 * attempt as i64) % 17))
                    .collect();
                let a = self.specialize(v, &point);
                let b = other.specialize(v, &point);
                !f.is_zero(&a[da as usize])
                    && !f.is_zero(&b[db as usize])
                    && univariate_gcd_degree(f, a, b) == 0
            })
        })
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.as_constant().is_some()
            || other.as_constant().is_some()
            || self.coprime_certificate(other)
        {
            return Self::one(&self.field, self.nvars);
        }
        let v = (0..self.nvars)
            .find(|&i| self.degree_in(i).unwrap_or(0) > 0 || other.degree_in(i).unwrap_or(0) > 0);
        let Some(v) = v else {
            return Self::one(&self.field, self.nvars);
        };
        let ca = self.content_in(v);
        let cb = other.content_in(v);
        let content = ca.gcd(&cb);
        let mut a = self.exact_div(&ca).unwrap();
        let mut b = other.exact_div(&cb).unwrap();
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() && b.degree_in(v).unwrap() > 0 {
            let r = a.pseudo_rem(&b, v);
            a = b;
            b = if r.is_zero() {
                r
            } else {
                let c = r.content_in(v);
                r.exact_div(&c).unwrap()
            };
        }
        if !b.is_zero() {
            // a nonzero remainder free of `v`: the primitive parts are coprime
            return content.monic();
        }
        let pa = a.exact_div(&a.content_in(v)).unwrap();
        content.mul(&pa).monic()
    }

    /// Human-readable form using the given variable names.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let f = &self.field;
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = f.format(c);
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], x)
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&coeff);
            } else {
                if coeff != "1" {
                    if coeff.contains('/') {
                        out.push_str(&format!("({coeff})*"));
                    } else {
                        out.push_str(&format!("{coeff}*"));
                    }
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// Degree of `gcd(a, b)` for dense univariate coefficient vectors.
fn univariate_gcd_degree<F: Field>(f: &F, mut a: Vec<F::Elem>, mut b: Vec<F::Elem>) -> usize {
    let trim = |p: &mut Vec<F::Elem>| {
        while p.last().is_some_and(|c| f.is_zero(c)) {
            p.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb = f.inv(b.last().unwrap()).unwrap();
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = f.mul(a.last().unwrap(), &lb);
            for (k, bk) in b.iter().enumerate() {
                a[shift + k] = f.sub(&a[shift + k], &f.mul(&c, bk));
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

impl Polynomial<Rationals> {
    /// Common denominator of all coefficients.
    pub fn coefficient_denominator(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators after clearing denominators.
    fn integer_content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
            .abs()
    }

    pub fn reduce_mod(&self, field: &PrimeField) -> Result<Polynomial<PrimeField>> {
        self.map_field(field, |c| field.from_rational(c))
    }
}

/// The field of rational functions in `nvars` variables, as a ring context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctions<F: Field> {
    pub field: F,
    pub nvars: usize,
}

impl<F: Field> Ring for RationalFunctions<F> {
    type Elem = RationalFunction<F>;

    fn zero(&self) -> Self::Elem {
        RationalFunction::zero(&self.field, self.nvars)
    }
    fn one(&self) -> Self::Elem {
        RationalFunction::constant(&self.field, self.nvars, self.field.one())
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        RationalFunction::constant(&self.field, self.nvars, self.field.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.sub(b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.inv().ok()
    }
}

/// A quotient of polynomials kept in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction<F: Field> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field(), num.nvars()));
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        let lc = den.leading().unwrap().1.clone();
        let inv = den.field().inv(&lc).unwrap();
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        let den = Polynomial::one(p.field(), p.nvars());
        RationalFunction { num: p, den }
    }

    pub fn zero(field: &F, nvars: usize) -> Self {
        Self::from_poly(Polynomial::zero(field, nvars))
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::from_poly(Polynomial::constant(field, nvars, c))
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        Self::from_poly(Polynomial::var(field, nvars, i))
    }

    pub fn numer(&self) -> &Polynomial<F> {
        &self.num
    }
    pub fn denom(&self) -> &Polynomial<F> {
        &self.den
    }
    pub fn field(&self) -> &F {
        self.num.field()
    }
    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }
    pub fn as_constant(&self) -> Option<F::Elem> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        self.field().div(&n, &d).ok()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(n),
            den: base.den.pow(n),
        })
    }

    pub fn derivative(&self, v: usize) -> Self {
        let n = self
            .num
            .derivative(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(v)));
        Self::new(n, self.den.mul(&self.den)).unwrap()
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        let d = self.den.eval(point);
        if self.field().is_zero(&d) {
            return Err(Error::PoleAtBasepoint);
        }
        self.field().div(&self.num.eval(point), &d)
    }

    /// Substitutes rational functions for each variable.
    pub fn compose(&self, inner: &[RationalFunction<F>]) -> Result<Self> {
        let f = self.field();
        let nv = inner.first().map_or(0, |p| p.nvars());
        let eval_poly = |p: &Polynomial<F>| -> Result<Self> {
            let mut acc = Self::zero(f, nv);
            for (e, c) in p.terms() {
                let mut t = Self::constant(f, nv, c.clone());
                for (x, &k) in inner.iter().zip(e) {
                    if k > 0 {
                        t = t.mul(&x.pow(k as i32)?);
                    }
                }
                acc = acc.add(&t);
            }
            Ok(acc)
        };
        eval_poly(&self.num)?.div(&eval_poly(&self.den)?)
    }

    /// Exact Taylor expansion at `point` to the order of `alg`.
    pub fn taylor(
        &self,
        alg: &Arc<WeilAlgebra<F>>,
        point: &[F::Elem],
    ) -> Result<TruncatedSeries<F>> {
        let den = self.den.to_series(alg, point)?;
        let inv = den.invert().map_err(|_| Error::PoleAtBasepoint)?;
        Ok(self.num.to_series(alg, point)?.mul_unchecked(&inv))
    }

    pub fn format_with(&self, names: &[String]) -> String {
        let n = self.num.format_with(names);
        if self.den.as_constant().is_some() {
            return n;
        }
        let d = self.den.format_with(names);
        let wrap = |s: String, p: &Polynomial<F>| {
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }

    pub fn map_field<G: Field>(
        &self,
        target: &G,
        mut f: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<RationalFunction<G>> {
        let num = self.num.map_field(target, &mut f)?;
        let den = self.den.map_field(target, &mut f)?;
        RationalFunction::new(num, den)
    }
}

impl RationalFunction<Rationals> {
    /// Reduction modulo `p` after clearing denominators and integer content.
    pub fn reduce_mod(&self, field: &PrimeField) -> Result<RationalFunction<PrimeField>> {
        let scale = BigRational::from_integer(
            self.num
                .coefficient_denominator()
                .lcm(&self.den.coefficient_denominator()),
        );
        let num = self.num.scale(&scale);
        let den = self.den.scale(&scale);
        let content = num.integer_content().gcd(&den.integer_content());
        let c = BigRational::new(BigInt::one(), content);
        let (num, den) = (num.scale(&c), den.scale(&c));
        let rn = num.reduce_mod(field)?;
        let rd = den.reduce_mod(field)?;
        if rd.is_zero() {
            return Err(Error::NonIntegralCoefficient(
                self.format_with(&default_names(self.nvars())),
            ));
        }
        RationalFunction::new(rn, rd)
    }
}

/// `z1, …, zn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// Taylor expansion of `f` at `point` to total degree `order`.
pub fn ratfun_taylor_at<F: Field>(
    f: &RationalFunction<F>,
    point: &[F::Elem],
    order: usize,
) -> Result<TruncatedSeries<F>> {
    let alg = WeilAlgebra::new(f.field().clone(), f.nvars(), order)?;
    f.taylor(&alg, point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Ring;

    fn x(n: usize, i: usize) -> Polynomial<Rationals> {
        Polynomial::var(&Rationals, n, i)
    }
    fn c(n: usize, v: i64) -> Polynomial<Rationals> {
        Polynomial::constant(&Rationals, n, Rationals.from_int(v))
    }

    #[test]
    fn gcd_univariate() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = x(1, 0).sub(&c(1, 1)).mul(&x(1, 0).add(&c(1, 2)));
        let b = x(1, 0).sub(&c(1, 1)).mul(&x(1, 0).sub(&c(1, 3)));
        assert_eq!(a.gcd(&b), x(1, 0).sub(&c(1, 1)));
    }

    #[test]
    fn gcd_bivariate() {
        let g = x(2, 0).mul(&x(2, 1)).add(&c(2, 1));
        let a = g.mul(&x(2, 0).add(&x(2, 1)));
        let b = g.mul(&x(2, 0).sub(&c(2, 2)));
        assert_eq!(a.gcd(&b), g.monic());
        assert_eq!(x(2, 0).gcd(&x(2, 1)), c(2, 1));
    }

    #[test]
    fn rational_function_cancels() {
        let n = x(1, 0).mul(&x(1, 0)).sub(&c(1, 1));
        let d = x(1, 0).sub(&c(1, 1)).scale(&Rationals.from_int(2));
        let r = RationalFunction::new(n, d).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(
            r.numer(),
            &x(1, 0)
                .add(&c(1, 1))
                .scale(&BigRational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn taylor_geometric() {
        let f = RationalFunction::new(c(1, 1), c(1, 1).sub(&x(1, 0))).unwrap();
        let s = ratfun_taylor_at(&f, &[Rationals.zero()], 2).unwrap();
        assert_eq!(
            s.coeffs(),
            &[Rationals.one(), Rationals.one(), Rationals.one()]
        );
        let pole = RationalFunction::new(c(1, 1), x(1, 0)).unwrap();
        assert_eq!(
            ratfun_taylor_at(&pole, &[Rationals.zero()], 2),
            Err(Error::PoleAtBasepoint)
        );
    }

    #[test]
    fn reduction_clears_denominators() {
        let f = PrimeField::new(5).unwrap();
        // 1/(z + 1/5) = 5/(5z + 1)
        let r = RationalFunction::new(
            c(1, 1),
            x(1, 0).add(&Polynomial::constant(
                &Rationals,
                1,
                BigRational::new(1.into(), 5.into()),
            )),
        )
        .unwrap();
        let red = r.reduce_mod(&f).unwrap();
        assert!(red.is_zero());
        let bad = RationalFunction::from_poly(Polynomial::constant(
            &Rationals,
            1,
            BigRational::new(1.into(), 5.into()),
        ));
        assert!(matches!(
            bad.reduce_mod(&f),
            Err(Error::NonIntegralCoefficient(_))
        ));
    }

    #[test]
    fn formatting() {
        let names = vec!["l".to_string()];
        let p = x(1, 0)
            .mul(&x(1, 0))
            .sub(&x(1, 0).scale(&Rationals.from_int(2)));
        assert_eq!(p.format_with(&names), "l^2 - 2*l");
    }
}

//! Truncated multivariate power series: elements of the Weil algebra
//! `K[t₁..t_d]/(t)^{r+1}` with dense coefficient storage.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::{Field, Ring};
use super::multiindex::{multiindex_enumerate, MultiIndex};
use crate::error::{Error, Result};

/// The Weil algebra `A^d_r` over a field, with its monomial basis and
/// multiplication table.
#[derive(Debug)]
pub struct WeilAlgebra<F: Field> {
    field: F,
    d: usize,
    r: usize,
    monomials: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    /// `(i, j, k)` with `monomials[i] * monomials[j] = monomials[k]`.
    products: Vec<(usize, usize, usize)>,
}

impl<F: Field> WeilAlgebra<F> {
    /// Fails with `CharTooSmall` unless `r!` is invertible in the field.
    pub fn new(field: F, d: usize, r: usize) -> Result<Arc<Self>> {
        field.require_order(r)?;
        let monomials = multiindex_enumerate(d, r);
        let lookup: HashMap<_, _> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                if a.degree() + b.degree() <= r {
                    products.push((i, j, lookup[&a.add(b)]));
                }
            }
        }
        Ok(Arc::new(WeilAlgebra {
            field,
            d,
            r,
            monomials,
            lookup,
            products,
        }))
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn order(&self) -> usize {
        self.r
    }
    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }
    pub fn index_of(&self, q: &MultiIndex) -> Option<usize> {
        self.lookup.get(q).copied()
    }
    pub fn len(&self) -> usize {
        self.monomials.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

impl<F: Field> PartialEq for WeilAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.d == other.d && self.r == other.r
    }
}

impl<F: Field> Eq for WeilAlgebra<F> {}

impl<F: Field> std::hash::Hash for WeilAlgebra<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.d.hash(state);
        self.r.hash(state);
    }
}

/// An element of `A^d_r`.
#[derive(Clone)]
pub struct TruncatedSeries<F: Field> {
    alg: Arc<WeilAlgebra<F>>,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for TruncatedSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for TruncatedSeries<F> {}

impl<F: Field> std::hash::Hash for TruncatedSeries<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.alg.hash(state);
        self.coeffs.hash(state);
    }
}

impl<F: Field> fmt::Debug for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> fmt::Display for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = &self.alg.field;
        let mut first = true;
        for (q, c) in self.alg.monomials.iter().zip(&self.coeffs) {
            if field.is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", field.format(c))?;
            for (i, &e) in q.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{}", i + 1, e)?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<F: Field> TruncatedSeries<F> {
    pub fn zero(alg: &Arc<WeilAlgebra<F>>) -> Self {
        TruncatedSeries {
            alg: alg.clone(),
            coeffs: vec![alg.field.zero(); alg.len()],
        }
    }

    pub fn constant(alg: &Arc<WeilAlgebra<F>>, c: F::Elem) -> Self {
        let mut s = Self::zero(alg);
        s.coeffs[0] = c;
        s
    }

    pub fn one(alg: &Arc<WeilAlgebra<F>>) -> Self {
        Self::constant(alg, alg.field.one())
    }

    /// The coordinate function `t_i` (0-based). Truncates to zero when `r = 0`.
    pub fn variable(alg: &Arc<WeilAlgebra<F>>, i: usize) -> Self {
        let mut s = Self::zero(alg);
        if let Some(k) = alg.index_of(&MultiIndex::unit(alg.d, i)) {
            s.coeffs[k] = alg.field.one();
        }
        s
    }

    /// Builds a series from `(monomial, coefficient)` pairs; monomials of
    /// degree above `r` are dropped.
    pub fn from_terms<I>(alg: &Arc<WeilAlgebra<F>>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, F::Elem)>,
    {
        let mut s = Self::zero(alg);
        for (q, c) in terms {
            if q.dim() != alg.d {
                return Err(Error::ShapeMismatch(format!(
                    "monomial {q} in a series of dimension {}",
                    alg.d
                )));
            }
            if let Some(k) = alg.index_of(&q) {
                s.coeffs[k] = alg.field.add(&s.coeffs[k], &c);
            }
        }
        Ok(s)
    }

    pub fn from_coeffs(alg: &Arc<WeilAlgebra<F>>, coeffs: Vec<F::Elem>) -> Result<Self> {
        if coeffs.len() != alg.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for an algebra with {} monomials",
                coeffs.len(),
                alg.len()
            )));
        }
        Ok(TruncatedSeries {
            alg: alg.clone(),
            coeffs,
        })
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra<F>> {
        &self.alg
    }
    pub fn field(&self) -> &F {
        &self.alg.field
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.alg.d, self.alg.r)
    }
    /// Coefficients in graded-lex monomial order.
    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }
    pub fn coeff(&self, q: &MultiIndex) -> F::Elem {
        self.alg
            .index_of(q)
            .map(|k| self.coeffs[k].clone())
            .unwrap_or_else(|| self.alg.field.zero())
    }
    pub fn set_coeff(&mut self, q: &MultiIndex, c: F::Elem) {
        if let Some(k) = self.alg.index_of(q) {
            self.coeffs[k] = c;
        }
    }
    pub fn constant_term(&self) -> &F::Elem {
        &self.coeffs[0]
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.alg.field.is_zero(c))
    }
    /// True when every coefficient of positive degree vanishes.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|c| self.alg.field.is_zero(c))
    }
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &F::Elem)> {
        self.alg.monomials.iter().zip(&self.coeffs)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.alg.d != other.alg.d || self.alg.r != other.alg.r {
            return Err(Error::ShapeMismatch(format!(
                "series of shape {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let f = &self.alg.field;
        TruncatedSeries {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        let f = &self.alg.field;
        TruncatedSeries {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f.sub(a, b))
                .collect(),
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.alg.field;
        let mut out = vec![f.zero(); self.alg.len()];
        for &(i, j, k) in &self.alg.products {
            if f.is_zero(&self.coeffs[i]) || f.is_zero(&other.coeffs[j]) {
                continue;
            }
            out[k] = f.add(&out[k], &f.mul(&self.coeffs[i], &other.coeffs[j]));
        }
        TruncatedSeries {
            alg: self.alg.clone(),
            coeffs: out,
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.alg.field;
        TruncatedSeries {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.alg.field;
        TruncatedSeries {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    /// Multiplicative inverse; `NotAUnit` when the constant term vanishes.
    pub fn invert(&self) -> Result<Self> {
        let f = &self.alg.field;
        let c0 = f.inv(&self.coeffs[0]).ok_or(Error::NotAUnit)?;
        // a = c(1 + n) with n nilpotent, so a⁻¹ = c⁻¹ Σ_{k≤r} (−n)^k.
        let mut minus_n = self.scale(&f.neg(&c0));
        minus_n.coeffs[0] = f.zero();
        let mut acc = Self::one(&self.alg);
        let mut power = Self::one(&self.alg);
        for _ in 0..self.alg.r {
            power = power.mul_unchecked(&minus_n);
            acc = acc.add_unchecked(&power);
        }
        Ok(acc.scale(&c0))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.alg);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Partial derivative `∂/∂t_i`, landing in `A^d_{r-1}` represented inside
    /// `A^d_r` (top-degree coefficients are zero).
    pub fn derivative(&self, i: usize) -> Self {
        let f = &self.alg.field;
        let mut out = Self::zero(&self.alg);
        for (k, q) in self.alg.monomials.iter().enumerate() {
            if q.0[i] == 0 {
                continue;
            }
            let lower = q.checked_sub(&MultiIndex::unit(self.alg.d, i)).unwrap();
            let idx = self.alg.lookup[&lower];
            out.coeffs[idx] = f.mul(&self.coeffs[k], &f.from_int(q.0[i] as i64));
        }
        out
    }

    /// Drops every coefficient of total degree above `order`.
    pub fn truncate_to(&self, order: usize) -> Self {
        let mut out = self.clone();
        for (k, q) in self.alg.monomials.iter().enumerate() {
            if q.degree() > order {
                out.coeffs[k] = self.alg.field.zero();
            }
        }
        out
    }

    /// Re-expresses this series in a different Weil algebra of the same
    /// dimension, truncating or zero-padding.
    pub fn change_order(&self, target: &Arc<WeilAlgebra<F>>) -> Result<Self> {
        if target.d != self.alg.d {
            return Err(Error::ShapeMismatch(format!(
                "cannot move a series in {} variables to {}",
                self.alg.d, target.d
            )));
        }
        let mut out = Self::zero(target);
        for (q, c) in self.terms() {
            out.set_coeff(q, c.clone());
        }
        Ok(out)
    }
}

/// `add`, `mul` or `invert` on truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    /// Inverts the first argument; the second only has to share its shape.
    InvertFirst,
}

pub fn series_arithmetic<F: Field>(
    a: &TruncatedSeries<F>,
    b: &TruncatedSeries<F>,
    op: SeriesOp,
) -> Result<TruncatedSeries<F>> {
    a.check_shape(b)?;
    match op {
        SeriesOp::Add => Ok(a.add_unchecked(b)),
        SeriesOp::Mul => Ok(a.mul_unchecked(b)),
        SeriesOp::InvertFirst => a.invert(),
    }
}

/// Formal composition `outer(inner₁, …, inner_{d′})`, truncated to the
/// inner algebra's order. Every inner series must have zero constant term.
pub fn series_substitute<F: Field>(
    outer: &TruncatedSeries<F>,
    inner: &[TruncatedSeries<F>],
) -> Result<TruncatedSeries<F>> {
    let first = inner
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no inner series".into()))?;
    let target = first.alg.clone();
    if inner.len() != outer.alg.d {
        return Err(Error::ShapeMismatch(format!(
            "{} inner series for an outer series in {} variables",
            inner.len(),
            outer.alg.d
        )));
    }
    for s in inner {
        first.check_shape(s)?;
        if !s.alg.field.is_zero(&s.coeffs[0]) {
            return Err(Error::NonzeroConstantTerm);
        }
    }
    if outer.alg.r < target.r {
        return Err(Error::OrderMismatch(format!(
            "outer order {} is below the target order {}",
            outer.alg.r, target.r
        )));
    }
    let f = &target.field;
    // powers[i][e] = inner_i^e for e ≤ r; higher powers vanish.
    let powers: Vec<Vec<TruncatedSeries<F>>> = inner
        .iter()
        .map(|s| {
            let mut v = vec![TruncatedSeries::one(&target)];
            for e in 1..=target.r {
                let next = v[e - 1].mul_unchecked(s);
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = TruncatedSeries::zero(&target);
    for (q, c) in outer.terms() {
        if f.is_zero(c) || q.degree() > target.r {
            continue;
        }
        let mut term = TruncatedSeries::constant(&target, c.clone());
        for (i, &e) in q.0.iter().enumerate() {
            if e > 0 {
                term = term.mul_unchecked(&powers[i][e as usize]);
            }
        }
        out = out.add_unchecked(&term);
    }
    Ok(out)
}

/// Ring context for matrices over a Weil algebra.
#[derive(Clone, Debug)]
pub struct SeriesRing<F: Field>(pub Arc<WeilAlgebra<F>>);

impl<F: Field> Ring for SeriesRing<F> {
    type Elem = TruncatedSeries<F>;

    fn zero(&self) -> Self::Elem {
        TruncatedSeries::zero(&self.0)
    }
    fn one(&self) -> Self::Elem {
        TruncatedSeries::one(&self.0)
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        TruncatedSeries::constant(&self.0, self.0.field.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add_unchecked(b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.sub_unchecked(b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul_unchecked(b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.invert().ok()
    }
}

//! Jets of maps between affine charts and jets of flags.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{
    rank, series_substitute, Field, Matrix, MultiIndex, RationalFunction, SeriesRing,
    TruncatedSeries, WeilAlgebra,
};
use crate::error::{Error, Result};

/// A `(d, r)`-jet into a `k`-dimensional chart: `k` truncated series in
/// `A^d_r` together with the basepoint they start at.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Jet<F: Field> {
    alg: Arc<WeilAlgebra<F>>,
    coords: Vec<TruncatedSeries<F>>,
    basepoint: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Jet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coords).finish()
    }
}

impl<F: Field> Jet<F> {
    /// All coordinates must live in `alg`.
    pub fn new(alg: &Arc<WeilAlgebra<F>>, coords: Vec<TruncatedSeries<F>>) -> Result<Self> {
        for c in &coords {
            if c.shape() != (alg.dim(), alg.order()) {
                return Err(Error::ShapeMismatch(format!(
                    "jet coordinate of shape {:?} in a jet of shape {:?}",
                    c.shape(),
                    (alg.dim(), alg.order())
                )));
            }
        }
        let basepoint = coords.iter().map(|c| c.constant_term().clone()).collect();
        Ok(Jet {
            alg: alg.clone(),
            coords,
            basepoint,
        })
    }

    /// The constant jet at `point`.
    pub fn constant(alg: &Arc<WeilAlgebra<F>>, point: &[F::Elem]) -> Self {
        let coords = point
            .iter()
            .map(|x| TruncatedSeries::constant(alg, x.clone()))
            .collect();
        Jet {
            alg: alg.clone(),
            coords,
            basepoint: point.to_vec(),
        }
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra<F>> {
        &self.alg
    }
    pub fn field(&self) -> &F {
        self.alg.field()
    }
    /// `(d, r)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.alg.dim(), self.alg.order())
    }
    /// Dimension of the target chart.
    pub fn target_dim(&self) -> usize {
        self.coords.len()
    }
    pub fn coords(&self) -> &[TruncatedSeries<F>] {
        &self.coords
    }
    pub fn basepoint(&self) -> &[F::Elem] {
        &self.basepoint
    }

    /// `j − s`: the coordinates with their constant terms removed.
    pub fn offsets(&self) -> Vec<TruncatedSeries<F>> {
        let f = self.field();
        self.coords
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.set_coeff(&MultiIndex::zero(self.alg.dim()), f.zero());
                c
            })
            .collect()
    }
}

/// Weight and Hodge numbers `h^0, …, h^w` of a filtration of `K^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagShape {
    hodge: Vec<usize>,
}

impl FlagShape {
    pub fn new(hodge: Vec<usize>) -> Result<Self> {
        if hodge.is_empty() || hodge.iter().sum::<usize>() == 0 {
            return Err(Error::ShapeMismatch(
                "Hodge numbers must be non-empty with positive sum".into(),
            ));
        }
        Ok(FlagShape { hodge })
    }

    pub fn weight(&self) -> u32 {
        (self.hodge.len() - 1) as u32
    }
    pub fn rank(&self) -> usize {
        self.hodge.iter().sum()
    }
    /// `h^0, …, h^w`.
    pub fn hodge_numbers(&self) -> &[usize] {
        &self.hodge
    }

    /// `j_k = dim F^k = Σ_{i ≥ k} h^i`.
    pub fn jump(&self, k: i64) -> usize {
        let start = k.max(0) as usize;
        self.hodge.iter().skip(start).sum()
    }

    /// `j_1, …, j_w`.
    pub fn jump_indices(&self) -> Vec<usize> {
        (1..=self.weight() as i64).map(|k| self.jump(k)).collect()
    }

    /// The filtration degree `max{k : c < j_k}` of column `c` in an adapted basis.
    pub fn column_degree(&self, c: usize) -> u32 {
        (0..=self.weight())
            .rev()
            .find(|&k| c < self.jump(k as i64))
            .expect("column index below rank")
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.rank()).map(|c| self.column_degree(c)).collect()
    }

    /// Hodge numbers read backwards: the shape of an opposite filtration.
    pub fn reversed(&self) -> FlagShape {
        FlagShape {
            hodge: self.hodge.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for FlagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.hodge.iter().map(|x| x.to_string()).collect();
        write!(f, "w={} h=({})", self.weight(), h.join(","))
    }
}

/// A jet of flags: a matrix over `A^d_r`, invertible, whose first `j_k`
/// columns span `F^k`. Two representatives differing by a block-upper-triangular
/// matrix on the right describe the same flag jet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagJet<F: Field> {
    shape: FlagShape,
    alg: Arc<WeilAlgebra<F>>,
    rep: Matrix<TruncatedSeries<F>>,
}

impl<F: Field> FlagJet<F> {
    pub fn new(
        shape: FlagShape,
        alg: &Arc<WeilAlgebra<F>>,
        rep: Matrix<TruncatedSeries<F>>,
    ) -> Result<Self> {
        let m = shape.rank();
        if rep.rows() != m || rep.cols() != m {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} representative for rank {m}",
                rep.rows(),
                rep.cols()
            )));
        }
        if rep
            .entries()
            .iter()
            .any(|e| e.shape() != (alg.dim(), alg.order()))
        {
            return Err(Error::ShapeMismatch(
                "representative entries in another algebra".into(),
            ));
        }
        let constant = rep.map(|e| e.constant_term().clone());
        if !constant.is_invertible(alg.field()) {
            return Err(Error::SingularMatrix);
        }
        Ok(FlagJet {
            shape,
            alg: alg.clone(),
            rep,
        })
    }

    /// The constant flag jet represented by a matrix over the field.
    pub fn constant(
        shape: FlagShape,
        alg: &Arc<WeilAlgebra<F>>,
        m: &Matrix<F::Elem>,
    ) -> Result<Self> {
        let rep = m.map(|x| TruncatedSeries::constant(alg, x.clone()));
        Self::new(shape, alg, rep)
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }
    pub fn algebra(&self) -> &Arc<WeilAlgebra<F>> {
        &self.alg
    }
    pub fn representative(&self) -> &Matrix<TruncatedSeries<F>> {
        &self.rep
    }
    pub fn ring(&self) -> SeriesRing<F> {
        SeriesRing(self.alg.clone())
    }

    /// The flag at the closed point.
    pub fn constant_part(&self) -> Matrix<F::Elem> {
        self.rep.map(|e| e.constant_term().clone())
    }

    /// True when the flag jet equals the constant jet at its closed point.
    pub fn is_constant(&self) -> bool {
        let c = FlagJet::constant(self.shape.clone(), &self.alg, &self.constant_part())
            .expect("constant part of an invertible matrix is invertible");
        flag_jet_equal(self, &c).unwrap()
    }

    /// `g · rep` for a constant matrix `g`.
    pub fn left_mul_constant(&self, g: &Matrix<F::Elem>) -> Result<Self> {
        let ring = self.ring();
        let gs = g.map(|x| TruncatedSeries::constant(&self.alg, x.clone()));
        Self::new(self.shape.clone(), &self.alg, gs.mul(&ring, &self.rep))
    }

    /// `rep · t` for a matrix over `A^d_r`.
    pub fn right_mul(&self, t: &Matrix<TruncatedSeries<F>>) -> Result<Self> {
        let ring = self.ring();
        Self::new(self.shape.clone(), &self.alg, self.rep.mul(&ring, t))
    }

    /// The order-`r` part of the jet, coefficient by coefficient: row `i`,
    /// column `j`, monomial `q`.
    pub fn coefficient_table(&self) -> Vec<(usize, usize, MultiIndex, F::Elem)> {
        let f = self.alg.field();
        let mut out = Vec::new();
        for i in 0..self.rep.rows() {
            for j in 0..self.rep.cols() {
                for (q, c) in self.rep.get(i, j).terms() {
                    if !f.is_zero(c) {
                        out.push((i, j, q.clone(), c.clone()));
                    }
                }
            }
        }
        out
    }
}

/// True iff `b⁻¹·a` is block-upper-triangular for the jump blocks, i.e. the
/// two representatives span the same `F^k` for every `k` over `A^d_r`.
pub fn flag_jet_equal<F: Field>(a: &FlagJet<F>, b: &FlagJet<F>) -> Result<bool> {
    if a.shape != b.shape || a.alg.dim() != b.alg.dim() || a.alg.order() != b.alg.order() {
        return Err(Error::ShapeMismatch(format!(
            "flag jets of shapes {} / {:?} and {} / {:?}",
            a.shape,
            (a.alg.dim(), a.alg.order()),
            b.shape,
            (b.alg.dim(), b.alg.order())
        )));
    }
    let ring = a.ring();
    let t = b.rep.inverse(&ring)?.mul(&ring, &a.rep);
    Ok(is_block_upper_triangular(&a.shape, &t))
}

/// Zero below the diagonal blocks: entry `(r, c)` vanishes whenever column `c`
/// has a higher filtration degree than row `r`.
pub fn is_block_upper_triangular<F: Field>(
    shape: &FlagShape,
    t: &Matrix<TruncatedSeries<F>>,
) -> bool {
    let deg = shape.degrees();
    (0..t.rows()).all(|r| (0..t.cols()).all(|c| deg[r] >= deg[c] || t.get(r, c).is_zero()))
}

/// A map between charts: rational functions, or truncated power series
/// centred at a point of the source chart.
#[derive(Clone, Debug)]
pub enum ChartMap<F: Field> {
    Rational(Vec<RationalFunction<F>>),
    Series {
        center: Vec<F::Elem>,
        components: Vec<TruncatedSeries<F>>,
    },
}

impl<F: Field> ChartMap<F> {
    fn source_dim(&self) -> usize {
        match self {
            ChartMap::Rational(g) => g.first().map_or(0, |c| c.nvars()),
            ChartMap::Series { center, .. } => center.len(),
        }
    }

    fn target_dim(&self) -> usize {
        match self {
            ChartMap::Rational(g) => g.len(),
            ChartMap::Series { components, .. } => components.len(),
        }
    }

    /// Each component re-expanded around `s` to the order of `alg`.
    fn shifted(&self, alg: &Arc<WeilAlgebra<F>>, s: &[F::Elem]) -> Result<Vec<TruncatedSeries<F>>> {
        match self {
            ChartMap::Rational(g) => g.iter().map(|c| c.taylor(alg, s)).collect(),
            ChartMap::Series { center, components } => {
                if center.as_slice() != s {
                    return Err(Error::BasepointMismatch);
                }
                components.iter().map(|c| c.change_order(alg)).collect()
            }
        }
    }
}

fn check_compose_dims<F: Field>(g: &ChartMap<F>, j: &Jet<F>) -> Result<()> {
    if g.source_dim() != j.target_dim() {
        return Err(Error::DimensionMismatch(format!(
            "map from a {}-dimensional chart applied to a jet into {} dimensions",
            g.source_dim(),
            j.target_dim()
        )));
    }
    Ok(())
}

/// `g ∘ j` by Taylor-shifting `g` to the basepoint of `j` and substituting.
pub fn jet_compose_map<F: Field>(g: &ChartMap<F>, j: &Jet<F>) -> Result<Jet<F>> {
    check_compose_dims(g, j)?;
    let n = j.target_dim();
    let outer_alg = WeilAlgebra::new(j.field().clone(), n, j.alg.order())?;
    let shifted = g.shifted(&outer_alg, j.basepoint())?;
    let inner = j.offsets();
    let coords = if n == 0 {
        shifted
            .iter()
            .map(|c| TruncatedSeries::constant(&j.alg, c.constant_term().clone()))
            .collect()
    } else {
        shifted
            .iter()
            .map(|c| series_substitute(c, &inner))
            .collect::<Result<Vec<_>>>()?
    };
    Jet::new(&j.alg, coords)
}

/// A term `coeff · (∂^α g)(j(t)) · Π (∂^β j_k)(t)` of a chain-rule expansion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ChainTerm {
    alpha: Vec<u32>,
    factors: Vec<(usize, Vec<u32>)>,
}

fn chain_derivative(
    terms: &BTreeMap<ChainTerm, u128>,
    i: usize,
    n: usize,
    d: usize,
) -> BTreeMap<ChainTerm, u128> {
    let mut out = BTreeMap::new();
    let mut push = |t: ChainTerm, c: u128| {
        *out.entry(t).or_insert(0) += c;
    };
    for (t, &c) in terms {
        for k in 0..n {
            let mut nt = t.clone();
            nt.alpha[k] += 1;
            let mut e = vec![0; d];
            e[i] = 1;
            nt.factors.push((k, e));
            nt.factors.sort();
            push(nt, c);
        }
        for f in 0..t.factors.len() {
            let mut nt = t.clone();
            nt.factors[f].1[i] += 1;
            nt.factors.sort();
            push(nt, c);
        }
    }
    out
}

/// `g ∘ j` through the explicit chain-rule expansion of `∂^q (g ∘ j)` in terms
/// of partial derivatives of `g` at the basepoint and of `j` at the origin.
pub fn jet_compose_map_chain_rule<F: Field>(g: &ChartMap<F>, j: &Jet<F>) -> Result<Jet<F>> {
    check_compose_dims(g, j)?;
    let field = j.field().clone();
    let (d, r) = j.shape();
    let n = j.target_dim();
    field.require_order(r)?;
    let s = j.basepoint().to_vec();

    let mut derivs: HashMap<(usize, Vec<u32>), F::Elem> = HashMap::new();
    let mut g_deriv = |c: usize, alpha: &[u32]| -> Result<F::Elem> {
        if let Some(v) = derivs.get(&(c, alpha.to_vec())) {
            return Ok(v.clone());
        }
        let v = match g {
            ChartMap::Rational(gs) => {
                let mut h = gs[c].clone();
                for (k, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        h = h.derivative(k);
                    }
                }
                h.eval(&s)?
            }
            ChartMap::Series { center, components } => {
                if *center != s {
                    return Err(Error::BasepointMismatch);
                }
                let mi = MultiIndex(alpha.to_vec());
                if mi.degree() > components[c].shape().1 {
                    return Err(Error::OrderMismatch(format!(
                        "map series of order {} used to order {}",
                        components[c].shape().1,
                        mi.degree()
                    )));
                }
                field.mul(&components[c].coeff(&mi), &field_factorial(&field, &mi))
            }
        };
        derivs.insert((c, alpha.to_vec()), v.clone());
        Ok(v)
    };
    let j_deriv = |k: usize, beta: &[u32]| -> F::Elem {
        let mi = MultiIndex(beta.to_vec());
        field.mul(&j.coords[k].coeff(&mi), &field_factorial(&field, &mi))
    };

    let monomials = j.alg.monomials().to_vec();
    let mut expansions: HashMap<MultiIndex, BTreeMap<ChainTerm, u128>> = HashMap::new();
    let mut base = BTreeMap::new();
    base.insert(
        ChainTerm {
            alpha: vec![0; n],
            factors: vec![],
        },
        1u128,
    );
    expansions.insert(MultiIndex::zero(d), base);
    for q in monomials.iter().skip(1) {
        let i = (0..d).rev().find(|&i| q.0[i] > 0).unwrap();
        let prev = q.checked_sub(&MultiIndex::unit(d, i)).unwrap();
        let next = chain_derivative(&expansions[&prev], i, n, d);
        expansions.insert(q.clone(), next);
    }

    let mut coords = Vec::with_capacity(g.target_dim());
    for c in 0..g.target_dim() {
        let mut coeffs = Vec::with_capacity(monomials.len());
        for q in &monomials {
            let mut acc = field.zero();
            for (t, &mult) in &expansions[q] {
                let mut v = field.mul(&field.from_int(mult as i64), &g_deriv(c, &t.alpha)?);
                for (k, beta) in &t.factors {
                    v = field.mul(&v, &j_deriv(*k, beta));
                }
                acc = field.add(&acc, &v);
            }
            coeffs.push(field.div(&acc, &field_factorial(&field, q))?);
        }
        coords.push(TruncatedSeries::from_coeffs(&j.alg, coeffs)?);
    }
    Jet::new(&j.alg, coords)
}

fn field_factorial<F: Field>(field: &F, q: &MultiIndex) -> F::Elem {
    q.0.iter().fold(field.one(), |acc, &e| {
        field.mul(&acc, &field.factorial(e as usize))
    })
}

/// Checks that `v` (series in `A^d_r` with zero constant terms) defines an
/// algebra map `A^{d′}_{r′} → A^d_r`, and returns the target algebra.
fn check_reparametrization<F: Field>(
    v: &[TruncatedSeries<F>],
    d_prime: usize,
    r_prime: usize,
) -> Result<Arc<WeilAlgebra<F>>> {
    if v.len() != d_prime {
        return Err(Error::ShapeMismatch(format!(
            "{} series for a reparametrization of a {d_prime}-dimensional jet",
            v.len()
        )));
    }
    let first = v
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty reparametrization".into()))?;
    let alg = first.algebra().clone();
    for s in v {
        if s.shape() != (alg.dim(), alg.order()) {
            return Err(Error::ShapeMismatch(
                "reparametrization series of mixed shapes".into(),
            ));
        }
        if !alg.field().is_zero(s.constant_term()) {
            return Err(Error::NonzeroConstantTerm);
        }
    }
    let r = alg.order();
    if r_prime > r {
        return Err(Error::OrderMismatch(format!(
            "source jet order {r_prime} exceeds target order {r}"
        )));
    }
    if r_prime < r {
        let lifted_alg = WeilAlgebra::new(alg.field().clone(), d_prime, r)?;
        for q in lifted_alg.monomials() {
            if q.degree() != r_prime + 1 {
                continue;
            }
            let mono = TruncatedSeries::from_terms(&lifted_alg, [(q.clone(), alg.field().one())])?;
            if !series_substitute(&mono, v)?.is_zero() {
                return Err(Error::OrderMismatch(format!(
                    "the map does not kill degree-{} monomials, so it does not factor through order {r_prime}",
                    r_prime + 1
                )));
            }
        }
    }
    Ok(alg)
}

fn precompose<F: Field>(
    s: &TruncatedSeries<F>,
    v: &[TruncatedSeries<F>],
    alg: &Arc<WeilAlgebra<F>>,
) -> Result<TruncatedSeries<F>> {
    let lifted = WeilAlgebra::new(alg.field().clone(), s.shape().0, alg.order())?;
    series_substitute(&s.change_order(&lifted)?, v)
}

/// The precomposition `j ∘ v` for `v: 𝔻^d_r → 𝔻^{d′}_{r′}` given as `d′`
/// series in `A^d_r`.
pub fn jet_reparametrize<F: Field>(v: &[TruncatedSeries<F>], j: &Jet<F>) -> Result<Jet<F>> {
    let (dp, rp) = j.shape();
    let alg = check_reparametrization(v, dp, rp)?;
    let coords = j
        .coords
        .iter()
        .map(|c| precompose(c, v, &alg))
        .collect::<Result<Vec<_>>>()?;
    Jet::new(&alg, coords)
}

/// The same precomposition applied to every entry of a flag-jet representative.
pub fn reparametrize_flagjet<F: Field>(
    v: &[TruncatedSeries<F>],
    fj: &FlagJet<F>,
) -> Result<FlagJet<F>> {
    let alg = check_reparametrization(v, fj.alg.dim(), fj.alg.order())?;
    let rep = fj.rep.try_map(|e| precompose(e, v, &alg))?;
    FlagJet::new(fj.shape.clone(), &alg, rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constancy {
    Constant,
    Nonconstant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    Degenerate,
    Nondegenerate,
}

/// Constant iff every positive-degree coefficient vanishes; nondegenerate iff
/// the `d` first-order coefficient vectors are independent (always true at
/// order 0).
pub fn jet_classify<F: Field>(j: &Jet<F>) -> (Constancy, Degeneracy) {
    let constancy = if j.coords.iter().all(|c| c.is_constant()) {
        Constancy::Constant
    } else {
        Constancy::Nonconstant
    };
    let (d, r) = j.shape();
    if r == 0 {
        return (constancy, Degeneracy::Nondegenerate);
    }
    let linear: Vec<Vec<F::Elem>> = (0..d)
        .map(|i| {
            j.coords
                .iter()
                .map(|c| c.coeff(&MultiIndex::unit(d, i)))
                .collect()
        })
        .collect();
    let independent = j.target_dim() > 0
        && Matrix::from_rows(linear)
            .map(|m| rank(j.field(), &m) == d)
            .unwrap_or(false);
    let degeneracy = if independent || d == 0 {
        Degeneracy::Nondegenerate
    } else {
        Degeneracy::Degenerate
    };
    (constancy, degeneracy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Polynomial, Rationals, Ring};

    fn q(n: i64) -> num_rational::BigRational {
        Rationals.from_int(n)
    }

    fn series(
        alg: &Arc<WeilAlgebra<Rationals>>,
        terms: &[(&[u32], i64)],
    ) -> TruncatedSeries<Rationals> {
        TruncatedSeries::from_terms(
            alg,
            terms.iter().map(|(e, c)| (MultiIndex(e.to_vec()), q(*c))),
        )
        .unwrap()
    }

    #[test]
    fn compose_square() {
        let alg = WeilAlgebra::new(Rationals, 1, 2).unwrap();
        let j = Jet::new(&alg, vec![series(&alg, &[(&[0], 1), (&[1], 1)])]).unwrap();
        let x = Polynomial::var(&Rationals, 1, 0);
        let g = ChartMap::Rational(vec![RationalFunction::from_poly(x.mul(&x))]);
        let want = series(&alg, &[(&[0], 1), (&[1], 2), (&[2], 1)]);
        assert_eq!(jet_compose_map(&g, &j).unwrap().coords()[0], want);
        assert_eq!(
            jet_compose_map_chain_rule(&g, &j).unwrap().coords()[0],
            want
        );
    }

    #[test]
    fn compose_product() {
        let alg = WeilAlgebra::new(Rationals, 2, 2).unwrap();
        let j = Jet::new(
            &alg,
            vec![series(&alg, &[(&[1, 0], 1)]), series(&alg, &[(&[0, 1], 1)])],
        )
        .unwrap();
        let xy = Polynomial::var(&Rationals, 2, 0).mul(&Polynomial::var(&Rationals, 2, 1));
        let g = ChartMap::Rational(vec![RationalFunction::from_poly(xy)]);
        let want = series(&alg, &[(&[1, 1], 1)]);
        assert_eq!(jet_compose_map(&g, &j).unwrap().coords()[0], want);
        assert_eq!(
            jet_compose_map_chain_rule(&g, &j).unwrap().coords()[0],
            want
        );
    }

    #[test]
    fn reparametrize_square() {
        let alg = WeilAlgebra::new(Rationals, 1, 2).unwrap();
        let j = Jet::new(&alg, vec![series(&alg, &[(&[0], 3), (&[1], 5), (&[2], 7)])]).unwrap();
        let v = vec![series(&alg, &[(&[2], 1)])];
        let out = jet_reparametrize(&v, &j).unwrap();
        assert_eq!(out.coords()[0], series(&alg, &[(&[0], 3), (&[2], 5)]));
        let zero = vec![TruncatedSeries::zero(&alg)];
        assert_eq!(
            jet_reparametrize(&zero, &j).unwrap(),
            Jet::constant(&alg, &[q(3)])
        );
    }

    #[test]
    fn reparametrize_checks() {
        let alg = WeilAlgebra::new(Rationals, 1, 2).unwrap();
        let j = Jet::new(&alg, vec![series(&alg, &[(&[1], 1)])]).unwrap();
        let bad = vec![series(&alg, &[(&[0], 1), (&[1], 1)])];
        assert_eq!(jet_reparametrize(&bad, &j), Err(Error::NonzeroConstantTerm));
        let low = WeilAlgebra::new(Rationals, 1, 1).unwrap();
        let j1 = Jet::new(&low, vec![series(&low, &[(&[1], 1)])]).unwrap();
        let t = vec![series(&alg, &[(&[1], 1)])];
        assert!(matches!(
            jet_reparametrize(&t, &j1),
            Err(Error::OrderMismatch(_))
        ));
        let t2 = vec![series(&alg, &[(&[2], 1)])];
        assert!(jet_reparametrize(&t2, &j1).is_ok());
    }

    #[test]
    fn classification() {
        let alg = WeilAlgebra::new(Rationals, 2, 2).unwrap();
        let c = Jet::constant(&alg, &[q(1), q(2)]);
        assert_eq!(
            jet_classify(&c),
            (Constancy::Constant, Degeneracy::Degenerate)
        );
        let nd = Jet::new(
            &alg,
            vec![series(&alg, &[(&[1, 0], 1)]), series(&alg, &[(&[0, 1], 1)])],
        )
        .unwrap();
        assert_eq!(
            jet_classify(&nd),
            (Constancy::Nonconstant, Degeneracy::Nondegenerate)
        );
        let dg = Jet::new(
            &alg,
            vec![
                series(&alg, &[(&[1, 0], 1), (&[0, 1], 2)]),
                TruncatedSeries::zero(&alg),
            ],
        )
        .unwrap();
        assert_eq!(
            jet_classify(&dg),
            (Constancy::Nonconstant, Degeneracy::Degenerate)
        );
        let zero_order = WeilAlgebra::new(Rationals, 2, 0).unwrap();
        let j0 = Jet::constant(&zero_order, &[q(1)]);
        assert_eq!(jet_classify(&j0).1, Degeneracy::Nondegenerate);
    }

    #[test]
    fn flag_shape_degrees() {
        let s = FlagShape::new(vec![1, 2, 1]).unwrap();
        assert_eq!(s.rank(), 4);
        assert_eq!(s.jump_indices(), vec![3, 1]);
        assert_eq!(s.degrees(), vec![2, 1, 1, 0]);
    }

    #[test]
    fn flag_jet_equality_examples() {
        let alg = WeilAlgebra::new(Rationals, 1, 1).unwrap();
        let shape = FlagShape::new(vec![1, 1]).unwrap();
        let id = Matrix::identity(&Rationals, 2);
        let a = FlagJet::constant(shape.clone(), &alg, &id).unwrap();
        let swap = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let b = FlagJet::constant(shape.clone(), &alg, &swap).unwrap();
        assert!(!flag_jet_equal(&a, &b).unwrap());
        let tri = Matrix::from_rows(vec![vec![q(2), q(5)], vec![q(0), q(3)]]).unwrap();
        let c = FlagJet::constant(shape.clone(), &alg, &id.mul(&Rationals, &tri)).unwrap();
        assert!(flag_jet_equal(&a, &c).unwrap());
        let ring = SeriesRing(alg.clone());
        let mut moving = Matrix::identity(&ring, 2);
        moving.set(1, 0, series(&alg, &[(&[1], 1)]));
        let d = FlagJet::new(shape, &alg, moving).unwrap();
        assert!(!flag_jet_equal(&d, &a).unwrap());
        assert!(!d.is_constant());
        assert!(a.is_constant());
    }
}

//! Flat connections on affine charts and their formal flat frames.
//!
//! With `C_ℓ = [c_{ij,ℓ}]`, a flat frame `f` satisfies `∂_ℓ f = −C_ℓᵀ f`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    Field, Matrix, MultiIndex, Polynomial, RationalFunction, SeriesRing, TruncatedSeries,
    WeilAlgebra,
};
use crate::error::{Error, Result};
use crate::flags::TensorIndex;
use crate::jets::FlagShape;

/// A tensor field on the chart, expected to be flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatTensor<F: Field> {
    pub index: TensorIndex,
    pub coeffs: Vec<RationalFunction<F>>,
    /// Name of the tensor set this tensor belongs to, if any.
    pub set: Option<String>,
}

/// A filtered rank-`m` bundle with connection on a chart with coordinates
/// `z_1, …, z_n`, trivialized by a filtration-compatible frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionChart<F: Field> {
    field: F,
    coords: Vec<String>,
    shape: FlagShape,
    connection: Vec<Matrix<RationalFunction<F>>>,
    polarization: Option<Matrix<F::Elem>>,
    flat_tensors: Vec<FlatTensor<F>>,
    flat: FlatnessCache<F>,
}

/// Memoized curvature verdict; ignored by equality.
#[derive(Clone, Debug)]
struct FlatnessCache<F: Field>(OnceLock<Curvature<F>>);

impl<F: Field> Default for FlatnessCache<F> {
    fn default() -> Self {
        FlatnessCache(OnceLock::new())
    }
}

impl<F: Field> PartialEq for FlatnessCache<F> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<F: Field> Eq for FlatnessCache<F> {}

impl<F: Field> ConnectionChart<F> {
    /// `connection[ℓ]` is the matrix `C_ℓ` with entries `c_{ij,ℓ}`.
    pub fn new(
        field: F,
        coords: Vec<String>,
        shape: FlagShape,
        connection: Vec<Matrix<RationalFunction<F>>>,
    ) -> Result<Self> {
        let n = coords.len();
        let m = shape.rank();
        if connection.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} connection matrices for {n} coordinates",
                connection.len()
            )));
        }
        for c in &connection {
            if c.rows() != m || c.cols() != m {
                return Err(Error::DimensionMismatch(format!(
                    "{}x{} connection matrix for rank {m}",
                    c.rows(),
                    c.cols()
                )));
            }
            if c.entries().iter().any(|e| e.nvars() != n) {
                return Err(Error::DimensionMismatch(
                    "connection entry in the wrong number of variables".into(),
                ));
            }
        }
        Ok(ConnectionChart {
            field,
            coords,
            shape,
            connection,
            polarization: None,
            flat_tensors: Vec::new(),
            flat: FlatnessCache::default(),
        })
    }

    /// The connection with every `c_{ij,ℓ} = 0`.
    pub fn trivial(field: F, coords: Vec<String>, shape: FlagShape) -> Self {
        let n = coords.len();
        let m = shape.rank();
        let zero = Matrix::filled(m, m, RationalFunction::zero(&field, n));
        ConnectionChart {
            field,
            coords,
            shape,
            connection: vec![zero; n],
            polarization: None,
            flat_tensors: Vec::new(),
            flat: FlatnessCache::default(),
        }
    }

    pub fn with_polarization(mut self, q: Matrix<F::Elem>) -> Result<Self> {
        let m = self.rank();
        if q.rows() != m || q.cols() != m {
            return Err(Error::DimensionMismatch(
                "polarization of the wrong size".into(),
            ));
        }
        self.polarization = Some(q);
        Ok(self)
    }

    pub fn with_flat_tensor(mut self, t: FlatTensor<F>) -> Result<Self> {
        if t.coeffs.len() != t.index.ambient_dim(self.rank()) {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a tensor in V^{}",
                t.coeffs.len(),
                t.index
            )));
        }
        self.flat_tensors.push(t);
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn coords(&self) -> &[String] {
        &self.coords
    }
    pub fn n(&self) -> usize {
        self.coords.len()
    }
    pub fn rank(&self) -> usize {
        self.shape.rank()
    }
    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }
    /// `C_ℓ` for each coordinate.
    pub fn connection(&self) -> &[Matrix<RationalFunction<F>>] {
        &self.connection
    }
    pub fn polarization(&self) -> Option<&Matrix<F::Elem>> {
        self.polarization.as_ref()
    }
    pub fn flat_tensors(&self) -> &[FlatTensor<F>] {
        &self.flat_tensors
    }

    /// `c_{ij,ℓ}` with 0-based indices.
    pub fn entry(&self, i: usize, j: usize, l: usize) -> &RationalFunction<F> {
        self.connection[l].get(i, j)
    }

    /// `A_ℓ = −C_ℓᵀ`.
    pub fn system_matrix(&self, l: usize) -> Matrix<RationalFunction<F>> {
        self.connection[l].transpose().map(RationalFunction::neg)
    }

    /// `A_ℓ` expanded at `s` in the algebra `alg`.
    pub fn system_taylor(
        &self,
        alg: &Arc<WeilAlgebra<F>>,
        s: &[F::Elem],
    ) -> Result<Vec<Matrix<TruncatedSeries<F>>>> {
        self.check_point(s)?;
        (0..self.n())
            .map(|l| self.system_matrix(l).try_map(|e| e.taylor(alg, s)))
            .collect()
    }

    pub fn check_point(&self, s: &[F::Elem]) -> Result<()> {
        if s.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "point with {} coordinates on a chart with {}",
                s.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// Replaces every entry by `h(entry)`, e.g. a reduction modulo `p`.
    pub fn map_entries<G: Field>(
        &self,
        field: G,
        mut h: impl FnMut(&RationalFunction<F>) -> Result<RationalFunction<G>>,
        mut scalar: impl FnMut(&F::Elem) -> Result<G::Elem>,
    ) -> Result<ConnectionChart<G>> {
        let connection = self
            .connection
            .iter()
            .map(|c| c.try_map(&mut h))
            .collect::<Result<Vec<_>>>()?;
        let mut out =
            ConnectionChart::new(field, self.coords.clone(), self.shape.clone(), connection)?;
        if let Some(q) = &self.polarization {
            out = out.with_polarization(q.try_map(&mut scalar)?)?;
        }
        for t in &self.flat_tensors {
            out = out.with_flat_tensor(FlatTensor {
                index: t.index,
                coeffs: t.coeffs.iter().map(&mut h).collect::<Result<_>>()?,
                set: t.set.clone(),
            })?;
        }
        Ok(out)
    }
}

/// Outcome of the curvature test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curvature<F: Field> {
    Flat,
    /// A nonzero curvature entry; indices are 0-based.
    Witness {
        l1: usize,
        l2: usize,
        row: usize,
        col: usize,
        value: RationalFunction<F>,
    },
}

impl<F: Field> Curvature<F> {
    pub fn is_flat(&self) -> bool {
        matches!(self, Curvature::Flat)
    }
}

/// The curvature matrix `C_{ℓ₂}C_{ℓ₁} − C_{ℓ₁}C_{ℓ₂} + ∂_{ℓ₁}C_{ℓ₂} − ∂_{ℓ₂}C_{ℓ₁}`.
pub fn curvature_matrix<F: Field>(
    chart: &ConnectionChart<F>,
    l1: usize,
    l2: usize,
) -> Matrix<RationalFunction<F>> {
    let m = chart.rank();
    let c1 = &chart.connection[l1];
    let c2 = &chart.connection[l2];
    Matrix::from_fn(m, m, |ip, j| {
        let mut acc = c2
            .get(ip, j)
            .derivative(l1)
            .sub(&c1.get(ip, j).derivative(l2));
        for i in 0..m {
            let t = c2
                .get(ip, i)
                .mul(c1.get(i, j))
                .sub(&c1.get(ip, i).mul(c2.get(i, j)));
            acc = acc.add(&t);
        }
        acc
    })
}

/// Flatness over the common denominator `D` of all entries: with `C_ℓ = P_ℓ/D`
/// the curvature times `D²` is the polynomial matrix
/// `P₂P₁ − P₁P₂ + D(∂₁P₂ − ∂₂P₁) − (∂₁D)P₂ + (∂₂D)P₁`.
pub fn curvature_is_flat<F: Field>(chart: &ConnectionChart<F>) -> Curvature<F> {
    chart
        .flat
        .0
        .get_or_init(|| compute_curvature(chart))
        .clone()
}

fn compute_curvature<F: Field>(chart: &ConnectionChart<F>) -> Curvature<F> {
    let n = chart.n();
    let m = chart.rank();
    if n < 2 {
        return Curvature::Flat;
    }
    let field = chart.field();
    let mut dens: Vec<&Polynomial<F>> = Vec::new();
    for c in &chart.connection {
        for e in c.entries() {
            if !dens.contains(&e.denom()) {
                dens.push(e.denom());
            }
        }
    }
    let d = dens.iter().fold(Polynomial::one(field, n), |acc, den| {
        let g = acc.gcd(den);
        acc.mul(&den.exact_div(&g).expect("gcd divides"))
    });
    let p: Vec<Matrix<Polynomial<F>>> = chart
        .connection
        .iter()
        .map(|c| {
            c.map(|e| {
                e.numer()
                    .mul(&d.exact_div(e.denom()).expect("denominator divides D"))
            })
        })
        .collect();
    let dd: Vec<Polynomial<F>> = (0..n).map(|l| d.derivative(l)).collect();
    for l1 in 0..n {
        for l2 in l1 + 1..n {
            let (p1, p2) = (&p[l1], &p[l2]);
            for row in 0..m {
                for col in 0..m {
                    let mut acc = d
                        .mul(
                            &p2.get(row, col)
                                .derivative(l1)
                                .sub(&p1.get(row, col).derivative(l2)),
                        )
                        .sub(&dd[l1].mul(p2.get(row, col)))
                        .add(&dd[l2].mul(p1.get(row, col)));
                    for i in 0..m {
                        acc = acc
                            .add(&p2.get(row, i).mul(p1.get(i, col)))
                            .sub(&p1.get(row, i).mul(p2.get(i, col)));
                    }
                    if !acc.is_zero() {
                        let value = RationalFunction::new(acc, d.mul(&d)).expect("D is nonzero");
                        return Curvature::Witness {
                            l1,
                            l2,
                            row,
                            col,
                            value,
                        };
                    }
                }
            }
        }
    }
    Curvature::Flat
}

fn require_flat<F: Field>(chart: &ConnectionChart<F>) -> Result<()> {
    match curvature_is_flat(chart) {
        Curvature::Flat => Ok(()),
        Curvature::Witness {
            l1,
            l2,
            row,
            col,
            value,
        } => Err(Error::NotFlat {
            l1: l1 + 1,
            l2: l2 + 1,
            row: row + 1,
            col: col + 1,
            value: value.format_with(chart.coords()),
        }),
    }
}

/// Which coordinate is differentiated last when computing `∂^q f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeOrder {
    LastNonzero,
    FirstNonzero,
    /// A seeded random choice for every multi-index.
    Random(u64),
}

/// Values `ξ_q = ∂^q f(s)` for every `|q| ≤ r`, by the evaluated recursion
/// `∂^q f = Σ_{a ≤ q′} binom(q′, a) ∂^a A_ℓ(s) ∂^{q′−a} f(s)` with `q = q′ + e_ℓ`.
fn xi_table<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
    f0: &Matrix<F::Elem>,
    r: usize,
    order: DerivativeOrder,
) -> Result<(Arc<WeilAlgebra<F>>, HashMap<MultiIndex, Matrix<F::Elem>>)> {
    let field = chart.field();
    chart.check_point(s)?;
    if f0.rows() != chart.rank() || f0.cols() != chart.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} frame for rank {}",
            f0.rows(),
            f0.cols(),
            chart.rank()
        )));
    }
    field.require_order(r)?;
    require_flat(chart)?;
    let n = chart.n();
    let alg = WeilAlgebra::new(field.clone(), n, r)?;
    let lower = WeilAlgebra::new(field.clone(), n, r.saturating_sub(1))?;
    let taylor = chart.system_taylor(&lower, s)?;
    // ∂^a A_ℓ(s) = a! · (Taylor coefficient).
    let d_a: Vec<HashMap<MultiIndex, Matrix<F::Elem>>> = taylor
        .iter()
        .map(|a| {
            lower
                .monomials()
                .iter()
                .map(|q| {
                    let fact = q.0.iter().fold(field.one(), |acc, &e| {
                        field.mul(&acc, &field.factorial(e as usize))
                    });
                    (q.clone(), a.map(|x| field.mul(&x.coeff(q), &fact)))
                })
                .collect()
        })
        .collect();
    let mut rng = match order {
        DerivativeOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut values: HashMap<MultiIndex, Matrix<F::Elem>> = HashMap::new();
    values.insert(MultiIndex::zero(n), f0.clone());
    for q in alg.monomials().iter().skip(1) {
        let nonzero: Vec<usize> = (0..n).filter(|&l| q.0[l] > 0).collect();
        let l = match order {
            DerivativeOrder::LastNonzero => *nonzero.last().unwrap(),
            DerivativeOrder::FirstNonzero => nonzero[0],
            DerivativeOrder::Random(_) => {
                nonzero[rng.as_mut().unwrap().random_range(0..nonzero.len())]
            }
        };
        let qp = q.checked_sub(&MultiIndex::unit(n, l)).unwrap();
        let mut acc = Matrix::zeros(field, chart.rank(), chart.rank());
        for a in qp.divisors() {
            let rest = qp.checked_sub(&a).unwrap();
            let binom = field.from_int(qp.binomial(&a) as i64);
            let term = d_a[l][&a].mul(field, &values[&rest]).scale(field, &binom);
            acc = acc.add(field, &term);
        }
        values.insert(q.clone(), acc);
    }
    Ok((alg, values))
}

/// `∂^q f(s)` for the formal flat frame with `f(s) = f₀`.
pub fn xi_eval<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
    f0: &Matrix<F::Elem>,
    q: &MultiIndex,
) -> Result<Matrix<F::Elem>> {
    xi_eval_with(chart, s, f0, q, DerivativeOrder::LastNonzero)
}

pub fn xi_eval_with<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
    f0: &Matrix<F::Elem>,
    q: &MultiIndex,
    order: DerivativeOrder,
) -> Result<Matrix<F::Elem>> {
    if q.dim() != chart.n() {
        return Err(Error::DimensionMismatch(format!(
            "multi-index {q} on a chart with {} coordinates",
            chart.n()
        )));
    }
    let (_, mut values) = xi_table(chart, s, f0, q.degree(), order)?;
    Ok(values.remove(q).unwrap())
}

/// The formal flat frame `f` at `s` with `f(s) = f₀`, truncated at order `r`.
#[derive(Clone, Debug)]
pub struct FramedLimp<F: Field> {
    pub chart: Arc<ConnectionChart<F>>,
    pub basepoint: Vec<F::Elem>,
    pub initial_frame: Matrix<F::Elem>,
    pub order: usize,
    pub alg: Arc<WeilAlgebra<F>>,
    /// Entries are series in `z − s`.
    pub frame: Matrix<TruncatedSeries<F>>,
}

impl<F: Field> FramedLimp<F> {
    /// `M = f⁻¹`, the change of basis from the chart frame to the flat frame.
    pub fn inverse_frame(&self) -> Result<Matrix<TruncatedSeries<F>>> {
        self.frame.inverse(&SeriesRing(self.alg.clone()))
    }
}

pub fn solve_limp<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
    f0: &Matrix<F::Elem>,
    r: usize,
) -> Result<FramedLimp<F>> {
    solve_limp_with(chart, s, f0, r, DerivativeOrder::LastNonzero)
}

pub fn solve_limp_with<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
    f0: &Matrix<F::Elem>,
    r: usize,
    order: DerivativeOrder,
) -> Result<FramedLimp<F>> {
    let field = chart.field();
    if f0.is_square() && f0.rows() == chart.rank() && !f0.is_invertible(field) {
        return Err(Error::SingularFrame);
    }
    let (alg, values) = xi_table(chart, s, f0, r, order)?;
    let m = chart.rank();
    let frame = Matrix::from_fn(m, m, |i, j| {
        let coeffs = alg
            .monomials()
            .iter()
            .map(|q| {
                let fact = q.0.iter().fold(field.one(), |acc, &e| {
                    field.mul(&acc, &field.factorial(e as usize))
                });
                field.div(values[q].get(i, j), &fact).unwrap()
            })
            .collect();
        TruncatedSeries::from_coeffs(&alg, coeffs).unwrap()
    });
    Ok(FramedLimp {
        chart: Arc::new(chart.clone()),
        basepoint: s.to_vec(),
        initial_frame: f0.clone(),
        order: r,
        alg,
        frame,
    })
}

/// Outcome of checking `∂_ℓ f = −C_ℓᵀ f` to order `r − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameCheck {
    Ok,
    /// First failing coordinate, matrix entry and monomial; indices 0-based.
    Failure {
        coordinate: usize,
        row: usize,
        col: usize,
        monomial: MultiIndex,
    },
}

impl fmt::Display for FrameCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameCheck::Ok => write!(f, "ok"),
            FrameCheck::Failure {
                coordinate,
                row,
                col,
                monomial,
            } => write!(
                f,
                "fails in coordinate {} at entry ({},{}) for monomial {}",
                coordinate + 1,
                row + 1,
                col + 1,
                monomial
            ),
        }
    }
}

pub fn verify_flat_frame<F: Field>(limp: &FramedLimp<F>) -> Result<FrameCheck> {
    let chart = &limp.chart;
    let ring = SeriesRing(limp.alg.clone());
    let a = chart.system_taylor(&limp.alg, &limp.basepoint)?;
    let top = limp.order.saturating_sub(1);
    for (l, al) in a.iter().enumerate() {
        let rhs = al.mul(&ring, &limp.frame);
        for i in 0..chart.rank() {
            for j in 0..chart.rank() {
                let lhs = limp.frame.get(i, j).derivative(l);
                let r = rhs.get(i, j);
                for (q, c) in lhs.terms() {
                    if q.degree() > top || limp.order == 0 {
                        continue;
                    }
                    if *c != r.coeff(q) {
                        return Ok(FrameCheck::Failure {
                            coordinate: l,
                            row: i,
                            col: j,
                            monomial: q.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(FrameCheck::Ok)
}

/// The pullback along a rational map `g` from a chart with coordinates
/// `new_coords`: `C′_ℓ = Σ_k (∂g_k/∂z′_ℓ) · (C_k ∘ g)`.
pub fn pullback<F: Field>(
    chart: &ConnectionChart<F>,
    g: &[RationalFunction<F>],
    new_coords: Vec<String>,
) -> Result<ConnectionChart<F>> {
    if g.len() != chart.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} map components for a chart with {} coordinates",
            g.len(),
            chart.n()
        )));
    }
    let np = new_coords.len();
    if g.iter().any(|c| c.nvars() != np) {
        return Err(Error::DimensionMismatch(
            "map components in the wrong variables".into(),
        ));
    }
    let field = chart.field().clone();
    let m = chart.rank();
    let composed: Vec<Matrix<RationalFunction<F>>> = chart
        .connection
        .iter()
        .map(|c| c.try_map(|e| e.compose(g)))
        .collect::<Result<_>>()?;
    let connection = (0..np)
        .map(|l| {
            let mut acc = Matrix::filled(m, m, RationalFunction::zero(&field, np));
            for (k, ck) in composed.iter().enumerate() {
                let dg = g[k].derivative(l);
                if dg.is_zero() {
                    continue;
                }
                acc = Matrix::from_fn(m, m, |i, j| acc.get(i, j).add(&dg.mul(ck.get(i, j))));
            }
            acc
        })
        .collect();
    let mut out = ConnectionChart::new(field, new_coords, chart.shape.clone(), connection)?;
    out.polarization = chart.polarization.clone();
    for t in &chart.flat_tensors {
        out.flat_tensors.push(FlatTensor {
            index: t.index,
            coeffs: t
                .coeffs
                .iter()
                .map(|c| c.compose(g))
                .collect::<Result<_>>()?,
            set: t.set.clone(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_rational_function, Rationals, Ring};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        Rationals.from_int(n)
    }

    fn chart(
        names: &[&str],
        m: usize,
        entries: &[(usize, usize, usize, &str)],
    ) -> ConnectionChart<Rationals> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let shape = FlagShape::new(vec![m - m / 2, m / 2]).unwrap();
        let n = names.len();
        let mut conn = vec![Matrix::filled(m, m, RationalFunction::zero(&Rationals, n)); n];
        for &(i, j, l, e) in entries {
            conn[l].set(i, j, parse_rational_function(e, &names).unwrap());
        }
        ConnectionChart::new(Rationals, names, shape, conn).unwrap()
    }

    #[test]
    fn curvature_witness() {
        let c = chart(&["x", "y"], 2, &[(0, 1, 0, "1"), (0, 1, 1, "x")]);
        match curvature_is_flat(&c) {
            Curvature::Witness {
                l1,
                l2,
                row,
                col,
                value,
            } => {
                assert_eq!((l1, l2, row, col), (0, 1, 0, 1));
                assert_eq!(value.as_constant(), Some(q(1)));
            }
            Curvature::Flat => panic!("expected curvature"),
        }
        assert!(matches!(
            solve_limp(&c, &[q(0), q(0)], &Matrix::identity(&Rationals, 2), 2),
            Err(Error::NotFlat { .. })
        ));
    }

    #[test]
    fn rank_one_recursion() {
        // c = g dz with g = 1/(1 - z): ξ₁ = −g(s), ξ₂ = g(s)² − g′(s)
        let c = chart(&["z"], 1, &[(0, 0, 0, "1/(1-z)")]);
        let s = [q(3)];
        let f0 = Matrix::identity(&Rationals, 1);
        let g = BigRational::new((-1).into(), 2.into());
        let gp = BigRational::new(1.into(), 4.into());
        let x1 = xi_eval(&c, &s, &f0, &MultiIndex(vec![1])).unwrap();
        assert_eq!(x1.get(0, 0), &-g.clone());
        let x2 = xi_eval(&c, &s, &f0, &MultiIndex(vec![2])).unwrap();
        assert_eq!(x2.get(0, 0), &(&g * &g - gp));
    }

    #[test]
    fn nilpotent_frame() {
        let c = chart(&["z"], 2, &[(0, 1, 0, "1")]);
        let limp = solve_limp(&c, &[q(0)], &Matrix::identity(&Rationals, 2), 3).unwrap();
        let t = TruncatedSeries::variable(&limp.alg, 0);
        assert_eq!(limp.frame.get(1, 0), &t.neg());
        assert!(limp.frame.get(0, 1).is_zero());
        assert_eq!(verify_flat_frame(&limp).unwrap(), FrameCheck::Ok);
    }

    #[test]
    fn perturbed_frame_fails() {
        let c = chart(&["z"], 2, &[(0, 1, 0, "z"), (1, 0, 0, "1")]);
        let mut limp = solve_limp(&c, &[q(1)], &Matrix::identity(&Rationals, 2), 3).unwrap();
        let mut e = limp.frame.get(0, 0).clone();
        let k = MultiIndex(vec![2]);
        e.set_coeff(&k, Rationals.add(&e.coeff(&k), &q(1)));
        limp.frame.set(0, 0, e);
        assert!(matches!(
            verify_flat_frame(&limp).unwrap(),
            FrameCheck::Failure { .. }
        ));
    }

    #[test]
    fn singular_frame_rejected() {
        let c = chart(&["z"], 2, &[]);
        let f0 = Matrix::filled(2, 2, q(1));
        assert!(matches!(
            solve_limp(&c, &[q(0)], &f0, 1),
            Err(Error::SingularFrame)
        ));
    }
}

//! Seeded random instances: flat charts built as gauge transforms of the
//! trivial connection, jets, polynomial maps, and polarized conjugate pairs
//! carrying Hodge tensors.

use num_rational::BigRational;
use rand::Rng;

use crate::algebra::{
    Field, Matrix, Polynomial, RationalFunction, Rationals, Ring, TruncatedSeries, WeilAlgebra,
};
use crate::connection::{ConnectionChart, FlatTensor};
use crate::error::Result;
use crate::flags::{conjugate_decomposition, flag_from_matrix, ConjugatePair, Tensor};
use crate::jets::{FlagShape, Jet};

pub fn coordinate_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// A flat chart together with a gauge `G` whose columns form a flat frame.
#[derive(Clone, Debug)]
pub struct GaugeChart {
    pub chart: ConnectionChart<Rationals>,
    /// `∂_ℓ G = A_ℓ G` with `A_ℓ = −C_ℓᵀ`.
    pub gauge: Matrix<RationalFunction<Rationals>>,
    /// A point where every entry is regular and `G` is invertible, also
    /// modulo each avoided prime.
    pub basepoint: Vec<BigRational>,
}

fn small_affine(rng: &mut impl Rng, n: usize, density: f64) -> Polynomial<Rationals> {
    let q = Rationals;
    let mut p = Polynomial::constant(&q, n, q.from_int(rng.random_range(-2..=2)));
    for l in 0..n {
        if rng.random_bool(density) {
            let c = q.from_int(rng.random_range(-2..=2));
            p = p.add(&Polynomial::var(&q, n, l).scale(&c));
        }
    }
    p
}

pub fn random_shape(rng: &mut impl Rng, m: usize, max_weight: u32) -> FlagShape {
    let w = rng.random_range(1..=max_weight.max(1)) as usize;
    let mut h = vec![0usize; w + 1];
    for i in 0..m {
        let slot = if i < (w + 1).min(m) {
            i
        } else {
            rng.random_range(0..=w)
        };
        h[slot] += 1;
    }
    if h.iter().skip(1).all(|&x| x == 0) {
        h[w] += 1;
        h[0] -= 1;
    }
    while h.len() > 1 && *h.last().unwrap() == 0 {
        h.pop();
    }
    FlagShape::new(h).unwrap()
}

/// `G = L·U·D` with `L`, `U` unipotent affine and `D = diag(1 + c_i z_{l_i})`;
/// the chart is `C_ℓ = −((∂_ℓ G) G⁻¹)ᵀ`.
pub fn random_flat_chart(
    rng: &mut impl Rng,
    n: usize,
    shape: &FlagShape,
    avoid_primes: &[u64],
) -> GaugeChart {
    let q = Rationals;
    let m = shape.rank();
    let density = 0.6;
    let zero = Polynomial::zero(&q, n);
    let one = Polynomial::one(&q, n);
    let lower = Matrix::from_fn(m, m, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => one.clone(),
        std::cmp::Ordering::Greater => small_affine(rng, n, density),
        std::cmp::Ordering::Less => zero.clone(),
    });
    let upper = Matrix::from_fn(m, m, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => one.clone(),
        std::cmp::Ordering::Less => small_affine(rng, n, density),
        std::cmp::Ordering::Greater => zero.clone(),
    });
    let mut diag = vec![one.clone(); m];
    let mut factors = Vec::new();
    for d in diag.iter_mut() {
        if n > 0 && rng.random_bool(0.4) {
            let l = rng.random_range(0..n);
            let c = [1i64, -1, 2][rng.random_range(0..3)];
            *d = one.add(&Polynomial::var(&q, n, l).scale(&q.from_int(c)));
            factors.push((l, c));
        }
    }
    let lu = poly_mat_mul(&lower, &upper);
    let gauge_poly = Matrix::from_fn(m, m, |i, j| lu.get(i, j).mul(&diag[j]));
    // G⁻¹ = D⁻¹ · U⁻¹ · L⁻¹ with polynomial unipotent inverses.
    let core_inv = poly_mat_mul(&unipotent_inverse(&upper), &unipotent_inverse(&lower));
    let cofactor: Vec<Polynomial<Rationals>> = (0..m)
        .map(|j| {
            (0..m)
                .filter(|&k| k != j)
                .fold(one.clone(), |acc, k| acc.mul(&diag[k]))
        })
        .collect();
    let connection = (0..n)
        .map(|l| {
            let dg = gauge_poly.map(|e| e.derivative(l));
            Matrix::from_fn(m, m, |i, k| {
                let num = (0..m).fold(zero.clone(), |acc, j| {
                    acc.add(&dg.get(i, j).mul(&cofactor[j]).mul(core_inv.get(j, k)))
                });
                // cancel the linear factors of Δ that divide the numerator
                let mut num = num.neg();
                let mut den = one.clone();
                for d in diag.iter().filter(|d| d.as_constant().is_none()) {
                    match num.exact_div(d) {
                        Some(q) => num = q,
                        None => den = den.mul(d),
                    }
                }
                RationalFunction::new(num, den).expect("nonzero denominator")
            })
            .transpose()
        })
        .collect();
    let chart = ConnectionChart::new(q, coordinate_names(n), shape.clone(), connection).unwrap();
    let gauge = gauge_poly.map(|e| RationalFunction::from_poly(e.clone()));
    let basepoint = loop {
        let s: Vec<BigRational> = (0..n)
            .map(|_| q.from_int(rng.random_range(-3..=3)))
            .collect();
        let ok = factors.iter().all(|&(l, c)| {
            let v = 1 + c * s[l].to_integer().try_into().unwrap_or(0i64);
            v != 0 && avoid_primes.iter().all(|&p| v.rem_euclid(p as i64) != 0)
        });
        if ok {
            break s;
        }
    };
    GaugeChart {
        chart,
        gauge,
        basepoint,
    }
}

fn poly_mat_mul<F: Field>(
    a: &Matrix<Polynomial<F>>,
    b: &Matrix<Polynomial<F>>,
) -> Matrix<Polynomial<F>> {
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (1..a.cols()).fold(a.get(i, 0).mul(b.get(0, j)), |acc, k| {
            acc.add(&a.get(i, k).mul(b.get(k, j)))
        })
    })
}

/// `(I + N)⁻¹ = Σ_k (−N)^k` for strictly triangular `N`.
fn unipotent_inverse<F: Field>(u: &Matrix<Polynomial<F>>) -> Matrix<Polynomial<F>> {
    let m = u.rows();
    let field = u.get(0, 0).field().clone();
    let nvars = u.get(0, 0).nvars();
    let id = Matrix::from_fn(m, m, |i, j| {
        if i == j {
            Polynomial::one(&field, nvars)
        } else {
            Polynomial::zero(&field, nvars)
        }
    });
    let neg_n = Matrix::from_fn(m, m, |i, j| {
        if i == j {
            Polynomial::zero(&field, nvars)
        } else {
            u.get(i, j).neg()
        }
    });
    let mut acc = id.clone();
    let mut power = id;
    for _ in 1..m {
        power = poly_mat_mul(&power, &neg_n);
        acc = Matrix::from_fn(m, m, |i, j| acc.get(i, j).add(power.get(i, j)));
    }
    acc
}

/// An invertible matrix with entries in `[-3, 3]`.
pub fn random_invertible<F: Field>(rng: &mut impl Rng, field: &F, m: usize) -> Matrix<F::Elem> {
    loop {
        let g = Matrix::from_fn(m, m, |_, _| field.from_int(rng.random_range(-3..=3)));
        if g.is_invertible(field) {
            return g;
        }
    }
}

/// `s + (polynomial without constant term)` with small integer coefficients.
pub fn random_jet<F: Field>(
    rng: &mut impl Rng,
    alg: &std::sync::Arc<WeilAlgebra<F>>,
    basepoint: &[F::Elem],
) -> Jet<F> {
    let coords = basepoint
        .iter()
        .map(|c| {
            let mut s = random_series_without_constant(rng, alg);
            s = s
                .try_add(&TruncatedSeries::constant(alg, c.clone()))
                .unwrap();
            s
        })
        .collect();
    Jet::new(alg, coords).unwrap()
}

pub fn random_series_without_constant<F: Field>(
    rng: &mut impl Rng,
    alg: &std::sync::Arc<WeilAlgebra<F>>,
) -> TruncatedSeries<F> {
    let field = alg.field();
    let terms = alg
        .monomials()
        .iter()
        .skip(1)
        .map(|q| {
            let c = if rng.random_bool(0.7) {
                rng.random_range(-3..=3)
            } else {
                0
            };
            (q.clone(), field.from_int(c))
        })
        .collect::<Vec<_>>();
    TruncatedSeries::from_terms(alg, terms).expect("monomials of the algebra")
}

/// Components `g_k = t_k + Σ (affine and quadratic terms in y − y₀)` with
/// `g(y₀) = t`.
pub fn random_polynomial_map<F: Field>(
    rng: &mut impl Rng,
    field: &F,
    source: &[F::Elem],
    target: &[F::Elem],
) -> Vec<RationalFunction<F>> {
    let n = source.len();
    let shifted: Vec<Polynomial<F>> = (0..n)
        .map(|i| {
            Polynomial::var(field, n, i).sub(&Polynomial::constant(field, n, source[i].clone()))
        })
        .collect();
    target
        .iter()
        .map(|t| {
            let mut p = Polynomial::constant(field, n, t.clone());
            for (i, yi) in shifted.iter().enumerate() {
                let c = field.from_int(rng.random_range(-2..=2));
                p = p.add(&yi.scale(&c));
                for yj in &shifted[i..] {
                    if rng.random_bool(0.3) {
                        let c = field.from_int(rng.random_range(-2..=2));
                        p = p.add(&yi.mul(yj).scale(&c));
                    }
                }
            }
            RationalFunction::from_poly(p)
        })
        .collect()
}

/// A chart with constant connection `C_ℓ = a_ℓ Nᵀ`, flat for every `N`, with
/// the given tensors attached as flat tensors.
pub fn constant_chart<F: Field>(
    field: &F,
    shape: &FlagShape,
    n: usize,
    nilpotent: &Matrix<F::Elem>,
    scalars: &[i64],
    tensors: &[Tensor<F::Elem>],
) -> Result<ConnectionChart<F>> {
    let connection = scalars
        .iter()
        .map(|&a| {
            nilpotent
                .transpose()
                .scale(field, &field.from_int(a))
                .map(|x| RationalFunction::constant(field, n, x.clone()))
        })
        .collect();
    let mut chart = ConnectionChart::new(
        field.clone(),
        coordinate_names(n),
        shape.clone(),
        connection,
    )?;
    for t in tensors {
        chart = chart.with_flat_tensor(FlatTensor {
            index: t.index,
            coeffs: t
                .coeffs
                .iter()
                .map(|c| RationalFunction::constant(field, n, c.clone()))
                .collect(),
            set: None,
        })?;
    }
    Ok(chart)
}

/// A Hodge-symmetric shape: `h^p = h^{w−p}`.
pub fn random_symmetric_shape(rng: &mut impl Rng, max_rank: usize, max_weight: u32) -> FlagShape {
    loop {
        let w = rng.random_range(1..=max_weight) as usize;
        let mut h = vec![0usize; w + 1];
        for p in 0..=w / 2 {
            let x = rng.random_range(0..=2);
            h[p] = x;
            h[w - p] = x;
        }
        let m: usize = h.iter().sum();
        if m >= 2 && m <= max_rank && h[0] > 0 {
            return FlagShape::new(h).unwrap();
        }
    }
}

/// A conjugate pair in a random basis `B` together with a compatible
/// polarization `Q` and the change of basis.
#[derive(Clone, Debug)]
pub struct PolarizedPair<F: Field> {
    pub pair: ConjugatePair<F>,
    pub q: Matrix<F::Elem>,
    pub basis: Matrix<F::Elem>,
}

impl<F: Field> PolarizedPair<F> {
    /// A tensor given in splitting-basis coordinates, moved to `K^m`.
    pub fn from_split(&self, t: &Tensor<F::Elem>) -> Tensor<F::Elem> {
        let field = self.pair.field();
        let inv_t = self.basis.inverse(field).unwrap().transpose();
        t.transform(field, &self.basis, &inv_t)
    }
}

/// `F` spanned by the leading columns of `B`, `F_c` by its trailing ones, and
/// `Q₀` antidiagonal in the basis `B` (alternating for odd weight).
pub fn random_polarized_pair<F: Field>(
    rng: &mut impl Rng,
    field: &F,
    shape: &FlagShape,
) -> PolarizedPair<F> {
    let m = shape.rank();
    let w = shape.weight();
    let b = random_invertible(rng, field, m);
    let rev = Matrix::from_fn(m, m, |i, j| b.get(i, m - 1 - j).clone());
    let f = flag_from_matrix(field, &b, shape).unwrap();
    let fc = flag_from_matrix(field, &rev, &shape.reversed()).unwrap();
    let pair = conjugate_decomposition(&f, &fc).unwrap();
    let q0 = Matrix::from_fn(m, m, |i, j| {
        if i + j != m - 1 {
            field.zero()
        } else if w % 2 == 1 && i >= m / 2 {
            field.from_int(-1)
        } else {
            field.one()
        }
    });
    let binv = b.inverse(field).unwrap();
    let q = binv.transpose().mul(field, &q0).mul(field, &binv);
    PolarizedPair { pair, q, basis: b }
}

/// Tensors lying in `F^mid ∩ F_c^mid`: degree-preserving endomorphisms and,
/// for even weight, vectors of the middle degree, written in `K^m`.
pub fn random_hodge_tensors<F: Field>(
    rng: &mut impl Rng,
    pp: &PolarizedPair<F>,
    count: usize,
) -> Vec<Tensor<F::Elem>> {
    let field = pp.pair.field();
    let shape = pp.pair.f.shape().clone();
    let deg = shape.degrees();
    let m = shape.rank();
    let w = shape.weight();
    (0..count)
        .map(|_| {
            let middle: Vec<usize> = (0..m).filter(|&i| 2 * deg[i] == w).collect();
            let t0 = if !middle.is_empty() && rng.random_bool(0.3) {
                let v: Vec<F::Elem> = (0..m)
                    .map(|i| {
                        if middle.contains(&i) {
                            field.from_int(rng.random_range(-2..=2))
                        } else {
                            field.zero()
                        }
                    })
                    .collect();
                Tensor::from_vector(&v)
            } else {
                let x = Matrix::from_fn(m, m, |i, j| {
                    if deg[i] == deg[j] && rng.random_bool(0.6) {
                        field.from_int(rng.random_range(-2..=2))
                    } else {
                        field.zero()
                    }
                });
                Tensor::from_endomorphism(&x)
            };
            pp.from_split(&t0)
        })
        .collect()
}

//! The jet-level period map on explicit frames, base change, and orbit
//! membership of flag jets.

use num_rational::BigRational;

use crate::algebra::{
    series_substitute, Field, Matrix, PrimeField, Rationals, Ring, SeriesRing, TruncatedSeries,
    WeilAlgebra,
};
use crate::connection::{solve_limp, ConnectionChart};
use crate::error::{Error, Result};
use crate::flags::{coordinate_degrees, mid_index, Tensor};
use crate::jets::{flag_jet_equal, FlagJet, Jet};

/// A basepoint together with the value `f₀` of the flat frame there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameAssignment<F: Field> {
    pub basepoint: Vec<F::Elem>,
    pub frame: Matrix<F::Elem>,
}

impl<F: Field> FrameAssignment<F> {
    pub fn new(field: &F, basepoint: Vec<F::Elem>, frame: Matrix<F::Elem>) -> Result<Self> {
        if !frame.is_square() || !frame.is_invertible(field) {
            return Err(Error::SingularFrame);
        }
        Ok(FrameAssignment { basepoint, frame })
    }

    pub fn identity(field: &F, basepoint: Vec<F::Elem>, m: usize) -> Self {
        FrameAssignment {
            basepoint,
            frame: Matrix::identity(field, m),
        }
    }

    /// The frame `f₀ · g`.
    pub fn act(&self, field: &F, g: &Matrix<F::Elem>) -> Result<Self> {
        Self::new(field, self.basepoint.clone(), self.frame.mul(field, g))
    }
}

/// `(f ∘ j)⁻¹` read as a flag jet, where `f` is the flat frame at the frame's
/// basepoint with value `f₀`.
pub fn eval_eta<F: Field>(
    chart: &ConnectionChart<F>,
    j: &Jet<F>,
    frame: &FrameAssignment<F>,
    r: usize,
) -> Result<FlagJet<F>> {
    let (_, jr) = j.shape();
    if jr != r {
        return Err(Error::OrderMismatch(format!(
            "jet of order {jr} evaluated at order {r}"
        )));
    }
    if j.target_dim() != chart.n() {
        return Err(Error::DimensionMismatch(format!(
            "jet into {} dimensions on a chart with {} coordinates",
            j.target_dim(),
            chart.n()
        )));
    }
    if j.basepoint() != frame.basepoint.as_slice() {
        return Err(Error::BasepointMismatch);
    }
    let limp = solve_limp(chart, &frame.basepoint, &frame.frame, r)?;
    let inner = j.offsets();
    let alg = j.algebra();
    let composed = if chart.n() == 0 {
        limp.frame
            .map(|e| TruncatedSeries::constant(alg, e.constant_term().clone()))
    } else {
        limp.frame.try_map(|e| series_substitute(e, &inner))?
    };
    let inv = composed.inverse(&SeriesRing(alg.clone()))?;
    FlagJet::new(chart.shape().clone(), alg, inv)
}

/// Checks `eval_eta(f₀·g) = g⁻¹ · eval_eta(f₀)` as flag jets.
pub fn equivariance_check<F: Field>(
    chart: &ConnectionChart<F>,
    j: &Jet<F>,
    frame: &FrameAssignment<F>,
    g: &Matrix<F::Elem>,
) -> Result<bool> {
    let field = chart.field();
    let g_inv = g.inverse(field).map_err(|_| Error::SingularFrame)?;
    let r = j.shape().1;
    let moved = eval_eta(chart, j, &frame.act(field, g)?, r)?;
    let base = eval_eta(chart, j, frame, r)?.left_mul_constant(&g_inv)?;
    flag_jet_equal(&moved, &base)
}

pub fn reduce_scalar(field: &PrimeField, x: &BigRational) -> Result<u64> {
    field.from_rational(x)
}

pub fn reduce_matrix(field: &PrimeField, m: &Matrix<BigRational>) -> Result<Matrix<u64>> {
    m.try_map(|x| field.from_rational(x))
}

/// Entrywise reduction of a chart over `ℚ`.
pub fn reduce_chart_mod_p(
    chart: &ConnectionChart<Rationals>,
    p: u64,
) -> Result<ConnectionChart<PrimeField>> {
    let field = PrimeField::new(p)?;
    chart.map_entries(field, |e| e.reduce_mod(&field), |x| field.from_rational(x))
}

/// As [`reduce_chart_mod_p`], additionally requiring every denominator to
/// stay nonzero at the reduced basepoint.
pub fn reduce_chart_mod_p_at(
    chart: &ConnectionChart<Rationals>,
    p: u64,
    basepoint: &[BigRational],
) -> Result<(ConnectionChart<PrimeField>, Vec<u64>)> {
    let reduced = reduce_chart_mod_p(chart, p)?;
    let field = *reduced.field();
    let s = basepoint
        .iter()
        .map(|x| field.from_rational(x))
        .collect::<Result<Vec<_>>>()?;
    reduced.check_point(&s)?;
    for c in reduced.connection() {
        for e in c.entries() {
            if field.is_zero(&e.denom().eval(&s)) {
                return Err(Error::DenominatorVanishesModP);
            }
        }
    }
    Ok((reduced, s))
}

pub fn reduce_series(
    alg: &std::sync::Arc<WeilAlgebra<PrimeField>>,
    s: &TruncatedSeries<Rationals>,
) -> Result<TruncatedSeries<PrimeField>> {
    let field = *alg.field();
    let coeffs = s
        .coeffs()
        .iter()
        .map(|c| field.from_rational(c))
        .collect::<Result<Vec<_>>>()?;
    TruncatedSeries::from_coeffs(alg, coeffs)
}

pub fn reduce_jet(j: &Jet<Rationals>, p: u64) -> Result<Jet<PrimeField>> {
    let field = PrimeField::new(p)?;
    let (d, r) = j.shape();
    let alg = WeilAlgebra::new(field, d, r)?;
    let coords = j
        .coords()
        .iter()
        .map(|c| reduce_series(&alg, c))
        .collect::<Result<Vec<_>>>()?;
    Jet::new(&alg, coords)
}

pub fn reduce_flagjet(fj: &FlagJet<Rationals>, p: u64) -> Result<FlagJet<PrimeField>> {
    let field = PrimeField::new(p)?;
    let alg = fj.algebra();
    let target = WeilAlgebra::new(field, alg.dim(), alg.order())?;
    let rep = fj.representative().try_map(|e| reduce_series(&target, e))?;
    FlagJet::new(fj.shape().clone(), &target, rep)
}

/// Moves a tensor from chart-frame coordinates at the basepoint into the
/// coordinates of the flat frame `f₀`: `f₀⁻¹` on covariant slots and `f₀ᵀ`
/// on dual slots.
pub fn transport_tensor<F: Field>(
    field: &F,
    f0: &Matrix<F::Elem>,
    t: &Tensor<F::Elem>,
) -> Result<Tensor<F::Elem>> {
    let inv = f0.inverse(field).map_err(|_| Error::SingularFrame)?;
    Ok(t.transform(field, &inv, &f0.transpose()))
}

/// The chart's flat tensors evaluated at `s`, in chart-frame coordinates.
pub fn flat_tensors_at<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
) -> Result<Vec<Tensor<F::Elem>>> {
    chart
        .flat_tensors()
        .iter()
        .map(|t| {
            let coeffs = t
                .coeffs
                .iter()
                .map(|c| c.eval(s))
                .collect::<Result<Vec<_>>>()?;
            Tensor::new(t.index, chart.rank(), coeffs)
        })
        .collect()
}

/// Whether every `u ∈ U` lies in `F(t)^mid` identically over `A^d_r`.
pub fn orbit_membership_jet<F: Field>(fj: &FlagJet<F>, u: &[Tensor<F::Elem>]) -> Result<bool> {
    let m = fj.shape().rank();
    let alg = fj.algebra();
    let ring = SeriesRing(alg.clone());
    let rep = fj.representative();
    let inv = rep.inverse(&ring)?;
    let dual = rep.transpose();
    for t in u {
        if t.m != m || t.coeffs.len() != t.index.ambient_dim(m) {
            return Err(Error::ShapeMismatch(format!(
                "tensor over K^{} for a flag jet in K^{m}",
                t.m
            )));
        }
        let lifted = t.map(|c| TruncatedSeries::constant(alg, c.clone()));
        let coords = lifted.transform(&ring, &inv, &dual);
        let degrees = coordinate_degrees(fj.shape(), t.index);
        let mid = mid_index(fj.shape().weight(), t.index);
        let ok = coords
            .coeffs
            .iter()
            .zip(&degrees)
            .all(|(c, &d)| c.is_zero() || mid.is_some_and(|m| d >= m));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_rational_function, RationalFunction};
    use crate::jets::FlagShape;

    fn q(n: i64) -> BigRational {
        Rationals.from_int(n)
    }

    fn nilpotent_chart() -> ConnectionChart<Rationals> {
        let names = vec!["z".to_string()];
        let mut c = Matrix::filled(2, 2, RationalFunction::zero(&Rationals, 1));
        c.set(0, 1, parse_rational_function("1", &names).unwrap());
        ConnectionChart::new(
            Rationals,
            names,
            FlagShape::new(vec![1, 1]).unwrap(),
            vec![c],
        )
        .unwrap()
    }

    fn line_jet(r: usize) -> Jet<Rationals> {
        let alg = WeilAlgebra::new(Rationals, 1, r).unwrap();
        Jet::new(&alg, vec![TruncatedSeries::variable(&alg, 0)]).unwrap()
    }

    #[test]
    fn nilpotent_example_moves() {
        let chart = nilpotent_chart();
        let frame = FrameAssignment::identity(&Rationals, vec![q(0)], 2);
        let fj = eval_eta(&chart, &line_jet(2), &frame, 2).unwrap();
        let t = TruncatedSeries::variable(fj.algebra(), 0);
        assert_eq!(fj.representative().get(1, 0), &t);
        assert!(!fj.is_constant());
        let e1 = Tensor::from_vector(&[q(1), q(0)]);
        let alt = Tensor::from_form(
            &Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(-1), q(0)]]).unwrap(),
        );
        assert!(orbit_membership_jet(&fj, std::slice::from_ref(&alt)).unwrap());
        assert!(!orbit_membership_jet(&fj, &[alt, e1]).unwrap());
    }

    #[test]
    fn basepoint_mismatch() {
        let chart = nilpotent_chart();
        let frame = FrameAssignment::identity(&Rationals, vec![q(1)], 2);
        assert_eq!(
            eval_eta(&chart, &line_jet(1), &frame, 1),
            Err(Error::BasepointMismatch)
        );
    }

    #[test]
    fn equivariance_on_nilpotent_chart() {
        let chart = nilpotent_chart();
        let frame = FrameAssignment::identity(&Rationals, vec![q(0)], 2);
        let g = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(3), q(-1)]]).unwrap();
        assert!(equivariance_check(&chart, &line_jet(3), &frame, &g).unwrap());
    }

    #[test]
    fn non_integral_reduction() {
        let names = vec!["z".to_string()];
        let mut c = Matrix::filled(1, 1, RationalFunction::zero(&Rationals, 1));
        c.set(0, 0, parse_rational_function("1/5", &names).unwrap());
        let chart =
            ConnectionChart::new(Rationals, names, FlagShape::new(vec![1]).unwrap(), vec![c])
                .unwrap();
        assert!(matches!(
            reduce_chart_mod_p(&chart, 5),
            Err(Error::NonIntegralCoefficient(_))
        ));
    }
}

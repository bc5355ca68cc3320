//! Flags, induced filtrations on tensor spaces, and the Lie-theoretic data
//! attached to a pair of opposed flags.

use std::fmt;

use crate::algebra::{kernel, rank, solve, Field, Matrix, Ring, Subspace};
use crate::error::{Error, Result};
use crate::jets::FlagShape;

/// The tensor space `V^{a,b} = V^{⊗a} ⊗ (V*)^{⊗b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TensorIndex {
    pub a: usize,
    pub b: usize,
}

impl TensorIndex {
    pub fn new(a: usize, b: usize) -> Self {
        TensorIndex { a, b }
    }
    pub fn slots(&self) -> usize {
        self.a + self.b
    }
    pub fn ambient_dim(&self, m: usize) -> usize {
        m.pow(self.slots() as u32)
    }
}

impl fmt::Display for TensorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A tensor in `V^{a,b}` with coordinates ordered lexicographically by slot
/// indices, covariant slots first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor<E> {
    pub index: TensorIndex,
    pub m: usize,
    pub coeffs: Vec<E>,
}

impl<E: Clone> Tensor<E> {
    pub fn new(index: TensorIndex, m: usize, coeffs: Vec<E>) -> Result<Self> {
        if coeffs.len() != index.ambient_dim(m) {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a tensor in V^{} with dim V = {m}",
                coeffs.len(),
                index
            )));
        }
        Ok(Tensor { index, m, coeffs })
    }

    /// A bilinear form as a `(0,2)`-tensor.
    pub fn from_form(q: &Matrix<E>) -> Self {
        Tensor {
            index: TensorIndex::new(0, 2),
            m: q.rows(),
            coeffs: q.entries().to_vec(),
        }
    }

    /// A vector as a `(1,0)`-tensor.
    pub fn from_vector(v: &[E]) -> Self {
        Tensor {
            index: TensorIndex::new(1, 0),
            m: v.len(),
            coeffs: v.to_vec(),
        }
    }

    /// An endomorphism `Σ x_{ij} e_i ⊗ e_j*` as a `(1,1)`-tensor.
    pub fn from_endomorphism(x: &Matrix<E>) -> Self {
        Tensor {
            index: TensorIndex::new(1, 1),
            m: x.rows(),
            coeffs: x.entries().to_vec(),
        }
    }

    /// The `(0,2)` coefficients read back as a matrix.
    pub fn as_form(&self) -> Option<Matrix<E>> {
        (self.index == TensorIndex::new(0, 2))
            .then(|| Matrix::from_fn(self.m, self.m, |i, j| self.coeffs[i * self.m + j].clone()))
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    /// Decomposes a flat coordinate index into slot indices.
    pub fn slot_indices(&self, mut flat: usize) -> Vec<usize> {
        let n = self.index.slots();
        let mut out = vec![0; n];
        for s in (0..n).rev() {
            out[s] = flat % self.m;
            flat /= self.m;
        }
        out
    }

    /// Applies `mat` to slot `slot`: `out[…i′…] = Σ_i mat[i′][i] · self[…i…]`.
    pub fn apply_to_slot<R: Ring<Elem = E>>(&self, ring: &R, slot: usize, mat: &Matrix<E>) -> Self {
        let m = self.m;
        let n = self.index.slots();
        let stride = m.pow((n - 1 - slot) as u32);
        let mut out = vec![ring.zero(); self.coeffs.len()];
        for (flat, c) in self.coeffs.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            let i = (flat / stride) % m;
            let base = flat - i * stride;
            for ip in 0..m {
                let a = mat.get(ip, i);
                if ring.is_zero(a) {
                    continue;
                }
                let k = base + ip * stride;
                out[k] = ring.add(&out[k], &ring.mul(a, c));
            }
        }
        Tensor {
            index: self.index,
            m,
            coeffs: out,
        }
    }

    /// Applies `cov` to every covariant slot and `dual` to every dual slot.
    pub fn transform<R: Ring<Elem = E>>(
        &self,
        ring: &R,
        cov: &Matrix<E>,
        dual: &Matrix<E>,
    ) -> Self {
        let mut t = self.clone();
        for s in 0..self.index.slots() {
            let mat = if s < self.index.a { cov } else { dual };
            t = t.apply_to_slot(ring, s, mat);
        }
        t
    }

    /// The derivation action of `ξ ∈ End(V)`: `ξ` on covariant slots, `−ξᵀ`
    /// on dual slots, summed.
    pub fn derivation<R: Ring<Elem = E>>(&self, ring: &R, xi: &Matrix<E>) -> Self {
        let dual = xi.transpose().neg(ring);
        let mut acc = vec![ring.zero(); self.coeffs.len()];
        for s in 0..self.index.slots() {
            let mat = if s < self.index.a { xi } else { &dual };
            let t = self.apply_to_slot(ring, s, mat);
            for (x, y) in acc.iter_mut().zip(&t.coeffs) {
                *x = ring.add(x, y);
            }
        }
        Tensor {
            index: self.index,
            m: self.m,
            coeffs: acc,
        }
    }

    /// `u ⊗ v`, reordered so covariant slots still come first.
    pub fn tensor_product<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let index = TensorIndex::new(self.index.a + other.index.a, self.index.b + other.index.b);
        let m = self.m;
        let mut out = vec![ring.zero(); index.ambient_dim(m)];
        for (x, cx) in self.coeffs.iter().enumerate() {
            if ring.is_zero(cx) {
                continue;
            }
            let sx = self.slot_indices(x);
            for (y, cy) in other.coeffs.iter().enumerate() {
                if ring.is_zero(cy) {
                    continue;
                }
                let sy = other.slot_indices(y);
                let slots = sx[..self.index.a]
                    .iter()
                    .chain(&sy[..other.index.a])
                    .chain(&sx[self.index.a..])
                    .chain(&sy[other.index.a..]);
                let flat = slots.fold(0, |acc, &i| acc * m + i);
                out[flat] = ring.add(&out[flat], &ring.mul(cx, cy));
            }
        }
        Tensor {
            index,
            m,
            coeffs: out,
        }
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> Tensor<T> {
        Tensor {
            index: self.index,
            m: self.m,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// A filtration `F^0 ⊇ F^1 ⊇ … ⊇ F^w ⊇ F^{w+1} = 0` of `K^m`, given by an
/// adapted basis whose first `j_k` columns span `F^k`.
#[derive(Clone, Debug)]
pub struct Flag<F: Field> {
    field: F,
    shape: FlagShape,
    basis: Matrix<F::Elem>,
    steps: Vec<Subspace<F::Elem>>,
}

impl<F: Field> PartialEq for Flag<F> {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.steps == other.steps
    }
}

impl<F: Field> Eq for Flag<F> {}

/// The flag whose `F^k` is spanned by the first `j_k` columns of `m`.
pub fn flag_from_matrix<F: Field>(
    field: &F,
    m: &Matrix<F::Elem>,
    shape: &FlagShape,
) -> Result<Flag<F>> {
    if m.rows() != shape.rank() || m.cols() != shape.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a flag in dimension {}",
            m.rows(),
            m.cols(),
            shape.rank()
        )));
    }
    if !m.is_invertible(field) {
        return Err(Error::SingularMatrix);
    }
    let n = shape.rank();
    let cols: Vec<Vec<F::Elem>> = (0..n).map(|j| m.col(j)).collect();
    let steps = (0..=shape.weight() as i64 + 1)
        .map(|k| Subspace::span(field, n, &cols[..shape.jump(k)]))
        .collect();
    Ok(Flag {
        field: field.clone(),
        shape: shape.clone(),
        basis: m.clone(),
        steps,
    })
}

impl<F: Field> Flag<F> {
    /// The flag with the given nested steps `F^0 = K^m ⊇ F^1 ⊇ … ⊇ F^w`.
    pub fn from_steps(field: &F, steps: &[Subspace<F::Elem>]) -> Result<Self> {
        let first = steps
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a flag needs at least one step".into()))?;
        let n = first.ambient();
        if first.dim() != n {
            return Err(Error::ShapeMismatch("F^0 must be the whole space".into()));
        }
        for w in steps.windows(2) {
            if !w[0].contains_space(field, &w[1]) {
                return Err(Error::ShapeMismatch(
                    "filtration steps are not nested".into(),
                ));
            }
        }
        let mut hodge: Vec<usize> = steps.windows(2).map(|w| w[0].dim() - w[1].dim()).collect();
        hodge.push(steps.last().unwrap().dim());
        let mut cols: Vec<Vec<F::Elem>> = Vec::new();
        for step in steps.iter().rev() {
            for v in step.basis() {
                let current = Subspace::span(field, n, &cols);
                if !current.contains(field, v) {
                    cols.push(v.clone());
                }
            }
        }
        let basis = Matrix::from_cols(&cols)?;
        flag_from_matrix(field, &basis, &FlagShape::new(hodge)?)
    }

    /// The coordinate flag: `F^k` spanned by the first `j_k` standard vectors.
    pub fn standard(field: &F, shape: &FlagShape) -> Self {
        flag_from_matrix(field, &Matrix::identity(field, shape.rank()), shape).unwrap()
    }

    /// The opposite coordinate flag: `F^k` spanned by the last `j_k` standard vectors.
    pub fn opposite_standard(field: &F, shape: &FlagShape) -> Self {
        let n = shape.rank();
        let rev = Matrix::from_fn(n, n, |i, j| {
            if i + j == n - 1 {
                field.one()
            } else {
                field.zero()
            }
        });
        flag_from_matrix(field, &rev, shape).unwrap()
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }
    pub fn weight(&self) -> u32 {
        self.shape.weight()
    }
    pub fn rank(&self) -> usize {
        self.shape.rank()
    }
    /// An adapted basis, as columns.
    pub fn basis(&self) -> &Matrix<F::Elem> {
        &self.basis
    }

    /// `F^k`; the whole space for `k ≤ 0` and zero for `k > w`.
    pub fn step(&self, k: i64) -> Subspace<F::Elem> {
        if k <= 0 {
            self.steps[0].clone()
        } else if k as usize >= self.steps.len() {
            Subspace::zero(self.rank())
        } else {
            self.steps[k as usize].clone()
        }
    }

    /// The tensor expressed in the adapted basis and its dual.
    pub fn adapted_coordinates(&self, t: &Tensor<F::Elem>) -> Tensor<F::Elem> {
        let inv = self.basis.inverse(&self.field).unwrap();
        t.transform(&self.field, &inv, &self.basis.transpose())
    }

    /// Filtration degree of each adapted coordinate of a tensor of index `idx`.
    pub fn coordinate_degrees(&self, idx: TensorIndex) -> Vec<i64> {
        coordinate_degrees(&self.shape, idx)
    }
}

/// Filtration degree of each adapted coordinate for a flag of the given shape.
pub fn coordinate_degrees(shape: &FlagShape, idx: TensorIndex) -> Vec<i64> {
    let deg = shape.degrees();
    let probe: Tensor<()> = Tensor {
        index: idx,
        m: shape.rank(),
        coeffs: vec![],
    };
    (0..idx.ambient_dim(shape.rank()))
        .map(|flat| {
            probe
                .slot_indices(flat)
                .iter()
                .enumerate()
                .map(|(s, &i)| {
                    if s < idx.a {
                        deg[i] as i64
                    } else {
                        -(deg[i] as i64)
                    }
                })
                .sum()
        })
        .collect()
}

/// Where a tensor sits in the induced filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InducedStep {
    /// The largest `i` with `v ∈ F^i`, or `None` for the zero tensor.
    pub step: Option<i64>,
    /// Whether `v ∈ F^mid`.
    pub in_mid: bool,
}

/// The middle index `w(a−b)/2`, or `None` when the induced weight is odd.
pub fn mid_index(weight: u32, idx: TensorIndex) -> Option<i64> {
    let w = weight as i64 * (idx.a as i64 - idx.b as i64);
    (w % 2 == 0).then_some(w / 2)
}

pub fn induced_filtration_and_fmid<F: Field>(
    flag: &Flag<F>,
    v: &Tensor<F::Elem>,
) -> Result<InducedStep> {
    if v.m != flag.rank() || v.coeffs.len() != v.index.ambient_dim(flag.rank()) {
        return Err(Error::DimensionMismatch(format!(
            "tensor over K^{} for a flag in K^{}",
            v.m,
            flag.rank()
        )));
    }
    let f = flag.field();
    let coords = flag.adapted_coordinates(v);
    let degrees = flag.coordinate_degrees(v.index);
    let step = coords
        .coeffs
        .iter()
        .zip(&degrees)
        .filter(|(c, _)| !f.is_zero(c))
        .map(|(_, &d)| d)
        .min();
    let in_mid = match (step, mid_index(flag.weight(), v.index)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(s), Some(mid)) => s >= mid,
    };
    Ok(InducedStep { step, in_mid })
}

fn check_same_frame<F: Field>(a: &Flag<F>, b: &Flag<F>) -> Result<()> {
    if a.weight() != b.weight() || a.rank() != b.rank() {
        return Err(Error::ShapeMismatch(format!(
            "flags of shapes {} and {}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// `F^p ⊕ F_c^{w−p+1} = V` for every `p`.
pub fn is_opposed<F: Field>(f: &Flag<F>, fc: &Flag<F>) -> Result<bool> {
    check_same_frame(f, fc)?;
    let field = f.field();
    let w = f.weight() as i64;
    let m = f.rank();
    Ok((0..=w + 1).all(|p| {
        let a = f.step(p);
        let b = fc.step(w - p + 1);
        a.dim() + b.dim() == m && a.intersection(field, &b).dim() == 0
    }))
}

/// Nondegenerate and symmetric or alternating.
pub fn check_form<F: Field>(field: &F, q: &Matrix<F::Elem>) -> Result<()> {
    if !q.is_square() || !q.is_invertible(field) {
        return Err(Error::DegenerateForm);
    }
    let n = q.rows();
    let symmetric = q == &q.transpose();
    let alternating = q.transpose() == q.neg(field) && (0..n).all(|i| field.is_zero(q.get(i, i)));
    if symmetric || alternating {
        Ok(())
    } else {
        Err(Error::DegenerateForm)
    }
}

/// `Q(F^p, F^{w−p+1}) = 0` for every `p`.
pub fn is_polarized<F: Field>(flag: &Flag<F>, q: &Matrix<F::Elem>) -> Result<bool> {
    let field = flag.field();
    check_form(field, q)?;
    if q.rows() != flag.rank() {
        return Err(Error::DimensionMismatch(
            "form and flag of different rank".into(),
        ));
    }
    let b = flag.basis();
    let g = b.transpose().mul(field, q).mul(field, b);
    let deg = flag.shape().degrees();
    let w = flag.weight();
    Ok((0..g.rows())
        .all(|r| (0..g.cols()).all(|c| deg[r] + deg[c] <= w || field.is_zero(g.get(r, c)))))
}

/// Opposed flags together with the splitting `H^{p,w−p} = F^p ∩ F_c^{w−p}`.
#[derive(Clone, Debug)]
pub struct ConjugatePair<F: Field> {
    pub f: Flag<F>,
    pub fc: Flag<F>,
    /// `summands[p]` is a basis of `H^{p,w−p}`.
    pub summands: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> ConjugatePair<F> {
    pub fn field(&self) -> &F {
        self.f.field()
    }
    pub fn weight(&self) -> u32 {
        self.f.weight()
    }
    pub fn rank(&self) -> usize {
        self.f.rank()
    }

    /// The basis `H^{w,0}, H^{w−1,1}, …, H^{0,w}` as columns, with the Hodge
    /// index `p` of each column.
    pub fn splitting_basis(&self) -> (Matrix<F::Elem>, Vec<i64>) {
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        for p in (0..self.summands.len()).rev() {
            for v in &self.summands[p] {
                cols.push(v.clone());
                labels.push(p as i64);
            }
        }
        (Matrix::from_cols(&cols).unwrap(), labels)
    }

    pub fn summand_dims(&self) -> Vec<usize> {
        self.summands.iter().map(Vec::len).collect()
    }
}

pub fn conjugate_decomposition<F: Field>(f: &Flag<F>, fc: &Flag<F>) -> Result<ConjugatePair<F>> {
    if !is_opposed(f, fc)? {
        return Err(Error::NotOpposed);
    }
    let field = f.field();
    let w = f.weight() as i64;
    let summands = (0..=w)
        .map(|p| {
            f.step(p)
                .intersection(field, &fc.step(w - p))
                .basis()
                .to_vec()
        })
        .collect();
    Ok(ConjugatePair {
        f: f.clone(),
        fc: fc.clone(),
        summands,
    })
}

fn flatten<E: Clone>(m: &Matrix<E>) -> Vec<E> {
    m.entries().to_vec()
}

fn unflatten<E: Clone>(n: usize, v: &[E]) -> Matrix<E> {
    Matrix::from_fn(n, n, |i, j| v[i * n + j].clone())
}

/// `End(K^m) = ⊕_{i=−w}^{w} End^i`, where `End^i` lowers the Hodge index by `i`.
#[derive(Clone, Debug)]
pub struct EndGrading<F: Field> {
    pub weight: u32,
    /// `pieces[i + w]` spans `End^i`, as flattened row-major matrices.
    pub pieces: Vec<Subspace<F::Elem>>,
    splitting: Matrix<F::Elem>,
    splitting_inv: Matrix<F::Elem>,
    labels: Vec<i64>,
}

impl<F: Field> EndGrading<F> {
    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    pub fn piece(&self, i: i64) -> Subspace<F::Elem> {
        let w = self.weight as i64;
        if i < -w || i > w {
            return Subspace::zero(self.splitting.rows().pow(2));
        }
        self.pieces[(i + w) as usize].clone()
    }

    /// The components `ξ = Σ_i ξ_i` with `ξ_i ∈ End^i`.
    pub fn components(&self, field: &F, xi: &Matrix<F::Elem>) -> Vec<Matrix<F::Elem>> {
        let w = self.weight as i64;
        let n = xi.rows();
        let inner = self
            .splitting_inv
            .mul(field, xi)
            .mul(field, &self.splitting);
        (-w..=w)
            .map(|i| {
                let part = Matrix::from_fn(n, n, |r, c| {
                    if self.labels[c] - self.labels[r] == i {
                        inner.get(r, c).clone()
                    } else {
                        field.zero()
                    }
                });
                self.splitting
                    .mul(field, &part)
                    .mul(field, &self.splitting_inv)
            })
            .collect()
    }
}

pub fn end_grading<F: Field>(pair: &ConjugatePair<F>) -> EndGrading<F> {
    let field = pair.field();
    let n = pair.rank();
    let w = pair.weight() as i64;
    let (p, labels) = pair.splitting_basis();
    let p_inv = p.inverse(field).unwrap();
    let mut gens: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); (2 * w + 1) as usize];
    for r in 0..n {
        for c in 0..n {
            let i = labels[c] - labels[r];
            let e = Matrix::unit(field, n, r, c);
            gens[(i + w) as usize].push(flatten(&p.mul(field, &e).mul(field, &p_inv)));
        }
    }
    EndGrading {
        weight: pair.weight(),
        pieces: gens
            .iter()
            .map(|g| Subspace::span(field, n * n, g))
            .collect(),
        splitting: p,
        splitting_inv: p_inv,
        labels,
    }
}

/// A Lie subalgebra of `gl_m`, given by a basis of matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra<F: Field> {
    field: F,
    m: usize,
    space: Subspace<F::Elem>,
}

impl<F: Field> LieAlgebra<F> {
    pub fn from_basis(field: &F, m: usize, basis: &[Matrix<F::Elem>]) -> Self {
        let flat: Vec<Vec<F::Elem>> = basis.iter().map(flatten).collect();
        LieAlgebra {
            field: field.clone(),
            m,
            space: Subspace::span(field, m * m, &flat),
        }
    }

    pub fn gl(field: &F, m: usize) -> Self {
        LieAlgebra {
            field: field.clone(),
            m,
            space: Subspace::full(field, m * m),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rank(&self) -> usize {
        self.m
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    /// As a subspace of flattened `m×m` matrices.
    pub fn space(&self) -> &Subspace<F::Elem> {
        &self.space
    }
    pub fn basis(&self) -> Vec<Matrix<F::Elem>> {
        self.space
            .basis()
            .iter()
            .map(|v| unflatten(self.m, v))
            .collect()
    }
    pub fn contains(&self, x: &Matrix<F::Elem>) -> bool {
        self.space.contains(&self.field, &flatten(x))
    }
    pub fn is_subalgebra_of(&self, other: &Self) -> bool {
        other.space.contains_space(&self.field, &self.space)
    }

    /// Coordinates of `x` in [`basis`](Self::basis).
    pub fn coordinates(&self, x: &Matrix<F::Elem>) -> Result<Vec<F::Elem>> {
        let cols = Matrix::from_cols(self.space.basis())?;
        if self.space.dim() == 0 {
            return if x.is_zero(&self.field) {
                Ok(vec![])
            } else {
                Err(Error::PreconditionViolated(
                    "element outside the algebra".into(),
                ))
            };
        }
        solve(&self.field, &cols, &flatten(x))
            .ok_or_else(|| Error::PreconditionViolated("element outside the algebra".into()))
    }
}

/// `{ξ ∈ End(K^m) : ξ·u = 0 for all u ∈ U}` under the derivation action.
pub fn stabilizer_algebra<F: Field>(
    field: &F,
    m: usize,
    u: &[Tensor<F::Elem>],
) -> Result<LieAlgebra<F>> {
    for t in u {
        if t.m != m || t.coeffs.len() != t.index.ambient_dim(m) {
            return Err(Error::DimensionMismatch(format!(
                "tensor over K^{} in a stabilizer computation on K^{m}",
                t.m
            )));
        }
    }
    if u.is_empty() {
        return Ok(LieAlgebra::gl(field, m));
    }
    // Column (i, j) of the constraint matrix is E_ij acting on every tensor.
    let mut columns = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let e = Matrix::unit(field, m, i, j);
            let mut col = Vec::new();
            for t in u {
                col.extend(t.derivation(field, &e).coeffs);
            }
            columns.push(col);
        }
    }
    let constraints = Matrix::from_cols(&columns)?;
    let ker = kernel(field, &constraints);
    Ok(LieAlgebra {
        field: field.clone(),
        m,
        space: Subspace::span(field, m * m, &ker),
    })
}

/// A subalgebra decomposed by the adjoint cocharacter of a conjugate pair.
#[derive(Clone, Debug)]
pub struct GradedLieSubalgebra<F: Field> {
    pub algebra: LieAlgebra<F>,
    pub weight: u32,
    /// `pieces[i + w] = 𝔤 ∩ End^i`.
    pub pieces: Vec<Subspace<F::Elem>>,
}

impl<F: Field> GradedLieSubalgebra<F> {
    /// `h^{−w}, …, h^{w}`.
    pub fn hodge_numbers(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    pub fn piece(&self, i: i64) -> Subspace<F::Elem> {
        let w = self.weight as i64;
        if i < -w || i > w {
            return Subspace::zero(self.algebra.rank().pow(2));
        }
        self.pieces[(i + w) as usize].clone()
    }

    pub fn invariants(&self) -> NumericInvariants {
        numeric_invariants(&self.hodge_numbers())
    }
}

/// `𝔤^i = 𝔤 ∩ End^i`; fails with `NotGraded` when these do not exhaust `𝔤`.
pub fn adjoint_hodge_numbers<F: Field>(
    g: &LieAlgebra<F>,
    pair: &ConjugatePair<F>,
) -> Result<GradedLieSubalgebra<F>> {
    if g.rank() != pair.rank() {
        return Err(Error::DimensionMismatch(
            "algebra and flags of different rank".into(),
        ));
    }
    let field = g.field();
    let grading = end_grading(pair);
    let pieces: Vec<Subspace<F::Elem>> = grading
        .pieces
        .iter()
        .map(|p| g.space().intersection(field, p))
        .collect();
    let graded: usize = pieces.iter().map(Subspace::dim).sum();
    if graded != g.dim() {
        return Err(Error::NotGraded {
            graded,
            total: g.dim(),
        });
    }
    Ok(GradedLieSubalgebra {
        algebra: g.clone(),
        weight: pair.weight(),
        pieces,
    })
}

/// The Killing form `B(x, y) = tr(ad x ∘ ad y)` in a basis of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingForm<F: Field> {
    pub basis: Vec<Matrix<F::Elem>>,
    pub gram: Matrix<F::Elem>,
    pub nondegenerate: bool,
    /// Coordinates (in `basis`) spanning the radical.
    pub radical: Vec<Vec<F::Elem>>,
}

pub fn killing_form<F: Field>(
    g: &LieAlgebra<F>,
    basis: &[Matrix<F::Elem>],
) -> Result<KillingForm<F>> {
    let field = g.field();
    let n = basis.len();
    let span = LieAlgebra::from_basis(field, g.rank(), basis);
    if span.dim() != n || span != *g {
        return Err(Error::PreconditionViolated(
            "not a basis of the algebra".into(),
        ));
    }
    let flat_cols: Vec<Vec<F::Elem>> = basis.iter().map(flatten).collect();
    let basis_matrix = Matrix::from_cols(&flat_cols)?;
    let coords = |x: &Matrix<F::Elem>| -> Result<Vec<F::Elem>> {
        if n == 0 {
            return Ok(vec![]);
        }
        solve(field, &basis_matrix, &flatten(x))
            .ok_or_else(|| Error::PreconditionViolated("not closed under the bracket".into()))
    };
    let ad: Vec<Matrix<F::Elem>> = basis
        .iter()
        .map(|x| {
            let cols = basis
                .iter()
                .map(|y| coords(&x.bracket(field, y)))
                .collect::<Result<Vec<_>>>()?;
            if n == 0 {
                return Ok(Matrix::zeros(field, 0, 0));
            }
            Matrix::from_cols(&cols)
        })
        .collect::<Result<_>>()?;
    let gram = Matrix::from_fn(n, n, |a, b| ad[a].mul(field, &ad[b]).trace(field));
    let radical = kernel(field, &gram);
    Ok(KillingForm {
        basis: basis.to_vec(),
        nondegenerate: radical.is_empty(),
        gram,
        radical,
    })
}

/// The Killing form in the canonical basis of `g`.
pub fn killing_nondegenerate<F: Field>(g: &LieAlgebra<F>) -> Result<KillingForm<F>> {
    killing_form(g, &g.basis())
}

/// Derived numbers of a list of adjoint Hodge numbers `h^{−w}, …, h^{w}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NumericInvariants {
    /// `max{i : h^i ≠ 0}`, floored at 0.
    pub level: i64,
    /// `Σ_{i ≥ 1} h^i`.
    pub e: usize,
    /// `h^i = h^{−i}` for every `i`.
    pub symmetric: bool,
}

pub fn numeric_invariants(hodge: &[usize]) -> NumericInvariants {
    let w = (hodge.len() as i64 - 1) / 2;
    let level = (0..hodge.len())
        .filter(|&k| hodge[k] != 0)
        .map(|k| k as i64 - w)
        .max()
        .unwrap_or(0)
        .max(0);
    let e = hodge[(w + 1) as usize..].iter().sum();
    let symmetric = (0..hodge.len()).all(|k| hodge[k] == hodge[hodge.len() - 1 - k]);
    NumericInvariants {
        level,
        e,
        symmetric,
    }
}

/// The first `(0,2)`-tensor in `U` that is a nondegenerate symmetric or
/// alternating form.
pub fn find_polarization<F: Field>(field: &F, u: &[Tensor<F::Elem>]) -> Option<Matrix<F::Elem>> {
    u.iter()
        .filter_map(Tensor::as_form)
        .find(|q| check_form(field, q).is_ok())
}

/// `P̄`: the sum of the positive adjoint Hodge numbers of `Lie(Aut(Q))`.
pub fn period_dimension<F: Field>(pair: &ConjugatePair<F>, q: &Matrix<F::Elem>) -> Result<usize> {
    let field = pair.field();
    check_form(field, q)?;
    let a = stabilizer_algebra(field, pair.rank(), &[Tensor::from_form(q)])?;
    Ok(adjoint_hodge_numbers(&a, pair)?.invariants().e)
}

/// The two descriptions of the tangent space to the orbit `O(F, U)` at `F`,
/// in the coordinates of `⊕_p Hom(F^p, V/F^p)` given by an adapted basis.
#[derive(Clone, Debug)]
pub struct OrbitTangent<F: Field> {
    /// Image of `⊕_{i>0} 𝔤^i`.
    pub graded_image: Subspace<F::Elem>,
    /// `{ξ ∈ Lie(Aut Q) : ξ(u) ∈ F^mid ∀u ∈ U}`, projected.
    pub linearized: Subspace<F::Elem>,
    /// `Σ_{i ≥ 1} h^i`.
    pub e: usize,
    pub grading: GradedLieSubalgebra<F>,
}

impl<F: Field> OrbitTangent<F> {
    pub fn agree(&self) -> bool {
        self.graded_image == self.linearized
    }
}

/// Entries `(r, c)` of `B⁻¹ξB` with `deg r < deg c`.
fn tangent_projection<F: Field>(
    flag: &Flag<F>,
    b_inv: &Matrix<F::Elem>,
    xi: &Matrix<F::Elem>,
) -> Vec<F::Elem> {
    let field = flag.field();
    let x = b_inv.mul(field, xi).mul(field, flag.basis());
    let deg = flag.shape().degrees();
    let n = flag.rank();
    let mut out = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if deg[r] < deg[c] {
                out.push(x.get(r, c).clone());
            }
        }
    }
    out
}

fn tangent_ambient(shape: &FlagShape) -> usize {
    let deg = shape.degrees();
    deg.iter()
        .map(|&dr| deg.iter().filter(|&&dc| dr < dc).count())
        .sum()
}

fn check_orbit_preconditions<F: Field>(
    pair: &ConjugatePair<F>,
    u: &[Tensor<F::Elem>],
) -> Result<Matrix<F::Elem>> {
    let field = pair.field();
    if field.characteristic() == 2 {
        return Err(Error::Char2);
    }
    let q = find_polarization(field, u).ok_or_else(|| {
        Error::PreconditionViolated("U must contain a nondegenerate form Q".into())
    })?;
    for (k, t) in u.iter().enumerate() {
        let in_f = induced_filtration_and_fmid(&pair.f, t)?.in_mid;
        let in_fc = induced_filtration_and_fmid(&pair.fc, t)?.in_mid;
        if !in_f || !in_fc {
            return Err(Error::PreconditionViolated(format!(
                "tensor {k} of U is not in F^mid ∩ F_c^mid"
            )));
        }
    }
    Ok(q)
}

/// Both tangent computations, without asserting that they agree.
pub fn orbit_tangent_routes<F: Field>(
    pair: &ConjugatePair<F>,
    u: &[Tensor<F::Elem>],
) -> Result<OrbitTangent<F>> {
    let q = check_orbit_preconditions(pair, u)?;
    let field = pair.field();
    let flag = &pair.f;
    let n = flag.rank();
    let b_inv = flag.basis().inverse(field)?;
    let ambient = tangent_ambient(flag.shape());

    let g = stabilizer_algebra(field, n, u)?;
    let grading = adjoint_hodge_numbers(&g, pair)?;
    let w = pair.weight() as i64;
    let positive: Vec<Vec<F::Elem>> = (1..=w)
        .flat_map(|i| grading.piece(i).basis().to_vec())
        .map(|v| tangent_projection(flag, &b_inv, &unflatten(n, &v)))
        .collect();
    let graded_image = Subspace::span(field, ambient, &positive);

    let a = stabilizer_algebra(field, n, &[Tensor::from_form(&q)])?;
    let a_basis = a.basis();
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for t in u {
        let degrees = flag.coordinate_degrees(t.index);
        let mid = mid_index(flag.weight(), t.index);
        let images: Vec<Tensor<F::Elem>> = a_basis
            .iter()
            .map(|x| flag.adapted_coordinates(&t.derivation(field, x)))
            .collect();
        for (k, &d) in degrees.iter().enumerate() {
            if mid.is_none_or(|m| d < m) {
                rows.push(images.iter().map(|im| im.coeffs[k].clone()).collect());
            }
        }
    }
    let combos = if a_basis.is_empty() {
        vec![]
    } else if rows.is_empty() {
        Matrix::identity(field, a_basis.len()).to_rows()
    } else {
        kernel(field, &Matrix::from_rows(rows)?)
    };
    let linear: Vec<Vec<F::Elem>> = combos
        .iter()
        .map(|c| {
            let xi = a_basis
                .iter()
                .zip(c)
                .fold(Matrix::zeros(field, n, n), |acc, (x, k)| {
                    acc.add(field, &x.scale(field, k))
                });
            tangent_projection(flag, &b_inv, &xi)
        })
        .collect();
    let linearized = Subspace::span(field, ambient, &linear);
    let e = grading.invariants().e;
    Ok(OrbitTangent {
        graded_image,
        linearized,
        e,
        grading,
    })
}

/// The tangent space to `O(F, U)` at `F`; fails with `TangentMismatch` if
/// the graded image and the direct linearization differ.
pub fn orbit_tangent<F: Field>(
    pair: &ConjugatePair<F>,
    u: &[Tensor<F::Elem>],
) -> Result<OrbitTangent<F>> {
    let t = orbit_tangent_routes(pair, u)?;
    if !t.agree() || t.graded_image.dim() != t.e {
        return Err(Error::TangentMismatch {
            graded: t.graded_image.dim(),
            linearized: t.linearized.dim(),
        });
    }
    Ok(t)
}

/// Whether `g ⊊ a`, with a witness in `a \ g` when proper.
pub fn proper_containment<F: Field>(
    g: &LieAlgebra<F>,
    a: &LieAlgebra<F>,
) -> (bool, Option<Matrix<F::Elem>>) {
    if !g.is_subalgebra_of(a) {
        return (false, None);
    }
    let witness = a
        .space()
        .complement_witness(g.field(), g.space())
        .map(|v| unflatten(g.rank(), &v));
    (witness.is_some(), witness)
}

/// Rank of a bilinear form.
pub fn form_rank<F: Field>(field: &F, q: &Matrix<F::Elem>) -> usize {
    rank(field, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rationals;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        Rationals.from_int(n)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn shape(h: &[usize]) -> FlagShape {
        FlagShape::new(h.to_vec()).unwrap()
    }

    fn alt2() -> Matrix<BigRational> {
        qm(&[&[0, 1], &[-1, 0]])
    }

    #[test]
    fn dual_filtration_of_a_line() {
        let f = Flag::standard(&Rationals, &shape(&[1, 1]));
        let e2s = Tensor::new(TensorIndex::new(0, 1), 2, vec![q(0), q(1)]).unwrap();
        let e1s = Tensor::new(TensorIndex::new(0, 1), 2, vec![q(1), q(0)]).unwrap();
        assert_eq!(induced_filtration_and_fmid(&f, &e2s).unwrap().step, Some(0));
        assert_eq!(
            induced_filtration_and_fmid(&f, &e1s).unwrap().step,
            Some(-1)
        );
    }

    #[test]
    fn alternating_form_is_always_mid() {
        let f = Flag::standard(&Rationals, &shape(&[1, 1]));
        let r = induced_filtration_and_fmid(&f, &Tensor::from_form(&alt2())).unwrap();
        assert!(r.in_mid);
        assert!(is_polarized(&f, &alt2()).unwrap());
        assert!(!is_polarized(&f, &Matrix::identity(&Rationals, 2)).unwrap());
    }

    #[test]
    fn weight_two_antidiagonal() {
        let f = Flag::standard(&Rationals, &shape(&[1, 1, 1]));
        let qf = qm(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        assert!(
            induced_filtration_and_fmid(&f, &Tensor::from_form(&qf))
                .unwrap()
                .in_mid
        );
        assert!(is_polarized(&f, &qf).unwrap());
        let fc = Flag::opposite_standard(&Rationals, &shape(&[1, 1, 1]));
        let pair = conjugate_decomposition(&f, &fc).unwrap();
        assert_eq!(pair.summands[2], vec![vec![q(1), q(0), q(0)]]);
        assert_eq!(pair.summands[1], vec![vec![q(0), q(1), q(0)]]);
        assert_eq!(pair.summands[0], vec![vec![q(0), q(0), q(1)]]);
    }

    #[test]
    fn opposedness() {
        let s = shape(&[1, 1]);
        let f = Flag::standard(&Rationals, &s);
        let fc = Flag::opposite_standard(&Rationals, &s);
        assert!(is_opposed(&f, &fc).unwrap());
        assert!(!is_opposed(&f, &f).unwrap());
        assert!(matches!(
            conjugate_decomposition(&f, &f),
            Err(Error::NotOpposed)
        ));
    }

    #[test]
    fn end_grading_dims() {
        let s = shape(&[1, 1]);
        let pair = conjugate_decomposition(
            &Flag::standard(&Rationals, &s),
            &Flag::opposite_standard(&Rationals, &s),
        )
        .unwrap();
        assert_eq!(end_grading(&pair).dims(), vec![1, 2, 1]);
        let s4 = shape(&[1, 1, 1, 1]);
        let pair4 = conjugate_decomposition(
            &Flag::standard(&Rationals, &s4),
            &Flag::opposite_standard(&Rationals, &s4),
        )
        .unwrap();
        assert_eq!(end_grading(&pair4).dims(), vec![1, 2, 3, 4, 3, 2, 1]);
    }

    #[test]
    fn stabilizers() {
        let qt = Tensor::from_form(&alt2());
        let sp2 = stabilizer_algebra(&Rationals, 2, std::slice::from_ref(&qt)).unwrap();
        assert_eq!(sp2.dim(), 3);
        let e1 = Tensor::from_vector(&[q(1), q(0)]);
        let small = stabilizer_algebra(&Rationals, 2, &[qt, e1]).unwrap();
        assert_eq!(small.dim(), 1);
        let all: Vec<Tensor<BigRational>> = (0..4)
            .map(|k| {
                let mut c = vec![q(0); 4];
                c[k] = q(1);
                Tensor::new(TensorIndex::new(1, 1), 2, c).unwrap()
            })
            .chain((0..2).map(|k| {
                let mut c = vec![q(0); 2];
                c[k] = q(1);
                Tensor::new(TensorIndex::new(1, 0), 2, c).unwrap()
            }))
            .collect();
        assert_eq!(stabilizer_algebra(&Rationals, 2, &all).unwrap().dim(), 0);
    }

    #[test]
    fn killing_of_borel() {
        let h = qm(&[&[1, 0], &[0, -1]]);
        let e = qm(&[&[0, 1], &[0, 0]]);
        let b = LieAlgebra::from_basis(&Rationals, 2, &[h.clone(), e.clone()]);
        let k = killing_form(&b, &[h, e]).unwrap();
        assert_eq!(k.gram, qm(&[&[4, 0], &[0, 0]]));
        assert!(!k.nondegenerate);
        let sl2 = stabilizer_algebra(&Rationals, 2, &[Tensor::from_form(&alt2())]).unwrap();
        assert!(killing_nondegenerate(&sl2).unwrap().nondegenerate);
    }

    #[test]
    fn invariants() {
        assert_eq!(
            numeric_invariants(&[1, 1, 2, 2, 2, 1, 1]),
            NumericInvariants {
                level: 3,
                e: 4,
                symmetric: true
            }
        );
        assert_eq!(
            numeric_invariants(&[1, 0, 0]),
            NumericInvariants {
                level: 0,
                e: 0,
                symmetric: false
            }
        );
    }

    #[test]
    fn tangent_of_the_projective_line() {
        let s = shape(&[1, 1]);
        let pair = conjugate_decomposition(
            &Flag::standard(&Rationals, &s),
            &Flag::opposite_standard(&Rationals, &s),
        )
        .unwrap();
        let t = orbit_tangent(&pair, &[Tensor::from_form(&alt2())]).unwrap();
        assert_eq!(t.e, 1);
        assert_eq!(t.graded_image.dim(), 1);
    }

    #[test]
    fn tensor_product_layout() {
        let u = Tensor::from_vector(&[q(1), q(2)]);
        let v = Tensor::new(TensorIndex::new(0, 1), 2, vec![q(3), q(5)]).unwrap();
        let uv = u.tensor_product(&Rationals, &v);
        assert_eq!(uv.coeffs, vec![q(3), q(5), q(6), q(10)]);
        let vu = v.tensor_product(&Rationals, &u);
        assert_eq!(vu.index, TensorIndex::new(1, 1));
        assert_eq!(vu.coeffs, uv.coeffs);
    }
}

//! Hodge and conjugate filtrations read off a Frobenius matrix over `ℤ/p^k`,
//! ordinariness, and the Frobenius eigenvector test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{Matrix, PrimeField, Subspace};
use crate::error::{Error, Result};
use crate::flags::{is_opposed, Flag};
use crate::jets::FlagShape;

/// Points in characteristic zero count as ordinary.
pub const CHAR_ZERO_IS_ORDINARY: bool = true;

/// The residue ring `ℤ/p^k`, with residues kept in `[0, p^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerRing {
    p: u64,
    k: u32,
    modulus: BigInt,
}

impl PrimePowerRing {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        PrimeField::new(p)?;
        Ok(PrimePowerRing {
            p,
            k,
            modulus: num_traits::pow(BigInt::from(p), k as usize),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }

    pub fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a - b))
    }

    /// The `p`-adic valuation of a residue, `k` for zero.
    pub fn valuation(&self, x: &BigInt) -> u32 {
        let mut x = self.reduce(x);
        if x.is_zero() {
            return self.k;
        }
        let p = BigInt::from(self.p);
        let mut v = 0;
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        v
    }

    pub fn unit_inverse(&self, x: &BigInt) -> Option<BigInt> {
        self.reduce(x).modinv(&self.modulus)
    }

    pub fn p_power(&self, e: u32) -> BigInt {
        self.reduce(&num_traits::pow(BigInt::from(self.p), e as usize))
    }

    pub fn to_residue_field(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        u64::try_from(r).unwrap()
    }
}

/// `left · φ · right = diag(p^{a_j})` with `left`, `right` invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub exponents: Vec<u32>,
    pub left: Matrix<BigInt>,
    pub right: Matrix<BigInt>,
}

fn swap_rows(m: &mut Matrix<BigInt>, a: usize, b: usize) {
    for c in 0..m.cols() {
        let x = m.get(a, c).clone();
        let y = m.get(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut Matrix<BigInt>, a: usize, b: usize) {
    for r in 0..m.rows() {
        let x = m.get(r, a).clone();
        let y = m.get(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

/// Row `dst -= c · row src`.
fn row_op(ring: &PrimePowerRing, m: &mut Matrix<BigInt>, dst: usize, src: usize, c: &BigInt) {
    for j in 0..m.cols() {
        let v = ring.sub(m.get(dst, j), &ring.mul(c, m.get(src, j)));
        m.set(dst, j, v);
    }
}

/// Column `dst -= c · column src`.
fn col_op(ring: &PrimePowerRing, m: &mut Matrix<BigInt>, dst: usize, src: usize, c: &BigInt) {
    for i in 0..m.rows() {
        let v = ring.sub(m.get(i, dst), &ring.mul(c, m.get(i, src)));
        m.set(i, dst, v);
    }
}

fn identity(n: usize) -> Matrix<BigInt> {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

/// Smith normal form over `ℤ/p^k` by valuation-minimal pivoting.
pub fn smith_form(ring: &PrimePowerRing, phi: &Matrix<BigInt>) -> Result<SmithForm> {
    if !phi.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Frobenius matrix is {}x{}",
            phi.rows(),
            phi.cols()
        )));
    }
    let n = phi.rows();
    let mut a = phi.map(|x| ring.reduce(x));
    let mut left = identity(n);
    let mut right = identity(n);
    let mut exponents = Vec::with_capacity(n);
    for t in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                let v = ring.valuation(a.get(i, j));
                if best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, i, j) = best.unwrap();
        if v == ring.precision() {
            exponents.extend(std::iter::repeat_n(v, n - t));
            break;
        }
        swap_rows(&mut a, t, i);
        swap_rows(&mut left, t, i);
        swap_cols(&mut a, t, j);
        swap_cols(&mut right, t, j);
        let pv = ring.p_power(v);
        let unit = a.get(t, t) / &pv;
        let u_inv = ring.unit_inverse(&unit).expect("pivot cofactor is a unit");
        for c in 0..n {
            a.set(t, c, ring.mul(&u_inv, a.get(t, c)));
            left.set(t, c, ring.mul(&u_inv, left.get(t, c)));
        }
        for r in 0..n {
            if r != t && !a.get(r, t).is_zero() {
                let c = a.get(r, t) / &pv;
                row_op(ring, &mut a, r, t, &c);
                row_op(ring, &mut left, r, t, &c);
            }
        }
        for c in 0..n {
            if c != t && !a.get(t, c).is_zero() {
                let f = a.get(t, c) / &pv;
                col_op(ring, &mut a, c, t, &f);
                col_op(ring, &mut right, c, t, &f);
            }
        }
        exponents.push(v);
    }
    Ok(SmithForm {
        exponents,
        left,
        right,
    })
}

/// A free `ℤ/p^k`-module with a Frobenius matrix and the expected Hodge
/// numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusModule {
    ring: PrimePowerRing,
    frobenius: Matrix<BigInt>,
    expected: FlagShape,
}

impl FrobeniusModule {
    pub fn new(p: u64, k: u32, frobenius: Matrix<BigInt>, expected: FlagShape) -> Result<Self> {
        let ring = PrimePowerRing::new(p, k)?;
        if !frobenius.is_square() || frobenius.rows() != expected.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} Frobenius matrix for rank {}",
                frobenius.rows(),
                frobenius.cols(),
                expected.rank()
            )));
        }
        let frobenius = frobenius.map(|x| ring.reduce(x));
        Ok(FrobeniusModule {
            ring,
            frobenius,
            expected,
        })
    }

    pub fn from_ints(p: u64, k: u32, rows: &[Vec<i64>], expected: FlagShape) -> Result<Self> {
        let m = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )?;
        Self::new(p, k, m, expected)
    }

    pub fn ring(&self) -> &PrimePowerRing {
        &self.ring
    }

    pub fn prime(&self) -> u64 {
        self.ring.p
    }

    pub fn precision(&self) -> u32 {
        self.ring.k
    }

    pub fn rank(&self) -> usize {
        self.expected.rank()
    }

    pub fn weight(&self) -> u32 {
        self.expected.weight()
    }

    pub fn frobenius(&self) -> &Matrix<BigInt> {
        &self.frobenius
    }

    pub fn expected_shape(&self) -> &FlagShape {
        &self.expected
    }

    pub fn residue_field(&self) -> PrimeField {
        PrimeField::new(self.ring.p).unwrap()
    }

    fn require_precision(&self) -> Result<()> {
        if self.ring.k < self.weight() + 1 {
            return Err(Error::PrecisionTooLow {
                precision: self.ring.k,
                weight: self.weight(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rank())
            .map(|i| {
                let s: BigInt = (0..self.rank())
                    .map(|j| self.frobenius.get(i, j) * &v[j])
                    .sum();
                self.ring.reduce(&s)
            })
            .collect()
    }
}

/// The filtrations together with the data they were read from.
#[derive(Clone, Debug)]
pub struct MazurFiltrations {
    pub hodge: Flag<PrimeField>,
    pub conjugate: Flag<PrimeField>,
    /// Smith exponents `a_j` of the Frobenius matrix.
    pub exponents: Vec<u32>,
    /// `v_p(det φ)`, equal to `Σ_i i·h^i` when the shape is consistent.
    pub det_valuation: u32,
    pub expected_det_valuation: u32,
}

fn residue_columns(
    ring: &PrimePowerRing,
    field: &PrimeField,
    m: &Matrix<BigInt>,
    keep: impl Fn(usize) -> bool,
) -> Subspace<u64> {
    let cols: Vec<Vec<u64>> = (0..m.cols())
        .filter(|&j| keep(j))
        .map(|j| m.col(j).iter().map(|x| ring.to_residue_field(x)).collect())
        .collect();
    Subspace::span(field, m.rows(), &cols)
}

/// `F^i = {x : φx ∈ p^i H} mod p` and `F_c^{w−i} = (Im φ ∩ p^i H)/p^i mod p`.
pub fn mazur_filtrations(module: &FrobeniusModule) -> Result<MazurFiltrations> {
    module.require_precision()?;
    let w = module.weight();
    let m = module.rank();
    let ring = &module.ring;
    let field = module.residue_field();
    let smith = smith_form(ring, &module.frobenius)?;
    let a = &smith.exponents;
    if let Some(&big) = a.iter().find(|&&x| x > w) {
        return Err(Error::ShapeMismatch(format!(
            "Frobenius has an elementary divisor of valuation {} beyond weight {w}",
            if big >= ring.k {
                format!(">={}", ring.k)
            } else {
                big.to_string()
            }
        )));
    }
    let mut hodge = vec![0usize; w as usize + 1];
    for &x in a {
        hodge[x as usize] += 1;
    }
    if hodge != module.expected.hodge_numbers() {
        return Err(Error::ShapeMismatch(format!(
            "computed Hodge numbers {:?}, expected {:?}",
            hodge,
            module.expected.hodge_numbers()
        )));
    }
    let f_steps: Vec<Subspace<u64>> = (0..=w)
        .map(|i| residue_columns(ring, &field, &smith.right, |j| a[j] >= i))
        .collect();
    let left_mod_p = smith.left.map(|x| ring.to_residue_field(x));
    let u = left_mod_p
        .inverse(&field)
        .map_err(|_| Error::SingularMatrix)?
        .map(|&x| BigInt::from(x));
    let fc_steps: Vec<Subspace<u64>> = (0..=w)
        .map(|q| residue_columns(ring, &field, &u, |j| a[j] + q <= w))
        .collect();
    let det_valuation = a.iter().sum();
    let expected_det_valuation = (0..=w).map(|i| i * hodge[i as usize] as u32).sum();
    debug_assert_eq!(f_steps[0].dim(), m);
    Ok(MazurFiltrations {
        hodge: Flag::from_steps(&field, &f_steps)?,
        conjugate: Flag::from_steps(&field, &fc_steps)?,
        exponents: smith.exponents,
        det_valuation,
        expected_det_valuation,
    })
}

/// Ordinary means the Hodge and conjugate filtrations are opposed.
pub fn is_ordinary(f: &Flag<PrimeField>, fc: &Flag<PrimeField>) -> Result<bool> {
    is_opposed(f, fc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigvecVerdict {
    /// `v mod p ∈ F^{k′} ∩ F_c^{k′}`.
    Ok,
    /// `v ≡ 0 mod p`.
    ZeroReduction,
    /// `φv ≠ p^{k′}v`.
    NotEigenvector,
    /// A genuine eigenvector outside one of the two steps.
    ContainmentFails { in_hodge: bool, in_conjugate: bool },
}

/// The containment half of the eigenvector test on explicit flags.
pub fn classify_eigvec(
    f: &Flag<PrimeField>,
    fc: &Flag<PrimeField>,
    v_mod_p: &[u64],
    power: u32,
) -> EigvecVerdict {
    let field = *f.field();
    if v_mod_p.iter().all(|&x| x == 0) {
        return EigvecVerdict::ZeroReduction;
    }
    let in_hodge = f.step(power as i64).contains(&field, v_mod_p);
    let in_conjugate = fc.step(power as i64).contains(&field, v_mod_p);
    if in_hodge && in_conjugate {
        EigvecVerdict::Ok
    } else {
        EigvecVerdict::ContainmentFails {
            in_hodge,
            in_conjugate,
        }
    }
}

/// Checks that `φv = p^{k′}v` forces `v mod p ∈ F^{k′} ∩ F_c^{k′}`.
pub fn frobenius_eigvec_check(
    module: &FrobeniusModule,
    v: &[BigInt],
    power: u32,
) -> Result<EigvecVerdict> {
    if module.weight() != 2 * power {
        return Err(Error::PreconditionViolated(format!(
            "weight {} is not 2*{power}",
            module.weight()
        )));
    }
    module.require_precision()?;
    if v.len() != module.rank() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in rank {}",
            v.len(),
            module.rank()
        )));
    }
    let ring = &module.ring;
    let v: Vec<BigInt> = v.iter().map(|x| ring.reduce(x)).collect();
    let v_mod_p: Vec<u64> = v.iter().map(|x| ring.to_residue_field(x)).collect();
    if v_mod_p.iter().all(|&x| x == 0) {
        return Ok(EigvecVerdict::ZeroReduction);
    }
    let scale = ring.p_power(power);
    let phi_v = module.apply(&v);
    if phi_v.iter().zip(&v).any(|(a, b)| *a != ring.mul(&scale, b)) {
        return Ok(EigvecVerdict::NotEigenvector);
    }
    let filt = mazur_filtrations(module)?;
    Ok(classify_eigvec(
        &filt.hodge,
        &filt.conjugate,
        &v_mod_p,
        power,
    ))
}

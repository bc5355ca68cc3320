use std::fmt;

/// Exponent vector of a monomial `t₁^{q₁}⋯t_d^{q_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if some exponent would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Multinomial factorial `Π q_ℓ!`.
    pub fn factorial(&self) -> u128 {
        self.0
            .iter()
            .map(|&e| (1..=e as u128).product::<u128>())
            .product()
    }

    /// Product of binomials `Π binom(q_ℓ, a_ℓ)` for `a ≤ q`.
    pub fn binomial(&self, a: &MultiIndex) -> u128 {
        self.0
            .iter()
            .zip(&a.0)
            .map(|(&q, &a)| binom(q as u128, a as u128))
            .product()
    }

    /// All multi-indices `a ≤ self` componentwise.
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.dim()))];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=e).map(move |k| {
                        let mut v = m.0.clone();
                        v.push(k);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All multi-indices of dimension `d` and total degree at most `r`, in
/// graded-lexicographic order: by degree, then lexicographically with larger
/// leading exponents first, so `(d=2, r=2)` gives
/// `(0,0),(1,0),(0,1),(2,0),(1,1),(0,2)`.
pub fn multiindex_enumerate(d: usize, r: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(binom((d + r) as u128, d as u128) as usize);
    for deg in 0..=r {
        let mut cur = vec![0u32; d];
        push_of_degree(&mut out, &mut cur, 0, deg as u32);
    }
    out
}

fn push_of_degree(out: &mut Vec<MultiIndex>, cur: &mut [u32], pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(MultiIndex(cur.to_vec()));
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(MultiIndex(vec![]));
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        push_of_degree(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// Number of monomials of degree ≤ r in d variables.
pub fn monomial_count(d: usize, r: usize) -> usize {
    binom((d + r) as u128, d as u128) as usize
}

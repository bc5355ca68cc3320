//! The acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p perjet-cli --test acceptance`.

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use perjet_core::generate::{
    coordinate_names, random_flat_chart, random_hodge_tensors, random_invertible, random_jet,
    random_polarized_pair, random_polynomial_map, random_series_without_constant, random_shape,
    random_symmetric_shape, GaugeChart,
};
use perjet_core::{
    adjoint_hodge_numbers, conjugate_decomposition, curvature_is_flat, equivariance_check,
    eval_eta, flag_jet_equal, frobenius_eigvec_check, is_ordinary, jet_compose_map,
    jet_reparametrize, killing_form, killing_nondegenerate, mazur_filtrations, orbit_tangent,
    orbit_tangent_routes, parse_chart_file, period_dimension, pullback, reduce_chart_mod_p_at,
    reduce_flagjet, reduce_jet, reduce_matrix, reparametrize_flagjet, solve_limp,
    stabilizer_algebra, verify_flat_frame, xi_eval_with, ChartMap, ConjugatePair, ConnectionChart,
    DerivativeOrder, EigvecVerdict, Error, Field, Flag, FlagShape, FrameAssignment, FrameCheck,
    FrobeniusModule, Jet, LieAlgebra, Matrix, PrimeField, Rationals, Ring, SeriesRing, Tensor,
    WeilAlgebra,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

const PRIMES: [u64; 3] = [5, 7, 11];

/// A flat chart over a prime field with a point and an invertible frame there.
struct PrimeChart {
    p: u64,
    chart: ConnectionChart<PrimeField>,
    point: Vec<u64>,
    frame: Matrix<u64>,
    r: usize,
}

struct Corpus {
    rational: Vec<(GaugeChart, Matrix<num_rational::BigRational>, usize)>,
    prime: Vec<PrimeChart>,
}

fn build_corpus(rng: &mut ChaCha8Rng) -> Corpus {
    let mut rational = Vec::new();
    for _ in 0..20 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=4);
        let r = rng.random_range(0..=4);
        let shape = random_shape(rng, m, 3);
        let g = random_flat_chart(rng, n, &shape, &PRIMES);
        let f0 = random_invertible(rng, &Rationals, m);
        rational.push((g, f0, r));
    }
    let mut prime = Vec::new();
    for p in PRIMES {
        let field = PrimeField::new(p).unwrap();
        while prime.iter().filter(|c: &&PrimeChart| c.p == p).count() < 12 {
            let n = rng.random_range(1..=3);
            let m = rng.random_range(1..=4);
            let r = rng.random_range(0..=4usize.min(p as usize - 1));
            let shape = random_shape(rng, m, 3);
            let g = random_flat_chart(rng, n, &shape, &[p]);
            let Ok((chart, point)) = reduce_chart_mod_p_at(&g.chart, p, &g.basepoint) else {
                continue;
            };
            let frame = random_invertible(rng, &field, m);
            prime.push(PrimeChart {
                p,
                chart,
                point,
                frame,
                r,
            });
        }
    }
    Corpus { rational, prime }
}

fn frame_ok<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
    f0: &Matrix<F::Elem>,
    r: usize,
) -> Result<(), String> {
    ensure!(
        curvature_is_flat(chart).is_flat(),
        "generated chart is not flat"
    );
    let limp = ok(solve_limp(chart, s, f0, r), "solve_limp")?;
    let check = ok(verify_flat_frame(&limp), "verify_flat_frame")?;
    ensure!(check == FrameCheck::Ok, "verify_flat_frame: {check}");
    Ok(())
}

fn criterion_1(c: &Corpus) -> Verdict {
    for (g, f0, r) in &c.rational {
        frame_ok(&g.chart, &g.basepoint, f0, *r)?;
    }
    for pc in &c.prime {
        frame_ok(&pc.chart, &pc.point, &pc.frame, pc.r)?;
    }
    ensure!(c.rational.len() + c.prime.len() >= 50, "corpus too small");
    Ok(format!(
        "{} charts over Q and {} over F_5, F_7, F_11 (n <= 3, m <= 4, r <= 4)",
        c.rational.len(),
        c.prime.len()
    ))
}

fn orderings_agree<F: Field>(
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
    f0: &Matrix<F::Elem>,
    r: usize,
    seed: u64,
) -> Result<usize, String> {
    let alg = ok(
        WeilAlgebra::new(chart.field().clone(), chart.n(), r),
        "algebra",
    )?;
    for q in alg.monomials() {
        let a = ok(
            xi_eval_with(chart, s, f0, q, DerivativeOrder::Random(seed)),
            "xi",
        )?;
        let b = ok(
            xi_eval_with(chart, s, f0, q, DerivativeOrder::Random(seed ^ 0x9e37)),
            "xi",
        )?;
        let c = ok(
            xi_eval_with(chart, s, f0, q, DerivativeOrder::FirstNonzero),
            "xi",
        )?;
        ensure!(a == b && b == c, "xi differs between orderings at {q:?}");
    }
    Ok(alg.len())
}

fn criterion_2(c: &Corpus, rng: &mut ChaCha8Rng) -> Verdict {
    let mut entries = 0;
    for (g, f0, r) in &c.rational {
        entries += orderings_agree(&g.chart, &g.basepoint, f0, *r, rng.random())?;
    }
    for pc in &c.prime {
        entries += orderings_agree(&pc.chart, &pc.point, &pc.frame, pc.r, rng.random())?;
    }
    Ok(format!(
        "{} charts, {entries} xi matrices compared under three orderings",
        c.rational.len() + c.prime.len()
    ))
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Verdict {
    let mut cases = 0;
    while cases < 30 {
        let p = PRIMES[cases % 3];
        let field = PrimeField::new(p).unwrap();
        let n = rng.random_range(1..=2);
        let m = rng.random_range(1..=3);
        let d = rng.random_range(1..=2);
        let r = rng.random_range(0..=3);
        let shape = random_shape(rng, m, 2);
        let g = random_flat_chart(rng, n, &shape, &[p]);
        let f0 = random_invertible(rng, &Rationals, m);
        let Ok(f0_p) = reduce_matrix(&field, &f0) else {
            continue;
        };
        if !f0_p.is_invertible(&field) {
            continue;
        }
        let alg = WeilAlgebra::new(Rationals, d, r).unwrap();
        let j = random_jet(rng, &alg, &g.basepoint);
        let over_q = ok(
            eval_eta(
                &g.chart,
                &j,
                &FrameAssignment::new(&Rationals, g.basepoint.clone(), f0).unwrap(),
                r,
            ),
            "eval_eta over Q",
        )?;
        let (chart_p, s_p) = ok(
            reduce_chart_mod_p_at(&g.chart, p, &g.basepoint),
            "reduce chart",
        )?;
        let j_p = ok(reduce_jet(&j, p), "reduce jet")?;
        let frame_p = FrameAssignment::new(&field, s_p, f0_p).unwrap();
        let over_p = ok(eval_eta(&chart_p, &j_p, &frame_p, r), "eval_eta over F_p")?;
        let reduced = ok(reduce_flagjet(&over_q, p), "reduce flag jet")?;
        ensure!(
            reduced.representative() == over_p.representative(),
            "reduction of the Q flag jet differs from the F_{p} flag jet"
        );
        ensure!(
            ok(flag_jet_equal(&reduced, &over_p), "flag_jet_equal")?,
            "flag jets differ"
        );
        cases += 1;
    }
    Ok(format!(
        "{cases} charts, jets and frames reduced mod 5, 7, 11"
    ))
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Verdict {
    let mut cases = 0;
    while cases < 30 {
        let n = rng.random_range(1..=2);
        let n_src = rng.random_range(1..=2);
        let m = rng.random_range(1..=3);
        let d = rng.random_range(1..=2);
        let r = rng.random_range(0..=3);
        let shape = random_shape(rng, m, 2);
        let g = random_flat_chart(rng, n, &shape, &[]);
        let y0: Vec<_> = (0..n_src)
            .map(|_| Rationals.from_int(rng.random_range(-2..=2)))
            .collect();
        let map = random_polynomial_map(rng, &Rationals, &y0, &g.basepoint);
        let pulled = ok(
            pullback(&g.chart, &map, coordinate_names(n_src)),
            "pullback",
        )?;
        let f0 = random_invertible(rng, &Rationals, m);
        let alg = WeilAlgebra::new(Rationals, d, r).unwrap();
        let j = random_jet(rng, &alg, &y0);
        let lhs = ok(
            eval_eta(
                &pulled,
                &j,
                &FrameAssignment::new(&Rationals, y0.clone(), f0.clone()).unwrap(),
                r,
            ),
            "eval_eta on the pullback",
        )?;
        let pushed = ok(
            jet_compose_map(&ChartMap::Rational(map), &j),
            "jet_compose_map",
        )?;
        let rhs = ok(
            eval_eta(
                &g.chart,
                &pushed,
                &FrameAssignment::new(&Rationals, g.basepoint.clone(), f0).unwrap(),
                r,
            ),
            "eval_eta on the image jet",
        )?;
        ensure!(
            ok(flag_jet_equal(&lhs, &rhs), "flag_jet_equal")?,
            "pullback and composition disagree"
        );
        cases += 1;
    }
    Ok(format!("{cases} random polynomial maps"))
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Verdict {
    let mut cases = 0;
    while cases < 30 {
        let n = rng.random_range(1..=2);
        let m = rng.random_range(1..=3);
        let d_inner = rng.random_range(1..=2);
        let d_outer = rng.random_range(1..=2);
        let r = rng.random_range(0..=3);
        let shape = random_shape(rng, m, 2);
        let g = random_flat_chart(rng, n, &shape, &[]);
        let frame = FrameAssignment::new(
            &Rationals,
            g.basepoint.clone(),
            random_invertible(rng, &Rationals, m),
        )
        .unwrap();
        let inner = WeilAlgebra::new(Rationals, d_inner, r).unwrap();
        let outer = WeilAlgebra::new(Rationals, d_outer, r).unwrap();
        let j = random_jet(rng, &inner, &g.basepoint);
        let v: Vec<_> = (0..d_inner)
            .map(|_| random_series_without_constant(rng, &outer))
            .collect();
        let lhs = ok(
            eval_eta(
                &g.chart,
                &ok(jet_reparametrize(&v, &j), "reparametrize jet")?,
                &frame,
                r,
            ),
            "eval_eta",
        )?;
        let rhs = ok(
            reparametrize_flagjet(&v, &ok(eval_eta(&g.chart, &j, &frame, r), "eval_eta")?),
            "reparametrize flag jet",
        )?;
        ensure!(
            ok(flag_jet_equal(&lhs, &rhs), "flag_jet_equal")?,
            "reparametrization square fails"
        );
        cases += 1;
    }
    Ok(format!("{cases} random reparametrizations"))
}

fn equivariant<F: Field>(
    rng: &mut ChaCha8Rng,
    chart: &ConnectionChart<F>,
    s: &[F::Elem],
) -> Result<(), String> {
    let field = chart.field();
    let m = chart.rank();
    let d = rng.random_range(1..=2);
    let r = rng.random_range(0..=3);
    let alg = WeilAlgebra::new(field.clone(), d, r).unwrap();
    let j = random_jet(rng, &alg, s);
    let frame = FrameAssignment::new(field, s.to_vec(), random_invertible(rng, field, m)).unwrap();
    let g = random_invertible(rng, field, m);
    ensure!(
        ok(
            equivariance_check(chart, &j, &frame, &g),
            "equivariance_check"
        )?,
        "equivariance fails"
    );
    Ok(())
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Verdict {
    let mut charts = Vec::new();
    for _ in 0..8 {
        let n = rng.random_range(1..=2);
        let m = rng.random_range(1..=3);
        let shape = random_shape(rng, m, 2);
        charts.push(random_flat_chart(rng, n, &shape, &PRIMES));
    }
    let mut tuples = 0;
    for k in 0..60 {
        let g = &charts[k % charts.len()];
        equivariant(rng, &g.chart, &g.basepoint)?;
        tuples += 1;
    }
    for k in 0..60 {
        let p = PRIMES[k % 3];
        let g = &charts[k % charts.len()];
        let (chart, s) = ok(reduce_chart_mod_p_at(&g.chart, p, &g.basepoint), "reduce")?;
        equivariant(rng, &chart, &s)?;
        tuples += 1;
    }
    Ok(format!(
        "{tuples} (chart, jet, frame, g) tuples over Q and F_p"
    ))
}

fn standard_pair<F: Field>(field: &F, h: &[usize]) -> ConjugatePair<F> {
    let shape = FlagShape::new(h.to_vec()).unwrap();
    conjugate_decomposition(
        &Flag::standard(field, &shape),
        &Flag::opposite_standard(field, &shape),
    )
    .unwrap()
}

fn matrix<F: Field>(field: &F, rows: &[&[i64]]) -> Matrix<F::Elem> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
            .collect(),
    )
    .unwrap()
}

fn alternating2<F: Field>(field: &F) -> Matrix<F::Elem> {
    matrix(field, &[&[0, 1], &[-1, 0]])
}

fn symplectic4<F: Field>(field: &F) -> Matrix<F::Elem> {
    matrix(
        field,
        &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]],
    )
}

/// Tangent equality and Killing data for one generated pair.
struct TangentSample {
    nondegenerate: bool,
    symmetric: bool,
}

fn tangent_sample<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> Result<TangentSample, String> {
    let shape = random_symmetric_shape(rng, 4, 3);
    let pp = random_polarized_pair(rng, field, &shape);
    let mut u = vec![Tensor::from_form(&pp.q)];
    let extra = rng.random_range(0..=2);
    u.extend(random_hodge_tensors(rng, &pp, extra));
    let t = ok(orbit_tangent_routes(&pp.pair, &u), "orbit_tangent_routes")?;
    ensure!(
        t.agree() && t.graded_image.dim() == t.e,
        "routes differ: graded {} vs linearized {} (e = {})",
        t.graded_image.dim(),
        t.linearized.dim(),
        t.e
    );
    let g = ok(stabilizer_algebra(field, shape.rank(), &u), "stabilizer")?;
    let k = ok(killing_nondegenerate(&g), "killing")?;
    let graded = ok(adjoint_hodge_numbers(&g, &pp.pair), "grading")?;
    Ok(TangentSample {
        nondegenerate: k.nondegenerate,
        symmetric: graded.invariants().symmetric,
    })
}

fn pinned_tangents() -> Result<String, String> {
    let q = Rationals;
    let p1 = standard_pair(&q, &[1, 1]);
    let t = ok(
        orbit_tangent(&p1, &[Tensor::from_form(&alternating2(&q))]),
        "e=1 case",
    )?;
    ensure!(t.e == 1 && t.agree(), "m=2, U={{Q}}: e = {}", t.e);

    let e1 = [q.one(), q.zero()];
    let with_square = vec![
        Tensor::from_form(&alternating2(&q)),
        Tensor::from_vector(&e1).tensor_product(&q, &Tensor::from_vector(&e1)),
    ];
    let stab = ok(
        stabilizer_algebra(&q, 2, &with_square),
        "stabilizer of {Q, e1(x)e1}",
    )?;
    let graded = ok(adjoint_hodge_numbers(&stab, &p1), "grading of {Q, e1(x)e1}")?;
    ensure!(
        graded.hodge_numbers() == vec![1, 0, 0] && graded.invariants().e == 0,
        "U={{Q, e1(x)e1}}: numbers {:?}",
        graded.hodge_numbers()
    );
    ensure!(
        matches!(
            orbit_tangent_routes(&p1, &with_square),
            Err(Error::PreconditionViolated(_))
        ),
        "U={{Q, e1(x)e1}} is outside F_c^mid and must be rejected by the tangent comparison"
    );
    let e11 = Tensor::from_endomorphism(&matrix(&q, &[&[1, 0], &[0, 0]]));
    let torus = ok(
        orbit_tangent(&p1, &[Tensor::from_form(&alternating2(&q)), e11]),
        "e=0 case",
    )?;
    ensure!(
        torus.e == 0 && torus.agree(),
        "U={{Q, e1(x)e1*}}: e = {}",
        torus.e
    );

    let p4 = standard_pair(&q, &[1, 1, 1, 1]);
    let t4 = ok(
        orbit_tangent(&p4, &[Tensor::from_form(&symplectic4(&q))]),
        "e=4 case",
    )?;
    ensure!(t4.e == 4 && t4.agree(), "m=4 symplectic: e = {}", t4.e);
    Ok(
        "pinned e = 1, e = 0 (graded route for {Q, e1(x)e1}, both routes for {Q, e1(x)e1*}), e = 4"
            .into(),
    )
}

fn criterion_7_and_8(rng: &mut ChaCha8Rng) -> (Verdict, Verdict) {
    let mut samples = Vec::new();
    let mut run = || -> Result<usize, String> {
        for _ in 0..40 {
            samples.push(tangent_sample(rng, &Rationals)?);
        }
        for p in [5u64, 7] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..35 {
                samples.push(tangent_sample(rng, &f)?);
            }
        }
        Ok(samples.len())
    };
    let seven = run().and_then(|count| {
        let pinned = pinned_tangents()?;
        Ok(format!(
            "{count} generated pairs over Q, F_5, F_7; {pinned}"
        ))
    });
    let eight = (|| -> Verdict {
        let nondeg = samples.iter().filter(|s| s.nondegenerate).count();
        ensure!(!samples.is_empty(), "no generated examples");
        ensure!(
            samples.iter().all(|s| !s.nondegenerate || s.symmetric),
            "a nondegenerate Killing form with asymmetric adjoint Hodge numbers"
        );
        let q = Rationals;
        let h = matrix(&q, &[&[1, 0], &[0, -1]]);
        let e = matrix(&q, &[&[0, 1], &[0, 0]]);
        let borel = LieAlgebra::from_basis(&q, 2, &[h.clone(), e.clone()]);
        let k = ok(killing_form(&borel, &[h, e]), "Borel Killing form")?;
        ensure!(
            k.gram == matrix(&q, &[&[4, 0], &[0, 0]]),
            "Borel Gram {:?}",
            k.gram
        );
        ensure!(
            !k.nondegenerate,
            "Borel Killing form reported nondegenerate"
        );
        let graded = ok(
            adjoint_hodge_numbers(&borel, &standard_pair(&q, &[1, 1])),
            "Borel grading",
        )?;
        ensure!(
            graded.hodge_numbers() == vec![1, 1, 0],
            "Borel numbers {:?}",
            graded.hodge_numbers()
        );
        Ok(format!(
            "{nondeg} of {} generated stabilizers nondegenerate, all symmetric; Borel Gram [[4,0],[0,0]], numbers (1,1,0)",
            samples.len()
        ))
    })();
    (seven, eight)
}

fn criterion_9() -> Verdict {
    let q = Rationals;
    let pair = standard_pair(&q, &[1, 1, 1, 1]);
    let form = symplectic4(&q);
    let sp4 = ok(
        stabilizer_algebra(&q, 4, &[Tensor::from_form(&form)]),
        "stabilizer",
    )?;
    ensure!(sp4.dim() == 10, "dim sp4 = {}", sp4.dim());
    let graded = ok(adjoint_hodge_numbers(&sp4, &pair), "grading")?;
    let h = graded.hodge_numbers();
    let inv = graded.invariants();
    ensure!(h == vec![1, 1, 2, 2, 2, 1, 1], "numbers {h:?}");
    ensure!(inv.level == 3, "level {}", inv.level);
    let pbar = ok(period_dimension(&pair, &form), "period dimension")?;
    ensure!(pbar == 4, "P = {pbar}");
    Ok("numbers (1,1,2,2,2,1,1), level 3, period dimension 4".into())
}

fn criterion_10() -> Verdict {
    let module = |p: u64, k: u32, rows: &[Vec<i64>], h: Vec<usize>| {
        FrobeniusModule::from_ints(p, k, rows, FlagShape::new(h).unwrap()).unwrap()
    };
    let ordinary = |m: &FrobeniusModule| -> Result<bool, String> {
        let f = ok(mazur_filtrations(m), "mazur")?;
        ok(is_ordinary(&f.hodge, &f.conjugate), "is_ordinary")
    };
    let diag = module(5, 2, &[vec![1, 0], vec![0, 5]], vec![1, 1]);
    ensure!(ordinary(&diag)?, "diag(1,5) over Z/25 is not ordinary");
    let ss = module(5, 2, &[vec![0, 5], vec![1, 0]], vec![1, 1]);
    ensure!(!ordinary(&ss)?, "[[0,5],[1,0]] is ordinary");
    let w2 = module(
        5,
        3,
        &[vec![1, 0, 0], vec![0, 5, 0], vec![0, 0, 25]],
        vec![1, 1, 1],
    );
    let v: Vec<BigInt> = [0, 1, 0].iter().map(|&x| BigInt::from(x)).collect();
    let verdict = ok(frobenius_eigvec_check(&w2, &v, 1), "eigenvector check")?;
    ensure!(
        verdict == EigvecVerdict::Ok,
        "diag(1,5,25), v = e2: {verdict:?}"
    );
    Ok("diag(1,5) ordinary, [[0,5],[1,0]] not ordinary, diag(1,5,25) eigenvector e2 ok".into())
}

fn fixture_periods() -> Vec<Vec<num_rational::BigRational>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/legendre_periods.txt");
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            l.split_whitespace()
                .skip(1)
                .map(|x| x.parse().unwrap())
                .collect()
        })
        .collect()
}

/// `2(n+1)(n+2)a_{n+2} + 3(n+1)²a_{n+1} + (n+½)²a_n = 0` at `λ = 2 + u`.
fn hypergeometric_recursion_holds(a: &[num_rational::BigRational]) -> bool {
    use num_rational::BigRational as Q;
    let int = |x: i64| Q::from_integer(x.into());
    (0..a.len().saturating_sub(2)).all(|n| {
        let k = n as i64;
        let half = int(2 * k + 1) / int(2);
        int(2 * (k + 1) * (k + 2)) * &a[n + 2]
            + int(3 * (k + 1) * (k + 1)) * &a[n + 1]
            + &half * &half * &a[n]
            == int(0)
    })
}

fn legendre_periods(order: usize) -> Result<(bool, Vec<Vec<num_rational::BigRational>>), String> {
    let root = common::workspace_root();
    let file = ok(
        parse_chart_file(&std::fs::read_to_string(root.join("charts/legendre.toml")).unwrap()),
        "legendre.toml",
    )?;
    let chart = ok(file.require_chart(), "chart")?;
    let q = Rationals;
    let two = vec![q.from_int(2)];
    let alg = WeilAlgebra::new(q, 1, order).unwrap();
    let t = perjet_core::TruncatedSeries::variable(&alg, 0);
    let j = Jet::new(
        &alg,
        vec![t
            .try_add(&perjet_core::TruncatedSeries::constant(&alg, q.from_int(2)))
            .unwrap()],
    )
    .unwrap();
    let fj = ok(
        eval_eta(chart, &j, &FrameAssignment::identity(&q, two, 2), order),
        "eval_eta",
    )?;
    let frame = ok(
        fj.representative().inverse(&SeriesRing(alg.clone())),
        "invert",
    )?;
    let periods = (0..2).map(|c| frame.get(0, c).coeffs().to_vec()).collect();
    Ok((fj.is_constant(), periods))
}

fn criterion_11() -> Verdict {
    let (constant_1, _) = legendre_periods(1)?;
    ensure!(!constant_1, "flag jet constant at order 1");
    let (constant_3, periods) = legendre_periods(3)?;
    ensure!(!constant_3, "flag jet constant at order 3");
    let fixture = fixture_periods();
    for (k, col) in periods.iter().enumerate() {
        ensure!(
            hypergeometric_recursion_holds(col),
            "period {} fails the recursion",
            k + 1
        );
        ensure!(
            col[..] == fixture[k][..col.len()],
            "period {} differs from the series fixture",
            k + 1
        );
    }
    let run = common::run_binary(&[
        "eval-jet",
        "charts/legendre.toml",
        "--point",
        "λ=2",
        "--jet",
        "t",
        "--order",
        "3",
        "--frame",
        "identity",
    ]);
    ensure!(run.exit == 0, "eval-jet exit {}", run.exit);
    ensure!(
        run.stdout.contains("flag_jet_constant: false"),
        "eval-jet reports a constant flag jet"
    );
    let (_, long) = legendre_periods(8)?;
    for (k, col) in long.iter().enumerate() {
        ensure!(
            hypergeometric_recursion_holds(col),
            "period {} fails the recursion at order 8",
            k + 1
        );
        ensure!(
            col[..] == fixture[k][..col.len()],
            "period {} differs from the fixture at order 8",
            k + 1
        );
    }
    Ok("eval-jet at 2, r = 3 nonconstant from order 1; both periods match the series fixture to order 8".into())
}

fn criterion_12() -> Verdict {
    let mut failures = Vec::new();
    for case in common::CASES {
        if let Err(e) = common::check_case(case) {
            failures.push(e);
        }
    }
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    let bad = common::run_binary(&["check-flat", "crates/cli/tests/fixtures/bad_variable.toml"]);
    ensure!(
        bad.exit == 2
            && bad.stderr.contains("line 11")
            && bad.stderr.contains("connection.c.1.2.1"),
        "malformed chart diagnostic: {}",
        bad.stderr
    );
    let codes: Vec<i32> = common::CASES.iter().map(|c| c.exit).collect();
    ensure!(
        (0..=2).all(|c| codes.contains(&c)),
        "exit codes 0, 1, 2 not all exercised"
    );
    Ok(format!(
        "{} golden transcripts byte-identical, exit codes 0/1/2, line/field diagnostics",
        common::CASES.len()
    ))
}

fn main() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failed = 0;
    let mut report = |k: usize, name: &str, verdict: Verdict, began: Instant| {
        let secs = began.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {k:>2} {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL {k:>2} {name}: {why} ({secs:.1}s)");
            }
        }
    };
    let t = Instant::now();
    let corpus = build_corpus(&mut rng);
    report(1, "flat-frame correctness", criterion_1(&corpus), t);
    let t = Instant::now();
    report(
        2,
        "derivative orderings agree",
        criterion_2(&corpus, &mut rng),
        t,
    );
    let t = Instant::now();
    report(3, "base change to F_p", criterion_3(&mut rng), t);
    let t = Instant::now();
    report(4, "functoriality under pullback", criterion_4(&mut rng), t);
    let t = Instant::now();
    report(5, "reparametrization square", criterion_5(&mut rng), t);
    let t = Instant::now();
    report(6, "frame equivariance", criterion_6(&mut rng), t);
    let t = Instant::now();
    let (seven, eight) = criterion_7_and_8(&mut rng);
    report(7, "orbit tangent equality", seven, t);
    report(8, "Killing symmetry", eight, t);
    let t = Instant::now();
    report(9, "sp4 pinned analysis", criterion_9(), t);
    let t = Instant::now();
    report(10, "Mazur and ordinariness pinned cases", criterion_10(), t);
    let t = Instant::now();
    report(11, "Legendre end to end", criterion_11(), t);
    let t = Instant::now();
    report(12, "CLI contract", criterion_12(), t);
    println!(
        "{} of 12 criteria passed in {:.1?}",
        12 - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

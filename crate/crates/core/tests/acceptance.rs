//! Acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so that every criterion prints its
//! outcome; the process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use cyclochern_core::algebra::parse::parse_element;
use cyclochern_core::chern::{self, SignConvention};
use cyclochern_core::derham::{self, ChernInput, Current, KahlerForm, OddNormalization};
use cyclochern_core::homology;
use cyclochern_core::models;
use cyclochern_core::morita::{self, GroupTable, LeviBlock};
use cyclochern_core::omega;
use cyclochern_core::{AlgMatrix, Algebra, Element, FDAlgebra, PresentedAlgebra, Scalar};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TIME_LIMIT: Duration = Duration::from_secs(60);
const CAP: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---------------------------------------------------------------------------
// Dense oracle for Hochschild homology: the normalized Hochschild complex
// A ⊗ Ā^{⊗n} built directly from structure constants, ranks modulo a large
// prime. All algebras used have rational structure constants.

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn big_mod(n: &num_bigint::BigInt) -> u64 {
    let p = num_bigint::BigInt::from(P);
    let r = ((n % &p) + &p) % &p;
    r.try_into().unwrap()
}

fn scalar_mod(s: &Scalar) -> u64 {
    assert!(s.im().is_zero(), "oracle expects rational structure constants");
    let re = s.re();
    mulmod(big_mod(re.numer()), powmod(big_mod(re.denom()), P - 2))
}

fn rank_mod(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let ncols = rows.first().map_or(0, Vec::len);
    for c in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pr);
        let inv = powmod(rows[rank][c], P - 2);
        let pivot: Vec<u64> = rows[rank].iter().map(|&v| mulmod(v, inv)).collect();
        for r in rank + 1..rows.len() {
            let f = rows[r][c];
            if f == 0 {
                continue;
            }
            for (x, &pv) in rows[r].iter_mut().zip(&pivot).skip(c) {
                *x = (*x + P - mulmod(f, pv)) % P;
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

fn oracle_hochschild(alg: &FDAlgebra, n_max: usize) -> Vec<usize> {
    let d = alg.dim();
    let dims: Vec<usize> = (0..=n_max + 1).map(|n| d * (d - 1).pow(n as u32)).collect();
    let index = |t: &[usize]| t[1..].iter().fold(t[0], |acc, &a| acc * (d - 1) + (a - 1));
    let tensor = |n: usize, mut idx: usize| {
        let mut t = vec![0; n + 1];
        for k in (1..=n).rev() {
            t[k] = idx % (d - 1) + 1;
            idx /= d - 1;
        }
        t[0] = idx;
        t
    };
    // rank of b: C_n → C_{n−1}
    let rank_b = |n: usize| -> usize {
        if n == 0 {
            return 0;
        }
        let mut rows = Vec::with_capacity(dims[n]);
        for j in 0..dims[n] {
            let t = tensor(n, j);
            let mut v = vec![0u64; dims[n - 1]];
            let mut push = |target: Vec<usize>, c: &Scalar, sign: bool| {
                if target[1..].iter().any(|&a| a == 0) {
                    return;
                }
                let c = scalar_mod(c);
                let slot = &mut v[index(&target)];
                *slot = if sign { (*slot + P - c) % P } else { (*slot + c) % P };
            };
            for i in 0..n {
                for (k, c) in alg.product(t[i], t[i + 1]) {
                    let mut target = t[..i].to_vec();
                    target.push(*k);
                    target.extend_from_slice(&t[i + 2..]);
                    push(target, c, i % 2 == 1);
                }
            }
            for (k, c) in alg.product(t[n], t[0]) {
                let mut target = vec![*k];
                target.extend_from_slice(&t[1..n]);
                push(target, c, n % 2 == 1);
            }
            rows.push(v);
        }
        rank_mod(rows)
    };
    let ranks: Vec<usize> = (0..=n_max + 1).map(rank_b).collect();
    (0..=n_max).map(|n| dims[n] - ranks[n] - ranks[n + 1]).collect()
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let algebras: Vec<(&str, FDAlgebra)> = vec![
        ("M2(C)", models::matrix_algebra_c(2)),
        ("C[x]/(x^3)", models::truncated_polynomial(3)),
        ("C[Z/3]", models::cyclic_group_algebra(3)),
        ("C^4", models::function_algebra_c(4)),
        ("C[S3]", models::symmetric_group_algebra_s3()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, alg) in &algebras {
        let t = Instant::now();
        let ok = omega::verify_mixed_identities(alg, 6).map(|r| r.all_hold()).unwrap_or(false);
        let el = t.elapsed();
        pass &= ok && el < TIME_LIMIT;
        parts.push(format!("{name} {} {:.2}s", if ok { "ok" } else { "FAILED" }, el.as_secs_f64()));
    }
    outcome(pass, format!("b²=B²=bB+Bb=0 through degree 6: {}", parts.join(", ")))
}

fn criterion_2() -> Outcome {
    let cases: Vec<(String, FDAlgebra, Vec<usize>)> = vec![
        ("C^1".into(), models::function_algebra_c(1), vec![1, 0, 0, 0, 0]),
        ("C^2".into(), models::function_algebra_c(2), vec![2, 0, 0, 0, 0]),
        ("C^3".into(), models::function_algebra_c(3), vec![3, 0, 0, 0, 0]),
        ("C^4".into(), models::function_algebra_c(4), vec![4, 0, 0, 0, 0]),
        ("M2(C)".into(), models::matrix_algebra_c(2), vec![1, 0, 0, 0, 0]),
        ("C[x]/(x^2)".into(), models::truncated_polynomial(2), vec![2, 1, 1, 1, 1]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, alg, expected) in cases {
        let engine = homology::hochschild_dims(&alg, 4).unwrap_or_default();
        let oracle = oracle_hochschild(&alg, 4);
        let ok = engine == expected && oracle == expected;
        pass &= ok;
        parts.push(format!("{name} {engine:?}{}", if ok { "" } else { " (MISMATCH)" }));
    }
    outcome(pass, format!("HH_0..4 match oracle and expected: {}", parts.join(", ")))
}

fn criterion_3() -> Outcome {
    let mut cases: Vec<(String, FDAlgebra, (usize, usize), Option<usize>)> = Vec::new();
    for k in 1..=4 {
        cases.push((format!("C^{k}"), models::function_algebra_c(k), (k, 0), None));
    }
    cases.push(("M2(C)".into(), models::matrix_algebra_c(2), (1, 0), None));
    for n in 1..=4 {
        cases.push((format!("C[Z/{n}]"), models::cyclic_group_algebra(n), (n, 0), None));
    }
    cases.push(("C[x]/(x^2)".into(), models::truncated_polynomial(2), (1, 0), Some(8)));
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, alg, expected, level) in cases {
        let level = level.unwrap_or_else(|| homology::default_truncation(&alg));
        match homology::hp_dims(&alg, level) {
            Ok(hp) => {
                let mut ok = (hp.even, hp.odd) == expected;
                if name == "C[x]/(x^2)" {
                    ok &= hp.stabilized;
                }
                pass &= ok;
                parts.push(format!(
                    "{name} ({},{}) level {} stabilized={}{}",
                    hp.even,
                    hp.odd,
                    hp.truncation,
                    hp.stabilized,
                    if ok { "" } else { " MISMATCH" }
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name} error: {e}"));
            }
        }
    }
    outcome(pass, format!("HP dims: {}", parts.join(", ")))
}

fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let re = rng.gen_range(-3i64..=3);
    let im = if rng.gen_bool(0.3) { rng.gen_range(-2i64..=2) } else { 0 };
    Scalar::gaussian(re, im)
}

fn random_element(alg: &FDAlgebra, rng: &mut ChaCha8Rng) -> Element<usize> {
    Element::from_terms((0..alg.dim()).map(|k| (k, small_scalar(rng))))
}

/// Random 2×2 matrix over `alg` that `alg` can invert.
fn random_invertible(alg: &FDAlgebra, size: usize, rng: &mut ChaCha8Rng) -> (AlgMatrix<usize>, AlgMatrix<usize>) {
    loop {
        let entries = (0..size * size).map(|_| random_element(alg, rng)).collect();
        let g = AlgMatrix::from_entries(size, size, entries).unwrap();
        if let Ok(h) = alg.invert_matrix(&g, None) {
            return (g, h);
        }
    }
}

fn diag_e11(alg: &FDAlgebra, size: usize) -> AlgMatrix<usize> {
    let mut e = AlgMatrix::zeros(size, size);
    e.set(0, 0, alg.one());
    e
}

/// `[[a, b], [c, d]]` as an element of `M₂(ℂ)` in the basis `1, e12, e21, e22`.
fn m2_element(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Element<usize> {
    Element::from_terms([(0, a.clone()), (1, b.clone()), (2, c.clone()), (3, d - a)])
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut idempotents: Vec<(String, FDAlgebra, AlgMatrix<usize>)> = Vec::new();
    let mut invertibles: Vec<(String, FDAlgebra, AlgMatrix<usize>)> = Vec::new();

    let c3 = models::function_algebra_c(3);
    let m2 = models::matrix_algebra_c(2);
    let dual = models::truncated_polynomial(2);
    for _ in 0..8 {
        // rank-one projections over ℂ³ varying from point to point
        let (g, h) = random_invertible(&c3, 2, &mut rng);
        idempotents.push(("C^3".into(), c3.clone(), diag_e11(&c3, 2).conjugate(&g, &h, &c3).unwrap()));
        invertibles.push(("C^3".into(), c3.clone(), random_invertible(&c3, 2, &mut rng).0));

        // rank-one projections in M₂(ℂ)
        let m = loop {
            let v: Vec<Scalar> = (0..4).map(|_| small_scalar(&mut rng)).collect();
            if !(&v[0] * &v[3] - &v[1] * &v[2]).is_zero() {
                break v;
            }
        };
        let g = models::one_by_one(m2_element(&m[0], &m[1], &m[2], &m[3]));
        let h = m2.invert_matrix(&g, None).unwrap();
        let z = Scalar::zero();
        let e11 = models::one_by_one(m2_element(&Scalar::one(), &z, &z, &z));
        idempotents.push(("M2(C)".into(), m2.clone(), e11.conjugate(&g, &h, &m2).unwrap()));
        invertibles.push(("M2(C)".into(), m2.clone(), random_invertible(&m2, 1, &mut rng).0));

        // nonconstant projections over the dual numbers
        let (g, h) = random_invertible(&dual, 2, &mut rng);
        idempotents.push(("C[x]/(x^2)".into(), dual.clone(), diag_e11(&dual, 2).conjugate(&g, &h, &dual).unwrap()));
        let size = if rng.gen_bool(0.5) { 1 } else { 2 };
        invertibles.push(("C[x]/(x^2)".into(), dual.clone(), random_invertible(&dual, size, &mut rng).0));
    }

    let through = CAP - 2;
    let mut fails = Vec::new();
    let mut nontrivial = 0;
    for (name, alg, e) in &idempotents {
        let ok = chern::ch_cq_even(alg, e, (through + 1) / 2, SignConvention::Plain)
            .and_then(|ch| {
                if ch.max_degree().unwrap_or(0) > 0 {
                    nontrivial += 1;
                }
                chern::verify_cycle(alg, &ch, through)
            })
            .map(|r| r.holds)
            .unwrap_or(false);
        if !ok {
            fails.push(format!("idempotent over {name}"));
        }
    }
    for (name, alg, g) in &invertibles {
        let ok = chern::ch_cq_odd(alg, g, None, through / 2)
            .and_then(|ch| chern::verify_cycle(alg, &ch, through))
            .map(|r| r.holds)
            .unwrap_or(false);
        if !ok {
            fails.push(format!("invertible over {name}"));
        }
    }
    let pass = fails.is_empty() && idempotents.len() >= 20 && invertibles.len() >= 20;
    outcome(
        pass,
        format!(
            "(B−b)ch = 0 through degree {through}: {} idempotents ({nontrivial} with higher terms), {} invertibles{}",
            idempotents.len(),
            invertibles.len(),
            if fails.is_empty() { String::new() } else { format!("; failures: {}", fails.join(", ")) }
        ),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let run = || -> cyclochern_core::Result<(Scalar, Scalar, i64, i64)> {
        let s = models::sphere();
        let e = models::bott_projector(&s)?;
        let current = Current::sphere();
        let cw = derham::ch_cw_even(&s, &e, 1)?;
        let cw_form = cw.component(2).expect("degree 2").clone();
        let cw_value = derham::pair(&s, &cw, &current)?;
        let cq = chern::apply_scaling_c(&chern::ch_cq_even(&s, &e, 1, SignConvention::Plain)?);
        let comp = cq.component(2).expect("degree 2");
        let mu = derham::mu_form(&s, &comp.form, comp.twopi_power)?;
        let cq_value = derham::pair_form(&s, &mu, &current)?;
        Ok((cw_value, cq_value, cw_form.twopi_power(), mu.twopi_power()))
    };
    match run() {
        Ok((cw, cq, pw, pq)) => {
            let el = t.elapsed();
            let unit = cw == Scalar::one() || cw == -Scalar::one();
            let pass = unit && cw == cq && pw + 1 == 0 && pq + 1 == 0 && el < TIME_LIMIT;
            outcome(
                pass,
                format!(
                    "Bott projector: Chern–Weil {cw}, μ∘c∘Cuntz–Quillen {cq}, (2πi) powers {pw}/{pq} against +1, {:.2}s",
                    el.as_secs_f64()
                ),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn criterion_6() -> Outcome {
    let run = |l: &PresentedAlgebra, k: i64| -> cyclochern_core::Result<(Scalar, Scalar)> {
        let g = models::one_by_one(parse_element(l, &format!("u^{k}"))?);
        let input = ChernInput::Invertible { g: g.clone(), inverse: None };
        let cq_value = derham::compare_cq_cw(l, &input, &Current::circle(), SignConvention::Plain)?.cq_value;
        let cw = derham::ch_cw_odd(l, &g, None, 0, OddNormalization::Printed)?;
        let cw_value = derham::pair(l, &cw, &Current::circle().normalized())?;
        Ok((cq_value, cw_value))
    };
    let l = models::laurent(models::DEFAULT_DEGREE_CAP).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for k in -3i64..=3 {
        match run(&l, k) {
            Ok((cq, cw)) => {
                let ok = cq == Scalar::from_int(k) && cw == Scalar::from_int(k);
                pass &= ok;
                parts.push(format!("u^{k}: {cq}/{cw}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("u^{k}: error {e}"));
            }
        }
    }
    outcome(pass, format!("winding (μ∘c∘CQ with raw residue / CW with normalized residue): {}", parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let bases: Vec<(&str, FDAlgebra)> = vec![
        ("C", models::complex_numbers()),
        ("C^2", models::function_algebra_c(2)),
        ("C[Z/2]", models::cyclic_group_algebra(2)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, a) in &bases {
        let base = homology::hp_dims(a, homology::default_truncation(a));
        for n in [2, 3] {
            let m = morita::matrix_algebra(a, n).and_then(|m| homology::hp_dims(&m.algebra, homology::default_truncation(&m.algebra)));
            match (&base, m) {
                (Ok(b), Ok(m)) => {
                    let ok = (b.even, b.odd) == (m.even, m.odd);
                    pass &= ok;
                    parts.push(format!("M{n}({name}) ({},{}) vs ({},{})", m.even, m.odd, b.even, b.odd));
                }
                (b, m) => {
                    pass = false;
                    parts.push(format!("M{n}({name}) error: {:?} {:?}", b.as_ref().err(), m.err()));
                }
            }
        }
    }
    outcome(pass, format!("dim HP(M_n(A)) = dim HP(A): {}", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let actions: Vec<(&str, GroupTable, usize, Vec<Vec<usize>>)> = vec![
        ("Z/2 swapping two of three points", GroupTable::cyclic(2), 3, vec![vec![0, 1, 2], vec![1, 0, 2]]),
        ("Z/3 rotating three points", GroupTable::cyclic(3), 3, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]),
        ("Z/2 acting by (01)(23) on four points", GroupTable::cyclic(2), 4, vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, group, points, perms) in actions {
        match morita::wassermann_toy_check(&group, points, &perms) {
            Ok(r) => {
                pass &= r.holds();
                parts.push(format!("{name}: {}={}={}", r.hp0_invariants, r.orbits, r.hp0_fixed));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: error {e}"));
            }
        }
    }
    outcome(pass, format!("dim HP0(A^W) = |X/W| = dim HP0(A)^W: {}", parts.join("; ")))
}

fn criterion_9() -> Outcome {
    let run = || -> cyclochern_core::Result<(bool, usize, usize, usize, Vec<Vec<Scalar>>)> {
        let blocks = vec![
            LeviBlock { points: 2, group: GroupTable::cyclic(2), permutations: vec![vec![0, 1], vec![1, 0]], size: 2 },
            LeviBlock { points: 1, group: GroupTable::trivial(), permutations: vec![vec![0]], size: 1 },
        ];
        let model = morita::levi_block_model(&blocks)?;
        let alg = &model.algebra;
        let idems = model.minimal_idempotents()?;
        let mut images = Vec::new();
        for p in &idems {
            let ch = chern::ch_cq_even(alg, &models::one_by_one(p.clone()), 0, SignConvention::Plain)?;
            images.push(ch.form(0));
        }
        let traces = model.point_traces();
        let pairing: Vec<Vec<Scalar>> = traces
            .iter()
            .map(|row| {
                images
                    .iter()
                    .map(|f| {
                        let v = alg.to_dense(&omega::degree_zero_part(f));
                        row.iter().zip(&v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
                    })
                    .collect()
            })
            .collect();
        let n = pairing.len();
        let permutation = n == images.len()
            && pairing.iter().all(|r| r.iter().filter(|v| **v == Scalar::one()).count() == 1 && r.iter().filter(|v| !v.is_zero()).count() == 1)
            && (0..n).all(|j| pairing.iter().filter(|r| r[j] == Scalar::one()).count() == 1);
        let level = homology::default_truncation(alg);
        let hp = homology::hp_dims(alg, level)?;
        let image = homology::stable_image(alg, level, 0)?;
        let rank = image.class_rank(&images);
        Ok((permutation, rank, hp.even, model.expected_hp0(), pairing))
    };
    match run() {
        Ok((perm, rank, hp0, expected, pairing)) => {
            let pass = perm && rank == hp0 && hp0 == expected && rank == pairing.len();
            let shown: Vec<String> = pairing.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).collect();
            outcome(
                pass,
                format!(
                    "block model: pairing matrix [{}] permutation={perm}, class rank {rank}, dim HP0 {hp0}, orbit count {expected}",
                    shown.join("; ")
                ),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn random_poly(alg: &PresentedAlgebra, vars: &[&str], max_deg: u32, rng: &mut ChaCha8Rng) -> Element<cyclochern_core::Monomial> {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let mut t = format!("({})", small_scalar(rng).to_string().replace(' ', ""));
        let mut deg = 0;
        for v in vars {
            let e = rng.gen_range(0..=max_deg.saturating_sub(deg).min(max_deg));
            deg += e;
            if e > 0 {
                t.push_str(&format!(" {v}^{e}"));
            }
        }
        terms.push(t);
    }
    parse_element(alg, &terms.join(" + ")).expect("generated polynomial parses")
}

fn random_laurent(alg: &PresentedAlgebra, rng: &mut ChaCha8Rng) -> Element<cyclochern_core::Monomial> {
    let s = (0..rng.gen_range(1..=4))
        .map(|_| format!("({}) u^{}", small_scalar(rng).to_string().replace(' ', ""), rng.gen_range(-4i32..=4)))
        .collect::<Vec<_>>()
        .join(" + ");
    parse_element(alg, &s).expect("generated Laurent polynomial parses")
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let s = models::sphere();
    let l = models::laurent(models::DEFAULT_DEGREE_CAP).unwrap();
    let mut sphere_forms = 0;
    let mut circle_forms = 0;
    let mut nonzero = 0;
    let mut fails = 0;
    for _ in 0..30 {
        let eta = KahlerForm::from_terms(
            &s,
            1,
            (0..3).map(|j| (vec![j], random_poly(&s, &["x", "y", "z"], 4, &mut rng))),
        )
        .and_then(|eta| eta.d(&s));
        match eta.and_then(|w| derham::sphere_integrate(&s, &w).map(|v| (w, v))) {
            Ok((w, (q, _))) => {
                sphere_forms += 1;
                nonzero += usize::from(!w.is_zero());
                fails += usize::from(!q.is_zero());
            }
            Err(_) => fails += 1,
        }
        let f = random_laurent(&l, &mut rng);
        match derham::differential_of(&l, &f).and_then(|w| derham::circle_residue(&l, &w).map(|v| (w, v))) {
            Ok((w, (q, _))) => {
                circle_forms += 1;
                nonzero += usize::from(!w.is_zero());
                fails += usize::from(!q.is_zero());
            }
            Err(_) => fails += 1,
        }
    }
    let total = sphere_forms + circle_forms;
    let pass = fails == 0 && total >= 50;
    outcome(
        pass,
        format!("currents vanish on exact forms: {sphere_forms} sphere 2-forms, {circle_forms} circle 1-forms ({nonzero} nonzero), {fails} failures"),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("mixed-complex identities", criterion_1),
        ("Hochschild dimensions", criterion_2),
        ("periodic cyclic dimensions", criterion_3),
        ("Chern character cycle property", criterion_4),
        ("sphere Chern number", criterion_5),
        ("circle winding numbers", criterion_6),
        ("Morita invariance", criterion_7),
        ("orbit-space invariants", criterion_8),
        ("block model idempotents span HP0", criterion_9),
        ("closed currents on exact forms", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        println!(
            "criterion {:>2} [{}] {name}: {} ({:.2}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use k3lat::arith::{snf, IntMatrix};
use k3lat::catalog;
use k3lat::disc::{disc_form, ell, gauss_sum, iso_form_small, negate, signature_mod8, GAUSS_SUM_CAP};
use k3lat::embed::{embedding_report, search_embedding_stats, verify_embedding};
use k3lat::enumerate::{roots, short_vectors};
use k3lat::group::GroupAction;
use k3lat::lattice::{direct_sum_all, orth_complement, rescale, saturation, sublattice, whole, Lattice};
use k3lat::pipelines::{ghv_converse, lemma_standard_check, star_check, thm1_condition_ii, Bounds};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

/// Exit code and stdout of each fixture invocation.
type FixtureRun = Vec<(i32, Vec<u8>)>;

type Criterion = (&'static str, fn() -> Check);

/// Relative tolerance on the Gauss-sum modulus `√|A|`.
const GAUSS_TOL: f64 = 1e-6;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gram(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), rows.len())
}

/// All roots (both signs) of a definite lattice.
fn root_total(l: &Lattice) -> Result<usize, String> {
    let m = if l.is_positive_definite() { rescale(l, -1).map_err(err)? } else { l.clone() };
    Ok(2 * roots(&m).map_err(err)?.len())
}

fn c1_catalog() -> Check {
    let e8 = catalog::e8_neg();
    ensure(root_total(&e8)? == 240, "E8(-1) roots")?;
    let d = catalog::golay().weight_distribution();
    let nonzero: Vec<(usize, u64)> = (0..25).filter(|&w| d[w] > 0).map(|w| (w, d[w])).collect();
    ensure(nonzero == vec![(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)], format!("Golay weights {nonzero:?}"))?;
    let n = catalog::niemeier_a1();
    ensure(n.is_even() && n.det().abs().is_one(), "NiemeierA1 even unimodular")?;
    ensure(root_total(&n)? == 48, "NiemeierA1 roots")?;
    let l = catalog::leech();
    ensure(l.is_even() && l.det().abs().is_one(), "Leech even unimodular")?;
    ensure(root_total(&l)? == 0, "Leech roots")?;
    Ok("240 / (1,759,2576,759,1) / 48 / 0".into())
}

fn c2_leech_minimum() -> Check {
    let l = rescale(&catalog::leech(), -1).map_err(err)?;
    let vs = short_vectors(&l, &BigInt::from(4)).map_err(err)?;
    ensure(vs.iter().all(|(_, n)| *n == BigInt::from(4)), "a nonzero vector of norm below 4")?;
    ensure(vs.len() == 98280, format!("{} norm-4 classes", vs.len()))?;
    Ok("min norm 4, 98280 classes".into())
}

fn random_even_gram(rng: &mut StdRng) -> IntMatrix {
    let n = rng.gen_range(1..=6);
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = BigInt::from(2 * rng.gen_range(-6i64..=6));
        for j in i + 1..n {
            let x = BigInt::from(rng.gen_range(-12i64..=12));
            m[(i, j)] = x.clone();
            m[(j, i)] = x;
        }
    }
    m
}

fn c3_milgram() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let mut done = 0;
    while done < 200 {
        let l = Lattice::from_gram(random_even_gram(&mut rng)).map_err(err)?;
        if !l.is_nondegenerate() || l.det().abs() > BigInt::from(10_000) {
            continue;
        }
        let a = disc_form(&l).map_err(err)?;
        let s = l.signature();
        let expected = (s.pos as i64 - s.neg as i64).rem_euclid(8) as u8;
        let got = signature_mod8(&a).map_err(err)?;
        ensure(got == expected, format!("signature mod 8 of {:?}: {got} vs {expected}", l.gram()))?;
        let (re, im) = gauss_sum(&a, GAUSS_SUM_CAP).map_err(err)?;
        let root = a.order().to_f64().expect("small order").sqrt();
        ensure((re.hypot(im) - root).abs() <= GAUSS_TOL * root, "Gauss-sum modulus")?;
        done += 1;
    }
    Ok(format!("{done} lattices"))
}

fn random_primitive(amb: &Lattice, rng: &mut StdRng) -> Result<Option<Lattice>, String> {
    let n = amb.rank();
    let k = rng.gen_range(1..=3);
    let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-2i64..=2)).collect()).collect();
    let m = IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), n);
    if m.to_rat().rank() < k {
        return Ok(None);
    }
    let s = saturation(&sublattice(amb, &m).map_err(err)?).map_err(err)?;
    Ok(s.is_nondegenerate().then_some(s))
}

fn c4_complements() -> Check {
    let u = catalog::u();
    let ambients = [direct_sum_all(&[u.clone(), u.clone(), u.clone()]), direct_sum_all(&[catalog::e8_neg(), u])];
    let mut rng = StdRng::seed_from_u64(4);
    let mut iso_checked = 0;
    for amb in &ambients {
        let mut done = 0;
        while done < 50 {
            let Some(s) = random_primitive(amb, &mut rng)? else { continue };
            let c = orth_complement(&s).map_err(err)?;
            ensure(s.det().abs() == c.det().abs(), "|det S| = |det S^perp|")?;
            let (ds, dc) = (disc_form(&s).map_err(err)?, disc_form(&c).map_err(err)?);
            ensure(ell(&ds) == ell(&dc), "ell agrees")?;
            if ds.order() <= BigInt::from(4096) {
                ensure(iso_form_small(&ds, &negate(&dc)).map_err(err)?, "anti-isometry")?;
                iso_checked += 1;
            }
            done += 1;
        }
    }
    Ok(format!("100 sublattices, {iso_checked} anti-isometries checked"))
}

fn leech_action(names: &[&str]) -> Result<GroupAction, String> {
    let gens = names
        .iter()
        .map(|n| catalog::perm_isometry_on_leech(&catalog::curated_permutation(n).map_err(err)?).map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    GroupAction::new(catalog::leech(), gens).map_err(err)
}

fn c5_lemma() -> Check {
    let mut notes = Vec::new();
    // (generators, rk N_G, ℓ(A_{N_G}))
    let cases: [(&[&str], u64, u64); 3] = [(&[], 0, 0), (&["1^8 2^8"], 8, 8), (&["1^6 3^6"], 12, 6)];
    for (names, rk, l) in cases {
        let out = ghv_converse(&leech_action(names)?, &Bounds::default()).map_err(err)?;
        let pi = out.pi.ok_or("no positive 4-space found")?;
        let c = lemma_standard_check(&out.action, &pi).map_err(err)?;
        for clause in ["negative_definite", "root_free", "disc_action_trivial", "ell_bound"] {
            ensure(c.flag(clause) == Some(true), format!("{names:?}: {clause}"))?;
        }
        ensure(c.int("rank_coinvariant") == Some(&BigInt::from(rk)), format!("{names:?}: rank"))?;
        ensure(c.int("ell_coinvariant") == Some(&BigInt::from(l)), format!("{names:?}: ell"))?;
        notes.push(format!("rk {rk} ell {l}"));
    }
    Ok(notes.join(", "))
}

fn c6_thm1() -> Check {
    let minus = GroupAction::new(catalog::leech(), vec![IntMatrix::identity(24).neg()]).map_err(err)?;
    let cases = [(leech_action(&[])?, true, 24), (minus, false, 0), (leech_action(&["1^8 2^8"])?, true, 16)];
    for (a, pass, rk) in cases {
        let c = thm1_condition_ii(&a).map_err(err)?;
        ensure(c.pass == pass && c.int("rank_invariant") == Some(&BigInt::from(rk)), format!("rk {rk}"))?;
    }
    Ok("24 pass / 0 fail / 16 pass".into())
}

fn c7_star_sweep() -> Check {
    let mut tested = 0;
    let range = -4i64..=4;
    for a in [2i64, 4] {
        for b in [2i64, 4] {
            for c in [2i64, 4] {
                for x in range.clone() {
                    for y in range.clone() {
                        for z in range.clone() {
                            let g = gram(&[vec![a, x, y], vec![x, b, z], vec![y, z, c]]);
                            let l = Lattice::from_gram(g.clone()).map_err(err)?;
                            if !l.is_positive_definite() {
                                continue;
                            }
                            let (d, _, _) = snf(&g);
                            let nontrivial = (0..3).filter(|&i| !d[(i, i)].is_one()).count();
                            let ell_l = ell(&disc_form(&l).map_err(err)?);
                            ensure(nontrivial == ell_l, format!("invariant factors of {g:?}"))?;
                            let cert = star_check(&whole(&l), &l).map_err(err)?;
                            ensure(cert.pass == (ell_l < 3), format!("star_check on {g:?}"))?;
                            tested += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{tested} Gram matrices"))
}

/// Every vector in the box `[−b, b]^n` with norm in `(0, bound]`, first
/// nonzero coordinate positive.
fn box_enumeration(g: &IntMatrix, bound: i64, b: i64) -> Vec<(Vec<BigInt>, BigInt)> {
    let n = g.rows();
    let gi: Vec<Vec<i64>> = g.to_i64_rows().expect("small entries");
    let mut out = Vec::new();
    let mut x = vec![-b; n];
    loop {
        if x.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
            let norm: i64 = (0..n).map(|i| (0..n).map(|j| x[i] * gi[i][j] * x[j]).sum::<i64>()).sum();
            if norm <= bound {
                out.push((x.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(norm)));
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if x[i] < b {
                x[i] += 1;
                break;
            }
            x[i] = -b;
        }
    }
}

fn c8_short_vectors() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    let mut total = 0;
    for _ in 0..100 {
        // A·Aᵀ + I: positive definite with (A·Aᵀ + I)⁻¹ ≤ I, so the box
        // [−⌈√bound⌉, ⌈√bound⌉]^n contains every vector of norm ≤ bound.
        let n = rng.gen_range(1..=5);
        let a = IntMatrix::from_rows(
            (0..n).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect()).collect(),
            n,
        );
        let g = a.mul(&a.transpose()).add(&IntMatrix::identity(n));
        let bound = rng.gen_range(1i64..=12);
        let b = (bound as f64).sqrt().ceil() as i64;
        let l = Lattice::from_gram(g.clone()).map_err(err)?;
        let fast = short_vectors(&l, &BigInt::from(bound)).map_err(err)?;
        ensure(fast == box_enumeration(&g, bound, b), format!("short vectors of {g:?} up to {bound}"))?;
        total += fast.len();
    }
    Ok(format!("100 lattices, {total} vectors"))
}

fn cartan_neg(n: usize, edges: &[(usize, usize)]) -> Lattice {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(-2);
    }
    for &(i, j) in edges {
        g[(i, j)] = BigInt::from(1);
        g[(j, i)] = BigInt::from(1);
    }
    Lattice::from_gram(g).expect("square")
}

fn c9_embeddings() -> Check {
    let chain = |n: usize| (1..n).map(|i| (i - 1, i)).collect::<Vec<_>>();
    let sources = [
        cartan_neg(1, &[]),
        cartan_neg(2, &chain(2)),
        cartan_neg(4, &chain(4)),
        cartan_neg(4, &[(0, 1), (1, 2), (1, 3)]),
        cartan_neg(7, &chain(7)),
        cartan_neg(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]),
        cartan_neg(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)]),
        direct_sum_all(&[cartan_neg(1, &[]), cartan_neg(1, &[])]),
    ];
    let target = catalog::e8_neg();
    for s in &sources {
        let r = search_embedding_stats(s, &target, k3lat::embed::SEARCH_CAP).map_err(err)?;
        let w = r.witness.ok_or_else(|| format!("no embedding of rank {} into E8(-1)", s.rank()))?;
        let (gram_ok, saturated) = embedding_report(&w, s, &target);
        ensure(gram_ok && saturated == w.primitive, "witness report")?;
        ensure(!w.primitive || verify_embedding(&w, s, &target), "primitive witness verifies")?;
    }
    let r = search_embedding_stats(&catalog::a1_neg(), &catalog::leech(), k3lat::embed::SEARCH_CAP).map_err(err)?;
    ensure(r.witness.is_none(), "A1(-1) embeds into Leech")?;
    Ok(format!("{} witnesses verified; A1(-1) -> Leech exhaustively none", sources.len()))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// The CLI fixture run: arguments and expected exit code.
const FIXTURE_RUN: &[(&str, i32)] = &[
    ("catalog leech", 0),
    ("catalog golay", 0),
    ("catalog m24", 0),
    ("lat info gamma.json", 0),
    ("lat info coinvariant_1_8_2_8.json", 0),
    ("lat roots niemeier_a1.json --count-only", 0),
    ("lat roots e8neg.json", 0),
    ("lat roots u.json", 2),
    ("lat disc coinvariant_1_8_2_8.json", 0),
    ("grp invariant rank3_pair.json", 0),
    ("grp invariant trivial.json --lemma", 0),
    ("grp invariant involution_1_8_2_8.json --lemma", 0),
    ("grp invariant order3_1_6_3_6.json --lemma", 0),
    ("grp invariant mukai_trivial.json --lemma", 0),
    ("embed check coinvariant_1_8_2_8.json --target 1,25", 0),
    ("embed check a1neg.json --target 0,24", 0),
    ("embed search a1neg.json leech.json", 1),
    ("embed search a1neg.json e8neg.json", 0),
    ("thm1 check trivial.json", 0),
    ("thm1 check minus_identity.json", 1),
    ("thm1 check involution_1_8_2_8.json", 0),
    ("thm1 check rank3_pair.json", 1),
    ("ghv forward zero.json", 0),
    ("ghv forward a1neg.json", 2),
    ("ghv forward coinvariant_1_8_2_8.json", 0),
    ("ghv converse involution_1_8_2_8.json", 0),
    ("ghv converse order3_1_6_3_6.json", 0),
    ("ghv converse rank3_pair.json", 2),
    ("star check a3.json mukai.json", 0),
    ("star check tetra.json tetra.json", 0),
    ("star check diag222.json diag222.json", 1),
    ("star search u4.json", 0),
    ("star search mukai.json --coord-bound 2", 0),
    ("star search u4.json --cap 1", 3),
    ("period build zero.json", 0),
    ("period build coinvariant_1_8_2_8.json", 0),
    ("period build zero.json --v 1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,-1", 0),
];

fn fixture_pass(threads: &str) -> Result<FixtureRun, String> {
    FIXTURE_RUN
        .iter()
        .map(|(args, _)| {
            let out = Command::new(env!("CARGO_BIN_EXE_k3lat"))
                .args(args.split_whitespace())
                .args(["--threads", threads])
                .current_dir(fixtures())
                .output()
                .map_err(err)?;
            Ok((out.status.code().unwrap_or(-1), out.stdout))
        })
        .collect()
}

fn c10_determinism() -> Check {
    let runs: Vec<Result<FixtureRun, String>> = std::thread::scope(|s| {
        let hs: Vec<_> = ["8", "8", "1"].iter().map(|t| s.spawn(move || fixture_pass(t))).collect();
        hs.into_iter().map(|h| h.join().expect("fixture thread")).collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    for (i, ((args, code), (got, _))) in FIXTURE_RUN.iter().zip(&runs[0]).enumerate() {
        ensure(code == got, format!("`{args}` exited {got}, expected {code}"))?;
        ensure(runs[0][i] == runs[1][i], format!("`{args}` differs between identical runs"))?;
        ensure(runs[0][i] == runs[2][i], format!("`{args}` differs between 8 and 1 threads"))?;
    }
    Ok(format!("{} invocations x 3 runs byte-identical", FIXTURE_RUN.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("catalog constants", c1_catalog),
        ("Leech minimal norm", c2_leech_minimum),
        ("Milgram suite", c3_milgram),
        ("complement anti-isometry", c4_complements),
        ("lemma suite", c5_lemma),
        ("invariant-rank checker", c6_thm1),
        ("condition (*) sweep", c7_star_sweep),
        ("short vectors vs box", c8_short_vectors),
        ("embedding soundness", c9_embeddings),
        ("CLI determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(note) => println!("criterion {:2} PASS  {name} ({note}) [{secs:.1}s]", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {e} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

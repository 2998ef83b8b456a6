use k3lat::arith::{int_vec, IntMatrix};
use k3lat::catalog;
use k3lat::embed::EmbeddingWitness;
use k3lat::group::{coinvariant_lattice, restrict, GroupAction};
use k3lat::lattice::{direct_sum_all, sublattice, whole, Lattice, RationalSubspace};
use k3lat::pipelines::*;
use k3lat::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn leech_action(names: &[&str]) -> GroupAction {
    let gens = names
        .iter()
        .map(|n| catalog::perm_isometry_on_leech(&catalog::curated_permutation(n).unwrap()).unwrap())
        .collect();
    GroupAction::new(catalog::leech(), gens).unwrap()
}

fn minus_identity() -> GroupAction {
    GroupAction::new(catalog::leech(), vec![IntMatrix::identity(24).neg()]).unwrap()
}

fn none() -> Vec<&'static str> {
    Vec::new()
}

fn lat(rows: &[&[i64]]) -> Lattice {
    Lattice::from_gram(IntMatrix::from_i64(rows)).unwrap()
}

fn ints(c: &Certificate, key: &str) -> Vec<i64> {
    c.get(key)
        .and_then(Evidence::as_list)
        .unwrap()
        .iter()
        .map(|x| i64::try_from(x.as_int().unwrap()).unwrap())
        .collect()
}

#[test]
fn invariant_rank_examples() {
    let cases = [
        (GroupAction::trivial(catalog::leech()), true, 24),
        (minus_identity(), false, 0),
        (leech_action(&["1^8 2^8"]), true, 16),
    ];
    for (a, pass, rk) in cases {
        let c = thm1_condition_ii(&a).unwrap();
        assert_eq!(c.pass, pass);
        assert_eq!(c.int("rank_invariant"), Some(&BigInt::from(rk)));
        assert_eq!(c.int("coinvariant_roots"), Some(&BigInt::from(0)));
        assert_eq!(verify_thm1(&a, &c).unwrap(), none());
    }
    let c = thm1_condition_ii(&minus_identity()).unwrap();
    assert_eq!(c.flag("contains_minus_identity"), Some(true));
    assert_eq!(c.get("notes"), Some(&Evidence::List(vec![Evidence::text("contains -id")])));
    let wrong = GroupAction::trivial(catalog::niemeier_a1());
    assert!(matches!(thm1_condition_ii(&wrong), Err(Error::Precondition(_))));
}

#[test]
fn converse_then_lemma_on_curated_actions() {
    let b = Bounds::default();
    // (generators, rk N_G, ℓ(A_{N_G}))
    let cases: [(&[&str], u64, u64); 3] = [(&[], 0, 0), (&["1^8 2^8"], 8, 8), (&["1^6 3^6"], 12, 6)];
    for (names, rk, ell) in cases {
        let a = leech_action(names);
        let out = ghv_converse(&a, &b).unwrap();
        let c = &out.certificate;
        assert!(c.pass, "{names:?}");
        assert_eq!(c.int("rank_coinvariant"), Some(&BigInt::from(rk)));
        assert_eq!(verify_ghv_converse(&a, c).unwrap(), none());
        let pi = out.pi.as_ref().unwrap();
        let l = lemma_standard_check(&out.action, pi).unwrap();
        assert!(l.pass);
        assert_eq!(l.int("rank_coinvariant"), Some(&BigInt::from(rk)));
        assert_eq!(l.int("ell_coinvariant"), Some(&BigInt::from(ell)));
        assert!(ell + rk <= 24);
        assert_eq!(verify_lemma(&out.action, pi, &l).unwrap(), none());
        // Deterministic for fixed bounds.
        assert_eq!(ghv_converse(&a, &b).unwrap(), out);
    }
}

#[test]
fn converse_rejects_small_invariant_lattice() {
    let a = leech_action(&["1^2 11^2", "1^2 2 4 8^2"]);
    let c = thm1_condition_ii(&a).unwrap();
    assert!(!c.pass);
    assert_eq!(c.int("rank_invariant"), Some(&BigInt::from(3)));
    assert!(matches!(ghv_converse(&a, &Bounds::default()), Err(Error::Precondition(_))));
    assert!(matches!(ghv_converse(&minus_identity(), &Bounds::default()), Err(Error::Precondition(_))));
}

#[test]
fn lemma_rejects_planted_root() {
    let m = catalog::mukai();
    let mut rows = Vec::new();
    for (e, f) in [(17, 18), (19, 20), (21, 22), (0, 23)] {
        let mut v = vec![0i64; 24];
        v[e] = 1;
        v[f] = if e == 0 { -1 } else { 1 };
        rows.push(int_vec(&v));
    }
    let pi = RationalSubspace::new(m.clone(), IntMatrix::from_rows(rows, 24).to_rat()).unwrap();
    assert!(pi.is_positive());
    let r = lemma_standard_check(&GroupAction::trivial(m), &pi);
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn forward_preconditions_and_trivial_case() {
    let b = Bounds::default();
    let zero = lat(&[]);
    let c = ghv_forward(&zero, &b).unwrap();
    assert!(c.pass);
    assert_eq!(verify_ghv_forward(&zero, &c).unwrap(), none());
    assert!(matches!(ghv_forward(&catalog::a1_neg(), &b), Err(Error::Precondition(_))));
    assert!(matches!(ghv_forward(&catalog::e8(), &b), Err(Error::Precondition(_))));
}

#[test]
fn forward_witness_round_trips_through_converse() {
    let b = Bounds::default();
    let a = leech_action(&["1^8 2^8"]);
    let co = coinvariant_lattice(&a).unwrap();
    let gens: Vec<IntMatrix> = a.generators().iter().map(|g| restrict(g, &co).unwrap()).collect();
    let lg = co.to_abstract();
    let c = ghv_forward(&lg, &b).unwrap();
    assert!(c.pass);
    assert_eq!(c.get("level").and_then(Evidence::as_text), Some("witness"));
    assert_eq!(verify_ghv_forward(&lg, &c).unwrap(), none());
    let search = c.get("leech_search").unwrap();
    let map = search.get("map").unwrap().as_int_matrix(24).unwrap();
    let w = EmbeddingWitness { map, primitive: true };
    let moved = transport_action(&lg, gens, &w).unwrap();
    let conv = ghv_converse(&moved, &b).unwrap();
    assert!(conv.certificate.pass);
    assert_eq!(conv.certificate.int("rank_invariant"), Some(&BigInt::from(16)));
    assert_eq!(verify_ghv_converse(&moved, &conv.certificate).unwrap(), none());
}

fn in_itself(l: &Lattice) -> Lattice {
    whole(l)
}

/// `e₁+f₁+f₂, e₂+f₂+f₃, e₃+f₃` in Mukai coordinates: an `A3`.
fn a3_in_mukai() -> Lattice {
    let mut rows = vec![vec![0i64; 24]; 3];
    for (i, r) in rows.iter_mut().enumerate() {
        r[17 + 2 * i] = 1;
        r[18 + 2 * i] = 1;
        if i < 2 {
            r[20 + 2 * i] = 1;
        }
    }
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| int_vec(r)).collect();
    sublattice(&catalog::mukai(), &IntMatrix::from_rows(rows, 24)).unwrap()
}

#[test]
fn star_check_examples() {
    let l = lat(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
    let c = star_check(&in_itself(&l), &l).unwrap();
    assert!(c.pass);
    assert_eq!(ints(&c, "snf"), vec![1, 1, 4]);
    assert_eq!(verify_star(&in_itself(&l), &c).unwrap(), none());
    let d = lat(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
    let c = star_check(&in_itself(&d), &d).unwrap();
    assert!(!c.pass);
    assert_eq!(ints(&c, "snf"), vec![2, 2, 2]);
    assert_eq!(verify_star(&in_itself(&d), &c).unwrap(), none());
    let a3 = a3_in_mukai();
    assert_eq!(a3.gram(), &IntMatrix::from_i64(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]));
    let c = star_check(&a3, &catalog::mukai()).unwrap();
    assert!(c.pass);
    assert_eq!(ints(&c, "snf"), vec![1, 1, 4]);
    assert_eq!(verify_star(&a3, &c).unwrap(), none());
    assert!(matches!(star_check(&in_itself(&lat(&[&[2]])), &lat(&[&[2]])), Err(Error::Precondition(_))));
}

#[test]
fn star_search_examples() {
    let b = Bounds::default();
    let u = catalog::u();
    let u3 = direct_sum_all(&[u.clone(), u.clone(), u.clone()]);
    assert!(matches!(star_search(&u3, &b), Err(Error::Precondition(_))));
    let u4 = direct_sum_all(&[u.clone(), u.clone(), u.clone(), u]);
    let (l, c) = star_search(&u4, &b).unwrap().unwrap();
    assert!(c.pass);
    assert_ne!(l.gram(), &IntMatrix::from_i64(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]));
    assert_eq!(verify_star(&l, &c).unwrap(), none());
    let (l, c) = star_search(&catalog::mukai(), &Bounds { coord_bound: 2, ..b }).unwrap().unwrap();
    assert_eq!(verify_star(&l, &c).unwrap(), none());
    assert!(matches!(star_search(&u4, &Bounds { cap: 1, ..b }), Err(Error::ResourceCap { .. })));
}

#[test]
fn period_examples() {
    let b = Bounds::default();
    let m = catalog::mukai();
    let zero = sublattice(&m, &IntMatrix::zeros(0, 24)).unwrap();
    let p = period_construct(&zero, None, &b).unwrap();
    assert_eq!(verify_period(&zero, &p.certificate).unwrap(), none());
    assert!(p.certificate.int("kernel_rank").unwrap() >= &BigInt::from(2));

    let a = leech_action(&["1^8 2^8"]);
    let co = coinvariant_lattice(&a).unwrap();
    let ng = embed_via_e8_doubling(&co, 1_000_000).unwrap().unwrap();
    assert_eq!(ng.gram(), co.gram());
    let p = period_construct(&ng, None, &b).unwrap();
    assert_eq!(verify_period(&ng, &p.certificate).unwrap(), none());

    // P₂ through v = r − s.
    let mut v = vec![BigInt::from(0); 24];
    v[0] = BigInt::from(1);
    v[23] = BigInt::from(-1);
    let p = period_construct(&zero, Some(&v), &b).unwrap();
    assert!(p.pi.contains(&k3lat::arith::to_rat_vec(&v)).unwrap());
    assert_eq!(verify_period(&zero, &p.certificate).unwrap(), none());

    // Rank 21: E8(−1)², U², and e₃ + f₃.
    let mut rows: Vec<Vec<BigInt>> = (1..=20)
        .map(|i| {
            let mut r = vec![BigInt::from(0); 24];
            r[i] = BigInt::from(1);
            r
        })
        .collect();
    let mut r = vec![BigInt::from(0); 24];
    r[21] = BigInt::from(1);
    r[22] = BigInt::from(1);
    rows.push(r);
    let big = sublattice(&m, &IntMatrix::from_rows(rows, 24)).unwrap();
    assert_eq!(big.rank(), 21);
    assert!(matches!(period_construct(&big, None, &b), Err(Error::Precondition(_))));
}

/// Products of elementary unimodular 3×3 matrices.
fn unimodular3() -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6).prop_map(|ops| {
        let mut m = IntMatrix::identity(3);
        for (i, j, k) in ops {
            if i != j {
                m.add_row_multiple(i, j, &BigInt::from(k));
            } else {
                m.negate_row(i);
            }
        }
        m
    })
}

/// Isometries of the Mukai lattice: swap the two `E8(−1)` blocks, and swap
/// `e ↔ f` in the first `U`.
fn mukai_isometry(swap_e8: bool, swap_u: bool) -> IntMatrix {
    let mut p: Vec<usize> = (0..24).collect();
    if swap_e8 {
        for i in 1..=8 {
            p.swap(i, i + 8);
        }
    }
    if swap_u {
        p.swap(17, 18);
    }
    let mut g = IntMatrix::zeros(24, 24);
    for (i, &j) in p.iter().enumerate() {
        g[(i, j)] = BigInt::from(1);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_check_is_basis_and_isometry_invariant(
        u in unimodular3(),
        swap_e8 in any::<bool>(),
        swap_u in any::<bool>(),
        rows in proptest::collection::vec(proptest::collection::vec(-1i64..=1, 24), 3),
    ) {
        let m = catalog::mukai();
        let base = IntMatrix::from_rows(rows.iter().map(|r| int_vec(r)).collect(), 24);
        prop_assume!(base.to_rat().rank() == 3);
        let l = Lattice::embedded(&m, base.to_rat()).unwrap();
        let c = star_check(&l, &m).unwrap();
        let moved = Lattice::embedded(&m, u.mul(&base).mul(&mukai_isometry(swap_e8, swap_u)).to_rat()).unwrap();
        let d = star_check(&moved, &m).unwrap();
        prop_assert_eq!(c.pass, d.pass);
        prop_assert_eq!(c.get("snf"), d.get("snf"));
        prop_assert_eq!(c.get("primitive"), d.get("primitive"));
    }
}

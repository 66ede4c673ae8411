use proptest::prelude::*;

use super::*;
use crate::exact::{frac, int};

fn e(d: usize, i: usize) -> AlgebraElement {
    AlgebraElement::basis(d, i)
}

fn sparse(v: &[(usize, i64)]) -> SparseVec {
    v.iter().map(|&(k, c)| (k, int(c))).collect()
}

/// Term-by-term product: expand every argument over the full basis and sum
/// sign-sorted table lookups. Independent of the determinant path.
fn naive_product(alg: &NaryAlgebra, args: &[AlgebraElement]) -> Vec<Rational> {
    let d = alg.dim();
    let n = alg.arity();
    let mut out = vec![int(0); d];
    let total = d.pow(n as u32);
    for code in 0..total {
        let mut idx = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            idx.push(c % d);
            c /= d;
        }
        let coef = idx
            .iter()
            .zip(args)
            .fold(int(1), |acc, (&i, a)| acc * &a.coords()[i]);
        if coef.is_zero() {
            continue;
        }
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let inversions = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| idx[a] > idx[b])
            .count();
        if let Some(v) = alg.structure_constants().get(&sorted) {
            for (k, x) in v {
                let t = &coef * x;
                if inversions % 2 == 0 {
                    out[*k] += t;
                } else {
                    out[*k] -= t;
                }
            }
        }
    }
    out
}

/// Filippov identity on every (not only increasing) basis tuple.
fn filippov_full_enumeration(alg: &NaryAlgebra) -> bool {
    let d = alg.dim();
    let n = alg.arity();
    let tuples = |k: usize| -> Vec<Vec<usize>> {
        (0..d.pow(k as u32))
            .map(|mut c| {
                (0..k)
                    .map(|_| {
                        let r = c % d;
                        c /= d;
                        r
                    })
                    .collect()
            })
            .collect()
    };
    let el = |v: Vec<Rational>| AlgebraElement::new(v);
    for x in tuples(n) {
        for y in tuples(n - 1) {
            let xs: Vec<AlgebraElement> = x.iter().map(|&i| e(d, i)).collect();
            let ys: Vec<AlgebraElement> = y.iter().map(|&i| e(d, i)).collect();
            let inner = el(naive_product(alg, &xs));
            let mut a = vec![inner];
            a.extend(ys.iter().cloned());
            let lhs = naive_product(alg, &a);
            let mut rhs = vec![int(0); d];
            for slot in 0..n {
                let mut b = vec![xs[slot].clone()];
                b.extend(ys.iter().cloned());
                let xy = el(naive_product(alg, &b));
                let mut outer = xs.clone();
                outer[slot] = xy;
                for (r, t) in rhs.iter_mut().zip(naive_product(alg, &outer)) {
                    *r += t;
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn perturbed_a4() -> NaryAlgebra {
    let a4 = NaryAlgebra::make_simple(3).unwrap();
    let mut products: Vec<(Vec<usize>, SparseVec)> = a4
        .structure_constants()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    // [e1,e2,e3] = -e4 becomes -e4 + e1
    products[0].1.insert(0, (0, int(1)));
    NaryAlgebra::new(3, default_labels(4), products).unwrap()
}

#[test]
fn simple_ternary_table_n2() {
    let a3 = NaryAlgebra::make_simple(2).unwrap();
    assert_eq!(a3.dim(), 3);
    assert_eq!(a3.basis_product(&[1, 2]), sparse(&[(0, 1)]));
    assert_eq!(a3.basis_product(&[0, 2]), sparse(&[(1, -1)]));
    assert_eq!(a3.basis_product(&[0, 1]), sparse(&[(2, 1)]));
}

#[test]
fn simple_table_n3_sign() {
    let a4 = NaryAlgebra::make_simple(3).unwrap();
    assert_eq!(a4.basis_product(&[1, 2, 3]), sparse(&[(0, -1)]));
    for i in 0..4 {
        let args: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let sign = if (3 + i + 1 + 1) % 2 == 0 { 1 } else { -1 };
        assert_eq!(a4.basis_product(&args), sparse(&[(i, sign)]));
    }
}

#[test]
fn repeated_basis_argument_vanishes() {
    for n in 2..=5 {
        let a = NaryAlgebra::make_simple(n).unwrap();
        let mut idx: Vec<usize> = (0..n).collect();
        idx[n - 1] = idx[0];
        assert!(a.basis_product(&idx).is_empty());
    }
}

#[test]
fn make_simple_rejects_small_arity() {
    assert_eq!(
        NaryAlgebra::make_simple(1),
        Err(AlgebraError::InvalidArity(1))
    );
}

#[test]
fn product_examples() {
    let a3 = NaryAlgebra::make_simple(2).unwrap();
    assert_eq!(a3.product(&[e(3, 1), e(3, 2)]).unwrap(), e(3, 0));
    assert_eq!(
        a3.product(&[e(3, 2), e(3, 1)]).unwrap(),
        e(3, 0).scale(&int(-1))
    );
    assert_eq!(
        a3.product(&[e(3, 0)]),
        Err(AlgebraError::WrongArgumentCount {
            expected: 2,
            found: 1
        })
    );

    let a4 = NaryAlgebra::make_simple(3).unwrap();
    let x = e(4, 0).add(&e(4, 1));
    let args = [x, e(4, 2), e(4, 3)];
    let got = a4.product(&args).unwrap();
    assert_eq!(got.coords(), naive_product(&a4, &args).as_slice());
    // [e1,e3,e4] + [e2,e3,e4] = (-1)^{3+2+1} e2 + (-1)^{3+1+1} e1
    assert_eq!(got.coords(), &[int(-1), int(1), int(0), int(0)]);
}

#[test]
fn filippov_holds_for_simple_algebras() {
    for n in 2..=6 {
        let a = NaryAlgebra::make_simple(n).unwrap();
        assert_eq!(a.check_filippov(), Ok(()), "A_{}", n + 1);
        assert_eq!(a.check_anticommutativity(), Ok(()));
    }
}

#[test]
fn perturbed_algebra_fails_with_witness() {
    let bad = perturbed_a4();
    let w = bad.check_filippov().unwrap_err();
    assert_eq!(w.x.len(), 3);
    assert_eq!(w.y.len(), 2);
    assert_ne!(w.lhs, w.rhs);
    assert!(w.to_string().contains("Filippov identity fails"));
}

#[test]
fn zero_algebra_passes() {
    for (n, d) in [(2, 1), (2, 4), (3, 2), (4, 6)] {
        assert_eq!(NaryAlgebra::zero(n, d).unwrap().check_filippov(), Ok(()));
    }
}

#[test]
fn canonical_check_agrees_with_full_enumeration() {
    let mut cases = vec![
        NaryAlgebra::make_simple(2).unwrap(),
        NaryAlgebra::make_simple(3).unwrap(),
        perturbed_a4(),
        NaryAlgebra::zero(3, 4).unwrap(),
    ];
    // binary bracket that violates Jacobi: [e1,e2]=e3, [e1,e3]=e4, [e2,e3]=e1
    cases.push(
        NaryAlgebra::new(
            2,
            default_labels(4),
            vec![
                (vec![0, 1], sparse(&[(2, 1)])),
                (vec![0, 2], sparse(&[(3, 1)])),
                (vec![1, 2], sparse(&[(0, 1)])),
            ],
        )
        .unwrap(),
    );
    // the Heisenberg algebra (Lie)
    cases.push(
        NaryAlgebra::new(2, default_labels(3), vec![(vec![0, 1], sparse(&[(2, 1)]))]).unwrap(),
    );
    for alg in &cases {
        assert_eq!(
            alg.check_filippov().is_ok(),
            filippov_full_enumeration(alg),
            "{alg:?}"
        );
    }
}

#[test]
fn direct_sum_examples() {
    let a3 = NaryAlgebra::make_simple(2).unwrap();
    assert_eq!(
        NaryAlgebra::direct_sum(std::slice::from_ref(&a3)).unwrap(),
        a3
    );

    let s = NaryAlgebra::direct_sum(&[a3.clone(), a3.clone()]).unwrap();
    assert_eq!(s.dim(), 6);
    assert_eq!(s.blocks().unwrap(), &[0..3, 3..6]);
    assert!(s.basis_product(&[0, 3]).is_empty());
    assert_eq!(s.basis_product(&[4, 5]), sparse(&[(3, 1)]));
    let second = s.block_subalgebra(1).unwrap();
    assert_eq!(second.structure_constants(), a3.structure_constants());
    assert_eq!(second.basis_labels(), &["e1_2", "e2_2", "e3_2"]);

    let a4 = NaryAlgebra::make_simple(3).unwrap();
    let s4 = NaryAlgebra::direct_sum(&[a4.clone(), a4]).unwrap();
    assert_eq!(s4.check_filippov(), Ok(()));

    assert_eq!(
        NaryAlgebra::direct_sum(&[a3, NaryAlgebra::make_simple(3).unwrap()]),
        Err(AlgebraError::MixedArity(vec![2, 3]))
    );
    assert_eq!(
        NaryAlgebra::direct_sum(&[]),
        Err(AlgebraError::EmptyDirectSum)
    );
}

#[test]
fn direct_sum_blocks_are_ideals() {
    let a4 = NaryAlgebra::make_simple(3).unwrap();
    let s = NaryAlgebra::direct_sum(&[a4.clone(), a4.clone(), a4]).unwrap();
    let blocks = s.blocks().unwrap().to_vec();
    let block_of = |i: usize| blocks.iter().position(|b| b.contains(&i)).unwrap();
    for a in 0..12 {
        for b in 0..12 {
            for c in 0..12 {
                let p = s.basis_product(&[a, b, c]);
                let owners: std::collections::BTreeSet<_> =
                    [a, b, c].iter().map(|&i| block_of(i)).collect();
                if owners.len() > 1 {
                    assert!(p.is_empty());
                } else {
                    let blk = block_of(a);
                    assert!(p.iter().all(|(k, _)| block_of(*k) == blk));
                }
            }
        }
    }
}

#[test]
fn load_save_round_trip_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let s = NaryAlgebra::direct_sum(&[
        NaryAlgebra::make_simple(2).unwrap(),
        NaryAlgebra::make_simple(2).unwrap(),
    ])
    .unwrap();
    s.save(&path).unwrap();
    assert_eq!(NaryAlgebra::load(&path).unwrap(), s);

    let base = r#"{"arity":2,"dim":3,"basis":["a","b","c"],"products":[PRODUCTS]}"#;
    let with = |p: &str| base.replace("PRODUCTS", p);
    type Expect = fn(&AlgebraError) -> bool;
    let cases: Vec<(String, Expect)> = vec![
        ("{not json".into(), |e| {
            matches!(e, AlgebraError::Malformed(_))
        }),
        (with(r#"{"args":[2,1],"value":{"3":"1"}}"#), |e| {
            matches!(e, AlgebraError::NonIncreasingArgs { .. })
        }),
        (with(r#"{"args":[1,4],"value":{"3":"1"}}"#), |e| {
            matches!(e, AlgebraError::IndexOutOfRange { index: 4, .. })
        }),
        (with(r#"{"args":[1,2],"value":{"0":"1"}}"#), |e| {
            matches!(e, AlgebraError::IndexOutOfRange { index: 0, .. })
        }),
        (with(r#"{"args":[1,2,3],"value":{"3":"1"}}"#), |e| {
            matches!(e, AlgebraError::ArityMismatch { .. })
        }),
        (with(r#"{"args":[1,2],"value":{"3":"x"}}"#), |e| {
            matches!(e, AlgebraError::BadCoefficient { .. })
        }),
        (
            with(r#"{"args":[1,2],"value":{"3":"1"}},{"args":[1,2],"value":{"3":"2"}}"#),
            |e| matches!(e, AlgebraError::DuplicateArgs { .. }),
        ),
        (
            r#"{"arity":2,"dim":2,"basis":["a","b","c"],"products":[]}"#.into(),
            |e| matches!(e, AlgebraError::DimensionMismatch { .. }),
        ),
    ];
    for (text, check) in cases {
        let err = NaryAlgebra::from_json(&text).unwrap_err();
        assert!(check(&err), "{text}: {err}");
    }
    assert!(matches!(
        NaryAlgebra::load(dir.path().join("missing.json")),
        Err(AlgebraError::Io { .. })
    ));
}

#[test]
fn content_hash_is_stable() {
    let a = NaryAlgebra::make_simple(3).unwrap();
    assert_eq!(a.content_hash(), a.clone().content_hash());
    assert_ne!(a.content_hash(), perturbed_a4().content_hash());
    assert_eq!(a.content_hash().len(), 64);
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn element(d: usize) -> impl Strategy<Value = AlgebraElement> {
    proptest::collection::vec(prop_oneof![3 => Just(int(0)), 2 => small_rational()], d)
        .prop_map(AlgebraElement::new)
}

fn random_algebra() -> impl Strategy<Value = NaryAlgebra> {
    (2usize..=3, 3usize..=5).prop_flat_map(|(n, d)| {
        let tuples = increasing_tuples(d, n);
        proptest::collection::vec(
            proptest::collection::vec((0..d, small_rational()), 0..3),
            tuples.len(),
        )
        .prop_map(move |vals| {
            NaryAlgebra::new(n, default_labels(d), tuples.clone().into_iter().zip(vals)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_multilinear(
        alg in random_algebra(),
        seed in proptest::collection::vec(element(5), 5),
        alpha in small_rational(),
        beta in small_rational(),
        slot in 0usize..3,
    ) {
        let d = alg.dim();
        let n = alg.arity();
        let slot = slot % n;
        let cut = |x: &AlgebraElement| AlgebraElement::new(x.coords()[..d].to_vec());
        let mut args: Vec<AlgebraElement> = seed.iter().take(n).map(cut).collect();
        let x = cut(&seed[3]);
        let y = cut(&seed[4]);
        args[slot] = x.scale(&alpha).add(&y.scale(&beta));
        let combined = alg.product(&args).unwrap();
        args[slot] = x;
        let px = alg.product(&args).unwrap();
        args[slot] = y;
        let py = alg.product(&args).unwrap();
        prop_assert_eq!(combined, px.scale(&alpha).add(&py.scale(&beta)));
        let direct = alg.product(&args).unwrap();
        let naive = naive_product(&alg, &args);
        prop_assert_eq!(direct.coords(), naive.as_slice());
    }

    #[test]
    fn product_is_alternating(
        alg in random_algebra(),
        seed in proptest::collection::vec(element(5), 3),
        i in 0usize..3,
        j in 0usize..3,
    ) {
        let d = alg.dim();
        let n = alg.arity();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let mut args: Vec<AlgebraElement> =
            seed.iter().take(n).map(|x| AlgebraElement::new(x.coords()[..d].to_vec())).collect();
        let base = alg.product(&args).unwrap();
        args.swap(i, j);
        prop_assert_eq!(alg.product(&args).unwrap(), base.scale(&int(-1)));
        args[j] = args[i].clone();
        prop_assert!(alg.product(&args).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip(alg in random_algebra()) {
        prop_assert_eq!(NaryAlgebra::from_json(&alg.to_json()).unwrap(), alg);
    }
}

use plancherel::partitions::*;
use proptest::prelude::*;
use rug::{Float, Integer, Rational};

fn part(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

/// Independent count of partitions of n by the classical coin-change recursion.
fn p_table(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            p[m] += p[m - k];
        }
    }
    p
}

#[test]
fn enumerate_examples() {
    let e: Vec<_> = enumerate(0, None).collect();
    assert_eq!(e, vec![Partition::empty()]);
    let e: Vec<_> = enumerate(5, Some(2)).collect();
    // at most two rows: floor(n/2) + 1 partitions of each n
    assert_eq!(e.len(), (0..=5).map(|n| n / 2 + 1).sum::<usize>());
    let w5: Vec<Vec<u32>> = e.iter().filter(|p| p.weight() == 5).map(|p| p.parts().to_vec()).collect();
    assert_eq!(w5, vec![vec![5], vec![4, 1], vec![3, 2]]);
    assert_eq!(enumerate(8, None).count(), 67);
}

#[test]
fn enumerate_counts_and_order() {
    let p = p_table(20);
    let all: Vec<_> = enumerate(20, None).collect();
    for n in 0..=20u64 {
        assert_eq!(all.iter().filter(|x| x.weight() == n).count() as u64, p[n as usize]);
    }
    for w in all.windows(2) {
        assert!(w[0] < w[1], "{:?} !< {:?}", w[0], w[1]);
    }
    for l in enumerate(14, Some(3)) {
        assert!(l.length() <= 3);
    }
    let bounded = enumerate(14, Some(3)).count();
    let filtered = enumerate(14, None).filter(|l| l.length() <= 3).count();
    assert_eq!(bounded, filtered);
}

#[test]
fn plancherel_examples() {
    assert_eq!(plancherel_weight(&Partition::empty()), 1);
    assert_eq!(plancherel_weight(&part(&[1])), 1);
    let s: Rational = enumerate(3, None).filter(|l| l.weight() == 3).map(|l| plancherel_weight(&l)).sum();
    assert_eq!(s, Rational::from((1, 6)));
}

#[test]
fn burnside_small() {
    for k in 0..=12u64 {
        let s: Rational = enumerate(k, None).filter(|l| l.weight() == k).map(|l| plancherel_weight(&l)).sum();
        let f = Integer::from(Integer::factorial(k as u32));
        assert_eq!(s, Rational::from((Integer::from(1), f)), "k = {k}");
    }
}

#[test]
fn product_form_equals_hook_form() {
    for l in enumerate(12, None) {
        let d = l.dimension();
        let f = Integer::from(Integer::factorial(l.weight() as u32));
        let hook = Rational::from((d, f));
        let hook = Rational::from(hook.square_ref());
        assert_eq!(plancherel_weight(&l), hook);
    }
}

#[test]
fn q_weight_examples() {
    assert!(q_plancherel_symbolic(&Partition::empty()).same_as(&QRationalFunction {
        num: LaurentPoly::one(),
        den: LaurentPoly::one()
    }));
    let one = q_plancherel_symbolic(&part(&[1]));
    let expect = QRationalFunction { num: LaurentPoly::one(), den: LaurentPoly::qnumber(1).pow(2) };
    assert!(one.same_as(&expect));
    let q = Float::with_val(256, 0.25);
    let v = q_plancherel_weight(&part(&[1]), &q).unwrap();
    assert_eq!(v, Float::with_val(256, Rational::from((4, 9))));
    assert!(q_plancherel_weight(&part(&[1]), &Float::with_val(64, 1.5)).is_err());
}

#[test]
fn q_weight_symbolic_matches_numeric_and_classical_limit() {
    let s = Float::with_val(256, 0.6);
    let q = Float::with_val(256, s.square_ref());
    for l in enumerate(7, None) {
        let sym = q_plancherel_symbolic(&l);
        let a = sym.eval(&s);
        let b = q_plancherel_weight(&l, &q).unwrap();
        assert!(plancherel::numerics::rel_err(&a, &b) < 1e-60);
        // Each factor [h]^2 is symmetric under s -> 1/s.
        assert!(sym.same_as(&sym.invert_variable()));
    }
}

#[test]
fn casimir_examples() {
    let t = casimirs(&part(&[2, 1]), 2);
    assert_eq!(*t.get(1), Rational::from((71, 24)));
    assert_eq!(*t.get(2), 0);
    assert_eq!(*casimirs(&Partition::empty(), 1).get(1), Rational::from((-1, 24)));
}

#[test]
fn c2_closed_form_all_small() {
    for l in enumerate(12, None) {
        let t = casimirs(&l, 2);
        assert_eq!(*t.get(2), c2_closed(&l), "{:?}", l);
        assert_eq!(*t.get(1), Rational::from(l.weight()) - Rational::from((1, 24)));
    }
}

#[test]
fn fast_casimirs_agree_with_series() {
    for l in enumerate(10, None) {
        let t = casimirs(&l, 6);
        for k in 1..=6 {
            assert_eq!(casimir_fast(&l, k), *t.get(k));
        }
    }
}

fn arb_partition(max_weight: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=max_weight, 0..8).prop_map(move |mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = vec![];
        let mut w = 0;
        for x in v {
            if w + x <= max_weight {
                out.push(x);
                w += x;
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(out).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn n_independence(l in arb_partition(14)) {
        let n = l.length();
        prop_assert_eq!(plancherel_weight_at(&l, n), plancherel_weight_at(&l, n + 5));
        prop_assert_eq!(casimirs_at(&l, 6, n), casimirs_at(&l, 6, n + 5));
        prop_assert!(q_plancherel_symbolic_at(&l, n).same_as(&q_plancherel_symbolic_at(&l, n + 5)));
    }

    #[test]
    fn hooks_strictly_decreasing(l in arb_partition(20), extra in 0usize..6) {
        let n = l.length() + extra;
        let h = l.hooks(n);
        for w in h.windows(2) {
            prop_assert!(w[0] > w[1]);
        }
        if n > 0 {
            prop_assert!(*h.last().unwrap() >= 0);
            prop_assert_eq!(h[n - 1] == 0, l.part(n - 1) == 0);
        }
    }

    #[test]
    fn json_roundtrip(l in arb_partition(20)) {
        let s = serde_json::to_string(&l).unwrap();
        let back: Partition = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, l);
    }
}

#[test]
fn json_rejects_increasing_parts() {
    assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    assert_eq!(serde_json::to_string(&part(&[3, 1, 0])).unwrap(), "[3,1]");
}

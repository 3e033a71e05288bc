use std::sync::Arc;

use penta_core::ncseries::{
    lyndon_basis, witt_dimension, Alphabet, LieSeries, Series, Tensor2, Word,
};
use penta_core::{q, qi, Error, Q};
use proptest::prelude::*;

fn f2(d: u32) -> (Arc<Alphabet>, Series, Series, Series) {
    let al = Alphabet::f2();
    let a = Series::named(&al, d, "A").unwrap();
    let b = Series::named(&al, d, "B").unwrap();
    let one = Series::one(&al, d);
    (al, a, b, one)
}

fn w(al: &Alphabet, names: &[&str]) -> Word {
    Word::from_slice(&names.iter().map(|n| al.expect_letter(n)).collect::<Vec<_>>())
}

#[test]
fn concat_examples() {
    let (al, a, b, one) = f2(4);
    let p = one.add(&a).unwrap().concat_mul(&one.add(&b).unwrap()).unwrap();
    let expected = Series::from_terms(
        &al,
        4,
        [
            (Word::empty(), qi(1)),
            (w(&al, &["A"]), qi(1)),
            (w(&al, &["B"]), qi(1)),
            (w(&al, &["A", "B"]), qi(1)),
        ],
    );
    assert_eq!(p, expected);
    assert_eq!(a.concat_mul(&a).unwrap(), Series::monomial(&al, 4, w(&al, &["A", "A"]), qi(1)));

    // Truncated geometric series times (1 - A) is exactly 1 within the truncation.
    let geo = (0..=4).fold(Series::zero(&al, 4), |acc, k| acc.add(&a.pow(k)).unwrap());
    assert_eq!(one.sub(&a).unwrap().concat_mul(&geo).unwrap(), one);
}

#[test]
fn shuffle_examples() {
    let (al, a, b, _) = f2(4);
    let ab = a.shuffle_mul(&b).unwrap();
    assert_eq!(ab.coeff(&w(&al, &["A", "B"])), qi(1));
    assert_eq!(ab.coeff(&w(&al, &["B", "A"])), qi(1));
    assert_eq!(a.shuffle_mul(&a).unwrap().coeff(&w(&al, &["A", "A"])), qi(2));
    let x = Series::monomial(&al, 4, w(&al, &["A", "B"]), qi(1)).shuffle_mul(&a).unwrap();
    assert_eq!(x.len(), 2);
    assert_eq!(x.coeff(&w(&al, &["A", "A", "B"])), qi(2));
    assert_eq!(x.coeff(&w(&al, &["A", "B", "A"])), qi(1));
}

#[test]
fn coproduct_examples() {
    let (al, a, b, one) = f2(4);
    let d1 = Tensor2::coproduct(&one);
    assert_eq!(d1.terms().len(), 1);
    assert_eq!(d1.coeff(&Word::empty(), &Word::empty()), qi(1));
    let da = Tensor2::coproduct(&a);
    assert_eq!(da.terms().len(), 2);
    let dab = Tensor2::coproduct(&a.concat_mul(&b).unwrap());
    let prod = Tensor2::coproduct(&a).mul(&Tensor2::coproduct(&b)).unwrap();
    assert_eq!(dab, prod);
    assert_eq!(dab.coeff(&w(&al, &["A"]), &w(&al, &["B"])), qi(1));
    assert_eq!(dab.coeff(&w(&al, &["B"]), &w(&al, &["A"])), qi(1));
    assert_eq!(dab.coeff(&w(&al, &["A", "B"]), &Word::empty()), qi(1));
}

#[test]
fn exp_log_examples() {
    let (al, a, b, one) = f2(5);
    assert_eq!(Series::zero(&al, 5).exp().unwrap(), one);
    assert_eq!(a.exp().unwrap().log().unwrap(), a);
    let lhs = a.exp().unwrap().concat_mul(&b.exp().unwrap()).unwrap();
    let diff = lhs.sub(&a.add(&b).unwrap().exp().unwrap()).unwrap();
    assert_eq!(diff.coeff(&w(&al, &["A", "B"])), q(1, 2));
    assert!(matches!(one.exp(), Err(Error::Precondition(_))));
    assert!(matches!(a.log(), Err(Error::Precondition(_))));
}

#[test]
fn grouplike_examples() {
    let (_, a, _, one) = f2(4);
    assert!(one.is_grouplike());
    assert!(a.exp().unwrap().is_grouplike());
    assert!(!one.add(&a).unwrap().is_grouplike());
}

#[test]
fn substitute_examples() {
    let al = Alphabet::cyclotomic(3);
    let d = 3;
    let letters: Vec<Series> = (0..al.len() as u16).map(|l| Series::letter(&al, d, l)).collect();
    let x = letters[1].concat_mul(&letters[0]).unwrap().add(&letters[2]).unwrap();
    let id: Vec<Option<Series>> = letters.iter().cloned().map(Some).collect();
    assert_eq!(x.substitute(&id).unwrap(), x);

    // Rotation of the B letters by a = 1.
    let mut tau: Vec<Option<Series>> = vec![Some(letters[0].clone())];
    for c in 0..3 {
        tau.push(Some(Series::letter(&al, d, al.b(c + 1))));
    }
    let b0 = Series::letter(&al, d, al.b(0));
    assert_eq!(b0.substitute(&tau).unwrap(), Series::letter(&al, d, al.b(1)));

    let mut missing = id.clone();
    missing[0] = None;
    assert!(matches!(x.substitute(&missing), Err(Error::MissingImage(_))));
    let mut bad = id.clone();
    bad[1] = Some(letters[0].concat_mul(&letters[0]).unwrap());
    assert!(matches!(x.substitute(&bad), Err(Error::DegreeMismatch { .. })));
}

#[test]
fn lyndon_examples() {
    let (al, a, b, _) = f2(4);
    let br = a.bracket(&b).unwrap();
    let lie = LieSeries::from_series(&br).unwrap();
    assert_eq!(lie.coords.len(), 1);
    assert_eq!(lie.coords[&w(&al, &["A", "B"])], qi(1));
    assert_eq!(lie.to_series(), br);
    let ab = a.concat_mul(&b).unwrap();
    assert!(matches!(LieSeries::from_series(&ab), Err(Error::NotPrimitive(_))));
    assert_eq!(lyndon_basis(&al, 2).len(), 1);
}

#[test]
fn witt_dimensions_match_lyndon_counts() {
    for k in 2..=4u64 {
        let al = Alphabet::cyclotomic(k as u32 - 1);
        for n in 1..=5u32 {
            assert_eq!(lyndon_basis(&al, n).len() as u64, witt_dimension(k, n), "k={k} n={n}");
        }
    }
    // Independent count of necklaces for k = 2: 2, 1, 2, 3, 6, 9.
    let counts: Vec<u64> = (1..=6).map(|n| witt_dimension(2, n)).collect();
    assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
}

#[test]
fn weighted_lyndon_basis() {
    let al = Alphabet::y(1, 4);
    // Compositions-as-necklaces of 3 with parts Y1, Y2, Y3: Y3, Y1Y2, Y1Y1Y1 is not Lyndon.
    let basis = lyndon_basis(&al, 3);
    assert_eq!(basis.len(), 2);
}

#[test]
fn json_roundtrip_is_bit_exact() {
    let al = Alphabet::cyclotomic(2);
    let s = Series::from_terms(
        &al,
        3,
        [
            (Word::empty(), qi(1)),
            (Word::from_slice(&[0, 1]), q(-3, 4)),
            (Word::from_slice(&[2]), q(5, 7)),
        ],
    );
    let text = s.to_json();
    let back = Series::<Q>::from_json(&text).unwrap();
    assert_eq!(back, s);
    assert_eq!(back.to_json(), text);
    let mut v = s.to_json_value();
    v["terms"][2]["word"][1] = "Z9".into();
    match Series::<Q>::from_json_value(&v) {
        Err(Error::Parse { location, .. }) => assert!(location.contains("terms")),
        other => panic!("expected parse error, got {other:?}"),
    }
}

fn series_strategy(letters: u16, d: u32) -> impl Strategy<Value = Series> {
    let al = Alphabet::custom(&["a", "b", "c"][..letters as usize]);
    proptest::collection::vec(
        (proptest::collection::vec(0..letters, 0..=d as usize), -3i64..=3),
        0..6,
    )
    .prop_map(move |terms| {
        Series::from_terms(
            &al,
            d,
            terms.into_iter().map(|(w, c)| (Word::from_slice(&w), qi(c))),
        )
    })
}

fn lie_strategy(d: u32) -> impl Strategy<Value = Series> {
    let al = Alphabet::custom(&["a", "b", "c"]);
    proptest::collection::vec(-3i64..=3, 14).prop_map(move |cs| {
        let mut x = LieSeries::zero(&al, d);
        let basis: Vec<Word> = (1..=3).flat_map(|k| lyndon_basis(&al, k)).collect();
        for (w, c) in basis.into_iter().zip(cs) {
            x.set(w, qi(c));
        }
        x.to_series()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_are_associative(a in series_strategy(2, 4), b in series_strategy(2, 4), c in series_strategy(2, 4)) {
        let l = a.concat_mul(&b).unwrap().concat_mul(&c).unwrap();
        let r = a.concat_mul(&b.concat_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        let l = a.shuffle_mul(&b).unwrap().shuffle_mul(&c).unwrap();
        let r = a.shuffle_mul(&b.shuffle_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(a.shuffle_mul(&b).unwrap(), b.shuffle_mul(&a).unwrap());
    }

    #[test]
    fn coproduct_is_multiplicative(a in series_strategy(3, 4), b in series_strategy(3, 4)) {
        let lhs = Tensor2::coproduct(&a.concat_mul(&b).unwrap());
        let rhs = Tensor2::coproduct(&a).mul(&Tensor2::coproduct(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponentials_of_lie_series_are_grouplike(x in lie_strategy(4)) {
        let g = x.exp().unwrap();
        prop_assert!(g.is_grouplike());
        prop_assert_eq!(g.log().unwrap(), x.clone());
        prop_assert_eq!(LieSeries::from_series(&x).unwrap().to_series(), x.clone());
        // Linear Lie images keep group-likeness.
        let al = x.alphabet().clone();
        let ga = Series::letter(&al, 4, 0);
        let gb = Series::letter(&al, 4, 1);
        let gc = Series::letter(&al, 4, 2);
        let images = vec![
            Some(gb.clone()),
            Some(ga.add(&gc).unwrap()),
            Some(gc.scale(&qi(-2)).add(&gb).unwrap()),
        ];
        prop_assert!(g.substitute(&images).unwrap().is_grouplike());
    }

    #[test]
    fn coefficients_of_products_split(a in series_strategy(2, 4), b in series_strategy(2, 4), word in proptest::collection::vec(0u16..2, 0..=4)) {
        let w = Word::from_slice(&word);
        let p = a.concat_mul(&b).unwrap();
        let mut expected = qi(0);
        for i in 0..=word.len() {
            expected += a.coeff(&Word::from_slice(&word[..i])) * b.coeff(&Word::from_slice(&word[i..]));
        }
        prop_assert_eq!(p.coeff(&w), expected);
    }
}

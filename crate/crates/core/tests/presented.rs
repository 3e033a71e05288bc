use std::sync::Arc;

use penta_core::ncseries::{Alphabet, Series, Word};
use penta_core::presented::{
    cache_format, Morphism, Presentation, QuotientAlgebra, XfVariant,
};
use penta_core::{qi, Error};
use proptest::prelude::*;

fn arc(p: Presentation) -> Arc<Presentation> {
    Arc::new(p)
}

fn word(p: &Presentation, names: &[&str]) -> Series {
    let w = Word::from_slice(&names.iter().map(|n| p.alpha.expect_letter(n)).collect::<Vec<_>>());
    Series::monomial(&p.alpha, names.len() as u32, w, qi(1))
}

/// Coefficients of Π_k 1/(1 - r_k t) up to degree d.
fn product_series(ranks: &[u64], d: usize) -> Vec<u64> {
    let mut acc = vec![0u64; d + 1];
    acc[0] = 1;
    for &r in ranks {
        for i in 1..=d {
            acc[i] += r * acc[i - 1];
        }
    }
    acc
}

#[test]
fn small_presentations() {
    let t2 = Presentation::build_t_plain(2).unwrap();
    assert_eq!(t2.alpha.letters, vec!["t12"]);
    assert!(t2.relations.is_empty());
    let q = QuotientAlgebra::new(arc(t2), 4).unwrap();
    for d in 0..=4 {
        assert_eq!(q.normal_monomials(d).len(), 1);
    }
    for n in 1..=4 {
        let t03 = Presentation::build_t0(3, n).unwrap();
        assert_eq!(t03.alpha.len() as u32, n + 1);
        assert!(t03.relations.is_empty(), "N={n}");
    }
    assert!(matches!(Presentation::build_t(1, 1), Err(Error::Invalid(_))));
    assert!(matches!(Presentation::build_t(3, 0), Err(Error::Invalid(_))));
}

#[test]
fn free_presentation_has_empty_ideal() {
    let p = arc(Presentation::free(Alphabet::cyclotomic(2)));
    let q = QuotientAlgebra::new(p, 4).unwrap();
    for d in 0..=4 {
        assert!(q.ideal_component(d).unwrap().is_empty());
        assert_eq!(q.dim(d), 3u64.pow(d));
    }
}

#[test]
fn t4_commuting_pairs() {
    let p = arc(Presentation::build_t_plain(4).unwrap());
    let q = QuotientAlgebra::new(p.clone(), 3).unwrap();
    let a = word(&p, &["t12", "t34"]).with_maxdeg(3);
    let b = word(&p, &["t34", "t12"]).with_maxdeg(3);
    assert!(q.is_zero(&a.sub(&b).unwrap()).unwrap());
    assert_eq!(q.normal_form(&a).unwrap(), q.normal_form(&b).unwrap());
    let rel = a.sub(&b).unwrap();
    let basis = q.ideal_component(2).unwrap();
    assert!(basis.iter().all(|r| q.is_zero(r).unwrap()));
    assert!(q.is_zero(&rel).unwrap());
    for r in &p.relations {
        assert!(q.is_zero(&r.with_maxdeg(3)).unwrap());
    }
    assert!(matches!(
        q.normal_form(&a.with_maxdeg(4)),
        Err(Error::DegreeOverflow(4, 3))
    ));
}

#[test]
fn hilbert_series_match_semidirect_structure() {
    for n in 2..=4u32 {
        for level in 1..=3u32 {
            let d = if level == 3 && n == 4 { 3 } else { 4 };
            let q = QuotientAlgebra::new(arc(Presentation::build_t(n, level).unwrap()), d).unwrap();
            let ranks: Vec<u64> = (2..=n).map(|k| ((k as u64 - 2) * level as u64) + 1).collect();
            let expected = product_series(&ranks, d as usize);
            let got: Vec<u64> = (0..=d).map(|k| q.dim(k)).collect();
            assert_eq!(got, expected, "t_{{{n},{level}}}");
        }
    }
    // Reduced algebras lose exactly the central polynomial factor.
    for level in 1..=3u32 {
        let q = QuotientAlgebra::new(arc(Presentation::build_t0(3, level).unwrap()), 4).unwrap();
        for d in 0..=4 {
            assert_eq!(q.dim(d), (level as u64 + 1).pow(d));
        }
        let q = QuotientAlgebra::new(arc(Presentation::build_t0(4, level).unwrap()), 3).unwrap();
        let expected = product_series(&[level as u64 + 1, 2 * level as u64 + 1], 3);
        assert_eq!((0..=3).map(|d| q.dim(d)).collect::<Vec<_>>(), expected);
    }
}

#[test]
fn plain_and_level_one_agree() {
    for n in 3..=4 {
        let a = QuotientAlgebra::new(arc(Presentation::build_t_plain(n).unwrap()), 4).unwrap();
        let b = QuotientAlgebra::new(arc(Presentation::build_t(n, 1).unwrap()), 4).unwrap();
        for d in 0..=4 {
            assert_eq!(a.dim(d), b.dim(d));
        }
    }
}

fn random_series(p: &Presentation, d: u32, seed: &[(Vec<u16>, i64)]) -> Series {
    let n = p.alpha.len() as u16;
    Series::from_terms(
        &p.alpha,
        d,
        seed.iter()
            .map(|(w, c)| (Word::from_slice(&w.iter().map(|l| l % n).collect::<Vec<_>>()), qi(*c))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn central_element_commutes(seed in proptest::collection::vec((proptest::collection::vec(0u16..64, 0..=3), -4i64..=4), 1..6), level in 1u32..=3) {
        let p = arc(Presentation::build_t(4, level).unwrap());
        let q = QuotientAlgebra::new(p.clone(), 4).unwrap();
        let x = random_series(&p, 4, &seed);
        let z = p.central_element().with_maxdeg(4);
        let comm = z.concat_mul(&x).unwrap().sub(&x.concat_mul(&z).unwrap()).unwrap();
        prop_assert!(q.is_zero(&comm).unwrap());
    }

    #[test]
    fn normal_form_is_a_projection(seed in proptest::collection::vec((proptest::collection::vec(0u16..64, 0..=4), -4i64..=4), 1..8), level in 1u32..=2) {
        let p = arc(Presentation::build_t0(4, level).unwrap());
        let q = QuotientAlgebra::new(p.clone(), 4).unwrap();
        let x = random_series(&p, 4, &seed);
        let nf = q.normal_form(&x).unwrap();
        prop_assert_eq!(q.normal_form(&nf).unwrap(), nf.clone());
        // x - nf(x) lies in the ideal.
        prop_assert!(q.is_zero(&x.sub(&nf).unwrap()).unwrap());
    }
}

#[test]
fn morphism_checks() {
    let t4 = arc(Presentation::build_t(4, 2).unwrap());
    assert!(Morphism::identity(t4.clone()).check().unwrap());

    let plain = arc(Presentation::build_t_plain(4).unwrap());
    let free = arc(Presentation::free(Alphabet::f2()));
    let a = Series::named(&free.alpha, 1, "A").unwrap();
    let b = Series::named(&free.alpha, 1, "B").unwrap();
    let zero = Series::zero(&free.alpha, 1);
    let images: Vec<Series> = plain
        .alpha
        .letters
        .iter()
        .map(|n| match n.as_str() {
            "t12" => a.clone(),
            "t34" => b.clone(),
            _ => zero.clone(),
        })
        .collect();
    let m = Morphism::new(plain, free, images).unwrap();
    assert!(!m.check().unwrap());
}

#[test]
fn xf_examples() {
    for level in 1..=3 {
        let t3 = arc(Presentation::build_t(3, level).unwrap());
        let t4 = arc(Presentation::build_t(4, level).unwrap());
        let id = Morphism::build_xf(&[Some(1), Some(2), Some(3)], XfVariant::TnToTn, t3.clone(), t3.clone())
            .unwrap();
        for (l, img) in id.images.iter().enumerate() {
            assert_eq!(img, &Series::letter(&t3.alpha, 1, l as u16));
        }
        let m = Morphism::build_xf(&[Some(1), Some(2), Some(3), Some(3)], XfVariant::TnToTn, t3.clone(), t4.clone())
            .unwrap();
        assert!(m.check().unwrap());
        let t12 = t3.alpha.expect_letter("t12") as usize;
        assert_eq!(m.images[t12], t4.generator(1, 2, 0).unwrap());
        for a in 0..level as i64 {
            let l = t3.alpha.expect_letter(&format!("t23({a})")) as usize;
            let expected = t4.generator(2, 3, a).unwrap().add(&t4.generator(2, 4, a).unwrap()).unwrap();
            assert_eq!(m.images[l], expected);
        }
        assert!(matches!(
            Morphism::build_xf(&[Some(2), Some(1), Some(3), None], XfVariant::TnToTn, t3.clone(), t4.clone()),
            Err(Error::Precondition(_))
        ));
    }
    let s3 = arc(Presentation::build_t_plain(3).unwrap());
    let t4 = arc(Presentation::build_t(4, 3).unwrap());
    let g = Morphism::build_xf(&[None, Some(1), Some(2), Some(3)], XfVariant::TToTn, s3.clone(), t4.clone()).unwrap();
    assert!(g.check().unwrap());
    assert_eq!(g.images[s3.alpha.expect_letter("t12") as usize], t4.generator(2, 3, 0).unwrap());
    assert_eq!(g.images[s3.alpha.expect_letter("t23") as usize], t4.generator(3, 4, 0).unwrap());

    let s4 = arc(Presentation::build_t_plain(4).unwrap());
    for f in [[Some(1), Some(2), Some(3), Some(3)], [Some(1), Some(1), Some(2), Some(3)], [Some(1), Some(2), Some(2), Some(3)]] {
        assert!(Morphism::build_xf(&f, XfVariant::TToT, s3.clone(), s4.clone()).unwrap().check().unwrap());
    }
}

/// The generic `x^f` images coincide with the explicit substitution lists of
/// the mixed pentagon, modulo the ideal of the reduced target.
#[test]
fn xf_matches_explicit_lists() {
    for level in 1..=3u32 {
        let t3 = arc(Presentation::build_t(3, level).unwrap());
        let t04 = arc(Presentation::build_t0(4, level).unwrap());
        let q = QuotientAlgebra::new(t04.clone(), 2).unwrap();
        let g = |i, j, a| t04.generator(i, j, a).unwrap();
        let gs = |i, j| t04.generator_sum(i, j).unwrap();
        let maps: [([Option<u32>; 4], Series, Box<dyn Fn(i64) -> Series>); 4] = [
            ([Some(1), Some(2), Some(3), None], g(1, 2, 0), Box::new(|a| g(2, 3, a))),
            (
                [Some(1), Some(2), Some(3), Some(3)],
                g(1, 2, 0),
                Box::new(|a| g(2, 3, a).add(&g(2, 4, a)).unwrap()),
            ),
            (
                [Some(1), Some(1), Some(2), Some(3)],
                g(1, 3, 0).add(&gs(2, 3)).unwrap(),
                Box::new(|a| g(3, 4, a)),
            ),
            (
                [Some(1), Some(2), Some(2), Some(3)],
                g(1, 2, 0).add(&g(1, 3, 0)).unwrap().add(&gs(2, 3)).unwrap(),
                Box::new(|a| g(2, 4, a).add(&g(3, 4, a)).unwrap()),
            ),
        ];
        for (f, a_img, b_img) in maps {
            let m = Morphism::build_xf(&f, XfVariant::TnToTn, t3.clone(), t04.clone()).unwrap();
            assert!(m.check().unwrap());
            let la = t3.alpha.expect_letter("t12") as usize;
            assert!(q.is_zero(&m.images[la].sub(&a_img).unwrap().with_maxdeg(2)).unwrap());
            for a in 0..level as i64 {
                let lb = t3.alpha.expect_letter(&format!("t23({a})")) as usize;
                assert!(q.is_zero(&m.images[lb].sub(&b_img(a)).unwrap().with_maxdeg(2)).unwrap());
            }
        }
    }
}

#[test]
fn level_maps() {
    let t2 = arc(Presentation::build_t(3, 2).unwrap());
    let t1 = arc(Presentation::build_t(3, 1).unwrap());
    let pi = Morphism::pi_nn(t2.clone(), t1.clone()).unwrap();
    let delta = Morphism::delta_nn(t2.clone(), t1.clone()).unwrap();
    assert!(pi.check().unwrap() && delta.check().unwrap());
    let l231 = t2.alpha.expect_letter("t23(1)") as usize;
    let l12 = t2.alpha.expect_letter("t12") as usize;
    assert_eq!(pi.images[l231], t1.generator(2, 3, 0).unwrap());
    assert_eq!(pi.images[l12], t1.generator(1, 2, 0).unwrap().scale(&qi(2)));
    assert!(delta.images[l231].is_zero());
    for level in [1u32, 2, 3, 4, 6] {
        for np in (1..=level).filter(|d| level % d == 0) {
            for reduced in [false, true] {
                let build = |k| if reduced { Presentation::build_t0(4, k) } else { Presentation::build_t(4, k) };
                let s = arc(build(level).unwrap());
                let t = arc(build(np).unwrap());
                assert!(Morphism::pi_nn(s.clone(), t.clone()).unwrap().check().unwrap());
                assert!(Morphism::delta_nn(s, t).unwrap().check().unwrap());
            }
        }
        let s = arc(Presentation::build_t(3, level).unwrap());
        let same_pi = Morphism::pi_nn(s.clone(), s.clone()).unwrap();
        let same_delta = Morphism::delta_nn(s.clone(), s.clone()).unwrap();
        let id = Morphism::identity(s);
        assert_eq!(same_pi.images, id.images);
        assert_eq!(same_delta.images, id.images);
    }
    let t3 = arc(Presentation::build_t(3, 3).unwrap());
    assert!(matches!(Morphism::pi_nn(t2, t3), Err(Error::LevelMismatch(2, 3))));
}

#[test]
fn cache_format_roundtrip_and_corruption() {
    let p = arc(Presentation::build_t0(4, 2).unwrap());
    let q = QuotientAlgebra::new(p.clone(), 3).unwrap();
    let data = q.degree_data(3);
    let bytes = cache_format::encode(p.alpha.len(), 3, data);
    let back = cache_format::decode(&bytes, p.alpha.len(), 3).unwrap();
    assert_eq!(back.rows, data.rows);
    let mut bad = bytes.clone();
    bad[40] ^= 1;
    assert!(cache_format::decode(&bad, p.alpha.len(), 3).is_none());
    assert!(cache_format::decode(&bytes, p.alpha.len(), 2).is_none());
}

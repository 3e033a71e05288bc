use std::collections::BTreeMap;
use std::sync::Arc;

use penta_core::dshuffle::*;
use penta_core::equations::*;
use penta_core::ncseries::{lyndon_basis, lyndon_bracket, Alphabet, LieSeries, Series, Tensor2, Word};
use penta_core::scalar::factorial;
use penta_core::{q, qi, Error, Q};

fn ip(s: &str) -> IndexPair {
    s.parse().unwrap()
}

fn word(al: &Alphabet, names: &[&str]) -> Word {
    Word::from_slice(&names.iter().map(|n| al.expect_letter(n)).collect::<Vec<_>>())
}

fn solver_h(n: u32, d: u32, seed: u64) -> Series {
    let mut cfg = SolverConfig::new(n, qi(1), d, &[Equation::Pentagon, Equation::MixedPentagon]);
    cfg.policy = FreeParameterPolicy::Seeded(seed);
    solve_degreewise(&cfg).unwrap().h
}

/// Group-like series with `c_A = c_B(0) = 0` from a pseudo-random Lie element.
fn random_grouplike(n: u32, d: u32, salt: i64) -> Series {
    let al = Alphabet::cyclotomic(n);
    let mut lie = LieSeries::zero(&al, d);
    let mut k = salt;
    for deg in 1..=d {
        for w in lyndon_basis(&al, deg) {
            k = (k * 29 + 7) % 23;
            if deg == 1 && (w.letters()[0] == 0 || w.letters()[0] == al.b(0)) {
                continue;
            }
            lie.set(w, q(k - 11, 1 + k % 3));
        }
    }
    lie.to_series().exp().unwrap()
}

#[test]
fn index_text_roundtrip_and_errors() {
    let p = ip("2,1;1,0@3");
    assert_eq!((p.weight(), p.depth()), (3, 2));
    assert_eq!(p.to_string(), "2,1;1,0@3");
    assert!(!p.is_admissible());
    assert_eq!(ip(" 3 ; -1 @ 2").e, vec![1]);
    assert!(ip(";@2").is_empty());
    for bad in ["2;0", "2,1;0@2", "0;0@1", "x;0@1", "2;0@0"] {
        assert!(matches!(bad.parse::<IndexPair>(), Err(Error::Parse { .. })), "{bad}");
    }
}

#[test]
fn pi_y_examples() {
    let al = Alphabet::cyclotomic(2);
    let d = 3;
    let y = Alphabet::y(2, d);
    let mono = |names: &[&str]| Series::monomial(&al, d, word(&al, names), qi(1));
    let ymono = |names: &[&str], c: i64| Series::monomial(&y, d, word(&y, names), qi(c));
    assert!(pi_y(&mono(&["B0", "A"])).unwrap().is_zero());
    assert_eq!(pi_y(&mono(&["B0"])).unwrap(), ymono(&["Y1_0"], -1));
    assert_eq!(pi_y(&mono(&["A", "B1"])).unwrap(), ymono(&["Y2_1"], -1));
    // m = 2: (n_2, a_2) = (1, 1), (n_1, a_1) = (2, 0) → Y_{1,-1} Y_{2,1}.
    assert_eq!(pi_y(&mono(&["B1", "A", "B0"])).unwrap(), ymono(&["Y1_1", "Y2_1"], 1));
    assert_eq!(pi_y(&Series::<Q>::one(&al, d)).unwrap(), Series::one(&y, d));
}

#[test]
fn embed_y_examples() {
    let y = Alphabet::y(2, 3);
    let al = Alphabet::cyclotomic(2);
    let ym = |n: &str| Series::monomial(&y, 3, word(&y, &[n]), qi(1));
    assert_eq!(embed_y(&ym("Y1_0")).unwrap(), Series::monomial(&al, 3, word(&al, &["B0"]), qi(-1)));
    assert_eq!(embed_y(&ym("Y2_1")).unwrap(), Series::monomial(&al, 3, word(&al, &["A", "B1"]), qi(-1)));
    let b0 = Series::monomial(&al, 3, word(&al, &["B0"]), qi(1));
    assert_eq!(embed_y(&pi_y(&b0).unwrap()).unwrap(), b0);
    // Algebra morphism.
    let x = ym("Y1_1").add(&ym("Y2_0")).unwrap();
    let z = ym("Y1_0").scale(&q(2, 3));
    assert_eq!(
        embed_y(&x.concat_mul(&z).unwrap()).unwrap(),
        embed_y(&x).unwrap().concat_mul(&embed_y(&z).unwrap()).unwrap()
    );
}

#[test]
fn delta_star_examples() {
    let y = Alphabet::y(2, 3);
    let e = Word::empty();
    let one: Series = Series::one(&y, 3);
    let d1 = delta_star(&one).unwrap();
    assert_eq!(d1.terms().len(), 1);
    assert_eq!(d1.coeff(&e, &e), qi(1));

    let y10 = word(&y, &["Y1_0"]);
    let d = delta_star(&Series::monomial(&y, 3, y10.clone(), qi(1))).unwrap();
    let mut expect = Tensor2::zero(&y, 3);
    expect.add_term(y10.clone(), e.clone(), qi(1));
    expect.add_term(e.clone(), y10.clone(), qi(1));
    assert_eq!(d, expect);

    let y20 = word(&y, &["Y2_0"]);
    let y11 = word(&y, &["Y1_1"]);
    let d = delta_star(&Series::monomial(&y, 3, y20.clone(), qi(1))).unwrap();
    let mut expect = Tensor2::zero(&y, 3);
    expect.add_term(y20.clone(), e.clone(), qi(1));
    expect.add_term(e, y20, qi(1));
    expect.add_term(y10.clone(), y10, qi(1));
    expect.add_term(y11.clone(), y11, qi(1));
    assert_eq!(d, expect);
}

type Triple = BTreeMap<(Word, Word, Word), Q>;

fn coassoc_sides(x: &Series) -> (Triple, Triple) {
    let y = x.alphabet();
    let d = delta_star(x).unwrap();
    let (mut left, mut right) = (Triple::new(), Triple::new());
    for ((u, v), c) in d.terms() {
        let du = delta_star(&Series::monomial(y, x.maxdeg(), u.clone(), qi(1))).unwrap();
        for ((u1, u2), c2) in du.terms() {
            *left.entry((u1.clone(), u2.clone(), v.clone())).or_default() += c * c2;
        }
        let dv = delta_star(&Series::monomial(y, x.maxdeg(), v.clone(), qi(1))).unwrap();
        for ((v1, v2), c2) in dv.terms() {
            *right.entry((u.clone(), v1.clone(), v2.clone())).or_default() += c * c2;
        }
    }
    left.retain(|_, c| *c != qi(0));
    right.retain(|_, c| *c != qi(0));
    (left, right)
}

#[test]
fn delta_star_is_coassociative_and_multiplicative() {
    let y = Alphabet::y(3, 4);
    let x = Series::from_terms(
        &y,
        4,
        [
            (word(&y, &["Y2_1", "Y1_2"]), qi(1)),
            (word(&y, &["Y1_0", "Y1_1", "Y2_2"]), q(-2, 3)),
            (word(&y, &["Y4_1"]), qi(5)),
        ],
    );
    let (l, r) = coassoc_sides(&x);
    assert_eq!(l, r);

    let u = Series::monomial(&y, 4, word(&y, &["Y2_1"]), qi(1));
    let v = Series::monomial(&y, 4, word(&y, &["Y1_2", "Y1_1"]), qi(1));
    let lhs = delta_star(&u.concat_mul(&v).unwrap()).unwrap();
    let rhs = delta_star(&u).unwrap().mul(&delta_star(&v).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn correction_term() {
    let al = Alphabet::cyclotomic(2);
    let y = Alphabet::y(2, 3);
    let h = random_grouplike(2, 3, 4);
    let mut flat = h.clone();
    for names in [&["B0"][..], &["A", "B0"], &["A", "A", "B0"]] {
        flat.add_term(word(&al, names), -h.coeff_of(names).unwrap());
    }
    assert_eq!(h_corr(&flat).unwrap(), Series::one(&y, 3));

    let c = q(3, 7);
    let h = Series::monomial(&al, 3, word(&al, &["A", "B0"]), c.clone())
        .add(&Series::one(&al, 3))
        .unwrap();
    let corr = h_corr(&h).unwrap();
    let y10 = y.expect_letter("Y1_0");
    assert_eq!(corr.component(1), Series::zero(&y, 3));
    assert_eq!(corr.component(2), Series::monomial(&y, 3, Word::from_slice(&[y10, y10]), c / qi(2)));

    let one: Series = Series::one(&al, 4);
    assert_eq!(h_star(&one).unwrap(), Series::one(&Alphabet::y(2, 4), 4));
}

#[test]
fn double_shuffle_holds_for_solver_outputs() {
    let one: Series = Series::one(&Alphabet::cyclotomic(3), 4);
    assert!(residual_double_shuffle(&one).unwrap().is_zero());
    for (n, d, seed) in [(1, 5, 1), (2, 4, 2), (3, 3, 3), (4, 3, 4)] {
        let h = solver_h(n, d, seed);
        let r = residual_double_shuffle(&h).unwrap();
        assert!(r.is_zero(), "N={n} D={d}: {:?}", r.per_weight_max());
    }
}

#[test]
fn double_shuffle_detects_degree_three_perturbations() {
    let h = solver_h(2, 3, 5);
    let al = h.alphabet().clone();
    let mut witnesses = 0;
    for w in lyndon_basis(&al, 3) {
        let bump = lyndon_bracket::<Q>(&al, 3, &w).exp().unwrap();
        let r = residual_double_shuffle(&h.concat_mul(&bump).unwrap()).unwrap();
        let per = r.per_weight_max();
        assert!(per[..3].iter().all(|&x| x == 0.0));
        if per[3] > 0.0 {
            witnesses += 1;
        }
    }
    assert!(witnesses > 0);
    assert!(!residual_double_shuffle(&random_grouplike(2, 3, 1)).unwrap().is_zero());
}

#[test]
fn double_shuffle_preconditions() {
    let al = Alphabet::cyclotomic(2);
    let h = Series::<Q>::one(&al, 2).add(&Series::named(&al, 2, "A").unwrap()).unwrap();
    assert!(matches!(residual_double_shuffle(&h), Err(Error::Precondition(_))));
    let h = Series::<Q>::one(&al, 2).add(&Series::named(&al, 2, "B0").unwrap()).unwrap();
    assert!(matches!(residual_double_shuffle(&h), Err(Error::Precondition(_))));
}

/// Brute force: every map into `{0..M}` checked for surjectivity and monotonicity.
fn sh_leq_brute(k: usize, l: usize) -> usize {
    let n = k + l;
    let mut count = 0;
    for m in 0..=n {
        let total = m.pow(n as u32);
        for code in 0..total.max(if n == 0 { 1 } else { 0 }) {
            let mut c = code;
            let s: Vec<usize> = (0..n)
                .map(|_| {
                    let r = c % m;
                    c /= m;
                    r
                })
                .collect();
            let onto = (0..m).all(|t| s.contains(&t));
            let mono = s[..k].windows(2).all(|w| w[0] < w[1]) && s[k..].windows(2).all(|w| w[0] < w[1]);
            if onto && mono {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn sh_leq_counts() {
    assert_eq!(enumerate_sh_leq(1, 1).len(), 3);
    assert_eq!(enumerate_sh_leq(2, 1).len(), 5);
    for l in 0..4 {
        assert_eq!(enumerate_sh_leq(0, l).len(), 1);
    }
    for k in 0..4 {
        for l in 0..4 {
            let all = enumerate_sh_leq(k, l);
            assert_eq!(all.len(), sh_leq_brute(k, l), "k={k} l={l}");
            let mut dedup = all.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
    }
}

#[test]
fn stuffle_examples() {
    let mut got = stuffle_indices(&ip("2;0@1"), &ip("2;0@1")).unwrap();
    got.sort();
    assert_eq!(got, vec![ip("2,2;0,0@1"), ip("2,2;0,0@1"), ip("4;0@1")]);
    let got = stuffle_indices(&ip("1;2@5"), &ip("1;4@5")).unwrap();
    assert!(got.contains(&ip("2;1@5")));
    let p = ip("3,1;1,2@3");
    assert_eq!(stuffle_indices(&p, &IndexPair::empty(3)).unwrap(), vec![p.clone()]);
    for r in stuffle_indices(&p, &ip("2;1@3")).unwrap() {
        assert_eq!(r.weight(), 6);
    }
    assert!(matches!(stuffle_indices(&p, &ip("2;1@2")), Err(Error::LevelMismatch(..))));
}

#[test]
fn l_coeff_examples() {
    let h = random_grouplike(1, 3, 2);
    assert_eq!(l_coeff(&h, &IndexPair::empty(1)).unwrap(), qi(1));
    assert_eq!(l_coeff(&h, &ip("2;0@1")).unwrap(), -h.coeff_of(&["A", "B0"]).unwrap());
    // (a; e) = (2, 1; 1, 1) at N = 3: word B(-1) A B(-2) with sign +.
    let h3 = random_grouplike(3, 3, 5);
    assert_eq!(l_coeff(&h3, &ip("2,1;1,1@3")).unwrap(), h3.coeff_of(&["B2", "A", "B1"]).unwrap());
    assert!(matches!(l_coeff(&h3, &ip("2,2;0,0@3")), Err(Error::DegreeOverflow(4, 3))));
}

#[test]
fn evaluated_stuffle_holds_for_admissible_pairs() {
    for (n, d, seed) in [(1, 5, 1), (2, 4, 2), (3, 3, 3)] {
        let h = solver_h(n, d, seed);
        let mut checked = 0;
        for w1 in 1..d {
            for w2 in 1..=d - w1 {
                for p in IndexPair::all_of_weight(w1, n).iter().filter(|p| p.is_admissible()) {
                    for q in IndexPair::all_of_weight(w2, n).iter().filter(|q| q.is_admissible()) {
                        assert_eq!(stuffle_defect(&h, p, q).unwrap(), qi(0), "{p} * {q}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn integral_regularization() {
    let h = solver_h(2, 4, 1);
    assert_eq!(l_i(&h, &ip("1;0@2")).unwrap(), -&TPoly::t());
    for p in ["2;0@2", "1;1@2", "1,2;0,1@2", "2,1;1,1@2"] {
        let p = ip(p);
        assert_eq!(l_i(&h, &p).unwrap(), TPoly::constant(l_coeff(&h, &p).unwrap()));
    }
    for m in 1..=4u32 {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let expect = TPoly::monomial(m as usize, qi(sign) / factorial(m));
        assert_eq!(l_i(&h, &IndexPair::ones(m as usize, 2)).unwrap(), expect);
    }
}

#[test]
fn series_regularization_examples() {
    let h = solver_h(1, 4, 1);
    let l2 = l_coeff(&h, &ip("2;0@1")).unwrap();
    assert_eq!(l_s(&h, &ip("1;0@1")).unwrap(), -&TPoly::t());
    let expect = TPoly::from_coeffs(vec![-l2.clone() / qi(2), qi(0), q(1, 2)]);
    assert_eq!(l_s(&h, &ip("1,1;0,0@1")).unwrap(), expect);
    assert_eq!(l_s(&h, &ip("1,3;0,0@1")).unwrap(), TPoly::constant(l_coeff(&h, &ip("1,3;0,0@1")).unwrap()));
    let bad = Series::<Q>::one(&Alphabet::cyclotomic(1), 2).add(&Series::named(&Alphabet::cyclotomic(1), 2, "B0").unwrap()).unwrap();
    assert!(matches!(l_s(&bad, &ip("1;0@1")), Err(Error::Precondition(_))));
}

#[test]
fn series_regularization_satisfies_all_stuffles() {
    for (n, d) in [(1u32, 4u32), (2, 4)] {
        let h = solver_h(n, d, 7);
        let mut reg = SeriesRegularization::new(&h).unwrap();
        for w1 in 1..d {
            for w2 in 1..=d - w1 {
                for p in IndexPair::all_of_weight(w1, n) {
                    for q in IndexPair::all_of_weight(w2, n) {
                        let mut defect = &reg.value(&p).unwrap() * &reg.value(&q).unwrap();
                        for r in stuffle_indices(&p, &q).unwrap() {
                            defect = &defect - &reg.value(&r).unwrap();
                        }
                        assert!(defect.is_zero(), "N={n}: {p} * {q} leaves {defect}");
                    }
                }
            }
        }
    }
}

#[test]
fn l_map_examples() {
    let h = solver_h(2, 4, 3);
    let l2 = l_coeff(&h, &ip("2;0@2")).unwrap();
    let lmap = LMap::new(&h, 4).unwrap();
    assert_eq!(lmap.apply(&TPoly::constant(qi(1))).unwrap(), TPoly::constant(qi(1)));
    assert_eq!(lmap.apply(&TPoly::t()).unwrap(), TPoly::t());
    let t2 = TPoly::monomial(2, qi(1));
    assert_eq!(lmap.apply(&t2).unwrap(), &t2 - &TPoly::constant(l2));
    assert!(lmap.apply(&TPoly::monomial(5, qi(1))).is_err());
}

#[test]
fn regularization_relation() {
    for (n, d) in [(1u32, 4u32), (2, 4), (3, 3)] {
        let h = solver_h(n, d, 11);
        for w in 1..=d {
            for p in IndexPair::all_of_weight(w, n) {
                let c = regularization_check(&h, &p).unwrap();
                assert!(c.holds(), "N={n} {p}: {} vs {}", c.series, c.integral_mapped);
            }
        }
    }
    let h = solver_h(1, 3, 0);
    let c = regularization_check(&h, &ip("1,1;0,0@1")).unwrap();
    let l2 = l_coeff(&h, &ip("2;0@1")).unwrap();
    assert_eq!(c.series, TPoly::from_coeffs(vec![-l2 / qi(2), qi(0), q(1, 2)]));
}

/// `l^S_p(h)` equals the coefficient of the Y-word of `p` in `e^{-T Y_{1,0}} h_*`.
#[test]
fn series_regularization_matches_h_star() {
    for (n, d) in [(1u32, 5u32), (2, 4)] {
        let h = solver_h(n, d, 13);
        let hs = h_star(&h).unwrap();
        let y: Arc<Alphabet> = hs.alphabet().clone();
        let y10 = y.y_letter(1, 0).unwrap();
        let mut reg = SeriesRegularization::new(&h).unwrap();
        for w in 1..=d {
            for p in IndexPair::all_of_weight(w, n) {
                let yw = p.y_word(&y).unwrap();
                let mut expect = TPoly::zero();
                for j in 0..=yw.len() {
                    if j > 0 && yw.letters()[j - 1] != y10 {
                        break;
                    }
                    let rest = Word::from_slice(&yw.letters()[j..]);
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    expect = &expect + &TPoly::monomial(j, hs.coeff(&rest) * qi(sign) / factorial(j as u32));
                }
                assert_eq!(reg.value(&p).unwrap(), expect, "N={n} {p}");
            }
        }
    }
}

#[test]
fn dmr_normalizations() {
    let p = solve_degreewise(&SolverConfig::new(1, qi(1), 2, &[Equation::Pentagon, Equation::MixedPentagon])).unwrap();
    let checks = check_dmr_normalizations(&p.h, 1, &qi(1)).unwrap();
    assert_eq!(checks.len(), 1);
    assert!(checks[0].holds());
    assert_eq!(checks[0].lhs, q(1, 24));

    let eqs = [Equation::Pentagon, Equation::MixedPentagon, Equation::Octagon];
    let p = solve_degreewise(&SolverConfig::new(2, qi(1), 2, &eqs)).unwrap();
    let checks = check_dmr_normalizations(&p.h, 1, &qi(1)).unwrap();
    assert_eq!(checks.len(), 1);
    assert!(checks[0].holds());

    for n in [3u32, 4, 5] {
        let p = solve_degreewise(&SolverConfig::new(n, qi(1), 2, &eqs)).unwrap();
        let checks = check_dmr_normalizations(&p.h, 1, &qi(1)).unwrap();
        assert_eq!(checks.len(), n as usize / 2 + 1);
        assert!(checks.iter().all(NormalizationCheck::holds), "N={n}: {checks:?}");
        let mu = checks.iter().find(|c| c.name == "mu").unwrap();
        assert_eq!(mu.lhs, -q(n as i64 - 2, 2 * n as i64));
    }
    let wrong = check_dmr_normalizations(&p.h, 1, &qi(2)).unwrap();
    assert!(!wrong.iter().all(NormalizationCheck::holds));
}

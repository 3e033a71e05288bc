use num_complex::Complex64;
use penta_core::barcx::*;
use penta_core::dshuffle::*;
use penta_core::equations::*;
use penta_core::mlvnum::*;
use penta_core::ncseries::{Alphabet, Series, Word};
use penta_core::Error;

const PI: f64 = std::f64::consts::PI;
const ZETA3: f64 = 1.202_056_903_159_594_3;

fn ip(s: &str) -> IndexPair {
    s.parse().unwrap()
}

fn prec() -> Precision {
    Precision::digits(13).unwrap()
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(v: &ApproxValue, want: Complex64, slack: f64) {
    assert!(v.agrees_with(want, slack), "{v} vs {want}");
}

#[test]
fn single_values() {
    close(&mlv(&ip("2;0@1"), prec()).unwrap(), cx(PI * PI / 6.0, 0.0), 1e-12);
    close(&mlv(&ip("1;1@2"), prec()).unwrap(), cx(-(2f64.ln()), 0.0), 1e-12);
    close(&mlv(&ip("1,2;0,0@1"), prec()).unwrap(), cx(ZETA3, 0.0), 1e-12);
    close(&mlv(&ip("2;1@2"), prec()).unwrap(), cx(-PI * PI / 12.0, 0.0), 1e-12);
    close(&mlv(&ip("4;0@1"), prec()).unwrap(), cx(PI.powi(4) / 90.0, 0.0), 1e-12);
    // L(1; i) = −log(1 − i)
    close(&mlv(&ip("1;1@4"), prec()).unwrap(), -(cx(1.0, -1.0)).ln(), 1e-12);
    let v = mlv(&ip("2;0@1"), prec()).unwrap();
    assert!(v.error < 1e-12 && v.error > 0.0);
}

#[test]
fn mlv_rejects_divergent_and_bad_precision() {
    assert!(matches!(mlv(&ip("2,1;0,0@1"), prec()), Err(Error::Invalid(_))));
    assert!(Precision::digits(0).is_err());
    assert!(Precision::digits(40).is_err());
}

#[test]
fn double_shuffle_relations_of_zeta_values() {
    let z = |s: &str| mlv(&ip(s), prec()).unwrap().re();
    let z2sq = z("2;0@1").powi(2);
    let a = 2.0 * z("2,2;0,0@1") + z("4;0@1");
    let b = 4.0 * z("1,3;0,0@1") + 2.0 * z("2,2;0,0@1");
    assert!((z2sq - a).abs() < 1e-10, "{z2sq} vs {a}");
    assert!((z2sq - b).abs() < 1e-10, "{z2sq} vs {b}");
    assert!((z("2,2;0,0@1") - PI.powi(4) / 120.0).abs() < 1e-11);
}

#[test]
fn mlv_matches_direct_summation_for_fast_series() {
    // weight >= 3 in the outer slot converges fast enough to sum directly
    for s in ["1,3;1,0@2", "2,3;1,1@2", "1,1,3;1,1,1@2", "1,3;1,2@3"] {
        let p = ip(s);
        let want = brute(&p, 200_000);
        close(&mlv(&p, prec()).unwrap(), want, 1e-8);
    }
}

fn brute(p: &IndexPair, cutoff: usize) -> Complex64 {
    let z: Vec<Complex64> = p.e.iter().map(|&e| root_of_unity(p.level, e as i64)).collect();
    let k = p.depth();
    let mut sums = vec![Complex64::new(0.0, 0.0); k + 1];
    sums[0] = Complex64::new(1.0, 0.0);
    for n in 1..=cutoff {
        for j in (1..=k).rev() {
            let t = sums[j - 1] * z[j - 1].powu(n as u32) / (n as f64).powi(p.a[j - 1] as i32);
            sums[j] += t;
        }
    }
    sums[k]
}

#[test]
fn two_variable_values() {
    let (p, q) = (ip("1;0@1"), ip("1;0@1"));
    close(&mpl_two_var(&p, &q, cx(0.0, 0.0), cx(0.7, 0.0), prec()).unwrap(), cx(0.0, 0.0), 0.0);
    let mut want = 0.0;
    for n in 1..400 {
        for m in 1..n {
            want += 0.5f64.powi(m) * 0.3f64.powi(n) / (m * n) as f64;
        }
    }
    close(&mpl_two_var(&p, &q, cx(0.5, 0.0), cx(0.3, 0.0), prec()).unwrap(), cx(want, 0.0), 1e-12);
    assert!(mpl_two_var(&p, &q, cx(1.0, 0.0), cx(0.3, 0.0), prec()).is_err());
}

#[test]
fn stuffle_identity_for_two_variable_polylogs() {
    // Li_a(ζx) Li_b(ηy) = Li_{a,b} + Li_{b,a} + Li_{a+b}(ζη xy)
    let (x, y) = (cx(0.4, 0.1), cx(-0.3, 0.2));
    for (a, b) in [("1;0@2", "1;1@2"), ("2;1@2", "1;1@2"), ("2;1@3", "3;2@3")] {
        let (p, q) = (ip(a), ip(b));
        let lhs = mpl_one_var(&p, x, prec()).unwrap() * mpl_one_var(&q, y, prec()).unwrap();
        let merged = IndexPair::new(vec![p.a[0] + q.a[0]], vec![(p.e[0] + q.e[0]) as i64], p.level).unwrap();
        let rhs = mpl_two_var(&p, &q, x, y, prec()).unwrap()
            + mpl_two_var(&q, &p, y, x, prec()).unwrap()
            + mpl_one_var(&merged, x * y, prec()).unwrap();
        assert!((lhs.value - rhs.value).norm() < 1e-10, "{a} {b}: {lhs} vs {rhs}");
    }
}

#[test]
fn differential_equations_hold_numerically() {
    let points = [(cx(0.3, 0.0), cx(0.4, 0.0)), (cx(0.2, 0.1), cx(-0.3, 0.15))];
    let cases = [
        ("2;0@1", "1;0@1"),
        ("1;0@1", "1;0@1"),
        ("1;1@2", "2;1@2"),
        ("1,1;1,1@2", "1;1@2"),
        ("1;1@3", "1,1;2,1@3"),
        ("2,1;1,2@3", "1,2;1,1@3"),
        ("1,1;1,0@2", "1,1;1,1@2"),
    ];
    let mut labels = std::collections::BTreeSet::new();
    for (x, y) in points {
        for (a, b) in cases {
            let r = ode_check(&ip(a), &ip(b), x, y, 1e-4, prec()).unwrap();
            for row in &r.rows {
                assert!(row.pass, "{a} | {b} at {x}, {y}: {} {} vs {}", row.label, row.numeric, row.formula);
                labels.insert(row.label.clone());
            }
        }
        for a in ["1;0@1", "3;0@1", "1,1;1,1@2", "2,1;1,1@3"] {
            let r = ode_check(&ip(a), &IndexPair::empty(ip(a).level), x, y, 1e-4, prec()).unwrap();
            assert!(r.holds(), "{a}: {:?}", r.rows);
            labels.insert(r.rows[0].label.clone());
        }
    }
    // every row of both case tables is exercised
    assert_eq!(labels.len(), 5 + 3 + 3, "{labels:?}");
}

#[test]
fn weight_one_derivative() {
    // d/dz Li_1(z) = 1/(1 − z)
    let r = ode_check(&ip("1;0@1"), &IndexPair::empty(1), cx(0.5, 0.0), cx(0.0, 0.0), 1e-4, prec()).unwrap();
    assert!((r.rows[0].formula.value - cx(2.0, 0.0)).norm() < 1e-14);
    assert!(r.holds());
}

#[test]
fn associator_low_weight_coefficients() {
    let phi = phi_kz(1, 3, prec()).unwrap();
    assert!(phi.error < 1e-10, "{}", phi.error);
    close(&phi.coeff(&Word::empty()), cx(1.0, 0.0), 1e-12);
    close(&phi.coeff_of(&["A"]).unwrap(), cx(0.0, 0.0), 1e-12);
    close(&phi.coeff_of(&["B0"]).unwrap(), cx(0.0, 0.0), 1e-12);
    close(&phi.coeff_of(&["A", "B0"]).unwrap(), cx(-PI * PI / 6.0, 0.0), 1e-10);
    close(&phi.coeff_of(&["B0", "A"]).unwrap(), cx(PI * PI / 6.0, 0.0), 1e-10);
    let phi2 = phi_kz(2, 3, prec()).unwrap();
    close(&phi2.coeff_of(&["B1"]).unwrap(), cx(2f64.ln(), 0.0), 1e-10);
}

#[test]
fn associator_does_not_depend_on_the_split_point() {
    for n in 1..=3 {
        let a = phi_kz_with(n, 4, PathSpec { split: 0.5, terms: 140 }).unwrap();
        let b = phi_kz_with(n, 4, PathSpec { split: 0.42, terms: 140 }).unwrap();
        assert!(a.max_diff(&b.series).unwrap() < 1e-11, "N = {n}");
    }
    assert!(phi_kz_with(2, 3, PathSpec { split: 1.2, terms: 40 }).is_err());
}

#[test]
fn holonomy_matches_explicit_formula() {
    for (n, w) in [(1, 5), (2, 4), (3, 4), (4, 3)] {
        let a = phi_kz(n, w, prec()).unwrap();
        let b = phi_kz_from_mlv(n, w, prec()).unwrap();
        let d = a.max_diff(&b.series).unwrap();
        assert!(d < 1e-10, "N = {n}: {d}");
    }
}

#[test]
fn associator_is_grouplike() {
    let phi = phi_kz(2, 4, prec()).unwrap().series;
    let log = phi.log().unwrap();
    // a Lie series has vanishing shuffle products against nonempty pairs
    let al = phi.alphabet().clone();
    let words: Vec<Word> = phi.terms().keys().filter(|w| !w.is_empty() && w.len() <= 2).cloned().collect();
    for u in &words {
        for v in &words {
            if u.len() + v.len() > 4 {
                continue;
            }
            let s: Complex64 = penta_core::ncseries::shuffles(u.letters(), v.letters())
                .iter()
                .map(|w| log.coeff(w))
                .sum();
            assert!(s.norm() < 1e-10, "{} ш {}", u.display(&al), v.display(&al));
        }
    }
}

#[test]
fn pairing_with_associator_gives_multiple_l_values() {
    for n in 1..=3u32 {
        let phi = phi_kz(n, 3, prec()).unwrap();
        for w in 1..=3 {
            for p in IndexPair::all_of_weight(w, n).into_iter().filter(|p| p.is_admissible()) {
                let v = pair(&build_l_onevar(&p).unwrap(), &phi.series).unwrap();
                close(&mlv(&p, prec()).unwrap(), v, 1e-10);
            }
        }
    }
}

#[test]
fn bar_elements_integrate_to_polylogarithms() {
    let (x, y) = (cx(0.3, 0.0), cx(0.4, 0.0));
    // the worked example
    let l = build_l_twovar(&ip("1;0@1"), &ip("1;0@1")).unwrap();
    let want = mpl_two_var(&ip("1;0@1"), &ip("1;0@1"), x, y, prec()).unwrap();
    close(&bar_value(&l, x, y, prec()).unwrap(), want.value, 1e-11);
    let (x, y) = (cx(0.35, 0.1), cx(-0.25, 0.3));
    for n in 1..=3u32 {
        for w in 2..=3 {
            for wp in 1..w {
                for p in IndexPair::all_of_weight(wp, n) {
                    for q in IndexPair::all_of_weight(w - wp, n) {
                        let b = bar_value(&build_l_twovar(&p, &q).unwrap(), x, y, prec()).unwrap();
                        close(&b, mpl_two_var(&p, &q, x, y, prec()).unwrap().value, 1e-10);
                        let b = bar_value(&build_l_twovar_yx(&q, &p).unwrap(), x, y, prec()).unwrap();
                        close(&b, mpl_two_var(&q, &p, y, x, prec()).unwrap().value, 1e-10);
                    }
                }
            }
        }
        for p in IndexPair::all_of_weight(3, n) {
            for (v, at) in [(MplVar::X, x), (MplVar::Y, y), (MplVar::XY, x * y)] {
                let b = bar_value(&build_l_in(&p, v).unwrap(), x, y, prec()).unwrap();
                close(&b, mpl_one_var(&p, at, prec()).unwrap().value, 1e-10);
            }
            let b = bar_value(&build_l_onevar(&p).unwrap(), x, y, prec()).unwrap();
            close(&b, mpl_one_var(&p, x, prec()).unwrap().value, 1e-10);
        }
    }
}

fn f2(phi: &Series<Complex64>) -> Series<Complex64> {
    phi.relabel(&Alphabet::f2()).unwrap()
}

#[test]
fn associator_satisfies_the_defining_equations() {
    let g = f2(&phi_kz(1, 3, prec()).unwrap().series);
    assert!(residual_pentagon(&g).unwrap().max_abs() < 1e-9);
    let two_pi_i = cx(0.0, 2.0 * PI);
    let hex = residual_hexagons(&g, &two_pi_i).unwrap();
    assert!(hex.iter().all(|r| r.max_abs() < 1e-9), "{:?}", hex.iter().map(|r| r.max_abs()).collect::<Vec<_>>());
    for n in 1..=2u32 {
        let h = phi_kz(n, 3, prec()).unwrap().series;
        assert!(residual_mixed_pentagon(&g, &h).unwrap().max_abs() < 1e-9, "N = {n}");
        let oct = residual_octagon(&h, &two_pi_i, -1).unwrap().max_abs();
        assert!(oct < 1e-9, "N = {n}: octagon {oct}");
    }
    let h = phi_kz(2, 4, prec()).unwrap().series;
    assert!(residual_double_shuffle(&h).unwrap().per_weight_max().iter().all(|x| *x < 1e-9));
    assert!(residual_distribution(&h, 1).unwrap().max_abs() < 1e-9);
}

use std::collections::BTreeSet;
use std::path::Path;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use penta_core::barcx::{
    algebra_map, build_l_in, build_l_onevar, build_l_twovar, build_l_twovar_yx, certify,
    series_shuffle_bar_check, verify_lemma_up_to, BarTensor, Lemma, MplVar, ALL_TAGS,
};
use penta_core::dshuffle::{check_dmr_normalizations, regularization_check, residual_double_shuffle, IndexPair};
use penta_core::equations::{
    residual_distribution, residual_hexagons, residual_mixed_pentagon, residual_octagon,
    residual_pentagon, residual_special_action, solve_degreewise, AssociatorPair, Equation,
    FreeParameterPolicy, Residual, SolverConfig,
};
use penta_core::mlvnum::{mlv, phi_kz, phi_kz_from_mlv, phi_kz_with, PathSpec, Precision};
use penta_core::ncseries::{shuffles, Alphabet, Series, Word};
use penta_core::presented::Presentation;
use penta_core::scalar::{format_q, parse_q};
use penta_core::Q;
use serde::Serialize;
use serde_json::{json, Value};

use crate::docs::{load_pair, roundtrip, Document};
use crate::report::{invalid, Failure, Outcome, Report};
use crate::{
    BarcheckArgs, CheckArgs, CheckKind, Command, EqArg, LemmasArgs, MlvArgs, PhikzArgs, SolveArgs,
    Theorem1Args, Theorem2Args,
};

pub fn run(c: &Command) -> Outcome<Report> {
    match c {
        Command::Solve(a) => solve(a),
        Command::VerifyTheorem1(a) => theorem1(a),
        Command::VerifyTheorem2(a) => theorem2(a),
        Command::Check(a) => check(a),
        Command::Lemmas(a) => lemmas(a),
        Command::Barcheck(a) => barcheck(a),
        Command::Mlv(a) => mlv_cmd(a),
        Command::Phikz(a) => phikz(a),
    }
}

fn options(a: &impl Serialize) -> Value {
    serde_json::to_value(a).expect("serializable")
}

fn equation(e: EqArg) -> Equation {
    match e {
        EqArg::Pentagon => Equation::Pentagon,
        EqArg::Hexagons => Equation::Hexagons,
        EqArg::MixedPentagon => Equation::MixedPentagon,
        EqArg::Octagon => Equation::Octagon,
        EqArg::SpecialAction => Equation::SpecialAction,
        EqArg::Distribution => Equation::Distribution,
    }
}

fn rational(s: &str, what: &str) -> Outcome<Q> {
    parse_q(s).map_err(|e| Failure::Validation(format!("--{what}: {e}")))
}

fn positive(x: u32, what: &str) -> Outcome<()> {
    if x == 0 {
        return invalid(format!("--{what} must be at least 1"));
    }
    Ok(())
}

fn unit_mod(a: i64, n: u32) -> Outcome<()> {
    if a.gcd(&(n as i64)) != 1 {
        return invalid(format!("--a {a} is not a unit modulo N = {n}"));
    }
    Ok(())
}

fn proper_divisors(n: u32) -> Vec<u32> {
    (1..n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Presentations whose echelon bases the equations use, as cache keys.
fn cache_keys(level: u32) -> Outcome<Vec<(String, String)>> {
    let mut keys = vec![(
        "t0_4 (plain)".to_string(),
        Presentation::build_t0_plain(4)?.hash().to_string(),
    )];
    keys.push((format!("t0_4 (N={level})"), Presentation::build_t0(4, level)?.hash().to_string()));
    Ok(keys)
}

fn solver(level: u32, d: u32, mu: Q, a: i64, eqs: &[Equation], seed: Option<u64>) -> Outcome<AssociatorPair> {
    positive(level, "N")?;
    positive(d, "D")?;
    let mut cfg = SolverConfig::new(level, mu, d, eqs);
    cfg.a = a;
    if let Some(s) = seed {
        cfg.policy = FreeParameterPolicy::Seeded(s);
    }
    log::info!(
        "solving N={level} D={d} for {}",
        cfg.imposed.iter().map(|e| e.name()).collect::<Vec<_>>().join(", ")
    );
    Ok(solve_degreewise(&cfg)?)
}

fn per_degree(v: &[f64]) -> Value {
    json!(v)
}

/// Exact residuals of one equation on a pair.
fn residuals(p: &AssociatorPair, e: Equation, targets: &[u32]) -> Outcome<Vec<Residual>> {
    Ok(match e {
        Equation::Pentagon => vec![residual_pentagon(&p.g)?],
        Equation::Hexagons => residual_hexagons(&p.g, &p.mu)?,
        Equation::MixedPentagon => vec![residual_mixed_pentagon(&p.g, &p.h)?],
        Equation::Octagon => vec![residual_octagon(&p.h, &p.mu, p.a)?],
        Equation::SpecialAction => vec![residual_special_action(&p.h)?],
        Equation::Distribution => {
            let ts = if targets.is_empty() { proper_divisors(p.level) } else { targets.to_vec() };
            for &t in &ts {
                if t == 0 || !p.level.is_multiple_of(t) || t == p.level {
                    return invalid(format!("--target {t} is not a proper divisor of N = {}", p.level));
                }
            }
            ts.into_iter()
                .map(|t| residual_distribution(&p.h, t))
                .collect::<penta_core::Result<Vec<_>>>()?
        }
    })
}

fn exact_checks(r: &mut Report, p: &AssociatorPair, e: Equation, targets: &[u32]) -> Outcome<()> {
    let rs = residuals(p, e, targets)?;
    if rs.is_empty() {
        r.check(e.name(), true, "no proper divisors: nothing to check", json!({}));
    }
    for res in rs {
        let name = if res.label.is_empty() || res.label == e.name() { e.name().to_string() } else { format!("{} {}", e.name(), res.label) };
        let zero = res.is_zero();
        let summary = if zero {
            "residual is zero".to_string()
        } else {
            format!("{} nonzero terms, largest {:.3e}", res.series.len(), res.max_abs())
        };
        r.check(name, zero, summary, json!({ "exact": true, "per_degree_max": per_degree(&res.per_degree_max()) }));
    }
    Ok(())
}

fn grouplike_checks(r: &mut Report, p: &AssociatorPair) {
    for (name, s) in [("g", &p.g), ("h", &p.h)] {
        let ok = s.is_grouplike();
        r.check(format!("{name} is group-like"), ok, if ok { "yes" } else { "no" }, json!({}));
    }
}

fn pair_summary(p: &AssociatorPair) -> Value {
    let al = p.h.alphabet();
    let c = |w: &[u16]| format_q(&p.h.coeff(&Word::from_slice(w)));
    json!({
        "N": p.level,
        "D": p.maxdeg,
        "a": p.a,
        "mu": format_q(&p.mu),
        "imposed": p.imposed.iter().map(|e| e.name()).collect::<Vec<_>>(),
        "c_A(h)": c(&[0]),
        "c_B(0)(h)": c(&[al.b(0)]),
        "c_AB(0)(h)": c(&[0, al.b(0)]),
    })
}

fn double_shuffle_checks(r: &mut Report, h: &Series) -> Outcome<()> {
    let ds = residual_double_shuffle(h)?;
    let per = ds.per_weight_max();
    for (w, m) in per.iter().enumerate().skip(1) {
        let zero = *m == 0.0;
        r.check(
            format!("double shuffle weight {w}"),
            zero,
            if zero { "residual is zero".into() } else { format!("largest coefficient {m:.3e}") },
            json!({ "exact": true, "max": m }),
        );
    }
    r.result("double_shuffle_per_weight_max", json!(per));
    Ok(())
}

fn solve(a: &SolveArgs) -> Outcome<Report> {
    let mu = rational(&a.mu, "mu")?;
    let eqs: Vec<Equation> = a.eq.iter().map(|e| equation(*e)).collect();
    if eqs.contains(&Equation::Octagon) {
        unit_mod(a.a, a.n)?;
    }
    let mut r = Report::new("solve", options(a));
    r.cache_keys(cache_keys(a.n)?);
    let pair = solver(a.n, a.d, mu, a.a, &eqs, a.seed)?;
    grouplike_checks(&mut r, &pair);
    for e in pair.imposed.clone() {
        exact_checks(&mut r, &pair, e, &[])?;
    }
    r.result("pair", pair_summary(&pair));
    let doc = Document::Pair(pair);
    match &a.output {
        Some(path) => {
            doc.save(path)?;
            r.lines.push(format!("wrote {}", path.display()));
        }
        None => r.result("document", serde_json::from_str(&doc.render()).expect("valid json")),
    }
    Ok(r)
}

/// Loads or solves the pair; `eqs` are imposed when solving.
fn obtain(
    input: &Option<std::path::PathBuf>,
    n: Option<u32>,
    d: Option<u32>,
    mu: &Option<String>,
    a: Option<i64>,
    seed: Option<u64>,
    eqs: &[Equation],
) -> Outcome<(AssociatorPair, bool)> {
    match input {
        Some(path) => Ok((load_pair(path)?, true)),
        None => {
            let (n, d) = (n.expect("required by clap"), d.expect("required by clap"));
            let mu = rational(mu.as_deref().unwrap_or("1"), "mu")?;
            let a = a.unwrap_or(1);
            if eqs.contains(&Equation::Octagon) {
                positive(n, "N")?;
                unit_mod(a, n)?;
            }
            Ok((solver(n, d, mu, a, eqs, seed)?, false))
        }
    }
}

/// Records hypothesis checks; failed hypotheses on user input are a
/// validation error, on solver output an internal one.
fn hypotheses(r: &mut Report, from_file: bool) -> Outcome<()> {
    let failed: Vec<String> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let msg = format!("hypotheses not satisfied: {}", failed.join(", "));
    Err(if from_file { Failure::Validation(msg) } else { Failure::Internal(msg) })
}

fn theorem1(a: &Theorem1Args) -> Outcome<Report> {
    let eqs = [Equation::Pentagon, Equation::MixedPentagon];
    let (pair, from_file) = obtain(&a.input, a.n, a.d, &a.mu, None, a.seed, &eqs)?;
    let mut r = Report::new("verify-theorem1", options(a));
    r.cache_keys(cache_keys(pair.level)?);
    grouplike_checks(&mut r, &pair);
    let b0 = pair.h.coeff(&Word::single(pair.h.alphabet().b(0)));
    r.check("c_B(0)(h) = 0", b0.is_zero(), format!("c_B(0)(h) = {b0}"), json!({ "value": format_q(&b0) }));
    exact_checks(&mut r, &pair, Equation::MixedPentagon, &[])?;
    hypotheses(&mut r, from_file)?;
    double_shuffle_checks(&mut r, &pair.h)?;
    r.result("pair", pair_summary(&pair));
    Ok(r)
}

fn theorem2(a: &Theorem2Args) -> Outcome<Report> {
    let eqs = [Equation::Pentagon, Equation::MixedPentagon, Equation::Octagon];
    if let Some(d) = a.d {
        if d < 2 {
            return invalid("--D must be at least 2 for the normalization conditions");
        }
    }
    let (pair, from_file) = obtain(&a.input, a.n, a.d, &a.mu, a.a, a.seed, &eqs)?;
    unit_mod(pair.a, pair.level)?;
    let mut r = Report::new("verify-theorem2", options(a));
    r.cache_keys(cache_keys(pair.level)?);
    grouplike_checks(&mut r, &pair);
    for e in [Equation::Pentagon, Equation::Hexagons, Equation::MixedPentagon, Equation::Octagon] {
        exact_checks(&mut r, &pair, e, &[])?;
    }
    hypotheses(&mut r, from_file)?;
    double_shuffle_checks(&mut r, &pair.h)?;
    normalization_checks(&mut r, &pair)?;
    r.result("pair", pair_summary(&pair));
    Ok(r)
}

fn normalization_checks(r: &mut Report, p: &AssociatorPair) -> Outcome<()> {
    for c in check_dmr_normalizations(&p.h, p.a, &p.mu)? {
        r.check(
            format!("normalization {}", c.name),
            c.holds(),
            format!("{} vs {}", c.lhs, c.rhs),
            json!({ "lhs": format_q(&c.lhs), "rhs": format_q(&c.rhs) }),
        );
    }
    Ok(())
}

fn check(a: &CheckArgs) -> Outcome<Report> {
    let mut r = Report::new("check", options(a));
    if a.roundtrip {
        let rt = roundtrip(&a.input)?;
        r.check(
            format!("{} round trip", rt.kind),
            rt.stable,
            format!("stable {}, file already canonical {}", rt.stable, rt.canonical),
            json!({ "kind": rt.kind, "stable": rt.stable, "canonical": rt.canonical }),
        );
    }
    if a.eq.is_empty() && a.roundtrip {
        return Ok(r);
    }
    match Document::load(&a.input)? {
        Document::Pair(p) => check_pair(&mut r, &p, a)?,
        Document::Bar(b) => {
            if a.eq.iter().any(|k| *k != CheckKind::Cocycle) {
                return invalid("bar tensor documents support only --eq cocycle");
            }
            bar_certificate(&mut r, "input", &b)?;
        }
        Document::Series(_) => return invalid("checks need an associator pair or a bar tensor; use --roundtrip for series"),
    }
    Ok(r)
}

fn check_pair(r: &mut Report, p: &AssociatorPair, a: &CheckArgs) -> Outcome<()> {
    let kinds: Vec<CheckKind> = if a.eq.is_empty() {
        if p.imposed.is_empty() {
            return invalid("the pair records no imposed equations: pass --eq");
        }
        p.imposed
            .iter()
            .map(|e| match e {
                Equation::Pentagon => CheckKind::Pentagon,
                Equation::Hexagons => CheckKind::Hexagons,
                Equation::MixedPentagon => CheckKind::MixedPentagon,
                Equation::Octagon => CheckKind::Octagon,
                Equation::SpecialAction => CheckKind::SpecialAction,
                Equation::Distribution => CheckKind::Distribution,
            })
            .collect()
    } else {
        a.eq.clone()
    };
    r.cache_keys(cache_keys(p.level)?);
    for k in kinds {
        let e = match k {
            CheckKind::Pentagon => Some(Equation::Pentagon),
            CheckKind::Hexagons => Some(Equation::Hexagons),
            CheckKind::MixedPentagon => Some(Equation::MixedPentagon),
            CheckKind::Octagon => Some(Equation::Octagon),
            CheckKind::SpecialAction => Some(Equation::SpecialAction),
            CheckKind::Distribution => Some(Equation::Distribution),
            _ => None,
        };
        if let Some(e) = e {
            if e == Equation::Octagon {
                unit_mod(p.a, p.level)?;
            }
            exact_checks(r, p, e, &a.target)?;
            continue;
        }
        match k {
            CheckKind::DoubleShuffle => double_shuffle_checks(r, &p.h)?,
            CheckKind::Normalization => normalization_checks(r, p)?,
            CheckKind::Regularization => {
                let bound = a.weight.unwrap_or(p.maxdeg);
                if bound > p.maxdeg {
                    return invalid(format!("--weight {bound} exceeds the truncation {}", p.maxdeg));
                }
                let mut failures = Vec::new();
                let mut count = 0;
                for w in 1..=bound {
                    for idx in IndexPair::all_of_weight(w, p.level) {
                        count += 1;
                        if !regularization_check(&p.h, &idx)?.holds() {
                            failures.push(idx.to_string());
                        }
                    }
                }
                r.check(
                    "regularization",
                    failures.is_empty(),
                    format!("{count} indices, {} failures", failures.len()),
                    json!({ "indices": count, "failures": failures }),
                );
            }
            CheckKind::Cocycle => return invalid("--eq cocycle applies to bar tensor documents"),
            _ => unreachable!("equations handled above"),
        }
    }
    Ok(())
}

fn bar_certificate(r: &mut Report, name: &str, b: &BarTensor) -> Outcome<()> {
    let c = certify(b)?;
    r.check(
        format!("{name} certified"),
        c.holds(),
        format!("cocycle {}, annihilates the relation ideal {}", c.cocycle, c.annihilates_ideal),
        json!({ "cocycle": c.cocycle, "annihilates_ideal": c.annihilates_ideal }),
    );
    Ok(())
}

fn lemmas(a: &LemmasArgs) -> Outcome<Report> {
    positive(a.weight, "weight")?;
    let numbers: BTreeSet<u32> = a.lemma.iter().copied().collect();
    let lemmas = numbers
        .into_iter()
        .map(Lemma::from_number)
        .collect::<penta_core::Result<Vec<_>>>()?;
    let pair = match &a.input {
        Some(path) => load_pair(path)?,
        None => solver(
            a.n.expect("required by clap"),
            a.weight,
            Q::one(),
            1,
            &[Equation::Pentagon, Equation::MixedPentagon],
            Some(a.seed),
        )?,
    };
    let mut r = Report::new("lemmas", options(a));
    r.cache_keys(cache_keys(pair.level)?);
    for l in lemmas {
        log::info!("checking {l}");
        let rep = verify_lemma_up_to(l, Some(&pair.g), &pair.h, a.weight)?;
        let failures: Vec<String> = rep.failures().map(|i| i.label.clone()).collect();
        r.check(
            l.to_string(),
            rep.holds(),
            format!("{} identities, {} failures", rep.identities.len(), failures.len()),
            json!({ "identities": rep.identities.len(), "failures": failures }),
        );
    }
    Ok(r)
}

fn barcheck(a: &BarcheckArgs) -> Outcome<Report> {
    positive(a.n, "N")?;
    positive(a.weight, "weight")?;
    let (n, w) = (a.n, a.weight);
    let mut r = Report::new("barcheck", options(a));
    let mut elements = Vec::new();
    for wt in 1..=w {
        for p in IndexPair::all_of_weight(wt, n) {
            elements.push((format!("l_{p}"), build_l_onevar(&p)?));
            for (v, tag) in [(MplVar::X, "x"), (MplVar::Y, "y"), (MplVar::XY, "xy")] {
                elements.push((format!("l^({tag})_{p}"), build_l_in(&p, v)?));
            }
        }
        for wp in 1..wt {
            for p in IndexPair::all_of_weight(wp, n) {
                for q in IndexPair::all_of_weight(wt - wp, n) {
                    elements.push((format!("l^(x,y)_{p}|{q}"), build_l_twovar(&p, &q)?));
                    elements.push((format!("l^(y,x)_{q}|{p}"), build_l_twovar_yx(&q, &p)?));
                }
            }
        }
    }
    let mut failures = Vec::new();
    for (name, b) in &elements {
        if !certify(b)?.holds() {
            failures.push(name.clone());
        }
    }
    r.check(
        "bar elements certified",
        failures.is_empty(),
        format!("{} elements, {} failures", elements.len(), failures.len()),
        json!({ "elements": elements.len(), "failures": failures }),
    );
    let mut count = 0;
    let mut failures = Vec::new();
    for wp in 1..w {
        for wq in 1..=w - wp {
            for p in IndexPair::all_of_weight(wp, n) {
                for q in IndexPair::all_of_weight(wq, n) {
                    count += 1;
                    if !series_shuffle_bar_check(&p, &q)?.holds() {
                        failures.push(format!("{p} * {q}"));
                    }
                }
            }
        }
    }
    r.check(
        "series shuffle",
        failures.is_empty(),
        format!("{count} pairs, {} failures", failures.len()),
        json!({ "pairs": count, "failures": failures }),
    );
    for tag in ALL_TAGS {
        let ok = algebra_map(tag, n)?.check()?;
        r.check(format!("algebra map {tag}"), ok, if ok { "well defined" } else { "not well defined" }, json!({}));
    }
    if let Some(path) = &a.input {
        match Document::load(path)? {
            Document::Bar(b) => bar_certificate(&mut r, "input", &b)?,
            other => return invalid(format!("{} holds a {}, expected a bar tensor", path.display(), other.kind())),
        }
    }
    Ok(r)
}

fn precision(digits: u32) -> Outcome<Precision> {
    Ok(Precision::digits(digits)?)
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn mlv_cmd(a: &MlvArgs) -> Outcome<Report> {
    let p: IndexPair = a
        .index
        .parse()
        .map_err(|e: penta_core::Error| Failure::Validation(format!("--index: {e}")))?;
    let prec = precision(a.digits)?;
    let v = mlv(&p, prec)?;
    let d = a.digits as usize;
    let text = if v.value.im == 0.0 {
        format!("{:.d$}", v.value.re)
    } else {
        format!("{:.d$} {} {:.d$}i", v.value.re, if v.value.im < 0.0 { "-" } else { "+" }, v.value.im.abs())
    };
    let mut r = Report::new("mlv", options(a));
    r.lines.push(format!("L({p}) = {text} ± {:.1e}", v.error));
    r.check(
        "error bound",
        v.error <= prec.tolerance(),
        format!("{:.1e} within {:.0e}", v.error, prec.tolerance()),
        json!({ "error": v.error, "tolerance": prec.tolerance() }),
    );
    r.result("index", json!(p.to_string()));
    r.result("value", complex_json(v.value));
    r.result("error", json!(v.error));
    Ok(r)
}

/// Largest violation of `c_u c_v = Σ_{w ∈ u ш v} c_w` over nonempty words
/// of total length at most the truncation.
fn grouplike_defect(s: &Series<Complex64>) -> f64 {
    let d = s.maxdeg() as usize;
    let k = s.alphabet().len() as u16;
    let mut words: Vec<Vec<u16>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 1..d {
        words = words
            .iter()
            .flat_map(|w| (0..k).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
        all.extend(words.iter().cloned());
    }
    let mut worst = 0.0f64;
    for u in &all {
        for v in &all {
            if u.len() + v.len() > d || u > v {
                continue;
            }
            let lhs = s.coeff(&Word::from_slice(u)) * s.coeff(&Word::from_slice(v));
            let rhs: Complex64 = shuffles(u, v).iter().map(|w| s.coeff(w)).sum();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

fn phikz(a: &PhikzArgs) -> Outcome<Report> {
    positive(a.n, "N")?;
    positive(a.weight, "weight")?;
    if !(a.tolerance > 0.0) {
        return invalid("--tolerance must be positive");
    }
    let prec = precision(a.digits)?;
    let n = a.n;
    let phi = match a.split {
        Some(s) => {
            let mut path = PathSpec::for_level(n, prec);
            path.split = s;
            phi_kz_with(n, a.weight, path)?
        }
        None => phi_kz(n, a.weight, prec)?,
    };
    let h = &phi.series;
    let al = h.alphabet().clone();
    let tol = a.tolerance;
    let mut r = Report::new("phikz", options(a));
    let one = Complex64::one();
    r.tolerance_check("constant term 1", (h.constant() - one).norm(), tol);
    let low = h.coeff(&Word::single(0)).norm().max(h.coeff(&Word::single(al.b(0))).norm());
    r.tolerance_check("c_A = c_B(0) = 0", low, tol);
    r.tolerance_check("group-like", grouplike_defect(h), tol);
    let explicit = phi_kz_from_mlv(n, a.weight, prec)?;
    r.tolerance_check("agrees with the multiple L-value formula", phi.max_diff(&explicit.series)?, tol);
    let g = if n == 1 { phi.series.clone() } else { phi_kz(1, a.weight, prec)?.series };
    let g = g.relabel(&Alphabet::f2())?;
    if n == 1 {
        r.tolerance_check("pentagon", residual_pentagon(&g)?.max_abs(), tol);
    }
    r.tolerance_check("mixed pentagon", residual_mixed_pentagon(&g, h)?.max_abs(), tol);
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    r.tolerance_check("octagon (a = -1, mu = 2 pi i)", residual_octagon(h, &two_pi_i, -1)?.max_abs(), tol);
    r.tolerance_check("double shuffle", residual_double_shuffle(h)?.max_abs(), tol);
    for t in proper_divisors(n) {
        r.tolerance_check(format!("distribution N'={t}"), residual_distribution(h, t)?.max_abs(), tol);
    }
    let coeffs = |s: &Series<Complex64>, maxlen: usize| -> Vec<Value> {
        s.terms()
            .iter()
            .filter(|(w, c)| w.len() <= maxlen && c.norm() > 0.0)
            .map(|(w, c)| json!({ "word": w.names(&al), "value": complex_json(*c) }))
            .collect()
    };
    r.result("error_bound", json!(phi.error));
    r.result("low_weight", json!(coeffs(h, 2)));
    for w in h.terms().keys().filter(|w| w.len() == 2) {
        let c = h.coeff(w);
        if c.norm() > 1e-14 {
            r.lines.push(format!("c[{}] = {:.12} {:+.12}i", w.display(&al), c.re, c.im));
        }
    }
    if let Some(path) = &a.output {
        let doc = json!({
            "schema": crate::report::SCHEMA,
            "kind": "numeric_series",
            "alphabet": al.as_ref(),
            "maxdeg": h.maxdeg(),
            "error": phi.error,
            "terms": coeffs(h, usize::MAX),
        });
        write_json(path, &doc)?;
        r.lines.push(format!("wrote {}", path.display()));
    }
    Ok(r)
}

fn write_json(path: &Path, v: &Value) -> Outcome<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))
}

//! Acceptance criteria, one line of output each. Run with
//! `cargo test -p grassmap --test acceptance`.

use std::time::{Duration, Instant};

use grassmap::closedform::{closed_form, expression5_bruteforce, expression6, expression7, poincare_degree3};
use grassmap::fixedgraphs::{census_formula, enumerate_fixed_graphs, Shape};
use grassmap::localization::{poincare_localization, stratum_family_contribution, tangent_weights, StratumFamily};
use grassmap::qpoly::identities::verify_appendix_identities;
use grassmap::qpoly::{partition_sum, qbinomial, QPolynomial};
use grassmap::verify::{embedding_cross_check, flag_variety_bruteforce, structural_problems};
use grassmap::weights::Sign;
use grassmap::DecoratedTree;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: grassmap::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn betti_tables() -> Outcome {
    let rows: [(usize, usize, &[i64]); 3] = [
        (1, 3, &[1, 2, 5, 7, 9, 7, 5, 2, 1]),
        (1, 4, &[1, 2, 6, 10, 17, 20, 24, 20, 17, 10, 6, 2, 1]),
        (2, 4, &[1, 3, 10, 22, 41, 60, 73, 73, 60, 41, 22, 10, 3, 1]),
    ];
    let mut slowest = Duration::ZERO;
    for (k, n, row) in rows {
        let want = QPolynomial::from_coeffs(row);
        for route in ["closed", "localization"] {
            let t = Instant::now();
            let got = lib(if route == "closed" { poincare_degree3(k, n) } else { poincare_localization(k, n, 3) })?;
            let dt = t.elapsed();
            slowest = slowest.max(dt);
            ensure(got == want, || format!("{route} G({k},{n}): {got}"))?;
            ensure(dt < Duration::from_secs(1), || format!("{route} G({k},{n}) took {dt:?}"))?;
        }
    }
    Ok(format!("3 rows, both routes, slowest {slowest:?}"))
}

/// Localization polynomials of the master sweep, reused by the invariants.
fn master_sweep() -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    for (d, max_n) in [(2, 7), (3, 6)] {
        for n in 2..=max_n {
            for k in 1..n {
                cells.push((k, n, d));
            }
        }
    }
    cells
}

fn master_equivalence(polys: &mut Vec<((usize, usize, usize), QPolynomial)>) -> Outcome {
    let t = Instant::now();
    for (k, n, d) in master_sweep() {
        let loc = lib(poincare_localization(k, n, d))?;
        let closed = lib(closed_form(k, n, d))?.poincare;
        ensure(loc == closed, || format!("d={d} G({k},{n}): localization {loc} vs closed {closed}"))?;
        polys.push(((k, n, d), loc));
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(300), || format!("sweep took {dt:?}"))?;
    Ok(format!("{} cells in {dt:?}", polys.len()))
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn census() -> Outcome {
    let mut cells = 0;
    for n in 2..=7usize {
        for k in 1..n {
            let (b, m) = (binom(n as u128, k as u128), (k * (n - k)) as u128);
            for (d, total) in [
                (1, b * m / 2),
                (2, b * m / 2 + b * binom(m + 1, 2)),
                (3, b * m / 2 + b * m * m + b * binom(m + 2, 3) + b * m * m * m / 2),
            ] {
                let trees = lib(enumerate_fixed_graphs(k, n, d))?;
                ensure(trees.len() as u128 == total, || format!("d={d} G({k},{n}): {} trees, formula {total}", trees.len()))?;
                let by_formula = lib(census_formula(k, n, d))?;
                for (shape, want) in by_formula {
                    let got = trees.iter().filter(|t| t.shape() == shape).count() as u128;
                    ensure(got == want, || format!("d={d} G({k},{n}) {}: {got} vs {want}", shape.name()))?;
                }
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells, per-shape counts match"))
}

fn triangle() -> Outcome {
    let t = lib(DecoratedTree::from_labels(2, 3, &[&[1, 2], &[2, 3], &[1, 3]], &[(0, 1, 1), (0, 2, 1)]))?;
    let w = lib(tangent_weights(&t))?;
    ensure(t.shape() == Shape::Path, || format!("shape {:?}", t.shape()))?;
    ensure(w.len() == 5, || format!("{} weights", w.len()))?;
    let pos = w.count_sign(Sign::Positive);
    ensure(pos == 4, || format!("{pos} positive"))?;
    Ok("5 weights, 4 positive".into())
}

fn invariants(polys: &[((usize, usize, usize), QPolynomial)]) -> Outcome {
    ensure(!polys.is_empty(), || "no polynomials from the sweep".into())?;
    for ((k, n, d), p) in polys {
        let problems = lib(structural_problems(*k, *n, *d, p))?;
        ensure(problems.is_empty(), || format!("d={d} G({k},{n}): {}", problems.join("; ")))?;
        let dual = polys.iter().find(|(c, _)| *c == (n - k, *n, *d)).map(|(_, q)| q);
        ensure(dual == Some(p), || format!("d={d} G({k},{n}) differs from G({},{n})", n - k))?;
    }
    Ok(format!("{} polynomials", polys.len()))
}

fn identities() -> Outcome {
    let report = verify_appendix_identities(12);
    for o in &report.outcomes {
        ensure(o.passed(), || format!("{}: {}", o.identity, o.counterexample.clone().unwrap_or_default()))?;
    }
    let cases: usize = report.outcomes.iter().map(|o| o.cases).sum();
    for total in 0..=10usize {
        for a in 0..=total {
            let b = total - a;
            let want = lib(qbinomial(total as i64, a as i64))?;
            ensure(partition_sum(a, b) == want, || format!("partition_sum({a},{b})"))?;
        }
    }
    Ok(format!("{cases} identity cases up to 12, partition_sum up to 10"))
}

fn embeddings() -> Outcome {
    let mut comparisons = 0;
    for v in 2..=5 {
        for d in 1..=3 {
            let check = lib(embedding_cross_check(v, d))?;
            ensure(check.failures.is_empty(), || check.failures[0].clone())?;
            comparisons += check.comparisons;
        }
    }
    Ok(format!("{comparisons} tree comparisons, iota and kappa"))
}

fn replay(info: &mut String) -> Outcome {
    let mut cells = 0;
    for n in 3..=6usize {
        for k in 2..n {
            let e6 = expression6(k, n);
            let e5 = lib(expression5_bruteforce(k, n))?;
            ensure(e5 == e6, || format!("G({k},{n}): expression5_bruteforce {e5} vs expression6 {e6}"))?;
            let fam = lib(stratum_family_contribution(k, n, StratumFamily::G23Triangle))?;
            ensure(fam == e6, || format!("G({k},{n}): triangle family {fam} vs {e6}"))?;
            cells += 1;
        }
    }
    let (mut agree, mut total) = (0, 0);
    for n in 2..=6usize {
        for k in 1..n {
            total += 1;
            if lib(stratum_family_contribution(k, n, StratumFamily::G12Repeated))? == expression7(k, n) {
                agree += 1;
            }
        }
    }
    *info = format!("expression7 vs G12_repeated family: {agree}/{total} cells agree");
    Ok(format!("{cells} cells"))
}

fn degree_one() -> Outcome {
    let brute = flag_variety_bruteforce(2, 4);
    let product = lib(qbinomial(4, 1))? * lib(qbinomial(3, 2))?;
    ensure(brute == product, || format!("flag oracle at G(2,4): {brute} vs {product}"))?;
    let mut cells = 0;
    for n in 2..=6usize {
        for k in 1..n {
            let want = lib(qbinomial(n as i64, k as i64 - 1))? * lib(qbinomial((n - k + 1) as i64, 2))?;
            let got = lib(poincare_localization(k, n, 1))?;
            ensure(got == want, || format!("G({k},{n}): {got} vs {want}"))?;
            cells += 1;
        }
    }
    Ok(format!("oracle checked at G(2,4), {cells} cells"))
}

fn main() {
    // libtest flags such as --nocapture are accepted and ignored
    let mut polys = Vec::new();
    let mut info = String::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 betti tables", betti_tables()),
        ("2 master equivalence", master_equivalence(&mut polys)),
        ("3 census", census()),
        ("4 triangle anchor", triangle()),
        ("5 structural invariants", invariants(&polys)),
        ("6 identities", identities()),
        ("7 embedding cross-check", embeddings()),
        ("8 identity replay", replay(&mut info)),
        ("9 degree one", degree_one()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {name}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    if !info.is_empty() {
        println!("info: {info}");
    }
    println!("acceptance: {}/{} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test -p meandric --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use meandric::golden;
use meandric::meander::{
    build_irreducible_table, loop_count_algebraic, loop_count_geometric, IrreducibleTable,
    TableOptions,
};
use meandric::nclat::enumerate_nc;
use meandric::pipeline::{
    default_nx, lando_zvonkin_check, run_pipeline, run_pipeline_with_table, verify_against_brute,
    PipelineOptions, PipelineResult,
};
use meandric::series::{series_from_table, Bounds};

type Outcome = Result<String, String>;

struct Shared {
    table6: IrreducibleTable,
    run6: PipelineResult,
    build_secs: f64,
    run_secs: f64,
}

fn temp_cache() -> tempfile::TempDir {
    tempfile::tempdir().expect("temporary cache directory")
}

fn shared() -> Result<Shared, String> {
    let dir = temp_cache();
    let opts = TableOptions {
        cache_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let t = Instant::now();
    let table6 = build_irreducible_table(6, &opts).map_err(|e| e.to_string())?;
    let build_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let run6 = run_pipeline_with_table(&table6, 6, default_nx(6)).map_err(|e| e.to_string())?;
    Ok(Shared {
        table6,
        run6,
        build_secs,
        run_secs: t.elapsed().as_secs_f64(),
    })
}

fn compare_polys(run: &PipelineResult, rs: impl Iterator<Item = usize>) -> Outcome {
    let gold = golden::polynomials();
    let mut matched = Vec::new();
    for r in rs {
        match run.polys.get(&r) {
            Some(p) if *p == gold[&r] => matched.push(r),
            Some(p) => return Err(format!("P~_{r} = {p}, expected {}", gold[&r])),
            None => return Err(format!("P~_{r} missing")),
        }
    }
    Ok(format!("P~_r exact for r in {matched:?}"))
}

fn criterion_1() -> Outcome {
    let dir = temp_cache();
    let opts = PipelineOptions {
        cache_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let t = Instant::now();
    let run = run_pipeline(5, default_nx(5), &opts).map_err(|e| e.to_string())?;
    let msg = compare_polys(&run, 1..=5)?;
    Ok(format!("{msg} ({:.1}s)", t.elapsed().as_secs_f64()))
}

fn criterion_2(s: &Shared) -> Outcome {
    let msg = compare_polys(&s.run6, 6..=6)?;
    Ok(format!(
        "{msg} (table {:.1}s, series {:.1}s)",
        s.build_secs, s.run_secs
    ))
}

fn criterion_3(s: &Shared) -> Outcome {
    let expected = ["2", "2", "4/3", "2/3", "4/15", "4/45"];
    for (r, text) in (1..=6).zip(expected) {
        let want = BigRational::from_str(text).unwrap();
        let got = s
            .run6
            .asympt
            .get(&r)
            .ok_or_else(|| format!("c_{r} missing"))?;
        if got.c != want {
            return Err(format!("c_{r} = {}, expected {want}", got.c));
        }
    }
    Ok(format!("c_1..c_6 = {}", expected.join(", ")))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let table = build_irreducible_table(2, &TableOptions::default()).map_err(|e| e.to_string())?;
    let i = series_from_table(&table, 8, Bounds::new(2, 2, 2)).map_err(|e| e.to_string())?;
    let mut got = BTreeSet::new();
    for (k, c) in i.coeffs().iter().enumerate() {
        for (e, v) in c.terms() {
            got.insert((k + 1, e, v.clone()));
        }
    }
    // (n, (y, a, b), coefficient) for every term up to Y^2
    let expected: BTreeSet<_> = [
        (1, (0, 0, 0), 1),
        (2, (1, 1, 0), 1),
        (2, (1, 0, 1), 1),
        (3, (2, 2, 0), 1),
        (3, (2, 1, 1), 6),
        (3, (2, 0, 2), 1),
        (4, (2, 1, 1), 2),
        (4, (2, 2, 2), 2),
    ]
    .into_iter()
    .map(|(n, e, c)| (n, e, BigInt::from(c)))
    .collect();
    if got != expected {
        return Err(format!("I series terms {got:?}"));
    }
    Ok(format!(
        "8 terms through Y^2 match ({:.3}s)",
        t.elapsed().as_secs_f64()
    ))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let report = verify_against_brute(5).map_err(|e| e.to_string())?;
    if !report.passed() {
        return Err(format!("brute-force mismatches: {:?}", report.mismatches));
    }
    let brute_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let all = enumerate_nc(7).map_err(|e| e.to_string())?;
    let mut pairs = 0u64;
    for a in &all {
        for b in &all {
            let alg = loop_count_algebraic(a, b).map_err(|e| e.to_string())?;
            let geo = loop_count_geometric(a, b).map_err(|e| e.to_string())?;
            if alg != geo {
                return Err(format!("loop counts differ for {a:?}, {b:?}: {alg} vs {geo}"));
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "{} statistics match brute force for n <= 5 ({brute_secs:.2}s); \
         algebraic and geometric loop counts agree on all {pairs} pairs at n = 7 ({:.2}s)",
        report.compared,
        t.elapsed().as_secs_f64()
    ))
}

fn criterion_6(s: &Shared) -> Outcome {
    let structural = |name: &str| {
        ["K unit", "K rational form", "M Catalan", "M w-form", "tail", "even", "closed form"]
            .iter()
            .any(|p| name.starts_with(p))
    };
    let checks: Vec<_> = s.run6.diagnostics.iter().filter(|c| structural(&c.name)).collect();
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(c.line());
    }
    for required in ["K unit", "K rational form", "M Catalan", "M w-form"] {
        if !checks.iter().any(|c| c.name == required) {
            return Err(format!("check {required:?} did not run"));
        }
    }
    for r in 1..=6 {
        for prefix in ["tail", "even", "closed form"] {
            let name = format!("{prefix} r={r}");
            if !checks.iter().any(|c| c.name == name) {
                return Err(format!("check {name:?} did not run"));
            }
        }
    }
    Ok(format!("{} structural checks passed in the r <= 6 run", checks.len()))
}

fn criterion_7(s: &Shared) -> Outcome {
    if s.table6.max_r() < 6 {
        return Err("table does not reach r = 6".into());
    }
    for n in 1..=12 {
        for (a, b) in [(8, 10), (9, 9), (10, 8), (10, 10)] {
            let c = s.table6.get(n, 6, a, b);
            if c != 0 {
                return Err(format!("|I_({n},6,{a},{b})| = {c}"));
            }
        }
    }
    Ok("I_(n,6,a,b) empty for (a,b) in (8,10), (9,9), (10,8), (10,10) and n <= 12".into())
}

fn criterion_8() -> Outcome {
    let dir = temp_cache();
    let opts = PipelineOptions {
        cache_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let t = Instant::now();
    let report = lando_zvonkin_check(8, &opts).map_err(|e| e.to_string())?;
    if !report.passed() {
        return Err(report.mismatches.join("; "));
    }
    Ok(format!(
        "composition equals the two-step transform and Cat_n^2 through order 8; |I_n| = {:?} ({:.2}s)",
        report.irreducible_totals,
        t.elapsed().as_secs_f64()
    ))
}

fn criterion_9(s: &Shared) -> Outcome {
    let trend: Vec<_> = s
        .run6
        .diagnostics
        .iter()
        .filter(|c| c.name.starts_with("trend"))
        .collect();
    if trend.len() != 3 {
        return Err(format!("expected 3 trend checks, found {}", trend.len()));
    }
    if let Some(c) = trend.iter().find(|c| !c.passed) {
        return Err(c.line());
    }
    Ok(trend.iter().map(|c| c.line()).collect::<Vec<_>>().join("; "))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: usize, title: &str, outcome: Outcome| {
        match outcome {
            Ok(detail) => println!("PASS {id} {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {title}: {detail}");
            }
        }
    };
    report(1, "golden polynomials r <= 5", criterion_1());
    let shared = shared();
    let with = |f: fn(&Shared) -> Outcome| match &shared {
        Ok(s) => f(s),
        Err(e) => Err(format!("r <= 6 run failed: {e}")),
    };
    report(2, "golden polynomial r = 6", with(criterion_2));
    report(3, "asymptotic constants", with(criterion_3));
    report(4, "irreducible series head", criterion_4());
    report(5, "oracle equivalence", criterion_5());
    report(6, "structural checks", with(criterion_6));
    report(7, "emptiness at r = 6", with(criterion_7));
    report(8, "Lando-Zvonkin identity", criterion_8());
    report(9, "asymptotic trend (informational)", with(criterion_9));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

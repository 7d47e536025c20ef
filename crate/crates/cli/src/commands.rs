use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Value};

use meandric::golden;
use meandric::json::bigint_number;
use meandric::meander::{
    brute_meander_counts, build_irreducible_table, count_irreducible, enumerate_irreducible,
    write_pairs_file, MeandricSystem, SearchOptions, StatQuadruple, TableOptions,
    DEFAULT_MAX_TABLE_R,
};
use meandric::nclat::NcPartition;
use meandric::pipeline::{
    default_nx, lando_zvonkin_check, lando_zvonkin_growth_constant, run_pipeline,
    verify_against_brute, PipelineOptions, PipelineResult,
};
use meandric::render::render_svg;
use meandric::{Error, Result};

use crate::{Cli, Command, Common, Format};

/// Runs the subcommand; `Ok(false)` means a check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let c = &cli.common;
    match &cli.command {
        Command::Enumerate {
            n,
            loops,
            use_genfun,
            max_r,
        } => enumerate(c, *n, *loops, *use_genfun, *max_r),
        Command::Irreducible {
            n,
            max_r,
            emit_pairs,
        } => irreducible(c, *n, *max_r, emit_pairs.as_deref()),
        Command::Genfun { max_r, nx } => genfun(c, *max_r, *nx),
        Command::Asympt { r, max_r } => asympt(c, *r, *max_r),
        Command::Verify => verify(c),
        Command::Render { alpha, beta, n } => render(c, alpha, beta, *n),
    }
}

fn emit(c: &Common, text: &str) -> Result<()> {
    match &c.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pipeline_opts(c: &Common) -> PipelineOptions {
    PipelineOptions {
        cache_dir: Some(c.cache_dir.clone()),
        workers: c.workers.0,
        override_guard: c.override_guards,
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn numbers(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::Number(bigint_number(x))).collect())
}

fn enumerate(c: &Common, n: usize, loops: Option<usize>, use_genfun: bool, max_r: usize) -> Result<bool> {
    let (counts, source): (BTreeMap<usize, BigInt>, &str) = if use_genfun {
        let nx = default_nx(max_r).max(n);
        let res = run_pipeline(max_r, nx, &pipeline_opts(c))?;
        let counts = (0..=max_r.min(n - 1))
            .map(|r| (n - r, res.f_series[&r][n - 1].clone()))
            .collect();
        (counts, "genfun")
    } else {
        let counts = brute_meander_counts(n)?
            .into_iter()
            .map(|(k, v)| (k, BigInt::from(v)))
            .collect();
        (counts, "brute")
    };
    let counts: BTreeMap<usize, BigInt> = match loops {
        Some(k) => BTreeMap::from([(k, counts.get(&k).cloned().unwrap_or_default())]),
        None => counts,
    };
    // the meander polynomial is only complete from brute force
    let polynomial: Option<Vec<BigInt>> = (source == "brute" && loops.is_none()).then(|| {
        (0..=n)
            .map(|k| counts.get(&k).cloned().unwrap_or_default())
            .collect()
    });
    let text = match c.format {
        Format::Json => {
            let map: serde_json::Map<String, Value> = counts
                .iter()
                .map(|(k, v)| (k.to_string(), Value::Number(bigint_number(v))))
                .collect();
            let mut v = json!({ "n": n, "source": source, "counts": map });
            if let Some(p) = &polynomial {
                v["polynomial"] = numbers(p);
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut s = String::from("n,loops,count\n");
            for (k, v) in &counts {
                s.push_str(&format!("{n},{k},{v}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = format!("meandric systems on {} points ({source})\n", 2 * n);
            for (k, v) in &counts {
                s.push_str(&format!("loops {k}: {v}\n"));
            }
            if let Some(p) = &polynomial {
                let list: Vec<String> = p.iter().map(ToString::to_string).collect();
                s.push_str(&format!("meander polynomial coefficients: [{}]\n", list.join(", ")));
            }
            s
        }
    };
    emit(c, &text)?;
    Ok(true)
}

fn irreducible(c: &Common, n: Option<usize>, max_r: Option<usize>, pairs: Option<&Path>) -> Result<bool> {
    let counts: BTreeMap<StatQuadruple, u64> = match n {
        Some(n) => {
            let opts = SearchOptions {
                max_r,
                override_guard: c.override_guards,
                workers: c.workers.0,
            };
            match pairs {
                Some(path) => {
                    let found = enumerate_irreducible(n, opts)?;
                    write_pairs_file(path, &found)?;
                    let mut counts = BTreeMap::new();
                    for p in &found {
                        *counts.entry(p.stats).or_insert(0) += 1;
                    }
                    counts
                }
                None => count_irreducible(n, opts)?,
            }
        }
        None => {
            let opts = TableOptions {
                cache_dir: Some(c.cache_dir.clone()),
                override_guard: c.override_guards,
                workers: c.workers.0,
            };
            build_irreducible_table(max_r.unwrap_or(DEFAULT_MAX_TABLE_R), &opts)?
                .entries()
                .clone()
        }
    };
    let text = match c.format {
        Format::Json => to_json(&Value::Array(
            counts
                .iter()
                .map(|(s, k)| json!({"n": s.n, "r": s.r, "a": s.a, "b": s.b, "count": k}))
                .collect(),
        )),
        Format::Csv => {
            let mut s = String::from("n,r,a,b,count\n");
            for (q, k) in &counts {
                s.push_str(&format!("{},{},{},{},{k}\n", q.n, q.r, q.a, q.b));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{:>3} {:>3} {:>3} {:>3} {:>12}\n", "n", "r", "a", "b", "count");
            for (q, k) in &counts {
                s.push_str(&format!("{:>3} {:>3} {:>3} {:>3} {k:>12}\n", q.n, q.r, q.a, q.b));
            }
            let total: u64 = counts.values().sum();
            s.push_str(&format!("total {total}\n"));
            s
        }
    };
    emit(c, &text)?;
    Ok(true)
}

fn genfun_json(res: &PipelineResult) -> Value {
    let polys: Vec<Value> = res
        .polys
        .iter()
        .map(|(r, p)| json!({"r": r, "coeffs": numbers(p.coeffs())}))
        .collect();
    let series: Vec<Value> = res
        .f_series
        .iter()
        .map(|(r, v)| json!({"r": r, "coeffs": numbers(v)}))
        .collect();
    json!({
        "r_max": res.r_max,
        "nx": res.nx,
        "polys": polys,
        "f_series": series,
        "asympt": serde_json::to_value(&res.asympt).expect("json"),
        "diagnostics": serde_json::to_value(&res.diagnostics).expect("json"),
    })
}

fn genfun(c: &Common, max_r: usize, nx: Option<usize>) -> Result<bool> {
    let res = run_pipeline(max_r, nx.unwrap_or(default_nx(max_r)), &pipeline_opts(c))?;
    let text = match c.format {
        Format::Json => to_json(&genfun_json(&res)),
        Format::Csv => {
            let mut s = String::from("kind,r,index,value\n");
            for (r, p) in &res.polys {
                for (d, v) in p.coeffs().iter().enumerate() {
                    s.push_str(&format!("poly,{r},{d},{v}\n"));
                }
            }
            for (r, f) in &res.f_series {
                for (i, v) in f.iter().enumerate() {
                    s.push_str(&format!("series,{r},{},{v}\n", i + 1));
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (r, p) in &res.polys {
                s.push_str(&format!("P~_{r}(w) = {p}\n"));
            }
            for (r, f) in &res.f_series {
                let list: Vec<String> = f.iter().map(ToString::to_string).collect();
                s.push_str(&format!("F_{r}: [{}]\n", list.join(", ")));
            }
            for check in &res.diagnostics {
                s.push_str(&check.line());
                s.push('\n');
            }
            s
        }
    };
    emit(c, &text)?;
    Ok(res.passed())
}

fn asympt(c: &Common, r: Option<usize>, max_r: usize) -> Result<bool> {
    let top = r.unwrap_or(max_r);
    let res = run_pipeline(top, default_nx(top), &pipeline_opts(c))?;
    let wanted: Vec<usize> = match r {
        Some(r) => vec![r],
        None => (1..=max_r).collect(),
    };
    let consts: Vec<_> = wanted.iter().filter_map(|r| res.asympt.get(r)).collect();
    let text = match c.format {
        Format::Json => to_json(&serde_json::to_value(&consts).expect("json")),
        Format::Csv => {
            let mut s = String::from("r,p_at_one,c,value\n");
            for k in &consts {
                s.push_str(&format!("{},{},{},{:.12}\n", k.r, k.p_at_one, k.c, k.value));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for k in &consts {
                s.push_str(&format!(
                    "r={}: M_n^(n-{}) ~ ({})/sqrt(pi) 4^n n^({}/2), constant {:.10}\n",
                    k.r,
                    k.r,
                    k.c,
                    2 * k.r as i64 - 3,
                    k.value
                ));
            }
            s
        }
    };
    emit(c, &text)?;
    Ok(consts.len() == wanted.len() && res.passed())
}

fn verify(c: &Common) -> Result<bool> {
    let mut lines: Vec<(bool, String)> = Vec::new();

    let brute = verify_against_brute(5)?;
    lines.push((
        brute.passed(),
        format!(
            "brute-force oracle n <= 5: {} values compared, {} mismatches",
            brute.compared,
            brute.mismatches.len()
        ),
    ));
    lines.extend(brute.mismatches.iter().map(|m| (false, format!("  {m}"))));

    let lz = lando_zvonkin_check(6, &pipeline_opts(c))?;
    let growth = lz.growth.last().copied().unwrap_or(0.0);
    lines.push((
        lz.passed(),
        format!(
            "Lando-Zvonkin identity to order 6 (|I_6|^(1/6) = {growth:.3}, limit {:.3})",
            lando_zvonkin_growth_constant()
        ),
    ));
    lines.extend(lz.mismatches.iter().map(|m| (false, format!("  {m}"))));

    match run_pipeline(3, default_nx(3), &pipeline_opts(c)) {
        Ok(res) => {
            let gold_p = golden::polynomials();
            let gold_c = golden::constants();
            for r in 1..=3 {
                let ok = res.polys.get(&r) == gold_p.get(&r);
                lines.push((ok, format!("golden P~_{r}")));
                let ok = res.asympt.get(&r).map(|k| &k.c) == gold_c.get(&r);
                lines.push((ok, format!("golden constant c_{r}")));
            }
            for check in &res.diagnostics {
                lines.push((check.passed, format!("{}: {}", check.name, check.detail)));
            }
        }
        Err(e @ Error::Integrity { .. }) => lines.push((false, format!("irreducible cache: {e}"))),
        Err(e) => return Err(e),
    }

    let all = lines.iter().all(|(ok, _)| *ok);
    let text = match c.format {
        Format::Json => to_json(&json!({
            "passed": all,
            "checks": lines.iter().map(|(ok, l)| json!({"passed": ok, "detail": l})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("status,detail\n");
            for (ok, l) in &lines {
                s.push_str(&format!("{},\"{}\"\n", if *ok { "PASS" } else { "FAIL" }, l.replace('"', "'")));
            }
            s
        }
        Format::Text => lines
            .iter()
            .map(|(ok, l)| format!("{} {l}\n", if *ok { "PASS" } else { "FAIL" }))
            .collect(),
    };
    emit(c, &text)?;
    Ok(all)
}

/// Largest element mentioned in cycle notation.
fn infer_n(text: &str) -> usize {
    let values: Vec<usize> = if text.contains(',') {
        text.split(|ch: char| !ch.is_ascii_digit())
            .filter_map(|t| t.parse().ok())
            .collect()
    } else {
        text.chars().filter_map(|ch| ch.to_digit(10)).map(|d| d as usize).collect()
    };
    values.into_iter().max().unwrap_or(1).max(1)
}

fn render(c: &Common, alpha: &str, beta: &str, n: Option<usize>) -> Result<bool> {
    let n = n.unwrap_or_else(|| infer_n(alpha).max(infer_n(beta)));
    let a = NcPartition::parse_cycles(alpha, n)?;
    let b = NcPartition::parse_cycles(beta, n)?;
    let system = MeandricSystem::new(a, b)?;
    emit(c, &render_svg(&system))?;
    Ok(true)
}

use momentkit::acceptance::{self, CRITERIA};
use momentkit::measures::Measure;
use momentkit::numeric::{parse_complex_list, Cplx, PrecisionContext, Real, Scalar, Surd};
use momentkit::operator::{closure_apply, FiniteSequence};
use momentkit::orthopoly::{matrix_csv, OrthoSystem};
use momentkit::probes::{
    carleman_partial_sums, classify, growth_ratio, hs_probe, moment_tail_probe, run_counterexample, support_probe,
    CounterexampleScheme, ProbeReport, MIN_TAIL_MOMENTS,
};
use rug::Rational;
use serde_json::{json, Value};

use crate::config::{parse_list, Cli, Command, Emit, Format, Limit};
use crate::Failure;

const DEFAULT_MEASURE: &str = "uniform(-1,1)";
const COUNTEREXAMPLE_MEASURE: &str = "uniform_plus_atom(1)";
/// Float width when `auto` cannot go exact.
const AUTO_BITS: u32 = 256;
const COUNTEREXAMPLE_BITS: u32 = 128;
const PROBE_NAMES: [&str; 5] = ["support", "tail", "carleman", "growth", "hs"];

pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, status: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Moments { count } => moments(cli, count.unwrap_or(cli.order)),
        Command::Orthopoly { emit } => orthopoly(cli, *emit),
        Command::Probe { probes } => probe(cli, probes),
        Command::Counterexample { n, limit } => counterexample(cli, n, *limit),
        Command::Closure { y, points } => closure(cli, y, points),
        Command::Selftest { only } => selftest(cli, only.as_deref()),
    }
}

fn format(cli: &Cli) -> Format {
    cli.format.unwrap_or(Format::Json)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let bad = |e: csv::Error| Failure::config(format!("csv: {e}"));
    w.write_record(header).map_err(bad)?;
    for r in rows {
        w.write_record(r).map_err(bad)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn report_text(cli: &Cli, reports: &[ProbeReport], head: Value) -> Result<String, Failure> {
    match format(cli) {
        Format::Json => {
            let mut v = head;
            v["reports"] = Value::Array(reports.iter().map(ProbeReport::to_json).collect());
            Ok(json_text(&v))
        }
        Format::Csv => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&r.to_csv()?);
            }
            Ok(out)
        }
    }
}

fn moments(cli: &Cli, count: usize) -> Result<Output, Failure> {
    let m = cli.measure_or(DEFAULT_MEASURE)?;
    let ctx = cli.context(&m, count, AUTO_BITS)?;
    let q = m.moments(count, &ctx)?;
    let values = q.to_strings(ctx.decimal_digits());
    let text = match format(cli) {
        Format::Json => json_text(&json!({
            "measure": m.to_string(),
            "exact": q.is_exact(),
            "moments": values,
        })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = values.into_iter().enumerate().map(|(n, v)| vec![n.to_string(), v]).collect();
            csv_text(&["n", "q_n"], &rows)?
        }
    };
    Ok(Output::ok(text))
}

fn orthopoly(cli: &Cli, emit: Emit) -> Result<Output, Failure> {
    let m = cli.measure_or(DEFAULT_MEASURE)?;
    let ctx = cli.context(&m, 2 * cli.order, AUTO_BITS)?;
    let text = if ctx.is_exact() {
        orthopoly_as::<Surd>(cli, &m, emit, &ctx)?
    } else {
        orthopoly_as::<Real>(cli, &m, emit, &ctx)?
    };
    Ok(Output::ok(text))
}

fn strings<T: Scalar>(v: &[T], digits: usize) -> Vec<String> {
    v.iter().map(|x| x.to_decimal(digits)).collect()
}

fn orthopoly_as<T: Scalar>(cli: &Cli, m: &Measure, emit: Emit, ctx: &PrecisionContext) -> Result<String, Failure> {
    let n = cli.order;
    let digits = ctx.decimal_digits();
    let sys = OrthoSystem::<T>::from_measure(m, n, ctx)?;
    let head = json!({"measure": m.to_string(), "order": n, "exact": ctx.is_exact()});
    if emit == Emit::Recurrence {
        let basis = &sys.basis;
        return match format(cli) {
            Format::Json => {
                let mut v = head;
                v["emit"] = json!("recurrence");
                v["p0"] = json!(basis.p0().to_decimal(digits));
                v["alpha"] = json!(strings(basis.alpha(), digits));
                v["beta"] = json!(strings(basis.beta(), digits));
                v["leading"] = json!(strings(basis.leading(), digits));
                Ok(json_text(&v))
            }
            Format::Csv => {
                let blank = String::new;
                let rows: Vec<Vec<String>> = (0..=n)
                    .map(|k| {
                        vec![
                            k.to_string(),
                            basis.alpha().get(k).map_or_else(blank, |a| a.to_decimal(digits)),
                            k.checked_sub(1)
                                .and_then(|i| basis.beta().get(i))
                                .map_or_else(blank, |b| b.to_decimal(digits)),
                            basis.leading()[k].to_decimal(digits),
                        ]
                    })
                    .collect();
                csv_text(&["k", "alpha_k", "beta_k", "leading_k"], &rows)
            }
        };
    }
    let (name, rows): (&str, Vec<Vec<T>>) = match emit {
        Emit::Hankel => ("hankel", sys.hankel.rows()),
        Emit::B => ("B", square(&sys.b, ctx)),
        Emit::C => ("C", square(&sys.c, ctx)),
        Emit::Recurrence => unreachable!("handled above"),
    };
    match format(cli) {
        Format::Json => {
            let mut v = head;
            v["emit"] = json!(name);
            v["matrix"] = json!(rows.iter().map(|r| strings(r, digits)).collect::<Vec<_>>());
            Ok(json_text(&v))
        }
        Format::Csv => Ok(matrix_csv(&rows, digits)?),
    }
}

fn square<T: Scalar>(t: &momentkit::orthopoly::TriangularMatrix<T>, ctx: &PrecisionContext) -> Vec<Vec<T>> {
    let n = t.size();
    (0..n).map(|i| (0..n).map(|j| t.entry(i, j, ctx)).collect()).collect()
}

fn probe(cli: &Cli, list: &str) -> Result<Output, Failure> {
    let m = cli.measure_or(DEFAULT_MEASURE)?;
    let wanted: Vec<&str> = list.split(',').map(str::trim).collect();
    for w in &wanted {
        if *w != "all" && !PROBE_NAMES.contains(w) {
            return Err(Failure::config(format!(
                "unknown probe {w:?}; expected one of {} or all",
                PROBE_NAMES.join(",")
            )));
        }
    }
    let all = wanted.contains(&"all");
    let needs_moments = all || wanted.iter().any(|w| *w != "support");
    let order = cli.order;
    let top = (2 * order).max(MIN_TAIL_MOMENTS - 1);
    let ctx = cli.context(&m, top, AUTO_BITS)?;
    let q = if needs_moments { Some(m.moments(top, &ctx)?) } else { None };
    let mut reports = Vec::new();
    if all {
        reports.push(classify(&m, q.as_ref().expect("moments"), order, &ctx)?);
    } else {
        for w in PROBE_NAMES.iter().filter(|p| wanted.contains(p)) {
            let report = match *w {
                "support" => support_probe(&m),
                "tail" => moment_tail_probe(q.as_ref().expect("moments"), &ctx)?,
                "carleman" => carleman_partial_sums(q.as_ref().expect("moments"), order, &ctx)?.report,
                "growth" => growth_ratio(q.as_ref().expect("moments"), order, &ctx)?.report,
                _ => hs_probe(q.as_ref().expect("moments"), order, &ctx)?,
            };
            reports.push(report);
        }
    }
    let head = json!({"measure": m.to_string(), "order": order, "exact": ctx.is_exact()});
    Ok(Output::ok(report_text(cli, &reports, head)?))
}

fn counterexample(cli: &Cli, n: &str, limit: Limit) -> Result<Output, Failure> {
    let m = cli.measure_or(COUNTEREXAMPLE_MEASURE)?;
    let n_list = parse_list(n, "n")?;
    if let Some(bad) = n_list.iter().find(|&&k| k == 0) {
        return Err(Failure::config(format!("n must be at least 1, got {bad}")));
    }
    let scheme = match limit {
        Limit::Atom => CounterexampleScheme::averaging_to_atom(),
        Limit::Zero => CounterexampleScheme::averaging_to_zero(),
    };
    let ctx = cli.float_context(0, COUNTEREXAMPLE_BITS)?;
    let outcome = run_counterexample(&scheme, &m, &n_list, &ctx)?;
    let head = json!({"measure": m.to_string(), "n": n_list, "limit": scheme.name()});
    Ok(Output::ok(report_text(cli, &[outcome.report], head)?))
}

fn closure(cli: &Cli, y: &str, points: &str) -> Result<Output, Failure> {
    let m = cli.measure_or(DEFAULT_MEASURE)?;
    let y = FiniteSequence::parse(y)?;
    let points = parse_complex_list(points)?;
    let order = y.degree().unwrap_or(0);
    let ctx = cli.context(&m, 2 * order, AUTO_BITS)?;
    let text = if ctx.is_exact() {
        closure_as::<Surd>(cli, &m, &y, &points, order, &ctx)?
    } else {
        closure_as::<Real>(cli, &m, &y, &points, order, &ctx)?
    };
    Ok(Output::ok(text))
}

fn closure_as<T: Scalar>(
    cli: &Cli,
    m: &Measure,
    y: &FiniteSequence,
    points: &[Cplx<Rational>],
    order: usize,
    ctx: &PrecisionContext,
) -> Result<String, Failure> {
    let digits = ctx.decimal_digits();
    let sys = OrthoSystem::<T>::from_measure(m, order, ctx)?;
    let c = closure_apply(y, &sys.b, &sys.basis, points, ctx)?;
    let diffs = c.differences();
    let rows: Vec<Vec<String>> = (0..points.len())
        .map(|i| {
            vec![
                c.points[i].to_decimal(digits),
                c.lhs[i].to_decimal(digits),
                c.rhs[i].to_decimal(digits),
                diffs[i].to_decimal(digits),
            ]
        })
        .collect();
    match format(cli) {
        Format::Json => {
            let evals: Vec<Value> = rows
                .iter()
                .map(|r| json!({"z": r[0], "power_series": r[1], "orthogonal_series": r[2], "difference": r[3]}))
                .collect();
            Ok(json_text(&json!({
                "measure": m.to_string(),
                "y": y.to_string(),
                "exact": ctx.is_exact(),
                "xi": c.xi.to_strings(digits),
                "points": evals,
            })))
        }
        Format::Csv => csv_text(&["z", "power_series", "orthogonal_series", "difference"], &rows),
    }
}

fn selftest(cli: &Cli, only: Option<&str>) -> Result<Output, Failure> {
    let ids: Vec<u8> = match only {
        None => CRITERIA.iter().map(|c| c.0).collect(),
        Some(s) => {
            let ids = parse_list(s, "criterion")?;
            ids.into_iter()
                .map(|i| {
                    CRITERIA.iter().find(|c| c.0 as usize == i).map(|c| c.0).ok_or_else(|| {
                        Failure::config(format!("no criterion {i}; criteria are 1..={}", CRITERIA.len()))
                    })
                })
                .collect::<Result<_, _>>()?
        }
    };
    let results: Vec<_> = ids.iter().map(|&id| acceptance::run(id, cli.seed)).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    let text = match cli.format {
        None => {
            let mut s: String = results.iter().map(|r| format!("{r}\n")).collect();
            s.push_str(&format!("{passed} of {} criteria passed\n", results.len()));
            s
        }
        Some(Format::Json) => json_text(&json!({
            "seed": cli.seed,
            "passed": passed,
            "total": results.len(),
            "criteria": results
                .iter()
                .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
                .collect::<Vec<_>>(),
        })),
        Some(Format::Csv) => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        r.name.to_string(),
                        if r.passed { "PASS" } else { "FAIL" }.into(),
                        r.detail.clone(),
                    ]
                })
                .collect();
            csv_text(&["id", "name", "status", "detail"], &rows)?
        }
    };
    Ok(Output { text, status: if passed == results.len() { 0 } else { 1 } })
}

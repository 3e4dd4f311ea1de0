use std::str::FromStr;

use matchlab::exact::{self, ExactEngine, LatticeCellConfig, RatioCsvRow};
use matchlab::oracle::{self, enumerate_pm_with_cap, DEFAULT_VERTEX_CAP};
use matchlab::sampler::{
    mcmc_switch_chain, sample_conditional_stream, sample_uniform_stream, stream_rng, ConditionalSampler,
    SampleRecord, SamplerConfig, UniformSampler,
};
use matchlab::stats::{
    concentration_summary, convergence_table, factorial_ratio_bound_check, limit_lambda, random_bound_instance,
    tv_exact, BoundInstance, CensusKind,
};
use matchlab::switching::{edge_switch_audit, handshake_audit, GoodnessMode};
use matchlab::{GeneralGraph, Host, LabeledMatching, MatchingProfile, MultipartiteShape, StratumTable};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::args::{Census, Cli, Command, HostArgs, MatchingArgs, Mode, SampleMethod};
use crate::output::{Artifact, Table};
use crate::CliError;

type Res<T> = Result<T, CliError>;

enum AnyHost {
    Shape(MultipartiteShape),
    Graph(GeneralGraph),
}

impl Host for AnyHost {
    fn vertex_count(&self) -> usize {
        match self {
            AnyHost::Shape(s) => s.vertex_count(),
            AnyHost::Graph(g) => g.vertex_count(),
        }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        match self {
            AnyHost::Shape(s) => s.adjacent(u, v),
            AnyHost::Graph(g) => g.adjacent(u, v),
        }
    }

    fn part_of(&self, v: usize) -> Option<usize> {
        match self {
            AnyHost::Shape(s) => s.part_of(v),
            AnyHost::Graph(g) => g.part_of(v),
        }
    }

    fn describe(&self) -> String {
        match self {
            AnyHost::Shape(s) => s.describe(),
            AnyHost::Graph(g) => g.describe(),
        }
    }
}

fn load_host(args: &HostArgs, seed: u64) -> Res<AnyHost> {
    if let Some(shape) = &args.shape {
        return Ok(AnyHost::Shape(shape.clone()));
    }
    if let Some(path) = &args.graph {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let g: GeneralGraph =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return Ok(AnyHost::Graph(g));
    }
    if let Some((n_half, t)) = args.random_graph {
        let cap = args.vertex_cap.unwrap_or(DEFAULT_VERTEX_CAP);
        return Ok(AnyHost::Graph(oracle::random_min_degree_graph_with_cap(n_half, t, seed, cap)?));
    }
    Err(CliError::Usage("one of --shape, --graph or --random-graph is required".into()))
}

fn cap(args: &HostArgs) -> usize {
    args.vertex_cap.unwrap_or(DEFAULT_VERTEX_CAP)
}

/// `M` on a shape: the given profile realized on the lowest free slots, or
/// the canonical perfect matching.
fn shape_matching(shape: &MultipartiteShape, m: &MatchingArgs) -> Res<(MatchingProfile, LabeledMatching)> {
    let profile = match &m.profile {
        Some(p) => p.clone(),
        None => MatchingProfile::canonical_perfect(shape)?,
    };
    let lm = profile.realize(shape)?;
    Ok((profile, lm))
}

/// `M` on a general graph: its first perfect matching in enumeration order.
fn graph_matching(host: &AnyHost, m: &MatchingArgs, cap: usize) -> Res<LabeledMatching> {
    if m.profile.is_some() {
        return Err(CliError::Usage("--profile needs a --shape host".into()));
    }
    enumerate_pm_with_cap(host, cap)?.next().ok_or_else(|| matchlab::Error::NoPerfectMatching.into())
}

fn host_matching(host: &AnyHost, m: &MatchingArgs, cap: usize) -> Res<LabeledMatching> {
    match host {
        AnyHost::Shape(s) => Ok(shape_matching(s, m)?.1),
        AnyHost::Graph(_) => graph_matching(host, m, cap),
    }
}

fn parse_lambda(s: &str) -> Res<BigRational> {
    let q = BigRational::from_str(s.trim()).map_err(|e| CliError::Usage(format!("--lambda {s:?}: {e}")))?;
    if !q.is_positive() {
        return Err(CliError::Usage("--lambda must be positive".into()));
    }
    Ok(q)
}

fn decimal(num: &str, den: &str) -> f64 {
    let q = BigRational::new(num.parse().expect("integer"), den.parse().expect("integer"));
    matchlab::Scalar::from_ratio(&q)
}

fn f(x: f64) -> String {
    format!("{x:.12}")
}

fn engine() -> ExactEngine {
    ExactEngine::default()
}

fn strata_checked(cli: &Cli, shape: &MultipartiteShape, profile: &MatchingProfile) -> Res<StratumTable> {
    let table = engine().strata(shape, profile)?;
    if cli.force_generic {
        let generic = ExactEngine::generic().strata(shape, profile)?;
        if generic.strata != table.strata {
            return Err(CliError::Mismatch(format!("strata {} vs generic {}", table.strata, generic.strata)));
        }
    }
    Ok(table)
}

pub fn execute(cli: &Cli) -> Res<Artifact> {
    match &cli.command {
        Command::Count { host } => count(cli, host),
        Command::Strata { host, m } => strata(cli, host, m),
        Command::Ratios { shape, m, k } => ratios(cli, &shape.shape, m, *k),
        Command::Tv { shape, m, lambda } => tv(cli, &shape.shape, m, lambda.as_deref()),
        Command::Converge { shapes, timing } => converge(cli, shapes, *timing),
        Command::Sample { host, m, samples, method, m_star, burn_in, step_count } => {
            let cfg = SamplerConfig { seed: cli.seed, sample_count: *samples, burn_in: *burn_in, step_count: *step_count };
            sample(host, m, *method, *m_star, &cfg)
        }
        Command::AuditSwitch { host, m, k, mode } => audit_switch(cli, host, m, *k, *mode),
        Command::AuditEdge { host, edge } => audit_edge(cli, host, *edge),
        Command::AuditConcentration { shape, census, samples, constant, m_star } => {
            audit_concentration(cli, &shape.shape, *census, *samples, cli.tolerance.unwrap_or(*constant), *m_star)
        }
        Command::CensusCells { shape, n_scale, far_threshold, allow_regime_violation } => {
            census_cells(&shape.shape, *n_scale, *far_threshold, *allow_regime_violation)
        }
        Command::CheckBound { x, y, random, max_t, max_s } => check_bound(cli, x, y, *random, *max_t, *max_s),
        Command::Oracle { host, m, per_edge } => oracle_cmd(cli, host, m, *per_edge),
    }
}

fn count(cli: &Cli, args: &HostArgs) -> Res<Artifact> {
    let host = load_host(args, cli.seed)?;
    let total: BigUint = match &host {
        AnyHost::Shape(s) => {
            let fast = engine().pm_total(s)?;
            if cli.force_generic {
                let generic = ExactEngine::generic().pm_total(s)?;
                if generic != fast {
                    return Err(CliError::Mismatch(format!("pm {fast} vs generic {generic}")));
                }
            }
            fast
        }
        AnyHost::Graph(_) => oracle::count_pm_with_cap(&host, cap(args))?,
    };
    Ok(Artifact {
        text: total.to_string(),
        result: json!({ "graph": host.describe(), "pm": total.to_string() }),
        table: Some(Table::new(["graph", "pm"], vec![vec![host.describe(), total.to_string()]])),
    })
}

fn strata_table_artifact(table: &StratumTable) -> Artifact {
    let rows = table.strata.as_slice().iter().enumerate().map(|(l, c)| vec![l.to_string(), c.to_string()]).collect();
    Artifact {
        text: table.strata.to_string(),
        result: serde_json::to_value(table).expect("serializable"),
        table: Some(Table::new(["l", "count"], rows)),
    }
}

fn strata(cli: &Cli, args: &HostArgs, m: &MatchingArgs) -> Res<Artifact> {
    let host = load_host(args, cli.seed)?;
    match &host {
        AnyHost::Shape(s) => {
            let (profile, _) = shape_matching(s, m)?;
            Ok(strata_table_artifact(&strata_checked(cli, s, &profile)?))
        }
        AnyHost::Graph(_) => {
            let lm = graph_matching(&host, m, cap(args))?;
            let strata = oracle::strata_oracle_with_cap(&host, &lm, cap(args))?;
            let rows = strata.as_slice().iter().enumerate().map(|(l, c)| vec![l.to_string(), c.to_string()]).collect();
            Ok(Artifact {
                text: strata.to_string(),
                result: json!({ "graph": host.describe(), "matching": lm, "strata": strata }),
                table: Some(Table::new(["l", "count"], rows)),
            })
        }
    }
}

fn ratios(cli: &Cli, shape: &MultipartiteShape, m: &MatchingArgs, k_max: Option<usize>) -> Res<Artifact> {
    let (profile, _) = shape_matching(shape, m)?;
    let table = strata_checked(cli, shape, &profile)?;
    let mut rows = exact::ratio_table(&table.strata, shape.r())?;
    if let Some(k) = k_max {
        rows.truncate(k);
    }
    let tolerance = cli.tolerance;
    let csv: Vec<RatioCsvRow> = rows.iter().map(RatioCsvRow::from).collect();
    let text = csv
        .iter()
        .map(|r| {
            let actual = if r.actual_num == "undefined" { "undefined".to_string() } else { format!("{}/{}", r.actual_num, r.actual_den) };
            let actual = if actual.len() > 40 { format!("{:.9}", decimal(&r.actual_num, &r.actual_den)) } else { actual };
            format!("k={} actual={} predicted={}/{} deviation={}", r.k, actual, r.predicted_num, r.predicted_den, r.deviation)
        })
        .collect::<Vec<_>>()
        .join("\n");
    let json_rows: Vec<Value> = rows
        .iter()
        .zip(&csv)
        .map(|(row, c)| {
            let within = tolerance.map(|t| row.deviation_as::<f64>().is_some_and(|d| d <= t));
            json!({
                "k": row.k,
                "actual": row.actual.as_ref().map(|a| a.to_string()),
                "predicted": row.predicted.to_string(),
                "deviation": row.deviation.as_ref().map(|d| d.to_string()),
                "deviation_decimal": c.deviation,
                "within_tolerance": within,
            })
        })
        .collect();
    let table_rows = csv
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.actual_num.clone(),
                r.actual_den.clone(),
                r.predicted_num.clone(),
                r.predicted_den.clone(),
                r.deviation.clone(),
            ]
        })
        .collect();
    Ok(Artifact {
        text,
        result: json!({ "shape": shape, "profile": profile, "rows": json_rows }),
        table: Some(Table::new(["k", "actual_num", "actual_den", "predicted_num", "predicted_den", "deviation"], table_rows)),
    })
}

fn tv(cli: &Cli, shape: &MultipartiteShape, m: &MatchingArgs, lambda: Option<&str>) -> Res<Artifact> {
    let (profile, _) = shape_matching(shape, m)?;
    let lambda = match lambda {
        Some(s) => parse_lambda(s)?,
        None => limit_lambda(shape.r())?,
    };
    let table = strata_checked(cli, shape, &profile)?;
    let report = tv_exact::<f64>(&table.strata, &lambda)?;
    let p0 = table.strata.p0().map(|p| matchlab::Scalar::from_ratio(&p)).unwrap_or(f64::NAN);
    Ok(Artifact {
        text: format!("tv={:.6} error_bound={:.3e} p0={:.6}", report.tv, report.error_bound, p0),
        result: json!({ "shape": shape, "profile": profile, "lambda": lambda.to_string(), "p0": p0, "report": report }),
        table: Some(Table::new(
            ["shape", "lambda", "p0", "tv", "error_bound"],
            vec![vec![shape.to_string(), lambda.to_string(), f(p0), f(report.tv), format!("{:.3e}", report.error_bound)]],
        )),
    })
}

fn converge(cli: &Cli, shapes: &[MultipartiteShape], timing: bool) -> Res<Artifact> {
    let rows = convergence_table::<f64>(shapes, &engine(), timing);
    if cli.force_generic {
        let generic = convergence_table::<f64>(shapes, &ExactEngine::generic(), false);
        for (a, b) in rows.iter().zip(&generic) {
            if a.p0_exact != b.p0_exact || a.tv != b.tv {
                return Err(CliError::Mismatch(format!("convergence row {} differs from the generic engine", a.shape)));
            }
        }
    }
    let opt = |x: Option<f64>| x.map(f).unwrap_or_default();
    let table_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.shape.clone(),
                r.r.to_string(),
                r.part_size.map(|p| p.to_string()).unwrap_or_default(),
                opt(r.p0_exact),
                opt(r.p0_limit),
                opt(r.tv),
                r.runtime_ms.map(|t| t.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    let text = rows
        .iter()
        .map(|r| match (r.p0_exact, r.p0_limit, r.tv) {
            (Some(p), Some(l), Some(t)) => format!("{} p0={p:.6} limit={l:.6} tv={t:.6}", r.shape),
            _ => format!("{} skipped: {}", r.shape, r.note.as_deref().unwrap_or("")),
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Artifact {
        text,
        result: json!({ "rows": rows }),
        table: Some(Table::new(["shape", "r", "part_size", "p0_exact", "p0_limit", "tv", "runtime_ms"], table_rows)),
    })
}

fn take_star(m: &LabeledMatching, size: usize) -> Res<LabeledMatching> {
    if size > m.len() {
        return Err(CliError::Usage(format!("--m-star {size} exceeds |M| = {}", m.len())));
    }
    Ok(LabeledMatching::from_pairs(m.vertex_count(), m.pairs().take(size))?)
}

fn sample(args: &HostArgs, m: &MatchingArgs, method: SampleMethod, m_star: usize, cfg: &SamplerConfig) -> Res<Artifact> {
    let host = load_host(args, cfg.seed)?;
    let draws = match (&host, method) {
        (AnyHost::Shape(s), SampleMethod::Exact) => sample_uniform_stream(&UniformSampler::new(s)?, cfg)?,
        (AnyHost::Shape(s), SampleMethod::Conditional) => {
            let (_, lm) = shape_matching(s, m)?;
            let sampler = ConditionalSampler::new(s, &lm, &take_star(&lm, m_star)?)?;
            sample_conditional_stream(&sampler, cfg)?
        }
        (_, SampleMethod::Chain) => {
            let start = host_matching(&host, m, usize::MAX)?;
            mcmc_switch_chain(&host, &start, cfg)?
        }
        (AnyHost::Graph(_), _) => return Err(CliError::Usage("general graphs support only --method chain".into())),
    };
    let lm = host_matching(&host, m, usize::MAX)?;

    let (header, rows): (Vec<String>, Vec<Vec<String>>) = match &host {
        AnyHost::Shape(s) => {
            let records: Vec<SampleRecord> =
                draws.iter().enumerate().map(|(i, d)| SampleRecord::new(i, d, &lm, s)).collect::<Result<_, _>>()?;
            let mut header = vec!["sample_index".to_string(), "X".to_string()];
            header.extend((0..s.r()).map(|i| format!("partner_{i}")));
            header.extend(matchlab::model::pairs(s.r()).map(|(i, j)| format!("block_{i}_{j}")));
            let rows = records
                .iter()
                .map(|r| {
                    let mut row = vec![r.sample_index.to_string(), r.overlap.to_string()];
                    row.extend(r.partner_census.iter().map(u64::to_string));
                    row.extend(r.block_census.iter().map(u64::to_string));
                    row
                })
                .collect();
            (header, rows)
        }
        AnyHost::Graph(_) => {
            let rows = draws
                .iter()
                .enumerate()
                .map(|(i, d)| Ok(vec![i.to_string(), d.overlap(&lm)?.to_string()]))
                .collect::<Result<_, matchlab::Error>>()?;
            (vec!["sample_index".into(), "X".into()], rows)
        }
    };
    let xs: Vec<usize> = rows.iter().map(|r| r[1].parse().expect("integer column")).collect();
    let mean = xs.iter().sum::<usize>() as f64 / xs.len() as f64;
    let p0 = xs.iter().filter(|&&x| x == 0).count() as f64 / xs.len() as f64;
    Ok(Artifact {
        text: format!("samples={} mean_X={mean:.6} frac_X0={p0:.6}", xs.len()),
        result: json!({
            "graph": host.describe(),
            "matching": lm,
            "sampler": cfg,
            "mean_overlap": mean,
            "fraction_zero": p0,
            "columns": header,
            "rows": rows,
        }),
        table: Some(Table { header, rows }),
    })
}

fn audit_switch(cli: &Cli, args: &HostArgs, m: &MatchingArgs, k: usize, mode: Option<Mode>) -> Res<Artifact> {
    let host = load_host(args, cli.seed)?;
    let mode = match (mode, &host) {
        (Some(Mode::MinDegree), _) | (None, AnyHost::Graph(_)) => GoodnessMode::MinDegree,
        (Some(Mode::Multipartite), _) | (None, AnyHost::Shape(_)) => GoodnessMode::Multipartite,
    };
    let lm = host_matching(&host, m, cap(args))?;
    let report = handshake_audit(&host, &lm, k, mode)?;
    let mut rows = Vec::new();
    for (side, summary) in [("upper", &report.upper), ("lower", &report.lower)] {
        for (d, c) in &summary.histogram {
            rows.push(vec![side.to_string(), d.to_string(), c.to_string()]);
        }
    }
    Ok(Artifact {
        text: format!(
            "k={} |N_k|={} |N_k-1|={} upper_sum={} lower_sum={} agree={}{}",
            k,
            report.upper.size,
            report.lower.size,
            report.upper.degree_sum,
            report.lower.degree_sum,
            report.sums_agree(),
            if report.vacuous { " vacuous" } else { "" }
        ),
        result: json!({ "matching": lm, "report": report, "sums_agree": report.sums_agree() }),
        table: Some(Table::new(["side", "degree", "count"], rows)),
    })
}

fn audit_edge(cli: &Cli, args: &HostArgs, (u, v): (usize, usize)) -> Res<Artifact> {
    let host = load_host(args, cli.seed)?;
    let report = edge_switch_audit(&host, u, v)?;
    Ok(Artifact {
        text: format!(
            "edge={u},{v} probability={} max_lower_degree={} upper_sum={} lower_sum={} holds={}",
            report.probability,
            report.max_lower_degree,
            report.upper_degree_sum,
            report.lower_degree_sum,
            report.holds()
        ),
        result: json!({ "report": report, "holds": report.holds() }),
        table: Some(Table::new(
            ["u", "v", "containing", "avoiding", "probability", "max_lower_degree", "holds"],
            vec![vec![
                u.to_string(),
                v.to_string(),
                report.containing.to_string(),
                report.avoiding.to_string(),
                report.probability.to_string(),
                report.max_lower_degree.to_string(),
                report.holds().to_string(),
            ]],
        )),
    })
}

fn audit_concentration(cli: &Cli, shape: &MultipartiteShape, census: Census, samples: usize, constant: f64, m_star: usize) -> Res<Artifact> {
    if !shape.is_uniform() {
        return Err(CliError::Usage("concentration audits need equal part sizes".into()));
    }
    let cfg = SamplerConfig::new(cli.seed, samples);
    let (_, lm) = shape_matching(shape, &MatchingArgs::default())?;
    let (kind, rows): (CensusKind, Vec<Vec<u64>>) = match census {
        Census::Block => {
            let draws = sample_uniform_stream(&UniformSampler::new(shape)?, &cfg)?;
            let rows = draws
                .iter()
                .map(|d| matchlab::sampler::block_census(d, shape).map(|v| v.as_slice().to_vec()))
                .collect::<Result<_, _>>()?;
            (CensusKind::Block { part_size: shape.size(0) as u64, r: shape.r() }, rows)
        }
        Census::Partner => {
            let sampler = ConditionalSampler::new(shape, &lm, &take_star(&lm, m_star)?)?;
            let draws = sample_conditional_stream(&sampler, &cfg)?;
            let rows = draws
                .iter()
                .map(|d| matchlab::sampler::partner_part_census(d, &lm, shape))
                .collect::<Result<_, _>>()?;
            (CensusKind::Partner { n: (shape.total() / 2) as u64, r: shape.r() }, rows)
        }
    };
    let report = concentration_summary::<f64>(kind, &rows, constant)?;
    let table_rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| std::iter::once(i.to_string()).chain(r.iter().map(u64::to_string)).collect())
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut header = vec!["sample_index".to_string()];
    header.extend((0..width).map(|i| format!("entry_{i}")));
    Ok(Artifact {
        text: format!(
            "center={:.3} scale={:.3} max_normalized={:.4} within_fraction={:.4} constant={}",
            report.center, report.scale, report.max_normalized, report.within_fraction, report.constant
        ),
        result: json!({ "report": report }),
        table: Some(Table { header, rows: table_rows }),
    })
}

fn census_cells(shape: &MultipartiteShape, n_scale: Option<u64>, far: u64, allow: bool) -> Res<Artifact> {
    let mut cfg = LatticeCellConfig::new(n_scale.unwrap_or(shape.size(0) as u64), shape.r())?;
    cfg.far_threshold = far;
    cfg.enforce_regime = !allow;
    let report = exact::lattice_cell_census(shape, &cfg)?;
    let width = report.cells.first().map_or(0, |c| c.u.len());
    let mut header: Vec<String> = matchlab::model::pairs(shape.r()).map(|(i, j)| format!("u_{i}_{j}")).collect();
    header.truncate(width);
    header.push("points".into());
    let rows = report
        .cells
        .iter()
        .map(|c| c.u.iter().map(i64::to_string).chain(std::iter::once(c.points.to_string())).collect())
        .collect();
    Ok(Artifact {
        text: format!(
            "points={} central={} cells={} all_bounded={} regime_satisfied={}",
            report.lattice_points,
            report.central_points,
            report.cells.len(),
            report.all_cells_bounded,
            report.regime_satisfied
        ),
        result: serde_json::to_value(&report).expect("serializable"),
        table: Some(Table { header, rows }),
    })
}

fn check_bound(cli: &Cli, x: &Option<Vec<u64>>, y: &Option<Vec<u64>>, random: Option<usize>, max_t: usize, max_s: u64) -> Res<Artifact> {
    let instances: Vec<BoundInstance> = match (x, y, random) {
        (Some(x), Some(y), _) => vec![BoundInstance::new(x.clone(), y.clone())?],
        (None, None, Some(n)) => {
            if max_t == 0 || max_s == 0 {
                return Err(CliError::Usage("--max-t and --max-s must be positive".into()));
            }
            let mut rng = stream_rng(cli.seed, 0);
            (0..n).map(|_| random_bound_instance(&mut rng, max_t, max_s)).collect()
        }
        _ => return Err(CliError::Usage("give --x and --y, or --random N".into())),
    };
    let checks: Vec<_> = instances.iter().map(factorial_ratio_bound_check::<f64>).collect();
    let failures: Vec<usize> = checks.iter().enumerate().filter(|(_, c)| !c.pass).map(|(i, _)| i).collect();
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let rows = instances
        .iter()
        .zip(&checks)
        .map(|(i, c)| vec![join(&i.x), join(&i.y), i.c.to_string(), i.k.to_string(), i.delta.to_string(), format!("{:.6e}", c.ratio), format!("{:.6e}", c.bound), c.pass.to_string()])
        .collect();
    let text = if instances.len() == 1 {
        let c = &checks[0];
        format!("ratio={:.6} bound={:.6} pass={}", c.ratio, c.bound, c.pass)
    } else {
        format!("instances={} failures={}", instances.len(), failures.len())
    };
    let detail: Vec<Value> = instances.iter().zip(&checks).map(|(i, c)| json!({ "instance": i, "check": c })).collect();
    let artifact = Artifact {
        text,
        result: json!({ "instances": instances.len(), "failures": failures, "results": detail }),
        table: Some(Table::new(["x", "y", "c", "k", "delta", "ratio", "bound", "pass"], rows)),
    };
    if failures.is_empty() {
        Ok(artifact)
    } else {
        Err(CliError::Defect(Box::new(artifact), format!("{} instance(s) violate the factorial-ratio bound", failures.len())))
    }
}

fn oracle_cmd(cli: &Cli, args: &HostArgs, m: &MatchingArgs, per_edge: bool) -> Res<Artifact> {
    let host = load_host(args, cli.seed)?;
    let lm = if m.perfect_m || m.profile.is_some() { Some(host_matching(&host, m, cap(args))?) } else { None };
    let report = oracle::oracle_report_with_cap(&host, lm.as_ref(), per_edge, cap(args))?;
    let rows = report
        .edge_containment
        .iter()
        .flatten()
        .map(|e| vec![e.edge[0].to_string(), e.edge[1].to_string(), e.count.to_string()])
        .collect();
    Ok(Artifact {
        text: format!("total={} strata={}", report.total, report.strata),
        result: json!({ "matching": lm, "report": report }),
        table: Some(Table::new(["u", "v", "count"], rows)),
    })
}

//! psdprobe: generate benchmark instances, run the PSD testers, sweep
//! parameter grids into CSV, and verify non-PSD certificates.
//!
//! Exit codes: 0 for a PSD verdict (or a successful non-verdict command),
//! 1 for a NotPSD verdict or a rejected certificate, 2 for any error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use core_matrix::exec::{map_trials, ExecMode};
use core_matrix::{read_matrix, write_matrix, Format, IndexSet, QueryOracle, SymmetricMatrix};
use cycle_lab::{enumerate_patterns, verify_cycle_equivalence};
use instance_forge::{
    gen_l2_lb_pair_with_d0, gen_linf_concentrated, gen_linf_lb_pair, gen_random_psd,
    gen_wigner, Label,
};
use l2_tester::{l2_test_with, L2Constants};
use linf_tester::{
    build_schedule, linf_test_with, verify_certificate, warmup_linf_test_with, Certificate,
    Verdict,
};
use spectral_metrics::spectral_summary;

#[derive(Parser)]
#[command(name = "psdprobe", version, about = "sublinear PSD testing toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a benchmark instance and write it with a sidecar metadata line.
    Gen(GenArgs),
    /// Run the spectral-norm-gap tester on a matrix file.
    TestLinf(TestArgs),
    /// Run the negative-mass-gap tester on a matrix file.
    TestL2(TestArgs),
    /// Run a tester grid and emit one CSV row per cell.
    Sweep(SweepArgs),
    /// Check a certificate file against the full matrix.
    Verify(VerifyArgs),
    /// Exhaustively check the cycle-splitting subgraph equivalence.
    CycleVerify(CycleArgs),
    /// Print the spectral summary of a matrix file.
    Spectral(SpectralArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Generator {
    /// Scaled Gram matrix of random sign vectors; always PSD.
    RandomPsd,
    /// One deep negative eigenvalue spread over an alpha-fraction strip.
    LinfConcentrated,
    /// Far side of the negative-band lower-bound pair.
    LinfLbPair,
    /// Random sign matrix with unit diagonal.
    Wigner,
    /// Far side of the shifted-cycle block pair.
    L2LbPair,
}

impl Generator {
    fn name(&self) -> &'static str {
        match self {
            Generator::RandomPsd => "random-psd",
            Generator::LinfConcentrated => "linf-concentrated",
            Generator::LinfLbPair => "linf-lb-pair",
            Generator::Wigner => "wigner",
            Generator::L2LbPair => "l2-lb-pair",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tester {
    Warmup,
    Linf,
    L2,
}

impl std::fmt::Display for Tester {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Tester {
    fn name(&self) -> &'static str {
        match self {
            Tester::Warmup => "warmup",
            Tester::Linf => "linf",
            Tester::L2 => "l2",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    Text,
    Binary,
}

#[derive(Args, Clone)]
struct GenParams {
    /// Matrix dimension.
    #[arg(long)]
    n: usize,
    /// Gram inner dimension for random-psd.
    #[arg(long, default_value_t = 16)]
    d: usize,
    /// Strip fraction for linf-concentrated; defaults to eps.
    #[arg(long)]
    alpha: Option<f64>,
    /// Block count for l2-lb-pair.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Half cycle length for l2-lb-pair; defaults from k.
    #[arg(long)]
    d0: Option<usize>,
}

impl GenParams {
    /// Builds one instance: the matrix plus its certified distance
    /// parameter (0 for PSD instances).
    fn build(&self, gen: Generator, eps: f64, seed: u64) -> Result<(SymmetricMatrix, f64)> {
        match gen {
            Generator::RandomPsd => {
                let inst = gen_random_psd(self.n, self.d, seed)?;
                Ok((inst.matrix, 0.0))
            }
            Generator::LinfConcentrated => {
                let alpha = self.alpha.unwrap_or(eps);
                let inst = gen_linf_concentrated(self.n, eps, alpha, seed)?;
                Ok((inst.matrix, label_eps(&inst.label)))
            }
            Generator::LinfLbPair => {
                let (_, no) = gen_linf_lb_pair(self.n, eps, seed)?;
                Ok((no.matrix, label_eps(&no.label)))
            }
            Generator::Wigner => {
                let inst = gen_wigner(self.n, seed)?;
                Ok((inst.matrix, label_eps(&inst.label)))
            }
            Generator::L2LbPair => {
                let d0 = self.d0.unwrap_or(instance_forge::default_d0(self.k));
                let (_, no) = gen_l2_lb_pair_with_d0(self.n, self.k, d0, seed)?;
                Ok((no.matrix, label_eps(&no.label)))
            }
        }
    }
}

fn label_eps(label: &Label) -> f64 {
    match label {
        Label::Psd => 0.0,
        Label::FarLinf(e) | Label::FarL2(e) => *e,
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    generator: Generator,
    #[command(flatten)]
    params: GenParams,
    /// Distance parameter for far generators.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// For pair generators: write the near (PSD) side instead of the far side.
    #[arg(long, default_value_t = false)]
    yes_side: bool,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FileFormat::Text)]
    format: FileFormat,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the simpler fixed-size warm-up sampler (test-linf only).
    #[arg(long, default_value_t = false)]
    warmup: bool,
    /// JSON overrides for schedule constants.
    #[arg(long)]
    constants: Option<String>,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    generator: Generator,
    #[command(flatten)]
    params: GenParams,
    /// Distance grid, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    /// Testers to run, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![Tester::Linf])]
    testers: Vec<Tester>,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[arg(long)]
    constants: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Args)]
struct CycleArgs {
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    /// Query budget; admitted patterns have matching number below t.
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    max_edges: usize,
}

#[derive(Args)]
struct SpectralArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Also print the full eigenvalue list.
    #[arg(long, default_value_t = false)]
    full: bool,
}

/// Optional overrides for every tunable constant, parsed from one JSON
/// object and recorded verbatim in sweep output.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Overrides {
    c1: Option<f64>,
    c2: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    warmup_k: Option<f64>,
    warmup_reps: Option<f64>,
    ck: Option<f64>,
    ct: Option<f64>,
}

fn parse_constants(raw: &Option<String>) -> Result<L2Constants> {
    let mut c = L2Constants::default();
    if let Some(s) = raw {
        let o: Overrides = serde_json::from_str(s).context("bad --constants JSON")?;
        if let Some(v) = o.c1 {
            c.linf.c1 = v;
        }
        if let Some(v) = o.c2 {
            c.linf.c2 = v;
        }
        if let Some(v) = o.a {
            c.linf.a = v;
        }
        if let Some(v) = o.b {
            c.linf.b = v;
        }
        if let Some(v) = o.warmup_k {
            c.linf.warmup_k = v;
        }
        if let Some(v) = o.warmup_reps {
            c.linf.warmup_reps = v;
        }
        if let Some(v) = o.ck {
            c.ck = v;
        }
        if let Some(v) = o.ct {
            c.ct = v;
        }
    }
    Ok(c)
}

/// One line `CERT n=<n> k=<k> q=<q>`, then the submatrix indices, then the
/// witness coordinates; decimals carry 17 significant digits.
fn format_certificate(n: usize, cert: &Certificate) -> String {
    let idx = cert.submatrix_indices.indices();
    let mut out = format!(
        "CERT n={} k={} q={:.16e}\n",
        n,
        idx.len(),
        cert.quadratic_value
    );
    let ids: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    out.push_str(&ids.join(" "));
    out.push('\n');
    let ws: Vec<String> = cert.witness.iter().map(|w| format!("{:.16e}", w)).collect();
    out.push_str(&ws.join(" "));
    out.push('\n');
    out
}

fn parse_certificate(text: &str) -> Result<(usize, Certificate)> {
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| anyhow!("empty certificate"))?;
    let fields: Vec<&str> = head.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "CERT" {
        bail!("bad certificate header");
    }
    let grab = |f: &str, p: &str| -> Result<String> {
        f.strip_prefix(p)
            .map(str::to_string)
            .ok_or_else(|| anyhow!("expected {}<value> in certificate header", p))
    };
    let n: usize = grab(fields[1], "n=")?.parse()?;
    let k: usize = grab(fields[2], "k=")?.parse()?;
    let q: f64 = grab(fields[3], "q=")?.parse()?;
    let idx_line = lines.next().ok_or_else(|| anyhow!("missing index line"))?;
    let indices: Vec<usize> = idx_line
        .split_whitespace()
        .map(|t| t.parse().context("bad index"))
        .collect::<Result<_>>()?;
    let wit_line = lines.next().ok_or_else(|| anyhow!("missing witness line"))?;
    let witness: Vec<f64> = wit_line
        .split_whitespace()
        .map(|t| t.parse().context("bad witness entry"))
        .collect::<Result<_>>()?;
    if indices.len() != k || witness.len() != k {
        bail!("certificate length mismatch");
    }
    Ok((
        n,
        Certificate {
            submatrix_indices: IndexSet::new(indices)?,
            witness,
            quadratic_value: q,
        },
    ))
}

fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let fmt = match args.format {
        FileFormat::Text => Format::Text,
        FileFormat::Binary => Format::Binary,
    };
    let (matrix, label) = if args.yes_side {
        match args.generator {
            Generator::LinfLbPair => {
                let (yes, _) = gen_linf_lb_pair(args.params.n, args.eps, args.seed)?;
                (yes.matrix, "psd".to_string())
            }
            Generator::L2LbPair => {
                let d0 = args
                    .params
                    .d0
                    .unwrap_or(instance_forge::default_d0(args.params.k));
                let (yes, _) = gen_l2_lb_pair_with_d0(args.params.n, args.params.k, d0, args.seed)?;
                (yes.matrix, "psd".to_string())
            }
            _ => bail!("--yes-side applies only to pair generators"),
        }
    } else {
        let (m, e) = args.params.build(args.generator, args.eps, args.seed)?;
        let label = if e == 0.0 {
            "psd".to_string()
        } else {
            format!("far eps={}", e)
        };
        (m, label)
    };
    write_matrix(&matrix, &args.out, fmt)?;
    let meta_path = sidecar_path(&args.out);
    let mut meta = BufWriter::new(File::create(&meta_path)?);
    writeln!(
        meta,
        "generator={} n={} eps={} d={} alpha={:?} k={} d0={:?} seed={} label={}",
        args.generator.name(),
        args.params.n,
        args.eps,
        args.params.d,
        args.params.alpha,
        args.params.k,
        args.params.d0,
        args.seed,
        label
    )?;
    println!("wrote {} (metadata: {})", args.out.display(), meta_path.display());
    Ok(0)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".meta");
    PathBuf::from(s)
}

fn run_tester(
    tester: Tester,
    matrix: &SymmetricMatrix,
    eps: f64,
    delta: f64,
    seed: u64,
    constants: &L2Constants,
) -> Result<(Verdict, usize)> {
    let mut oracle = QueryOracle::new(matrix);
    let verdict = match tester {
        Tester::Warmup => warmup_linf_test_with(&mut oracle, eps, seed, &constants.linf)?,
        Tester::Linf => linf_test_with(&mut oracle, eps, delta, seed, &constants.linf)?,
        Tester::L2 => l2_test_with(&mut oracle, eps, delta, seed, constants)?,
    };
    Ok((verdict, oracle.query_count()))
}

fn cmd_test(args: &TestArgs, tester: Tester) -> Result<i32> {
    let matrix = read_matrix(&args.matrix)?;
    let constants = parse_constants(&args.constants)?;
    let tester = if args.warmup {
        if tester != Tester::Linf {
            bail!("--warmup applies only to test-linf");
        }
        Tester::Warmup
    } else {
        tester
    };
    let (verdict, queries) = run_tester(tester, &matrix, args.eps, args.delta, args.seed, &constants)?;
    match verdict {
        Verdict::Psd => {
            println!("verdict=PSD queries={}", queries);
            Ok(0)
        }
        Verdict::NotPsd(cert) => {
            if !verify_certificate(&matrix, &cert) {
                bail!("tester emitted a certificate that fails verification");
            }
            println!("verdict=NOTPSD queries={}", queries);
            let text = format_certificate(matrix.n(), &cert);
            match &args.out {
                Some(p) => {
                    std::fs::write(p, text)?;
                    println!("certificate written to {}", p.display());
                }
                None => print!("{}", text),
            }
            Ok(1)
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let matrix = read_matrix(&args.matrix)?;
    let text = std::fs::read_to_string(&args.cert)?;
    let (n, cert) = parse_certificate(&text)?;
    if n != matrix.n() {
        bail!("certificate is for n={}, matrix has n={}", n, matrix.n());
    }
    if verify_certificate(&matrix, &cert) {
        println!("certificate accepted: quadratic value {:.16e}", cert.quadratic_value);
        Ok(0)
    } else {
        println!("certificate rejected");
        Ok(1)
    }
}

fn cmd_spectral(args: &SpectralArgs) -> Result<i32> {
    let matrix = read_matrix(&args.matrix)?;
    let s = spectral_summary(&matrix)?;
    println!("n={}", matrix.n());
    println!("trace={}", s.trace);
    println!("frobenius_sq={}", s.frobenius_sq);
    println!("negative_mass={}", s.negative_mass);
    println!("spectral_psd_distance={}", s.spectral_psd_distance);
    println!("lambda_min={}", s.eigenvalues[0]);
    println!("lambda_max={}", s.eigenvalues[s.eigenvalues.len() - 1]);
    if args.full {
        let all: Vec<String> = s.eigenvalues.iter().map(|v| v.to_string()).collect();
        println!("eigenvalues={}", all.join(" "));
    }
    Ok(0)
}

fn cmd_cycle_verify(args: &CycleArgs) -> Result<i32> {
    if args.t == 0 {
        bail!("t must be positive");
    }
    let patterns = enumerate_patterns(args.max_edges, args.t - 1);
    let report = verify_cycle_equivalence(args.n1, args.n2, args.t, &patterns)?;
    println!(
        "n1={} n2={} t={} patterns={}",
        report.n1,
        report.n2,
        report.t,
        report.patterns.len()
    );
    for p in &report.patterns {
        println!(
            "edges={} matching={} single={} split={} equal={} phi_closed={}",
            p.edges,
            p.matching_number,
            p.count_single_cycle,
            p.count_two_cycles,
            p.counts_equal,
            p.phi_closed
        );
    }
    if report.all_pass() {
        println!("all patterns pass");
        Ok(0)
    } else {
        println!("FAILED");
        Ok(1)
    }
}

struct SweepRow {
    eps: f64,
    eps_true_mean: f64,
    tester: Tester,
    trials: usize,
    detections: usize,
    mean_queries: f64,
    p95_queries: usize,
}

fn run_cell(
    args: &SweepArgs,
    tester: Tester,
    eps: f64,
    constants: &L2Constants,
) -> Result<SweepRow> {
    let results = map_trials(ExecMode::default_mode(), args.trials, |t| {
        let seed = args.seed_base + t as u64;
        let (matrix, eps_true) = args.params.build(args.generator, eps, seed)?;
        let (verdict, queries) = run_tester(tester, &matrix, eps, args.delta, seed, constants)?;
        let detected = match &verdict {
            Verdict::Psd => false,
            Verdict::NotPsd(cert) => {
                if !verify_certificate(&matrix, cert) {
                    bail!("unsound certificate at seed {}", seed);
                }
                true
            }
        };
        Ok::<(bool, usize, f64), anyhow::Error>((detected, queries, eps_true))
    });
    let mut detections = 0usize;
    let mut queries = Vec::with_capacity(args.trials);
    let mut eps_true_sum = 0.0;
    for r in results {
        let (d, q, e) = r?;
        detections += usize::from(d);
        queries.push(q);
        eps_true_sum += e;
    }
    queries.sort_unstable();
    let mean_queries = queries.iter().sum::<usize>() as f64 / args.trials as f64;
    let p95_queries = queries[((args.trials as f64 * 0.95).ceil() as usize).max(1) - 1];
    Ok(SweepRow {
        eps,
        eps_true_mean: eps_true_sum / args.trials as f64,
        tester,
        trials: args.trials,
        detections,
        mean_queries,
        p95_queries,
    })
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    if args.eps.is_empty() || args.testers.is_empty() {
        bail!("eps and tester grids must be nonempty");
    }
    let constants = parse_constants(&args.constants)?;
    let constants_json = args.constants.clone().unwrap_or_else(|| "{}".to_string());
    let mut rows = Vec::new();
    for &tester in &args.testers {
        for &eps in &args.eps {
            rows.push(run_cell(args, tester, eps, &constants)?);
        }
    }
    // budget sanity on the main tester rows
    for row in &rows {
        if row.tester == Tester::Linf {
            let sched = build_schedule(args.params.n, row.eps, args.delta, &constants.linf)?;
            if row.mean_queries > sched.total_query_budget as f64 {
                bail!("mean queries exceed the schedule budget at eps={}", row.eps);
            }
        }
    }
    let mut w = BufWriter::new(File::create(&args.out)?);
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    writeln!(w, "# psdprobe sweep at unix time {}", stamp)?;
    writeln!(
        w,
        "generator,n,eps_param,eps_true,tester,trials,detections,detection_rate,mean_queries,p95_queries,seed_base,constants_json"
    )?;
    for row in &rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            args.generator.name(),
            args.params.n,
            row.eps,
            row.eps_true_mean,
            row.tester.name(),
            row.trials,
            row.detections,
            row.detections as f64 / row.trials as f64,
            row.mean_queries,
            row.p95_queries,
            args.seed_base,
            csv_field(&constants_json)
        )?;
    }
    w.flush()?;
    println!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(0)
}

/// PSDPROBE_THREADS caps the worker pool before any parallel work starts.
fn init_threads() -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("PSDPROBE_THREADS") {
        let t: usize = v.parse().context("PSDPROBE_THREADS must be an integer")?;
        if t == 0 {
            bail!("PSDPROBE_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("thread pool already initialized")?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32> {
    init_threads()?;
    match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::TestLinf(a) => cmd_test(a, Tester::Linf),
        Cmd::TestL2(a) => cmd_test(a, Tester::L2),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::CycleVerify(a) => cmd_cycle_verify(a),
        Cmd::Spectral(a) => cmd_spectral(a),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            std::process::exit(2);
        }
    }
}

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use zexp::arithmetic::{MangoldtTable, SieveConfig};
use zexp::emit::{emit_series, Range, Series};
use zexp::report::{fmt_f64, reports_to_csv, to_json, VerificationReport};
use zexp::suites::{run_suite, Suite, SuiteInputs, SuiteParams};
use zexp::zeros::{parse_zero_file, ZeroCatalog};

const DEFAULT_N_MAX: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "zexp", version, about = "Explicit-formula verification: sieve, verify, emit")]
struct Cli {
    /// key=value config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// report format
    #[arg(long, global = true, value_enum)]
    emit: Option<Format>,
    /// write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sieve Λ(n) up to n_max and write the binary cache
    Sieve(DataArgs),
    /// Run a verification suite: identities, lemma, guinand, delta-tilde, system, kx, transform, density, all
    Verify {
        suite: String,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Emit plot data: S, S1, N, delta, delta-tilde, g-trace, guinand-sweep, residuals
    Emit {
        series: String,
        /// lo:hi:step
        #[arg(long)]
        range: Option<String>,
        #[command(flatten)]
        data: DataArgs,
    },
}

#[derive(Args, Debug, Default, Clone)]
struct DataArgs {
    /// von Mangoldt cache file
    #[arg(long)]
    table: Option<PathBuf>,
    /// zero ordinate file
    #[arg(long)]
    zeros: Option<PathBuf>,
    #[arg(long = "n-max")]
    n_max: Option<String>,
    /// height(s), comma separated
    #[arg(long = "T")]
    t: Option<String>,
    /// cutoff(s), comma separated
    #[arg(long = "X")]
    x: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long = "t-max")]
    t_max: Option<String>,
    #[arg(long)]
    tol: Option<String>,
}

/// Flags merged over the config file.
struct Settings {
    values: HashMap<String, String>,
}

impl Settings {
    fn new(file: Option<&Path>, cli: &Cli, data: &DataArgs) -> Result<Self> {
        let mut values = HashMap::new();
        if let Some(path) = file {
            let text = fs::read_to_string(path).with_context(|| format!("reading --config {}", path.display()))?;
            values = parse_config(&text).with_context(|| format!("in --config {}", path.display()))?;
        }
        let mut set = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                values.insert(k.to_string(), v);
            }
        };
        set("table", data.table.as_ref().map(|p| p.display().to_string()));
        set("zeros", data.zeros.as_ref().map(|p| p.display().to_string()));
        set("n_max", data.n_max.clone());
        set("T", data.t.clone());
        set("X", data.x.clone());
        set("eps", data.eps.clone());
        set("a", data.a.clone());
        set("t_max", data.t_max.clone());
        set("tol", data.tol.clone());
        set("threads", cli.threads.map(|t| t.to_string()));
        set("out", cli.out.as_ref().map(|p| p.display().to_string()));
        set(
            "emit",
            cli.emit.map(|f| match f {
                Format::Human => "human".into(),
                Format::Csv => "csv".into(),
                Format::Json => "json".into(),
            }),
        );
        Ok(Settings { values })
    }

    fn get(&self, k: &str) -> Option<&str> {
        self.values.get(k).map(|s| s.as_str())
    }

    fn float(&self, k: &str) -> Result<Option<f64>> {
        self.get(k).map(|v| parse_float(v).with_context(|| format!("--{k}"))).transpose()
    }

    fn list(&self, k: &str) -> Result<Option<Vec<f64>>> {
        self.get(k)
            .map(|v| v.split(',').map(|p| parse_float(p.trim()).with_context(|| format!("--{k}"))).collect())
            .transpose()
    }

    fn n_max(&self) -> Result<Option<u64>> {
        Ok(self.float("n_max")?.map(|v| v as u64))
    }

    fn format(&self) -> Result<Format> {
        match self.get("emit").unwrap_or("human") {
            "human" => Ok(Format::Human),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("--emit must be human, csv or json, got '{other}'"),
        }
    }

    fn params(&self) -> Result<SuiteParams> {
        Ok(SuiteParams {
            t: self.list("T")?,
            x: self.list("X")?,
            eps: self.list("eps")?,
            a: self.float("a")?,
            t_max: self.float("t_max")?,
            tol: self.float("tol")?,
        })
    }
}

fn parse_float(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| anyhow!("'{s}' is not a number"))
}

/// Flat `key = value` lines; `#` starts a comment. Keys may use `-` or `_`.
fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key=value", i + 1))?;
        let k = k.trim().trim_start_matches("--").replace('-', "_");
        let k = match k.as_str() {
            "t" => "T".to_string(),
            "x" => "X".to_string(),
            _ => k,
        };
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

fn cache_dir_path(n: u64) -> Option<PathBuf> {
    std::env::var_os("ZEXP_CACHE_DIR").map(|d| PathBuf::from(d).join(format!("mangoldt-{n}.zexp")))
}

fn load_table(settings: &Settings) -> Result<MangoldtTable> {
    let cfg = SieveConfig::default();
    let n = settings.n_max()?;
    match (settings.get("table"), n) {
        (Some(p), None) => {
            MangoldtTable::read_cache(Path::new(p)).with_context(|| format!("reading --table {p} (pass --n-max to build it)"))
        }
        (Some(p), Some(n)) => Ok(MangoldtTable::load_or_build(Path::new(p), n, &cfg)?),
        (None, n) => {
            let n = n.unwrap_or(DEFAULT_N_MAX);
            match cache_dir_path(n) {
                Some(path) => Ok(MangoldtTable::load_or_build(&path, n, &cfg)?),
                None => Ok(zexp::arithmetic::build_table_with(n, &cfg)?),
            }
        }
    }
}

fn load_zeros(settings: &Settings) -> Result<ZeroCatalog> {
    let p = settings.get("zeros").ok_or_else(|| anyhow!("this command needs a zero catalog: pass --zeros PATH"))?;
    let f = fs::File::open(p).with_context(|| format!("cannot open --zeros {p}"))?;
    parse_zero_file(f).with_context(|| format!("parsing --zeros {p}"))
}

fn write_output(settings: &Settings, text: &str) -> Result<()> {
    match settings.get("out") {
        Some(p) => fs::write(p, text).with_context(|| format!("writing --out {p}")),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn format_reports(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Csv => reports_to_csv(reports),
        Format::Json => to_json(reports) + "\n",
        Format::Human => {
            let mut s = String::new();
            for r in reports {
                s.push_str(&r.human());
                s.push('\n');
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            s.push_str(&format!("{} reports, {} passed, {} failed\n", reports.len(), reports.len() - failed, failed));
            s
        }
    }
}

fn setup_threads(settings: &Settings) -> Result<()> {
    if let Some(t) = settings.get("threads") {
        let n: usize = t.parse().map_err(|_| anyhow!("--threads must be a positive integer, got '{t}'"))?;
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let data = match &cli.cmd {
        Cmd::Sieve(d) | Cmd::Verify { data: d, .. } | Cmd::Emit { data: d, .. } => d.clone(),
    };
    let settings = Settings::new(cli.config.as_deref(), &cli, &data)?;
    setup_threads(&settings)?;
    match &cli.cmd {
        Cmd::Sieve(_) => {
            let n = settings.n_max()?.ok_or_else(|| anyhow!("sieve needs --n-max"))?;
            if n < 2 {
                bail!("--n-max must be at least 2, got {n}");
            }
            let path = match settings.get("table") {
                Some(p) => PathBuf::from(p),
                None => cache_dir_path(n).ok_or_else(|| anyhow!("no cache path: pass --table PATH or set ZEXP_CACHE_DIR"))?,
            };
            let table = zexp::arithmetic::build_table(n)?;
            table.write_cache(&path).with_context(|| format!("writing {}", path.display()))?;
            let psi = table.psi(n as f64)?;
            write_output(
                &settings,
                &format!("n_max={n} psi={} checksum={:016x} cache={}\n", fmt_f64(psi), table.checksum(), path.display()),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { suite, .. } => {
            let suite: Suite = suite.parse()?;
            let format = settings.format()?;
            // Validate cheap inputs before the sieve.
            let catalog = if suite.needs_zeros() { Some(load_zeros(&settings)?) } else { None };
            let table = if suite.needs_table() { Some(load_table(&settings)?) } else { None };
            let inputs = SuiteInputs { table: table.as_ref(), catalog: catalog.as_ref(), params: settings.params()? };
            let reports = run_suite(suite, &inputs)?;
            write_output(&settings, &format_reports(&reports, format))?;
            Ok(if reports.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Emit { series, range, .. } => {
            let series: Series = series.parse()?;
            let range: Option<Range> = range.as_deref().map(str::parse).transpose()?;
            let catalog = if series.needs_zeros() { Some(load_zeros(&settings)?) } else { None };
            let table = if series.needs_table() { Some(load_table(&settings)?) } else { None };
            let inputs = SuiteInputs { table: table.as_ref(), catalog: catalog.as_ref(), params: settings.params()? };
            write_output(&settings, &emit_series(series, range, &inputs)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

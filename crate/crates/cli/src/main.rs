//! `appellkit` command line: coefficient tables, verification suites,
//! kernel and transform evaluation.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, I/O or domain error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use appellkit::appell::{ck_table, tjk_table};
use appellkit::fueter_map::{
    b_from_c, transport_table, transport_table_csv, transport_table_markdown,
};
use appellkit::quadrature::QuadratureRule;
use appellkit::scalar::format_rational;
use appellkit::spaces::{kernel_eval, kernel_grid_csv, WeightSequence};
use appellkit::transforms::{
    bargmann_bf, bargmann_bf_quadrature, coefficients_to_json, parse_coefficients, L2Function,
};
use appellkit::verify::{run_suite, GammaFault, OutputFormat, RunConfig, Suite};
use appellkit::{Error, Quaternion, QuaternionFloat};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "appellkit",
    version,
    about = "Clifford-Appell polynomials, quaternionic kernels and transforms"
)]
struct Cli {
    /// JSON run configuration; unset keys keep their defaults.
    #[arg(long, global = true, env = "APPELLKIT_CONFIG")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write T^k_j, c_k and per-weight c_k / b_k tables as CSV with exact rationals.
    Tables {
        #[arg(long, default_value_t = 16)]
        kmax: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run identity suites and print a report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Overrides the configured degree cap.
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        format: Option<OutputFormat>,
        /// Replace γ_1 in the weighted-shift check (negative control).
        #[arg(long, value_name = "GAMMA_1", num_args = 0..=1, default_missing_value = "0.9")]
        inject_gamma_fault: Option<f64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a reproducing kernel at one pair or on a real grid.
    Kernel {
        #[arg(long)]
        space: String,
        /// `x0,x1,x2,x3` or a single real number.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Real grid `lo:hi:n`; every (x, y) pair is evaluated, CSV output.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["q", "p"])]
        grid: Option<String>,
        /// Truncation degree of the kernel series.
        #[arg(long, default_value_t = 60)]
        kmax: usize,
    },
    /// Map Hermite coefficients (JSON array of 4-tuples) to Appell coefficients.
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Coefficient)]
        mode: Mode,
        /// Truncation of the output; defaults to the input length minus one.
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Print the transported-weight table for the named spaces.
    TransportTable {
        #[arg(long, value_enum, default_value_t = TableFormat::Md)]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Coefficient,
    Quadrature,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
    Json,
}

const TABLE_KMAX_LIMIT: usize = 64;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let mut config = load_config(&cli)?;
    match cli.command {
        Command::Tables { kmax, out } => {
            tables(kmax, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            kmax,
            format,
            inject_gamma_fault,
            output,
        } => {
            if let Some(n) = kmax {
                config.degree_cap = n;
            }
            if let Some(f) = format {
                config.format = f;
            }
            let fault = inject_gamma_fault.map(|gamma_1| GammaFault { gamma_1 });
            let report = run_suite(suite, &config, fault)?;
            let text = report.render(config.format);
            match output {
                Some(path) => write_file(&path, &text)?,
                None => println!("{text}"),
            }
            for r in report.failures() {
                eprintln!("FAIL {}: max defect {:e}", r.identity, r.max_defect);
            }
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Kernel {
            space,
            q,
            p,
            grid,
            kmax,
        } => {
            let weight = WeightSequence::named(&space)?;
            match (grid, q, p) {
                (Some(spec), _, _) => {
                    print!("{}", kernel_grid_csv(&weight, &grid_pairs(&spec)?, kmax)?)
                }
                (None, Some(q), Some(p)) => {
                    let (q, p) = (parse_quaternion(&q)?, parse_quaternion(&p)?);
                    let (value, tail) = kernel_eval(&weight, &q, &p, kmax)?;
                    let out = serde_json::json!({
                        "space": weight.name(),
                        "q": q,
                        "p": p,
                        "kmax": kmax,
                        "value": value,
                        "tail_bound": tail,
                    });
                    println!("{out}");
                }
                _ => return Err(Error::Parse("kernel needs --q and --p, or --grid".into())),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform {
            input,
            output,
            mode,
            kmax,
        } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
            let phi = L2Function::new(parse_coefficients(&text)?);
            let kmax = kmax.unwrap_or(phi.coeffs.len().saturating_sub(1));
            let image = match mode {
                Mode::Coefficient => bargmann_bf(&phi, kmax),
                Mode::Quadrature => bargmann_bf_quadrature(
                    &phi,
                    kmax,
                    &QuadratureRule::gauss_hermite(config.hermite_nodes),
                ),
            };
            write_file(&output, &coefficients_to_json(image.coeffs()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::TransportTable { format } => {
            let rows = transport_table();
            match format {
                TableFormat::Md => print!("{}", transport_table_markdown(&rows)),
                TableFormat::Csv => print!("{}", transport_table_csv(&rows)),
                TableFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&rows).expect("rows serialize")
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn tables(kmax: usize, out: &Path) -> Result<(), Error> {
    if kmax > TABLE_KMAX_LIMIT {
        return Err(Error::Domain(format!(
            "kmax {kmax} exceeds {TABLE_KMAX_LIMIT}"
        )));
    }
    fs::create_dir_all(out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;

    let mut tjk = String::from("k,j,T\n");
    for (k, j, t) in tjk_table(kmax) {
        tjk.push_str(&format!("{k},{j},{}\n", format_rational(&t)));
    }
    let mut ck = String::from("k,c\n");
    for (k, c) in ck_table(kmax) {
        ck.push_str(&format!("{k},{}\n", format_rational(&c)));
    }
    let weights = WeightSequence::named_weights();
    let transported: Vec<WeightSequence> = weights.iter().map(b_from_c).collect();
    let mut header = vec!["k".to_string()];
    for w in &weights {
        header.push(format!("{}_c", w.name()));
        header.push(format!("{}_b", w.name()));
    }
    let mut wt = header.join(",") + "\n";
    for k in 0..=kmax {
        let mut row = vec![k.to_string()];
        for (c, b) in weights.iter().zip(&transported) {
            row.push(format_rational(&c.value(k)));
            row.push(format_rational(&b.value(k)));
        }
        wt.push_str(&(row.join(",") + "\n"));
    }
    write_file(&out.join("tjk.csv"), &tjk)?;
    write_file(&out.join("ck.csv"), &ck)?;
    write_file(&out.join("weights.csv"), &wt)?;
    Ok(())
}

fn parse_quaternion(s: &str) -> Result<QuaternionFloat, Error> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a quaternion: {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x0] => Ok(QuaternionFloat::from_real(x0)),
        [x0, x1, x2, x3] => Ok(Quaternion::new(x0, x1, x2, x3)),
        _ => Err(Error::Parse(format!("expected 1 or 4 components in {s:?}"))),
    }
}

fn grid_pairs(spec: &str) -> Result<Vec<(QuaternionFloat, QuaternionFloat)>, Error> {
    let bad = || Error::Parse(format!("grid must be lo:hi:n, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    let at = |i: usize| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    Ok((0..n)
        .flat_map(|a| {
            (0..n).map(move |b| {
                (
                    QuaternionFloat::from_real(at(a)),
                    QuaternionFloat::from_real(at(b)),
                )
            })
        })
        .collect())
}

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use nippaudit_core::arith::{bad_primes, fmt_rational};
use nippaudit_core::audit::{
    best_hasse_convention, emit_report, reproduce_table1, run_audit, AuditOptions, Check, ReportFormat,
};
use nippaudit_core::autmass::{aut_order, local_density, mass_from_aut, nipp_density, siegel_mass, siegel_mass_of_form};
use nippaudit_core::ingest::{
    emit_normalized, join_tables, parse_appendix, parse_main_table, read_normalized, FormatDescriptor, RawDataset,
};
use nippaudit_core::jordan::{jordan_split, to_splitting_expr};
use nippaudit_core::model::{compute_level, discriminant_of, hasse_symbol_of_form, HasseConvention};
use nippaudit_core::symbol::{genus_symbol, local_symbol, LocalSymbol};
use nippaudit_core::QuadForm;

#[derive(Parser)]
#[command(name = "nippaudit", version, about = "Verify tables of positive definite quaternary quadratic forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum HasseChoice {
    StrictPairs,
    WithDiagonal,
    /// whichever convention matches more tabulated signs
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Parse raw tables into a normalized dataset.
    Ingest {
        #[arg(long = "main", required = true, num_args = 1..)]
        main: Vec<PathBuf>,
        #[arg(long = "appendix", num_args = 1..)]
        appendix: Vec<PathBuf>,
        /// line layout (TOML); defaults to the bundled plain layout
        #[arg(long)]
        descriptor: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute every tabulated quantity and report disagreements.
    Audit {
        #[arg(long)]
        dataset: PathBuf,
        /// comma separated subset of membership,splittings,densities,columns,mass
        #[arg(long, default_value = "membership,splittings,densities,columns,mass")]
        checks: String,
        #[arg(long)]
        disc_min: Option<u64>,
        #[arg(long)]
        disc_max: Option<u64>,
        #[arg(long, value_enum, default_value = "strict-pairs")]
        hasse: HasseChoice,
        #[arg(long)]
        threads: Option<usize>,
        /// machine-readable report
        #[arg(long)]
        out: PathBuf,
        /// plain-text report
        #[arg(long)]
        human: Option<PathBuf>,
    },
    /// List the genera whose appendix density or splitting is wrong.
    Table1 {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Genus symbol of a form, or its local symbol and splitting at one prime.
    Symbol {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: QuadForm,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Local density at a prime.
    Density {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: QuadForm,
        #[arg(long)]
        p: u64,
        /// print the value in the appendix normalization
        #[arg(long)]
        nipp_normalized: bool,
    },
    /// Order of the automorphism group.
    Aut {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: QuadForm,
    },
    /// Mass of a tabulated genus (or of the genus of one form).
    Mass {
        #[arg(long, requires = "id")]
        d: Option<u64>,
        #[arg(long, requires = "d")]
        id: Option<u32>,
        #[arg(long, requires = "d")]
        dataset: Option<PathBuf>,
        #[arg(long, value_parser = parse_coeffs, conflicts_with = "d")]
        coeffs: Option<QuadForm>,
    },
}

/// `1,1,11,11,1,0,0,1,0,8`, optionally in brackets.
fn parse_coeffs(s: &str) -> std::result::Result<QuadForm, String> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let v: Vec<i64> = t
        .split([',', ' '])
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| format!("bad coefficient {x:?}")))
        .collect::<std::result::Result<_, _>>()?;
    let c: [i64; 10] = v
        .try_into()
        .map_err(|v: Vec<i64>| format!("{} coefficients, expected 10", v.len()))?;
    Ok(QuadForm::new(c))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_dataset(path: &Path) -> Result<RawDataset> {
    read_normalized(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn ingest(main: &[PathBuf], appendix: &[PathBuf], descriptor: Option<&Path>, out: &Path) -> Result<()> {
    let desc = match descriptor {
        Some(p) => FormatDescriptor::load(p)?,
        None => FormatDescriptor::plain(),
    };
    let mains = main
        .iter()
        .map(|p| Ok(parse_main_table(&read(p)?, &file_name(p), &desc)?))
        .collect::<Result<Vec<_>>>()?;
    let apps = appendix
        .iter()
        .map(|p| Ok(parse_appendix(&read(p)?, &file_name(p), &desc)?))
        .collect::<Result<Vec<_>>>()?;
    let ds = join_tables(mains, apps)?;
    for w in &ds.warnings {
        eprintln!("warning: {w}");
    }
    write(out, &emit_normalized(&ds))?;
    eprintln!("{} genera written to {}", ds.genera.len(), out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn audit(
    dataset: &Path,
    checks: &str,
    disc_min: Option<u64>,
    disc_max: Option<u64>,
    hasse: HasseChoice,
    threads: Option<usize>,
    out: &Path,
    human: Option<&Path>,
) -> Result<bool> {
    let mut ds = load_dataset(dataset)?;
    if disc_min.is_some() || disc_max.is_some() {
        ds = ds.restricted(disc_min.unwrap_or(0), disc_max.unwrap_or(u64::MAX));
    }
    let hasse_convention = match hasse {
        HasseChoice::StrictPairs => HasseConvention::StrictPairs,
        HasseChoice::WithDiagonal => HasseConvention::WithDiagonal,
        HasseChoice::Auto => best_hasse_convention(&ds),
    };
    let checks: BTreeSet<Check> = Check::parse_list(checks)?;
    if checks.is_empty() {
        bail!("no checks selected");
    }
    let opts = AuditOptions {
        checks,
        hasse_convention,
        threads,
    };
    let report = run_audit(&ds, &opts)?;
    write(out, &emit_report(&report, ReportFormat::Machine))?;
    if let Some(h) = human {
        write(h, &emit_report(&report, ReportFormat::Human))?;
    }
    eprintln!("{} genera, {} findings", report.genera, report.findings.len());
    Ok(report.findings.is_empty())
}

fn table1(dataset: &Path) -> Result<()> {
    let ds = load_dataset(dataset)?;
    let opts = AuditOptions {
        checks: [Check::Splittings, Check::Densities].into_iter().collect(),
        ..AuditOptions::default()
    };
    for (d, id) in reproduce_table1(&run_audit(&ds, &opts)?) {
        println!("{d}#{id}");
    }
    Ok(())
}

fn symbol(form: &QuadForm, p: Option<u64>) -> Result<()> {
    let d = discriminant_of(form)?;
    match p {
        Some(p) => {
            let sym = local_symbol(&form.gram(), p)?;
            println!("symbol     {sym}");
            println!("splitting  {}", to_splitting_expr(&jordan_split(&form.gram(), p)?)?);
            if let LocalSymbol::Two(c) = &sym {
                let rep = c.representative();
                println!("canonical  {}", to_splitting_expr(&jordan_split(&rep, 2)?)?);
            }
        }
        None => {
            println!("{}", genus_symbol(form)?);
            println!("level {}", compute_level(form)?);
            for p in bad_primes(d) {
                let h = hasse_symbol_of_form(form, p, HasseConvention::StrictPairs)?;
                println!("hasse p={p}: {h:+}");
            }
        }
    }
    Ok(())
}

fn mass(d: Option<u64>, id: Option<u32>, dataset: Option<&Path>, coeffs: Option<&QuadForm>) -> Result<()> {
    if let Some(f) = coeffs {
        println!("siegel {}", fmt_rational(&siegel_mass_of_form(f)?));
        return Ok(());
    }
    let (Some(d), Some(id)) = (d, id) else {
        bail!("give --d and --id with --dataset, or --coeffs");
    };
    let Some(path) = dataset else {
        bail!("--dataset is required with --d/--id");
    };
    let ds = load_dataset(path)?;
    let g = ds
        .genera
        .iter()
        .find(|g| g.discriminant == d && g.genus_id == id)
        .with_context(|| format!("no genus {d}#{id} in {}", path.display()))?;
    println!("table  {}", fmt_rational(&g.mass));
    println!("aut    {}", fmt_rational(&mass_from_aut(g)?.value));
    println!("siegel {}", fmt_rational(&siegel_mass(g)?.value));
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ingest {
            main,
            appendix,
            descriptor,
            out,
        } => ingest(&main, &appendix, descriptor.as_deref(), &out)?,
        Command::Audit {
            dataset,
            checks,
            disc_min,
            disc_max,
            hasse,
            threads,
            out,
            human,
        } => {
            let clean = audit(&dataset, &checks, disc_min, disc_max, hasse, threads, &out, human.as_deref())?;
            return Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
        Command::Table1 { dataset } => table1(&dataset)?,
        Command::Symbol { coeffs, p } => symbol(&coeffs, p)?,
        Command::Density {
            coeffs,
            p,
            nipp_normalized,
        } => {
            let v = if nipp_normalized {
                nipp_density(&coeffs, p)?
            } else {
                local_density(&coeffs, p)?
            };
            println!("{}", fmt_rational(&v));
        }
        Command::Aut { coeffs } => println!("{}", aut_order(&coeffs)?),
        Command::Mass {
            d,
            id,
            dataset,
            coeffs,
        } => mass(d, id, dataset.as_deref(), coeffs.as_ref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // 2 is reserved for "findings"
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

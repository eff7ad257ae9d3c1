use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cusp_certify::{kodaira_lower_bound, Certifier, Level};
use cusp_quotsing::{quot_asymptotic_constant, quot_defect_sequence};
use cusp_toolkit::fixtures::{fixtures_dir, load_field};
use cusp_toolkit::level::parse_level;
use cusp_toolkit::report::{analyze, level_cusps, parse_group, render_table, to_structured, AnalyzeOptions, CertificateSection};
use cusp_toolkit::tables::{parse_quot_type, reproduce, TABLE_IDS};

#[derive(Parser)]
#[command(name = "cusp-toolkit", version, about = "Cusp and quotient-singularity defects of Hilbert modular threefolds")]
struct Cli {
    /// Directory holding fields/ and tables/ (default: CUSP_TOOLKIT_FIXTURES or the shipped fixtures).
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// Worker threads (overrides CUSP_TOOLKIT_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run cone, reducers, defect polyhedra, constants and certificates for one field.
    Analyze {
        /// Spec file or fixture name (disc-473, 473, sqrt14).
        spec: String,
        #[command(flatten)]
        opts: PipelineArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Recompute a published table and diff it against the expected values.
    Reproduce {
        /// 1-6 or quotsing.
        table: String,
    },
    /// Write the structured report for one field.
    Export {
        spec: String,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        opts: PipelineArgs,
    },
    /// Defects of a cyclic quotient singularity, e.g. "1,3,2;7".
    Quotsing {
        #[arg(value_name = "TYPE")]
        ty: String,
        #[arg(long, default_value_t = 10)]
        terms: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print certificates only.
    Certify {
        spec: String,
        #[command(flatten)]
        opts: PipelineArgs,
        /// Ingested dimensions as weight:dim (switches to the weight criterion).
        #[arg(long, value_delimiter = ',')]
        dims: Vec<String>,
        /// Summed defects as weight:value, one per --dims entry.
        #[arg(long, value_delimiter = ',')]
        defects: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args, Clone)]
struct PipelineArgs {
    /// principal, nonprincipal, or a genus index.
    #[arg(long, default_value = "principal")]
    genus: String,
    /// Level ideal: (1), an integer, p<N>[.i] for a prime of norm N, with ^e and *.
    #[arg(long)]
    level: Option<String>,
    /// Also compute delta(1..=N).
    #[arg(long)]
    upto_q: Option<u32>,
    /// gl2plus or sl2.
    #[arg(long, default_value = "gl2plus")]
    group: String,
    /// Explicit cusp as modulus[:unit index]; repeat per cusp.
    #[arg(long = "cusp")]
    cusps: Vec<String>,
    /// Include vertex lists of every defect polytope.
    #[arg(long)]
    dump_polytopes: bool,
}

impl PipelineArgs {
    fn options(&self) -> Result<AnalyzeOptions> {
        Ok(AnalyzeOptions {
            genus: self.genus.clone(),
            level: self.level.clone(),
            upto_q: self.upto_q,
            group: parse_group(&self.group)?,
            cusps: self.cusps.clone(),
            dump_polytopes: self.dump_polytopes,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Structured,
}

fn pair(s: &str) -> Result<(u32, u64)> {
    let (a, b) = s.split_once(':').with_context(|| format!("expected weight:value, got {s:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn run(cli: Cli) -> Result<ExitCode> {
    cusp_toolkit::init_threads(cli.threads)?;
    let dir = cli.fixtures.unwrap_or_else(fixtures_dir);
    match cli.cmd {
        Command::Analyze { spec, opts, format } => {
            let k = load_field(&spec, &dir)?;
            let report = analyze(&k, &opts.options()?)?;
            match format {
                Format::Table => print!("{}", render_table(&report)),
                Format::Structured => print!("{}", to_structured(&report)?),
            }
        }
        Command::Reproduce { table } => {
            let ids: Vec<&str> = if table == "all" { TABLE_IDS.to_vec() } else { vec![table.as_str()] };
            let mut ok = true;
            for id in ids {
                let rep = reproduce(&dir, id)?;
                println!("{rep}");
                ok &= rep.ok();
            }
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Export { spec, out, opts } => {
            let k = load_field(&spec, &dir)?;
            let report = analyze(&k, &opts.options()?)?;
            std::fs::write(&out, to_structured(&report)?).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {}", out.display());
        }
        Command::Quotsing { ty, terms, format } => {
            let t = parse_quot_type(&ty)?;
            let seq = quot_defect_sequence(&t, terms)?;
            let c = quot_asymptotic_constant(&t)?;
            match format {
                Format::Table => {
                    let seq: Vec<String> = seq.iter().map(|d| d.to_string()).collect();
                    println!("type      {t}");
                    println!("defects   {}", seq.join(", "));
                    println!("constant  {c}");
                }
                Format::Structured => {
                    let v = serde_json::json!({ "type": t.to_string(), "sequence": seq, "constant": c.to_string() });
                    println!("{}", serde_json::to_string_pretty(&v)?);
                }
            }
        }
        Command::Certify { spec, opts, dims, defects, format } => {
            let k = load_field(&spec, &dir)?;
            let o = opts.options()?;
            let level = match &o.level {
                Some(s) => parse_level(&k, s)?,
                None => Level::one(&k),
            };
            let cert = if dims.is_empty() {
                let cusps = level_cusps(&k, &o, &level)?;
                Certifier::new(&k).asymptotic_certificate_for(&o.genus, &level, &cusps, o.group)?
            } else {
                let dims = dims.iter().map(|s| pair(s)).collect::<Result<Vec<_>>>()?;
                let defects = defects.iter().map(|s| pair(s)).collect::<Result<Vec<_>>>()?;
                kodaira_lower_bound(k.label(), &o.genus, &level.label, &dims, &defects, "command line")?
            };
            let section = CertificateSection::from(&cert);
            match format {
                Format::Table => {
                    println!("{} genus {} level {}: [{}] {} vs {} -> {}", section.field, section.genus, section.level, section.criterion, section.lhs, section.rhs, section.verdict);
                    for i in &section.inputs {
                        println!("  {:<16} {:<14} {}", i.name, i.value, i.source);
                    }
                }
                Format::Structured => println!("{}", serde_json::to_string_pretty(&section)?),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qsdesign::certify::{self, CertifyOptions};
use qsdesign::clique;
use qsdesign::code::{EnumerationConfig, LinearCodeView, MinDistanceConfig, MinDistanceVerdict};
use qsdesign::data;
use qsdesign::Error;

#[derive(Parser)]
#[command(name = "qsdesign", version, about = "Ternary codes of 56-point biplanes and nonexistence certificates")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an incidence file is a t-design.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Rank of the incidence matrix over GF(p).
    Rank {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        p: u32,
    },
    /// Certify the minimum distance of the code spanned by the points.
    Mindist {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        claim: usize,
        #[arg(long, default_value_t = MinDistanceConfig::default().max_codewords)]
        max_codewords: u64,
    },
    /// Enumerate {0,1} words of a given weight in the dual code.
    Enum01 {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        weight: usize,
        /// Write supports here, one per line.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Maximum clique of the compatibility graph on a support list.
    Clique {
        supports: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = certify::ALLOWED_INTERSECTIONS)]
        allowed: Vec<usize>,
        /// Only decide whether the clique number is below this bound.
        #[arg(long)]
        below: Option<usize>,
        /// Write the graph as an edge list.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Certify(CertifyCommand),
    #[command(subcommand)]
    Premises(PremisesCommand),
}

#[derive(Args)]
struct Budget {
    /// Memory budget for enumeration tables, in bytes.
    #[arg(long, default_value_t = qsdesign::code::DEFAULT_MEMORY_BUDGET)]
    memory_budget: u64,
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Certify one biplane file.
    Biplane {
        file: PathBuf,
        /// Identifier used for the reference-table check; defaults to the file stem.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Certify all five biplanes and derive every verdict.
    All {
        /// Directory holding B1.inc … B5.inc; the bundled copies are used when omitted.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Subcommand)]
enum PremisesCommand {
    /// Print the external premises the certificates may cite.
    List,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::DataIntegrity(_)) => 2,
        Some(Error::BudgetExceeded { .. } | Error::Inconclusive(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn load(path: &Path) -> anyhow::Result<qsdesign::design::IncidenceStructure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    data::parse_incidence(&text).map_err(|e| Error::DataIntegrity(format!("{}: {e}", path.display())).into())
}

fn options(budget: &Budget) -> CertifyOptions {
    CertifyOptions {
        enumeration: EnumerationConfig {
            memory_budget: budget.memory_budget,
        },
        ..CertifyOptions::default()
    }
}

fn write_report(path: &Path, report: &certify::CertificateReport) -> anyhow::Result<()> {
    fs::write(path, certify::emit_report(report)?).with_context(|| format!("writing {}", path.display()))
}

fn configure_threads(threads: usize) -> anyhow::Result<()> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    #[cfg(not(feature = "parallel"))]
    if threads > 1 {
        eprintln!("note: built without the parallel feature; running on one thread");
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Verify { file, t } => {
            let d = load(&file)?;
            match d.verify_t_design(t) {
                Ok(sig) => println!("{sig} design: v = {}, b = {}, r = {}", sig.v, sig.b, sig.r),
                Err(failure) => {
                    println!("not a {t}-design: {failure}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Rank { file, p } => {
            let d = load(&file)?;
            println!("{}", d.incidence_matrix(p)?.rank());
        }
        Command::Mindist {
            file,
            p,
            claim,
            max_codewords,
        } => {
            let code = LinearCodeView::new(load(&file)?.incidence_matrix(p)?);
            let verdict = code.verify_min_distance(claim, &MinDistanceConfig { max_codewords })?;
            let cov = verdict.coverage();
            let summary = match &verdict {
                MinDistanceVerdict::Confirmed { distance, .. } => format!("confirmed: minimum distance {distance}"),
                MinDistanceVerdict::Smaller { weight, .. } => format!("refuted: codeword of weight {weight} < {claim}"),
                MinDistanceVerdict::Larger { minimum, .. } => format!("refuted: minimum distance {minimum} > {claim}"),
            };
            println!("{summary}");
            println!(
                "dimension {}, {} information sets, messages up to weight {}, {} codewords, lower bound {}",
                code.dimension(),
                cov.information_sets.len(),
                cov.max_message_weight,
                cov.codewords_enumerated,
                cov.lower_bound
            );
            println!("witness support {:?}", verdict.witness().support());
            if !verdict.is_confirmed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Enum01 {
            file,
            p,
            weight,
            out,
            budget,
        } => {
            let code = LinearCodeView::new(load(&file)?.incidence_matrix(p)?);
            let supports = code.enumerate_01_dual_codewords(
                weight,
                &EnumerationConfig {
                    memory_budget: budget.memory_budget,
                },
            )?;
            println!("{}", supports.len());
            if let Some(out) = out {
                fs::write(&out, data::format_supports(&supports)).with_context(|| format!("writing {}", out.display()))?;
            }
        }
        Command::Clique {
            supports,
            allowed,
            below,
            graph_out,
        } => {
            let text = fs::read_to_string(&supports).with_context(|| format!("reading {}", supports.display()))?;
            let s = data::parse_supports(&text, None)?;
            let allowed: BTreeSet<usize> = allowed.into_iter().collect();
            let g = clique::build_compatibility_graph(&s, &allowed)?;
            if let Some(path) = graph_out {
                fs::write(&path, g.graph().to_edge_list()).with_context(|| format!("writing {}", path.display()))?;
            }
            println!("{} vertices, {} edges", g.n(), g.graph().edge_count());
            match below {
                Some(bound) => {
                    let (is_below, result) = clique::clique_below(g.graph(), bound)?;
                    if is_below {
                        println!("clique number {} < {bound}", result.size);
                    } else {
                        println!("clique of size {bound} found");
                    }
                    println!("witness {:?}", result.witness);
                }
                None => {
                    let result = clique::max_clique(g.graph());
                    println!("clique number {}", result.size);
                    println!("witness {:?}", result.witness);
                }
            }
        }
        Command::Certify(CertifyCommand::Biplane {
            file,
            id,
            report,
            budget,
        }) => {
            let d = load(&file)?;
            let id = id.unwrap_or_else(|| file.file_stem().map_or("biplane".into(), |s| s.to_string_lossy().into_owned()));
            let cert = certify::certify_biplane(&id, &d, &options(&budget))?;
            print_certificate(&cert);
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&cert)?;
                fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            if !cert.eliminated {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Certify(CertifyCommand::All {
            data_dir,
            report,
            budget,
        }) => {
            let biplanes = match &data_dir {
                Some(dir) => data::load_biplane_dir(dir)?,
                None => data::bundled_biplanes().map_err(|e| Error::DataIntegrity(e.to_string()))?,
            };
            let r = certify::certify_all(&biplanes, &options(&budget))?;
            for cert in &r.biplanes {
                print_certificate(cert);
            }
            for v in &r.verdicts {
                println!("{}  [premises: {}]", v.statement, v.premises.join(", "));
            }
            for gap in &r.gaps {
                println!("gap: {gap}");
            }
            if let Some(path) = report {
                write_report(&path, &r)?;
            }
            if !r.gaps.is_empty() || r.verdicts.len() != 4 {
                bail!("not every verdict could be issued");
            }
        }
        Command::Premises(PremisesCommand::List) => {
            for p in certify::premise_registry() {
                println!("{}\n  {}\n  source: {}", p.id, p.statement, p.source);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_certificate(cert: &certify::BiplaneCertificate) {
    let clique = cert
        .clique
        .as_ref()
        .map_or(String::new(), |c| format!(", clique {}", c.size));
    let reason = match cert.elimination_reason {
        Some(certify::EliminationReason::CountBelow165) => "eliminated (count below 165)",
        Some(certify::EliminationReason::CliqueBelow165) => "eliminated (clique below 165)",
        None => "NOT eliminated",
    };
    println!(
        "{}: {}, dim {}, min distance {}, |S| = {}{clique}: {reason}",
        cert.biplane_id,
        cert.design_check,
        cert.code_dimension,
        if cert.min_distance_verdict.is_confirmed() { "11 confirmed" } else { "not confirmed" },
        cert.s_count,
    );
}

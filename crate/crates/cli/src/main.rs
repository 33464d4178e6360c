use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use lamina::io;
use lamina::{
    classify_gap, critical_set, gaps_of, hausdorff_distance, is_hyperbolic, is_sibling_invariant,
    is_thurston_invariant, limit_geolaminations, majors_and_minor, minor_quotient,
    pullback_construct, qml_approx_jobs, render_svg, siegel_set, ChoicePolicy, Chord, Error,
    Geolamination, RenderOptions,
};
use serde_json::json;

const EXIT_FAIL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "lamina", version, about = "Invariant laminations of the circle")]
struct Cli {
    /// Worker threads for commands that verify many candidates.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sibling,
    Thurston,
}

#[derive(Subcommand)]
enum Command {
    /// Pull back a critical portrait to a geolamination.
    Build {
        #[arg(long)]
        portrait: PathBuf,
        #[arg(long)]
        depth: usize,
        /// "canonical" or "script:FILE".
        #[arg(long, default_value = "canonical")]
        policy: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an invariance checker; exits 2 when it fails.
    Check {
        #[arg(long, value_enum)]
        kind: Kind,
        file: PathBuf,
    },
    /// List the gaps of a geolamination.
    Gaps {
        file: PathBuf,
        #[arg(long)]
        classify: bool,
    },
    /// Majors, minor and critical set of a quadratic geolamination.
    Minor { file: PathBuf },
    /// Enumerate minor-lamination leaves up to a period.
    Qml {
        #[arg(long)]
        max_period: usize,
        /// Pullback depth used to verify each candidate.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the limit geolaminations of a q-geolamination.
    Limits {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Group geolaminations whose minors intersect.
    Quotient {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        qml: PathBuf,
    },
    /// Approximate Hausdorff distance between two geolaminations.
    Hausdorff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
    },
    /// Sample the points whose orbits stay on one side of a diameter.
    Siegel {
        #[arg(long)]
        diameter: String,
        #[arg(long)]
        iters: usize,
    },
    /// Draw a geolamination as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 512)]
        size: u32,
        /// Draw leaves as hyperbolic geodesics.
        #[arg(long)]
        geodesic: bool,
    },
}

/// How a command ended when it did not succeed outright.
enum Outcome {
    /// Checked property does not hold; the report is already printed.
    Failed,
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Outcome {
    fn from(e: anyhow::Error) -> Outcome {
        let usage = e.chain().any(|c| {
            matches!(
                c.downcast_ref::<Error>(),
                Some(
                    Error::Parse { .. }
                        | Error::InvalidInput(_)
                        | Error::InvalidPortrait(_)
                        | Error::InvalidDegree(_)
                        | Error::WrongInput(_)
                )
            ) || c.downcast_ref::<std::io::Error>().is_some()
        });
        if usage {
            Outcome::Usage(e)
        } else {
            Outcome::Internal(e)
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Outcome {
        Outcome::from(anyhow::Error::new(e))
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Geolamination> {
    io::parse_lamination(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn run(cli: Cli) -> Result<(), Outcome> {
    match cli.command {
        Command::Build {
            portrait,
            depth,
            policy,
            out,
        } => {
            let (d, p) = io::parse_portrait(&read(&portrait)?)
                .with_context(|| format!("parsing {}", portrait.display()))?;
            let policy = match policy.as_str() {
                "canonical" => ChoicePolicy::Canonical,
                other => match other.strip_prefix("script:") {
                    Some(file) => {
                        let file = Path::new(file);
                        let script = io::parse_script(&read(file)?)
                            .with_context(|| format!("parsing {}", file.display()))?;
                        ChoicePolicy::Scripted(script)
                    }
                    None => {
                        return Err(Outcome::Usage(anyhow::anyhow!(
                            "policy must be canonical or script:FILE, got {other:?}"
                        )))
                    }
                },
            };
            let l = pullback_construct(d, &p, depth, &policy)?;
            write(&out, &io::serialize_lamination(&l))?;
            println!("{} leaves written to {}", l.len(), out.display());
        }
        Command::Check { kind, file } => {
            let l = load(&file)?;
            let report = match kind {
                Kind::Sibling => is_sibling_invariant(&l),
                Kind::Thurston => is_thurston_invariant(&l),
            };
            println!("{}", report.to_json());
            if !report.passed() {
                return Err(Outcome::Failed);
            }
        }
        Command::Gaps { file, classify } => {
            let l = load(&file)?;
            let gs = gaps_of(&l)?;
            let mut rows = Vec::new();
            for g in gs.gaps() {
                let mut row = json!({
                    "id": g.id,
                    "vertices": g.vertices,
                    "edges": g.edges,
                    "finite": g.is_finite(),
                    "frontier_exempt": g.frontier_exempt,
                });
                if classify {
                    row["class"] = match classify_gap(&l, &gs, g) {
                        Ok(c) => json!(c),
                        Err(e) => json!({ "error": e.to_string() }),
                    };
                }
                rows.push(row);
            }
            print_json(&json!(rows));
        }
        Command::Minor { file } => {
            let l = load(&file)?;
            let mp = majors_and_minor(&l)?;
            let cs = critical_set(&l).map_or_else(|e| json!({ "error": e.to_string() }), |c| json!(c));
            print_json(&json!({
                "major": mp.major,
                "sibling": mp.sibling,
                "minor": mp.minor,
                "critical_set": cs,
                "hyperbolic": is_hyperbolic(&l),
            }));
        }
        Command::Qml {
            max_period,
            depth,
            out,
        } => {
            if max_period == 0 {
                return Err(Outcome::Usage(anyhow::anyhow!("max period must be at least 1")));
            }
            let q = qml_approx_jobs(max_period, depth, cli.jobs);
            write(&out, &io::serialize_qml(&q))?;
            println!(
                "{} leaves and {} point classes written to {}",
                q.leaves.len(),
                q.points.len(),
                out.display()
            );
        }
        Command::Limits {
            file,
            depth,
            out_dir,
        } => {
            let l = load(&file)?;
            let limits = limit_geolaminations(&l, depth)?;
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            for (i, lim) in limits.iter().enumerate() {
                let path = out_dir.join(format!("limit-{i}.lam"));
                write(&path, &io::serialize_lamination(lim))?;
                println!("{}", path.display());
            }
        }
        Command::Quotient { files, qml } => {
            let q = io::parse_qml(&read(&qml)?)
                .with_context(|| format!("parsing {}", qml.display()))?;
            let family: Vec<Geolamination> =
                files.iter().map(|f| load(f)).collect::<anyhow::Result<_>>()?;
            let classes = minor_quotient(&family, &q)?;
            let rows: Vec<_> = classes
                .iter()
                .map(|c| {
                    let names: Vec<String> =
                        c.members.iter().map(|&i| files[i].display().to_string()).collect();
                    json!({
                        "members": c.members,
                        "files": names,
                        "minors": c.minors,
                        "qml_class": c.qml_class,
                    })
                })
                .collect();
            print_json(&json!(rows));
        }
        Command::Hausdorff { a, b, resolution } => {
            let (la, lb) = (load(&a)?, load(&b)?);
            println!("{:.6}", hausdorff_distance(&la, &lb, resolution));
        }
        Command::Siegel { diameter, iters } => {
            let ell: Chord = diameter
                .parse()
                .with_context(|| format!("parsing diameter {diameter:?}"))?;
            let s = siegel_set(&ell, iters)?;
            let mut v = json!(s);
            v["certifies_siegel"] = json!(s.certifies_siegel());
            print_json(&v);
        }
        Command::Render {
            file,
            out,
            size,
            geodesic,
        } => {
            let l = load(&file)?;
            let svg = render_svg(&l, size, RenderOptions { geodesic })?;
            write(&out, &svg)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Outcome::Failed) => ExitCode::from(EXIT_FAIL),
        Err(Outcome::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Outcome::Internal(e)) => {
            let report = json!({ "error": format!("{e:#}") });
            // Invariance errors are failures of the input, reported as data.
            let invariant = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<Error>(),
                    Some(
                        Error::NotALamination { .. }
                            | Error::NotInvariant { .. }
                            | Error::Linked(..)
                            | Error::InvarianceViolation(_)
                    )
                )
            });
            if invariant {
                print_json(&report);
                ExitCode::from(EXIT_FAIL)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(EXIT_INTERNAL)
            }
        }
    }
}

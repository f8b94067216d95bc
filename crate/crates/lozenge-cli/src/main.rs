//! Command-line front end: counting, identity verification sweeps, the
//! self-complementary table, and SVG rendering.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use lozenge::prelude::*;

mod sweep;

use sweep::{run_sweep, Identity, SweepConfig};

#[derive(Parser)]
#[command(
    name = "lozenge",
    about = "Exact lozenge tiling counts for hexagons with bowtie holes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Hexagon H(x, y, z)
    #[value(alias = "Hex")]
    Hex,
    /// Bowtie B(x, y, z, k)
    #[value(alias = "B")]
    B,
    /// Disconnected bowtie B'(x, y, z, k)
    #[value(alias = "Bprime", alias = "BPrime")]
    Bprime,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Formula,
    Brute,
    Recurrence,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TilingArg {
    None,
    SampleSymmetric,
}

#[derive(Subcommand)]
enum Command {
    /// Count tilings of one region
    Count {
        family: FamilyArg,
        x: u32,
        y: u32,
        z: u32,
        /// Lobe size; required for the bowtie families
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "formula")]
        method: MethodArg,
        /// For hexagons: count centrally symmetric tilings instead of all
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        json: bool,
        /// Refuse brute-force and recurrence counting above this x+y+z
        #[arg(long, default_value_t = 14)]
        brute_limit: u32,
    },
    /// Verify a condensation identity or the recurrence over a parameter sweep
    Verify {
        identity: Identity,
        #[arg(long, value_enum, default_value = "b")]
        family: SweepFamily,
        /// Largest x + y + z in the sweep
        #[arg(long, default_value_t = 10)]
        max_sum: u32,
        /// Emit JSON lines only (summary still printed to stderr)
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<String>,
        /// Enumeration cap per instance; instances over the cap are skipped
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        /// Worker threads (0 = rayon default)
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// With T1: also verify each instance with one seeded random
        /// rational edge weight
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Self-complementary counts for all hexagons up to a side bound, as CSV
    Table {
        #[arg(long, default_value_t = 5)]
        max: u32,
        #[arg(long)]
        out: Option<String>,
        /// Skip the brute-force column above this cell count
        #[arg(long, default_value_t = 200)]
        brute_cell_limit: usize,
    },
    /// Render a region to SVG
    Render {
        family: FamilyArg,
        x: u32,
        y: u32,
        z: u32,
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "none")]
        tiling: TilingArg,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    #[value(alias = "B")]
    B,
    #[value(alias = "Bprime", alias = "BPrime")]
    Bprime,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn params_for(family: FamilyArg, x: u32, y: u32, z: u32, k: Option<u32>) -> Result<RegionParams> {
    let params = match family {
        FamilyArg::Hex => {
            if k.is_some() {
                bail!("hexagons take no lobe size");
            }
            RegionParams {
                family: Family::Hexagon,
                x,
                y,
                z,
                k: 0,
            }
        }
        FamilyArg::B => RegionParams {
            family: Family::Bowtie,
            x,
            y,
            z,
            k: k.context("bowtie regions need a lobe size k")?,
        },
        FamilyArg::Bprime => RegionParams {
            family: Family::DisconnectedBowtie,
            x,
            y,
            z,
            k: k.context("disconnected bowtie regions need a lobe size k")?,
        },
    };
    params
        .validate()
        .map_err(|e| anyhow::anyhow!("invalid parameters: {e}"))?;
    Ok(params)
}

fn formula_count(params: &RegionParams, symmetric: bool) -> Result<BigUint> {
    Ok(match params.family {
        Family::Hexagon => {
            if symmetric {
                self_complementary(params.x, params.y, params.z)
            } else {
                macmahon(params.x, params.y, params.z)
            }
        }
        Family::Bowtie => bowtie(params.x, params.y, params.z, params.k)?,
        Family::DisconnectedBowtie => disconnected_bowtie(params.x, params.y, params.z, params.k)?,
    })
}

fn brute_count(params: &RegionParams, symmetric: bool) -> Result<BigRational> {
    let region = build_region(params)?;
    let graph = DualGraph::from_region(&region);
    Ok(if symmetric || params.family != Family::Hexagon {
        count_symmetric_matchings(&graph)?
    } else {
        count_matchings(&graph)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Count {
            family,
            x,
            y,
            z,
            k,
            method,
            symmetric,
            json,
            brute_limit,
        } => {
            let params = params_for(family, x, y, z, k)?;
            if method != MethodArg::Formula && x + y + z > brute_limit {
                bail!(
                    "x + y + z = {} exceeds the brute-force guard of {brute_limit}; \
                     use --method formula or raise --brute-limit",
                    x + y + z
                );
            }
            // bowtie families always report the centrally symmetric count
            let symmetric = symmetric || params.family != Family::Hexagon;
            let mut values: Vec<(&str, String)> = Vec::new();
            match method {
                MethodArg::Formula => {
                    values.push(("formula", formula_count(&params, symmetric)?.to_string()))
                }
                MethodArg::Brute => {
                    values.push(("brute", brute_count(&params, symmetric)?.to_string()))
                }
                MethodArg::Recurrence => {
                    if !symmetric {
                        bail!("the recurrence computes symmetric counts only");
                    }
                    values.push((
                        "recurrence",
                        RecurrenceSolver::new().count(&params)?.to_string(),
                    ));
                }
                MethodArg::All => {
                    values.push(("formula", formula_count(&params, symmetric)?.to_string()));
                    values.push(("brute", brute_count(&params, symmetric)?.to_string()));
                    if symmetric {
                        values.push((
                            "recurrence",
                            RecurrenceSolver::new().count(&params)?.to_string(),
                        ));
                    }
                }
            }
            let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
            if json {
                let mut obj = serde_json::json!({
                    "family": params.family,
                    "x": x, "y": y, "z": z, "k": params.k,
                    "symmetric": symmetric,
                    "agree": agree,
                });
                for (name, v) in &values {
                    obj[name] = serde_json::Value::String(v.clone());
                }
                println!("{obj}");
            } else if values.len() == 1 {
                println!("{}", values[0].1);
            } else {
                let nums: Vec<&str> = values.iter().map(|(_, v)| v.as_str()).collect();
                println!(
                    "{} {}",
                    nums.join(" "),
                    if agree { "agree" } else { "DISAGREE" }
                );
            }
            Ok(if agree {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Verify {
            identity,
            family,
            max_sum,
            json,
            out,
            cap,
            threads,
            seed,
        } => {
            let config = SweepConfig {
                identity,
                family: match family {
                    SweepFamily::B => Family::Bowtie,
                    SweepFamily::Bprime => Family::DisconnectedBowtie,
                },
                max_sum,
                cap,
                threads,
                seed,
            };
            let outcome = run_sweep(&config)?;
            let mut sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(fs::File::create(path)?),
                None => Box::new(std::io::stdout()),
            };
            for line in &outcome.lines {
                writeln!(sink, "{line}")?;
            }
            let summary = format!(
                "{} family {} max-sum {}: {} pass, {} fail, {} skipped",
                identity.name(),
                match family {
                    SweepFamily::B => "B",
                    SweepFamily::Bprime => "Bprime",
                },
                max_sum,
                outcome.pass,
                outcome.fail,
                outcome.skipped
            );
            if json {
                eprintln!("{summary}");
            } else {
                writeln!(sink, "{summary}")?;
            }
            Ok(if outcome.fail == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Table {
            max,
            out,
            brute_cell_limit,
        } => {
            let mut csv =
                String::from("family,x,y,z,k,formula_count,brute_count,recurrence_count,agree\n");
            let mut all_agree = true;
            for x in 0..=max {
                for y in 0..=max {
                    for z in 0..=max {
                        let formula = self_complementary(x, y, z);
                        let region = build_hexagon(x, y, z);
                        let brute = if region.len() <= brute_cell_limit {
                            if region.is_empty() {
                                Some(BigRational::one())
                            } else {
                                let graph = DualGraph::from_region(&region);
                                Some(count_symmetric_matchings(&graph)?)
                            }
                        } else {
                            None
                        };
                        let params = RegionParams {
                            family: Family::Hexagon,
                            x,
                            y,
                            z,
                            k: 0,
                        };
                        let rec = if region.is_empty() {
                            BigRational::one()
                        } else {
                            RecurrenceSolver::new().count(&params)?
                        };
                        let f = BigRational::from_integer(formula.clone().into());
                        let agree = rec == f && brute.as_ref().is_none_or(|b| *b == f);
                        all_agree &= agree;
                        csv.push_str(&format!(
                            "hex,{x},{y},{z},0,{},{},{},{}\n",
                            formula,
                            brute.map_or(String::new(), |b| b.to_string()),
                            rec,
                            agree
                        ));
                    }
                }
            }
            match out {
                Some(path) => {
                    fs::write(&path, csv).with_context(|| format!("writing table to {path}"))?
                }
                None => print!("{csv}"),
            }
            Ok(if all_agree {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Render {
            family,
            x,
            y,
            z,
            k,
            tiling,
            out,
        } => {
            let params = params_for(family, x, y, z, k)?;
            let region = build_region(&params)?;
            let svg = match tiling {
                TilingArg::None => render_svg(&region, None),
                TilingArg::SampleSymmetric => {
                    if region.is_empty() {
                        render_svg(&region, None)
                    } else {
                        let graph = DualGraph::from_region(&region);
                        match sample_symmetric_matching(&graph)? {
                            Some(m) => render_svg(&region, Some((&graph, &m))),
                            None => {
                                eprintln!(
                                    "no centrally symmetric tiling exists; rendering the bare region"
                                );
                                render_svg(&region, None)
                            }
                        }
                    }
                }
            };
            match out {
                Some(path) => {
                    fs::write(&path, svg).with_context(|| format!("writing SVG to {path}"))?
                }
                None => print!("{svg}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

//! `slp`: command-line surface over the library — evaluation, deciders,
//! reductions, verification campaigns, and density scans.
//!
//! Exit codes: 0 success / campaign pass / decision "yes"; 1 decision "no";
//! 2 campaign failure; 3 usage or runtime error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num::bigint::BigInt;
use num::BigUint;

use slpkit::deciders::{decide, Aux, DecideCfg, OracleHandle, ProblemInstance, ProblemTag};
use slpkit::eval::{eval_exact, eval_mod, EvalBudget};
use slpkit::harness::{
    default_config, equ_oracle_via_2sos, gen_random_slp, run_campaign, OpWeights, CAMPAIGN_NAMES,
};
use slpkit::numtheory::{density_scan, DensityKind};
use slpkit::reductions::{
    default_gap_bound, deg_to_ord, equ_to_2sos, equ_to_3sos, mdeg_to_deg, ord_to_deg, ord_to_div2,
    pos_via_2sos_search, pos_via_3sos, reverse_slp, three_sos_via_div2_pos, OrdToDegOutcome,
    ReductionError, ReductionRecord,
};
use slpkit::slp::{parse, serialize, Slp};

#[derive(Parser)]
#[command(
    name = "slp",
    version,
    about = "Straight-line programs over the integers: evaluation, decision problems, reductions, and oracle-checked verification campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program exactly, or modulo T with --mod
    Eval {
        file: PathBuf,
        /// Comma-separated integer assignment for the variables
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Evaluate modulo this integer (≥ 2) instead of exactly
        #[arg(long = "mod")]
        modulus: Option<String>,
        /// Bit budget for exact evaluation
        #[arg(long = "max-bits", default_value_t = 1 << 20)]
        max_bits: u64,
    },
    /// Decide a problem instance; prints yes/no and exits 0/1
    Decide {
        /// One of: posslp equslp bitslp div2slp 3sosslp 2sosslp squslp
        /// degslp ordslp pospolyslp squpolyslp
        problem: String,
        file: PathBuf,
        /// ℓ for div2slp / ordslp
        #[arg(long)]
        l: Option<u64>,
        /// d for degslp
        #[arg(long)]
        d: Option<u64>,
        /// n for bitslp
        #[arg(long)]
        n: Option<u64>,
        /// i for bitslp
        #[arg(long)]
        i: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampling-range exponent override for squpolyslp
        #[arg(long = "sample-exp")]
        sample_exp: Option<u64>,
        #[arg(long = "max-bits", default_value_t = 1 << 20)]
        max_bits: u64,
    },
    /// Apply a reduction; transforms write the output program, drivers run
    /// their oracle loop and print the decision
    Reduce {
        /// One of: equ-to-3sos equ-to-2sos pos-via-3sos 3sos-via-div2
        /// reverse deg-to-ord ord-to-deg ord-to-div2 mdeg-to-deg pos-via-2sos
        name: String,
        file: PathBuf,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        /// Desk-scale exponent override for ord-to-div2
        #[arg(long = "override-exp")]
        override_exp: Option<u64>,
        /// Output path for the transformed program (or driver trace)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification campaign; exits 0 on pass, 2 on failure
    Verify {
        campaign: String,
        /// Check every program up to this size
        #[arg(long)]
        exhaustive: Option<usize>,
        /// Number of random instances
        #[arg(long)]
        random: Option<usize>,
        /// Maximum size of random instances
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON-lines report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Density scans over the sum-of-squares characterizations
    Scan {
        /// density-3sos or density-2sos
        kind: String,
        #[arg(long)]
        limit: u64,
    },
    /// Generate a random program
    Gen {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        vars: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendering but fold every usage problem into exit 3
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_program(path: &PathBuf) -> Result<Slp, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|e| format!("bad integer `{s}`: {e}"))
}

fn write_or_print(output: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Eval {
            file,
            vars,
            modulus,
            max_bits,
        } => {
            let slp = load_program(&file)?;
            let assignment: Vec<BigInt> = vars
                .iter()
                .map(|v| parse_bigint(v))
                .collect::<Result<_, _>>()?;
            match modulus {
                Some(m) => {
                    let m: BigUint = parse_bigint(&m)?
                        .try_into()
                        .map_err(|_| "modulus must be positive".to_string())?;
                    let r = eval_mod(&slp, &assignment, &m).map_err(|e| e.to_string())?;
                    println!("{r}");
                }
                None => {
                    let budget = EvalBudget::with_max_bits(max_bits);
                    let v = eval_exact(&slp, &assignment, &budget).map_err(|e| e.to_string())?;
                    println!("{v}");
                }
            }
            Ok(0)
        }

        Command::Decide {
            problem,
            file,
            l,
            d,
            n,
            i,
            seed,
            sample_exp,
            max_bits,
        } => {
            let tag: ProblemTag = problem.parse()?;
            let slp = load_program(&file)?;
            let aux = match tag {
                ProblemTag::Div2 | ProblemTag::Ord => {
                    Aux::Ell(l.ok_or_else(|| format!("{tag} needs --l"))?)
                }
                ProblemTag::Deg => Aux::Deg(d.ok_or_else(|| format!("{tag} needs --d"))?),
                ProblemTag::Bit => Aux::Bit {
                    n: n.ok_or_else(|| format!("{tag} needs --n"))?,
                    i: i.ok_or_else(|| format!("{tag} needs --i"))?,
                },
                _ => Aux::None,
            };
            let cfg = DecideCfg {
                budget: EvalBudget::with_max_bits(max_bits),
                seed,
                sample_exp_override: sample_exp,
                ..DecideCfg::default()
            };
            let verdict =
                decide(&ProblemInstance::new(tag, slp, aux), &cfg).map_err(|e| e.to_string())?;
            println!("{}", if verdict.answer { "yes" } else { "no" });
            Ok(if verdict.answer { 0 } else { 1 })
        }

        Command::Reduce {
            name,
            file,
            l,
            d,
            override_exp,
            output,
        } => {
            let slp = load_program(&file)?;
            let need_l = || l.ok_or_else(|| format!("{name} needs --l"));
            let need_d = || d.ok_or_else(|| format!("{name} needs --d"));
            let err = |e: ReductionError| e.to_string();
            match name.as_str() {
                "equ-to-3sos" => {
                    write_or_print(&output, &serialize(&equ_to_3sos(&slp)))?;
                    Ok(0)
                }
                "equ-to-2sos" => {
                    write_or_print(&output, &serialize(&equ_to_2sos(&slp)))?;
                    Ok(0)
                }
                "reverse" => {
                    let (m, q) = reverse_slp(&slp).map_err(err)?;
                    eprintln!("m = {m}");
                    write_or_print(&output, &serialize(&q))?;
                    Ok(0)
                }
                "deg-to-ord" => {
                    let (q, ell) = deg_to_ord(&slp, need_d()?).map_err(err)?;
                    eprintln!("l = {ell}");
                    write_or_print(&output, &serialize(&q))?;
                    Ok(0)
                }
                "ord-to-deg" => {
                    let equ = OracleHandle::truthful(ProblemTag::Equ, DecideCfg::default());
                    match ord_to_deg(&slp, need_l()?, &equ).map_err(err)? {
                        OrdToDegOutcome::Instance { slp: q, d } => {
                            eprintln!("d = {d}");
                            write_or_print(&output, &serialize(&q))?;
                            Ok(0)
                        }
                        OrdToDegOutcome::Decided(ans) => {
                            println!("decided {}", if ans { "yes" } else { "no" });
                            Ok(if ans { 0 } else { 1 })
                        }
                    }
                }
                "ord-to-div2" => {
                    let (q, ell) = ord_to_div2(&slp, need_l()?, override_exp).map_err(err)?;
                    eprintln!("l = {ell}");
                    write_or_print(&output, &serialize(&q))?;
                    Ok(0)
                }
                "mdeg-to-deg" => {
                    let (q, d) = mdeg_to_deg(&slp, need_d()?).map_err(err)?;
                    eprintln!("d = {d}");
                    write_or_print(&output, &serialize(&q))?;
                    Ok(0)
                }
                "pos-via-3sos" => {
                    let oracle = OracleHandle::truthful(ProblemTag::ThreeSos, DecideCfg::default());
                    let ans = pos_via_3sos(&slp, &oracle).map_err(err)?;
                    driver_output(&output, "pos-via-3sos", &slp, ProblemTag::Pos, &[&oracle])?;
                    println!("{}", if ans { "yes" } else { "no" });
                    Ok(if ans { 0 } else { 1 })
                }
                "3sos-via-div2" => {
                    let div2 = OracleHandle::truthful(ProblemTag::Div2, DecideCfg::default());
                    let pos = OracleHandle::truthful(ProblemTag::Pos, DecideCfg::default());
                    let ans = three_sos_via_div2_pos(&slp, &div2, &pos).map_err(err)?;
                    driver_output(
                        &output,
                        "3sos-via-div2",
                        &slp,
                        ProblemTag::ThreeSos,
                        &[&div2, &pos],
                    )?;
                    println!("{}", if ans { "yes" } else { "no" });
                    Ok(if ans { 0 } else { 1 })
                }
                "pos-via-2sos" => {
                    let equ = equ_oracle_via_2sos(DecideCfg::default());
                    let two_sos = OracleHandle::truthful(ProblemTag::TwoSos, DecideCfg::default());
                    let bound = default_gap_bound(slp.size());
                    match pos_via_2sos_search(&slp, bound, &equ, &two_sos) {
                        Ok(ans) => {
                            driver_output(
                                &output,
                                "pos-via-2sos",
                                &slp,
                                ProblemTag::Pos,
                                &[&equ, &two_sos],
                            )?;
                            println!("{}", if ans { "yes" } else { "no" });
                            Ok(if ans { 0 } else { 1 })
                        }
                        Err(ReductionError::GapBoundExhausted(b)) => {
                            println!("inconclusive (gap bound {b} exhausted)");
                            Ok(3)
                        }
                        Err(e) => Err(e.to_string()),
                    }
                }
                other => Err(format!(
                    "unknown reduction `{other}`; expected one of equ-to-3sos, equ-to-2sos, \
                     pos-via-3sos, 3sos-via-div2, reverse, deg-to-ord, ord-to-deg, ord-to-div2, \
                     mdeg-to-deg, pos-via-2sos"
                )),
            }
        }

        Command::Verify {
            campaign,
            exhaustive,
            random,
            size,
            seed,
            report,
        } => {
            let mut cfg = default_config(&campaign).ok_or_else(|| {
                format!(
                    "unknown campaign `{campaign}`; expected one of {}",
                    CAMPAIGN_NAMES.join(", ")
                )
            })?;
            if exhaustive.is_some() || random.is_some() {
                cfg.exhaustive_size = exhaustive;
                cfg.random_count = random.unwrap_or(0);
            }
            if let Some(s) = size {
                cfg.random_max_size = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let outcome = run_campaign(&cfg).map_err(|e| e.to_string())?;
            println!(
                "campaign {}: {} instances, {} pass, {} fail, {} inconclusive",
                cfg.campaign, outcome.total, outcome.pass, outcome.fail, outcome.inconclusive
            );
            for failure in outcome.failures().take(5) {
                eprintln!(
                    "FAIL [{}] expected {} got {}: {}",
                    failure.index, failure.expected, failure.got, failure.detail
                );
            }
            if let Some(path) = report {
                fs::write(&path, outcome.to_jsonl())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(if outcome.passed() { 0 } else { 2 })
        }

        Command::Scan { kind, limit } => {
            let kind = match kind.as_str() {
                "density-3sos" => DensityKind::ThreeSos,
                "density-2sos" => DensityKind::TwoSos,
                other => return Err(format!("unknown scan `{other}`")),
            };
            let scan = density_scan(kind, limit).map_err(|e| e.to_string())?;
            println!("count {}", scan.count);
            println!("ratio {:.6}", scan.ratio);
            Ok(0)
        }

        Command::Gen { size, vars, seed } => {
            if size == 0 {
                return Err("--size must be at least 1".to_string());
            }
            let slp = gen_random_slp(size, vars, seed, &OpWeights::default());
            print!("{}", serialize(&slp));
            Ok(0)
        }
    }
}

/// Writes a driver's oracle trace as a one-line JSON record.
fn driver_output(
    output: &Option<PathBuf>,
    name: &str,
    input: &Slp,
    tag: ProblemTag,
    oracles: &[&OracleHandle],
) -> Result<(), String> {
    let Some(path) = output else {
        return Ok(());
    };
    let mut trace = Vec::new();
    for oracle in oracles {
        trace.extend(oracle.take_log());
    }
    let record = ReductionRecord::new(
        name,
        ProblemInstance::new(tag, input.clone(), Aux::None),
        Vec::new(),
        trace,
        0,
    );
    let line = serde_json::to_string(&record).map_err(|e| e.to_string())?;
    fs::write(path, line + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

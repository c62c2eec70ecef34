//! `sublo`: command-line front end.
//!
//! Exit status: 0 when the identity holds or the lattice is accepted, 1 when
//! it fails or is rejected (the witness is printed), 2 on usage or I/O errors.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sublo::catalog::{classify_si, co_chain_with_sets, l_mn_with_sets, variety_position, SIClass};
use sublo::dependency::check_dependency_invariants;
use sublo::membership::{decide_sub_lo, least_n, verify_certificate_json, ComponentJson, Membership};
use sublo::projectivity::{retract_section, LambdaKind};
use sublo::render::Hasse;
use sublo::star::{search_pq, verify_separation};
use sublo::term::{builtin::builtin, check_with, check_sigma, CheckOptions, CheckOutcome, SigmaKind, SigmaOutcome};
use sublo::tracks::{track_to_embedding, weak_bitracks};
use sublo::{co_lattice, Poset};

use input::{read_identity, read_lattice, read_poset, Input, Loaded};
use report::Report;

#[derive(Parser)]
#[command(name = "sublo", version, about = "Finite lattices of convex subsets of chains")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Run identity checks beyond the size guard.
    #[arg(long, global = true)]
    force: bool,
    /// Print a machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the lattice of convex subsets of a poset.
    Co {
        /// Poset JSON (`-` for stdin).
        poset: Option<String>,
        /// Use the chain with this many elements instead.
        #[arg(long)]
        chain: Option<usize>,
    },
    /// Print a catalog lattice.
    Catalog {
        #[command(subcommand)]
        which: CatalogCmd,
    },
    /// Check an identity exhaustively.
    Check {
        /// Built-in identity: E, P, HS, STAR, D2DUAL.
        #[arg(long, conflicts_with = "identity_file")]
        identity: Option<String>,
        /// Identity file: JSON or `(= lhs rhs)` / `(<= lhs rhs)`.
        #[arg(long)]
        identity_file: Option<PathBuf>,
        lattice: String,
    },
    /// Check a join-irreducible condition.
    CheckSigma {
        #[arg(long)]
        kind: String,
        lattice: String,
    },
    /// Decide membership.
    Member {
        #[arg(long, value_enum, default_value = "sub-lo")]
        variety: Variety,
        /// Chain length for `sub-n`.
        #[arg(long)]
        n: Option<usize>,
        lattice: String,
    },
    /// Print an embedding certificate.
    Embed { lattice: String },
    /// Verify a certificate against a lattice.
    VerifyCert { lattice: String, cert: String },
    /// Classify a subdirectly irreducible member.
    Classify { lattice: String },
    /// List weak bi-tracks of a given index.
    Tracks {
        lattice: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Also build the chain-lattice embedding of the first track.
        #[arg(long)]
        embed: bool,
    },
    /// Build a section of a surjection onto Co(n) or L(m,n).
    Retract {
        lattice: String,
        /// Map JSON: `{"values": [...]}` or a plain array.
        #[arg(long)]
        pi: String,
        /// `co:N` or `lmn:M,N`.
        #[arg(long)]
        target: String,
    },
    /// Search the seven-point posets for a separating pair.
    FindPq,
    /// Compare the STAR identity on Co(P) and Co(Q).
    VerifySeparation { p: String, q: String },
    /// Report the join-dependency invariants.
    Invariants { lattice: String },
    /// Hasse diagram of a poset or lattice.
    Dot {
        input: String,
        /// Emit SVG instead of DOT.
        #[arg(long)]
        svg: bool,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    Co { n: usize },
    Lmn { m: usize, n: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variety {
    SubLo,
    SubN,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn parse_target(s: &str) -> Result<LambdaKind> {
    if let Some(n) = s.strip_prefix("co:") {
        return Ok(LambdaKind::Plain(n.trim().parse().context("bad co:N")?));
    }
    if let Some(mn) = s.strip_prefix("lmn:") {
        let (m, n) = mn.split_once(',').context("expected lmn:M,N")?;
        return Ok(LambdaKind::Split(m.trim().parse()?, n.trim().parse()?));
    }
    bail!("target must be co:N or lmn:M,N, got `{s}`")
}

fn run(cli: &Cli) -> Result<u8> {
    let mut inputs = Input::default();
    match &cli.command {
        Command::Co { poset, chain } => {
            let p = match (poset, chain) {
                (_, Some(n)) => Poset::chain(*n),
                (Some(path), None) => read_poset(&mut inputs, path)?,
                (None, None) => bail!("give a poset file or --chain N"),
            };
            let (l, _) = co_lattice(&p)?;
            print_json(&l.to_json())?;
            Ok(0)
        }
        Command::Catalog { which } => {
            let (l, _) = match which {
                CatalogCmd::Co { n } => co_chain_with_sets(*n)?,
                CatalogCmd::Lmn { m, n } => l_mn_with_sets(*m, *n)?,
            };
            print_json(&l.to_json())?;
            Ok(0)
        }
        Command::Check {
            identity,
            identity_file,
            lattice,
        } => {
            let id = match (identity, identity_file) {
                (Some(name), _) => builtin(name)?,
                (None, Some(path)) => read_identity(&mut inputs, path)?,
                (None, None) => bail!("give --identity or --identity-file"),
            };
            let l = read_lattice(&mut inputs, lattice)?;
            let opts = CheckOptions {
                force: cli.force,
                ..CheckOptions::default()
            };
            let outcome = check_with(&l, &id, &opts)?;
            let mut r = Report::new("check", &inputs);
            r.field("identity", json!(id.name));
            match &outcome {
                CheckOutcome::Holds => r.verdict("holds", true),
                CheckOutcome::Fails(w) => {
                    r.verdict("fails", false);
                    r.field("assignment", json!(w.describe(&id, &l)));
                    r.field("lhs", json!(l.label(w.lhs)));
                    r.field("rhs", json!(l.label(w.rhs)));
                }
            }
            r.emit(cli.json)
        }
        Command::CheckSigma { kind, lattice } => {
            let kind = SigmaKind::parse(kind)?;
            let l = read_lattice(&mut inputs, lattice)?;
            let mut r = Report::new("check-sigma", &inputs);
            r.field("kind", json!(format!("{kind:?}")));
            match check_sigma(&l, kind) {
                SigmaOutcome::Holds => r.verdict("holds", true),
                SigmaOutcome::Fails(w) => {
                    r.verdict("fails", false);
                    let named: Vec<(String, String)> = kind
                        .vars()
                        .iter()
                        .zip(&w)
                        .map(|(v, &x)| (v.to_string(), l.label(x).to_string()))
                        .collect();
                    r.field("assignment", json!(named));
                }
            }
            r.emit(cli.json)
        }
        Command::Member { variety, n, lattice } => {
            let l = read_lattice(&mut inputs, lattice)?;
            let decided = decide_sub_lo(&l)?;
            let mut r = Report::new("member", &inputs);
            match (&decided, variety) {
                (Membership::Rejected(rej), _) => {
                    r.field("variety", json!("sub-lo"));
                    r.verdict("rejected", false);
                    r.field("anchor", json!(l.label(rej.anchor)));
                    if let Some((k, w)) = &rej.sigma {
                        let labels: Vec<&str> = w.iter().map(|&x| l.label(x)).collect();
                        r.field("failing_condition", json!({"kind": format!("{k:?}"), "tuple": labels}));
                    }
                }
                (Membership::Accepted(cert), Variety::SubLo) => {
                    r.field("variety", json!("sub-lo"));
                    r.verdict("accepted", true);
                    r.field("least_n", json!(least_n(cert)));
                }
                (Membership::Accepted(cert), Variety::SubN) => {
                    let Some(n) = n else { bail!("--variety sub-n needs --n") };
                    let k = least_n(cert);
                    r.field("variety", json!(format!("sub-{n}")));
                    r.field("least_n", json!(k));
                    if k <= *n {
                        r.verdict("accepted", true);
                    } else {
                        r.verdict("rejected", false);
                    }
                }
            }
            r.emit(cli.json)
        }
        Command::Embed { lattice } => {
            let l = read_lattice(&mut inputs, lattice)?;
            match decide_sub_lo(&l)? {
                Membership::Accepted(cert) => {
                    print_json(&cert.to_json(&l))?;
                    Ok(0)
                }
                Membership::Rejected(rej) => {
                    eprintln!("rejected: no chain order for `{}`", l.label(rej.anchor));
                    Ok(1)
                }
            }
        }
        Command::VerifyCert { lattice, cert } => {
            let l = read_lattice(&mut inputs, lattice)?;
            let text = inputs.read(cert)?;
            let comps: Vec<ComponentJson> = serde_json::from_str(&text).context("certificate JSON")?;
            let mut r = Report::new("verify-cert", &inputs);
            match verify_certificate_json(&l, &comps) {
                Ok(()) => r.verdict("valid", true),
                Err(e) => {
                    r.verdict("invalid", false);
                    r.field("reason", json!(e.to_string()));
                }
            }
            r.emit(cli.json)
        }
        Command::Classify { lattice } => {
            let l = read_lattice(&mut inputs, lattice)?;
            let class = classify_si(&l)?;
            let mut r = Report::new("classify", &inputs);
            r.field("class", json!(class.tag()));
            if let SIClass::CoChain { iso, .. } | SIClass::Lmn { iso, .. } = &class {
                r.field("isomorphism", json!(iso.values));
            }
            if !matches!(class, SIClass::NotMember) {
                let pos = variety_position(&l)?;
                r.field("least_n", json!(pos.least_n));
                r.field("embedded_si_diagnostic", json!(pos.embedded_si_diagnostic));
            }
            let ok = !matches!(class, SIClass::NotMember);
            r.verdict(&class.tag(), ok);
            r.emit(cli.json)
        }
        Command::Tracks { lattice, m, n, embed } => {
            let l = read_lattice(&mut inputs, lattice)?;
            let tracks = weak_bitracks(&l, *m, *n);
            let listed: Vec<_> = tracks.iter().map(|t| t.to_json(&l)).collect();
            let mut out = json!({"index": [m, n], "count": tracks.len(), "tracks": listed});
            if *embed {
                if let Some(first) = tracks.first() {
                    let phi = track_to_embedding(&l, first)?;
                    out["embedding"] = json!(phi.values);
                }
            }
            print_json(&out)?;
            Ok(if tracks.is_empty() { 1 } else { 0 })
        }
        Command::Retract { lattice, pi, target } => {
            let lp = read_lattice(&mut inputs, lattice)?;
            let pi_text = inputs.read(pi)?;
            let pi = input::parse_map(&pi_text)?;
            let kind = parse_target(target)?;
            let r = retract_section(&lp, &pi, kind)?;
            print_json(&json!({
                "section": r.section.values,
                "iterations": r.iterations,
                "generators": r.generators.iter().map(|&g| lp.label(g)).collect::<Vec<_>>(),
            }))?;
            Ok(0)
        }
        Command::FindPq => {
            let log = search_pq()?;
            print_json(&log)?;
            Ok(0)
        }
        Command::VerifySeparation { p, q } => {
            let p = read_poset(&mut inputs, p)?;
            let q = read_poset(&mut inputs, q)?;
            let rep = verify_separation(&p, &q)?;
            let mut r = Report::new("verify-separation", &inputs);
            r.field("p_satisfies", json!(rep.p_satisfies));
            r.field("q_satisfies", json!(rep.q_satisfies));
            if let Some(w) = &rep.p_witness {
                r.field("p_witness", json!(w));
            }
            r.field(
                "note",
                json!("identity-level separation; non-membership of Co(P) in the variety of Co(Q) follows and is not computed separately"),
            );
            r.verdict(if rep.separated { "separated" } else { "not separated" }, rep.separated);
            r.emit(cli.json)
        }
        Command::Invariants { lattice } => {
            let l = read_lattice(&mut inputs, lattice)?;
            let rep = check_dependency_invariants(&l)?;
            let mut r = Report::new("invariants", &inputs);
            for res in &rep.results {
                r.field(
                    &res.name,
                    json!({"applicable": res.applicable, "holds": res.holds, "witness": res.witness}),
                );
            }
            let ok = rep.results.iter().all(|x| !x.applicable || x.holds);
            r.verdict(if ok { "all hold" } else { "violations" }, ok);
            r.emit(cli.json)
        }
        Command::Dot { input, svg } => {
            let hasse = match input::read_any(&mut inputs, input)? {
                Loaded::Lattice(l) => Hasse::of_lattice(&l),
                Loaded::Poset(p) => Hasse::of_poset(&p),
            };
            if *svg {
                print!("{}", hasse.to_svg());
            } else {
                let name = if input == "-" { "stdin" } else { input.as_str() };
                print!("{}", hasse.to_dot(name));
            }
            Ok(0)
        }
    }
}

mod dot;
mod input;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ftrees_core::boundary::{act_truncated, embed, is_realizable, non_isolation_witness};
use ftrees_core::{
    act, coset_invariant, h2_member, independence_certificate, omega2_member, orbit_layers, parse_terms, realize,
    reduce, to_normal_form, GroupElement,
};

use dot::{export_dot, DotKind};
use input::CliResult;

#[derive(Parser)]
#[command(name = "ftrees", version, about = "Thompson's group F as tree-pair unitaries in the Cuntz algebra")]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on orbit and boundary depths.
    #[arg(long, global = true, env = "FTREES_MAX_DEPTH", default_value_t = 12)]
    max_depth: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SetKind {
    F,
    T,
    V,
    H2,
}

#[derive(Subcommand)]
enum Command {
    /// Product of elements, rightmost applied first.
    Mul {
        #[arg(num_args = 2.., required = true)]
        elements: Vec<String>,
    },
    /// Inverse of an element.
    Inv { element: String },
    /// Canonical form of a (possibly unreduced) term list.
    Reduce { terms: String },
    /// Normal form of an element of F.
    Nf { element: String },
    /// Element of a word in the generators.
    Unnf { word: String },
    /// Membership in F, T, V or H2 (exit 0 = yes, 1 = no).
    Member {
        #[arg(long, value_enum)]
        set: SetKind,
        element: String,
    },
    /// Action of an element on a projection.
    Act { element: String, projection: String },
    /// The projection labelling the coset f H2.
    Coset { element: String },
    /// Exact trace of a projection.
    Trace { projection: String },
    /// Orbit membership test (exit 0 = yes, 1 = no).
    Omega2 { projection: String },
    /// An element carrying 1 to the projection.
    Realize { projection: String },
    /// Breadth-first orbit under x0, x1 and inverses, as line-delimited JSON.
    Orbit {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value = "1")]
        start: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Depth-k window of a projection and its complement.
    Embed {
        projection: String,
        #[arg(long)]
        depth: usize,
    },
    /// Action on a truncated pair.
    BoundaryAct { element: String, pair: String },
    /// Whether some orbit point has the given window (exit 0 = yes, 1 = no).
    Realizable { pair: String },
    /// Two distinct orbit points with the same window.
    Witness { pair: String },
    /// A projection on which the elements act with distinct images.
    Separate {
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// Graphviz diagram of an element.
    Dot {
        #[arg(long, value_enum, default_value = "bipartite")]
        kind: DotKind,
        element: String,
    },
    /// Maximal |degree| over the terms.
    Height { element: String },
    /// Image in Z^2 under the abelianization.
    Abel { element: String },
}

enum Outcome {
    Done,
    Yes,
    No,
}

fn emit(cli: &Cli, text: impl std::fmt::Display, value: serde_json::Value) {
    if cli.json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

fn verdict(cli: &Cli, yes: bool, value: serde_json::Value) -> Outcome {
    emit(cli, if yes { "yes" } else { "no" }, value);
    if yes {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn element_json(f: &GroupElement) -> serde_json::Value {
    serde_json::to_value(f).expect("elements serialize")
}

fn check_depth(cli: &Cli, depth: usize) -> CliResult<()> {
    if depth > cli.max_depth {
        return Err(format!("depth {depth} exceeds FTREES_MAX_DEPTH = {}", cli.max_depth));
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let e = |r: ftrees_core::Error| r.to_string();
    match &cli.command {
        Command::Mul { elements } => {
            let mut acc = GroupElement::identity();
            for s in elements {
                acc = acc.multiply(&input::element(s)?);
            }
            emit(cli, &acc, element_json(&acc));
        }
        Command::Inv { element } => {
            let f = input::element(element)?.inverse();
            emit(cli, &f, element_json(&f));
        }
        Command::Reduce { terms } => {
            let text = input::resolve(terms)?;
            let f = if text.trim_start().starts_with('{') {
                input::element(&text)?
            } else {
                reduce(parse_terms(&text).map_err(e)?).map_err(e)?
            };
            emit(cli, &f, element_json(&f));
        }
        Command::Nf { element } => {
            let nf = to_normal_form(&input::element(element)?).map_err(e)?;
            emit(cli, &nf, json!({"normal_form": nf.to_string(), "positive": nf.positive, "negative": nf.negative}));
        }
        Command::Unnf { word } => {
            let f = input::generator_word(word)?.evaluate();
            emit(cli, &f, element_json(&f));
        }
        Command::Member { set, element } => {
            let f = input::element(element)?;
            let yes = match set {
                SetKind::F => f.is_order_preserving(),
                SetKind::T => f.is_cyclic_order_preserving(),
                SetKind::V => true,
                SetKind::H2 => h2_member(&f).map_err(e)?,
            };
            let name = format!("{set:?}").to_lowercase();
            return Ok(verdict(cli, yes, json!({"set": name, "member": yes})));
        }
        Command::Act { element, projection } => {
            let q = act(&input::element(element)?, &input::projection(projection)?).map_err(e)?;
            emit(cli, &q, json!({"projection": q}));
        }
        Command::Coset { element } => {
            let q = coset_invariant(&input::element(element)?).map_err(e)?;
            emit(cli, &q, json!({"projection": q}));
        }
        Command::Trace { projection } => {
            let t = input::projection(projection)?.trace();
            emit(cli, &t, json!({"trace": t.to_string()}));
        }
        Command::Omega2 { projection } => {
            let p = input::projection(projection)?;
            let v = omega2_member(&p);
            let yes = v.is_some();
            let (text, value) = match &v {
                Some((k, m)) => (
                    format!("yes k={k} m={m}"),
                    json!({"member": true, "k": k.to_string(), "m": m, "trace": p.trace().to_string()}),
                ),
                None => ("no".to_string(), json!({"member": false, "trace": p.trace().to_string()})),
            };
            emit(cli, text, value);
            return Ok(if yes { Outcome::Yes } else { Outcome::No });
        }
        Command::Realize { projection } => {
            let f = realize(&input::projection(projection)?).map_err(e)?;
            emit(cli, &f, element_json(&f));
        }
        Command::Orbit { depth, start, out } => {
            check_depth(cli, *depth)?;
            let o = orbit_layers(&input::projection(start)?, *depth).map_err(e)?;
            let record = o.record();
            match out {
                Some(path) => {
                    let file = File::create(path).map_err(|err| format!("creating {}: {err}", path.display()))?;
                    let mut w = BufWriter::new(file);
                    record.write_to(&mut w).and_then(|_| w.flush()).map_err(|err| err.to_string())?;
                    emit(
                        cli,
                        format!("{} projections to depth {depth} written to {}", o.len(), path.display()),
                        json!({"projections": o.len(), "depth": depth, "out": path.display().to_string()}),
                    );
                }
                None => print!("{}", record.to_ndjson()),
            }
        }
        Command::Embed { projection, depth } => {
            check_depth(cli, *depth)?;
            let pair = embed(&input::projection(projection)?, *depth).map_err(e)?;
            emit(cli, &pair, serde_json::to_value(&pair).unwrap());
        }
        Command::BoundaryAct { element, pair } => {
            let pair = input::pair(pair)?;
            check_depth(cli, pair.depth())?;
            let out = act_truncated(&input::element(element)?, &pair).map_err(e)?;
            emit(cli, &out, serde_json::to_value(&out).unwrap());
        }
        Command::Realizable { pair } => {
            let pair = input::pair(pair)?;
            check_depth(cli, pair.depth())?;
            let yes = is_realizable(&pair).map_err(e)?;
            return Ok(verdict(cli, yes, json!({"realizable": yes})));
        }
        Command::Witness { pair } => {
            let pair = input::pair(pair)?;
            check_depth(cli, pair.depth())?;
            let (q, q2) = non_isolation_witness(&pair).map_err(e)?;
            emit(cli, format!("{q}\n{q2}"), json!({"witnesses": [q, q2]}));
        }
        Command::Separate { elements } => {
            let fs = elements.iter().map(|s| input::element(s)).collect::<CliResult<Vec<_>>>()?;
            let cert = independence_certificate(&fs).map_err(e)?;
            let mut text = format!("p = {}", cert.p);
            for (i, q) in cert.images.iter().enumerate() {
                text.push_str(&format!("\n{i}: {q}"));
            }
            emit(cli, text, serde_json::to_value(&cert).unwrap());
        }
        Command::Dot { kind, element } => {
            print!("{}", export_dot(*kind, &input::element(element)?));
        }
        Command::Height { element } => {
            let h = input::element(element)?.height();
            emit(cli, h, json!({"height": h}));
        }
        Command::Abel { element } => {
            let (a, b) = input::element(element)?.abelianization().map_err(e)?;
            emit(cli, format!("{a} {b}"), json!({"abelianization": [a, b]}));
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done | Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

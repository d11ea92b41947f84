//! The `wahl` command-line front end.
//!
//! [`run`] parses arguments, dispatches to the library, and renders an
//! [`OutputRecord`] as a table, JSON or CSV. Exit codes: 0 on success,
//! 1 on a domain error (or a failing `verify`), 2 on a usage error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bundle::{
    c2_closed_form, euler_pairing, exceptional_c2, left_mutation_numerics, riemann_roch, surface_w,
    BundleNumerics, SurfaceNumerics,
};
use crate::correspondence::{
    blowup_family, canonical_bundle_class, descent_family, mutation_family, phi_backward, phi_forward,
    smoothable_surfaces, wahl_a_of_triple,
};
use crate::cyclic_quotient::{
    cq_to_wahl, link_data, link_to_milnor_kernel_order, milnor_fiber_homology, minimal_resolution,
    pair_to_cq, wahl_contraction, wahl_contraction_from_chain, CyclicQuotient, WahlPair,
};
use crate::error::{Error, Result};
use crate::exact::{chain_determinant, hj_expand};
use crate::markov::{descend, enumerate, is_markov, mutate_entries, MarkovTriple};
use crate::serial::rational_json;
use crate::toric::{
    blowup_self_intersection_k, toric_wahl_contraction, weighted_blowup, wps_data, wps_singular_charts,
    Lattice2,
};
use crate::verify::{run_selected, VerifyConfig, CHECKS};

/// Environment variable: preferred table width in columns.
pub const WIDTH_ENV: &str = "WAHL_TABLE_WIDTH";

#[derive(Parser, Debug)]
#[command(
    name = "wahl",
    version,
    about = "Exact computations for Wahl singularities, Markov triples and exceptional bundles on P²"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write output to FILE instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Markov triples.
    Markov {
        #[command(subcommand)]
        cmd: MarkovCmd,
    },
    /// Wahl singularities 1/n²(1, na-1).
    Wahl {
        #[command(subcommand)]
        cmd: WahlCmd,
    },
    /// Toric surfaces and weighted projective spaces.
    Toric {
        #[command(subcommand)]
        cmd: ToricCmd,
    },
    /// Chern-class numerics on P² or W_{n,a}.
    Bundle {
        #[command(subcommand)]
        cmd: BundleCmd,
    },
    /// The map between Markov triples and exceptional bundle classes.
    Phi {
        #[command(subcommand)]
        cmd: PhiCmd,
    },
    /// Degeneration families.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Triple {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

#[derive(Args, Debug)]
struct Pair {
    /// Index n.
    n: BigInt,
    /// Parameter a, coprime to n with 0 < a < n.
    a: BigInt,
}

#[derive(Subcommand, Debug)]
enum MarkovCmd {
    /// All canonical triples with largest entry at most MAX.
    Enumerate {
        #[arg(long, alias = "bound")]
        max: BigInt,
    },
    /// Mutate the entry at position POS (1, 2 or 3).
    Mutate {
        #[command(flatten)]
        triple: Triple,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        pos: u8,
    },
    /// Walk down the mutation tree to (1, 1, 1).
    Descend {
        #[command(flatten)]
        triple: Triple,
    },
}

#[derive(Subcommand, Debug)]
enum WahlCmd {
    /// Minimal resolution chain of 1/n²(1, na-1).
    Resolve {
        #[command(flatten)]
        pair: Pair,
    },
    /// Singularity left after contracting all but the first chain curve.
    Contract {
        #[command(flatten)]
        pair: Pair,
    },
    /// Homology of the Milnor fibre of index N.
    Milnor { n: BigInt },
    /// Link of the cyclic quotient 1/R(1, Q).
    Link {
        r: BigInt,
        #[arg(allow_negative_numbers = true)]
        q: BigInt,
    },
}

#[derive(Subcommand, Debug)]
enum ToricCmd {
    /// Numerics of the weighted projective space P(W...).
    Wps {
        #[arg(required = true, num_args = 2..)]
        weights: Vec<BigInt>,
    },
    /// Weighted blowup of 1/R(1, Q) with weight (1/R)(W1, W2).
    Blowup { r: BigInt, q: BigInt, w1: BigInt, w2: BigInt },
    /// (D')² on the weighted blowup of P(1, na-1, a²).
    Selfint {
        #[command(flatten)]
        pair: Pair,
    },
}

#[derive(Args, Debug)]
struct SurfaceArg {
    /// Work on W_{N,A} instead of P².
    #[arg(long, num_args = 2, value_names = ["N", "A"])]
    wahl: Option<Vec<BigInt>>,
}

#[derive(Args, Debug)]
struct BundleArg {
    rank: BigInt,
    #[arg(allow_negative_numbers = true)]
    degree: BigInt,
    /// c2 as an integer or a fraction p/q.
    #[arg(allow_negative_numbers = true)]
    c2: BigRational,
}

#[derive(Subcommand, Debug)]
enum BundleCmd {
    /// c2 forced by χ(End) = 1.
    C2 {
        rank: BigInt,
        #[arg(allow_negative_numbers = true)]
        degree: BigInt,
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Euler characteristic by Riemann–Roch.
    Rr {
        #[command(flatten)]
        bundle: BundleArg,
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Numerics of the left mutation, given h⁰.
    Mutate {
        #[command(flatten)]
        bundle: BundleArg,
        h0: BigInt,
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Euler pairing χ(E, F).
    Pair {
        r1: BigInt,
        #[arg(allow_negative_numbers = true)]
        d1: BigInt,
        #[arg(allow_negative_numbers = true)]
        c2_1: BigRational,
        r2: BigInt,
        #[arg(allow_negative_numbers = true)]
        d2: BigInt,
        #[arg(allow_negative_numbers = true)]
        c2_2: BigRational,
        #[command(flatten)]
        surface: SurfaceArg,
    },
}

#[derive(Subcommand, Debug)]
enum PhiCmd {
    /// Bundle class of a Markov triple; POS defaults to the largest entry.
    Forward {
        #[command(flatten)]
        triple: Triple,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        pos: Option<u8>,
    },
    /// Markov triple of the bundle class of rank R and degree D.
    Backward {
        r: BigInt,
        #[arg(allow_negative_numbers = true)]
        d: BigInt,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    /// Blowup family with exceptional surface W_{n,a}.
    Blowup {
        #[command(flatten)]
        pair: Pair,
    },
    /// Degeneration of W_{n,a} to P(1, na-1, a²).
    Descent {
        #[command(flatten)]
        pair: Pair,
    },
    /// Family joining P(a², b², c²) and its mutation.
    Mutation {
        #[command(flatten)]
        triple: Triple,
    },
    /// Partial smoothings of P(a², b², c²).
    Smoothings {
        #[command(flatten)]
        triple: Triple,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Largest Markov entry to enumerate.
    #[arg(long)]
    bound: Option<BigInt>,
    /// Upper end of every index, order and rank range.
    #[arg(long)]
    n_max: Option<u64>,
    /// Run only these checks (1-based, comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<usize>,
}

/// One command's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub kind: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub anchors: Vec<String>,
}

impl OutputRecord {
    fn new<T: Serialize>(kind: &str, inputs: &[(&str, String)], result: &T, anchors: &[&str]) -> Self {
        Self {
            kind: kind.into(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            result: serde_json::to_value(result).expect("library values serialize"),
            anchors: anchors.iter().map(|s| s.to_string()).collect(),
        }
    }
}

enum Failure {
    Domain(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("error: invalid usage");
            let _ = writeln!(stderr, "{first} (see --help)");
            return 2;
        }
    };
    let (record, ok) = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let text = render(&record, cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(Failure::Io),
        None => stdout.write_all(text.as_bytes()).map_err(Failure::Io),
    };
    match written {
        Ok(()) => {
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: cannot write output: {e}");
            1
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn s(v: &impl ToString) -> String {
    v.to_string()
}

fn triple_inputs(t: &Triple) -> Vec<(&'static str, String)> {
    vec![("a", s(&t.a)), ("b", s(&t.b)), ("c", s(&t.c))]
}

fn pair_inputs(p: &Pair) -> Vec<(&'static str, String)> {
    vec![("n", s(&p.n)), ("a", s(&p.a))]
}

fn markov_entries(t: &Triple) -> Result<[BigInt; 3]> {
    MarkovTriple::new(t.a.clone(), t.b.clone(), t.c.clone())?;
    Ok([t.a.clone(), t.b.clone(), t.c.clone()])
}

fn surface(arg: &SurfaceArg) -> Result<(SurfaceNumerics, String)> {
    match &arg.wahl {
        None => Ok((SurfaceNumerics::projective_plane(), "P2".into())),
        Some(v) => {
            let w = WahlPair::new(&v[0], &v[1])?;
            Ok((surface_w(&w), format!("W_{{{},{}}}", v[0], v[1])))
        }
    }
}

fn bundle(b: &BundleArg) -> Result<BundleNumerics> {
    BundleNumerics::new(b.rank.clone(), b.degree.clone(), b.c2.clone())
}

fn tagged(map: Value, extra: &[(&str, Value)]) -> Value {
    let mut out = match map {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    for (k, v) in extra {
        out.insert((*k).into(), v.clone());
    }
    Value::Object(out)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library values serialize")
}

fn execute(cmd: &Command) -> Result<(OutputRecord, bool)> {
    let rec = match cmd {
        Command::Markov { cmd } => match cmd {
            MarkovCmd::Enumerate { max } => {
                let rows: Vec<Value> = enumerate(max)
                    .iter()
                    .map(|t| {
                        let [a, b, c] = t.entries();
                        json!({"a": s(a), "b": s(b), "c": s(c)})
                    })
                    .collect();
                OutputRecord::new(
                    "markov.enumerate",
                    &[("max", s(max))],
                    &rows,
                    &["markov-equation", "mutation-tree"],
                )
            }
            MarkovCmd::Mutate { triple, pos } => {
                let e = markov_entries(triple)?;
                let raw = mutate_entries(&e, usize::from(*pos) - 1)?;
                debug_assert!(is_markov(&raw[0], &raw[1], &raw[2]));
                let canonical = MarkovTriple::from_entries(raw.clone())?;
                let mut inputs = triple_inputs(triple);
                inputs.push(("pos", s(pos)));
                let result = json!({
                    "raw": raw.iter().map(s).collect::<Vec<_>>(),
                    "canonical": to_value(&canonical),
                });
                OutputRecord::new("markov.mutate", &inputs, &result, &["markov-mutation"])
            }
            MarkovCmd::Descend { triple } => {
                let e = markov_entries(triple)?;
                let t = MarkovTriple::from_entries(e)?;
                let steps: Vec<Value> = descend(&t)
                    .iter()
                    .map(|st| {
                        json!({
                            "from": to_value(&st.from),
                            "position": s(&(st.position + 1)),
                            "to": to_value(&st.to),
                        })
                    })
                    .collect();
                OutputRecord::new(
                    "markov.descend",
                    &triple_inputs(triple),
                    &steps,
                    &["markov-mutation", "mutation-tree"],
                )
            }
        },
        Command::Wahl { cmd } => match cmd {
            WahlCmd::Resolve { pair } => {
                let w = WahlPair::new(&pair.n, &pair.a)?;
                let n2 = &pair.n * &pair.n;
                let chain = hj_expand(&n2, &w.na_minus_one())?;
                let cq = pair_to_cq(&w);
                let result = json!({
                    "presentation": format!("1/{}(1, {})", n2, w.na_minus_one()),
                    "quotient": to_value(&cq),
                    "quotient_text": cq.to_string(),
                    "chain": to_value(&chain),
                    "determinant": s(&chain_determinant(&chain)),
                    "canonical_chain": to_value(&minimal_resolution(&cq)),
                    "wahl": to_value(&w.class()),
                });
                OutputRecord::new(
                    "wahl.resolve",
                    &pair_inputs(pair),
                    &result,
                    &["wahl-singularity", "hirzebruch-jung-expansion"],
                )
            }
            WahlCmd::Contract { pair } => {
                let w = WahlPair::new(&pair.n, &pair.a)?;
                let closed = wahl_contraction(&w);
                let chain = wahl_contraction_from_chain(&w);
                let toric = toric_wahl_contraction(&w);
                let result = json!({
                    "contraction": to_value(&closed),
                    "contraction_text": closed.to_string(),
                    "from_chain": to_value(&chain),
                    "from_toric_blowup": to_value(&toric),
                    "agree": closed == chain && closed == toric,
                });
                OutputRecord::new(
                    "wahl.contract",
                    &pair_inputs(pair),
                    &result,
                    &["blowup-construction", "chain-contraction"],
                )
            }
            WahlCmd::Milnor { n } => {
                let h = milnor_fiber_homology(n)?;
                let result = tagged(
                    to_value(&h),
                    &[
                        ("h0_text", json!(h.h0.to_string())),
                        ("h1_text", json!(h.h1.to_string())),
                        ("h2_text", json!(h.h2.to_string())),
                    ],
                );
                OutputRecord::new("wahl.milnor", &[("n", s(n))], &result, &["milnor-fibre-model"])
            }
            WahlCmd::Link { r, q } => {
                let cq = CyclicQuotient::new(r, &crate::exact::modulo(q, r))?;
                let link = link_data(&cq);
                let mut result = tagged(to_value(&link), &[("h1_text", json!(link.h1.to_string()))]);
                if let Some(w) = cq_to_wahl(&cq) {
                    result = tagged(
                        result,
                        &[
                            ("wahl", to_value(&w)),
                            ("milnor_h1_order", json!(s(w.n()))),
                            ("kernel_order", json!(s(&link_to_milnor_kernel_order(&w)))),
                        ],
                    );
                }
                OutputRecord::new("wahl.link", &[("r", s(r)), ("q", s(q))], &result, &["lens-space-link"])
            }
        },
        Command::Toric { cmd } => match cmd {
            ToricCmd::Wps { weights } => {
                let data = wps_data(weights)?;
                let mut result = to_value(&data);
                if weights.len() == 3 {
                    result = tagged(result, &[("singular_charts", to_value(&wps_singular_charts(weights)?))]);
                }
                let inputs = [("weights", weights.iter().map(s).collect::<Vec<_>>().join(","))];
                OutputRecord::new("toric.wps", &inputs, &result, &["weighted-projective-space"])
            }
            ToricCmd::Blowup { r, q, w1, w2 } => {
                let cq = CyclicQuotient::new(r, q)?;
                let lattice = Lattice2::new(r, &BigInt::one(), q)?;
                let b = weighted_blowup(&lattice, w1, w2)?;
                let result = tagged(to_value(&b), &[("cone", json!(cq.to_string()))]);
                let inputs = [("r", s(r)), ("q", s(q)), ("w1", s(w1)), ("w2", s(w2))];
                OutputRecord::new("toric.blowup", &inputs, &result, &["weighted-blowup"])
            }
            ToricCmd::Selfint { pair } => {
                let w = WahlPair::new(&pair.n, &pair.a)?;
                let k = blowup_self_intersection_k(&w)?;
                let closed = &pair.n / &pair.a;
                let result =
                    json!({"self_intersection": s(&k), "floor_n_over_a": s(&closed), "agree": k == closed});
                OutputRecord::new("toric.selfint", &pair_inputs(pair), &result, &["toric-self-intersection"])
            }
        },
        Command::Bundle { cmd } => match cmd {
            BundleCmd::C2 { rank, degree, surface: sa } => {
                let (surf, name) = surface(sa)?;
                let c2 = exceptional_c2(rank, degree, &surf)?;
                let c1sq = BigRational::from_integer(degree * degree) * &surf.h_squared;
                let result = json!({
                    "c2": rational_json(&c2),
                    "closed_form": rational_json(&c2_closed_form(rank, &c1sq)),
                    "integral": c2.is_integer(),
                });
                let inputs = [("rank", s(rank)), ("degree", s(degree)), ("surface", name)];
                OutputRecord::new("bundle.c2", &inputs, &result, &["exceptional-c2"])
            }
            BundleCmd::Rr { bundle: ba, surface: sa } => {
                let (surf, name) = surface(sa)?;
                let b = bundle(ba)?;
                let result = json!({"chi": rational_json(&riemann_roch(&b, &surf))});
                let inputs =
                    [("rank", s(&ba.rank)), ("degree", s(&ba.degree)), ("c2", s(&ba.c2)), ("surface", name)];
                OutputRecord::new("bundle.rr", &inputs, &result, &["riemann-roch"])
            }
            BundleCmd::Mutate { bundle: ba, h0, surface: sa } => {
                let (surf, name) = surface(sa)?;
                let b = bundle(ba)?;
                let m = left_mutation_numerics(&b, h0, &surf)?;
                let result = tagged(to_value(&m), &[("slope", rational_json(&m.slope()))]);
                let inputs = [
                    ("rank", s(&ba.rank)),
                    ("degree", s(&ba.degree)),
                    ("c2", s(&ba.c2)),
                    ("h0", s(h0)),
                    ("surface", name),
                ];
                OutputRecord::new("bundle.mutate", &inputs, &result, &["left-mutation"])
            }
            BundleCmd::Pair { r1, d1, c2_1, r2, d2, c2_2, surface: sa } => {
                let (surf, name) = surface(sa)?;
                let e = BundleNumerics::new(r1.clone(), d1.clone(), c2_1.clone())?;
                let f = BundleNumerics::new(r2.clone(), d2.clone(), c2_2.clone())?;
                let result = json!({"chi": rational_json(&euler_pairing(&e, &f, &surf))});
                let inputs = [
                    ("e", format!("({r1}, {d1}, {c2_1})")),
                    ("f", format!("({r2}, {d2}, {c2_2})")),
                    ("surface", name),
                ];
                OutputRecord::new("bundle.pair", &inputs, &result, &["euler-pairing"])
            }
        },
        Command::Phi { cmd } => match cmd {
            PhiCmd::Forward { triple, pos } => {
                let e = markov_entries(triple)?;
                let t = MarkovTriple::from_entries(e.clone())?;
                let value = match pos {
                    Some(p) => e[usize::from(*p) - 1].clone(),
                    None => t.largest().clone(),
                };
                let canonical_pos = t.position_of(&value).expect("entry of the triple");
                let b = phi_forward(&t, canonical_pos)?;
                let a = wahl_a_of_triple(&t, canonical_pos)?;
                let result = tagged(
                    to_value(&b),
                    &[("triple", to_value(&t)), ("wahl", json!({"n": s(&value), "a": s(&a)}))],
                );
                let mut inputs = triple_inputs(triple);
                inputs.push(("pos", pos.map_or("max".into(), |p| s(&p))));
                OutputRecord::new(
                    "phi.forward",
                    &inputs,
                    &result,
                    &["vertex-parameter", "bundle-degree-congruence"],
                )
            }
            PhiCmd::Backward { r, d } => {
                let b = canonical_bundle_class(r, d)?;
                let t = phi_backward(&b)?;
                let result = json!({"class": to_value(&b), "triple": to_value(&t)});
                OutputRecord::new(
                    "phi.backward",
                    &[("r", s(r)), ("d", s(d))],
                    &result,
                    &["markov-classification-of-exceptional-bundles"],
                )
            }
        },
        Command::Family { cmd } => match cmd {
            FamilyCmd::Blowup { pair } => {
                let r = blowup_family(&WahlPair::new(&pair.n, &pair.a)?)?;
                let result = tagged(to_value(&r), &[("equation_text", json!(r.equation.to_string()))]);
                OutputRecord::new("family.blowup", &pair_inputs(pair), &result, &["blowup-construction"])
            }
            FamilyCmd::Descent { pair } => {
                let r = descent_family(&WahlPair::new(&pair.n, &pair.a)?)?;
                let result = tagged(to_value(&r), &[("equation_text", json!(r.equation.to_string()))]);
                OutputRecord::new("family.descent", &pair_inputs(pair), &result, &["descent-construction"])
            }
            FamilyCmd::Mutation { triple } => {
                let r = mutation_family(&triple.a, &triple.b, &triple.c)?;
                let result = tagged(to_value(&r), &[("equation_text", json!(r.equation.to_string()))]);
                OutputRecord::new("family.mutation", &triple_inputs(triple), &result, &["mutation-family"])
            }
            FamilyCmd::Smoothings { triple } => {
                let t = MarkovTriple::new(triple.a.clone(), triple.b.clone(), triple.c.clone())?;
                let rows: Vec<Value> = smoothable_surfaces(&t)?
                    .iter()
                    .map(|p| {
                        json!({
                            "smoothed": p.smoothed.iter().map(|i| s(&(i + 1))).collect::<Vec<_>>(),
                            "remaining": p.remaining.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                            "projective_plane": p.is_projective_plane,
                        })
                    })
                    .collect();
                OutputRecord::new("family.smoothings", &triple_inputs(triple), &rows, &["partial-smoothings"])
            }
        },
        Command::Verify(args) => {
            let mut config = VerifyConfig::default();
            if let Some(b) = &args.bound {
                config = config.with_bound(b.clone());
            }
            if let Some(n) = args.n_max {
                config = config.with_n_max(n);
            }
            if let Some(bad) = args.only.iter().find(|&&i| i == 0 || i > CHECKS.len()) {
                return Err(Error::InvalidArgument(format!(
                    "check {bad} does not exist; checks are numbered 1 to {}",
                    CHECKS.len()
                )));
            }
            let only = args.only.clone();
            let results = run_selected(&config, |i| only.is_empty() || only.contains(&i));
            let ok = results.iter().all(|r| r.passed);
            let rows: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "index": s(&r.index),
                        "status": if r.passed { "PASS" } else { "FAIL" },
                        "check": r.name,
                        "cases": s(&r.cases),
                        "detail": r.detail,
                    })
                })
                .collect();
            let inputs = [
                ("bound", s(&config.markov_max)),
                ("phi_bound", s(&config.phi_max)),
                ("only", only.iter().map(s).collect::<Vec<_>>().join(",")),
            ];
            return Ok((OutputRecord::new("verify", &inputs, &rows, &["all"]), ok));
        }
    };
    Ok((rec, true))
}

/// Renders a record in the requested format.
pub fn render(rec: &OutputRecord, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(rec).expect("records serialize");
            text.push('\n');
            text
        }
        Format::Csv => render_csv(rec),
        Format::Table => render_table(rec, table_width()),
    }
}

fn table_width() -> usize {
    std::env::var(WIDTH_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w >= 20)
        .unwrap_or(100)
}

fn is_rational(m: &serde_json::Map<String, Value>) -> bool {
    m.len() == 2 && m.get("num").is_some_and(Value::is_string) && m.get("den").is_some_and(Value::is_string)
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("-".into()),
        Value::Object(m) if is_rational(m) => {
            let (num, den) = (m["num"].as_str().unwrap_or(""), m["den"].as_str().unwrap_or(""));
            Some(if den == "1" { num.to_string() } else { format!("{num}/{den}") })
        }
        _ => None,
    }
}

/// Flattens nested data into `(path, text)` rows.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    if let Some(text) = scalar_text(v) {
        out.push((prefix.to_string(), text));
        return;
    }
    match v {
        Value::Object(m) if m.is_empty() => out.push((prefix.to_string(), "{}".into())),
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(xs) => {
            let scalars: Option<Vec<String>> = xs.iter().map(scalar_text).collect();
            match scalars {
                Some(items) => out.push((prefix.to_string(), format!("[{}]", items.join(", ")))),
                None => {
                    for (i, x) in xs.iter().enumerate() {
                        flatten(&format!("{prefix}[{i}]"), x, out);
                    }
                }
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

/// Rows for an array of records, with the union of their columns in first-seen order.
fn as_rows(v: &Value) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let xs = v.as_array()?;
    if !xs.iter().all(|x| matches!(x, Value::Object(m) if !is_rational(m))) {
        return None;
    }
    let flat: Vec<Vec<(String, String)>> = xs
        .iter()
        .map(|x| {
            let mut out = Vec::new();
            flatten("", x, &mut out);
            out
        })
        .collect();
    let mut columns: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let rows = flat
        .iter()
        .map(|row| {
            columns
                .iter()
                .map(|c| row.iter().find(|(k, _)| k == c).map_or(String::new(), |(_, v)| v.clone()))
                .collect()
        })
        .collect();
    Some((columns, rows))
}

fn wrap(text: &str, width: usize) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() <= width || width == 0 {
        return vec![text.to_string()];
    }
    chars.chunks(width).map(|c| c.iter().collect()).collect()
}

fn render_table(rec: &OutputRecord, width: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", rec.kind);
    if !rec.inputs.is_empty() {
        let inputs: Vec<String> = rec.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "  inputs: {}", inputs.join(" "));
    }
    if let Some((columns, rows)) = as_rows(&rec.result) {
        if rows.is_empty() {
            let _ = writeln!(out, "  (no rows)");
        }
        let widths: Vec<usize> = (0..columns.len())
            .map(|i| {
                rows.iter()
                    .map(|r| r[i].chars().count())
                    .chain(std::iter::once(columns[i].chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
            format!("  {}", padded.join("  ").trim_end())
        };
        if !rows.is_empty() {
            let _ = writeln!(out, "{}", line(&columns));
            for r in &rows {
                let _ = writeln!(out, "{}", line(r));
            }
        }
    } else {
        let mut flat = Vec::new();
        flatten("", &rec.result, &mut flat);
        let key_width = flat.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let value_width = width.saturating_sub(key_width + 4).max(16);
        for (k, v) in &flat {
            for (i, piece) in wrap(v, value_width).iter().enumerate() {
                let key = if i == 0 { k.as_str() } else { "" };
                let _ = writeln!(out, "  {key:<key_width$}  {piece}");
            }
        }
    }
    if !rec.anchors.is_empty() {
        let _ = writeln!(out, "  anchors: {}", rec.anchors.join(", "));
    }
    out
}

fn render_csv(rec: &OutputRecord) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    match as_rows(&rec.result) {
        Some((columns, rows)) => {
            let _ = w.write_record(&columns);
            for r in rows {
                let _ = w.write_record(&r);
            }
        }
        None => {
            let mut flat = Vec::new();
            flatten("", &rec.result, &mut flat);
            let _ = w.write_record(["key", "value"]);
            for (k, v) in flat {
                let _ = w.write_record([k, v]);
            }
        }
    }
    let bytes = w.into_inner().expect("in-memory writer");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("wahl").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn flatten_rationals_and_lists() {
        let v = json!({"x": {"num": "14", "den": "5"}, "y": ["1", "2"], "z": {"w": true}});
        let mut out = Vec::new();
        flatten("", &v, &mut out);
        assert_eq!(
            out,
            vec![
                ("x".to_string(), "14/5".to_string()),
                ("y".to_string(), "[1, 2]".to_string()),
                ("z.w".to_string(), "true".to_string()),
            ]
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["phi", "forward", "1", "1", "2"]).0, 0);
        assert_eq!(run_capture(&["phi", "forward", "1", "1", "3"]).0, 1);
        assert_eq!(run_capture(&["phi", "sideways"]).0, 2);
        assert_eq!(run_capture(&["wahl", "resolve", "5", "x"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn wrap_long_values() {
        assert_eq!(wrap("abcdef", 4), vec!["abcd".to_string(), "ef".to_string()]);
        assert_eq!(wrap("abc", 4), vec!["abc".to_string()]);
    }

    #[test]
    fn int_helper_is_decimal() {
        assert_eq!(s(&int(-12)), "-12");
    }
}

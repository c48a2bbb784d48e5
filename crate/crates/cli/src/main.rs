use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use valkey_core::bipoly::BiPoly;
use valkey_core::birat::transform_chain;
use valkey_core::genseq::{expand, residue_of, synthesize, value_json, value_of, GenSeq, SynthesisInput};
use valkey_core::rat::{json_rat, parse_rat, to_decimal, Rat};
use valkey_core::series::{CompositeValuation, SeriesOracle, DEFAULT_CAP};
use valkey_core::subring::{a2_semigroup, check_parity, gap_witness, non_fg_module_witness};
use valkey_core::tower::BaseField;
use valkey_core::valuation::{burn_in, density, describe, describe_values, is_symmetric, SemigroupDescription, Valuation};
use valkey_core::values::{validate_semigroup_data, Card, Mode, Value};

#[derive(Parser)]
#[command(name = "valkey", version, about = "Key polynomials and value semigroups of plane valuations")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Add a k-digit decimal approximation next to exact values.
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check semigroup data (betas, optional dees) for admissibility.
    Validate { input: String },
    /// Synthesize the key polynomials of admissible data.
    Build {
        input: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Value of a polynomial, and the residue [f/g] with --over.
    Eval {
        seq: String,
        poly: String,
        #[arg(long)]
        over: Option<String>,
    },
    /// Recover the key polynomials of a series or composite valuation.
    Analyze(AnalyzeArgs),
    /// Canonical expansion of a polynomial in the keys.
    Expand { seq: String, poly: String },
    /// Iterated quadratic transforms.
    Transform {
        seq: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Minimal generators of the value semigroup.
    Semigroup {
        input: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// φ(n)/n² as CSV (JSON with --json).
    Density {
        input: String,
        #[arg(long, default_value_t = 64)]
        n: u64,
    },
    /// Symmetry and Frobenius element of a discrete rank-one semigroup.
    Symmetric { input: String },
    /// Semigroup of the subring k[x², xy, y²] and its non-finite-generation witnesses.
    A2(A2Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Series,
    Composite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Sqrt1px,
    Coeffs,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    oracle: OracleKind,
    /// Branch: y = x√(1+x) or y = Σ a_i x^i from --coeffs.
    #[arg(long, value_enum, default_value = "sqrt1px")]
    param: Param,
    /// Comma-separated a_1, a_2, … for --param coeffs.
    #[arg(long)]
    coeffs: Option<String>,
    /// Curve through the branch (composite oracle).
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Series truncation hard cap.
    #[arg(long, env = "VALKEY_CAP")]
    cap: Option<usize>,
}

#[derive(Args)]
struct A2Args {
    input: String,
    /// Elements and generators below this value.
    #[arg(long, default_value = "10")]
    bound: String,
    /// Comma-separated n for gap witnesses.
    #[arg(long)]
    gap: Option<String>,
    /// Module witnesses for n = 0..=N.
    #[arg(long)]
    module: Option<usize>,
}

enum Failure {
    Input(String),
    Core(valkey_core::Error),
}

impl From<valkey_core::Error> for Failure {
    fn from(e: valkey_core::Error) -> Self {
        Failure::Core(e)
    }
}

type Out<T> = std::result::Result<T, Failure>;

fn read_json(path: &str) -> Out<serde_json::Value> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {}", e)))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path, e)))?
    };
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: line {}, column {}: {}", path, e.line(), e.column(), e)))
}

fn is_sequence(v: &serde_json::Value) -> bool {
    v.get("keys").is_some()
}

fn load_seq(path: &str) -> Out<GenSeq> {
    let v = read_json(path)?;
    if is_sequence(&v) {
        return Ok(GenSeq::from_json(&v)?);
    }
    build_seq(&SynthesisInput::from_json(&v)?, None)
}

fn build_seq(input: &SynthesisInput, depth: Option<usize>) -> Out<GenSeq> {
    let depth = depth.or(input.depth).unwrap_or(input.betas.len() - 1);
    Ok(synthesize(&input.betas, &input.tower, depth)?)
}

/// A semigroup from a bare "generators" list, a sequence, or synthesis data
/// (synthesized only when `keys` is set).
fn load_desc(path: &str, depth: Option<usize>, keys: bool) -> Out<(SemigroupDescription, Option<GenSeq>)> {
    let v = read_json(path)?;
    if let Some(g) = v.get("generators") {
        let mode = match v.get("mode").and_then(|m| m.as_str()) {
            Some(m) => Mode::parse(m)?,
            None => Mode::Rank1,
        };
        let gens = g
            .as_array()
            .ok_or_else(|| Failure::Input("\"generators\" must be an array".into()))?
            .iter()
            .map(|x| Value::from_json(x, mode))
            .collect::<valkey_core::Result<Vec<_>>>()?;
        return Ok((SemigroupDescription::from_generators(&gens)?, None));
    }
    if is_sequence(&v) {
        let seq = GenSeq::from_json(&v)?;
        let d = depth.unwrap_or(seq.depth());
        return Ok((describe(&seq, d)?, Some(seq)));
    }
    let input = SynthesisInput::from_json(&v)?;
    if !keys {
        let betas = match depth {
            Some(d) => &input.betas[..(d + 2).min(input.betas.len())],
            None => &input.betas[..],
        };
        return Ok((describe_values(betas, input.options.finite)?, None));
    }
    let seq = build_seq(&input, depth)?;
    let d = depth.unwrap_or(seq.depth());
    Ok((describe(&seq, d)?, Some(seq)))
}

fn parse_poly(s: &str, field: BaseField) -> Out<BiPoly> {
    Ok(BiPoly::parse(s, field)?)
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Out<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Failure::Input(format!("bad list entry {:?}", t))))
        .collect()
}

struct Printer {
    json: bool,
    decimal: Option<usize>,
}

impl Printer {
    fn value(&self, v: &Value) -> String {
        match self.decimal {
            Some(k) => format!("{}  ~{}", v, v.to_decimal(k)),
            None => v.to_string(),
        }
    }

    fn rat(&self, r: &Rat) -> String {
        match self.decimal {
            Some(k) => format!("{}  ~{}", json_rat(r), to_decimal(r, k)),
            None => json_rat(r),
        }
    }

    fn emit(&self, human: &str, machine: serde_json::Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&machine).expect("json serializes"));
        } else {
            println!("{}", human);
        }
    }
}

fn nbars_text(n: &[Card]) -> String {
    format!("[{}]", n.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
}

fn run(cli: Cli) -> Out<ExitCode> {
    let pr = Printer { json: cli.json, decimal: cli.decimal };
    match cli.cmd {
        Cmd::Validate { input } => {
            let input = SynthesisInput::from_json(&read_json(&input)?)?;
            let r = validate_semigroup_data(&input.betas, input.dees.as_deref(), input.options)?;
            let human = match &r.first_violation {
                None => format!("OK: nbars={}", nbars_text(&r.nbars)),
                Some(v) => format!("VIOLATION at index {}: {}; nbars={}", v.index, v.message, nbars_text(&r.nbars)),
            };
            pr.emit(&human, serde_json::to_value(&r).expect("report serializes"));
            return Ok(if r.ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Cmd::Build { input, depth } => {
            let input = SynthesisInput::from_json(&read_json(&input)?)?;
            let seq = build_seq(&input, depth)?;
            println!("{}", serde_json::to_string_pretty(&seq.to_json()).expect("json serializes"));
        }
        Cmd::Eval { seq, poly, over } => {
            let s = load_seq(&seq)?;
            let f = parse_poly(&poly, s.field())?;
            let v = value_of(&f, &s)?;
            let mut out = json!({ "value": value_json(&v, s.mode()) });
            let mut human = pr.value(&v);
            if let Some(g) = over {
                let g = parse_poly(&g, s.field())?;
                let r = residue_of(&f, &g, &s)?;
                let text = match r.as_scalar() {
                    Some(c) => valkey_core::rat::fmt_rat(&c),
                    None => s.tower().fmt_elem(&r),
                };
                human = format!("{}\nresidue: {}", human, text);
                out["residue"] = json!(text);
            }
            pr.emit(&human, out);
        }
        Cmd::Analyze(a) => {
            let field = BaseField::parse(&a.field)?;
            let oracle = match a.param {
                Param::Sqrt1px => SeriesOracle::sqrt1px(field)?,
                Param::Coeffs => {
                    let c = a.coeffs.as_deref().ok_or_else(|| Failure::Input("--param coeffs needs --coeffs".into()))?;
                    let cs = c.split(',').map(parse_rat).collect::<valkey_core::Result<Vec<_>>>()?;
                    SeriesOracle::polynomial(field, cs)?
                }
            };
            let oracle = oracle.with_cap(a.cap.unwrap_or(DEFAULT_CAP));
            let val = match a.oracle {
                OracleKind::Series => Valuation::series(oracle),
                OracleKind::Composite => {
                    let g = a.g.as_deref().ok_or_else(|| Failure::Input("--oracle composite needs --g".into()))?;
                    Valuation::composite(CompositeValuation::new(parse_poly(g, field)?, oracle)?)
                }
            };
            let seq = val.sequence(a.depth)?;
            println!("{}", serde_json::to_string_pretty(&seq.to_json()).expect("json serializes"));
        }
        Cmd::Expand { seq, poly } => {
            let s = load_seq(&seq)?;
            let e = expand(&parse_poly(&poly, s.field())?, &s)?;
            println!("{}", serde_json::to_string_pretty(&e.to_json(&s)).expect("json serializes"));
        }
        Cmd::Transform { seq, steps } => {
            let s = load_seq(&seq)?;
            let chain = transform_chain(&s, steps)?;
            let out: Vec<_> = chain
                .iter()
                .map(|(t, q)| json!({ "transform": t.to_json(q.mode()), "sequence": q.to_json() }))
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!(out)).expect("json serializes"));
        }
        Cmd::Semigroup { input, depth } => {
            let (d, _) = load_desc(&input, depth, false)?;
            let gens: Vec<String> = d.generators.iter().map(|g| pr.value(&g.value)).collect();
            let human = format!(
                "case: {}\ngenerators: {}\ncomplete: {}",
                d.case.name(),
                gens.join(", "),
                d.complete
            );
            pr.emit(&human, d.to_json());
        }
        Cmd::Density { input, n } => {
            let (d, _) = load_desc(&input, None, false)?;
            let traj = density(&d, n)?;
            let k = pr.decimal.unwrap_or(6);
            if pr.json {
                let mut out = json!({ "points": valkey_core::valuation::density_json(&traj, k) });
                out["burn_in"] = json!(burn_in(&traj));
                println!("{}", serde_json::to_string_pretty(&out).expect("json serializes"));
            } else {
                println!("n,phi,ratio,decimal");
                for p in &traj {
                    println!("{},{},{},{}", p.n, p.phi, json_rat(&p.ratio), to_decimal(&p.ratio, k));
                }
            }
        }
        Cmd::Symmetric { input } => {
            let (d, _) = load_desc(&input, None, false)?;
            let (sym, m) = is_symmetric(&d)?;
            let human = format!("symmetric: {}\nfrobenius: {}", sym, pr.value(&m));
            pr.emit(&human, json!({ "symmetric": sym, "frobenius": value_json(&m, d.mode) }));
        }
        Cmd::A2(a) => {
            let (d, seq) = load_desc(&a.input, None, true)?;
            if let Some(s) = &seq {
                check_parity(s)?;
            }
            let bound = Value::parse(&a.bound, Mode::Rank1)?;
            let sg = a2_semigroup(&d, &bound)?;
            let mut out = sg.to_json();
            let gens: Vec<String> = sg.generators.iter().map(|g| pr.value(g)).collect();
            let mut human = format!("generators below {}: {}", sg.bound, gens.join(", "));
            if let Some(ns) = &a.gap {
                let mut ws = Vec::new();
                for n in parse_list::<usize>(ns)? {
                    let w = gap_witness(&d, n)?;
                    human.push_str(&format!(
                        "\ngap n={}: γ_{} = {}, γ_{} = {} = γ_{} + {}",
                        n,
                        w.l,
                        w.gamma_l,
                        w.l + 1,
                        w.gamma_next,
                        w.l,
                        pr.rat(&(w.gamma_next.a() - w.gamma_l.a()))
                    ));
                    ws.push(w.to_json());
                }
                out["gap_witnesses"] = json!(ws);
            }
            if let Some(bn) = a.module {
                let ws = non_fg_module_witness(&d, bn)?;
                for w in &ws {
                    human.push_str(&format!(
                        "\nmodule n={}: β_{} = {} not in F + S (searched {} points of {}Z)",
                        w.n,
                        w.l,
                        w.beta_l,
                        w.searched,
                        json_rat(&w.unit)
                    ));
                }
                out["module_witnesses"] = json!(ws.iter().map(|w| w.to_json()).collect::<Vec<_>>());
            }
            pr.emit(&human, out);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Input(m) => (2, "PARSE".to_string(), m),
                Failure::Core(e) => {
                    let c = match e {
                        valkey_core::Error::Parse(_) => 2,
                        valkey_core::Error::CapExceeded { .. } | valkey_core::Error::KernelHit { .. } => 3,
                        _ => 1,
                    };
                    (c, e.code().to_string(), e.to_string())
                }
            };
            if json {
                println!("{}", json!({ "error": kind, "message": msg }));
            }
            eprintln!("error[{}]: {}", kind, msg);
            ExitCode::from(code)
        }
    }
}

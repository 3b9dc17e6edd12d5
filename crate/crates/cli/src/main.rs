use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use noether::algebra::{format_rat, indexed_vars, parse_rat, rat, MPoly, Mat, Rat, Vars};
use noether::circuit::{homogeneous_components, Circuit};
use noether::esop::{self, EsopSet, ExplicitVariety};
use noether::hitting::{self, HittingSet};
use noether::invariants::{self, MatrixTuple, Word};
use noether::rng::SeedRng;
use noether::{orbit, reynolds, smt};

#[derive(Parser)]
#[command(name = "noether", version, about = "Exact invariant theory, hitting sets and explicit systems of parameters")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on grid and hitting-set sizes.
    #[arg(long, global = true, default_value_t = hitting::DEFAULT_CAP)]
    cap: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hitting-set constructions and checks.
    #[command(subcommand)]
    Hitting(HittingCmd),
    /// Trace invariants of matrix tuples.
    #[command(subcommand)]
    Invariants(InvariantsCmd),
    /// Orbit-closure intersection.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Systems of parameters built from hitting sets.
    #[command(subcommand)]
    Esop(EsopCmd),
    /// Explicit varieties.
    #[command(subcommand)]
    Variety(VarietyCmd),
    /// Reynolds operator for SL_m.
    #[command(subcommand)]
    Reynolds(ReynoldsCmd),
    /// Standard monomials and Weyl modules.
    #[command(subcommand)]
    Smt(SmtCmd),
    /// Circuit utilities.
    #[command(subcommand)]
    Circuit(CircuitCmd),
}

#[derive(Subcommand)]
enum HittingCmd {
    /// Hitting set for diagonal depth-3 circuits.
    Diag3 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        k: u64,
    },
    /// Generator image over a combinatorial design.
    Nw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: usize,
        /// Multilinear polynomial in x1..xm; defaults to x1*...*xm.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Greedy hitting set for explicit polynomials in x1..xr.
    Greedy {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        u: u64,
        #[arg(long = "poly", required = true)]
        polys: Vec<String>,
    },
    /// Checks that a set hits every circuit given.
    Verify {
        #[arg(long)]
        set: String,
        #[arg(long = "circuit", required = true)]
        circuits: Vec<String>,
    },
    /// Multilinear polynomial vanishing on a set.
    Hardpoly {
        #[arg(long)]
        set: String,
        #[arg(long)]
        m: usize,
    },
    /// Random test points for degree-d polynomials.
    Sz {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum InvariantsCmd {
    /// Necklaces of length l (or up to l).
    Necklaces {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        up_to: bool,
    },
    /// Trace of a word in a tuple.
    Trace {
        #[arg(long)]
        tuple: String,
        /// Letters separated by commas, 1-based.
        #[arg(long)]
        word: String,
    },
    /// Circuit for trace((sum_i X_i (x) U_i)^l).
    Generic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        l: usize,
        /// Size of the X matrices; defaults to m^2.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Trace-expansion and fundamental-identity residuals at random inputs.
    FftCheck {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Relations among necklace traces.
    Sft {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Necklace traces of a tuple up to length m^2.
    Signature {
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Decides whether two orbit closures meet.
    Intersect {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Also run the randomized test with this many trials.
        #[arg(long)]
        randomized: Option<usize>,
    },
}

#[derive(Subcommand)]
enum EsopCmd {
    /// Matrix system of parameters from a hitting set.
    Matrix {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        set: String,
    },
    /// Trace specs specialized at hitting-set points.
    Roabp {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        /// One hitting set per l = 1, 2, ...
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
    },
    /// Components of an explicit variety at hitting-set points.
    Strict {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        set: String,
    },
    /// Checks separation on seeded random pairs.
    Verify {
        #[arg(long)]
        esop: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Values of every spec at a tuple.
    Signature {
        #[arg(long)]
        esop: String,
        #[arg(long)]
        tuple: String,
    },
    /// Checks that some spec is nonzero wherever F(v, .) is.
    Zerolocus {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        esop: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum VarietyCmd {
    /// The determinant variety for m x m matrices.
    Det {
        #[arg(long)]
        m: usize,
    },
    /// The variety of a homogeneous polynomial.
    Toric {
        /// Homogeneous polynomial in x1..xn.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct ZPoly {
    #[arg(long)]
    m: usize,
    /// Polynomial in z11, z12, ... (row-major).
    #[arg(long)]
    poly: String,
}

#[derive(Subcommand)]
enum ReynoldsCmd {
    /// Applies the Cayley Omega process.
    Omega {
        #[command(flatten)]
        z: ZPoly,
        #[arg(long, default_value_t = 1)]
        times: u32,
    },
    /// Reynolds operator on polynomials in the entries of Z.
    Kz {
        #[command(flatten)]
        z: ZPoly,
    },
    /// Reynolds operator on a representation.
    Kv {
        /// Representation as JSON (inline or file).
        #[arg(long)]
        spec: String,
        /// Polynomial in v1..vn.
        #[arg(long)]
        poly: String,
    },
    /// Circuit for R(X^c).
    Rxc {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        c: usize,
    },
    /// Hilbert system of parameters from a hitting set.
    Esop {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        c_max: Option<usize>,
    },
    /// Degree bound for generating invariants.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u64,
    },
}

#[derive(Subcommand)]
enum SmtCmd {
    /// Standard bitableaux of degree d.
    Basis {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
    },
    /// Writes a product of minors in the standard basis.
    Straighten {
        #[arg(long)]
        m: usize,
        /// Minor as rows/cols, e.g. 1,2/1,2; repeat for a product.
        #[arg(long = "minor", required = true)]
        minors: Vec<String>,
    },
    /// Matrix of a group element on a Weyl module.
    Action {
        #[arg(long)]
        m: usize,
        /// Partition, parts separated by commas.
        #[arg(long)]
        shape: String,
        /// Group element, rows separated by ';'; omit for the generic form.
        #[arg(long)]
        g: Option<String>,
    },
}

#[derive(Subcommand)]
enum CircuitCmd {
    /// Evaluates a circuit at a point.
    Eval {
        #[arg(long)]
        circuit: String,
        #[arg(long)]
        point: String,
    },
    /// Homogeneous components in a group of inputs.
    Components {
        #[arg(long)]
        circuit: String,
        /// Inputs (0-based) whose degree is tracked.
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_c: u32,
    },
    /// Structural report for a circuit.
    Validate {
        #[arg(long)]
        circuit: String,
    },
}

struct Ctx {
    seed: u64,
    cap: u64,
}

struct Failure(String);

impl From<noether::Error> for Failure {
    fn from(e: noether::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

/// A JSON result, an optional headline for stdout, and whether a check failed.
struct Output {
    headline: Option<String>,
    body: Value,
    failed: bool,
}

impl Output {
    fn json(body: impl Serialize) -> Outcome {
        Ok(Output { headline: None, body: to_value(body)?, failed: false })
    }
}

fn to_value(x: impl Serialize) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure(e.to_string()))
}

/// Inline JSON when `arg` starts with `{` or `[`, otherwise a file path.
fn load<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let trimmed = arg.trim_start();
    let (text, origin) = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        (arg.to_string(), "inline JSON".to_string())
    } else {
        let text = fs::read_to_string(arg).map_err(|e| Failure(format!("{arg}: {e}")))?;
        (text, arg.to_string())
    };
    serde_json::from_str(&text).map_err(|e| Failure(format!("{origin}: {e}")))
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<T>().map_err(|_| Failure(format!("bad {what} entry {p:?}"))))
        .collect()
}

fn rats(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| parse_rat(p).map_err(Failure::from)).collect()
}

fn poly(text: &str, vars: &Vars) -> Result<MPoly, Failure> {
    Ok(MPoly::parse(text, vars)?)
}

fn poly_json(p: &MPoly) -> Value {
    json!({ "text": p.to_string(), "poly": p })
}

fn run_hitting(cmd: HittingCmd, cli: &Ctx) -> Outcome {
    match cmd {
        HittingCmd::Diag3 { r, e, k } => Output::json(hitting::diag3_hitting_set_capped(r, e, k, cli.cap)?),
        HittingCmd::Nw { n, d, m, poly: p } => {
            let vars = indexed_vars("x", m);
            let p = match p {
                Some(t) => poly(&t, &vars)?,
                None => (0..m).fold(MPoly::one(&vars), |acc, i| &acc * &MPoly::var(&vars, i)),
            };
            Output::json(hitting::nw_hitting_set_capped(n, d, m, &p, cli.cap)?)
        }
        HittingCmd::Greedy { r, u, polys } => {
            let vars = indexed_vars("x", r);
            let family = polys.iter().map(|t| poly(t, &vars)).collect::<Result<Vec<_>, _>>()?;
            Output::json(hitting::greedy_hitting_set_capped(r, &family, u, cli.cap)?)
        }
        HittingCmd::Verify { set, circuits } => {
            let h: HittingSet = load(&set)?;
            let family = circuits.iter().map(|c| load::<Circuit>(c)).collect::<Result<Vec<_>, _>>()?;
            let missed = h.verify(&family)?;
            let failed = !missed.is_empty();
            Ok(Output {
                headline: Some(if failed { format!("missed {missed:?}") } else { "hits all".into() }),
                body: json!({ "points": h.len(), "circuits": family.len(), "missed": missed }),
                failed,
            })
        }
        HittingCmd::Hardpoly { set, m } => {
            let h: HittingSet = load(&set)?;
            let pts: Vec<Vec<u64>> = h.points().map(<[u64]>::to_vec).collect();
            Output::json(poly_json(&hitting::hard_poly_from_hitting_set(&pts, m)?))
        }
        HittingCmd::Sz { r, d, count } => {
            let pts = hitting::sz_points(r, d, count, cli.seed);
            Output::json(HittingSet::external(r, pts, &format!("sz seed {}", cli.seed))?)
        }
    }
}

fn run_invariants(cmd: InvariantsCmd, cli: &Ctx) -> Outcome {
    match cmd {
        InvariantsCmd::Necklaces { r, l, up_to } => {
            let ns = if up_to { invariants::necklaces_up_to(r, l) } else { invariants::necklaces(r, l) };
            Output::json(json!({ "count": ns.len(), "necklaces": ns }))
        }
        InvariantsCmd::Trace { tuple, word } => {
            let t: MatrixTuple = load(&tuple)?;
            let w = Word::new(list(&word, "letter")?, t.r())?;
            Output::json(json!({ "word": w, "trace": format_rat(&invariants::trace_monomial(&w, &t)?) }))
        }
        InvariantsCmd::Generic { m, r, l, k } => Output::json(invariants::generic_trace_circuit(m, r, l, k.unwrap_or(m * m))?),
        InvariantsCmd::FftCheck { m, r, l, trials } => {
            let mut rng = SeedRng::new(cli.seed);
            let mut bad_expansion = 0;
            let mut bad_identity = 0;
            for _ in 0..trials {
                let x = MatrixTuple::random(m * m, r, -3, 3, &mut rng);
                let u = MatrixTuple::random(m, r, -3, 3, &mut rng);
                if !is_zero(&invariants::expansion_residual(m, r, l, &x, &u)?) {
                    bad_expansion += 1;
                }
                let us: Vec<Mat> = (0..=m).map(|_| Mat::from_fn(m, m, |_, _| rng.rat_int(-3, 3))).collect();
                if !is_zero(&invariants::fundamental_identity_residual(m, &us)?) {
                    bad_identity += 1;
                }
            }
            let failed = bad_expansion + bad_identity > 0;
            Ok(Output {
                headline: Some(if failed { "residual nonzero".into() } else { "all residuals zero".into() }),
                body: json!({ "trials": trials, "expansion_failures": bad_expansion, "identity_failures": bad_identity }),
                failed,
            })
        }
        InvariantsCmd::Sft { m, r, max_len } => {
            let rel = invariants::sft_relations(m, r, max_len)?;
            let polys: Vec<String> = rel.relations.iter().map(|x| x.poly.to_string()).collect();
            Output::json(json!({ "relations": rel, "text": polys }))
        }
    }
}

fn is_zero(x: &Rat) -> bool {
    *x == rat(0)
}

fn run_orbit(cmd: OrbitCmd, cli: &Ctx) -> Outcome {
    match cmd {
        OrbitCmd::Signature { tuple, max_len } => {
            let t: MatrixTuple = load(&tuple)?;
            Output::json(orbit::signature(&t, max_len)?)
        }
        OrbitCmd::Intersect { a, b, randomized } => {
            let (ta, tb): (MatrixTuple, MatrixTuple) = (load(&a)?, load(&b)?);
            let d = orbit::intersects_deterministic(&ta, &tb, None)?;
            let rand = randomized.map(|t| orbit::intersects_randomized(&ta, &tb, t, cli.seed)).transpose()?;
            let headline = match &d.witness {
                None => "intersect".to_string(),
                Some(n) => format!("disjoint-closures {n}"),
            };
            Ok(Output {
                headline: Some(headline),
                body: json!({ "intersect": d.intersect, "witness": d.witness, "randomized": rand }),
                failed: false,
            })
        }
    }
}

fn run_esop(cmd: EsopCmd, cli: &Ctx) -> Outcome {
    match cmd {
        EsopCmd::Matrix { m, r, set } => Output::json(esop::matrix_esop(m, r, &load(&set)?)?),
        EsopCmd::Roabp { m, r, sets } => {
            let ys = sets.iter().map(|s| load::<HittingSet>(s)).collect::<Result<Vec<_>, _>>()?;
            Output::json(esop::matrix_esop_roabp(m, r, &ys)?)
        }
        EsopCmd::Strict { variety, set } => {
            let w: ExplicitVariety = load(&variety)?;
            Output::json(esop::strict_esop(&w, &load(&set)?)?)
        }
        EsopCmd::Verify { esop: path, m, r, trials } => {
            let s: EsopSet = load(&path)?;
            let report = esop::verify_separating(&s, m, r, trials, cli.seed)?;
            let headline = if report.passed {
                format!("pass ({} of {trials} pairs needed separation)", report.demanded)
            } else {
                "counterexample".to_string()
            };
            let failed = !report.passed;
            Ok(Output { headline: Some(headline), body: to_value(&report)?, failed })
        }
        EsopCmd::Signature { esop: path, tuple } => {
            let s: EsopSet = load(&path)?;
            let t: MatrixTuple = load(&tuple)?;
            let sig = esop::esop_signature(&s, &t)?;
            Output::json(sig.iter().map(format_rat).collect::<Vec<_>>())
        }
        EsopCmd::Zerolocus { variety, esop: path, trials } => {
            let w: ExplicitVariety = load(&variety)?;
            let s: EsopSet = load(&path)?;
            let report = esop::zero_locus_check(&w, &s, trials, cli.seed)?;
            let failed = !report.passed;
            Ok(Output {
                headline: Some(if failed { "witness found".into() } else { format!("pass ({} tested)", report.tested) }),
                body: to_value(&report)?,
                failed,
            })
        }
    }
}

fn run_variety(cmd: VarietyCmd) -> Outcome {
    match cmd {
        VarietyCmd::Det { m } => Output::json(esop::delta_det_variety(m)?),
        VarietyCmd::Toric { poly: p, n } => Output::json(esop::toric_variety(&poly(&p, &indexed_vars("x", n))?)?),
    }
}

fn run_reynolds(cmd: ReynoldsCmd, cli: &Ctx) -> Outcome {
    match cmd {
        ReynoldsCmd::Omega { z, times } => {
            let f = poly(&z.poly, &smt::z_vars(z.m))?;
            Output::json(poly_json(&reynolds::omega_apply(&f, z.m, times)?))
        }
        ReynoldsCmd::Kz { z } => {
            let f = poly(&z.poly, &smt::z_vars(z.m))?;
            Output::json(poly_json(&reynolds::reynolds_kz(&f, z.m)?))
        }
        ReynoldsCmd::Kv { spec, poly: p } => {
            let spec: smt::RepSpec = load(&spec)?;
            let f = poly(&p, &indexed_vars("v", spec.n))?;
            Output::json(poly_json(&reynolds::reynolds_kv(&f, &spec)?))
        }
        ReynoldsCmd::Rxc { spec, c } => Output::json(reynolds::rxc_circuit_capped(&load(&spec)?, c, cli.cap)?),
        ReynoldsCmd::Esop { spec, set, c_max } => {
            Output::json(reynolds::hilbert_esop(&load(&spec)?, &load(&set)?, c_max, cli.cap)?)
        }
        ReynoldsCmd::Bound { n, m, d } => Output::json(reynolds::derksen_bound(n, m, d).to_string()),
    }
}

fn parse_minor(s: &str) -> Result<(Vec<usize>, Vec<usize>), Failure> {
    let (r, c) = s.split_once('/').ok_or_else(|| Failure(format!("minor {s:?} should look like 1,2/1,2")))?;
    Ok((list(r, "row")?, list(c, "column")?))
}

fn run_smt(cmd: SmtCmd) -> Outcome {
    match cmd {
        SmtCmd::Basis { m, d } => {
            let basis = smt::standard_monomials(m, d);
            let text: Vec<String> = basis.iter().map(ToString::to_string).collect();
            Output::json(json!({ "count": basis.len(), "basis": basis, "text": text }))
        }
        SmtCmd::Straighten { m, minors } => {
            let mu = smt::MinorMonomial { factors: minors.iter().map(|s| parse_minor(s)).collect::<Result<_, _>>()? };
            let coeffs = smt::straighten(&mu, m)?;
            let terms: Vec<Value> =
                coeffs.iter().map(|(b, c)| json!({ "bitableau": b, "text": b.to_string(), "coefficient": format_rat(c) })).collect();
            Output::json(terms)
        }
        SmtCmd::Action { m, shape, g } => {
            let shape: Vec<usize> = list(&shape, "part")?;
            let labels: Vec<String> =
                smt::weyl_basis(&shape, m)?.iter().map(|b| b.left.iter().map(|r| r.iter().map(ToString::to_string).collect::<String>()).collect::<Vec<_>>().join("/")).collect();
            match g {
                Some(text) => {
                    let rows = text.split(';').map(rats).collect::<Result<Vec<_>, _>>()?;
                    let g = Mat::from_rows(rows)?;
                    Output::json(json!({ "basis": labels, "matrix": smt::action_on_basis(&g, &shape, m)? }))
                }
                None => {
                    let gen = smt::generic_action(&shape, m)?;
                    let rows: Vec<Vec<String>> = gen.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
                    Output::json(json!({ "basis": labels, "variables": smt::u_vars(m).to_vec(), "matrix": rows }))
                }
            }
        }
    }
}

fn run_circuit(cmd: CircuitCmd) -> Outcome {
    match cmd {
        CircuitCmd::Eval { circuit, point } => {
            let c: Circuit = load(&circuit)?;
            let vals = c.eval(&rats(&point)?)?;
            Output::json(vals.iter().map(format_rat).collect::<Vec<_>>())
        }
        CircuitCmd::Components { circuit, group, max_c } => {
            let c: Circuit = load(&circuit)?;
            Output::json(homogeneous_components(&c, &list(&group, "input")?, max_c)?)
        }
        CircuitCmd::Validate { circuit } => {
            let c: Circuit = load(&circuit)?;
            let report = c.validate()?;
            let failed = !report.consistent();
            Ok(Output {
                headline: Some(if failed { "inconsistent".into() } else { "valid".into() }),
                body: to_value(&report)?,
                failed,
            })
        }
    }
}

fn run(command: Command, ctx: &Ctx) -> Outcome {
    match command {
        Command::Hitting(c) => run_hitting(c, ctx),
        Command::Invariants(c) => run_invariants(c, ctx),
        Command::Orbit(c) => run_orbit(c, ctx),
        Command::Esop(c) => run_esop(c, ctx),
        Command::Variety(c) => run_variety(c),
        Command::Reynolds(c) => run_reynolds(c, ctx),
        Command::Smt(c) => run_smt(c),
        Command::Circuit(c) => run_circuit(c),
    }
}

fn main() -> ExitCode {
    let Cli { seed, cap, out, command } = Cli::parse();
    match run(command, &Ctx { seed, cap }) {
        Ok(o) => {
            if let Some(h) = &o.headline {
                println!("{h}");
            }
            let text = serde_json::to_string_pretty(&o.body).expect("values serialize") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if o.failed { 1 } else { 0 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

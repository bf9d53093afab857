//! `funalign`: capacities, decompositions, code construction and
//! verification for computation over linear deterministic networks.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use funalign::capacity::*;
use funalign::code::*;
use funalign::decomposition::{decompose_odd, decompose_scale, full_decompose, Decomposition};
use funalign::network::*;
use funalign::oracle::{oracle_search, SearchMode, SearchOutcome};
use funalign::verify::{decoder_exists, simulate, subspace_dims};
use funalign::Rate;

#[derive(Parser)]
#[command(name = "funalign", version, about)]
struct Cli {
    /// Print JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

/// Either a symmetric `(m, n)` network with `L` users or a general two-user
/// network given by its four link strengths.
#[derive(Args, Clone)]
struct NetArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Number of users (symmetric networks only).
    #[arg(long = "L", default_value_t = 2)]
    users: usize,
    #[arg(long, requires_all = ["n12", "n21", "n22"], conflicts_with_all = ["m", "n"])]
    n11: Option<u32>,
    #[arg(long)]
    n12: Option<u32>,
    #[arg(long)]
    n21: Option<u32>,
    #[arg(long)]
    n22: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity, upper bounds and the separation rate.
    Capacity(NetArgs),
    /// Degenerate / non-degenerate classification of a two-user network.
    Classify(NetArgs),
    /// Decompose a symmetric network into independent sub-networks.
    Decompose {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "L", default_value_t = 2)]
        users: usize,
        /// Split `(k m', k n')` into k copies instead of gap-1 pieces.
        #[arg(long, conflicts_with = "odd")]
        scale: Option<u32>,
        /// Split `(2m'+1, 2n'+1)` into `(m', n') x (m'+1, n'+1)`.
        #[arg(long)]
        odd: bool,
        /// Also print the level coloring as CSV.
        #[arg(long)]
        coloring: bool,
    },
    /// Build a code and write it as JSON.
    Construct {
        #[arg(long, value_enum, default_value_t = Scheme::Auto)]
        scheme: Scheme,
        #[command(flatten)]
        net: NetArgs,
        /// Output file; JSON goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a code for zero-error decodability.
    Verify {
        /// Code JSON file, `-` for stdin.
        #[arg(long)]
        code: PathBuf,
        /// Print the dimensions of the per-source received subspaces.
        #[arg(long)]
        dims: bool,
        /// Also push this many random source draws through the channel.
        #[arg(long, default_value_t = 0)]
        simulate: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a linear code with given K and N.
    Search {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "L", default_value_t = 2)]
        users: usize,
        #[arg(long = "K")]
        k: usize,
        #[arg(long = "N", default_value_t = 1)]
        uses: usize,
        #[arg(long, conflicts_with = "random")]
        exhaustive: bool,
        /// Random search with this many trials.
        #[arg(long, value_name = "TRIALS")]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// CSV table over a parameter grid.
    Sweep {
        /// Values of m: `a..b` (inclusive), `a,b,c` or a single value.
        #[arg(long, default_value = "0..12")]
        m: String,
        #[arg(long, default_value = "12")]
        n: String,
        #[arg(long = "L", default_value = "2")]
        users: String,
        /// Skip constructing and verifying codes.
        #[arg(long)]
        formulas_only: bool,
        /// Emit the normalized capacity curve for q levels instead.
        #[arg(long, value_name = "Q")]
        normalized: Option<u32>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Auto,
    Uncoded,
    Degenerate,
    Case1,
    Case2,
    Gap1,
    Luser,
    Compose,
}

impl Scheme {
    fn name(self) -> &'static str {
        match self {
            Scheme::Auto => "auto",
            Scheme::Uncoded => "uncoded",
            Scheme::Degenerate => "degenerate",
            Scheme::Case1 => "case1",
            Scheme::Case2 => "case2",
            Scheme::Gap1 => "gap1",
            Scheme::Luser => "luser",
            Scheme::Compose => "compose",
        }
    }
}

/// Why a command stopped: bad input (exit 2) or a failed check (exit 1).
enum Failure {
    Usage(String),
    Check(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

enum Net {
    Sym(NetworkParamsSym),
    General(NetworkParams2x2),
}

impl NetArgs {
    fn resolve(&self) -> Result<Net, Failure> {
        if let (Some(a), Some(b), Some(c), Some(d)) = (self.n11, self.n12, self.n21, self.n22) {
            return Ok(Net::General(NetworkParams2x2::new(a, b, c, d)));
        }
        match (self.m, self.n) {
            (Some(m), Some(n)) => NetworkParamsSym::new(m, n, self.users).map(Net::Sym).map_err(usage),
            _ => Err(usage("give --m and --n, or all of --n11 --n12 --n21 --n22")),
        }
    }

    fn two_user(&self) -> Result<NetworkParams2x2, Failure> {
        match self.resolve()? {
            Net::General(p) => Ok(p),
            Net::Sym(s) => s
                .to_2x2()
                .ok_or_else(|| usage(format!("L={} is not a two-user network", s.users()))),
        }
    }
}

fn rate_str(r: Rate) -> String {
    r.to_string()
}

fn opt_rate(r: Option<Rate>) -> Value {
    r.map_or(Value::Null, |r| Value::String(rate_str(r)))
}

fn cmd_capacity(args: &NetArgs, as_json: bool) -> CmdResult {
    let mut fields: Vec<(&str, Value)> = Vec::new();
    match args.resolve()? {
        Net::Sym(s) if s.users() >= 3 => {
            let (m, n, l) = (s.m(), s.n(), s.users());
            fields.push(("network", json!(Network::from(s).to_string())));
            fields.push(("linear_capacity", json!(rate_str(luser_linear_capacity(m, n, l).map_err(usage)?))));
            fields.push(("upper_bound", json!(rate_str(luser_upper_bound(m, n, l).map_err(usage)?))));
            fields.push(("cutset", json!(m.min(n))));
            fields.push(("separation", json!(rate_str(separation_rate(m, n)))));
        }
        net => {
            let (p, sym) = match net {
                Net::Sym(s) => (s.to_2x2().expect("two users"), Some(s)),
                Net::General(p) => (p, p.as_symmetric()),
            };
            fields.push(("network", json!(Network::from(p).to_string())));
            let cap = capacity_2x2::<Rate>(&p);
            fields.push(("capacity", cap.map_or(json!("unknown"), |c| json!(rate_str(c)))));
            fields.push(("cutset", json!(rate_str(upper_cutset(&p)))));
            fields.push(("upper_nondegenerate", opt_rate(upper_nondegenerate(&p))));
            if let Some(s) = sym {
                fields.push(("separation", json!(rate_str(separation_rate(s.m(), s.n())))));
                if s.q() > 0 {
                    let norm = normalized_capacity::<Rate>(s.m(), s.n()).map_err(usage)?;
                    fields.push(("alpha", opt_rate(s.alpha())));
                    fields.push(("normalized_capacity", json!(rate_str(norm))));
                }
            }
        }
    }
    print_fields(&fields, as_json);
    Ok(())
}

fn print_fields(fields: &[(&str, Value)], as_json: bool) {
    if as_json {
        let map: serde_json::Map<String, Value> =
            fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        println!("{}", Value::Object(map));
        return;
    }
    for (k, v) in fields {
        match v {
            Value::String(s) => println!("{k}: {s}"),
            Value::Null => println!("{k}: n/a"),
            other => println!("{k}: {other}"),
        }
    }
}

fn cmd_classify(args: &NetArgs, as_json: bool) -> CmdResult {
    let p = args.two_user()?;
    let closed = classify_closed_form(&p);
    let cons = classify_constructive(&p);
    let witness = cons
        .witness
        .map_or(Value::Null, |w| json!({"transmitter": w.transmitter, "receiver": w.receiver}));
    if as_json {
        println!(
            "{}",
            json!({
                "network": Network::from(p).to_string(),
                "closed_form": closed.to_string(),
                "constructive": cons.class.to_string(),
                "witness": witness,
            })
        );
    } else {
        println!("network: {}", Network::from(p));
        println!("closed form: {closed}");
        println!("constructive: {}", cons.class);
        if let Some(w) = cons.witness {
            println!(
                "witness: transmitter {}'s signal at receiver {} is recoverable from (Y1, Y2)",
                w.transmitter, w.receiver
            );
        }
    }
    Ok(())
}

fn cmd_decompose(
    m: u32,
    n: u32,
    users: usize,
    scale: Option<u32>,
    odd: bool,
    coloring: bool,
    as_json: bool,
) -> CmdResult {
    let dec: Decomposition = if let Some(k) = scale {
        if k == 0 || !m.is_multiple_of(k) || !n.is_multiple_of(k) {
            return Err(usage(format!("--scale {k} does not divide ({m},{n})")));
        }
        decompose_scale(m / k, n / k, k, users)
    } else if odd {
        decompose_odd(m, n, users)
    } else {
        full_decompose(m, n, users)
    }
    .map_err(usage)?;
    let rows = dec.coloring_rows();
    if as_json {
        let parts: Vec<Value> = dec
            .parts()
            .iter()
            .map(|p| json!({"m": p.m, "n": p.n, "multiplicity": p.multiplicity}))
            .collect();
        let mut out = json!({"factorization": dec.to_string(), "parts": parts});
        if coloring {
            out["coloring"] = rows
                .iter()
                .map(|(node, level, color, sub)| {
                    json!({"node": node.to_string(), "level": level, "color": color, "sublevel": sub})
                })
                .collect();
        }
        println!("{out}");
        return Ok(());
    }
    println!("{dec}");
    if coloring {
        let mut w = csv::Writer::from_writer(io::stdout().lock());
        w.write_record(["node", "level", "color", "sublevel"]).map_err(usage)?;
        for (node, level, color, sub) in rows {
            w.write_record([node.to_string(), level.to_string(), color.to_string(), sub.to_string()])
                .map_err(usage)?;
        }
        w.flush().map_err(usage)?;
    }
    Ok(())
}

fn build(scheme: Scheme, net: &NetArgs) -> Result<LinearCode, Failure> {
    match (scheme, net.resolve()?) {
        (Scheme::Auto, Net::General(p)) => construct_auto_2x2(&p).map_err(usage),
        (Scheme::Degenerate, _) => construct_degenerate(&net.two_user()?).map_err(usage),
        (_, Net::General(_)) => Err(usage(format!(
            "scheme {} needs a symmetric network (--m, --n)",
            scheme.name()
        ))),
        (_, Net::Sym(s)) => construct_named(scheme.name(), s.m(), s.n(), s.users()).map_err(usage),
    }
}

fn cmd_construct(scheme: Scheme, net: &NetArgs, out: Option<&PathBuf>) -> CmdResult {
    let code = build(scheme, net)?;
    let report = decoder_exists(&code).map_err(usage)?;
    let text = serde_json::to_string_pretty(&code).map_err(usage)?;
    let summary = format!(
        "{} on {}: K={} N={} rate={}",
        code.label,
        code.network,
        code.sources,
        code.uses,
        code.rate()
    );
    match out {
        Some(path) => {
            fs::write(path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
            println!("{summary}");
        }
        None => {
            println!("{text}");
            eprintln!("{summary}");
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check("constructed code does not decode".into()))
    }
}

fn read_code(path: &PathBuf) -> Result<LinearCode, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    let code: LinearCode = serde_json::from_str(&text).map_err(|e| usage(format!("bad code file: {e}")))?;
    code.check_shape().map_err(usage)?;
    Ok(code)
}

fn cmd_verify(path: &PathBuf, dims: bool, trials: usize, seed: u64, as_json: bool) -> CmdResult {
    let code = read_code(path)?;
    let report = decoder_exists(&code).map_err(usage)?;
    let sim = if trials > 0 {
        Some(simulate(&code, seed, trials).map_err(usage)?)
    } else {
        None
    };
    let table = if dims { Some(subspace_dims(&code).map_err(usage)?) } else { None };
    let pass = report.pass && sim != Some(false);
    if as_json {
        let mut out = json!({
            "pass": pass,
            "rate": rate_str(code.rate()),
            "receivers": report.receivers,
        });
        if let Some(s) = sim {
            out["simulation"] = json!({"trials": trials, "seed": seed, "pass": s});
        }
        if let Some(t) = &table {
            out["subspaces"] = serde_json::to_value(t).map_err(usage)?;
        }
        println!("{out}");
    } else {
        println!("{} on {}: K={} N={} rate={}", code.label, code.network, code.sources, code.uses, code.rate());
        for (i, r) in report.receivers.iter().enumerate() {
            let status = if r.decoder.is_some() { "decodes" } else { "FAILS" };
            println!("receiver {}: rank {} {status}", i + 1, r.rank);
        }
        if let Some(s) = sim {
            println!("simulation ({trials} trials, seed {seed}): {}", if s { "pass" } else { "FAIL" });
        }
        if let Some(t) = &table {
            let header: Vec<String> = (1..=code.network.users()).map(|l| format!("rx{l}")).collect();
            println!("source {}", header.join(" "));
            for (i, row) in t.dims.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|d| format!("{d:>3}")).collect();
                println!("{:>6} {}", i + 1, cells.join(" "));
            }
            println!("independent at every receiver: {}", t.independent.iter().all(|&b| b));
            if t.pattern_rule_applies {
                println!("sources with a forbidden (1, <=2) pattern: {:?}", t.forbidden);
            }
        }
        println!("{}", if pass { "PASS" } else { "FAIL" });
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Check("code does not decode".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    m: u32,
    n: u32,
    users: usize,
    k: usize,
    uses: usize,
    random: Option<u64>,
    seed: u64,
    budget: u64,
    jobs: usize,
    as_json: bool,
) -> CmdResult {
    let net: Network = NetworkParamsSym::new(m, n, users).map_err(usage)?.into();
    let mode = match random {
        Some(trials) => SearchMode::Random { trials, seed },
        None => SearchMode::Exhaustive { budget },
    };
    let out = oracle_search(&net, k, uses, mode, jobs).map_err(usage)?;
    let (verdict, detail, witness) = match &out {
        SearchOutcome::Achievable(c) => ("achievable", String::new(), Some(c)),
        SearchOutcome::Impossible => ("impossible", String::new(), None),
        SearchOutcome::Unknown(why) => ("unknown", why.clone(), None),
    };
    if as_json {
        let mut v = json!({
            "network": net.to_string(),
            "K": k,
            "N": uses,
            "result": verdict,
        });
        if let SearchMode::Random { trials, seed } = mode {
            v["trials"] = json!(trials);
            v["seed"] = json!(seed);
        }
        if !detail.is_empty() {
            v["detail"] = json!(detail);
        }
        if let Some(c) = witness {
            v["witness"] = serde_json::to_value(c).map_err(usage)?;
        }
        println!("{v}");
    } else {
        println!("{net} K={k} N={uses}: {verdict}");
        if !detail.is_empty() {
            println!("{detail}");
        }
        if let Some(c) = witness {
            print!("{c}");
        }
    }
    Ok(())
}

fn parse_list(text: &str, flag: &str) -> Result<Vec<u32>, Failure> {
    let bad = || usage(format!("--{flag}: expected a..b, a,b,c or a number, got {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn num_den(r: Rate) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn sweep_row(m: u32, n: u32, users: usize, formulas_only: bool) -> Result<Vec<String>, String> {
    let q = m.max(n);
    let alpha = if q == 0 { None } else { Some(Rate::new(i64::from(m.min(n)), i64::from(q))) };
    let (cap, upper): (Rate, Option<Rate>) = if users == 2 {
        let p = NetworkParams2x2::symmetric(m, n);
        (capacity_symmetric(m, n), upper_nondegenerate(&p))
    } else {
        (
            luser_linear_capacity(m, n, users).map_err(|e| e.to_string())?,
            Some(luser_upper_bound(m, n, users).map_err(|e| e.to_string())?),
        )
    };
    let mut row = vec![m.to_string(), n.to_string(), users.to_string()];
    row.extend(alpha.map_or([String::new(), String::new()], num_den));
    row.extend(num_den(cap));
    row.extend(num_den(separation_rate(m, n)));
    row.push(m.min(n).to_string());
    row.extend(upper.map_or([String::new(), String::new()], num_den));
    if !formulas_only {
        let code = construct_auto(m, n, users).map_err(|e| format!("({m},{n},{users}): {e}"))?;
        let report = decoder_exists(&code).map_err(|e| e.to_string())?;
        if !report.pass {
            return Err(format!("({m},{n},{users}): constructed code does not decode"));
        }
        row.extend(num_den(code.rate()));
    }
    Ok(row)
}

fn cmd_sweep(
    m: &str,
    n: &str,
    users: &str,
    formulas_only: bool,
    normalized: Option<u32>,
    jobs: usize,
) -> CmdResult {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    if let Some(q) = normalized {
        if q == 0 {
            return Err(usage("--normalized needs q >= 1"));
        }
        w.write_record(["alpha_num", "alpha_den", "normcap_num", "normcap_den"]).map_err(usage)?;
        for lo in 0..=q {
            let a = Rate::new(i64::from(lo), i64::from(q));
            let c = normalized_capacity::<Rate>(lo, q).map_err(usage)?;
            let [an, ad] = num_den(a);
            let [cn, cd] = num_den(c);
            w.write_record([an, ad, cn, cd]).map_err(usage)?;
        }
        return w.flush().map_err(usage);
    }
    let ms = parse_list(m, "m")?;
    let ns = parse_list(n, "n")?;
    let ls = parse_list(users, "L")?;
    if ls.iter().any(|&l| l < 2) {
        return Err(usage("--L: every value must be at least 2"));
    }
    let mut points = Vec::with_capacity(ls.len() * ns.len() * ms.len());
    for &l in &ls {
        for &n in &ns {
            points.extend(ms.iter().map(|&m| (m, n, l as usize)));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(usage)?;
    let rows: Vec<Result<Vec<String>, String>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(m, n, l)| sweep_row(m, n, l, formulas_only))
            .collect()
    });
    let mut header = vec![
        "m", "n", "L", "alpha_num", "alpha_den", "capacity_num", "capacity_den", "sep_num", "sep_den",
        "cutset", "upper3_num", "upper3_den",
    ];
    if !formulas_only {
        header.extend(["achieved_num", "achieved_den"]);
    }
    w.write_record(&header).map_err(usage)?;
    let mut failure = None;
    for row in rows {
        match row {
            Ok(r) => w.write_record(&r).map_err(usage)?,
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    w.flush().map_err(usage)?;
    match failure {
        Some(e) => Err(Failure::Check(e)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match &cli.command {
        Command::Capacity(net) => cmd_capacity(net, json),
        Command::Classify(net) => cmd_classify(net, json),
        Command::Decompose { m, n, users, scale, odd, coloring } => {
            cmd_decompose(*m, *n, *users, *scale, *odd, *coloring, json)
        }
        Command::Construct { scheme, net, out } => cmd_construct(*scheme, net, out.as_ref()),
        Command::Verify { code, dims, simulate, seed } => cmd_verify(code, *dims, *simulate, *seed, json),
        Command::Search { m, n, users, k, uses, exhaustive: _, random, seed, budget, jobs } => {
            cmd_search(*m, *n, *users, *k, *uses, *random, *seed, *budget, *jobs, json)
        }
        Command::Sweep { m, n, users, formulas_only, normalized, jobs } => {
            cmd_sweep(m, n, users, *formulas_only, *normalized, *jobs)
        }
    };
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("funalign: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("funalign: {msg}");
            eprintln!("run `funalign help` for the flag synopsis");
            ExitCode::from(2)
        }
    }
}

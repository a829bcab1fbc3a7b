use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use apollonia::disk::tangency_spinor;
use apollonia::groups::{
    cayley_sphere_sizes_with_budget, check_generator_properties, DEFAULT_BUDGET,
};
use apollonia::packing::{adjacent_sums_report, complete, verify_packing};
use apollonia::quadruples::{descend4, geometrize, verify_geo};
use apollonia::render::to_svg;
use apollonia::threads::{
    fibonacci_tangency_point, fibonacci_triple, principal_descent_digraph, root_atlas,
    thread_triple,
};
use apollonia::triples::descend3;
use apollonia::{
    CurvatureTriple, DescartesQuadruple, Error, Family, GroupSpec, Int, Packing, Rational, Rect,
    RenderOptions, ThreadFamily, VerificationReport,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "apollonia",
    version,
    about = "Exact integral Apollonian packings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Descend a quadruple or triple to the base configuration.
    Descend(DescendArgs),
    /// Place a quadruple in the plane with integral symbols and spinors.
    Geometrize(GeometrizeArgs),
    /// Complete a quadruple to its packing up to a curvature bound.
    Complete(CompleteArgs),
    /// Check every invariant of a placed quadruple or completed packing.
    Verify(VerifyArgs),
    /// List root quadruples by outer curvature.
    Atlas(AtlasArgs),
    /// Evaluate a thread family over a range of n.
    Threads(ThreadsArgs),
    /// The Fibonacci thread and its tangency points.
    Fib(FibArgs),
    /// Cayley sphere sizes and generator identities of a Descartes group.
    Group(GroupArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct DescendInput {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list::<4>)]
    quad: Option<[Int; 4]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list::<3>)]
    triple: Option<[Int; 3]>,
}

#[derive(Debug, Args)]
struct DescendArgs {
    #[command(flatten)]
    input: DescendInput,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GeometrizeArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list::<4>)]
    quad: [Int; 4],
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CompleteArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list::<4>)]
    quad: [Int; 4],
    #[arg(long)]
    max_curv: Int,
    /// x0,y0,x1,y1 (integers or fractions p/q).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rect)]
    region: Option<Rect>,
    /// Output file; `.json` or `.svg`. Without it a summary is printed.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 800)]
    pixel_width: Int,
    /// Draw tangency spinors in SVG output.
    #[arg(long)]
    spinors: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct VerifyInput {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list::<4>)]
    quad: Option<[Int; 4]>,
    /// A packing previously written by `complete --out FILE.json`.
    #[arg(long)]
    packing: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: VerifyInput,
    /// Also complete and verify the packing up to this curvature.
    #[arg(long)]
    max_curv: Option<Int>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rect)]
    region: Option<Rect>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct AtlasArgs {
    #[arg(long)]
    max_outer: Int,
    #[arg(long)]
    json: bool,
    /// Print the descent digraph of principal triples in Graphviz format.
    #[arg(long, conflicts_with = "json")]
    dot: bool,
}

#[derive(Debug, Args)]
struct ThreadsArgs {
    #[arg(long, value_parser = parse_family)]
    family: ThreadFamily,
    #[arg(long, default_value_t = 1)]
    from: Int,
    #[arg(long)]
    to: Option<Int>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct FibArgs {
    #[arg(long, default_value_t = 1)]
    from: Int,
    #[arg(long)]
    to: Option<Int>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GroupArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, value_parser = parse_group_family)]
    family: Family,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long)]
    json: bool,
}

fn parse_list<const N: usize>(s: &str) -> Result<[Int; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated integers, got {}",
            parts.len()
        ));
    }
    let mut out = [0; N];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| format!("`{p}` is not an integer"))?;
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("`{s}` is not an integer or fraction");
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (Int, Int) = (
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            );
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => s
            .trim()
            .parse::<Int>()
            .map(Rational::from)
            .map_err(|_| bad()),
    }
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected x0,y0,x1,y1".to_owned());
    }
    let v: Vec<Rational> = parts
        .iter()
        .map(|p| parse_rational(p))
        .collect::<Result<_, _>>()?;
    Rect::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<ThreadFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_group_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failed command: bad input (exit 1) or a failed check (exit 2).
#[derive(Debug)]
enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::VerificationFailed(msg) => Failure::Verification(msg),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn print_json(value: &impl serde::Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Input(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn descend(args: &DescendArgs) -> CmdResult {
    if let Some(q) = args.input.quad {
        let d = descend4(&DescartesQuadruple(q))?;
        let weights = d.weights()?;
        if args.json {
            return print_json(&json!({
                "input": q,
                "chain": d.chain,
                "trace": d.trace,
                "sorted_trace": d.sorted_trace(),
                "weights": weights,
            }));
        }
        println!("trace (slot order):");
        println!("        {}  weight {}", d.trace[0], weights[0]);
        for (k, mv) in d.chain.0.iter().enumerate() {
            println!("  {mv:<5} {}  weight {}", d.trace[k + 1], weights[k + 1]);
        }
        let sorted: Vec<String> = d.sorted_trace().iter().map(ToString::to_string).collect();
        println!("sorted trace: {}", sorted.join(" -> "));
        println!("chain: {}", d.chain);
        return Ok(());
    }
    let t = CurvatureTriple(args.input.triple.expect("clap requires one input"));
    let d = descend3(&t)?;
    let letters: String = d.moves.iter().map(|m| m.letter()).collect();
    if args.json {
        return print_json(&json!({
            "input": t,
            "moves": d.moves,
            "letters": letters,
            "trace": d.trace,
            "sorted_trace": d.sorted_trace(),
        }));
    }
    let sorted = d.sorted_trace();
    println!("{}", sorted[0]);
    for (mv, s) in d.moves.iter().zip(&sorted[1..]) {
        println!("   | {} ({mv})", mv.letter());
        println!("{s}");
    }
    println!("moves: {letters}");
    Ok(())
}

fn geometrize_cmd(args: &GeometrizeArgs) -> CmdResult {
    let g = geometrize(&DescartesQuadruple(args.quad))?;
    if args.json {
        return print_json(&g);
    }
    println!(
        "{:>4} {:>8} {:>8} {:>8} {:>8}",
        "slot", "xdot", "ydot", "curv", "cocurv"
    );
    for (i, d) in g.disks.iter().enumerate() {
        println!(
            "{:>4} {:>8} {:>8} {:>8} {:>8}",
            i + 1,
            d.xdot,
            d.ydot,
            d.curv,
            d.cocurv
        );
    }
    println!("spinors:");
    for i in 0..4 {
        for j in i + 1..4 {
            let u = tangency_spinor(&g.disks[i], &g.disks[j])?;
            println!("  {}-{}: {u}  |u|² = {}", i + 1, j + 1, u.norm2()?);
        }
    }
    Ok(())
}

fn complete_cmd(args: &CompleteArgs) -> CmdResult {
    let g = geometrize(&DescartesQuadruple(args.quad))?;
    let p = complete(&g, args.max_curv, args.region.as_ref())?;
    let Some(out) = &args.out else {
        println!("disks: {}", p.disks.len());
        println!("tangencies: {}", p.tangencies.len());
        println!("configurations: {}", p.configurations.len());
        let curvs: Vec<String> = p.curvatures().iter().map(ToString::to_string).collect();
        println!("curvatures: {}", curvs.join(" "));
        return Ok(());
    };
    let text = match out.extension().and_then(|e| e.to_str()) {
        Some("json") => {
            serde_json::to_string_pretty(&p).map_err(|e| Failure::Input(e.to_string()))? + "\n"
        }
        Some("svg") => {
            let mut opts = match &args.region {
                Some(r) => RenderOptions::new(*r, args.pixel_width)?,
                None => RenderOptions::fit(&p, args.pixel_width)?,
            };
            opts.draw_spinors = args.spinors;
            to_svg(&p, &opts)?
        }
        _ => {
            return Err(Failure::Input(format!(
                "{}: output must end in .json or .svg",
                out.display()
            )))
        }
    };
    fs::write(out, text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    println!("wrote {} ({} disks)", out.display(), p.disks.len());
    Ok(())
}

fn packing_report(p: &Packing) -> VerificationReport {
    let mut report = verify_packing(p);
    let sums = adjacent_sums_report(p);
    report.check("edge sums from spinors", &sums, |s| {
        if s.holds {
            Ok(())
        } else {
            Err(s.to_string())
        }
    });
    report
}

fn verify_cmd(args: &VerifyArgs) -> CmdResult {
    let report = if let Some(path) = &args.input.packing {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let p: Packing = serde_json::from_str(&text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let mut report = verify_geo(&p.root_geo());
        report.merge(packing_report(&p));
        report
    } else {
        let quad = args.input.quad.expect("clap requires one input");
        let g = geometrize(&DescartesQuadruple(quad))?;
        let mut report = verify_geo(&g);
        if let Some(k) = args.max_curv {
            report.merge(packing_report(&complete(&g, k, args.region.as_ref())?));
        }
        report
    };
    if args.json {
        print_json(&report)?;
    } else {
        print!("{report}");
    }
    finish(&report)
}

fn finish(report: &VerificationReport) -> CmdResult {
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.failed_checks().map(|c| c.name.as_str()).collect();
        Err(Failure::Verification(failed.join(", ")))
    }
}

fn atlas_cmd(args: &AtlasArgs) -> CmdResult {
    if args.dot {
        print!("{}", principal_descent_digraph(args.max_outer)?.to_dot());
        return Ok(());
    }
    let roots = root_atlas(args.max_outer)?;
    if args.json {
        return print_json(&roots);
    }
    for r in &roots {
        println!("{r}  principal {}", r.principal_triple());
    }
    println!("{} roots", roots.len());
    Ok(())
}

fn range(from: Int, to: Option<Int>) -> Result<std::ops::RangeInclusive<Int>, Failure> {
    let to = to.unwrap_or(from);
    if from < 1 || to < from {
        return Err(Failure::Input(format!(
            "need 1 ≤ from ≤ to, got {from}..{to}"
        )));
    }
    Ok(from..=to)
}

fn threads_cmd(args: &ThreadsArgs) -> CmdResult {
    let mut rows = Vec::new();
    for n in range(args.from, args.to)? {
        let t = thread_triple(args.family, n)?;
        let formula = args.family.fourth_formula(n)?;
        rows.push((n, t, formula == t.fourth));
    }
    if args.json {
        let v: Vec<_> = rows
            .iter()
            .map(|(n, t, ok)| json!({"family": args.family, "n": n, "triple": t.triple, "fourth": t.fourth, "proper": t.proper, "formula_matches": ok}))
            .collect();
        return print_json(&v);
    }
    for (n, t, ok) in &rows {
        println!(
            "{} n={n}: {t}  formula={}",
            args.family,
            if *ok { "match" } else { "MISMATCH" }
        );
    }
    Ok(())
}

fn fib_cmd(args: &FibArgs) -> CmdResult {
    let mut rows = Vec::new();
    for n in range(args.from, args.to)? {
        rows.push((fibonacci_triple(n)?, fibonacci_tangency_point(n)?));
    }
    if args.json {
        let v: Vec<_> = rows
            .iter()
            .map(|(t, p)| {
                json!({
                    "n": p.n,
                    "triple": t.triple,
                    "fourth": t.fourth,
                    "proper": t.proper,
                    "point": [p.point.0.to_string(), p.point.1.to_string()],
                    "on_circle": p.on_circle,
                })
            })
            .collect();
        return print_json(&v);
    }
    for (t, p) in &rows {
        println!(
            "n={}: {t}  P=({}, {})  on circle={}",
            p.n, p.point.0, p.point.1, p.on_circle
        );
    }
    Ok(())
}

fn group_cmd(args: &GroupArgs) -> CmdResult {
    let spec = GroupSpec::new(args.dim, args.family)?;
    let sizes = cayley_sphere_sizes_with_budget(&spec, args.depth, args.budget)?;
    let props = check_generator_properties(args.dim)?;
    if args.json {
        return print_json(&json!({"group": spec, "sphere_sizes": sizes, "properties": props}));
    }
    let s: Vec<String> = sizes.iter().map(ToString::to_string).collect();
    println!("{spec} sphere sizes: {}", s.join(" "));
    for line in props.lines() {
        println!("  {line}");
    }
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Descend(a) => descend(a),
        Command::Geometrize(a) => geometrize_cmd(a),
        Command::Complete(a) => complete_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Atlas(a) => atlas_cmd(a),
        Command::Threads(a) => threads_cmd(a),
        Command::Fib(a) => fib_cmd(a),
        Command::Group(a) => group_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

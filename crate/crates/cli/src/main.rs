use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gksiegel_core::algebra::{format_rational, parse_rational, render_rational, QuadExt, Rational};
use gksiegel_core::attach::{attach, AttachOptions};
use gksiegel_core::corpus::{gen_corpus, random_negk, rng};
use gksiegel_core::egk::{bound_check, f_poly, f_poly_series, functional_eq_defect, specialize, NaiveEGKDatum, Point};
use gksiegel_core::gross_keating::gk_invariant;
use gksiegel_core::lift::{
    bound_report, csv_header, lift_coefficient, maass_check, EigenformData, MaassStatus, CSV_DIGITS,
};
use gksiegel_core::oracle::{egk_to_f, siegel_oracle};
use gksiegel_core::quadratic::local_invariants;
use gksiegel_core::{arith, Budget, Error, HalfIntegralMatrix, Result};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gksiegel", version, about = "Local Siegel series, Gross-Keating invariants and lift coefficients")]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration budget in visited candidates (overrides GKSIEGEL_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gross-Keating invariant of B at a prime.
    Gk {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Local Siegel series polynomial F_p(B, X).
    Siegel {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = SiegelMethod::Both)]
        method: SiegelMethod,
        /// Oracle level m (default e_B + 1).
        #[arg(long)]
        level: Option<u32>,
    },
    /// Naive EGK data.
    #[command(subcommand)]
    Negk(NegkCommand),
    /// Attach a naive EGK datum to B at a prime.
    Attach {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        matrix: PathBuf,
        /// Confirm the datum against the oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Fourier coefficients of the lift.
    #[command(subcommand)]
    Lift(LiftCommand),
    /// Write a deterministic corpus of matrix files.
    GenCorpus {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        entry_bound: i64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SiegelMethod {
    Oracle,
    Egk,
    Both,
}

#[derive(Subcommand, Debug)]
enum NegkCommand {
    /// Print G(H; Y, X), optionally at Y = sqrt(q) and X = x.
    Eval {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<u32>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eps: Vec<i8>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Route agreement, functional equation and bounds on random data.
    Check(NegkCheck),
}

#[derive(Args, Debug)]
struct NegkCheck {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 5)]
    max_a: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum LiftCommand {
    /// Coefficient A(B) from an eigenform table.
    Coeff {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Bound report over a directory of matrix files.
    Bounds {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long, default_value = "1/100")]
        eps: String,
        /// CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<HalfIntegralMatrix> {
    let b = HalfIntegralMatrix::from_json(&read(path)?)?;
    if !b.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(b)
}

fn check_prime(p: u64) -> Result<u64> {
    if arith::is_prime_u64(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn int_json(v: &num_bigint::BigInt) -> Value {
    i64::try_from(v).map_or_else(|_| json!(v.to_string()), |x| json!(x))
}

fn datum_json(h: &NaiveEGKDatum) -> Value {
    json!({"a": h.a(), "eps": h.eps(), "text": h.to_string()})
}

fn cmd_gk(b: &HalfIntegralMatrix, p: u64, as_json: bool) -> Result<()> {
    let gk = gk_invariant(b, p)?;
    let e_b = local_invariants(b, p)?.e_b;
    let n = b.n();
    let minors: Vec<Value> = (1..n)
        .map(|r| {
            b.gr_at_p(p, r)
                .map(|g| json!({"r": r, "e_r": gk.e_ledger[r - 1], "g_r": g, "holds": gk.e_ledger[r - 1] <= g}))
        })
        .collect::<Result<_>>()?;
    let ledger_ok = gk.e_ledger[n - 1] == e_b;
    let minors_ok = minors.iter().all(|m| m["holds"] == json!(true));
    if as_json {
        print_json(&json!({
            "p": p,
            "a": gk.a,
            "e_ledger": gk.e_ledger,
            "certificate": gk.certificate.as_str(),
            "e_B": e_b,
            "ledger_matches_e_B": ledger_ok,
            "minor_bounds": minors,
        }));
    } else {
        let a: Vec<String> = gk.a.iter().map(u32::to_string).collect();
        println!("GK = ({})", a.join(","));
        println!("e-ledger = {:?}", gk.e_ledger);
        println!("certificate = {}", gk.certificate.as_str());
        println!("e_n = e_B: {ledger_ok} (e_B = {e_b})");
        for m in &minors {
            println!("e_{} <= g_{}: {} ({} <= {})", m["r"], m["r"], m["holds"], m["e_r"], m["g_r"]);
        }
    }
    if gk.certificate.is_trusted() && !(ledger_ok && minors_ok) {
        return Err(Error::invariant("GK ledger check failed"));
    }
    Ok(())
}

fn cmd_siegel(b: &HalfIntegralMatrix, p: u64, method: SiegelMethod, level: Option<u32>, budget: Budget) -> Result<()> {
    let e_b = local_invariants(b, p)?.e_b;
    let mut out = json!({"p": p, "n": b.n(), "eB": e_b, "method": format!("{method:?}").to_lowercase()});
    let mut oracle_f = None;
    if method != SiegelMethod::Egk {
        let run = siegel_oracle(b, p, level, &budget)?;
        out["S"] = json!(run.sums.s);
        out["level"] = json!(run.sums.m);
        out["F"] = json!(run.poly.coeffs);
        out["text"] = json!(run.poly.to_string());
        oracle_f = Some(run.poly.coeffs);
    }
    if method != SiegelMethod::Oracle {
        let r = attach(b, p, &AttachOptions { budget, ..Default::default() })?;
        let f: Vec<Value> = egk_to_f(&f_poly(&r.datum), p)?.iter().map(int_json).collect();
        out["datum"] = datum_json(&r.datum);
        out["attach_method"] = json!(r.method.as_str());
        if let Some(o) = &oracle_f {
            let equal = o.iter().map(|c| json!(c)).eq(f.iter().cloned());
            out["F_egk"] = json!(f);
            out["equal"] = json!(equal);
            print_json(&out);
            if !equal {
                return Err(Error::invariant("oracle and EGK polynomials differ"));
            }
            return Ok(());
        }
        out["F"] = json!(f);
    }
    print_json(&out);
    Ok(())
}

fn cmd_negk_eval(a: Vec<u32>, eps: Vec<i8>, q: Option<u64>, x: Option<String>) -> Result<()> {
    let h = NaiveEGKDatum::new(a, eps)?;
    let g = f_poly(&h);
    let mut out = json!({"datum": datum_json(&h), "e_n": h.e_n(), "G": g.to_string()});
    match (q, x) {
        (None, Some(_)) => return Err(Error::invalid("--x needs --q")),
        (None, None) => {}
        (Some(q), x) => {
            let q = check_prime(q)?;
            let coeffs: Vec<String> = g.coeffs_at_sqrt(q)?.iter().map(ToString::to_string).collect();
            out["q"] = json!(q);
            out["G_coeffs"] = json!(coeffs);
            if let Some(x) = x {
                let x: Rational = parse_rational(&x)?;
                let v = specialize(&g, q, &Point::Explicit(QuadExt::rational(x.clone())))?;
                out["x"] = json!(format_rational(&x));
                out["value"] = json!(v.to_string());
                out["value_dec"] = json!(v.to_decimal(CSV_DIGITS));
            }
        }
    }
    print_json(&out);
    Ok(())
}

fn cmd_negk_check(c: &NegkCheck) -> Result<()> {
    if c.max_n == 0 {
        return Err(Error::invalid("--max-n must be positive"));
    }
    let mut r = rng(c.seed);
    let data: Vec<NaiveEGKDatum> = (0..c.count).map(|_| random_negk(&mut r, c.max_n, c.max_a)).collect();
    let (mut routes, mut fe, mut bounds) = (Vec::new(), Vec::new(), Vec::new());
    let mut checks = 0usize;
    for h in &data {
        if f_poly(h) != f_poly_series(h)? {
            routes.push(h.to_string());
        }
        if !functional_eq_defect(h).is_zero() {
            fe.push(h.to_string());
        }
        for q in [2u64, 3, 5] {
            for r0 in [Rational::from_integer(0.into()), parse_rational("1/2")?] {
                let rep = bound_check(h, q, &r0)?;
                checks += rep.checks;
                bounds.extend(rep.violations.into_iter().map(|v| format!("{h} q={q}: {v}")));
            }
        }
    }
    print_json(&json!({
        "seed": c.seed,
        "count": c.count,
        "route_mismatches": routes,
        "functional_equation_defects": fe,
        "bound_checks": checks,
        "bound_violations": bounds,
    }));
    if routes.is_empty() && fe.is_empty() && bounds.is_empty() {
        Ok(())
    } else {
        Err(Error::invariant("naive EGK checks failed"))
    }
}

fn cmd_attach(b: &HalfIntegralMatrix, p: u64, verify: bool, budget: Budget) -> Result<()> {
    let r = attach(b, p, &AttachOptions { verify, budget, ..Default::default() })?;
    print_json(&json!({
        "p": p,
        "datum": datum_json(&r.datum),
        "method": r.method.as_str(),
        "certificate": r.certificate.as_str(),
        "oracle": r.oracle.as_ref().map(|o| json!({"F": o.coeffs, "text": o.to_string()})),
    }));
    Ok(())
}

fn cmd_lift_coeff(form: &Path, matrix: &Path, budget: Budget) -> Result<()> {
    let data = EigenformData::from_json(&read(form)?)?;
    let b = load_matrix(matrix)?;
    let c = lift_coefficient(&b, &data, &AttachOptions { budget, ..Default::default() })?;
    let per_prime: serde_json::Map<String, Value> =
        c.per_prime.iter().map(|(p, v)| (p.to_string(), json!(v.to_string()))).collect();
    print_json(&json!({
        "c": format_rational(&c.value),
        "c_dec": render_rational(&c.value, CSV_DIGITS),
        "dB": c.d_b.to_string(),
        "fB": c.f_b.to_string(),
        "c_h": format_rational(&c.c_h),
        "per_prime": per_prime,
        "ramanujan_flags": c.ramanujan_flags,
    }));
    Ok(())
}

fn matrix_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_lift_bounds(form: &Path, dir: &Path, eps: &str, out: Option<&Path>, budget: Budget) -> Result<()> {
    let data = EigenformData::from_json(&read(form)?)?;
    let eps = parse_rational(eps)?;
    if eps <= Rational::from_integer(0.into()) {
        return Err(Error::invalid("--eps must be positive"));
    }
    let files = matrix_files(dir)?;
    let matrices: Vec<(String, HalfIntegralMatrix)> = files
        .iter()
        .map(|f| load_matrix(f).map(|b| (f.file_stem().unwrap().to_string_lossy().into_owned(), b)))
        .collect::<Result<_>>()?;
    let opts = AttachOptions { budget, ..Default::default() };
    let mut csv = format!("{}\n", csv_header());
    let mut failed = Vec::new();
    for (id, b) in &matrices {
        let row = bound_report(b, &data, &eps, &opts)?;
        let maass = if b.n() == 2 {
            match maass_check(b, &data, &opts) {
                Ok(m) if m.holds() => MaassStatus::Equal,
                Ok(_) => MaassStatus::Differs,
                Err(Error::MissingEntry(_)) => MaassStatus::Skipped,
                Err(e) => return Err(e),
            }
        } else {
            MaassStatus::Skipped
        };
        if !(row.holds_divisor && row.holds_minor) {
            failed.push(id.clone());
        }
        csv.push_str(&row.csv_line(id, maass));
        csv.push('\n');
    }
    match out {
        Some(path) => fs::write(path, &csv).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::invariant(format!("coefficient bounds fail for {}", failed.join(", "))))
    }
}

fn cmd_gen_corpus(seed: u64, count: usize, n: usize, entry_bound: i64, out: &Path) -> Result<()> {
    if !(2..=4).contains(&n) {
        return Err(Error::invalid("--n must be 2, 3 or 4"));
    }
    if entry_bound < 1 {
        return Err(Error::invalid("--entry-bound must be positive"));
    }
    let corpus = gen_corpus(seed, count, n, entry_bound)?;
    fs::create_dir_all(out).map_err(|e| Error::invalid(format!("{}: {e}", out.display())))?;
    let width = count.saturating_sub(1).to_string().len().max(4);
    for (i, b) in corpus.iter().enumerate() {
        let path = out.join(format!("m{i:0width$}.json"));
        fs::write(&path, format!("{}\n", b.to_json()))
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    }
    println!("wrote {} matrices to {}", corpus.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let budget = match cli.budget {
        Some(0) => return Err(Error::invalid("--budget must be positive")),
        Some(b) => Budget::new(b),
        None => Budget::from_env()?,
    };
    match cli.command {
        Command::Gk { prime, matrix, json } => cmd_gk(&load_matrix(&matrix)?, check_prime(prime)?, json),
        Command::Siegel { prime, matrix, method, level } => {
            cmd_siegel(&load_matrix(&matrix)?, check_prime(prime)?, method, level, budget)
        }
        Command::Negk(NegkCommand::Eval { a, eps, q, x }) => cmd_negk_eval(a, eps, q, x),
        Command::Negk(NegkCommand::Check(c)) => cmd_negk_check(&c),
        Command::Attach { prime, matrix, verify } => {
            cmd_attach(&load_matrix(&matrix)?, check_prime(prime)?, verify, budget)
        }
        Command::Lift(LiftCommand::Coeff { form, matrix }) => cmd_lift_coeff(&form, &matrix, budget),
        Command::Lift(LiftCommand::Bounds { form, matrices, eps, out }) => {
            cmd_lift_bounds(&form, &matrices, &eps, out.as_deref(), budget)
        }
        Command::GenCorpus { seed, count, n, entry_bound, out } => cmd_gen_corpus(seed, count, n, entry_bound, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(t);
    }
    if let Err(e) = pool.build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(3);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

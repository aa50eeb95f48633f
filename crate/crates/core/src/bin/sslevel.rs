//! Command-line interface: enumerate level structures, partition them into
//! fibers, build and export isogeny graphs, compute alpha_N and class
//! numbers, scan prime ranges, and run the pinned verification suite.
//!
//! Exit codes: 0 success, 1 invariant/verification failure, 2 bad
//! parameters, 3 I/O.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sslevel::counting::{
    alpha_exact, class_number, ehlmp_lower_bound, scan_csv_header, scan_row_csv, ScanRow,
};
use sslevel::field::is_prime_u64;
use sslevel::fibers::{count_conjugate_isogenies, fiber_census, fiber_partition};
use sslevel::fixtures::reference_config;
use sslevel::graphs::{
    build_base_graph, build_level_graph, connected_components, export_csv, export_dot,
};
use sslevel::session::{Session, SessionConfig};
use sslevel::verify::checks;
use sslevel::{Error, Result};

#[derive(Parser)]
#[command(name = "sslevel", version, about = "Supersingular elliptic curves with level structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Dot,
}

#[derive(Args)]
struct SessionArgs {
    /// Characteristic (prime >= 5)
    #[arg(long)]
    p: u64,
    /// Level (prime distinct from p)
    #[arg(long)]
    n: u64,
    /// Isogeny degree for graph edges (prime distinct from p and N)
    #[arg(long)]
    ell: Option<u64>,
    /// Modulus of F_{p^2} as a polynomial in one symbol, e.g. "s^2+60*s+2"
    #[arg(long)]
    fp2_modulus: Option<String>,
    /// Modulus of the working field (even degree, multiple of the required
    /// torsion degree)
    #[arg(long)]
    tower_modulus: Option<String>,
    /// File with representative models, lines "j = <elt>; a = <elt>; b = <elt>"
    #[arg(long)]
    overrides: Option<String>,
    /// Use the bundled reference moduli and models (p in {23, 37, 61})
    #[arg(long)]
    reference: bool,
}

impl SessionArgs {
    fn config(&self) -> Result<SessionConfig> {
        if self.reference {
            let mut cfg = reference_config(self.p, self.n, self.ell).ok_or_else(|| {
                Error::Params(format!("no bundled reference data for p = {}", self.p))
            })?;
            if let Some(m) = &self.fp2_modulus {
                cfg.fp2_modulus = Some(m.clone());
            }
            if let Some(m) = &self.tower_modulus {
                cfg.tower_modulus = Some(m.clone());
            }
            return Ok(cfg);
        }
        let overrides = match &self.overrides {
            Some(path) => Some(fs::read_to_string(path)?),
            None => None,
        };
        Ok(SessionConfig {
            p: self.p,
            n: self.n,
            ell: self.ell,
            fp2_modulus: self.fp2_modulus.clone(),
            tower_modulus: self.tower_modulus.clone(),
            overrides,
        })
    }

    fn session(&self) -> Result<Session> {
        Session::new(&self.config()?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the classes [E, G] at level N
    Enumerate {
        #[command(flatten)]
        session: SessionArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Partition the classes into fibers under the involutions D and F
    Fibers {
        #[command(flatten)]
        session: SessionArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Build the degree-ell isogeny graph and export it
    Graph {
        #[command(flatten)]
        session: SessionArgs,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
        /// Pair each edge with its dual (requires p = 1 mod 12)
        #[arg(long)]
        undirected: bool,
        /// Build the base graph on j-invariants instead of level classes
        #[arg(long)]
        base: bool,
    },
    /// Compute alpha_N by class numbers, enumeration, or both
    Alpha {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "classnumber")]
        method: Method,
    },
    /// Class number of the quadratic order of discriminant D
    Classnum {
        /// Negative discriminant, 0 or 1 mod 4
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Scan a prime range, writing one CSV row per prime
    Scan {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "5")]
        pmin: u64,
        #[arg(long, default_value = "500")]
        pmax: u64,
        /// Enumeration cap: alpha' columns only for p = 1 mod 12 up to this
        #[arg(long, default_value = "2000")]
        cap: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the pinned verification suite
    Verify {
        /// Run only the named check (e.g. "table2")
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Classnumber,
    Enumerate,
    Both,
}

fn emit(out: &Option<String>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_enumerate(args: &SessionArgs, format: Format, out: &Option<String>) -> Result<()> {
    let s = args.session()?;
    let set = s.level_set();
    let content = match format {
        Format::Text => {
            let mut t = String::new();
            for i in 0..set.len() {
                t.push_str(&format!(
                    "{} orbit_size={}\n",
                    s.class_label(&set, i),
                    set.classes[i].orbit_size()
                ));
            }
            t.push_str(&format!("total: {} classes, weight {}\n", set.len(), set.total_weight()));
            t
        }
        Format::Csv => {
            let mut t = String::from("class,curve_j,gen_x,orbit_size\n");
            for (i, c) in set.classes.iter().enumerate() {
                t.push_str(&format!(
                    "\"{}\",\"{}\",\"{}\",{}\n",
                    s.class_label(&set, i),
                    s.curves[c.curve_idx].j_fp2,
                    c.rep.gen_x,
                    c.orbit_size()
                ));
            }
            t
        }
        Format::Json => {
            let rows: Vec<_> = set
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({
                        "class": s.class_label(&set, i),
                        "curve_j": s.curves[c.curve_idx].j_fp2.to_string(),
                        "gen_x": c.rep.gen_x.to_string(),
                        "orbit_size": c.orbit_size(),
                    })
                })
                .collect();
            format!("{}\n", json!({"format": 1, "classes": rows}))
        }
        Format::Dot => return Err(Error::Params("enumerate does not support dot output".into())),
    };
    emit(out, &content)
}

fn cmd_fibers(args: &SessionArgs, format: Format, out: &Option<String>) -> Result<()> {
    let s = args.session()?;
    let set = s.level_set();
    let fibers = fiber_partition(&s, &set)?;
    let members = |f: &sslevel::fibers::FiberRecord| -> Vec<String> {
        f.classes.iter().map(|&c| s.class_label(&set, c)).collect()
    };
    let content = match format {
        Format::Text => {
            let mut t = String::from("fiber_id size tag members\n");
            for (i, f) in fibers.iter().enumerate() {
                t.push_str(&format!(
                    "{} {} {} {}\n",
                    i,
                    f.size,
                    f.tag,
                    members(f).join(" ")
                ));
            }
            if s.p % 12 == 1 {
                let c = fiber_census(&s, &set)?;
                t.push_str(&format!(
                    "census: F1={} F2={} F4={} T={} #S_p={}\n",
                    c.f1, c.f2, c.f4, c.t, c.s_p
                ));
            }
            t
        }
        Format::Csv => {
            let mut t = String::from("fiber_id,size,tag,members\n");
            for (i, f) in fibers.iter().enumerate() {
                t.push_str(&format!(
                    "{},{},{},\"{}\"\n",
                    i,
                    f.size,
                    f.tag,
                    members(f).join("; ")
                ));
            }
            t
        }
        Format::Json => {
            let rows: Vec<_> = fibers
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    json!({
                        "fiber_id": i,
                        "size": f.size,
                        "tag": f.tag,
                        "members": members(f),
                    })
                })
                .collect();
            format!("{}\n", json!({"format": 1, "fibers": rows}))
        }
        Format::Dot => return Err(Error::Params("fibers does not support dot output".into())),
    };
    emit(out, &content)
}

fn cmd_graph(
    args: &SessionArgs,
    format: Format,
    out: &Option<String>,
    undirected: bool,
    base: bool,
) -> Result<()> {
    if args.ell.is_none() {
        return Err(Error::Params("graph requires --ell".into()));
    }
    let s = args.session()?;
    let g = if base {
        build_base_graph(&s)?
    } else {
        build_level_graph(&s)?
    };
    let content = match format {
        Format::Dot => export_dot(&g, undirected)?,
        Format::Csv => export_csv(&g, undirected)?,
        _ => return Err(Error::Params("graph supports dot or csv output".into())),
    };
    emit(out, &content)?;
    eprintln!("components: {}", connected_components(&g));
    Ok(())
}

fn cmd_alpha(p: u64, n: u64, method: Method) -> Result<()> {
    if !is_prime_u64(p) || !is_prime_u64(n) || p == n || p * n <= 4 {
        return Err(Error::Params(format!(
            "alpha requires distinct primes with pN > 4 (got p={p}, N={n})"
        )));
    }
    let exact = match method {
        Method::Classnumber | Method::Both => Some(alpha_exact(p, n)?),
        Method::Enumerate => None,
    };
    let enumerated = match method {
        Method::Enumerate | Method::Both => {
            let cfg = reference_config(p, n, None)
                .unwrap_or(SessionConfig { p, n, ..Default::default() });
            let s = Session::new(&cfg)?;
            Some(count_conjugate_isogenies(&s))
        }
        Method::Classnumber => None,
    };
    if let Some(e) = &exact {
        println!("alpha({p}, {n}) [class numbers] = {e}");
    }
    if let Some(en) = &enumerated {
        println!("alpha({p}, {n}) [enumeration]   = {}", en.alpha);
        println!("alpha'({p}, {n}) [j not in F_p]  = {}", en.alpha_prime);
        for (label, c) in &en.breakdown {
            println!("  {label}: {c}");
        }
    }
    if let (Some(e), Some(en)) = (&exact, &enumerated) {
        if *e != en.alpha {
            return Err(Error::Invariant(format!(
                "alpha mismatch: class numbers give {e}, enumeration gives {}",
                en.alpha
            )));
        }
        println!("methods agree");
    }
    Ok(())
}

fn cmd_scan(n: u64, pmin: u64, pmax: u64, cap: u64, out: &Option<String>) -> Result<()> {
    if !is_prime_u64(n) {
        return Err(Error::Params(format!("N must be prime (got {n})")));
    }
    let mut content = String::from(scan_csv_header());
    content.push('\n');
    let mut rows = 0usize;
    for p in pmin..=pmax {
        if !is_prime_u64(p) || p < 5 || p == n || p * n <= 4 {
            continue;
        }
        let mut row = ScanRow {
            p,
            n,
            alpha_exact: alpha_exact(p, n)?,
            alpha_enumerated: None,
            alpha_prime: None,
            upper_bound: None,
            ehlmp_lower: ehlmp_lower_bound(p, n).ok(),
        };
        if p % 12 == 1 && p <= cap {
            let s = Session::new(&SessionConfig { p, n, ..Default::default() })?;
            let set = s.level_set();
            let census = fiber_census(&s, &set)?;
            let e = count_conjugate_isogenies(&s);
            row.alpha_enumerated = Some(e.alpha);
            row.alpha_prime = Some(e.alpha_prime);
            row.upper_bound = Some(sslevel::fibers::alpha_prime_exact_bound(&census));
        }
        content.push_str(&scan_row_csv(&row));
        content.push('\n');
        rows += 1;
    }
    emit(out, &content)?;
    eprintln!("rows: {rows}");
    Ok(())
}

fn cmd_verify(only: &Option<String>) -> Result<()> {
    let mut all = checks();
    if let Some(name) = only {
        all.retain(|c| c.name == *name);
        if all.is_empty() {
            return Err(Error::Params(format!("unknown check \"{name}\"")));
        }
    }
    let mut failed = false;
    for c in all {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        match result {
            Ok(()) if elapsed <= c.budget => {
                println!("PASS {:<12} {elapsed:>8.2?} - {}", c.name, c.description);
            }
            Ok(()) => {
                println!(
                    "FAIL {:<12} {elapsed:>8.2?} exceeded budget {:?}",
                    c.name, c.budget
                );
                failed = true;
            }
            Err(msg) => {
                println!("FAIL {:<12} {elapsed:>8.2?} - {msg}", c.name);
                failed = true;
            }
        }
    }
    if failed {
        return Err(Error::Invariant("verification failed".into()));
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Enumerate { session, format, out } => cmd_enumerate(session, *format, out),
        Command::Fibers { session, format, out } => cmd_fibers(session, *format, out),
        Command::Graph {
            session,
            format,
            out,
            undirected,
            base,
        } => cmd_graph(session, *format, out, *undirected, *base),
        Command::Alpha { p, n, method } => cmd_alpha(*p, *n, *method),
        Command::Classnum { d } => {
            println!("h({d}) = {}", class_number(*d)?);
            Ok(())
        }
        Command::Scan { n, pmin, pmax, cap, out } => cmd_scan(*n, *pmin, *pmax, *cap, out),
        Command::Verify { only } => cmd_verify(only),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Params(_) | Error::Parse(_) | Error::NotPrime(_)
                | Error::ReducibleModulus { .. } | Error::SingularCurve => ExitCode::from(2),
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

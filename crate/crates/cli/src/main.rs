//! Command-line surface for deciding and certifying global rigidity of
//! braced plane triangulations.
//!
//! Exit codes: 0 success or positive verdict, 1 legitimate negative verdict,
//! 2 input error, 3 internal invariant breach. Verdicts go to stdout,
//! diagnostics to stderr; identical inputs and `--seed` give byte-identical
//! output.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tririg_core::braced::{
    decide_braced, verify_certificate, BracedError, BracedTriangulation, Certificate,
};
use tririg_core::contractible::{
    contractible_edges, find_contractible_avoiding, find_contractible_off_face,
};
use tririg_core::exact_linalg::RandomSource;
use tririg_core::generate;
use tririg_core::global_rigidity::{check_global_rigidity, Verdict3};
use tririg_core::io::TriangulationFile;
use tririg_core::rigidity::{coincident_rank, max_rank, CoincidentSpec};
use tririg_core::{Fq, PRIME};

#[derive(Parser)]
#[command(name = "tririg", version, about = "Global rigidity of braced plane triangulations in 3-space", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RandomOpts {
    /// Dimension of the ambient space
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Seed for all randomized rank computations
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent random trials per rank decision
    #[arg(long, default_value_t = 3)]
    trials: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a triangulation or braced-triangulation file
    Validate { file: String },
    /// Decide global rigidity and optionally emit a certificate
    Check {
        file: String,
        #[command(flatten)]
        random: RandomOpts,
        /// Write the certificate to this path on a positive verdict
        #[arg(long)]
        cert: Option<String>,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
    },
    /// Randomized stress-matrix global-rigidity oracle
    Ght {
        file: String,
        #[command(flatten)]
        random: RandomOpts,
        #[arg(long)]
        json: bool,
    },
    /// Contract an edge, or list contractible edges
    Contract {
        file: String,
        /// Contract this edge (format: u,v) and print the result
        #[arg(long, value_parser = parse_pair, conflicts_with = "all")]
        edge: Option<(usize, usize)>,
        /// List all contractible edges
        #[arg(long)]
        all: bool,
    },
    /// Coincident rank and infinitesimal-rigidity verdict for a vertex pair
    RealizeCoincident {
        file: String,
        /// The coincident pair (format: u,v)
        #[arg(long, value_parser = parse_pair)]
        pair: (usize, usize),
        #[command(flatten)]
        random: RandomOpts,
        #[arg(long)]
        json: bool,
    },
    /// Replay a certificate against a braced-triangulation file
    Verify {
        cert: String,
        file: String,
        #[command(flatten)]
        random: RandomOpts,
    },
    /// Generate a corpus triangulation
    /// (octahedron | icosahedron | doublewheel:k | stacked:n | flipwalk:n:steps:seed)
    Gen {
        spec: String,
        /// Keep walking until the result is 4-connected (flip walks)
        #[arg(long = "require-4c")]
        require_4c: bool,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected u,v".into());
    }
    let u = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let v = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    if u == v {
        return Err("endpoints must differ".into());
    }
    Ok((u, v))
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

fn braced_failure(e: BracedError) -> Failure {
    match e {
        BracedError::InvalidInput(_) => Failure::input(e.to_string()),
        other => Failure::internal(other.to_string()),
    }
}

fn read_file(path: &str) -> Result<TriangulationFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
    TriangulationFile::from_json(&text).map_err(|e| Failure::input(e.to_string()))
}

fn read_braced(path: &str) -> Result<BracedTriangulation, Failure> {
    read_file(path)?
        .to_braced()
        .map_err(|e| Failure::input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Validate { file } => cmd_validate(&file),
        Command::Check {
            file,
            random,
            cert,
            json,
        } => cmd_check(&file, &random, cert.as_deref(), json),
        Command::Ght { file, random, json } => cmd_ght(&file, &random, json),
        Command::Contract { file, edge, all } => cmd_contract(&file, edge, all),
        Command::RealizeCoincident {
            file,
            pair,
            random,
            json,
        } => cmd_realize(&file, pair, &random, json),
        Command::Verify { cert, file, random } => cmd_verify(&cert, &file, &random),
        Command::Gen { spec, require_4c } => cmd_gen(&spec, require_4c),
    }
}

fn cmd_validate(path: &str) -> Result<u8, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?;
    let file =
        TriangulationFile::from_json(&text).map_err(|e| Failure::input(e.to_string()))?;
    match file.to_braced() {
        Ok(g) => {
            let t = g.t();
            println!(
                "VALID: n={}, m={}, faces={}, braces={}, 4-connected={}",
                t.n(),
                t.m(),
                t.faces().len(),
                g.braces().len(),
                if g.union_graph().is_k_connected(4) {
                    "yes"
                } else {
                    "no"
                }
            );
            Ok(0)
        }
        Err(e) => {
            println!("INVALID: {e}");
            Ok(1)
        }
    }
}

fn require_dim3(random: &RandomOpts) -> Result<(), Failure> {
    if random.dim != 3 {
        return Err(Failure::input(
            "the decision procedure is specific to dimension 3",
        ));
    }
    Ok(())
}

fn check_dim(random: &RandomOpts) -> Result<(), Failure> {
    if random.dim < 1 || random.dim > 10 {
        return Err(Failure::input("--dim must be between 1 and 10"));
    }
    Ok(())
}

fn cmd_check(
    path: &str,
    random: &RandomOpts,
    cert_out: Option<&str>,
    json: bool,
) -> Result<u8, Failure> {
    require_dim3(random)?;
    let g = read_braced(path)?;
    let mut rng = RandomSource::new(random.seed);
    let verdict = decide_braced::<Fq>(&g, &mut rng, random.trials).map_err(braced_failure)?;
    let steps = verdict
        .certificate
        .as_ref()
        .map(|c| c.steps.len())
        .unwrap_or(0);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "command": "check",
                "globally_rigid": verdict.globally_rigid,
                "reason": verdict.reason,
                "steps": steps,
                "seed": random.seed,
                "trials": random.trials,
            }))
            .expect("envelope serializes")
        );
    } else if verdict.globally_rigid {
        println!("GLOBALLY RIGID");
    } else {
        println!("NOT GLOBALLY RIGID: {}", verdict.reason);
    }
    if let Some(out) = cert_out {
        match &verdict.certificate {
            Some(cert) => fs::write(out, cert.to_json())
                .map_err(|e| Failure::input(format!("cannot write {out}: {e}")))?,
            None => eprintln!("no certificate emitted for a negative verdict"),
        }
    }
    Ok(if verdict.globally_rigid { 0 } else { 1 })
}

fn cmd_ght(path: &str, random: &RandomOpts, json: bool) -> Result<u8, Failure> {
    check_dim(random)?;
    let g = read_braced(path)?;
    let mut rng = RandomSource::new(random.seed);
    let report =
        check_global_rigidity::<Fq>(&g.union_graph(), random.dim, &mut rng, random.trials);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "command": "ght",
                "verdict": report.verdict,
                "reason": report.reason,
                "rigidity_rank": report.rigidity_rank,
                "rigidity_target": report.rigidity_target,
                "stress_rank": report.stress_rank,
                "stress_target": report.stress_target,
                "seed": report.seed,
                "prime": PRIME,
            }))
            .expect("envelope serializes")
        );
    } else {
        let label = match report.verdict {
            Verdict3::GloballyRigid => "GLOBALLY RIGID",
            Verdict3::NotGloballyRigid => "NOT GLOBALLY RIGID",
            Verdict3::Inconclusive => "INCONCLUSIVE",
        };
        println!("{label}: {}", report.reason);
        println!(
            "rigidity rank {}/{}, stress rank {}/{}, seed {}, prime {}",
            report.rigidity_rank,
            report.rigidity_target,
            report
                .stress_rank
                .map_or("-".to_string(), |r| r.to_string()),
            report.stress_target,
            report.seed,
            PRIME,
        );
    }
    Ok(match report.verdict {
        Verdict3::GloballyRigid => 0,
        Verdict3::NotGloballyRigid => 1,
        Verdict3::Inconclusive => 3,
    })
}

fn cmd_contract(path: &str, e: Option<(usize, usize)>, all: bool) -> Result<u8, Failure> {
    let g = read_braced(path)?;
    if !g.braces().is_empty() {
        eprintln!("note: braces are ignored; contraction acts on the triangulation");
    }
    let t = g.t();
    if let Some((u, v)) = e {
        let c = t
            .contract(u, v)
            .map_err(|err| Failure::input(err.to_string()))?;
        println!("{}", TriangulationFile::from_triangulation(&c.result).to_json());
        return Ok(0);
    }
    if !all {
        return Err(Failure::input("pass --edge u,v or --all"));
    }
    let good = contractible_edges(t).map_err(|err| Failure::input(err.to_string()))?;
    // flag edges that the constructive searches single out
    let mut flagged: std::collections::BTreeMap<(usize, usize), Vec<&'static str>> =
        good.iter().map(|&e| (e, vec!["brute"])).collect();
    if t.n() >= 7 && t.is_four_connected() {
        for i in 0..t.faces().len() {
            let f = t.face_triple(i);
            if let Ok(c) = find_contractible_off_face(t, &f) {
                if let Some(tags) = flagged.get_mut(&c.edge) {
                    if !tags.contains(&"off-face") {
                        tags.push("off-face");
                    }
                }
            }
        }
        let uv0 = t.graph().edges()[0];
        let pair = (0..t.n())
            .flat_map(|x| ((x + 1)..t.n()).map(move |y| (x, y)))
            .find(|&(x, y)| !t.graph().has_edge(x, y));
        if let Some((x, y)) = pair {
            if let Ok(c) = find_contractible_avoiding(t, uv0, x, y) {
                if let Some(tags) = flagged.get_mut(&c.edge) {
                    if !tags.contains(&"avoiding") {
                        tags.push("avoiding");
                    }
                }
            }
        }
    }
    for (e, tags) in &flagged {
        println!("{},{}\t{}", e.0, e.1, tags.join(" "));
    }
    eprintln!("{} contractible edges", flagged.len());
    Ok(if flagged.is_empty() { 1 } else { 0 })
}

fn cmd_realize(
    path: &str,
    pair: (usize, usize),
    random: &RandomOpts,
    json: bool,
) -> Result<u8, Failure> {
    check_dim(random)?;
    let g = read_braced(path)?;
    let union = g.union_graph();
    if pair.0 >= union.n() || pair.1 >= union.n() {
        return Err(Failure::input("pair out of range"));
    }
    let spec = CoincidentSpec::new(pair.0, pair.1);
    let mut rng = RandomSource::new(random.seed);
    let rank = coincident_rank::<Fq>(&union, spec, random.dim, &mut rng, random.trials);
    let target = max_rank(union.n(), random.dim);
    let rigid = rank == target;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "command": "realize-coincident",
                "pair": [pair.0, pair.1],
                "rank": rank,
                "target": target,
                "coincident_inf_rigid": rigid,
                "seed": random.seed,
                "prime": PRIME,
            }))
            .expect("envelope serializes")
        );
    } else {
        println!(
            "coincident rank {rank}/{target}: {}",
            if rigid {
                "INFINITESIMALLY RIGID"
            } else {
                "RANK DEFICIENT"
            }
        );
    }
    Ok(if rigid { 0 } else { 1 })
}

fn cmd_verify(cert_path: &str, file: &str, random: &RandomOpts) -> Result<u8, Failure> {
    require_dim3(random)?;
    let g = read_braced(file)?;
    let text = fs::read_to_string(cert_path)
        .map_err(|e| Failure::input(format!("cannot read {cert_path}: {e}")))?;
    let cert = Certificate::from_json(&text).map_err(|e| Failure::input(e.to_string()))?;
    let mut rng = RandomSource::new(random.seed);
    match verify_certificate(&cert, &g, &mut rng, random.trials) {
        Ok(()) => {
            println!("CERTIFICATE VALID");
            Ok(0)
        }
        Err(e) => {
            println!("CERTIFICATE INVALID: {e}");
            Ok(1)
        }
    }
}

fn cmd_gen(spec: &str, require_4c: bool) -> Result<u8, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<u64, Failure> {
        s.parse()
            .map_err(|e| Failure::input(format!("bad number {s:?}: {e}")))
    };
    let t = match parts.as_slice() {
        ["octahedron"] => generate::octahedron(),
        ["icosahedron"] => generate::icosahedron(),
        ["doublewheel", k] => {
            let k = parse(k)? as usize;
            if k < 3 {
                return Err(Failure::input("doublewheel needs k >= 3"));
            }
            generate::double_wheel(k)
        }
        ["stacked", n] => {
            let n = parse(n)? as usize;
            if n < 4 {
                return Err(Failure::input("stacked needs n >= 4"));
            }
            generate::stacked(n)
        }
        ["flipwalk", n, steps, seed] => {
            let n = parse(n)? as usize;
            generate::flip_walk(n, parse(steps)? as usize, parse(seed)?, require_4c)
                .map_err(|e| Failure::input(e.to_string()))?
        }
        _ => {
            return Err(Failure::input(format!(
                "unknown generator {spec:?}; use octahedron | icosahedron | doublewheel:k | stacked:n | flipwalk:n:steps:seed"
            )))
        }
    };
    if require_4c && !t.is_four_connected() {
        println!("NOT 4-CONNECTED");
        return Ok(1);
    }
    println!("{}", TriangulationFile::from_triangulation(&t).to_json());
    Ok(0)
}

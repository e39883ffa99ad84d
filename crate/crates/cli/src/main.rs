//! `ncquad`: check, certify and explore noncommutative quadrics from the
//! command line.
//!
//! Exit codes: 0 success, 1 mathematical failure (the report names the
//! stage), 2 invalid input or flags.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncquad_core::blowup::{coh_p1, coh_p1xp2, coh_p2, CohTable};
use ncquad_core::certify::sweep_type_a;
use ncquad_core::quintuple::{relations, truncated_dims};
use ncquad_core::square::{block_quiver, gram_base_change, linear_quiver, mutate_linear_to_block, square_from_quintuple};
use ncquad_core::{full_pipeline, is_geometric, Convention, Error, Quintuple, QuintupleFile, Verdict};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ncquad", version, about = "Exact certificates for noncommutative quadrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometricity, relations and Hilbert dimensions of a quintuple file.
    Check {
        path: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the full pipeline and write a certificate.
    Certify {
        path: PathBuf,
        /// How the second line is read off the square (default: $NCQ_DEFAULT_CONVENTION, else ruling).
        #[arg(long)]
        convention: Option<Convention>,
        /// Write the certificate JSON here (`-` for stdout).
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Certify random members of a family and count verdicts by stage.
    Sweep {
        #[arg(long, value_enum, default_value_t = FamilyArg::TypeA)]
        family: FamilyArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound on numerators and denominators of the parameters.
        #[arg(long, default_value_t = 20)]
        height: i64,
        #[arg(long)]
        convention: Option<Convention>,
        #[arg(long)]
        json: bool,
    },
    /// Line-bundle cohomology on P^1, P^2 or P^1 x P^2.
    Cohomology {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
        #[arg(short, allow_negative_numbers = true)]
        n: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Linear and block quiver algebras of a quintuple.
    Quiver {
        path: PathBuf,
        #[arg(long)]
        convention: Option<Convention>,
        #[arg(long)]
        json: bool,
    },
    /// Mutate the linear collection and compare with the block algebra.
    Mutate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    TypeA,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    P1,
    P2,
    P1xp2,
}

/// Why a command stopped.
enum Failure {
    Math(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &Path) -> Result<Quintuple, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    let file = QuintupleFile::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    file.to_quintuple().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_check(path: &Path, as_json: bool) -> Outcome {
    let q = read_input(path)?;
    let geo = is_geometric(&q);
    let rel = relations(&q);
    let dims = truncated_dims(&q);
    let failure = geo.first_failure().cloned();
    let ok = failure.is_none() && rel.is_valid() && dims.all_match();
    let witness = failure.as_ref().and_then(|f| f.witness.as_ref()).map(|w| {
        json!({
            "slot": failure.as_ref().map(|f| f.slot),
            "field": w.field.tag(),
            "phi": [w.phi[0].to_string(), w.phi[1].to_string()],
            "chi": [w.chi[0].to_string(), w.chi[1].to_string()],
        })
    });
    let (r0, r1, inter) = rel.dims();
    if as_json {
        print_json(&json!({
            "geometric": geo.is_geometric(),
            "witness": witness,
            "relations": { "dim_r0": r0, "dim_r1": r1, "dim_intersection": inter, "valid": rel.is_valid() },
            "hilbert_dims": dims.cells,
            "hilbert_dims_match": dims.all_match(),
            "ok": ok,
        }));
    } else {
        println!("field        {}", q.field().tag());
        for p in &geo.pairs {
            println!("slots {}{}     kernel {} {}", p.slot, (p.slot + 1) % 4, p.kernel_dim, if p.passes { "ok" } else { "FAIL" });
        }
        if let Some(w) = failure.as_ref().and_then(|f| f.witness.as_ref()) {
            println!("witness      φ = ({} : {}), χ = ({} : {}) over {}", w.phi[0], w.phi[1], w.chi[0], w.chi[1], w.field);
        }
        println!("relations    dim R0 = {r0}, dim R1 = {r1}, intersection {inter}");
        println!("hilbert      {}", if dims.all_match() { "all truncated dimensions match" } else { "MISMATCH" });
        for m in dims.mismatches() {
            println!("             A_{{{},{}}} = {} (expected {})", m.i, m.j, m.computed, m.expected);
        }
    }
    if ok {
        Ok(())
    } else if failure.is_some() {
        Err(Failure::Math("not geometric".into()))
    } else {
        Err(Failure::Math("relation data or Hilbert dimensions are off".into()))
    }
}

fn convention(explicit: Option<Convention>) -> Result<Convention, Failure> {
    Convention::resolve(explicit).map_err(Failure::from)
}

fn cmd_certify(path: &Path, conv: Option<Convention>, out: Option<&Path>) -> Outcome {
    let q = read_input(path)?;
    let conv = convention(conv)?;
    let cert = full_pipeline(&q, conv);
    let text = cert.to_string_pretty();
    match out {
        Some(p) if p.as_os_str() == "-" => print!("{text}"),
        Some(p) => fs::write(p, &text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => {}
    }
    let to_stdout = out.is_some_and(|p| p.as_os_str() == "-");
    match &cert.verdict {
        Verdict::Certified => {
            if !to_stdout {
                println!("Certified ({} convention, digest {})", conv, cert.input_digest);
            }
            Ok(())
        }
        Verdict::Degenerate { stage, reason } => {
            if !to_stdout {
                println!("Degenerate at stage {stage}: {reason}");
            }
            Err(Failure::Math(format!("stage {stage}")))
        }
    }
}

fn cmd_sweep(samples: usize, seed: u64, height: i64, conv: Option<Convention>, as_json: bool) -> Outcome {
    let conv = convention(conv)?;
    let report = sweep_type_a(samples, seed, height, conv)?;
    if as_json {
        print_json(&report.to_json());
    } else {
        println!("family       type-a, height {height}, seed {seed}, {conv} convention");
        println!("samples      {}", report.samples);
        println!("certified    {} ({:.2})", report.certified, report.certified_fraction());
        println!("excluded     {}", report.excluded);
        for (stage, n) in &report.by_stage {
            println!("degenerate   {stage}: {n}");
        }
    }
    Ok(())
}

fn cmd_cohomology(space: Space, m: i64, n: Option<i64>, as_json: bool) -> Outcome {
    let (label, table): (String, CohTable) = match (space, n) {
        (Space::P1, None) => (format!("P1, O({m})"), coh_p1(m)),
        (Space::P2, None) => (format!("P2, O({m})"), coh_p2(m)),
        (Space::P1xp2, Some(n)) => (format!("P1xP2, O({m},{n})"), coh_p1xp2(m, n)),
        (Space::P1xp2, None) => return Err(Failure::Input("P1xP2 needs both -m and -n".into())),
        (_, Some(_)) => return Err(Failure::Input("-n only applies to --space p1xp2".into())),
    };
    if as_json {
        print_json(&json!({ "space": label, "dims": table.dims, "euler": table.euler() }));
    } else {
        println!("{label}");
        for (k, d) in table.dims.iter().enumerate() {
            println!("  h^{k} = {d}");
        }
        println!("  chi = {}", table.euler());
    }
    Ok(())
}

fn quiver_summary(q: &ncquad_core::square::QuiverAlgebra) -> Value {
    json!({
        "vertices": q.vertices,
        "arrows": q.arrow_count(),
        "relations": q.relation_dim(),
        "total": q.total_dim(),
        "gram": q.gram,
        "pattern": q.pattern,
    })
}

fn cmd_quiver(path: &Path, conv: Option<Convention>, as_json: bool) -> Outcome {
    let q = read_input(path)?;
    let conv = convention(conv)?;
    let linear = linear_quiver(&q).map_err(|e| Failure::Math(format!("linear quiver: {e}")))?;
    let square = square_from_quintuple(&q, conv);
    let block = square.square().map(block_quiver);
    if as_json {
        print_json(&json!({
            "linear": quiver_summary(&linear),
            "block": block.as_ref().map(quiver_summary),
            "determinant": square.det().to_string(),
        }));
    } else {
        println!("linear       total {}, {} relations", linear.total_dim(), linear.relation_dim());
        println!("linear gram\n{}", linear.gram);
        println!("determinant  {}", square.det());
        if let Some(b) = &block {
            println!(
                "block        vertices {}, arrows {}, relations {}, total {}",
                b.vertex_count(),
                b.arrow_count(),
                b.relation_dim(),
                b.total_dim()
            );
            println!("block gram\n{}", b.gram);
        }
    }
    match block {
        Some(_) => Ok(()),
        None => Err(Failure::Math("the pairing ⟨−,w⟩ is singular: no block algebra".into())),
    }
}

fn cmd_mutate(path: &Path, as_json: bool) -> Outcome {
    let q = read_input(path)?;
    let report = mutate_linear_to_block(&q).map_err(|e| Failure::Math(format!("mutation: {e}")))?;
    let linear = linear_quiver(&q).map_err(|e| Failure::Math(format!("linear quiver: {e}")))?;
    let mutated = gram_base_change(&linear);
    if as_json {
        print_json(&json!({
            "linear_gram": linear.gram,
            "mutated_gram": mutated,
            "block_gram": ncquad_core::square::block_gram(),
            "gram_matches_block": report.gram_matches_block,
            "new_hom_dim": report.new_hom_dim,
            "orthogonality_rank": report.orthogonality_rank,
            "dims_match_block": report.dims_match_block,
            "compositions_surjective": report.compositions_surjective,
            "respects_v2_factor": report.respects_v2_factor,
            "ok": report.ok(),
        }));
    } else {
        println!("linear gram\n{}", linear.gram);
        println!("after mutation\n{mutated}");
        println!("matches block gram   {}", report.gram_matches_block);
        println!("new Hom dimension    {}", report.new_hom_dim);
        println!("orthogonality rank   {}", report.orthogonality_rank);
        println!("block dims match     {}", report.dims_match_block);
        println!("compositions onto    {}", report.compositions_surjective);
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Math("mutation does not reproduce the block algebra".into()))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { path, json } => cmd_check(&path, json),
        Command::Certify { path, convention, json } => cmd_certify(&path, convention, json.as_deref()),
        Command::Sweep { family: FamilyArg::TypeA, samples, seed, height, convention, json } => {
            cmd_sweep(samples, seed, height, convention, json)
        }
        Command::Cohomology { space, m, n, json } => cmd_cohomology(space, m, n, json),
        Command::Quiver { path, convention, json } => cmd_quiver(&path, convention, json),
        Command::Mutate { path, json } => cmd_mutate(&path, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|info| eprintln!("ncquad: internal error: {info}")));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Math(msg))) => {
            eprintln!("ncquad: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("ncquad: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}

//! Command-line front end: parse frame and presentation files, dispatch
//! to the library, emit reports and DOT diagrams.
//!
//! Exit codes: 0 success / property verified; 1 mathematical failure
//! (not a frame, law violation, iso-check mismatch); 2 usage or parse
//! error. Output is deterministic byte-for-byte for fixed inputs.

use clap::{Parser, Subcommand};
use localic_core::chain::{counterexample_report, naturality_sides, Staircase};
use localic_core::exponential::{
    exp_iso_check_on, sierpinski_exp, verify_bexp_universal, verify_universal,
};
use localic_core::frame::{check_frame, Frame};
use localic_core::hom::points;
use localic_core::presentation::{GenSemilattice, Presentation, DEFAULT_IDEAL_CAP};
use localic_core::tensor::TensorFrame;
use localic_core::text::{hasse_dot, parse_frame, parse_presentation, sniff, FileKind};
use localic_core::waybelow::{locally_compact, way_below};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const DEFAULT_GEN_CAP: usize = 16;

#[derive(Parser)]
#[command(
    name = "localic",
    version,
    about = "Desk-scale locale computations: frames, presentations, tensors, way-below, exponentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cap on materialized C-ideals (values above the default need
    /// --unsafe-caps)
    #[arg(long, global = true, default_value_t = DEFAULT_IDEAL_CAP)]
    max_ideals: usize,

    /// Cap on presentation generators (values above the default need
    /// --unsafe-caps)
    #[arg(long, global = true, default_value_t = DEFAULT_GEN_CAP)]
    max_generators: usize,

    /// Acknowledge caps beyond the defaults; the algorithms behind them
    /// are exponential
    #[arg(long, global = true)]
    unsafe_caps: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a frame or presentation file
    Validate { file: PathBuf },
    /// List the points of a frame
    Points { frame: PathBuf },
    /// Tensor two frames: element count, Hasse DOT, rectangle table
    Tensor { frame_a: PathBuf, frame_b: PathBuf },
    /// Print the way-below relation matrix of a frame
    Waybelow { frame: PathBuf },
    /// Report local compactness with a witness on failure
    LocallyCompact { frame: PathBuf },
    /// Build the Sierpinski exponential of a frame and check it against
    /// the upper-set oracle
    ExpSierpinski { frame: PathBuf },
    /// Verify the exponential universal property on test frames; with a
    /// second frame, verify the general relation scheme instead
    VerifyExponential {
        frame_a: PathBuf,
        frame_b: Option<PathBuf>,
        /// Test frames to quantify over
        #[arg(long, required = true, num_args = 1..)]
        tests: Vec<PathBuf>,
    },
    /// Reproduce the infinite-chain naturality counterexample
    Counterexample,
    /// Emit the Hasse diagram of a frame (or presented frame) as DOT
    Dot { file: PathBuf },
}

enum Failure {
    /// mathematical failure -> exit 1
    Math(String),
    /// usage or parse failure -> exit 2
    Usage(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        match self {
            Failure::Math(msg) => {
                println!("{msg}");
                ExitCode::from(1)
            }
            Failure::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_frame(path: &Path) -> Result<(String, Frame), Failure> {
    let text = read(path)?;
    let ff = parse_frame(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    match Frame::new(ff.poset) {
        Ok(f) => Ok((ff.name, f)),
        Err(defect) => Err(Failure::Math(format!(
            "frame {}: not a frame: {defect}",
            ff.name
        ))),
    }
}

struct Caps {
    ideals: usize,
    generators: usize,
}

fn caps(cli: &Cli) -> Result<Caps, Failure> {
    if (cli.max_ideals > DEFAULT_IDEAL_CAP || cli.max_generators > DEFAULT_GEN_CAP)
        && !cli.unsafe_caps
    {
        return Err(Failure::Usage(
            "raising --max-ideals or --max-generators beyond the defaults requires --unsafe-caps"
                .into(),
        ));
    }
    Ok(Caps {
        ideals: cli.max_ideals,
        generators: cli.max_generators,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let caps = caps(cli)?;
    match &cli.command {
        Command::Validate { file } => validate(file, &caps),
        Command::Points { frame } => cmd_points(frame),
        Command::Tensor { frame_a, frame_b } => cmd_tensor(frame_a, frame_b, &caps),
        Command::Waybelow { frame } => cmd_waybelow(frame),
        Command::LocallyCompact { frame } => cmd_locally_compact(frame),
        Command::ExpSierpinski { frame } => cmd_exp(frame, &caps),
        Command::VerifyExponential {
            frame_a,
            frame_b,
            tests,
        } => cmd_verify(frame_a, frame_b.as_deref(), tests, &caps),
        Command::Counterexample => cmd_counterexample(),
        Command::Dot { file } => cmd_dot(file, &caps),
    }
}

fn load_presentation(text: &str, path: &Path, caps: &Caps) -> Result<Presentation, Failure> {
    let pf =
        parse_presentation(text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if pf.gens.len() > caps.generators {
        return Err(Failure::Usage(format!(
            "presentation has {} generators, cap is {}",
            pf.gens.len(),
            caps.generators
        )));
    }
    let sl = GenSemilattice::new(pf.gens, pf.meet)
        .map_err(|e| Failure::Math(format!("not a meet-semilattice: {e}")))?;
    Ok(Presentation::new(sl, pf.instances))
}

fn validate(path: &Path, caps: &Caps) -> Result<(), Failure> {
    let text = read(path)?;
    match sniff(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))? {
        FileKind::Frame => {
            let ff = parse_frame(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let report = check_frame(&ff.poset);
            match report.defect {
                None => {
                    println!("frame {}: valid ({} elements)", ff.name, ff.poset.len());
                    println!("RESULT valid=yes elements={}", ff.poset.len());
                    Ok(())
                }
                Some(d) => Err(Failure::Math(format!(
                    "frame {}: not a frame: {d}\nRESULT valid=no",
                    ff.name
                ))),
            }
        }
        FileKind::Presentation => {
            let pres = load_presentation(&text, path, caps)?;
            println!(
                "presentation: {} generators, {} coverage instances after stabilization",
                pres.semilattice().len(),
                pres.instances().len()
            );
            println!("RESULT valid=yes generators={}", pres.semilattice().len());
            Ok(())
        }
    }
}

fn cmd_points(path: &Path) -> Result<(), Failure> {
    let (name, f) = load_frame(path)?;
    let pts = points(&f);
    println!("frame {name}: {} points", pts.len());
    for (i, p) in pts.iter().enumerate() {
        let tops: Vec<&str> = f
            .elems()
            .filter(|&u| p.apply(u) == p.target().top())
            .map(|u| f.id(u))
            .collect();
        println!("point p{i}: top on {{{}}}", tops.join(", "));
    }
    println!("RESULT points={}", pts.len());
    Ok(())
}

fn cmd_tensor(path_a: &Path, path_b: &Path, caps: &Caps) -> Result<(), Failure> {
    let (name_a, fa) = load_frame(path_a)?;
    let (name_b, fb) = load_frame(path_b)?;
    if fa.len() * fb.len() > caps.generators * caps.generators {
        return Err(Failure::Usage(format!(
            "tensor grid {}x{} exceeds the generator cap squared",
            fa.len(),
            fb.len()
        )));
    }
    let t = TensorFrame::new(&fa, &fb, caps.ideals)
        .map_err(|e| Failure::Math(format!("tensor: {e}")))?;
    println!("tensor {name_a} * {name_b}: {} elements", t.frame().len());
    print!("{}", hasse_dot(&format!("{name_a}_x_{name_b}"), t.frame()));
    println!("rectangles:");
    for x in fa.elems() {
        for y in fb.elems() {
            println!(
                "rect {} {} -> {}",
                fa.id(x),
                fb.id(y),
                t.frame().id(t.rect(x, y))
            );
        }
    }
    println!("RESULT elements={}", t.frame().len());
    Ok(())
}

fn cmd_waybelow(path: &Path) -> Result<(), Failure> {
    let (name, f) = load_frame(path)?;
    println!("way-below on {name} (rows a, columns b, 1 = a << b):");
    let header: Vec<&str> = f.elems().map(|x| f.id(x)).collect();
    println!("      {}", header.join(" "));
    for a in f.elems() {
        let row: Vec<String> = f
            .elems()
            .map(|b| {
                let w = f.id(b).len();
                format!("{:>w$}", u8::from(way_below(&f, a, b)))
            })
            .collect();
        println!("{:>5} {}", f.id(a), row.join(" "));
    }
    Ok(())
}

fn cmd_locally_compact(path: &Path) -> Result<(), Failure> {
    let (name, f) = load_frame(path)?;
    let lc = locally_compact(&f);
    match lc.witness {
        None => {
            println!("frame {name}: locally compact");
            println!("RESULT locally_compact=yes");
        }
        Some(w) => {
            println!("frame {name}: not locally compact, witness {}", f.id(w));
            println!("RESULT locally_compact=no witness={}", f.id(w));
        }
    }
    Ok(())
}

fn cmd_exp(path: &Path, caps: &Caps) -> Result<(), Failure> {
    let (name, f) = load_frame(path)?;
    let exp =
        sierpinski_exp(&f, caps.ideals).map_err(|e| Failure::Math(format!("exponential: {e}")))?;
    println!(
        "sierpinski exponential of {name}: {} elements",
        exp.frame().len()
    );
    print!("{}", hasse_dot(&format!("exp_{name}"), exp.frame()));
    match exp_iso_check_on(&exp) {
        Ok(_) => {
            println!("upper-set oracle: isomorphic");
            println!("RESULT elements={} iso=ok", exp.frame().len());
            Ok(())
        }
        Err(e) => Err(Failure::Math(format!(
            "upper-set oracle mismatch: {e}\nRESULT elements={} iso=failed",
            exp.frame().len()
        ))),
    }
}

fn cmd_verify(
    path_a: &Path,
    path_b: Option<&Path>,
    tests: &[PathBuf],
    caps: &Caps,
) -> Result<(), Failure> {
    let (name_a, fa) = load_frame(path_a)?;
    let mut zs = Vec::new();
    let mut z_names = Vec::new();
    for t in tests {
        let (n, f) = load_frame(t)?;
        z_names.push(n);
        zs.push(f);
    }
    match path_b {
        None => {
            let report = verify_universal(&fa, &zs, caps.ideals)
                .map_err(|e| Failure::Math(format!("universal property failed: {e}")))?;
            println!("exponential universal property for {name_a}:");
            for (zr, zn) in report.per_z.iter().zip(&z_names) {
                println!(
                    "test {zn}: {} tensor elements <-> {} homs",
                    zr.tensor_elements, zr.hom_count
                );
                println!(
                    "RESULT z={zn} tensor={} homs={}",
                    zr.tensor_elements, zr.hom_count
                );
            }
            println!("RESULT naturality=ok squares={}", report.squares_checked);
            Ok(())
        }
        Some(pb) => {
            let (name_b, fb) = load_frame(pb)?;
            let report = verify_bexp_universal(&fa, &fb, &zs, caps.ideals)
                .map_err(|e| Failure::Math(format!("relation-scheme check failed: {e}")))?;
            println!("general exponential relations for {name_b}^{name_a}:");
            for (zr, zn) in report.per_z.iter().zip(&z_names) {
                println!(
                    "test {zn}: {} valid assignments <-> {} homs",
                    zr.assignments, zr.homs
                );
                println!(
                    "RESULT z={zn} assignments={} homs={}",
                    zr.assignments, zr.homs
                );
            }
            println!("RESULT bijection=ok");
            Ok(())
        }
    }
}

fn cmd_counterexample() -> Result<(), Failure> {
    let r = counterexample_report();
    println!("naturality of the coefficient operator under the point inclusion:");
    println!("  u = union of the rectangles y_n (x) x_n under the decay curve");
    println!(
        "  coeff at top after pushforward:  {}",
        r.coeff_after_pushforward
    );
    println!(
        "  pushforward of coeff at top:     {}",
        r.pushforward_of_coeff
    );
    println!("  equal: {}", r.equal);
    println!();
    println!("staircase (rows y_k, columns x_n, # = rectangle inside u):");
    let u = Staircase::exp_counterexample();
    for k in 0..6 {
        let row: String = (0..8)
            .map(|n| {
                if u.member(
                    localic_core::chain::YElem::Y(k),
                    localic_core::chain::ChainElem::Fin(n),
                ) {
                    '#'
                } else {
                    '.'
                }
            })
            .collect();
        println!("  y{k} |{row}...");
    }
    println!("      x0 ->");
    println!();
    let trunc = naturality_sides(&Staircase::truncated_counterexample(4));
    println!(
        "finite truncation at 4 steps: both sides {}, equal: {}",
        trunc.pushforward_of_coeff, trunc.equal
    );
    println!(
        "RESULT coeff_after_pushforward={} pushforward_of_coeff={} equal={}",
        r.coeff_after_pushforward, r.pushforward_of_coeff, r.equal
    );
    Ok(())
}

fn cmd_dot(path: &Path, caps: &Caps) -> Result<(), Failure> {
    let text = read(path)?;
    match sniff(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))? {
        FileKind::Frame => {
            let ff = parse_frame(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let f = Frame::new(ff.poset)
                .map_err(|d| Failure::Math(format!("frame {}: not a frame: {d}", ff.name)))?;
            print!("{}", hasse_dot(&ff.name, &f));
            Ok(())
        }
        FileKind::Presentation => {
            let pres = load_presentation(&text, path, caps)?;
            let pf = pres
                .presented_frame(caps.ideals)
                .map_err(|e| Failure::Math(format!("presented frame: {e}")))?;
            print!("{}", hasse_dot("presented", pf.frame()));
            Ok(())
        }
    }
}

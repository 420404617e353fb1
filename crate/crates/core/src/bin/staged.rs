use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use staged_core::constructions::{self, simulation::TileSystem};
use staged_core::dsl::render::{render_shape, render_supertile, Format};
use staged_core::dsl::{parse_shape, parse_system, serialize_system, ParseError};
use staged_core::engine::ClosureBudget;
use staged_core::staged::{execute, metrics, ExecuteError, Execution, StagedSystem};
use staged_core::verify::{is_fully_connected, is_planar_system, shape_equals, Shape};

#[derive(Parser)]
#[command(name = "staged", version, about = "Staged two-handed tile self-assembly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Line,
    LinePow2,
    SquareJigsaw,
    SpanningTree,
    Scale2,
    Simulation,
    Monotone,
    Counter,
    CrazyString,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Connectivity {
    Full,
    Partial,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(clap::Args)]
struct Budget {
    /// Largest supertile (in cells) the engine will build.
    #[arg(long, default_value_t = ClosureBudget::default().max_supertile_size)]
    budget_size: usize,
    /// Most distinct supertiles one bin may produce.
    #[arg(long, default_value_t = ClosureBudget::default().max_distinct_supertiles)]
    budget_count: usize,
}

impl Budget {
    fn get(&self) -> ClosureBudget {
        ClosureBudget {
            max_supertile_size: self.budget_size,
            max_distinct_supertiles: self.budget_count,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the DSL text of a construction.
    Gen {
        construction: Construction,
        /// Line length or square side.
        #[arg(long)]
        n: Option<u64>,
        /// Exponent for line-pow2 and counter.
        #[arg(long)]
        k: Option<u32>,
        /// Shape file for spanning-tree, scale2 and monotone.
        #[arg(long)]
        shape: Option<PathBuf>,
        /// One-stage system (DSL) to simulate.
        #[arg(long)]
        system: Option<PathBuf>,
        /// Bit string for crazy-string.
        #[arg(long)]
        bits: Option<String>,
        /// Bin budget for crazy-string.
        #[arg(long, default_value_t = 4)]
        bins: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Execute a system and print its terminal shapes.
    Run {
        /// System file, or `-` for standard input.
        file: PathBuf,
        #[command(flatten)]
        budget: Budget,
        /// Write the witness attachment trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check that a system uniquely assembles a target shape.
    Verify {
        file: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 1)]
        scale: i32,
        #[arg(long)]
        connectivity: Option<Connectivity>,
        #[arg(long)]
        planar: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Print glue, tile, bin, stage and temperature counts.
    Metrics { file: PathBuf },
    /// Draw a shape file, or the terminal supertiles of a system.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
        #[command(flatten)]
        budget: Budget,
    },
}

/// A failure and the exit status it maps to.
enum Failure {
    Parse(ParseError),
    Semantic(String),
    Budget(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(e) if e.is_syntax() => 1,
            Failure::Parse(_) | Failure::Semantic(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(e) => e.to_string(),
            Failure::Semantic(m) | Failure::Budget(m) | Failure::Verification(m) => m.clone(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let result = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    result.map_err(|e| Failure::Parse(io_error(path, e)))?;
    Ok(text)
}

fn io_error(path: &Path, e: std::io::Error) -> ParseError {
    ParseError(vec![staged_core::dsl::Diagnostic {
        kind: staged_core::dsl::DiagnosticKind::Syntax,
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    }])
}

fn load(path: &Path) -> Result<StagedSystem, Failure> {
    parse_system(&read(path)?).map_err(Failure::Parse)
}

fn load_shape(path: &Path) -> Result<Shape, Failure> {
    parse_shape(&read(path)?).map_err(Failure::Parse)
}

fn run(sys: &StagedSystem, budget: ClosureBudget) -> Result<Execution, Failure> {
    let ex = execute(sys, budget).map_err(|e| match e {
        ExecuteError::Invalid(_) => Failure::Semantic(e.to_string()),
        ExecuteError::Aborted { .. } => Failure::Budget(e.to_string()),
    })?;
    if !ex.output.complete {
        let why = ex.output.exceeded.map_or("incomplete".to_string(), |b| b.to_string());
        return Err(Failure::Budget(format!("output bin did not close: {why}")));
    }
    Ok(ex)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Semantic(format!("this construction needs --{flag}")))
}

fn generate(c: Construction, args: &GenArgs) -> Result<StagedSystem, Failure> {
    let bad = |e: constructions::ConstructionError| Failure::Semantic(e.to_string());
    let shape = || load_shape(need(args.shape.as_deref(), "shape")?);
    Ok(match c {
        Construction::Line => constructions::gen_line(need(args.n, "n")?),
        Construction::LinePow2 => constructions::gen_line_pow2(need(args.k, "k")?),
        Construction::SquareJigsaw => {
            let n = u32::try_from(need(args.n, "n")?).map_err(|_| Failure::Semantic("--n is too large".into()))?;
            constructions::gen_square_jigsaw(n).map_err(bad)?
        }
        Construction::SpanningTree => constructions::gen_spanning_tree(&shape()?),
        Construction::Scale2 => constructions::gen_scale2(&shape()?).map_err(bad)?,
        Construction::Monotone => constructions::gen_monotone(&shape()?).map_err(bad)?,
        Construction::Simulation => {
            let t = load(need(args.system.as_deref(), "system")?)?;
            let t = TileSystem { tiles: t.tiles, temperature: t.temperature };
            constructions::gen_simulation(&t).map_err(bad)?
        }
        Construction::Counter => constructions::gen_counter(need(args.k, "k")?).map_err(bad)?,
        Construction::CrazyString => {
            constructions::gen_crazy_string(need(args.bits.as_deref(), "bits")?, args.bins).map_err(bad)?
        }
    })
}

struct GenArgs {
    n: Option<u64>,
    k: Option<u32>,
    shape: Option<PathBuf>,
    system: Option<PathBuf>,
    bits: Option<String>,
    bins: usize,
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| Failure::Semantic(format!("cannot write {}: {e}", p.display())))
        }
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main_inner(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { construction, n, k, shape, system, bits, bins, output } => {
            let args = GenArgs { n, k, shape, system, bits, bins };
            let sys = generate(construction, &args)?;
            write_out(output.as_deref(), &serialize_system(&sys))
        }
        Command::Run { file, budget, trace } => {
            let sys = load(&file)?;
            let ex = run(&sys, budget.get())?;
            for (i, t) in ex.output.terminal.iter().enumerate() {
                let shape = Shape::of_supertile(t);
                let (w, h) = shape.dims();
                println!("terminal {}: {w}x{h}, {} cells", i + 1, shape.len());
                print!("{}", render_shape(&shape, Format::Ascii));
            }
            println!("unique={} complete={}", ex.output.unique(), ex.output.complete);
            if let Some(path) = trace {
                let mut text = String::new();
                for (i, events) in ex.witness_trace(&sys).iter().enumerate() {
                    text.push_str(&format!("terminal {}\n", i + 1));
                    for e in events {
                        let o = e.placement.offset;
                        text.push_str(&format!(
                            "  {} + {} cells at ({}, {}) -> {} cells\n",
                            e.left.size(),
                            e.right.size(),
                            o.x,
                            o.y,
                            e.result.size()
                        ));
                    }
                }
                write_out(Some(&path), &text)?;
            }
            Ok(())
        }
        Command::Verify { file, target, scale, connectivity, planar, budget } => {
            let sys = load(&file)?;
            let target = load_shape(&target)?;
            let ex = run(&sys, budget.get())?;
            let mut failed = Vec::new();
            if !ex.output.unique() {
                failed.push(format!("{} terminal supertiles, expected one", ex.output.terminal.len()));
            } else {
                let t = &ex.output.terminal[0];
                if !shape_equals(&target, &Shape::of_supertile(t), scale) {
                    failed.push(format!("terminal is not the target at scale {scale}"));
                }
                match connectivity {
                    Some(Connectivity::Full) if !is_fully_connected(t, &sys.tiles) => {
                        failed.push("terminal is not fully connected".into())
                    }
                    Some(Connectivity::Partial) if is_fully_connected(t, &sys.tiles) => {
                        failed.push("terminal is fully connected".into())
                    }
                    _ => {}
                }
                if planar && !is_planar_system(&ex.witness_trace(&sys)[0]) {
                    failed.push("witness assembly is not planar".into());
                }
            }
            if failed.is_empty() {
                println!("ok");
                Ok(())
            } else {
                Err(Failure::Verification(failed.join("\n")))
            }
        }
        Command::Metrics { file } => {
            println!("{}", metrics(&load(&file)?));
            Ok(())
        }
        Command::Render { file, format, budget } => {
            let format = match format {
                RenderFormat::Ascii => Format::Ascii,
                RenderFormat::Svg => Format::Svg,
            };
            let text = read(&file)?;
            if let Ok(shape) = parse_shape(&text) {
                print!("{}", render_shape(&shape, format));
                return Ok(());
            }
            let sys = parse_system(&text).map_err(Failure::Parse)?;
            let ex = run(&sys, budget.get())?;
            for t in &ex.output.terminal {
                print!("{}", render_supertile(t, &sys.tiles, format));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("staged: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Band-generator braids, Rampichini diagrams, cacti, ladder diagrams and
/// polynomial loops. Every command prints one JSON report on stdout.
///
/// Exit codes: 0 analysis completed (including negative verdicts),
/// 2 input or parse error, 3 search bound reached, 4 numerical failure.
#[derive(Parser, Debug)]
#[command(name = "braidbook", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convert between band-generator words (`n=4; 1:3 -2:4`) and Artin
    /// words (`n=4; 1 -2 3`).
    Convert {
        word: String,
        /// Treat the input as an Artin word; by default words containing `:`
        /// are band words and all others Artin words.
        #[arg(long)]
        artin: bool,
    },
    /// Closure permutation, component count and banded-surface statistics of
    /// a band word.
    Analyze { word: String },
    /// Cacti: transposition factorizations of the n-cycle (1 n … 2).
    #[command(subcommand)]
    Cacti(CactiCommand),
    /// Search for a Rampichini diagram (move script) showing that the closure
    /// of a band word is braided relative to the second open book.
    Search {
        word: String,
        /// Search every cyclic conjugate; FOUND if any of them is.
        #[arg(long)]
        all_conjugates: bool,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        render: Render,
    },
    /// Check a move script (Rampichini diagram as a sequence of band words)
    /// and validate its synthesized diagram. Reads JSON from a file or `-`.
    ValidateScript {
        script: PathBuf,
        #[command(flatten)]
        render: Render,
    },
    /// Ladder diagrams: overpass and underpass certificates for a braid axis.
    #[command(subcommand)]
    Ladder(LadderCommand),
    /// P-fibered braids: loops of polynomials, critical values and monodromy.
    #[command(subcommand)]
    Pfib(PfibCommand),
    /// Riemann–Hurwitz count for a simple branched cover of the disk along a
    /// braid with b strands.
    Rh {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'b')]
        b: usize,
    },
    /// Write an SVG picture of a Rampichini diagram, ladder diagram or
    /// critical value trajectories.
    #[command(subcommand)]
    Render(RenderCommand),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Bounds {
    /// Stop after visiting this many states and report EXHAUSTED.
    #[arg(long)]
    pub max_states: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Render {
    /// Also write an SVG picture to this path.
    #[arg(long, value_name = "OUT.svg")]
    pub render: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CactiCommand {
    /// All cacti of degree n in lexicographic order.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        /// Print only the number of cacti.
        #[arg(long)]
        count_only: bool,
    },
    /// Apply a Hurwitz move or a boundary rotation to a cactus given as
    /// `n=4; (1,2) (3,4) (2,4)` or JSON.
    Move {
        cactus: String,
        /// 1-based position of the Hurwitz move.
        #[arg(long, conflicts_with = "rotate", requires = "dir")]
        hurwitz: Option<usize>,
        #[arg(long, value_enum)]
        dir: Option<HurwitzArg>,
        #[arg(long, value_enum)]
        rotate: Option<RotateArg>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum HurwitzArg {
    Under,
    Over,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum RotateArg {
    Forward,
    Backward,
}

#[derive(Subcommand, Debug)]
pub enum LadderCommand {
    /// Search the ladder diagram of a band word for an overpass and an
    /// underpass, certifying a braid axis transverse to the pages.
    Passes {
        word: String,
        #[command(flatten)]
        render: Render,
    },
    /// Braid index 3 procedure: find a shifted, rotated or mirrored
    /// representative whose ladder diagram has passes.
    Braid3 {
        word: String,
        #[command(flatten)]
        render: Render,
    },
    /// Whether every a_{i,i+1} and a_{1,n} occurs in the word, which
    /// guarantees passes in the ladder diagram.
    Sufficient { word: String },
}

#[derive(Args, Debug, Clone)]
pub struct LoopInput {
    /// Loop JSON: `{"n":2,"m":256,"roots":[…]}` or `{"n":…,"coeffs":[…]}`.
    #[arg(required_unless_present = "builtin")]
    pub input: Option<PathBuf>,
    /// Use a built-in loop sampled at `--samples` points instead of a file.
    #[arg(long, value_enum, conflicts_with = "input")]
    pub builtin: Option<Builtin>,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Builtin {
    /// z² − e^{it}
    Square,
    /// z³ − 0.27 z + e^{it}
    Cubic,
    /// z² + e^{i sin t}, whose critical value turns back
    Reversing,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Tol {
    /// Smallest admissible |Δ arg v_j / Δt|.
    #[arg(long, default_value_t = 1e-6)]
    pub tol_rate: f64,
}

#[derive(Subcommand, Debug)]
pub enum PfibCommand {
    /// P-fibered certificate at the sampling resolution: every critical
    /// value winds about 0 with a rate of constant sign.
    Check {
        #[command(flatten)]
        input: LoopInput,
        #[command(flatten)]
        tol: Tol,
        #[command(flatten)]
        render: Render,
    },
    /// Artin word of the closed braid traced by the roots of the loop.
    Braid {
        #[command(flatten)]
        input: LoopInput,
    },
    /// Sheet monodromy of p(z) = w along a loop of values, or the cactus of
    /// p when no loop is given.
    Monodromy {
        /// Lower coefficients a_0 … a_{n−1} as `re,im` or `re`, space separated.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Circle `cre,cim,r` traversed counterclockwise from its rightmost point.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "path")]
        circle: Option<String>,
        /// JSON list of `[re, im]` vertices of a closed polyline.
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Lift the critical-value loop of a polynomial loop back through the
    /// covering by polynomials and compare with the original.
    Lift {
        #[command(flatten)]
        input: LoopInput,
        #[arg(long, value_enum, default_value = "subleading")]
        pin: PinArg,
    },
    /// Enumerate the polynomials with constant term 0 over a set of critical
    /// values (a fiber of the critical value covering).
    Fiber {
        /// Critical values as `re,im`, space separated.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long, default_value_t = 200)]
        attempts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum PinArg {
    Subleading,
    Constant,
}

#[derive(Subcommand, Debug)]
pub enum RenderCommand {
    /// Synthesized Rampichini diagram of a move script file.
    Diagram {
        script: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Ladder diagram of a band word, with passes when they exist.
    Ladder {
        word: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Critical value trajectories of a loop of polynomials.
    Critical {
        #[command(flatten)]
        input: LoopInput,
        #[arg(short, long)]
        out: PathBuf,
    },
}

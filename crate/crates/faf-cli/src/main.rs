use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use faf_cli::{
    cmd_gadget, cmd_solve, cmd_trace, cmd_tree, gadgets::build_gadget, parse_answer, read_apx, CliError, Format,
    Outcome, SolveConfig, Target, TraceConfig, TreeConfig,
};
use finitary_af::decide::Budgets;
use finitary_af::trees::TreeKind;
use finitary_af::SemanticsKind;

#[derive(Parser)]
#[command(name = "faf", version, about = "Solve argumentation frameworks, emit gadget truncations, trace anytime verdicts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate extensions of an APX file and decide a problem.
    Solve {
        file: String,
        #[arg(long, short)]
        semantics: SemanticsKind,
        /// exists, ne, uni, cred or skep; cred/skep need --arg
        #[arg(long, short)]
        problem: Option<String>,
        #[arg(long, short)]
        arg: Option<String>,
        #[arg(long, short, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the first N arguments of a gadget as APX.
    Gadget {
        /// fig1, stars, fig2, chain_w, unistb, tree_cf, attack_free or random
        id: String,
        /// stage set such as `{1,2}`, `all`, `ap(0,3)`, or `I=SET;*=SET` for fig2/unistb
        #[arg(long = "param", short = 'P')]
        param: Option<String>,
        #[arg(long, short = 'n')]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the verdict stream of an anytime decision process.
    Trace {
        /// APX file or gadget id
        target: String,
        #[arg(long = "param", short = 'P')]
        param: Option<String>,
        #[arg(long, short)]
        semantics: SemanticsKind,
        #[arg(long, short)]
        problem: String,
        #[arg(long, short)]
        arg: Option<String>,
        /// number of stages to run
        #[arg(long, default_value_t = 100)]
        stages: usize,
        #[arg(long, env = faf_cli::BUDGET_ENV, default_value_t = Budgets::default().nodes)]
        budget: usize,
        #[arg(long, short, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// accept, reject or unknown; reported in the summary line
        #[arg(long)]
        expect: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dump the tree T_{kind+D-E} up to a depth.
    Tree {
        /// APX file or gadget id
        target: String,
        #[arg(long = "param", short = 'P')]
        param: Option<String>,
        /// ad, stb, co or inf-na
        #[arg(long, short)]
        semantics: TreeKind,
        #[arg(long, short)]
        depth: usize,
        /// arguments the extensions must contain (D)
        #[arg(long, value_delimiter = ',')]
        with: Vec<String>,
        /// arguments the extensions must avoid (E)
        #[arg(long, value_delimiter = ',')]
        without: Vec<String>,
        /// label cap, required for inf-na
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, env = faf_cli::BUDGET_ENV, default_value_t = Budgets::default().nodes)]
        budget: usize,
        #[arg(long, short, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.cmd {
        Cmd::Solve { file, semantics, problem, arg, format } => {
            let doc = read_apx(&file)?;
            cmd_solve(&doc, &SolveConfig { semantics, problem: problem.as_deref(), arg: arg.as_deref(), format })
        }
        Cmd::Gadget { id, param, size, seed } => cmd_gadget(&build_gadget(&id, param.as_deref(), seed)?, size),
        Cmd::Trace { target, param, semantics, problem, arg, stages, budget, format, expect, seed } => {
            let t = Target::load(&target, param.as_deref(), seed)?;
            let expect = expect.as_deref().map(parse_answer).transpose()?;
            let cfg = TraceConfig { semantics, problem: &problem, arg: arg.as_deref(), stages, budget, format, expect };
            cmd_trace(&t, &cfg)
        }
        Cmd::Tree { target, param, semantics, depth, with, without, cap, budget, format, seed } => {
            let t = Target::load(&target, param.as_deref(), seed)?;
            let cfg = TreeConfig { kind: semantics, with: &with, without: &without, depth, budget, label_cap: cap, format };
            cmd_tree(&t, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors; bad usage is an input error
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

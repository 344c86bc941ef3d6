mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ellconf_core::{ModelId, Space, Suite};
use render::Format;

#[derive(Parser, Debug)]
#[command(name = "ellconf", version, about = "Cohomology of configuration spaces of points on an elliptic curve")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Directory for cached slices.
    #[arg(long, env = "ELLCONF_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    /// Permit n = 7 for commands that only touch UB or the named classes.
    #[arg(long, global = true)]
    allow_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BaseModel {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AnyModel {
    A,
    B,
    Ua,
    Ub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Conf,
    Uconf,
    M,
    Um,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Dims,
    Reps,
    Cohomology,
    Classes,
    Ring,
    Formality,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the basis of a slice.
    Basis {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value = "a")]
        model: BaseModel,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Cross-check the dimension against an independent count.
        #[arg(long)]
        oracle: bool,
    },
    /// Betti polynomial.
    Betti {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum)]
        space: SpaceArg,
    },
    /// Hodge polynomial, optionally with SL2 content.
    Hodge {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long)]
        grothendieck: bool,
    },
    /// Weight decomposition and irreducible multiplicities of a slice.
    Decompose {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value = "a")]
        model: AnyModel,
    },
    /// Marked partitions of a slice.
    Partitions {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// The named classes and their leading coefficients.
    Classes {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

impl BaseModel {
    fn id(self) -> ModelId {
        match self {
            BaseModel::A => ModelId::A,
            BaseModel::B => ModelId::B,
        }
    }
}

impl AnyModel {
    fn id(self) -> ModelId {
        match self {
            AnyModel::A => ModelId::A,
            AnyModel::B => ModelId::B,
            AnyModel::Ua => ModelId::UA,
            AnyModel::Ub => ModelId::UB,
        }
    }
}

impl SpaceArg {
    fn space(self) -> Space {
        match self {
            SpaceArg::Conf => Space::Conf,
            SpaceArg::Uconf => Space::UConf,
            SpaceArg::M => Space::M,
            SpaceArg::Um => Space::UM,
        }
    }
}

impl SuiteArg {
    fn suite(self) -> Suite {
        match self {
            SuiteArg::All => Suite::All,
            SuiteArg::Dims => Suite::Dims,
            SuiteArg::Reps => Suite::Reps,
            SuiteArg::Cohomology => Suite::Cohomology,
            SuiteArg::Classes => Suite::Classes,
            SuiteArg::Ring => Suite::Ring,
            SuiteArg::Formality => Suite::Formality,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let ctx = commands::Context {
        cache_dir: cli.cache_dir.clone(),
        allow_large: cli.allow_large,
    };
    let result = match cli.command {
        Command::Basis { n, model, p, q, oracle } => commands::basis(&ctx, n as usize, model.id(), p, q, oracle),
        Command::Betti { n, space } => commands::betti(&ctx, n as usize, space.space()),
        Command::Hodge { n, space, grothendieck } => commands::hodge(&ctx, n as usize, space.space(), grothendieck),
        Command::Decompose { n, p, q, model } => commands::decompose(&ctx, n as usize, model.id(), p, q),
        Command::Partitions { n, p, q } => commands::partitions(n as usize, p, q),
        Command::Classes { n } => commands::classes(&ctx, n as usize),
        Command::Verify { n, suite } => commands::verify(&ctx, n as usize, suite.suite()),
    };
    match result {
        Ok((output, passed)) => {
            print!("{}", output.render(cli.format));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

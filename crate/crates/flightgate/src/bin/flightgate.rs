use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use flightgate::load::{load_answers, load_kb, load_program, KbPaths, DEFAULT_KB};
use flightgate::query::run_query;
use flightgate::report::{compliance_text, query_text};
use flightgate::schema::CheckResponse;
use flightgate::{service, SystemClock};
use flightgate_core::{check_compliance, validate};

#[derive(Parser)]
#[command(name = "flightgate", version, about = "Model-aircraft safety compliance checks with explanations")]
struct Cli {
    /// Rule base (.lp)
    #[arg(long, global = true, env = "FLIGHTGATE_KB", default_value = DEFAULT_KB)]
    kb: PathBuf,
    /// Questionnaire JSON; defaults to questionnaire.json next to the rule base
    #[arg(long, global = true)]
    questionnaire: Option<PathBuf>,
    /// Rule texts JSON; defaults to ama_rules.json next to the rule base, if present
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a JSON answers file; exits 0 when compliant, 2 on violations
    Check {
        #[arg(long)]
        answers: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Query the rule base, e.g. `flightgate query --kb tweety.lp flies_tweety`
    Query {
        query: String,
        /// Maximum number of partial models to print
        #[arg(long, default_value_t = 1)]
        models: usize,
    },
    /// Report odd loops through negation in the rule base
    Validate,
    /// Start the REST service
    Serve {
        #[arg(long, env = "FLIGHTGATE_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let paths = KbPaths { kb: cli.kb, questionnaire: cli.questionnaire, rules: cli.rules };
    match cli.command {
        Command::Check { answers, format } => {
            let kb = load_kb(&paths)?;
            let answers = load_answers(&answers)?;
            let report = check_compliance(&answers, &kb, &SystemClock::default())?;
            match format {
                Format::Text => print!("{}", compliance_text(&report, &kb)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&CheckResponse::new(&report, &kb))?),
            }
            Ok(ExitCode::from(if report.compliant { 0 } else { 2 }))
        }
        Command::Query { query, models } => {
            let program = load_program(&paths.kb)?;
            let outcome = run_query(&program, None, &query, models)?;
            print!("{}", query_text(&outcome));
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate => {
            let program = load_program(&paths.kb)?;
            let report = validate(&program);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if report.is_ok() {
                println!("OK: {} rules, no odd loops", program.rules().len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("odd loops through negation involving: {}", report.odd_loop_atoms.join(", "));
                Ok(ExitCode::from(1))
            }
        }
        Command::Serve { port, host } => {
            tracing_subscriber::fmt()
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
                )
                .init();
            let kb = Arc::new(load_kb(&paths)?);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async move {
                let addr = SocketAddr::new(host, port);
                let listener =
                    tokio::net::TcpListener::bind(addr).await.map_err(|e| anyhow::anyhow!("binding {addr}: {e}"))?;
                tracing::info!("listening on http://{}", listener.local_addr()?);
                service::serve(listener, kb, async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await?;
                Ok(ExitCode::SUCCESS)
            })
        }
    }
}

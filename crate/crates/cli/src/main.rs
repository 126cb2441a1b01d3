use std::process::ExitCode;

use clap::Parser;
use patclass_cli::alloc::TrackingAllocator;
use patclass_cli::commands::{execute, Cli, EXIT_USAGE};

#[global_allocator]
static ALLOC: TrackingAllocator = TrackingAllocator;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(execute(cli) as u8)
}

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::Parser;
use wautom_cli::app::{run, Cli, Context};
use wautom_core::control::CancelToken;

fn main() {
    let cli = Cli::parse();
    let flag = Arc::new(AtomicBool::new(false));
    let handler_flag = flag.clone();
    // a second interrupt falls through to the default behaviour
    let _ = ctrlc::set_handler(move || {
        if handler_flag.swap(true, Ordering::SeqCst) {
            std::process::exit(130);
        }
    });
    let ctx = Context { interrupt: CancelToken::new().with_flag(flag) };
    let code = run(&cli, &ctx, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}

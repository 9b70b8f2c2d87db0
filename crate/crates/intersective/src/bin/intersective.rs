use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match intersective::cli::run(std::env::args_os(), &mut out) {
        Ok(code) => {
            let _ = out.flush();
            ExitCode::from(code as u8)
        }
        Err(e) => {
            if let Some(ce) = e.downcast_ref::<clap::Error>() {
                let _ = ce.print();
                let ok = matches!(ce.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
                return ExitCode::from(if ok { 0 } else { 64 });
            }
            if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

use std::process::ExitCode;

use clap::Parser;
use marshak::cli::{execute, Cli};
use marshak::table::Format;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = Format::from(cli.format);
    let dir = cli.out_dir();
    if let Err(e) = std::fs::create_dir_all(&dir) {
        eprintln!("error: cannot create {}: {e}", dir.display());
        return ExitCode::from(2);
    }
    for (stem, table) in &outcome.tables {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        if let Err(e) = table.write(&path, format) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
        println!("wrote {} ({} rows)", path.display(), table.rows.len());
    }
    for v in &outcome.verdicts {
        println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

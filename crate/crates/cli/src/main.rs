use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match gainprophet_cli::run(std::env::args_os()) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(output.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(err) if err.exit_code() == 0 => {
            print!("{}", err.message());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprint!("{}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

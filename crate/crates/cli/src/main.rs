use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match restart_lp_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { restart_lp_cli::exit::INPUT_ERROR } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(restart_lp_cli::run(cli));
}

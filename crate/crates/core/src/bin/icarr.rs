use clap::Parser;

fn main() {
    let cli = icarr::cli::Cli::parse();
    let (code, stdout, stderr) = icarr::cli::run(cli);
    print!("{stdout}");
    eprint!("{stderr}");
    std::process::exit(code);
}
